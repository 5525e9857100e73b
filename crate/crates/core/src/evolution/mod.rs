//! Mating selection and real-coded variation.

mod mating;
mod variation;

pub use mating::{
    assess_stagnation, choose_pool, ctaea_baseline_mating, subregion_fitness, tournament_select,
    MatingState, Pool, Stagnation, Utility,
};
pub use variation::{polynomial_mutation, polynomial_step, sbx_crossover, sbx_pair, VariationParams};
