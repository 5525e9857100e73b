//! Generational loop shared by the adaptive two-archive algorithm and the
//! baseline with the original restricted mating rule.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archives::{update_ca, update_da, CaBranch};
use crate::decomposition::{das_dennis_weights, IdealPoint, Lattice, WeightVectorSet};
use crate::error::{Error, Result};
use crate::evolution::{
    assess_stagnation, choose_pool, ctaea_baseline_mating, polynomial_mutation, sbx_crossover,
    subregion_fitness, tournament_select, MatingState, Pool, VariationParams,
};
use crate::metrics::igd;
use crate::problems::{make_problem, reference_front, ReferenceFront};
use crate::solution::{evaluate, Archive, ProblemSpec, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    /// Adaptive mating selection between CA and DA.
    #[serde(rename = "ctaea2")]
    Ctaea2,
    /// Original restricted mating driven by each archive's non-dominated share.
    #[serde(rename = "ctaea_baseline")]
    CtaeaBaseline,
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::Ctaea2 => "ctaea2",
            AlgorithmKind::CtaeaBaseline => "ctaea_baseline",
        })
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ctaea2" | "ctaea_ii" => Ok(AlgorithmKind::Ctaea2),
            "ctaea_baseline" | "ctaea" => Ok(AlgorithmKind::CtaeaBaseline),
            _ => Err(Error::config(format!("unknown algorithm {s}"))),
        }
    }
}

/// Stopping budget, checked at generation boundaries only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Generations(u64),
    /// Total evaluations including the initial population; the generation in
    /// progress always completes.
    Evaluations(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub algorithm: AlgorithmKind,
    /// Archive capacity N; also the population and weight-set size.
    pub population: usize,
    pub budget: Budget,
    pub seed: u64,
    /// `None` selects [`VariationParams::defaults_for`] the problem dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation: Option<VariationParams>,
}

impl RunConfig {
    pub fn new(problem: impl Into<String>, algorithm: AlgorithmKind, population: usize, generations: u64, seed: u64) -> Self {
        Self {
            problem: problem.into(),
            m: None,
            n: None,
            algorithm,
            population,
            budget: Budget::Generations(generations),
            seed,
            variation: None,
        }
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        make_problem(&self.problem, self.m, self.n)
    }
}

/// One line of the per-generation trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: u64,
    pub evaluations: u64,
    pub ideal: Vec<f64>,
    /// Adaptive mating diagnostics; absent for the baseline.
    pub rho_c: Option<f64>,
    pub rho_lc: Option<f64>,
    pub utility: Option<u8>,
    pub choice: Option<u8>,
    pub pool: Option<Pool>,
    pub ca_branch: CaBranch,
    pub ca_feasible: usize,
    pub da_feasible: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub problem: String,
    pub m: usize,
    pub n: usize,
    pub generations: u64,
    pub evaluations: u64,
    pub final_ca: Archive,
    pub final_da: Archive,
    pub trace: Vec<GenerationRecord>,
    /// IGD of the final CA's feasible members; `None` when no front is
    /// known or no member is feasible.
    pub igd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_resolution: Option<usize>,
    pub wall_clock_secs: f64,
}

impl RunRecord {
    /// Copy with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_wall_clock(&self) -> Self {
        Self {
            wall_clock_secs: 0.0,
            ..self.clone()
        }
    }
}

/// Weight vectors whose count equals `population`: the default lattice for
/// `m` if it fits, else any single- or two-layer lattice of that size.
pub fn weights_for_population(m: usize, population: usize) -> Result<WeightVectorSet> {
    let default = Lattice::default_for(m);
    let lattice = if default.size(m) == population {
        Some(default)
    } else {
        (1..=population)
            .map(Lattice::Single)
            .take_while(|l| l.size(m) <= population)
            .find(|l| l.size(m) == population)
            .or_else(|| {
                (1..=12)
                    .flat_map(|outer| (1..=outer).map(move |inner| Lattice::TwoLayer { outer, inner }))
                    .find(|l| l.size(m) == population)
            })
    };
    let lattice = lattice.ok_or_else(|| {
        Error::config(format!(
            "no simplex lattice with {population} weight vectors for m = {m}"
        ))
    })?;
    das_dennis_weights(m, lattice)
}

/// Builds the problem named in `config`, computes its reference front at
/// `resolution` and runs.
pub fn run(config: &RunConfig, resolution: usize) -> Result<RunRecord> {
    let problem = config.build_problem()?;
    let front = reference_front(&problem, resolution)?;
    run_with(&problem, config, Some(&front))
}

/// Runs `config` on an already built problem.
pub fn run_with(
    problem: &ProblemSpec,
    config: &RunConfig,
    front: Option<&ReferenceFront>,
) -> Result<RunRecord> {
    let started = Instant::now();
    let n_pop = config.population;
    if n_pop < 2 {
        return Err(Error::config("population must be at least 2"));
    }
    let weights = weights_for_population(problem.m(), n_pop)?;
    let variation = config
        .variation
        .unwrap_or_else(|| VariationParams::defaults_for(problem.n()));
    variation.validate()?;
    match config.budget {
        Budget::Evaluations(0) => return Err(Error::config("evaluation budget must be positive")),
        Budget::Evaluations(e) if e < n_pop as u64 => {
            return Err(Error::config("evaluation budget smaller than the population"))
        }
        _ => {}
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bounds = problem.bounds();

    let initial: Vec<Solution> = (0..n_pop)
        .map(|_| {
            let x: Vec<f64> = bounds
                .iter()
                .map(|&(lo, hi)| (lo + rng.gen::<f64>() * (hi - lo)).min(hi))
                .collect();
            evaluate(problem, &x)
        })
        .collect::<Result<_>>()?;
    let mut evaluations = n_pop as u64;
    let mut z = IdealPoint::from_objectives(initial.iter().map(|s| s.f.as_slice()))
        .expect("population is non-empty");
    let mut ca = Archive::full(initial.clone());
    let mut da = Archive::full(initial);
    let mut state = MatingState::new(ca.clone());
    let mut trace = Vec::new();
    let mut generation = 0u64;

    let more = |generation: u64, evaluations: u64| match config.budget {
        Budget::Generations(g) => generation < g,
        Budget::Evaluations(e) => evaluations < e,
    };

    while more(generation, evaluations) {
        generation += 1;
        let mut record = GenerationRecord {
            generation,
            evaluations: 0,
            ideal: Vec::new(),
            rho_c: None,
            rho_lc: None,
            utility: None,
            choice: None,
            pool: None,
            ca_branch: CaBranch::Exact,
            ca_feasible: 0,
            da_feasible: 0,
        };

        let mut parents: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(n_pop.div_ceil(2));
        match config.algorithm {
            AlgorithmKind::Ctaea2 => {
                let stagnation = assess_stagnation(&ca, &state.last_ca)?;
                let (pool, choice) = choose_pool(stagnation.utility, state.choice);
                state.utility = stagnation.utility;
                state.choice = choice;
                record.rho_c = Some(stagnation.rho_current);
                record.rho_lc = Some(stagnation.rho_last);
                record.utility = Some(stagnation.utility.marker());
                record.choice = Some(choice.marker());
                record.pool = Some(pool);
                let members = match pool {
                    Pool::Ca => ca.members(),
                    Pool::Da => da.members(),
                };
                let fitness = subregion_fitness(members, &weights, &z);
                for _ in 0..n_pop.div_ceil(2) {
                    let (p1, p2) = tournament_select(members, &fitness, &mut rng)?;
                    parents.push((p1.x.clone(), p2.x.clone()));
                }
            }
            AlgorithmKind::CtaeaBaseline => {
                let ca_fit = subregion_fitness(ca.members(), &weights, &z);
                let da_fit = subregion_fitness(da.members(), &weights, &z);
                for _ in 0..n_pop.div_ceil(2) {
                    let (p1, p2) =
                        ctaea_baseline_mating(ca.members(), &ca_fit, da.members(), &da_fit, &mut rng)?;
                    parents.push((p1.x.clone(), p2.x.clone()));
                }
            }
        }

        let mut offspring = Vec::with_capacity(n_pop + 1);
        for (p1, p2) in &parents {
            let (c1, c2) = sbx_crossover(p1, p2, &variation, bounds, &mut rng);
            offspring.push(polynomial_mutation(&c1, &variation, bounds, &mut rng));
            offspring.push(polynomial_mutation(&c2, &variation, bounds, &mut rng));
        }
        offspring.truncate(n_pop);
        let offspring: Vec<Solution> = offspring
            .iter()
            .map(|x| evaluate(problem, x))
            .collect::<Result<_>>()?;
        evaluations += offspring.len() as u64;
        for s in &offspring {
            z.observe(&s.f);
        }

        let ca_update = update_ca(&ca, &offspring, &weights, &z)?;
        da = update_da(&da, &offspring, &weights, &z)?;
        state.last_ca = std::mem::replace(&mut ca, ca_update.archive);

        record.evaluations = evaluations;
        record.ideal = z.0.clone();
        record.ca_branch = ca_update.trace.branch;
        record.ca_feasible = ca.feasible_count();
        record.da_feasible = da.feasible_count();
        log::debug!(
            "gen {generation}: branch {:?}, fills {}, pool {:?}, ca feasible {}",
            record.ca_branch,
            ca_update.trace.fills.len(),
            record.pool,
            record.ca_feasible
        );
        trace.push(record);
    }

    let igd = match front {
        Some(front) => igd(ca.members(), front)?,
        None => None,
    };
    Ok(RunRecord {
        config: config.clone(),
        problem: problem.name().to_string(),
        m: problem.m(),
        n: problem.n(),
        generations: generation,
        evaluations,
        final_ca: ca,
        final_da: da,
        trace,
        igd,
        reference_resolution: front.map(|f| f.resolution),
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}
