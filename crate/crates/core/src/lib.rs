//! Constrained multi-objective optimization with two co-evolving archives.
//!
//! A convergence archive (CA) pushes toward the feasible Pareto front while a
//! diversity archive (DA) ignores feasibility and keeps spread. Each
//! generation breeds from CA or DA depending on whether CA is still making
//! progress against its previous snapshot. The original two-archive mating
//! rule is available as a baseline, together with the CTP and DC-DTLZ
//! benchmark suites, IGD, the Wilcoxon rank-sum test and a batch harness.

pub mod algorithm;
pub mod archives;
pub mod decomposition;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod solution;

pub use algorithm::{run, run_with, AlgorithmKind, Budget, RunConfig, RunRecord};
pub use error::{Error, Result};
pub use solution::{evaluate, Archive, ProblemSpec, Solution};
