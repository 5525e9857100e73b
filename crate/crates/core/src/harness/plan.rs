use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{build_report, ComparisonReport};
use super::{write_atomic, write_json};
use crate::algorithm::{run_with, AlgorithmKind, Budget, RunConfig, RunRecord};
use crate::decomposition::Lattice;
use crate::error::{Error, Result};
use crate::evolution::VariationParams;
use crate::problems::{cached_reference_front, default_resolution, make_problem, reference_front};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Defaults to the size of the default weight lattice for the problem's m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<usize>,
}

impl ProblemEntry {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            m: None,
            n: None,
            population: None,
        }
    }
}

fn default_budget() -> Budget {
    Budget::Generations(500)
}

/// A batch of runs: every problem × algorithm × run index, with run `i`
/// seeded by `seed_base + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub problems: Vec<ProblemEntry>,
    pub algorithms: Vec<AlgorithmKind>,
    pub runs: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default = "default_budget")]
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ref_resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation: Option<VariationParams>,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("plan needs at least one run"));
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::config("plan needs at least one problem and one algorithm"));
        }
        Ok(())
    }

    /// Run configurations in problem, algorithm, run-index order.
    pub fn configs(&self) -> Result<Vec<RunConfig>> {
        self.validate()?;
        let mut out = Vec::new();
        for entry in &self.problems {
            let problem = make_problem(&entry.name, entry.m, entry.n)?;
            let population = entry
                .population
                .unwrap_or_else(|| Lattice::default_for(problem.m()).size(problem.m()));
            for &algorithm in &self.algorithms {
                for i in 0..self.runs {
                    out.push(RunConfig {
                        problem: entry.name.clone(),
                        m: entry.m,
                        n: entry.n,
                        algorithm,
                        population,
                        budget: self.budget,
                        seed: self.seed_base + i as u64,
                        variation: self.variation,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Runs every configuration of `plan` on a pool of `threads` workers.
///
/// Reference fronts are built once per problem, cached under `fronts_dir`
/// when given. Records come back in [`ExperimentPlan::configs`] order
/// regardless of the thread count.
pub fn execute_plan(
    plan: &ExperimentPlan,
    threads: usize,
    fronts_dir: Option<&Path>,
) -> Result<Vec<RunRecord>> {
    let configs = plan.configs()?;
    let mut problems = Vec::new();
    for entry in &plan.problems {
        let problem = make_problem(&entry.name, entry.m, entry.n)?;
        let resolution = plan
            .ref_resolution
            .unwrap_or_else(|| default_resolution(problem.m()));
        let front = match fronts_dir {
            Some(dir) => cached_reference_front(&problem, resolution, dir)?,
            None => reference_front(&problem, resolution)?,
        };
        problems.push((problem, front));
    }
    let per_problem = plan.algorithms.len() * plan.runs;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        configs
            .par_iter()
            .enumerate()
            .map(|(i, config)| {
                let (problem, front) = &problems[i / per_problem];
                let record = run_with(problem, config, Some(front))?;
                log::info!(
                    "{} {} seed {}: igd {:?}",
                    record.problem,
                    config.algorithm,
                    config.seed,
                    record.igd
                );
                Ok(record)
            })
            .collect()
    })
}

/// `<out>/records/<problem>_<algorithm>_s<seed>.json`
pub fn record_path(out_dir: &Path, record: &RunRecord) -> PathBuf {
    out_dir.join("records").join(format!(
        "{}_{}_s{}.json",
        record.problem, record.config.algorithm, record.config.seed
    ))
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub records: Vec<RunRecord>,
    pub record_paths: Vec<PathBuf>,
    pub report: ComparisonReport,
}

/// Executes `plan` and writes every record, `report.json` and `report.txt`
/// under `out_dir`; fronts are cached in `out_dir/fronts`.
pub fn run_plan(plan: &ExperimentPlan, threads: usize, out_dir: &Path) -> Result<PlanOutcome> {
    let records = execute_plan(plan, threads, Some(&out_dir.join("fronts")))?;
    let mut record_paths = Vec::with_capacity(records.len());
    for record in &records {
        let path = record_path(out_dir, record);
        write_json(&path, record)?;
        record_paths.push(path);
    }
    let report = build_report(&records)?;
    write_json(&out_dir.join("report.json"), &report)?;
    write_atomic(&out_dir.join("report.txt"), report.render_text().as_bytes())?;
    Ok(PlanOutcome {
        records,
        record_paths,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> ExperimentPlan {
        ExperimentPlan {
            problems: vec![ProblemEntry::new("ctp2"), ProblemEntry::new("dc1-dtlz1")],
            algorithms: vec![AlgorithmKind::Ctaea2, AlgorithmKind::CtaeaBaseline],
            runs: 3,
            seed_base: 40,
            budget: Budget::Generations(2),
            out_dir: None,
            ref_resolution: Some(100),
            variation: None,
        }
    }

    #[test]
    fn configs_enumerate_seeds_in_order() {
        let configs = plan().configs().unwrap();
        assert_eq!(configs.len(), 12);
        assert_eq!(configs[0].seed, 40);
        assert_eq!(configs[2].seed, 42);
        assert_eq!(configs[3].algorithm, AlgorithmKind::CtaeaBaseline);
        assert_eq!(configs[0].population, 100);
        assert_eq!(configs[6].population, 105);
    }

    #[test]
    fn plan_json_defaults() {
        let plan: ExperimentPlan =
            serde_json::from_str(r#"{"problems":[{"name":"ctp6"}],"algorithms":["ctaea2"],"runs":2}"#)
                .unwrap();
        assert_eq!(plan.budget, Budget::Generations(500));
        assert_eq!(plan.seed_base, 0);
        let zero = ExperimentPlan { runs: 0, ..plan };
        assert!(zero.configs().is_err());
    }
}
