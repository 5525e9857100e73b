use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::algorithm::{AlgorithmKind, Budget, RunRecord};
use crate::error::{Error, Result};
use crate::metrics::{summarize, wilcoxon_rank_sum, Direction};

pub const REPORT_ALPHA: f64 = 0.05;

/// Runs below this count get no significance mark.
const MIN_RUNS_FOR_MARK: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub problem: String,
    pub algorithm: AlgorithmKind,
    pub budget: Budget,
    pub population: usize,
    pub seeds: Vec<u64>,
    /// Per-run IGD in seed order; `None` where no feasible solution was found.
    pub igd: Vec<Option<f64>>,
    /// Over runs with a defined IGD.
    pub median: Option<f64>,
    pub std: Option<f64>,
    pub undefined_runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mark {
    FirstBetter,
    SecondBetter,
    Indistinguishable,
    /// Fewer than five runs in a cell.
    NotTested,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMark {
    pub problem: String,
    pub first: AlgorithmKind,
    pub second: AlgorithmKind,
    pub p_value: Option<f64>,
    pub mark: Mark,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub cells: Vec<CellSummary>,
    pub comparisons: Vec<PairwiseMark>,
}

impl ComparisonReport {
    pub fn cell(&self, problem: &str, algorithm: AlgorithmKind) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.problem == problem && c.algorithm == algorithm)
    }

    pub fn comparison(&self, problem: &str, a: AlgorithmKind, b: AlgorithmKind) -> Option<&PairwiseMark> {
        self.comparisons.iter().find(|c| {
            c.problem == problem
                && ((c.first, c.second) == (a, b) || (c.first, c.second) == (b, a))
        })
    }

    /// Fixed-width table: one row per cell, then one row per comparison.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<18} {:<15} {:>5} {:>24}", "problem", "algorithm", "runs", "IGD median (std)").unwrap();
        for c in &self.cells {
            let stat = match (c.median, c.std) {
                (Some(m), Some(s)) => format!("{m:.4e} ({s:.2e})"),
                _ => "no feasible solution found".to_string(),
            };
            writeln!(out, "{:<18} {:<15} {:>5} {:>24}", c.problem, c.algorithm.to_string(), c.igd.len(), stat).unwrap();
        }
        if !self.comparisons.is_empty() {
            writeln!(out).unwrap();
            writeln!(out, "rank-sum test, alpha = {}", self.alpha).unwrap();
        }
        for c in &self.comparisons {
            let verdict = match c.mark {
                Mark::FirstBetter => format!("{} better", c.first),
                Mark::SecondBetter => format!("{} better", c.second),
                Mark::Indistinguishable => "indistinguishable".to_string(),
                Mark::NotTested => "not tested (fewer than 5 runs)".to_string(),
            };
            let p = c.p_value.map(|p| format!("p = {p:.3e}")).unwrap_or_default();
            writeln!(out, "{:<18} {} vs {}: {verdict} {p}", c.problem, c.first, c.second)
                .unwrap();
        }
        out
    }
}

/// Groups records by (problem, algorithm), summarizes IGD and tests every
/// pair of algorithms on each problem at [`REPORT_ALPHA`].
///
/// Runs without a feasible solution rank behind every defined IGD in the
/// test. A cell mixing budgets or population sizes is refused.
pub fn build_report(records: &[RunRecord]) -> Result<ComparisonReport> {
    let mut groups: BTreeMap<(String, AlgorithmKind), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.problem.clone(), r.config.algorithm))
            .or_default()
            .push(r);
    }

    let mut cells = Vec::with_capacity(groups.len());
    for ((problem, algorithm), mut runs) in groups {
        runs.sort_by_key(|r| r.config.seed);
        let first = runs[0];
        if let Some(odd) = runs.iter().find(|r| {
            r.config.budget != first.config.budget || r.config.population != first.config.population
        }) {
            return Err(Error::config(format!(
                "{problem}/{algorithm}: seed {} used {:?} with N = {} but seed {} used {:?} with N = {}",
                first.config.seed,
                first.config.budget,
                first.config.population,
                odd.config.seed,
                odd.config.budget,
                odd.config.population
            )));
        }
        let igd: Vec<Option<f64>> = runs.iter().map(|r| r.igd).collect();
        let defined: Vec<f64> = igd.iter().flatten().copied().collect();
        let summary = if defined.is_empty() {
            None
        } else {
            Some(summarize(&defined)?)
        };
        cells.push(CellSummary {
            problem,
            algorithm,
            budget: first.config.budget,
            population: first.config.population,
            seeds: runs.iter().map(|r| r.config.seed).collect(),
            undefined_runs: igd.len() - defined.len(),
            igd,
            median: summary.map(|s| s.median),
            std: summary.map(|s| s.std),
        });
    }

    let mut comparisons = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for b in cells[i + 1..].iter().filter(|b| b.problem == a.problem) {
            comparisons.push(compare(a, b)?);
        }
    }
    Ok(ComparisonReport {
        alpha: REPORT_ALPHA,
        cells,
        comparisons,
    })
}

fn compare(a: &CellSummary, b: &CellSummary) -> Result<PairwiseMark> {
    let mut mark = PairwiseMark {
        problem: a.problem.clone(),
        first: a.algorithm,
        second: b.algorithm,
        p_value: None,
        mark: Mark::NotTested,
    };
    if a.igd.len() < MIN_RUNS_FOR_MARK || b.igd.len() < MIN_RUNS_FOR_MARK {
        return Ok(mark);
    }
    let values = |c: &CellSummary| -> Vec<f64> {
        c.igd.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect()
    };
    let test = wilcoxon_rank_sum(&values(a), &values(b), REPORT_ALPHA)?;
    mark.p_value = Some(test.p_value);
    mark.mark = match (test.significant, test.direction) {
        (true, Direction::FirstLower) => Mark::FirstBetter,
        (true, Direction::SecondLower) => Mark::SecondBetter,
        // Equal medians: fall back to the side with the lower mean rank.
        (true, Direction::Equal) => {
            let expected = (a.igd.len() * b.igd.len()) as f64 / 2.0;
            if test.u < expected {
                Mark::FirstBetter
            } else {
                Mark::SecondBetter
            }
        }
        (false, _) => Mark::Indistinguishable,
    };
    Ok(mark)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithm::RunConfig;
    use crate::solution::Archive;

    fn record(problem: &str, algorithm: AlgorithmKind, seed: u64, igd: Option<f64>) -> RunRecord {
        RunRecord {
            config: RunConfig::new(problem, algorithm, 10, 5, seed),
            problem: problem.into(),
            m: 2,
            n: 2,
            generations: 5,
            evaluations: 60,
            final_ca: Archive::full(vec![]),
            final_da: Archive::full(vec![]),
            trace: vec![],
            igd,
            reference_resolution: Some(100),
            wall_clock_secs: seed as f64,
        }
    }

    #[test]
    fn identical_values_are_indistinguishable() {
        let mut records = Vec::new();
        for seed in 0..6 {
            let v = Some(0.1 + seed as f64 * 0.01);
            records.push(record("p", AlgorithmKind::Ctaea2, seed, v));
            records.push(record("p", AlgorithmKind::CtaeaBaseline, seed, v));
        }
        let report = build_report(&records).unwrap();
        assert_eq!(report.comparisons.len(), 1);
        assert_eq!(report.comparisons[0].mark, Mark::Indistinguishable);
    }

    #[test]
    fn separated_samples_get_marked() {
        let mut records = Vec::new();
        for seed in 0..12 {
            records.push(record("p", AlgorithmKind::Ctaea2, seed, Some(0.01 + seed as f64 * 1e-4)));
            records.push(record("p", AlgorithmKind::CtaeaBaseline, seed, Some(0.1 + seed as f64 * 1e-4)));
        }
        records.push(record("q", AlgorithmKind::Ctaea2, 0, None));
        let report = build_report(&records).unwrap();
        let c = report
            .comparison("p", AlgorithmKind::CtaeaBaseline, AlgorithmKind::Ctaea2)
            .unwrap();
        assert_eq!((c.first, c.mark), (AlgorithmKind::Ctaea2, Mark::FirstBetter));
        let q = report.cell("q", AlgorithmKind::Ctaea2).unwrap();
        assert_eq!((q.median, q.undefined_runs), (None, 1));
        assert!(report.render_text().contains("no feasible solution found"));
    }

    #[test]
    fn report_is_independent_of_record_order_and_wall_clock() {
        let mut records: Vec<_> = (0..5)
            .map(|s| record("p", AlgorithmKind::Ctaea2, s, Some(s as f64)))
            .collect();
        let a = serde_json::to_string(&build_report(&records).unwrap()).unwrap();
        records.reverse();
        for r in &mut records {
            r.wall_clock_secs += 3.0;
        }
        let b = serde_json::to_string(&build_report(&records).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_budgets_are_refused() {
        let mut records: Vec<_> = (0..5)
            .map(|s| record("p", AlgorithmKind::Ctaea2, s, Some(1.0)))
            .collect();
        records[3].config.budget = Budget::Generations(7);
        let err = build_report(&records).unwrap_err();
        assert!(err.to_string().contains("seed 3"));
    }
}
