//! Problem definition, evaluated solutions, archives and Pareto dominance.
//!
//! Every problem is a minimization problem subject to inequality constraints
//! `g_j(x) >= 0` and equality constraints `h_k(x) = 0` (the latter relaxed to
//! `|h_k(x)| <= delta_k`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Benchmark;

/// Tolerance applied to equality constraints when a problem declares none.
pub const DEFAULT_EQUALITY_TOLERANCE: f64 = 1e-4;

/// Raw output of a problem evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub inequalities: Vec<f64>,
    pub equalities: Vec<f64>,
}

pub type Evaluator = Arc<dyn Fn(&[f64]) -> Evaluation + Send + Sync>;

/// A box-constrained, possibly constrained, multi-objective problem.
#[derive(Clone)]
pub struct ProblemSpec {
    name: String,
    n_objectives: usize,
    bounds: Vec<(f64, f64)>,
    n_inequalities: usize,
    n_equalities: usize,
    tolerances: Vec<f64>,
    evaluator: Evaluator,
    benchmark: Option<Benchmark>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("n", &self.bounds.len())
            .field("m", &self.n_objectives)
            .field("q", &self.n_inequalities)
            .field("ell", &self.n_equalities)
            .finish()
    }
}

impl ProblemSpec {
    /// Builds a problem. Equality tolerances default to
    /// [`DEFAULT_EQUALITY_TOLERANCE`]; override with [`Self::with_tolerances`].
    pub fn new(
        name: impl Into<String>,
        n_objectives: usize,
        bounds: Vec<(f64, f64)>,
        n_inequalities: usize,
        n_equalities: usize,
        evaluator: Evaluator,
    ) -> Result<Self> {
        if n_objectives < 2 {
            return Err(Error::config(format!(
                "need at least 2 objectives, got {n_objectives}"
            )));
        }
        if bounds.is_empty() {
            return Err(Error::config("need at least one decision variable"));
        }
        if let Some((i, (lo, hi))) = bounds
            .iter()
            .enumerate()
            .find(|(_, (lo, hi))| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
        {
            return Err(Error::config(format!(
                "bound {i} is not a proper interval: [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            name: name.into(),
            n_objectives,
            bounds,
            n_inequalities,
            n_equalities,
            tolerances: vec![DEFAULT_EQUALITY_TOLERANCE; n_equalities],
            evaluator,
            benchmark: None,
        })
    }

    pub fn with_tolerances(mut self, tolerances: Vec<f64>) -> Result<Self> {
        if tolerances.len() != self.n_equalities {
            return Err(Error::config(format!(
                "{} tolerances for {} equality constraints",
                tolerances.len(),
                self.n_equalities
            )));
        }
        if tolerances.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::config("equality tolerances must be >= 0"));
        }
        self.tolerances = tolerances;
        Ok(self)
    }

    pub(crate) fn with_benchmark(mut self, benchmark: Benchmark) -> Self {
        self.benchmark = Some(benchmark);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Decision-space dimension.
    pub fn n(&self) -> usize {
        self.bounds.len()
    }

    /// Objective-space dimension.
    pub fn m(&self) -> usize {
        self.n_objectives
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn n_inequalities(&self) -> usize {
        self.n_inequalities
    }

    pub fn n_equalities(&self) -> usize {
        self.n_equalities
    }

    pub fn tolerances(&self) -> &[f64] {
        &self.tolerances
    }

    /// The benchmark this problem was built from, if any.
    pub fn benchmark(&self) -> Option<&Benchmark> {
        self.benchmark.as_ref()
    }

    /// Calls the evaluator without any validation.
    pub fn evaluate_raw(&self, x: &[f64]) -> Evaluation {
        (self.evaluator)(x)
    }
}

/// An evaluated candidate solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub cv: f64,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        self.cv == 0.0
    }
}

/// Fixed-capacity ordered multiset of solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    capacity: usize,
    members: Vec<Solution>,
}

impl Archive {
    /// Wraps `members` as a full archive; `members.len()` is the capacity.
    pub fn full(members: Vec<Solution>) -> Self {
        Self {
            capacity: members.len(),
            members,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Solution> {
        self.members.iter()
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    pub fn feasible_count(&self) -> usize {
        self.members.iter().filter(|s| s.is_feasible()).count()
    }
}

impl<'a> IntoIterator for &'a Archive {
    type Item = &'a Solution;
    type IntoIter = std::slice::Iter<'a, Solution>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Scalar constraint violation: `sum max(-g_j, 0) + sum max(|h_k| - delta_k, 0)`.
///
/// Zero exactly when every inequality holds and every equality is within its
/// tolerance.
pub fn constraint_violation(g: &[f64], h: &[f64], delta: &[f64]) -> Result<f64> {
    if h.len() != delta.len() {
        return Err(Error::contract(format!(
            "{} equality values but {} tolerances",
            h.len(),
            delta.len()
        )));
    }
    let inequality: f64 = g.iter().map(|&gj| (-gj).max(0.0)).sum();
    let equality: f64 = h
        .iter()
        .zip(delta)
        .map(|(&hk, &dk)| (hk.abs() - dk).max(0.0))
        .sum();
    Ok(inequality + equality)
}

/// Pareto dominance on raw objective vectors (minimization). Lengths must
/// match; use [`dominates`] for the checked version.
#[inline]
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// True iff `a` Pareto-dominates `b`. Feasibility is not consulted.
pub fn dominates(a: &Solution, b: &Solution) -> Result<bool> {
    if a.f.len() != b.f.len() {
        return Err(Error::contract(format!(
            "objective dimension mismatch: {} vs {}",
            a.f.len(),
            b.f.len()
        )));
    }
    Ok(pareto_dominates(&a.f, &b.f))
}

/// `mask[i]` is true iff point `i` is dominated by no other point.
pub fn nondominated_mask<P: AsRef<[f64]>>(points: &[P]) -> Vec<bool> {
    (0..points.len())
        .map(|i| {
            let p = points[i].as_ref();
            !points
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && pareto_dominates(other.as_ref(), p))
        })
        .collect()
}

/// Members of `solutions` not dominated by any other member, in input order.
pub fn nondominated_filter(solutions: &[Solution]) -> Vec<Solution> {
    let objectives: Vec<&[f64]> = solutions.iter().map(|s| s.f.as_slice()).collect();
    nondominated_mask(&objectives)
        .into_iter()
        .zip(solutions)
        .filter_map(|(keep, s)| keep.then(|| s.clone()))
        .collect()
}

/// Evaluates `x` on `problem` and attaches its constraint violation.
pub fn evaluate(problem: &ProblemSpec, x: &[f64]) -> Result<Solution> {
    if x.len() != problem.n() {
        return Err(Error::contract(format!(
            "decision vector has length {}, problem {} expects {}",
            x.len(),
            problem.name(),
            problem.n()
        )));
    }
    for (i, (&xi, &(lo, hi))) in x.iter().zip(problem.bounds()).enumerate() {
        if !(lo..=hi).contains(&xi) {
            return Err(Error::contract(format!(
                "x[{i}] = {xi} outside [{lo}, {hi}]"
            )));
        }
    }
    let Evaluation {
        objectives,
        inequalities,
        equalities,
    } = problem.evaluate_raw(x);
    if objectives.len() != problem.m()
        || inequalities.len() != problem.n_inequalities()
        || equalities.len() != problem.n_equalities()
    {
        return Err(Error::contract(format!(
            "evaluator of {} returned ({}, {}, {}) values, declared ({}, {}, {})",
            problem.name(),
            objectives.len(),
            inequalities.len(),
            equalities.len(),
            problem.m(),
            problem.n_inequalities(),
            problem.n_equalities()
        )));
    }
    let cv = constraint_violation(&inequalities, &equalities, problem.tolerances())?;
    Ok(Solution {
        x: x.to_vec(),
        f: objectives,
        g: inequalities,
        h: equalities,
        cv,
    })
}
