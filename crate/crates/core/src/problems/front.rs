//! Reference fronts for IGD: samples of the feasible Pareto-optimal front.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::decomposition::{das_dennis_weights, Lattice};
use crate::error::{Error, Result};
use crate::problems::ctp::{ctp_constraints, ctp_f2, CtpSpec, InnerDistance};
use crate::problems::dc_dtlz::{dc_constraints, dtlz_objectives, dtlz_positions, DcDtlzSpec, DtlzBase};
use crate::problems::Benchmark;
use crate::solution::{nondominated_mask, ProblemSpec};

/// Smallest resolution accepted by [`reference_front`].
pub const MIN_RESOLUTION: usize = 100;

/// Step used to scan f2 upward for the first feasible value on CTP fronts.
const CTP_SCAN_STEP: f64 = 1e-3;
/// How far above the unconstrained front the CTP scan looks.
const CTP_SCAN_SPAN: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    /// Requested sample count; `points.len()` may be smaller when the
    /// feasible front has fewer distinct points (e.g. CTP3's isolated points).
    pub resolution: usize,
}

impl ReferenceFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn m(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// One objective vector per line, space separated.
    pub fn write_table(&self, path: &Path) -> Result<()> {
        let mut text = String::with_capacity(self.points.len() * 40);
        for p in &self.points {
            let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        crate::harness::write_atomic(path, text.as_bytes())
    }

    pub fn read_table(path: &Path, resolution: usize) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Format {
                    path: path.to_path_buf(),
                    detail: format!("line {}: {e}", lineno + 1),
                })?;
            if let Some(first) = points.first().map(Vec::len) {
                if first != row.len() {
                    return Err(Error::Format {
                        path: path.to_path_buf(),
                        detail: format!("line {}: ragged row", lineno + 1),
                    });
                }
            }
            points.push(row);
        }
        Ok(Self { points, resolution })
    }
}

/// Reference front for a benchmark problem, sampled to at most `resolution`
/// mutually non-dominated feasible points.
pub fn reference_front(problem: &ProblemSpec, resolution: usize) -> Result<ReferenceFront> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::contract(format!(
            "reference front resolution must be >= {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let dense = match problem.benchmark() {
        Some(Benchmark::Ctp(spec)) => ctp_dense_front(spec, resolution),
        Some(Benchmark::DcDtlz(spec)) => dc_dense_front(spec, resolution)?,
        None => {
            return Err(Error::config(format!(
                "{} has no known Pareto front",
                problem.name()
            )))
        }
    };
    if dense.is_empty() {
        return Err(Error::EmptyFront {
            problem: problem.name().to_string(),
            resolution,
            detail: "no feasible point on the sampled front".into(),
        });
    }
    Ok(ReferenceFront {
        points: farthest_point_subset(dense, resolution),
        resolution,
    })
}

/// Cache file name for a problem's reference front.
pub fn front_cache_path(dir: &Path, problem: &ProblemSpec, resolution: usize) -> PathBuf {
    dir.join(format!("{}_{resolution}.txt", problem.name()))
}

/// Loads the cached front from `dir` or builds and stores it.
pub fn cached_reference_front(
    problem: &ProblemSpec,
    resolution: usize,
    dir: &Path,
) -> Result<ReferenceFront> {
    let path = front_cache_path(dir, problem, resolution);
    if path.exists() {
        return ReferenceFront::read_table(&path, resolution);
    }
    let front = reference_front(problem, resolution)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    front.write_table(&path)?;
    Ok(front)
}

/// For every f1 on a dense grid, the smallest attainable feasible f2 (the
/// distance function minimum is 1, and f2 grows continuously with it), then
/// a non-dominated sweep.
fn ctp_dense_front(spec: &CtpSpec, resolution: usize) -> Vec<Vec<f64>> {
    let id = spec.id;
    let grid = 20 * resolution;
    let g_max = match spec.inner {
        InnerDistance::Sum => spec.n as f64,
        InnerDistance::Rastrigin => f64::INFINITY,
    };
    let feasible = |f1: f64, f2: f64| {
        ctp_constraints(id, f1, f2)
            .expect("validated id")
            .iter()
            .all(|&c| c >= 0.0)
    };
    let lowest: Vec<Option<(f64, f64)>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let f1 = i as f64 / (grid - 1) as f64;
            let start = ctp_f2(id, f1, 1.0);
            let stop = ctp_f2(id, f1, g_max.min(1.0 + CTP_SCAN_SPAN)).min(start + CTP_SCAN_SPAN);
            if feasible(f1, start) {
                return Some((f1, start));
            }
            let steps = ((stop - start) / CTP_SCAN_STEP).ceil() as usize;
            let mut prev = start;
            for k in 1..=steps {
                let f2 = (start + k as f64 * CTP_SCAN_STEP).min(stop);
                if feasible(f1, f2) {
                    let (mut lo, mut hi) = (prev, f2);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if feasible(f1, mid) {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    return Some((f1, hi));
                }
                prev = f2;
            }
            None
        })
        .collect();
    let mut front = Vec::new();
    let mut best_f2 = f64::INFINITY;
    // f1 ascends, so a point survives iff its f2 beats every earlier one
    for (f1, f2) in lowest.into_iter().flatten() {
        if f2 < best_f2 {
            best_f2 = f2;
            front.push(vec![f1, f2]);
        }
    }
    front
}

/// Lattice sample of the base front (simplex for DTLZ1, unit sphere for
/// DTLZ3) restricted to the feasible part.
fn dc_dense_front(spec: &DcDtlzSpec, resolution: usize) -> Result<Vec<Vec<f64>>> {
    let m = spec.m;
    let target = 10 * resolution;
    let mut h = 1;
    while Lattice::Single(h).size(m) < target {
        h += 1;
    }
    let lattice = das_dennis_weights(m, Lattice::Single(h))?;
    let points: Vec<Vec<f64>> = lattice
        .vectors()
        .par_iter()
        .filter_map(|w| {
            let on_front: Vec<f64> = match spec.base {
                DtlzBase::Dtlz1 => w.iter().map(|c| 0.5 * c).collect(),
                DtlzBase::Dtlz3 => {
                    let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
                    w.iter().map(|c| c / norm).collect()
                }
            };
            let pos = dtlz_positions(spec.base, &on_front);
            dc_constraints(spec, &pos, 0.0)
                .iter()
                .all(|&c| c >= 0.0)
                .then(|| dtlz_objectives(spec.base, &pos, 0.0))
        })
        .collect();
    let mask = if points.len() <= 20_000 {
        nondominated_mask(&points)
    } else {
        vec![true; points.len()]
    };
    Ok(points
        .into_iter()
        .zip(mask)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect())
}

/// Greedy max-min subset of `points` with `k` members, starting from the
/// first point; survivors keep their input order.
fn farthest_point_subset(points: Vec<Vec<f64>>, k: usize) -> Vec<Vec<f64>> {
    if points.len() <= k {
        return points;
    }
    let dist2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let mut chosen = vec![false; points.len()];
    let mut nearest = vec![f64::INFINITY; points.len()];
    let mut current = 0;
    for _ in 0..k {
        chosen[current] = true;
        let anchor = &points[current];
        nearest
            .par_iter_mut()
            .zip(&points)
            .for_each(|(d, p)| *d = d.min(dist2(anchor, p)));
        let mut next = None;
        let mut far = -1.0;
        for (i, &d) in nearest.iter().enumerate() {
            if !chosen[i] && d > far {
                far = d;
                next = Some(i);
            }
        }
        match next {
            Some(i) => current = i,
            None => break,
        }
    }
    points
        .into_iter()
        .zip(chosen)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect()
}
