//! IGD and the Wilcoxon rank-sum test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::problems::ReferenceFront;
use crate::solution::Solution;

/// Per-run metric values for one (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub problem: String,
    pub algorithm: String,
    pub values: Vec<f64>,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mean distance from every reference point to its nearest point in `points`.
pub fn igd_of_points<P: AsRef<[f64]>>(points: &[P], reference: &[Vec<f64>]) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::contract("IGD needs a non-empty reference front"));
    }
    if points.is_empty() {
        return Err(Error::contract("IGD needs a non-empty point set"));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            points
                .iter()
                .map(|a| euclidean(r, a.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// IGD of the feasible members of `archive`. `Ok(None)` means no member is
/// feasible, so the indicator is undefined.
pub fn igd(archive: &[Solution], reference: &ReferenceFront) -> Result<Option<f64>> {
    if reference.is_empty() {
        return Err(Error::contract("IGD needs a non-empty reference front"));
    }
    let feasible: Vec<&[f64]> = archive
        .iter()
        .filter(|s| s.is_feasible())
        .map(|s| s.f.as_slice())
        .collect();
    if feasible.is_empty() {
        return Ok(None);
    }
    igd_of_points(&feasible, &reference.points).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The first sample has the lower median.
    FirstLower,
    SecondLower,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSumResult {
    /// Sum of the first sample's mid-ranks in the pooled ordering.
    pub rank_sum: f64,
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    pub p_value: f64,
    pub significant: bool,
    pub direction: Direction,
    /// True when the exact permutation distribution was used.
    pub exact: bool,
}

/// Below this size for either sample the exact null distribution is used.
pub const EXACT_BELOW: usize = 10;

/// Two-sided Wilcoxon rank-sum test with mid-ranks for ties.
///
/// Small samples use the exact permutation distribution of the observed
/// mid-ranks; larger ones a normal approximation with tie and continuity
/// corrections.
pub fn wilcoxon_rank_sum(xs: &[f64], ys: &[f64], alpha: f64) -> Result<RankSumResult> {
    if xs.len() < 5 || ys.len() < 5 {
        return Err(Error::contract(format!(
            "rank-sum test needs >= 5 values per sample, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::contract("rank-sum test got NaN"));
    }
    let (n1, n2) = (xs.len(), ys.len());
    let n = n1 + n2;
    let ranks = mid_ranks(xs.iter().chain(ys).copied().collect());
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    let direction = match median(xs).total_cmp(&median(ys)) {
        std::cmp::Ordering::Less => Direction::FirstLower,
        std::cmp::Ordering::Greater => Direction::SecondLower,
        std::cmp::Ordering::Equal => Direction::Equal,
    };

    let first = xs[0];
    if xs.iter().chain(ys).all(|&v| v == first) {
        return Ok(RankSumResult {
            rank_sum,
            u,
            p_value: 1.0,
            significant: false,
            direction,
            exact: false,
        });
    }

    let exact = n1 < EXACT_BELOW || n2 < EXACT_BELOW;
    let p_value = if exact {
        exact_p_value(&ranks, n1, rank_sum)
    } else {
        let mean = n1 as f64 * (n + 1) as f64 / 2.0;
        let ties = tie_term(&ranks);
        let var = (n1 * n2) as f64 / 12.0 * ((n + 1) as f64 - ties / (n * (n - 1)) as f64);
        let diff = rank_sum - mean;
        let corrected = (diff.abs() - 0.5).max(0.0);
        let z = corrected / var.sqrt();
        let normal = Normal::standard();
        2.0 * normal.sf(z)
    };
    let p_value = p_value.clamp(f64::MIN_POSITIVE, 1.0);
    Ok(RankSumResult {
        rank_sum,
        u,
        p_value,
        significant: p_value < alpha,
        direction,
        exact,
    })
}

/// 1-based mid-ranks of `values` in their original order.
fn mid_ranks(values: Vec<f64>) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// `sum(t^3 - t)` over tie groups, read off the mid-ranks.
fn tie_term(ranks: &[f64]) -> f64 {
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .chunk_by(|a, b| a == b)
        .map(|g| {
            let t = g.len() as f64;
            t * t * t - t
        })
        .sum()
}

/// Exact two-sided p-value: the rank sum of a uniformly random size-`n1`
/// subset of the pooled mid-ranks, counted by dynamic programming over
/// doubled (integral) ranks.
fn exact_p_value(ranks: &[f64], n1: usize, observed: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled rank sum s
    let mut ways = vec![vec![0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=n1).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let total: f64 = ways[n1].iter().sum();
    let obs = (2.0 * observed).round() as usize;
    let lower: f64 = ways[n1][..=obs].iter().sum();
    let upper: f64 = ways[n1][obs..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}

/// Median and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: f64,
    pub std: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::contract("cannot summarize an empty sample"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(Summary {
        median: median(values),
        std: var.sqrt(),
    })
}
