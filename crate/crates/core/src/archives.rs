//! Update kernels for the convergence archive (CA) and the diversity
//! archive (DA).

use serde::{Deserialize, Serialize};

use crate::decomposition::{associate_solutions, tchebycheff, IdealPoint, WeightVectorSet};
use crate::error::{Error, Result};
use crate::solution::{Archive, Solution};

/// Which CA update branch fired, decided by the feasible count alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaBranch {
    /// Fewer feasible solutions than the capacity; filled by smallest CV.
    Underfull,
    /// Exactly as many feasible solutions as the capacity.
    Exact,
    /// More feasible solutions than the capacity; trimmed by subregion.
    Overfull,
}

/// Diagnostic record of one CA update.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaUpdateTrace {
    pub branch: CaBranch,
    pub feasible: usize,
    /// Subregions that contributed a Tchebycheff minimizer.
    pub occupied_subregions: usize,
    /// `(subregion, candidate position in CA ++ offspring)` admitted by the
    /// trimming loop after the per-subregion minimizers, in admission order.
    pub fills: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct CaUpdate {
    pub archive: Archive,
    pub trace: CaUpdateTrace,
}

fn check_candidates(archive: &Archive, offspring: &[Solution], what: &str) -> Result<()> {
    let total = archive.len() + offspring.len();
    if total < archive.capacity() {
        return Err(Error::contract(format!(
            "{what} update needs at least {} candidates, got {total}",
            archive.capacity()
        )));
    }
    Ok(())
}

/// Feasibility-first CA update.
///
/// Candidates are `ca` followed by `offspring`. With fewer feasible
/// candidates than the capacity, the gap is filled by the infeasible ones
/// with the smallest CV. With more, every occupied subregion first keeps its
/// Tchebycheff minimizer; remaining slots go, one at a time, to the candidate
/// whose Tchebycheff value is closest to its own subregion's minimizer.
pub fn update_ca(
    ca: &Archive,
    offspring: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
) -> Result<CaUpdate> {
    if offspring.is_empty() {
        return Err(Error::contract("CA update needs a non-empty offspring set"));
    }
    check_candidates(ca, offspring, "CA")?;
    let capacity = ca.capacity();
    if weights.len() > capacity {
        return Err(Error::contract(format!(
            "{} weight vectors exceed archive capacity {capacity}",
            weights.len()
        )));
    }

    let candidates: Vec<&Solution> = ca.iter().chain(offspring).collect();
    let (feasible, infeasible): (Vec<usize>, Vec<usize>) =
        (0..candidates.len()).partition(|&i| candidates[i].is_feasible());

    let take = |ids: &[usize]| -> Vec<Solution> {
        ids.iter().map(|&i| candidates[i].clone()).collect()
    };

    if feasible.len() < capacity {
        let mut filler = infeasible;
        // stable: equal CV keeps candidate order
        filler.sort_by(|&a, &b| candidates[a].cv.total_cmp(&candidates[b].cv));
        let mut chosen = feasible.clone();
        chosen.extend_from_slice(&filler[..capacity - feasible.len()]);
        return Ok(CaUpdate {
            archive: Archive::full(take(&chosen)),
            trace: CaUpdateTrace {
                branch: CaBranch::Underfull,
                feasible: feasible.len(),
                occupied_subregions: 0,
                fills: Vec::new(),
            },
        });
    }
    if feasible.len() == capacity {
        return Ok(CaUpdate {
            archive: Archive::full(take(&feasible)),
            trace: CaUpdateTrace {
                branch: CaBranch::Exact,
                feasible: feasible.len(),
                occupied_subregions: 0,
                fills: Vec::new(),
            },
        });
    }

    let feasible_solutions: Vec<Solution> = take(&feasible);
    let association = associate_solutions(&feasible_solutions, weights, z);
    let z = z.as_slice();
    // Tchebycheff value of each feasible candidate on its own subregion.
    let fitness: Vec<f64> = feasible_solutions
        .iter()
        .zip(&association.subregion_of)
        .map(|(s, &i)| tchebycheff(&s.f, weights.get(i), z))
        .collect();

    let mut chosen: Vec<usize> = Vec::with_capacity(capacity);
    let mut best_fitness = vec![f64::NAN; weights.len()];
    let mut remaining: Vec<Vec<usize>> = association.members;
    for (i, members) in remaining.iter_mut().enumerate() {
        if members.is_empty() {
            continue;
        }
        let (slot, _) = members
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bs, bv), (slot, &p)| {
                if fitness[p] < bv {
                    (slot, fitness[p])
                } else {
                    (bs, bv)
                }
            });
        let best = members.remove(slot);
        best_fitness[i] = fitness[best];
        chosen.push(best);
    }
    let occupied = chosen.len();

    let mut fills = Vec::new();
    while chosen.len() < capacity {
        // (delta, subregion, slot within subregion)
        let mut pick: Option<(f64, usize, usize)> = None;
        for (i, members) in remaining.iter().enumerate() {
            for (slot, &p) in members.iter().enumerate() {
                let delta = (best_fitness[i] - fitness[p]).abs();
                if pick.map_or(true, |(d, _, _)| delta < d) {
                    pick = Some((delta, i, slot));
                }
            }
        }
        let (_, i, slot) = pick.expect("more feasible candidates than capacity");
        let admitted = remaining[i].remove(slot);
        fills.push((i, feasible[admitted]));
        chosen.push(admitted);
    }

    Ok(CaUpdate {
        archive: Archive::full(chosen.iter().map(|&p| feasible_solutions[p].clone()).collect()),
        trace: CaUpdateTrace {
            branch: CaBranch::Overfull,
            feasible: feasible.len(),
            occupied_subregions: occupied,
            fills,
        },
    })
}

/// Feasibility-blind DA update: repeatedly drop the worst Tchebycheff member
/// of the most crowded subregion until the capacity is reached. Survivors
/// keep their candidate order (`da` then `offspring`).
pub fn update_da(
    da: &Archive,
    offspring: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
) -> Result<Archive> {
    check_candidates(da, offspring, "DA")?;
    let capacity = da.capacity();
    let candidates: Vec<Solution> = da.iter().chain(offspring).cloned().collect();
    if candidates.len() == capacity {
        return Ok(Archive::full(candidates));
    }

    let association = associate_solutions(&candidates, weights, z);
    let zs = z.as_slice();
    let fitness: Vec<f64> = candidates
        .iter()
        .zip(&association.subregion_of)
        .map(|(s, &i)| tchebycheff(&s.f, weights.get(i), zs))
        .collect();
    let mut subregions = association.members;
    let mut alive = vec![true; candidates.len()];
    let mut count = candidates.len();

    while count > capacity {
        let crowded = subregions
            .iter()
            .enumerate()
            .fold(0, |best, (i, m)| if m.len() > subregions[best].len() { i } else { best });
        let members = &mut subregions[crowded];
        // latest inserted wins ties for removal
        let slot = (0..members.len())
            .rev()
            .fold(members.len() - 1, |worst, s| {
                if fitness[members[s]] > fitness[members[worst]] {
                    s
                } else {
                    worst
                }
            });
        let removed = members.remove(slot);
        alive[removed] = false;
        count -= 1;
    }

    Ok(Archive::full(
        candidates
            .into_iter()
            .zip(alive)
            .filter_map(|(s, keep)| keep.then_some(s))
            .collect(),
    ))
}
