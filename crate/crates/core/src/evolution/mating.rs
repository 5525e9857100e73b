use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{associate_solutions, tchebycheff, IdealPoint, WeightVectorSet};
use crate::error::{Error, Result};
use crate::solution::{nondominated_mask, Archive, Solution};

/// Mating pool marker. The discriminants double as the `choice` values
/// recorded in traces (1 = CA, 2 = DA).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pool {
    Ca = 1,
    Da = 2,
}

impl Pool {
    pub fn marker(self) -> u8 {
        self as u8
    }
}

/// Whether the CA improved on its previous-generation snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Utility {
    Stagnant = 0,
    Progressing = 1,
}

impl Utility {
    pub fn marker(self) -> u8 {
        self as u8
    }
}

/// Adaptive mating state carried across generations by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct MatingState {
    /// CA as it was at the end of the previous generation.
    pub last_ca: Archive,
    pub choice: Pool,
    pub utility: Utility,
}

impl MatingState {
    pub fn new(initial_ca: Archive) -> Self {
        Self {
            last_ca: initial_ca,
            choice: Pool::Ca,
            utility: Utility::Progressing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stagnation {
    /// Share of the current CA that is non-dominated in `CA ++ last_ca`.
    pub rho_current: f64,
    /// Share of the previous CA that is non-dominated in `CA ++ last_ca`.
    pub rho_last: f64,
    pub utility: Utility,
}

/// Compares the current CA with its previous snapshot by plain Pareto
/// dominance. The CA is stagnant when the snapshot keeps a larger share of
/// non-dominated members than the current archive.
pub fn assess_stagnation(ca: &Archive, last_ca: &Archive) -> Result<Stagnation> {
    if ca.is_empty() || last_ca.is_empty() {
        return Err(Error::contract("stagnation check needs non-empty archives"));
    }
    let hybrid: Vec<&[f64]> = ca
        .iter()
        .chain(last_ca.iter())
        .map(|s| s.f.as_slice())
        .collect();
    let mask = nondominated_mask(&hybrid);
    let (current, last) = mask.split_at(ca.len());
    let share = |part: &[bool]| part.iter().filter(|&&b| b).count() as f64 / part.len() as f64;
    let rho_current = share(current);
    let rho_last = share(last);
    let utility = if rho_last > rho_current {
        Utility::Stagnant
    } else {
        Utility::Progressing
    };
    Ok(Stagnation {
        rho_current,
        rho_last,
        utility,
    })
}

/// Returns the mating pool for this generation and the updated `choice`.
///
/// A progressing CA breeds from itself. A stagnant CA alternates: switch to
/// DA if the CA was last in use, and back to CA if DA did not help.
pub fn choose_pool(utility: Utility, choice: Pool) -> (Pool, Pool) {
    match (utility, choice) {
        (Utility::Progressing, _) => (Pool::Ca, Pool::Ca),
        (Utility::Stagnant, Pool::Ca) => (Pool::Da, Pool::Da),
        (Utility::Stagnant, Pool::Da) => (Pool::Ca, Pool::Ca),
    }
}

/// Tchebycheff value of every member on the subregion it associates with.
pub fn subregion_fitness(
    members: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
) -> Vec<f64> {
    let association = associate_solutions(members, weights, z);
    members
        .iter()
        .zip(&association.subregion_of)
        .map(|(s, &i)| tchebycheff(&s.f, weights.get(i), z.as_slice()))
        .collect()
}

fn binary_tournament<R: Rng + ?Sized>(pool: &[Solution], fitness: &[f64], rng: &mut R) -> usize {
    let n = pool.len();
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    let (sa, sb) = (&pool[a], &pool[b]);
    if sa.cv != sb.cv {
        return if sa.cv < sb.cv { a } else { b };
    }
    if fitness[a] != fitness[b] {
        return if fitness[a] < fitness[b] { a } else { b };
    }
    if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

/// Two independent binary tournaments over `pool`. Lower CV wins, then lower
/// subregion Tchebycheff value (`fitness[i]` belongs to `pool[i]`), then a
/// fair coin. Both tournaments may return the same member.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    pool: &'a [Solution],
    fitness: &[f64],
    rng: &mut R,
) -> Result<(&'a Solution, &'a Solution)> {
    if pool.len() < 2 {
        return Err(Error::contract(format!(
            "tournament needs at least 2 members, pool has {}",
            pool.len()
        )));
    }
    if fitness.len() != pool.len() {
        return Err(Error::contract("fitness and pool lengths differ"));
    }
    let first = binary_tournament(pool, fitness, rng);
    let second = binary_tournament(pool, fitness, rng);
    Ok((&pool[first], &pool[second]))
}

/// Original two-archive restricted mating: with `rho_ca`, `rho_da` the
/// shares of each archive that are non-dominated in CA ∪ DA, the first
/// parent comes from the archive with the larger share (DA on a tie) and the
/// second from CA with probability `rho_ca`, else from DA.
pub fn ctaea_baseline_mating<'a, R: Rng + ?Sized>(
    ca: &'a [Solution],
    ca_fitness: &[f64],
    da: &'a [Solution],
    da_fitness: &[f64],
    rng: &mut R,
) -> Result<(&'a Solution, &'a Solution)> {
    if ca.len() < 2 || da.len() < 2 {
        return Err(Error::contract("baseline mating needs two members per archive"));
    }
    let objectives: Vec<&[f64]> = ca.iter().chain(da).map(|s| s.f.as_slice()).collect();
    let mask = nondominated_mask(&objectives);
    let rho_ca = mask[..ca.len()].iter().filter(|&&b| b).count() as f64 / ca.len() as f64;
    let rho_da = mask[ca.len()..].iter().filter(|&&b| b).count() as f64 / da.len() as f64;
    let first = if rho_ca > rho_da {
        &ca[binary_tournament(ca, ca_fitness, rng)]
    } else {
        &da[binary_tournament(da, da_fitness, rng)]
    };
    let second = if rng.gen::<f64>() < rho_ca {
        &ca[binary_tournament(ca, ca_fitness, rng)]
    } else {
        &da[binary_tournament(da, da_fitness, rng)]
    };
    Ok((first, second))
}
