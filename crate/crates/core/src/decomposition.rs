//! Weight vectors, ideal point, Tchebycheff scalarization and angular
//! association of solutions to subregions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::Solution;

/// Floor applied to weight components in [`tchebycheff`].
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Evenly spread weight vectors on the unit simplex, one per subregion.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVectorSet {
    vectors: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

impl WeightVectorSet {
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let m = vectors
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::config("empty weight vector set"))?;
        for w in &vectors {
            if w.len() != m {
                return Err(Error::config("weight vectors of mixed dimension"));
            }
            if w.iter().any(|&c| !(c >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::config(format!("{w:?} is not on the unit simplex")));
            }
        }
        let norms = vectors.iter().map(|w| norm(w)).collect();
        Ok(Self { vectors, norms })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn m(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

/// Lattice parameters for simplex weight generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lattice {
    Single(usize),
    /// Outer boundary layer plus an inner layer shrunk halfway to the centroid.
    TwoLayer { outer: usize, inner: usize },
}

impl Lattice {
    /// Default lattice for `m` objectives (N = 100 for m=2, 105 for m=3,
    /// 210 for m=5).
    pub fn default_for(m: usize) -> Self {
        match m {
            0..=2 => Lattice::Single(99),
            3 => Lattice::Single(13),
            4 => Lattice::Single(7),
            5 => Lattice::Single(6),
            6..=10 => Lattice::TwoLayer { outer: 3, inner: 2 },
            _ => Lattice::TwoLayer { outer: 2, inner: 1 },
        }
    }

    /// Number of vectors the lattice yields for `m` objectives.
    pub fn size(&self, m: usize) -> usize {
        match *self {
            Lattice::Single(h) => binomial(h + m - 1, m - 1),
            Lattice::TwoLayer { outer, inner } => {
                binomial(outer + m - 1, m - 1) + binomial(inner + m - 1, m - 1)
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Das-Dennis simplex lattice: all vectors with components `k_j / h`,
/// `sum k_j = h`, ordered lexicographically by their leading components.
pub fn das_dennis_weights(m: usize, lattice: Lattice) -> Result<WeightVectorSet> {
    if m < 2 {
        return Err(Error::config(format!("need m >= 2, got {m}")));
    }
    let vectors = match lattice {
        Lattice::Single(h) => {
            if h == 0 {
                return Err(Error::config("lattice parameter must be >= 1"));
            }
            simplex_layer(m, h)
        }
        Lattice::TwoLayer { outer, inner } => {
            if outer == 0 || inner == 0 {
                return Err(Error::config("lattice parameters must be >= 1"));
            }
            let centroid = 1.0 / m as f64;
            let mut all = simplex_layer(m, outer);
            all.extend(
                simplex_layer(m, inner)
                    .into_iter()
                    .map(|w| w.into_iter().map(|c| 0.5 * c + 0.5 * centroid).collect()),
            );
            all
        }
    };
    WeightVectorSet::from_vectors(vectors)
}

fn simplex_layer(m: usize, h: usize) -> Vec<Vec<f64>> {
    fn recurse(m: usize, h: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == m - 1 {
            let mut w: Vec<f64> = prefix.iter().map(|&k| k as f64 / h as f64).collect();
            w.push(left as f64 / h as f64);
            out.push(w);
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            recurse(m, h, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(m, h, h, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Running componentwise minimum of every objective vector observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint(pub Vec<f64>);

impl IdealPoint {
    pub fn from_objectives<'a, I>(objectives: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = objectives.into_iter();
        let mut z = IdealPoint(iter.next()?.to_vec());
        for f in iter {
            z.observe(f);
        }
        Some(z)
    }

    pub fn observe(&mut self, f: &[f64]) {
        debug_assert_eq!(self.0.len(), f.len());
        for (zj, &fj) in self.0.iter_mut().zip(f) {
            if fj < *zj {
                *zj = fj;
            }
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Componentwise minimum of `z` and `f`.
pub fn update_ideal(z: &IdealPoint, f: &[f64]) -> IdealPoint {
    let mut next = z.clone();
    next.observe(f);
    next
}

/// `max_j |f_j - z_j| / max(w_j, 1e-6)`.
#[inline]
pub fn tchebycheff(f: &[f64], w: &[f64], z: &[f64]) -> f64 {
    debug_assert!(f.len() == w.len() && w.len() == z.len());
    f.iter()
        .zip(w)
        .zip(z)
        .map(|((&fj, &wj), &zj)| (fj - zj).abs() / wj.max(WEIGHT_FLOOR))
        .fold(0.0, f64::max)
}

/// Partition of a solution list into subregions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    /// Subregion index of every input solution, by input position.
    pub subregion_of: Vec<usize>,
    /// Input positions per subregion, ascending.
    pub members: Vec<Vec<usize>>,
}

/// Assigns every objective vector to the weight vector with the smallest
/// acute angle to `f - z`. Ties go to the lowest index and a zero translated
/// vector goes to subregion 0.
pub fn associate<P: AsRef<[f64]>>(
    objectives: &[P],
    weights: &WeightVectorSet,
    z: &IdealPoint,
) -> Association {
    let mut members = vec![Vec::new(); weights.len()];
    let subregion_of: Vec<usize> = objectives
        .iter()
        .enumerate()
        .map(|(pos, f)| {
            let i = closest_subregion(f.as_ref(), weights, z.as_slice());
            members[i].push(pos);
            i
        })
        .collect();
    Association {
        subregion_of,
        members,
    }
}

pub fn associate_solutions(
    solutions: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
) -> Association {
    let objectives: Vec<&[f64]> = solutions.iter().map(|s| s.f.as_slice()).collect();
    associate(&objectives, weights, z)
}

fn closest_subregion(f: &[f64], weights: &WeightVectorSet, z: &[f64]) -> usize {
    let u: Vec<f64> = f.iter().zip(z).map(|(a, b)| a - b).collect();
    let u_norm = norm(&u);
    if u_norm == 0.0 {
        return 0;
    }
    let mut best = 0;
    let mut best_angle = f64::INFINITY;
    for (i, (w, &w_norm)) in weights.vectors.iter().zip(&weights.norms).enumerate() {
        let dot: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
        let angle = (dot / (u_norm * w_norm)).clamp(-1.0, 1.0).acos();
        if angle < best_angle {
            best_angle = angle;
            best = i;
        }
    }
    best
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lattice_m2_h4() {
        let w = das_dennis_weights(2, Lattice::Single(4)).unwrap();
        assert_eq!(
            w.vectors(),
            &[
                vec![0.0, 1.0],
                vec![0.25, 0.75],
                vec![0.5, 0.5],
                vec![0.75, 0.25],
                vec![1.0, 0.0]
            ]
        );
    }

    #[test]
    fn lattice_counts() {
        let w = das_dennis_weights(3, Lattice::Single(13)).unwrap();
        assert_eq!(w.len(), 105);
        for v in w.vectors() {
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let w = das_dennis_weights(3, Lattice::Single(1)).unwrap();
        assert_eq!(
            w.vectors(),
            &[vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
        for m in [2, 3, 5, 8, 10, 15] {
            let lattice = Lattice::default_for(m);
            let w = das_dennis_weights(m, lattice).unwrap();
            assert_eq!(w.len(), lattice.size(m), "m={m}");
        }
        assert_eq!(Lattice::default_for(2).size(2), 100);
        assert_eq!(Lattice::default_for(5).size(5), 210);
    }

    #[test]
    fn two_layer_vectors_distinct_and_on_simplex() {
        let w = das_dennis_weights(8, Lattice::TwoLayer { outer: 3, inner: 2 }).unwrap();
        for (i, a) in w.vectors().iter().enumerate() {
            assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for b in &w.vectors()[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn tchebycheff_examples() {
        assert_eq!(tchebycheff(&[1.0, 2.0], &[0.5, 0.5], &[0.0, 0.0]), 4.0);
        assert_eq!(tchebycheff(&[0.3, 0.7], &[0.5, 0.5], &[0.3, 0.7]), 0.0);
        assert_eq!(tchebycheff(&[1.0, 1.0], &[1.0, 0.0], &[0.0, 0.0]), 1e6);
    }

    #[test]
    fn ideal_point_examples() {
        let z = IdealPoint(vec![0.0, 1.0]);
        assert_eq!(update_ideal(&z, &[1.0, 0.0]).0, vec![0.0, 0.0]);
        let z = IdealPoint(vec![0.0, 0.0]);
        assert_eq!(update_ideal(&z, &[5.0, 5.0]).0, vec![0.0, 0.0]);
    }

    #[test]
    fn ideal_point_is_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let forward = IdealPoint::from_objectives(pts.iter().map(Vec::as_slice)).unwrap();
        let backward = IdealPoint::from_objectives(pts.iter().rev().map(Vec::as_slice)).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn association_examples() {
        let w = WeightVectorSet::from_vectors(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let z = IdealPoint(vec![0.0, 0.0]);
        let a = associate(&[vec![1.0, 0.1]], &w, &z);
        assert_eq!(a.subregion_of, vec![0]);
        let a = associate(&[vec![0.1, 1.0], vec![0.0, 0.0]], &w, &z);
        assert_eq!(a.subregion_of, vec![1, 0]);
        assert_eq!(a.members, vec![vec![1], vec![0]]);
        // equal angle: lowest index wins
        let a = associate(&[vec![1.0, 1.0]], &w, &z);
        assert_eq!(a.subregion_of, vec![0]);
    }

    /// Independent angle oracle: normalize both vectors first, then acos.
    fn oracle_subregion(u: &[f64], weights: &[Vec<f64>]) -> usize {
        let nu = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        if nu == 0.0 {
            return 0;
        }
        let mut best = (f64::INFINITY, 0);
        for (i, w) in weights.iter().enumerate() {
            let nw = w.iter().map(|c| c * c).sum::<f64>().sqrt();
            let cos: f64 = u.iter().zip(w).map(|(a, b)| (a / nu) * (b / nw)).sum();
            let ang = cos.max(-1.0).min(1.0).acos();
            if ang < best.0 {
                best = (ang, i);
            }
        }
        best.1
    }

    #[test]
    fn association_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2usize, 3] {
            let raw: Vec<Vec<f64>> = (0..10)
                .map(|_| {
                    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
                    let s: f64 = v.iter().sum();
                    v.into_iter().map(|c| c / s).collect()
                })
                .collect();
            let w = WeightVectorSet::from_vectors(raw.clone()).unwrap();
            let z = IdealPoint(vec![-0.1; m]);
            let fs: Vec<Vec<f64>> = (0..30)
                .map(|_| (0..m).map(|_| rng.gen_range(0.0..2.0)).collect())
                .collect();
            let a = associate(&fs, &w, &z);
            for (pos, f) in fs.iter().enumerate() {
                let u: Vec<f64> = f.iter().map(|c| c + 0.1).collect();
                assert_eq!(a.subregion_of[pos], oracle_subregion(&u, &raw));
            }
            assert_eq!(a.members.iter().map(Vec::len).sum::<usize>(), fs.len());
        }
    }

    proptest! {
        #[test]
        fn association_scale_invariant(
            pts in prop::collection::vec(prop::collection::vec(0.0f64..5.0, 3), 1..20),
            c in 0.1f64..10.0,
        ) {
            let w = das_dennis_weights(3, Lattice::Single(6)).unwrap();
            let z = IdealPoint(vec![0.0; 3]);
            let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| v * c).collect()).collect();
            prop_assert_eq!(associate(&pts, &w, &z), associate(&scaled, &w, &z));
        }

        #[test]
        fn tchebycheff_nonnegative_zero_iff_equal(
            f in prop::collection::vec(-3.0f64..3.0, 3),
            z in prop::collection::vec(-3.0f64..3.0, 3),
            k in 0usize..28,
        ) {
            let w = das_dennis_weights(3, Lattice::Single(6)).unwrap();
            let t = tchebycheff(&f, w.get(k), &z);
            prop_assert!(t >= 0.0);
            prop_assert_eq!(t == 0.0, f == z);
        }
    }
}
