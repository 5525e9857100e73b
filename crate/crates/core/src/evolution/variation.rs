use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SBX crossover and polynomial mutation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationParams {
    pub p_crossover: f64,
    pub eta_c: f64,
    /// Per-variable mutation probability.
    pub p_mutation: f64,
    pub eta_m: f64,
}

impl VariationParams {
    /// `p_c = 1`, `eta_c = 30`, `p_m = 1/n`, `eta_m = 20`.
    pub fn defaults_for(n: usize) -> Self {
        Self {
            p_crossover: 1.0,
            eta_c: 30.0,
            p_mutation: 1.0 / n.max(1) as f64,
            eta_m: 20.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.p_crossover) || !prob(self.p_mutation) {
            return Err(Error::config("variation probabilities must lie in [0, 1]"));
        }
        if !(self.eta_c > 0.0 && self.eta_m > 0.0) {
            return Err(Error::config("distribution indices must be positive"));
        }
        Ok(())
    }
}

/// SBX on a single variable pair for a given uniform draw `u`.
///
/// `u = 0.5` gives spread factor 1 and returns the parents unchanged; the
/// children's mean always equals the parents' mean.
pub fn sbx_pair(y1: f64, y2: f64, u: f64, eta: f64) -> (f64, f64) {
    let exponent = 1.0 / (eta + 1.0);
    let beta = if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    };
    (
        0.5 * ((1.0 + beta) * y1 + (1.0 - beta) * y2),
        0.5 * ((1.0 - beta) * y1 + (1.0 + beta) * y2),
    )
}

/// Simulated binary crossover with clipping to `bounds`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    params: &VariationParams,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(p1.len() == p2.len() && p1.len() == bounds.len());
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() >= params.p_crossover {
        return (c1, c2);
    }
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        let u: f64 = rng.gen();
        if p1[i] == p2[i] {
            continue;
        }
        let (a, b) = sbx_pair(p1[i], p2[i], u, params.eta_c);
        c1[i] = a.clamp(lo, hi);
        c2[i] = b.clamp(lo, hi);
    }
    (c1, c2)
}

/// Bounded polynomial perturbation of `y` in `[lo, hi]` for draw `u`.
pub fn polynomial_step(y: f64, lo: f64, hi: f64, u: f64, eta: f64) -> f64 {
    let span = hi - lo;
    let delta1 = (y - lo) / span;
    let delta2 = (hi - y) / span;
    let power = 1.0 / (eta + 1.0);
    let deltaq = if u < 0.5 {
        let xy = 1.0 - delta1;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(power) - 1.0
    } else {
        let xy = 1.0 - delta2;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(power)
    };
    (y + deltaq * span).clamp(lo, hi)
}

/// Polynomial mutation: each variable mutates with probability `p_mutation`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    params: &VariationParams,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    x.iter()
        .zip(bounds)
        .map(|(&xi, &(lo, hi))| {
            if rng.gen::<f64>() < params.p_mutation {
                let u: f64 = rng.gen();
                polynomial_step(xi, lo, hi, u, params.eta_m)
            } else {
                xi
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn midpoint_draw_returns_parents() {
        assert_eq!(sbx_pair(0.2, 0.9, 0.5, 30.0), (0.2, 0.9));
        assert_eq!(sbx_pair(0.9, 0.2, 0.5, 7.0), (0.9, 0.2));
    }

    #[test]
    fn identical_parents_identical_children() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = vec![0.3, -1.0, 2.0];
        let bounds = vec![(0.0, 1.0), (-5.0, 5.0), (-5.0, 5.0)];
        let (c1, c2) = sbx_crossover(&p, &p, &VariationParams::defaults_for(3), &bounds, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);
    }

    #[test]
    fn sbx_is_mean_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let params = VariationParams::defaults_for(2);
        let bounds = vec![(-100.0, 100.0); 2];
        let (p1, p2) = (vec![0.2, 1.0], vec![0.6, 3.0]);
        let trials = 100_000;
        let mut sums = [0.0; 2];
        for _ in 0..trials {
            let (c1, c2) = sbx_crossover(&p1, &p2, &params, &bounds, &mut rng);
            for i in 0..2 {
                sums[i] += c1[i] + c2[i];
            }
        }
        for i in 0..2 {
            let mean = sums[i] / (2.0 * trials as f64);
            let expected = 0.5 * (p1[i] + p2[i]);
            assert!((mean - expected).abs() <= 0.01 * expected, "{mean} vs {expected}");
        }
    }

    #[test]
    fn zero_mutation_probability_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let params = VariationParams {
            p_mutation: 0.0,
            ..VariationParams::defaults_for(3)
        };
        let x = vec![0.1, 0.5, 0.9];
        assert_eq!(polynomial_mutation(&x, &params, &[(0.0, 1.0); 3], &mut rng), x);
    }

    #[test]
    fn lower_bound_stays_in_range() {
        for u in [0.0, 0.1, 0.3, 0.4999] {
            let y = polynomial_step(0.0, 0.0, 1.0, u, 20.0);
            assert!((0.0..=1.0).contains(&y));
        }
    }

    #[test]
    fn mutation_symmetric_for_centered_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = VariationParams {
            p_mutation: 1.0,
            ..VariationParams::defaults_for(1)
        };
        let trials = 100_000;
        let (mut sum, mut above, mut sq) = (0.0, 0usize, 0.0);
        for _ in 0..trials {
            let d = polynomial_mutation(&[0.5], &params, &[(0.0, 1.0)], &mut rng)[0] - 0.5;
            sum += d;
            sq += d * d;
            above += usize::from(d > 0.0);
        }
        let sd = (sq / trials as f64).sqrt();
        let se = sd / (trials as f64).sqrt();
        assert!((sum / trials as f64).abs() < 4.0 * se);
        let half = trials as f64 / 2.0;
        assert!((above as f64 - half).abs() < 4.0 * (trials as f64 * 0.25).sqrt());
    }

    #[test]
    fn validate_rejects_bad_params() {
        let mut p = VariationParams::defaults_for(10);
        assert!(p.validate().is_ok());
        p.p_crossover = 1.5;
        assert!(p.validate().is_err());
        let mut p = VariationParams::defaults_for(10);
        p.eta_m = 0.0;
        assert!(p.validate().is_err());
    }

    proptest! {
        #[test]
        fn variation_stays_in_bounds(
            seed in any::<u64>(),
            spec in prop::collection::vec((-10.0f64..10.0, 0.01f64..10.0, 0.0f64..1.0, 0.0f64..1.0), 1..8),
        ) {
            let bounds: Vec<(f64, f64)> = spec.iter().map(|&(lo, w, _, _)| (lo, lo + w)).collect();
            let p1: Vec<f64> = spec.iter().map(|&(lo, w, a, _)| lo + a * w).collect();
            let p2: Vec<f64> = spec.iter().map(|&(lo, w, _, b)| lo + b * w).collect();
            let params = VariationParams { p_crossover: 1.0, eta_c: 2.0, p_mutation: 1.0, eta_m: 5.0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c1, c2) = sbx_crossover(&p1, &p2, &params, &bounds, &mut rng);
            let m1 = polynomial_mutation(&c1, &params, &bounds, &mut rng);
            for (v, &(lo, hi)) in c1.iter().chain(&c2).chain(&m1).zip(bounds.iter().cycle()) {
                prop_assert!(*v >= lo && *v <= hi);
            }
        }
    }
}
