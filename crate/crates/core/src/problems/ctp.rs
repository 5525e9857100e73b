//! CTP1-CTP8 two-objective constrained test problems.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Benchmark;
use crate::solution::{Evaluation, ProblemSpec};

/// Distance function applied to `x[1..]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerDistance {
    /// `1 + 10(n-1) + sum(x_i^2 - 10 cos(4 pi x_i))` over `x_i in [-5, 5]`.
    Rastrigin,
    /// `1 + sum(x_i)` over `x_i in [0, 1]`.
    Sum,
}

impl InnerDistance {
    fn bounds(self) -> (f64, f64) {
        match self {
            InnerDistance::Rastrigin => (-5.0, 5.0),
            InnerDistance::Sum => (0.0, 1.0),
        }
    }

    fn eval(self, tail: &[f64]) -> f64 {
        match self {
            InnerDistance::Rastrigin => {
                1.0 + 10.0 * tail.len() as f64
                    + tail
                        .iter()
                        .map(|&x| x * x - 10.0 * (4.0 * PI * x).cos())
                        .sum::<f64>()
            }
            InnerDistance::Sum => 1.0 + tail.iter().sum::<f64>(),
        }
    }
}

/// Parameters of the angular CTP constraint
/// `cos(t)(f2 - e) - sin(t) f1 >= a |sin(b pi (sin(t)(f2 - e) + cos(t) f1)^c)|^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtpParams {
    /// Rotation angle in radians.
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

const fn params(theta_over_pi: f64, a: f64, b: f64, c: f64, d: f64, e: f64) -> CtpParams {
    CtpParams {
        theta: theta_over_pi * PI,
        a,
        b,
        c,
        d,
        e,
    }
}

// Constraint constants of Deb, Pratap & Meyarivan (EMO 2001), as also used
// by the pymoo and jMetal CTP implementations.
const CTP2: [CtpParams; 1] = [params(-0.2, 0.2, 10.0, 1.0, 6.0, 1.0)];
const CTP3: [CtpParams; 1] = [params(-0.2, 0.1, 10.0, 1.0, 0.5, 1.0)];
const CTP4: [CtpParams; 1] = [params(-0.2, 0.75, 10.0, 1.0, 0.5, 1.0)];
const CTP5: [CtpParams; 1] = [params(-0.2, 0.1, 10.0, 2.0, 0.5, 1.0)];
const CTP6: [CtpParams; 1] = [params(0.1, 40.0, 0.5, 1.0, 2.0, -2.0)];
const CTP7: [CtpParams; 1] = [params(-0.05, 40.0, 5.0, 1.0, 6.0, 0.0)];
const CTP8: [CtpParams; 2] = [
    params(0.1, 40.0, 0.5, 1.0, 2.0, -2.0),
    params(-0.05, 40.0, 2.0, 1.0, 6.0, 0.0),
];

/// Number of CTP1 constraints.
const CTP1_CONSTRAINTS: usize = 2;

/// `(a_j, b_j)` of the CTP1 constraints `f2 - a_j exp(-b_j f1) >= 0`, built
/// by the iterative construction starting from `a_0 = b_0 = 1`.
pub fn ctp1_coefficients() -> Vec<(f64, f64)> {
    let delta = 1.0 / (CTP1_CONSTRAINTS + 1) as f64;
    let mut alpha = delta;
    let (mut a, mut b) = (1.0f64, 1.0f64);
    let mut out = Vec::with_capacity(CTP1_CONSTRAINTS);
    for _ in 0..CTP1_CONSTRAINTS {
        let beta = a * (-b * alpha).exp();
        let a_next = (a + beta) / 2.0;
        let b_next = -(beta / a_next).ln() / alpha;
        out.push((a_next, b_next));
        a = a_next;
        b = b_next;
        alpha += delta;
    }
    out
}

/// Angular constraint parameters of CTP2-CTP8 (empty for CTP1).
pub fn ctp_params(id: u8) -> Result<&'static [CtpParams]> {
    Ok(match id {
        1 => &[],
        2 => &CTP2,
        3 => &CTP3,
        4 => &CTP4,
        5 => &CTP5,
        6 => &CTP6,
        7 => &CTP7,
        8 => &CTP8,
        _ => return Err(Error::config(format!("unknown CTP instance {id}"))),
    })
}

pub fn angular_constraint(f1: f64, f2: f64, p: &CtpParams) -> f64 {
    let (s, c) = p.theta.sin_cos();
    let lhs = c * (f2 - p.e) - s * f1;
    let v = s * (f2 - p.e) + c * f1;
    lhs - p.a * (p.b * PI * v.powf(p.c)).sin().abs().powf(p.d)
}

/// Constraint values of CTP `id` at objective vector `(f1, f2)`; every
/// CTP constraint depends on the objectives only.
pub fn ctp_constraints(id: u8, f1: f64, f2: f64) -> Result<Vec<f64>> {
    if id == 1 {
        return Ok(ctp1_coefficients()
            .into_iter()
            .map(|(a, b)| f2 - a * (-b * f1).exp())
            .collect());
    }
    Ok(ctp_params(id)?
        .iter()
        .map(|p| angular_constraint(f1, f2, p))
        .collect())
}

/// Second objective for `f1` at distance value `g`.
pub fn ctp_f2(id: u8, f1: f64, g: f64) -> f64 {
    if id == 1 {
        g * (-f1 / g).exp()
    } else {
        g * (1.0 - f1 / g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtpSpec {
    pub id: u8,
    pub n: usize,
    pub inner: InnerDistance,
}

/// Default decision dimension for CTP instances.
pub const CTP_DEFAULT_N: usize = 10;

/// Default distance function. The Rastrigin form at n = 10 does not
/// converge within a 500-generation budget.
pub const CTP_DEFAULT_INNER: InnerDistance = InnerDistance::Sum;

/// CTP `id` with the default distance function.
pub fn make_ctp(id: u8, n: usize) -> Result<ProblemSpec> {
    make_ctp_with(CtpSpec {
        id,
        n,
        inner: CTP_DEFAULT_INNER,
    })
}

pub fn make_ctp_with(spec: CtpSpec) -> Result<ProblemSpec> {
    let CtpSpec { id, n, inner } = spec;
    let q = if id == 1 {
        CTP1_CONSTRAINTS
    } else {
        ctp_params(id)?.len()
    };
    if n < 2 {
        return Err(Error::config(format!("CTP needs n >= 2, got {n}")));
    }
    let mut bounds = vec![inner.bounds(); n];
    bounds[0] = (0.0, 1.0);
    let evaluator = Arc::new(move |x: &[f64]| {
        let f1 = x[0];
        let g = inner.eval(&x[1..]);
        let f2 = ctp_f2(id, f1, g);
        Evaluation {
            objectives: vec![f1, f2],
            inequalities: ctp_constraints(id, f1, f2).expect("id validated"),
            equalities: Vec::new(),
        }
    });
    Ok(
        ProblemSpec::new(format!("ctp{id}"), 2, bounds, q, 0, evaluator)?
            .with_benchmark(Benchmark::Ctp(spec)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::evaluate;

    #[test]
    fn ctp1_coefficients_match_published_values() {
        let c = ctp1_coefficients();
        assert!((c[0].0 - 0.858).abs() < 5e-4 && (c[0].1 - 0.541).abs() < 5e-4);
        assert!((c[1].0 - 0.728).abs() < 5e-4 && (c[1].1 - 0.295).abs() < 5e-4);
    }

    #[test]
    fn unknown_id_is_config_error() {
        assert!(matches!(make_ctp(9, 10), Err(Error::Config(_))));
        assert!(matches!(make_ctp(0, 10), Err(Error::Config(_))));
        assert!(make_ctp(2, 1).is_err());
    }

    #[test]
    fn g_optimum_is_one() {
        let mut x = vec![0.0; 10];
        x[0] = 0.3;
        for id in 1..=8 {
            let p = make_ctp(id, 10).unwrap();
            let s = evaluate(&p, &x).unwrap();
            assert_eq!(s.f[0], 0.3);
            let expected = ctp_f2(id, 0.3, 1.0);
            assert!((s.f[1] - expected).abs() < 1e-12, "ctp{id}");
            assert_eq!(s.g.len(), if id == 1 || id == 8 { 2 } else { 1 });
        }
    }

    #[test]
    fn ctp1_constraints_cut_the_unconstrained_front() {
        // f2 = exp(-f1) at g = 1: above both exponentials near f1 = 0, below
        // the first one from about f1 = 0.3 on
        let p = make_ctp(1, 5).unwrap();
        let cv_at = |f1: f64| {
            let mut x = vec![0.0; 5];
            x[0] = f1;
            evaluate(&p, &x).unwrap().cv
        };
        assert_eq!(cv_at(0.0), 0.0);
        assert_eq!(cv_at(0.1), 0.0);
        let f2 = (-0.5f64).exp();
        let expected = (0.858 * (-0.541f64 * 0.5).exp() - f2) + (0.728 * (-0.295f64 * 0.5).exp() - f2);
        assert!((cv_at(0.5) - expected).abs() < 2e-3);
        assert!(cv_at(1.0) > 0.0);
    }

    #[test]
    fn ctp6_at_g_optimum_is_infeasible() {
        // independent transcription of the CTP6 constraint at x = (0.5, 0, ...)
        let (f1, f2) = (0.5f64, 0.5f64);
        let t = 0.1 * PI;
        let lhs = t.cos() * (f2 + 2.0) - t.sin() * f1;
        let rhs = 40.0 * (0.5 * PI * (t.sin() * (f2 + 2.0) + t.cos() * f1)).sin().powi(2);
        let p = make_ctp(6, 10).unwrap();
        let mut x = vec![0.0; 10];
        x[0] = 0.5;
        let s = evaluate(&p, &x).unwrap();
        assert_eq!(s.f, vec![0.5, 0.5]);
        assert!((s.g[0] - (lhs - rhs)).abs() < 1e-12);
        assert!(s.cv > 0.0);
        assert!((s.cv - (rhs - lhs)).abs() < 1e-12);
    }

    #[test]
    fn sum_inner_distance() {
        let p = make_ctp_with(CtpSpec {
            id: 2,
            n: 3,
            inner: InnerDistance::Sum,
        })
        .unwrap();
        assert_eq!(p.bounds()[1], (0.0, 1.0));
        let s = evaluate(&p, &[0.2, 0.5, 0.25]).unwrap();
        assert!((s.f[1] - (1.75 - 0.2)).abs() < 1e-12);
    }
}
