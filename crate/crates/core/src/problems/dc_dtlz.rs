//! DC-DTLZ: DTLZ1/DTLZ3 objectives with local feasible regions.
//!
//! * DC1 cuts the front by `cos(a pi x_1) - b >= 0`.
//! * DC2 constrains the distance function: `cos(a pi g) - b >= 0` and
//!   `exp(-g) - b >= 0`.
//! * DC3 constrains every position variable, `cos(a pi x_j) - b >= 0` for
//!   `j < m`, plus `cos(a pi g) - b >= 0`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Benchmark;
use crate::solution::{Evaluation, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DcFamily {
    #[serde(rename = "dc1")]
    Dc1,
    #[serde(rename = "dc2")]
    Dc2,
    #[serde(rename = "dc3")]
    Dc3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DtlzBase {
    #[serde(rename = "dtlz1")]
    Dtlz1,
    #[serde(rename = "dtlz3")]
    Dtlz3,
}

impl DtlzBase {
    /// Conventional number of distance variables.
    pub fn default_k(self) -> usize {
        match self {
            DtlzBase::Dtlz1 => 5,
            DtlzBase::Dtlz3 => 10,
        }
    }
}

pub const SUPPORTED_M: [usize; 5] = [3, 5, 8, 10, 15];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcDtlzSpec {
    pub family: DcFamily,
    pub base: DtlzBase,
    pub m: usize,
    pub a: f64,
    pub b: f64,
}

impl DcDtlzSpec {
    /// Instance with the published constraint constants.
    pub fn standard(family: DcFamily, base: DtlzBase, m: usize) -> Self {
        // (a, b) from the reference DC-DTLZ implementation
        let (a, b) = match (family, base) {
            (DcFamily::Dc1, _) => (3.0, 0.5),
            (DcFamily::Dc2, DtlzBase::Dtlz1) => (3.0, 0.9),
            (DcFamily::Dc2, DtlzBase::Dtlz3) => (5.0, 0.5),
            (DcFamily::Dc3, _) => (5.0, 0.5),
        };
        Self {
            family,
            base,
            m,
            a,
            b,
        }
    }

    pub fn default_n(&self) -> usize {
        self.m + self.base.default_k() - 1
    }

    pub fn n_constraints(&self) -> usize {
        match self.family {
            DcFamily::Dc1 => 1,
            DcFamily::Dc2 => 2,
            DcFamily::Dc3 => self.m,
        }
    }

    pub fn name(&self) -> String {
        format!("{self}-m{}", self.m)
    }
}

impl fmt::Display for DcDtlzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            DcFamily::Dc1 => "dc1",
            DcFamily::Dc2 => "dc2",
            DcFamily::Dc3 => "dc3",
        };
        let base = match self.base {
            DtlzBase::Dtlz1 => "dtlz1",
            DtlzBase::Dtlz3 => "dtlz3",
        };
        write!(f, "{family}-{base}")
    }
}

impl FromStr for DcDtlzSpec {
    type Err = Error;

    /// Parses `dcF-dtlzB` (objective count defaults to 3).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (family, base) = lower
            .split_once('-')
            .ok_or_else(|| Error::config(format!("not a DC-DTLZ name: {s}")))?;
        let family = match family {
            "dc1" => DcFamily::Dc1,
            "dc2" => DcFamily::Dc2,
            "dc3" => DcFamily::Dc3,
            _ => return Err(Error::config(format!("unknown DC family in {s}"))),
        };
        let base = match base {
            "dtlz1" => DtlzBase::Dtlz1,
            "dtlz3" => DtlzBase::Dtlz3,
            _ => return Err(Error::config(format!("unknown DTLZ base in {s}"))),
        };
        Ok(Self::standard(family, base, 3))
    }
}

/// Multimodal distance function shared by DTLZ1 and DTLZ3.
pub fn dtlz_distance(tail: &[f64]) -> f64 {
    100.0
        * (tail.len() as f64
            + tail
                .iter()
                .map(|&x| {
                    let y = x - 0.5;
                    y * y - (20.0 * PI * y).cos()
                })
                .sum::<f64>())
}

/// Objectives of `base` for position variables `pos` (length m-1) and
/// distance value `g`.
pub fn dtlz_objectives(base: DtlzBase, pos: &[f64], g: f64) -> Vec<f64> {
    let m = pos.len() + 1;
    let mut f = Vec::with_capacity(m);
    match base {
        DtlzBase::Dtlz1 => {
            let scale = 0.5 * (1.0 + g);
            for i in 0..m {
                let mut v = scale;
                v *= pos[..m - 1 - i].iter().product::<f64>();
                if i > 0 {
                    v *= 1.0 - pos[m - 1 - i];
                }
                f.push(v);
            }
        }
        DtlzBase::Dtlz3 => {
            let scale = 1.0 + g;
            for i in 0..m {
                let mut v = scale;
                v *= pos[..m - 1 - i]
                    .iter()
                    .map(|&x| (x * FRAC_PI_2).cos())
                    .product::<f64>();
                if i > 0 {
                    v *= (pos[m - 1 - i] * FRAC_PI_2).sin();
                }
                f.push(v);
            }
        }
    }
    f
}

/// Position variables that map to front point `f` (g = 0). Variables that
/// do not affect the objectives (a zero prefix product) are set to 0.
pub fn dtlz_positions(base: DtlzBase, f: &[f64]) -> Vec<f64> {
    let m = f.len();
    let mut pos = Vec::with_capacity(m - 1);
    // `prefix` is the product term shared by f_1..f_{m-j}
    let mut prefix = match base {
        DtlzBase::Dtlz1 => 0.5,
        DtlzBase::Dtlz3 => 1.0,
    };
    for j in 0..m - 1 {
        let target = f[m - 1 - j];
        let x = if prefix <= 1e-15 {
            0.0
        } else {
            match base {
                DtlzBase::Dtlz1 => (1.0 - target / prefix).clamp(0.0, 1.0),
                DtlzBase::Dtlz3 => ((target / prefix).clamp(-1.0, 1.0).asin() / FRAC_PI_2)
                    .clamp(0.0, 1.0),
            }
        };
        prefix *= match base {
            DtlzBase::Dtlz1 => x,
            DtlzBase::Dtlz3 => (x * FRAC_PI_2).cos(),
        };
        pos.push(x);
    }
    pos
}

/// Constraint values for position variables `pos` and distance value `g`.
pub fn dc_constraints(spec: &DcDtlzSpec, pos: &[f64], g: f64) -> Vec<f64> {
    let (a, b) = (spec.a, spec.b);
    match spec.family {
        DcFamily::Dc1 => vec![(a * PI * pos[0]).cos() - b],
        DcFamily::Dc2 => vec![(a * PI * g).cos() - b, (-g).exp() - b],
        DcFamily::Dc3 => pos
            .iter()
            .map(|&x| (a * PI * x).cos() - b)
            .chain(std::iter::once((a * PI * g).cos() - b))
            .collect(),
    }
}

pub fn make_dc_dtlz(spec: DcDtlzSpec, n: usize) -> Result<ProblemSpec> {
    if !SUPPORTED_M.contains(&spec.m) {
        return Err(Error::config(format!(
            "{spec} supports m in {SUPPORTED_M:?}, got {}",
            spec.m
        )));
    }
    if n < spec.m {
        return Err(Error::config(format!(
            "{spec} with m = {} needs n >= {}, got {n}",
            spec.m, spec.m
        )));
    }
    if !(spec.a > 0.0 && spec.b > 0.0) {
        return Err(Error::config("DC constraint parameters must be positive"));
    }
    let m = spec.m;
    let evaluator = Arc::new(move |x: &[f64]| {
        let (pos, tail) = x.split_at(m - 1);
        let g = dtlz_distance(tail);
        Evaluation {
            objectives: dtlz_objectives(spec.base, pos, g),
            inequalities: dc_constraints(&spec, pos, g),
            equalities: Vec::new(),
        }
    });
    Ok(ProblemSpec::new(
        spec.name(),
        m,
        vec![(0.0, 1.0); n],
        spec.n_constraints(),
        0,
        evaluator,
    )?
    .with_benchmark(Benchmark::DcDtlz(spec)))
}
