//! Benchmark suites: CTP1-CTP8 and DC-DTLZ, plus their reference fronts.

pub mod ctp;
pub mod dc_dtlz;
mod front;

use serde::{Deserialize, Serialize};

pub use ctp::{make_ctp, make_ctp_with, CtpParams, CtpSpec, InnerDistance, CTP_DEFAULT_INNER, CTP_DEFAULT_N};
pub use dc_dtlz::{make_dc_dtlz, DcDtlzSpec, DcFamily, DtlzBase};
pub use front::{
    cached_reference_front, front_cache_path, reference_front, ReferenceFront, MIN_RESOLUTION,
};

use crate::error::{Error, Result};
use crate::solution::ProblemSpec;

/// Identity of a built-in benchmark problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum Benchmark {
    Ctp(CtpSpec),
    DcDtlz(DcDtlzSpec),
}

/// Builds a benchmark by name: `ctp1`..`ctp8` or `dcF-dtlzB` (F in 1..3,
/// B in {1, 3}). `m` applies to DC-DTLZ only (default 3); `n` overrides the
/// default decision dimension.
pub fn make_problem(name: &str, m: Option<usize>, n: Option<usize>) -> Result<ProblemSpec> {
    let lower = name.to_ascii_lowercase();
    if let Some(id) = lower.strip_prefix("ctp") {
        let id: u8 = id
            .parse()
            .map_err(|_| Error::config(format!("unknown problem {name}")))?;
        if let Some(m) = m.filter(|&m| m != 2) {
            return Err(Error::config(format!("CTP problems have 2 objectives, got m = {m}")));
        }
        return make_ctp(id, n.unwrap_or(CTP_DEFAULT_N));
    }
    if lower.starts_with("dc") {
        let base: DcDtlzSpec = lower.parse()?;
        let spec = DcDtlzSpec::standard(base.family, base.base, m.unwrap_or(3));
        return make_dc_dtlz(spec, n.unwrap_or_else(|| spec.default_n()));
    }
    Err(Error::config(format!("unknown problem {name}")))
}

/// Default reference-front resolution for `m` objectives.
pub fn default_resolution(m: usize) -> usize {
    if m <= 3 {
        1000
    } else {
        5000
    }
}
