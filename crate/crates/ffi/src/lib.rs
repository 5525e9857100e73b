//! C ABI over the `ctaea` crate.
//!
//! Problems and run records are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`CtaeaStatus`]; on
//! failure [`ctaea_last_error`] describes the cause for the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ctaea::algorithm::{run_with, AlgorithmKind, RunConfig, RunRecord};
use ctaea::decomposition::Lattice;
use ctaea::harness::to_json;
use ctaea::metrics::igd_of_points;
use ctaea::problems::{default_resolution, make_problem, reference_front};
use ctaea::{Archive, Error, ProblemSpec};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtaeaStatus {
    Ok = 0,
    NullPointer = 1,
    /// Unknown problem, bad dimension, unsupported population size, ...
    InvalidConfig = 2,
    /// A precondition was broken (wrong buffer length, out-of-bounds input).
    ContractViolation = 3,
    EmptyFront = 4,
    Io = 5,
    /// Not valid UTF-8, or the library panicked.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtaeaAlgorithm {
    /// Adaptive CA/DA mating selection.
    Adaptive = 0,
    /// Original restricted mating.
    Baseline = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtaeaArchiveKind {
    Convergence = 0,
    Diversity = 1,
}

/// Opaque benchmark problem.
pub struct CtaeaProblem {
    spec: ProblemSpec,
}

/// Opaque result of one optimization run.
pub struct CtaeaRecord {
    record: RunRecord,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(err: Error) -> CtaeaStatus {
    let status = match &err {
        Error::Config(_) => CtaeaStatus::InvalidConfig,
        Error::Contract(_) => CtaeaStatus::ContractViolation,
        Error::EmptyFront { .. } => CtaeaStatus::EmptyFront,
        Error::Io { .. } | Error::Format { .. } => CtaeaStatus::Io,
    };
    set_last_error(err.to_string());
    status
}

/// Runs `body`, turning panics into [`CtaeaStatus::Internal`].
fn guard(body: impl FnOnce() -> CtaeaStatus) -> CtaeaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            CtaeaStatus::Internal
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_last_error(concat!("null pointer: ", stringify!($p)));
            return CtaeaStatus::NullPointer;
        })+
    };
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ctaea_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ctaea_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a benchmark by name (`"ctp6"`, `"dc1-dtlz1"`, ...). `m` and `n`
/// of 0 select the defaults.
#[no_mangle]
pub unsafe extern "C" fn ctaea_problem_new(
    name: *const c_char,
    m: usize,
    n: usize,
    out: *mut *mut CtaeaProblem,
) -> CtaeaStatus {
    non_null!(name, out);
    guard(|| {
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            set_last_error("problem name is not UTF-8");
            return CtaeaStatus::Internal;
        };
        let opt = |v: usize| (v != 0).then_some(v);
        match make_problem(name, opt(m), opt(n)) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(CtaeaProblem { spec }));
                CtaeaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctaea_problem_free(problem: *mut CtaeaProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Decision dimension, objective count and inequality-constraint count.
/// Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn ctaea_problem_dims(
    problem: *const CtaeaProblem,
    n: *mut usize,
    m: *mut usize,
    n_constraints: *mut usize,
) -> CtaeaStatus {
    non_null!(problem);
    let spec = &(*problem).spec;
    if !n.is_null() {
        *n = spec.n();
    }
    if !m.is_null() {
        *m = spec.m();
    }
    if !n_constraints.is_null() {
        *n_constraints = spec.n_inequalities() + spec.n_equalities();
    }
    CtaeaStatus::Ok
}

/// Evaluates `x` (length n), writing m objectives to `f` and the constraint
/// violation to `cv`.
#[no_mangle]
pub unsafe extern "C" fn ctaea_problem_evaluate(
    problem: *const CtaeaProblem,
    x: *const f64,
    x_len: usize,
    f: *mut f64,
    f_len: usize,
    cv: *mut f64,
) -> CtaeaStatus {
    non_null!(problem, x, f, cv);
    guard(|| {
        let spec = &(*problem).spec;
        if f_len != spec.m() {
            return fail(Error::Contract(format!(
                "objective buffer holds {f_len} values, problem has {}",
                spec.m()
            )));
        }
        match ctaea::evaluate(spec, slice::from_raw_parts(x, x_len)) {
            Ok(s) => {
                slice::from_raw_parts_mut(f, f_len).copy_from_slice(&s.f);
                *cv = s.cv;
                CtaeaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the optimizer for `generations` generations. `population` 0 picks
/// the default weight lattice size; `ref_resolution` 0 the default front
/// resolution (the front is built for the final IGD).
#[no_mangle]
pub unsafe extern "C" fn ctaea_run(
    problem: *const CtaeaProblem,
    algorithm: CtaeaAlgorithm,
    population: usize,
    generations: u64,
    seed: u64,
    ref_resolution: usize,
    out: *mut *mut CtaeaRecord,
) -> CtaeaStatus {
    non_null!(problem, out);
    guard(|| {
        let spec = &(*problem).spec;
        let m = spec.m();
        let population = if population == 0 {
            Lattice::default_for(m).size(m)
        } else {
            population
        };
        let kind = match algorithm {
            CtaeaAlgorithm::Adaptive => AlgorithmKind::Ctaea2,
            CtaeaAlgorithm::Baseline => AlgorithmKind::CtaeaBaseline,
        };
        let config = RunConfig::new(spec.name(), kind, population, generations, seed);
        let resolution = if ref_resolution == 0 {
            default_resolution(m)
        } else {
            ref_resolution
        };
        let result = reference_front(spec, resolution)
            .and_then(|front| run_with(spec, &config, Some(&front)));
        match result {
            Ok(record) => {
                *out = Box::into_raw(Box::new(CtaeaRecord { record }));
                CtaeaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctaea_record_free(record: *mut CtaeaRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}

/// Final IGD of the convergence archive. `defined` is set to false (and
/// `igd` to NaN) when the archive holds no feasible solution.
#[no_mangle]
pub unsafe extern "C" fn ctaea_record_igd(
    record: *const CtaeaRecord,
    igd: *mut f64,
    defined: *mut bool,
) -> CtaeaStatus {
    non_null!(record, igd, defined);
    let value = (*record).record.igd;
    *igd = value.unwrap_or(f64::NAN);
    *defined = value.is_some();
    CtaeaStatus::Ok
}

/// Generations executed and evaluations spent.
#[no_mangle]
pub unsafe extern "C" fn ctaea_record_counts(
    record: *const CtaeaRecord,
    generations: *mut u64,
    evaluations: *mut u64,
) -> CtaeaStatus {
    non_null!(record, generations, evaluations);
    *generations = (*record).record.generations;
    *evaluations = (*record).record.evaluations;
    CtaeaStatus::Ok
}

fn archive(record: &RunRecord, kind: CtaeaArchiveKind) -> &Archive {
    match kind {
        CtaeaArchiveKind::Convergence => &record.final_ca,
        CtaeaArchiveKind::Diversity => &record.final_da,
    }
}

/// Number of members in the chosen final archive (0 for a null record).
#[no_mangle]
pub unsafe extern "C" fn ctaea_record_archive_len(
    record: *const CtaeaRecord,
    kind: CtaeaArchiveKind,
) -> usize {
    if record.is_null() {
        return 0;
    }
    archive(&(*record).record, kind).len()
}

/// Copies the chosen archive into row-major `objectives` (len × m values)
/// and `cv` (len values).
#[no_mangle]
pub unsafe extern "C" fn ctaea_record_archive(
    record: *const CtaeaRecord,
    kind: CtaeaArchiveKind,
    objectives: *mut f64,
    objectives_len: usize,
    cv: *mut f64,
    cv_len: usize,
) -> CtaeaStatus {
    non_null!(record, objectives, cv);
    let record = &(*record).record;
    let members = archive(record, kind);
    if objectives_len != members.len() * record.m || cv_len != members.len() {
        return fail(Error::Contract(format!(
            "archive has {} members with {} objectives; buffers hold {objectives_len} and {cv_len}",
            members.len(),
            record.m
        )));
    }
    let objectives = slice::from_raw_parts_mut(objectives, objectives_len);
    let cv = slice::from_raw_parts_mut(cv, cv_len);
    for (i, s) in members.iter().enumerate() {
        objectives[i * record.m..(i + 1) * record.m].copy_from_slice(&s.f);
        cv[i] = s.cv;
    }
    CtaeaStatus::Ok
}

/// Serializes the full record as JSON into a new string released with
/// [`ctaea_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ctaea_record_to_json(
    record: *const CtaeaRecord,
    out: *mut *mut c_char,
) -> CtaeaStatus {
    non_null!(record, out);
    guard(|| {
        let Ok(json) = CString::new(to_json(&(*record).record)) else {
            set_last_error("record JSON contains a NUL byte");
            return CtaeaStatus::Internal;
        };
        *out = json.into_raw();
        CtaeaStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn ctaea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// IGD of `n_points` row-major points against `n_reference` reference
/// points, all with `m` objectives.
#[no_mangle]
pub unsafe extern "C" fn ctaea_igd(
    points: *const f64,
    n_points: usize,
    reference: *const f64,
    n_reference: usize,
    m: usize,
    out: *mut f64,
) -> CtaeaStatus {
    non_null!(points, reference, out);
    guard(|| {
        if m == 0 {
            return fail(Error::Contract("m must be positive".into()));
        }
        let rows = |p: *const f64, count: usize| -> Vec<Vec<f64>> {
            slice::from_raw_parts(p, count * m)
                .chunks(m)
                .map(<[f64]>::to_vec)
                .collect()
        };
        match igd_of_points(&rows(points, n_points), &rows(reference, n_reference)) {
            Ok(v) => {
                *out = v;
                CtaeaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
