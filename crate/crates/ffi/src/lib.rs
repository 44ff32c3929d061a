//! C interface to `stickysym`.
//!
//! Clusters and reports are opaque heap handles released with their `_free`
//! functions. Every fallible call returns an [`SsStatus`]; the message of the
//! most recent failure on the calling thread is available from
//! [`ss_last_error`]. Strings returned by the library are released with
//! [`ss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use stickysym::geometry::Partition;
use stickysym::symmetry::{colored_symmetry, sticky_symmetry_group, SymmetryOptions, SymmetryReport};
use stickysym::{Cluster, Error};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Overlap = 4,
    RankDeficient = 5,
    InfeasibleEndpoint = 6,
    ColorRadiiConflict = 7,
    Overflow = 8,
    Panic = 9,
    Other = 10,
}

/// Opaque sphere cluster.
pub struct SsCluster(Cluster);

/// Opaque symmetry report.
pub struct SsReport(SymmetryReport);

/// Tunable subset of the symmetry options.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SsOptions {
    pub seed: u64,
    pub retries: usize,
    pub nmax: usize,
    pub nr: usize,
    pub tol: f64,
    pub sigma: f64,
    pub beta: f64,
    /// Nonzero to use the full group with inversions.
    pub include_inversions: i32,
    /// Sampling steps applied to the cluster before the analysis.
    pub sample_steps: usize,
    pub jobs: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SsStatus {
    match e {
        Error::Io(_) | Error::Json(_) => SsStatus::Parse,
        Error::Overlap(..) => SsStatus::Overlap,
        Error::RankDeficient(_) => SsStatus::RankDeficient,
        Error::InfeasibleEndpoint => SsStatus::InfeasibleEndpoint,
        Error::ColorRadiiConflict(_) => SsStatus::ColorRadiiConflict,
        Error::InvalidConfig(_) | Error::InvalidPartition(_) | Error::InvalidPermutation(_) => {
            SsStatus::InvalidArgument
        }
        _ => SsStatus::Other,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SsStatus, String)>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SsStatus::Panic
        }
    }
}

fn lib<T>(r: stickysym::Result<T>) -> Result<T, (SsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (SsStatus, String) {
    (SsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (SsStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SsStatus::InvalidArgument, "string is not valid UTF-8".into()))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, (SsStatus, String)> {
    p.as_mut().ok_or_else(null)
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, (SsStatus, String)> {
    p.as_ref().ok_or_else(null)
}

fn to_c_string(s: String) -> Result<*mut c_char, (SsStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (SsStatus::Other, "string contains NUL".into()))
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Default options.
#[no_mangle]
pub extern "C" fn ss_options_default() -> SsOptions {
    let d = SymmetryOptions::default();
    SsOptions {
        seed: d.path.seed,
        retries: d.path.retries,
        nmax: d.path.nmax,
        nr: d.path.nr,
        tol: d.path.tol,
        sigma: d.path.sigma,
        beta: d.path.beta,
        include_inversions: d.include_inversions as i32,
        sample_steps: d.sample_steps,
        jobs: d.jobs,
    }
}

fn symmetry_options(o: &SsOptions) -> SymmetryOptions {
    let mut s = SymmetryOptions::default();
    s.path.seed = o.seed;
    s.path.retries = o.retries;
    s.path.nmax = o.nmax;
    s.path.nr = o.nr;
    s.path.tol = o.tol;
    s.path.sigma = o.sigma;
    s.path.beta = o.beta;
    s.include_inversions = o.include_inversions != 0;
    s.sample_steps = o.sample_steps;
    s.jobs = o.jobs.max(1);
    s
}

/// Parses a cluster from JSON (`{"positions": [[x,y,z],...], "radii": [...]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_cluster_from_json(json: *const c_char, out: *mut *mut SsCluster) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let (cluster, _) = lib(stickysym::io::parse_cluster(str_arg(json)?))?;
        *out = Box::into_raw(Box::new(SsCluster(cluster)));
        Ok(())
    })
}

/// Builds a named cluster: `loop:N`, `chain:N`, `octahedron`,
/// `polytetrahedron` or `dimer`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_cluster_builtin(name: *const c_char, out: *mut *mut SsCluster) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let cluster = lib(stickysym::cli::builtin_cluster(str_arg(name)?))?;
        *out = Box::into_raw(Box::new(SsCluster(cluster)));
        Ok(())
    })
}

/// Number of spheres, or 0 for a null handle.
///
/// # Safety
/// `cluster` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_cluster_len(cluster: *const SsCluster) -> usize {
    cluster.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `cluster` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_cluster_free(cluster: *mut SsCluster) {
    if !cluster.is_null() {
        drop(Box::from_raw(cluster));
    }
}

/// Computes the sticky symmetry group. `options` may be null for defaults.
///
/// # Safety
/// `cluster` must be a live handle, `options` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ss_symmetry(
    cluster: *const SsCluster,
    options: *const SsOptions,
    out: *mut *mut SsReport,
) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let cluster = in_ref(cluster)?;
        let opts = options.as_ref().copied().unwrap_or_else(|| ss_options_default());
        let report = lib(sticky_symmetry_group(&cluster.0, &symmetry_options(&opts)))?;
        *out = Box::into_raw(Box::new(SsReport(report)));
        Ok(())
    })
}

/// Restricts a report to a coloring given as comma-separated labels.
///
/// # Safety
/// `report` must be a live handle, `labels` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_color(
    report: *const SsReport,
    labels: *const c_char,
    out: *mut *mut SsReport,
) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let report = in_ref(report)?;
        let colors = lib(Partition::parse_labels(str_arg(labels)?))?;
        let colored = lib(colored_symmetry(&report.0, &colors))?;
        *out = Box::into_raw(Box::new(SsReport(colored)));
        Ok(())
    })
}

/// Symmetry number σ, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_report_sigma(report: *const SsReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.sigma)
}

/// Order of the point group, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_report_point_group_order(report: *const SsReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.point_group.len() as u64)
}

/// Number of elements inferred by group closure rather than found by a path.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_report_closure_inferred(report: *const SsReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.closure_inferred as u64)
}

/// Counting number; fails with `SS_STATUS_OVERFLOW` if it exceeds 64 bits.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_counting_number(report: *const SsReport, out: *mut u64) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let n = in_ref(report)?.0.counting_number;
        *out = u64::try_from(n).map_err(|_| (SsStatus::Overflow, format!("counting number {n} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Serializes a report to JSON; release the string with [`ss_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_to_json(report: *const SsReport, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = to_c_string(lib(in_ref(report)?.0.to_json())?)?;
        Ok(())
    })
}

/// Reads a report serialized by [`ss_report_to_json`] or the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_from_json(json: *const c_char, out: *mut *mut SsReport) -> SsStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let report = lib(SymmetryReport::from_json(str_arg(json)?))?;
        *out = Box::into_raw(Box::new(SsReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_report_free(report: *mut SsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

