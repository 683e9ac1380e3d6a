//! C ABI over `vorocell`.
//!
//! Specs and reports live behind opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`VcStatus`]; on failure, [`vc_last_error`] gives a message for the
//! calling thread. Strings handed out by the library are released with
//! [`vc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vorocell::generators::{builtin_family, FamilyId, GeneratorSpec};
use vorocell::report::{run_analyze, schedule_or_default, AnalysisReport, AnalyzeOptions};
use vorocell::verdict::{Claim, Verdict};
use vorocell::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownFamily = 3,
    ParseError = 4,
    InputError = 5,
    NotApplicable = 6,
    OutOfRange = 7,
    InvariantViolation = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VcClaim {
    Polyhedral = 0,
    NonPolyhedral = 1,
    Bounded = 2,
    Unbounded = 3,
    Inconclusive = 4,
}

/// Counts of one truncation radius.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VcRow {
    pub point_count: usize,
    pub reciprocal_count: usize,
    pub extreme_count: usize,
    pub facet_count: usize,
    pub origin_extreme: bool,
    pub all_reciprocal_extreme: bool,
    pub truncation_bounded: bool,
}

/// Opaque generator spec.
pub struct VcSpec {
    inner: GeneratorSpec,
}

/// Opaque analysis report.
pub struct VcReport {
    inner: AnalysisReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> VcStatus {
    match e {
        Error::UnknownFamily(_) => VcStatus::UnknownFamily,
        Error::Parse { .. } => VcStatus::ParseError,
        Error::NotApplicable(_) => VcStatus::NotApplicable,
        Error::Invariant(_) => VcStatus::InvariantViolation,
        _ => VcStatus::InputError,
    }
}

/// Runs `f`, recording errors and panics for [`vc_last_error`].
fn guard(f: impl FnOnce() -> Result<(), (VcStatus, String)>) -> VcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside vorocell");
            VcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (VcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (VcStatus, String) {
    (VcStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `s` is null or a nul-terminated string valid for reads.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (VcStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (VcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (VcStatus, String)> {
    let c = CString::new(s)
        .map_err(|_| (VcStatus::InputError, "string holds a nul byte".to_string()))?;
    // SAFETY: callers check `out` for null first.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `name` is a nul-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_spec_from_family(
    name: *const c_char,
    out: *mut *mut VcSpec,
) -> VcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id: FamilyId = read_str(name, "name")?.parse().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(VcSpec {
            inner: builtin_family(id),
        }));
        Ok(())
    })
}

/// Parses and validates a spec in the JSON file format.
///
/// # Safety
/// `json` is a nul-terminated string; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_spec_from_json(json: *const c_char, out: *mut *mut VcSpec) -> VcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = GeneratorSpec::from_json(read_str(json, "json")?).map_err(lib_err)?;
        let diags = vorocell::generators::validate_spec(&spec);
        if !diags.is_empty() {
            return Err(lib_err(Error::InconsistentSpec(
                diags.iter().map(ToString::to_string).collect(),
            )));
        }
        *out = Box::into_raw(Box::new(VcSpec { inner: spec }));
        Ok(())
    })
}

/// # Safety
/// `spec` is null or a handle from `vc_spec_from_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vc_spec_free(spec: *mut VcSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs the analysis. `schedule` is `"R1,R2,..."` or null for the default.
///
/// # Safety
/// `spec` is a live handle; `schedule` is null or nul-terminated; `out`
/// points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_analyze(
    spec: *const VcSpec,
    schedule: *const c_char,
    out: *mut *mut VcReport,
) -> VcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        let text = if schedule.is_null() {
            None
        } else {
            Some(read_str(schedule, "schedule")?)
        };
        let radii = schedule_or_default(text).map_err(lib_err)?;
        let report =
            run_analyze(&spec.inner, &radii, &AnalyzeOptions::default()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(VcReport { inner: report }));
        Ok(())
    })
}

/// # Safety
/// `report` is null or a handle from [`vc_analyze`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vc_report_free(report: *mut VcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

fn claim(v: &Verdict) -> VcClaim {
    match v.claim {
        Claim::Polyhedral => VcClaim::Polyhedral,
        Claim::NonPolyhedral => VcClaim::NonPolyhedral,
        Claim::Bounded => VcClaim::Bounded,
        Claim::Unbounded => VcClaim::Unbounded,
        Claim::Inconclusive => VcClaim::Inconclusive,
    }
}

unsafe fn verdict_out(
    report: *const VcReport,
    pick: fn(&AnalysisReport) -> &Verdict,
    claim_out: *mut VcClaim,
    certified_out: *mut bool,
) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if claim_out.is_null() || certified_out.is_null() {
            return Err(null("output pointer"));
        }
        let v = pick(&r.inner);
        *claim_out = claim(v);
        *certified_out = v.is_certified();
        Ok(())
    })
}

/// # Safety
/// `report` is a live handle; both outputs point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_polyhedrality(
    report: *const VcReport,
    claim_out: *mut VcClaim,
    certified_out: *mut bool,
) -> VcStatus {
    verdict_out(report, |r| &r.polyhedrality, claim_out, certified_out)
}

/// # Safety
/// `report` is a live handle; both outputs point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_boundedness(
    report: *const VcReport,
    claim_out: *mut VcClaim,
    certified_out: *mut bool,
) -> VcStatus {
    verdict_out(report, |r| &r.boundedness, claim_out, certified_out)
}

/// Whether the report carries the "approximated input" marker.
///
/// # Safety
/// `report` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_approximated(
    report: *const VcReport,
    out: *mut bool,
) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.spec.approximated;
        Ok(())
    })
}

/// # Safety
/// `report` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_row_count(report: *const VcReport, out: *mut usize) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.rows.len();
        Ok(())
    })
}

/// # Safety
/// `report` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_row(
    report: *const VcReport,
    index: usize,
    out: *mut VcRow,
) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let row = r.inner.rows.get(index).ok_or_else(|| {
            (
                VcStatus::OutOfRange,
                format!("row {index} of {}", r.inner.rows.len()),
            )
        })?;
        *out = VcRow {
            point_count: row.point_count,
            reciprocal_count: row.reciprocal_count,
            extreme_count: row.extreme_count,
            facet_count: row.facet_count,
            origin_extreme: row.origin_extreme,
            all_reciprocal_extreme: row.all_reciprocal_extreme,
            truncation_bounded: row.truncation_bounded,
        };
        Ok(())
    })
}

/// The report as JSON. Free the string with [`vc_string_free`].
///
/// # Safety
/// `report` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_json(
    report: *const VcReport,
    out: *mut *mut c_char,
) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(r.inner.to_json(), out)
    })
}

/// The report's figure as an SVG document. Free with [`vc_string_free`].
///
/// # Safety
/// `report` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vc_report_svg(report: *const VcReport, out: *mut *mut c_char) -> VcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let svg = vorocell::svg::render_svg(&r.inner).map_err(lib_err)?;
        give_string(svg, out)
    })
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
