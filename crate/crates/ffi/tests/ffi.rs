use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use vorocell_ffi::*;

fn family(name: &str) -> *mut VcSpec {
    let name = CString::new(name).unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(
        unsafe { vc_spec_from_family(name.as_ptr(), &mut spec) },
        VcStatus::Ok
    );
    spec
}

fn analyze(spec: *const VcSpec, schedule: Option<&str>) -> (VcStatus, *mut VcReport) {
    let schedule = schedule.map(|s| CString::new(s).unwrap());
    let mut report = ptr::null_mut();
    let st = unsafe {
        vc_analyze(
            spec,
            schedule.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            &mut report,
        )
    };
    (st, report)
}

fn last_error() -> String {
    let p = vc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parabola_through_handles() {
    let spec = family("parabola");
    let (st, report) = analyze(spec, Some("2,4,8"));
    assert_eq!(st, VcStatus::Ok);
    let (mut claim, mut certified) = (VcClaim::Inconclusive, false);
    unsafe {
        assert_eq!(
            vc_report_polyhedrality(report, &mut claim, &mut certified),
            VcStatus::Ok
        );
        assert_eq!((claim, certified), (VcClaim::Polyhedral, true));
        assert_eq!(
            vc_report_boundedness(report, &mut claim, &mut certified),
            VcStatus::Ok
        );
        assert_eq!((claim, certified), (VcClaim::Unbounded, true));
        let mut n = 0usize;
        assert_eq!(vc_report_row_count(report, &mut n), VcStatus::Ok);
        assert_eq!(n, 3);
        let mut row = VcRow::default();
        assert_eq!(vc_report_row(report, 2, &mut row), VcStatus::Ok);
        assert_eq!(
            (row.point_count, row.extreme_count, row.facet_count),
            (20, 10, 9)
        );
        assert_eq!(vc_report_row(report, 3, &mut row), VcStatus::OutOfRange);
        let mut approx = true;
        assert_eq!(vc_report_approximated(report, &mut approx), VcStatus::Ok);
        assert!(!approx);

        let mut s = ptr::null_mut();
        assert_eq!(vc_report_json(report, &mut s), VcStatus::Ok);
        let json = CStr::from_ptr(s).to_str().unwrap().to_owned();
        vc_string_free(s);
        assert!(json.contains("\"kind\": \"stabilization\""));
        assert_eq!(vc_report_svg(report, &mut s), VcStatus::Ok);
        assert!(CStr::from_ptr(s).to_str().unwrap().starts_with("<?xml"));
        vc_string_free(s);
        vc_report_free(report);
        vc_spec_free(spec);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("no_such_family").unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(
        unsafe { vc_spec_from_family(bad.as_ptr(), &mut spec) },
        VcStatus::UnknownFamily
    );
    assert!(spec.is_null());
    assert!(last_error().contains("no_such_family"));

    assert_eq!(
        unsafe { vc_spec_from_family(ptr::null(), &mut spec) },
        VcStatus::NullPointer
    );
    let name = CString::new("parabola").unwrap();
    assert_eq!(
        unsafe { vc_spec_from_family(name.as_ptr(), ptr::null_mut()) },
        VcStatus::NullPointer
    );

    let broken = CString::new("{\"dimension\": 2,\n \"points\": [[1, 0]").unwrap();
    assert_eq!(
        unsafe { vc_spec_from_json(broken.as_ptr(), &mut spec) },
        VcStatus::ParseError
    );
    assert!(last_error().contains("line 2"));

    let lattice = family("lattice_line");
    let (st, report) = analyze(lattice, Some("4,2"));
    assert_eq!(st, VcStatus::InputError);
    assert!(report.is_null());
    let (st, _) = analyze(ptr::null(), None);
    assert_eq!(st, VcStatus::NullPointer);
    unsafe { vc_spec_free(lattice) };

    let bytes = [0xffu8, 0];
    assert_eq!(
        unsafe { vc_spec_from_family(bytes.as_ptr().cast(), &mut spec) },
        VcStatus::InvalidUtf8
    );
    unsafe {
        vc_spec_free(ptr::null_mut());
        vc_report_free(ptr::null_mut());
        vc_string_free(ptr::null_mut());
    }
}

#[test]
fn finite_spec_from_json() {
    let json = CString::new(r#"{"dimension": 2, "kind": "finite", "points": [["0", "0"], ["2", "0"], ["0", "2"], ["-2", "-2"]]}"#).unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(
        unsafe { vc_spec_from_json(json.as_ptr(), &mut spec) },
        VcStatus::Ok,
        "{}",
        last_error()
    );
    let (st, report) = analyze(spec, None);
    assert_eq!(st, VcStatus::Ok);
    let (mut claim, mut certified) = (VcClaim::Inconclusive, false);
    unsafe {
        vc_report_boundedness(report, &mut claim, &mut certified);
        assert_eq!((claim, certified), (VcClaim::Bounded, true));
        vc_report_free(report);
        vc_spec_free(spec);
    }
}

#[test]
fn header_is_current() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/vorocell.h")).unwrap();
    for sym in [
        "typedef struct VcSpec VcSpec;",
        "typedef struct VcReport VcReport;",
        "VC_STATUS_INVARIANT_VIOLATION = 8",
        "enum VcStatus vc_analyze(",
        "void vc_string_free(char *s);",
        "const char *vc_last_error(void);",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
    assert!(!vc_version().is_null());
}

/// Compiles a small C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = dir.join("../../target/debug");
    if !lib_dir.join("libvorocell_ffi.a").exists() {
        eprintln!(
            "static library not built in {}; skipping",
            lib_dir.display()
        );
        return;
    }
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("smoke.c");
    let exe = tmp.join("smoke");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "vorocell.h"

int main(void) {
    VcSpec *spec = NULL;
    VcReport *report = NULL;
    if (vc_spec_from_family("strip_lattice", &spec) != VC_STATUS_OK) return 1;
    if (vc_analyze(spec, "2,4,8,16", &report) != VC_STATUS_OK) return 2;
    VcClaim claim;
    bool certified = false;
    vc_report_boundedness(report, &claim, &certified);
    if (claim != VC_CLAIM_BOUNDED || !certified) return 3;
    if (vc_spec_from_family("bogus", &spec) != VC_STATUS_UNKNOWN_FAMILY) return 4;
    if (strstr(vc_last_error(), "bogus") == NULL) return 5;
    vc_report_free(report);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let cc = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(dir.join("include"))
        .arg(lib_dir.join("libvorocell_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    match cc {
        Ok(s) => assert!(s.success(), "C compile failed"),
        Err(e) => {
            eprintln!("no C compiler ({e}); skipping");
            return;
        }
    }
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
