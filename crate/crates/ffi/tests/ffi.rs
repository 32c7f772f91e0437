use std::ffi::{c_char, CStr};
use std::ptr;

use segre_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    segre_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(segre_last_error_message())
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn symbolic_integral_round_trip() {
    unsafe {
        let opts = segre_options_default();
        let engine = segre_engine_new(&opts);
        assert!(!engine.is_null());
        let mut poly = ptr::null_mut();
        assert_eq!(segre_integral(engine, 2, &mut poly), SegreStatus::Ok);
        assert_eq!(segre_poly_degree(poly), 2);

        let mut s = ptr::null_mut();
        assert_eq!(segre_poly_to_string(poly, &mut s), SegreStatus::Ok);
        assert_eq!(take(s), "-1/2*d^2 + 3/2*d");
        assert_eq!(segre_poly_to_json(poly, &mut s), SegreStatus::Ok);
        assert_eq!(take(s), r#"[["0","1"],["3","2"],["-1","2"]]"#);
        assert_eq!(segre_poly_coeff(poly, 1, &mut s), SegreStatus::Ok);
        assert_eq!(take(s), "3/2");
        assert_eq!(segre_poly_eval(poly, 5, &mut s), SegreStatus::Ok);
        assert_eq!(take(s), "-5");
        assert!(segre_poly_divisible_by_d_minus_3(poly));
        segre_poly_free(poly);

        assert_eq!(segre_integral(engine, 1, &mut poly), SegreStatus::Ok);
        assert_eq!(segre_poly_degree(poly), -1);
        segre_poly_free(poly);
        segre_engine_free(engine);
    }
}

#[test]
fn fixed_d_engine() {
    unsafe {
        let opts = SegreOptions {
            fixed_d: true,
            d: 3,
            ..segre_options_default()
        };
        let engine = segre_engine_new(&opts);
        for n in 1..=5 {
            let mut poly = ptr::null_mut();
            assert_eq!(segre_integral(engine, n, &mut poly), SegreStatus::Ok);
            assert_eq!(segre_poly_degree(poly), -1, "n={n}");
            segre_poly_free(poly);
        }
        segre_engine_free(engine);
    }
}

#[test]
fn checks() {
    unsafe {
        let mut passed = false;
        assert_eq!(
            segre_check_main_theorem(3, 6, 4, &mut passed),
            SegreStatus::Ok
        );
        assert!(passed);
        passed = false;
        assert_eq!(segre_check_wkmain(1, 5, 4, &mut passed), SegreStatus::Ok);
        assert!(passed);
        passed = false;
        let prefix = [1u8];
        assert_eq!(
            segre_check_xi(0, 4, 5, prefix.as_ptr(), 1, &mut passed),
            SegreStatus::Ok
        );
        assert!(passed);
        assert_eq!(
            segre_check_xi(0, 3, 3, ptr::null(), 0, &mut passed),
            SegreStatus::Ok
        );

        assert_eq!(
            segre_check_main_theorem(3, 6, 2, &mut passed),
            SegreStatus::InvalidArgument
        );
        assert!(last_error().contains("n >= k"));
        let bad = [7u8];
        assert_eq!(
            segre_check_xi(0, 4, 5, bad.as_ptr(), 1, &mut passed),
            SegreStatus::InvalidArgument
        );
    }
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        assert!(segre_engine_new(ptr::null()).is_null());
        let mut poly = ptr::null_mut();
        assert_eq!(
            segre_integral(ptr::null(), 2, &mut poly),
            SegreStatus::NullPointer
        );
        assert!(last_error().contains("engine"));
        let mut s = ptr::null_mut();
        assert_eq!(
            segre_poly_to_string(ptr::null(), &mut s),
            SegreStatus::NullPointer
        );
        assert_eq!(
            segre_check_main_theorem(1, 1, 1, ptr::null_mut()),
            SegreStatus::NullPointer
        );
        assert_eq!(
            segre_check_xi(0, 1, 1, ptr::null(), 2, ptr::null_mut()),
            SegreStatus::NullPointer
        );
        assert_eq!(segre_poly_degree(ptr::null()), -1);
        segre_poly_free(ptr::null_mut());
        segre_engine_free(ptr::null_mut());
        segre_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/segre.h");
    for name in [
        "segre_engine_new",
        "segre_engine_free",
        "segre_integral",
        "segre_poly_to_json",
        "segre_string_free",
        "segre_check_main_theorem",
        "segre_last_error_message",
        "typedef struct SegreEngine SegreEngine",
        "SEGRE_STATUS_NULL_POINTER = 1",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compiles the C smoke program against the static library when a C
/// compiler is on the path.
#[test]
fn c_program_links_and_runs() {
    use std::path::PathBuf;
    use std::process::Command;

    let Some(cc) = ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libsegre_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("segre_smoke");
    let status = Command::new(cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "-1/2*d^2 + 3/2*d\n");
}
