use std::ffi::{c_char, CStr};
use std::ptr;

use dirspin_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { dirspin_last_error_message(buf.as_mut_ptr(), buf.len()) };
    if n == 0 {
        return String::new();
    }
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(dirspin_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn three_spin_handle() {
    let mut h = ptr::null_mut();
    let s = unsafe { dirspin_optimal_fidelity(3, 1, &mut h) };
    assert_eq!(s, DirspinStatus::Ok);
    assert!(!h.is_null());
    unsafe {
        assert!((dirspin_fidelity_value(h) - 0.84495).abs() < 1e-5);
        assert!((dirspin_fidelity_one_minus_f(h) - 0.15505).abs() < 1e-5);
        let mean = dirspin_fidelity_mean_x(h);
        assert!((dirspin_fidelity_value(h) - (1.0 + mean) / 2.0).abs() < 1e-12);
        assert_eq!(dirspin_fidelity_twice_m(h), 1);
        assert_eq!(dirspin_fidelity_coeff_count(h), 2);

        let mut c = [0.0; 2];
        assert_eq!(
            dirspin_fidelity_coeffs(h, c.as_mut_ptr(), 2),
            DirspinStatus::Ok
        );
        assert!((c[0] - 0.79755).abs() < 1e-5);
        assert!((c[1] - 0.60326).abs() < 1e-5);
        let mut small = [0.0; 1];
        assert_eq!(
            dirspin_fidelity_coeffs(h, small.as_mut_ptr(), 1),
            DirspinStatus::BufferTooSmall
        );
        assert!(last_error().contains("2 needed"));

        let mut p = 0.0;
        assert_eq!(dirspin_fidelity_density(h, 1.0, &mut p), DirspinStatus::Ok);
        let amp = c[0] * 2f64.sqrt() + c[1] * 2.0;
        assert!((p - 0.5 * amp * amp).abs() < 1e-12);
        assert_eq!(
            dirspin_fidelity_density(h, 1.5, &mut p),
            DirspinStatus::InvalidArgument
        );
        dirspin_fidelity_free(h);
    }
}

#[test]
fn lowest_and_parallel_handles() {
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(dirspin_lowest_m_fidelity(2, &mut a), DirspinStatus::Ok);
        assert_eq!(dirspin_parallel_fidelity(2, &mut b), DirspinStatus::Ok);
        let want = (1.0 + 1.0 / 3f64.sqrt()) / 2.0;
        assert!((dirspin_fidelity_value(a) - want).abs() < 1e-12);
        assert!((dirspin_fidelity_value(b) - 0.75).abs() < 1e-12);
        assert_eq!(dirspin_fidelity_twice_m(a), 0);
        assert_eq!(dirspin_fidelity_twice_m(b), 2);
        dirspin_fidelity_free(a);
        dirspin_fidelity_free(b);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            dirspin_optimal_fidelity(2, 1, &mut h),
            DirspinStatus::ParityMismatch
        );
        assert!(h.is_null());
        assert!(last_error().starts_with("ParityMismatch"));
        assert_eq!(dirspin_optimal_fidelity(0, 0, &mut h), DirspinStatus::BadN);
        assert_eq!(
            dirspin_optimal_fidelity(3, 5, &mut h),
            DirspinStatus::OutOfRange
        );
        assert_eq!(
            dirspin_optimal_fidelity(3, 1, ptr::null_mut()),
            DirspinStatus::NullPointer
        );

        // a successful call clears the pending message
        assert_eq!(dirspin_optimal_fidelity(1, 1, &mut h), DirspinStatus::Ok);
        assert_eq!(last_error(), "");
        dirspin_fidelity_free(h);
    }
}

#[test]
fn error_message_truncation() {
    let mut h = ptr::null_mut();
    unsafe {
        dirspin_optimal_fidelity(2, 1, &mut h);
        let full = dirspin_last_error_message(ptr::null_mut(), 0);
        assert!(full > 8);
        let mut buf = [1 as c_char; 8];
        assert_eq!(
            dirspin_last_error_message(buf.as_mut_ptr(), buf.len()),
            full
        );
        assert_eq!(buf[7], 0);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes(), b"ParityM");
    }
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert!(dirspin_fidelity_value(ptr::null()).is_nan());
        assert_eq!(dirspin_fidelity_twice_m(ptr::null()), -1);
        assert_eq!(dirspin_fidelity_coeff_count(ptr::null()), 0);
        dirspin_fidelity_free(ptr::null_mut());
        let mut p = 0.0;
        assert_eq!(
            dirspin_fidelity_density(ptr::null(), 0.0, &mut p),
            DirspinStatus::NullPointer
        );
    }
}

#[test]
fn dimension() {
    let mut d = 0u64;
    unsafe {
        assert_eq!(dirspin_hilbert_dimension(3, &mut d), DirspinStatus::Ok);
        assert_eq!(d, 6);
        assert_eq!(dirspin_hilbert_dimension(0, &mut d), DirspinStatus::BadN);
        assert_eq!(
            dirspin_hilbert_dimension(3, ptr::null_mut()),
            DirspinStatus::NullPointer
        );
    }
}

#[test]
fn simulation_summary() {
    let mut a = DirspinSimulation::default();
    let mut b = DirspinSimulation::default();
    unsafe {
        assert_eq!(dirspin_simulate(3, 1, 9, 20_000, &mut a), DirspinStatus::Ok);
        assert_eq!(dirspin_simulate(3, 1, 9, 20_000, &mut b), DirspinStatus::Ok);
        assert_eq!(
            dirspin_simulate(3, 1, 9, 0, &mut b),
            DirspinStatus::InvalidArgument
        );
    }
    assert!((a.exact_fidelity - 0.84495).abs() < 1e-5);
    assert!((a.mean_fidelity_estimate - a.exact_fidelity).abs() <= 5.0 * a.standard_error);
    assert!(a.accepted_fraction > 0.0 && a.accepted_fraction <= 1.0);
    assert_eq!(a, b);
}

#[test]
fn verification_report() {
    let mut r = DirspinVerifyReport::default();
    unsafe {
        assert_eq!(dirspin_verify(4, 0, &mut r), DirspinStatus::Ok);
        assert_eq!(r.passed, 1);
        assert_eq!(r.gram_dimension, 9);
        assert!(r.coupling_oracle_deviation < 1e-10);
        assert!(r.normalization_deviation < 1e-10);
        assert!(r.gram_deviation < 1e-9);
        assert_eq!(
            dirspin_verify(21, 1, &mut r),
            DirspinStatus::InvalidArgument
        );
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dirspin.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15, "{exports:?}");
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in [
        "DirspinStatus",
        "DirspinFidelity",
        "DirspinSimulation",
        "DirspinVerifyReport",
    ] {
        assert!(header.contains(ty), "{ty} missing from header");
    }
    assert!(header.contains("DIRSPIN_STATUS_PARITY_MISMATCH = 3"));
}
