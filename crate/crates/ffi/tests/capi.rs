//! Exercises the C ABI exactly as a foreign caller would: through the
//! exported symbols, out-pointers and status codes.

use std::ptr;

use eprsim_ffi::*;

fn default_config() -> EprRunConfig {
    let mut config = std::mem::MaybeUninit::<EprRunConfig>::uninit();
    let status = unsafe { eprsim_run_config_default(config.as_mut_ptr()) };
    assert_eq!(status, EprStatus::Ok);
    unsafe { config.assume_init() }
}

#[test]
fn version_is_a_c_string() {
    let ptr = eprsim_version();
    assert!(!ptr.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
    assert_eq!(s, env!("CARGO_PKG_VERSION"));
}

#[test]
fn pbs_measure_reports_all_three_channels() {
    let mut out = 0i32;
    unsafe {
        assert_eq!(eprsim_pbs_measure(0.0, 0.0, 0.0, &mut out), EprStatus::Ok);
        assert_eq!(out, 1);
        assert_eq!(
            eprsim_pbs_measure(std::f64::consts::FRAC_PI_2, 0.0, 0.0, &mut out),
            EprStatus::Ok
        );
        assert_eq!(out, -1);
        assert_eq!(
            eprsim_pbs_measure(std::f64::consts::FRAC_PI_4 + 0.01, 0.0, 0.1, &mut out),
            EprStatus::Ok
        );
        assert_eq!(out, 0);
        // invalid threshold
        assert_eq!(
            eprsim_pbs_measure(0.0, 0.0, 0.6, &mut out),
            EprStatus::InvalidConfig
        );
        assert_eq!(
            eprsim_pbs_measure(0.0, 0.0, 0.0, ptr::null_mut()),
            EprStatus::NullArgument
        );
    }
}

#[test]
fn sweep_handles_match_the_rust_api() {
    let mut config = default_config();
    config.seed = 7;
    config.threshold = 0.1;
    config.decoherence = 0.1;

    let mut handle: *mut EprCurve = ptr::null_mut();
    let status = unsafe { eprsim_sweep_run(&config, 0, &mut handle) };
    assert_eq!(status, EprStatus::Ok);
    assert!(!handle.is_null());
    assert_eq!(unsafe { eprsim_curve_len(handle) }, 101);

    // spot-check a point against the direct library call
    let rust_config = eprsim::RunConfig {
        threshold: 0.1,
        decoherence: 0.1,
        seed: 7,
        ..eprsim::RunConfig::default()
    };
    let rust_curve = eprsim::run_sweep(&rust_config, 0).unwrap();
    for index in [0usize, 50, 100] {
        let mut alpha = 0.0f64;
        let mut counts = EprCoincidenceCounts::default();
        let status = unsafe { eprsim_curve_point(handle, index, &mut alpha, &mut counts) };
        assert_eq!(status, EprStatus::Ok);
        let expected = &rust_curve.points[index];
        assert_eq!(alpha.to_bits(), expected.alpha_rad.to_bits());
        assert_eq!(counts.n_pp, expected.counts.n_pp);
        assert_eq!(counts.n_discarded, expected.counts.n_discarded);
        assert_eq!(
            counts.n_pp + counts.n_pm + counts.n_mp + counts.n_mm + counts.n_discarded,
            config.pairs_per_setting
        );
    }

    let mut vis = 0.0f64;
    assert_eq!(unsafe { eprsim_curve_visibility(handle, &mut vis) }, EprStatus::Ok);
    assert_eq!(vis, eprsim::visibility(&rust_curve).unwrap());

    // out-of-range and null handling
    let status = unsafe { eprsim_curve_point(handle, 101, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(status, EprStatus::OutOfRange);
    unsafe { eprsim_curve_free(handle) };
    unsafe { eprsim_curve_free(ptr::null_mut()) };
}

#[test]
fn invalid_configs_are_rejected_not_crashed() {
    let mut config = default_config();
    config.threshold = 0.75;
    let mut handle: *mut EprCurve = ptr::null_mut();
    assert_eq!(
        unsafe { eprsim_sweep_run(&config, 0, &mut handle) },
        EprStatus::InvalidConfig
    );
    assert!(handle.is_null());
    assert_eq!(
        unsafe { eprsim_sweep_run(ptr::null(), 0, &mut handle) },
        EprStatus::NullArgument
    );
}

#[test]
fn chsh_report_round_trips() {
    let mut config = default_config();
    config.seed = 107;
    config.pairs_per_setting = 2_000;
    config.threshold = 0.1;
    config.decoherence = 0.1;
    config.runs = 5;

    let mut handle: *mut EprChshReport = ptr::null_mut();
    assert_eq!(unsafe { eprsim_chsh_run(&config, &mut handle) }, EprStatus::Ok);

    let mut summary = std::mem::MaybeUninit::<EprChshSummary>::uninit();
    assert_eq!(
        unsafe { eprsim_chsh_summary(handle, summary.as_mut_ptr()) },
        EprStatus::Ok
    );
    let summary = unsafe { summary.assume_init() };
    assert_eq!(summary.runs, 5);
    assert!(summary.abs_mean_s > 2.0 && summary.abs_mean_s < 4.0);
    assert!((summary.std_err - summary.std_dev / 5.0f64.sqrt()).abs() < 1e-15);

    let mut s = 0.0f64;
    assert_eq!(unsafe { eprsim_chsh_s_value(handle, 4, &mut s) }, EprStatus::Ok);
    assert!(s.abs() <= 4.0);
    assert_eq!(
        unsafe { eprsim_chsh_s_value(handle, 5, &mut s) },
        EprStatus::OutOfRange
    );
    unsafe { eprsim_chsh_free(handle) };

    // single-run experiments have no dispersion
    config.runs = 1;
    let mut handle: *mut EprChshReport = ptr::null_mut();
    assert_eq!(
        unsafe { eprsim_chsh_run(&config, &mut handle) },
        EprStatus::InvalidConfig
    );
}

#[test]
fn sphi_curve_round_trips() {
    let mut config = default_config();
    config.seed = 3;
    config.pairs_per_setting = 5_000;

    let phis = [0.2f64, std::f64::consts::FRAC_PI_8, 1.2];
    let mut handle: *mut EprSPhiCurve = ptr::null_mut();
    let status = unsafe { eprsim_sphi_run(&config, phis.as_ptr(), phis.len(), 0, &mut handle) };
    assert_eq!(status, EprStatus::Ok);
    assert_eq!(unsafe { eprsim_sphi_len(handle) }, 3);

    let mut phi = 0.0f64;
    let mut s = 0.0f64;
    assert_eq!(unsafe { eprsim_sphi_point(handle, 1, &mut phi, &mut s) }, EprStatus::Ok);
    assert_eq!(phi, std::f64::consts::FRAC_PI_8);
    assert!((s + 2.0).abs() < 0.2, "ideal plateau near -2, got {s}");
    unsafe { eprsim_sphi_free(handle) };

    // phi outside (0, pi/2) is a config error
    let bad = [2.0f64];
    let mut handle: *mut EprSPhiCurve = ptr::null_mut();
    assert_eq!(
        unsafe { eprsim_sphi_run(&config, bad.as_ptr(), 1, 0, &mut handle) },
        EprStatus::InvalidConfig
    );
}

#[test]
fn reference_curves_round_trip() {
    let deltas = [0.0f64, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2];
    for (model, at_zero, at_half_pi) in [
        (EprReferenceModel::Furry, 1250.0, 3750.0),
        (EprReferenceModel::Qm, 0.0, 5000.0),
        (EprReferenceModel::Sawtooth, 0.0, 5000.0),
    ] {
        let mut handle: *mut EprReferenceCurve = ptr::null_mut();
        let status = unsafe {
            eprsim_reference_curve(model, 10_000, deltas.as_ptr(), deltas.len(), 10_000, &mut handle)
        };
        assert_eq!(status, EprStatus::Ok);
        assert_eq!(unsafe { eprsim_reference_len(handle) }, 3);
        let mut value = 0.0f64;
        unsafe {
            assert_eq!(
                eprsim_reference_point(handle, 0, ptr::null_mut(), &mut value),
                EprStatus::Ok
            );
            assert!((value - at_zero).abs() < 1e-6, "{model:?} at 0: {value}");
            assert_eq!(
                eprsim_reference_point(handle, 2, ptr::null_mut(), &mut value),
                EprStatus::Ok
            );
            assert!((value - at_half_pi).abs() < 1e-6, "{model:?} at pi/2: {value}");
            eprsim_reference_free(handle);
        }
    }

    // furry quadrature resolution is validated
    let mut handle: *mut EprReferenceCurve = ptr::null_mut();
    let status = unsafe {
        eprsim_reference_curve(EprReferenceModel::Furry, 100, deltas.as_ptr(), 3, 10, &mut handle)
    };
    assert_eq!(status, EprStatus::InvalidConfig);
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/eprsim.h"))
        .expect("cbindgen header generated at build time");
    for symbol in [
        "eprsim_version",
        "eprsim_run_config_default",
        "eprsim_pbs_measure",
        "eprsim_sweep_run",
        "eprsim_curve_len",
        "eprsim_curve_point",
        "eprsim_curve_visibility",
        "eprsim_curve_free",
        "eprsim_chsh_run",
        "eprsim_chsh_summary",
        "eprsim_chsh_s_value",
        "eprsim_chsh_free",
        "eprsim_sphi_run",
        "eprsim_sphi_len",
        "eprsim_sphi_point",
        "eprsim_sphi_free",
        "eprsim_reference_curve",
        "eprsim_reference_len",
        "eprsim_reference_point",
        "eprsim_reference_free",
        "typedef struct EprCurve EprCurve",
        "typedef struct EprChshReport EprChshReport",
    ] {
        assert!(header.contains(symbol), "header is missing: {symbol}");
    }
}
