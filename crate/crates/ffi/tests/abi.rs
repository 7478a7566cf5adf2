use cospacings_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cos_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn sample(values: &[f64]) -> *mut CosSample {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { cos_sample_new(values.as_ptr(), values.len(), &mut s) },
        CosStatus::Ok
    );
    s
}

#[test]
fn sample_round_trip_and_spacings() {
    let s = sample(&[0.1, 0.4, 0.7]);
    let mut len = 0;
    assert_eq!(unsafe { cos_sample_len(s, &mut len) }, CosStatus::Ok);
    assert_eq!(len, 3);

    let mut buf = [0.0; 4];
    let mut n = 0;
    let st = unsafe {
        cos_sample_spacings(
            s,
            COS_ORDER_USUAL,
            1,
            COS_LAYOUT_DISJOINT,
            buf.as_mut_ptr(),
            4,
            &mut n,
        )
    };
    assert_eq!(st, CosStatus::Ok);
    let want = [0.1, 0.3, 0.3, 0.3];
    for (g, w) in buf.iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
    }

    let st = unsafe {
        cos_sample_spacings(
            s,
            COS_ORDER_USUAL,
            2,
            COS_LAYOUT_DISJOINT,
            buf.as_mut_ptr(),
            4,
            &mut n,
        )
    };
    assert_eq!(st, CosStatus::Ok);
    assert_eq!(n, 2);
    assert!((buf[0] - 0.4).abs() < 1e-12 && (buf[1] - 0.6).abs() < 1e-12);

    let st = unsafe { cos_sample_spacings(s, COS_ORDER_USUAL, 1, 0, buf.as_mut_ptr(), 3, &mut n) };
    assert_eq!(st, CosStatus::BufferTooSmall);
    assert_eq!(n, 4);
    let st = unsafe { cos_sample_spacings(s, 7, 1, 0, buf.as_mut_ptr(), 4, &mut n) };
    assert_eq!(st, CosStatus::InvalidArgument);
    let st = unsafe {
        cos_sample_spacings(
            s,
            COS_ORDER_USUAL,
            3,
            COS_LAYOUT_DISJOINT,
            buf.as_mut_ptr(),
            4,
            &mut n,
        )
    };
    assert_eq!(st, CosStatus::InvalidArgument);
    unsafe { cos_sample_free(s) };
}

#[test]
fn error_codes_and_messages() {
    let mut s = ptr::null_mut();
    let bad = [0.5, -0.1];
    assert_eq!(
        unsafe { cos_sample_new(bad.as_ptr(), 2, &mut s) },
        CosStatus::Domain
    );
    assert!(last_error().contains("outside"));
    assert_eq!(
        unsafe { cos_sample_new(ptr::null(), 3, &mut s) },
        CosStatus::NullPointer
    );
    assert_eq!(
        unsafe { cos_sample_new(bad.as_ptr(), 0, &mut s) },
        CosStatus::InvalidArgument
    );

    let s = sample(&[0.2, 0.2, 0.9]);
    let spec = CString::new("moran").unwrap();
    let mut w = 0.0;
    assert_eq!(
        unsafe { cos_statistic(s, spec.as_ptr(), &mut w) },
        CosStatus::Ok
    );
    assert_eq!(w, f64::INFINITY);
    assert!(last_error().is_empty());
    let mut report = CosTestReport::default();
    assert_eq!(
        unsafe { cos_run_test(s, spec.as_ptr(), 0.05, 200, 1, &mut report) },
        CosStatus::Ok
    );
    assert_eq!((report.reject, report.degenerate), (1, 1));
    assert_eq!(
        unsafe { cos_statistic(s, spec.as_ptr(), ptr::null_mut()) },
        CosStatus::NullPointer
    );
    let nonsense = CString::new("moran:sideways").unwrap();
    assert_eq!(
        unsafe { cos_statistic(s, nonsense.as_ptr(), &mut w) },
        CosStatus::InvalidArgument
    );
    unsafe { cos_sample_free(s) };
    unsafe { cos_sample_free(ptr::null_mut()) };

    let affine = CString::new("greenwood").unwrap();
    let mut m = CosMoments::default();
    assert_eq!(
        unsafe { cos_exp_moments(affine.as_ptr(), &mut m) },
        CosStatus::Ok
    );
    assert!((m.mean_h - 2.0).abs() < 1e-8 && (m.var_h - 20.0).abs() < 1e-8);
}

#[test]
fn family_functions_match_the_library() {
    let spec = CString::new("A:1.5").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { cos_family_new(spec.as_ptr(), &mut f) },
        CosStatus::Ok
    );
    let (mut c, mut q, mut d) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(cos_family_cdf(f, 0.5, &mut c), CosStatus::Ok);
        assert_eq!(cos_family_quantile(f, c, &mut q), CosStatus::Ok);
        assert_eq!(cos_family_pdf(f, 0.5, &mut d), CosStatus::Ok);
        assert_eq!(cos_family_cdf(f, 1.5, &mut c), CosStatus::Domain);
    }
    assert!((q - 0.5).abs() < 1e-12);
    assert!((d - 1.5 * 0.5f64.sqrt()).abs() < 1e-12);

    let mut buf = [0.0; 8];
    assert_eq!(
        unsafe { cos_family_sample(f, 4, 2, buf.as_mut_ptr(), buf.len()) },
        CosStatus::Ok
    );
    let direct = cospacings::AlternativeFamily::A(1.5).sample(8, cospacings::RngStream::new(4, 2));
    assert_eq!(buf.to_vec(), direct);

    let mut hd = CosHellinger::default();
    assert_eq!(unsafe { cos_hellinger_fold(f, &mut hd) }, CosStatus::Ok);
    assert!(hd.hd_direct - hd.hd_co > 1e-4);
    unsafe { cos_family_free(f) };

    let bad = CString::new("gamma:1").unwrap();
    assert_eq!(
        unsafe { cos_family_new(bad.as_ptr(), &mut f) },
        CosStatus::InvalidArgument
    );
}

#[test]
fn critical_values_and_power_tables() {
    let spec = CString::new("rao:co").unwrap();
    let mut cv = 0.0;
    assert_eq!(
        unsafe { cos_critical_value(spec.as_ptr(), 12, 0.05, 2000, 9, &mut cv) },
        CosStatus::Ok
    );
    let direct = cospacings::critical_value(
        &"rao:co".parse().unwrap(),
        12,
        0.05,
        2000,
        cospacings::RngStream::new(9, 0),
    )
    .unwrap();
    assert_eq!(cv, direct);

    let cfg = CString::new(
        r#"{"alternatives":["B:1.5"],"sample_sizes":[10,20],"statistics":["greenwood","greenwood:co"],
            "alpha":0.05,"replications":100,"null_replications":1000,"master_seed":5}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { cos_power_study_csv(cfg.as_ptr(), 2, &mut out) },
        CosStatus::Ok
    );
    let csv = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { cos_string_free(out) };
    assert!(csv.starts_with("alternative,n,G,G*\nB:1.5,10,"));
    assert_eq!(csv.lines().count(), 3);

    let broken = CString::new("{").unwrap();
    assert_eq!(
        unsafe { cos_power_study_csv(broken.as_ptr(), 0, &mut out) },
        CosStatus::InvalidArgument
    );
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cos_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compiles the C smoke program against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libcospacings_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("ffi smoke ok"));
    let _ = std::fs::remove_dir_all(&dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cospacings-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
