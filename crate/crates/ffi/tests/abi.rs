use std::ffi::{CStr, CString};
use std::ptr;

use prim_cobordism_ffi::*;

fn last_error() -> String {
    let p = pc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn builtin(name: &str, params: &[f64]) -> *mut PcModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    let status = unsafe { pc_model_builtin(name.as_ptr(), params.as_ptr(), params.len(), &mut m) };
    assert_eq!(status, PcStatus::Ok);
    assert!(!m.is_null());
    m
}

fn run_json(sub: &str, config: &str) -> (PcStatus, Option<serde_json::Value>) {
    let (sub, config) = (CString::new(sub).unwrap(), CString::new(config).unwrap());
    let mut out = ptr::null_mut();
    let status = unsafe { pc_run_json(sub.as_ptr(), config.as_ptr(), &mut out) };
    if out.is_null() {
        return (status, None);
    }
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { pc_string_free(out) };
    (status, Some(serde_json::from_str(&text).unwrap()))
}

#[test]
fn figure_eight_through_the_handle() {
    let m = builtin("figure_eight", &[]);
    unsafe {
        assert_eq!((pc_model_source_dim(m), pc_model_ambient_dim(m), pc_model_coord_count(m)), (1, 2, 1));
        let theta = [0.5f64];
        let mut g = [0.0; 2];
        assert_eq!(pc_model_eval(m, theta.as_ptr(), 1, g.as_mut_ptr(), 2), PcStatus::Ok);
        assert!((g[0] - 1f64.sin()).abs() < 1e-15 && (g[1] - 0.5f64.sin()).abs() < 1e-15);

        let mut counts = [0usize; 4];
        let mut len = 0;
        assert_eq!(pc_chain_counts(m, 2, counts.as_mut_ptr(), counts.len(), &mut len), PcStatus::Ok);
        assert_eq!(&counts[..len], &[4, 2]);

        // too little room still reports the length
        assert_eq!(pc_chain_counts(m, 2, counts.as_mut_ptr(), 1, &mut len), PcStatus::BufferTooSmall);
        assert_eq!(len, 2);
        assert_eq!(pc_chain_counts(m, 3, counts.as_mut_ptr(), 4, &mut len), PcStatus::Usage);
        assert!(last_error().contains("dimension") || last_error().contains("dimensional"), "{}", last_error());
        pc_model_free(m);
    }
}

#[test]
fn surfaces_and_curves() {
    let torus = builtin("round_torus", &[2.0, 1.0]);
    let boy = builtin("boy_surface", &[]);
    unsafe {
        let mut g = [0.0; 3];
        let x = [0.0f64, 0.0];
        assert_eq!(pc_model_eval(torus, x.as_ptr(), 2, g.as_mut_ptr(), 3), PcStatus::Ok);
        assert_eq!(g, [3.0, 0.0, 0.0]);
        assert_eq!(pc_model_eval(torus, x.as_ptr(), 1, g.as_mut_ptr(), 3), PcStatus::Usage);
        assert_eq!(pc_model_eval(torus, x.as_ptr(), 2, g.as_mut_ptr(), 2), PcStatus::BufferTooSmall);

        // antipodal vectors are the same point
        let (v, w) = ([0.3f64, -0.4, 0.5], [-0.6f64, 0.8, -1.0]);
        let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
        assert_eq!(pc_model_eval(boy, v.as_ptr(), 3, a.as_mut_ptr(), 3), PcStatus::Ok);
        assert_eq!(pc_model_eval(boy, w.as_ptr(), 3, b.as_mut_ptr(), 3), PcStatus::Ok);
        for (p, q) in a.iter().zip(b) {
            assert!((p - q).abs() < 1e-14);
        }
        let zero = [0.0f64; 3];
        assert_eq!(pc_model_eval(boy, zero.as_ptr(), 3, a.as_mut_ptr(), 3), PcStatus::Usage);
        pc_model_free(torus);
        pc_model_free(boy);

        // (cos θ, 1) has constant height and is rejected
        let (f_cos, h_cos) = ([0.0f64, 1.0], [1.0f64]);
        let mut flat = ptr::null_mut();
        let status = pc_model_trig_curve(f_cos.as_ptr(), 2, ptr::null(), 0, h_cos.as_ptr(), 1, ptr::null(), 0, &mut flat);
        assert_eq!(status, PcStatus::Ok);
        let mut len = 99;
        assert_eq!(pc_chain_counts(flat, 2, ptr::null_mut(), 0, &mut len), PcStatus::Inconclusive);
        assert_eq!(len, 0);
        pc_model_free(flat);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let mut m = ptr::null_mut();
        let name = CString::new("klein_bottle").unwrap();
        assert_eq!(pc_model_builtin(name.as_ptr(), ptr::null(), 0, &mut m), PcStatus::Usage);
        assert!(m.is_null());
        assert!(last_error().contains("klein_bottle"));

        assert_eq!(pc_model_builtin(ptr::null(), ptr::null(), 0, &mut m), PcStatus::NullPointer);
        assert_eq!(pc_model_builtin(name.as_ptr(), ptr::null(), 2, &mut m), PcStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(pc_model_builtin(bad.as_ptr().cast(), ptr::null(), 0, &mut m), PcStatus::InvalidUtf8);
        let mut g = [0.0; 2];
        assert_eq!(pc_model_eval(ptr::null(), g.as_ptr(), 1, g.as_mut_ptr(), 2), PcStatus::NullPointer);
        assert_eq!(pc_model_source_dim(ptr::null()), 0);
        pc_model_free(ptr::null_mut());
        pc_string_free(ptr::null_mut());

        // a successful call clears the message
        let ok = builtin("round_circle", &[]);
        assert!(pc_last_error_message().is_null());
        pc_model_free(ok);
    }
    let version = unsafe { CStr::from_ptr(pc_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn reports_match_the_command_line() {
    let (status, report) = run_json("chain-verify", "model = figure_eight\nr = 2\n");
    assert_eq!(status, PcStatus::Ok);
    let report = report.unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["results"]["counts"], serde_json::json!([4, 2]));

    let (status, report) = run_json("sweep", "seed = 7\ncount = 10\n");
    assert_eq!(status, PcStatus::Ok);
    assert_eq!(report.unwrap()["results"]["count"], 10);

    let (status, report) = run_json("normal-form", "nf.r = 2\nnf.limit_steps = 2\n");
    assert_eq!(status, PcStatus::VerdictFailed);
    assert!(report.is_some());

    let (status, report) = run_json("chain-verify", "f_cos = 0, 1\nh_cos = 1\nr = 2\n");
    assert_eq!(status, PcStatus::Inconclusive);
    assert_eq!(report.unwrap()["results"]["verdict"], "rejected");

    for (sub, config) in [("chain-verify", "model = klein_bottle\n"), ("no-such", "model = figure_eight\n"), ("sweep", "count = 3\n")] {
        let (status, report) = run_json(sub, config);
        assert_eq!(status, PcStatus::Usage, "{sub}");
        assert!(report.is_none());
        assert!(!last_error().is_empty());
    }
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pc_run_json(ptr::null(), ptr::null(), &mut out) }, PcStatus::NullPointer);
    assert!(out.is_null());
}
