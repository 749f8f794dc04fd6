use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use stablehom_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sh_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn tor_through_handles() {
    unsafe {
        let mut cat = ptr::null_mut();
        assert_eq!(sh_category_build(c("all").as_ptr(), 2, 3, &mut cat), ShStatus::Ok);
        let mut n = 0;
        assert_eq!(sh_category_num_objects(cat, &mut n), ShStatus::Ok);
        assert_eq!(n, 4);

        let (mut g, mut f) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sh_rep_evaluate(cat, c("K[q2]^v").as_ptr(), ShVariance::Contravariant, &mut g), ShStatus::Ok);
        assert_eq!(sh_rep_evaluate(cat, c("Id").as_ptr(), ShVariance::Covariant, &mut f), ShStatus::Ok);

        let mut dims = [0usize; 8];
        let mut len = dims.len();
        assert_eq!(sh_rep_dims(f, dims.as_mut_ptr(), &mut len), ShStatus::Ok);
        assert_eq!(&dims[..len], &[0, 1, 2, 3]);

        let mut len = 1;
        assert_eq!(sh_tor(g, f, 2, dims.as_mut_ptr(), &mut len), ShStatus::BufferTooSmall);
        assert_eq!(len, 3);
        assert_eq!(sh_tor(g, f, 2, dims.as_mut_ptr(), &mut len), ShStatus::Ok);
        assert_eq!(&dims[..3], &[0, 0, 1]);

        sh_rep_free(g);
        sh_rep_free(f);
        sh_category_free(cat);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut cat = ptr::null_mut();
        assert_eq!(sh_category_build(c("nope").as_ptr(), 2, 2, &mut cat), ShStatus::InvalidArgument);
        assert!(last_error().contains("nope"));
        assert_eq!(sh_category_build(c("inj").as_ptr(), 6, 2, &mut cat), ShStatus::InvalidArgument);
        assert_eq!(sh_category_build(ptr::null(), 2, 2, &mut cat), ShStatus::NullArgument);
        assert!(cat.is_null());

        let (mut out, mut pos) = (ptr::null_mut(), 0);
        assert_eq!(sh_expr_canonical(c("S^").as_ptr(), &mut out, &mut pos), ShStatus::ParseError);
        assert_eq!(pos, 2);
        assert_eq!(sh_expr_canonical(c("S^2(+)Id").as_ptr(), &mut out, &mut pos), ShStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "S^2 (+) Id");
        sh_string_free(out);
    }
}

#[test]
fn jobs_run_like_the_cli() {
    let job = "field = { p = 2, d = 1 }\ncaps = {}\nfunctors = {}\n[command]\nname = \"verify\"\ntarget = \"morita\"\ncat = \"inj\"\n";
    unsafe {
        let (mut out, mut code) = (ptr::null_mut(), -1);
        assert_eq!(sh_run_job(c(job).as_ptr(), &mut out, &mut code), ShStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        sh_string_free(out);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["passed"], true);
        assert_eq!(sh_run_job(c("name = 3").as_ptr(), &mut out, &mut code), ShStatus::InvalidArgument);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/stablehom.h");
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).status() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(status.success());
}
