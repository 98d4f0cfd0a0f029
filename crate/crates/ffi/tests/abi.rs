use std::ffi::{CStr, CString};
use std::ptr;

use polydual_ffi::*;

fn last_error() -> String {
    let p = pd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn square_from_coordinates() {
    let coords = [1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(pd_polytope_new(2, coords.as_ptr(), 4, &mut p), PdStatus::Ok);
        assert_eq!(pd_polytope_dim(p), 2);
        assert_eq!(pd_polytope_vertex_count(p), 4);
        let mut vol = 0.0;
        assert_eq!(pd_polytope_volume(p, &mut vol), PdStatus::Ok);
        assert!((vol - 4.0).abs() < 1e-12);
        let mut g = 0.0;
        let mut c = 0.0;
        assert_eq!(pd_invariant_g(p, &mut g, &mut c), PdStatus::Ok);
        assert!((g - 2f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(c > 0.0);
        pd_polytope_free(p);
    }
}

#[test]
fn generator_and_polar() {
    let name = CString::new("cube").unwrap();
    let mut p = ptr::null_mut();
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(pd_polytope_generate(name.as_ptr(), 3, 0.0, &mut p), PdStatus::Ok);
        assert_eq!(pd_polytope_polar(p, &mut q), PdStatus::Ok);
        assert_eq!(pd_polytope_vertex_count(q), 6);
        let mut buf = vec![0.0; 18];
        assert_eq!(pd_polytope_vertices(q, buf.as_mut_ptr(), buf.len()), PdStatus::Ok);
        assert!(buf.iter().all(|x| x.abs() == 0.0 || (x.abs() - 1.0).abs() < 1e-12));
        assert_eq!(pd_polytope_vertices(q, buf.as_mut_ptr(), 5), PdStatus::BufferTooSmall);
        let mut vol = 0.0;
        assert_eq!(pd_polytope_volume(q, &mut vol), PdStatus::Ok);
        assert!((vol - 4.0 / 3.0).abs() < 1e-12);
        pd_polytope_free(q);
        pd_polytope_free(p);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut p = ptr::null_mut();
    unsafe {
        let name = CString::new("prism").unwrap();
        assert_eq!(pd_polytope_generate(name.as_ptr(), 2, 0.0, &mut p), PdStatus::UnknownGenerator);
        assert!(last_error().contains("prism"));
        assert!(p.is_null());

        let triangle = [1.0, 0.0, -1.0, 1.0, -1.0, -1.0];
        assert_eq!(pd_polytope_new(2, triangle.as_ptr(), 3, &mut p), PdStatus::Ok);
        let mut g = 0.0;
        assert_eq!(pd_invariant_g(p, &mut g, ptr::null_mut()), PdStatus::SymmetryRequired);
        assert!(last_error().starts_with("central-symmetry"));
        pd_polytope_free(p);

        let flat = [0.0, 0.0, 1.0, 0.0, 2.0, 0.0];
        assert_eq!(pd_polytope_new(2, flat.as_ptr(), 3, &mut p), PdStatus::Degenerate);
        let mut vol = 0.0;
        assert_eq!(pd_polytope_volume(ptr::null(), &mut vol), PdStatus::NullPointer);
        assert_eq!(pd_polytope_new(2, ptr::null(), 3, &mut p), PdStatus::NullPointer);
        pd_polytope_free(ptr::null_mut());
    }
}

#[test]
fn distance_search_through_the_abi() {
    let name = CString::new("cube").unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(pd_polytope_generate(name.as_ptr(), 2, 0.0, &mut p), PdStatus::Ok);
        let (mut value, mut dp) = (0.0, 0.0);
        assert_eq!(pd_dp_delta(p, 1e-3, 512, 0, &mut value, &mut dp), PdStatus::Ok);
        assert!(value > 1.0 && value < 1.1 && dp > 0.0);
        assert_eq!(pd_dp_delta(p, 0.7, 512, 0, &mut value, &mut dp), PdStatus::InvalidArgument);
        pd_polytope_free(p);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/polydual.h")).unwrap();
    for name in [
        "typedef struct PdPolytope PdPolytope",
        "PdStatus pd_polytope_new(",
        "PdStatus pd_polytope_generate(",
        "void pd_polytope_free(",
        "PdStatus pd_invariant_g(",
        "PdStatus pd_dp_delta(",
        "const char *pd_last_error_message(",
        "PD_STATUS_SYMMETRY_REQUIRED",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
