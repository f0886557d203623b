use std::ffi::CStr;
use std::ptr;

use conic_ffi::*;

const SQUARE: [i64; 12] = [1, 0, 0, 0, 1, 0, -1, 0, 1, 0, -1, 1];

unsafe fn square_analysis() -> *mut ConicAnalysis {
    let mut cone = ptr::null_mut();
    assert_eq!(conic_cone_new(SQUARE.as_ptr(), 4, 3, &mut cone), CONIC_OK);
    let mut analysis = ptr::null_mut();
    assert_eq!(conic_analysis_new(cone, &mut analysis), CONIC_OK);
    conic_cone_free(cone);
    analysis
}

#[test]
fn cone_shape_and_points() {
    unsafe {
        let mut cone = ptr::null_mut();
        assert_eq!(conic_cone_new(SQUARE.as_ptr(), 4, 3, &mut cone), CONIC_OK);
        let (mut dim, mut rays, mut gor) = (0usize, 0usize, false);
        assert_eq!(conic_cone_shape(cone, &mut dim, &mut rays, &mut gor), CONIC_OK);
        assert_eq!((dim, rays, gor), (3, 4, true));
        conic_cone_free(cone);

        let a = square_analysis();
        let (mut count, mut pdim) = (0usize, 0usize);
        assert_eq!(conic_analysis_points(a, &mut count, &mut pdim), CONIC_OK);
        assert_eq!((count, pdim), (3, 1));
        let mut coords = [0i64; 1];
        let pts: Vec<i64> = (0..count)
            .map(|i| {
                assert_eq!(conic_analysis_point(a, i, coords.as_mut_ptr(), 1), CONIC_OK);
                coords[0]
            })
            .collect();
        assert_eq!(pts, vec![-1, 0, 1]);
        assert_eq!(conic_analysis_point(a, 3, coords.as_mut_ptr(), 1), CONIC_OUT_OF_RANGE);

        // K_0 = A_0 -> A_0^4 -> ... : four copies of the origin in degree 2
        let mut len = 0usize;
        assert_eq!(conic_analysis_profile_length(a, 1, &mut len), CONIC_OK);
        assert_eq!(len, 3);
        let mut mult = 0u64;
        let origin = [0i64];
        assert_eq!(conic_analysis_multiplicity(a, 1, 2, origin.as_ptr(), 1, &mut mult), CONIC_OK);
        assert_eq!(mult, 4);

        let mut found = 0usize;
        assert_eq!(conic_analysis_count_incredulous(a, &mut found), CONIC_OK);
        assert_eq!(found, 2);
        conic_analysis_free(a);
    }
}

#[test]
fn betas_and_classification() {
    unsafe {
        let b = [2i64, 1, 1, -2, -2];
        let mut a = ptr::null_mut();
        assert_eq!(conic_analysis_from_betas(b.as_ptr(), b.len(), &mut a), CONIC_OK);
        let mut found = 1usize;
        assert_eq!(conic_analysis_count_incredulous(a, &mut found), CONIC_OK);
        assert_eq!(found, 0);
        conic_analysis_free(a);

        let mut v = -1;
        assert_eq!(conic_classify_1d(b.as_ptr(), b.len(), &mut v), CONIC_OK);
        assert_eq!(v, CONIC_NO_NCCR);
        let b = [2i64, 1, -1, -1, -1];
        assert_eq!(conic_classify_1d(b.as_ptr(), b.len(), &mut v), CONIC_OK);
        assert_eq!(v, CONIC_HAS_NCCR);
    }
}

#[test]
fn errors_are_codes() {
    unsafe {
        let mut cone = ptr::null_mut();
        let bad = [1i64, 1, 2, 2];
        assert_eq!(conic_cone_new(bad.as_ptr(), 2, 2, &mut cone), CONIC_INVALID_INPUT);
        assert!(cone.is_null());
        assert_eq!(conic_cone_new(ptr::null(), 4, 3, &mut cone), CONIC_NULL_POINTER);
        assert_eq!(conic_cone_new(SQUARE.as_ptr(), 4, 3, ptr::null_mut()), CONIC_NULL_POINTER);
        let mut v = 0;
        let b = [1i64, 1, -1];
        assert_eq!(conic_classify_1d(b.as_ptr(), 3, &mut v), CONIC_INVALID_INPUT);
        assert_eq!(conic_analysis_points(ptr::null(), ptr::null_mut(), ptr::null_mut()), CONIC_NULL_POINTER);
        let msg = CStr::from_ptr(conic_status_message(CONIC_OUT_OF_RANGE));
        assert_eq!(msg.to_str().unwrap(), "index or point out of range");
        assert_eq!(CStr::from_ptr(conic_status_message(99)).to_str().unwrap(), "unknown status");
        conic_cone_free(ptr::null_mut());
        conic_analysis_free(ptr::null_mut());
    }
}

#[test]
fn verify_through_the_abi() {
    unsafe {
        let mut failing = 99usize;
        assert_eq!(conic_verify_example(c"fms710".as_ptr(), &mut failing), CONIC_OK);
        assert_eq!(failing, 0);
        assert_eq!(conic_verify_example(c"nope".as_ptr(), &mut failing), CONIC_INVALID_INPUT);
    }
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/conic.h");
    for name in [
        "conic_status_message",
        "conic_cone_new",
        "conic_cone_free",
        "conic_cone_shape",
        "conic_analysis_new",
        "conic_analysis_from_betas",
        "conic_analysis_free",
        "conic_analysis_points",
        "conic_analysis_point",
        "conic_analysis_profile_length",
        "conic_analysis_multiplicity",
        "conic_analysis_count_incredulous",
        "conic_classify_1d",
        "conic_verify_example",
        "typedef struct ConicCone ConicCone;",
        "#define CONIC_PANIC 5",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
