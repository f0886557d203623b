//! C ABI over the `conic` crate: opaque handles, integer status codes.
//!
//! Fallible functions return a status code; results go through out-pointers. Handles are
//! created by `*_new` functions and released with the matching `*_free`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use conic::almost_simplicial::{classify, BetaMode, BetaSystem, Verdict};
use conic::complexes::Analysis;
use conic::corpus::{verify, ExampleId};
use conic::paths::{BetaModel, ConeModel};
use conic::search::{find_incredulous, SearchConfig};
use conic::{Cone, ConeSpec, Error, LatticePoint};

/// Status code returned by every fallible function.
pub type ConicStatus = i32;

pub const CONIC_OK: ConicStatus = 0;
pub const CONIC_NULL_POINTER: ConicStatus = 1;
pub const CONIC_INVALID_INPUT: ConicStatus = 2;
pub const CONIC_OUT_OF_RANGE: ConicStatus = 3;
pub const CONIC_INTERNAL: ConicStatus = 4;
pub const CONIC_PANIC: ConicStatus = 5;

/// Verdict codes written by [`conic_classify_1d`].
pub const CONIC_NO_NCCR: i32 = 0;
pub const CONIC_HAS_NCCR: i32 = 1;

/// Validated cone.
pub struct ConicCone {
    cone: Cone,
}

/// Lattice points and complex profiles of a cone or of one-dimensional betas.
pub struct ConicAnalysis {
    analysis: Analysis,
}

fn status_of(e: &Error) -> ConicStatus {
    match e {
        Error::Linalg(_)
        | Error::Overflow
        | Error::MultiplicityOverflow
        | Error::SelfSubstitution
        | Error::ProfileMismatch { .. }
        | Error::Fixture(_) => CONIC_INTERNAL,
        Error::PointOutsideZonotope(_) | Error::PointDimension { .. } => CONIC_OUT_OF_RANGE,
        _ => CONIC_INVALID_INPUT,
    }
}

fn guard(f: impl FnOnce() -> Result<(), ConicStatus>) -> ConicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CONIC_OK,
        Ok(Err(s)) => s,
        Err(_) => CONIC_PANIC,
    }
}

unsafe fn ints<'a>(p: *const i64, len: usize) -> Result<&'a [i64], ConicStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(CONIC_NULL_POINTER);
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, ConicStatus> {
    p.as_mut().ok_or(CONIC_NULL_POINTER)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, ConicStatus> {
    p.as_ref().ok_or(CONIC_NULL_POINTER)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn conic_status_message(status: ConicStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CONIC_OK => c"ok",
        CONIC_NULL_POINTER => c"null pointer argument",
        CONIC_INVALID_INPUT => c"invalid input",
        CONIC_OUT_OF_RANGE => c"index or point out of range",
        CONIC_INTERNAL => c"internal error",
        CONIC_PANIC => c"panic inside the library",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Builds a cone from `num_rays * dim` row-major ray coordinates.
///
/// # Safety
/// `rays` must point to `num_rays * dim` integers; `out_cone` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_cone_new(
    rays: *const i64,
    num_rays: usize,
    dim: usize,
    out_cone: *mut *mut ConicCone,
) -> ConicStatus {
    guard(|| {
        let slot = out(out_cone)?;
        *slot = ptr::null_mut();
        let total = num_rays.checked_mul(dim).ok_or(CONIC_INVALID_INPUT)?;
        let flat = ints(rays, total)?;
        let rows = if dim == 0 { Vec::new() } else { flat.chunks(dim).map(<[i64]>::to_vec).collect() };
        let cone = ConeSpec::new(rows).validate().map_err(|e| status_of(&e))?;
        *slot = Box::into_raw(Box::new(ConicCone { cone }));
        Ok(())
    })
}

/// # Safety
/// `cone` must come from [`conic_cone_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn conic_cone_free(cone: *mut ConicCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// # Safety
/// `cone` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_cone_shape(
    cone: *const ConicCone,
    out_dim: *mut usize,
    out_num_rays: *mut usize,
    out_gorenstein: *mut bool,
) -> ConicStatus {
    guard(|| {
        let c = &handle(cone)?.cone;
        *out(out_dim)? = c.dim();
        *out(out_num_rays)? = c.num_rays();
        *out(out_gorenstein)? = c.is_gorenstein();
        Ok(())
    })
}

/// Computes the class group, zonotope points and every complex profile of a cone.
///
/// # Safety
/// `cone` must be a live handle; `out_analysis` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_new(
    cone: *const ConicCone,
    out_analysis: *mut *mut ConicAnalysis,
) -> ConicStatus {
    guard(|| {
        let slot = out(out_analysis)?;
        *slot = ptr::null_mut();
        let c = handle(cone)?.cone.clone();
        let model = ConeModel::new(c).map_err(|e| status_of(&e))?;
        let analysis = Analysis::build(&model).map_err(|e| status_of(&e))?;
        *slot = Box::into_raw(Box::new(ConicAnalysis { analysis }));
        Ok(())
    })
}

/// Same as [`conic_analysis_new`] for one-dimensional betas.
///
/// # Safety
/// `betas` must point to `len` integers; `out_analysis` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_from_betas(
    betas: *const i64,
    len: usize,
    out_analysis: *mut *mut ConicAnalysis,
) -> ConicStatus {
    guard(|| {
        let slot = out(out_analysis)?;
        *slot = ptr::null_mut();
        let b = ints(betas, len)?.to_vec();
        let model = BetaModel::new(b).map_err(|e| status_of(&e))?;
        let analysis = Analysis::build(&model).map_err(|e| status_of(&e))?;
        *slot = Box::into_raw(Box::new(ConicAnalysis { analysis }));
        Ok(())
    })
}

/// # Safety
/// `analysis` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_free(analysis: *mut ConicAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Number of zonotope lattice points and their dimension.
///
/// # Safety
/// `analysis` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_points(
    analysis: *const ConicAnalysis,
    out_count: *mut usize,
    out_dim: *mut usize,
) -> ConicStatus {
    guard(|| {
        let a = &handle(analysis)?.analysis;
        *out(out_count)? = a.points().len();
        *out(out_dim)? = a.points().first().map_or(0, LatticePoint::dim);
        Ok(())
    })
}

/// Copies the coordinates of point `index` (in sorted order) into `coords`.
///
/// # Safety
/// `analysis` must be a live handle; `coords` must hold `coords_len` integers.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_point(
    analysis: *const ConicAnalysis,
    index: usize,
    coords: *mut i64,
    coords_len: usize,
) -> ConicStatus {
    guard(|| {
        let a = &handle(analysis)?.analysis;
        let p = a.points().get(index).ok_or(CONIC_OUT_OF_RANGE)?;
        if coords_len < p.dim() {
            return Err(CONIC_OUT_OF_RANGE);
        }
        if p.dim() > 0 {
            if coords.is_null() {
                return Err(CONIC_NULL_POINTER);
            }
            slice::from_raw_parts_mut(coords, p.dim()).copy_from_slice(&p.0);
        }
        Ok(())
    })
}

/// Length (top degree) of the raw complex of point `index`.
///
/// # Safety
/// `analysis` must be a live handle; `out_length` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_profile_length(
    analysis: *const ConicAnalysis,
    index: usize,
    out_length: *mut usize,
) -> ConicStatus {
    guard(|| {
        let a = &handle(analysis)?.analysis;
        let k = a.profiles().get(index).ok_or(CONIC_OUT_OF_RANGE)?;
        *out(out_length)? = k.length();
        Ok(())
    })
}

/// Multiplicity of `entry` in `degree` of the raw complex of point `index`.
///
/// # Safety
/// `analysis` must be a live handle; `entry` must hold `entry_len` integers.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_multiplicity(
    analysis: *const ConicAnalysis,
    index: usize,
    degree: usize,
    entry: *const i64,
    entry_len: usize,
    out_mult: *mut u64,
) -> ConicStatus {
    guard(|| {
        let a = &handle(analysis)?.analysis;
        let k = a.profiles().get(index).ok_or(CONIC_OUT_OF_RANGE)?;
        let q = LatticePoint(ints(entry, entry_len)?.to_vec());
        *out(out_mult)? = k.multiplicity(degree, &q);
        Ok(())
    })
}

/// Exhaustive search; writes the number of incredulous sets.
///
/// # Safety
/// `analysis` must be a live handle; `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_analysis_count_incredulous(
    analysis: *const ConicAnalysis,
    out_count: *mut usize,
) -> ConicStatus {
    guard(|| {
        let a = &handle(analysis)?.analysis;
        let found = find_incredulous(a, &SearchConfig::default()).map_err(|e| status_of(&e))?;
        *out(out_count)? = found.incredulous_sets.len();
        Ok(())
    })
}

/// Closed-form verdict for one-dimensional betas: [`CONIC_HAS_NCCR`] or [`CONIC_NO_NCCR`].
///
/// # Safety
/// `betas` must point to `len` integers; `out_verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_classify_1d(betas: *const i64, len: usize, out_verdict: *mut i32) -> ConicStatus {
    guard(|| {
        let b = ints(betas, len)?.to_vec();
        let mode = if b.contains(&0) {
            BetaMode::ZeroBetaPresent(b)
        } else {
            BetaMode::System(BetaSystem::new(b).map_err(|e| status_of(&e))?)
        };
        *out(out_verdict)? = match classify(&mode).verdict {
            Verdict::HasNccr => CONIC_HAS_NCCR,
            Verdict::NoNccr => CONIC_NO_NCCR,
        };
        Ok(())
    })
}

/// Replays a reference example; writes the number of checks that did not match.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_failing` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conic_verify_example(name: *const c_char, out_failing: *mut usize) -> ConicStatus {
    guard(|| {
        if name.is_null() {
            return Err(CONIC_NULL_POINTER);
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| CONIC_INVALID_INPUT)?;
        let id: ExampleId = name.parse().map_err(|_| CONIC_INVALID_INPUT)?;
        let report = verify(id).map_err(|e| status_of(&e))?;
        *out(out_failing)? = report.failing().count();
        Ok(())
    })
}
