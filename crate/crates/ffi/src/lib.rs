//! C ABI over `polydual`.
//!
//! Polytopes cross the boundary as opaque `PdPolytope` handles owned by the
//! caller and released with `pd_polytope_free`. Every fallible call returns a
//! `PdStatus`; on failure `pd_last_error_message` describes the most recent
//! error on the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polydual::invariants::generator::{generator, GeneratorParams};
use polydual::oracles::{dp_delta, polytope_grid, SearchConfig};
use polydual::{duality, invariants, Error, Point, VPolytope};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    UnsupportedDimension = 4,
    OriginNotInterior = 5,
    SymmetryRequired = 6,
    UnknownGenerator = 7,
    ConvergenceFailure = 8,
    Geometry = 9,
    BufferTooSmall = 10,
    Panic = 99,
}

/// Opaque polytope handle.
pub struct PdPolytope {
    inner: VPolytope,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::DegenerateInput(_) | Error::RedundantVertex(_) | Error::SingularMatrix(_) => PdStatus::Degenerate,
        Error::UnsupportedDimension(_) => PdStatus::UnsupportedDimension,
        Error::OriginNotInterior => PdStatus::OriginNotInterior,
        Error::SymmetryRequired => PdStatus::SymmetryRequired,
        Error::UnknownGenerator(_) => PdStatus::UnknownGenerator,
        Error::ConvergenceFailure { .. } => PdStatus::ConvergenceFailure,
        Error::BadParameter(_) => PdStatus::InvalidArgument,
        _ => PdStatus::Geometry,
    }
}

fn fail(status: PdStatus, msg: impl Into<String>) -> PdStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PdStatus>) -> PdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(PdStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: polydual::Result<T>) -> Result<T, PdStatus> {
    r.map_err(|e| fail(status_of(&e), format!("{}: {e}", e.invariant_name())))
}

unsafe fn handle<'a>(p: *const PdPolytope) -> Result<&'a VPolytope, PdStatus> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| fail(PdStatus::NullPointer, "null polytope handle"))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), PdStatus> {
    if out.is_null() {
        return Err(fail(PdStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed(p: VPolytope) -> *mut PdPolytope {
    Box::into_raw(Box::new(PdPolytope { inner: p }))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a polytope from `count` points of dimension `dim` stored row-major
/// in `coords`. Every point must be a vertex of the hull.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_new(
    dim: usize,
    coords: *const f64,
    count: usize,
    out: *mut *mut PdPolytope,
) -> PdStatus {
    guard(|| {
        if coords.is_null() {
            return Err(fail(PdStatus::NullPointer, "null coordinate buffer"));
        }
        if dim == 0 {
            return Err(fail(PdStatus::InvalidArgument, "dimension must be positive"));
        }
        let flat = std::slice::from_raw_parts(coords, dim * count);
        let points: Vec<Point> = flat.chunks(dim).map(Point::from_row_slice).collect();
        let p = lib(VPolytope::new(points))?;
        store(out, boxed(p))
    })
}

/// Named generator: `"cube"` and `"cross"` use `dim`, `"hexagon"` uses `eps`.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_generate(
    name: *const c_char,
    dim: usize,
    eps: f64,
    out: *mut *mut PdPolytope,
) -> PdStatus {
    guard(|| {
        if name.is_null() {
            return Err(fail(PdStatus::NullPointer, "null generator name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| fail(PdStatus::InvalidArgument, "generator name is not UTF-8"))?;
        let params = GeneratorParams { dim: Some(dim), eps: Some(eps) };
        let p = lib(generator(name, params))?;
        store(out, boxed(p))
    })
}

/// Releases a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_free(p: *mut PdPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Ambient dimension, or 0 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_dim(p: *const PdPolytope) -> usize {
    p.as_ref().map_or(0, |h| h.inner.dim())
}

/// Number of vertices, or 0 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_vertex_count(p: *const PdPolytope) -> usize {
    p.as_ref().map_or(0, |h| h.inner.vertices().len())
}

/// Copies the vertices row-major into `buf`, which must hold
/// `dim * vertex_count` values.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_vertices(p: *const PdPolytope, buf: *mut f64, len: usize) -> PdStatus {
    guard(|| {
        let p = handle(p)?;
        let needed = p.dim() * p.vertices().len();
        if buf.is_null() {
            return Err(fail(PdStatus::NullPointer, "null output buffer"));
        }
        if len < needed {
            return Err(fail(PdStatus::BufferTooSmall, format!("buffer holds {len} values, need {needed}")));
        }
        let out = std::slice::from_raw_parts_mut(buf, needed);
        for (row, v) in out.chunks_mut(p.dim()).zip(p.vertices()) {
            row.copy_from_slice(v.as_slice());
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pd_polytope_volume(p: *const PdPolytope, out: *mut f64) -> PdStatus {
    guard(|| {
        let p = handle(p)?;
        store(out, p.volume())
    })
}

/// Polar body as a new handle.
#[no_mangle]
pub unsafe extern "C" fn pd_polytope_polar(p: *const PdPolytope, out: *mut *mut PdPolytope) -> PdStatus {
    guard(|| {
        let p = handle(p)?;
        let q = lib(duality::polar(p))?;
        store(out, boxed(q))
    })
}

/// The limit constant `G` and its minimizing parameter `c`. Either output may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pd_invariant_g(p: *const PdPolytope, out_g: *mut f64, out_c: *mut f64) -> PdStatus {
    guard(|| {
        let p = handle(p)?;
        let r = lib(invariants::invariant_g(p))?;
        if let Some(g) = out_g.as_mut() {
            *g = r.g;
        }
        if let Some(c) = out_c.as_mut() {
            *c = r.c_star;
        }
        Ok(())
    })
}

/// Best distance between the floating body at `delta` and the polar
/// illumination bodies, on a direction grid of `grid_size` points.
/// `out_delta_prime` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pd_dp_delta(
    p: *const PdPolytope,
    delta: f64,
    grid_size: usize,
    seed: u64,
    out_value: *mut f64,
    out_delta_prime: *mut f64,
) -> PdStatus {
    guard(|| {
        let p = handle(p)?;
        let grid = lib(polytope_grid(p, grid_size, seed))?;
        let r = lib(dp_delta(p, delta, &grid, &SearchConfig::default()))?;
        if let Some(dp) = out_delta_prime.as_mut() {
            *dp = r.best_delta_prime;
        }
        store(out_value, r.value)
    })
}
