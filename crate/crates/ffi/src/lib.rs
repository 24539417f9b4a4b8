//! C ABI over `steklov-core`.
//!
//! Objects cross the boundary as opaque handles (`StkBasis`, `StkSolution`) created and
//! released by this library. Every function returns a [`StkStatus`]; on failure the message
//! is kept per thread and can be copied out with [`stk_last_error_message`]. Panics are
//! caught and reported as [`StkStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use steklov_core::expansion::{
    dirichlet_solve, error_l2_boundary, robin_solve, BoundaryData, SeriesSolution,
};
use steklov_core::geometry::Domain;
use steklov_core::harness::{catalog, default_method};
use steklov_core::steklov::{solve, Method, SolveParams, SteklovBasis};
use steklov_core::trig_tools::TrigInterpolant;
use steklov_core::{Complex64, Error};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownName = 4,
    NearBoundary = 5,
    NotEnoughEigenpairs = 6,
    Routing = 7,
    Numerical = 8,
    BufferTooSmall = 9,
    Panic = 10,
    Other = 11,
}

/// Steklov eigenpairs of one domain.
pub struct StkBasis {
    inner: Arc<SteklovBasis>,
}

/// Truncated Steklov series solving a Dirichlet or Robin problem.
pub struct StkSolution {
    inner: SeriesSolution,
    reference: Option<BoundaryData>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> StkStatus {
    match e {
        Error::InvalidArgument(_) | Error::LengthMismatch { .. } | Error::EmptyInput(_) => {
            StkStatus::InvalidArgument
        }
        Error::UnknownName { .. } => StkStatus::UnknownName,
        Error::NearBoundary { .. } => StkStatus::NearBoundary,
        Error::NotEnoughEigenpairs { .. } => StkStatus::NotEnoughEigenpairs,
        Error::Routing { .. } | Error::PolygonalCurve(_) => StkStatus::Routing,
        Error::RankDeficient { .. }
        | Error::NoConvergence
        | Error::ZeroNorm { .. }
        | Error::DegenerateFit(_)
        | Error::SingularAngle(_)
        | Error::Bracketing { .. } => StkStatus::Numerical,
        _ => StkStatus::Other,
    }
}

struct Failure(StkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> StkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            StkStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_owned());
            StkStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(StkStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(StkStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Copies the last error message of this thread, NUL-terminated and truncated to
/// `capacity`, into `buffer`. Returns the full message length in bytes (without the NUL),
/// so a call with `capacity = 0` queries the size.
///
/// # Safety
/// `buffer` must be valid for `capacity` bytes or null with `capacity = 0`.
#[no_mangle]
pub unsafe extern "C" fn stk_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buffer.is_null() && capacity > 0 {
            let n = e.len().min(capacity - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buffer, n);
            *buffer.add(n) = 0;
        }
        e.len()
    })
}

/// Solves for the first `count` Steklov eigenpairs of a named domain on `nodes` boundary
/// nodes. `method` may be null for the domain's default method.
///
/// # Safety
/// String arguments must be NUL-terminated; `out_basis` must be a valid pointer. The handle
/// written there must be released with [`stk_basis_free`].
#[no_mangle]
pub unsafe extern "C" fn stk_basis_solve(
    domain: *const c_char,
    method: *const c_char,
    nodes: usize,
    count: usize,
    out_basis: *mut *mut StkBasis,
) -> StkStatus {
    guard(|| {
        let slot = out(out_basis, "out_basis")?;
        *slot = ptr::null_mut();
        let domain: Domain = text(domain, "domain")?.parse()?;
        let method: Method = if method.is_null() {
            default_method(domain)
        } else {
            text(method, "method")?.parse()?
        };
        let basis = solve(domain, method, &SolveParams::new(nodes, count))?;
        *slot = Box::into_raw(Box::new(StkBasis {
            inner: Arc::new(basis),
        }));
        Ok(())
    })
}

/// Releases a basis. Null is ignored. Solutions built on it stay valid.
///
/// # Safety
/// `basis` must come from [`stk_basis_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stk_basis_free(basis: *mut StkBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Number of eigenpairs and boundary nodes of a basis.
///
/// # Safety
/// `basis` must be a live handle; the outputs must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn stk_basis_size(
    basis: *const StkBasis,
    out_count: *mut usize,
    out_nodes: *mut usize,
) -> StkStatus {
    guard(|| {
        let b = &handle(basis, "basis")?.inner;
        *out(out_count, "out_count")? = b.len();
        *out(out_nodes, "out_nodes")? = b.grid.len();
        Ok(())
    })
}

fn copy_into(values: &[f64], dst: *mut f64, capacity: usize) -> Result<(), Failure> {
    if dst.is_null() {
        return Err(null("buffer"));
    }
    if capacity < values.len() {
        return Err(Failure(
            StkStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", values.len()),
        ));
    }
    // SAFETY: the caller guarantees `dst` is valid for `capacity >= values.len()` values.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), dst, values.len()) };
    Ok(())
}

/// Copies the eigenvalues (ascending) into `buffer`, which must hold the basis count.
///
/// # Safety
/// `basis` must be a live handle and `buffer` valid for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn stk_basis_eigenvalues(
    basis: *const StkBasis,
    buffer: *mut f64,
    capacity: usize,
) -> StkStatus {
    guard(|| copy_into(&handle(basis, "basis")?.inner.eigenvalues(), buffer, capacity))
}

/// Copies the nodal trace of eigenfunction `index` into `buffer`, which must hold the
/// node count. Node `l` sits at curve parameter `2πl/L`.
///
/// # Safety
/// `basis` must be a live handle and `buffer` valid for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn stk_basis_trace(
    basis: *const StkBasis,
    index: usize,
    buffer: *mut f64,
    capacity: usize,
) -> StkStatus {
    guard(|| {
        let b = &handle(basis, "basis")?.inner;
        let pair = b.pairs.get(index).ok_or_else(|| {
            Failure::from(Error::NotEnoughEigenpairs {
                requested: index + 1,
                available: b.len(),
            })
        })?;
        copy_into(&pair.trace, buffer, capacity)
    })
}

fn build_solution(
    basis: &StkBasis,
    data: BoundaryData,
    order: usize,
    robin: Option<f64>,
) -> Result<StkSolution, Failure> {
    let inner = match robin {
        None => dirichlet_solve(&data, &basis.inner, order)?,
        Some(b) => {
            if data.interior(0.0.into()).is_some() {
                robin_solve(&data.robin_data(b)?, &basis.inner, order, b)?
            } else {
                robin_solve(&data, &basis.inner, order, b)?
            }
        }
    };
    let reference = match robin {
        None => Some(data),
        Some(_) => data.interior(0.0.into()).map(|_| data),
    };
    Ok(StkSolution { inner, reference })
}

unsafe fn finish(
    out_solution: *mut *mut StkSolution,
    make: impl FnOnce() -> Result<StkSolution, Failure>,
) -> StkStatus {
    guard(|| {
        let slot = out(out_solution, "out_solution")?;
        *slot = ptr::null_mut();
        *slot = Box::into_raw(Box::new(make()?));
        Ok(())
    })
}

/// Truncated series of order `order` for named catalog data (`exp-cos`, `abs`, `sqrt-abs`,
/// `step`, `log-source`, `nonsmooth-harmonic`). `robin_b <= 0` selects the Dirichlet
/// problem; otherwise the Robin problem `∂_ν u + b u = g` with `g` built from the data's
/// harmonic field.
///
/// # Safety
/// `basis` must be a live handle, `data` NUL-terminated and `out_solution` valid. The
/// handle must be released with [`stk_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn stk_solve_catalog(
    basis: *const StkBasis,
    data: *const c_char,
    order: usize,
    robin_b: f64,
    out_solution: *mut *mut StkSolution,
) -> StkStatus {
    finish(out_solution, || {
        let basis = handle(basis, "basis")?;
        let data = catalog(text(data, "data")?, basis.inner.curve.as_ref())?;
        if robin_b > 0.0 && data.interior(0.0.into()).is_none() {
            return Err(Error::InvalidArgument(format!(
                "data `{}` has no harmonic field for Robin data",
                data.name()
            ))
            .into());
        }
        build_solution(basis, data, order, (robin_b > 0.0).then_some(robin_b))
    })
}

/// Truncated series for boundary data given at the basis nodes (`len` must equal the node
/// count), interpolated trigonometrically in between. `robin_b <= 0` selects Dirichlet;
/// otherwise the values are the Robin right-hand side `g`.
///
/// # Safety
/// `basis` must be a live handle, `values` valid for `len` doubles and `out_solution`
/// valid. The handle must be released with [`stk_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn stk_solve_values(
    basis: *const StkBasis,
    values: *const f64,
    len: usize,
    order: usize,
    robin_b: f64,
    out_solution: *mut *mut StkSolution,
) -> StkStatus {
    finish(out_solution, || {
        let basis = handle(basis, "basis")?;
        if values.is_null() {
            return Err(null("values"));
        }
        let values = std::slice::from_raw_parts(values, len);
        let interp = TrigInterpolant::new(values, &basis.inner.grid)?;
        let data = BoundaryData::from_parameter("values", move |t| interp.eval(t));
        let mut solution = build_solution(basis, data, order, (robin_b > 0.0).then_some(robin_b))?;
        if robin_b > 0.0 {
            solution.reference = None;
        }
        Ok(solution)
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must come from a `stk_solve_*` function and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stk_solution_free(solution: *mut StkSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Value of the solution at an interior point. Fails with `NearBoundary` inside the
/// near-boundary band where the representation formula loses accuracy.
///
/// # Safety
/// `solution` must be a live handle and `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn stk_solution_eval(
    solution: *const StkSolution,
    x: f64,
    y: f64,
    out_value: *mut f64,
) -> StkStatus {
    guard(|| {
        let s = handle(solution, "solution")?;
        *out(out_value, "out_value")? = s.inner.eval_interior(Complex64::new(x, y))?;
        Ok(())
    })
}

/// Copies the solution's values at the basis nodes into `buffer`.
///
/// # Safety
/// `solution` must be a live handle and `buffer` valid for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn stk_solution_boundary_values(
    solution: *const StkSolution,
    buffer: *mut f64,
    capacity: usize,
) -> StkStatus {
    guard(|| {
        copy_into(
            &handle(solution, "solution")?.inner.boundary_values(),
            buffer,
            capacity,
        )
    })
}

/// `L²(∂Ω)` distance between the solution and its reference: the Dirichlet data, or the
/// trace of the harmonic field behind Robin catalog data. Fails when no reference exists.
///
/// # Safety
/// `solution` must be a live handle and `out_error` valid.
#[no_mangle]
pub unsafe extern "C" fn stk_solution_boundary_error(
    solution: *const StkSolution,
    out_error: *mut f64,
) -> StkStatus {
    guard(|| {
        let s = handle(solution, "solution")?;
        let reference = s.reference.as_ref().ok_or_else(|| {
            Failure::from(Error::InvalidArgument(
                "Robin solution from nodal values has no boundary reference".into(),
            ))
        })?;
        *out(out_error, "out_error")? = error_l2_boundary(&s.inner, reference)?;
        Ok(())
    })
}
