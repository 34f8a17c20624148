//! C ABI over `ffgeom`.
//!
//! Every fallible call returns an `FfgeomStatus`; on failure the message is
//! available from `ffgeom_last_error` on the same thread. Strings handed
//! out by the library are released with `ffgeom_string_free`, lattices with
//! `ffgeom_lattice_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ffgeom::dirichlet::{dirichlet_solve, dirichlet_verify, DirichletInstance};
use ffgeom::lattice::{covrad_cube, parse_lattice_file};
use ffgeom::minkmu::{mu_exact, MuInstance};
use ffgeom::parse::parse_ratfunc;
use ffgeom::{AbsValue, Error, FieldSpec, LatticeBasis, RatFunc};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfgeomStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque lattice handle.
pub struct FfgeomLattice(LatticeBasis);

/// `|value|` as `q^exponent`, or zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FfgeomAbs {
    pub is_zero: bool,
    pub exponent: i64,
}

impl From<AbsValue> for FfgeomAbs {
    fn from(v: AbsValue) -> Self {
        match v {
            AbsValue::Zero => Self { is_zero: true, exponent: 0 },
            AbsValue::Power(e) => Self { is_zero: false, exponent: e },
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FfgeomStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::LatticeFile { .. } | Error::NotPrime(_) | Error::ZeroDenominator => {
                FfgeomStatus::Parse
            }
            _ => FfgeomStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FfgeomStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfgeomStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FfgeomStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(FfgeomStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FfgeomStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(FfgeomStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn ratfunc(field: FieldSpec, text: &str) -> Result<RatFunc, Failure> {
    parse_ratfunc(field, text).map_err(|e| Failure(FfgeomStatus::Parse, format!("`{text}`: {e}")))
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ffgeom_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a lattice file (`q`, `d`, `row` lines).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_lattice_parse(text: *const c_char, out: *mut *mut FfgeomLattice) -> FfgeomStatus {
    guard(|| {
        non_null(out, "out")?;
        let text = read_str(text, "text")?;
        let lat = parse_lattice_file(text)?;
        *out = Box::into_raw(Box::new(FfgeomLattice(lat)));
        Ok(())
    })
}

/// # Safety
/// `lat` must be null or a handle from `ffgeom_lattice_parse`, freed once.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_lattice_free(lat: *mut FfgeomLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `lat` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_lattice_dim(lat: *const FfgeomLattice) -> usize {
    lat.as_ref().map_or(0, |l| l.0.dim())
}

/// Writes the `d` minima exponents into `out[0..len]`.
///
/// # Safety
/// `lat` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_lattice_minima(lat: *const FfgeomLattice, out: *mut i64, len: usize) -> FfgeomStatus {
    guard(|| {
        non_null(lat, "lattice")?;
        non_null(out, "out")?;
        let l = &(*lat).0;
        if len < l.dim() {
            return Err(Failure(
                FfgeomStatus::BufferTooSmall,
                format!("need {} slots, got {len}", l.dim()),
            ));
        }
        let profile = ffgeom::minima(l)?;
        std::slice::from_raw_parts_mut(out, l.dim()).copy_from_slice(&profile.exponents);
        Ok(())
    })
}

/// Covering radius with respect to the unit cube.
///
/// # Safety
/// `lat` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_lattice_covrad(lat: *const FfgeomLattice, out: *mut FfgeomAbs) -> FfgeomStatus {
    guard(|| {
        non_null(lat, "lattice")?;
        non_null(out, "out")?;
        *out = covrad_cube(&(*lat).0)?.into();
        Ok(())
    })
}

/// Exact `μ` for the unipotent lattice of `theta` (and `phi` when non-null).
/// `witness` may be null; otherwise it receives an uncovered grid point as
/// text, or null if none was recorded.
///
/// # Safety
/// `theta` must be a nul-terminated string, `phi` null or one; `out` must be
/// writable and `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_mu_exact(
    q: u32,
    theta: *const c_char,
    phi: *const c_char,
    out: *mut FfgeomAbs,
    witness: *mut *mut c_char,
) -> FfgeomStatus {
    guard(|| {
        non_null(out, "out")?;
        let field = FieldSpec::new(q)?;
        let theta = ratfunc(field, read_str(theta, "theta")?)?;
        let phi = if phi.is_null() {
            None
        } else {
            Some(ratfunc(field, read_str(phi, "phi")?)?)
        };
        let inst = MuInstance::from_ratfuncs(&theta, phi.as_ref())?;
        let res = mu_exact(&inst)?;
        *out = res.value.into();
        if !witness.is_null() {
            *witness = res.witness.map_or(ptr::null_mut(), |w| into_c_string(w.to_string()));
        }
        Ok(())
    })
}

/// Solves the improved Dirichlet problem for `n` targets with degree
/// budgets `ts`. On success `*solution` is one line
/// `b <b_1> ... <b_n> a <a> err <q^e>`, already verified.
///
/// # Safety
/// `thetas` must point at `n` nul-terminated strings and `ts` at `n`
/// values; `solution` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffgeom_dirichlet(
    q: u32,
    thetas: *const *const c_char,
    ts: *const usize,
    n: usize,
    solution: *mut *mut c_char,
) -> FfgeomStatus {
    guard(|| {
        non_null(thetas, "thetas")?;
        non_null(ts, "ts")?;
        non_null(solution, "solution")?;
        let field = FieldSpec::new(q)?;
        let tails = std::slice::from_raw_parts(thetas, n)
            .iter()
            .enumerate()
            .map(|(i, &p)| ratfunc(field, read_str(p, &format!("thetas[{i}]"))?)?.tail().map_err(Failure::from))
            .collect::<Result<Vec<_>, _>>()?;
        let inst = DirichletInstance::new(field, tails, std::slice::from_raw_parts(ts, n).to_vec())?;
        let sol = dirichlet_solve(&inst)?;
        if !dirichlet_verify(&inst, &sol)? {
            return Err(Failure(FfgeomStatus::Domain, "solution failed verification".into()));
        }
        *solution = into_c_string(sol.to_string());
        Ok(())
    })
}
