//! C ABI over `supertransport`.
//!
//! Values cross the boundary as opaque handles or JSON strings. Every
//! function returns an [`StStatus`]; on failure the message is available
//! from [`st_last_error_message`] on the same thread. Strings returned
//! through `out` pointers are owned by the caller and released with
//! [`st_string_free`]; handles with their matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::{json, Value};
use supertransport::config;
use supertransport::error::Error;
use supertransport::grassmann::{self, GenTag, GeneratorSet, GrassmannNumber};
use supertransport::scalar::{Rational, C64};
use supertransport::suites::{self, SuiteOptions};
use supertransport::transport::{self, Method, Solver, TransportProblem};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed JSON, UTF-8 or an unknown name in the input.
    Parse = 2,
    /// Operands live in different generator sets or algebras.
    AlgebraMismatch = 3,
    Parity = 4,
    NotInvertible = 5,
    /// The computation finished but a residual check failed.
    Residual = 6,
    Internal = 7,
}

/// Grassmann number with exact rational coefficients over a named
/// generator set.
pub struct StGrassmann {
    gens: GeneratorSet,
    value: GrassmannNumber<Rational>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> StStatus {
    match e {
        Error::Parse(_) | Error::Unknown(_) => StStatus::Parse,
        Error::AlgebraMismatch(_) => StStatus::AlgebraMismatch,
        Error::Parity(_) => StStatus::Parity,
        Error::NotInvertible(_) => StStatus::NotInvertible,
        _ => StStatus::Internal,
    }
}

/// Runs `f`, recording errors and converting panics to `Internal`.
fn guard(f: impl FnOnce() -> Result<StStatus, (StStatus, String)>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == StStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            StStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (StStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (StStatus, String) {
    (StStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (StStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (StStatus::Parse, format!("{what}: {e}")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (StStatus, String)> {
    let c = CString::new(s).map_err(|e| (StStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a>(p: *const StGrassmann, what: &str) -> Result<&'a StGrassmann, (StStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failure on this thread (empty after a success). The
/// pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn st_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"generators": [names], "terms": [{"idx": [names], "coef": "p/q"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_from_json(json: *const c_char, out: *mut *mut StGrassmann) -> StStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v: Value = config::parse_json(read_str(json, "json")?).map_err(lib_err)?;
        let names: Vec<String> = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or((StStatus::Parse, "missing 'generators' list".to_string()))?
            .iter()
            .map(|n| n.as_str().map(str::to_string).ok_or((StStatus::Parse, "generator names must be strings".to_string())))
            .collect::<Result<_, _>>()?;
        let tags = vec![GenTag::Parametrizing; names.len()];
        let gens = GeneratorSet::new(names, tags).map_err(lib_err)?;
        let value = gens.from_json(&v).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StGrassmann { gens, value }));
        Ok(StStatus::Ok)
    })
}

/// Writes the JSON form (same layout as the input) to `out`.
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_to_json(a: *const StGrassmann, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let a = handle(a, "a")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut v = a.gens.to_json(&a.value);
        v["generators"] = json!(a.gens.names());
        write_string(out, v.to_string())?;
        Ok(StStatus::Ok)
    })
}

unsafe fn binary(
    a: *const StGrassmann,
    b: *const StGrassmann,
    out: *mut *mut StGrassmann,
    op: impl FnOnce(&GeneratorSet, &GrassmannNumber<Rational>, &GrassmannNumber<Rational>) -> Result<GrassmannNumber<Rational>, Error>,
) -> StStatus {
    guard(|| {
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        if a.gens != b.gens {
            return Err((StStatus::AlgebraMismatch, "operands use different generator sets".into()));
        }
        let value = op(&a.gens, &a.value, &b.value).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StGrassmann { gens: a.gens.clone(), value }));
        Ok(StStatus::Ok)
    })
}

/// `out = a · b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_mul(a: *const StGrassmann, b: *const StGrassmann, out: *mut *mut StGrassmann) -> StStatus {
    binary(a, b, out, grassmann::gmul)
}

/// `out = a + b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_add(a: *const StGrassmann, b: *const StGrassmann, out: *mut *mut StGrassmann) -> StStatus {
    binary(a, b, out, |_, x, y| Ok(x + y))
}

/// `out = a⁻¹`; fails with `NotInvertible` when the body vanishes.
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_inv(a: *const StGrassmann, out: *mut *mut StGrassmann) -> StStatus {
    guard(|| {
        let a = handle(a, "a")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let value = grassmann::ginv(&a.value).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StGrassmann { gens: a.gens.clone(), value }));
        Ok(StStatus::Ok)
    })
}

/// # Safety
/// `a` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn st_grassmann_free(a: *mut StGrassmann) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Runs a verification suite (`clifford`, `jacobi`, `forms`, `fierz`,
/// `mc-flatness`, `connection-axioms`) and writes its report JSON to `out`.
/// Returns `Residual` when the report does not pass.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_verify_suite(name: *const c_char, seed: u64, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = suites::run(name, &SuiteOptions { seed, ..SuiteOptions::default() }).map_err(lib_err)?;
        write_string(out, r.to_json_pretty())?;
        if r.pass {
            Ok(StStatus::Ok)
        } else {
            Err((StStatus::Residual, format!("suite {name} has failing checks")))
        }
    })
}

/// Parallel transport. `problem` holds `chart`, `algebra`, `connection` and
/// `path` entries plus optional `steps` (default 1000) and `method`
/// (default `rk4`); the holonomy JSON is written to `out`.
///
/// # Safety
/// `problem` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_transport_json(problem: *const c_char, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let v = config::parse_json(read_str(problem, "problem")?).map_err(lib_err)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let steps = v.get("steps").and_then(Value::as_u64).unwrap_or(1000) as usize;
        let method = Method::parse(v.get("method").and_then(Value::as_str).unwrap_or("rk4")).map_err(lib_err)?;
        let chart = config::chart_from_value(&v).map_err(lib_err)?;
        let alg = config::algebra_from_value::<C64>(&v).map_err(lib_err)?;
        let connection = config::connection_from_value(&chart, alg, &v).map_err(lib_err)?;
        let path = config::path_from_value(&chart, &v).map_err(lib_err)?;
        let p = TransportProblem { chart: chart.clone(), connection, path, solver: Solver { steps, method } };
        let r = transport::transport_even(&p).map_err(lib_err)?;
        write_string(out, r.to_json(&chart).to_string())?;
        Ok(StStatus::Ok)
    })
}
