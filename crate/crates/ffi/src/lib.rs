//! C ABI over the `stablehom` engines. Handles are opaque and owned by the caller
//! once returned; every function reports a [`ShStatus`] and leaves a message for
//! [`sh_last_error`] on failure.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stablehom::cli::{self, parse_expr, CatKind, CliError, JobSpec};
use stablehom::exactla::Field;
use stablehom::fincat::FinCat;
use stablehom::funrep::{evaluate_as, LinRep, Variance};
use stablehom::homalg::{tor, ResolveOptions, Side};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    ParseError = 3,
    CapExceeded = 4,
    ComputeError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShVariance {
    Covariant = 0,
    Contravariant = 1,
}

/// A finite category.
pub struct ShCategory {
    cat: FinCat,
    field: Field,
}

/// A linear representation of a category.
pub struct ShRep {
    rep: LinRep,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &CliError) -> ShStatus {
    match e {
        CliError::Syntax(_) => ShStatus::ParseError,
        CliError::Cap(_) => ShStatus::CapExceeded,
        CliError::Job(_) | CliError::Kind { .. } => ShStatus::InvalidArgument,
        _ => ShStatus::ComputeError,
    }
}

fn fail(status: ShStatus, msg: impl Into<String>) -> ShStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (ShStatus, String)>) -> ShStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShStatus::Ok,
        Ok(Err((s, msg))) => fail(s, msg),
        Err(_) => fail(ShStatus::Panic, "internal panic"),
    }
}

fn cli_err(e: CliError) -> (ShStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (ShStatus, String)> {
    if p.is_null() {
        return Err((ShStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ShStatus::InvalidArgument, "string is not UTF-8".into()))
}

fn null() -> (ShStatus, String) {
    (ShStatus::NullArgument, "null pointer argument".into())
}

/// The message of the last failure on this thread, or NULL. Valid until the next call
/// on the same thread.
#[no_mangle]
pub extern "C" fn sh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a category by name (`all`, `inj`, `gamma`, `span-inj`, ...) over `F_q`, truncated at `dmax`.
#[no_mangle]
pub unsafe extern "C" fn sh_category_build(kind: *const c_char, q: u32, dmax: usize, out: *mut *mut ShCategory) -> ShStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let name = text(kind)?;
        let kind: CatKind = name.parse().map_err(cli_err)?;
        let field = Field::new(q).map_err(|e| (ShStatus::InvalidArgument, e.to_string()))?;
        let cat = cli::build_cat(kind, field, dmax, stablehom::fincat::DEFAULT_MORPHISM_CAP).map_err(cli_err)?;
        *out = Box::into_raw(Box::new(ShCategory { cat, field }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sh_category_free(cat: *mut ShCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sh_category_num_objects(cat: *const ShCategory, out: *mut usize) -> ShStatus {
    guard(|| {
        let (cat, out) = (cat.as_ref().ok_or_else(null)?, out.as_mut().ok_or_else(null)?);
        *out = cat.cat.num_objects();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sh_category_num_morphisms(cat: *const ShCategory, out: *mut usize) -> ShStatus {
    guard(|| {
        let (cat, out) = (cat.as_ref().ok_or_else(null)?, out.as_mut().ok_or_else(null)?);
        *out = cat.cat.num_morphisms();
        Ok(())
    })
}

/// Evaluates a functor expression on the category with the requested variance.
#[no_mangle]
pub unsafe extern "C" fn sh_rep_evaluate(cat: *const ShCategory, expr: *const c_char, variance: ShVariance, out: *mut *mut ShRep) -> ShStatus {
    guard(|| {
        let cat = cat.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let e = parse_expr(text(expr)?).map_err(|e| cli_err(e.into()))?;
        let v = match variance {
            ShVariance::Covariant => Variance::Covariant,
            ShVariance::Contravariant => Variance::Contravariant,
        };
        let rep = evaluate_as(&e, &cat.cat, cat.field, v).map_err(|e| cli_err(e.into()))?;
        *out = Box::into_raw(Box::new(ShRep { rep }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sh_rep_free(rep: *mut ShRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Copies the dimension at each object into `buf`. `*len` is the capacity on entry
/// and the number of objects on exit; `BUFFER_TOO_SMALL` leaves `buf` untouched.
#[no_mangle]
pub unsafe extern "C" fn sh_rep_dims(rep: *const ShRep, buf: *mut usize, len: *mut usize) -> ShStatus {
    guard(|| {
        let (rep, len) = (rep.as_ref().ok_or_else(null)?, len.as_mut().ok_or_else(null)?);
        copy_out(rep.rep.dims(), buf, len)
    })
}

unsafe fn copy_out(values: &[usize], buf: *mut usize, len: &mut usize) -> Result<(), (ShStatus, String)> {
    let cap = std::mem::replace(len, values.len());
    if cap < values.len() {
        return Err((ShStatus::BufferTooSmall, format!("need {} entries, got {cap}", values.len())));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// `dim Tor_i(contra, co)` for `i = 0..=max_degree` into `buf`, with the length
/// convention of [`sh_rep_dims`].
#[no_mangle]
pub unsafe extern "C" fn sh_tor(contra: *const ShRep, co: *const ShRep, max_degree: usize, buf: *mut usize, len: *mut usize) -> ShStatus {
    guard(|| {
        let (g, f, len) = (contra.as_ref().ok_or_else(null)?, co.as_ref().ok_or_else(null)?, len.as_mut().ok_or_else(null)?);
        let r = tor(&g.rep, &f.rep, max_degree, Side::Right, &ResolveOptions::default()).map_err(|e| cli_err(e.into()))?;
        copy_out(&r.dims, buf, len)
    })
}

/// Canonical printed form of an expression. On a parse error `*error_pos` receives
/// the byte offset. Free the string with [`sh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sh_expr_canonical(expr: *const c_char, out: *mut *mut c_char, error_pos: *mut usize) -> ShStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        match parse_expr(text(expr)?) {
            Ok(e) => {
                *out = CString::new(e.to_string()).expect("printed expressions have no nul").into_raw();
                Ok(())
            }
            Err(e) => {
                if let Some(p) = error_pos.as_mut() {
                    *p = e.pos;
                }
                Err((ShStatus::ParseError, e.to_string()))
            }
        }
    })
}

/// Runs a TOML job and returns the JSON report (an error record when the job
/// fails) and the exit code the command-line tool would give. No cache is used.
#[no_mangle]
pub unsafe extern "C" fn sh_run_job(job_toml: *const c_char, out_json: *mut *mut c_char, exit_code: *mut i32) -> ShStatus {
    guard(|| {
        if out_json.is_null() || exit_code.is_null() {
            return Err(null());
        }
        let job = JobSpec::from_toml(text(job_toml)?).map_err(cli_err)?;
        let outcome = cli::run(&job, None);
        *exit_code = outcome.exit_code;
        *out_json = CString::new(outcome.json).map_err(|_| (ShStatus::ComputeError, "report contains nul".into()))?.into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
