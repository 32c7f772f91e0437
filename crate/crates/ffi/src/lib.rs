//! C ABI over `segre-core`. Engines and polynomials are opaque heap handles;
//! every fallible call returns a [`SegreStatus`] and leaves a message for
//! [`segre_last_error_message`] on failure. Strings handed out must be
//! released with [`segre_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use segre_core::coeff::{DPoly, Rational};
use segre_core::integrals::{check_main_theorem, check_wkmain, check_xi, IntegralEngine};
use segre_core::operators::OpContext;
use segre_core::symalg::Rules;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InternalError = 3,
    Panic = 4,
}

/// Engine settings. `fixed_d = false` keeps `d` symbolic and ignores `d`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SegreOptions {
    pub fixed_d: bool,
    pub d: i64,
    pub prune: bool,
    pub theta1_rule: bool,
    pub parallel: bool,
}

/// Memoizing integral engine.
pub struct SegreEngine {
    inner: IntegralEngine,
}

/// A polynomial in `d` with rational coefficients.
pub struct SegrePoly {
    inner: DPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), (SegreStatus, String)>) -> SegreStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SegreStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside segre");
            SegreStatus::Panic
        }
    }
}

fn null(what: &str) -> (SegreStatus, String) {
    (SegreStatus::NullPointer, format!("{what} is null"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Symbolic `d`, pruning on, θ₁ rule off, parallel expansion on.
#[no_mangle]
pub extern "C" fn segre_options_default() -> SegreOptions {
    SegreOptions {
        fixed_d: false,
        d: 0,
        prune: true,
        theta1_rule: false,
        parallel: true,
    }
}

/// Returns null if `options` is null.
///
/// # Safety
/// `options` must be null or point to a valid `SegreOptions`.
#[no_mangle]
pub unsafe extern "C" fn segre_engine_new(options: *const SegreOptions) -> *mut SegreEngine {
    let Some(o) = options.as_ref() else {
        set_error("options is null");
        return ptr::null_mut();
    };
    let base = if o.fixed_d {
        OpContext::fixed(o.d)
    } else {
        OpContext::default()
    };
    let ctx = OpContext {
        rules: Rules {
            normalize: true,
            prune: o.prune,
            kill_theta_one: o.theta1_rule,
        },
        parallel: o.parallel,
        ..base
    };
    Box::into_raw(Box::new(SegreEngine {
        inner: IntegralEngine::new(ctx),
    }))
}

/// # Safety
/// `engine` must be null or a handle from `segre_engine_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn segre_engine_free(engine: *mut SegreEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Computes `∫_{S^[n]} s_{2n}` and stores a new polynomial handle in `*out`.
///
/// # Safety
/// `engine` must be a live engine handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_integral(
    engine: *const SegreEngine,
    n: u32,
    out: *mut *mut SegrePoly,
) -> SegreStatus {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let record = engine
            .inner
            .integral(n)
            .map_err(|e| (SegreStatus::InternalError, e.to_string()))?;
        *out = Box::into_raw(Box::new(SegrePoly {
            inner: record.value,
        }));
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_free(poly: *mut SegrePoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree in `d`, or -1 for the zero polynomial (and for a null handle).
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_degree(poly: *const SegrePoly) -> i64 {
    poly.as_ref()
        .and_then(|p| p.inner.degree())
        .map_or(-1, |d| d as i64)
}

/// The coefficient of `d^power` as `"num"` or `"num/den"`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_coeff(
    poly: *const SegrePoly,
    power: u32,
    out: *mut *mut c_char,
) -> SegreStatus {
    guard(|| {
        let p = poly.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(p.inner.coeff(power as usize).to_string());
        Ok(())
    })
}

/// The value at integer `d`, as `"num"` or `"num/den"`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_eval(
    poly: *const SegrePoly,
    d: i64,
    out: *mut *mut c_char,
) -> SegreStatus {
    guard(|| {
        let p = poly.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(p.inner.eval(&Rational::from(d)).to_string());
        Ok(())
    })
}

/// Human-readable form such as `-1/2*d^2 + 3/2*d`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_to_string(
    poly: *const SegrePoly,
    out: *mut *mut c_char,
) -> SegreStatus {
    guard(|| {
        let p = poly.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(p.inner.to_string());
        Ok(())
    })
}

/// `[["num","den"], ...]`, ascending in powers of `d`.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_to_json(
    poly: *const SegrePoly,
    out: *mut *mut c_char,
) -> SegreStatus {
    guard(|| {
        let p = poly.as_ref().ok_or_else(|| null("poly"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cells: Vec<String> = p
            .inner
            .coeffs()
            .iter()
            .map(|c| format!("[\"{}\",\"{}\"]", c.numer(), c.denom()))
            .collect();
        *out = into_c_string(format!("[{}]", cells.join(",")));
        Ok(())
    })
}

/// True iff every coefficient is divisible by `(d - 3)`, i.e. the value at 3 is 0.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn segre_poly_divisible_by_d_minus_3(poly: *const SegrePoly) -> bool {
    poly.as_ref()
        .is_some_and(|p| p.inner.is_divisible_by_d_minus_3())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn segre_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn check_with(
    passed: *mut bool,
    run: impl FnOnce() -> Result<
        segre_core::integrals::CheckOutcome,
        segre_core::error::PreconditionError,
    >,
) -> SegreStatus {
    guard(|| {
        if passed.is_null() {
            return Err(null("passed"));
        }
        let outcome = run().map_err(|e| (SegreStatus::InvalidArgument, e.to_string()))?;
        if let Some(w) = &outcome.witness {
            set_error(w.to_string());
        }
        // SAFETY: checked non-null above; the caller guarantees validity
        unsafe { *passed = outcome.passed };
        Ok(())
    })
}

/// Balanced chain sum of length `k` on `S_m` at level `n`, with default rules.
/// On a failed check the witness is available from `segre_last_error_message`.
///
/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_check_main_theorem(
    k: u32,
    m: u32,
    n: u32,
    passed: *mut bool,
) -> SegreStatus {
    check_with(passed, || {
        check_main_theorem(k as usize, m, n, Rules::default())
    })
}

/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn segre_check_wkmain(
    k: u32,
    m: u32,
    n: u32,
    passed: *mut bool,
) -> SegreStatus {
    check_with(passed, || check_wkmain(k as usize, m, n, Rules::default()))
}

/// `prefix` holds `prefix_len` operator indices in `0..=3`; it may be null
/// when `prefix_len` is 0.
///
/// # Safety
/// `prefix` must point to `prefix_len` readable bytes; `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn segre_check_xi(
    k: u32,
    m: u32,
    n: u32,
    prefix: *const u8,
    prefix_len: usize,
    passed: *mut bool,
) -> SegreStatus {
    if prefix.is_null() && prefix_len > 0 {
        set_error("prefix is null");
        return SegreStatus::NullPointer;
    }
    let prefix = if prefix_len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(prefix, prefix_len)
    };
    check_with(passed, || {
        check_xi(k as usize, m, n, prefix, Rules::default())
    })
}

/// The message from the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn segre_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
