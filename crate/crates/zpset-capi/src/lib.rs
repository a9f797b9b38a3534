//! C ABI for the zpset engine.
//!
//! Conventions: every fallible call returns a [`ZpsStatus`] and writes its
//! result through an out-pointer; objects cross the boundary as opaque
//! handles that must be released with the matching `_free` function;
//! strings returned by the library are NUL-terminated, UTF-8, and owned by
//! the caller until passed to [`zps_string_free`]. Panics are caught at the
//! boundary and surfaced as `ZPS_STATUS_INTERNAL_PANIC`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use zpset::construct::{self, Budget, ConstructError};
use zpset::harness::{self, HarnessError, LemmaId};
use zpset::set::{exp_sum_magnitude, SetError, SumsetBackend, ZpSet};
use zpset::zp::{PrimeModulus, ZpError};

/// Status code for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    NotPrime = 3,
    EvenPrime = 4,
    ZeroInverse = 5,
    ModulusMismatch = 6,
    EmptyDenominator = 7,
    DegenerateY = 8,
    ZeroCoefficient = 9,
    RestrictionViolated = 10,
    QIsFull = 11,
    QIsEmpty = 12,
    HypothesisViolated = 13,
    EpsOutOfRange = 14,
    OrderTooSmall = 15,
    BudgetExceeded = 16,
    NotADivisor = 17,
    UnknownLemma = 18,
    MissingBinding = 19,
    OutOfRange = 20,
    ParseError = 21,
    BufferTooSmall = 22,
    InternalPanic = 23,
}

/// Sumset backend selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZpsBackend {
    DenseShift = 0,
    NttConvolution = 1,
}

impl From<ZpsBackend> for SumsetBackend {
    fn from(b: ZpsBackend) -> Self {
        match b {
            ZpsBackend::DenseShift => SumsetBackend::DenseShift,
            ZpsBackend::NttConvolution => SumsetBackend::NttConvolution,
        }
    }
}

/// Opaque subset of `Z_p`.
pub struct ZpsSet(ZpSet);

/// Opaque covering witness.
pub struct ZpsWitness(construct::Witness);

fn status_of_zp(e: ZpError) -> ZpsStatus {
    match e {
        ZpError::NotPrime(_) => ZpsStatus::NotPrime,
        ZpError::EvenPrime => ZpsStatus::EvenPrime,
        ZpError::ZeroInverse => ZpsStatus::ZeroInverse,
    }
}

fn status_of_set(e: SetError) -> ZpsStatus {
    match e {
        SetError::ModulusMismatch(..) => ZpsStatus::ModulusMismatch,
        SetError::EmptyDenominator => ZpsStatus::EmptyDenominator,
        SetError::DegenerateY => ZpsStatus::DegenerateY,
        SetError::ZeroCoefficient => ZpsStatus::ZeroCoefficient,
    }
}

fn status_of_construct(e: ConstructError) -> ZpsStatus {
    match e {
        ConstructError::Set(inner) => status_of_set(inner),
        ConstructError::RestrictionViolated(_) => ZpsStatus::RestrictionViolated,
        ConstructError::QIsFull => ZpsStatus::QIsFull,
        ConstructError::QIsEmpty => ZpsStatus::QIsEmpty,
        ConstructError::DegenerateY => ZpsStatus::DegenerateY,
        ConstructError::HypothesisViolated { .. } => ZpsStatus::HypothesisViolated,
        ConstructError::EpsOutOfRange { .. } => ZpsStatus::EpsOutOfRange,
        ConstructError::OrderTooSmall(_) => ZpsStatus::OrderTooSmall,
        ConstructError::ComputeBudgetExceeded { .. } => ZpsStatus::BudgetExceeded,
        ConstructError::NotADivisor { .. } => ZpsStatus::NotADivisor,
    }
}

fn status_of_harness(e: HarnessError) -> ZpsStatus {
    match e {
        HarnessError::MissingBinding(_) => ZpsStatus::MissingBinding,
        HarnessError::BudgetExceeded { .. } => ZpsStatus::BudgetExceeded,
        HarnessError::InstanceOutOfRange(_) => ZpsStatus::OutOfRange,
        HarnessError::Set(inner) => status_of_set(inner),
        HarnessError::Construct(inner) => status_of_construct(inner),
    }
}

fn guarded(body: impl FnOnce() -> ZpsStatus) -> ZpsStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(ZpsStatus::InternalPanic)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> ZpsStatus {
    if out.is_null() {
        return ZpsStatus::NullPointer;
    }
    unsafe { out.write(value) };
    ZpsStatus::Ok
}

unsafe fn set_ref<'a>(s: *const ZpsSet) -> Option<&'a ZpSet> {
    unsafe { s.as_ref().map(|w| &w.0) }
}

fn boxed_set(s: ZpSet) -> *mut ZpsSet {
    Box::into_raw(Box::new(ZpsSet(s)))
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn zps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a zpset function that transfers string ownership, and
/// must not have been freed already. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn zps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds a set over `Z_p` from `len` residues (reduced mod p).
/// `elems` may be NULL when `len` is 0.
///
/// # Safety
/// `elems` must point to `len` readable u64 values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zps_set_new(
    p: u64,
    elems: *const u64,
    len: usize,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        if out.is_null() || (elems.is_null() && len > 0) {
            return ZpsStatus::NullPointer;
        }
        let m = match PrimeModulus::new(p) {
            Ok(m) => m,
            Err(e) => return status_of_zp(e),
        };
        let members = if len == 0 {
            &[][..]
        } else {
            unsafe { std::slice::from_raw_parts(elems, len) }
        };
        let set = ZpSet::from_elements(m, members.iter().copied());
        unsafe { write_out(out, boxed_set(set)) }
    })
}

/// Parses a set literal such as `{1,2,5..9}` over `Z_p`.
///
/// # Safety
/// `literal` must be a readable NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_set_parse(
    p: u64,
    literal: *const c_char,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        if literal.is_null() || out.is_null() {
            return ZpsStatus::NullPointer;
        }
        let text = match unsafe { CStr::from_ptr(literal) }.to_str() {
            Ok(t) => t,
            Err(_) => return ZpsStatus::InvalidUtf8,
        };
        let m = match PrimeModulus::new(p) {
            Ok(m) => m,
            Err(e) => return status_of_zp(e),
        };
        match zpset::cli::parse_set_literal(text, m) {
            Ok(set) => unsafe { write_out(out, boxed_set(set)) },
            Err(_) => ZpsStatus::ParseError,
        }
    })
}

/// # Safety
/// `s` must be a live handle from this library or NULL.
#[no_mangle]
pub unsafe extern "C" fn zps_set_free(s: *mut ZpsSet) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// # Safety
/// `s` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn zps_set_modulus(s: *const ZpsSet) -> u64 {
    unsafe { set_ref(s) }.map_or(0, |s| s.modulus().value())
}

/// # Safety
/// `s` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn zps_set_cardinality(s: *const ZpsSet) -> u64 {
    unsafe { set_ref(s) }.map_or(0, |s| s.cardinality())
}

/// # Safety
/// `s` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn zps_set_contains(s: *const ZpsSet, v: u64) -> bool {
    unsafe { set_ref(s) }.is_some_and(|s| s.contains(v))
}

/// Copies the members (ascending) into `buf`. Writes the member count to
/// `written`; fails with `BUFFER_TOO_SMALL` when `cap` is insufficient
/// (call with `cap = 0` to query the required size).
///
/// # Safety
/// `buf` must point to `cap` writable u64 slots (may be NULL when cap is 0);
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zps_set_elements(
    s: *const ZpsSet,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> ZpsStatus {
    guarded(|| {
        let Some(set) = (unsafe { set_ref(s) }) else {
            return ZpsStatus::NullPointer;
        };
        if written.is_null() || (buf.is_null() && cap > 0) {
            return ZpsStatus::NullPointer;
        }
        let n = set.cardinality() as usize;
        unsafe { written.write(n) };
        if cap < n {
            return ZpsStatus::BufferTooSmall;
        }
        let slots = unsafe { std::slice::from_raw_parts_mut(buf, n.max(1).min(cap.max(1))) };
        for (slot, e) in slots.iter_mut().zip(set.iter()) {
            *slot = e;
        }
        ZpsStatus::Ok
    })
}

macro_rules! binary_set_op {
    ($(#[$doc:meta])* $name:ident, |$x:ident, $y:ident| $body:expr) => {
        $(#[$doc])*
        /// # Safety
        /// Operand handles must be live; `out` must be writable.
        #[no_mangle]
        pub unsafe extern "C" fn $name(
            x: *const ZpsSet,
            y: *const ZpsSet,
            out: *mut *mut ZpsSet,
        ) -> ZpsStatus {
            guarded(|| {
                let (Some($x), Some($y)) = (unsafe { set_ref(x) }, unsafe { set_ref(y) }) else {
                    return ZpsStatus::NullPointer;
                };
                match $body {
                    Ok(set) => unsafe { write_out(out, boxed_set(set)) },
                    Err(e) => status_of_set(e),
                }
            })
        }
    };
}

binary_set_op!(
    /// Difference set `{x - y mod p}`.
    zps_difference,
    |x, y| x.difference(y)
);
binary_set_op!(
    /// Product set `{x * y mod p}`.
    zps_productset,
    |x, y| x.productset(y)
);
binary_set_op!(
    /// Quotient set `{x / y : y != 0}`.
    zps_quotientset,
    |x, y| x.quotientset(y)
);
binary_set_op!(
    /// `Q[X,Y] = (X-X)/(Y-Y)`; needs `|Y| > 1`.
    zps_q_set,
    |x, y| ZpSet::q_set(x, y)
);

/// Sumset `{x + y mod p}` under the chosen backend.
///
/// # Safety
/// Operand handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zps_sumset(
    x: *const ZpsSet,
    y: *const ZpsSet,
    backend: ZpsBackend,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        let (Some(x), Some(y)) = (unsafe { set_ref(x) }, unsafe { set_ref(y) }) else {
            return ZpsStatus::NullPointer;
        };
        match x.sumset(y, backend.into()) {
            Ok(set) => unsafe { write_out(out, boxed_set(set)) },
            Err(e) => status_of_set(e),
        }
    })
}

/// Dilation `{lambda * a}`.
///
/// # Safety
/// `a` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_dilate(
    lambda: u64,
    a: *const ZpsSet,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        let Some(a) = (unsafe { set_ref(a) }) else {
            return ZpsStatus::NullPointer;
        };
        let lam = a.modulus().element(lambda);
        match a.dilate(lam) {
            Ok(set) => unsafe { write_out(out, boxed_set(set)) },
            Err(e) => status_of_set(e),
        }
    })
}

/// k-fold sumset `kX` (k >= 1) by binary doubling.
///
/// # Safety
/// `x` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_iterated_sum(
    x: *const ZpsSet,
    k: u64,
    backend: ZpsBackend,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        let Some(x) = (unsafe { set_ref(x) }) else {
            return ZpsStatus::NullPointer;
        };
        if k == 0 {
            return ZpsStatus::OutOfRange;
        }
        match x.iterated_sum(k, backend.into()) {
            Ok(set) => unsafe { write_out(out, boxed_set(set)) },
            Err(e) => status_of_set(e),
        }
    })
}

/// k-fold product set `X^k` (k >= 1).
///
/// # Safety
/// `x` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_product_power(
    x: *const ZpsSet,
    k: u64,
    out: *mut *mut ZpsSet,
) -> ZpsStatus {
    guarded(|| {
        let Some(x) = (unsafe { set_ref(x) }) else {
            return ZpsStatus::NullPointer;
        };
        if k == 0 {
            return ZpsStatus::OutOfRange;
        }
        match x.product_power(k) {
            Ok(set) => unsafe { write_out(out, boxed_set(set)) },
            Err(e) => status_of_set(e),
        }
    })
}

/// `|sum exp(2 pi i a x y / p)|` over the two sets; `a != 0`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_exp_sum_magnitude(
    x: *const ZpsSet,
    y: *const ZpsSet,
    a: u64,
    out: *mut f64,
) -> ZpsStatus {
    guarded(|| {
        let (Some(x), Some(y)) = (unsafe { set_ref(x) }, unsafe { set_ref(y) }) else {
            return ZpsStatus::NullPointer;
        };
        match exp_sum_magnitude(x, y, x.modulus().element(a)) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => status_of_set(e),
        }
    })
}

/// Smallest `xi` in `Q[X,Y]` with `xi + a` outside it; `a != 0`.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_find_xi(
    x: *const ZpsSet,
    y: *const ZpsSet,
    a: u64,
    out: *mut u64,
) -> ZpsStatus {
    guarded(|| {
        let (Some(x), Some(y)) = (unsafe { set_ref(x) }, unsafe { set_ref(y) }) else {
            return ZpsStatus::NullPointer;
        };
        let a = x.modulus().element(a);
        if a.is_zero() {
            return ZpsStatus::ZeroCoefficient;
        }
        match construct::find_xi_lemma4(x, y, a) {
            Ok(xi) => unsafe { write_out(out, xi.value()) },
            Err(e) => status_of_construct(e),
        }
    })
}

/// Runs the four-case covering pipeline on `a` with the given order and
/// eps; `max_cover_order = 0` selects the default budget.
///
/// # Safety
/// `a` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_theorem1_construct(
    a: *const ZpsSet,
    n: u32,
    eps: f64,
    backend: ZpsBackend,
    max_cover_order: u64,
    out: *mut *mut ZpsWitness,
) -> ZpsStatus {
    guarded(|| {
        let Some(a) = (unsafe { set_ref(a) }) else {
            return ZpsStatus::NullPointer;
        };
        let budget = if max_cover_order == 0 {
            Budget::default()
        } else {
            Budget {
                max_cover_order,
            }
        };
        match construct::theorem1_construct(a, n, eps, backend.into(), &budget) {
            Ok(w) => unsafe { write_out(out, Box::into_raw(Box::new(ZpsWitness(w)))) },
            Err(e) => status_of_construct(e),
        }
    })
}

/// Builds the order-d subgroup of `Z_p^*` and runs the covering check on
/// it (eps = 1/2, least admissible n).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zps_corollary1_check(
    p: u64,
    d: u64,
    backend: ZpsBackend,
    max_cover_order: u64,
    out: *mut *mut ZpsWitness,
) -> ZpsStatus {
    guarded(|| {
        let m = match PrimeModulus::new(p) {
            Ok(m) => m,
            Err(e) => return status_of_zp(e),
        };
        let budget = if max_cover_order == 0 {
            Budget::default()
        } else {
            Budget {
                max_cover_order,
            }
        };
        let spec = match construct::make_subgroup(m, d) {
            Ok(s) => s,
            Err(e) => return status_of_construct(e),
        };
        match construct::corollary1_check(&spec, backend.into(), &budget) {
            Ok(w) => unsafe { write_out(out, Box::into_raw(Box::new(ZpsWitness(w)))) },
            Err(e) => status_of_construct(e),
        }
    })
}

/// # Safety
/// `w` must be a live witness handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn zps_witness_free(w: *mut ZpsWitness) {
    if !w.is_null() {
        drop(unsafe { Box::from_raw(w) });
    }
}

/// # Safety
/// `w` must be a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn zps_witness_case(w: *const ZpsWitness) -> u32 {
    unsafe { w.as_ref() }.map_or(0, |w| w.0.case_number as u32)
}

/// # Safety
/// `w` must be a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn zps_witness_cover_order(w: *const ZpsWitness) -> u64 {
    unsafe { w.as_ref() }.map_or(0, |w| w.0.cover_order)
}

/// # Safety
/// `w` must be a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn zps_witness_verified(w: *const ZpsWitness) -> bool {
    unsafe { w.as_ref() }.is_some_and(|w| w.0.cover_verified)
}

/// Serializes the witness as JSON; free with [`zps_string_free`].
///
/// # Safety
/// `w` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_witness_json(
    w: *const ZpsWitness,
    out: *mut *mut c_char,
) -> ZpsStatus {
    guarded(|| {
        let Some(w) = (unsafe { w.as_ref() }) else {
            return ZpsStatus::NullPointer;
        };
        let json = serde_json::to_string(&w.0).expect("witness serializes");
        unsafe { write_out(out, export_string(json)) }
    })
}

fn run_lemma(
    lemma: *const c_char,
    p: u64,
    run: impl FnOnce(LemmaId, PrimeModulus) -> Result<harness::LemmaReport, HarnessError>,
    out_json: *mut *mut c_char,
) -> ZpsStatus {
    if lemma.is_null() || out_json.is_null() {
        return ZpsStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(lemma) }.to_str() {
        Ok(t) => t,
        Err(_) => return ZpsStatus::InvalidUtf8,
    };
    let Ok(id) = text.parse::<LemmaId>() else {
        return ZpsStatus::UnknownLemma;
    };
    let m = match PrimeModulus::new(p) {
        Ok(m) => m,
        Err(e) => return status_of_zp(e),
    };
    match run(id, m) {
        Ok(report) => unsafe { write_out(out_json, export_string(report.to_json())) },
        Err(e) => status_of_harness(e),
    }
}

/// Exhaustive verification run under default caps; the JSON report follows
/// the stable schema. Free the string with [`zps_string_free`].
///
/// # Safety
/// `lemma` must be a readable NUL-terminated string; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_run_exhaustive(
    lemma: *const c_char,
    p: u64,
    out_json: *mut *mut c_char,
) -> ZpsStatus {
    guarded(|| {
        run_lemma(
            lemma,
            p,
            |id, m| harness::run_exhaustive(id, m, &harness::Caps::default()),
            out_json,
        )
    })
}

/// Seeded random verification run under default caps.
///
/// # Safety
/// `lemma` must be a readable NUL-terminated string; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn zps_run_random(
    lemma: *const c_char,
    p: u64,
    samples: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> ZpsStatus {
    guarded(|| {
        run_lemma(
            lemma,
            p,
            |id, m| harness::run_random(id, m, samples, seed, &harness::Caps::default()),
            out_json,
        )
    })
}
