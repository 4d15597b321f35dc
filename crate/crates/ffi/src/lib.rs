//! C ABI over the core library. Objects cross the boundary as opaque
//! handles owned by the caller and released with the matching `_free`;
//! every entry point returns an [`ApnfStatus`], never unwinds, and stores
//! a message for the last failure in thread-local storage readable through
//! [`apnf_last_error`].
//!
//! Every entry point shares one safety contract, stated here instead of
//! on each function: handle arguments must be null or live pointers
//! previously returned by this library, out-parameters must be null or
//! point to writable memory, and buffers must be valid for their stated
//! lengths. Null handles are rejected with [`ApnfStatus::NullPointer`];
//! dangling ones cannot be detected and are undefined behavior, as for
//! any C API.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use apnforge::funcspace::{Builtin, FunctionTable};
use apnforge::gf2n::make_field;
use apnforge::lincode::{build_code, BinaryCode, DualDistance};
use apnforge::permgrp::full_automorphism_group;
use apnforge::Error;

/// Result discriminant for every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ApnfStatus {
    Ok = 0,
    /// A parameter was rejected (bad degree, reducible modulus, gcd
    /// condition, mismatched sizes, ...).
    BadParams = 1,
    /// A budgeted search ran out of wall-clock time.
    Timeout = 2,
    /// The two codes are not related by any affine witness.
    NoWitness = 3,
    /// The object exceeds a structural bound (dual cap, group size, ...).
    TooBig = 4,
    /// The field degree is outside the supported range.
    Unsupported = 5,
    /// A null pointer was passed where an object was required.
    NullPointer = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

pub struct ApnfField {
    inner: apnforge::gf2n::FieldSpec,
}

pub struct ApnfFunction {
    inner: FunctionTable,
}

pub struct ApnfCode {
    inner: BinaryCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(msg: impl Into<String>) {
    LAST_ERROR.with(|c| *c.borrow_mut() = msg.into().into_bytes());
}

fn fail(e: &Error) -> ApnfStatus {
    set_last_error(e.to_string());
    match e {
        Error::Timeout(_) => ApnfStatus::Timeout,
        Error::NoWitness => ApnfStatus::NoWitness,
        Error::TooBig { .. }
        | Error::TooLong(_)
        | Error::CapTooLarge(_)
        | Error::DegreeTooLarge(_)
        | Error::GroupTooLarge(_) => ApnfStatus::TooBig,
        Error::UnsupportedDegree(_) => ApnfStatus::Unsupported,
        _ => ApnfStatus::BadParams,
    }
}

fn null_arg() -> ApnfStatus {
    set_last_error("null pointer argument");
    ApnfStatus::NullPointer
}

fn guard(f: impl FnOnce() -> ApnfStatus) -> ApnfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_last_error("internal panic");
            ApnfStatus::Panic
        }
    }
}

/// Copies the last error message into `buf` (NUL-terminated, truncating)
/// and returns the length the full message needs, including the NUL.
#[no_mangle]
pub unsafe extern "C" fn apnf_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|c| {
        let m = c.borrow();
        if !buf.is_null() && cap > 0 {
            let n = (cap - 1).min(m.len());
            unsafe {
                std::ptr::copy_nonoverlapping(m.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        m.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn apnf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a field of degree `n`; `modulus` 0 selects the built-in
/// default for that degree.
#[no_mangle]
pub unsafe extern "C" fn apnf_field_new(
    n: u32,
    modulus: u32,
    out: *mut *mut ApnfField,
) -> ApnfStatus {
    guard(|| {
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = std::ptr::null_mut();
        match make_field(n, (modulus != 0).then_some(modulus)) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(ApnfField { inner: f }));
                ApnfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_field_free(p: *mut ApnfField) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn apnf_field_degree(field: *const ApnfField, out: *mut u32) -> ApnfStatus {
    guard(|| {
        let (Some(field), Some(out)) = (unsafe { field.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = field.inner.n();
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_field_modulus(field: *const ApnfField, out: *mut u32) -> ApnfStatus {
    guard(|| {
        let (Some(field), Some(out)) = (unsafe { field.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = field.inner.modulus();
        ApnfStatus::Ok
    })
}

fn new_function(
    field: *const ApnfField,
    out: *mut *mut ApnfFunction,
    make: impl FnOnce(apnforge::gf2n::FieldSpec) -> apnforge::Result<FunctionTable>,
) -> ApnfStatus {
    let Some(field) = (unsafe { field.as_ref() }) else {
        return null_arg();
    };
    let Some(out) = (unsafe { out.as_mut() }) else {
        return null_arg();
    };
    *out = std::ptr::null_mut();
    match make(field.inner) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(ApnfFunction { inner: f }));
            ApnfStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// The power function x^{2^r + 1}; requires gcd(r, n) = 1.
#[no_mangle]
pub unsafe extern "C" fn apnf_function_gold(
    field: *const ApnfField,
    r: u32,
    out: *mut *mut ApnfFunction,
) -> ApnfStatus {
    guard(|| {
        new_function(field, out, |f| {
            Ok(apnforge::funcspace::builtin_function(f, &Builtin::Gold { r })?.evaluate())
        })
    })
}

/// The trinomial family member with parameters (k, s, b, c) on a field of
/// degree 2k; pass 0 for `b` or `c` to take the canonical defaults.
#[no_mangle]
pub unsafe extern "C" fn apnf_function_family(
    field: *const ApnfField,
    k: u32,
    s: u32,
    b: u32,
    c: u32,
    out: *mut *mut ApnfFunction,
) -> ApnfStatus {
    guard(|| {
        new_function(field, out, |f| {
            let which = Builtin::Family {
                k,
                s,
                b: (b != 0).then_some(b),
                c: (c != 0).then_some(c),
            };
            Ok(apnforge::funcspace::builtin_function(f, &which)?.evaluate())
        })
    })
}

/// One of the three sporadic functions: `which` is 1, 2 (degree 6) or 3
/// (degree 8).
#[no_mangle]
pub unsafe extern "C" fn apnf_function_sporadic(
    field: *const ApnfField,
    which: u32,
    out: *mut *mut ApnfFunction,
) -> ApnfStatus {
    guard(|| {
        new_function(field, out, |f| {
            let which = match which {
                1 => Builtin::DillonH1,
                2 => Builtin::DillonH2,
                3 => Builtin::DillonH3,
                _ => return Err(Error::BadParams("sporadic index must be 1, 2 or 3".into())),
            };
            Ok(apnforge::funcspace::builtin_function(f, &which)?.evaluate())
        })
    })
}

/// A function given by its full value table (`len` must equal 2^n and
/// every entry must be a valid field element).
#[no_mangle]
pub unsafe extern "C" fn apnf_function_from_values(
    field: *const ApnfField,
    values: *const u32,
    len: usize,
    out: *mut *mut ApnfFunction,
) -> ApnfStatus {
    guard(|| {
        if values.is_null() {
            return null_arg();
        }
        let vals = unsafe { std::slice::from_raw_parts(values, len) };
        new_function(field, out, |f| {
            let size = f.size() as u32;
            let mut table = Vec::with_capacity(len);
            for &v in vals {
                if v >= size {
                    return Err(Error::BadParams(format!(
                        "value 0x{v:x} lies outside a field of size {size}"
                    )));
                }
                table.push(f.elem(v));
            }
            FunctionTable::from_values(f, table)
        })
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_function_free(p: *mut ApnfFunction) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn apnf_function_value(
    f: *const ApnfFunction,
    x: u32,
    out: *mut u32,
) -> ApnfStatus {
    guard(|| {
        let (Some(f), Some(out)) = (unsafe { f.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        if x as usize >= f.inner.field().size() {
            set_last_error("point lies outside the field");
            return ApnfStatus::BadParams;
        }
        *out = f.inner.value(x).bits();
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_function_differential_uniformity(
    f: *const ApnfFunction,
    threads: u32,
    out: *mut u32,
) -> ApnfStatus {
    guard(|| {
        let (Some(f), Some(out)) = (unsafe { f.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = f
            .inner
            .differential_uniformity_threads(threads.max(1) as usize) as u32;
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_function_is_apn(
    f: *const ApnfFunction,
    out: *mut bool,
) -> ApnfStatus {
    guard(|| {
        let (Some(f), Some(out)) = (unsafe { f.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = f.inner.is_apn();
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_function_algebraic_degree(
    f: *const ApnfFunction,
    out: *mut u32,
) -> ApnfStatus {
    guard(|| {
        let (Some(f), Some(out)) = (unsafe { f.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = f.inner.algebraic_degree();
        ApnfStatus::Ok
    })
}

/// Builds the binary code attached to the function.
#[no_mangle]
pub unsafe extern "C" fn apnf_code_build(
    f: *const ApnfFunction,
    out: *mut *mut ApnfCode,
) -> ApnfStatus {
    guard(|| {
        let (Some(f), Some(out)) = (unsafe { f.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = Box::into_raw(Box::new(ApnfCode {
            inner: build_code(&f.inner),
        }));
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_code_free(p: *mut ApnfCode) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn apnf_code_length(c: *const ApnfCode, out: *mut u32) -> ApnfStatus {
    guard(|| {
        let (Some(c), Some(out)) = (unsafe { c.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = c.inner.length() as u32;
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_code_dimension(c: *const ApnfCode, out: *mut u32) -> ApnfStatus {
    guard(|| {
        let (Some(c), Some(out)) = (unsafe { c.as_ref() }, unsafe { out.as_mut() }) else {
            return null_arg();
        };
        *out = c.inner.dimension() as u32;
        ApnfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn apnf_code_equal(
    a: *const ApnfCode,
    b: *const ApnfCode,
    out: *mut bool,
) -> ApnfStatus {
    guard(|| {
        let (Some(a), Some(b)) = (unsafe { a.as_ref() }, unsafe { b.as_ref() }) else {
            return null_arg();
        };
        let Some(out) = (unsafe { out.as_mut() }) else {
            return null_arg();
        };
        match a.inner.code_equal(&b.inner) {
            Ok(eq) => {
                *out = eq;
                ApnfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Searches dual codewords of weight up to `cap` (at most 8). On success
/// `out_found` says whether a nonzero dual word exists in range and
/// `out_distance` holds its minimum weight when found.
#[no_mangle]
pub unsafe extern "C" fn apnf_code_dual_min_distance(
    c: *const ApnfCode,
    cap: u32,
    out_found: *mut bool,
    out_distance: *mut u32,
) -> ApnfStatus {
    guard(|| {
        let Some(c) = (unsafe { c.as_ref() }) else {
            return null_arg();
        };
        let (Some(out_found), Some(out_distance)) = (unsafe { out_found.as_mut() }, unsafe {
            out_distance.as_mut()
        }) else {
            return null_arg();
        };
        match c.inner.dual_min_distance(cap) {
            Ok(DualDistance::Exact(w)) => {
                *out_found = true;
                *out_distance = w;
                ApnfStatus::Ok
            }
            Ok(DualDistance::ExceedsCap(_)) => {
                *out_found = false;
                *out_distance = 0;
                ApnfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Full automorphism group order under a wall-clock budget, split into
/// low and high 64-bit halves.
#[no_mangle]
pub unsafe extern "C" fn apnf_code_aut_order(
    c: *const ApnfCode,
    budget_seconds: u64,
    out_lo: *mut u64,
    out_hi: *mut u64,
) -> ApnfStatus {
    guard(|| {
        let Some(c) = (unsafe { c.as_ref() }) else {
            return null_arg();
        };
        let (Some(out_lo), Some(out_hi)) = (unsafe { out_lo.as_mut() }, unsafe { out_hi.as_mut() })
        else {
            return null_arg();
        };
        let budget = Duration::from_secs(budget_seconds.max(1));
        match full_automorphism_group(&c.inner, None, Some(budget)) {
            Ok(g) => {
                *out_lo = g.order() as u64;
                *out_hi = (g.order() >> 64) as u64;
                ApnfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr::{null_mut, NonNull};

    fn field(n: u32) -> *mut ApnfField {
        let mut p = null_mut();
        assert_eq!(unsafe { apnf_field_new(n, 0, &mut p) }, ApnfStatus::Ok);
        NonNull::new(p).unwrap().as_ptr()
    }

    #[test]
    fn gold_pipeline_through_the_boundary() {
        unsafe {
            let f = field(4);
            let mut func = null_mut();
            assert_eq!(apnf_function_gold(f, 1, &mut func), ApnfStatus::Ok);

            let mut apn = false;
            assert_eq!(apnf_function_is_apn(func, &mut apn), ApnfStatus::Ok);
            assert!(apn);

            let mut du = 0;
            assert_eq!(
                apnf_function_differential_uniformity(func, 2, &mut du),
                ApnfStatus::Ok
            );
            assert_eq!(du, 2);

            let mut code = null_mut();
            assert_eq!(apnf_code_build(func, &mut code), ApnfStatus::Ok);
            let (mut len, mut dim) = (0, 0);
            assert_eq!(apnf_code_length(code, &mut len), ApnfStatus::Ok);
            assert_eq!(apnf_code_dimension(code, &mut dim), ApnfStatus::Ok);
            assert_eq!((len, dim), (16, 9));

            let (mut found, mut dist) = (false, 0);
            assert_eq!(
                apnf_code_dual_min_distance(code, 8, &mut found, &mut dist),
                ApnfStatus::Ok
            );
            assert!(found);
            assert_eq!(dist, 6);

            let (mut lo, mut hi) = (0, 0);
            assert_eq!(
                apnf_code_aut_order(code, 60, &mut lo, &mut hi),
                ApnfStatus::Ok
            );
            // 2^4 * |GammaL(2,4)|: the n = 4 cube code has GF(4)-semilinear
            // symmetry beyond the generic order-960 group.
            assert_eq!((lo, hi), (5760, 0));

            apnf_code_free(code);
            apnf_function_free(func);
            apnf_field_free(f);
        }
    }

    #[test]
    fn errors_cross_with_messages() {
        unsafe {
            let mut p = null_mut();
            assert_eq!(apnf_field_new(1, 0, &mut p), ApnfStatus::Unsupported);
            assert!(p.is_null());
            let mut buf = [0 as c_char; 128];
            let needed = apnf_last_error(buf.as_mut_ptr(), buf.len());
            assert!(needed > 1);
            let msg = std::ffi::CStr::from_ptr(buf.as_ptr());
            assert!(!msg.to_str().unwrap().is_empty());

            let f = field(4);
            let mut func = null_mut();
            // gcd(2, 4) != 1: rejected as a parameter error.
            assert_eq!(apnf_function_gold(f, 2, &mut func), ApnfStatus::BadParams);
            assert!(func.is_null());
            assert_eq!(
                apnf_function_gold(f, 1, null_mut()),
                ApnfStatus::NullPointer
            );
            apnf_field_free(f);
        }
    }

    #[test]
    fn value_tables_round_trip() {
        unsafe {
            let f = field(3);
            // x^3 on gf2e3, tabulated externally.
            let values = [0u32, 1, 3, 4, 5, 6, 7, 2];
            let mut func = null_mut();
            assert_eq!(
                apnf_function_from_values(f, values.as_ptr(), values.len(), &mut func),
                ApnfStatus::Ok
            );
            let mut v = 0;
            assert_eq!(apnf_function_value(func, 2, &mut v), ApnfStatus::Ok);
            assert_eq!(v, 3);
            let mut deg = 0;
            assert_eq!(
                apnf_function_algebraic_degree(func, &mut deg),
                ApnfStatus::Ok
            );
            assert_eq!(deg, 2);

            let bad = [0u32, 9, 0, 0, 0, 0, 0, 0];
            let mut func2 = null_mut();
            assert_eq!(
                apnf_function_from_values(f, bad.as_ptr(), bad.len(), &mut func2),
                ApnfStatus::BadParams
            );
            apnf_function_free(func);
            apnf_field_free(f);
        }
    }

    #[test]
    fn generated_header_names_the_surface() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("apnforge.h");
        let text = std::fs::read_to_string(header).unwrap();
        for name in [
            "apnf_field_new",
            "apnf_function_gold",
            "apnf_code_aut_order",
            "apnf_last_error",
            "ApnfStatus",
        ] {
            assert!(text.contains(name), "{name} missing from header");
        }
    }
}
