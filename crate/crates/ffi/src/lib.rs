//! C ABI over the urbanik toolkit: opaque distribution handles, status
//! codes, and a small set of evaluation entry points so other languages can
//! bind without reimplementing the numerics.
//!
//! Conventions:
//! * every fallible call returns a [`UrbStatus`] and writes results through
//!   out-pointers;
//! * handles come from `urb_distribution_new` and must be released with
//!   `urb_distribution_free`;
//! * strings returned by the library must be released with
//!   `urb_string_free`;
//! * unused parameters (`alpha`, `c`) are passed as NaN.
//!
//! The generated header lives at `include/urbanik.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use urbanik_core::catalog::{self, DistributionSpec};
use urbanik_core::levy::QuadratureConfig;
use urbanik_core::sampler::{self, SampleRun, TailCorrectionMode};
use urbanik_core::urbanik::{classify, ScanGrid};
use urbanik_core::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownDistribution = 3,
    QuadratureFailure = 4,
    Unsupported = 5,
    InternalError = 6,
}

fn status_of(err: &Error) -> UrbStatus {
    match err {
        Error::UnknownDistribution(_) => UrbStatus::UnknownDistribution,
        Error::QuadratureFailure(_) => UrbStatus::QuadratureFailure,
        Error::InvalidParam(_) | Error::InvalidSequence(_) | Error::DomainError(_) => {
            UrbStatus::InvalidArgument
        }
        Error::TailUnknown | Error::DerivativeOrderUnavailable { .. } => UrbStatus::Unsupported,
        Error::NonConvergent(_) => UrbStatus::InvalidArgument,
    }
}

/// Opaque handle to a catalog distribution.
pub struct UrbDistribution {
    inner: DistributionSpec,
}

fn guarded<F: FnOnce() -> UrbStatus>(f: F) -> UrbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => UrbStatus::InternalError,
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn urb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a distribution handle. `name` is one of the catalog names
/// (`laplace`, `sinh`, `cosh`, `tanh`, `logistic`, `generalized_logistic`,
/// `talacko_zolotarev`); pass NaN for parameters the law does not take.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn urb_distribution_new(
    name: *const c_char,
    alpha: f64,
    c: f64,
    out: *mut *mut UrbDistribution,
) -> UrbStatus {
    if name.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    let name = match CStr::from_ptr(name).to_str() {
        Ok(s) => s,
        Err(_) => return UrbStatus::InvalidArgument,
    };
    let alpha = (!alpha.is_nan()).then_some(alpha);
    let c = (!c.is_nan()).then_some(c);
    guarded(|| match catalog::catalog_get(name, alpha, c) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(UrbDistribution { inner: spec }));
            UrbStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a handle created by [`urb_distribution_new`]. NULL is a no-op.
///
/// # Safety
/// `dist` must be NULL or a pointer previously returned by
/// `urb_distribution_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn urb_distribution_free(dist: *mut UrbDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Closed-form characteristic function at `t`.
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn urb_cf(
    dist: *const UrbDistribution,
    t: f64,
    out: *mut f64,
) -> UrbStatus {
    if dist.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    guarded(|| {
        *out = (*dist).inner.cf_closed(t);
        UrbStatus::Ok
    })
}

/// Characteristic function evaluated through the Lévy density (exponent
/// integral), the slow-but-independent route.
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn urb_cf_from_levy(
    dist: *const UrbDistribution,
    t: f64,
    out: *mut f64,
) -> UrbStatus {
    if dist.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    guarded(|| {
        match (*dist)
            .inner
            .density()
            .char_function(t, &QuadratureConfig::default())
        {
            Ok(v) => {
                *out = v;
                UrbStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Background driving characteristic function at `t` (closed form when the
/// catalog has one, numeric log-derivative otherwise).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn urb_bdcf(
    dist: *const UrbDistribution,
    t: f64,
    out: *mut f64,
) -> UrbStatus {
    if dist.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    guarded(|| {
        *out = urbanik_core::bdlp::bdcf(&(*dist).inner, t);
        UrbStatus::Ok
    })
}

/// Runs the Urbanik classifier on the default grid and returns the verdict
/// as a JSON document (same schema as the CLI `classify --json`).
///
/// # Safety
/// `dist` and `out` must be valid pointers; release the string with
/// [`urb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn urb_classify_json(
    dist: *const UrbDistribution,
    max_level: i32,
    out: *mut *mut c_char,
) -> UrbStatus {
    if dist.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    guarded(|| {
        let spec = &(*dist).inner;
        let verdict = match classify(spec.density(), max_level, &ScanGrid::default()) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        let params: serde_json::Map<String, serde_json::Value> = spec
            .params()
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        let doc = serde_json::json!({
            "distribution": spec.name(),
            "params": params,
            "achieved_level": verdict.achieved_level,
            "bounded_above": verdict.bounded_above,
            "witness": verdict.witness.map(|w| serde_json::json!({
                "x": w.x, "value": w.value, "interval": [w.interval.0, w.interval.1],
            })),
            "mass_failures": verdict.mass_failures,
            "grid": verdict.grid_used,
        });
        match CString::new(doc.to_string()) {
            Ok(s) => {
                *out = s.into_raw();
                UrbStatus::Ok
            }
            Err(_) => UrbStatus::InternalError,
        }
    })
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string previously returned by this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn urb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Fills `out[0..n]` with reproducible samples. `k_trunc` is the series
/// truncation (ignored by `laplace` and `generalized_logistic`);
/// `tail_correction != 0` enables the Gaussian variance-matching correction.
///
/// # Safety
/// `dist` must be valid and `out` must point to at least `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn urb_sample(
    dist: *const UrbDistribution,
    n: usize,
    k_trunc: usize,
    seed: u64,
    tail_correction: i32,
    out: *mut f64,
) -> UrbStatus {
    if dist.is_null() || out.is_null() {
        return UrbStatus::NullPointer;
    }
    if n == 0 {
        return UrbStatus::InvalidArgument;
    }
    guarded(|| {
        let spec = &(*dist).inner;
        let samples = match spec.name() {
            "laplace" => Ok(sampler::sample_laplace(n, seed)),
            "generalized_logistic" => {
                let alpha = spec.params()[0].1;
                sampler::sample_generalized_logistic(alpha, n, seed)
            }
            _ if spec.rate_sequence().is_some() => sampler::sample_series(&SampleRun {
                spec: spec.clone(),
                n,
                truncation: k_trunc,
                seed,
                tail_correction: if tail_correction != 0 {
                    TailCorrectionMode::GaussianVarianceMatch
                } else {
                    TailCorrectionMode::None
                },
            }),
            _ => return UrbStatus::Unsupported,
        };
        match samples {
            Ok(xs) => {
                std::ptr::copy_nonoverlapping(xs.as_ptr(), out, n);
                UrbStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
