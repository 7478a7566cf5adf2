//! C interface to the `cospacings` toolkit.
//!
//! Every function returns a [`CosStatus`]; results come back through out
//! pointers. Samples and families are opaque handles owned by the caller and
//! released with their `_free` function. After a non-OK status,
//! [`cos_last_error`] describes the failure on the calling thread.

use cospacings::asymptotics::{exp_moments, hellinger_fold, DEFAULT_TOL};
use cospacings::montecarlo::{
    critical_value, run_test, Decision, Method, PowerStudyConfig, RunOptions,
};
use cospacings::spacings::{m_step_spacings, simple_spacings};
use cospacings::{
    power_study, AlternativeFamily, Error, HFunction, Layout, Order, RngStream, Sample,
    SpacingScheme, StatSpec,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A value outside [0, 1] or another domain violation.
    Domain = 3,
    BufferTooSmall = 4,
    /// Quadrature failure or a degenerate variance.
    Numerical = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

pub const COS_ORDER_USUAL: u32 = 0;
pub const COS_ORDER_CENTRE_OUTWARD: u32 = 1;
pub const COS_LAYOUT_DISJOINT: u32 = 0;
pub const COS_LAYOUT_OVERLAPPING: u32 = 1;

/// Opaque sample on [0, 1].
pub struct CosSample(Sample);

/// Opaque alternative family.
pub struct CosFamily(AlternativeFamily);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CosTestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub critical_value: f64,
    pub alpha: f64,
    /// 1 when the null is rejected.
    pub reject: i32,
    /// 1 when the statistic is infinite (a zero gap under a log score).
    pub degenerate: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CosMoments {
    pub mean_h: f64,
    pub var_h: f64,
    pub cov_hz: f64,
    pub cov_h_quad: f64,
    pub null_variance: f64,
    pub quadrature_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CosHellinger {
    pub hd_direct: f64,
    pub hd_co: f64,
    pub quadrature_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(CosStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain { .. } => CosStatus::Domain,
            Error::Quadrature { .. } | Error::DegenerateVariance(_) | Error::ZeroEfficacy => {
                CosStatus::Numerical
            }
            Error::Io(_) => CosStatus::Io,
            _ => CosStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(CosStatus::InvalidArgument, message.into())
}

fn null(what: &str) -> Failure {
    Failure(CosStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CosStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            CosStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            CosStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn order_arg(order: u32) -> Result<Order, Failure> {
    match order {
        COS_ORDER_USUAL => Ok(Order::Usual),
        COS_ORDER_CENTRE_OUTWARD => Ok(Order::CentreOutward),
        _ => Err(invalid(format!("unknown order {order}"))),
    }
}

fn layout_arg(layout: u32) -> Result<Layout, Failure> {
    match layout {
        COS_LAYOUT_DISJOINT => Ok(Layout::Disjoint),
        COS_LAYOUT_OVERLAPPING => Ok(Layout::Overlapping),
        _ => Err(invalid(format!("unknown layout {layout}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cos_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `len` values into a new sample. Values must lie in [0, 1].
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cos_sample_new(
    values: *const f64,
    len: usize,
    out: *mut *mut CosSample,
) -> CosStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let values = slice_arg(values, len, "values")?;
        let sample = Sample::new(values.to_vec())?;
        *out = Box::into_raw(Box::new(CosSample(sample)));
        Ok(())
    })
}

/// Releases a sample; null is ignored.
///
/// # Safety
/// `sample` must come from [`cos_sample_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cos_sample_free(sample: *mut CosSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of observations.
///
/// # Safety
/// `sample` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_sample_len(sample: *const CosSample, out: *mut usize) -> CosStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        *out_arg(out, "out")? = s.0.len();
        Ok(())
    })
}

/// Writes the spacings of `sample` into `buf`. With `step` 1 the layout is
/// ignored. `written` receives the number of gaps; if `cap` is too small it is
/// still set and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must have room for `cap` doubles; `sample` live; `written` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_sample_spacings(
    sample: *const CosSample,
    order: u32,
    step: usize,
    layout: u32,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> CosStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let written = out_arg(written, "written")?;
        let order = order_arg(order)?;
        let gaps = if step == 1 {
            simple_spacings(&s.0, order)
        } else {
            let scheme = SpacingScheme::new(order, step, layout_arg(layout)?)?;
            m_step_spacings(&s.0, &scheme)?
        };
        *written = gaps.gaps.len();
        if cap < gaps.gaps.len() {
            return Err(Failure(
                CosStatus::BufferTooSmall,
                format!("need {} slots, got {cap}", gaps.gaps.len()),
            ));
        }
        slice_out(buf, cap, "buf")?[..gaps.gaps.len()].copy_from_slice(&gaps.gaps);
        Ok(())
    })
}

/// Value of the statistic named by `spec` (e.g. `"greenwood:co"`).
///
/// # Safety
/// `sample` live, `spec` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_statistic(
    sample: *const CosSample,
    spec: *const c_char,
    out: *mut f64,
) -> CosStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let spec: StatSpec = str_arg(spec, "spec")?.parse()?;
        *out_arg(out, "out")? = spec.evaluate(&s.0)?.value;
        Ok(())
    })
}

/// Monte Carlo test of uniformity with `replications` null samples.
///
/// # Safety
/// `sample` live, `spec` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_run_test(
    sample: *const CosSample,
    spec: *const c_char,
    alpha: f64,
    replications: usize,
    seed: u64,
    out: *mut CosTestReport,
) -> CosStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let spec: StatSpec = str_arg(spec, "spec")?.parse()?;
        let out = out_arg(out, "out")?;
        let r = run_test(
            &s.0,
            &spec,
            alpha,
            Method::MonteCarlo { replications, seed },
        )?;
        *out = CosTestReport {
            statistic: r.statistic.value,
            p_value: r.p_value,
            critical_value: r.critical_value,
            alpha: r.alpha,
            reject: i32::from(r.decision == Decision::Reject),
            degenerate: i32::from(r.degenerate),
        };
        Ok(())
    })
}

/// Upper-tail Monte Carlo critical value.
///
/// # Safety
/// `spec` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_critical_value(
    spec: *const c_char,
    n_obs: usize,
    alpha: f64,
    replications: usize,
    seed: u64,
    out: *mut f64,
) -> CosStatus {
    guard(|| {
        let spec: StatSpec = str_arg(spec, "spec")?.parse()?;
        *out_arg(out, "out")? =
            critical_value(&spec, n_obs, alpha, replications, RngStream::new(seed, 0))?;
        Ok(())
    })
}

/// Parses a family such as `"A:1.5"` or `"beta:0.5"`.
///
/// # Safety
/// `spec` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_family_new(
    spec: *const c_char,
    out: *mut *mut CosFamily,
) -> CosStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let family: AlternativeFamily = str_arg(spec, "spec")?.parse()?;
        *out = Box::into_raw(Box::new(CosFamily(family)));
        Ok(())
    })
}

/// Releases a family; null is ignored.
///
/// # Safety
/// `family` must come from [`cos_family_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cos_family_free(family: *mut CosFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

unsafe fn family_eval(
    family: *const CosFamily,
    x: f64,
    out: *mut f64,
    f: fn(&AlternativeFamily, f64) -> cospacings::Result<f64>,
) -> CosStatus {
    guard(|| {
        let fam = family.as_ref().ok_or_else(|| null("family"))?;
        *out_arg(out, "out")? = f(&fam.0, x)?;
        Ok(())
    })
}

/// # Safety
/// `family` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_family_cdf(
    family: *const CosFamily,
    x: f64,
    out: *mut f64,
) -> CosStatus {
    family_eval(family, x, out, AlternativeFamily::cdf)
}

/// # Safety
/// `family` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_family_pdf(
    family: *const CosFamily,
    x: f64,
    out: *mut f64,
) -> CosStatus {
    family_eval(family, x, out, AlternativeFamily::pdf)
}

/// # Safety
/// `family` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_family_quantile(
    family: *const CosFamily,
    u: f64,
    out: *mut f64,
) -> CosStatus {
    family_eval(family, u, out, AlternativeFamily::quantile)
}

/// Fills `buf` with `len` draws from stream (`seed`, `stream`).
///
/// # Safety
/// `family` live; `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cos_family_sample(
    family: *const CosFamily,
    seed: u64,
    stream: u64,
    buf: *mut f64,
    len: usize,
) -> CosStatus {
    guard(|| {
        let fam = family.as_ref().ok_or_else(|| null("family"))?;
        let buf = slice_out(buf, len, "buf")?;
        let mut g = RngStream::new(seed, stream).generator();
        fam.0.fill(&mut g, buf);
        Ok(())
    })
}

/// Hellinger distances from uniform of the family and of its centre-outward fold.
///
/// # Safety
/// `family` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_hellinger_fold(
    family: *const CosFamily,
    out: *mut CosHellinger,
) -> CosStatus {
    guard(|| {
        let fam = family.as_ref().ok_or_else(|| null("family"))?;
        let out = out_arg(out, "out")?;
        let r = hellinger_fold(fam.0, DEFAULT_TOL)?;
        *out = CosHellinger {
            hd_direct: r.hd_direct,
            hd_co: r.hd_co,
            quadrature_error: r.quadrature_error_bound,
        };
        Ok(())
    })
}

/// Moments of h(Z), Z ~ Exp(1), for a built-in score (`"greenwood"`, `"moran"`, ...).
///
/// # Safety
/// `h` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_exp_moments(h: *const c_char, out: *mut CosMoments) -> CosStatus {
    guard(|| {
        let h: HFunction = str_arg(h, "h")?.parse()?;
        let out = out_arg(out, "out")?;
        let m = exp_moments(&h, DEFAULT_TOL)?;
        *out = CosMoments {
            mean_h: m.mean_h,
            var_h: m.var_h,
            cov_hz: m.cov_hz,
            cov_h_quad: m.cov_h_quad,
            null_variance: m.null_variance(),
            quadrature_error: m.quadrature_error,
        };
        Ok(())
    })
}

/// Runs a power study from a JSON configuration and returns the CSV table.
/// `workers` 0 uses the default thread pool. Free the result with
/// [`cos_string_free`].
///
/// # Safety
/// `config_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cos_power_study_csv(
    config_json: *const c_char,
    workers: usize,
    out: *mut *mut c_char,
) -> CosStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let cfg = PowerStudyConfig::from_json(str_arg(config_json, "config_json")?)?;
        let options = RunOptions {
            workers: (workers > 0).then_some(workers),
            cache: None,
        };
        let csv = power_study(&cfg, options)?.to_csv();
        *out = CString::new(csv)
            .map_err(|_| invalid("table contains NUL"))?
            .into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
