//! C ABI over the `optrelay` library.
//!
//! Every function returns an [`OptrelayStatus`]; results go through out
//! pointers. Objects are opaque handles released with their `_free` function.
//! After a failure, `optrelay_last_error` copies the message for the calling
//! thread.
//!
//! Safety, for every function: pointer arguments are either null (reported as
//! `NullPointer`) or valid for the access implied by their type, and handles
//! come from the matching `_new`/`_run` call and are freed at most once.
#![allow(clippy::missing_safety_doc)]

use optrelay::analytic::{prob_mid_optimal, prob_sufficient, DistributionEvaluator, Law};
use optrelay::metrics::{average_rate, mean_feedback_load, outage, s_star, threshold_for_load};
use optrelay::model::{selection_metric, FadingModel, LinkBudget, NetworkGeometry, PathLossModel, Point2};
use optrelay::montecarlo::{run_trials_parallel, TrialBatch, TrialConfig};
use optrelay::policy::PolicyKind;
use optrelay::process::{default_tau, ProcessSpec};
use optrelay::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptrelayStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    Domain = 3,
    Bracket = 4,
    Numeric = 5,
    Unsupported = 6,
    EmptyField = 7,
    OutOfRange = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptrelayLaw {
    GammaOpt = 0,
    /// `p1` is the window radius τ.
    GammaOptFiniteDisc = 1,
    GammaMid = 2,
    GammaC2d = 3,
    /// `p1`, `p2` are the effective SNRs S̃₁, S̃₂.
    GammaOptDiffSnr = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptrelayFading {
    None = 0,
    Rayleigh = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptrelayPolicyKind {
    Optimum = 0,
    MidPoint = 1,
    ClosestToDestination = 2,
    ClosestToSource = 3,
    /// Uses `OptrelayPolicy::threshold`.
    ThresholdFeedback = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OptrelayPolicy {
    pub kind: OptrelayPolicyKind,
    pub threshold: f64,
}

/// Opaque cdf/pdf evaluator.
pub struct OptrelayEvaluator(DistributionEvaluator);

/// Opaque batch of simulated trials.
pub struct OptrelayBatch(TrialBatch);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OptrelayStatus {
    match e {
        Error::Parameter(_) => OptrelayStatus::Parameter,
        Error::Domain(_) => OptrelayStatus::Domain,
        Error::Bracket { .. } => OptrelayStatus::Bracket,
        Error::Numeric { .. } => OptrelayStatus::Numeric,
        Error::Unsupported(_) => OptrelayStatus::Unsupported,
        Error::EmptyField => OptrelayStatus::EmptyField,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Range(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> OptrelayStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OptrelayStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            OptrelayStatus::NullPointer
        }
        Ok(Err(Fail::Range(msg))) => {
            set_error(msg);
            OptrelayStatus::OutOfRange
        }
        Err(_) => {
            set_error("internal panic".into());
            OptrelayStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(v);
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn fading(f: OptrelayFading) -> FadingModel {
    match f {
        OptrelayFading::None => FadingModel::NoFading,
        OptrelayFading::Rayleigh => FadingModel::RayleighUnitPower,
    }
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, or 0 when none is set.
#[no_mangle]
pub unsafe extern "C" fn optrelay_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// ŝ at (x, y) for terminals at (∓d, 0).
#[no_mangle]
pub unsafe extern "C" fn optrelay_selection_metric(x: f64, y: f64, d: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| {
        let g = NetworkGeometry::new(d)?;
        put(out, selection_metric(Point2::new(x, y), &g))
    })
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_evaluator_new(
    law: OptrelayLaw,
    lambda: f64,
    d: f64,
    p1: f64,
    p2: f64,
    out: *mut *mut OptrelayEvaluator,
) -> OptrelayStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let law = match law {
            OptrelayLaw::GammaOpt => Law::GammaOpt,
            OptrelayLaw::GammaOptFiniteDisc => Law::GammaOptFiniteDisc { tau: p1 },
            OptrelayLaw::GammaMid => Law::GammaMid,
            OptrelayLaw::GammaC2d => Law::GammaC2D,
            OptrelayLaw::GammaOptDiffSnr => Law::GammaOptDiffSnr { s1: p1, s2: p2 },
        };
        let ev = DistributionEvaluator::new(law, lambda, d)?;
        put(out, Box::into_raw(Box::new(OptrelayEvaluator(ev))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_evaluator_cdf(ev: *const OptrelayEvaluator, x: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, get(ev, "evaluator")?.0.cdf(x)?))
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_evaluator_pdf(ev: *const OptrelayEvaluator, x: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, get(ev, "evaluator")?.0.pdf(x)?))
}

/// Average rate under the evaluator's CQI law with G(x) = x^−α.
#[no_mangle]
pub unsafe extern "C" fn optrelay_evaluator_average_rate(
    ev: *const OptrelayEvaluator,
    snr: f64,
    alpha: f64,
    fad: OptrelayFading,
    out: *mut f64,
) -> OptrelayStatus {
    guard(|| {
        let g = PathLossModel::power_law(alpha)?;
        put(out, average_rate(&get(ev, "evaluator")?.0, snr, &g, fading(fad))?.value)
    })
}

/// Releases an evaluator. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn optrelay_evaluator_free(ev: *mut OptrelayEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_outage(
    rho: f64,
    lambda: f64,
    d: f64,
    snr: f64,
    alpha: f64,
    fad: OptrelayFading,
    out: *mut f64,
) -> OptrelayStatus {
    guard(|| {
        let g = PathLossModel::power_law(alpha)?;
        put(out, outage(rho, lambda, d, snr, &g, fading(fad))?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_mean_feedback_load(t: f64, lambda: f64, d: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, mean_feedback_load(t, lambda, d)))
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_threshold_for_load(mu: f64, lambda: f64, d: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, threshold_for_load(mu, lambda, d)?))
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_s_star(rho: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, s_star(rho)?))
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_prob_mid_optimal(lambda: f64, d: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, prob_mid_optimal(lambda, d)?))
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_prob_sufficient(lambda: f64, d: f64, out: *mut f64) -> OptrelayStatus {
    guard(|| put(out, prob_sufficient(lambda, d)))
}

/// Simulates `n_trials` HPPP fields of intensity `lambda` on a disc of radius
/// `tau` (default window when `tau <= 0`) and applies each policy.
#[no_mangle]
pub unsafe extern "C" fn optrelay_batch_run(
    lambda: f64,
    d: f64,
    tau: f64,
    policies: *const OptrelayPolicy,
    n_policies: usize,
    n_trials: usize,
    seed: u64,
    out: *mut *mut OptrelayBatch,
) -> OptrelayStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        if policies.is_null() && n_policies > 0 {
            return Err(Fail::Null("policies"));
        }
        let list = if n_policies == 0 { &[][..] } else { std::slice::from_raw_parts(policies, n_policies) };
        let policies = list
            .iter()
            .map(|p| match p.kind {
                OptrelayPolicyKind::Optimum => PolicyKind::Optimum,
                OptrelayPolicyKind::MidPoint => PolicyKind::MidPoint,
                OptrelayPolicyKind::ClosestToDestination => PolicyKind::ClosestToDestination,
                OptrelayPolicyKind::ClosestToSource => PolicyKind::ClosestToSource,
                OptrelayPolicyKind::ThresholdFeedback => PolicyKind::ThresholdFeedback(p.threshold),
            })
            .collect();
        let tau = if tau > 0.0 { tau } else { default_tau(lambda, d) };
        let config = TrialConfig {
            spec: ProcessSpec::Hppp { lambda, tau },
            geom: NetworkGeometry::new(d)?,
            budget: LinkBudget::homogeneous(1.0, 0.0)?,
            policies,
        };
        let batch = run_trials_parallel(&config, n_trials, seed)?;
        put(out, Box::into_raw(Box::new(OptrelayBatch(batch))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn optrelay_batch_len(batch: *const OptrelayBatch, out: *mut usize) -> OptrelayStatus {
    guard(|| put(out, get(batch, "batch")?.0.records.len()))
}

/// CQI of policy `policy` in trial `trial`; +inf when nothing was selected.
#[no_mangle]
pub unsafe extern "C" fn optrelay_batch_gamma(
    batch: *const OptrelayBatch,
    trial: usize,
    policy: usize,
    out: *mut f64,
) -> OptrelayStatus {
    guard(|| {
        let b = &get(batch, "batch")?.0;
        let g = b
            .records
            .get(trial)
            .and_then(|r| r.gammas.get(policy))
            .ok_or_else(|| Fail::Range(format!("no entry for trial {trial}, policy {policy}")))?;
        put(out, g.unwrap_or(f64::INFINITY))
    })
}

/// Feedback count of trial `trial` (relay count without a threshold policy).
#[no_mangle]
pub unsafe extern "C" fn optrelay_batch_n_feedback(batch: *const OptrelayBatch, trial: usize, out: *mut usize) -> OptrelayStatus {
    guard(|| {
        let r = get(batch, "batch")?
            .0
            .records
            .get(trial)
            .ok_or_else(|| Fail::Range(format!("no trial {trial}")))?;
        put(out, r.n_feedback)
    })
}

/// Releases a batch. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn optrelay_batch_free(batch: *mut OptrelayBatch) {
    if !batch.is_null() {
        drop(Box::from_raw(batch));
    }
}
