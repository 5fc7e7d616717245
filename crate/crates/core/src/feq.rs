//! The functional-equation verifier.
//!
//! A case supplies two transforms and a kind. Sampling a strip yields
//! `ratio(s)`, which is fitted to `sigma^2 Q^s` by least squares on the
//! unwrapped logarithm over the real sample points; complex points only
//! validate the fitted model.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::kernels::{kernel_mellin, KernelExpr};
use crate::mellin::QuadratureParams;
use crate::{c64, Complex, Error, Result};

/// Default relative tolerance for closed-form evaluation.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Default relative tolerance for quadrature evaluation.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Minimum number of real sample points for a fit.
pub const MIN_SAMPLES: usize = 3;

/// Shape of the equation being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `X1(s) X2(k - s) = lambda^2`.
    Product,
    /// `X1(s) X(1 - s) / X2(1 - s) = sigma^2 Q^s`.
    RatioQ,
    /// As `RatioQ` with `Q = 1`.
    RatioPlain,
    /// `Z1(s) / Z2(k - s) = sigma^2`.
    RatioK,
    /// `X1(s) / X2(s) = 1`, a single identity checked point by point.
    Pointwise,
}

impl CaseKind {
    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Product => "product",
            CaseKind::RatioQ => "ratio_q",
            CaseKind::RatioPlain => "ratio_plain",
            CaseKind::RatioK => "ratio_k",
            CaseKind::Pointwise => "pointwise",
        }
    }

    /// Whether the fitted model has `Q = 1`.
    pub fn constrains_q(self) -> bool {
        !matches!(self, CaseKind::RatioQ)
    }
}

/// Requested or supported evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analytic,
    Quadrature,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::Quadrature => "quadrature",
            Mode::Both => "both",
        }
    }

    fn routes(self) -> &'static [EvalMode] {
        match self {
            Mode::Analytic => &[EvalMode::Analytic],
            Mode::Quadrature => &[EvalMode::Quadrature],
            Mode::Both => &[EvalMode::Analytic, EvalMode::Quadrature],
        }
    }

    fn from_routes(a: bool, q: bool) -> Option<Mode> {
        match (a, q) {
            (true, true) => Some(Mode::Both),
            (true, false) => Some(Mode::Analytic),
            (false, true) => Some(Mode::Quadrature),
            (false, false) => None,
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "quadrature" => Ok(Mode::Quadrature),
            "both" => Ok(Mode::Both),
            _ => Err(Error::InvalidParameter(alloc::format!("unknown mode {s:?}"))),
        }
    }
}

/// A single evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Analytic,
    Quadrature,
}

impl EvalMode {
    pub fn default_tolerance(self) -> f64 {
        match self {
            EvalMode::Analytic => ANALYTIC_TOL,
            EvalMode::Quadrature => QUADRATURE_TOL,
        }
    }
}

/// What a transform evaluator is asked to do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalCtx {
    pub mode: EvalMode,
    pub params: QuadratureParams,
}

/// A transform `s -> X(s)`.
pub type Transform = Arc<dyn Fn(Complex, &EvalCtx) -> Result<Complex> + Send + Sync>;

/// Deterministic strip sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Real interval; points are `lo + (hi - lo) j / (count + 1)`.
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Imaginary offsets; each real point is repeated shifted by `i * offset`.
    #[serde(default)]
    pub offsets: Vec<f64>,
    /// Real points dropped from the grid (zeros or poles of a side).
    #[serde(default)]
    pub exclude: Vec<f64>,
    /// Additional explicit points.
    #[serde(default)]
    pub extra: Vec<Complex>,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            lo: 0.0,
            hi: 1.0,
            count: 9,
            offsets: Vec::new(),
            exclude: Vec::new(),
            extra: Vec::new(),
        }
    }
}

impl SamplePlan {
    /// `count` points on `(lo, hi)`.
    pub fn interval(lo: f64, hi: f64, count: usize) -> Self {
        SamplePlan {
            lo,
            hi,
            count,
            ..Default::default()
        }
    }

    /// Interval of `width` centred at `center`.
    pub fn centered(center: f64, width: f64, count: usize) -> Self {
        Self::interval(center - 0.5 * width, center + 0.5 * width, count)
    }

    pub fn with_offsets(mut self, offsets: &[f64]) -> Self {
        self.offsets = offsets.to_vec();
        self
    }

    pub fn with_exclude(mut self, exclude: &[f64]) -> Self {
        self.exclude = exclude.to_vec();
        self
    }

    pub fn with_extra(mut self, extra: &[Complex]) -> Self {
        self.extra = extra.to_vec();
        self
    }
}

/// The points of `plan`: the real grid, its shifted copies, then the extras.
pub fn sample_strip(plan: &SamplePlan) -> Result<Vec<Complex>> {
    let mut real = Vec::new();
    if plan.count > 0 {
        if !(plan.hi > plan.lo) || !plan.lo.is_finite() || !plan.hi.is_finite() {
            return Err(Error::EmptyRange);
        }
        let step = (plan.hi - plan.lo) / (plan.count + 1) as f64;
        for j in 1..=plan.count {
            let x = plan.lo + step * j as f64;
            if plan.exclude.iter().all(|&e| (x - e).abs() > 1e-9) {
                real.push(x);
            }
        }
    }
    let mut points: Vec<Complex> = real.iter().map(|&x| c64(x, 0.0)).collect();
    for &o in &plan.offsets {
        points.extend(real.iter().map(|&x| c64(x, o)));
    }
    points.extend(plan.extra.iter().copied());
    if points.is_empty() {
        return Err(Error::EmptyRange);
    }
    Ok(points)
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Printed in the source text.
    Paper,
    /// Computed independently from the printed setup.
    Derived,
}

/// Expected constants of a case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    /// `None` for models with `Q = 1`.
    pub q: Option<Complex>,
    pub sigma2: Complex,
    pub provenance: Provenance,
    /// Whether a mismatch affects the verdict.
    pub gating: bool,
}

/// A registered functional-equation instance.
#[derive(Clone)]
pub struct FeqCase {
    pub id: String,
    pub anchor: String,
    pub description: String,
    pub kind: CaseKind,
    /// Reflection point: `k - s` pairs with `s`.
    pub k: f64,
    /// Routes this case can be evaluated by.
    pub modes: Mode,
    pub sample_plan: SamplePlan,
    pub expected: Option<Expected>,
    /// A failed check is reported as a discrepancy with the printed claim.
    pub discrepancy_allowed: bool,
    pub notes: Vec<String>,
    /// `X` in the `RatioQ`/`RatioPlain` kinds.
    pub eta_kernel: Option<KernelExpr>,
    pub lhs: Transform,
    pub rhs: Transform,
}

impl core::fmt::Debug for FeqCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FeqCase")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("k", &self.k)
            .field("modes", &self.modes)
            .finish_non_exhaustive()
    }
}

/// One evaluated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub s: Complex,
    pub lhs: Complex,
    pub rhs: Complex,
    pub ratio: Complex,
}

/// Evaluate both sides of `case` at each point.
///
/// `Product`: `lhs = X1(s)`, `rhs = X2(k - s)`, `ratio = lhs * rhs`.
/// `RatioQ`, `RatioPlain`: `lhs = X1(s) X(1 - s)`, `rhs = X2(1 - s)`.
/// `RatioK`: `lhs = Z1(s)`, `rhs = Z2(k - s)`. `Pointwise`: `lhs = X1(s)`, `rhs = X2(s)`.
pub fn evaluate_case(case: &FeqCase, points: &[Complex], ctx: &EvalCtx) -> Result<Vec<Sample>> {
    points
        .iter()
        .map(|&s| evaluate_point(case, s, ctx).map_err(|e| e.at(s)))
        .collect()
}

fn evaluate_point(case: &FeqCase, s: Complex, ctx: &EvalCtx) -> Result<Sample> {
    let (lhs, rhs) = match case.kind {
        CaseKind::Product => ((case.lhs)(s, ctx)?, (case.rhs)(c64(case.k, 0.0) - s, ctx)?),
        CaseKind::RatioQ | CaseKind::RatioPlain => {
            let eta = case
                .eta_kernel
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter(alloc::format!("case {} has no eta kernel", case.id)))?;
            let t = 1.0 - s;
            ((case.lhs)(s, ctx)? * kernel_mellin(eta, t)?, (case.rhs)(t, ctx)?)
        }
        CaseKind::RatioK => ((case.lhs)(s, ctx)?, (case.rhs)(c64(case.k, 0.0) - s, ctx)?),
        CaseKind::Pointwise => ((case.lhs)(s, ctx)?, (case.rhs)(s, ctx)?),
    };
    let ratio = match case.kind {
        CaseKind::Product => lhs * rhs,
        _ => lhs / rhs,
    };
    if !(ratio.re.is_finite() && ratio.im.is_finite()) || ratio.norm() == 0.0 {
        return Err(Error::domain(
            "evaluate_case",
            alloc::format!("ratio {ratio} is zero or not finite"),
        ));
    }
    Ok(Sample { s, lhs, rhs, ratio })
}

/// Per-point fit residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub s: Complex,
    pub ratio: Complex,
    pub model: Complex,
    pub rel_residual: f64,
}

/// Fitted `ratio(s) = sigma2 * Q^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub q: Complex,
    pub log_q: Complex,
    pub sigma2: Complex,
    /// Root mean square relative residual over all points.
    pub rms_residual: f64,
    /// Largest relative residual over all points.
    pub max_rel_residual: f64,
    /// Largest relative residual over the real points used by the fit.
    pub max_rel_real: f64,
    /// Largest relative residual over the complex validation points (`0` if none).
    pub max_rel_validation: f64,
    pub constrained: bool,
    pub points: Vec<FitPoint>,
}

/// Least squares on `log ratio = s log Q + log sigma2` over the real points.
///
/// Arguments are unwrapped along increasing `s` (jumps above `pi` are taken
/// as branch crossings). With `constrain_q_to_one` only `log sigma2` is fitted.
pub fn fit_constants(samples: &[(Complex, Complex)], constrain_q_to_one: bool) -> Result<FitResult> {
    let mut real: Vec<(f64, Complex)> = samples
        .iter()
        .filter(|(s, _)| s.im.abs() < 1e-12)
        .map(|&(s, r)| (s.re, r))
        .collect();
    if real.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: real.len(),
        });
    }
    real.sort_by(|a, b| a.0.total_cmp(&b.0));
    let span = real[real.len() - 1].0 - real[0].0;
    if !constrain_q_to_one && !(span > 0.0) {
        return Err(Error::DegenerateFit { span });
    }
    // logs are taken relative to the first ratio so that constant data fit exactly
    let r0 = real[0].1;
    let mut logs: Vec<(f64, Complex)> = Vec::with_capacity(real.len());
    let mut prev_arg: Option<f64> = None;
    let mut variation: f64 = 0.0;
    for &(s, r) in &real {
        if !(r.norm() > 0.0) || !r.re.is_finite() || !r.im.is_finite() {
            return Err(Error::domain("fit_constants", alloc::format!("ratio {r} at s = {s}")));
        }
        variation = variation.max((r - r0).norm() / r0.norm());
        let rel = r / r0;
        let mut arg = rel.arg();
        if let Some(p) = prev_arg {
            while arg - p > PI {
                arg -= 2.0 * PI;
            }
            while arg - p < -PI {
                arg += 2.0 * PI;
            }
        }
        prev_arg = Some(arg);
        logs.push((s, c64(rel.norm().ln(), arg)));
    }
    if !constrain_q_to_one && variation < 1e-14 {
        return Err(Error::DegenerateFit { span: variation });
    }
    let n = logs.len() as f64;
    let s_mean = logs.iter().map(|l| l.0).sum::<f64>() / n;
    let y_mean = logs.iter().fold(c64(0.0, 0.0), |a, l| a + l.1) / n;
    let (log_q, intercept) = if constrain_q_to_one {
        (c64(0.0, 0.0), y_mean)
    } else {
        let sxx: f64 = logs.iter().map(|l| (l.0 - s_mean) * (l.0 - s_mean)).sum();
        let sxy = logs
            .iter()
            .fold(c64(0.0, 0.0), |a, l| a + (l.1 - y_mean) * (l.0 - s_mean));
        let b = sxy / sxx;
        (b, y_mean - b * s_mean)
    };
    let sigma2 = r0 * intercept.exp();
    let mut points = Vec::with_capacity(samples.len());
    let (mut sum_sq, mut max_all, mut max_real, mut max_val) = (0.0, 0.0f64, 0.0f64, 0.0f64);
    for &(s, ratio) in samples {
        let model = r0 * (intercept + log_q * s).exp();
        let rel = (ratio - model).norm() / model.norm();
        sum_sq += rel * rel;
        max_all = max_all.max(rel);
        if s.im.abs() < 1e-12 {
            max_real = max_real.max(rel);
        } else {
            max_val = max_val.max(rel);
        }
        points.push(FitPoint {
            s,
            ratio,
            model,
            rel_residual: rel,
        });
    }
    Ok(FitResult {
        q: log_q.exp(),
        log_q,
        sigma2,
        rms_residual: (sum_sq / samples.len() as f64).sqrt(),
        max_rel_residual: max_all,
        max_rel_real: max_real,
        max_rel_validation: max_val,
        constrained: constrain_q_to_one,
        points,
    })
}

/// Outcome of a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// The equation as printed does not hold; the measured deviation is reported.
    PaperDiscrepancy,
    Fail,
    EngineError,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::PaperDiscrepancy => "paper_discrepancy",
            Verdict::Fail => "fail",
            Verdict::EngineError => "engine_error",
        }
    }
}

/// Overrides applied by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Requested routes; `None` uses the case's own.
    pub mode: Option<Mode>,
    pub params: QuadratureParams,
    /// Replaces both default tolerances.
    pub tolerance: Option<f64>,
    pub sample_plan: Option<SamplePlan>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: None,
            params: QuadratureParams::default(),
            tolerance: None,
            sample_plan: None,
        }
    }
}

/// Fitted constants without the per-point table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub q: Complex,
    pub log_q: Complex,
    pub sigma2: Complex,
    pub rms: f64,
    pub max_rel: f64,
    pub max_rel_validation: f64,
    pub constrained: bool,
}

impl From<&FitResult> for FitSummary {
    fn from(f: &FitResult) -> Self {
        FitSummary {
            q: f.q,
            log_q: f.log_q,
            sigma2: f.sigma2,
            rms: f.rms_residual,
            max_rel: f.max_rel_residual,
            max_rel_validation: f.max_rel_validation,
            constrained: f.constrained,
        }
    }
}

/// One evaluated point tagged with its route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub mode: EvalMode,
    pub s: Complex,
    pub lhs: Complex,
    pub rhs: Complex,
    pub ratio: Complex,
}

/// Comparison of a fit with the expected constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCheck {
    pub q: Option<Complex>,
    pub sigma2: Complex,
    pub provenance: Provenance,
    pub gating: bool,
    /// `|Q_fit - Q| / |Q|` against the free fit.
    pub deviation_q: Option<f64>,
    /// `|sigma2_fit - sigma2| / |sigma2|`.
    pub deviation_sigma2: f64,
    pub tolerance: f64,
    pub matches: bool,
}

/// Result of one route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeResult {
    pub mode: EvalMode,
    pub tolerance: f64,
    /// The fit used for the verdict (`Q = 1` when the kind demands it).
    pub fit: Option<FitSummary>,
    /// Unconstrained fit, reported for every kind.
    pub free_fit: Option<FitSummary>,
    pub expected: Option<ExpectedCheck>,
    pub verdict: Verdict,
    pub messages: Vec<String>,
}

/// Parameters echoed into a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    pub quadrature: QuadratureParams,
    pub sample_plan: SamplePlan,
    pub tolerance_override: Option<f64>,
}

/// Everything a run learns about one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub anchor: String,
    pub description: String,
    pub kind: CaseKind,
    pub k: f64,
    pub mode: Mode,
    pub samples: Vec<SampleRecord>,
    /// Fit of the first route, for summaries.
    pub fit: Option<FitSummary>,
    pub modes: Vec<ModeResult>,
    pub expected: Option<Expected>,
    pub discrepancy_allowed: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub engine_params: EngineParams,
    pub versions: Versions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub feq_core: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            feq_core: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm()
}

/// Tolerance on fitted constants for a route.
fn constant_tolerance(mode: EvalMode, tol: f64) -> f64 {
    match mode {
        EvalMode::Analytic => tol.max(1e-8),
        EvalMode::Quadrature => (10.0 * tol).max(QUADRATURE_TOL),
    }
}

/// Judge one route from its samples; used both by [`verify`] and by [`recheck`].
pub fn judge(
    kind: CaseKind,
    expected: Option<&Expected>,
    discrepancy_allowed: bool,
    mode: EvalMode,
    tolerance: f64,
    samples: &[(Complex, Complex)],
) -> ModeResult {
    let mut messages = Vec::new();
    let fit = fit_constants(samples, kind.constrains_q());
    let free = fit_constants(samples, false).ok();
    let fit = match fit {
        Ok(f) => f,
        Err(e) => {
            return ModeResult {
                mode,
                tolerance,
                fit: None,
                free_fit: free.as_ref().map(FitSummary::from),
                expected: None,
                verdict: Verdict::EngineError,
                messages: alloc::vec![alloc::format!("{e}")],
            }
        }
    };
    let model_ok = fit.max_rel_real <= tolerance && fit.max_rel_validation <= 10.0 * tolerance;
    if !model_ok {
        messages.push(alloc::format!(
            "ratio deviates from the fitted model: max relative residual {:.3e} (real points), {:.3e} (validation points)",
            fit.max_rel_real,
            fit.max_rel_validation
        ));
    }
    let ctol = constant_tolerance(mode, tolerance);
    let check = expected.map(|e| {
        let deviation_sigma2 = rel(fit.sigma2, e.sigma2);
        let deviation_q = e.q.map(|q| rel(fit.q, q));
        let matches = deviation_sigma2 <= ctol && deviation_q.map_or(true, |d| d <= ctol);
        ExpectedCheck {
            q: e.q,
            sigma2: e.sigma2,
            provenance: e.provenance,
            gating: e.gating,
            deviation_q,
            deviation_sigma2,
            tolerance: ctol,
            matches,
        }
    });
    let mut expected_ok = true;
    if let Some(c) = &check {
        if !c.matches {
            messages.push(alloc::format!(
                "fitted constants differ from expected: sigma2 {} vs {} (rel {:.3e}){}",
                fit.sigma2,
                c.sigma2,
                c.deviation_sigma2,
                match (c.q, c.deviation_q) {
                    (Some(q), Some(d)) => alloc::format!(", Q {} vs {} (rel {:.3e})", fit.q, q, d),
                    _ => String::new(),
                }
            ));
            expected_ok = !c.gating;
        }
    }
    let verdict = if model_ok && expected_ok {
        Verdict::Pass
    } else if discrepancy_allowed {
        Verdict::PaperDiscrepancy
    } else {
        Verdict::Fail
    };
    ModeResult {
        mode,
        tolerance,
        fit: Some(FitSummary::from(&fit)),
        free_fit: free.as_ref().map(FitSummary::from),
        expected: check,
        verdict,
        messages,
    }
}

/// Run every requested route of `case` and assemble the report.
pub fn verify(case: &FeqCase, opts: &VerifyOptions) -> VerificationReport {
    let plan = opts.sample_plan.clone().unwrap_or_else(|| case.sample_plan.clone());
    let mut notes = case.notes.clone();
    let requested = opts.mode.unwrap_or(case.modes);
    let want_a = requested.routes().contains(&EvalMode::Analytic);
    let want_q = requested.routes().contains(&EvalMode::Quadrature);
    let has_a = case.modes.routes().contains(&EvalMode::Analytic);
    let has_q = case.modes.routes().contains(&EvalMode::Quadrature);
    let mode = match Mode::from_routes(want_a && has_a, want_q && has_q) {
        Some(m) => m,
        None => {
            notes.push(alloc::format!(
                "mode {} is not available for this case; ran {}",
                requested.name(),
                case.modes.name()
            ));
            case.modes
        }
    };
    let mut samples = Vec::new();
    let mut modes = Vec::new();
    match sample_strip(&plan) {
        Err(e) => modes.push(engine_error(mode.routes()[0], opts, e)),
        Ok(points) => {
            for &route in mode.routes() {
                let ctx = EvalCtx {
                    mode: route,
                    params: opts.params,
                };
                let tol = opts.tolerance.unwrap_or(route.default_tolerance());
                match evaluate_case(case, &points, &ctx) {
                    Err(e) => modes.push(engine_error(route, opts, e)),
                    Ok(ss) => {
                        let pairs: Vec<(Complex, Complex)> = ss.iter().map(|x| (x.s, x.ratio)).collect();
                        modes.push(judge(
                            case.kind,
                            case.expected.as_ref(),
                            case.discrepancy_allowed,
                            route,
                            tol,
                            &pairs,
                        ));
                        samples.extend(ss.iter().map(|x| SampleRecord {
                            mode: route,
                            s: x.s,
                            lhs: x.lhs,
                            rhs: x.rhs,
                            ratio: x.ratio,
                        }));
                    }
                }
            }
        }
    }
    let verdict = modes.iter().map(|m| m.verdict).max().unwrap_or(Verdict::EngineError);
    VerificationReport {
        case_id: case.id.clone(),
        anchor: case.anchor.clone(),
        description: case.description.clone(),
        kind: case.kind,
        k: case.k,
        mode,
        fit: modes.first().and_then(|m| m.fit),
        samples,
        modes,
        expected: case.expected,
        discrepancy_allowed: case.discrepancy_allowed,
        verdict,
        notes,
        engine_params: EngineParams {
            quadrature: opts.params,
            sample_plan: plan,
            tolerance_override: opts.tolerance,
        },
        versions: Versions::default(),
    }
}

fn engine_error(mode: EvalMode, opts: &VerifyOptions, e: Error) -> ModeResult {
    ModeResult {
        mode,
        tolerance: opts.tolerance.unwrap_or(mode.default_tolerance()),
        fit: None,
        free_fit: None,
        expected: None,
        verdict: Verdict::EngineError,
        messages: alloc::vec![alloc::format!("{e}")],
    }
}

/// Recompute the verdict of a stored report from its samples.
pub fn recheck(report: &VerificationReport) -> Verdict {
    let mut verdicts = Vec::new();
    for m in &report.modes {
        let pairs: Vec<(Complex, Complex)> = report
            .samples
            .iter()
            .filter(|x| x.mode == m.mode)
            .map(|x| (x.s, x.ratio))
            .collect();
        if pairs.is_empty() {
            verdicts.push(Verdict::EngineError);
            continue;
        }
        let r = judge(
            report.kind,
            report.expected.as_ref(),
            report.discrepancy_allowed,
            m.mode,
            m.tolerance,
            &pairs,
        );
        verdicts.push(r.verdict);
    }
    verdicts.into_iter().max().unwrap_or(Verdict::EngineError)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(q: f64, sigma2: Complex, points: &[f64]) -> Vec<(Complex, Complex)> {
        points
            .iter()
            .map(|&s| (c64(s, 0.0), sigma2 * q.powf(s)))
            .collect()
    }

    #[test]
    fn plans() {
        let p = sample_strip(&SamplePlan::default()).unwrap();
        assert_eq!(p.len(), 9);
        assert!((p[0].re - 0.1).abs() < 1e-15 && (p[8].re - 0.9).abs() < 1e-15);
        let p = sample_strip(&SamplePlan::centered(6.0, 4.0, 9)).unwrap();
        assert!(p.iter().all(|s| s.re > 4.0 && s.re < 8.0));
        let p = sample_strip(&SamplePlan::default().with_offsets(&[2.0])).unwrap();
        assert_eq!(p.len(), 18);
        assert_eq!(p[9], c64(0.1, 2.0));
        let p = sample_strip(&SamplePlan::default().with_exclude(&[0.5])).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(sample_strip(&SamplePlan::interval(1.0, 1.0, 3)), Err(Error::EmptyRange));
        assert_eq!(sample_strip(&SamplePlan::interval(0.0, 1.0, 0)), Err(Error::EmptyRange));
    }

    #[test]
    fn exact_models() {
        let f = fit_constants(&synthetic(2.0, c64(3.0, 0.0), &[0.2, 0.5, 0.8]), false).unwrap();
        assert!((f.q - 2.0).norm() < 1e-14);
        assert!((f.sigma2 - 3.0).norm() < 1e-14);
        assert!(f.max_rel_residual < 1e-14);
        let c: Vec<_> = [0.1, 0.4, 0.9].iter().map(|&s| (c64(s, 0.0), c64(7.0, 0.0))).collect();
        let f = fit_constants(&c, true).unwrap();
        assert!((f.sigma2 - 7.0).norm() < 1e-14);
        assert_eq!(f.rms_residual, 0.0);
        assert!(matches!(
            fit_constants(&c[..2], true),
            Err(Error::InsufficientSamples { needed: 3, got: 2 })
        ));
        let same: Vec<_> = (0..3).map(|_| (c64(0.5, 0.0), c64(1.0, 0.0))).collect();
        assert!(matches!(fit_constants(&same, false), Err(Error::DegenerateFit { .. })));
    }

    #[test]
    fn branch_unwrapping() {
        // arg of sigma2 Q^s crosses pi as s grows
        let sigma2 = c64(-1.0, 0.1);
        let q = c64(0.5, 3.0);
        let data: Vec<_> = (0..12)
            .map(|j| {
                let s = 0.1 * j as f64;
                (c64(s, 0.0), sigma2 * (q.ln() * s).exp())
            })
            .collect();
        let f = fit_constants(&data, false).unwrap();
        assert!((f.q - q).norm() < 1e-12 * q.norm(), "{}", f.q);
        assert!((f.sigma2 - sigma2).norm() < 1e-12);
    }

    #[test]
    fn judging() {
        let data = synthetic(2.0 * PI, c64(0.5, 0.0), &[0.1, 0.3, 0.5, 0.7, 0.9]);
        let e = Expected {
            q: Some(c64(2.0 * PI, 0.0)),
            sigma2: c64(0.5, 0.0),
            provenance: Provenance::Paper,
            gating: true,
        };
        let r = judge(CaseKind::RatioQ, Some(&e), false, EvalMode::Analytic, 1e-9, &data);
        assert_eq!(r.verdict, Verdict::Pass);
        let wrong = Expected {
            sigma2: c64(0.25, 0.0),
            ..e
        };
        let r = judge(CaseKind::RatioQ, Some(&wrong), false, EvalMode::Analytic, 1e-9, &data);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = judge(CaseKind::RatioQ, Some(&wrong), true, EvalMode::Analytic, 1e-9, &data);
        assert_eq!(r.verdict, Verdict::PaperDiscrepancy);
        // Q^s present where the kind demands a constant
        let r = judge(CaseKind::RatioPlain, None, false, EvalMode::Analytic, 1e-9, &data);
        assert_eq!(r.verdict, Verdict::Fail);
        let ungated = Expected { gating: false, ..wrong };
        let r = judge(CaseKind::RatioQ, Some(&ungated), false, EvalMode::Analytic, 1e-9, &data);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.expected.unwrap().matches);
    }
}
