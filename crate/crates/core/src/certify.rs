//! Decides, for a degree `d`, a star size `k` and an independent-set
//! density `alpha`, whether the thin-independent-set method guarantees a
//! k-star decomposition of the random d-regular graph, and sweeps degree
//! ranges for exceptions.
//!
//! Every approximation here errs on the side of refusing to certify: the
//! `beta_max` search rounds up, and the grid check of the weak condition
//! pads each cell with a Lipschitz margin.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, AlphaSource, AnalyticError};

/// Bisection tolerance of the `beta_max` search; the result is rounded up
/// by this much.
pub const BETA_BISECT_TOL: f64 = 1e-10;
pub const DEFAULT_BETA_STEP: f64 = 1e-6;
pub const DEFAULT_TAU_STEP: f64 = 1e-3;
/// Maximum number of x10 refinements of the weak-condition grid.
pub const MAX_REFINEMENTS: u32 = 3;
/// The beta grid never has fewer than this many cells below `beta_max`.
pub const MIN_BETA_CELLS: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("k too large: t1 = {t1} is not above 2/d")]
    KTooLarge { t1: f64 },
    #[error("x2 nonpositive: x1 = {x1} >= 1 - alpha_dk = {limit}")]
    X2Nonpositive { x1: f64, limit: f64 },
    #[error("d_hat underflow: floor(k - t2 d / 2) = {d_hat}")]
    DhatUnderflow { d_hat: i64 },
    #[error("no sign change of phi_hat below beta = {upper}")]
    NoSignChange { upper: f64 },
    #[error("inconclusive: grid refinement cap reached near beta = {beta}, tau = {tau}")]
    Inconclusive { beta: f64, tau: f64 },
    #[error("no alpha available for d = {0}")]
    MissingAlpha(u32),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

pub type Result<T> = std::result::Result<T, CertifyError>;

/// Grid parameters of the weak-condition check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grids {
    pub beta_step: f64,
    pub tau_step: f64,
    /// Added on top of the per-cell Lipschitz margin.
    pub safety_margin: f64,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            beta_step: DEFAULT_BETA_STEP,
            tau_step: DEFAULT_TAU_STEP,
            safety_margin: 0.0,
        }
    }
}

impl Grids {
    fn validate(&self) -> Result<()> {
        if !(self.beta_step > 0.0 && self.tau_step > 0.0 && self.safety_margin >= 0.0) {
            return Err(CertifyError::InvalidInput(format!(
                "grid steps must be positive and the margin nonnegative: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyInput {
    pub d: u32,
    pub k: u32,
    pub alpha: f64,
    pub grids: Grids,
}

impl CertifyInput {
    pub fn new(d: u32, k: u32, alpha: f64, grids: Grids) -> Result<Self> {
        let input = Self { d, k, alpha, grids };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<()> {
        let Self { d, k, alpha, grids } = *self;
        if d < 3 {
            return Err(CertifyError::InvalidInput(format!("d = {d} < 3")));
        }
        if !(2 * k > d && k + 1 < d) {
            return Err(CertifyError::InvalidInput(format!(
                "need d/2 < k < d - 1, got d = {d}, k = {k}"
            )));
        }
        let a_dk = analytic::alpha_dk(d, k)?;
        if !(alpha > a_dk && alpha < 0.5) {
            return Err(CertifyError::InvalidInput(format!(
                "need alpha_dk = {a_dk} < alpha < 1/2, got {alpha}"
            )));
        }
        grids.validate()
    }
}

/// Output of the first three steps of the procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DhatDerivation {
    pub t1: f64,
    pub x1: f64,
    pub x2: f64,
    pub t2: f64,
    pub d_hat: u32,
    pub tau_plus: f64,
}

/// Grid point of the weak condition with the largest `(tau d - d_hat) beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub beta: f64,
    pub tau: f64,
    /// `alpha - alpha_dk - (tau d - d_hat) beta`.
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub beta_max: f64,
    pub strong: bool,
    pub weak: bool,
    pub worst_witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyResult {
    pub d: u32,
    pub k: u32,
    pub alpha: f64,
    pub certified: bool,
    pub t1: f64,
    pub x1: f64,
    pub x2: f64,
    pub t2: f64,
    pub d_hat: u32,
    pub tau_plus: f64,
    pub beta_max: f64,
    pub strong_condition_met: bool,
    pub weak_condition_met: bool,
    pub worst_witness: Option<Witness>,
}

/// Steps one to three: pick the subset-density split `x1`/`x2` from the
/// induced-degree ceiling `g` and derive the thinness bound `d_hat`.
pub fn derive_dhat(input: &CertifyInput) -> Result<DhatDerivation> {
    input.validate()?;
    let CertifyInput { d, k, .. } = *input;
    let df = d as f64;
    let t1 = 2.0 * (d - k) as f64 / df;
    if t1 <= 2.0 / df || t1 >= 1.0 {
        return Err(CertifyError::KTooLarge { t1 });
    }
    let x1 = analytic::g_inv(d, t1)?;
    let limit = 1.0 - analytic::alpha_dk(d, k)?;
    let x2 = limit - x1;
    if x2 <= 0.0 {
        return Err(CertifyError::X2Nonpositive { x1, limit });
    }
    let t2 = analytic::g(d, x2)?;
    let d_hat = (k as f64 - t2 * df / 2.0).floor() as i64;
    if d_hat < 1 {
        return Err(CertifyError::DhatUnderflow { d_hat });
    }
    let d_hat = d_hat as u32;
    Ok(DhatDerivation {
        t1,
        x1,
        x2,
        t2,
        d_hat,
        tau_plus: (d_hat + 1) as f64 / df,
    })
}

/// Largest `beta` for which `phi_hat(d, alpha, beta, tau)` is defined.
fn beta_domain_limit(alpha: f64, tau: f64) -> f64 {
    let mut limit = 1.0 - 2.0 * alpha;
    if tau > 0.0 {
        limit = limit.min(alpha / tau);
    }
    if tau < 1.0 {
        limit = limit.min((1.0 - 2.0 * alpha) / (1.0 - tau));
    }
    limit
}

/// `inf { beta > 0 : phi_hat(d, alpha, beta, tau_plus) < 0 }`, rounded up.
///
/// Scans upward from zero in steps of `beta_step`, then bisects the first
/// bracket to [`BETA_BISECT_TOL`]. Returns zero when `phi(d, alpha) < 0`.
pub fn beta_max(d: u32, alpha: f64, tau_plus: f64, beta_step: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(CertifyError::InvalidInput(format!("alpha = {alpha}")));
    }
    if !(tau_plus > 0.0 && tau_plus <= 1.0) {
        return Err(CertifyError::InvalidInput(format!("tau_plus = {tau_plus}")));
    }
    if !(beta_step > 0.0) {
        return Err(CertifyError::InvalidInput(format!(
            "beta_step = {beta_step}"
        )));
    }
    // phi_hat(., 0, .) = phi and phi_hat is continuous in beta.
    if analytic::phi(d, alpha)? < 0.0 {
        return Ok(0.0);
    }
    let f = |beta: f64| analytic::phi_hat(d, alpha, beta, tau_plus);
    let upper = beta_domain_limit(alpha, tau_plus);
    let mut lo = 0.0;
    let mut i = 1u64;
    loop {
        let beta = (i as f64 * beta_step).min(upper);
        if f(beta)? < 0.0 {
            let mut hi = beta;
            while hi - lo > BETA_BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if f(mid)? < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi + BETA_BISECT_TOL);
        }
        if beta >= upper {
            return Err(CertifyError::NoSignChange { upper });
        }
        lo = beta;
        i += 1;
    }
}

struct WeakCheck {
    d: f64,
    d_u32: u32,
    d_hat: f64,
    alpha: f64,
    gap: f64,
    beta_max: f64,
    tau_plus: f64,
    safety_margin: f64,
    worst: Option<(f64, f64, f64)>,
}

enum ScanVerdict {
    Holds,
    Violated,
}

impl WeakCheck {
    fn objective(&self, beta: f64, tau: f64) -> f64 {
        (tau * self.d - self.d_hat) * beta
    }

    fn record(&mut self, beta: f64, tau: f64, value: f64) {
        if self.worst.is_none_or(|(_, _, v)| value > v) {
            self.worst = Some((beta, tau, value));
        }
    }

    /// Checks every grid point of `[b_lo, b_hi] x [t_lo, t_hi]` at the given
    /// steps. A point inside the region within one cell margin of the gap is
    /// re-examined on a finer grid around it.
    #[allow(clippy::too_many_arguments)]
    fn scan(
        &mut self,
        b_lo: f64,
        b_hi: f64,
        t_lo: f64,
        t_hi: f64,
        b_step: f64,
        t_step: f64,
        level: u32,
    ) -> Result<ScanVerdict> {
        let margin = self.d * b_step + self.d * self.beta_max * t_step + self.safety_margin;
        let nb = ((b_hi - b_lo) / b_step).ceil() as u64;
        let nt = ((t_hi - t_lo) / t_step).ceil() as u64;
        for j in 0..=nt {
            let tau = (t_lo + j as f64 * t_step).min(t_hi);
            for i in 0..=nb {
                let beta = (b_lo + i as f64 * b_step).min(b_hi);
                // Points outside the domain of phi_hat are impossible configurations.
                let Ok(value) = analytic::phi_hat(self.d_u32, self.alpha, beta, tau) else {
                    continue;
                };
                if value < 0.0 {
                    continue;
                }
                let obj = self.objective(beta, tau);
                self.record(beta, tau, obj);
                if obj >= self.gap {
                    return Ok(ScanVerdict::Violated);
                }
                if obj + margin >= self.gap {
                    if level >= MAX_REFINEMENTS {
                        return Err(CertifyError::Inconclusive { beta, tau });
                    }
                    let verdict = self.scan(
                        (beta - b_step).max(0.0),
                        (beta + b_step).min(self.beta_max),
                        (tau - t_step).max(self.tau_plus),
                        (tau + t_step).min(1.0),
                        b_step / 10.0,
                        t_step / 10.0,
                        level + 1,
                    )?;
                    if let ScanVerdict::Violated = verdict {
                        return Ok(verdict);
                    }
                }
            }
        }
        Ok(ScanVerdict::Holds)
    }
}

/// Grid check of the weak condition: `(tau d - d_hat) beta < alpha - alpha_dk`
/// for all `beta <= beta_max`, `tau >= tau_plus` with `phi_hat >= 0`.
/// Returns whether it holds and the worst grid point seen.
pub fn weak_condition(
    d: u32,
    k: u32,
    d_hat: u32,
    alpha: f64,
    beta_max: f64,
    grids: &Grids,
) -> Result<(bool, Option<Witness>)> {
    grids.validate()?;
    let gap = alpha - analytic::alpha_dk(d, k)?;
    if beta_max <= 0.0 {
        return Ok((true, None));
    }
    let tau_plus = (d_hat + 1) as f64 / d as f64;
    let mut check = WeakCheck {
        d: d as f64,
        d_u32: d,
        d_hat: d_hat as f64,
        alpha,
        gap,
        beta_max,
        tau_plus,
        safety_margin: grids.safety_margin,
        worst: None,
    };
    let b_step = grids.beta_step.min(beta_max / MIN_BETA_CELLS);
    let verdict = check.scan(0.0, beta_max, tau_plus, 1.0, b_step, grids.tau_step, 0)?;
    let witness = check.worst.map(|(beta, tau, v)| Witness {
        beta,
        tau,
        slack: gap - v,
    });
    Ok((matches!(verdict, ScanVerdict::Holds), witness))
}

/// Step four: the strong condition `(d - d_hat) beta_max < alpha - alpha_dk`
/// and, when it fails, the weak condition on a grid.
pub fn check_condition(
    d: u32,
    k: u32,
    d_hat: u32,
    alpha: f64,
    grids: &Grids,
) -> Result<ConditionOutcome> {
    if d_hat >= k {
        return Err(CertifyError::InvalidInput(format!(
            "d_hat = {d_hat} >= k = {k}"
        )));
    }
    let gap = alpha - analytic::alpha_dk(d, k)?;
    if gap <= 0.0 {
        return Err(CertifyError::InvalidInput(format!(
            "alpha = {alpha} is not above alpha_dk"
        )));
    }
    let tau_plus = (d_hat + 1) as f64 / d as f64;
    let beta_max = beta_max(d, alpha, tau_plus, grids.beta_step)?;
    let strong = (d - d_hat) as f64 * beta_max < gap;
    if strong {
        // tau d - d_hat <= d - d_hat and beta <= beta_max on the whole region.
        return Ok(ConditionOutcome {
            beta_max,
            strong,
            weak: true,
            worst_witness: None,
        });
    }
    let (weak, worst_witness) = weak_condition(d, k, d_hat, alpha, beta_max, grids)?;
    Ok(ConditionOutcome {
        beta_max,
        strong,
        weak,
        worst_witness,
    })
}

/// Runs all four steps for one `(d, k, alpha)`.
pub fn certify(input: &CertifyInput) -> Result<CertifyResult> {
    let der = derive_dhat(input)?;
    let cond = check_condition(input.d, input.k, der.d_hat, input.alpha, &input.grids)?;
    Ok(CertifyResult {
        d: input.d,
        k: input.k,
        alpha: input.alpha,
        certified: cond.strong || cond.weak,
        t1: der.t1,
        x1: der.x1,
        x2: der.x2,
        t2: der.t2,
        d_hat: der.d_hat,
        tau_plus: der.tau_plus,
        beta_max: cond.beta_max,
        strong_condition_met: cond.strong,
        weak_condition_met: cond.weak,
        worst_witness: cond.worst_witness,
    })
}

/// One `k` tried by [`certify_degree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CertifyResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeOutcome {
    pub d: u32,
    pub alpha: f64,
    /// `floor(kappa(d, alpha))`.
    pub k_ind: u32,
    pub k_certified: Option<u32>,
    pub attempts: Vec<Attempt>,
}

impl DegreeOutcome {
    pub fn certified_result(&self) -> Option<&CertifyResult> {
        self.attempts
            .iter()
            .filter_map(|a| a.result.as_ref())
            .find(|r| r.certified)
    }
}

/// Tries `k = floor(kappa(d, alpha))` and then smaller `k > d/2` until one
/// certifies. Per-`k` errors are recorded and count as "not certified".
pub fn certify_degree(d: u32, alpha: f64, grids: &Grids) -> Result<DegreeOutcome> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(CertifyError::InvalidInput(format!("alpha = {alpha}")));
    }
    grids.validate()?;
    let k_ind = analytic::threshold_report(d, alpha, AlphaSource::Table)?.k_ind as u32;
    let mut attempts = Vec::new();
    let mut k_certified = None;
    let mut k = k_ind;
    while 2 * k > d {
        let attempt = match CertifyInput::new(d, k, alpha, *grids).and_then(|i| certify(&i)) {
            Ok(r) => Attempt {
                k,
                result: Some(r),
                error: None,
            },
            Err(e) => Attempt {
                k,
                result: None,
                error: Some(e.to_string()),
            },
        };
        let done = attempt.result.as_ref().is_some_and(|r| r.certified);
        attempts.push(attempt);
        if done {
            k_certified = Some(k);
            break;
        }
        k -= 1;
    }
    Ok(DegreeOutcome {
        d,
        alpha,
        k_ind,
        k_certified,
        attempts,
    })
}

/// Where each degree's `alpha` comes from in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaProvider {
    Table(BTreeMap<u32, f64>),
    Estimate,
    /// Table values where present, the estimate elsewhere.
    TableWithEstimate(BTreeMap<u32, f64>),
}

impl AlphaProvider {
    pub fn alpha(&self, d: u32) -> Result<(f64, AlphaSource)> {
        let table = match self {
            AlphaProvider::Table(t) | AlphaProvider::TableWithEstimate(t) => t.get(&d).copied(),
            AlphaProvider::Estimate => None,
        };
        match (table, self) {
            (Some(a), _) => Ok((a, AlphaSource::Table)),
            (None, AlphaProvider::Table(_)) => Err(CertifyError::MissingAlpha(d)),
            (None, _) => Ok((analytic::alpha_fc_estimate(d)?, AlphaSource::Estimate)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Strong,
    Weak,
    Failed,
}

/// One line of a sweep report. The derivation fields belong to the
/// certified attempt, or to the `k_ind` attempt when nothing certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub d: u32,
    pub alpha: Option<f64>,
    pub alpha_source: Option<AlphaSource>,
    pub k_ind: Option<u32>,
    pub k_certified: Option<u32>,
    pub exceptional: bool,
    pub t1: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub t2: Option<f64>,
    pub d_hat: Option<u32>,
    pub beta_max: Option<f64>,
    pub condition: Condition,
    /// Slack of the `k_ind` attempt's worst weak-condition witness.
    pub k_ind_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub attempts: Vec<Attempt>,
}

impl DegreeRecord {
    fn failed(d: u32, alpha: Option<(f64, AlphaSource)>, error: String) -> Self {
        Self {
            d,
            alpha: alpha.map(|a| a.0),
            alpha_source: alpha.map(|a| a.1),
            k_ind: None,
            k_certified: None,
            exceptional: false,
            t1: None,
            x1: None,
            x2: None,
            t2: None,
            d_hat: None,
            beta_max: None,
            condition: Condition::Failed,
            k_ind_slack: None,
            error: Some(error),
            attempts: Vec::new(),
        }
    }

    fn from_outcome(outcome: DegreeOutcome, source: AlphaSource) -> Self {
        let shown = outcome
            .certified_result()
            .or_else(|| outcome.attempts.first().and_then(|a| a.result.as_ref()))
            .copied();
        let condition = match outcome.certified_result() {
            Some(r) if r.strong_condition_met => Condition::Strong,
            Some(_) => Condition::Weak,
            None => Condition::Failed,
        };
        let k_ind_slack = outcome
            .attempts
            .first()
            .and_then(|a| a.result.as_ref())
            .and_then(|r| r.worst_witness.map(|w| w.slack));
        Self {
            d: outcome.d,
            alpha: Some(outcome.alpha),
            alpha_source: Some(source),
            k_ind: Some(outcome.k_ind),
            k_certified: outcome.k_certified,
            exceptional: outcome.k_certified != Some(outcome.k_ind),
            t1: shown.map(|r| r.t1),
            x1: shown.map(|r| r.x1),
            x2: shown.map(|r| r.x2),
            t2: shown.map(|r| r.t2),
            d_hat: shown.map(|r| r.d_hat),
            beta_max: shown.map(|r| r.beta_max),
            condition,
            k_ind_slack,
            error: None,
            attempts: outcome.attempts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub d_min: u32,
    pub d_max: u32,
    pub grids: Grids,
    pub records: Vec<DegreeRecord>,
    /// Degrees whose certified `k` is below `k_ind` (or that failed outright).
    pub exceptional: Vec<u32>,
    /// Degrees whose evaluation raised an error.
    pub errors: Vec<u32>,
}

fn sweep_one(d: u32, provider: &AlphaProvider, grids: &Grids) -> DegreeRecord {
    let (alpha, source) = match provider.alpha(d) {
        Ok(a) => a,
        Err(e) => return DegreeRecord::failed(d, None, e.to_string()),
    };
    match certify_degree(d, alpha, grids) {
        Ok(outcome) => DegreeRecord::from_outcome(outcome, source),
        Err(e) => DegreeRecord::failed(d, Some((alpha, source)), e.to_string()),
    }
}

/// Certifies every degree in `[d_min, d_max]`. Degrees are evaluated in
/// parallel on the current rayon pool and collected in degree order.
pub fn sweep(d_min: u32, d_max: u32, provider: &AlphaProvider, grids: &Grids) -> SweepReport {
    let records: Vec<DegreeRecord> = (d_min..=d_max)
        .into_par_iter()
        .map(|d| sweep_one(d, provider, grids))
        .collect();
    let exceptional = records
        .iter()
        .filter(|r| r.error.is_none() && r.exceptional)
        .map(|r| r.d)
        .collect();
    let errors = records
        .iter()
        .filter(|r| r.error.is_some())
        .map(|r| r.d)
        .collect();
    SweepReport {
        d_min,
        d_max,
        grids: *grids,
        records,
        exceptional,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grids() -> Grids {
        Grids::default()
    }

    #[test]
    fn t1_for_d10_k6() {
        // any alpha above alpha_dk(10, 6) = 1/6 will do
        let input = CertifyInput::new(10, 6, 0.2, grids()).unwrap();
        let der = derive_dhat(&input).unwrap();
        assert!((der.t1 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn derive_dhat_identities() {
        for d in [30u32, 57, 200, 1000] {
            let alpha = analytic::alpha_fc_estimate(d).unwrap();
            let k = analytic::kappa(d, alpha).unwrap().floor() as u32;
            let input = CertifyInput::new(d, k, alpha, grids()).unwrap();
            let der = derive_dhat(&input).unwrap();
            assert!((analytic::g(d, der.x1).unwrap() - der.t1).abs() < 1e-9);
            assert!((analytic::g(d, der.x2).unwrap() - der.t2).abs() <= 1e-12);
            assert!(k as f64 - der.d_hat as f64 >= der.t2 * d as f64 / 2.0);
            assert!(der.d_hat >= 1 && der.d_hat < k);
            assert_eq!(der.tau_plus, (der.d_hat + 1) as f64 / d as f64);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(CertifyInput::new(10, 5, 0.2, grids()).is_err());
        assert!(CertifyInput::new(10, 9, 0.45, grids()).is_err());
        // alpha below alpha_dk(10, 6) = 1/6
        assert!(CertifyInput::new(10, 6, 0.1, grids()).is_err());
        let bad = Grids {
            beta_step: 0.0,
            ..grids()
        };
        assert!(CertifyInput::new(10, 6, 0.2, bad).is_err());
    }

    #[test]
    fn beta_max_is_zero_above_first_moment() {
        let d = 50;
        let alpha = analytic::alpha_fm(d).unwrap() + 1e-3;
        assert_eq!(beta_max(d, alpha, 0.5, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn beta_max_defining_property() {
        for &(d, tau) in &[(30u32, 0.6), (100, 0.55), (1000, 0.52)] {
            let alpha = analytic::alpha_fc_estimate(d).unwrap();
            let b = beta_max(d, alpha, tau, 1e-6).unwrap();
            assert!(b > 0.0);
            assert!(analytic::phi_hat(d, alpha, b + 1e-9, tau).unwrap() < 0.0);
            // just below the crossing phi_hat is still nonnegative
            let below = b - 2.0 * BETA_BISECT_TOL - 1e-12;
            assert!(analytic::phi_hat(d, alpha, below, tau).unwrap() >= 0.0);
        }
    }

    #[test]
    fn beta_max_matches_dense_scan() {
        let d = 100;
        let alpha = analytic::alpha_fm(d).unwrap() - 1e-4;
        let tau = 0.6;
        let b = beta_max(d, alpha, tau, 1e-6).unwrap();
        // Independent oracle: first negative point of a 1e-8 grid.
        let step = 1e-8;
        let mut i = 1u64;
        let first_negative = loop {
            let beta = i as f64 * step;
            if analytic::phi_hat(d, alpha, beta, tau).unwrap() < 0.0 {
                break beta;
            }
            i += 1;
        };
        assert!(
            b >= first_negative - step - 1e-12,
            "{b} vs {first_negative}"
        );
        assert!(
            b <= first_negative + 2.0 * BETA_BISECT_TOL,
            "{b} vs {first_negative}"
        );
    }

    #[test]
    fn vacuous_condition_when_beta_max_is_zero() {
        let (ok, witness) = weak_condition(40, 22, 10, 0.12, 0.0, &grids()).unwrap();
        assert!(ok);
        assert!(witness.is_none());
    }

    #[test]
    fn strong_implies_weak_grid() {
        for d in [30u32, 45, 64, 101, 250] {
            let alpha = analytic::alpha_fc_estimate(d).unwrap();
            let k_ind = analytic::kappa(d, alpha).unwrap().floor() as u32;
            for k in [k_ind, k_ind - 1] {
                let input = CertifyInput::new(d, k, alpha, grids()).unwrap();
                let der = derive_dhat(&input).unwrap();
                let cond = check_condition(d, k, der.d_hat, alpha, &grids()).unwrap();
                if cond.strong {
                    let (weak, _) =
                        weak_condition(d, k, der.d_hat, alpha, cond.beta_max, &grids()).unwrap();
                    assert!(weak, "d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn certify_degree_without_room_fails() {
        // kappa(10, 0.05) = 5.26 < 10/2 + 1
        let out = certify_degree(10, 0.05, &grids()).unwrap();
        assert_eq!(out.k_certified, None);
        assert!(out.attempts.is_empty());
    }

    #[test]
    fn alpha_provider_sources() {
        let table: BTreeMap<u32, f64> = [(40, 0.1)].into_iter().collect();
        let p = AlphaProvider::Table(table.clone());
        assert_eq!(p.alpha(40).unwrap(), (0.1, AlphaSource::Table));
        assert!(matches!(p.alpha(41), Err(CertifyError::MissingAlpha(41))));
        let p = AlphaProvider::TableWithEstimate(table);
        assert_eq!(p.alpha(41).unwrap().1, AlphaSource::Estimate);
    }

    #[test]
    fn empty_sweep() {
        let report = sweep(30, 29, &AlphaProvider::Estimate, &grids());
        assert!(report.records.is_empty());
        assert!(report.exceptional.is_empty());
    }
}
