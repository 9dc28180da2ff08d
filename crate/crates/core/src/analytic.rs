//! Entropy functions and analytic thresholds for independent sets and
//! star decompositions of random d-regular graphs.
//!
//! Everything here is a pure function of its arguments. Logarithms are
//! natural. Arguments of `h` that round to within [`CLAMP_TOL`] below zero
//! are treated as zero; anything further out is a domain error.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arguments of `h` in `[-CLAMP_TOL, 0]` are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;
/// Absolute tolerance of every bisection in this module.
pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_BISECTION_ITERS: usize = 200;
/// Distributions must sum to one within this tolerance.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("no sign change bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("invalid distribution: {0}")]
    Distribution(String),
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

fn domain(name: &'static str, value: f64, domain: &'static str) -> AnalyticError {
    AnalyticError::Domain {
        name,
        value,
        domain,
    }
}

/// `h(x) = -x log x` with `h(0) = 0`.
pub fn h(x: f64) -> Result<f64> {
    if !(x >= -CLAMP_TOL && x <= 1.0 + CLAMP_TOL) {
        return Err(domain("x", x, "[0, 1]"));
    }
    if x <= 0.0 || x >= 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.ln())
}

/// Shannon entropy `sum h(p_s)` of a probability vector.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    let mut entropy = 0.0;
    for &p in dist {
        if p < -CLAMP_TOL || p.is_nan() {
            return Err(AnalyticError::Distribution(format!(
                "negative probability {p}"
            )));
        }
        total += p;
        entropy += h(p)?;
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(AnalyticError::Distribution(format!(
            "probabilities sum to {total}"
        )));
    }
    Ok(entropy)
}

/// Vertex and (ordered) edge label statistics of a labeling. Labels are
/// `0..L`; `edge_probs[i][j]` is the probability that a uniform directed
/// edge goes from label `i` to label `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelDistribution {
    vertex_probs: Vec<f64>,
    edge_probs: Vec<Vec<f64>>,
}

impl LabelDistribution {
    pub fn new(vertex_probs: Vec<f64>, edge_probs: Vec<Vec<f64>>) -> Result<Self> {
        let labels = vertex_probs.len();
        if labels == 0 {
            return Err(AnalyticError::Distribution("no labels".into()));
        }
        if edge_probs.len() != labels || edge_probs.iter().any(|row| row.len() != labels) {
            return Err(AnalyticError::Distribution(format!(
                "edge_probs must be {labels}x{labels}"
            )));
        }
        let in_unit = |p: f64| (0.0..=1.0).contains(&p);
        if !vertex_probs.iter().copied().all(in_unit)
            || !edge_probs.iter().flatten().copied().all(in_unit)
        {
            return Err(AnalyticError::Distribution(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let vsum: f64 = vertex_probs.iter().sum();
        let esum: f64 = edge_probs.iter().flatten().sum();
        if (vsum - 1.0).abs() > PROB_TOL || (esum - 1.0).abs() > PROB_TOL {
            return Err(AnalyticError::Distribution(format!(
                "vertex sum {vsum}, edge sum {esum}"
            )));
        }
        for i in 0..labels {
            for j in 0..i {
                if edge_probs[i][j] != edge_probs[j][i] {
                    return Err(AnalyticError::Distribution(format!(
                        "edge_probs not symmetric at ({i}, {j})"
                    )));
                }
            }
            let marginal: f64 = edge_probs[i].iter().sum();
            if (marginal - vertex_probs[i]).abs() > PROB_TOL {
                return Err(AnalyticError::Distribution(format!(
                    "marginal of label {i} is {marginal}, vertex probability {}",
                    vertex_probs[i]
                )));
            }
        }
        Ok(Self {
            vertex_probs,
            edge_probs,
        })
    }

    /// Builds the distribution whose vertex marginal is read off `edge_probs`.
    pub fn from_edge_probs(edge_probs: Vec<Vec<f64>>) -> Result<Self> {
        let vertex_probs = edge_probs.iter().map(|row| row.iter().sum()).collect();
        Self::new(vertex_probs, edge_probs)
    }

    /// Label 0 marks an independent set of density `alpha`, label 1 the rest.
    pub fn independent_set(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(domain("alpha", alpha, "[0, 1/2]"));
        }
        Self::new(
            vec![alpha, 1.0 - alpha],
            vec![vec![0.0, alpha], vec![alpha, 1.0 - 2.0 * alpha]],
        )
    }

    pub fn vertex_probs(&self) -> &[f64] {
        &self.vertex_probs
    }

    pub fn edge_probs(&self) -> &[Vec<f64>] {
        &self.edge_probs
    }

    pub fn vertex_entropy(&self) -> Result<f64> {
        self.vertex_probs.iter().map(|&p| h(p)).sum()
    }

    pub fn edge_entropy(&self) -> Result<f64> {
        self.edge_probs.iter().flatten().map(|&p| h(p)).sum()
    }
}

fn check_degree(d: u32, min: u32) -> Result<()> {
    if d < min {
        return Err(domain("d", d as f64, "degrees >= 3"));
    }
    Ok(())
}

/// Exponential growth rate of the expected number of labelings of the
/// configuration model with the given local statistics:
/// `(d/2) H(edge) - (d-1) H(vertex)`.
pub fn first_moment_rate(dist: &LabelDistribution, d: u32) -> Result<f64> {
    check_degree(d, 3)?;
    let d = d as f64;
    Ok(d / 2.0 * dist.edge_entropy()? - (d - 1.0) * dist.vertex_entropy()?)
}

/// First-moment entropy of independent sets of density `alpha`.
pub fn phi(d: u32, alpha: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1/2]"));
    }
    let df = d as f64;
    Ok(h(alpha)? + df / 2.0 * h(1.0 - 2.0 * alpha)? - (df - 1.0) * h(1.0 - alpha)?)
}

/// Entropy of pairs `(A, B)`: `A` independent of density `alpha`, `B` outside
/// `A` of density `beta`, with `tau * d` edges per `B`-vertex into `A` on
/// average. Reduces to [`phi`] at `beta = 0`.
pub fn phi_hat(d: u32, alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1/2]"));
    }
    if !(beta >= 0.0 && beta <= 1.0 - 2.0 * alpha + CLAMP_TOL) {
        return Err(domain("beta", beta, "[0, 1 - 2 alpha]"));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(domain("tau", tau, "[0, 1]"));
    }
    let df = d as f64;
    let edge = 2.0 * h(beta)?
        + 2.0 * beta * (h(tau)? + h(1.0 - tau)?)
        + 2.0 * h(alpha - tau * beta)?
        + 2.0 * h(1.0 - 2.0 * alpha - (1.0 - tau) * beta)?
        - h(1.0 - 2.0 * alpha)?;
    let vertex = h(alpha)? + h(beta)? + h(1.0 - alpha - beta)?;
    Ok(df / 2.0 * edge - (df - 1.0) * vertex)
}

/// Entropy lost by a symmetric 2x2 coupling with row sums `a1`, `a2` and
/// off-diagonal mass `p12`, relative to the independent coupling.
/// Nonnegative, and zero exactly at `p12 = a1 a2 / (a1 + a2)`.
pub fn coupling_entropy_gap(a1: f64, a2: f64, p12: f64) -> Result<f64> {
    if !(a1 > 0.0) {
        return Err(domain("a1", a1, "(0, 1]"));
    }
    if !(a2 > 0.0) {
        return Err(domain("a2", a2, "(0, 1]"));
    }
    if a1 + a2 > 1.0 + CLAMP_TOL {
        return Err(domain("a1 + a2", a1 + a2, "(0, 1]"));
    }
    if !(p12 >= 0.0 && p12 <= a1.min(a2)) {
        return Err(domain("p12", p12, "[0, min(a1, a2)]"));
    }
    let independent = 2.0 * h(a1)? + 2.0 * h(a2)? - h(a1 + a2)?;
    let actual = h(a1 - p12)? + 2.0 * h(p12)? + h(a2 - p12)?;
    Ok(independent - actual)
}

/// First-moment rate (up to the factor `d/2`) of vertex sets of density `x`
/// whose induced subgraph has average degree `t d`.
#[allow(non_snake_case)]
pub fn F(d: u32, x: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    if !(t <= 1.0 && t >= x) {
        return Err(domain("t", t, "[x, 1]"));
    }
    let df = d as f64;
    Ok(
        h(t * x)? + 2.0 * h((1.0 - t) * x)? + h(1.0 - (2.0 - t) * x)?
            - (2.0 - 2.0 / df) * (h(x)? + h(1.0 - x)?),
    )
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol` or after [`MAX_BISECTION_ITERS`] halvings.
pub fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(AnalyticError::NoBracket { lo, hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..MAX_BISECTION_ITERS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First moment bound: the root of `phi(d, .)` on `(0, 1/2)`.
pub fn alpha_fm(d: u32) -> Result<f64> {
    check_degree(d, 3)?;
    bisect(f64::MIN_POSITIVE, 0.5, ROOT_TOL, |a| phi(d, a))
}

/// First moment bound minus the leading frozen-cluster correction
/// `(2/e * log d / d)^2`. An estimate of the 1-RSB independence ratio with
/// an uncontrolled error term; only defined for `d >= 20`.
pub fn alpha_fc_estimate(d: u32) -> Result<f64> {
    if d < 20 {
        return Err(domain("d", d as f64, "degrees >= 20"));
    }
    let df = d as f64;
    let correction = 2.0 / std::f64::consts::E * df.ln() / df;
    Ok(alpha_fm(d)? - correction * correction)
}

/// `(2/d)(log d - log log d + 1 - log 2)`, the asymptotic lower bound on the
/// independence ratio with its `o(1)` dropped. Reference value only.
pub fn alpha_lower_ref(d: u32) -> Result<f64> {
    check_degree(d, 3)?;
    Ok(lower_ref_formula(d as f64))
}

pub(crate) fn lower_ref_formula(d: f64) -> f64 {
    2.0 / d * (d.ln() - d.ln().ln() + 1.0 - std::f64::consts::LN_2)
}

/// Induced average degree ceiling: the root in `t` of `F(d, x, .)` on `[x, 1]`.
pub fn g(d: u32, x: f64) -> Result<f64> {
    check_degree(d, 3)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("x", x, "(0, 1)"));
    }
    bisect(x, 1.0, ROOT_TOL, |t| F(d, x, t))
}

/// Inverse of [`g`], found by bisection on `x` using monotonicity of `g`.
pub fn g_inv(d: u32, t: f64) -> Result<f64> {
    check_degree(d, 3)?;
    let lower = 2.0 / d as f64;
    if !(t > lower && t < 1.0) {
        return Err(domain("t", t, "(2/d, 1)"));
    }
    bisect(f64::MIN_POSITIVE, 1.0 - 1e-15, ROOT_TOL, |x| {
        Ok(g(d, x)? - t)
    })
}

/// Density `1 - d/(2k)` of the centerless vertices of a k-star decomposition.
pub fn alpha_dk(d: u32, k: u32) -> Result<f64> {
    if 2 * k <= d {
        return Err(domain("k", k as f64, "k > d/2"));
    }
    Ok(1.0 - d as f64 / (2.0 * k as f64))
}

/// Inverse of `k -> alpha_dk(d, k)`: `d / (2 (1 - alpha))`.
pub fn kappa(d: u32, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1)"));
    }
    Ok(d as f64 / (2.0 * (1.0 - alpha)))
}

/// Where the independence ratio used for thresholds came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// Supplied by the user in an alpha table.
    Table,
    /// [`alpha_fc_estimate`]; carries an uncontrolled error.
    Estimate,
    /// [`alpha_fm`], an upper bound; used only when nothing better exists.
    FirstMoment,
}

impl fmt::Display for AlphaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaSource::Table => "table",
            AlphaSource::Estimate => "estimate",
            AlphaSource::FirstMoment => "first_moment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub d: u32,
    pub alpha_fm: f64,
    pub alpha_source: AlphaSource,
    pub alpha_star: f64,
    pub kappa_star: f64,
    pub k_ind: u64,
    pub frac_part: f64,
    pub frac_cond_met: bool,
    pub alpha_lower_ref: f64,
}

/// Relative distance below which `kappa_star` counts as an integer.
pub const INTEGRAL_TOL: f64 = 1e-12;

/// `(log d)^3 / d`, the fractional-part margin for certifying `k = k_ind`.
pub fn frac_threshold(d: u32) -> f64 {
    let l = (d as f64).ln();
    l * l * l / d as f64
}

pub fn threshold_report(d: u32, alpha_star: f64, source: AlphaSource) -> Result<ThresholdReport> {
    check_degree(d, 3)?;
    if !(alpha_star > 0.0 && alpha_star < 0.5) {
        return Err(domain("alpha_star", alpha_star, "(0, 1/2)"));
    }
    let kappa_star = kappa(d, alpha_star)?;
    // kappa_star within rounding of an integer is reported as that integer
    // with frac_part = 0, which never meets the condition.
    let nearest = kappa_star.round();
    let (k_ind, frac_part) = if (kappa_star - nearest).abs() <= INTEGRAL_TOL * nearest.max(1.0) {
        (nearest, 0.0)
    } else {
        (kappa_star.floor(), kappa_star - kappa_star.floor())
    };
    Ok(ThresholdReport {
        d,
        alpha_fm: alpha_fm(d)?,
        alpha_source: source,
        alpha_star,
        kappa_star,
        k_ind: k_ind as u64,
        frac_part,
        frac_cond_met: frac_part > frac_threshold(d),
        alpha_lower_ref: alpha_lower_ref(d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;
    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn h_basic_values() {
        assert_eq!(h(1.0).unwrap(), 0.0);
        assert_eq!(h(0.0).unwrap(), 0.0);
        assert!((h(1.0 / E).unwrap() - 1.0 / E).abs() < 1e-15);
    }

    #[test]
    fn h_clamps_tiny_negatives_and_rejects_the_rest() {
        assert_eq!(h(-5e-13).unwrap(), 0.0);
        assert!(h(-1e-9).is_err());
        assert!(h(1.0 + 1e-9).is_err());
        assert!(h(f64::NAN).is_err());
    }

    #[test]
    fn shannon_entropy_examples() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - LN2).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let want = h(0.3).unwrap() + h(0.7).unwrap();
        assert!((shannon_entropy(&[0.3, 0.7]).unwrap() - want).abs() < 1e-15);
        assert!(shannon_entropy(&[0.6, 0.6]).is_err());
        assert!(shannon_entropy(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn label_distribution_invariants() {
        assert!(LabelDistribution::independent_set(0.2).is_ok());
        // asymmetric
        assert!(LabelDistribution::from_edge_probs(vec![vec![0.5, 0.3], vec![0.2, 0.0]]).is_err());
        // marginal mismatch
        assert!(
            LabelDistribution::new(vec![0.4, 0.6], vec![vec![0.25, 0.25], vec![0.25, 0.25]])
                .is_err()
        );
        assert!(LabelDistribution::independent_set(0.6).is_err());
    }

    #[test]
    fn first_moment_rate_examples() {
        let single = LabelDistribution::new(vec![1.0], vec![vec![1.0]]).unwrap();
        assert_eq!(first_moment_rate(&single, 3).unwrap(), 0.0);

        let product =
            LabelDistribution::new(vec![0.5, 0.5], vec![vec![0.25, 0.25], vec![0.25, 0.25]])
                .unwrap();
        assert!((first_moment_rate(&product, 3).unwrap() - LN2).abs() < 1e-14);

        for &d in &[3, 7, 50] {
            for i in 1..50 {
                let a = i as f64 / 100.0;
                let dist = LabelDistribution::independent_set(a).unwrap();
                let rate = first_moment_rate(&dist, d).unwrap();
                assert!((rate - phi(d, a).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_matches_extended_precision() {
        // mpmath, 50 digits
        let want = 0.308_381_842_692_368_93;
        assert!((phi(3, 0.1).unwrap() - want).abs() < 1e-12);
        assert_eq!(phi(9, 0.0).unwrap(), 0.0);
        assert!(phi(3, 0.51).is_err());
    }

    #[test]
    fn phi_hat_examples() {
        // mpmath, 50 digits
        let want = -0.001_911_724_534_682_704_7;
        assert!((phi_hat(10, 0.3, 0.01, 0.5).unwrap() - want).abs() < 1e-12);
        for &tau in &[0.0, 0.3, 1.0] {
            assert_eq!(phi_hat(12, 0.0, 0.0, tau).unwrap(), 0.0);
            let diff = phi_hat(12, 0.2, 0.0, tau).unwrap() - phi(12, 0.2).unwrap();
            assert!(diff.abs() < 1e-12);
        }
        // alpha - tau beta far below zero
        assert!(phi_hat(10, 0.01, 0.5, 1.0).is_err());
    }

    #[test]
    fn coupling_gap_examples() {
        assert!((coupling_entropy_gap(0.5, 0.5, 0.0).unwrap() - LN2).abs() < 1e-15);
        let (a1, a2) = (0.2, 0.35);
        let eq = coupling_entropy_gap(a1, a2, a1 * a2 / (a1 + a2)).unwrap();
        assert!(eq.abs() < 1e-12);
        assert!(coupling_entropy_gap(0.2, 0.3, 0.25).is_err());
        assert!(coupling_entropy_gap(0.0, 0.3, 0.0).is_err());
    }

    #[test]
    fn f_matches_extended_precision() {
        // mpmath, 50 digits
        let want = 0.106_443_949_425_013_237_89;
        assert!((F(6, 0.2, 0.5).unwrap() - want).abs() < 1e-12);
        assert!(F(6, 0.5, 0.2).is_err());
    }

    #[test]
    fn f_is_decreasing_in_t() {
        for &d in &[4, 10, 100] {
            for &x in &[0.05, 0.3, 0.7] {
                let mut prev = F(d, x, x).unwrap();
                for i in 1..=100 {
                    let t = x + (1.0 - x) * i as f64 / 100.0;
                    let cur = F(d, x, t).unwrap();
                    assert!(cur < prev, "d={d} x={x} t={t}");
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn alpha_fm_is_a_root() {
        for d in 3..=50 {
            let a = alpha_fm(d).unwrap();
            assert!(a > 0.0 && a < 0.5);
            assert!(phi(d, a).unwrap().abs() <= 1e-10);
        }
        assert!(alpha_fm(2).is_err());
    }

    #[test]
    fn alpha_fm_three_matches_grid_scan() {
        // Independent oracle: first sign change of phi_3 on a 1e-7 grid.
        let step = 1e-7;
        let mut i = 1u64;
        let mut prev = phi(3, step).unwrap();
        let bracket = loop {
            i += 1;
            let cur = phi(3, i as f64 * step).unwrap();
            if prev > 0.0 && cur <= 0.0 {
                break ((i - 1) as f64 * step, i as f64 * step);
            }
            prev = cur;
        };
        let a = alpha_fm(3).unwrap();
        assert!(
            a >= bracket.0 - 1e-12 && a <= bracket.1 + 1e-12,
            "{a} {bracket:?}"
        );
        // mpmath
        assert!((a - 0.459_062_115_137_899_37).abs() < 1e-11);
    }

    #[test]
    fn alpha_fc_estimate_arithmetic() {
        let d = 100.0f64;
        let want = alpha_fm(100).unwrap() - (2.0 / E * d.ln() / d).powi(2);
        assert!((alpha_fc_estimate(100).unwrap() - want).abs() < 1e-12);
        for d in 20..200 {
            assert!(alpha_fc_estimate(d).unwrap() < alpha_fm(d).unwrap());
        }
        assert!(alpha_fc_estimate(19).is_err());
    }

    #[test]
    fn alpha_lower_ref_arithmetic() {
        let ee = E.powf(E);
        let want = 2.0 / ee * (E - 1.0 + 1.0 - LN2);
        assert!((lower_ref_formula(ee) - want).abs() < 1e-14);

        let d = 1000.0f64;
        let want = 2.0 / d * (d.ln() - d.ln().ln() + 1.0 - LN2);
        assert!((alpha_lower_ref(1000).unwrap() - want).abs() < 1e-12);
        for d in (100..5000).step_by(37) {
            assert!(alpha_lower_ref(d).unwrap() <= alpha_fm(d).unwrap() + 1e-9);
        }
    }

    #[test]
    fn g_and_inverse() {
        for &d in &[10, 100, 1000] {
            let mut prev = 0.0;
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let t = g(d, x).unwrap();
                assert!(t > prev);
                assert!(F(d, x, t).unwrap().abs() < 1e-9);
                let back = g_inv(d, t).unwrap();
                assert!((back - x).abs() < 1e-9, "d={d} x={x} back={back}");
                prev = t;
            }
        }
        assert!(g(10, 0.0).is_err());
        assert!(g(10, 1.0).is_err());
        assert!(g_inv(10, 0.2).is_err());
        assert!(g_inv(10, 1.0).is_err());
    }

    #[test]
    fn g_approaches_one_at_the_right_end() {
        for &d in &[10, 100, 1000] {
            assert!((g(d, 1.0 - 1e-6).unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn kappa_inverts_alpha_dk() {
        assert!((alpha_dk(4, 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(alpha_dk(4, 2).is_err());
        for d in 3..60u32 {
            for k in (d / 2 + 1)..(2 * d) {
                let back = kappa(d, alpha_dk(d, k).unwrap()).unwrap();
                assert!((back - k as f64).abs() < 1e-12, "d={d} k={k}");
            }
        }
    }

    /// kappa(d, alpha_dk(d, k)) in exact rationals: alpha = (2k - d) / 2k,
    /// 1 - alpha = d / 2k, kappa = d / (2 * d / 2k).
    fn kappa_of_alpha_dk_exact(d: u128, k: u128) -> (u128, u128) {
        let (an, ad) = (2 * k - d, 2 * k);
        let (one_minus_n, one_minus_d) = (ad - an, ad);
        // d / (2 * one_minus) = d * one_minus_d / (2 * one_minus_n)
        let (num, den) = (d * one_minus_d, 2 * one_minus_n);
        let gcd = |mut a: u128, mut b: u128| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let g = gcd(num, den);
        (num / g, den / g)
    }

    #[test]
    fn kappa_inverts_alpha_dk_exactly() {
        for &d in &[3u128, 10, 999, 2 * 500_000] {
            for k in [d / 2 + 1, d / 2 + 7, 1_000_000]
                .into_iter()
                .filter(|&k| 2 * k > d)
            {
                assert_eq!(kappa_of_alpha_dk_exact(d, k), (k, 1));
            }
        }
    }

    #[test]
    fn threshold_report_fields() {
        let d = 1000;
        // mpmath
        assert!((frac_threshold(d) - 0.329_617_931_951_543_14).abs() < 1e-12);
        let r = threshold_report(d, 0.01, AlphaSource::Estimate).unwrap();
        assert!((r.kappa_star - 1000.0 / (2.0 * 0.99)).abs() < 1e-12);
        assert_eq!(r.k_ind, 505);
        assert!((r.frac_part - (r.kappa_star - 505.0)).abs() < 1e-15);
        // 0.0505 < 0.3296
        assert!(!r.frac_cond_met);
        let r = threshold_report(d, 1.0 - 1000.0 / 1011.0, AlphaSource::Table).unwrap();
        assert_eq!(r.k_ind, 505);
        assert!((r.frac_part - 0.5).abs() < 1e-9);
        assert!(r.frac_cond_met);

        // alpha = 1/3 at d = 4 gives kappa exactly 3
        let r = threshold_report(4, alpha_dk(4, 3).unwrap(), AlphaSource::Table).unwrap();
        assert_eq!(r.k_ind, 3);
        assert_eq!(r.frac_part, 0.0);
        assert!(!r.frac_cond_met);
    }

    #[test]
    fn deterministic_bits() {
        let a = alpha_fm(123).unwrap();
        let b = alpha_fm(123).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(g(77, 0.3).unwrap().to_bits(), g(77, 0.3).unwrap().to_bits());
    }
}
