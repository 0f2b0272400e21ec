use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::ResidualKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgppaParams {
    /// Relaxation factor `γ ∈ (0, 2)`.
    pub gamma: f64,
    /// Target linear rate `ρ ∈ (0, 1)`.
    pub rho: f64,
    pub rho_delta: f64,
    pub rho_eta: f64,
    pub rho_sigma: f64,
    /// Decay exponent `ς > 1` of the inner tolerances within a stage.
    pub varsigma: f64,
    pub eta0: f64,
    pub epsilon: f64,
    pub residual_kind: ResidualKind,
    /// Replaces `α/‖A‖_F` when set.
    pub sigma0: Option<f64>,
    /// Test the residual of the current iterate before computing the next one.
    pub check_residual_first: bool,
    /// Wall-clock limit in seconds.
    pub max_time: Option<f64>,
    pub max_stages: usize,
    /// Cap on the total number of proximal steps.
    pub max_steps: usize,
}

impl Default for AgppaParams {
    fn default() -> Self {
        AgppaParams {
            gamma: 1.0,
            rho: 0.7,
            rho_delta: 0.9,
            rho_eta: 0.9,
            rho_sigma: 5.0,
            varsigma: 1.1,
            eta0: 1e16,
            epsilon: 1e-6,
            residual_kind: ResidualKind::E2,
            sigma0: None,
            check_residual_first: false,
            max_time: None,
            max_stages: 60,
            max_steps: 100_000,
        }
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

impl AgppaParams {
    pub fn validate(&self) -> Result<()> {
        let open = |v: f64, lo: f64, hi: f64| v > lo && v < hi;
        if !open(self.gamma, 0.0, 2.0) {
            return Err(invalid("gamma", format!("{} not in (0, 2)", self.gamma)));
        }
        if !open(self.rho, 0.0, 1.0) {
            return Err(invalid("rho", format!("{} not in (0, 1)", self.rho)));
        }
        if !open(self.rho_delta, 0.0, 1.0) {
            return Err(invalid("rho_delta", format!("{} not in (0, 1)", self.rho_delta)));
        }
        if !open(self.rho_eta, 0.0, 1.0) {
            return Err(invalid("rho_eta", format!("{} not in (0, 1)", self.rho_eta)));
        }
        if !(self.rho_sigma > 1.0 && self.rho_sigma.is_finite()) {
            return Err(invalid("rho_sigma", format!("{} must exceed 1", self.rho_sigma)));
        }
        if !(self.varsigma > 1.0 && self.varsigma.is_finite()) {
            return Err(invalid("varsigma", format!("{} must exceed 1", self.varsigma)));
        }
        if !(self.eta0 > 0.0) {
            return Err(invalid("eta0", "must be positive"));
        }
        if !(self.epsilon > 0.0) {
            return Err(invalid("epsilon", "must be positive"));
        }
        if let Some(s) = self.sigma0 {
            if !(s > 0.0 && s.is_finite()) {
                return Err(invalid("sigma0", "must be positive and finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub delta: f64,
    pub alpha: f64,
    /// Constant of the checking condition.
    pub c: f64,
    pub sigma0: f64,
}

/// Linear rate of the relaxed inexact proximal step when `σ ≥ κα`:
///
/// ```text
/// (1/(1−δ))·( √(1 − min{γ, 2γ−γ²}·α²/(α²+1)) + δ·(min{γ,1}/√(α²+1) + 1) )
/// ```
pub fn rho_of(alpha: f64, delta: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(invalid("alpha", "must be positive"));
    }
    if !(0.0..0.5).contains(&delta) {
        return Err(invalid("delta", format!("{delta} not in [0, 1/2)")));
    }
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(invalid("gamma", format!("{gamma} not in (0, 2)")));
    }
    Ok(rho_unchecked(alpha, delta, gamma))
}

fn rho_unchecked(alpha: f64, delta: f64, gamma: f64) -> f64 {
    let a2 = alpha * alpha;
    let g = gamma.min(2.0 * gamma - gamma * gamma);
    let s = (a2 + 1.0).sqrt();
    ((1.0 - g * a2 / (a2 + 1.0)).sqrt() + delta * (gamma.min(1.0) / s + 1.0)) / (1.0 - delta)
}

pub const ALPHA_BRACKET: (f64, f64) = (1e-8, 1e12);

/// Solves `rho_of(α; δ, γ) = ρ` by bisection on [`ALPHA_BRACKET`].
pub fn solve_alpha(rho: f64, delta: f64, gamma: f64) -> Result<f64> {
    let (mut lo, mut hi) = ALPHA_BRACKET;
    rho_of(lo, delta, gamma)?;
    let f = |a: f64| rho_unchecked(a, delta, gamma) - rho;
    if f(lo) < 0.0 || f(hi) > 0.0 {
        return Err(Error::BracketFailure { lo, hi, rho });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // both ends bracket the root to within one ulp; take the one with the smaller residual
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

/// `δ = ϱ_δ(ρ − √(1 − min{γ, 2γ−γ²}))/(1 + ρ)`.
pub fn derive_delta(params: &AgppaParams) -> Result<f64> {
    let g = params.gamma.min(2.0 * params.gamma - params.gamma * params.gamma);
    let floor = (1.0 - g).sqrt();
    if !(params.rho > floor) {
        return Err(invalid("rho", format!("{} must exceed √(1 − min{{γ, 2γ−γ²}}) = {floor}", params.rho)));
    }
    Ok(params.rho_delta * (params.rho - floor) / (1.0 + params.rho))
}

/// `C = (1+δ)/((1−δ)(1 − 1/√(α²+1)))`.
pub fn check_constant(delta: f64, alpha: f64) -> f64 {
    (1.0 + delta) / ((1.0 - delta) * (1.0 - 1.0 / (alpha * alpha + 1.0).sqrt()))
}

pub fn derive_constants(params: &AgppaParams, frob_norm: f64) -> Result<DerivedConstants> {
    params.validate()?;
    let delta = derive_delta(params)?;
    let alpha = solve_alpha(params.rho, delta, params.gamma)?;
    let c = check_constant(delta, alpha);
    let sigma0 = match params.sigma0 {
        Some(s) => s,
        None if frob_norm > 0.0 => alpha / frob_norm,
        None => alpha,
    };
    Ok(DerivedConstants { delta, alpha, c, sigma0 })
}

/// Closed-form parameter schedules: `σ_s = σ₀ϱ_σ^s` and `η_{s,t} = η₀ϱ_η^s(1+t)^{−ς}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub sigma0: f64,
    pub rho_sigma: f64,
    pub eta0: f64,
    pub rho_eta: f64,
    pub varsigma: f64,
}

impl Schedule {
    pub fn new(params: &AgppaParams, derived: &DerivedConstants) -> Self {
        Schedule {
            sigma0: derived.sigma0,
            rho_sigma: params.rho_sigma,
            eta0: params.eta0,
            rho_eta: params.rho_eta,
            varsigma: params.varsigma,
        }
    }

    pub fn sigma(&self, s: usize) -> f64 {
        self.sigma0 * self.rho_sigma.powi(s as i32)
    }

    pub fn eta(&self, s: usize, t: usize) -> f64 {
        self.eta0 * self.rho_eta.powi(s as i32) * (1.0 + t as f64).powf(-self.varsigma)
    }
}

/// The checkable linear-decrease test. `history` holds the step norms `‖z^{j+1} − z^j‖`
/// for `j < t` of the current stage and `new_norm` is the one for `j = t`. Returns `true`
/// (σ too small) iff `new_norm > C·min_{0≤j≤t} ρ^{t−j}·‖z^{j+1} − z^j‖`.
pub fn checking_condition(history: &[f64], new_norm: f64, c: f64, rho: f64) -> bool {
    let t = history.len();
    let mut m = new_norm;
    for (j, &h) in history.iter().enumerate() {
        m = m.min(rho.powi((t - j) as i32) * h);
    }
    new_norm > c * m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_hand_values() {
        assert!(rho_of(1e6, 0.0, 1.0).unwrap() <= 2e-6);
        assert!((rho_of(1.0, 0.0, 1.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let want = (std::f64::consts::FRAC_1_SQRT_2 + 0.1 * (std::f64::consts::FRAC_1_SQRT_2 + 1.0)) / 0.9;
        assert!((rho_of(1.0, 0.1, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.975353).abs() < 1e-6);
        assert!(rho_of(0.0, 0.1, 1.0).is_err());
        assert!(rho_of(1.0, 0.5, 1.0).is_err());
        assert!(rho_of(1.0, 0.1, 2.0).is_err());
    }

    #[test]
    fn default_constants() {
        let d = derive_constants(&AgppaParams::default(), 1.0).unwrap();
        assert!((d.delta - 0.9 * 0.7 / 1.7).abs() < 1e-15);
        assert!((d.delta - 0.370588).abs() < 1e-6);
        assert!((rho_of(d.alpha, d.delta, 1.0).unwrap() - 0.7).abs() <= 1e-10);
        assert_eq!(d.sigma0, d.alpha);
    }

    #[test]
    fn closed_form_alpha() {
        let a = solve_alpha(std::f64::consts::FRAC_1_SQRT_2, 0.0, 1.0).unwrap();
        assert!((a - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn infeasible_rho_is_rejected() {
        let p = AgppaParams { gamma: 0.5, rho: 0.5, ..AgppaParams::default() };
        // √(1 − 0.5) ≈ 0.707 > 0.5
        assert!(derive_constants(&p, 1.0).is_err());
    }

    #[test]
    fn checking_condition_cases() {
        assert!(!checking_condition(&[], 3.0, 2.0, 0.7));
        assert!(!checking_condition(&[1.0], 7.0, 10.0, 0.7));
        assert!(checking_condition(&[1.0], 7.1, 10.0, 0.7));
        // exact geometric decay never fires; ρ = 1/2 keeps the products exact at C = 1
        let rho: f64 = 0.5;
        let h: Vec<f64> = (0..30).map(|j| rho.powi(j)).collect();
        for t in 0..29 {
            for c in [1.0, 2.0, 10.0] {
                assert!(!checking_condition(&h[..t], h[t], c, rho));
            }
        }
        let rho: f64 = 0.7;
        let h: Vec<f64> = (0..30).map(|j| rho.powi(j)).collect();
        for t in 0..29 {
            for c in [1.0 + 1e-12, 2.0, 10.0] {
                assert!(!checking_condition(&h[..t], h[t], c, rho));
            }
        }
    }

    #[test]
    fn schedule_closed_forms() {
        let s = Schedule { sigma0: 0.3, rho_sigma: 5.0, eta0: 1e16, rho_eta: 0.9, varsigma: 1.1 };
        assert_eq!(s.sigma(0), 0.3);
        assert_eq!(s.sigma(2), 0.3 * 25.0);
        assert_eq!(s.eta(0, 0), 1e16);
        assert_eq!(s.eta(1, 1), 1e16 * 0.9 * 2f64.powf(-1.1));
    }
}

/// Index of the smallest residual, earliest on ties: the restart point after a violation.
pub fn restart_index(residuals: &[f64]) -> usize {
    let mut k = 0;
    for (j, &r) in residuals.iter().enumerate() {
        if r < residuals[k] {
            k = j;
        }
    }
    k
}
