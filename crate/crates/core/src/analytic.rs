//! Closed-form CDFs and average block error rates.
//!
//! Every SINR in the system is a monotone map of an effective gain
//! `X = |h|² + η² q²`, with `|h|²` exponential and `q` approximated by a gamma
//! law. The CDF of `X` is
//!
//! ```text
//! F(t) = ∫_0^{√t/η} (1 - exp(-(t - η² y²)/λ)) f_q(y) dy,
//! f_q(y) = y^κ exp(-y/b) / (b^(κ+1) Γ(κ+1)),
//! ```
//!
//! evaluated with a `U`-point Gauss–Chebyshev rule on the substitution
//! `y = ζ_u(t) = (√t / (2η)) (ξ_u + 1)`.
//!
//! Expanding the bracket gives the familiar two-term form
//! `P(κ+1, √t/(ηb)) - e^{-t/λ} Υ(t)` ([`effective_gain_cdf_two_term`]). The
//! two terms agree to many digits once `t` is small, so the difference is
//! dominated by quadrature error at high SNR and can even turn negative.
//! [`effective_gain_cdf`] integrates the nonnegative bracket directly and
//! keeps full relative accuracy in the tail. Note the density normalization
//! `b^(κ+1)`; the gamma CDF `P(κ+1, y/b)` fixes it.
//!
//! With the linearized BLER, the average `δ√m ∫_v^u F_γ(t) dt` under a
//! midpoint rule is exactly `F_γ(β)`, because `δ√m (u - v) = 1` and
//! `(u + v)/2 = β`. [`AnalyticModel::avg_psi`] therefore evaluates one CDF.

use crate::channel::{gamma_fit, GammaFit, Link, RelayDirectVariance, SystemConfig};
use crate::error::{Error, Result};
use crate::fbl::CodeSpec;
use crate::numerics::{
    chebyshev_rule, clamp_probability, reg_lower_inc_gamma, stable_exp_combine, QuadratureRule,
};

/// CDF of `|h|² + η² q²` at `t`.
pub fn effective_gain_cdf(
    t: f64,
    direct_var: f64,
    fit: &GammaFit,
    eta: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_cdf_args(t, direct_var, eta)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(1.0);
    }
    let scale = t.sqrt() / (2.0 * eta);
    let shape = fit.shape();
    let norm = scale.ln() - shape * fit.b.ln() - libm::lgamma(shape);
    let mut sum = 0.0;
    for (xi, w) in rule.iter() {
        let zeta = scale * (xi + 1.0);
        let excess = ((t - eta * eta * zeta * zeta) / direct_var).max(0.0);
        let bracket = -(-excess).exp_m1();
        if bracket <= 0.0 || zeta <= 0.0 {
            continue;
        }
        sum += stable_exp_combine(&[
            norm,
            w.ln(),
            fit.kappa * zeta.ln(),
            -zeta / fit.b,
            bracket.ln(),
        ]);
    }
    Ok(clamp_probability(sum))
}

/// The same CDF written as incomplete gamma minus the Chebyshev-evaluated
/// correction term.
///
/// Agrees with [`effective_gain_cdf`] to the quadrature error in the bulk of
/// the distribution, but loses all accuracy where `F(t)` is small.
pub fn effective_gain_cdf_two_term(
    t: f64,
    direct_var: f64,
    fit: &GammaFit,
    eta: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_cdf_args(t, direct_var, eta)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let root = t.sqrt();
    let head = reg_lower_inc_gamma(fit.shape(), root / (eta * fit.b))?;
    let scale = root / (2.0 * eta);
    let norm = scale.ln() - fit.shape() * fit.b.ln() - libm::lgamma(fit.shape());
    let correction: f64 = rule
        .iter()
        .map(|(xi, w)| {
            let zeta = scale * (xi + 1.0);
            stable_exp_combine(&[
                norm,
                w.ln(),
                fit.kappa * zeta.ln(),
                -(t - eta * eta * zeta * zeta) / direct_var,
                -zeta / fit.b,
            ])
        })
        .sum();
    Ok(clamp_probability(head - correction))
}

fn check_cdf_args(t: f64, direct_var: f64, eta: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::domain("effective_gain_cdf", t, "t >= 0"));
    }
    if !(direct_var > 0.0) {
        return Err(Error::domain(
            "effective_gain_cdf",
            direct_var,
            "direct variance > 0",
        ));
    }
    if !(eta > 0.0) {
        return Err(Error::domain("effective_gain_cdf", eta, "eta > 0"));
    }
    Ok(())
}

/// The four SINRs that enter the average BLERs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinrTag {
    /// CU decoding its own message after SIC.
    Cc,
    /// CU decoding the CEU message.
    Ce,
    /// CEU decoding its message in the direct phase.
    E1,
    /// CEU decoding its message from the relay.
    E2,
}

/// An SINR, optionally doubled (`2γ`, as used by the MRC bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SinrKind {
    pub tag: SinrTag,
    pub doubled: bool,
}

impl SinrKind {
    pub const CC: SinrKind = SinrKind::new(SinrTag::Cc);
    pub const CE: SinrKind = SinrKind::new(SinrTag::Ce);
    pub const E1: SinrKind = SinrKind::new(SinrTag::E1);
    pub const E2: SinrKind = SinrKind::new(SinrTag::E2);

    pub const fn new(tag: SinrTag) -> Self {
        SinrKind {
            tag,
            doubled: false,
        }
    }

    pub const fn doubled(self) -> Self {
        SinrKind {
            tag: self.tag,
            doubled: true,
        }
    }

    pub const ALL: [SinrKind; 6] = [
        Self::CC,
        Self::CE,
        Self::E1,
        Self::E2,
        Self::E1.doubled(),
        Self::E2.doubled(),
    ];
}

/// Closed-form averages for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBler {
    pub cu: f64,
    pub ceu_sc: f64,
    /// Lower bound on the MRC average BLER.
    pub ceu_mrc: f64,
}

/// Evaluator holding the quadrature rule and the three gamma fits.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    cfg: SystemConfig,
    rule: QuadratureRule,
    fit_c: GammaFit,
    fit_e: GammaFit,
    fit_ce: GammaFit,
}

impl AnalyticModel {
    /// Fails for invalid configurations, for `R = 0` and for `η = 0`, where the
    /// gamma fit does not exist.
    pub fn new(cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.elements == 0 {
            return Err(Error::InvalidArgument(
                "closed forms need at least one RIS element per zone".into(),
            ));
        }
        if cfg.eta_c == 0.0 || cfg.eta_e == 0.0 {
            return Err(Error::InvalidArgument(
                "closed forms need nonzero reflection coefficients".into(),
            ));
        }
        Ok(AnalyticModel {
            cfg: cfg.clone(),
            rule: chebyshev_rule(cfg.quad_order)?,
            fit_c: gamma_fit(cfg.elements, cfg.lambda_gc, cfg.lambda_rc)?,
            fit_e: gamma_fit(cfg.elements, cfg.lambda_ge, cfg.lambda_re)?,
            fit_ce: gamma_fit(cfg.elements, cfg.lambda_gce, cfg.lambda_rce)?,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// The gamma fit of a link's cascade.
    pub fn fit(&self, link: Link) -> GammaFit {
        match link {
            Link::Cu => self.fit_c,
            Link::CeuDirect => self.fit_e,
            Link::Relay => self.fit_ce,
        }
    }

    /// Maps an SINR level to the effective-gain threshold, `None` when the
    /// level can never be exceeded (the CDF saturates at 1).
    pub fn gain_threshold(&self, omega: f64, kind: SinrKind) -> Option<f64> {
        let c = &self.cfg;
        let w = if kind.doubled { 0.5 * omega } else { omega };
        match kind.tag {
            SinrTag::Cc => Some(w / (c.alpha_c * c.rho_s)),
            SinrTag::Ce | SinrTag::E1 => {
                if w >= c.alpha_e / c.alpha_c {
                    None
                } else {
                    Some(w / (c.rho_s * (c.alpha_e - c.alpha_c * w)))
                }
            }
            SinrTag::E2 => Some(w / c.rho_c),
        }
    }

    /// Direct variance, gamma fit and reflection coefficient behind an SINR.
    fn gain_law(&self, tag: SinrTag) -> (f64, GammaFit, f64) {
        let c = &self.cfg;
        match tag {
            SinrTag::Cc | SinrTag::Ce => (c.lambda_c, self.fit_c, c.eta_c),
            SinrTag::E1 => (c.lambda_e, self.fit_e, c.eta_e),
            SinrTag::E2 => {
                let var = match c.relay_direct_variance {
                    RelayDirectVariance::LambdaCe => c.lambda_ce,
                    RelayDirectVariance::LambdaE => c.lambda_e,
                };
                (var, self.fit_ce, c.eta_e)
            }
        }
    }

    /// CDF of the SINR `kind` (of `2γ` when doubled) at `omega`.
    pub fn sinr_cdf(&self, omega: f64, kind: SinrKind) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::domain("sinr_cdf", omega, "omega >= 0"));
        }
        let Some(t) = self.gain_threshold(omega, kind) else {
            return Ok(1.0);
        };
        let (var, fit, eta) = self.gain_law(kind.tag);
        effective_gain_cdf(t, var, &fit, eta, &self.rule)
    }

    /// Average linearized BLER `E[Ψ(γ)]` (or `E[Ψ(2γ)]`) for `code`.
    pub fn avg_psi(&self, kind: SinrKind, code: CodeSpec) -> f64 {
        self.sinr_cdf(code.threshold(), kind)
            .expect("rate threshold is nonnegative")
    }

    /// `E[ε_ce]`, the probability the CU fails to decode the CEU message.
    pub fn expected_ce_error(&self) -> f64 {
        self.avg_psi(SinrKind::CE, self.cfg.code_e)
    }

    /// CU average BLER, `max(E[ε_cc], E[ε_ce])`.
    pub fn avg_bler_cu(&self) -> f64 {
        let cc = self.avg_psi(SinrKind::CC, self.cfg.code_c);
        let ce = self.expected_ce_error();
        cc.max(ce)
    }

    /// CEU average BLER with selection combining.
    pub fn avg_bler_ceu_sc(&self) -> f64 {
        let code = self.cfg.code_e;
        let ece = self.expected_ce_error();
        let e1 = self.avg_psi(SinrKind::E1, code);
        let e2 = self.avg_psi(SinrKind::E2, code);
        clamp_probability(ece * e1 + (1.0 - ece) * e1 * e2)
    }

    /// Lower bound on the CEU average BLER with maximum ratio combining.
    pub fn avg_bler_ceu_mrc(&self) -> f64 {
        let code = self.cfg.code_e;
        let ece = self.expected_ce_error();
        let e1 = self.avg_psi(SinrKind::E1, code);
        let e1x2 = self.avg_psi(SinrKind::E1.doubled(), code);
        let e2x2 = self.avg_psi(SinrKind::E2.doubled(), code);
        clamp_probability(ece * e1 + (1.0 - ece) * e1x2 * e2x2)
    }

    pub fn evaluate(&self) -> AnalyticBler {
        AnalyticBler {
            cu: self.avg_bler_cu(),
            ceu_sc: self.avg_bler_ceu_sc(),
            ceu_mrc: self.avg_bler_ceu_mrc(),
        }
    }
}

pub fn sinr_cdf(omega: f64, kind: SinrKind, cfg: &SystemConfig) -> Result<f64> {
    AnalyticModel::new(cfg)?.sinr_cdf(omega, kind)
}

pub fn avg_psi(kind: SinrKind, code: CodeSpec, cfg: &SystemConfig) -> Result<f64> {
    Ok(AnalyticModel::new(cfg)?.avg_psi(kind, code))
}

pub fn avg_bler_cu(cfg: &SystemConfig) -> Result<f64> {
    Ok(AnalyticModel::new(cfg)?.avg_bler_cu())
}

pub fn avg_bler_ceu_sc(cfg: &SystemConfig) -> Result<f64> {
    Ok(AnalyticModel::new(cfg)?.avg_bler_ceu_sc())
}

pub fn avg_bler_ceu_mrc(cfg: &SystemConfig) -> Result<f64> {
    Ok(AnalyticModel::new(cfg)?.avg_bler_ceu_mrc())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiversityScheme {
    /// Reported as a lower bound.
    Cu,
    CeuSc,
    CeuMrc,
}

/// High-SNR diversity order implied by the gamma shape `κ + 1`.
pub fn diversity_order(elements: u32, scheme: DiversityScheme) -> Result<f64> {
    // variances do not enter κ
    let fit = gamma_fit(elements, 1.0, 1.0)?;
    let half = fit.shape() / 2.0;
    Ok(match scheme {
        DiversityScheme::Cu | DiversityScheme::CeuSc => half,
        DiversityScheme::CeuMrc => half * half,
    })
}
