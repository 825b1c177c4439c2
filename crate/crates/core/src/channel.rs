//! System parameters, fading generation and the gamma fit of the cascaded
//! RIS amplitude.
//!
//! With phases aligned per element, each cascaded link reduces to the
//! amplitude sum `q = Σ |g_r| |h_r|` and the effective power gain of a link is
//! `|h|² + η² q²`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::fbl::CodeSpec;
use crate::numerics::reg_lower_inc_gamma;

/// Which variance the relay-hop CDF uses for its direct component.
///
/// The relay hop's direct channel is `h_ce`, but the printed CDF of that hop
/// carries `λ_e`. The default follows the channel that is actually sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelayDirectVariance {
    #[default]
    LambdaCe,
    LambdaE,
}

/// Scenario parameters. SNRs are linear power ratios (`P / σ²`).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub rho_s: f64,
    pub rho_c: f64,
    pub alpha_c: f64,
    pub alpha_e: f64,
    pub code_c: CodeSpec,
    pub code_e: CodeSpec,
    /// Elements per RIS zone.
    pub elements: u32,
    pub eta_c: f64,
    pub eta_e: f64,
    pub lambda_c: f64,
    pub lambda_e: f64,
    pub lambda_ce: f64,
    pub lambda_rc: f64,
    pub lambda_gc: f64,
    pub lambda_re: f64,
    pub lambda_ge: f64,
    pub lambda_rce: f64,
    pub lambda_gce: f64,
    pub quad_order: usize,
    pub relay_direct_variance: RelayDirectVariance,
}

/// Quadrature order shipped by default; see the convergence test in `analytic`.
pub const DEFAULT_QUAD_ORDER: usize = 64;

/// BS-to-relay transmit power ratio of the reference setup (`P_S = 10 P_C`).
pub const REFERENCE_RELAY_POWER_RATIO: f64 = 0.1;

impl Default for SystemConfig {
    /// Reference setup at `ρ_S = 10 dB`, `ρ_C = ρ_S / 10`.
    fn default() -> Self {
        let rho_s = db_to_linear(10.0);
        SystemConfig {
            rho_s,
            rho_c: rho_s * REFERENCE_RELAY_POWER_RATIO,
            alpha_c: 0.1,
            alpha_e: 0.9,
            code_c: CodeSpec { m: 100, bits: 300 },
            code_e: CodeSpec { m: 100, bits: 100 },
            elements: 8,
            eta_c: 1.0,
            eta_e: 1.0,
            lambda_c: 1.0,
            lambda_e: 0.3,
            lambda_ce: 1.0,
            lambda_rc: 1.0,
            lambda_gc: 0.8,
            lambda_re: 1.0,
            lambda_ge: 0.3,
            lambda_rce: 1.0,
            lambda_gce: 0.8,
            quad_order: DEFAULT_QUAD_ORDER,
            relay_direct_variance: RelayDirectVariance::LambdaCe,
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl SystemConfig {
    /// Reference setup with the BS SNR given in dB and the relay SNR tied to it.
    pub fn reference(rho_s_db: f64) -> Self {
        let mut cfg = SystemConfig::default();
        cfg.set_rho_s_db(rho_s_db, true);
        cfg
    }

    /// Sets `ρ_S` from dB; with `couple_relay`, `ρ_C` follows as `ρ_S / 10`.
    pub fn set_rho_s_db(&mut self, db: f64, couple_relay: bool) {
        self.rho_s = db_to_linear(db);
        if couple_relay {
            self.rho_c = self.rho_s * REFERENCE_RELAY_POWER_RATIO;
        }
    }

    /// Sets `α_c` and its complement `α_e = 1 - α_c`.
    pub fn set_alpha_c(&mut self, alpha_c: f64) {
        self.alpha_c = alpha_c;
        self.alpha_e = 1.0 - alpha_c;
    }

    pub fn validate(&self) -> Result<()> {
        positive("rho_s", self.rho_s)?;
        positive("rho_c", self.rho_c)?;
        if !(self.alpha_c > 0.0 && self.alpha_e > 0.0) {
            return Err(Error::config("alpha_c", "power fractions must be positive"));
        }
        if ((self.alpha_c + self.alpha_e) - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "alpha_e",
                format!(
                    "alpha_c + alpha_e must equal 1 (got {})",
                    self.alpha_c + self.alpha_e
                ),
            ));
        }
        if !(self.alpha_c < self.alpha_e) {
            return Err(Error::config(
                "alpha_c",
                format!(
                    "alpha_c ({}) must be smaller than alpha_e ({})",
                    self.alpha_c, self.alpha_e
                ),
            ));
        }
        for (name, eta) in [("eta_c", self.eta_c), ("eta_e", self.eta_e)] {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::config(
                    name,
                    format!("must lie in [0, 1] (got {eta})"),
                ));
            }
        }
        for (name, value) in [
            ("lambda_c", self.lambda_c),
            ("lambda_e", self.lambda_e),
            ("lambda_ce", self.lambda_ce),
            ("lambda_rc", self.lambda_rc),
            ("lambda_gc", self.lambda_gc),
            ("lambda_re", self.lambda_re),
            ("lambda_ge", self.lambda_ge),
            ("lambda_rce", self.lambda_rce),
            ("lambda_gce", self.lambda_gce),
        ] {
            positive(name, value)?;
        }
        if self.code_c.m == 0 || self.code_c.bits == 0 {
            return Err(Error::config("n_c", "blocklength and payload must be >= 1"));
        }
        if self.code_e.m == 0 || self.code_e.bits == 0 {
            return Err(Error::config("n_e", "blocklength and payload must be >= 1"));
        }
        if self.quad_order == 0 {
            return Err(Error::config("quad_order", "must be >= 1"));
        }
        Ok(())
    }

    /// Variances and reflection coefficient of one link.
    pub fn link(&self, link: Link) -> LinkParams {
        match link {
            Link::Cu => LinkParams {
                direct_var: self.lambda_c,
                lambda_g: self.lambda_gc,
                lambda_r: self.lambda_rc,
                eta: self.eta_c,
            },
            Link::CeuDirect => LinkParams {
                direct_var: self.lambda_e,
                lambda_g: self.lambda_ge,
                lambda_r: self.lambda_re,
                eta: self.eta_e,
            },
            Link::Relay => LinkParams {
                direct_var: self.lambda_ce,
                lambda_g: self.lambda_gce,
                lambda_r: self.lambda_rce,
                eta: self.eta_e,
            },
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("must be positive and finite (got {value})"),
        ))
    }
}

/// The three radio links of the two-phase protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// BS to CU, through RIS zone 1.
    Cu,
    /// BS to CEU, through RIS zone 2.
    CeuDirect,
    /// CU to CEU in the relay phase, through RIS zone 2.
    Relay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    pub direct_var: f64,
    pub lambda_g: f64,
    pub lambda_r: f64,
    pub eta: f64,
}

/// Gamma approximation of `q = Σ_{r=1}^{R} |g_r| |h_r|`: shape `κ + 1`, scale `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub kappa: f64,
    pub b: f64,
}

impl GammaFit {
    pub fn shape(&self) -> f64 {
        self.kappa + 1.0
    }

    pub fn mean(&self) -> f64 {
        self.shape() * self.b
    }

    pub fn variance(&self) -> f64 {
        self.shape() * self.b * self.b
    }

    /// CDF of the fitted amplitude sum.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        reg_lower_inc_gamma(self.shape(), y / self.b).unwrap_or(1.0)
    }
}

/// Moment-matched gamma fit for `R` elements with per-hop variances.
pub fn gamma_fit(elements: u32, lambda_g: f64, lambda_r: f64) -> Result<GammaFit> {
    if elements == 0 {
        return Err(Error::InvalidArgument(
            "gamma fit needs at least one RIS element".into(),
        ));
    }
    if !(lambda_g > 0.0 && lambda_r > 0.0) {
        return Err(Error::InvalidArgument(
            "hop variances must be positive".into(),
        ));
    }
    let pi2 = PI * PI;
    let kappa = ((elements as f64 + 1.0) * pi2 - 16.0) / (16.0 - pi2);
    let b = (4.0 / PI - PI / 4.0) * (lambda_g * lambda_r).sqrt();
    Ok(GammaFit { kappa, b })
}

/// Exact mean of `Σ |g||h|` over `R` element pairs.
pub fn cascade_mean(elements: u32, lambda_g: f64, lambda_r: f64) -> f64 {
    elements as f64 * PI / 4.0 * (lambda_g * lambda_r).sqrt()
}

/// Exact variance of `Σ |g||h|` over `R` element pairs.
pub fn cascade_variance(elements: u32, lambda_g: f64, lambda_r: f64) -> f64 {
    elements as f64 * (16.0 - PI * PI) / 16.0 * lambda_g * lambda_r
}

/// One joint draw of the direct power gains and cascaded amplitude sums.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FadingSample {
    pub p_c: f64,
    pub p_e: f64,
    pub p_ce: f64,
    pub q_c: f64,
    pub q_e: f64,
    pub q_ce: f64,
}

#[inline]
fn exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    let e: f64 = Exp1.sample(rng);
    mean * e
}

#[inline]
fn rayleigh<R: Rng + ?Sized>(rng: &mut R, power: f64) -> f64 {
    exponential(rng, power).sqrt()
}

fn cascade_sum<R: Rng + ?Sized>(rng: &mut R, elements: u32, lambda_g: f64, lambda_r: f64) -> f64 {
    (0..elements)
        .map(|_| rayleigh(rng, lambda_g) * rayleigh(rng, lambda_r))
        .sum()
}

/// Draws a sample for the two-zone surface with per-element phase alignment.
///
/// Draw order is fixed (direct gains, then the three cascades element by
/// element), so a given stream state always yields the same sample.
pub fn sample_aligned<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> FadingSample {
    let p_c = exponential(rng, cfg.lambda_c);
    let p_e = exponential(rng, cfg.lambda_e);
    let p_ce = exponential(rng, cfg.lambda_ce);
    let q_c = cascade_sum(rng, cfg.elements, cfg.lambda_gc, cfg.lambda_rc);
    let q_e = cascade_sum(rng, cfg.elements, cfg.lambda_ge, cfg.lambda_re);
    let q_ce = cascade_sum(rng, cfg.elements, cfg.lambda_gce, cfg.lambda_rce);
    FadingSample {
        p_c,
        p_e,
        p_ce,
        q_c,
        q_e,
        q_ce,
    }
}

#[derive(Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Self {
        let s = (0.5 * var).sqrt();
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex {
            re: s * re,
            im: s * im,
        }
    }

    fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

fn random_phase_gain<R: Rng + ?Sized>(rng: &mut R, link: LinkParams, elements: u32) -> f64 {
    let h = Complex::gaussian(rng, link.direct_var);
    let mut acc = Complex { re: 0.0, im: 0.0 };
    for _ in 0..elements {
        let g = Complex::gaussian(rng, link.lambda_g);
        let hr = Complex::gaussian(rng, link.lambda_r);
        let phi = rng.random::<f64>() * 2.0 * PI;
        let (s, c) = phi.sin_cos();
        let t = g.mul(hr).mul(Complex { re: c, im: s });
        acc.re += t.re;
        acc.im += t.im;
    }
    Complex {
        re: h.re + link.eta * acc.re,
        im: h.im + link.eta * acc.im,
    }
    .norm_sqr()
}

/// Draws a sample for a single-zone surface with `total_elements` elements and
/// i.i.d. uniform phases, redrawn for every link.
///
/// The effective powers land in the `p_*` fields; the `q_*` fields are zero.
pub fn sample_random_phase<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    rng: &mut R,
    total_elements: u32,
) -> FadingSample {
    let p_c = random_phase_gain(rng, cfg.link(Link::Cu), total_elements);
    let p_e = random_phase_gain(rng, cfg.link(Link::CeuDirect), total_elements);
    let p_ce = random_phase_gain(rng, cfg.link(Link::Relay), total_elements);
    FadingSample {
        p_c,
        p_e,
        p_ce,
        ..FadingSample::default()
    }
}

/// Effective power gain `|h|² + η² q²` of a link (`T`, `Z` or `W`).
pub fn effective_gain(sample: &FadingSample, link: Link, cfg: &SystemConfig) -> f64 {
    let (p, q, eta) = match link {
        Link::Cu => (sample.p_c, sample.q_c, cfg.eta_c),
        Link::CeuDirect => (sample.p_e, sample.q_e, cfg.eta_e),
        Link::Relay => (sample.p_ce, sample.q_ce, cfg.eta_e),
    };
    p + eta * eta * q * q
}
