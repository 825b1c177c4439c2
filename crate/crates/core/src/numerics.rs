//! Special functions and quadrature primitives.
//!
//! Error function and gamma function come from `libm`; the regularized lower
//! incomplete gamma function is evaluated here with the classical split between
//! the power series (`x < a + 1`) and a Lentz continued fraction for the upper
//! tail.

use std::f64::consts::{LOG2_E, PI, SQRT_2};

use crate::error::{Error, Result};

const MAX_ITER: usize = 100_000;
const EPS: f64 = 1e-16;
/// Smallest exponent whose exponential is still a normal `f64`.
const MIN_NORMAL_EXP: f64 = -708.396_418_532_264_1;

/// Clamps a computed probability into `[0, 1]`.
#[inline]
pub fn clamp_probability(p: f64) -> f64 {
    if p.is_nan() {
        p
    } else {
        p.clamp(0.0, 1.0)
    }
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
///
/// Evaluated through `erfc` so that the far tail keeps full relative precision.
pub fn gaussian_q(x: f64) -> f64 {
    clamp_probability(0.5 * libm::erfc(x / SQRT_2))
}

/// `log2(1 + gamma)`, in bits per channel use.
pub fn shannon_capacity(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain("shannon_capacity", gamma, "gamma >= 0"));
    }
    Ok(gamma.ln_1p() * LOG2_E)
}

/// Channel dispersion `(log2 e)^2 (1 - (1 + gamma)^-2)`.
pub fn channel_dispersion(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain("channel_dispersion", gamma, "gamma >= 0"));
    }
    // 1 - (1+g)^-2 = -expm1(-2 ln(1+g)), exact near zero
    Ok(LOG2_E * LOG2_E * -(-2.0 * gamma.ln_1p()).exp_m1())
}

/// Euler gamma function for positive arguments.
pub fn gamma_function(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("gamma_function", a, "a > 0"));
    }
    Ok(libm::tgamma(a))
}

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("ln_gamma", a, "a > 0"));
    }
    Ok(libm::lgamma(a))
}

/// Regularized lower incomplete gamma function `P(a, x) = γ(a, x) / Γ(a)`.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("reg_lower_inc_gamma", a, "a > 0"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("reg_lower_inc_gamma", x, "x >= 0"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let p = if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_continued_fraction(a, x)
    };
    Ok(clamp_probability(p))
}

/// Log of the common prefactor `x^a e^-x / Γ(a)`.
fn log_prefactor(a: f64, x: f64) -> f64 {
    a * x.ln() - x - libm::lgamma(a)
}

// P(a,x) = x^a e^-x / Γ(a+1) * Σ x^n / ((a+1)...(a+n))
fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (log_prefactor(a, x) + sum.ln()).exp()
}

// Q(a,x) by the modified Lentz evaluation of the Legendre continued fraction.
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (log_prefactor(a, x) + h.ln()).exp()
}

/// Gauss–Chebyshev rule on `(-1, 1)` with the Chebyshev weight folded into the
/// weights, so that `Σ w_u f(ξ_u) ≈ ∫ f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Abscissas `cos((2u-1)π/(2U))`, strictly decreasing.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights `(π/U) √(1 - ξ_u²)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Approximates `∫_{-1}^{1} f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Approximates `∫_a^b f(x) dx` through the affine map onto `(-1, 1)`.
    pub fn integrate_over<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self.integrate(|x| f(mid + half * x))
    }
}

/// Builds the `order`-point Gauss–Chebyshev rule.
pub fn chebyshev_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 1".into(),
        ));
    }
    let scale = PI / order as f64;
    let (nodes, weights) = (1..=order)
        .map(|u| {
            let theta = (2 * u - 1) as f64 * PI / (2 * order) as f64;
            // sin(θ) = √(1 - cos²θ) without cancellation near the endpoints
            (theta.cos(), scale * theta.sin())
        })
        .unzip();
    Ok(QuadratureRule { nodes, weights })
}

/// `exp(Σ terms)`, summing exponents before exponentiating.
///
/// Results that would land in the subnormal range are flushed to zero.
pub fn stable_exp_combine(exponent_terms: &[f64]) -> f64 {
    let s: f64 = exponent_terms.iter().sum();
    if s < MIN_NORMAL_EXP {
        0.0
    } else {
        s.exp()
    }
}
