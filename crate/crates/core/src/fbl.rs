//! Finite-blocklength block error rate.
//!
//! [`psi_exact`] is the normal approximation `Q((C(γ) - N/m) / √(V(γ)/m))`;
//! [`psi_linear`] is its three-piece linearization around the rate threshold
//! `β = 2^(N/m) - 1`, which is what makes the averaged BLER collapse to CDF
//! evaluations.
//!
//! The ramp slope is `δ√m`. One printing of the ramp uses `√n`; `m` is the only
//! blocklength in the model and the knees `v`, `u` are built with `√m`, so that
//! is what is used here.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{channel_dispersion, gaussian_q, shannon_capacity};

/// Blocklength and payload of one coded stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    /// Blocklength in channel uses.
    pub m: u32,
    /// Payload in information bits.
    pub bits: u32,
}

impl CodeSpec {
    pub fn new(m: u32, bits: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("blocklength m must be >= 1".into()));
        }
        if bits == 0 {
            return Err(Error::InvalidArgument("payload N must be >= 1".into()));
        }
        Ok(CodeSpec { m, bits })
    }

    /// Bits per channel use.
    pub fn rate(&self) -> f64 {
        self.bits as f64 / self.m as f64
    }

    /// SINR at which capacity equals the rate.
    pub fn threshold(&self) -> f64 {
        self.rate().exp2() - 1.0
    }
}

/// Parameters of the linearized BLER ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiLinearization {
    pub beta: f64,
    pub delta: f64,
    /// Lower knee; the ramp is 1 at and below it.
    pub v: f64,
    /// Upper knee; the ramp is 0 at and above it.
    pub u: f64,
    pub m: u32,
}

impl PsiLinearization {
    /// Slope magnitude `δ√m` of the ramp, equal to `1 / (u - v)`.
    pub fn slope(&self) -> f64 {
        self.delta * (self.m as f64).sqrt()
    }
}

pub fn linearization_params(code: CodeSpec) -> PsiLinearization {
    let rate = code.rate();
    let beta = rate.exp2() - 1.0;
    let delta = (2.0 * PI * ((2.0 * rate).exp2() - 1.0)).powf(-0.5);
    let half_width = 0.5 / (delta * (code.m as f64).sqrt());
    PsiLinearization {
        beta,
        delta,
        v: beta - half_width,
        u: beta + half_width,
        m: code.m,
    }
}

/// Normal-approximation BLER at SINR `gamma` (linear).
pub fn psi_exact(gamma: f64, code: CodeSpec) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain("psi_exact", gamma, "gamma >= 0"));
    }
    // V(γ) → 0 as γ → 0 while C(γ) < N/m: the limit is a sure error
    if gamma < 1e-12 {
        return Ok(1.0);
    }
    let c = shannon_capacity(gamma)?;
    let v = channel_dispersion(gamma)?;
    let arg = (c - code.rate()) / (v / code.m as f64).sqrt();
    Ok(if arg > 38.0 {
        0.0
    } else if arg < -38.0 {
        1.0
    } else {
        gaussian_q(arg)
    })
}

/// Linearized BLER: 1 below `v`, 0 above `u`, affine in between.
pub fn psi_linear(gamma: f64, lin: &PsiLinearization) -> f64 {
    if gamma <= lin.v {
        1.0
    } else if gamma >= lin.u {
        0.0
    } else {
        (0.5 - lin.slope() * (gamma - lin.beta)).clamp(0.0, 1.0)
    }
}
