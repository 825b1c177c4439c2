//! Monte Carlo estimates of the average block error rates.
//!
//! Each trial draws one fading realization, maps it to the four SINRs and
//! records the conditional BLERs under the normal approximation. Averaging
//! those smooth per-trial values (rather than counting simulated decoding
//! failures) keeps the estimator unbiased for `E[ε]` with much lower variance.
//!
//! Trials are grouped into chunks of [`CHUNK_SIZE`]. Chunk `c` draws from a
//! ChaCha8 generator seeded with the run seed and switched to stream `c`, and
//! the per-chunk accumulators are merged in chunk order. Results are therefore
//! bit-identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{effective_gain, sample_aligned, sample_random_phase, Link, SystemConfig};
use crate::error::{Error, Result};
use crate::fbl::{psi_exact, CodeSpec};

/// Trials per independently seeded chunk.
pub const CHUNK_SIZE: usize = 4096;

/// Environment variable read by [`Execution::from_env`].
pub const WORKERS_ENV: &str = "RISNOMA_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Two RIS zones, each element phase-aligned to its own user.
    TwoZoneAligned,
    /// One zone of `2R` elements with independent uniform phases.
    SingleZoneRandom,
    /// Direct links only.
    NoRis,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::TwoZoneAligned,
        ScenarioKind::SingleZoneRandom,
        ScenarioKind::NoRis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::TwoZoneAligned => "two_zone_aligned",
            ScenarioKind::SingleZoneRandom => "single_zone_random",
            ScenarioKind::NoRis => "no_ris",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario `{s}`")))
    }
}

/// Sample mean of a per-trial BLER with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlerEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

/// Estimates for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub cu: BlerEstimate,
    pub ceu_sc: BlerEstimate,
    pub ceu_mrc: BlerEstimate,
    /// `E[ε_cc]`, the CU's own-message component.
    pub cc: BlerEstimate,
    /// `E[ε_ce]`, the CU's CEU-message component.
    pub ce: BlerEstimate,
}

/// Conditional BLERs of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMetrics {
    pub cc: f64,
    pub ce: f64,
    pub cu: f64,
    pub ceu_sc: f64,
    pub ceu_mrc: f64,
}

/// SINRs of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSinrs {
    pub cc: f64,
    pub ce: f64,
    pub e1: f64,
    pub e2: f64,
}

/// Maps effective gains `T`, `Z`, `W` to the four SINRs.
pub fn trial_sinrs(cfg: &SystemConfig, t: f64, z: f64, w: f64) -> TrialSinrs {
    let (ac, ae, rs) = (cfg.alpha_c, cfg.alpha_e, cfg.rho_s);
    TrialSinrs {
        cc: ac * rs * t,
        ce: ae * rs * t / (ac * rs * t + 1.0),
        e1: ae * rs * z / (ac * rs * z + 1.0),
        e2: cfg.rho_c * w,
    }
}

#[inline]
fn psi(gamma: f64, code: CodeSpec) -> f64 {
    psi_exact(gamma, code).unwrap_or(1.0)
}

/// Conditional BLERs for a set of SINRs.
pub fn trial_metrics(cfg: &SystemConfig, s: &TrialSinrs) -> TrialMetrics {
    let cc = psi(s.cc, cfg.code_c);
    let ce = psi(s.ce, cfg.code_e);
    let e1 = psi(s.e1, cfg.code_e);
    let sc = psi(s.e1.max(s.e2), cfg.code_e);
    let mrc = psi(s.e1 + s.e2, cfg.code_e);
    TrialMetrics {
        cc,
        ce,
        cu: ce + cc - ce * cc,
        ceu_sc: ce * e1 + (1.0 - ce) * sc,
        ceu_mrc: ce * e1 + (1.0 - ce) * mrc,
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let (na, nb, nf) = (self.n as f64, o.n as f64, n as f64);
        Moments {
            n,
            mean: self.mean + d * nb / nf,
            m2: self.m2 + o.m2 + d * d * na * nb / nf,
        }
    }

    fn estimate(self) -> BlerEstimate {
        let n = self.n.max(1) as f64;
        BlerEstimate {
            mean: self.mean.clamp(0.0, 1.0),
            stderr: self.m2.max(0.0).sqrt() / n,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    cc: Moments,
    ce: Moments,
    cu: Moments,
    sc: Moments,
    mrc: Moments,
}

impl Accumulator {
    fn push(&mut self, m: &TrialMetrics) {
        self.cc.push(m.cc);
        self.ce.push(m.ce);
        self.cu.push(m.cu);
        self.sc.push(m.ceu_sc);
        self.mrc.push(m.ceu_mrc);
    }

    fn merge(self, o: Accumulator) -> Accumulator {
        Accumulator {
            cc: self.cc.merge(o.cc),
            ce: self.ce.merge(o.ce),
            cu: self.cu.merge(o.cu),
            sc: self.sc.merge(o.sc),
            mrc: self.mrc.merge(o.mrc),
        }
    }

    fn finish(self) -> McResult {
        McResult {
            cu: self.cu.estimate(),
            ceu_sc: self.sc.estimate(),
            ceu_mrc: self.mrc.estimate(),
            cc: self.cc.estimate(),
            ce: self.ce.estimate(),
        }
    }
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Draws one realization and returns its conditional BLERs.
fn one_trial(
    cfg: &SystemConfig,
    blocked: &SystemConfig,
    scenario: ScenarioKind,
    rng: &mut ChaCha8Rng,
) -> TrialMetrics {
    let (t, z, w) = match scenario {
        ScenarioKind::TwoZoneAligned | ScenarioKind::NoRis => {
            // no_ris consumes the same draws with η = 0
            let s = sample_aligned(cfg, rng);
            (
                effective_gain(&s, Link::Cu, blocked),
                effective_gain(&s, Link::CeuDirect, blocked),
                effective_gain(&s, Link::Relay, blocked),
            )
        }
        ScenarioKind::SingleZoneRandom => {
            let s = sample_random_phase(cfg, rng, 2 * cfg.elements);
            (s.p_c, s.p_e, s.p_ce)
        }
    };
    trial_metrics(cfg, &trial_sinrs(cfg, t, z, w))
}

fn run_chunk(
    cfg: &SystemConfig,
    scenario: ScenarioKind,
    n: u64,
    seed: u64,
    chunk: u64,
) -> Accumulator {
    let mut blocked = cfg.clone();
    if scenario == ScenarioKind::NoRis {
        blocked.eta_c = 0.0;
        blocked.eta_e = 0.0;
    }
    let start = chunk * CHUNK_SIZE as u64;
    let len = (n - start).min(CHUNK_SIZE as u64);
    let mut rng = chunk_rng(seed, chunk);
    let mut acc = Accumulator::default();
    for _ in 0..len {
        acc.push(&one_trial(cfg, &blocked, scenario, &mut rng));
    }
    acc
}

/// How trials are distributed over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Parallel over chunks; `None` uses every available core. Falls back to
    /// sequential when the `parallel` feature is off.
    #[default]
    Parallel,
    /// Parallel with at most this many worker threads.
    Workers(usize),
}

impl Execution {
    /// Reads a worker cap from `RISNOMA_WORKERS`; `1` means sequential.
    pub fn from_env() -> Result<Self> {
        match std::env::var(WORKERS_ENV) {
            Err(_) => Ok(Execution::Parallel),
            Ok(s) => match s.trim().parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::InvalidArgument(format!(
                    "{WORKERS_ENV} must be a positive integer, got `{s}`"
                ))),
                Ok(1) => Ok(Execution::Sequential),
                Ok(w) => Ok(Execution::Workers(w)),
            },
        }
    }
}

fn check_run(cfg: &SystemConfig, n: u64) -> Result<()> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("trial count must be >= 1".into()));
    }
    Ok(())
}

fn merge_in_order(parts: impl IntoIterator<Item = Accumulator>) -> McResult {
    parts
        .into_iter()
        .fold(Accumulator::default(), Accumulator::merge)
        .finish()
}

/// Runs `n` trials on the current thread.
pub fn run_trials_sequential(
    cfg: &SystemConfig,
    scenario: ScenarioKind,
    n: u64,
    seed: u64,
) -> Result<McResult> {
    check_run(cfg, n)?;
    let chunks = n.div_ceil(CHUNK_SIZE as u64);
    Ok(merge_in_order(
        (0..chunks).map(|c| run_chunk(cfg, scenario, n, seed, c)),
    ))
}

/// Runs `n` trials with the default execution (all cores when available).
pub fn run_trials(
    cfg: &SystemConfig,
    scenario: ScenarioKind,
    n: u64,
    seed: u64,
) -> Result<McResult> {
    run_trials_with(cfg, scenario, n, seed, Execution::default())
}

#[cfg(feature = "parallel")]
pub fn run_trials_with(
    cfg: &SystemConfig,
    scenario: ScenarioKind,
    n: u64,
    seed: u64,
    exec: Execution,
) -> Result<McResult> {
    use rayon::prelude::*;

    check_run(cfg, n)?;
    let chunks = n.div_ceil(CHUNK_SIZE as u64);
    let par = || -> Vec<Accumulator> {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(cfg, scenario, n, seed, c))
            .collect()
    };
    let parts = match exec {
        Execution::Sequential | Execution::Workers(1) => {
            return run_trials_sequential(cfg, scenario, n, seed)
        }
        Execution::Parallel => par(),
        Execution::Workers(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(par),
    };
    Ok(merge_in_order(parts))
}

#[cfg(not(feature = "parallel"))]
pub fn run_trials_with(
    cfg: &SystemConfig,
    scenario: ScenarioKind,
    n: u64,
    seed: u64,
    _exec: Execution,
) -> Result<McResult> {
    run_trials_sequential(cfg, scenario, n, seed)
}

/// Parameter swept across a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Source SNR in dB; with `couple_relay` the relay SNR keeps its ratio to it.
    RhoSDb {
        couple_relay: bool,
    },
    /// RIS elements per zone.
    Elements,
    AlphaC,
    /// Common blocklength of both codes.
    Blocklength,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::RhoSDb { .. } => "rho_s_db",
            SweepAxis::Elements => "R",
            SweepAxis::AlphaC => "alpha_c",
            SweepAxis::Blocklength => "m",
        }
    }
}

fn whole(value: f64, what: &str, min: f64) -> Result<u32> {
    if value.fract() != 0.0 || !(value >= min) || value > u32::MAX as f64 {
        return Err(Error::InvalidArgument(format!(
            "{what} must be an integer >= {min}, got {value}"
        )));
    }
    Ok(value as u32)
}

/// Returns `base` with the axis parameter set to `value`, validated.
pub fn apply_axis(base: &SystemConfig, axis: SweepAxis, value: f64) -> Result<SystemConfig> {
    let mut cfg = base.clone();
    match axis {
        SweepAxis::RhoSDb { couple_relay } => {
            if !value.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "rho_s_db must be finite, got {value}"
                )));
            }
            cfg.set_rho_s_db(value, couple_relay);
        }
        SweepAxis::Elements => cfg.elements = whole(value, "R", 0.0)?,
        SweepAxis::AlphaC => cfg.set_alpha_c(value),
        SweepAxis::Blocklength => {
            let m = whole(value, "m", 1.0)?;
            cfg.code_c.m = m;
            cfg.code_e.m = m;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Result at one point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<McResult>,
}

/// Runs `n` trials at every value of `axis`, all with the same seed.
///
/// Reusing the seed gives common random numbers across the series, so
/// neighbouring points differ only through the parameter. Invalid points are
/// reported in place; an empty value list is an error.
pub fn sweep(
    base: &SystemConfig,
    scenario: ScenarioKind,
    axis: SweepAxis,
    values: &[f64],
    n: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one value".into(),
        ));
    }
    Ok(values
        .iter()
        .map(|&value| SweepPoint {
            value,
            result: apply_axis(base, axis, value)
                .and_then(|cfg| run_trials_with(&cfg, scenario, n, seed, exec)),
        })
        .collect())
}
