//! Closed forms checked against direct simulation of the channel model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risnoma_core::analytic::effective_gain_cdf;
use risnoma_core::channel::{effective_gain, gamma_fit, sample_aligned};
use risnoma_core::montecarlo::{run_trials, sweep, Execution, ScenarioKind, SweepAxis};
use risnoma_core::numerics::chebyshev_rule;
use risnoma_core::{AnalyticModel, Link, RelayDirectVariance, SinrKind, SystemConfig};
use risnoma_oracle::kolmogorov_distance;

const DRAWS: usize = 1_000_000;

fn gains(cfg: &SystemConfig, link: Link, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..DRAWS)
        .map(|_| effective_gain(&sample_aligned(cfg, &mut rng), link, cfg))
        .collect()
}

#[test]
fn cdf_at_empirical_median_is_one_half() {
    let cfg = SystemConfig::default();
    let mut t = gains(&cfg, Link::Cu, 11);
    t.sort_by(f64::total_cmp);
    let median = t[DRAWS / 2];
    let lp = cfg.link(Link::Cu);
    let fit = gamma_fit(cfg.elements, lp.lambda_g, lp.lambda_r).unwrap();
    let rule = chebyshev_rule(cfg.quad_order).unwrap();
    let f = effective_gain_cdf(median, lp.direct_var, &fit, lp.eta, &rule).unwrap();
    assert!((f - 0.5).abs() < 5e-3, "F(median) = {f}");
}

#[test]
fn sinr_cdf_cc_matches_empirical() {
    let cfg = SystemConfig::default();
    let model = AnalyticModel::new(&cfg).unwrap();
    let scale = cfg.alpha_c * cfg.rho_s;
    let t = gains(&cfg, Link::Cu, 12);
    for omega in [0.5, 1.0, 2.0, 4.0] {
        let empirical = t.iter().filter(|&&x| scale * x <= omega).count() as f64 / DRAWS as f64;
        let f = model.sinr_cdf(omega, SinrKind::CC).unwrap();
        assert!(
            (f - empirical).abs() < 5e-3,
            "omega {omega}: {f} vs {empirical}"
        );
    }
}

#[test]
fn relay_direct_variance_choice_against_simulation() {
    // The relay hop's direct channel is h_ce; only λ_ce reproduces the
    // simulated law of W. Distances are printed so both choices are on record.
    let mut cfg = SystemConfig::default();
    let w = gains(&cfg, Link::Relay, 13);
    let mut ks = Vec::new();
    for choice in [RelayDirectVariance::LambdaCe, RelayDirectVariance::LambdaE] {
        cfg.relay_direct_variance = choice;
        let model = AnalyticModel::new(&cfg).unwrap();
        let mut sample: Vec<f64> = w.iter().map(|x| cfg.rho_c * x).collect();
        let d = kolmogorov_distance(&mut sample, |g| model.sinr_cdf(g, SinrKind::E2).unwrap());
        println!("relay direct variance {choice:?}: Kolmogorov distance {d:.3e}");
        ks.push(d);
    }
    assert!(ks[0] < 5e-3, "{ks:?}");
    assert!(ks[1] > 10.0 * ks[0], "{ks:?}");
}

#[test]
fn mrc_bler_nonincreasing_in_elements() {
    let cfg = SystemConfig::default();
    let pts = sweep(
        &cfg,
        ScenarioKind::TwoZoneAligned,
        SweepAxis::Elements,
        &[2.0, 4.0, 8.0],
        200_000,
        1,
        Execution::Parallel,
    )
    .unwrap();
    for pair in pts.windows(2) {
        let a = pair[0].result.as_ref().unwrap().ceu_mrc;
        let b = pair[1].result.as_ref().unwrap().ceu_mrc;
        assert!(b.mean <= a.mean + 3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt());
    }
}

#[test]
fn cu_bler_rises_toward_equal_power_split() {
    let cfg = SystemConfig::default();
    let values = [0.3, 0.4, 0.45, 0.49];
    let pts = sweep(
        &cfg,
        ScenarioKind::TwoZoneAligned,
        SweepAxis::AlphaC,
        &values,
        100_000,
        1,
        Execution::Parallel,
    )
    .unwrap();
    let cu: Vec<f64> = pts
        .iter()
        .map(|p| p.result.as_ref().unwrap().cu.mean)
        .collect();
    assert!(cu.windows(2).all(|w| w[1] > w[0]), "{cu:?}");
}

#[test]
fn no_ris_accepts_zero_elements() {
    let mut cfg = SystemConfig::default();
    cfg.elements = 0;
    let r = run_trials(&cfg, ScenarioKind::TwoZoneAligned, 10_000, 1).unwrap();
    let n = run_trials(&cfg, ScenarioKind::NoRis, 10_000, 1).unwrap();
    assert_eq!(r, n);
    assert!(AnalyticModel::new(&cfg).is_err());
}
