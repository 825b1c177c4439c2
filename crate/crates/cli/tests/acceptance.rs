//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process exits 0 after printing the summary; set `RISNOMA_ACCEPTANCE_STRICT=1`
//! to exit 1 when any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use risnoma_cli::commands::cmd_run;
use risnoma_cli::config::parse_config;
use risnoma_core::analytic::{diversity_order, effective_gain_cdf, DiversityScheme};
use risnoma_core::channel::{effective_gain, gamma_fit, sample_aligned};
use risnoma_core::fbl::{linearization_params, CodeSpec};
use risnoma_core::montecarlo::{chunk_rng, run_trials_with, Execution, McResult, ScenarioKind};
use risnoma_core::numerics::chebyshev_rule;
use risnoma_core::{AnalyticModel, Link, SinrKind, SystemConfig};
use risnoma_oracle::{integrate, kolmogorov_distance};

const N: u64 = 1_000_000;
const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn mc(cfg: &SystemConfig, scenario: ScenarioKind, n: u64) -> McResult {
    run_trials_with(cfg, scenario, n, SEED, Execution::Parallel).expect("valid run")
}

fn within(a: f64, sa: f64, b: f64, sb: f64) -> bool {
    // a <= b up to three combined standard errors
    a <= b + 3.0 * (sa * sa + sb * sb).sqrt()
}

fn c1_moment_matching() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [1u32, 2, 8, 64] {
        for (lg, lr) in [(0.8, 1.0), (0.3, 1.0), (0.8, 1.0)] {
            let fit = gamma_fit(r, lg, lr).unwrap();
            // E|g| = √(πλ)/2 and E|g|² = λ for a Rayleigh magnitude
            let m1 = (PI * lg).sqrt() / 2.0 * (PI * lr).sqrt() / 2.0;
            let mean = r as f64 * m1;
            let var = r as f64 * (lg * lr - m1 * m1);
            let e_mean = (fit.shape() * fit.b - mean).abs() / mean;
            let e_var = (fit.shape() * fit.b * fit.b - var).abs() / var;
            worst = worst.max(e_mean).max(e_var);
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max relative error {worst:.2e} (tol 1e-12)"),
    }
}

fn c2_gamma_fit_fidelity() -> Outcome {
    let cfg = SystemConfig::default();
    let mut rng = chunk_rng(SEED, 0);
    let mut t: Vec<f64> = (0..N)
        .map(|_| effective_gain(&sample_aligned(&cfg, &mut rng), Link::Cu, &cfg))
        .collect();
    let lp = cfg.link(Link::Cu);
    let fit = gamma_fit(cfg.elements, lp.lambda_g, lp.lambda_r).unwrap();
    let rule = chebyshev_rule(cfg.quad_order).unwrap();
    let d = kolmogorov_distance(&mut t, |x| {
        effective_gain_cdf(x, lp.direct_var, &fit, lp.eta, &rule).unwrap()
    });
    Outcome {
        pass: d <= 0.02,
        detail: format!("Kolmogorov distance {d:.3e} over {N} draws (tol 0.02)"),
    }
}

struct SnrPoint {
    db: f64,
    analytic: risnoma_core::AnalyticBler,
    mc: McResult,
}

fn fig2_points() -> Vec<SnrPoint> {
    [0.0, 5.0, 10.0, 15.0]
        .into_iter()
        .map(|db| {
            let cfg = SystemConfig::reference(db);
            SnrPoint {
                db,
                analytic: AnalyticModel::new(&cfg).unwrap().evaluate(),
                mc: mc(&cfg, ScenarioKind::TwoZoneAligned, N),
            }
        })
        .collect()
}

fn c3_sc_agreement(points: &[SnrPoint]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in points {
        for (name, a, m) in [
            ("cu", p.analytic.cu, p.mc.cu.mean),
            ("sc", p.analytic.ceu_sc, p.mc.ceu_sc.mean),
        ] {
            if m < 1e-4 {
                parts.push(format!("{}dB {name} n/a (mc {m:.1e})", p.db));
                continue;
            }
            let gap = (a.log10() - m.log10()).abs();
            pass &= gap <= 0.3;
            parts.push(format!("{}dB {name} {gap:.3}", p.db));
        }
    }
    Outcome {
        pass,
        detail: format!("|dlog10| (tol 0.3): {}", parts.join(", ")),
    }
}

fn c4_mrc_bound(points: &[SnrPoint]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in points {
        let (a, m) = (p.analytic.ceu_mrc, p.mc.ceu_mrc);
        let bound_ok = a <= m.mean + 3.0 * m.stderr;
        pass &= bound_ok;
        let mut s = format!(
            "{}dB lb {a:.2e} vs mc {:.2e}±{:.1e} {}",
            p.db,
            m.mean,
            m.stderr,
            if bound_ok { "ok" } else { "violated" }
        );
        // tightness is judged only where MC resolves the value
        let ratio = a / m.mean;
        if m.mean >= 1e-3 {
            pass &= ratio >= 0.1;
        }
        s.push_str(&format!(" ratio {ratio:.3e}"));
        parts.push(s);
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c5_no_ris_oracle() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for db in [5.0, 10.0, 15.0] {
        let mut cfg = SystemConfig::reference(db);
        cfg.elements = 0;
        let lin = linearization_params(cfg.code_c);
        let a = cfg.alpha_c * cfg.rho_s * cfg.lambda_c;
        // δ√m ∫_v^u (1 - e^{-t/a}) dt
        let exact = lin.slope() * ((lin.u - lin.v) - a * ((-lin.v / a).exp() - (-lin.u / a).exp()));
        let est = mc(&cfg, ScenarioKind::TwoZoneAligned, N).cc;
        let z = (est.mean - exact).abs() / est.stderr;
        pass &= z <= 3.0;
        parts.push(format!(
            "{db}dB closed {exact:.10e} mc {:.10e}±{:.1e}, diff {:+.2e} ({z:.2} se)",
            est.mean,
            est.stderr,
            est.mean - exact
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c6_riemann_audit() -> Outcome {
    let cfg = SystemConfig::default();
    let model = AnalyticModel::new(&cfg).unwrap();
    let mut worst: f64 = 0.0;
    for kind in SinrKind::ALL {
        let code = if kind == SinrKind::CC {
            cfg.code_c
        } else {
            cfg.code_e
        };
        let lin = linearization_params(code);
        let mid = model.avg_psi(kind, code);
        let full =
            lin.slope() * integrate(|t| model.sinr_cdf(t, kind).unwrap(), lin.v, lin.u, 1e-12);
        worst = worst.max((mid - full).abs());
    }
    Outcome {
        pass: worst <= 1e-3,
        detail: format!("max |F(beta) - integral| over 6 kinds {worst:.2e} (tol 1e-3)"),
    }
}

fn c7_ordering() -> Outcome {
    let n = 200_000;
    let mut violations = Vec::new();
    let mut checks = 0;
    for i in 0..=10 {
        let db = 2.0 * i as f64;
        let cfg = SystemConfig::reference(db);
        let two = mc(&cfg, ScenarioKind::TwoZoneAligned, n);
        let none = mc(&cfg, ScenarioKind::NoRis, n);
        let single = mc(&cfg, ScenarioKind::SingleZoneRandom, n);
        let an = AnalyticModel::new(&cfg).unwrap().evaluate();
        for (label, a, b) in [
            ("two<no_ris sc", two.ceu_sc, none.ceu_sc),
            ("two<no_ris mrc", two.ceu_mrc, none.ceu_mrc),
            ("two<single sc", two.ceu_sc, single.ceu_sc),
            ("two<single mrc", two.ceu_mrc, single.ceu_mrc),
            ("mrc<=sc mc", two.ceu_mrc, two.ceu_sc),
        ] {
            checks += 1;
            if !within(a.mean, a.stderr, b.mean, b.stderr) {
                violations.push(format!("{db}dB {label}"));
            }
        }
        checks += 1;
        if an.ceu_mrc > an.ceu_sc {
            violations.push(format!("{db}dB mrc<=sc analytic"));
        }
    }
    for db in [10.0, 15.0] {
        let mut prev: Option<(McResult, risnoma_core::AnalyticBler)> = None;
        for r in [1u32, 2, 4, 6, 8, 10, 12, 14, 16] {
            let mut cfg = SystemConfig::reference(db);
            cfg.elements = r;
            let cur = (
                mc(&cfg, ScenarioKind::TwoZoneAligned, n),
                AnalyticModel::new(&cfg).unwrap().evaluate(),
            );
            if let Some((pm, pa)) = prev {
                for (label, a, b) in [
                    ("cu", cur.0.cu, pm.cu),
                    ("sc", cur.0.ceu_sc, pm.ceu_sc),
                    ("mrc", cur.0.ceu_mrc, pm.ceu_mrc),
                ] {
                    checks += 1;
                    if !within(a.mean, a.stderr, b.mean, b.stderr) {
                        violations.push(format!("{db}dB R={r} {label} mc"));
                    }
                }
                for (label, a, b) in [
                    ("cu", cur.1.cu, pa.cu),
                    ("sc", cur.1.ceu_sc, pa.ceu_sc),
                    ("mrc", cur.1.ceu_mrc, pa.ceu_mrc),
                ] {
                    checks += 1;
                    if a > b {
                        violations.push(format!("{db}dB R={r} {label} analytic"));
                    }
                }
            }
            prev = Some(cur);
        }
    }
    Outcome {
        pass: violations.is_empty(),
        detail: if violations.is_empty() {
            format!("{checks} checks at n={n}, none violated")
        } else {
            format!(
                "{} of {checks} violated: {}",
                violations.len(),
                violations.join(", ")
            )
        },
    }
}

fn c8_diversity() -> Outcome {
    let identity = (1..=64).all(|r| {
        let sc = diversity_order(r, DiversityScheme::CeuSc).unwrap();
        diversity_order(r, DiversityScheme::CeuMrc).unwrap() == sc * sc
    });
    let mut pass = identity;
    let mut parts = vec![format!(
        "mrc = sc^2 {}",
        if identity { "exact" } else { "broken" }
    )];
    for r in [2u32, 8] {
        let mut cfg = SystemConfig::default();
        cfg.elements = r;
        let log_psi = |rho: f64| {
            let mut c = cfg.clone();
            c.rho_s = rho;
            c.rho_c = rho / 10.0;
            AnalyticModel::new(&c)
                .unwrap()
                .avg_psi(SinrKind::CC, c.code_c)
                .log10()
        };
        let slope = -(log_psi(1e8) - log_psi(1e6)) / 2.0;
        let want = diversity_order(r, DiversityScheme::Cu).unwrap();
        let rel = (slope - want).abs() / want;
        pass &= rel <= 0.1;
        parts.push(format!(
            "R={r} slope {slope:.4} vs (k+1)/2 {want:.4} ({:.1}%)",
            100.0 * rel
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn c9_saturation() -> Outcome {
    let mut cases = 0;
    let mut analytic_ok = true;
    for i in 1..=49 {
        let alpha_c = i as f64 / 100.0;
        for bits in [50u32, 100, 150, 200, 300, 400] {
            let mut cfg = SystemConfig::default();
            cfg.set_alpha_c(alpha_c);
            cfg.code_e = CodeSpec::new(100, bits).unwrap();
            if cfg.code_e.threshold() >= cfg.alpha_e / cfg.alpha_c {
                cases += 1;
                analytic_ok &= AnalyticModel::new(&cfg).unwrap().expected_ce_error() == 1.0;
            }
        }
    }
    let mut cfg = SystemConfig::default();
    cfg.set_alpha_c(0.49);
    let cu = mc(&cfg, ScenarioKind::TwoZoneAligned, N).cu;
    Outcome {
        pass: analytic_ok && cu.mean >= 0.9,
        detail: format!(
            "analytic E[eps_ce] = 1 in {cases} saturated cases: {}; MC CU at alpha_c = 0.49: {:.4}±{:.1e} (need >= 0.9)",
            if analytic_ok { "yes" } else { "no" },
            cu.mean,
            cu.stderr
        ),
    }
}

fn c10_determinism() -> Outcome {
    let rc =
        parse_config(r#"{"trials": 100000, "sweep": {"axis": "rho_s_db", "values": [0, 5, 10]}}"#)
            .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("w1.csv");
    let b = dir.path().join("w8.csv");
    cmd_run(&rc, &a, Execution::Sequential).unwrap();
    cmd_run(&rc, &b, Execution::Workers(8)).unwrap();
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    Outcome {
        pass: a == b,
        detail: format!(
            "{} bytes, 1 vs 8 workers {}",
            a.len(),
            if a == b { "identical" } else { "differ" }
        ),
    }
}

fn main() {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push(o.pass);
    };
    report(1, "moment matching", &mut c1_moment_matching);
    report(2, "gamma-fit fidelity", &mut c2_gamma_fit_fidelity);
    let t = Instant::now();
    let points = fig2_points();
    println!(
        "(criteria 3-4 share {} runs of {N} trials, {:.1}s)",
        points.len(),
        t.elapsed().as_secs_f64()
    );
    report(3, "CU and CEU-SC closed forms vs MC", &mut || {
        c3_sc_agreement(&points)
    });
    report(4, "CEU-MRC lower bound", &mut || c4_mrc_bound(&points));
    report(5, "no-RIS exponential oracle", &mut c5_no_ris_oracle);
    report(6, "Riemann-step audit", &mut c6_riemann_audit);
    report(7, "ordering properties", &mut c7_ordering);
    report(8, "diversity identities", &mut c8_diversity);
    report(9, "saturation", &mut c9_saturation);
    report(10, "determinism across workers", &mut c10_determinism);
    let passed = results.iter().filter(|&&p| p).count();
    println!(
        "acceptance: {passed}/{} PASS in {:.1}s",
        results.len(),
        started.elapsed().as_secs_f64()
    );
    let strict = std::env::var("RISNOMA_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed < results.len() {
        std::process::exit(1);
    }
}
