//! Sweeps reproducing the evaluation figures.
//!
//! | preset | x axis     | fixed parameters              | series                               |
//! |--------|------------|-------------------------------|--------------------------------------|
//! | fig2   | `rho_s_db` | R = 8                          | two-zone, MC + closed forms          |
//! | fig3   | `rho_s_db` | R = 8                          | two-zone; `-no_ris` sibling           |
//! | fig4   | `rho_s_db` | R = 8                          | two-zone; `-single_zone_random` sibling |
//! | fig5   | `R`        | ρ_S = 10 dB; `-rho_s_15db`: 15 dB | two-zone                          |
//! | fig6   | `alpha_c`  | ρ_S = 10 dB, R = 8              | two-zone                             |
//! | fig7   | `m`        | ρ_S = 10 dB, R = 2              | two-zone                             |

use std::str::FromStr;

use risnoma_core::montecarlo::SweepAxis;
use risnoma_core::{ScenarioKind, SystemConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown preset `{s}`")))
    }
}

/// One curve family of a figure, written to its own CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    /// File-name suffix; `None` for the main output file.
    pub suffix: Option<&'static str>,
    pub scenario: ScenarioKind,
    pub base: SystemConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// ρ_S grid in dB shared by the SNR sweeps.
pub fn snr_grid() -> Vec<f64> {
    (0..=10).map(|i| 2.0 * i as f64).collect()
}

/// The series of `preset` built on top of `base`.
pub fn series(preset: Preset, base: &SystemConfig) -> Vec<Series> {
    let snr_axis = SweepAxis::RhoSDb { couple_relay: true };
    let at_db = |db: f64, elements: u32| {
        let mut cfg = base.clone();
        cfg.set_rho_s_db(db, true);
        cfg.elements = elements;
        cfg
    };
    let snr = |suffix, scenario| Series {
        suffix,
        scenario,
        base: at_db(10.0, 8),
        axis: snr_axis,
        values: snr_grid(),
    };
    let aligned = ScenarioKind::TwoZoneAligned;
    match preset {
        Preset::Fig2 => vec![snr(None, aligned)],
        Preset::Fig3 => vec![snr(None, aligned), snr(Some("no_ris"), ScenarioKind::NoRis)],
        Preset::Fig4 => vec![
            snr(None, aligned),
            snr(Some("single_zone_random"), ScenarioKind::SingleZoneRandom),
        ],
        Preset::Fig5 => {
            let elements: Vec<f64> = [1, 2, 4, 6, 8, 10, 12, 14, 16].map(f64::from).to_vec();
            vec![
                Series {
                    suffix: None,
                    scenario: aligned,
                    base: at_db(10.0, 8),
                    axis: SweepAxis::Elements,
                    values: elements.clone(),
                },
                Series {
                    suffix: Some("rho_s_15db"),
                    scenario: aligned,
                    base: at_db(15.0, 8),
                    axis: SweepAxis::Elements,
                    values: elements,
                },
            ]
        }
        Preset::Fig6 => vec![Series {
            suffix: None,
            scenario: aligned,
            base: at_db(10.0, 8),
            axis: SweepAxis::AlphaC,
            values: vec![
                0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.43, 0.45, 0.47, 0.49,
            ],
        }],
        Preset::Fig7 => vec![Series {
            suffix: None,
            scenario: aligned,
            base: at_db(10.0, 2),
            axis: SweepAxis::Blocklength,
            values: vec![50.0, 100.0, 150.0, 200.0, 250.0, 300.0],
        }],
    }
}
