//! Scenario files: TOML with every section optional and unknown keys
//! rejected. Powers are given in dBm (or dB for the path loss) and converted
//! once here.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundTarget;
use crate::channel::{Layout, SystemParams};
use crate::energy::{EhModel, PowerBudget};
use crate::error::{Error, Result};
use crate::selection::{RisMode, Scheme, SelectionStrategy};
use crate::sim::{
    validate_grid, AnalyticMethod, CandidatePool, EnergyThreshold, OutageMetric, RateThreshold,
    SweepVariable, Thresholds, TrialConfig,
};
use crate::units::{db_to_linear, dbm_to_watts};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub p_tx_dbm: f64,
    pub path_loss_db: f64,
    pub alpha: f64,
    pub slot_s: f64,
    pub wavelength_m: f64,
    pub noise_dbm: f64,
    /// Elements per group.
    pub m: usize,
    /// Number of groups.
    pub b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_total: Option<usize>,
    pub d_sr_m: f64,
    pub d_rd_m: f64,
    pub k_h: f64,
    pub k_g: f64,
    pub beta_gain: f64,
    /// Element spacing in wavelengths.
    pub spacing_wavelengths: f64,
    pub layout: String,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            p_tx_dbm: 30.0,
            path_loss_db: -35.3,
            alpha: 2.0,
            slot_s: 100e-6,
            wavelength_m: 0.1,
            noise_dbm: -104.0,
            m: 20,
            b: 20,
            n_total: None,
            d_sr_m: 15.0,
            d_rd_m: 20.0,
            k_h: 1.0,
            k_g: 1.0,
            beta_gain: 1.0,
            spacing_wavelengths: 0.125,
            layout: "linear".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ModeSection {
    /// `ps` or `ts`.
    pub kind: String,
    pub rho: f64,
    pub zeta: f64,
}

impl Default for ModeSection {
    fn default() -> Self {
        Self {
            kind: "ps".into(),
            rho: 0.5,
            zeta: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct HarvesterSection {
    /// `linear` or `nonlinear`.
    pub kind: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for HarvesterSection {
    fn default() -> Self {
        Self {
            kind: "linear".into(),
            a: 2.463,
            b: 1.635,
            c: 0.826,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetSection {
    pub p_t_dbm: f64,
    pub p_ph_dbm: f64,
}

impl Default for BudgetSection {
    fn default() -> Self {
        Self {
            p_t_dbm: 5.0,
            p_ph_dbm: 5.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionSection {
    /// `rgs`, `sbgs` or `ebgs`.
    pub scheme: String,
    pub k: usize,
    /// `all` or `eligible`.
    pub pool: String,
    /// `data` or `energy`.
    pub metric: String,
    /// `closed_form` or `evt`.
    pub analytic: String,
}

impl Default for SelectionSection {
    fn default() -> Self {
        Self {
            scheme: "sbgs".into(),
            k: 1,
            pool: "all".into(),
            metric: "data".into(),
            analytic: "closed_form".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSection {
    /// SNR thresholds in dB; each one produces its own output file.
    pub gamma_th_db: Vec<f64>,
    /// Required rate in bits/s/Hz; replaces `gamma_th_db` when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_req: Option<f64>,
    /// Energy threshold in joules; defaults to what the group consumes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_req_joules: Option<f64>,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self {
            gamma_th_db: vec![3.0],
            r_req: None,
            e_req_joules: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TrialSection {
    pub n_trials: usize,
    pub seed: u64,
    /// Worker threads (0 = all cores). Not part of the dumped scenario since
    /// it never changes the results.
    #[serde(skip_serializing)]
    pub workers: usize,
}

impl Default for TrialSection {
    fn default() -> Self {
        Self {
            n_trials: 100_000,
            seed: 1,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    pub grid: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            variable: "p_tx_dbm".into(),
            grid: vec![30.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSection {
    /// `rho` or `zeta`.
    pub target: String,
    /// Number of channel realisations.
    pub draws: usize,
    pub r_req: f64,
}

impl Default for BoundsSection {
    fn default() -> Self {
        Self {
            target: "rho".into(),
            draws: 100,
            r_req: 1.0,
        }
    }
}

/// The file as written, with defaults filled in.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub system: SystemSection,
    pub mode: ModeSection,
    pub harvester: HarvesterSection,
    pub budget: BudgetSection,
    pub selection: SelectionSection,
    pub thresholds: ThresholdSection,
    pub trial: TrialSection,
    pub sweep: SweepSection,
    pub bounds: BoundsSection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsSpec {
    pub target: BoundTarget,
    pub draws: usize,
    pub r_req: f64,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: SystemParams,
    /// Trial settings; its `thresholds` field holds the first threshold set.
    pub trial: TrialConfig,
    /// One entry per output file.
    pub thresholds: Vec<Thresholds>,
    /// SNR thresholds in dB matching `thresholds`, when given that way.
    pub gamma_th_db: Vec<f64>,
    pub sweep: SweepSpec,
    pub bounds: BoundsSpec,
    file: ScenarioFile,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let s = &file.system;
        if let Some(n) = s.n_total {
            if n != s.m * s.b {
                return Err(invalid(format!(
                    "system.n_total = {n} does not equal m * b = {} * {}",
                    s.m, s.b
                )));
            }
        }
        let layout = match s.layout.as_str() {
            "linear" => Layout::Linear,
            "square_grid" => Layout::SquareGrid,
            other => return Err(invalid(format!("system.layout: unknown layout {other:?}"))),
        };
        let params = SystemParams {
            p_tx: dbm_to_watts(s.p_tx_dbm),
            rho_l: db_to_linear(s.path_loss_db),
            alpha: s.alpha,
            t_s: s.slot_s,
            lambda: s.wavelength_m,
            noise_power: dbm_to_watts(s.noise_dbm),
            n_total: s.m * s.b,
            m_per_group: s.m,
            b_groups: s.b,
            d_sr: s.d_sr_m,
            d_rd: s.d_rd_m,
            k_h: s.k_h,
            k_g: s.k_g,
            beta_gain: s.beta_gain,
            spacing: s.spacing_wavelengths * s.wavelength_m,
            layout,
        };
        params.validate()?;

        let mode = match file.mode.kind.as_str() {
            "ps" => RisMode::PowerSplitting { rho: file.mode.rho },
            "ts" => RisMode::TimeSwitching {
                zeta: file.mode.zeta,
            },
            other => {
                return Err(invalid(format!(
                    "mode.kind: expected ps or ts, got {other:?}"
                )))
            }
        };
        mode.validate()?;

        let h = &file.harvester;
        let eh = match h.kind.as_str() {
            "linear" => EhModel::Linear,
            "nonlinear" => EhModel::nonlinear(h.a, h.b, h.c)?,
            other => {
                return Err(invalid(format!(
                    "harvester.kind: expected linear or nonlinear, got {other:?}"
                )))
            }
        };
        let budget = PowerBudget::new(
            dbm_to_watts(file.budget.p_t_dbm),
            dbm_to_watts(file.budget.p_ph_dbm),
        )?;

        let sel = &file.selection;
        let strategy = SelectionStrategy::new(sel.scheme.parse::<Scheme>()?, sel.k)?;
        let pool = match sel.pool.as_str() {
            "all" => CandidatePool::All,
            "eligible" => CandidatePool::Eligible,
            other => {
                return Err(invalid(format!(
                    "selection.pool: expected all or eligible, got {other:?}"
                )))
            }
        };
        let metric = match sel.metric.as_str() {
            "data" => OutageMetric::Data,
            "energy" => OutageMetric::Energy,
            other => {
                return Err(invalid(format!(
                    "selection.metric: expected data or energy, got {other:?}"
                )))
            }
        };
        let analytic = match sel.analytic.as_str() {
            "closed_form" => AnalyticMethod::ClosedForm,
            "evt" => AnalyticMethod::Evt,
            other => {
                return Err(invalid(format!(
                    "selection.analytic: expected closed_form or evt, got {other:?}"
                )))
            }
        };

        let th = &file.thresholds;
        let energy = match th.e_req_joules {
            Some(e) if e >= 0.0 => EnergyThreshold::Joules(e),
            Some(e) => {
                return Err(invalid(format!(
                    "thresholds.e_req_joules must be nonnegative, got {e}"
                )))
            }
            None => EnergyThreshold::Required,
        };
        let (thresholds, gamma_th_db) = match th.r_req {
            Some(r) if r >= 0.0 => (
                vec![Thresholds {
                    rate: RateThreshold::Rate(r),
                    energy,
                }],
                Vec::new(),
            ),
            Some(r) => {
                return Err(invalid(format!(
                    "thresholds.r_req must be nonnegative, got {r}"
                )))
            }
            None => {
                if th.gamma_th_db.is_empty() {
                    return Err(invalid("thresholds.gamma_th_db is empty"));
                }
                (
                    th.gamma_th_db
                        .iter()
                        .map(|&g| Thresholds {
                            rate: RateThreshold::SnrDb(g),
                            energy,
                        })
                        .collect(),
                    th.gamma_th_db.clone(),
                )
            }
        };

        let trial = TrialConfig {
            n_trials: file.trial.n_trials,
            seed: file.trial.seed,
            strategy,
            mode,
            eh,
            budget,
            thresholds: thresholds[0],
            metric,
            pool,
            analytic,
            workers: file.trial.workers,
        };
        trial.validate(&params)?;

        let sweep = SweepSpec {
            variable: file.sweep.variable.parse()?,
            grid: file.sweep.grid.clone(),
        };
        validate_grid(sweep.variable, &sweep.grid)?;
        let bounds = BoundsSpec {
            target: match file.bounds.target.as_str() {
                "rho" => BoundTarget::Rho,
                "zeta" => BoundTarget::Zeta,
                other => {
                    return Err(invalid(format!(
                        "bounds.target: expected rho or zeta, got {other:?}"
                    )))
                }
            },
            draws: file.bounds.draws,
            r_req: file.bounds.r_req,
        };
        if bounds.draws == 0 {
            return Err(invalid("bounds.draws must be at least 1"));
        }
        Ok(Self {
            params,
            trial,
            thresholds,
            gamma_th_db,
            sweep,
            bounds,
            file,
        })
    }

    /// Command-line overrides; `trials` also sets the number of bound draws.
    pub fn with_overrides(
        mut self,
        trials: Option<usize>,
        seed: Option<u64>,
        k: Option<usize>,
        workers: Option<usize>,
    ) -> Result<Self> {
        let f = &mut self.file;
        if let Some(n) = trials {
            f.trial.n_trials = n;
            f.bounds.draws = n;
        }
        if let Some(s) = seed {
            f.trial.seed = s;
        }
        if let Some(k) = k {
            f.selection.k = k;
        }
        if let Some(w) = workers {
            f.trial.workers = w;
        }
        Self::from_file(self.file)
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    /// The resolved scenario as TOML, enough to rerun it.
    pub fn to_toml(&self) -> String {
        let mut file = self.file.clone();
        file.system.n_total = Some(self.params.n_total);
        toml::to_string(&file).expect("scenario serialises")
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
    Scenario::from_file(file)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let config_error = |message: String| Error::Config {
        path: path.to_path_buf(),
        message,
    };
    let file: ScenarioFile = toml::from_str(&text).map_err(|e| config_error(e.to_string()))?;
    Scenario::from_file(file).map_err(|e| config_error(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let s = parse_scenario("").unwrap();
        assert_eq!(s.params, SystemParams::default());
        assert_eq!(s.trial.n_trials, 100_000);
        assert_eq!(s.trial.eh, EhModel::Linear);
        assert_eq!(s.sweep.grid, vec![30.0]);
    }

    #[test]
    fn single_override() {
        let s = parse_scenario("[system]\np_tx_dbm = 20\n").unwrap();
        let expected = SystemParams {
            p_tx: dbm_to_watts(20.0),
            ..SystemParams::default()
        };
        assert_eq!(s.params, expected);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_scenario("[system]\np_txdbm = 20\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("p_txdbm"), "{err}");
        assert!(parse_scenario("[nonsense]\n").is_err());
    }

    #[test]
    fn inconsistent_total_is_rejected() {
        let err = parse_scenario("[system]\nm = 10\nb = 4\nn_total = 41\n").unwrap_err();
        assert!(err.to_string().contains("n_total"));
        assert!(parse_scenario("[system]\nm = 10\nb = 4\nn_total = 40\n").is_ok());
    }

    #[test]
    fn dump_round_trips() {
        let s = parse_scenario(
            "[selection]\nscheme = \"ebgs\"\nk = 2\n[harvester]\nkind = \"nonlinear\"\n",
        )
        .unwrap();
        let again = parse_scenario(&s.to_toml()).unwrap();
        assert_eq!(again.params, s.params);
        assert_eq!(again.trial, s.trial);
    }

    #[test]
    fn overrides_apply() {
        let s = parse_scenario("[system]\nb = 5\n")
            .unwrap()
            .with_overrides(Some(10), Some(9), Some(3), None)
            .unwrap();
        assert_eq!(s.trial.n_trials, 10);
        assert_eq!(s.bounds.draws, 10);
        assert_eq!(s.trial.seed, 9);
        assert_eq!(s.trial.strategy.k, 3);
        assert!(parse_scenario("[system]\nb = 5\n")
            .unwrap()
            .with_overrides(None, None, Some(6), None)
            .is_err());
    }
}
