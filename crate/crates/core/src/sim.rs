//! Seeded Monte Carlo estimation of data and energy outage.
//!
//! Trial `i` draws from its own ChaCha stream (`seed`, stream `i`), so the
//! result does not depend on how trials are split across workers. Within a
//! trial the groups are drawn in order, source side before destination side,
//! and the uniform used by random selection is drawn last.
//!
//! Sweeps over quantities that leave the channel law unchanged (transmit
//! power, mean SNR, `ρ`, `ζ`, the rank `k`) evaluate every grid point on the
//! same channel draws.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{fit_gamma_product, GroupDraw, GroupSampler, SystemParams};
use crate::energy::{EhModel, PowerBudget};
use crate::error::{Error, Result};
use crate::evt;
use crate::selection::{
    self, fit_energy_distribution, outage_ebgs, outage_rgs, outage_sbgs, threshold_gain,
    GroupObservation, RisMode, Scheme, SelectionStrategy,
};
use crate::units::db_to_linear;

/// Which requirement the scheduled group must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutageMetric {
    /// Achievable rate below the required rate.
    #[default]
    Data,
    /// Harvested energy below the required energy.
    Energy,
}

/// Groups the scheduler may choose from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidatePool {
    /// Every group; random selection is uniform over all of them.
    #[default]
    All,
    /// Only groups meeting both the rate and the energy requirement. Fewer
    /// than `k` such groups counts as an outage.
    Eligible,
}

/// How the analytic column is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnalyticMethod {
    /// Moment-matched laws with the exact order-statistic form.
    #[default]
    ClosedForm,
    /// Gumbel limit of the k-th best value.
    Evt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateThreshold {
    /// Required rate in bits/s/Hz.
    Rate(f64),
    /// SNR threshold `γ` in dB, standing for the rate `log2(1 + γ)`. In
    /// time switching the data phase is shorter, so the SNR actually needed
    /// is `2^{R/(1-ζ)} - 1`.
    SnrDb(f64),
}

impl RateThreshold {
    /// Required rate in bits/s/Hz.
    pub fn resolve(&self) -> f64 {
        match *self {
            RateThreshold::Rate(r) => r,
            RateThreshold::SnrDb(g) => db_to_linear(g).ln_1p() / std::f64::consts::LN_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyThreshold {
    /// What the group needs to operate in the configured mode.
    Required,
    Joules(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub rate: RateThreshold,
    pub energy: EnergyThreshold,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            rate: RateThreshold::SnrDb(3.0),
            energy: EnergyThreshold::Required,
        }
    }
}

impl Thresholds {
    pub fn energy_joules(
        &self,
        params: &SystemParams,
        mode: &RisMode,
        budget: &PowerBudget,
    ) -> f64 {
        match self.energy {
            EnergyThreshold::Required => {
                mode.required_energy(params.m_per_group, budget, params.t_s)
            }
            EnergyThreshold::Joules(e) => e,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub n_trials: usize,
    pub seed: u64,
    pub strategy: SelectionStrategy,
    pub mode: RisMode,
    pub eh: EhModel,
    pub budget: PowerBudget,
    pub thresholds: Thresholds,
    pub metric: OutageMetric,
    pub pool: CandidatePool,
    pub analytic: AnalyticMethod,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n_trials: 100_000,
            seed: 1,
            strategy: SelectionStrategy::default(),
            mode: RisMode::default(),
            eh: EhModel::default(),
            budget: PowerBudget::default(),
            thresholds: Thresholds::default(),
            metric: OutageMetric::default(),
            pool: CandidatePool::default(),
            analytic: AnalyticMethod::default(),
            workers: 0,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidParameter(
                "n_trials must be at least 1".into(),
            ));
        }
        if self.strategy.k == 0 || self.strategy.k > params.b_groups {
            return Err(Error::KOutOfRange {
                k: self.strategy.k,
                n: params.b_groups,
            });
        }
        self.mode.validate()?;
        self.eh.validate()?;
        self.budget.validate()?;
        Ok(())
    }
}

/// Empirical outage with a 95% normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub ci_halfwidth: f64,
    pub n: usize,
}

impl OutageEstimate {
    pub fn from_counts(failures: u64, n: usize) -> Self {
        let p_hat = failures as f64 / n as f64;
        Self {
            p_hat,
            ci_halfwidth: 1.96 * (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            n,
        }
    }
}

/// Random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Observes every group of one slot.
pub fn run_trial<R: Rng + ?Sized>(
    params: &SystemParams,
    cfg: &TrialConfig,
    rng: &mut R,
) -> Result<Vec<GroupObservation>> {
    params.validate()?;
    cfg.validate(params)?;
    let sampler = GroupSampler::new(params)?;
    let r_req = cfg.thresholds.rate.resolve();
    let e_req = cfg.thresholds.energy_joules(params, &cfg.mode, &cfg.budget);
    let mut draw = GroupDraw::default();
    Ok((0..params.b_groups)
        .map(|group_id| {
            sampler.sample_into(rng, &mut draw);
            let snr = selection::snr(params, &cfg.mode, draw.product_gain());
            let harvested =
                selection::harvested_energy(params, &cfg.mode, &cfg.eh, draw.tilde_h.power_gains());
            let rate = selection::achievable_rate(&cfg.mode, snr);
            GroupObservation {
                group_id,
                snr,
                harvested,
                rate,
                eligible: rate >= r_req && harvested >= e_req,
            }
        })
        .collect())
}

/// Channel draws of one trial.
#[derive(Debug, Default)]
struct TrialDraw {
    z: Vec<f64>,
    /// Element gains, `M` per group, only when energy matters.
    gains: Vec<f64>,
    uniform: f64,
}

/// One fully resolved operating point.
#[derive(Debug, Clone)]
struct Evaluator {
    threshold_z: f64,
    e_req: f64,
    incident_scale: f64,
    duration: f64,
    eh: EhModel,
    strategy: SelectionStrategy,
    pool: CandidatePool,
    metric: OutageMetric,
    m: usize,
}

impl Evaluator {
    fn new(params: &SystemParams, cfg: &TrialConfig) -> Self {
        let r_req = cfg.thresholds.rate.resolve();
        let (fraction, duration) = cfg.mode.harvest_window(params.t_s);
        Self {
            threshold_z: threshold_gain(params, &cfg.mode, r_req),
            e_req: cfg.thresholds.energy_joules(params, &cfg.mode, &cfg.budget),
            incident_scale: fraction * params.source_path_gain() * params.p_tx,
            duration,
            eh: cfg.eh,
            strategy: cfg.strategy,
            pool: cfg.pool,
            metric: cfg.metric,
            m: params.m_per_group,
        }
    }

    fn needs_energy(&self) -> bool {
        self.metric == OutageMetric::Energy
            || self.pool == CandidatePool::Eligible
            || self.strategy.scheme == Scheme::Ebgs
    }

    fn energy(&self, gains: &[f64]) -> f64 {
        self.duration
            * gains
                .iter()
                .map(|&x| self.eh.output_power(self.incident_scale * x))
                .sum::<f64>()
    }

    fn is_outage(
        &self,
        draw: &TrialDraw,
        energy: &mut Vec<f64>,
        candidates: &mut Vec<usize>,
    ) -> bool {
        let b = draw.z.len();
        energy.clear();
        if self.needs_energy() {
            energy.extend(draw.gains.chunks(self.m).map(|g| self.energy(g)));
        }
        let data_ok = |i: usize| draw.z[i] >= self.threshold_z;
        let energy_ok = |i: usize, energy: &[f64]| energy[i] >= self.e_req;
        candidates.clear();
        match self.pool {
            CandidatePool::All => candidates.extend(0..b),
            CandidatePool::Eligible => {
                candidates.extend((0..b).filter(|&i| data_ok(i) && energy_ok(i, energy)))
            }
        }
        let n = candidates.len();
        let chosen = match self.strategy.scheme {
            Scheme::Rgs => {
                if n == 0 {
                    return true;
                }
                candidates[((draw.uniform * n as f64) as usize).min(n - 1)]
            }
            Scheme::Sbgs | Scheme::Ebgs => {
                let k = self.strategy.k;
                if n < k {
                    return true;
                }
                let key: &[f64] = if self.strategy.scheme == Scheme::Sbgs {
                    &draw.z
                } else {
                    energy
                };
                *candidates
                    .select_nth_unstable_by(k - 1, |&i, &j| {
                        key[j].total_cmp(&key[i]).then(i.cmp(&j))
                    })
                    .1
            }
        };
        match self.metric {
            OutageMetric::Data => !data_ok(chosen),
            OutageMetric::Energy => !energy_ok(chosen, energy),
        }
    }
}

const BLOCK: usize = 512;

/// Counts outages of every evaluator over the same trials.
fn count_outages(
    sampler: &GroupSampler,
    b_groups: usize,
    evaluators: &[Evaluator],
    n_trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<u64>> {
    let needs_gains = evaluators.iter().any(Evaluator::needs_energy);
    let blocks = n_trials.div_ceil(BLOCK);
    let run = || {
        (0..blocks)
            .into_par_iter()
            .map(|block| {
                let mut counts = vec![0u64; evaluators.len()];
                let mut draw = TrialDraw::default();
                let mut group = GroupDraw::default();
                let mut energy = Vec::new();
                let mut candidates = Vec::new();
                let end = ((block + 1) * BLOCK).min(n_trials);
                for trial in block * BLOCK..end {
                    let mut rng = trial_rng(seed, trial);
                    draw.z.clear();
                    draw.gains.clear();
                    for _ in 0..b_groups {
                        if needs_gains {
                            sampler.sample_into(&mut rng, &mut group);
                            draw.z.push(group.product_gain());
                            draw.gains.extend(group.tilde_h.power_gains());
                        } else {
                            draw.z.push(sampler.sample_product_gain(&mut rng));
                        }
                    }
                    draw.uniform = rng.random::<f64>();
                    for (count, ev) in counts.iter_mut().zip(evaluators) {
                        *count += ev.is_outage(&draw, &mut energy, &mut candidates) as u64;
                    }
                }
                counts
            })
            .reduce(
                || vec![0u64; evaluators.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    if workers == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
        Ok(pool.install(run))
    }
}

/// Empirical outage of the configured strategy.
pub fn estimate_outage(params: &SystemParams, cfg: &TrialConfig) -> Result<OutageEstimate> {
    params.validate()?;
    cfg.validate(params)?;
    let sampler = GroupSampler::new(params)?;
    let counts = count_outages(
        &sampler,
        params.b_groups,
        &[Evaluator::new(params, cfg)],
        cfg.n_trials,
        cfg.seed,
        cfg.workers,
    )?;
    Ok(OutageEstimate::from_counts(counts[0], cfg.n_trials))
}

/// Closed-form (or asymptotic) outage for the configured strategy, or NaN
/// when no closed form covers the combination of scheme and metric.
pub fn analytic_outage(params: &SystemParams, cfg: &TrialConfig) -> Result<f64> {
    params.validate()?;
    cfg.validate(params)?;
    let b = params.b_groups;
    let k = cfg.strategy.k;
    match (cfg.metric, cfg.strategy.scheme) {
        (OutageMetric::Data, Scheme::Rgs) | (OutageMetric::Data, Scheme::Sbgs) => {
            let r_req = cfg.thresholds.rate.resolve();
            let t = threshold_gain(params, &cfg.mode, r_req);
            if t.is_infinite() {
                return Ok(1.0);
            }
            let fit = fit_gamma_product(params)?;
            if cfg.strategy.scheme == Scheme::Rgs {
                return Ok(outage_rgs(params, &cfg.mode, &fit, r_req));
            }
            match cfg.analytic {
                AnalyticMethod::ClosedForm => outage_sbgs(fit.cdf(t), b, k),
                AnalyticMethod::Evt => {
                    let c = evt::normalizing_constants(|x| fit.cdf(x), |x| fit.pdf(x), b as f64)?;
                    evt::outage_evt(t, k, &c)
                }
            }
        }
        (OutageMetric::Energy, Scheme::Rgs) | (OutageMetric::Energy, Scheme::Ebgs) => {
            let e_req = cfg.thresholds.energy_joules(params, &cfg.mode, &cfg.budget);
            let law = fit_energy_distribution(params, &cfg.mode, &cfg.eh)?;
            if cfg.strategy.scheme == Scheme::Rgs {
                return Ok(law.cdf(e_req));
            }
            match cfg.analytic {
                AnalyticMethod::ClosedForm => outage_ebgs(law.cdf(e_req), b, k),
                AnalyticMethod::Evt => match law {
                    selection::EnergyLaw::Degenerate(_) => outage_ebgs(law.cdf(e_req), b, k),
                    _ => {
                        evt::tail_diagnostic(|x| law.cdf(x), |x| law.pdf(x))?;
                        let c =
                            evt::normalizing_constants(|x| law.cdf(x), |x| law.pdf(x), b as f64)?;
                        evt::outage_evt(e_req, k, &c)
                    }
                },
            }
        }
        _ => Ok(f64::NAN),
    }
}

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Mean received SNR before splitting, in dB; sets the transmit power.
    SnrDb,
    /// Transmit power in dBm.
    PtxDbm,
    /// Power-splitting factor (switches the mode to power splitting).
    Rho,
    /// Time-switching fraction (switches the mode to time switching).
    Zeta,
    /// Element spacing in wavelengths.
    Spacing,
    /// Number of groups `B`; the total element count follows.
    Groups,
    /// Rank `k` of the scheduled group.
    K,
}

impl SweepVariable {
    /// Whether the channel law, and hence the draws, stay the same along the
    /// sweep.
    fn keeps_channel(&self) -> bool {
        matches!(
            self,
            SweepVariable::SnrDb
                | SweepVariable::PtxDbm
                | SweepVariable::Rho
                | SweepVariable::Zeta
                | SweepVariable::K
        )
    }

    fn is_integer(&self) -> bool {
        matches!(self, SweepVariable::Groups | SweepVariable::K)
    }

    /// Parameters and trial configuration at one grid value.
    pub fn apply(
        &self,
        value: f64,
        params: &SystemParams,
        cfg: &TrialConfig,
    ) -> Result<(SystemParams, TrialConfig)> {
        let mut params = params.clone();
        let mut cfg = cfg.clone();
        match self {
            SweepVariable::SnrDb => params.p_tx = p_tx_for_mean_snr(&params, value)?,
            SweepVariable::PtxDbm => params.p_tx = crate::units::dbm_to_watts(value),
            SweepVariable::Rho => cfg.mode = RisMode::PowerSplitting { rho: value },
            SweepVariable::Zeta => cfg.mode = RisMode::TimeSwitching { zeta: value },
            SweepVariable::Spacing => params.spacing = value * params.lambda,
            SweepVariable::Groups => {
                params = params
                    .clone()
                    .with_groups(params.m_per_group, value as usize)
            }
            SweepVariable::K => cfg.strategy.k = value as usize,
        }
        Ok((params, cfg))
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::PtxDbm => "p_tx_dbm",
            SweepVariable::Rho => "rho",
            SweepVariable::Zeta => "zeta",
            SweepVariable::Spacing => "spacing",
            SweepVariable::Groups => "groups",
            SweepVariable::K => "k",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "snr_db" => SweepVariable::SnrDb,
            "p_tx_dbm" => SweepVariable::PtxDbm,
            "rho" => SweepVariable::Rho,
            "zeta" => SweepVariable::Zeta,
            "spacing" => SweepVariable::Spacing,
            "groups" => SweepVariable::Groups,
            "k" => SweepVariable::K,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown sweep variable {other:?} (expected snr_db, p_tx_dbm, rho, zeta, spacing, groups or k)"
                )))
            }
        })
    }
}

/// Transmit power giving mean received SNR `snr_db` with the whole signal
/// reflected.
pub fn p_tx_for_mean_snr(params: &SystemParams, snr_db: f64) -> Result<f64> {
    let mean_z = fit_gamma_product(params).map(|f| f.mean()).or_else(|_| {
        let corr = params.correlation_matrix()?;
        let h = crate::channel::composite_moments_for(&corr, params.k_h, params.beta_gain);
        let g = crate::channel::composite_moments_for(&corr, params.k_g, params.beta_gain);
        Ok::<f64, Error>(h.mean * g.mean)
    })?;
    let unit = SystemParams {
        p_tx: 1.0,
        ..params.clone()
    };
    Ok(db_to_linear(snr_db) / (unit.snr_per_unit_gain() * mean_z))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub value: f64,
    pub analytic: f64,
    pub estimate: OutageEstimate,
    /// Rank used at this point.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    pub variable: SweepVariable,
    pub scheme: Scheme,
    /// `ps` or `ts`.
    pub mode: &'static str,
    pub points: Vec<CurvePoint>,
}

/// A sweep grid must be nonempty, finite and strictly monotone; group counts
/// and `k` must be positive integers.
pub fn validate_grid(variable: SweepVariable, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(v) = grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite value {v}")));
    }
    let increasing = grid.windows(2).all(|w| w[0] < w[1]);
    let decreasing = grid.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(Error::InvalidGrid(
            "values must be strictly monotone".into(),
        ));
    }
    if variable.is_integer() && grid.iter().any(|&v| v < 1.0 || v.fract() != 0.0) {
        return Err(Error::InvalidGrid(format!(
            "{variable} takes positive integers"
        )));
    }
    Ok(())
}

/// One curve per threshold set, all evaluated on common random numbers.
pub fn sweep_thresholds(
    params: &SystemParams,
    cfg: &TrialConfig,
    variable: SweepVariable,
    grid: &[f64],
    thresholds: &[Thresholds],
) -> Result<Vec<OutageCurve>> {
    validate_grid(variable, grid)?;
    if thresholds.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one threshold set is needed".into(),
        ));
    }
    // (threshold index, grid index) → resolved point
    let mut points = Vec::with_capacity(thresholds.len() * grid.len());
    for th in thresholds {
        for &value in grid {
            let base = TrialConfig {
                thresholds: *th,
                ..cfg.clone()
            };
            let (p, c) = variable.apply(value, params, &base)?;
            p.validate()?;
            c.validate(&p)?;
            points.push((value, p, c));
        }
    }
    let mut estimates = vec![None; points.len()];
    if variable.keeps_channel() {
        let sampler = GroupSampler::new(&points[0].1)?;
        let evaluators: Vec<_> = points
            .iter()
            .map(|(_, p, c)| Evaluator::new(p, c))
            .collect();
        let counts = count_outages(
            &sampler,
            params.b_groups,
            &evaluators,
            cfg.n_trials,
            cfg.seed,
            cfg.workers,
        )?;
        for (slot, count) in estimates.iter_mut().zip(counts) {
            *slot = Some(OutageEstimate::from_counts(count, cfg.n_trials));
        }
    } else {
        // Points sharing a grid value share the channel law.
        for gi in 0..grid.len() {
            let idx: Vec<usize> = (0..thresholds.len()).map(|t| t * grid.len() + gi).collect();
            let (_, p, _) = &points[idx[0]];
            let sampler = GroupSampler::new(p)?;
            let evaluators: Vec<_> = idx
                .iter()
                .map(|&i| Evaluator::new(&points[i].1, &points[i].2))
                .collect();
            let counts = count_outages(
                &sampler,
                p.b_groups,
                &evaluators,
                cfg.n_trials,
                cfg.seed,
                cfg.workers,
            )?;
            for (&i, count) in idx.iter().zip(counts) {
                estimates[i] = Some(OutageEstimate::from_counts(count, cfg.n_trials));
            }
        }
    }
    let mut curves = Vec::with_capacity(thresholds.len());
    for t in 0..thresholds.len() {
        let mut curve_points = Vec::with_capacity(grid.len());
        for gi in 0..grid.len() {
            let i = t * grid.len() + gi;
            let (value, p, c) = &points[i];
            curve_points.push(CurvePoint {
                value: *value,
                analytic: analytic_outage(p, c)?,
                estimate: estimates[i].expect("every point is estimated"),
                k: c.strategy.k,
            });
        }
        let last = &points[t * grid.len() + grid.len() - 1].2;
        curves.push(OutageCurve {
            variable,
            scheme: cfg.strategy.scheme,
            mode: last.mode.label(),
            points: curve_points,
        });
    }
    Ok(curves)
}

/// Analytic and empirical outage at every grid value.
pub fn sweep(
    params: &SystemParams,
    cfg: &TrialConfig,
    variable: SweepVariable,
    grid: &[f64],
) -> Result<OutageCurve> {
    Ok(sweep_thresholds(params, cfg, variable, grid, &[cfg.thresholds])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (SystemParams, TrialConfig) {
        let params = SystemParams::default().with_groups(4, 5);
        let cfg = TrialConfig {
            n_trials: 2000,
            seed: 7,
            ..TrialConfig::default()
        };
        (params, cfg)
    }

    #[test]
    fn trivial_thresholds_never_fail() {
        let (p, mut c) = small();
        c.thresholds = Thresholds {
            rate: RateThreshold::Rate(0.0),
            energy: EnergyThreshold::Joules(0.0),
        };
        for metric in [OutageMetric::Data, OutageMetric::Energy] {
            for pool in [CandidatePool::All, CandidatePool::Eligible] {
                c.metric = metric;
                c.pool = pool;
                assert_eq!(estimate_outage(&p, &c).unwrap().p_hat, 0.0);
            }
        }
    }

    #[test]
    fn no_power_always_fails() {
        let (mut p, c) = small();
        p.p_tx = 0.0;
        assert_eq!(estimate_outage(&p, &c).unwrap().p_hat, 1.0);
    }

    #[test]
    fn deterministic_single_group() {
        let p = SystemParams {
            k_h: f64::INFINITY,
            k_g: f64::INFINITY,
            spacing: 0.05,
            ..SystemParams::default()
        }
        .with_groups(3, 1);
        let c = TrialConfig::default();
        let mut rng = trial_rng(1, 0);
        let obs = run_trial(&p, &c, &mut rng).unwrap();
        assert_eq!(obs.len(), 1);
        // Identity correlation and unit line of sight: h_c = g_c = M.
        let expected_snr = selection::snr_ps(&p, 0.5, 81.0);
        assert!((obs[0].snr - expected_snr).abs() < 1e-12 * expected_snr);
        let expected_energy = p.t_s * 0.5 * p.source_path_gain() * p.p_tx * 3.0;
        assert!((obs[0].harvested - expected_energy).abs() < 1e-12 * expected_energy);
    }

    #[test]
    fn same_seed_same_observations() {
        let (p, c) = small();
        let a = run_trial(&p, &c, &mut trial_rng(3, 9)).unwrap();
        let b = run_trial(&p, &c, &mut trial_rng(3, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let (p, mut c) = small();
        c.metric = OutageMetric::Energy;
        c.strategy = SelectionStrategy::new(Scheme::Ebgs, 2).unwrap();
        c.workers = 1;
        let one = estimate_outage(&p, &c).unwrap();
        c.workers = 3;
        assert_eq!(one, estimate_outage(&p, &c).unwrap());
    }

    #[test]
    fn grids_are_validated() {
        let (p, c) = small();
        assert!(matches!(
            sweep(&p, &c, SweepVariable::Rho, &[]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(sweep(&p, &c, SweepVariable::Rho, &[0.2, 0.2]).is_err());
        assert!(sweep(&p, &c, SweepVariable::Rho, &[0.2, 0.5, 0.3]).is_err());
        assert!(sweep(&p, &c, SweepVariable::K, &[1.5]).is_err());
    }

    #[test]
    fn single_point_sweep_matches_estimate() {
        let (p, c) = small();
        let curve = sweep(&p, &c, SweepVariable::PtxDbm, &[30.0]).unwrap();
        assert_eq!(curve.points[0].estimate, estimate_outage(&p, &c).unwrap());
        assert_eq!(curve.points[0].analytic, analytic_outage(&p, &c).unwrap());
    }

    #[test]
    fn unsupported_analytic_is_nan() {
        let (p, mut c) = small();
        c.strategy.scheme = Scheme::Ebgs;
        assert!(analytic_outage(&p, &c).unwrap().is_nan());
    }
}
