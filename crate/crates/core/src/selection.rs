//! Rates, eligibility, k-th best ranking and closed-form outage of the three
//! group selection schemes.

use std::fmt;
use std::str::FromStr;

use crate::channel::{CorrelationMatrix, GammaFit, RicianPower, SystemParams};
use crate::energy::{required_energy_ps, required_energy_ts, EhModel, PowerBudget};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, reg_incomplete_beta, reg_lower_incomplete_gamma};

/// How a group powers itself during a slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RisMode {
    /// A fraction `rho` of the incident power is harvested for the whole slot.
    PowerSplitting { rho: f64 },
    /// The first `zeta` of the slot is spent harvesting all incident power.
    TimeSwitching { zeta: f64 },
}

impl Default for RisMode {
    fn default() -> Self {
        RisMode::PowerSplitting { rho: 0.5 }
    }
}

impl RisMode {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            RisMode::PowerSplitting { rho } => ("rho", rho),
            RisMode::TimeSwitching { zeta } => ("zeta", zeta),
        };
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "{name} must lie in [0, 1], got {v}"
            )));
        }
        Ok(())
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            RisMode::PowerSplitting { .. } => "ps",
            RisMode::TimeSwitching { .. } => "ts",
        }
    }

    /// Fraction of the slot used for data: 1 for PS, `1 - ζ` for TS.
    pub fn rate_factor(&self) -> f64 {
        match *self {
            RisMode::PowerSplitting { .. } => 1.0,
            RisMode::TimeSwitching { zeta } => 1.0 - zeta,
        }
    }

    /// Fraction of the incident power forwarded to the destination.
    pub fn reflected_fraction(&self) -> f64 {
        match *self {
            RisMode::PowerSplitting { rho } => 1.0 - rho,
            RisMode::TimeSwitching { .. } => 1.0,
        }
    }

    /// Fraction of the incident power fed to the harvester, and for how long.
    pub fn harvest_window(&self, t_s: f64) -> (f64, f64) {
        match *self {
            RisMode::PowerSplitting { rho } => (rho, t_s),
            RisMode::TimeSwitching { zeta } => (1.0, zeta * t_s),
        }
    }

    /// Energy a group of `m` elements needs in this mode.
    pub fn required_energy(&self, m: usize, budget: &PowerBudget, t_s: f64) -> f64 {
        match *self {
            RisMode::PowerSplitting { .. } => required_energy_ps(m, budget, t_s),
            RisMode::TimeSwitching { zeta } => required_energy_ts(m, budget, t_s, zeta),
        }
    }

    /// Copy with the splitting parameter replaced.
    pub fn with_parameter(&self, value: f64) -> Self {
        match self {
            RisMode::PowerSplitting { .. } => RisMode::PowerSplitting { rho: value },
            RisMode::TimeSwitching { .. } => RisMode::TimeSwitching { zeta: value },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Random group selection.
    Rgs,
    /// SNR-based: the k-th best group by received SNR.
    Sbgs,
    /// Energy-based: the k-th best group by harvested energy.
    Ebgs,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Rgs => "rgs",
            Scheme::Sbgs => "sbgs",
            Scheme::Ebgs => "ebgs",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rgs" => Ok(Scheme::Rgs),
            "sbgs" => Ok(Scheme::Sbgs),
            "ebgs" => Ok(Scheme::Ebgs),
            other => Err(Error::InvalidParameter(format!(
                "unknown scheme {other:?} (expected rgs, sbgs or ebgs)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionStrategy {
    pub scheme: Scheme,
    /// Rank of the scheduled group; ignored by random selection.
    pub k: usize,
}

impl SelectionStrategy {
    pub fn new(scheme: Scheme, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::KOutOfRange { k, n: 0 });
        }
        Ok(Self { scheme, k })
    }
}

impl Default for SelectionStrategy {
    fn default() -> Self {
        Self {
            scheme: Scheme::Sbgs,
            k: 1,
        }
    }
}

/// Everything the scheduler knows about one group in one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupObservation {
    pub group_id: usize,
    pub snr: f64,
    /// Harvested energy in joules.
    pub harvested: f64,
    /// Achievable rate in bits/s/Hz.
    pub rate: f64,
    pub eligible: bool,
}

/// End-to-end SNR per unit product gain with the whole signal reflected.
pub fn psi(params: &SystemParams) -> f64 {
    params.snr_per_unit_gain()
}

/// Received SNR in power-splitting mode for product gain `z`.
pub fn snr_ps(params: &SystemParams, rho: f64, z: f64) -> f64 {
    (1.0 - rho)
        * params.p_tx
        * params.rho_l
        * params.rho_l
        * (params.d_sr * params.d_rd).powf(-params.alpha)
        * z
        / params.noise_power
}

/// Received SNR in time-switching mode (data phase reflects everything).
pub fn snr_ts(params: &SystemParams, z: f64) -> f64 {
    snr_ps(params, 0.0, z)
}

pub fn snr(params: &SystemParams, mode: &RisMode, z: f64) -> f64 {
    match *mode {
        RisMode::PowerSplitting { rho } => snr_ps(params, rho, z),
        RisMode::TimeSwitching { .. } => snr_ts(params, z),
    }
}

/// `f(ζ) log2(1 + snr)`.
pub fn achievable_rate(mode: &RisMode, snr: f64) -> f64 {
    mode.rate_factor() * snr.ln_1p() / std::f64::consts::LN_2
}

/// Product gain below which a group misses `r_req`; infinite when no power
/// reaches the destination or no time is left for data.
pub fn threshold_gain(params: &SystemParams, mode: &RisMode, r_req: f64) -> f64 {
    if r_req <= 0.0 {
        return 0.0;
    }
    let f = mode.rate_factor();
    let reach = mode.reflected_fraction() * psi(params);
    if f <= 0.0 || reach <= 0.0 {
        return f64::INFINITY;
    }
    (r_req / f * std::f64::consts::LN_2).exp_m1() / reach
}

/// Energy harvested by a group from its correlated source-side channel.
pub fn harvested_energy(
    params: &SystemParams,
    mode: &RisMode,
    model: &EhModel,
    power_gains: impl Iterator<Item = f64>,
) -> f64 {
    let (fraction, duration) = mode.harvest_window(params.t_s);
    let q = fraction * params.source_path_gain() * params.p_tx;
    duration * power_gains.map(|x| model.output_power(q * x)).sum::<f64>()
}

/// Ids of groups that meet both the rate and the energy requirement.
pub fn eligible_set(observations: &[GroupObservation], r_req: f64, e_req: f64) -> Vec<usize> {
    observations
        .iter()
        .filter(|o| o.rate >= r_req && o.harvested >= e_req)
        .map(|o| o.group_id)
        .collect()
}

/// Position of the k-th largest value (1-based `k`); ties go to the lowest
/// index.
pub fn kth_best_index(values: &[f64], k: usize) -> Result<usize> {
    let n = values.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.select_nth_unstable_by(k - 1, |&i, &j| {
        values[j].total_cmp(&values[i]).then(i.cmp(&j))
    });
    Ok(order[k - 1])
}

/// Density of the k-th largest of `n` i.i.d. draws, given the parent density
/// and CDF at the same point.
pub fn kth_best_pdf(pdf_at_x: f64, cdf_at_x: f64, n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if pdf_at_x == 0.0 {
        return Ok(0.0);
    }
    let (n_f, k_f) = (n as f64, k as f64);
    let ln_coeff = ln_gamma(n_f + 1.0) - ln_gamma(k_f) - ln_gamma(n_f - k_f + 1.0);
    let f = cdf_at_x.clamp(0.0, 1.0);
    let powers = f.powi((n - k) as i32) * (1.0 - f).powi((k - 1) as i32);
    Ok(ln_coeff.exp() * pdf_at_x * powers)
}

/// Probability that the k-th largest of `n` i.i.d. draws falls below a
/// threshold whose parent CDF value is `cdf_at_threshold`: `I_F(n-k+1, k)`.
pub fn kth_best_outage(cdf_at_threshold: f64, n: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let f = cdf_at_threshold.clamp(0.0, 1.0);
    reg_incomplete_beta(f, (n - k + 1) as f64, k as f64)
}

/// Data outage of random selection under the Gamma law of the product gain.
pub fn outage_rgs(params: &SystemParams, mode: &RisMode, fit: &GammaFit, r_req: f64) -> f64 {
    let t = threshold_gain(params, mode, r_req);
    if t.is_infinite() {
        1.0
    } else {
        fit.cdf(t)
    }
}

/// Data outage of SNR-based k-th best selection among `set_size` groups.
pub fn outage_sbgs(cdf_at_threshold: f64, set_size: usize, k: usize) -> Result<f64> {
    kth_best_outage(cdf_at_threshold, set_size, k)
}

/// Energy outage of energy-based k-th best selection among `set_size` groups.
pub fn outage_ebgs(energy_cdf_at_ereq: f64, set_size: usize, k: usize) -> Result<f64> {
    kth_best_outage(energy_cdf_at_ereq, set_size, k)
}

/// Approximate law of the energy one group harvests in a slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyLaw {
    /// No randomness left (no power, or fully saturated / deterministic channels).
    Degenerate(f64),
    Gamma(GammaFit),
    /// `E = offset - slope * Y` with `Y` inverse-Gamma.
    ReflectedInverseGamma {
        offset: f64,
        slope: f64,
        shape: f64,
        scale: f64,
    },
}

impl EnergyLaw {
    /// `P(E <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            EnergyLaw::Degenerate(v) => {
                if x >= v {
                    1.0
                } else {
                    0.0
                }
            }
            EnergyLaw::Gamma(fit) => fit.cdf(x),
            EnergyLaw::ReflectedInverseGamma {
                offset,
                slope,
                shape,
                scale,
            } => {
                // E <= x  ⇔  Y >= (offset - x)/slope
                let y = (offset - x) / slope;
                if y <= 0.0 {
                    return 1.0;
                }
                reg_lower_incomplete_gamma(shape, scale / y).unwrap_or(f64::NAN)
            }
        }
    }

    /// Density, when it exists.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            EnergyLaw::Degenerate(_) => f64::NAN,
            EnergyLaw::Gamma(fit) => fit.pdf(x),
            EnergyLaw::ReflectedInverseGamma {
                offset,
                slope,
                shape,
                scale,
            } => {
                let y = (offset - x) / slope;
                if y <= 0.0 {
                    return 0.0;
                }
                let ln = shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * y.ln() - scale / y;
                ln.exp() / slope
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            EnergyLaw::Degenerate(v) => v,
            EnergyLaw::Gamma(fit) => fit.mean(),
            EnergyLaw::ReflectedInverseGamma {
                offset,
                slope,
                shape,
                scale,
            } => offset - slope * scale / (shape - 1.0),
        }
    }
}

/// How the nonlinear-harvester energy law is approximated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonlinearEnergyFit {
    /// Gamma law matched to the mean and variance of the energy itself.
    #[default]
    Gamma,
    /// Inverse-Gamma law matched to the reciprocal sum in
    /// `E = T(ac - b)(M/c - Σ 1/(q X_j + c))`.
    ReflectedInverseGamma,
}

/// Fits the per-slot energy of one group with the default recipe.
pub fn fit_energy_distribution(
    params: &SystemParams,
    mode: &RisMode,
    model: &EhModel,
) -> Result<EnergyLaw> {
    fit_energy_distribution_with(params, mode, model, NonlinearEnergyFit::default())
}

/// Per-element power-gain laws and their pairwise covariance.
struct ElementGains {
    laws: Vec<RicianPower>,
    cov: Vec<Vec<f64>>,
}

impl ElementGains {
    fn new(corr: &CorrelationMatrix, k: f64, beta_gain: f64) -> Self {
        let (los_amp, var) = crate::channel::rician_components(k);
        let s = corr.sqrt_entries();
        let m = corr.dim();
        let row_sums = corr.sqrt_row_sums();
        let means: Vec<f64> = row_sums
            .iter()
            .map(|r| beta_gain.sqrt() * los_amp * r)
            .collect();
        let c = (s * s.transpose()) * (beta_gain * var);
        let laws = (0..m)
            .map(|j| RicianPower {
                los: means[j] * means[j],
                diffuse: c[(j, j)].max(0.0),
            })
            .collect();
        let cov = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| c[(i, j)] * c[(i, j)] + 2.0 * means[i] * means[j] * c[(i, j)])
                    .collect()
            })
            .collect();
        Self { laws, cov }
    }

    fn correlation(&self, i: usize, j: usize) -> f64 {
        let d = (self.cov[i][i] * self.cov[j][j]).sqrt();
        if d > 0.0 {
            self.cov[i][j] / d
        } else {
            0.0
        }
    }

    /// Mean and variance of `Σ_j φ(X_j)`, with the cross terms approximated
    /// by the correlation of the underlying gains.
    fn transformed_sum(&self, phi: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
        let m = self.laws.len();
        let mut means = Vec::with_capacity(m);
        let mut sds = Vec::with_capacity(m);
        for law in &self.laws {
            let mean = law.expect(&phi)?;
            let second = law.expect(|x| {
                let v = phi(x);
                v * v
            })?;
            means.push(mean);
            sds.push((second - mean * mean).max(0.0).sqrt());
        }
        let mut variance = 0.0;
        for i in 0..m {
            for j in 0..m {
                let r = if i == j { 1.0 } else { self.correlation(i, j) };
                variance += r * sds[i] * sds[j];
            }
        }
        Ok((means.iter().sum(), variance.max(0.0)))
    }
}

/// Fits the per-slot energy of one group; `nonlinear_fit` selects the recipe
/// for the saturating harvester.
pub fn fit_energy_distribution_with(
    params: &SystemParams,
    mode: &RisMode,
    model: &EhModel,
    nonlinear_fit: NonlinearEnergyFit,
) -> Result<EnergyLaw> {
    params.validate()?;
    mode.validate()?;
    model.validate()?;
    let (fraction, duration) = mode.harvest_window(params.t_s);
    let q = fraction * params.source_path_gain() * params.p_tx;
    if q == 0.0 || duration == 0.0 {
        return Ok(EnergyLaw::Degenerate(0.0));
    }
    let corr = params.correlation_matrix()?;
    let gains = ElementGains::new(&corr, params.k_h, params.beta_gain);
    let degenerate = |mean: f64, variance: f64| variance <= 1e-14 * mean * mean;

    match *model {
        EhModel::Linear => {
            let mean: f64 = gains.laws.iter().map(|l| l.mean()).sum();
            let variance: f64 = gains.cov.iter().flatten().sum();
            let (mean, variance) = (duration * q * mean, (duration * q).powi(2) * variance);
            if degenerate(mean, variance) {
                return Ok(EnergyLaw::Degenerate(mean));
            }
            Ok(EnergyLaw::Gamma(GammaFit::from_moments(mean, variance)?))
        }
        EhModel::Nonlinear { a, b, c } => match nonlinear_fit {
            NonlinearEnergyFit::Gamma => {
                let (mean, variance) = gains.transformed_sum(|x| model.output_power(q * x))?;
                let (mean, variance) = (duration * mean, duration * duration * variance);
                if degenerate(mean, variance) {
                    return Ok(EnergyLaw::Degenerate(mean));
                }
                Ok(EnergyLaw::Gamma(GammaFit::from_moments(mean, variance)?))
            }
            NonlinearEnergyFit::ReflectedInverseGamma => {
                let (mean, variance) = gains.transformed_sum(|x| 1.0 / (q * x + c))?;
                let m = corr.dim() as f64;
                let slope = duration * (a * c - b);
                let offset = slope * m / c;
                if degenerate(mean, variance) {
                    return Ok(EnergyLaw::Degenerate(offset - slope * mean));
                }
                let shape = mean * mean / variance + 2.0;
                Ok(EnergyLaw::ReflectedInverseGamma {
                    offset,
                    slope,
                    shape,
                    scale: mean * (shape - 1.0),
                })
            }
        },
    }
}
