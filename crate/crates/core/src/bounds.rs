//! Feasible ranges of the splitting factor `ρ` and switching fraction `ζ`
//! for a single group and a fixed channel realisation.
//!
//! The lower end of each range is where the group harvests exactly the energy
//! it needs; the upper end is where the remaining signal exactly supports the
//! requested rate. Linear-harvester forms use the sum of element gains; the
//! nonlinear forms use the best element gain for the energy side and the worst
//! one for the rate side.

use std::fmt;

use crate::channel::{composite, ComplexVector, SystemParams};
use crate::energy::{EhModel, PowerBudget};
use crate::error::{Error, Result};

/// Why a range is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleCause {
    /// Even harvesting everything does not cover the energy requirement.
    EnergyLimited,
    /// Even forwarding everything does not support the rate.
    RateLimited,
    /// Each requirement is reachable alone, but not both at once.
    EnergyRateConflict,
    /// All source-side gains are zero.
    ZeroChannel,
    /// The per-element energy requirement exceeds the harvester's saturation.
    Saturation,
    /// The end-to-end SNR is zero while a positive rate is requested.
    ZeroSnr,
}

impl fmt::Display for InfeasibleCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfeasibleCause::EnergyLimited => "energy-limited",
            InfeasibleCause::RateLimited => "rate-limited",
            InfeasibleCause::EnergyRateConflict => "energy-rate-conflict",
            InfeasibleCause::ZeroChannel => "zero-channel",
            InfeasibleCause::Saturation => "saturation",
            InfeasibleCause::ZeroSnr => "zero-snr",
        })
    }
}

/// Range of admissible splitting values. Both ends are clamped to `[0, 1]`;
/// `feasible` is decided on the unclamped values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleInterval {
    pub lower: f64,
    pub upper: f64,
    pub feasible: bool,
    pub cause: Option<InfeasibleCause>,
}

impl FeasibleInterval {
    fn from_raw(lower: f64, upper: f64) -> Self {
        let cause = if lower > 1.0 {
            Some(InfeasibleCause::EnergyLimited)
        } else if upper < 0.0 {
            Some(InfeasibleCause::RateLimited)
        } else if lower > upper {
            Some(InfeasibleCause::EnergyRateConflict)
        } else {
            None
        };
        Self {
            lower: clamp_unit(lower),
            upper: clamp_unit(upper),
            feasible: cause.is_none(),
            cause,
        }
    }

    fn infeasible(cause: InfeasibleCause, lower: f64, upper: f64) -> Self {
        Self {
            lower: clamp_unit(lower),
            upper: clamp_unit(upper),
            feasible: false,
            cause: Some(cause),
        }
    }

    pub fn width(&self) -> f64 {
        if self.feasible {
            self.upper - self.lower
        } else {
            0.0
        }
    }
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        v
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// One group's channels, summarised for the bound formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSnapshot {
    pub tilde_h: ComplexVector,
    pub tilde_g: ComplexVector,
    /// Smallest source-side element gain `min |h̃_i|²`.
    pub h_min_sq: f64,
    /// Largest source-side element gain `max |h̃_i|²`.
    pub h_max_sq: f64,
    /// `|g_c|²|h_c|²`.
    pub z: f64,
}

impl ChannelSnapshot {
    pub fn new(tilde_h: ComplexVector, tilde_g: ComplexVector) -> Result<Self> {
        if tilde_h.is_empty() || tilde_h.len() != tilde_g.len() {
            return Err(Error::DimensionMismatch {
                expected: tilde_h.len().max(1),
                got: tilde_g.len(),
            });
        }
        let (h_min_sq, h_max_sq) = tilde_h
            .power_gains()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        let z = composite(&tilde_h).norm_sqr() * composite(&tilde_g).norm_sqr();
        Ok(Self {
            tilde_h,
            tilde_g,
            h_min_sq,
            h_max_sq,
            z,
        })
    }

    pub fn m(&self) -> usize {
        self.tilde_h.len()
    }

    /// `Σ |h̃_i|²`.
    pub fn h_sum_sq(&self) -> f64 {
        self.tilde_h.power_gains().sum()
    }

    /// `|g_c|²`.
    pub fn g_c_sq(&self) -> f64 {
        composite(&self.tilde_g).norm_sqr()
    }
}

fn check_rate(r_req: f64) -> Result<()> {
    if !(r_req >= 0.0) || !r_req.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "required rate must be nonnegative and finite, got {r_req}"
        )));
    }
    Ok(())
}

fn nonlinear_constants(model: &EhModel) -> Result<(f64, f64, f64)> {
    model.validate()?;
    match *model {
        EhModel::Nonlinear { a, b, c } => Ok((a, b, c)),
        EhModel::Linear => Err(Error::InvalidParameter(
            "nonlinear bound requested for a linear harvester".into(),
        )),
    }
}

/// `2^R - 1`.
fn snr_needed(r_req: f64) -> f64 {
    (r_req * std::f64::consts::LN_2).exp_m1()
}

/// `(1 - x)/x · gain >= 2^R - 1` rearranged for `x`.
fn split_upper(gain: f64, r_req: f64) -> f64 {
    let need = snr_needed(r_req);
    if need == 0.0 {
        1.0
    } else {
        gain / (need + gain)
    }
}

/// `1 - R / log2(1 + snr)`.
fn switch_upper(snr: f64, r_req: f64) -> f64 {
    if r_req == 0.0 {
        return 1.0;
    }
    1.0 - r_req * std::f64::consts::LN_2 / snr.ln_1p()
}

/// Power splitting, linear harvester.
pub fn rho_bounds_linear(
    params: &SystemParams,
    budget: &PowerBudget,
    snap: &ChannelSnapshot,
    r_req: f64,
) -> Result<FeasibleInterval> {
    check_rate(r_req)?;
    let m = snap.m();
    let s = snap.h_sum_sq();
    let power = budget.group_power(m);
    if s == 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroChannel,
            1.0,
            0.0,
        ));
    }
    let lower = power / (params.source_path_gain() * params.p_tx * s);
    // Harvested energy at the operating point equals the requirement, which
    // eliminates the transmit power from the SNR.
    let e_req = params.t_s * power;
    let eta = params.rho_l * e_req * params.d_rd.powf(-params.alpha) * snap.z
        / (params.t_s * params.noise_power * s);
    if eta == 0.0 && r_req > 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroSnr,
            lower,
            0.0,
        ));
    }
    Ok(FeasibleInterval::from_raw(lower, split_upper(eta, r_req)))
}

/// Power splitting, saturating harvester.
pub fn rho_bounds_nonlinear(
    params: &SystemParams,
    budget: &PowerBudget,
    model: &EhModel,
    snap: &ChannelSnapshot,
    r_req: f64,
) -> Result<FeasibleInterval> {
    check_rate(r_req)?;
    let (a, b, c) = nonlinear_constants(model)?;
    let m = snap.m() as f64;
    // Output power each element must deliver.
    let per_element = budget.group_power(snap.m()) / m;
    let headroom = a - per_element - b / c;
    if headroom <= 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::Saturation,
            1.0,
            0.0,
        ));
    }
    if snap.h_max_sq == 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroChannel,
            1.0,
            0.0,
        ));
    }
    let lower =
        c * per_element / (params.source_path_gain() * params.p_tx * snap.h_max_sq * headroom);
    if snap.h_min_sq == 0.0 {
        // Worst element receives nothing: no transmit power can satisfy it.
        let upper = if r_req == 0.0 { 1.0 } else { 0.0 };
        let cause = if r_req == 0.0 {
            InfeasibleCause::ZeroChannel
        } else {
            InfeasibleCause::ZeroSnr
        };
        return Ok(FeasibleInterval::infeasible(cause, lower, upper));
    }
    let kappa = c * per_element * params.rho_l * params.d_rd.powf(-params.alpha) * snap.z
        / (snap.h_min_sq * headroom * params.noise_power);
    if kappa == 0.0 && r_req > 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroSnr,
            lower,
            0.0,
        ));
    }
    Ok(FeasibleInterval::from_raw(lower, split_upper(kappa, r_req)))
}

/// Time switching, linear harvester.
pub fn zeta_bounds_linear(
    params: &SystemParams,
    budget: &PowerBudget,
    snap: &ChannelSnapshot,
    r_req: f64,
) -> Result<FeasibleInterval> {
    check_rate(r_req)?;
    let m = snap.m() as f64;
    let incident = params.p_tx * params.source_path_gain() * snap.h_sum_sq();
    let lower = budget.group_power(snap.m()) / (m * budget.p_t + incident);
    if !lower.is_finite() {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroChannel,
            1.0,
            0.0,
        ));
    }
    let snr = params.snr_per_unit_gain() * snap.z;
    if snr == 0.0 && r_req > 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroSnr,
            lower,
            0.0,
        ));
    }
    Ok(FeasibleInterval::from_raw(lower, switch_upper(snr, r_req)))
}

/// Time switching, saturating harvester.
pub fn zeta_bounds_nonlinear(
    params: &SystemParams,
    budget: &PowerBudget,
    model: &EhModel,
    snap: &ChannelSnapshot,
    r_req: f64,
) -> Result<FeasibleInterval> {
    check_rate(r_req)?;
    nonlinear_constants(model)?;
    let m = snap.m() as f64;
    let best_incident = params.source_path_gain() * params.p_tx * snap.h_max_sq;
    let lower =
        budget.group_power(snap.m()) / (m * (budget.p_t + model.output_power(best_incident)));
    if !lower.is_finite() {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroChannel,
            1.0,
            0.0,
        ));
    }
    // Worst case: every element at the weakest gain, added coherently.
    let snr = m * m * params.snr_per_unit_gain() * snap.h_min_sq * snap.g_c_sq();
    if snr == 0.0 && r_req > 0.0 {
        return Ok(FeasibleInterval::infeasible(
            InfeasibleCause::ZeroSnr,
            lower,
            0.0,
        ));
    }
    Ok(FeasibleInterval::from_raw(lower, switch_upper(snr, r_req)))
}

/// Which splitting parameter to bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundTarget {
    /// `ρ`, power splitting.
    #[default]
    Rho,
    /// `ζ`, time switching.
    Zeta,
}

/// Dispatches to the bound matching the target and harvester.
pub fn feasible_interval(
    target: BoundTarget,
    params: &SystemParams,
    budget: &PowerBudget,
    model: &EhModel,
    snap: &ChannelSnapshot,
    r_req: f64,
) -> Result<FeasibleInterval> {
    match (target, model.is_linear()) {
        (BoundTarget::Rho, true) => rho_bounds_linear(params, budget, snap, r_req),
        (BoundTarget::Rho, false) => rho_bounds_nonlinear(params, budget, model, snap, r_req),
        (BoundTarget::Zeta, true) => zeta_bounds_linear(params, budget, snap, r_req),
        (BoundTarget::Zeta, false) => zeta_bounds_nonlinear(params, budget, model, snap, r_req),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn snapshot(h: &[f64], g: &[f64]) -> ChannelSnapshot {
        let v = |x: &[f64]| ComplexVector(x.iter().map(|&r| Complex64::new(r, 0.0)).collect());
        ChannelSnapshot::new(v(h), v(g)).unwrap()
    }

    #[test]
    fn zero_rate_opens_upper_end() {
        let p = SystemParams::default();
        let b = PowerBudget::default();
        let nl = EhModel::DEFAULT_NONLINEAR;
        let s = snapshot(&[1.0, 0.5, 2.0], &[1.0, 1.0, 1.0]);
        assert_eq!(rho_bounds_linear(&p, &b, &s, 0.0).unwrap().upper, 1.0);
        assert_eq!(
            rho_bounds_nonlinear(&p, &b, &nl, &s, 0.0).unwrap().upper,
            1.0
        );
        assert_eq!(zeta_bounds_linear(&p, &b, &s, 0.0).unwrap().upper, 1.0);
        assert_eq!(
            zeta_bounds_nonlinear(&p, &b, &nl, &s, 0.0).unwrap().upper,
            1.0
        );
    }

    #[test]
    fn strong_channels_close_lower_end() {
        let p = SystemParams::default();
        let b = PowerBudget::default();
        let s = snapshot(&[1e12, 1e12], &[1.0, 1.0]);
        assert!(rho_bounds_linear(&p, &b, &s, 1.0).unwrap().lower < 1e-12);
        assert!(
            rho_bounds_nonlinear(&p, &b, &EhModel::DEFAULT_NONLINEAR, &s, 1.0)
                .unwrap()
                .lower
                < 1e-12
        );
    }

    #[test]
    fn rate_at_capacity_closes_switching_range() {
        let p = SystemParams::default();
        let b = PowerBudget::default();
        let s = snapshot(&[3.0, 2.0], &[1.0, 2.0]);
        let r_arc = (1.0 + p.snr_per_unit_gain() * s.z).log2();
        let iv = zeta_bounds_linear(&p, &b, &s, r_arc).unwrap();
        assert!(iv.upper.abs() < 1e-12);
    }

    #[test]
    fn saturating_switching_limit() {
        let p = SystemParams {
            p_tx: 1e40,
            ..SystemParams::default()
        };
        let b = PowerBudget::default();
        let nl = EhModel::DEFAULT_NONLINEAR;
        let s = snapshot(&[1.0, 0.5, 2.0], &[1.0, 1.0, 1.0]);
        let iv = zeta_bounds_nonlinear(&p, &b, &nl, &s, 1.0).unwrap();
        let limit = b.group_power(3) / (3.0 * (b.p_t + nl.saturation_power()));
        assert!((iv.lower - limit).abs() < 1e-12);
    }

    #[test]
    fn zero_channel_reported() {
        let p = SystemParams::default();
        let b = PowerBudget::default();
        let s = snapshot(&[0.0, 0.0], &[1.0, 1.0]);
        let iv = rho_bounds_linear(&p, &b, &s, 1.0).unwrap();
        assert!(!iv.feasible);
        assert_eq!(iv.cause, Some(InfeasibleCause::ZeroChannel));
        let iv = zeta_bounds_linear(&p, &b, &s, 1.0).unwrap();
        assert!(!iv.feasible);
    }

    #[test]
    fn saturation_reported() {
        let p = SystemParams::default();
        let b = PowerBudget::new(1.0, 0.0).unwrap();
        let s = snapshot(&[1.0, 1.0], &[1.0, 1.0]);
        let iv = rho_bounds_nonlinear(&p, &b, &EhModel::DEFAULT_NONLINEAR, &s, 1.0).unwrap();
        assert_eq!(iv.cause, Some(InfeasibleCause::Saturation));
    }

    #[test]
    fn weak_source_is_energy_limited() {
        let p = SystemParams::default();
        let b = PowerBudget::default();
        let s = snapshot(&[1.0, 1.0], &[1.0, 1.0]);
        let iv = rho_bounds_linear(&p, &b, &s, 1.0).unwrap();
        assert_eq!(iv.cause, Some(InfeasibleCause::EnergyLimited));
        assert_eq!(iv.lower, 1.0);
    }

    #[test]
    fn linear_bounds_rejects_negative_rate() {
        let p = SystemParams::default();
        let s = snapshot(&[1.0], &[1.0]);
        assert!(rho_bounds_linear(&p, &PowerBudget::default(), &s, -1.0).is_err());
    }
}
