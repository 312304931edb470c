//! Harvesting laws and the energy each group must collect per slot.

use crate::error::{Error, Result};
use crate::units::dbm_to_watts;

/// Conversion law from incident RF power to harvested DC power.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EhModel {
    /// Harvested power equals incident power.
    #[default]
    Linear,
    /// Saturating rectifier `(a p + b)/(p + c) - b/c`, with `b` and `c`
    /// applied to powers in watts.
    Nonlinear { a: f64, b: f64, c: f64 },
}

impl EhModel {
    /// Rectifier constants used throughout the examples.
    pub const DEFAULT_NONLINEAR: EhModel = EhModel::Nonlinear {
        a: 2.463,
        b: 1.635,
        c: 0.826,
    };

    pub fn nonlinear(a: f64, b: f64, c: f64) -> Result<Self> {
        let model = EhModel::Nonlinear { a, b, c };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if let EhModel::Nonlinear { a, b, c } = *self {
            if !(c > 0.0) || !(b > 0.0) || !(a > b / c) || !a.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "nonlinear harvester needs c > 0 and a > b/c > 0, got a={a}, b={b}, c={c}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, EhModel::Linear)
    }

    /// DC power harvested from incident power `p` (watts).
    pub fn output_power(&self, p: f64) -> f64 {
        match *self {
            EhModel::Linear => p,
            EhModel::Nonlinear { a, b, c } => {
                // (ap + b)/(p + c) - b/c = p(ac - b)/(c(p + c)), no cancellation.
                if p.is_infinite() {
                    a - b / c
                } else {
                    p * (a * c - b) / (c * (p + c))
                }
            }
        }
    }

    /// Supremum of the per-element output power (`a - b/c`), infinite for
    /// the linear law.
    pub fn saturation_power(&self) -> f64 {
        match *self {
            EhModel::Linear => f64::INFINITY,
            EhModel::Nonlinear { a, b, c } => a - b / c,
        }
    }

    /// Incident power that produces output `q`, or `None` if `q` is at or
    /// beyond saturation.
    pub fn inverse_output(&self, q: f64) -> Option<f64> {
        match *self {
            EhModel::Linear => Some(q.max(0.0)),
            EhModel::Nonlinear { a, b, c } => {
                let q = q.max(0.0);
                let sat = a - b / c;
                if q >= sat {
                    None
                } else {
                    // q c (p + c) = p (ac - b)  ⇒  p = q c² / (ac - b - q c)
                    Some(q * c * c / (c * (sat - q)))
                }
            }
        }
    }
}

/// Power drawn by the surface while it is configuring its elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    /// Phase-shift power per element, watts.
    pub p_t: f64,
    /// Controller power, watts.
    pub p_ph: f64,
}

impl Default for PowerBudget {
    fn default() -> Self {
        Self {
            p_t: dbm_to_watts(5.0),
            p_ph: dbm_to_watts(5.0),
        }
    }
}

impl PowerBudget {
    pub fn new(p_t: f64, p_ph: f64) -> Result<Self> {
        let budget = Self { p_t, p_ph };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_t >= 0.0)
            || !(self.p_ph >= 0.0)
            || !self.p_t.is_finite()
            || !self.p_ph.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "power budget must be nonnegative, got p_t={}, p_ph={}",
                self.p_t, self.p_ph
            )));
        }
        Ok(())
    }

    /// Total power of a group of `m` elements, `M P_t + P_ph`.
    pub fn group_power(&self, m: usize) -> f64 {
        m as f64 * self.p_t + self.p_ph
    }
}

/// Energy a group of `m` elements needs over a slot in power-splitting mode.
pub fn required_energy_ps(m: usize, budget: &PowerBudget, t_s: f64) -> f64 {
    t_s * budget.group_power(m)
}

/// Energy needed in time-switching mode, where the elements are only
/// configured for the last `(1 - ζ)` of the slot.
pub fn required_energy_ts(m: usize, budget: &PowerBudget, t_s: f64, zeta: f64) -> f64 {
    t_s * ((1.0 - zeta) * m as f64 * budget.p_t + budget.p_ph)
}

/// Energy harvested over `duration` seconds from per-element incident powers.
pub fn harvest(model: &EhModel, incident_powers: &[f64], duration: f64) -> Result<f64> {
    model.validate()?;
    if !(duration >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "harvest duration must be nonnegative, got {duration}"
        )));
    }
    let mut total = 0.0;
    for &p in incident_powers {
        if !(p >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "incident power must be nonnegative, got {p}"
            )));
        }
        total += model.output_power(p);
    }
    Ok(duration * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_needs_nothing() {
        let b = PowerBudget::new(0.0, 0.0).unwrap();
        assert_eq!(required_energy_ps(1, &b, 1e-4), 0.0);
    }

    #[test]
    fn default_budget_ten_elements() {
        let b = PowerBudget::default();
        let p = dbm_to_watts(5.0);
        let expected = 100e-6 * (10.0 * p + p);
        assert!((required_energy_ps(10, &b, 100e-6) - expected).abs() < 1e-20);
        assert!((required_energy_ps(10, &b, 200e-6) - 2.0 * expected).abs() < 1e-20);
    }

    #[test]
    fn time_switching_endpoints() {
        let b = PowerBudget::default();
        let t = 100e-6;
        assert_eq!(required_energy_ts(10, &b, t, 1.0), t * b.p_ph);
        assert_eq!(
            required_energy_ts(10, &b, t, 0.0),
            required_energy_ps(10, &b, t)
        );
        let mid = required_energy_ts(10, &b, t, 0.5);
        let avg = 0.5 * (t * b.p_ph + required_energy_ps(10, &b, t));
        assert!((mid - avg).abs() < 1e-18);
    }

    #[test]
    fn nothing_in_nothing_out() {
        for m in [EhModel::Linear, EhModel::DEFAULT_NONLINEAR] {
            assert_eq!(harvest(&m, &[0.0, 0.0, 0.0], 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn nonlinear_single_watt() {
        let e = harvest(&EhModel::DEFAULT_NONLINEAR, &[1.0], 1.0).unwrap();
        let direct = (2.463 + 1.635) / 1.826 - 1.635 / 0.826;
        assert!((e - direct).abs() < 1e-14);
        assert!((e - 0.2648).abs() < 5e-5);
    }

    #[test]
    fn nonlinear_saturates() {
        let m = EhModel::DEFAULT_NONLINEAR;
        let sat = m.saturation_power();
        assert!((harvest(&m, &[f64::INFINITY; 3], 2.0).unwrap() - 6.0 * sat).abs() < 1e-12);
        assert!(harvest(&m, &[1e9; 3], 2.0).unwrap() < 6.0 * sat);
    }

    #[test]
    fn inverse_output_round_trips() {
        let m = EhModel::DEFAULT_NONLINEAR;
        for &p in &[1e-6, 0.3, 5.0] {
            let q = m.output_power(p);
            assert!((m.inverse_output(q).unwrap() - p).abs() < 1e-12 * p.max(1.0));
        }
        assert!(m.inverse_output(m.saturation_power()).is_none());
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(EhModel::nonlinear(1.0, 1.0, 1.0).is_err());
        assert!(EhModel::nonlinear(2.0, 1.0, 0.0).is_err());
        assert!(harvest(&EhModel::Linear, &[-1.0], 1.0).is_err());
        assert!(harvest(&EhModel::Linear, &[1.0], -1.0).is_err());
    }
}
