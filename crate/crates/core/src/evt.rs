//! Gumbel-limit approximation of the k-th best outage for many groups.
//!
//! For a parent law in the Gumbel domain of attraction the k-th largest of
//! `B` draws, standardised as `(x - location)/scale`, converges to
//! `H(x) Σ_{j<k} e^{-jx}/j!` with `H(x) = exp(-e^{-x})`. The constants used
//! here are the usual von Mises choice: location at the `1 - 1/B` quantile,
//! scale equal to the reciprocal hazard rate there.

use crate::error::{domain, Error, Result};
use crate::specfun::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvtConstants {
    pub location: f64,
    pub scale: f64,
}

/// `exp(-exp(-x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Limiting CDF of the k-th largest value in standardised units.
pub fn kth_limit_cdf(x: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::KOutOfRange { k, n: 0 });
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    // Σ_{j<k} t^j e^{-t}/j! with t = e^{-x}, summed in log space so that very
    // negative x does not overflow.
    let ln_t = -x;
    let t = ln_t.exp();
    let sum: f64 = (0..k)
        .map(|j| (j as f64 * ln_t - t - ln_gamma(j as f64 + 1.0)).exp())
        .sum();
    Ok(sum.clamp(0.0, 1.0))
}

/// Location and scale for `b` draws from a parent with the given CDF and
/// density.
pub fn normalizing_constants(
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
    b: f64,
) -> Result<EvtConstants> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(domain(
            "normalizing_constants",
            format!("need more than one draw, got {b}"),
        ));
    }
    let target = 1.0 - 1.0 / b;
    let location = quantile(&cdf, target, "normalizing_constants")?;
    let density = pdf(location);
    if !(density > 0.0) || !density.is_finite() {
        return Err(domain(
            "normalizing_constants",
            format!("density at the location is {density}"),
        ));
    }
    let scale = (1.0 - cdf(location)) / density;
    if !(scale > 0.0) {
        return Err(domain(
            "normalizing_constants",
            format!("nonpositive scale {scale}"),
        ));
    }
    Ok(EvtConstants { location, scale })
}

/// Solves `cdf(x) = target` by bisection after growing a bracket around 0.
pub(crate) fn quantile(
    cdf: &impl Fn(f64) -> f64,
    target: f64,
    function: &'static str,
) -> Result<f64> {
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let mut grown = 0;
    while cdf(hi) < target {
        hi = 2.0 * hi + 1.0;
        grown += 1;
        if grown > 2000 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                function,
                iterations: grown,
            });
        }
    }
    while cdf(lo) >= target {
        if lo < -1e300 {
            // Every point satisfies the target: the law sits at its lower end.
            return Ok(lo);
        }
        hi = lo;
        lo = 2.0 * lo - 1.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        function,
        iterations: 400,
    })
}

/// Asymptotic outage of the k-th best group at threshold `x`.
pub fn outage_evt(x: f64, k: usize, constants: &EvtConstants) -> Result<f64> {
    if !(constants.scale > 0.0) {
        return Err(domain(
            "outage_evt",
            format!("scale must be positive, got {}", constants.scale),
        ));
    }
    kth_limit_cdf((x - constants.location) / constants.scale, k)
}

/// Reciprocal hazard over location at two sample sizes. In the Gumbel domain
/// the ratio shrinks as the sample grows; a heavy (Fréchet-type) tail keeps
/// it roughly constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDiagnostic {
    pub small_sample_ratio: f64,
    pub large_sample_ratio: f64,
    pub heavy_tail_suspected: bool,
}

pub fn tail_diagnostic(
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
) -> Result<TailDiagnostic> {
    let ratio = |b: f64| -> Result<f64> {
        let c = normalizing_constants(&cdf, &pdf, b)?;
        Ok(c.scale / c.location.abs().max(f64::MIN_POSITIVE))
    };
    let small = ratio(10.0)?;
    let large = ratio(1e5)?;
    let heavy = large > 0.6 * small;
    if heavy {
        log::warn!(
            "parent law looks heavy-tailed (hazard ratio {small:.3} -> {large:.3}); the Gumbel limit may not apply"
        );
    }
    Ok(TailDiagnostic {
        small_sample_ratio: small,
        large_sample_ratio: large,
        heavy_tail_suspected: heavy,
    })
}
