//! Spatially correlated Rician channels and the law of the composite gain.
//!
//! Per-element fading is a complex Gaussian with line-of-sight mean
//! `sqrt(K/(K+1))` and scattered variance `1/(K+1)`, so every element has
//! unit second moment. Correlation enters as `sqrt(β) R^{1/2} h`, where `R`
//! is the sinc correlation of the element layout. A group's composite channel
//! is the plain sum of its correlated elements, hence again complex Gaussian,
//! and `|h_c|²` is a scaled non-central χ² with two degrees of freedom.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::specfun::{
    self, bessel_i_scaled, ln_gamma, quad, reg_lower_incomplete_gamma, reg_upper_incomplete_gamma,
};
use crate::units::{db_to_linear, dbm_to_watts};

/// Geometry of the elements inside one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// Uniform linear array with pitch equal to the spacing.
    #[default]
    Linear,
    /// Row-major planar grid, `ceil(sqrt(M))` elements per row.
    SquareGrid,
}

/// Physical constants of the link. All quantities are in linear SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Transmit power in watts.
    pub p_tx: f64,
    /// Path loss at 1 m (linear, dimensionless).
    pub rho_l: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Slot duration in seconds.
    pub t_s: f64,
    /// Carrier wavelength in metres.
    pub lambda: f64,
    /// Receiver noise power in watts.
    pub noise_power: f64,
    pub n_total: usize,
    pub m_per_group: usize,
    pub b_groups: usize,
    /// Source to surface distance in metres.
    pub d_sr: f64,
    /// Surface to destination distance in metres.
    pub d_rd: f64,
    /// Rician factor of the source side (`f64::INFINITY` is pure line of sight).
    pub k_h: f64,
    /// Rician factor of the destination side.
    pub k_g: f64,
    /// Link gain applied on top of the correlation (power, not amplitude).
    pub beta_gain: f64,
    /// Distance between neighbouring elements in metres.
    pub spacing: f64,
    pub layout: Layout,
}

impl Default for SystemParams {
    /// 30 dBm transmit power, 10^-3.53 path loss, 100 µs slots, 0.1 m
    /// wavelength, -104 dBm noise, 400 elements in 20 groups of 20 at λ/8.
    fn default() -> Self {
        let lambda = 0.1;
        Self {
            p_tx: dbm_to_watts(30.0),
            rho_l: db_to_linear(-35.3),
            alpha: 2.0,
            t_s: 100e-6,
            lambda,
            noise_power: dbm_to_watts(-104.0),
            n_total: 400,
            m_per_group: 20,
            b_groups: 20,
            d_sr: 15.0,
            d_rd: 20.0,
            k_h: 1.0,
            k_g: 1.0,
            beta_gain: 1.0,
            spacing: lambda / 8.0,
            layout: Layout::Linear,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.m_per_group == 0 || self.b_groups == 0 {
            return bad("m_per_group and b_groups must be at least 1".into());
        }
        if self.n_total != self.m_per_group * self.b_groups {
            return bad(format!(
                "n_total ({}) must equal m_per_group * b_groups ({} * {})",
                self.n_total, self.m_per_group, self.b_groups
            ));
        }
        for (name, v) in [
            ("rho_l", self.rho_l),
            ("t_s", self.t_s),
            ("lambda", self.lambda),
            ("noise_power", self.noise_power),
            ("d_sr", self.d_sr),
            ("d_rd", self.d_rd),
            ("beta_gain", self.beta_gain),
            ("spacing", self.spacing),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.p_tx >= 0.0) || !self.p_tx.is_finite() {
            return bad(format!("p_tx must be nonnegative, got {}", self.p_tx));
        }
        if !(self.k_h >= 0.0) || !(self.k_g >= 0.0) {
            return bad(format!(
                "Rician factors must be nonnegative, got {}, {}",
                self.k_h, self.k_g
            ));
        }
        if !(self.alpha >= 2.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be >= 2, got {}", self.alpha));
        }
        Ok(())
    }

    /// Sets `M` and `B` together, keeping `n_total` consistent.
    pub fn with_groups(mut self, m_per_group: usize, b_groups: usize) -> Self {
        self.m_per_group = m_per_group;
        self.b_groups = b_groups;
        self.n_total = m_per_group * b_groups;
        self
    }

    /// Large-scale gain of the source to surface hop, `ρ_L d_sr^-α`.
    pub fn source_path_gain(&self) -> f64 {
        self.rho_l * self.d_sr.powf(-self.alpha)
    }

    /// `P_tx ρ_L² (d_sr d_rd)^-α / σ²`: the end-to-end SNR per unit product
    /// gain `|g_c|²|h_c|²` with the whole signal reflected.
    pub fn snr_per_unit_gain(&self) -> f64 {
        self.p_tx * self.rho_l * self.rho_l * (self.d_sr * self.d_rd).powf(-self.alpha)
            / self.noise_power
    }

    pub fn correlation_matrix(&self) -> Result<CorrelationMatrix> {
        build_correlation_matrix(self.m_per_group, self.spacing, self.lambda, self.layout)
    }
}

/// Sinc spatial correlation of one group, together with its principal square
/// root.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
    sqrt: DMatrix<f64>,
    clamped: f64,
}

impl CorrelationMatrix {
    /// Uncorrelated elements.
    pub fn identity(m: usize) -> Self {
        Self {
            entries: DMatrix::identity(m, m),
            sqrt: DMatrix::identity(m, m),
            clamped: 0.0,
        }
    }

    /// Builds from an arbitrary symmetric matrix, clamping negative
    /// eigenvalues to zero before taking the square root.
    pub fn from_entries(entries: DMatrix<f64>) -> Result<Self> {
        let m = entries.nrows();
        if entries.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: entries.ncols(),
            });
        }
        let eig = SymmetricEigen::new(entries.clone());
        let mut clamped = 0.0;
        let roots = eig.eigenvalues.map(|l| {
            if l < 0.0 {
                clamped += -l;
                0.0
            } else {
                l.sqrt()
            }
        });
        let v = &eig.eigenvectors;
        let sqrt = v * DMatrix::from_diagonal(&roots) * v.transpose();
        let residual = (&sqrt * &sqrt - &entries).norm();
        if !residual.is_finite() || residual > 1e-8 * (m as f64).max(1.0) {
            return Err(Error::NotPsd { clamped });
        }
        if clamped > 0.0 {
            log::debug!("correlation matrix: clamped {clamped:.3e} of negative eigenvalue mass");
        }
        Ok(Self {
            entries,
            sqrt,
            clamped,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Principal square root `R^{1/2}` (symmetric).
    pub fn sqrt_entries(&self) -> &DMatrix<f64> {
        &self.sqrt
    }

    /// Total magnitude of the eigenvalues clamped to zero.
    pub fn clamped_mass(&self) -> f64 {
        self.clamped
    }

    /// Row sums of `R^{1/2}`; the composite channel is their dot product with
    /// the raw fading vector.
    pub fn sqrt_row_sums(&self) -> Vec<f64> {
        self.sqrt.row_iter().map(|r| r.sum()).collect()
    }
}

fn element_position(index: usize, m: usize, spacing: f64, layout: Layout) -> (f64, f64) {
    match layout {
        Layout::Linear => (index as f64 * spacing, 0.0),
        Layout::SquareGrid => {
            let per_row = (m as f64).sqrt().ceil() as usize;
            let (row, col) = (index / per_row, index % per_row);
            (col as f64 * spacing, row as f64 * spacing)
        }
    }
}

/// Sinc correlation matrix of `m` elements placed on `layout` with the given
/// pitch.
pub fn build_correlation_matrix(
    m: usize,
    spacing: f64,
    lambda: f64,
    layout: Layout,
) -> Result<CorrelationMatrix> {
    if m == 0 {
        return Err(domain("build_correlation_matrix", "m must be at least 1"));
    }
    if !(spacing > 0.0) {
        return Err(domain(
            "build_correlation_matrix",
            format!("spacing must be positive, got {spacing}"),
        ));
    }
    let pos: Vec<_> = (0..m)
        .map(|i| element_position(i, m, spacing, layout))
        .collect();
    let mut entries = DMatrix::identity(m, m);
    for p in 0..m {
        for q in (p + 1)..m {
            let d = (pos[p].0 - pos[q].0).hypot(pos[p].1 - pos[q].1);
            let r = specfun::sinc_corr(d, lambda)?;
            entries[(p, q)] = r;
            entries[(q, p)] = r;
        }
    }
    CorrelationMatrix::from_entries(entries)
}

/// Complex channel coefficients of one group.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.0.iter()
    }

    /// Per-element power gains `|x_i|²`.
    pub fn power_gains(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|c| c.norm_sqr())
    }
}

/// Line-of-sight amplitude and per-entry scattered variance of a unit-power
/// Rician coefficient with factor `k`.
pub fn rician_components(k: f64) -> (f64, f64) {
    if k.is_infinite() {
        (1.0, 0.0)
    } else {
        ((k / (k + 1.0)).sqrt(), 1.0 / (k + 1.0))
    }
}

/// Draws `m` i.i.d. unit-power Rician coefficients with factor `k_factor`.
pub fn sample_rician_vector<R: Rng + ?Sized>(
    m: usize,
    k_factor: f64,
    rng: &mut R,
) -> ComplexVector {
    let mut out = ComplexVector(Vec::with_capacity(m));
    fill_rician(&mut out.0, m, k_factor, rng);
    out
}

fn fill_rician<R: Rng + ?Sized>(buf: &mut Vec<Complex64>, m: usize, k_factor: f64, rng: &mut R) {
    let (los, var) = rician_components(k_factor);
    let sd = (0.5 * var).sqrt();
    buf.clear();
    buf.extend((0..m).map(|_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(los + sd * re, sd * im)
    }));
}

/// `sqrt(β) R^{1/2} raw`. The destination-side row vector `g R^{1/2}` gives
/// the same result because the square root is symmetric.
pub fn correlate(
    corr: &CorrelationMatrix,
    raw: &ComplexVector,
    beta_gain: f64,
) -> Result<ComplexVector> {
    let mut out = ComplexVector::default();
    correlate_into(corr, raw, beta_gain, &mut out)?;
    Ok(out)
}

fn correlate_into(
    corr: &CorrelationMatrix,
    raw: &ComplexVector,
    beta_gain: f64,
    out: &mut ComplexVector,
) -> Result<()> {
    let m = corr.dim();
    if raw.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: raw.len(),
        });
    }
    let gain = beta_gain.sqrt();
    let s = corr.sqrt_entries();
    out.0.clear();
    out.0.extend((0..m).map(|i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, h) in raw.0.iter().enumerate() {
            acc += h * s[(i, j)];
        }
        acc * gain
    }));
    Ok(())
}

/// Composite channel of a group: the sum of its correlated coefficients.
pub fn composite(tilde: &ComplexVector) -> Complex64 {
    tilde.0.iter().sum()
}

/// Which hop of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Source to surface (`h`).
    Source,
    /// Surface to destination (`g`).
    Destination,
}

/// Mean and variance of `|h_c|²` (or `|g_c|²`), plus the Gaussian parameters
/// of the composite channel itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeMoments {
    pub mean: f64,
    pub variance: f64,
    /// `|E[h_c]|²`.
    pub los_power: f64,
    /// `Var(h_c)`, the complex variance.
    pub diffuse: f64,
}

impl CompositeMoments {
    pub fn second_moment(&self) -> f64 {
        self.variance + self.mean * self.mean
    }

    pub fn law(&self) -> RicianPower {
        RicianPower {
            los: self.los_power,
            diffuse: self.diffuse,
        }
    }
}

/// Moments of a composite gain for Rician factor `k` under correlation `corr`.
///
/// The composite channel is `sqrt(β) Σ_j s_j h_j`, with `s_j` the row sums of
/// `R^{1/2}`, so its mean and variance follow from linearity.
pub fn composite_moments_for(corr: &CorrelationMatrix, k: f64, beta_gain: f64) -> CompositeMoments {
    let (los, var) = rician_components(k);
    let sums = corr.sqrt_row_sums();
    let total: f64 = sums.iter().sum();
    let mean_c = beta_gain.sqrt() * los * total;
    let diffuse = beta_gain * var * sums.iter().map(|s| s * s).sum::<f64>();
    let los_power = mean_c * mean_c;
    let mean = los_power + diffuse;
    let fourth = los_power * los_power + 4.0 * los_power * diffuse + 2.0 * diffuse * diffuse;
    CompositeMoments {
        mean,
        variance: (fourth - mean * mean).max(0.0),
        los_power,
        diffuse,
    }
}

pub fn composite_moments(params: &SystemParams, side: Side) -> Result<CompositeMoments> {
    let corr = params.correlation_matrix()?;
    let k = match side {
        Side::Source => params.k_h,
        Side::Destination => params.k_g,
    };
    Ok(composite_moments_for(&corr, k, params.beta_gain))
}

/// Shape/scale pair of a Gamma law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
}

impl GammaFit {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0) || !(scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma shape and scale must be positive, got {shape}, {scale}"
            )));
        }
        Ok(Self { shape, scale })
    }

    /// Matches the first two moments: shape = mean²/var, scale = var/mean.
    pub fn from_moments(mean: f64, variance: f64) -> Result<Self> {
        if !(mean > 0.0) || !(variance > 0.0) || !mean.is_finite() || !variance.is_finite() {
            return Err(Error::DegenerateFit { mean, variance });
        }
        Self::new(mean * mean / variance, variance / mean)
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        gamma_cdf(self, x)
    }

    /// Upper tail `1 - F(x)` without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        reg_upper_incomplete_gamma(self.shape, x / self.scale)
            .unwrap_or_else(|_| 1.0 - wilson_hilferty_cdf(self.shape, x / self.scale))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.shape < 1.0 {
                f64::INFINITY
            } else if self.shape == 1.0 {
                1.0 / self.scale
            } else {
                0.0
            };
        }
        ((self.shape - 1.0) * x.ln()
            - x / self.scale
            - ln_gamma(self.shape)
            - self.shape * self.scale.ln())
        .exp()
    }
}

// Normal approximation of the Gamma CDF, used only if the series or
// continued fraction fails to converge for an extreme shape.
fn wilson_hilferty_cdf(shape: f64, x: f64) -> f64 {
    let t = (x / shape).cbrt();
    let z = (t - 1.0 + 1.0 / (9.0 * shape)) * (9.0 * shape).sqrt();
    standard_normal_cdf(z)
}

pub(crate) fn standard_normal_cdf(z: f64) -> f64 {
    let t = z.abs() / std::f64::consts::SQRT_2;
    let erfc = reg_upper_incomplete_gamma(0.5, t * t).unwrap_or(0.0);
    if z >= 0.0 {
        1.0 - 0.5 * erfc
    } else {
        0.5 * erfc
    }
}

/// CDF of a fitted Gamma law, `P(shape, x/scale)`.
pub fn gamma_cdf(fit: &GammaFit, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_incomplete_gamma(fit.shape, x / fit.scale)
        .unwrap_or_else(|_| wilson_hilferty_cdf(fit.shape, x / fit.scale))
}

/// Gamma law matched to the mean and variance of `Z = |g_c|²|h_c|²`,
/// treating the two hops as independent.
pub fn fit_gamma_product(params: &SystemParams) -> Result<GammaFit> {
    let corr = params.correlation_matrix()?;
    fit_gamma_product_for(&corr, params.k_h, params.k_g, params.beta_gain)
}

pub fn fit_gamma_product_for(
    corr: &CorrelationMatrix,
    k_h: f64,
    k_g: f64,
    beta_gain: f64,
) -> Result<GammaFit> {
    let h = composite_moments_for(corr, k_h, beta_gain);
    let g = composite_moments_for(corr, k_g, beta_gain);
    let mean = h.mean * g.mean;
    let second = h.second_moment() * g.second_moment();
    let variance = second - mean * mean;
    // Relative cut-off: both hops deterministic leaves only rounding noise.
    if variance <= 1e-12 * mean * mean {
        return Err(Error::DegenerateFit { mean, variance });
    }
    GammaFit::from_moments(mean, variance)
}

/// Law of `|x|²` for `x ~ CN(μ, σ²)`: a non-central χ² with two degrees of
/// freedom scaled by `σ²/2`. `los = |μ|²`, `diffuse = σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianPower {
    pub los: f64,
    pub diffuse: f64,
}

impl RicianPower {
    pub fn mean(&self) -> f64 {
        self.los + self.diffuse
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.los * self.diffuse + self.diffuse * self.diffuse
    }

    /// Rician factor of this law, `|μ|²/σ²`.
    pub fn k_factor(&self) -> f64 {
        self.los / self.diffuse
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 || self.diffuse == 0.0 {
            return 0.0;
        }
        let s2 = self.diffuse;
        let arg = 2.0 * (self.los * x).sqrt() / s2;
        let gap = x.sqrt() - self.los.sqrt();
        let i0e = bessel_i_scaled(0.0, arg).unwrap_or(0.0);
        (-(gap * gap) / s2).exp() * i0e / s2
    }

    /// CDF as a Poisson mixture of Erlang CDFs, `Σ_j w_j P(1 + j, x/σ²)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if self.diffuse == 0.0 {
            return if x >= self.los { 1.0 } else { 0.0 };
        }
        let lam = self.los / self.diffuse;
        let y = x / self.diffuse;
        if lam == 0.0 {
            return -(-y).exp_m1();
        }
        let j_max = (lam + 40.0 * lam.sqrt() + 40.0).ceil() as usize;
        let (ln_lam, ln_y) = (lam.ln(), y.ln());
        // P(1 + j, y) = 1 - Σ_{i ≤ j} e^{-y} y^i / i!, both Poisson weights
        // advanced by their ratio in log space.
        let (mut ln_w, mut ln_e) = (-lam, -y);
        let mut cumulative = 0.0;
        let mut total = 0.0;
        for j in 0..=j_max {
            if j > 0 {
                let ln_j = (j as f64).ln();
                ln_w += ln_lam - ln_j;
                ln_e += ln_y - ln_j;
            }
            cumulative += ln_e.exp();
            total += ln_w.exp() * (1.0 - cumulative).max(0.0);
        }
        total.clamp(0.0, 1.0)
    }

    /// Interval outside of which the density is negligible (beyond 12
    /// standard deviations of the underlying Gaussian).
    pub fn support(&self) -> (f64, f64) {
        let amp = self.los.sqrt();
        let sd = self.diffuse.sqrt();
        let lo = (amp - 12.0 * sd).max(0.0);
        (lo * lo, (amp + 12.0 * sd).powi(2))
    }

    /// `E[f(X)]` by adaptive quadrature over the density.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        if self.diffuse == 0.0 {
            return Ok(f(self.los));
        }
        let (lo, hi) = self.support();
        let mode = self.los.max(lo);
        let g = |x: f64| f(x) * self.pdf(x);
        let mut total = 0.0;
        for (a, b) in [(lo, mode), (mode, hi)] {
            if b > a {
                total += quad::integrate(g, a, b, 1e-14, 1e-12, 4000)?;
            }
        }
        Ok(total)
    }
}

/// Density of a non-central χ² with `dof` degrees of freedom and
/// non-centrality `nc` (unit variance per real dimension).
pub fn noncentral_chi2_pdf(x: f64, dof: f64, nc: f64) -> Result<f64> {
    if !(x >= 0.0) || !(dof > 0.0) || !(nc >= 0.0) {
        return Err(domain(
            "noncentral_chi2_pdf",
            format!("need x >= 0, dof > 0, nc >= 0, got {x}, {dof}, {nc}"),
        ));
    }
    if x == 0.0 {
        return Ok(if dof == 2.0 {
            0.5 * (-0.5 * nc).exp()
        } else {
            0.0
        });
    }
    let order = 0.5 * dof - 1.0;
    if nc == 0.0 {
        // Central χ².
        let h = 0.5 * dof;
        return Ok(((h - 1.0) * x.ln() - 0.5 * x - ln_gamma(h) - h * 2f64.ln()).exp());
    }
    let delta = nc.sqrt();
    let arg = delta * x.sqrt();
    let scaled = bessel_i_scaled(order, arg)?;
    // e^{-(x+Δ²)/2} I(Δ√x) = e^{-(√x-Δ)²/2} · e^{-Δ√x} I(Δ√x)
    let gap = x.sqrt() - delta;
    Ok(0.5 * (x / nc).powf(0.25 * (dof - 2.0)) * (-0.5 * gap * gap).exp() * scaled)
}

/// Exact law of `Z = |h_c|²|g_c|²` for independent hops, evaluated by
/// quadrature over the destination-side gain. Used as a reference for the
/// Gamma approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductLaw {
    pub source: RicianPower,
    pub destination: RicianPower,
}

impl ProductLaw {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let corr = params.correlation_matrix()?;
        Ok(Self::for_correlation(
            &corr,
            params.k_h,
            params.k_g,
            params.beta_gain,
        ))
    }

    pub fn for_correlation(corr: &CorrelationMatrix, k_h: f64, k_g: f64, beta_gain: f64) -> Self {
        Self {
            source: composite_moments_for(corr, k_h, beta_gain).law(),
            destination: composite_moments_for(corr, k_g, beta_gain).law(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.source.mean() * self.destination.mean()
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let h = self.source;
        self.destination
            .expect(|y| if y > 0.0 { h.cdf(x / y) } else { 1.0 })
            .map(|v| v.clamp(0.0, 1.0))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let h = self.source;
        self.destination
            .expect(|y| if y > 0.0 { h.pdf(x / y) / y } else { 0.0 })
    }
}

/// One group's realisation: the correlated source-side vector (needed for
/// harvesting) and both composite channels.
#[derive(Debug, Clone, Default)]
pub struct GroupDraw {
    pub tilde_h: ComplexVector,
    pub h_c: Complex64,
    pub g_c: Complex64,
    raw: ComplexVector,
}

impl GroupDraw {
    /// `|g_c|²|h_c|²`, the gain seen at the destination under the optimal
    /// common phase shift.
    pub fn product_gain(&self) -> f64 {
        self.h_c.norm_sqr() * self.g_c.norm_sqr()
    }
}

/// Draws group channels for fixed parameters; holds the precomputed square
/// root so that it can be shared across workers.
#[derive(Debug, Clone)]
pub struct GroupSampler {
    corr: CorrelationMatrix,
    row_sums: Vec<f64>,
    k_h: f64,
    k_g: f64,
    beta_gain: f64,
}

impl GroupSampler {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(Self::with_correlation(
            params.correlation_matrix()?,
            params.k_h,
            params.k_g,
            params.beta_gain,
        ))
    }

    pub fn with_correlation(corr: CorrelationMatrix, k_h: f64, k_g: f64, beta_gain: f64) -> Self {
        let row_sums = corr.sqrt_row_sums();
        Self {
            corr,
            row_sums,
            k_h,
            k_g,
            beta_gain,
        }
    }

    pub fn correlation(&self) -> &CorrelationMatrix {
        &self.corr
    }

    /// Fills `draw` with a fresh realisation. The source-side raw vector is
    /// drawn first, then the destination side, entry by entry.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, draw: &mut GroupDraw) {
        let m = self.corr.dim();
        fill_rician(&mut draw.raw.0, m, self.k_h, rng);
        correlate_into(&self.corr, &draw.raw, self.beta_gain, &mut draw.tilde_h)
            .expect("raw vector has the sampler's dimension");
        draw.h_c = composite(&draw.tilde_h);
        fill_rician(&mut draw.raw.0, m, self.k_g, rng);
        // Σ_i (g R^{1/2})_i = Σ_j g_j · rowsum_j
        let g_c: Complex64 = draw
            .raw
            .0
            .iter()
            .zip(&self.row_sums)
            .map(|(g, s)| g * *s)
            .sum();
        draw.g_c = g_c * self.beta_gain.sqrt();
    }

    /// Draws only the product gain `|g_c|²|h_c|²`.
    pub fn sample_product_gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut composite_of = |k: f64| -> Complex64 {
            let (los, var) = rician_components(k);
            let sd = (0.5 * var).sqrt();
            let acc: Complex64 = self
                .row_sums
                .iter()
                .map(|s| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(los + sd * re, sd * im) * *s
                })
                .sum();
            acc * self.beta_gain.sqrt()
        };
        let h = composite_of(self.k_h);
        let g = composite_of(self.k_g);
        h.norm_sqr() * g.norm_sqr()
    }
}
