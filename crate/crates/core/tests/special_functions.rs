use std::f64::consts::PI;

use ris_select::specfun::quad::{integrate, integrate_to_infinity};
use ris_select::specfun::{
    bessel_i, bessel_i_scaled, ln_beta, ln_gamma, reg_incomplete_beta, reg_lower_incomplete_gamma,
    reg_upper_incomplete_gamma, sinc_corr,
};

fn close(got: f64, want: f64, tol: f64) {
    assert!(
        (got - want).abs() <= tol,
        "got {got:e}, want {want:e} (tol {tol:e})"
    );
}

#[test]
fn gamma_function_known_values() {
    close(ln_gamma(1.0), 0.0, 1e-15);
    close(ln_gamma(5.0), 24f64.ln(), 1e-14);
    close(ln_gamma(0.5), PI.sqrt().ln(), 1e-14);
    close(ln_beta(2.0, 3.0), (1.0f64 / 12.0).ln(), 1e-14);
}

#[test]
fn incomplete_gamma_matches_quadrature() {
    for &s in &[1.0, 1.7, 3.0, 8.5, 25.0] {
        for &x in &[0.3, 1.0, 4.0, 12.0, 30.0] {
            let density = |t: f64| ((s - 1.0) * t.ln() - t - ln_gamma(s)).exp();
            let lower = integrate(density, 0.0, x, 1e-14, 1e-13, 2000).unwrap();
            let upper = integrate_to_infinity(density, x, 1e-15, 1e-12, 2000).unwrap();
            close(reg_lower_incomplete_gamma(s, x).unwrap(), lower, 1e-11);
            close(reg_upper_incomplete_gamma(s, x).unwrap(), upper, 1e-11);
        }
    }
}

#[test]
fn incomplete_gamma_complements() {
    for &s in &[0.1, 0.9, 4.0, 60.0] {
        for &x in &[0.01, 0.5, 3.0, 70.0] {
            let p = reg_lower_incomplete_gamma(s, x).unwrap();
            let q = reg_upper_incomplete_gamma(s, x).unwrap();
            close(p + q, 1.0, 1e-14);
        }
    }
    assert_eq!(reg_lower_incomplete_gamma(2.0, 0.0).unwrap(), 0.0);
    assert!(reg_lower_incomplete_gamma(-1.0, 1.0).is_err());
    assert!(reg_lower_incomplete_gamma(1.0, -1.0).is_err());
}

#[test]
fn incomplete_beta_matches_quadrature() {
    for &(a, b) in &[
        (1.0, 1.0),
        (2.0, 5.0),
        (3.5, 1.5),
        (10.0, 12.0),
        (1.2, 30.0),
    ] {
        for &x in &[0.05, 0.3, 0.5, 0.8, 0.97] {
            let density =
                |t: f64| ((a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p() - ln_beta(a, b)).exp();
            let want = integrate(density, 0.0, x, 1e-15, 1e-13, 2000).unwrap();
            close(reg_incomplete_beta(x, a, b).unwrap(), want, 1e-11);
        }
    }
}

#[test]
fn incomplete_beta_symmetry_and_edges() {
    for &(x, a, b) in &[(0.2, 0.5, 3.0), (0.7, 40.0, 2.0), (0.999, 0.1, 0.1)] {
        let direct = reg_incomplete_beta(x, a, b).unwrap();
        let mirrored = reg_incomplete_beta(1.0 - x, b, a).unwrap();
        close(direct + mirrored, 1.0, 1e-13);
    }
    assert_eq!(reg_incomplete_beta(0.0, 2.0, 3.0).unwrap(), 0.0);
    assert_eq!(reg_incomplete_beta(1.0, 2.0, 3.0).unwrap(), 1.0);
    assert!(reg_incomplete_beta(1.5, 2.0, 3.0).is_err());
    assert!(reg_incomplete_beta(0.5, 0.0, 3.0).is_err());
}

#[test]
fn bessel_matches_integral_representation() {
    for n in 0..6 {
        for &x in &[0.1, 1.0, 5.0, 20.0] {
            // Scaled integrand e^{x(cos θ - 1)} cos(nθ)/π avoids overflow. It is
            // O(1) while the result can be tiny, so the oracle only resolves
            // an absolute error near machine epsilon.
            let f = |t: f64| (x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos() / PI;
            let want = integrate(f, 0.0, PI, 1e-16, 1e-13, 2000).unwrap();
            let got = bessel_i_scaled(n as f64, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-11 * want.abs() + 1e-15,
                "n={n} x={x}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn bessel_recurrence_and_scaling() {
    for &nu in &[0.5, 1.3, 4.0, 11.7] {
        for &x in &[0.2, 3.0, 40.0] {
            let lhs = bessel_i_scaled(nu - 1.0, x).unwrap() - bessel_i_scaled(nu + 1.0, x).unwrap();
            let rhs = 2.0 * nu / x * bessel_i_scaled(nu, x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs(), "nu={nu} x={x}");
        }
    }
    let x = 2.5;
    let scaled = bessel_i_scaled(1.0, x).unwrap();
    close(bessel_i(1.0, x).unwrap(), scaled * x.exp(), 1e-13 * x.exp());
    // I_{1/2}(x) = sqrt(2/(πx)) sinh x.
    close(
        bessel_i(0.5, x).unwrap(),
        (2.0 / (PI * x)).sqrt() * x.sinh(),
        1e-13,
    );
}

#[test]
fn sinc_correlation_values() {
    close(sinc_corr(0.0, 0.1).unwrap(), 1.0, 0.0);
    close(sinc_corr(0.05, 0.1).unwrap(), 0.0, 1e-16);
    close(sinc_corr(0.025, 0.1).unwrap(), 2.0 / PI, 1e-15);
    assert!(sinc_corr(0.1, 0.0).is_err());
}

#[test]
fn quadrature_handles_known_integrals() {
    close(
        integrate(|x| x.sin(), 0.0, PI, 1e-14, 1e-14, 200).unwrap(),
        2.0,
        1e-13,
    );
    close(
        integrate_to_infinity(|x| (-x).exp(), 0.0, 1e-14, 1e-14, 200).unwrap(),
        1.0,
        1e-12,
    );
    close(
        integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, 1e-12, 1e-12, 500).unwrap(),
        PI / 2.0,
        1e-9,
    );
}
