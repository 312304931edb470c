//! Evaluates the special functions the analysis is built on.
//!
//! ```text
//! cargo run --release --example special_functions
//! ```

use ris_select::specfun::{
    bessel_i_scaled, reg_incomplete_beta, reg_lower_incomplete_gamma, sinc_corr,
};

fn main() -> ris_select::Result<()> {
    println!("{:>6} {:>8} {:>22}", "s", "x", "P(s, x)");
    for (s, x) in [(0.5, 0.1), (2.0, 1.5), (10.0, 8.0), (50.0, 60.0)] {
        println!(
            "{s:>6} {x:>8} {:>22.15e}",
            reg_lower_incomplete_gamma(s, x)?
        );
    }

    println!("\n{:>6} {:>6} {:>6} {:>22}", "x", "a", "b", "I_x(a, b)");
    for (x, a, b) in [(0.3, 2.0, 5.0), (0.9, 20.0, 1.0), (0.5, 0.5, 0.5)] {
        println!(
            "{x:>6} {a:>6} {b:>6} {:>22.15e}",
            reg_incomplete_beta(x, a, b)?
        );
    }

    println!("\n{:>6} {:>8} {:>22}", "order", "x", "e^-x I_v(x)");
    for (v, x) in [(0.0, 1.0), (1.5, 10.0), (20.0, 300.0)] {
        println!("{v:>6} {x:>8} {:>22.15e}", bessel_i_scaled(v, x)?);
    }

    let lambda = 0.1;
    println!("\nelement correlation vs spacing (wavelength {lambda} m)");
    for frac in [0.125, 0.25, 0.5, 1.0] {
        println!("  {frac:>5} λ  {:+.6}", sinc_corr(frac * lambda, lambda)?);
    }
    Ok(())
}
