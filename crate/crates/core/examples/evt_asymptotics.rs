//! Compares the exact k-th best outage with its Gumbel limit as the number of
//! groups grows.
//!
//! ```text
//! cargo run --release --example evt_asymptotics
//! ```

use ris_select::channel::{ProductLaw, SystemParams};
use ris_select::evt::{normalizing_constants, outage_evt, tail_diagnostic};
use ris_select::selection::kth_best_outage;

fn main() -> ris_select::Result<()> {
    let params = SystemParams::default();
    let law = ProductLaw::new(&params)?;
    let cdf = |x: f64| law.cdf(x).unwrap_or(f64::NAN);
    let pdf = |x: f64| law.pdf(x).unwrap_or(f64::NAN);
    let diag = tail_diagnostic(cdf, pdf)?;
    println!(
        "tail check: hazard ratio {:.3} at B = 10, {:.3} at B = 1e5",
        diag.small_sample_ratio, diag.large_sample_ratio
    );

    let xs: Vec<f64> = (0..60)
        .map(|i| law.mean() * 10f64.powf(-1.0 + i as f64 / 29.5))
        .collect();
    let fx: Vec<f64> = xs.iter().map(|&x| cdf(x)).collect();
    println!(
        "{:>6} {:>4} {:>12} {:>12}",
        "groups", "k", "location", "sup |diff|"
    );
    for b in [20, 80, 140, 500] {
        let c = normalizing_constants(cdf, pdf, b as f64)?;
        for k in [1, 6] {
            let mut worst: f64 = 0.0;
            for (&x, &f) in xs.iter().zip(&fx) {
                worst = worst.max((outage_evt(x, k, &c)? - kth_best_outage(f, b, k)?).abs());
            }
            println!("{b:>6} {k:>4} {:>12.4e} {worst:>12.4}", c.location);
        }
    }
    Ok(())
}
