//! Fits a Gamma law to the end-to-end product gain and compares it with the
//! exact law and with simulation.
//!
//! ```text
//! cargo run --release --example gamma_fit
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_select::channel::{fit_gamma_product, GroupSampler, ProductLaw, SystemParams};

fn main() -> ris_select::Result<()> {
    let params = SystemParams::default();
    let fit = fit_gamma_product(&params)?;
    let exact = ProductLaw::new(&params)?;
    println!(
        "Gamma fit: shape {:.4}, scale {:.4e}, mean {:.4e}",
        fit.shape,
        fit.scale,
        fit.mean()
    );

    let sampler = GroupSampler::new(&params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut z: Vec<f64> = (0..200_000)
        .map(|_| sampler.sample_product_gain(&mut rng))
        .collect();
    z.sort_by(f64::total_cmp);

    println!(
        "{:>12} {:>10} {:>10} {:>10}",
        "z / mean", "Gamma", "exact", "empirical"
    );
    for ratio in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let x = ratio * fit.mean();
        let empirical = z.partition_point(|&v| v <= x) as f64 / z.len() as f64;
        println!(
            "{ratio:>12} {:>10.5} {:>10.5} {empirical:>10.5}",
            fit.cdf(x),
            exact.cdf(x)?
        );
    }
    Ok(())
}
