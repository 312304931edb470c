//! Draws correlated group channels and compares their composite power with
//! the closed-form moments, for several element spacings.
//!
//! ```text
//! cargo run --release --example correlated_channel
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_select::channel::{composite_moments, GroupDraw, GroupSampler, Side, SystemParams};

fn main() -> ris_select::Result<()> {
    let base = SystemParams::default();
    println!(
        "M = {} elements per group, K = {}",
        base.m_per_group, base.k_h
    );
    println!(
        "{:>10} {:>14} {:>14} {:>14} {:>14}",
        "spacing/λ", "mean |h_c|²", "simulated", "var |h_c|²", "simulated"
    );
    for frac in [0.5, 0.25, 0.125] {
        let params = SystemParams {
            spacing: frac * base.lambda,
            ..base.clone()
        };
        let moments = composite_moments(&params, Side::Source)?;
        let sampler = GroupSampler::new(&params)?;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut draw = GroupDraw::default();
        let n = 100_000;
        let powers: Vec<f64> = (0..n)
            .map(|_| {
                sampler.sample_into(&mut rng, &mut draw);
                draw.h_c.norm_sqr()
            })
            .collect();
        let mean = powers.iter().sum::<f64>() / n as f64;
        let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        println!(
            "{frac:>10} {:>14.4} {mean:>14.4} {:>14.2} {var:>14.2}",
            moments.mean, moments.variance
        );
    }
    Ok(())
}
