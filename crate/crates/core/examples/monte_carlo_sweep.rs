//! Outage of random and best-group selection against mean SNR, analytic and
//! simulated side by side.
//!
//! ```text
//! cargo run --release --example monte_carlo_sweep
//! ```

use ris_select::channel::SystemParams;
use ris_select::selection::{Scheme, SelectionStrategy};
use ris_select::sim::{sweep, RateThreshold, SweepVariable, Thresholds, TrialConfig};

fn main() -> ris_select::Result<()> {
    let params = SystemParams::default().with_groups(10, 10);
    let grid: Vec<f64> = (0..6).map(|i| 2.0 * i as f64).collect();
    for scheme in [Scheme::Rgs, Scheme::Sbgs] {
        let cfg = TrialConfig {
            n_trials: 50_000,
            strategy: SelectionStrategy::new(scheme, 1)?,
            thresholds: Thresholds {
                rate: RateThreshold::SnrDb(5.0),
                ..Thresholds::default()
            },
            ..TrialConfig::default()
        };
        let curve = sweep(&params, &cfg, SweepVariable::SnrDb, &grid)?;
        println!("{scheme}, threshold 5 dB");
        println!(
            "{:>8} {:>10} {:>10} {:>10}",
            "SNR dB", "analytic", "simulated", "± 95%"
        );
        for p in &curve.points {
            println!(
                "{:>8} {:>10.4} {:>10.4} {:>10.4}",
                p.value, p.analytic, p.estimate.p_hat, p.estimate.ci_halfwidth
            );
        }
    }
    Ok(())
}
