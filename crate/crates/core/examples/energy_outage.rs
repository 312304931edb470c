//! Energy outage against transmit power for energy-based selection, with the
//! linear and the saturating harvester.
//!
//! ```text
//! cargo run --release --example energy_outage
//! ```

use ris_select::channel::SystemParams;
use ris_select::energy::EhModel;
use ris_select::selection::{Scheme, SelectionStrategy};
use ris_select::sim::{sweep, OutageMetric, SweepVariable, TrialConfig};

fn main() -> ris_select::Result<()> {
    let params = SystemParams::default().with_groups(10, 40);
    for (eh, grid) in [
        (EhModel::Linear, [62.0, 64.0, 66.0, 68.0, 70.0]),
        (EhModel::DEFAULT_NONLINEAR, [64.0, 66.0, 68.0, 70.0, 72.0]),
    ] {
        println!(
            "{}",
            if eh.is_linear() {
                "linear harvester"
            } else {
                "saturating harvester"
            }
        );
        println!(
            "{:>8} {:>10} {:>10} {:>10} {:>10}",
            "dBm", "random", "k = 1", "k = 2", "k = 3"
        );
        let mut columns = Vec::new();
        for (scheme, k) in [
            (Scheme::Rgs, 1),
            (Scheme::Ebgs, 1),
            (Scheme::Ebgs, 2),
            (Scheme::Ebgs, 3),
        ] {
            let cfg = TrialConfig {
                n_trials: 20_000,
                eh,
                metric: OutageMetric::Energy,
                strategy: SelectionStrategy::new(scheme, k)?,
                ..TrialConfig::default()
            };
            columns.push(sweep(&params, &cfg, SweepVariable::PtxDbm, &grid)?);
        }
        for (i, dbm) in grid.iter().enumerate() {
            let row: Vec<String> = columns
                .iter()
                .map(|c| format!("{:>10.4}", c.points[i].estimate.p_hat))
                .collect();
            println!("{dbm:>8} {}", row.join(" "));
        }
    }
    Ok(())
}
