//! One slot of group selection: observe every group, then pick with each
//! scheme.
//!
//! ```text
//! cargo run --release --example group_selection
//! ```

use ris_select::channel::SystemParams;
use ris_select::selection::{eligible_set, kth_best_index, Scheme, SelectionStrategy};
use ris_select::sim::{run_trial, trial_rng, TrialConfig};
use ris_select::units::dbm_to_watts;

fn main() -> ris_select::Result<()> {
    let params = SystemParams {
        p_tx: dbm_to_watts(64.0),
        ..SystemParams::default().with_groups(10, 8)
    };
    let cfg = TrialConfig {
        strategy: SelectionStrategy::new(Scheme::Sbgs, 2)?,
        ..TrialConfig::default()
    };
    let observations = run_trial(&params, &cfg, &mut trial_rng(1, 0))?;
    let r_req = cfg.thresholds.rate.resolve();
    let e_req = cfg
        .thresholds
        .energy_joules(&params, &cfg.mode, &cfg.budget);

    println!("required rate {r_req:.3} bit/s/Hz, required energy {e_req:.3e} J");
    println!(
        "{:>5} {:>12} {:>14} {:>9}",
        "group", "rate", "energy (J)", "eligible"
    );
    for o in &observations {
        println!(
            "{:>5} {:>12.4} {:>14.4e} {:>9}",
            o.group_id, o.rate, o.harvested, o.eligible
        );
    }
    let rates: Vec<f64> = observations.iter().map(|o| o.rate).collect();
    let energies: Vec<f64> = observations.iter().map(|o| o.harvested).collect();
    println!(
        "eligible groups: {:?}",
        eligible_set(&observations, r_req, e_req)
    );
    for k in 1..=3 {
        println!(
            "k = {k}: by rate -> group {}, by energy -> group {}",
            kth_best_index(&rates, k)?,
            kth_best_index(&energies, k)?
        );
    }
    Ok(())
}
