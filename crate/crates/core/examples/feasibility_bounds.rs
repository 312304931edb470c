//! Feasible splitting ratios and switching fractions for a few channel draws,
//! with both harvester models.
//!
//! ```text
//! cargo run --release --example feasibility_bounds
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_select::bounds::{feasible_interval, BoundTarget, ChannelSnapshot};
use ris_select::channel::{correlate, sample_rician_vector, SystemParams};
use ris_select::energy::{EhModel, PowerBudget};
use ris_select::units::dbm_to_watts;

fn main() -> ris_select::Result<()> {
    let params = SystemParams {
        p_tx: dbm_to_watts(70.0),
        ..SystemParams::default()
    };
    let budget = PowerBudget::default();
    let corr = params.correlation_matrix()?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r_req = 2.0;

    println!("P_tx = 70 dBm, required rate {r_req} bit/s/Hz");
    for draw in 0..4 {
        let h = sample_rician_vector(params.m_per_group, params.k_h, &mut rng);
        let g = sample_rician_vector(params.m_per_group, params.k_g, &mut rng);
        let snap = ChannelSnapshot::new(
            correlate(&corr, &h, params.beta_gain)?,
            correlate(&corr, &g, params.beta_gain)?,
        )?;
        println!("draw {draw}:");
        for (target, name) in [(BoundTarget::Rho, "rho "), (BoundTarget::Zeta, "zeta")] {
            for model in [EhModel::Linear, EhModel::DEFAULT_NONLINEAR] {
                let iv = feasible_interval(target, &params, &budget, &model, &snap, r_req)?;
                let label = if model.is_linear() {
                    "linear"
                } else {
                    "nonlinear"
                };
                match iv.cause {
                    None => println!("  {name} {label:>9}: [{:.4}, {:.4}]", iv.lower, iv.upper),
                    Some(cause) => println!("  {name} {label:>9}: infeasible ({cause})"),
                }
            }
        }
    }
    Ok(())
}
