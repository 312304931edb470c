use std::path::Path;

use ris_select::channel::SystemParams;
use ris_select::cli::{bounds_rows, load_scenario, parse_scenario, run};
use ris_select::selection::{RisMode, Scheme, SelectionStrategy};
use ris_select::sim::{
    analytic_outage, estimate_outage, run_trial, sweep, trial_rng, CandidatePool, EnergyThreshold,
    OutageMetric, RateThreshold, SweepVariable, Thresholds, TrialConfig,
};

fn small_config(scheme: Scheme, k: usize) -> TrialConfig {
    TrialConfig {
        n_trials: 20_000,
        seed: 99,
        strategy: SelectionStrategy::new(scheme, k).unwrap(),
        thresholds: Thresholds {
            rate: RateThreshold::SnrDb(5.0),
            energy: EnergyThreshold::Required,
        },
        ..TrialConfig::default()
    }
}

fn params() -> SystemParams {
    SystemParams {
        p_tx: 10f64.powf(1.5),
        ..SystemParams::default().with_groups(10, 6)
    }
}

#[test]
fn estimates_do_not_depend_on_worker_count() {
    let p = params();
    for scheme in [Scheme::Rgs, Scheme::Sbgs, Scheme::Ebgs] {
        let mut cfg = small_config(scheme, 2);
        cfg.workers = 1;
        let one = estimate_outage(&p, &cfg).unwrap();
        cfg.workers = 3;
        let three = estimate_outage(&p, &cfg).unwrap();
        assert_eq!(one, three, "{scheme}");
        assert_eq!(one, estimate_outage(&p, &cfg).unwrap());
    }
}

#[test]
fn trials_are_reproducible_one_by_one() {
    let p = params();
    let cfg = small_config(Scheme::Sbgs, 1);
    let a = run_trial(&p, &cfg, &mut trial_rng(cfg.seed, 17)).unwrap();
    let b = run_trial(&p, &cfg, &mut trial_rng(cfg.seed, 17)).unwrap();
    let c = run_trial(&p, &cfg, &mut trial_rng(cfg.seed, 18)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.len(), p.b_groups);
}

#[test]
fn batch_estimate_equals_trial_by_trial_count() {
    // Data outage of the best group, recomputed from single trials.
    let p = params();
    let cfg = TrialConfig {
        n_trials: 2_000,
        ..small_config(Scheme::Sbgs, 1)
    };
    let r_req = cfg.thresholds.rate.resolve();
    let failures = (0..cfg.n_trials)
        .filter(|&i| {
            let obs = run_trial(&p, &cfg, &mut trial_rng(cfg.seed, i)).unwrap();
            obs.iter().map(|o| o.rate).fold(f64::MIN, f64::max) < r_req
        })
        .count();
    let est = estimate_outage(&p, &cfg).unwrap();
    assert_eq!(est.p_hat, failures as f64 / cfg.n_trials as f64);
}

#[test]
fn best_group_selection_agrees_with_order_statistics() {
    let p = params();
    for k in 1..=3 {
        let cfg = small_config(Scheme::Sbgs, k);
        let analytic = analytic_outage(&p, &cfg).unwrap();
        let est = estimate_outage(&p, &cfg).unwrap();
        let tol = 0.03f64.max(3.0 * est.ci_halfwidth);
        assert!(
            (analytic - est.p_hat).abs() <= tol,
            "k={k}: {analytic} vs {}",
            est.p_hat
        );
    }
}

#[test]
fn eligible_pool_only_makes_things_worse() {
    let p = params();
    let mut cfg = small_config(Scheme::Ebgs, 1);
    cfg.metric = OutageMetric::Energy;
    let all = estimate_outage(&p, &cfg).unwrap();
    cfg.pool = CandidatePool::Eligible;
    let eligible = estimate_outage(&p, &cfg).unwrap();
    assert!(eligible.p_hat >= all.p_hat);
}

#[test]
fn invalid_configurations_are_rejected() {
    let p = params();
    let cfg = small_config(Scheme::Sbgs, 7);
    assert!(estimate_outage(&p, &cfg).is_err());
    let mut cfg = small_config(Scheme::Sbgs, 1);
    cfg.mode = RisMode::PowerSplitting { rho: 1.5 };
    assert!(estimate_outage(&p, &cfg).is_err());
    assert!(SelectionStrategy::new(Scheme::Rgs, 0).is_err());
    let cfg = small_config(Scheme::Rgs, 1);
    assert!(sweep(&p, &cfg, SweepVariable::Rho, &[0.2, 0.1, 0.3]).is_err());
    assert!(sweep(&p, &cfg, SweepVariable::Rho, &[]).is_err());
    assert!(sweep(&p, &cfg, SweepVariable::Groups, &[2.5]).is_err());
}

#[test]
fn shipped_scenarios_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let scenario =
                load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            // The dumped configuration reads back to the same scenario.
            let again = parse_scenario(&scenario.to_toml()).unwrap();
            assert_eq!(again.to_toml(), scenario.to_toml());
            count += 1;
        }
    }
    assert!(count >= 8);
}

#[test]
fn unknown_keys_and_bad_values_are_reported() {
    assert!(parse_scenario("[system]\nbogus = 1\n").is_err());
    assert!(parse_scenario("[mode]\nkind = \"ps\"\nrho = 2.0\n").is_err());
    assert!(parse_scenario("[selection]\nscheme = \"best\"\n").is_err());
    assert!(parse_scenario("[sweep]\nvariable = \"rho\"\ngrid = [0.5, 0.4, 0.6]\n").is_err());
}

#[test]
fn run_writes_one_file_per_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = parse_scenario(
        "[system]\nm = 4\nb = 3\n[thresholds]\ngamma_th_db = [0.0, 3.0]\n[trial]\nn_trials = 500\n[sweep]\nvariable = \"snr_db\"\ngrid = [5.0, 10.0]\n",
    )
    .unwrap();
    let paths = run(&scenario, &dir.path().join("out.csv")).unwrap();
    assert_eq!(paths.len(), 2);
    for path in &paths {
        let text = std::fs::read_to_string(path).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            data[0],
            "sweep_value,analytic_outage,empirical_outage,ci_halfwidth,n_trials,scheme,k,mode"
        );
        assert_eq!(data.len(), 3);
        assert!(text.contains("# seed = "));
    }
}

#[test]
fn bounds_rows_are_clamped() {
    let scenario = parse_scenario("[system]\np_tx_dbm = 70.0\n[bounds]\ndraws = 20\n").unwrap();
    let rows = bounds_rows(&scenario).unwrap();
    assert_eq!(rows.len(), 20);
    for row in rows {
        assert!(
            (0.0..=1.0).contains(&row.interval.lower) && (0.0..=1.0).contains(&row.interval.upper)
        );
    }
}
