use proptest::prelude::*;
use treecomp::operator::sigma;
use treecomp::oracle::{
    brute_operator_norm, pointeval_norm_oracle, pointwise_bound_check, run_campaign,
    CampaignConfig, FiniteInstance,
};
use treecomp::space::point_eval_norm;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn brute_force_matches_sigma(seed in any::<u64>()) {
        let inst = FiniteInstance::random(seed, 4, 3);
        let s = sigma(&inst.self_map(), &inst.weight(), &inst.truncation()).unwrap().value;
        let b = brute_operator_norm(&inst, 32, seed);
        prop_assert!((b.value - s).abs() <= 1e-9);
        prop_assert!(b.closed_form_attained());
    }

    #[test]
    fn point_evaluation_oracle(seed in any::<u64>()) {
        let inst = FiniteInstance::random(seed, 3, 3);
        let mu = inst.weight();
        for v in &inst.vertices {
            let o = pointeval_norm_oracle(&inst, v, 8, seed).unwrap();
            prop_assert!((o - point_eval_norm(v, &mu).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn more_samples_never_lower_the_maximum(seed in any::<u64>(), k in 1usize..40, extra in 1usize..40) {
        let inst = FiniteInstance::random(seed, 4, 3);
        let a = brute_operator_norm(&inst, k, seed);
        let b = brute_operator_norm(&inst, k + extra, seed);
        prop_assert!(b.value >= a.value);
        prop_assert!(b.random_max >= a.random_max);
    }

    #[test]
    fn pointwise_bound_holds(seed in any::<u64>()) {
        let inst = FiniteInstance::random(seed, 4, 3);
        let check = pointwise_bound_check(&inst, 20, seed).unwrap();
        prop_assert!(check.passed(), "{:?}", check.violation);
    }
}

#[test]
fn campaign_of_one_hundred() {
    let c = run_campaign(&CampaignConfig::default()).unwrap();
    assert_eq!(c.rows.len(), 100);
    assert_eq!(c.failures, 0, "max diff {}", c.max_abs_diff);
    assert!(c.rows.iter().all(|r| r.closed_form_attained));
}

#[test]
fn zero_tolerance_exposes_rounding() {
    let c = run_campaign(&CampaignConfig {
        tolerance: 0.0,
        ..CampaignConfig::default()
    })
    .unwrap();
    assert!(c.failures > 0);
    assert!(c.max_abs_diff <= 1e-9);
}

#[test]
fn rows_replay_from_their_seed() {
    let c = run_campaign(&CampaignConfig {
        instances: 10,
        seed: 77,
        ..CampaignConfig::default()
    })
    .unwrap();
    let row = &c.rows[6];
    let again = run_campaign(&CampaignConfig {
        instances: 1,
        seed: row.seed,
        ..CampaignConfig::default()
    })
    .unwrap();
    assert_eq!(&again.rows[0], row);
}
