mod common;

use std::time::Duration;

use proptest::prelude::*;
use pww_core::engine::{init_store_with, saturate, SaturationLimits};
use pww_core::numeric::{derive_seed, eval_fact, instantiate};
use pww_core::Tolerances;

use common::random_construction;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stored_facts_hold_on_fresh_witnesses(seed in any::<u64>()) {
        let c = random_construction(seed, 7);
        let tol = Tolerances::default();
        let w = instantiate(&c, seed, &tol).unwrap();
        let checks = (0..2).filter_map(|i| instantiate(&c, derive_seed(seed, 1000 + i), &tol).ok()).collect();
        let mut s = init_store_with(&c, w, checks, &tol).unwrap();
        let lim = SaturationLimits { time_budget: Duration::from_secs(5), ..SaturationLimits::default() };
        saturate(&mut s, &lim);
        let strict = tol.with_eq_tol(1e-7);
        for k in 0..5 {
            let fresh = instantiate(&c, derive_seed(seed, 5000 + k), &strict).unwrap();
            for n in s.dag().nodes() {
                prop_assert!(eval_fact(&fresh, &n.fact, &strict), "{} fails on fresh witness {k}\n{}", n.fact, pww_core::construction::print(&c));
            }
        }
    }
}
