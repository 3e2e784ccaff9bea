mod common;

use proptest::prelude::*;
use pww_core::ggb::{export_ggb, import_ggb};
use pww_core::numeric::{instantiate, NumericModel};
use pww_core::Tolerances;

use common::random_construction;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn export_then_import_is_isomorphic(seed in any::<u64>()) {
        let c = random_construction(seed, 10);
        let tol = Tolerances::default();
        let w = instantiate(&c, seed, &tol).unwrap();
        let imp = import_ggb(&export_ggb(&c, &w).unwrap()).unwrap();
        prop_assert!(imp.construction.is_isomorphic(&c), "{}", pww_core::construction::print(&c));
        // The archive's coordinates reproduce the witness.
        let back = NumericModel::from_hint(&imp.construction, &imp.hint, &tol).unwrap();
        for ((a, p), (b, q)) in w.points().zip(back.points()) {
            prop_assert_eq!(a, b);
            prop_assert!((p - q).norm() < 1e-9, "{a} moved");
        }
    }
}
