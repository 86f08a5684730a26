mod common;

use ax_goodput::analytic::evaluate;
use ax_goodput::phy_tables::PROTOCOL;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn no_ppdu_exceeds_the_time_limit(seed in any::<u64>()) {
        let scn = common::random_scenario(&mut ChaCha8Rng::seed_from_u64(seed));
        let b = evaluate(&scn).unwrap();
        for t in b.ppdu_airtimes() {
            prop_assert!(t <= PROTOCOL.max_ppdu_time, "{:?}: {}", scn, t);
        }
        prop_assert_eq!(b.schedule.n_total(), scn.n);
    }
}

#[test]
fn n_beyond_cap_is_rejected() {
    let scn = ax_goodput::Scenario::new(ax_goodput::Strategy::Mu, 64, 1, 1460, 75).unwrap();
    assert!(matches!(
        evaluate(&scn),
        Err(ax_goodput::ModelError::ExceedsPpduLimit { .. })
    ));
    assert!(evaluate(&scn.with_n(74)).is_ok());
}
