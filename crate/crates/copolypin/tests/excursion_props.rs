//! Structural properties of excursion laws: monotone log-convex grand
//! sums, exact tilt composition, and head-plus-tail consistency.

use copolypin::ExcursionLaw;
use proptest::prelude::*;

fn arb_rho() -> impl Strategy<Value = ExcursionLaw> {
    prop_oneof![
        (1.05f64..3.0).prop_map(|alpha| ExcursionLaw::power_law(alpha, 512).unwrap()),
        Just(ExcursionLaw::srw_return_law(512)),
        prop::collection::vec(0.05f64..1.0, 2..9)
            .prop_map(|probs| ExcursionLaw::from_table(&probs).unwrap()),
    ]
}

proptest! {
    #[test]
    fn grand_sum_strictly_decreasing_and_log_convex(rho in arb_rho()) {
        let grid: Vec<f64> = (1..=30).map(|k| 0.02 * k as f64).collect();
        let values: Vec<f64> = grid
            .iter()
            .map(|&g| rho.grand_sum(g, 1e-12).expect_finite("positive gap"))
            .collect();
        for pair in values.windows(2) {
            prop_assert!(pair[1] < pair[0], "not strictly decreasing: {pair:?}");
        }
        let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        for w in logs.windows(3) {
            let second = w[2] - 2.0 * w[1] + w[0];
            prop_assert!(second >= -1e-10, "log-convexity violated: {second}");
        }
    }

    #[test]
    fn tilt_composes_additively(
        rho in arb_rho(),
        a in 0.01f64..1.2,
        b in 0.01f64..1.2,
    ) {
        let two_step = rho.tilt(a, 1e-12).unwrap().tilt(b, 1e-12).unwrap();
        let one_step = rho.tilt(a + b, 1e-12).unwrap();
        for n in 1..=512u64 {
            let diff = (two_step.prob(n) - one_step.prob(n)).abs();
            prop_assert!(diff <= 1e-12, "tilt composition differs at {n} by {diff}");
        }
    }

    #[test]
    fn grand_sum_matches_direct_summation(alpha in 1.1f64..3.0, g in 0.05f64..1.0) {
        let rho = ExcursionLaw::power_law(alpha, 512).unwrap();
        let certified = rho.grand_sum(g, 1e-12).expect_finite("positive gap");
        // At these gaps the summand beyond 5000 is smaller than e^{-250},
        // so a plain truncated sum is itself exact to well below 1e-10.
        let direct: f64 = (1..=5000u64).map(|n| rho.prob(n) * (-g * n as f64).exp()).sum();
        prop_assert!(
            (certified - direct).abs() <= 1e-10,
            "certified {certified} vs direct {direct}"
        );
    }

    #[test]
    fn tilted_law_is_normalized(rho in arb_rho(), g in 0.05f64..1.5) {
        let tilted = rho.tilt(g, 1e-12).unwrap();
        let total = tilted.grand_sum(0.0, 1e-12).expect_finite("proper law");
        prop_assert!((total - 1.0).abs() <= 1e-9, "tilted mass {total}");
    }
}
