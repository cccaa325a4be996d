//! Properties of the word-measure variational machinery: uniqueness of
//! the maximizer, dominance by the closed form, exactness of the
//! reference marginal, and the entropy tilting identity.

use copolypin::{annealed, variational, DisorderLaw, ExcursionLaw, ModelParams};
use proptest::prelude::*;

const TOL: f64 = 1e-12;
const MAX_LEN: usize = 10;

fn arb_params() -> impl Strategy<Value = ModelParams> {
    (0.3f64..1.4, 0.0f64..1.2, 0.0f64..1.0, -0.6f64..0.6).prop_map(
        |(beta_hat, h_hat, beta_bar, h_bar)| ModelParams { beta_hat, h_hat, beta_bar, h_bar },
    )
}

/// Finite-support excursion law covered entirely by `MAX_LEN`, so the
/// maximizer is exact rather than truncated.
fn arb_rho() -> impl Strategy<Value = ExcursionLaw> {
    prop::collection::vec(0.05f64..1.0, 2..=MAX_LEN)
        .prop_map(|probs| ExcursionLaw::from_table(&probs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maximizer_is_unique_optimum(
        params in arb_params(),
        rho in arb_rho(),
        g_offset in 0.0f64..0.4,
        concentration in 5.0f64..100.0,
        noise_seed in any::<u64>(),
    ) {
        let law = DisorderLaw::pm_one();
        let g = annealed::g_hat_ann(params.beta_hat, params.h_hat, &law) + g_offset;
        let (q_star, dropped) =
            variational::maximizer_q(&params, g, &rho, &law, &law, MAX_LEN).unwrap();
        prop_assert!(dropped.abs() <= 1e-9, "nothing to truncate: {dropped}");
        let best =
            variational::annealed_functional(&q_star, &params, g, &rho, &law, &law).unwrap();
        let s = annealed::s_ann(&params, &rho, &law, &law, g, TOL)
            .expect_finite("finite above the annealed excess");
        prop_assert!((best - s).abs() <= 1e-8, "maximizer value {best} vs closed form {s}");
        for k in 0..8 {
            let q = q_star.perturbed(concentration, noise_seed.wrapping_add(k));
            let f = variational::annealed_functional(&q, &params, g, &rho, &law, &law).unwrap();
            prop_assert!(
                f < best - 1e-12,
                "perturbation {k} reached {f} against maximum {best}"
            );
            prop_assert!(f <= s + 1e-8, "population must stay below the closed form");
        }
    }

    #[test]
    fn entropy_tilting_identity(
        params in arb_params(),
        rho in arb_rho(),
        g in 0.01f64..1.0,
        concentration in 5.0f64..60.0,
        noise_seed in any::<u64>(),
    ) {
        let law = DisorderLaw::pm_one();
        let tilted = rho.tilt(g, TOL).unwrap();
        let reference = variational::word_reference(&rho, &law, &law, MAX_LEN).unwrap();
        let g_hat = annealed::g_hat_ann(params.beta_hat, params.h_hat, &law);
        let maximizer =
            variational::maximizer_q(&params, g_hat + 0.2, &rho, &law, &law, MAX_LEN)
                .unwrap()
                .0;
        let perturbed = maximizer.perturbed(concentration, noise_seed);
        for q in [&reference, &maximizer, &perturbed] {
            let against_tilted = variational::relative_entropy_word(q, &tilted, &law, &law)
                .expect_finite("finite support");
            let against_plain = variational::relative_entropy_word(q, &rho, &law, &law)
                .expect_finite("finite support");
            let lhs = against_tilted - against_plain;
            let rhs = rho.grand_sum(g, TOL).expect_finite("table law").ln()
                + g * q.mean_len();
            prop_assert!(
                (lhs - rhs).abs() <= 1e-9,
                "tilting identity: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn reference_marginal_is_reference_law(
        rho in arb_rho(),
        tr in 1usize..=MAX_LEN,
    ) {
        let law_hat = DisorderLaw::pm_one();
        let law_bar = DisorderLaw::standardize(&[-2.0, 0.0, 1.0], &[1.0, 2.0, 2.0]).unwrap();
        let reference =
            variational::word_reference(&rho, &law_hat, &law_bar, MAX_LEN).unwrap();
        let psi = variational::psi_first_letter_marginal(&variational::truncate(&reference, tr));
        let (hat_atoms, hat_w) = law_hat.finite_support().unwrap();
        let (bar_atoms, bar_w) = law_bar.finite_support().unwrap();
        prop_assert_eq!(&psi.hat_atoms[..], hat_atoms);
        prop_assert_eq!(&psi.bar_atoms[..], bar_atoms);
        for (i, &hw) in hat_w.iter().enumerate() {
            for (j, &bw) in bar_w.iter().enumerate() {
                let got = psi.weights[i * bar_atoms.len() + j];
                prop_assert!(
                    (got - hw * bw).abs() <= 1e-14,
                    "reference marginal at ({i}, {j}): {got} vs {}",
                    hw * bw
                );
            }
        }
    }
}
