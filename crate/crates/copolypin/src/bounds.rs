//! Certified analytic brackets on the quenched critical curve.
//!
//! Everything here is a closed form or a certified series evaluation; the
//! replica estimators of [`crate::quenched`] enter only through the wetting
//! threshold, and then explicitly as an estimate with a resolution
//! interval. Lower bounds come from the universal strict inequality
//! against the annealed model with rescaled coupling; upper bounds from
//! fractional-moment estimates on the excursion weights.

use std::f64::consts::LN_2;

use thiserror::Error;

use crate::annealed;
use crate::disorder::DisorderLaw;
use crate::excursion::ExcursionLaw;
use crate::numeric::{ln_half_one_plus_exp, ExtReal};
use crate::quenched::{self, PseudoCritical};

/// Failures of the bound evaluators.
#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum BoundsError {
    /// An exponent grid left its admissible interval.
    #[error("exponent grid must lie in ({lo}, 1], got {value}")]
    InvalidGrid {
        /// Open lower endpoint of the admissible interval.
        lo: f64,
        /// Offending grid entry.
        value: f64,
    },
    /// A bound was requested outside the parameter region where it holds.
    #[error("solvent bias {h_hat} is below the annealed critical bias {hc}")]
    Domain {
        /// Requested bias.
        h_hat: f64,
        /// Annealed critical bias at the same coupling.
        hc: f64,
    },
}

/// One evaluated bound, with the grid point that achieved it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    /// Companion lower bound, when the method comes with one.
    pub lower: Option<f64>,
    /// The certified upper bound; `PosInf` when no grid point qualified.
    pub upper: ExtReal,
    /// Which estimate produced the bound.
    pub method: &'static str,
    /// Optimizing grid point, when one qualified.
    pub witness: Option<f64>,
}

/// Annealed and estimated quenched delocalization thresholds of the
/// combined model in the strong-bias limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WettingThresholds {
    /// Exact annealed threshold `M_bar(-beta_bar) - log 2`.
    pub annealed: f64,
    /// Pseudo-critical pinning bias minus `log 2`.
    pub quenched_estimate: f64,
    /// Bisection resolution around the estimate.
    pub ci: (f64, f64),
}

/// The annealed critical bias at coupling rescaled by the tail exponent,
/// `M_hat(2 beta_hat / alpha) * alpha / (2 beta_hat)`. A certified lower
/// bound for the quenched critical bias at moderate pinning rewards, and
/// its exact strong-reward limit.
pub fn monthus_line(beta_hat: f64, alpha: f64, law_hat: &DisorderLaw) -> f64 {
    assert!(beta_hat > 0.0, "coupling must be positive");
    assert!(alpha >= 1.0, "tail exponent must be at least 1");
    annealed::hc_ann_copolymer(beta_hat / alpha, law_hat)
        .expect("coupling positive by the assertion above")
}

/// Default optimization grid: 64 log-spaced exponents filling
/// `(1/alpha, 1]`, open at the bottom by a fixed margin. Empty when
/// `alpha <= 1` leaves no room.
pub fn default_exponent_grid(alpha: f64) -> Vec<f64> {
    let lo = 1.0 / alpha + 1e-6;
    if lo >= 1.0 {
        return Vec::new();
    }
    let mut grid: Vec<f64> =
        (0..64).map(|i| lo * (1.0 / lo).powf(i as f64 / 63.0)).collect();
    grid[63] = 1.0;
    grid
}

/// Left-hand side of the fractional-moment qualification test at exponent
/// `gamma`: the excursion-weight moment sum
/// `sum_n rho(n)^gamma e^{-h_bar gamma} 2^{1-gamma}`.
fn fractional_moment_lhs(gamma: f64, h_bar: f64, rho: &ExcursionLaw, tol: f64) -> ExtReal {
    rho.power_mass(gamma, 0.0, tol)
        .map(|s| s * (-h_bar * gamma).exp() * (1.0 - gamma).exp2())
}

/// Fractional-moment upper bound on the quenched critical bias of the
/// model without pinning disorder. Every exponent `gamma` whose moment
/// sum stays at or below one certifies `hc_ann(gamma * beta_hat)` as an
/// upper bound; the report carries the best one together with the Monthus
/// lower bound when the law has a polynomial tail.
pub fn fractional_moment_hc_upper(
    beta_hat: f64,
    h_bar: f64,
    gamma_grid: &[f64],
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    tol: f64,
) -> Result<BoundReport, BoundsError> {
    assert!(beta_hat > 0.0, "coupling must be positive");
    let lo = rho.alpha().map_or(0.0, f64::recip);
    for &gamma in gamma_grid {
        if !(gamma > lo && gamma <= 1.0) {
            return Err(BoundsError::InvalidGrid { lo, value: gamma });
        }
    }
    if gamma_grid.is_empty() {
        return Err(BoundsError::InvalidGrid { lo, value: f64::NAN });
    }
    let mut best: Option<(f64, f64)> = None;
    for &gamma in gamma_grid {
        let ExtReal::Finite(lhs) = fractional_moment_lhs(gamma, h_bar, rho, tol) else {
            continue;
        };
        if lhs > 1.0 {
            continue;
        }
        let bound = annealed::hc_ann_copolymer(gamma * beta_hat, law_hat)
            .expect("gamma and beta_hat positive");
        if best.is_none_or(|(b, _)| bound < b) {
            best = Some((bound, gamma));
        }
    }
    let lower = rho.alpha().map(|a| monthus_line(beta_hat, a, law_hat));
    Ok(match best {
        Some((bound, gamma)) => BoundReport {
            lower,
            upper: ExtReal::Finite(bound),
            method: "fractional-moment",
            witness: Some(gamma),
        },
        None => BoundReport { lower, upper: ExtReal::PosInf, method: "fractional-moment", witness: None },
    })
}

/// Fractional-moment upper bound on the quenched rate function at gap
/// `g`, minimized over the exponents `t` in the grid that keep the tilted
/// solvent moment non-positive:
///
/// `(1-t)/t log 2 + (1/t) log sum_n rho_g(n)^t + (1/t) M_bar(-beta_bar t)
///  + log N(g)`,
///
/// with `rho_g` the normalized `g`-tilt of the excursion law. `PosInf`
/// when no grid exponent is admissible.
pub fn s_que_upper(
    beta_hat: f64,
    h_hat: f64,
    beta_bar: f64,
    g: f64,
    t_grid: &[f64],
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> BoundReport {
    assert!(g >= 0.0, "gap must be nonnegative");
    assert!(t_grid.iter().all(|&t| t > 0.0 && t <= 1.0), "exponents must lie in (0, 1]");
    let ln_n = rho
        .grand_sum(g, tol)
        .expect_finite("grand sum converges at nonnegative gaps")
        .ln();
    let tilted = if g == 0.0 {
        rho.clone()
    } else {
        rho.tilt(g, tol).expect("normalizable at positive gaps")
    };
    let mut best: Option<(f64, f64)> = None;
    for &t in t_grid {
        if law_hat.log_mgf(2.0 * beta_hat * t) - 2.0 * beta_hat * h_hat * t > 0.0 {
            continue;
        }
        let ExtReal::Finite(pm) = tilted.power_mass(t, 0.0, tol) else {
            continue;
        };
        let value = (1.0 - t) / t * LN_2
            + pm.ln() / t
            + law_bar.log_mgf(-beta_bar * t) / t
            + ln_n;
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, t));
        }
    }
    match best {
        Some((value, t)) => BoundReport {
            lower: None,
            upper: ExtReal::Finite(value),
            method: "tilted-fractional-moment",
            witness: Some(t),
        },
        None => BoundReport {
            lower: None,
            upper: ExtReal::PosInf,
            method: "tilted-fractional-moment",
            witness: None,
        },
    }
}

/// Strong-bias delocalization thresholds of the pure pinning (wetting)
/// reduction: the annealed one in closed form, the quenched one through
/// the pseudo-critical pinning bias estimator.
pub fn wetting_thresholds(
    beta_bar: f64,
    rho: &ExcursionLaw,
    law_bar: &DisorderLaw,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<WettingThresholds, quenched::QuenchedError> {
    let annealed_threshold = law_bar.log_mgf(-beta_bar) - LN_2;
    let (quenched_estimate, ci) =
        match quenched::pseudo_critical_hbar(beta_bar, rho, law_bar, n, replicas, seed)? {
            PseudoCritical::Bracketed { estimate, ci } => {
                (estimate - LN_2, (ci.0 - LN_2, ci.1 - LN_2))
            }
            // Localized at the ceiling can only be estimator noise, since
            // the quenched bias never exceeds the annealed one; clamp.
            PseudoCritical::Unbounded { probed_up_to } => {
                (annealed_threshold, (annealed_threshold, probed_up_to - LN_2))
            }
        };
    Ok(WettingThresholds { annealed: annealed_threshold, quenched_estimate, ci })
}

/// Upper bound on the quenched rate function at zero gap for strongly
/// biased solvents, `log((1 + e^{M_hat(2 beta_hat) - 2 beta_hat h_hat})/2)`
/// plus the caller's value for the quenched critical pinning bias. Valid
/// only at or above the annealed critical bias.
pub fn xi_upper(
    beta_hat: f64,
    h_hat: f64,
    law_hat: &DisorderLaw,
    h_bar_c_que: f64,
) -> Result<f64, BoundsError> {
    let hc = annealed::hc_ann_copolymer(beta_hat, law_hat)
        .map_err(|_| BoundsError::Domain { h_hat, hc: f64::INFINITY })?;
    if h_hat < hc {
        return Err(BoundsError::Domain { h_hat, hc });
    }
    let delta = annealed::annealed_tilt(beta_hat, h_hat, law_hat);
    Ok(ln_half_one_plus_exp(delta) + h_bar_c_que)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn pm1() -> DisorderLaw {
        DisorderLaw::pm_one()
    }

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        assert!((got - want).abs() < tol, "{what}: got {got}, want {want}");
    }

    #[test]
    fn monthus_closed_forms() {
        // (3/4) log cosh(4/3) for the sign law at unit coupling.
        assert_close(
            monthus_line(1.0, 1.5, &pm1()),
            0.53052144661239951,
            1e-12,
            "monthus at alpha 3/2",
        );
        // alpha = 1 collapses onto the annealed critical bias.
        let hc = annealed::hc_ann_copolymer(1.0, &pm1()).unwrap();
        assert_close(monthus_line(1.0, 1.0, &pm1()), hc, 1e-12, "alpha 1");
        // Decreasing in the tail exponent.
        let values: Vec<f64> =
            [1.0, 1.2, 1.5, 2.0, 3.0].iter().map(|&a| monthus_line(1.0, a, &pm1())).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "not decreasing: {values:?}");
    }

    #[test]
    fn fractional_moment_lhs_oracle() {
        let rho = ExcursionLaw::srw_return_law(1 << 16);
        let got = fractional_moment_lhs(0.9, 3.0, &rho, TOL).expect_finite("convergent");
        assert_close(got, 0.09920184465820146, 1e-7, "moment sum");
    }

    #[test]
    fn fractional_moment_bound_brackets_monthus() {
        let rho = ExcursionLaw::srw_return_law(1 << 14);
        let grid = default_exponent_grid(1.5);
        let report = fractional_moment_hc_upper(1.0, 3.0, &grid, &rho, &pm1(), TOL).unwrap();
        let upper = report.upper.expect_finite("qualifies at h_bar = 3");
        let monthus = report.lower.unwrap();
        assert_close(monthus, 0.53052144661239951, 1e-12, "reported lower");
        assert!(upper >= monthus, "bracket inverted: {upper} < {monthus}");
        let hc_ann = annealed::hc_ann_copolymer(1.0, &pm1()).unwrap();
        assert!(upper <= hc_ann + 1e-12, "upper {upper} beats the annealed bias");
        assert!(report.witness.is_some());

        // Strong pinning penalty: every exponent qualifies and the best
        // one sits just above the open end of the grid, pinning the bound
        // to the Monthus value.
        let far = fractional_moment_hc_upper(1.0, 50.0, &grid, &rho, &pm1(), TOL).unwrap();
        let far_upper = far.upper.expect_finite("qualifies at h_bar = 50");
        assert!(far_upper >= monthus && far_upper - monthus < 1e-3, "limit: {far_upper}");

        // Non-increasing along a penalty scan.
        let uppers: Vec<ExtReal> = [0.5, 1.0, 3.0, 10.0]
            .iter()
            .map(|&h| {
                fractional_moment_hc_upper(1.0, h, &grid, &rho, &pm1(), TOL).unwrap().upper
            })
            .collect();
        assert!(uppers.windows(2).all(|w| w[1] <= w[0]), "not monotone: {uppers:?}");
    }

    #[test]
    fn fractional_moment_grid_validation() {
        let rho = ExcursionLaw::srw_return_law(64);
        for bad in [[0.5f64], [1.2f64]] {
            let err = fractional_moment_hc_upper(1.0, 0.0, &bad, &rho, &pm1(), TOL).unwrap_err();
            assert!(matches!(err, BoundsError::InvalidGrid { .. }));
        }
        assert!(fractional_moment_hc_upper(1.0, 0.0, &[], &rho, &pm1(), TOL).is_err());
        // alpha = 1 leaves no admissible exponents at all.
        assert!(default_exponent_grid(1.0).is_empty());
        assert!(default_exponent_grid(1.5).iter().all(|&g| g > 2.0 / 3.0 && g <= 1.0));
    }

    #[test]
    fn rate_bound_touches_pinning_rate_above_critical_bias() {
        let rho = ExcursionLaw::srw_return_law(1 << 14);
        let grid = default_exponent_grid(1.5);
        let (beta_hat, h_hat, beta_bar, g) = (1.0, 1.0, 0.3, 0.2);
        let report =
            s_que_upper(beta_hat, h_hat, beta_bar, g, &grid, &rho, &pm1(), &pm1(), TOL);
        let upper = report.upper.expect_finite("t = 1 admissible");
        let pinning = pm1().log_mgf(-beta_bar)
            + rho.grand_sum(g, TOL).expect_finite("finite").ln();
        assert!(upper <= pinning + 1e-12, "{upper} vs pinning rate {pinning}");
        // Any upper bound must dominate the annealed rate.
        let params = crate::ModelParams { beta_hat, h_hat, beta_bar, h_bar: 0.0 };
        let s = annealed::s_ann(&params, &rho, &pm1(), &pm1(), g, TOL)
            .expect_finite("annealed rate finite here");
        assert!(upper >= s - 1e-12, "bound {upper} undercuts annealed rate {s}");
    }

    #[test]
    fn rate_bound_diverges_below_monthus_at_zero_gap() {
        let rho = ExcursionLaw::srw_return_law(1 << 12);
        let grid = default_exponent_grid(1.5);
        let report = s_que_upper(1.0, 0.4, 0.0, 0.0, &grid, &rho, &pm1(), &pm1(), TOL);
        assert_eq!(report.upper, ExtReal::PosInf);
        assert_eq!(report.witness, None);
    }

    #[test]
    fn rate_bound_decreases_in_gap() {
        let rho = ExcursionLaw::srw_return_law(1 << 12);
        let grid = default_exponent_grid(1.5);
        let at = |g: f64| {
            s_que_upper(1.0, 0.8, 0.2, g, &grid, &rho, &pm1(), &pm1(), TOL)
                .upper
                .expect_finite("admissible")
        };
        assert!(at(5.0) < at(1.0), "bound should fall with the gap");
    }

    #[test]
    fn wetting_reduces_to_homogeneous_threshold() {
        let rho = ExcursionLaw::srw_return_law(2048);
        let got = wetting_thresholds(0.0, &rho, &pm1(), 1024, 4, 2).unwrap();
        assert_eq!(got.annealed, -LN_2);
        assert!(got.ci.0 <= got.quenched_estimate && got.quenched_estimate <= got.ci.1);
        assert_close(got.quenched_estimate, -LN_2, 0.1, "homogeneous wetting threshold");
        // Jensen ordering, up to the bisection resolution.
        assert!(got.quenched_estimate <= got.annealed + (got.ci.1 - got.ci.0) + 1e-9);
    }

    #[test]
    fn xi_bound_asymptotics() {
        let hc = annealed::hc_ann_copolymer(1.0, &pm1()).unwrap();
        // At the annealed bias the excess term vanishes.
        assert_close(xi_upper(1.0, hc, &pm1(), 0.37).unwrap(), 0.37, 1e-12, "at hc");
        // Deep in the delocalized solvent the bound approaches the wetting
        // threshold of the pinning remainder.
        assert_close(
            xi_upper(1.0, 1e3, &pm1(), 0.0).unwrap(),
            -0.69314718055994531,
            1e-9,
            "strong bias limit",
        );
        // Strictly decreasing in the bias.
        let vals: Vec<f64> =
            [0.7, 1.0, 2.0, 5.0].iter().map(|&h| xi_upper(1.0, h, &pm1(), 0.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "not decreasing: {vals:?}");
        assert!(matches!(
            xi_upper(1.0, 0.5, &pm1(), 0.0),
            Err(BoundsError::Domain { .. })
        ));
    }
}
