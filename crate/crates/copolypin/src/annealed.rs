//! Exact annealed free energies, critical curves, and phase classification.
//!
//! Everything here is closed-form up to one-dimensional root-finding: the
//! annealed excess free energy is the unique gap `g` at which the averaged
//! per-excursion weight transform crosses `exp(h_bar)`, and the critical
//! curves invert the same relation in each parameter.

use thiserror::Error;

use crate::disorder::DisorderLaw;
use crate::excursion::ExcursionLaw;
use crate::model::ModelParams;
use crate::numeric::{ln_half_one_plus_exp, ExtReal};
use crate::roots::{bisect_decreasing, RootError, RootReport};

/// Domain failures for the annealed closed forms.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum AnnealedError {
    /// A copolymer-side quantity was requested at zero coupling, where the
    /// critical bias is not defined.
    #[error("copolymer coupling beta_hat must be positive")]
    ZeroCoupling,
}

/// Annealed phase labels: copolymer-driven localization, pinning-driven
/// localization, and the delocalized phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseLabel {
    /// Localized with the copolymer term alone (`h_hat` below its critical
    /// bias at positive `beta_hat`).
    L1Ann,
    /// Localized only through the pinning reward (`h_bar` below the
    /// relevance threshold).
    L2Ann,
    /// Delocalized: zero excess free energy.
    DAnn,
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseLabel::L1Ann => "L1_ann",
            PhaseLabel::L2Ann => "L2_ann",
            PhaseLabel::DAnn => "D_ann",
        })
    }
}

/// Output of [`classify_ann`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseReport {
    /// Annealed excess free energy.
    pub g_ann: f64,
    /// Copolymer-only excess free energy (pinning terms switched off).
    pub g_hat_ann: f64,
    /// Pinning-relevance threshold in `h_bar`.
    pub h_bar_star: f64,
    /// Phase label; `L1Ann`/`L2Ann` iff `g_ann > 0`.
    pub label: PhaseLabel,
}

/// The exponential rate `M_hat(2 beta_hat) - 2 beta_hat h_hat` by which a
/// fully reversed excursion of length `n` is rewarded (positive) or
/// penalized (negative) after averaging over the solvent disorder.
pub fn annealed_tilt(beta_hat: f64, h_hat: f64, law_hat: &DisorderLaw) -> f64 {
    law_hat.log_mgf(2.0 * beta_hat) - 2.0 * beta_hat * h_hat
}

/// Copolymer-only annealed excess free energy: `max(0, annealed_tilt)`.
pub fn g_hat_ann(beta_hat: f64, h_hat: f64, law_hat: &DisorderLaw) -> f64 {
    annealed_tilt(beta_hat, h_hat, law_hat).max(0.0)
}

/// The averaged excess exponent `s_ann(g) = M_bar(-beta_bar)
/// + log((N(g) + N(g - annealed_tilt)) / 2)`, the strictly decreasing
/// function whose crossing of `h_bar` locates the annealed free energy.
///
/// Returns `PosInf` for `g` below the copolymer-only free energy, where the
/// defining series diverges.
pub fn s_ann(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    g: f64,
    tol: f64,
) -> ExtReal {
    let delta = annealed_tilt(params.beta_hat, params.h_hat, law_hat);
    if g < delta.max(0.0) {
        return ExtReal::PosInf;
    }
    let n_plain = match rho.grand_sum(g, tol) {
        ExtReal::Finite(v) => v,
        _ => return ExtReal::PosInf,
    };
    let n_tilted = match rho.grand_sum(g - delta, tol) {
        ExtReal::Finite(v) => v,
        _ => return ExtReal::PosInf,
    };
    ExtReal::Finite(law_bar.log_mgf(-params.beta_bar) + (0.5 * (n_plain + n_tilted)).ln())
}

/// Pinning-relevance threshold `h_bar_star = M_bar(-beta_bar)
/// + log((1 + N(|annealed_tilt|)) / 2)`; equals `s_ann` at the
/// copolymer-only free energy.
pub fn h_bar_star(
    beta_hat: f64,
    h_hat: f64,
    beta_bar: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> f64 {
    let delta = annealed_tilt(beta_hat, h_hat, law_hat);
    let n = rho
        .grand_sum(delta.abs(), tol)
        .expect_finite("grand sum at a nonnegative gap");
    law_bar.log_mgf(-beta_bar) + (0.5 * (1.0 + n)).ln()
}

/// Annealed excess free energy together with the root-finder audit trail
/// (`None` when the answer sits on the flat branch `g_hat_ann`).
pub fn g_ann_report(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> (f64, Option<RootReport>) {
    let g_hat = g_hat_ann(params.beta_hat, params.h_hat, law_hat);
    let threshold = h_bar_star(params.beta_hat, params.h_hat, params.beta_bar, rho, law_hat, law_bar, tol);
    if params.h_bar >= threshold {
        return (g_hat, None);
    }
    // Strictly below the threshold s_ann(g_hat) > h_bar, and s_ann decreases
    // to M_bar - log 2 - infinity as g grows, so a sign change exists.
    let f = |g: f64| {
        s_ann(params, rho, law_hat, law_bar, g, tol).expect_finite("s_ann above g_hat_ann")
            - params.h_bar
    };
    let report = bisect_decreasing(f, g_hat, 1.0, 60, 1e-12)
        .unwrap_or_else(|e: RootError| panic!("annealed root bracketing failed: {e}"));
    (report.root, Some(report))
}

/// Annealed excess free energy `g_ann >= 0`.
pub fn g_ann(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> f64 {
    g_ann_report(params, rho, law_hat, law_bar, tol).0
}

/// Critical solvent bias of the copolymer alone:
/// `M_hat(2 beta_hat) / (2 beta_hat)`.
pub fn hc_ann_copolymer(beta_hat: f64, law_hat: &DisorderLaw) -> Result<f64, AnnealedError> {
    if beta_hat <= 0.0 {
        return Err(AnnealedError::ZeroCoupling);
    }
    Ok(law_hat.log_mgf(2.0 * beta_hat) / (2.0 * beta_hat))
}

/// Critical pinning bias of the pinning model alone: `M_bar(-beta_bar)`.
pub fn hc_ann_pinning(beta_bar: f64, law_bar: &DisorderLaw) -> f64 {
    law_bar.log_mgf(-beta_bar)
}

/// Free energy of the pinning model alone: the unique `g >= 0` with
/// `N(g) = exp(-max(0, M_bar(-beta_bar) - h_bar))`.
pub fn g_ann_pinning(
    beta_bar: f64,
    h_bar: f64,
    rho: &ExcursionLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> f64 {
    let excess = (law_bar.log_mgf(-beta_bar) - h_bar).max(0.0);
    if excess == 0.0 {
        return 0.0;
    }
    let f = |g: f64| {
        rho.grand_sum(g, tol).expect_finite("grand sum at positive gap").ln() + excess
    };
    bisect_decreasing(f, 0.0, 1.0, 60, 1e-12)
        .unwrap_or_else(|e| panic!("pinning root bracketing failed: {e}"))
        .root
}

/// The annealed critical solvent bias as a function of the pinning reward:
/// infinite below the wetting threshold `M_bar(-beta_bar) - log 2`, equal to
/// the pure-copolymer value once `h_bar` reaches `M_bar(-beta_bar)`, and the
/// unique root of `s_ann(beta_hat, . , beta_bar; 0) = h_bar` in between.
pub fn hc_ann_combined(
    beta_hat: f64,
    beta_bar: f64,
    h_bar: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> Result<ExtReal, AnnealedError> {
    if beta_hat <= 0.0 {
        return Err(AnnealedError::ZeroCoupling);
    }
    let m_bar = law_bar.log_mgf(-beta_bar);
    if h_bar <= m_bar - std::f64::consts::LN_2 {
        return Ok(ExtReal::PosInf);
    }
    let hc = hc_ann_copolymer(beta_hat, law_hat)?;
    if h_bar >= m_bar {
        return Ok(ExtReal::Finite(hc));
    }
    let f = |h_hat: f64| {
        let p = ModelParams { beta_hat, h_hat, beta_bar, h_bar };
        // Rounding can leave a positive tilt at biases within an ulp of
        // the copolymer threshold; the zero-gap rate is then +inf, which
        // is simply the positive side of this decreasing residual.
        match s_ann(&p, rho, law_hat, law_bar, 0.0, tol) {
            ExtReal::Finite(v) => v - h_bar,
            ExtReal::PosInf => f64::INFINITY,
        }
    };
    let report = bisect_decreasing(f, hc, 1.0, 60, 1e-12)
        .unwrap_or_else(|e| panic!("combined critical-bias bracketing failed: {e}"));
    Ok(ExtReal::Finite(report.root))
}

/// Full annealed phase classification at one parameter point.
pub fn classify_ann(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tol: f64,
) -> PhaseReport {
    let g_hat = g_hat_ann(params.beta_hat, params.h_hat, law_hat);
    let threshold =
        h_bar_star(params.beta_hat, params.h_hat, params.beta_bar, rho, law_hat, law_bar, tol);
    let g = g_ann(params, rho, law_hat, law_bar, tol);
    let copolymer_localized = params.beta_hat > 0.0
        && params.h_hat
            < hc_ann_copolymer(params.beta_hat, law_hat).expect("beta_hat > 0 checked");
    let label = if copolymer_localized {
        PhaseLabel::L1Ann
    } else if params.h_bar < threshold {
        PhaseLabel::L2Ann
    } else {
        PhaseLabel::DAnn
    };
    PhaseReport { g_ann: g, g_hat_ann: g_hat, h_bar_star: threshold, label }
}

/// Convenience for the bounds module: `log((1 + e^{delta}) / 2)` evaluated
/// stably for any sign and size of `delta`.
pub fn ln_half_one_plus_exp_tilt(delta: f64) -> f64 {
    ln_half_one_plus_exp(delta)
}
