//! The coupling quadruple shared by every module.

use thiserror::Error;

/// Model couplings: copolymer strength and bias, pinning strength and bias.
///
/// `beta_hat`, `h_hat` and `beta_bar` are nonnegative; `h_bar` is a free
/// real (negative values reward returns to the interface).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Monomer-solvent coupling strength. Nonnegative.
    pub beta_hat: f64,
    /// Solvent bias (favors the upper half-space). Nonnegative.
    pub h_hat: f64,
    /// Pinning disorder strength. Nonnegative.
    pub beta_bar: f64,
    /// Pinning bias paid at each return to the interface.
    pub h_bar: f64,
}

/// Violation of the coupling sign conventions.
#[derive(Clone, Copy, Debug, Error, PartialEq)]
#[error("couplings beta_hat, h_hat, beta_bar must be finite and nonnegative, h_bar finite")]
pub struct ModelParamsError;

impl ModelParams {
    /// Parameters with every coupling zero (free renewal with a half
    /// weight per excursion).
    pub fn zero() -> Self {
        ModelParams { beta_hat: 0.0, h_hat: 0.0, beta_bar: 0.0, h_bar: 0.0 }
    }

    /// Validate the sign conventions, returning `self` on success.
    pub fn validated(self) -> Result<Self, ModelParamsError> {
        let nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if nonneg(self.beta_hat) && nonneg(self.h_hat) && nonneg(self.beta_bar) && self.h_bar.is_finite()
        {
            Ok(self)
        } else {
            Err(ModelParamsError)
        }
    }
}

/// Which Hamiltonian the partition sum uses.
///
/// The two differ by the deterministic shift `beta_hat * sum_i (hat_i +
/// h_hat)`: `Excess` weighs an excursion by the mean of 1 and the
/// sign-flipped Boltzmann factor, `Full` additionally pays the one-sided
/// energy of the excursion.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum HamiltonianMode {
    /// Free energy measured against the delocalized phase (its free energy
    /// is exactly zero in this convention).
    Excess,
    /// The untransformed Hamiltonian.
    Full,
}
