//! Numerical toolkit for a copolymer chain interacting with a penetrable
//! interface that carries adsorption (pinning) charges.
//!
//! The chain is modelled through the excursions of a renewal path away from
//! the interface. Each excursion of length `n` contributes an excursion-law
//! weight `rho(n)`, a copolymer factor coupling the monomer disorder to the
//! side of the interface the excursion chose, and a pinning factor paid at
//! the return site. The crate provides:
//!
//! - [`disorder`]: standardized disorder laws (finite-discrete or gaussian)
//!   with exact log-moment-generating functions and reproducible sampling;
//! - [`excursion`]: excursion-length laws with certified analytic tails,
//!   exponential tilts and grand sums `N(g) = sum_n e^{-g n} rho(n)`;
//! - [`annealed`]: closed-form annealed free energies, critical curves and
//!   phase classification;
//! - [`quenched`]: exact finite-volume partition sums by renewal dynamic
//!   programming, replica estimates of the quenched free energy, return-time
//!   statistics and path sampling;
//! - [`bounds`]: computable brackets on the quenched critical curve
//!   (Monthus line, fractional-moment bounds, wetting thresholds);
//! - [`variational`]: finite-alphabet word measures, relative entropies, the
//!   annealed variational functional with its explicit maximizer, and the
//!   entropy-gap certificate separating quenched from annealed criticality.
//!
//! All estimators are deterministic functions of `(seed, stream)`; all
//! truncated series carry certified error bounds.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod annealed;
pub mod bounds;
pub mod disorder;
pub mod excursion;
mod model;
pub mod numeric;
pub mod quenched;
mod rng;
pub mod roots;
pub mod variational;

pub use annealed::{AnnealedError, PhaseLabel, PhaseReport};
pub use bounds::{BoundReport, BoundsError, WettingThresholds};
pub use disorder::{DisorderError, DisorderLaw, DisorderSample};
pub use excursion::{ExcursionError, ExcursionLaw};
pub use model::{HamiltonianMode, ModelParams, ModelParamsError};
pub use numeric::ExtReal;
pub use quenched::{
    LogPartitionTable, PathSample, PseudoCritical, QuenchedError, QuenchedEstimate,
    ReturnStatistics,
};
pub use roots::{RootError, RootReport};
pub use variational::{
    GapCertificate, JointLetterLaw, TruncatedWordMeasure, VariationalError, WordMeasure,
};
