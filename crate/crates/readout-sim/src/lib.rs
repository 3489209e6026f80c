//! Simulator for dispersive qubit readout with in-line parametric amplification.
//!
//! A readout cavity imprints a qubit-state-dependent phase shift on a probe
//! pulse, and an amplification chain (phase-preserving or phase-sensitive,
//! possibly with an entangled idler) raises the signal above the noise of the
//! following HEMT stage. Everything upstream of the final discriminator is
//! Gaussian, so states are tracked as first and second moments of quadrature
//! operators rather than as kets.
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: system, pulse, and amplifier parameter types plus the
//!   dispersive-coupling helpers (`chi`, critical photon number, Purcell
//!   bound).
//! - [`singlemode`]: closed-form signal/noise/SNR expressions for the five
//!   supported chain layouts in the single-mode (steady-state) limit.
//! - [`cavity`]: reflection coefficient, phase profile, and intracavity
//!   photon-number dynamics for Gaussian probe pulses.
//! - [`multimode`]: the frequency-grid Gaussian engine; symplectic updates
//!   for amplifiers, cavity reflection, and lossy following stages.
//! - [`homodyne`]: windowed quadrature detection, SNR, and assignment-error
//!   probabilities.
//! - [`scenarios`]: composed experiments (gain solving under a photon cap,
//!   probe-power optimisation, sweeps over coupling and window length).
//! - [`validate`]: Monte-Carlo cross-check of the moment engine.
//!
//! All internal frequencies are angular (rad per nanosecond unless a caller
//! rescales); user-facing constructors that accept ordinary-frequency inputs
//! carry a `_hz` suffix and multiply by 2π.
//!
//! Numeric code is generic over the scalar type through [`scalar::Real`];
//! the aliases below fix `f64` for ordinary use.

pub mod cavity;
pub mod error;
pub mod homodyne;
pub mod math;
pub mod multimode;
pub mod params;
pub mod scalar;
pub mod scenarios;
pub mod singlemode;
pub mod validate;

pub use error::ReadoutError;
pub use scalar::Real;

/// `f64` system parameters (cavity, qubit, coupling).
pub type SystemParams = params::SystemParams<f64>;
/// `f64` probe-pulse description.
pub type PulseSpec = params::PulseSpec<f64>;
/// `f64` thermal post-amplifier stage.
pub type ThermalStage = params::ThermalStage<f64>;
/// `f64` single-mode scheme input.
pub type SingleModeInput = singlemode::SingleModeInput<f64>;
/// `f64` signal/noise pair.
pub type SignalNoisePair = singlemode::SignalNoisePair<f64>;
/// `f64` frequency grid.
pub type FrequencyGrid = multimode::FrequencyGrid<f64>;
/// `f64` chain descriptor.
pub type ChainDescriptor = multimode::ChainDescriptor<f64>;
/// `f64` chain output.
pub type ChainOutput = multimode::ChainOutput<f64>;
/// `f64` homodyne settings.
pub type HomodyneSettings = homodyne::HomodyneSettings<f64>;
/// `f64` readout figures of merit.
pub type ReadoutResult = homodyne::ReadoutResult<f64>;
/// `f64` constraint set for composed scenarios.
pub type ConstraintSpec = scenarios::ConstraintSpec<f64>;
