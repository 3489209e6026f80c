//! Error type shared by all simulator modules.

use thiserror::Error;

/// Failure modes of parameter validation, chain construction, and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReadoutError {
    /// Qubit-cavity detuning is zero; the dispersive expansion is undefined.
    #[error("qubit-cavity detuning is zero; dispersive coupling undefined")]
    ZeroDetuning,

    /// Transmon formula evaluated at its pole `detuning == anharmonicity`.
    #[error("detuning equals anharmonicity; transmon dispersive shift has a pole there")]
    ChiPole,

    /// Amplifier power gain below one.
    #[error("amplifier gain {gain} is below unity")]
    GainBelowUnity {
        /// Offending linear power gain.
        gain: f64,
    },

    /// SNR requested where the two qubit branches have unequal noise.
    #[error("noise differs between qubit branches (std+ = {std_plus}, std- = {std_minus}); SNR is defined only for matched noise")]
    UnequalNoise {
        /// Output standard deviation for the qubit-up branch.
        std_plus: f64,
        /// Output standard deviation for the qubit-down branch.
        std_minus: f64,
    },

    /// Frequency grid has no points.
    #[error("frequency grid is empty")]
    EmptyGrid,

    /// Frequency grid does not capture enough of the pulse spectrum.
    #[error("frequency grid captures only {captured_fraction:.6} of the pulse energy; widen the grid")]
    GridTooNarrow {
        /// Fraction of the pulse spectral weight inside the grid.
        captured_fraction: f64,
    },

    /// Time grid undersamples the spectral half-width.
    #[error("time step {dt} undersamples the grid half-width {half_width}")]
    TimeGridTooCoarse {
        /// Offending time step.
        dt: f64,
        /// Spectral half-width that sets the Nyquist limit.
        half_width: f64,
    },

    /// Photon-cap constraint cannot be met at any gain at or above unity.
    #[error("photon cap needs pre-gain {required_g1} < 1; largest feasible probe strength is {max_feasible_n_pulse}")]
    Infeasible {
        /// Pre-amplifier gain the cap would require.
        required_g1: f64,
        /// Largest probe photon number that stays within the cap at unit gain.
        max_feasible_n_pulse: f64,
    },

    /// A computed variance came out negative; the chain state is corrupt.
    #[error("negative variance {variance} encountered")]
    NegativeVariance {
        /// Offending variance value.
        variance: f64,
    },

    /// Catch-all for invalid caller input.
    #[error("invalid input: {reason}")]
    InvalidInput {
        /// Human-readable description of the violated precondition.
        reason: String,
    },
}

impl ReadoutError {
    /// Builds an [`ReadoutError::InvalidInput`] from anything displayable.
    pub fn invalid(reason: impl Into<String>) -> Self {
        ReadoutError::InvalidInput {
            reason: reason.into(),
        }
    }
}
