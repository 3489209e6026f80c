//! Windowed homodyne detection of the measured quadrature.
//!
//! The detector integrates the `p` quadrature over a window of duration
//! `T_m`, which weights each grid frequency by the kernel
//! `sinc(T_m (omega - omega_c) / 2)`. Signal and noise carry a common
//! overall constant from the window normalization; it cancels in every
//! ratio this module reports.
//!
//! A terminal thermal stage commutes with the window: scaling the means by
//! `sqrt(G)` and the covariances by `G` plus flat added noise before
//! windowing equals applying the same scaling to the windowed moments. The
//! measurement therefore runs the chain without its terminal stage and
//! folds that stage in afterwards, which also yields the ideal-postamp
//! error probability from the same run.

use crate::error::ReadoutError;
use crate::math;
use crate::multimode::{run_chain, ChainDescriptor, ChainOutput, FrequencyGrid};
use crate::params::{PulseSpec, QubitSign, SystemParams, ThermalStage};
use crate::scalar::Real;

/// Detection settings for a windowed homodyne measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneSettings<S> {
    /// Integration window duration.
    pub t_m: S,
    /// Window center relative to the pulse center, compensated by a
    /// demodulation phase ramp (normally the cavity group delay).
    pub demod_delay: S,
    /// Detection efficiency entering the error probability.
    pub eta: S,
    /// Whether mirror-frequency covariances enter the windowed noise.
    pub include_cross_covariance: bool,
}

impl<S: Real> HomodyneSettings<S> {
    /// Builds settings, rejecting non-positive windows and efficiencies
    /// outside `(0, 1]`.
    pub fn new(
        t_m: S,
        demod_delay: S,
        eta: S,
        include_cross_covariance: bool,
    ) -> Result<Self, ReadoutError> {
        if !t_m.is_finite() || t_m <= S::zero() {
            return Err(ReadoutError::invalid(
                "measurement window must be positive",
            ));
        }
        if !demod_delay.is_finite() {
            return Err(ReadoutError::invalid("demodulation delay must be finite"));
        }
        if !eta.is_finite() || eta <= S::zero() || eta > S::one() {
            return Err(ReadoutError::invalid(
                "detection efficiency must lie in (0, 1]",
            ));
        }
        Ok(HomodyneSettings {
            t_m,
            demod_delay,
            eta,
            include_cross_covariance,
        })
    }
}

/// Mean and variance of the windowed quadrature for one qubit branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedMoments<S> {
    /// Mean of the windowed quadrature.
    pub signal: S,
    /// Variance of the windowed quadrature.
    pub noise: S,
}

fn kernel<S: Real>(t_m: S, delta: S) -> S {
    math::sinc(t_m * delta / S::real(2.0))
}

/// Mean of the windowed quadrature for one chain output.
pub fn windowed_signal<S: Real>(output: &ChainOutput<S>, t_m: S) -> S {
    let grid = &output.grid;
    let root_d_omega = grid.d_omega.sqrt();
    let sum: S = (0..grid.points)
        .map(|j| kernel(t_m, grid.delta(j)) * output.mean_p[j])
        .sum();
    t_m * root_d_omega * sum
}

/// Variance of the windowed quadrature for one chain output.
pub fn windowed_noise<S: Real>(output: &ChainOutput<S>, t_m: S, include_cross: bool) -> S {
    let grid = &output.grid;
    let mut sum = S::zero();
    for j in 0..grid.points {
        let k = kernel(t_m, grid.delta(j));
        let mut term = output.var_p[j];
        if include_cross {
            term += output.cross_p[j];
        }
        sum += k * k * term;
    }
    t_m * t_m * grid.d_omega * sum
}

/// Total squared kernel mass `sum_j sinc^2 * d_omega` of a grid, the flat
/// weight multiplying any per-mode added noise.
pub fn kernel_mass<S: Real>(grid: &FrequencyGrid<S>, t_m: S) -> S {
    let sum: S = (0..grid.points)
        .map(|j| {
            let k = kernel(t_m, grid.delta(j));
            k * k
        })
        .sum();
    sum * grid.d_omega
}

/// Folds a terminal thermal stage into already-windowed moments.
pub fn fold_thermal<S: Real>(
    moments: WindowedMoments<S>,
    stage: &ThermalStage<S>,
    grid: &FrequencyGrid<S>,
    t_m: S,
) -> WindowedMoments<S> {
    let g = stage.gain.linear();
    let added = (g - S::one()) * (stage.n_bar_t + S::real(0.5));
    WindowedMoments {
        signal: g.sqrt() * moments.signal,
        noise: g * moments.noise + added * t_m * t_m * kernel_mass(grid, t_m),
    }
}

/// Branch-separation signal-to-noise ratio
/// `|mean_plus - mean_minus| / (2 sigma)`, requiring the two branches to
/// carry the same noise.
pub fn snr<S: Real>(
    plus: &WindowedMoments<S>,
    minus: &WindowedMoments<S>,
) -> Result<S, ReadoutError> {
    if plus.noise <= S::zero() || minus.noise <= S::zero() {
        let bad = plus.noise.min(minus.noise);
        return Err(ReadoutError::NegativeVariance {
            variance: bad.to_f64_lossy(),
        });
    }
    let std_plus = plus.noise.sqrt();
    let std_minus = minus.noise.sqrt();
    let scale = std_plus.max(std_minus);
    if (std_plus - std_minus).abs() > S::real(1e-6) * scale {
        return Err(ReadoutError::UnequalNoise {
            std_plus: std_plus.to_f64_lossy(),
            std_minus: std_minus.to_f64_lossy(),
        });
    }
    Ok((plus.signal - minus.signal).abs() / (S::real(2.0) * std_plus))
}

/// Assignment error probability of a thresholded Gaussian measurement,
/// `erfc(sqrt(eta / 2) * snr) / 2`, evaluated in log space deep in the
/// tail.
pub fn p_error<S: Real>(snr: S, eta: S) -> S {
    let arg = (eta / S::real(2.0)).sqrt() * snr;
    if arg <= S::real(8.0) {
        S::real(0.5) * math::erfc(arg)
    } else {
        S::real(0.5) * math::ln_erfc(arg).exp()
    }
}

/// Joint result of a windowed measurement on both qubit branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutResult<S> {
    /// Windowed mean for the plus branch.
    pub mean_plus: S,
    /// Windowed mean for the minus branch.
    pub mean_minus: S,
    /// Common windowed standard deviation.
    pub std: S,
    /// Branch-separation signal-to-noise ratio.
    pub snr: S,
    /// Assignment error probability.
    pub p_error: S,
    /// Assignment error with the terminal thermal stage replaced by an
    /// ideal noiseless one.
    pub p_error_ideal_postamp: S,
}

/// Reduces a pair of branch outputs to a thresholded readout result,
/// folding in an optional terminal thermal stage.
pub fn reduce_outputs<S: Real>(
    output_plus: &ChainOutput<S>,
    output_minus: &ChainOutput<S>,
    thermal: Option<&ThermalStage<S>>,
    t_m: S,
    eta: S,
    include_cross: bool,
) -> Result<ReadoutResult<S>, ReadoutError> {
    let raw_plus = WindowedMoments {
        signal: windowed_signal(output_plus, t_m),
        noise: windowed_noise(output_plus, t_m, include_cross),
    };
    let raw_minus = WindowedMoments {
        signal: windowed_signal(output_minus, t_m),
        noise: windowed_noise(output_minus, t_m, include_cross),
    };
    let ideal_snr = snr(&raw_plus, &raw_minus)?;
    let (plus, minus) = match thermal {
        Some(stage) => (
            fold_thermal(raw_plus, stage, &output_plus.grid, t_m),
            fold_thermal(raw_minus, stage, &output_minus.grid, t_m),
        ),
        None => (raw_plus, raw_minus),
    };
    let full_snr = snr(&plus, &minus)?;
    Ok(ReadoutResult {
        mean_plus: plus.signal,
        mean_minus: minus.signal,
        std: plus.noise.sqrt(),
        snr: full_snr,
        p_error: p_error(full_snr, eta),
        p_error_ideal_postamp: p_error(ideal_snr, eta),
    })
}

/// Runs a chain for both qubit branches and reduces the outputs to a
/// thresholded readout result.
pub fn measure<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    settings: &HomodyneSettings<S>,
) -> Result<ReadoutResult<S>, ReadoutError> {
    let (prefix_elements, thermal) = descriptor.split_terminal_thermal();
    let prefix = ChainDescriptor::new(prefix_elements.to_vec())
        .expect("a prefix of a valid chain is valid");
    let output_plus = run_chain(&prefix, grid, pulse, params, QubitSign::Plus, settings.demod_delay)?;
    let output_minus =
        run_chain(&prefix, grid, pulse, params, QubitSign::Minus, settings.demod_delay)?;
    reduce_outputs(
        &output_plus,
        &output_minus,
        thermal.as_ref(),
        settings.t_m,
        settings.eta,
        settings.include_cross_covariance,
    )
}

/// Photon number of the pulse mode the window actually detects,
/// `n (sum K h d_omega)^2 / (sum K^2 d_omega)`; approaches `n` only when
/// the window passband encloses the pulse spectrum.
pub fn effective_photon_number<S: Real>(
    pulse: &PulseSpec<S>,
    grid: &FrequencyGrid<S>,
    t_m: S,
) -> S {
    let mut overlap = S::zero();
    for j in 0..grid.points {
        overlap += kernel(t_m, grid.delta(j)) * pulse.spectral_amplitude(grid.omega(j));
    }
    overlap *= grid.d_omega;
    pulse.n_pulse * overlap * overlap / kernel_mass(grid, t_m)
}
