//! Monte Carlo cross-checks of the Gaussian chain statistics.
//!
//! The analytic pipeline claims the windowed quadrature is Gaussian with a
//! specific mean and variance. This module draws explicit phase-space
//! samples from the final chain state, block by block, pushes each
//! realization through the same measurement window, and compares the
//! empirical statistics (and the thresholded assignment error) against the
//! analytic values.

use crate::error::ReadoutError;
use crate::homodyne::{self, windowed_noise, windowed_signal};
use crate::math;
use crate::multimode::{
    apply_demodulation_delay, apply_element, init_state, project_p, Block, ChainDescriptor,
    FrequencyGrid, GaussianChainState,
};
use crate::params::{PulseSpec, QubitSign, SystemParams};
use crate::scalar::Real;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn normal<S: Real, R: Rng>(rng: &mut R) -> S {
    S::real(rng.sample::<f64, _>(StandardNormal))
}

fn cholesky<S: Real>(cov: &[[S; 8]; 8], n: usize) -> Result<[[S; 8]; 8], ReadoutError> {
    let mut l = [[S::zero(); 8]; 8];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = cov[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= S::zero() {
                    return Err(ReadoutError::NegativeVariance {
                        variance: sum.to_f64_lossy(),
                    });
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

struct BlockSampler<S> {
    mean: S,
    row: [S; 8],
    normals: usize,
}

impl<S: Real> BlockSampler<S> {
    /// Collapses a block to its windowed contribution: the weighted means
    /// plus the weighted rows of the Cholesky factor that feed the measured
    /// quadratures.
    fn build(block: &Block<S>, weight_plus: S, weight_minus: Option<S>) -> Result<Self, ReadoutError> {
        let l = cholesky(&block.cov, block.quads)?;
        let mut mean = weight_plus * block.mean[1];
        let mut row = [S::zero(); 8];
        let mut normals = 2;
        for (j, entry) in row.iter_mut().enumerate().take(2) {
            *entry = weight_plus * l[1][j];
        }
        if let Some(weight) = weight_minus {
            mean += weight * block.mean[3];
            for (j, entry) in row.iter_mut().enumerate().take(4) {
                *entry += weight * l[3][j];
            }
            normals = 4;
        }
        Ok(BlockSampler { mean, row, normals })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> S {
        let mut value = self.mean;
        for &coefficient in self.row.iter().take(self.normals) {
            value += coefficient * normal::<S, _>(rng);
        }
        value
    }
}

struct WindowSampler<S> {
    blocks: Vec<BlockSampler<S>>,
    analytic_mean: S,
    analytic_var: S,
}

impl<S: Real> WindowSampler<S> {
    fn build(state: &GaussianChainState<S>, t_m: S) -> Result<Self, ReadoutError> {
        let grid = *state.grid();
        let output = project_p(state);
        let analytic_mean = windowed_signal(&output, t_m);
        let analytic_var = windowed_noise(&output, t_m, true);
        let scale = t_m * grid.d_omega.sqrt();
        let mut blocks =
            vec![BlockSampler::build(state.center(), scale, None)?];
        for k in 1..=grid.half() {
            let delta = grid.d_omega * S::from_usize(k).expect("pair index");
            let weight = scale * math::sinc(t_m * delta / S::real(2.0));
            blocks.push(BlockSampler::build(state.pair(k), weight, Some(weight))?);
        }
        Ok(WindowSampler {
            blocks,
            analytic_mean,
            analytic_var,
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> S {
        self.blocks.iter().map(|block| block.sample(rng)).sum()
    }
}

fn final_state<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    sign: QubitSign,
    demod_delay: S,
) -> Result<GaussianChainState<S>, ReadoutError> {
    let mut state = init_state(grid, pulse, descriptor.requires_idler())?;
    for element in descriptor.elements() {
        apply_element(&mut state, element, params, sign)?;
    }
    apply_demodulation_delay(&mut state, demod_delay);
    Ok(state)
}

/// Empirical versus analytic moments of the windowed quadrature for one
/// qubit branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowValidation<S> {
    /// Number of Monte Carlo realizations.
    pub samples: usize,
    /// Mean predicted by the Gaussian pipeline.
    pub analytic_mean: S,
    /// Sample mean.
    pub empirical_mean: S,
    /// Variance predicted by the Gaussian pipeline.
    pub analytic_var: S,
    /// Sample variance.
    pub empirical_var: S,
}

impl<S: Real> WindowValidation<S> {
    /// Distance between the means in units of the standard error.
    pub fn mean_discrepancy_sigmas(&self) -> S {
        let standard_error =
            (self.analytic_var / S::from_usize(self.samples).expect("sample count")).sqrt();
        (self.empirical_mean - self.analytic_mean).abs() / standard_error
    }

    /// Relative deviation of the sample variance.
    pub fn var_relative_error(&self) -> S {
        (self.empirical_var - self.analytic_var).abs() / self.analytic_var
    }
}

/// Samples the windowed quadrature of a chain for one branch and compares
/// the empirical mean and variance with the analytic prediction.
#[allow(clippy::too_many_arguments)]
pub fn validate_windowed_statistics<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    sign: QubitSign,
    t_m: S,
    demod_delay: S,
    samples: usize,
    seed: u64,
) -> Result<WindowValidation<S>, ReadoutError> {
    if samples < 2 {
        return Err(ReadoutError::invalid("need at least two samples"));
    }
    let state = final_state(descriptor, grid, pulse, params, sign, demod_delay)?;
    let sampler = WindowSampler::build(&state, t_m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = S::zero();
    let mut m2 = S::zero();
    for count in 1..=samples {
        let value = sampler.sample(&mut rng);
        let delta = value - mean;
        mean += delta / S::from_usize(count).expect("sample count");
        m2 += delta * (value - mean);
    }
    Ok(WindowValidation {
        samples,
        analytic_mean: sampler.analytic_mean,
        empirical_mean: mean,
        analytic_var: sampler.analytic_var,
        empirical_var: m2 / S::from_usize(samples - 1).expect("sample count"),
    })
}

/// Empirical versus analytic assignment error of the thresholded readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorValidation<S> {
    /// Number of realizations per branch.
    pub samples: usize,
    /// Error probability predicted from the analytic moments at unit
    /// detection efficiency.
    pub analytic_p_error: S,
    /// Fraction of misassigned realizations.
    pub empirical_p_error: S,
}

/// Samples both branches, classifies each realization against the midpoint
/// threshold, and compares the misassignment fraction with the Gaussian
/// prediction (at unit efficiency; sampling sees every photon).
#[allow(clippy::too_many_arguments)]
pub fn validate_assignment_error<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    t_m: S,
    demod_delay: S,
    samples: usize,
    seed: u64,
) -> Result<ErrorValidation<S>, ReadoutError> {
    if samples < 2 {
        return Err(ReadoutError::invalid("need at least two samples"));
    }
    let plus = final_state(
        descriptor,
        grid,
        pulse,
        params,
        QubitSign::Plus,
        demod_delay,
    )?;
    let minus = final_state(
        descriptor,
        grid,
        pulse,
        params,
        QubitSign::Minus,
        demod_delay,
    )?;
    let sampler_plus = WindowSampler::build(&plus, t_m)?;
    let sampler_minus = WindowSampler::build(&minus, t_m)?;
    let snr = homodyne::snr(
        &homodyne::WindowedMoments {
            signal: sampler_plus.analytic_mean,
            noise: sampler_plus.analytic_var,
        },
        &homodyne::WindowedMoments {
            signal: sampler_minus.analytic_mean,
            noise: sampler_minus.analytic_var,
        },
    )?;
    let threshold = (sampler_plus.analytic_mean + sampler_minus.analytic_mean) / S::real(2.0);
    let plus_is_high = sampler_plus.analytic_mean >= sampler_minus.analytic_mean;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut misassigned = 0usize;
    for _ in 0..samples {
        let high = sampler_plus.sample(&mut rng) > threshold;
        if high != plus_is_high {
            misassigned += 1;
        }
        let high = sampler_minus.sample(&mut rng) > threshold;
        if high == plus_is_high {
            misassigned += 1;
        }
    }
    Ok(ErrorValidation {
        samples,
        analytic_p_error: homodyne::p_error(snr, S::one()),
        empirical_p_error: S::real(misassigned as f64)
            / S::real(2.0 * samples as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multimode::{Arm, ChainElement};
    use crate::params::{Gain, ThermalStage};
    use std::f64::consts::PI;

    fn toy_grid() -> FrequencyGrid<f64> {
        FrequencyGrid::new(0.0, 0.02, 17).unwrap()
    }

    fn toy_params() -> SystemParams<f64> {
        SystemParams::with_direct_chi(0.0, -8.099, 0.6283, 0.04, 0.02).unwrap()
    }

    fn toy_pulse(n: f64) -> PulseSpec<f64> {
        PulseSpec::new(0.0, 0.02, n).unwrap()
    }

    fn toy_chain() -> ChainDescriptor<f64> {
        ChainDescriptor::new(vec![
            ChainElement::Pa {
                gain: Gain::from_linear(3.0).unwrap(),
                theta: 0.0,
            },
            ChainElement::Cavity,
            ChainElement::Pa {
                gain: Gain::from_linear(10.0).unwrap(),
                theta: PI,
            },
            ChainElement::Thermal(ThermalStage::new(Gain::from_db(10.0).unwrap(), 2.0).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn sampled_window_moments_match_the_analytic_pipeline() {
        let report = validate_windowed_statistics(
            &toy_chain(),
            &toy_grid(),
            &toy_pulse(2.0),
            &toy_params(),
            QubitSign::Plus,
            90.0,
            10.0,
            60_000,
            11,
        )
        .unwrap();
        assert!(
            report.mean_discrepancy_sigmas() < 4.0,
            "mean off by {} sigma",
            report.mean_discrepancy_sigmas()
        );
        assert!(
            report.var_relative_error() < 0.03,
            "variance off by {}",
            report.var_relative_error()
        );
    }

    #[test]
    fn sampled_assignment_error_matches_the_gaussian_tail() {
        let report = validate_assignment_error(
            &toy_chain(),
            &toy_grid(),
            &toy_pulse(0.5),
            &toy_params(),
            90.0,
            10.0,
            60_000,
            23,
        )
        .unwrap();
        assert!(
            report.analytic_p_error > 0.02 && report.analytic_p_error < 0.45,
            "toy point should sit far from both saturation limits, got {}",
            report.analytic_p_error
        );
        let standard_error =
            (report.analytic_p_error * (1.0 - report.analytic_p_error) / (2.0 * 60_000.0)).sqrt();
        assert!(
            (report.empirical_p_error - report.analytic_p_error).abs() < 5.0 * standard_error,
            "empirical {} vs analytic {}",
            report.empirical_p_error,
            report.analytic_p_error
        );
    }

    #[test]
    fn degenerate_sample_counts_are_rejected() {
        let result = validate_windowed_statistics(
            &toy_chain(),
            &toy_grid(),
            &toy_pulse(1.0),
            &toy_params(),
            QubitSign::Plus,
            90.0,
            0.0,
            1,
            0,
        );
        assert!(result.is_err());
    }

    #[test]
    fn sampling_covers_degenerate_chains_too() {
        // A pure squeezer run: exercises the idler-free layout.
        let chain = ChainDescriptor::new(vec![
            ChainElement::Dpa {
                gain: Gain::from_linear(4.0).unwrap(),
                theta: PI,
                arm: Arm::Signal,
            },
            ChainElement::Cavity,
        ])
        .unwrap();
        let report = validate_windowed_statistics(
            &chain,
            &toy_grid(),
            &toy_pulse(1.0),
            &toy_params(),
            QubitSign::Minus,
            60.0,
            0.0,
            40_000,
            5,
        )
        .unwrap();
        assert!(report.mean_discrepancy_sigmas() < 4.0);
        assert!(report.var_relative_error() < 0.04);
    }
}
