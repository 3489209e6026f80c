//! Operating points and parameter sweeps under a cavity photon cap.
//!
//! Experiments run against hard constraints: the dispersive approximation
//! tolerates only a few cavity photons, the first-stage gain is bounded,
//! and the post-amplifier is noisy. This module turns those constraints
//! into concrete chain configurations: it solves for the first-stage gain
//! that saturates the photon cap, optimizes the pulse amplitude and
//! measurement window against it, and produces the error-versus-pull and
//! error-versus-window sweeps.

use crate::cavity;
use crate::error::ReadoutError;
use crate::homodyne::{reduce_outputs, ReadoutResult};
use crate::multimode::{run_chain, Arm, ChainDescriptor, ChainElement, FrequencyGrid};
use crate::params::{Gain, PulseSpec, QubitSign, SystemParams, ThermalStage};
use crate::scalar::Real;
use crate::singlemode::{
    steady_scheme_snr, DpaFluxReading, SchemeKind, SteadySchemeConfig, ThetaRule,
};

/// Hardware constraints an operating point must respect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSpec<S> {
    /// Peak cavity photon budget.
    pub n_cap: S,
    /// Fixed second-stage gain.
    pub g2: Gain<S>,
    /// Largest realizable first-stage gain.
    pub g1_max: Gain<S>,
    /// Detection efficiency.
    pub eta: S,
    /// Post-amplifier, or `None` for an ideal detection line.
    pub hemt: Option<ThermalStage<S>>,
}

impl<S: Real> Default for ConstraintSpec<S> {
    fn default() -> Self {
        ConstraintSpec {
            n_cap: S::real(5.0),
            g2: Gain::from_db(S::real(20.0)).expect("fixed gain"),
            g1_max: Gain::from_db(S::real(30.0)).expect("gain bound"),
            eta: S::real(0.5),
            hemt: Some(
                ThermalStage::new(
                    Gain::from_db(S::real(30.1)).expect("post-amplifier gain"),
                    S::real(25.0),
                )
                .expect("post-amplifier noise"),
            ),
        }
    }
}

/// First-stage gain solved against the photon cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvedGain<S> {
    /// Gain to apply, clamped into `[1, g1_max]`.
    pub g1: Gain<S>,
    /// Unclamped linear gain the cap asks for.
    pub required: S,
    /// Peak cavity occupation per input photon at unit gain.
    pub peak_fraction: S,
    /// Peak cavity occupation at the clamped gain.
    pub n_max_cavity: S,
}

/// Solves `G1 * n_pulse * q = n_cap` for the first-stage flux gain, where
/// `q` is the peak cavity occupation per input photon.
///
/// Returns `Infeasible` when the bare pulse already exceeds the cap, and
/// clamps to the realizable maximum when the cap asks for more gain than
/// the hardware has.
pub fn solve_g1<S: Real>(
    spec: &ConstraintSpec<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
) -> Result<SolvedGain<S>, ReadoutError> {
    let q = cavity::peak_fraction(pulse, params, QubitSign::Plus)?;
    let required = spec.n_cap / (pulse.n_pulse * q);
    if required < S::one() {
        return Err(ReadoutError::Infeasible {
            required_g1: required.to_f64_lossy(),
            max_feasible_n_pulse: (spec.n_cap / q).to_f64_lossy(),
        });
    }
    let clamped = required.min(spec.g1_max.linear());
    let g1 = Gain::from_linear(clamped)?;
    Ok(SolvedGain {
        g1,
        required,
        peak_fraction: q,
        n_max_cavity: pulse.n_pulse * q * clamped,
    })
}

/// Assembles the element list realizing a scheme: the optional first
/// stage, the cavity, the second stage, and the optional post-amplifier.
///
/// Coherent-probe schemes reject a non-unit first-stage gain. Degenerate
/// stages act on the signal arm.
pub fn compose_chain<S: Real>(
    kind: SchemeKind,
    g1: Gain<S>,
    g2: Gain<S>,
    phases: (S, S),
    hemt: Option<ThermalStage<S>>,
) -> Result<ChainDescriptor<S>, ReadoutError> {
    let (theta1, theta2) = phases;
    if !kind.has_first_stage() && g1 != Gain::unit() {
        return Err(ReadoutError::invalid(
            "coherent-probe schemes take no first-stage gain",
        ));
    }
    let mut elements = Vec::with_capacity(4);
    match kind {
        SchemeKind::Su11Pa => elements.push(ChainElement::Pa {
            gain: g1,
            theta: theta1,
        }),
        SchemeKind::Squeeze | SchemeKind::Su11Dpa => elements.push(ChainElement::Dpa {
            gain: g1,
            theta: theta1,
            arm: Arm::Signal,
        }),
        SchemeKind::CoherentPa | SchemeKind::CoherentDpa => {}
    }
    elements.push(ChainElement::Cavity);
    match kind {
        SchemeKind::CoherentPa | SchemeKind::Squeeze | SchemeKind::Su11Pa => {
            elements.push(ChainElement::Pa {
                gain: g2,
                theta: theta2,
            })
        }
        SchemeKind::CoherentDpa | SchemeKind::Su11Dpa => elements.push(ChainElement::Dpa {
            gain: g2,
            theta: theta2,
            arm: Arm::Signal,
        }),
    }
    if let Some(stage) = hemt {
        elements.push(ChainElement::Thermal(stage));
    }
    ChainDescriptor::new(elements)
}

/// A fully specified operating point and its predicted performance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint<S> {
    /// Pulse photon number.
    pub n_pulse: S,
    /// First-stage gain.
    pub g1: Gain<S>,
    /// Measurement window duration.
    pub t_m: S,
    /// Peak cavity occupation at this point.
    pub n_max_cavity: S,
    /// Predicted readout performance.
    pub result: ReadoutResult<S>,
}

fn golden_min<S: Real, F>(
    mut f: F,
    mut a: S,
    mut b: S,
    rel_tol: S,
) -> Result<(S, S), ReadoutError>
where
    F: FnMut(S) -> Result<S, ReadoutError>,
{
    let inv_phi = S::real(0.618_033_988_749_894_8);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > rel_tol * a.abs().max(b.abs()).max(S::one()) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    if f1 <= f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

fn coarse_then_golden<S: Real, F>(
    mut f: F,
    grid: &[S],
    rel_tol: S,
) -> Result<(S, S), ReadoutError>
where
    F: FnMut(S) -> Result<S, ReadoutError>,
{
    let mut best = 0;
    let mut best_value = f(grid[0])?;
    for (i, &x) in grid.iter().enumerate().skip(1) {
        let value = f(x)?;
        if value < best_value {
            best = i;
            best_value = value;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    if lo == hi {
        return Ok((grid[best], best_value));
    }
    golden_min(f, lo, hi, rel_tol)
}

/// Readout at one pulse amplitude and fixed measurement window, with the
/// first-stage gain solved against the cap.
#[allow(clippy::too_many_arguments)]
fn evaluate_n_pulse<S: Real>(
    kind: SchemeKind,
    spec: &ConstraintSpec<S>,
    params: &SystemParams<S>,
    pulse: &PulseSpec<S>,
    q: S,
    t_m: S,
    grid_points: usize,
    include_cross: bool,
) -> Result<OperatingPoint<S>, ReadoutError> {
    let g1 = if kind.has_first_stage() {
        let required = (spec.n_cap / (pulse.n_pulse * q)).max(S::one());
        Gain::from_linear(required.min(spec.g1_max.linear()))?
    } else {
        Gain::unit()
    };
    let phi = S::real(2.0) * params.two_chi_over_kappa().atan();
    let phases = ThetaRule::Auto.phases(kind, phi);
    let chain = compose_chain(kind, g1, spec.g2, phases, spec.hemt)?;
    let grid = FrequencyGrid::auto(pulse, params, grid_points)?;
    let settings = crate::homodyne::HomodyneSettings::new(
        t_m,
        cavity::group_delay(params),
        spec.eta,
        include_cross,
    )?;
    let result = crate::homodyne::measure(&chain, &grid, pulse, params, &settings)?;
    Ok(OperatingPoint {
        n_pulse: pulse.n_pulse,
        g1,
        t_m,
        n_max_cavity: pulse.n_pulse * q * g1.linear(),
        result,
    })
}

/// Finds the pulse photon number maximizing the branch-separation SNR at a
/// fixed measurement window, with the first-stage gain re-solved against
/// the photon cap at every amplitude: a 21-point coarse bracket followed
/// by a golden-section refinement to relative tolerance 1e-3.
///
/// The pulse argument fixes the carrier and bandwidth; its photon number
/// seeds nothing and is ignored.
#[allow(clippy::too_many_arguments)]
pub fn optimize_n_pulse<S: Real>(
    kind: SchemeKind,
    spec: &ConstraintSpec<S>,
    params: &SystemParams<S>,
    pulse_shape: &PulseSpec<S>,
    t_m: S,
    grid_points: usize,
    include_cross: bool,
) -> Result<OperatingPoint<S>, ReadoutError> {
    let probe = PulseSpec::new(pulse_shape.omega_c, pulse_shape.w, S::one())?;
    let q = cavity::peak_fraction(&probe, params, QubitSign::Plus)?;
    let n_max = spec.n_cap / q;
    let evaluate = |n: S| -> Result<OperatingPoint<S>, ReadoutError> {
        let pulse = PulseSpec::new(pulse_shape.omega_c, pulse_shape.w, n)?;
        evaluate_n_pulse(kind, spec, params, &pulse, q, t_m, grid_points, include_cross)
    };
    if !kind.has_first_stage() {
        // Without a first stage the SNR is monotone in the amplitude, so
        // the cap is saturated directly.
        return evaluate(n_max);
    }
    let span = S::real(40.0);
    let coarse: Vec<S> = (0..21)
        .map(|i| n_max / span.powf(S::one() - S::real(i as f64 / 20.0)))
        .collect();
    let (n_best, _) = coarse_then_golden(
        |n| Ok(-evaluate(n)?.result.snr),
        &coarse,
        S::real(1e-3),
    )?;
    evaluate(n_best)
}

/// One point of an error-versus-pull sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiScanPoint<S> {
    /// Pull in units of half the linewidth, `2 chi / kappa`.
    pub two_chi_over_kappa: S,
    /// Dispersive pull.
    pub chi: S,
    /// Branch-separation signal-to-noise ratio.
    pub snr: S,
    /// Assignment error probability.
    pub p_error: S,
}

/// Sweeps the dispersive pull at fixed pulse and chain settings, re-solving
/// the phase rule and the group-delay window center at every point.
#[allow(clippy::too_many_arguments)]
pub fn error_vs_chi<S: Real>(
    kind: SchemeKind,
    g1: Gain<S>,
    spec: &ConstraintSpec<S>,
    base: &SystemParams<S>,
    pulse: &PulseSpec<S>,
    t_m: S,
    u_grid: &[S],
    grid_points: usize,
    include_cross: bool,
) -> Result<Vec<ChiScanPoint<S>>, ReadoutError> {
    if u_grid.is_empty() {
        return Err(ReadoutError::EmptyGrid);
    }
    let mut points = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        if !u.is_finite() || u < S::zero() {
            return Err(ReadoutError::invalid(
                "pull grid must be nonnegative and finite",
            ));
        }
        let chi = u * base.kappa / S::real(2.0);
        let params = SystemParams::with_direct_chi(
            base.omega_r,
            base.omega_q,
            base.g,
            base.kappa,
            chi,
        )?;
        let phi = S::real(2.0) * u.atan();
        let phases = ThetaRule::Auto.phases(kind, phi);
        let chain = compose_chain(kind, g1, spec.g2, phases, spec.hemt)?;
        let grid = FrequencyGrid::auto(pulse, &params, grid_points)?;
        let settings = crate::homodyne::HomodyneSettings::new(
            t_m,
            cavity::group_delay(&params),
            spec.eta,
            include_cross,
        )?;
        let result = crate::homodyne::measure(&chain, &grid, pulse, &params, &settings)?;
        points.push(ChiScanPoint {
            two_chi_over_kappa: u,
            chi,
            snr: result.snr,
            p_error: result.p_error,
        });
    }
    Ok(points)
}

/// One point of an error-versus-window sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScanPoint<S> {
    /// Window duration.
    pub t_m: S,
    /// Readout performance at this window.
    pub result: ReadoutResult<S>,
}

/// Sweeps the measurement window for a fixed chain, reusing a single pair
/// of branch propagations.
pub fn error_vs_time<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    demod_delay: S,
    eta: S,
    include_cross: bool,
    t_m_grid: &[S],
) -> Result<Vec<TimeScanPoint<S>>, ReadoutError> {
    if t_m_grid.is_empty() {
        return Err(ReadoutError::EmptyGrid);
    }
    let (prefix_elements, thermal) = descriptor.split_terminal_thermal();
    let prefix =
        ChainDescriptor::new(prefix_elements.to_vec()).expect("prefix of a valid chain");
    let output_plus = run_chain(&prefix, grid, pulse, params, QubitSign::Plus, demod_delay)?;
    let output_minus = run_chain(&prefix, grid, pulse, params, QubitSign::Minus, demod_delay)?;
    t_m_grid
        .iter()
        .map(|&t_m| {
            if !t_m.is_finite() || t_m <= S::zero() {
                return Err(ReadoutError::invalid("window grid must be positive"));
            }
            let result = reduce_outputs(
                &output_plus,
                &output_minus,
                thermal.as_ref(),
                t_m,
                eta,
                include_cross,
            )?;
            Ok(TimeScanPoint { t_m, result })
        })
        .collect()
}

/// Steady-state signal-to-noise ratio of the two-stage scheme against the
/// coherent probe at equal peak cavity photons: the first stage amplifies
/// the probe before the cavity, so its input flux is reduced by `1 / G1`.
pub fn steady_state_snr_ratio<S: Real>(
    g1: Gain<S>,
    g2: Gain<S>,
    u: S,
) -> Result<S, ReadoutError> {
    let su11 = SteadySchemeConfig {
        kind: SchemeKind::Su11Pa,
        flux_over_kappa: S::one() / g1.linear(),
        g1,
        g2,
        theta_rule: ThetaRule::Auto,
        dpa_reading: DpaFluxReading::default(),
    };
    let coherent = SteadySchemeConfig {
        kind: SchemeKind::CoherentPa,
        flux_over_kappa: S::one(),
        g1: Gain::unit(),
        g2,
        theta_rule: ThetaRule::Auto,
        dpa_reading: DpaFluxReading::default(),
    };
    let (snr_num, photons_num) = steady_scheme_snr(&su11, u)?;
    let (snr_den, photons_den) = steady_scheme_snr(&coherent, u)?;
    debug_assert!(
        (photons_num - photons_den).abs()
            <= S::real(1e-9) * photons_den.max(S::real(1e-30))
    );
    Ok(snr_num / snr_den)
}
