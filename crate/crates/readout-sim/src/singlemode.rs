//! Closed-form single-frequency statistics for the supported chain layouts.
//!
//! At a single frequency every element of a readout chain is a Bogoliubov
//! map: the measured output mode is a linear combination of the input signal
//! mode, its adjoint, and (for phase-preserving amplifiers) an idler mode and
//! its adjoint. Each scheme therefore reduces to one composite [`ModeMap`]
//! per qubit branch, from which the mean and variance of any quadrature
//! follow directly. The qubit enters only through the sign of the cavity
//! phase shift, `+phi` or `-phi`.
//!
//! The measured quadrature is `p = -i (a - a^dag) / sqrt(2)`, so a coherent
//! state has variance one half.

use num_complex::Complex;

use crate::error::ReadoutError;
use crate::params::{Gain, QubitSign};
use crate::scalar::Real;

/// Chain layout around the cavity.
///
/// Layouts differ in what precedes the cavity (nothing, a squeezer, or the
/// first half of an interferometer) and in what amplifies the reflected
/// signal (a phase-preserving or a phase-sensitive stage).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Coherent probe, phase-preserving output amplifier.
    CoherentPa,
    /// Coherent probe, degenerate (phase-sensitive) output amplifier.
    CoherentDpa,
    /// Squeezed probe (degenerate pre-amplifier), phase-preserving output.
    Squeeze,
    /// Two-mode interferometer: phase-preserving amplifiers on both sides of
    /// the cavity, sharing one idler.
    Su11Pa,
    /// Single-mode interferometer: degenerate amplifiers on both sides of
    /// the cavity.
    Su11Dpa,
}

impl SchemeKind {
    /// All supported layouts.
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::CoherentPa,
        SchemeKind::CoherentDpa,
        SchemeKind::Squeeze,
        SchemeKind::Su11Pa,
        SchemeKind::Su11Dpa,
    ];

    /// Whether the layout places an amplifier before the cavity.
    pub fn has_first_stage(self) -> bool {
        matches!(
            self,
            SchemeKind::Squeeze | SchemeKind::Su11Pa | SchemeKind::Su11Dpa
        )
    }

    /// Whether the layout uses a phase-preserving amplifier anywhere and so
    /// carries an idler arm.
    pub fn has_idler(self) -> bool {
        matches!(
            self,
            SchemeKind::CoherentPa | SchemeKind::Squeeze | SchemeKind::Su11Pa
        )
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SchemeKind::CoherentPa => "coherent_pa",
            SchemeKind::CoherentDpa => "coherent_dpa",
            SchemeKind::Squeeze => "squeeze",
            SchemeKind::Su11Pa => "su11_pa",
            SchemeKind::Su11Dpa => "su11_dpa",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = ReadoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coherent_pa" => Ok(SchemeKind::CoherentPa),
            "coherent_dpa" => Ok(SchemeKind::CoherentDpa),
            "squeeze" => Ok(SchemeKind::Squeeze),
            "su11_pa" => Ok(SchemeKind::Su11Pa),
            "su11_dpa" => Ok(SchemeKind::Su11Dpa),
            other => Err(ReadoutError::invalid(format!(
                "unknown scheme `{other}`; expected one of coherent_pa, \
                 coherent_dpa, squeeze, su11_pa, su11_dpa"
            ))),
        }
    }
}

/// Inputs of the single-frequency formulas.
///
/// `phi` is the magnitude of the qubit-conditioned phase shift; the two
/// branches see `+phi` and `-phi`. `r1`, `theta1` describe the stage before
/// the cavity and `r2`, `theta2` the stage after it; layouts that lack a
/// stage ignore the corresponding fields. The coherent amplitude is real,
/// `alpha = sqrt(n_in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeInput<S> {
    /// Mean photon number of the coherent input.
    pub n_in: S,
    /// Cavity phase-shift magnitude in radians.
    pub phi: S,
    /// Squeeze parameter of the stage before the cavity.
    pub r1: S,
    /// Pump phase of the stage before the cavity.
    pub theta1: S,
    /// Squeeze parameter of the stage after the cavity.
    pub r2: S,
    /// Pump phase of the stage after the cavity.
    pub theta2: S,
}

impl<S: Real> SingleModeInput<S> {
    /// Input with both stages switched off (`r1 = r2 = 0`).
    pub fn bare(n_in: S, phi: S) -> Self {
        SingleModeInput {
            n_in,
            phi,
            r1: S::zero(),
            theta1: S::zero(),
            r2: S::zero(),
            theta2: S::zero(),
        }
    }

    /// Checks that photon number and squeeze parameters are admissible.
    pub fn validated(self) -> Result<Self, ReadoutError> {
        if !self.n_in.is_finite() || self.n_in < S::zero() {
            return Err(ReadoutError::invalid("photon number must be non-negative"));
        }
        if !self.phi.is_finite() {
            return Err(ReadoutError::invalid("phase shift must be finite"));
        }
        for r in [self.r1, self.r2] {
            if !r.is_finite() || r < S::zero() {
                return Err(ReadoutError::invalid(
                    "squeeze parameters must be non-negative",
                ));
            }
        }
        for theta in [self.theta1, self.theta2] {
            if !theta.is_finite() {
                return Err(ReadoutError::invalid("pump phases must be finite"));
            }
        }
        Ok(self)
    }
}

/// Output-quadrature statistics for the two qubit branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalNoisePair<S> {
    /// Mean of the measured quadrature on the `+phi` branch.
    pub mean_plus: S,
    /// Mean of the measured quadrature on the `-phi` branch.
    pub mean_minus: S,
    /// Variance on the `+phi` branch.
    pub var_plus: S,
    /// Variance on the `-phi` branch.
    pub var_minus: S,
}

impl<S: Real> SignalNoisePair<S> {
    /// Distance between the two branch means.
    pub fn signal(&self) -> S {
        (self.mean_plus - self.mean_minus).abs()
    }

    /// Whether the branch standard deviations agree to the given relative
    /// tolerance.
    pub fn noise_matched(&self, rel_tol: S) -> bool {
        let sp = self.var_plus.sqrt();
        let sm = self.var_minus.sqrt();
        (sp - sm).abs() <= rel_tol * sp.max(sm)
    }

    /// Signal-to-noise ratio `|mean+ - mean-| / (2 std)`.
    ///
    /// Defined only when both branches carry the same noise; pump phases
    /// produced by [`optimal_phases`] guarantee that. Otherwise an
    /// [`ReadoutError::UnequalNoise`] is returned rather than a misleading
    /// scalar.
    pub fn snr(&self) -> Result<S, ReadoutError> {
        if !self.noise_matched(S::real(1e-6)) {
            return Err(ReadoutError::UnequalNoise {
                std_plus: self.var_plus.sqrt().to_f64_lossy(),
                std_minus: self.var_minus.sqrt().to_f64_lossy(),
            });
        }
        let std = (self.var_plus.sqrt() + self.var_minus.sqrt()) / S::real(2.0);
        Ok(self.signal() / (S::real(2.0) * std))
    }
}

/// Composite single-frequency transform of the measured output mode,
/// `a_out = signal * a + signal_dagger * a^dag + idler * b + idler_dagger *
/// b^dag`, with the signal input in a coherent state and the idler in
/// vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMap<S> {
    /// Coefficient of the input signal annihilation operator.
    pub signal: Complex<S>,
    /// Coefficient of the input signal creation operator.
    pub signal_dagger: Complex<S>,
    /// Coefficient of the idler annihilation operator.
    pub idler: Complex<S>,
    /// Coefficient of the idler creation operator.
    pub idler_dagger: Complex<S>,
}

impl<S: Real> ModeMap<S> {
    /// Mean of the quadrature `(a e^{-i angle} + a^dag e^{i angle}) /
    /// sqrt(2)` for a real coherent input amplitude `alpha`.
    pub fn mean_quadrature(&self, alpha: S, angle: S) -> S {
        let beta = (self.signal + self.signal_dagger) * alpha;
        let rotated = beta * Complex::from_polar(S::one(), -angle);
        S::real(2.0).sqrt() * rotated.re
    }

    /// Variance of the same quadrature over the coherent-plus-vacuum input.
    pub fn var_quadrature(&self, angle: S) -> S {
        let e_minus = Complex::from_polar(S::one(), -angle);
        let e_plus = Complex::from_polar(S::one(), angle);
        let sig = self.signal * e_minus + self.signal_dagger.conj() * e_plus;
        let idl = self.idler * e_minus + self.idler_dagger.conj() * e_plus;
        S::real(0.5) * (sig.norm_sqr() + idl.norm_sqr())
    }

    /// Mean of the measured `p` quadrature.
    pub fn mean_p(&self, alpha: S) -> S {
        self.mean_quadrature(alpha, S::FRAC_PI_2())
    }

    /// Variance of the measured `p` quadrature.
    pub fn var_p(&self) -> S {
        self.var_quadrature(S::FRAC_PI_2())
    }

    /// Amplitude gain seen by a real coherent input, `|signal +
    /// signal_dagger|`.
    pub fn amplitude_gain(&self) -> S {
        (self.signal + self.signal_dagger).norm()
    }
}

fn cosh_sinh<S: Real>(r: S) -> (S, S) {
    (r.cosh(), r.sinh())
}

fn polar<S: Real>(mag: S, angle: S) -> Complex<S> {
    Complex::from_polar(mag, angle)
}

/// Composite map of the given layout for one qubit branch.
///
/// The map is exact for arbitrary pump phases; the scalar SNR downstream is
/// only defined for phase pairs that equalise the two branch variances (see
/// [`optimal_phases`]).
pub fn scheme_map<S: Real>(
    kind: SchemeKind,
    input: &SingleModeInput<S>,
    branch: QubitSign,
) -> ModeMap<S> {
    let phi = branch.sign::<S>() * input.phi;
    let (c1, s1) = cosh_sinh(input.r1);
    let (c2, s2) = cosh_sinh(input.r2);
    let t1 = input.theta1;
    let t2 = input.theta2;
    let zero = Complex::new(S::zero(), S::zero());
    match kind {
        SchemeKind::CoherentPa => ModeMap {
            signal: polar(c2, phi),
            signal_dagger: zero,
            idler: zero,
            idler_dagger: polar(s2, t2),
        },
        SchemeKind::CoherentDpa => ModeMap {
            signal: polar(c2, phi),
            signal_dagger: polar(s2, t2 - phi),
            idler: zero,
            idler_dagger: zero,
        },
        SchemeKind::Squeeze => ModeMap {
            signal: polar(c1 * c2, phi),
            signal_dagger: polar(c2 * s1, t1 + phi),
            idler: zero,
            idler_dagger: polar(s2, t2),
        },
        SchemeKind::Su11Pa => ModeMap {
            signal: polar(c1 * c2, phi) + polar(s1 * s2, t2 - t1),
            signal_dagger: zero,
            idler: zero,
            idler_dagger: polar(c2 * s1, t1 + phi) + polar(c1 * s2, t2),
        },
        SchemeKind::Su11Dpa => ModeMap {
            signal: polar(c1 * c2, phi) + polar(s1 * s2, t2 - t1 - phi),
            signal_dagger: polar(c2 * s1, t1 + phi) + polar(c1 * s2, t2 - phi),
            idler: zero,
            idler_dagger: zero,
        },
    }
}

fn pair_from_maps<S: Real>(
    input: &SingleModeInput<S>,
    map_for: impl Fn(QubitSign) -> ModeMap<S>,
) -> SignalNoisePair<S> {
    let alpha = input.n_in.sqrt();
    let plus = map_for(QubitSign::Plus);
    let minus = map_for(QubitSign::Minus);
    SignalNoisePair {
        mean_plus: plus.mean_p(alpha),
        mean_minus: minus.mean_p(alpha),
        var_plus: plus.var_p(),
        var_minus: minus.var_p(),
    }
}

/// Coherent probe with a phase-preserving output amplifier.
///
/// The mean is `sqrt(2 n) cosh(r2) sin(phi)` regardless of the pump phase,
/// and the variance is `cosh(2 r2) / 2` on both branches.
pub fn coherent_pa<S: Real>(input: &SingleModeInput<S>) -> SignalNoisePair<S> {
    pair_from_maps(input, |b| scheme_map(SchemeKind::CoherentPa, input, b))
}

/// Coherent probe with a degenerate output amplifier.
///
/// The variance `(cosh(2 r2) - cos(theta2) sinh(2 r2)) / 2` does not depend
/// on the branch; `theta2 = pi` amplifies the measured quadrature and leaves
/// the SNR at its bare-coherent value `2 sqrt(n) |sin(phi)|`.
pub fn coherent_dpa<S: Real>(input: &SingleModeInput<S>) -> SignalNoisePair<S> {
    pair_from_maps(input, |b| scheme_map(SchemeKind::CoherentDpa, input, b))
}

/// Squeezed probe (degenerate pre-amplifier) with a phase-preserving output
/// amplifier.
pub fn squeeze<S: Real>(input: &SingleModeInput<S>) -> SignalNoisePair<S> {
    pair_from_maps(input, |b| scheme_map(SchemeKind::Squeeze, input, b))
}

/// Two-mode interferometer: phase-preserving amplifiers before and after
/// the cavity, sharing the idler.
///
/// The branch-mean distance `2 sqrt(2 n) cosh(r1) cosh(r2) |sin(phi)|` is
/// independent of the pump-phase difference; only the noise depends on it.
pub fn su11_pa<S: Real>(input: &SingleModeInput<S>) -> SignalNoisePair<S> {
    pair_from_maps(input, |b| scheme_map(SchemeKind::Su11Pa, input, b))
}

fn wrap_angle<S: Real>(x: S) -> S {
    let two_pi = S::real(2.0) * S::PI();
    let wrapped = x - two_pi * (x / two_pi).round();
    if wrapped <= -S::PI() {
        wrapped + two_pi
    } else {
        wrapped
    }
}

fn require_su11_dpa_phases<S: Real>(input: &SingleModeInput<S>) -> Result<(), ReadoutError> {
    let tol = S::real(1e-9);
    if wrap_angle(input.theta1).abs() > tol || wrap_angle(input.theta2 - S::PI()).abs() > tol {
        return Err(ReadoutError::invalid(
            "the single-mode interferometer is defined for pump phases \
             theta1 = 0, theta2 = pi",
        ));
    }
    Ok(())
}

/// Single-mode interferometer: degenerate amplifiers before and after the
/// cavity, pumped at `theta1 = 0`, `theta2 = pi`.
///
/// The mean is `sqrt(2 n) e^{r1 + r2} sin(phi)` and the variance
/// `e^{2 r2} (cosh(2 r1) - cos(2 phi) sinh(2 r1)) / 2`; the common factor
/// `e^{r2}` cancels in the SNR, which is therefore independent of the
/// second-stage gain.
pub fn su11_dpa<S: Real>(input: &SingleModeInput<S>) -> Result<SignalNoisePair<S>, ReadoutError> {
    require_su11_dpa_phases(input)?;
    Ok(pair_from_maps(input, |b| {
        scheme_map(SchemeKind::Su11Dpa, input, b)
    }))
}

/// Single-mode interferometer with the cavity moved in front of both
/// degenerate amplifiers.
///
/// This alternate element order collapses to the bare coherent performance:
/// the squeeze factors cancel between signal and noise and the SNR equals
/// `2 sqrt(n) |sin(phi)|` for any gains.
pub fn su11_dpa_cavity_first<S: Real>(
    input: &SingleModeInput<S>,
) -> Result<SignalNoisePair<S>, ReadoutError> {
    require_su11_dpa_phases(input)?;
    Ok(pair_from_maps(input, |b| {
        su11_dpa_cavity_first_map(input, b)
    }))
}

fn su11_dpa_cavity_first_map<S: Real>(
    input: &SingleModeInput<S>,
    branch: QubitSign,
) -> ModeMap<S> {
    let phi = branch.sign::<S>() * input.phi;
    let (c1, s1) = cosh_sinh(input.r1);
    let (c2, s2) = cosh_sinh(input.r2);
    let t1 = input.theta1;
    let t2 = input.theta2;
    let zero = Complex::new(S::zero(), S::zero());
    ModeMap {
        signal: (polar(c1 * c2, S::zero()) + polar(s1 * s2, t2 - t1)) * polar(S::one(), phi),
        signal_dagger: (polar(c2 * s1, t1) + polar(c1 * s2, t2)) * polar(S::one(), -phi),
        idler: zero,
        idler_dagger: zero,
    }
}

/// Evaluates the layout selected by `kind` on a validated input.
pub fn evaluate<S: Real>(
    kind: SchemeKind,
    input: &SingleModeInput<S>,
) -> Result<SignalNoisePair<S>, ReadoutError> {
    let input = input.validated()?;
    match kind {
        SchemeKind::CoherentPa => Ok(coherent_pa(&input)),
        SchemeKind::CoherentDpa => Ok(coherent_dpa(&input)),
        SchemeKind::Squeeze => Ok(squeeze(&input)),
        SchemeKind::Su11Pa => Ok(su11_pa(&input)),
        SchemeKind::Su11Dpa => su11_dpa(&input),
    }
}

/// Pump phases `(theta1, theta2)` that equalise the branch variances and
/// minimise the noise of the measured quadrature at the given phase shift.
///
/// For the two-mode interferometer the anti-phased pump is best for
/// `|phi| <= pi/2` and the in-phase pump beyond; for the squeezed probe the
/// pre-squeeze orientation flips at `|phi| = pi/4`; layouts whose noise is
/// phase-insensitive return fixed conventions.
pub fn optimal_phases<S: Real>(kind: SchemeKind, phi: S) -> (S, S) {
    let abs_phi = wrap_angle(phi).abs();
    let zero = S::zero();
    let pi = S::PI();
    match kind {
        SchemeKind::CoherentPa => (zero, zero),
        SchemeKind::CoherentDpa => (zero, pi),
        SchemeKind::Squeeze => {
            // Keep cos(2 phi + theta1) >= 0 so the pre-squeeze reduces the
            // measured-quadrature noise.
            if abs_phi <= S::FRAC_PI_4() {
                (zero, zero)
            } else {
                (pi, zero)
            }
        }
        SchemeKind::Su11Pa => {
            if abs_phi <= S::FRAC_PI_2() {
                (zero, pi)
            } else {
                (zero, zero)
            }
        }
        SchemeKind::Su11Dpa => (zero, pi),
    }
}

/// How pump phases are chosen when composing a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaRule<S> {
    /// Use [`optimal_phases`] at the operating phase shift.
    Auto,
    /// Use the given phases for every operating point.
    Explicit {
        /// Pump phase of the stage before the cavity.
        theta1: S,
        /// Pump phase of the stage after the cavity.
        theta2: S,
    },
}

impl<S: Real> ThetaRule<S> {
    /// Resolves the rule to concrete phases at phase shift `phi`.
    pub fn phases(&self, kind: SchemeKind, phi: S) -> (S, S) {
        match *self {
            ThetaRule::Auto => optimal_phases(kind, phi),
            ThetaRule::Explicit { theta1, theta2 } => (theta1, theta2),
        }
    }
}

/// Element order assumed when a quoted input flux pins the single-mode
/// interferometer: the first degenerate amplifier either precedes the
/// cavity or follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpaFluxReading {
    /// First degenerate amplifier before the cavity (standard layout).
    #[default]
    AmplifierFirst,
    /// Cavity first, both degenerate amplifiers after it.
    CavityFirst,
}

/// One scheme under a fixed-input-flux steady-state drive.
///
/// `flux_over_kappa` is the photon flux entering the scheme's first element
/// in units of the cavity linewidth; it is held fixed while the pull ratio
/// `2 chi / kappa` varies, so the implied intracavity photon number changes
/// along a sweep and is reported rather than capped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadySchemeConfig<S> {
    /// Chain layout.
    pub kind: SchemeKind,
    /// Photon flux into the first element, in units of kappa.
    pub flux_over_kappa: S,
    /// First-stage gain; must be unity for coherent layouts.
    pub g1: Gain<S>,
    /// Second-stage gain.
    pub g2: Gain<S>,
    /// Pump-phase rule.
    pub theta_rule: ThetaRule<S>,
    /// Element order for the single-mode interferometer.
    pub dpa_reading: DpaFluxReading,
}

/// One row of a steady-state SNR-ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint<S> {
    /// Pull-to-linewidth ratio `2 chi / kappa`.
    pub two_chi_over_kappa: S,
    /// Carrier phase shift `2 arctan(2 chi / kappa)`.
    pub phi: S,
    /// SNR of the numerator scheme divided by SNR of the denominator scheme.
    pub ratio: S,
    /// Numerator-scheme SNR.
    pub snr_numerator: S,
    /// Denominator-scheme SNR.
    pub snr_denominator: S,
    /// Intracavity photons implied by the numerator scheme's fixed flux.
    pub cavity_photons_numerator: S,
    /// Intracavity photons implied by the denominator scheme's fixed flux.
    pub cavity_photons_denominator: S,
}

/// Steady-state SNR and implied intracavity photon number of one scheme at
/// pull ratio `u = 2 chi / kappa`.
///
/// The carrier sits on the bare resonance, so the phase shift is
/// `phi = 2 arctan(u)` and a flux `F` entering the cavity sustains
/// `4 F / (kappa (1 + u^2))` photons in it.
pub fn steady_scheme_snr<S: Real>(
    config: &SteadySchemeConfig<S>,
    two_chi_over_kappa: S,
) -> Result<(S, S), ReadoutError> {
    let u = two_chi_over_kappa;
    if !u.is_finite() || u <= S::zero() {
        return Err(ReadoutError::invalid(
            "pull ratio must be positive and finite",
        ));
    }
    if !config.flux_over_kappa.is_finite() || config.flux_over_kappa < S::zero() {
        return Err(ReadoutError::invalid("flux must be non-negative"));
    }
    let phi = S::real(2.0) * u.atan();
    let n_in = S::real(4.0) * config.flux_over_kappa / (S::one() + u * u);
    let coherent = matches!(
        config.kind,
        SchemeKind::CoherentPa | SchemeKind::CoherentDpa
    );
    if coherent && config.g1.linear() != S::one() {
        return Err(ReadoutError::invalid(
            "coherent layouts have no first stage; g1 must be unity",
        ));
    }
    let r1 = match config.kind {
        SchemeKind::CoherentPa | SchemeKind::CoherentDpa => S::zero(),
        SchemeKind::Su11Pa => config.g1.pa_squeeze_parameter(),
        SchemeKind::Squeeze | SchemeKind::Su11Dpa => config.g1.dpa_squeeze_parameter(),
    };
    let r2 = match config.kind {
        SchemeKind::CoherentPa | SchemeKind::Squeeze | SchemeKind::Su11Pa => {
            config.g2.pa_squeeze_parameter()
        }
        SchemeKind::CoherentDpa | SchemeKind::Su11Dpa => config.g2.dpa_squeeze_parameter(),
    };
    let (theta1, theta2) = config.theta_rule.phases(config.kind, phi);
    let input = SingleModeInput {
        n_in,
        phi,
        r1,
        theta1,
        r2,
        theta2,
    };
    let pair = match (config.kind, config.dpa_reading) {
        (SchemeKind::Su11Dpa, DpaFluxReading::CavityFirst) => su11_dpa_cavity_first(&input)?,
        _ => evaluate(config.kind, &input)?,
    };
    let flux_gain_into_cavity = match (config.kind, config.dpa_reading) {
        (SchemeKind::CoherentPa | SchemeKind::CoherentDpa, _) => S::one(),
        (SchemeKind::Su11Dpa, DpaFluxReading::CavityFirst) => S::one(),
        (SchemeKind::Su11Pa, _) => config.g1.linear(),
        (SchemeKind::Squeeze | SchemeKind::Su11Dpa, _) => {
            let (c1, s1) = cosh_sinh(r1);
            (polar(c1, S::zero()) + polar(s1, theta1)).norm_sqr()
        }
    };
    let cavity_photons = n_in * flux_gain_into_cavity;
    Ok((pair.snr()?, cavity_photons))
}

/// Ratio of two schemes' steady-state SNRs over a grid of pull ratios, each
/// scheme driven at its own fixed input flux.
pub fn snr_ratio_curve<S: Real>(
    numerator: &SteadySchemeConfig<S>,
    denominator: &SteadySchemeConfig<S>,
    two_chi_over_kappa_grid: &[S],
) -> Result<Vec<RatioPoint<S>>, ReadoutError> {
    if two_chi_over_kappa_grid.is_empty() {
        return Err(ReadoutError::EmptyGrid);
    }
    let mut points = Vec::with_capacity(two_chi_over_kappa_grid.len());
    for &u in two_chi_over_kappa_grid {
        let (snr_num, n_num) = steady_scheme_snr(numerator, u)?;
        let (snr_den, n_den) = steady_scheme_snr(denominator, u)?;
        if snr_den == S::zero() {
            return Err(ReadoutError::invalid(
                "denominator scheme has zero SNR; ratio undefined",
            ));
        }
        points.push(RatioPoint {
            two_chi_over_kappa: u,
            phi: S::real(2.0) * u.atan(),
            ratio: snr_num / snr_den,
            snr_numerator: snr_num,
            snr_denominator: snr_den,
            cavity_photons_numerator: n_num,
            cavity_photons_denominator: n_den,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N_IN: f64 = 4.0;
    const PHI: f64 = 0.7;

    fn input(r1: f64, theta1: f64, r2: f64, theta2: f64) -> SingleModeInput<f64> {
        SingleModeInput {
            n_in: N_IN,
            phi: PHI,
            r1,
            theta1,
            r2,
            theta2,
        }
    }

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: actual {actual}, expected {expected}"
        );
    }

    #[test]
    fn coherent_pa_matches_reference_values_and_ignores_pump_phase() {
        for theta2 in [0.0, 0.9, 2.5] {
            let pair = coherent_pa(&input(0.0, 0.0, 1.2, theta2));
            assert_close(pair.mean_plus, 3.299_236_757_448, 1e-11, "mean+");
            assert_close(pair.mean_minus, -3.299_236_757_448, 1e-11, "mean-");
            assert_close(pair.var_plus, 2.778_473_583_483, 1e-11, "var+");
            assert_close(pair.var_minus, 2.778_473_583_483, 1e-11, "var-");
        }
    }

    #[test]
    fn coherent_pa_snr_matches_added_noise_form() {
        // SNR = 2 sqrt(n) |sin phi| / sqrt(2 A_N + 1) with A_N = (1 - 1/G)/2.
        let g: f64 = 1.2_f64.cosh().powi(2);
        let a_n = 0.5 * (1.0 - 1.0 / g);
        let expected = 2.0 * N_IN.sqrt() * PHI.sin().abs() / (2.0 * a_n + 1.0).sqrt();
        let snr = coherent_pa(&input(0.0, 0.0, 1.2, 0.0)).snr().unwrap();
        assert_close(snr, expected, 1e-12, "snr");
    }

    #[test]
    fn coherent_pa_without_gain_reduces_to_bare_coherent() {
        let pair = coherent_pa(&input(0.0, 0.0, 0.0, 0.0));
        let snr = pair.snr().unwrap();
        assert_close(snr, 2.0 * N_IN.sqrt() * PHI.sin().abs(), 1e-12, "snr");
        assert_close(pair.var_plus, 0.5, 1e-15, "vacuum variance");
        let zero_phi = coherent_pa(&SingleModeInput {
            phi: 0.0,
            ..input(0.0, 0.0, 1.2, 0.0)
        });
        assert_eq!(zero_phi.snr().unwrap(), 0.0);
    }

    #[test]
    fn coherent_pa_large_gain_limit_loses_root_two() {
        let pair = coherent_pa(&SingleModeInput {
            n_in: 9.0,
            phi: std::f64::consts::FRAC_PI_2,
            r1: 0.0,
            theta1: 0.0,
            r2: 12.0,
            theta2: 0.0,
        });
        assert_close(pair.snr().unwrap(), 6.0 / 2.0_f64.sqrt(), 1e-9, "snr");
    }

    #[test]
    fn coherent_dpa_matches_reference_values() {
        let amplified = coherent_dpa(&input(0.0, 0.0, 1.2, std::f64::consts::PI));
        assert_close(amplified.mean_plus, 6.049_660_679_919, 1e-11, "mean+");
        assert_close(amplified.mean_minus, -6.049_660_679_919, 1e-11, "mean-");
        assert_close(amplified.var_plus, 5.511_588_190_321, 1e-11, "var+");
        assert_close(amplified.var_minus, 5.511_588_190_321, 1e-11, "var-");
        let skewed = coherent_dpa(&input(0.0, 0.0, 1.2, 0.35));
        assert_close(skewed.mean_plus, 1.835_268_364_044, 1e-11, "mean+");
        assert_close(skewed.mean_minus, 0.404_141_212_210, 1e-11, "mean-");
        assert_close(skewed.var_plus, 0.211_060_300_734, 1e-11, "var+");
        assert_close(skewed.var_minus, 0.211_060_300_734, 1e-11, "var-");
    }

    #[test]
    fn coherent_dpa_snr_is_bare_coherent_at_amplifying_phase() {
        for r2 in [0.0, 0.4, 1.2, 3.0] {
            let pair = coherent_dpa(&input(0.0, 0.0, r2, std::f64::consts::PI));
            assert_close(
                pair.snr().unwrap(),
                2.0 * N_IN.sqrt() * PHI.sin().abs(),
                1e-12,
                "snr",
            );
        }
        let unsqueezed = coherent_dpa(&input(0.0, 0.0, 0.0, 0.0));
        assert_close(unsqueezed.var_plus, 0.5, 1e-15, "vacuum variance");
    }

    #[test]
    fn coherent_dpa_deamplifying_phase_suppresses_both_signal_and_noise() {
        let pair = coherent_dpa(&input(0.0, 0.0, 1.2, 0.0));
        // Mean and std both scale by e^{-r2}; the SNR survives unchanged.
        assert_close(
            pair.mean_plus,
            (2.0 * N_IN).sqrt() * PHI.sin() * (-1.2_f64).exp(),
            1e-12,
            "mean+",
        );
        assert_close(pair.var_plus, 0.5 * (-2.4_f64).exp(), 1e-12, "var+");
        assert_close(
            pair.snr().unwrap(),
            2.0 * N_IN.sqrt() * PHI.sin().abs(),
            1e-12,
            "snr",
        );
    }

    #[test]
    fn su11_pa_matches_reference_values_for_both_pump_choices() {
        let anti = su11_pa(&input(0.3, 0.0, 1.2, std::f64::consts::PI));
        assert_close(anti.mean_plus, 3.448_819_249_790, 1e-11, "mean+");
        assert_close(anti.mean_minus, -3.448_819_249_790, 1e-11, "mean-");
        assert_close(anti.var_plus, 1.962_922_282_876, 1e-11, "var+");
        assert_close(anti.var_minus, 1.962_922_282_876, 1e-11, "var-");
        let aligned = su11_pa(&input(0.3, 0.0, 1.2, 0.0));
        assert_close(aligned.mean_plus, 3.448_819_249_790, 1e-11, "mean+");
        assert_close(aligned.var_plus, 4.624_645_303_171, 1e-11, "var+");
        assert_close(aligned.var_minus, 4.624_645_303_171, 1e-11, "var-");
    }

    #[test]
    fn su11_pa_general_phases_give_unequal_noise_and_no_scalar_snr() {
        let pair = su11_pa(&input(0.3, 0.7, 1.2, 2.1));
        assert_close(pair.mean_plus, 4.730_021_541_547, 1e-11, "mean+");
        assert_close(pair.mean_minus, -2.167_616_958_033, 1e-11, "mean-");
        assert_close(pair.var_plus, 4.624_645_303_171, 1e-11, "var+");
        assert_close(pair.var_minus, 2.415_327_739_828, 1e-11, "var-");
        assert!(matches!(
            pair.snr(),
            Err(ReadoutError::UnequalNoise { .. })
        ));
    }

    #[test]
    fn su11_pa_signal_is_independent_of_pump_phase_difference() {
        let reference = su11_pa(&input(0.3, 0.0, 1.2, std::f64::consts::PI)).signal();
        for (t1, t2) in [(0.0, 0.0), (0.3, 1.1), (1.9, 0.2), (2.5, 5.9)] {
            let signal = su11_pa(&input(0.3, t1, 1.2, t2)).signal();
            assert_close(signal, reference, 1e-12, "signal");
        }
    }

    #[test]
    fn su11_pa_without_first_stage_is_exactly_coherent_pa() {
        let su11 = su11_pa(&input(0.0, 0.0, 1.2, 0.4));
        let coherent = coherent_pa(&input(0.0, 0.0, 1.2, 0.4));
        assert_eq!(su11, coherent);
    }

    #[test]
    fn su11_pa_matched_large_gains_cost_root_two_against_coherent() {
        // Equal added noise 1/2 on both stages, anti-phased pumps, phi = pi/2:
        // the SNR settles at sqrt(n), a factor sqrt(2) below the coherent
        // probe with one large phase-preserving amplifier.
        let r = 8.0;
        let pair = su11_pa(&SingleModeInput {
            n_in: 9.0,
            phi: std::f64::consts::FRAC_PI_2,
            r1: r,
            theta1: 0.0,
            r2: r,
            theta2: std::f64::consts::PI,
        });
        assert_close(pair.snr().unwrap(), 3.0, 1e-6, "snr");
    }

    #[test]
    fn squeeze_matches_reference_values_for_both_orientations() {
        let aligned = squeeze(&input(0.3, 0.0, 1.2, 0.0));
        assert_close(aligned.mean_plus, 4.453_503_795_320, 1e-11, "mean+");
        assert_close(aligned.mean_minus, -4.453_503_795_320, 1e-11, "mean-");
        assert_close(aligned.var_plus, 2.905_112_867_510, 1e-11, "var+");
        assert_close(aligned.var_minus, 2.905_112_867_510, 1e-11, "var-");
        let flipped = squeeze(&input(0.3, std::f64::consts::PI, 1.2, 0.0));
        assert_close(flipped.mean_plus, 2.444_134_704_260, 1e-11, "mean+");
        assert_close(flipped.var_plus, 3.259_877_118_118, 1e-11, "var+");
    }

    #[test]
    fn squeeze_without_first_stage_is_exactly_coherent_pa() {
        let sq = squeeze(&input(0.0, 0.0, 1.2, 0.9));
        let coherent = coherent_pa(&input(0.0, 0.0, 1.2, 0.9));
        assert_eq!(sq, coherent);
    }

    #[test]
    fn squeeze_orientations_tie_at_the_quarter_pi_boundary() {
        let base = SingleModeInput {
            phi: std::f64::consts::FRAC_PI_4,
            ..input(0.3, 0.0, 1.2, 0.0)
        };
        let aligned = squeeze(&base);
        let flipped = squeeze(&SingleModeInput {
            theta1: std::f64::consts::PI,
            ..base
        });
        assert_close(aligned.var_plus, flipped.var_plus, 1e-12, "variance tie");
    }

    #[test]
    fn su11_dpa_matches_reference_values() {
        let pair = su11_dpa(&input(0.3, 0.0, 1.2, std::f64::consts::PI)).unwrap();
        assert_close(pair.mean_plus, 8.166_187_751_634, 1e-11, "mean+");
        assert_close(pair.mean_minus, -8.166_187_751_634, 1e-11, "mean-");
        assert_close(pair.var_plus, 5.937_386_089_557, 1e-11, "var+");
        assert_close(pair.var_minus, 5.937_386_089_557, 1e-11, "var-");
    }

    #[test]
    fn su11_dpa_snr_is_independent_of_second_stage_gain() {
        let snr_a = su11_dpa(&input(0.3, 0.0, 0.3, std::f64::consts::PI))
            .unwrap()
            .snr()
            .unwrap();
        let snr_b = su11_dpa(&input(0.3, 0.0, 2.0, std::f64::consts::PI))
            .unwrap()
            .snr()
            .unwrap();
        assert_close(snr_a, snr_b, 1e-12, "snr");
    }

    #[test]
    fn su11_dpa_reaches_twice_root_n_at_quarter_turn() {
        let pair = su11_dpa(&SingleModeInput {
            phi: std::f64::consts::FRAC_PI_2,
            ..input(0.3, 0.0, 1.2, std::f64::consts::PI)
        })
        .unwrap();
        assert_close(pair.snr().unwrap(), 2.0 * N_IN.sqrt(), 1e-12, "snr");
    }

    #[test]
    fn su11_dpa_without_first_stage_is_bare_coherent() {
        let pair = su11_dpa(&input(0.0, 0.0, 1.2, std::f64::consts::PI)).unwrap();
        assert_close(
            pair.snr().unwrap(),
            2.0 * N_IN.sqrt() * PHI.sin().abs(),
            1e-12,
            "snr",
        );
    }

    #[test]
    fn su11_dpa_noise_suppression_factor_at_small_phase_shift() {
        // As phi -> 0 the noise variance falls as e^{-4 r1} relative to the
        // amplified mean scale.
        let r1 = 1.5;
        let pair = su11_dpa(&SingleModeInput {
            phi: 1e-6,
            ..input(r1, 0.0, 0.7, std::f64::consts::PI)
        })
        .unwrap();
        let expected = 0.5 * (2.0 * 0.7_f64).exp() * (-2.0 * r1).exp();
        assert_close(pair.var_plus, expected, 1e-9, "var+");
    }

    #[test]
    fn su11_dpa_rejects_other_pump_phases() {
        assert!(su11_dpa(&input(0.3, 0.1, 1.2, std::f64::consts::PI)).is_err());
        assert!(su11_dpa(&input(0.3, 0.0, 1.2, 0.0)).is_err());
        // Phases equivalent modulo 2 pi are accepted.
        assert!(su11_dpa(&input(0.3, 2.0 * std::f64::consts::PI, 1.2, 3.0 * std::f64::consts::PI))
            .is_ok());
    }

    #[test]
    fn every_snr_agrees_with_its_own_pair() {
        let cases: [(SchemeKind, SingleModeInput<f64>); 5] = [
            (SchemeKind::CoherentPa, input(0.0, 0.0, 1.2, 0.0)),
            (
                SchemeKind::CoherentDpa,
                input(0.0, 0.0, 1.2, std::f64::consts::PI),
            ),
            (SchemeKind::Squeeze, input(0.3, 0.0, 1.2, 0.0)),
            (
                SchemeKind::Su11Pa,
                input(0.3, 0.0, 1.2, std::f64::consts::PI),
            ),
            (
                SchemeKind::Su11Dpa,
                input(0.3, 0.0, 1.2, std::f64::consts::PI),
            ),
        ];
        for (kind, inp) in cases {
            let pair = evaluate(kind, &inp).unwrap();
            let by_hand =
                (pair.mean_plus - pair.mean_minus).abs() / (2.0 * pair.var_plus.sqrt());
            assert_close(pair.snr().unwrap(), by_hand, 1e-12, "snr consistency");
        }
    }

    #[test]
    fn snr_is_even_in_phi_under_the_phase_rule() {
        for kind in SchemeKind::ALL {
            for phi in [0.15, 0.7, 1.3, 2.2] {
                let snrs: Vec<f64> = [phi, -phi]
                    .into_iter()
                    .map(|p| {
                        let (theta1, theta2) = optimal_phases(kind, p);
                        let inp = SingleModeInput {
                            n_in: N_IN,
                            phi: p,
                            r1: 0.3,
                            theta1,
                            r2: 1.2,
                            theta2,
                        };
                        evaluate(kind, &inp).unwrap().snr().unwrap()
                    })
                    .collect();
                assert_close(snrs[0], snrs[1], 1e-12, "evenness");
            }
        }
    }

    #[test]
    fn rotated_quadrature_reproduces_p_statistics() {
        // Rotating the measured quadrature by delta is undone by shifting
        // the cavity phases by delta and the final pump phase by delta
        // (phase-preserving last stage) or 2 delta (degenerate last stage).
        let alpha = N_IN.sqrt();
        for delta in [-0.9, -0.3, 0.4, 1.1] {
            for (kind, pump_shift) in [
                (SchemeKind::CoherentPa, delta),
                (SchemeKind::Squeeze, delta),
                (SchemeKind::Su11Pa, delta),
                (SchemeKind::CoherentDpa, 2.0 * delta),
                (SchemeKind::Su11Dpa, 2.0 * delta),
            ] {
                let base = input(0.3, 0.4, 1.2, 1.9);
                for branch in QubitSign::BOTH {
                    let reference = scheme_map(kind, &base, branch);
                    let shifted_input = SingleModeInput {
                        phi: base.phi + branch.sign::<f64>() * delta,
                        theta2: base.theta2 + pump_shift,
                        ..base
                    };
                    let rotated = scheme_map(kind, &shifted_input, branch);
                    let angle = std::f64::consts::FRAC_PI_2 + delta;
                    assert_close(
                        rotated.mean_quadrature(alpha, angle),
                        reference.mean_p(alpha),
                        1e-12,
                        "rotated mean",
                    );
                    assert_close(
                        rotated.var_quadrature(angle),
                        reference.var_p(),
                        1e-12,
                        "rotated variance",
                    );
                }
            }
        }
    }

    #[test]
    fn optimal_phase_rules_match_their_branch_points() {
        let pi = std::f64::consts::PI;
        assert_eq!(optimal_phases(SchemeKind::Su11Pa, 0.3), (0.0, pi));
        assert_eq!(optimal_phases(SchemeKind::Su11Pa, 2.0), (0.0, 0.0));
        assert_eq!(optimal_phases(SchemeKind::Squeeze, 0.5), (0.0, 0.0));
        assert_eq!(optimal_phases(SchemeKind::Squeeze, 1.0), (pi, 0.0));
        assert_eq!(optimal_phases(SchemeKind::Su11Dpa, 2.9), (0.0, pi));
        assert_eq!(optimal_phases(SchemeKind::CoherentDpa, 0.3), (0.0, pi));
        // The rules wrap out-of-range phase shifts before comparing.
        assert_eq!(
            optimal_phases(SchemeKind::Su11Pa, 0.3 + 2.0 * pi),
            (0.0, pi)
        );
    }

    #[test]
    fn phase_rule_equalises_variances_everywhere() {
        for kind in SchemeKind::ALL {
            for phi in [0.05, 0.7, 0.784, 0.786, 1.56, 1.58, 2.8] {
                let (theta1, theta2) = optimal_phases(kind, phi);
                let inp = SingleModeInput {
                    n_in: N_IN,
                    phi,
                    r1: 0.3,
                    theta1,
                    r2: 1.2,
                    theta2,
                };
                let pair = evaluate(kind, &inp).unwrap();
                assert!(
                    (pair.var_plus - pair.var_minus).abs() <= 1e-12,
                    "{kind} at phi = {phi}: var+ {} var- {}",
                    pair.var_plus,
                    pair.var_minus
                );
            }
        }
    }

    #[test]
    fn evaluate_rejects_invalid_inputs() {
        assert!(evaluate(SchemeKind::CoherentPa, &input(-0.1, 0.0, 0.0, 0.0)).is_err());
        let negative_n = SingleModeInput {
            n_in: -1.0,
            ..input(0.0, 0.0, 0.0, 0.0)
        };
        assert!(evaluate(SchemeKind::CoherentPa, &negative_n).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for kind in SchemeKind::ALL {
            let parsed: SchemeKind = kind.to_string().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert!("coherent".parse::<SchemeKind>().is_err());
    }

    fn fig_ratio_configs() -> (
        SteadySchemeConfig<f64>,
        SteadySchemeConfig<f64>,
        SteadySchemeConfig<f64>,
        SteadySchemeConfig<f64>,
    ) {
        let g2: Gain<f64> = Gain::from_db(20.0).unwrap();
        let su11_pa_cfg = SteadySchemeConfig {
            kind: SchemeKind::Su11Pa,
            flux_over_kappa: 31.23,
            g1: Gain::from_db(3.12).unwrap(),
            g2,
            theta_rule: ThetaRule::Explicit {
                theta1: 0.0,
                theta2: 0.0,
            },
            dpa_reading: DpaFluxReading::AmplifierFirst,
        };
        let coherent_pa_cfg = SteadySchemeConfig {
            kind: SchemeKind::CoherentPa,
            flux_over_kappa: 32.5,
            g1: Gain::unit(),
            g2,
            theta_rule: ThetaRule::Auto,
            dpa_reading: DpaFluxReading::AmplifierFirst,
        };
        let su11_dpa_cfg = SteadySchemeConfig {
            kind: SchemeKind::Su11Dpa,
            flux_over_kappa: 21.7,
            g1: Gain::from_linear(32.5 / 21.7).unwrap(),
            g2,
            theta_rule: ThetaRule::Explicit {
                theta1: 0.0,
                theta2: std::f64::consts::PI,
            },
            dpa_reading: DpaFluxReading::AmplifierFirst,
        };
        let coherent_dpa_cfg = SteadySchemeConfig {
            kind: SchemeKind::CoherentDpa,
            flux_over_kappa: 32.5,
            g1: Gain::unit(),
            g2,
            theta_rule: ThetaRule::Auto,
            dpa_reading: DpaFluxReading::AmplifierFirst,
        };
        (su11_pa_cfg, coherent_pa_cfg, su11_dpa_cfg, coherent_dpa_cfg)
    }

    #[test]
    fn ratio_curve_matches_reference_for_aligned_pumps() {
        let (su11, coherent, _, _) = fig_ratio_configs();
        let grid = [0.1, 1.0, 2.0, 2.43, 3.0, 10.0];
        let expected = [0.5741, 0.7971, 1.2127, 1.3927, 1.6179, 2.9678];
        let points = snr_ratio_curve(&su11, &coherent, &grid).unwrap();
        for (point, want) in points.iter().zip(expected) {
            assert_close(point.ratio, want, 2e-4, "aligned-pump ratio");
        }
        // The interferometer beats the coherent probe only at large pull.
        assert!(points[0].ratio < 1.0 && points[5].ratio > 1.0);
    }

    #[test]
    fn ratio_curve_matches_reference_for_antiphased_pumps() {
        let (mut su11, coherent, _, _) = fig_ratio_configs();
        su11.theta_rule = ThetaRule::Explicit {
            theta1: 0.0,
            theta2: std::f64::consts::PI,
        };
        let grid = [0.1, 1.0, 10.0];
        let expected = [2.9678, 0.7971, 0.5741];
        let points = snr_ratio_curve(&su11, &coherent, &grid).unwrap();
        for (point, want) in points.iter().zip(expected) {
            assert_close(point.ratio, want, 2e-4, "anti-phased ratio");
        }
        assert!(points[0].ratio > 1.0 && points[2].ratio < 1.0);
    }

    #[test]
    fn dpa_ratio_curve_matches_reference_and_crossing() {
        let (_, _, su11_dpa_cfg, coherent_dpa_cfg) = fig_ratio_configs();
        let grid = [0.1, 1.0, 2.9, 3.0];
        let expected = [1.1950, 0.8171, 1.0086, 1.0172];
        let points = snr_ratio_curve(&su11_dpa_cfg, &coherent_dpa_cfg, &grid).unwrap();
        for (point, want) in points.iter().zip(expected) {
            assert_close(point.ratio, want, 2e-4, "dpa ratio");
        }
        // The crossing to ratio > 1 sits just below 2.9.
        let crossing = snr_ratio_curve(&su11_dpa_cfg, &coherent_dpa_cfg, &[2.80, 2.81]).unwrap();
        assert!(crossing[0].ratio < 1.0 && crossing[1].ratio > 1.0);
    }

    #[test]
    fn cavity_first_reading_pins_the_ratio_at_its_flux_value() {
        let (_, _, mut su11_dpa_cfg, coherent_dpa_cfg) = fig_ratio_configs();
        su11_dpa_cfg.dpa_reading = DpaFluxReading::CavityFirst;
        let expected = (21.7_f64 / 32.5).sqrt();
        let points =
            snr_ratio_curve(&su11_dpa_cfg, &coherent_dpa_cfg, &[0.1, 1.0, 3.0, 10.0]).unwrap();
        for point in points {
            assert_close(point.ratio, expected, 1e-12, "cavity-first ratio");
        }
    }

    #[test]
    fn ratio_curve_reports_implied_cavity_photons() {
        let (su11, coherent, _, _) = fig_ratio_configs();
        let points = snr_ratio_curve(&su11, &coherent, &[2.43]).unwrap();
        let u2 = 2.43_f64 * 2.43;
        assert_close(
            points[0].cavity_photons_denominator,
            4.0 * 32.5 / (1.0 + u2),
            1e-9,
            "coherent cavity photons",
        );
        let g1 = 10.0_f64.powf(0.312);
        assert_close(
            points[0].cavity_photons_numerator,
            4.0 * 31.23 * g1 / (1.0 + u2),
            1e-9,
            "interferometer cavity photons",
        );
    }

    #[test]
    fn ratio_curve_rejects_degenerate_grids_and_gains() {
        let (su11, coherent, _, _) = fig_ratio_configs();
        assert!(matches!(
            snr_ratio_curve(&su11, &coherent, &[]),
            Err(ReadoutError::EmptyGrid)
        ));
        assert!(steady_scheme_snr(&su11, 0.0).is_err());
        assert!(steady_scheme_snr(&su11, -1.0).is_err());
        let mut bad = coherent;
        bad.g1 = Gain::from_linear(2.0).unwrap();
        assert!(steady_scheme_snr(&bad, 1.0).is_err());
    }
}
