//! Parameter types for the readout system, probe pulse, and amplifier stages.
//!
//! Frequencies are angular throughout; pick one time unit (nanoseconds in the
//! bundled presets) and stay in it. The dispersive shift `chi` is half the
//! qubit-state-dependent cavity pull: the dressed cavity sits at
//! `omega_r - chi` or `omega_r + chi` depending on the qubit branch.

use crate::error::ReadoutError;
use crate::scalar::Real;

/// Qubit branch selecting the sign of the dispersive pull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitSign {
    /// Excited branch; pulls the cavity to `omega_r - chi`.
    Plus,
    /// Ground branch; pulls the cavity to `omega_r + chi`.
    Minus,
}

impl QubitSign {
    /// `+1` or `-1` as a scalar.
    pub fn sign<S: Real>(self) -> S {
        match self {
            QubitSign::Plus => S::one(),
            QubitSign::Minus => -S::one(),
        }
    }

    /// Both branches, in `[Plus, Minus]` order.
    pub const BOTH: [QubitSign; 2] = [QubitSign::Plus, QubitSign::Minus];
}

/// Linear power gain of an amplifier stage, constrained to at least unity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Gain<S>(S);

impl<S: Real> Gain<S> {
    /// Wraps a linear power gain, rejecting values below one.
    pub fn from_linear(gain: S) -> Result<Self, ReadoutError> {
        if !gain.is_finite() || gain < S::one() {
            return Err(ReadoutError::GainBelowUnity {
                gain: gain.to_f64_lossy(),
            });
        }
        Ok(Gain(gain))
    }

    /// Converts a power gain in decibels (`10 log10 G`).
    pub fn from_db(db: S) -> Result<Self, ReadoutError> {
        Self::from_linear(S::real(10.0).powf(db / S::real(10.0)))
    }

    /// Unit gain (transparent stage).
    pub fn unit() -> Self {
        Gain(S::one())
    }

    /// Linear power gain.
    pub fn linear(self) -> S {
        self.0
    }

    /// Power gain in decibels.
    pub fn db(self) -> S {
        S::real(10.0) * self.0.log10()
    }

    /// Squeeze parameter of a phase-preserving (two-mode) amplifier with this
    /// gain: `G = cosh^2 r`.
    pub fn pa_squeeze_parameter(self) -> S {
        self.0.sqrt().acosh()
    }

    /// Squeeze parameter of a phase-sensitive (degenerate) amplifier with
    /// this gain on the amplified quadrature: `G = e^{2r}`.
    pub fn dpa_squeeze_parameter(self) -> S {
        self.0.ln() / S::real(2.0)
    }
}

/// How the dispersive shift stored in [`SystemParams`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiProvenance {
    /// Supplied directly by the caller.
    Direct,
    /// Fourth-order two-level expansion in `g / detuning`.
    SeriesFourthOrder,
    /// Transmon formula including the anharmonicity.
    Transmon,
}

/// Qubit-cavity system parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<S> {
    /// Bare cavity angular frequency.
    pub omega_r: S,
    /// Qubit angular transition frequency.
    pub omega_q: S,
    /// Qubit-cavity coupling rate.
    pub g: S,
    /// Cavity energy decay rate (linewidth).
    pub kappa: S,
    /// Transmon anharmonicity, when known.
    pub e_c: Option<S>,
    /// Dispersive shift; the pulled cavity is at `omega_r -/+ chi`.
    pub chi: S,
    /// Origin of `chi`.
    pub chi_provenance: ChiProvenance,
}

impl<S: Real> SystemParams<S> {
    /// Builds parameters with a directly measured dispersive shift.
    pub fn with_direct_chi(
        omega_r: S,
        omega_q: S,
        g: S,
        kappa: S,
        chi: S,
    ) -> Result<Self, ReadoutError> {
        validate_system(omega_r, omega_q, g, kappa)?;
        if !chi.is_finite() {
            return Err(ReadoutError::invalid("chi must be finite"));
        }
        Ok(SystemParams {
            omega_r,
            omega_q,
            g,
            kappa,
            e_c: None,
            chi,
            chi_provenance: ChiProvenance::Direct,
        })
    }

    /// Builds parameters deriving `chi` from the two-level series expansion.
    pub fn with_series_chi(omega_r: S, omega_q: S, g: S, kappa: S) -> Result<Self, ReadoutError> {
        validate_system(omega_r, omega_q, g, kappa)?;
        let chi = chi_series(g, omega_q - omega_r)?;
        Ok(SystemParams {
            omega_r,
            omega_q,
            g,
            kappa,
            e_c: None,
            chi,
            chi_provenance: ChiProvenance::SeriesFourthOrder,
        })
    }

    /// Builds parameters deriving `chi` from the transmon formula.
    pub fn with_transmon_chi(
        omega_r: S,
        omega_q: S,
        g: S,
        kappa: S,
        e_c: S,
    ) -> Result<Self, ReadoutError> {
        validate_system(omega_r, omega_q, g, kappa)?;
        let chi = chi_transmon(g, omega_q - omega_r, e_c)?;
        Ok(SystemParams {
            omega_r,
            omega_q,
            g,
            kappa,
            e_c: Some(e_c),
            chi,
            chi_provenance: ChiProvenance::Transmon,
        })
    }

    /// Qubit-cavity detuning `omega_q - omega_r` (signed).
    pub fn detuning(self) -> S {
        self.omega_q - self.omega_r
    }

    /// Dressed cavity frequency for the given qubit branch.
    pub fn pulled_frequency(self, sign: QubitSign) -> S {
        self.omega_r - sign.sign::<S>() * self.chi
    }

    /// Dimensionless pull-to-linewidth ratio `2 chi / kappa`.
    pub fn two_chi_over_kappa(self) -> S {
        S::real(2.0) * self.chi / self.kappa
    }

    /// Critical photon number `detuning^2 / (4 g^2)` where the dispersive
    /// approximation breaks down.
    pub fn critical_photon_number(self) -> Result<S, ReadoutError> {
        critical_photon_number(self.g, self.detuning())
    }

    /// Upper bound on the qubit lifetime set by Purcell decay through the
    /// cavity, `|detuning| / (kappa |chi|)`.
    pub fn purcell_t1_bound(self) -> Result<S, ReadoutError> {
        let delta = self.detuning();
        if delta == S::zero() {
            return Err(ReadoutError::ZeroDetuning);
        }
        if self.chi == S::zero() {
            return Err(ReadoutError::invalid(
                "Purcell bound diverges at zero dispersive shift",
            ));
        }
        Ok(delta.abs() / (self.kappa * self.chi.abs()))
    }
}

fn validate_system<S: Real>(omega_r: S, omega_q: S, g: S, kappa: S) -> Result<(), ReadoutError> {
    if !(omega_r.is_finite() && omega_q.is_finite() && g.is_finite()) {
        return Err(ReadoutError::invalid("system frequencies must be finite"));
    }
    if !kappa.is_finite() || kappa <= S::zero() {
        return Err(ReadoutError::invalid("kappa must be positive"));
    }
    Ok(())
}

/// Dispersive shift from the two-level expansion,
/// `chi = g^2/delta + 5 g^4 / (6 delta^3)`.
pub fn chi_series<S: Real>(g: S, delta: S) -> Result<S, ReadoutError> {
    if delta == S::zero() {
        return Err(ReadoutError::ZeroDetuning);
    }
    let leading = g * g / delta;
    let ratio = (g / delta) * (g / delta);
    Ok(leading * (S::one() + S::real(5.0 / 6.0) * ratio))
}

/// Dispersive shift of a transmon,
/// `chi = -E_c g^2 / (delta (delta - E_c))`.
pub fn chi_transmon<S: Real>(g: S, delta: S, e_c: S) -> Result<S, ReadoutError> {
    if delta == S::zero() {
        return Err(ReadoutError::ZeroDetuning);
    }
    if delta == e_c {
        return Err(ReadoutError::ChiPole);
    }
    Ok(-e_c * g * g / (delta * (delta - e_c)))
}

/// Photon number `delta^2 / (4 g^2)` above which the dispersive expansion
/// fails.
pub fn critical_photon_number<S: Real>(g: S, delta: S) -> Result<S, ReadoutError> {
    if g == S::zero() {
        return Err(ReadoutError::invalid(
            "critical photon number diverges at zero coupling",
        ));
    }
    Ok(delta * delta / (S::real(4.0) * g * g))
}

/// Input-referred added noise of an amplifier with the given power gain whose
/// internal mode holds `n_bar_t` thermal quanta:
/// `A_N = (1 - 1/G)(n_bar_t + 1/2)`.
pub fn added_noise_number<S: Real>(gain: Gain<S>, n_bar_t: S) -> S {
    (S::one() - S::one() / gain.linear()) * (n_bar_t + S::real(0.5))
}

/// Gaussian probe pulse in the spectral domain.
///
/// The amplitude profile is `h(omega) = (2 / (pi W^2))^{1/4}
/// exp(-(omega - omega_c)^2 / W^2)`, normalised so the spectral weight
/// integrates to one; `n_pulse` photons are distributed over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec<S> {
    /// Carrier angular frequency.
    pub omega_c: S,
    /// Spectral width of the Gaussian envelope.
    pub w: S,
    /// Mean photon number in the pulse.
    pub n_pulse: S,
}

impl<S: Real> PulseSpec<S> {
    /// Builds a pulse, rejecting non-positive widths and negative photon
    /// numbers.
    pub fn new(omega_c: S, w: S, n_pulse: S) -> Result<Self, ReadoutError> {
        if !omega_c.is_finite() {
            return Err(ReadoutError::invalid("carrier frequency must be finite"));
        }
        if !w.is_finite() || w <= S::zero() {
            return Err(ReadoutError::invalid("pulse width must be positive"));
        }
        if !n_pulse.is_finite() || n_pulse < S::zero() {
            return Err(ReadoutError::invalid("photon number must be non-negative"));
        }
        Ok(PulseSpec { omega_c, w, n_pulse })
    }

    /// Characteristic pulse duration `2 / W`.
    pub fn t_pulse(self) -> S {
        S::real(2.0) / self.w
    }

    /// Normalised spectral amplitude `h(omega)`.
    pub fn spectral_amplitude(self, omega: S) -> S {
        let norm = (S::real(2.0) / (S::PI() * self.w * self.w)).powf(S::real(0.25));
        let d = (omega - self.omega_c) / self.w;
        norm * (-d * d).exp()
    }

    /// Spectral weight `|h(omega)|^2`.
    pub fn spectral_weight(self, omega: S) -> S {
        let h = self.spectral_amplitude(omega);
        h * h
    }
}

/// Thermal following stage: phase-preserving gain whose internal mode is an
/// untracked thermal occupation (HEMT-style post-amplifier).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalStage<S> {
    /// Power gain of the stage.
    pub gain: Gain<S>,
    /// Thermal occupation of the internal mode.
    pub n_bar_t: S,
}

impl<S: Real> ThermalStage<S> {
    /// Builds a stage, rejecting negative thermal occupations.
    pub fn new(gain: Gain<S>, n_bar_t: S) -> Result<Self, ReadoutError> {
        if !n_bar_t.is_finite() || n_bar_t < S::zero() {
            return Err(ReadoutError::invalid(
                "thermal occupation must be non-negative",
            ));
        }
        Ok(ThermalStage { gain, n_bar_t })
    }

    /// Input-referred added noise quanta of this stage.
    pub fn added_noise(self) -> S {
        added_noise_number(self.gain, self.n_bar_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_conversions_round_trip() {
        let g: Gain<f64> = Gain::from_db(20.0).unwrap();
        assert!((g.linear() - 100.0).abs() < 1e-12);
        assert!((g.db() - 20.0).abs() < 1e-12);
        assert_eq!(Gain::<f64>::unit().linear(), 1.0);
        assert!(Gain::from_linear(0.5_f64).is_err());
        assert!(Gain::from_db(-0.1_f64).is_err());
    }

    #[test]
    fn squeeze_parameters_invert_their_gain_conventions() {
        let g: Gain<f64> = Gain::from_linear(100.0).unwrap();
        let r_pa = g.pa_squeeze_parameter();
        assert!((r_pa.cosh().powi(2) - 100.0).abs() < 1e-9);
        let r_dpa = g.dpa_squeeze_parameter();
        assert!(((2.0 * r_dpa).exp() - 100.0).abs() < 1e-9);
        assert_eq!(Gain::<f64>::unit().pa_squeeze_parameter(), 0.0);
    }

    #[test]
    fn chi_series_matches_hand_computation() {
        // g/2pi = 100 MHz, detuning/2pi = -1289 MHz; the 2pi factors cancel.
        let chi = chi_series(100.0_f64, -1289.0).unwrap();
        let leading = 100.0 * 100.0 / -1289.0;
        let correction = 5.0 * 100.0_f64.powi(4) / (6.0 * (-1289.0_f64).powi(3));
        assert!((chi - (leading + correction)).abs() < 1e-12);
        assert!((chi + 7.796_86).abs() < 1e-4);
        assert!(chi_series(100.0_f64, 0.0).is_err());
    }

    #[test]
    fn chi_transmon_approaches_leading_series_at_large_anharmonicity() {
        let g = 100.0_f64;
        let delta = -1289.0_f64;
        let leading = g * g / delta;
        for e_c in [1e6_f64, 1e8, 1e10] {
            let chi = chi_transmon(g, delta, e_c).unwrap();
            assert!(
                (chi / leading - 1.0).abs() < 2.0 * delta.abs() / e_c,
                "e_c = {e_c}"
            );
        }
        assert!(chi_transmon(g, delta, delta).is_err());
    }

    #[test]
    fn critical_photon_number_matches_reference_point() {
        let n = critical_photon_number(100.0_f64, 1289.0).unwrap();
        assert!((n - 41.538_025).abs() < 1e-6);
        assert!(critical_photon_number(0.0_f64, 1289.0).is_err());
    }

    #[test]
    fn purcell_bound_scales_with_detuning_over_pull() {
        let p =
            SystemParams::with_direct_chi(100.0_f64, 90.0, 0.5, 0.04, 0.0486).unwrap();
        let t1 = p.purcell_t1_bound().unwrap();
        assert!((t1 - 10.0 / (0.04 * 0.0486)).abs() < 1e-9);
    }

    #[test]
    fn added_noise_is_half_quantum_at_large_quantum_limited_gain() {
        let a: f64 = added_noise_number(Gain::from_linear(1e6).unwrap(), 0.0);
        assert!((a - 0.5).abs() < 1e-5);
        let a100: f64 = added_noise_number(Gain::from_linear(100.0).unwrap(), 0.0);
        assert!((a100 - 0.495).abs() < 1e-12);
    }

    #[test]
    fn hemt_added_noise_pins_the_decibel_convention() {
        // 30.1 dB read as amplitude decibels gives linear power gain
        // 10^(30.1/20) ~ 32; with 25 thermal quanta the added noise is 24.7.
        let g = Gain::from_linear(10.0_f64.powf(30.1 / 20.0)).unwrap();
        let a = added_noise_number(g, 25.0);
        assert!((a - 24.7).abs() < 5e-3, "a = {a}");
        // The power-decibel reading used throughout this crate instead gives
        // an added noise within a percent of the full thermal occupation.
        let g_power: Gain<f64> = Gain::from_db(30.1).unwrap();
        let a_power = added_noise_number(g_power, 25.0);
        assert!((a_power - 25.475).abs() < 1e-2);
    }

    #[test]
    fn pulse_spectral_weight_integrates_to_one() {
        let pulse = PulseSpec::new(6500.0_f64, 0.05, 5.0).unwrap();
        let d_omega = 0.05 / 400.0;
        let total: f64 = (-4000..=4000)
            .map(|k| pulse.spectral_weight(6500.0 + k as f64 * d_omega) * d_omega)
            .sum();
        assert!((total - 1.0).abs() < 1e-10, "total = {total}");
        assert!((pulse.t_pulse() - 40.0).abs() < 1e-12);
        assert!(PulseSpec::new(6500.0_f64, 0.0, 5.0).is_err());
        assert!(PulseSpec::new(6500.0_f64, 0.05, -1.0).is_err());
    }

    #[test]
    fn pulled_frequency_moves_opposite_to_the_qubit_sign() {
        let p = SystemParams::with_direct_chi(6500.0_f64, 5200.0, 0.6283, 0.04, 0.0486)
            .unwrap();
        assert!((p.pulled_frequency(QubitSign::Plus) - (6500.0 - 0.0486)).abs() < 1e-12);
        assert!((p.pulled_frequency(QubitSign::Minus) - (6500.0 + 0.0486)).abs() < 1e-12);
        assert!((p.two_chi_over_kappa() - 2.43).abs() < 1e-12);
    }
}
