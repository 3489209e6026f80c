//! TOML run configuration: strict parsing, defaults, and conversion into
//! simulator types.
//!
//! All frequencies are plain (not angular) and carry a `_hz` suffix; times
//! carry `_ns`; gains carry `_db`. Angular quantities internal to the
//! simulator use rad/ns, converted here.

use readout_sim::error::ReadoutError;
use readout_sim::params::{Gain, QubitSign};
use readout_sim::singlemode::{DpaFluxReading, SchemeKind, ThetaRule};
use readout_sim::{ConstraintSpec, FrequencyGrid, PulseSpec, SystemParams, ThermalStage};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Radians per nanosecond corresponding to one hertz.
pub const RAD_PER_NS_PER_HZ: f64 = std::f64::consts::TAU * 1e-9;

fn config_err(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

/// A field accepting one value or a list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    /// A single value.
    One(T),
    /// A list of values.
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(value) => vec![value.clone()],
            OneOrMany::Many(values) => values.clone(),
        }
    }
}

/// The literal word `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoWord {
    /// Marker for automatic resolution.
    Auto,
}

/// The literal word `resonance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceWord {
    /// Carrier pinned to the bare cavity resonance.
    Resonance,
}

/// The literal word `ideal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealWord {
    /// No post-amplifier; detection is noiseless past the chain.
    Ideal,
}

/// Dispersive pull source: given directly or derived from the couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiDerivation {
    /// Two-level dispersive series in `g / Delta`.
    Series,
    /// Transmon expression using the anharmonicity `e_c_hz`.
    Transmon,
}

/// System couplings and rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    /// Bare cavity resonance, Hz.
    #[serde(default = "default_omega_r_hz")]
    pub omega_r_hz: f64,
    /// Qubit transition, Hz.
    #[serde(default = "default_omega_q_hz")]
    pub omega_q_hz: f64,
    /// Qubit-cavity coupling, Hz.
    #[serde(default = "default_g_hz")]
    pub g_hz: f64,
    /// Cavity linewidth, 1/ns.
    #[serde(default = "default_kappa_per_ns")]
    pub kappa_per_ns: f64,
    /// Dispersive pull, Hz. Exclusive with `derive_chi`; a written
    /// `[system]` section must pick one of the two.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_hz: Option<f64>,
    /// Derive the pull from the couplings instead of `chi_hz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derive_chi: Option<ChiDerivation>,
    /// Transmon anharmonicity, Hz; required by `derive_chi = "transmon"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_c_hz: Option<f64>,
}

fn default_omega_r_hz() -> f64 {
    6.7e9
}

fn default_omega_q_hz() -> f64 {
    5.411e9
}

fn default_g_hz() -> f64 {
    1.0e8
}

fn default_kappa_per_ns() -> f64 {
    0.04
}

impl Default for SystemSection {
    fn default() -> Self {
        SystemSection {
            omega_r_hz: default_omega_r_hz(),
            omega_q_hz: default_omega_q_hz(),
            g_hz: default_g_hz(),
            kappa_per_ns: default_kappa_per_ns(),
            chi_hz: Some(7.7e6),
            derive_chi: None,
            e_c_hz: None,
        }
    }
}

/// Carrier placement for the probe pulse.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CarrierField {
    /// `carrier = "resonance"`.
    Word(ResonanceWord),
    /// `carrier = { offset_hz = ... }`, offset from the bare resonance.
    Offset(CarrierOffset),
}

/// Explicit carrier detuning from the bare resonance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierOffset {
    /// Carrier minus bare resonance, Hz.
    pub offset_hz: f64,
}

/// Probe pulse shape and energy.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    /// Pulse duration `T_pulse = 2 / W`, ns.
    #[serde(default = "default_t_pulse_ns")]
    pub t_pulse_ns: f64,
    /// Mean photon number of the pulse.
    #[serde(default = "default_n_pulse")]
    pub n_pulse: f64,
    /// Carrier placement; defaults to the bare resonance.
    #[serde(default = "default_carrier")]
    pub carrier: CarrierField,
}

fn default_t_pulse_ns() -> f64 {
    60.0
}

fn default_n_pulse() -> f64 {
    19.36
}

fn default_carrier() -> CarrierField {
    CarrierField::Word(ResonanceWord::Resonance)
}

impl Default for PulseSection {
    fn default() -> Self {
        PulseSection {
            t_pulse_ns: default_t_pulse_ns(),
            n_pulse: default_n_pulse(),
            carrier: default_carrier(),
        }
    }
}

/// First-stage gain: a value in dB or `"auto"` to solve it from the
/// photon cap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GainField {
    /// `g1_db = "auto"`.
    Word(AutoWord),
    /// Fixed gain in dB.
    Db(f64),
}

/// Pump-phase rule: `"auto"` or explicit angles.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaRuleField {
    /// `theta_rule = "auto"`.
    Word(AutoWord),
    /// `theta_rule = { theta1 = ..., theta2 = ... }`, radians.
    Explicit(ExplicitTheta),
}

/// Fixed pump phases in radians.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitTheta {
    /// Pump phase of the stage before the cavity.
    pub theta1: f64,
    /// Pump phase of the stage after the cavity.
    pub theta2: f64,
}

/// Element order assumed when a quoted flux pins the single-mode chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DpaReadingField {
    /// First degenerate amplifier before the cavity.
    #[default]
    AmplifierFirst,
    /// Cavity first, both degenerate stages after it.
    CavityFirst,
}

impl DpaReadingField {
    fn to_sim(self) -> DpaFluxReading {
        match self {
            DpaReadingField::AmplifierFirst => DpaFluxReading::AmplifierFirst,
            DpaReadingField::CavityFirst => DpaFluxReading::CavityFirst,
        }
    }
}

/// Amplification chain layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    /// Scheme name or list of names.
    #[serde(default = "default_scheme")]
    pub scheme: OneOrMany<String>,
    /// Input photon flux over kappa, per scheme; used by `single-mode`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux_over_kappa: Option<OneOrMany<f64>>,
    /// First-stage gain in dB, or `"auto"` to solve it from the cap.
    #[serde(default = "default_g1_db")]
    pub g1_db: GainField,
    /// Second-stage gain in dB.
    #[serde(default = "default_g2_db")]
    pub g2_db: f64,
    /// Single-mode element order for quoted fluxes.
    #[serde(default)]
    pub dpa_flux_reading: DpaReadingField,
    /// Pump-phase rule.
    #[serde(default = "default_theta_rule")]
    pub theta_rule: ThetaRuleField,
}

fn default_scheme() -> OneOrMany<String> {
    OneOrMany::One("su11_pa".to_string())
}

fn default_g1_db() -> GainField {
    GainField::Word(AutoWord::Auto)
}

fn default_g2_db() -> f64 {
    20.0
}

fn default_theta_rule() -> ThetaRuleField {
    ThetaRuleField::Word(AutoWord::Auto)
}

impl Default for ChainSection {
    fn default() -> Self {
        ChainSection {
            scheme: default_scheme(),
            flux_over_kappa: None,
            g1_db: default_g1_db(),
            g2_db: default_g2_db(),
            dpa_flux_reading: DpaReadingField::AmplifierFirst,
            theta_rule: default_theta_rule(),
        }
    }
}

/// Post-amplifier: `"ideal"` or a gain-and-noise pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HemtField {
    /// `hemt = "ideal"`.
    Word(IdealWord),
    /// `hemt = { g_db = ..., n_bar_t = ... }`.
    Stage(HemtStage),
}

/// Post-amplifier gain and thermal occupation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HemtStage {
    /// Power gain, dB.
    pub g_db: f64,
    /// Thermal occupation of the added-noise mode.
    pub n_bar_t: f64,
}

/// Detection line settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectSection {
    /// Integration window over pulse duration.
    #[serde(default = "default_t_m_over_t_pulse")]
    pub t_m_over_t_pulse: f64,
    /// Detection efficiency in the error probability.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Whether mirror-frequency covariances enter the windowed noise.
    #[serde(default = "default_include_cross_cov")]
    pub include_cross_cov: bool,
    /// Post-amplifier, or `"ideal"` for none.
    #[serde(default = "default_hemt")]
    pub hemt: HemtField,
}

fn default_t_m_over_t_pulse() -> f64 {
    1.2
}

fn default_eta() -> f64 {
    0.5
}

fn default_include_cross_cov() -> bool {
    true
}

fn default_hemt() -> HemtField {
    HemtField::Stage(HemtStage {
        g_db: 30.1,
        n_bar_t: 25.0,
    })
}

impl Default for DetectSection {
    fn default() -> Self {
        DetectSection {
            t_m_over_t_pulse: default_t_m_over_t_pulse(),
            eta: default_eta(),
            include_cross_cov: default_include_cross_cov(),
            hemt: default_hemt(),
        }
    }
}

/// Frequency-grid halfwidth rule.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HalfwidthField {
    /// `halfwidth_rule = "auto"`: `max(6 W, 8 kappa)`.
    Word(AutoWord),
    /// `halfwidth_rule = { half_width_per_ns = ... }`, rad/ns.
    Explicit(ExplicitHalfwidth),
}

/// Fixed spectral halfwidth.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitHalfwidth {
    /// Halfwidth around the carrier, rad/ns.
    pub half_width_per_ns: f64,
}

/// Frequency-grid resolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Number of grid points; odd, at least 3.
    #[serde(default = "default_grid_points")]
    pub points: usize,
    /// Halfwidth rule.
    #[serde(default = "default_halfwidth_rule")]
    pub halfwidth_rule: HalfwidthField,
}

fn default_grid_points() -> usize {
    4097
}

fn default_halfwidth_rule() -> HalfwidthField {
    HalfwidthField::Word(AutoWord::Auto)
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            points: default_grid_points(),
            halfwidth_rule: default_halfwidth_rule(),
        }
    }
}

/// Sweep axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Pull ratio `2 chi / kappa`.
    ChiOverKappa,
    /// Pulse bandwidth over linewidth.
    #[serde(alias = "W_over_kappa")]
    WOverKappa,
    /// Integration window over pulse duration.
    #[serde(rename = "t_m")]
    TM,
    /// Pulse photon number.
    NPulse,
}

/// One-axis sweep: `steps` evenly spaced values from `from` to `to`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Quantity to sweep.
    pub axis: SweepAxis,
    /// First value.
    pub from: f64,
    /// Last value.
    pub to: f64,
    /// Number of points, at least 1.
    pub steps: usize,
}

/// Full run configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// System couplings and rates.
    #[serde(default)]
    pub system: SystemSection,
    /// Probe pulse.
    #[serde(default)]
    pub pulse: PulseSection,
    /// Amplification chain.
    #[serde(default)]
    pub chain: ChainSection,
    /// Detection line.
    #[serde(default)]
    pub detect: DetectSection,
    /// Frequency grid.
    #[serde(default)]
    pub grid: GridSection,
    /// Optional sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl RunConfig {
    /// Parses a config from TOML text, rejecting unknown keys.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    /// Serializes the config as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// First-stage gain choice after parsing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainChoice {
    /// Solve from the photon cap; unit gain for coherent schemes.
    Auto,
    /// Fixed gain.
    Fixed(Gain<f64>),
}

/// Grid halfwidth choice after parsing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfwidthRule {
    /// `max(6 W, 8 kappa)`.
    Auto,
    /// Fixed halfwidth, rad/ns.
    Explicit(f64),
}

/// Sweep values ready to iterate.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    /// Swept quantity.
    pub axis: SweepAxis,
    /// Evenly spaced values, `from` through `to`.
    pub values: Vec<f64>,
}

/// A validated configuration converted to simulator units.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// System parameters in rad/ns.
    pub params: SystemParams,
    /// Probe pulse in rad/ns.
    pub pulse: PulseSpec,
    /// Scheme list in config order.
    pub schemes: Vec<SchemeKind>,
    /// First-stage gain rule.
    pub g1: GainChoice,
    /// Second-stage gain.
    pub g2: Gain<f64>,
    /// Pump-phase rule.
    pub theta_rule: ThetaRule<f64>,
    /// Input fluxes for the single-mode picture, parallel to `schemes`.
    pub flux_over_kappa: Option<Vec<f64>>,
    /// Single-mode element order for quoted fluxes.
    pub dpa_reading: DpaFluxReading,
    /// Integration window, ns.
    pub t_m: f64,
    /// Detection efficiency.
    pub eta: f64,
    /// Post-amplifier, if any.
    pub hemt: Option<ThermalStage>,
    /// Whether mirror-frequency covariances enter the windowed noise.
    pub include_cross: bool,
    /// Frequency-grid point count.
    pub grid_points: usize,
    /// Frequency-grid halfwidth rule.
    pub halfwidth: HalfwidthRule,
    /// Sweep, if any.
    pub sweep: Option<SweepPlan>,
}

fn finite(value: f64, name: &str) -> Result<f64, CliError> {
    if !value.is_finite() {
        return Err(config_err(format!("{name} must be finite")));
    }
    Ok(value)
}

fn positive(value: f64, name: &str) -> Result<f64, CliError> {
    if !(finite(value, name)?> 0.0) {
        return Err(config_err(format!("{name} must be positive")));
    }
    Ok(value)
}

fn build_params(system: &SystemSection) -> Result<SystemParams, CliError> {
    let omega_r = positive(system.omega_r_hz, "system.omega_r_hz")? * RAD_PER_NS_PER_HZ;
    let omega_q = positive(system.omega_q_hz, "system.omega_q_hz")? * RAD_PER_NS_PER_HZ;
    let g = positive(system.g_hz, "system.g_hz")? * RAD_PER_NS_PER_HZ;
    let kappa = positive(system.kappa_per_ns, "system.kappa_per_ns")?;
    match (system.chi_hz, system.derive_chi) {
        (Some(chi_hz), None) => {
            let chi = finite(chi_hz, "system.chi_hz")? * RAD_PER_NS_PER_HZ;
            Ok(SystemParams::with_direct_chi(omega_r, omega_q, g, kappa, chi)?)
        }
        (None, Some(ChiDerivation::Series)) => {
            Ok(SystemParams::with_series_chi(omega_r, omega_q, g, kappa)?)
        }
        (None, Some(ChiDerivation::Transmon)) => {
            let e_c_hz = system.e_c_hz.ok_or_else(|| {
                config_err("derive_chi = \"transmon\" requires system.e_c_hz")
            })?;
            let e_c = positive(e_c_hz, "system.e_c_hz")? * RAD_PER_NS_PER_HZ;
            Ok(SystemParams::with_transmon_chi(omega_r, omega_q, g, kappa, e_c)?)
        }
        (Some(_), Some(_)) => Err(config_err(
            "system.chi_hz and system.derive_chi are mutually exclusive",
        )),
        (None, None) => Err(config_err(
            "one of system.chi_hz or system.derive_chi is required",
        )),
    }
}

fn build_pulse(pulse: &PulseSection, params: &SystemParams) -> Result<PulseSpec, CliError> {
    let t_pulse = positive(pulse.t_pulse_ns, "pulse.t_pulse_ns")?;
    let n_pulse = finite(pulse.n_pulse, "pulse.n_pulse")?;
    if n_pulse < 0.0 {
        return Err(config_err("pulse.n_pulse must be non-negative"));
    }
    let omega_c = match pulse.carrier {
        CarrierField::Word(ResonanceWord::Resonance) => params.omega_r,
        CarrierField::Offset(offset) => {
            params.omega_r + finite(offset.offset_hz, "pulse.carrier.offset_hz")? * RAD_PER_NS_PER_HZ
        }
    };
    Ok(PulseSpec::new(omega_c, 2.0 / t_pulse, n_pulse)?)
}

fn build_sweep(sweep: &SweepSection) -> Result<SweepPlan, CliError> {
    finite(sweep.from, "sweep.from")?;
    finite(sweep.to, "sweep.to")?;
    if sweep.steps == 0 {
        return Err(config_err("sweep.steps must be at least 1"));
    }
    if sweep.steps == 1 && sweep.from != sweep.to {
        return Err(config_err("sweep.steps = 1 requires sweep.from == sweep.to"));
    }
    let lower_bound = match sweep.axis {
        SweepAxis::ChiOverKappa | SweepAxis::WOverKappa | SweepAxis::TM => 0.0,
        SweepAxis::NPulse => -f64::EPSILON,
    };
    let values: Vec<f64> = (0..sweep.steps)
        .map(|i| {
            if sweep.steps == 1 {
                sweep.from
            } else {
                sweep.from + (sweep.to - sweep.from) * i as f64 / (sweep.steps - 1) as f64
            }
        })
        .collect();
    if values.iter().any(|&v| v <= lower_bound) {
        return Err(config_err("sweep values must be positive for this axis"));
    }
    Ok(SweepPlan {
        axis: sweep.axis,
        values,
    })
}

impl Resolved {
    /// Validates a parsed config and converts it to simulator units.
    pub fn from_config(config: &RunConfig) -> Result<Self, CliError> {
        let params = build_params(&config.system)?;
        let pulse = build_pulse(&config.pulse, &params)?;

        let scheme_names = config.chain.scheme.to_vec();
        if scheme_names.is_empty() {
            return Err(config_err("chain.scheme must name at least one scheme"));
        }
        let schemes = scheme_names
            .iter()
            .map(|name| {
                name.parse::<SchemeKind>()
                    .map_err(|_| config_err(format!("unknown scheme \"{name}\"")))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let g1 = match config.chain.g1_db {
            GainField::Word(AutoWord::Auto) => GainChoice::Auto,
            GainField::Db(db) => {
                GainChoice::Fixed(Gain::from_db(finite(db, "chain.g1_db")?)?)
            }
        };
        let g2 = Gain::from_db(finite(config.chain.g2_db, "chain.g2_db")?)?;
        let theta_rule = match config.chain.theta_rule {
            ThetaRuleField::Word(AutoWord::Auto) => ThetaRule::Auto,
            ThetaRuleField::Explicit(angles) => ThetaRule::Explicit {
                theta1: finite(angles.theta1, "chain.theta_rule.theta1")?,
                theta2: finite(angles.theta2, "chain.theta_rule.theta2")?,
            },
        };

        let flux_over_kappa = match &config.chain.flux_over_kappa {
            None => None,
            Some(field) => {
                let mut fluxes = field.to_vec();
                if fluxes.len() == 1 && schemes.len() > 1 {
                    fluxes = vec![fluxes[0]; schemes.len()];
                }
                if fluxes.len() != schemes.len() {
                    return Err(config_err(
                        "chain.flux_over_kappa must have one value or one per scheme",
                    ));
                }
                for &flux in &fluxes {
                    positive(flux, "chain.flux_over_kappa")?;
                }
                Some(fluxes)
            }
        };

        let t_m_ratio = positive(config.detect.t_m_over_t_pulse, "detect.t_m_over_t_pulse")?;
        let eta = positive(config.detect.eta, "detect.eta")?;
        if eta > 1.0 {
            return Err(config_err("detect.eta must lie in (0, 1]"));
        }
        let hemt = match config.detect.hemt {
            HemtField::Word(IdealWord::Ideal) => None,
            HemtField::Stage(stage) => Some(ThermalStage::new(
                Gain::from_db(finite(stage.g_db, "detect.hemt.g_db")?)?,
                finite(stage.n_bar_t, "detect.hemt.n_bar_t")?,
            )?),
        };

        if config.grid.points < 3 || config.grid.points % 2 == 0 {
            return Err(config_err("grid.points must be odd and at least 3"));
        }
        let halfwidth = match config.grid.halfwidth_rule {
            HalfwidthField::Word(AutoWord::Auto) => HalfwidthRule::Auto,
            HalfwidthField::Explicit(rule) => HalfwidthRule::Explicit(positive(
                rule.half_width_per_ns,
                "grid.halfwidth_rule.half_width_per_ns",
            )?),
        };

        let sweep = config.sweep.as_ref().map(build_sweep).transpose()?;

        Ok(Resolved {
            params,
            pulse,
            schemes,
            g1,
            g2,
            theta_rule,
            flux_over_kappa,
            dpa_reading: config.chain.dpa_flux_reading.to_sim(),
            t_m: t_m_ratio * pulse.t_pulse(),
            eta,
            hemt,
            include_cross: config.detect.include_cross_cov,
            grid_points: config.grid.points,
            halfwidth,
            sweep,
        })
    }

    /// Builds the frequency grid for a pulse under this config's rule.
    pub fn grid_for(&self, pulse: &PulseSpec) -> Result<FrequencyGrid, ReadoutError> {
        match self.halfwidth {
            HalfwidthRule::Auto => FrequencyGrid::auto(pulse, &self.params, self.grid_points),
            HalfwidthRule::Explicit(half_width) => {
                let d_omega = 2.0 * half_width / (self.grid_points - 1) as f64;
                FrequencyGrid::new(pulse.omega_c, d_omega, self.grid_points)
            }
        }
    }

    /// Constraint set for gain solving and optimization: the photon cap
    /// and gain ceiling keep their standard values, the rest follows the
    /// config.
    pub fn constraints(&self) -> ConstraintSpec {
        ConstraintSpec {
            g2: self.g2,
            eta: self.eta,
            hemt: self.hemt,
            ..ConstraintSpec::default()
        }
    }

    /// Resolves the first-stage gain for one scheme, solving against the
    /// photon cap when the rule is `auto`.
    pub fn resolve_g1(&self, kind: SchemeKind, pulse: &PulseSpec) -> Result<Gain<f64>, CliError> {
        match self.g1 {
            GainChoice::Fixed(gain) => {
                if !kind.has_first_stage() && gain != Gain::unit() {
                    return Err(config_err(format!(
                        "scheme \"{kind}\" has no first stage; set g1_db = 0.0 or \"auto\""
                    )));
                }
                Ok(gain)
            }
            GainChoice::Auto => {
                if !kind.has_first_stage() {
                    return Ok(Gain::unit());
                }
                let solved =
                    readout_sim::scenarios::solve_g1(&self.constraints(), pulse, &self.params)?;
                Ok(solved.g1)
            }
        }
    }

    /// Pump phases at this config's operating pull.
    pub fn phases(&self, kind: SchemeKind) -> (f64, f64) {
        let phi = 2.0 * self.params.two_chi_over_kappa().atan();
        self.theta_rule.phases(kind, phi)
    }

    /// Peak cavity occupation for a pulse at unit pre-gain.
    pub fn peak_fraction(&self, pulse: &PulseSpec) -> Result<f64, ReadoutError> {
        readout_sim::cavity::peak_fraction(pulse, &self.params, QubitSign::Plus)
    }
}
