//! Gaussian propagation of the full pulse spectrum through an amplifier
//! chain.
//!
//! All pumps sit at the carrier, so every element couples a frequency
//! `omega_c + delta` only with its mirror `omega_c - delta`. The state is
//! therefore block-diagonal: one block per `|delta|` holding the signal
//! modes of the pair (plus their idler partners for phase-preserving
//! chains), and one center block at the carrier itself. Each block stores
//! the means and covariances of its `(x, p)` quadratures; elements act as
//! symplectic congruences, except the thermal stage, which adds noise.
//!
//! Discrete modes are `b_j = sqrt(d_omega) b(omega_j)`, so vacuum variance
//! is exactly one half per mode and spectral densities are recovered by
//! dividing by `d_omega`.

use crate::cavity;
use crate::error::ReadoutError;
use crate::params::{Gain, PulseSpec, QubitSign, SystemParams, ThermalStage};
use crate::scalar::Real;

/// Default spectral resolution for chain runs.
pub const DEFAULT_GRID_POINTS: usize = 4097;

/// Symmetric frequency grid centered on the carrier.
///
/// The point count is odd so the carrier is itself a grid point and the
/// mirror map `omega -> 2 omega_c - omega` permutes grid points exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<S> {
    /// Carrier (pump) angular frequency.
    pub omega_c: S,
    /// Grid spacing.
    pub d_omega: S,
    /// Number of grid points (odd).
    pub points: usize,
}

impl<S: Real> FrequencyGrid<S> {
    /// Builds a grid, rejecting even point counts and degenerate spacings.
    pub fn new(omega_c: S, d_omega: S, points: usize) -> Result<Self, ReadoutError> {
        if !omega_c.is_finite() {
            return Err(ReadoutError::invalid("grid center must be finite"));
        }
        if !d_omega.is_finite() || d_omega <= S::zero() {
            return Err(ReadoutError::invalid("grid spacing must be positive"));
        }
        if points < 3 || points % 2 == 0 {
            return Err(ReadoutError::invalid(
                "grid needs an odd number of points, at least 3",
            ));
        }
        Ok(FrequencyGrid {
            omega_c,
            d_omega,
            points,
        })
    }

    /// Grid spanning `max(6W, 8 kappa)` on both sides of the pulse carrier
    /// with the given odd point count.
    pub fn auto(
        pulse: &PulseSpec<S>,
        params: &SystemParams<S>,
        points: usize,
    ) -> Result<Self, ReadoutError> {
        let half_width = (S::real(6.0) * pulse.w).max(S::real(8.0) * params.kappa);
        if points < 3 || points % 2 == 0 {
            return Err(ReadoutError::invalid(
                "grid needs an odd number of points, at least 3",
            ));
        }
        let d_omega =
            S::real(2.0) * half_width / S::from_usize(points - 1).expect("grid size");
        FrequencyGrid::new(pulse.omega_c, d_omega, points)
    }

    /// Number of mirror pairs on each side of the center.
    pub fn half(&self) -> usize {
        (self.points - 1) / 2
    }

    /// Frequency of grid index `j` (ascending; index `half()` is the
    /// carrier).
    pub fn omega(&self, index: usize) -> S {
        self.omega_c + self.delta(index)
    }

    /// Offset of grid index `j` from the carrier.
    pub fn delta(&self, index: usize) -> S {
        let centered = index as isize - self.half() as isize;
        self.d_omega * S::real(centered as f64)
    }

    /// Index of the mirror frequency `2 omega_c - omega_j`.
    pub fn mirror_index(&self, index: usize) -> usize {
        2 * self.half() - index
    }
}

/// Which arm a degenerate amplifier acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// The measured arm carrying the probe pulse.
    Signal,
    /// The idler arm of phase-preserving amplifiers.
    Idler,
}

/// One element of a readout chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainElement<S> {
    /// Phase-preserving amplifier coupling the signal with the idler arm.
    Pa {
        /// Power gain `cosh^2 r`.
        gain: Gain<S>,
        /// Pump phase.
        theta: S,
    },
    /// Degenerate amplifier coupling mirror frequencies within one arm.
    Dpa {
        /// Power gain `e^{2r}` on the amplified quadrature.
        gain: Gain<S>,
        /// Pump phase.
        theta: S,
        /// Arm it acts on.
        arm: Arm,
    },
    /// The qubit-loaded cavity. The qubit branch is chosen per run, so one
    /// descriptor serves both measurement outcomes.
    Cavity,
    /// Thermal post-amplifier on the measured arm; terminal only.
    Thermal(ThermalStage<S>),
}

/// Validated ordered list of chain elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDescriptor<S> {
    elements: Vec<ChainElement<S>>,
}

impl<S: Real> ChainDescriptor<S> {
    /// Validates element ordering: at most one cavity, and a thermal stage
    /// only as the final element.
    pub fn new(elements: Vec<ChainElement<S>>) -> Result<Self, ReadoutError> {
        let cavities = elements
            .iter()
            .filter(|e| matches!(e, ChainElement::Cavity))
            .count();
        if cavities > 1 {
            return Err(ReadoutError::invalid(
                "a chain may contain at most one cavity",
            ));
        }
        for (i, element) in elements.iter().enumerate() {
            if matches!(element, ChainElement::Thermal(_)) && i + 1 != elements.len() {
                return Err(ReadoutError::invalid(
                    "a thermal stage must be the terminal element",
                ));
            }
        }
        Ok(ChainDescriptor { elements })
    }

    /// The validated elements in order.
    pub fn elements(&self) -> &[ChainElement<S>] {
        &self.elements
    }

    /// Whether any element needs an idler arm in the state.
    pub fn requires_idler(&self) -> bool {
        self.elements.iter().any(|e| {
            matches!(e, ChainElement::Pa { .. })
                || matches!(
                    e,
                    ChainElement::Dpa {
                        arm: Arm::Idler,
                        ..
                    }
                )
        })
    }

    /// Splits off the terminal thermal stage, if present, from the
    /// symplectic prefix.
    pub fn split_terminal_thermal(&self) -> (&[ChainElement<S>], Option<ThermalStage<S>>) {
        match self.elements.split_last() {
            Some((ChainElement::Thermal(stage), prefix)) => (prefix, Some(*stage)),
            _ => (&self.elements, None),
        }
    }
}

/// Mean vector and covariance matrix of one mirror-pair (or center) block.
///
/// Quadratures are interleaved `(x, p)` per mode. Pair blocks order their
/// modes `[signal(+delta), signal(-delta), idler(+delta), idler(-delta)]`;
/// the center block holds `[signal(0), idler(0)]`. States without an idler
/// arm simply use the first half of each layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block<S> {
    /// Number of active quadratures (2 per mode).
    pub quads: usize,
    /// Quadrature means.
    pub mean: [S; 8],
    /// Quadrature covariances.
    pub cov: [[S; 8]; 8],
}

impl<S: Real> Block<S> {
    fn vacuum(quads: usize) -> Self {
        let mut cov = [[S::zero(); 8]; 8];
        for (i, row) in cov.iter_mut().enumerate().take(quads) {
            row[i] = S::real(0.5);
        }
        Block {
            quads,
            mean: [S::zero(); 8],
            cov,
        }
    }

    fn transform(&mut self, t: &[[S; 8]; 8]) {
        let n = self.quads;
        let mut mean = [S::zero(); 8];
        for (i, entry) in mean.iter_mut().enumerate().take(n) {
            *entry = (0..n).map(|j| t[i][j] * self.mean[j]).sum();
        }
        let mut half = [[S::zero(); 8]; 8];
        for i in 0..n {
            for j in 0..n {
                half[i][j] = (0..n).map(|k| t[i][k] * self.cov[k][j]).sum();
            }
        }
        let mut cov = [[S::zero(); 8]; 8];
        for i in 0..n {
            for j in 0..n {
                cov[i][j] = (0..n).map(|k| half[i][k] * t[j][k]).sum();
            }
        }
        self.mean = mean;
        self.cov = cov;
    }
}

/// Gaussian state of the full grid, block-diagonal over mirror pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChainState<S> {
    grid: FrequencyGrid<S>,
    has_idler: bool,
    center: Block<S>,
    pairs: Vec<Block<S>>,
}

impl<S: Real> GaussianChainState<S> {
    /// The grid the state lives on.
    pub fn grid(&self) -> &FrequencyGrid<S> {
        &self.grid
    }

    /// Whether the state carries an idler arm.
    pub fn has_idler(&self) -> bool {
        self.has_idler
    }

    /// The carrier block.
    pub fn center(&self) -> &Block<S> {
        &self.center
    }

    /// The block of mirror pair `k` (offset `k * d_omega`, `k >= 1`).
    pub fn pair(&self, k: usize) -> &Block<S> {
        &self.pairs[k - 1]
    }

    /// Mean photon number summed over the signal arm, counting both the
    /// displacement and any excess (above-vacuum) symmetric noise.
    pub fn signal_photon_number(&self) -> S {
        let half = S::real(0.5);
        let mode = |block: &Block<S>, m: usize| {
            let (x, p) = (2 * m, 2 * m + 1);
            half * (block.mean[x] * block.mean[x] + block.mean[p] * block.mean[p])
                + half * (block.cov[x][x] + block.cov[p][p] - S::one())
        };
        let mut total = mode(&self.center, 0);
        for block in &self.pairs {
            total += mode(block, 0) + mode(block, 1);
        }
        total
    }
}

/// Creates the input state: the signal arm displaced by the pulse spectrum
/// (real amplitude, so only `x` means are nonzero) and every other mode in
/// vacuum.
pub fn init_state<S: Real>(
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    include_idler: bool,
) -> Result<GaussianChainState<S>, ReadoutError> {
    let captured: S = (0..grid.points)
        .map(|j| pulse.spectral_weight(grid.omega(j)))
        .sum::<S>()
        * grid.d_omega;
    if captured < S::real(0.999) {
        return Err(ReadoutError::GridTooNarrow {
            captured_fraction: captured.to_f64_lossy(),
        });
    }
    let amplitude = |omega: S| {
        (S::real(2.0) * grid.d_omega * pulse.n_pulse).sqrt() * pulse.spectral_amplitude(omega)
    };
    let half = grid.half();
    let pair_quads = if include_idler { 8 } else { 4 };
    let center_quads = if include_idler { 4 } else { 2 };
    let mut center = Block::vacuum(center_quads);
    center.mean[0] = amplitude(grid.omega_c);
    let pairs = (1..=half)
        .map(|k| {
            let mut block = Block::vacuum(pair_quads);
            block.mean[0] = amplitude(grid.omega(half + k));
            block.mean[2] = amplitude(grid.omega(half - k));
            block
        })
        .collect();
    Ok(GaussianChainState {
        grid: *grid,
        has_idler: include_idler,
        center,
        pairs,
    })
}

/// Symplectic matrix of a two-mode squeezer with parameter `r` and pump
/// phase `theta`, in the quadrature order `(x1, p1, x2, p2)`.
pub fn two_mode_squeeze_matrix<S: Real>(r: S, theta: S) -> [[S; 4]; 4] {
    let (c, s) = (r.cosh(), r.sinh());
    let (sin, cos) = theta.sin_cos();
    let (sc, ss) = (s * cos, s * sin);
    let z = S::zero();
    [
        [c, z, sc, ss],
        [z, c, ss, -sc],
        [sc, ss, c, z],
        [ss, -sc, z, c],
    ]
}

/// Symplectic matrix of a single-mode squeezer in the order `(x, p)`.
pub fn single_mode_squeeze_matrix<S: Real>(r: S, theta: S) -> [[S; 2]; 2] {
    let (c, s) = (r.cosh(), r.sinh());
    let (sin, cos) = theta.sin_cos();
    [[c + s * cos, s * sin], [s * sin, c - s * cos]]
}

/// Phase-space rotation of one mode by `angle`.
pub fn rotation_matrix<S: Real>(angle: S) -> [[S; 2]; 2] {
    let (sin, cos) = angle.sin_cos();
    [[cos, -sin], [sin, cos]]
}

fn identity8<S: Real>() -> [[S; 8]; 8] {
    let mut t = [[S::zero(); 8]; 8];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = S::one();
    }
    t
}

fn embed_two_mode<S: Real>(t: &mut [[S; 8]; 8], m: &[[S; 4]; 4], modes: (usize, usize)) {
    let map = [
        2 * modes.0,
        2 * modes.0 + 1,
        2 * modes.1,
        2 * modes.1 + 1,
    ];
    for (i, &gi) in map.iter().enumerate() {
        for (j, &gj) in map.iter().enumerate() {
            t[gi][gj] = m[i][j];
        }
    }
}

fn embed_one_mode<S: Real>(t: &mut [[S; 8]; 8], m: &[[S; 2]; 2], mode: usize) {
    for i in 0..2 {
        for j in 0..2 {
            t[2 * mode + i][2 * mode + j] = m[i][j];
        }
    }
}

/// Applies a phase-preserving amplifier pumped at the carrier: it squeezes
/// `signal(omega_c + delta)` with `idler(omega_c - delta)` and vice versa,
/// and the carrier signal with the carrier idler.
pub fn apply_pa<S: Real>(
    state: &mut GaussianChainState<S>,
    gain: Gain<S>,
    theta: S,
) -> Result<(), ReadoutError> {
    if !state.has_idler {
        return Err(ReadoutError::invalid(
            "a phase-preserving amplifier needs an idler arm in the state",
        ));
    }
    let r = gain.pa_squeeze_parameter();
    let squeeze = two_mode_squeeze_matrix(r, theta);
    let mut center_t = identity8();
    embed_two_mode(&mut center_t, &squeeze, (0, 1));
    state.center.transform(&center_t);
    let mut pair_t = identity8();
    embed_two_mode(&mut pair_t, &squeeze, (0, 3));
    embed_two_mode(&mut pair_t, &squeeze, (1, 2));
    for block in &mut state.pairs {
        block.transform(&pair_t);
    }
    Ok(())
}

/// Applies a degenerate amplifier pumped at the carrier to one arm: it
/// squeezes each mirror pair within that arm, and the carrier mode of the
/// arm in single-mode fashion.
pub fn apply_dpa<S: Real>(
    state: &mut GaussianChainState<S>,
    gain: Gain<S>,
    theta: S,
    arm: Arm,
) -> Result<(), ReadoutError> {
    if arm == Arm::Idler && !state.has_idler {
        return Err(ReadoutError::invalid(
            "the state has no idler arm for a degenerate amplifier to act on",
        ));
    }
    let r = gain.dpa_squeeze_parameter();
    let center_mode = match arm {
        Arm::Signal => 0,
        Arm::Idler => 1,
    };
    let pair_modes = match arm {
        Arm::Signal => (0, 1),
        Arm::Idler => (2, 3),
    };
    let mut center_t = identity8();
    embed_one_mode(&mut center_t, &single_mode_squeeze_matrix(r, theta), center_mode);
    state.center.transform(&center_t);
    let mut pair_t = identity8();
    embed_two_mode(&mut pair_t, &two_mode_squeeze_matrix(r, theta), pair_modes);
    for block in &mut state.pairs {
        block.transform(&pair_t);
    }
    Ok(())
}

/// Applies the cavity reflection: each signal mode's quadratures rotate by
/// the frequency- and branch-dependent phase shift; idler modes are
/// untouched.
pub fn apply_cavity<S: Real>(
    state: &mut GaussianChainState<S>,
    params: &SystemParams<S>,
    sign: QubitSign,
) {
    let grid = state.grid;
    let half = grid.half();
    let angle = |index: usize| cavity::phase_shift(grid.omega(index), params, sign);
    let mut center_t = identity8();
    embed_one_mode(&mut center_t, &rotation_matrix(angle(half)), 0);
    state.center.transform(&center_t);
    for (k, block) in state.pairs.iter_mut().enumerate() {
        let mut t = identity8();
        embed_one_mode(&mut t, &rotation_matrix(angle(half + k + 1)), 0);
        embed_one_mode(&mut t, &rotation_matrix(angle(half - k - 1)), 1);
        block.transform(&t);
    }
}

/// Applies the thermal post-amplifier to the signal arm: means scale by
/// `sqrt(G)`, signal covariances by `G` plus the added thermal noise
/// `(G - 1)(n_bar_T + 1/2)` on the diagonal, and signal-idler covariances
/// by `sqrt(G)`.
pub fn apply_thermal<S: Real>(state: &mut GaussianChainState<S>, stage: ThermalStage<S>) {
    let g = stage.gain.linear();
    let root_g = g.sqrt();
    let added = (g - S::one()) * (stage.n_bar_t + S::real(0.5));
    let center_signal = 2;
    let pair_signal = 4;
    let scale_block = |block: &mut Block<S>, signal_quads: usize| {
        for q in 0..signal_quads.min(block.quads) {
            block.mean[q] *= root_g;
        }
        for i in 0..block.quads {
            for j in 0..block.quads {
                let factor = match (i < signal_quads, j < signal_quads) {
                    (true, true) => g,
                    (true, false) | (false, true) => root_g,
                    (false, false) => S::one(),
                };
                block.cov[i][j] *= factor;
            }
        }
        for q in 0..signal_quads.min(block.quads) {
            block.cov[q][q] += added;
        }
    };
    scale_block(&mut state.center, center_signal);
    for block in &mut state.pairs {
        scale_block(block, pair_signal);
    }
}

/// Rotates each signal mode by `-(omega_j - omega_c) * delay`, re-centering
/// the demodulation window on a pulse that arrives `delay` after time zero.
pub fn apply_demodulation_delay<S: Real>(state: &mut GaussianChainState<S>, delay: S) {
    if delay == S::zero() {
        return;
    }
    let d_omega = state.grid.d_omega;
    for (k, block) in state.pairs.iter_mut().enumerate() {
        let angle = d_omega * S::from_usize(k + 1).expect("pair index") * delay;
        let mut t = identity8();
        embed_one_mode(&mut t, &rotation_matrix(-angle), 0);
        embed_one_mode(&mut t, &rotation_matrix(angle), 1);
        block.transform(&t);
    }
}

/// Per-frequency statistics of the measured `p` quadrature on the signal
/// arm, indexed in ascending frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput<S> {
    /// Grid the statistics live on.
    pub grid: FrequencyGrid<S>,
    /// Mean of `p` at each grid frequency.
    pub mean_p: Vec<S>,
    /// Variance of `p` at each grid frequency.
    pub var_p: Vec<S>,
    /// Covariance of `p(omega_j)` with its mirror `p(2 omega_c - omega_j)`;
    /// zero by definition at the carrier.
    pub cross_p: Vec<S>,
}

/// Projects the measured-quadrature statistics out of a state.
pub fn project_p<S: Real>(state: &GaussianChainState<S>) -> ChainOutput<S> {
    let grid = state.grid;
    let half = grid.half();
    let m = grid.points;
    let mut mean_p = vec![S::zero(); m];
    let mut var_p = vec![S::zero(); m];
    let mut cross_p = vec![S::zero(); m];
    mean_p[half] = state.center.mean[1];
    var_p[half] = state.center.cov[1][1];
    for (k, block) in state.pairs.iter().enumerate() {
        let (plus, minus) = (half + k + 1, half - k - 1);
        mean_p[plus] = block.mean[1];
        mean_p[minus] = block.mean[3];
        var_p[plus] = block.cov[1][1];
        var_p[minus] = block.cov[3][3];
        cross_p[plus] = block.cov[1][3];
        cross_p[minus] = block.cov[1][3];
    }
    ChainOutput {
        grid,
        mean_p,
        var_p,
        cross_p,
    }
}

/// Runs a chain end to end for one qubit branch and returns the measured
/// quadrature statistics, demodulated around a window centered `demod_delay`
/// after the pulse center.
pub fn run_chain<S: Real>(
    descriptor: &ChainDescriptor<S>,
    grid: &FrequencyGrid<S>,
    pulse: &PulseSpec<S>,
    params: &SystemParams<S>,
    sign: QubitSign,
    demod_delay: S,
) -> Result<ChainOutput<S>, ReadoutError> {
    let mut state = init_state(grid, pulse, descriptor.requires_idler())?;
    for element in descriptor.elements() {
        apply_element(&mut state, element, params, sign)?;
    }
    apply_demodulation_delay(&mut state, demod_delay);
    Ok(project_p(&state))
}

/// Advances a state by one chain element.
pub fn apply_element<S: Real>(
    state: &mut GaussianChainState<S>,
    element: &ChainElement<S>,
    params: &SystemParams<S>,
    sign: QubitSign,
) -> Result<(), ReadoutError> {
    match element {
        ChainElement::Pa { gain, theta } => apply_pa(state, *gain, *theta),
        ChainElement::Dpa { gain, theta, arm } => apply_dpa(state, *gain, *theta, *arm),
        ChainElement::Cavity => {
            apply_cavity(state, params, sign);
            Ok(())
        }
        ChainElement::Thermal(stage) => {
            apply_thermal(state, *stage);
            Ok(())
        }
    }
}
