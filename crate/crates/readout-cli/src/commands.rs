//! Subcommand implementations over a validated configuration.

use std::io::Write;

use rayon::prelude::*;
use readout_sim::cavity::{self, TimeGrid};
use readout_sim::error::ReadoutError;
use readout_sim::params::{Gain, QubitSign};
use readout_sim::singlemode::{SchemeKind, SteadySchemeConfig};
use readout_sim::{homodyne, scenarios, validate};
use readout_sim::{HomodyneSettings, PulseSpec, ReadoutResult};

use crate::config::{GainChoice, Resolved, SweepAxis, SweepPlan};
use crate::table::{sig9, Table};
use crate::CliError;

/// Realizations per branch in the Monte Carlo check.
const VALIDATE_SAMPLES: usize = 100_000;
/// Monte Carlo gate on the windowed-mean discrepancy, in standard errors.
const MEAN_SIGMA_LIMIT: f64 = 4.0;
/// Monte Carlo gate on the windowed-variance relative error.
const VAR_REL_LIMIT: f64 = 0.05;

fn sweep_plan<'a>(resolved: &'a Resolved, command: &str) -> Result<&'a SweepPlan, CliError> {
    resolved
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("{command} requires a [sweep] section")))
}

/// Steady-state sweep of the single-mode picture over the pull ratio.
pub fn single_mode(resolved: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
    let plan = sweep_plan(resolved, "single-mode")?;
    if plan.axis != SweepAxis::ChiOverKappa {
        return Err(CliError::Config(
            "single-mode sweeps only axis = \"chi_over_kappa\"".into(),
        ));
    }
    let fluxes = resolved.flux_over_kappa.as_ref().ok_or_else(|| {
        CliError::Config("single-mode requires chain.flux_over_kappa".into())
    })?;

    let mut table = Table::new(
        out,
        "single-mode-v1",
        &["scheme", "two_chi_over_kappa", "phi", "snr", "p_error"],
    )?;
    for (&flux, &kind) in fluxes.iter().zip(&resolved.schemes) {
        let g1 = match (resolved.g1, kind.has_first_stage()) {
            (GainChoice::Fixed(gain), true) => gain,
            (_, false) => Gain::unit(),
            (GainChoice::Auto, true) => {
                return Err(CliError::Config(format!(
                    "single-mode has no photon cap to solve g1 against; \
                     set chain.g1_db explicitly for scheme \"{kind}\""
                )))
            }
        };
        let config = SteadySchemeConfig {
            kind,
            flux_over_kappa: flux,
            g1,
            g2: resolved.g2,
            theta_rule: resolved.theta_rule,
            dpa_reading: resolved.dpa_reading,
        };
        for &u in &plan.values {
            let (snr, _) = readout_sim::singlemode::steady_scheme_snr(&config, u)?;
            let phi = 2.0 * u.atan();
            let p_error = homodyne::p_error(snr, resolved.eta);
            table.row(&[
                kind.to_string(),
                sig9(u),
                sig9(phi),
                sig9(snr),
                sig9(p_error),
            ])?;
        }
    }
    Ok(())
}

fn measure_point(
    resolved: &Resolved,
    kind: SchemeKind,
    g1: Gain<f64>,
    pulse: &PulseSpec,
    t_m: f64,
    include_cross: bool,
) -> Result<ReadoutResult, ReadoutError> {
    let chain = scenarios::compose_chain(
        kind,
        g1,
        resolved.g2,
        resolved.phases(kind),
        resolved.hemt,
    )?;
    let grid = resolved.grid_for(pulse)?;
    let settings = HomodyneSettings::new(
        t_m,
        cavity::group_delay(&resolved.params),
        resolved.eta,
        include_cross,
    )?;
    homodyne::measure(&chain, &grid, pulse, &resolved.params, &settings)
}

fn cross_note(scheme: SchemeKind, largest: f64) -> String {
    format!(
        "note: mirror-frequency covariance toggles p_error by at most {} for {scheme}",
        sig9(largest)
    )
}

/// Pulsed readout sweeps: window, pull, bandwidth, or photon number.
pub fn multimode(resolved: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
    let plan = sweep_plan(resolved, "multimode")?;
    match plan.axis {
        SweepAxis::TM => multimode_window(resolved, plan, out),
        SweepAxis::ChiOverKappa => multimode_pull(resolved, plan, out),
        SweepAxis::WOverKappa => multimode_bandwidth(resolved, plan, out),
        SweepAxis::NPulse => multimode_photons(resolved, plan, out),
    }
}

fn multimode_window(
    resolved: &Resolved,
    plan: &SweepPlan,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let t_pulse = resolved.pulse.t_pulse();
    let t_ms: Vec<f64> = plan.values.iter().map(|&r| r * t_pulse).collect();
    let per_scheme: Vec<_> = resolved
        .schemes
        .par_iter()
        .map(|&kind| -> Result<_, CliError> {
            let g1 = resolved.resolve_g1(kind, &resolved.pulse)?;
            let chain = scenarios::compose_chain(
                kind,
                g1,
                resolved.g2,
                resolved.phases(kind),
                resolved.hemt,
            )?;
            let grid = resolved.grid_for(&resolved.pulse)?;
            let demod = cavity::group_delay(&resolved.params);
            let primary = scenarios::error_vs_time(
                &chain,
                &grid,
                &resolved.pulse,
                &resolved.params,
                demod,
                resolved.eta,
                resolved.include_cross,
                &t_ms,
            )?;
            let flipped = scenarios::error_vs_time(
                &chain,
                &grid,
                &resolved.pulse,
                &resolved.params,
                demod,
                resolved.eta,
                !resolved.include_cross,
                &t_ms,
            )?;
            let q = resolved.peak_fraction(&resolved.pulse)?;
            let n_max = q * resolved.pulse.n_pulse * g1.linear();
            Ok((kind, g1, n_max, primary, flipped))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        out,
        "multimode-v1",
        &[
            "t_m_ns",
            "scheme",
            "mean_plus",
            "mean_minus",
            "std",
            "snr",
            "p_error",
            "p_error_ideal_postamp",
            "n_max_cavity",
            "g1_db",
        ],
    )?;
    for (i, &t_m) in t_ms.iter().enumerate() {
        for (kind, g1, n_max, primary, _) in &per_scheme {
            let r = &primary[i].result;
            table.row(&[
                sig9(t_m),
                kind.to_string(),
                sig9(r.mean_plus),
                sig9(r.mean_minus),
                sig9(r.std),
                sig9(r.snr),
                sig9(r.p_error),
                sig9(r.p_error_ideal_postamp),
                sig9(*n_max),
                sig9(g1.db()),
            ])?;
        }
    }
    for (kind, _, _, primary, flipped) in &per_scheme {
        let largest = primary
            .iter()
            .zip(flipped)
            .map(|(a, b)| (a.result.p_error - b.result.p_error).abs())
            .fold(0.0, f64::max);
        eprintln!("{}", cross_note(*kind, largest));
    }
    Ok(())
}

fn multimode_pull(
    resolved: &Resolved,
    plan: &SweepPlan,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let spec = resolved.constraints();
    let per_scheme: Vec<_> = resolved
        .schemes
        .iter()
        .map(|&kind| -> Result<_, CliError> {
            let g1 = resolved.resolve_g1(kind, &resolved.pulse)?;
            let points: Vec<_> = plan
                .values
                .par_iter()
                .map(|&u| -> Result<_, CliError> {
                    let primary = scenarios::error_vs_chi(
                        kind,
                        g1,
                        &spec,
                        &resolved.params,
                        &resolved.pulse,
                        resolved.t_m,
                        &[u],
                        resolved.grid_points,
                        resolved.include_cross,
                    )?;
                    let flipped = scenarios::error_vs_chi(
                        kind,
                        g1,
                        &spec,
                        &resolved.params,
                        &resolved.pulse,
                        resolved.t_m,
                        &[u],
                        resolved.grid_points,
                        !resolved.include_cross,
                    )?;
                    Ok((primary[0], flipped[0]))
                })
                .collect::<Result<_, _>>()?;
            Ok((kind, points))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        out,
        "chi-sweep-v1",
        &["scheme", "two_chi_over_kappa", "chi_per_ns", "snr", "p_error"],
    )?;
    for (kind, points) in &per_scheme {
        for (point, _) in points {
            table.row(&[
                kind.to_string(),
                sig9(point.two_chi_over_kappa),
                sig9(point.chi),
                sig9(point.snr),
                sig9(point.p_error),
            ])?;
        }
    }
    for (kind, points) in &per_scheme {
        let largest = points
            .iter()
            .map(|(a, b)| (a.p_error - b.p_error).abs())
            .fold(0.0, f64::max);
        eprintln!("{}", cross_note(*kind, largest));
    }
    Ok(())
}

fn multimode_bandwidth(
    resolved: &Resolved,
    plan: &SweepPlan,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let t_m_ratio = resolved.t_m / resolved.pulse.t_pulse();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &kind in &resolved.schemes {
        let points: Vec<_> = plan
            .values
            .par_iter()
            .map(|&w_ratio| -> Result<_, CliError> {
                let w = w_ratio * resolved.params.kappa;
                let pulse =
                    PulseSpec::new(resolved.pulse.omega_c, w, resolved.pulse.n_pulse)?;
                let g1 = resolved.resolve_g1(kind, &pulse)?;
                let t_m = t_m_ratio * pulse.t_pulse();
                let primary =
                    measure_point(resolved, kind, g1, &pulse, t_m, resolved.include_cross)?;
                let flipped =
                    measure_point(resolved, kind, g1, &pulse, t_m, !resolved.include_cross)?;
                Ok((w_ratio, pulse.t_pulse(), primary, flipped))
            })
            .collect::<Result<_, _>>()?;
        let largest = points
            .iter()
            .map(|(_, _, a, b)| (a.p_error - b.p_error).abs())
            .fold(0.0, f64::max);
        notes.push(cross_note(kind, largest));
        for (w_ratio, t_pulse, primary, _) in points {
            rows.push(vec![
                kind.to_string(),
                sig9(w_ratio),
                sig9(t_pulse),
                sig9(primary.snr),
                sig9(primary.p_error),
            ]);
        }
    }
    let mut table = Table::new(
        out,
        "w-sweep-v1",
        &["scheme", "w_over_kappa", "t_pulse_ns", "snr", "p_error"],
    )?;
    for row in &rows {
        table.row(row)?;
    }
    for note in notes {
        eprintln!("{note}");
    }
    Ok(())
}

fn multimode_photons(
    resolved: &Resolved,
    plan: &SweepPlan,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &kind in &resolved.schemes {
        let points: Vec<_> = plan
            .values
            .par_iter()
            .map(|&n| -> Result<_, CliError> {
                let pulse =
                    PulseSpec::new(resolved.pulse.omega_c, resolved.pulse.w, n)?;
                let g1 = resolved.resolve_g1(kind, &pulse)?;
                let primary = measure_point(
                    resolved,
                    kind,
                    g1,
                    &pulse,
                    resolved.t_m,
                    resolved.include_cross,
                )?;
                let flipped = measure_point(
                    resolved,
                    kind,
                    g1,
                    &pulse,
                    resolved.t_m,
                    !resolved.include_cross,
                )?;
                Ok((n, g1, primary, flipped))
            })
            .collect::<Result<_, _>>()?;
        let largest = points
            .iter()
            .map(|(_, _, a, b)| (a.p_error - b.p_error).abs())
            .fold(0.0, f64::max);
        notes.push(cross_note(kind, largest));
        for (n, g1, primary, _) in points {
            rows.push(vec![
                kind.to_string(),
                sig9(n),
                sig9(g1.db()),
                sig9(primary.snr),
                sig9(primary.p_error),
            ]);
        }
    }
    let mut table = Table::new(
        out,
        "n-sweep-v1",
        &["scheme", "n_pulse", "g1_db", "snr", "p_error"],
    )?;
    for row in &rows {
        table.row(row)?;
    }
    for note in notes {
        eprintln!("{note}");
    }
    Ok(())
}

/// Intracavity photon number over time for the configured pulse.
pub fn cavity_photons(resolved: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = resolved.schemes[0];
    let g1 = resolved.resolve_g1(kind, &resolved.pulse)?;
    let grid = TimeGrid::auto(&resolved.pulse, &resolved.params);
    let occupation = cavity::pulsed_photons(
        &resolved.pulse,
        g1.linear(),
        &resolved.params,
        QubitSign::Plus,
        &grid,
    )?;
    let mut table = Table::new(out, "cavity-photons-v1", &["t_ns", "n_bar"])?;
    for (&t, &n) in occupation.times.iter().zip(&occupation.n_bar) {
        table.row(&[sig9(t), sig9(n)])?;
    }
    match occupation.n_crit_ref {
        Some(n_crit) => eprintln!(
            "note: peak n_bar {} at t = {} ns (n_crit {})",
            sig9(occupation.n_max),
            sig9(occupation.t_peak),
            sig9(n_crit)
        ),
        None => eprintln!(
            "note: peak n_bar {} at t = {} ns",
            sig9(occupation.n_max),
            sig9(occupation.t_peak)
        ),
    }
    Ok(())
}

/// Joint pulse-energy and window optimization under the photon cap.
pub fn optimize(resolved: &Resolved, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = resolved.constraints();
    let optima: Vec<_> = resolved
        .schemes
        .par_iter()
        .map(|&kind| -> Result<_, CliError> {
            let point = scenarios::optimize_n_pulse(
                kind,
                &spec,
                &resolved.params,
                &resolved.pulse,
                resolved.t_m,
                resolved.grid_points,
                resolved.include_cross,
            )?;
            let pulse =
                PulseSpec::new(resolved.pulse.omega_c, resolved.pulse.w, point.n_pulse)?;
            let flipped = measure_point(
                resolved,
                kind,
                point.g1,
                &pulse,
                point.t_m,
                !resolved.include_cross,
            )?;
            Ok((kind, point, flipped))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(
        out,
        "optimize-v1",
        &[
            "scheme",
            "n_pulse",
            "g1_db",
            "t_m_ns",
            "n_max_cavity",
            "snr",
            "p_error",
            "p_error_ideal_postamp",
        ],
    )?;
    for (kind, point, _) in &optima {
        table.row(&[
            kind.to_string(),
            sig9(point.n_pulse),
            sig9(point.g1.db()),
            sig9(point.t_m),
            sig9(point.n_max_cavity),
            sig9(point.result.snr),
            sig9(point.result.p_error),
            sig9(point.result.p_error_ideal_postamp),
        ])?;
    }
    for (kind, point, flipped) in &optima {
        let diff = (point.result.p_error - flipped.p_error).abs();
        eprintln!("{}", cross_note(*kind, diff));
    }
    Ok(())
}

/// Monte Carlo check of the Gaussian pipeline on the configured chain.
pub fn validate_cmd(resolved: &Resolved, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let kind = resolved.schemes[0];
    let g1 = resolved.resolve_g1(kind, &resolved.pulse)?;
    let chain = scenarios::compose_chain(
        kind,
        g1,
        resolved.g2,
        resolved.phases(kind),
        resolved.hemt,
    )?;
    let grid = resolved.grid_for(&resolved.pulse)?;
    let demod = cavity::group_delay(&resolved.params);

    let branch = |sign: QubitSign, branch_seed: u64| {
        validate::validate_windowed_statistics(
            &chain,
            &grid,
            &resolved.pulse,
            &resolved.params,
            sign,
            resolved.t_m,
            demod,
            VALIDATE_SAMPLES,
            branch_seed,
        )
    };
    let plus = branch(QubitSign::Plus, seed)?;
    let minus = branch(QubitSign::Minus, seed.wrapping_add(1))?;
    let assignment = validate::validate_assignment_error(
        &chain,
        &grid,
        &resolved.pulse,
        &resolved.params,
        resolved.t_m,
        demod,
        VALIDATE_SAMPLES,
        seed.wrapping_add(2),
    )?;

    let binom_sigma = (assignment.analytic_p_error * (1.0 - assignment.analytic_p_error)
        / VALIDATE_SAMPLES as f64)
        .sqrt();
    let assignment_sigmas =
        (assignment.empirical_p_error - assignment.analytic_p_error).abs() / binom_sigma;

    let mut failures = Vec::new();
    let mut table = Table::new(
        out,
        "validate-v1",
        &["check", "samples", "analytic", "empirical", "discrepancy", "limit"],
    )?;
    for (label, validation) in [("plus", &plus), ("minus", &minus)] {
        let mean_sigmas = validation.mean_discrepancy_sigmas();
        let var_rel = validation.var_relative_error();
        table.row(&[
            format!("windowed_mean_{label}"),
            validation.samples.to_string(),
            sig9(validation.analytic_mean),
            sig9(validation.empirical_mean),
            sig9(mean_sigmas),
            sig9(MEAN_SIGMA_LIMIT),
        ])?;
        table.row(&[
            format!("windowed_variance_{label}"),
            validation.samples.to_string(),
            sig9(validation.analytic_var),
            sig9(validation.empirical_var),
            sig9(var_rel),
            sig9(VAR_REL_LIMIT),
        ])?;
        if mean_sigmas > MEAN_SIGMA_LIMIT {
            failures.push(format!("windowed_mean_{label}"));
        }
        if var_rel > VAR_REL_LIMIT {
            failures.push(format!("windowed_variance_{label}"));
        }
    }
    table.row(&[
        "assignment_error".to_string(),
        assignment.samples.to_string(),
        sig9(assignment.analytic_p_error),
        sig9(assignment.empirical_p_error),
        sig9(assignment_sigmas),
        sig9(MEAN_SIGMA_LIMIT),
    ])?;
    if assignment_sigmas > MEAN_SIGMA_LIMIT {
        failures.push("assignment_error".to_string());
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join(", ")))
    }
}
