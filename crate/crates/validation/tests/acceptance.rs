//! Exit criteria, one PASS/FAIL line each. Runs under a plain `main` so the
//! lines are always printed; the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fuzzyqm::deuteron::{
    calibrate_smearing, core_radius, coupling_report, energy_expectation, energy_parts, exact_depth, repulsive_strength,
    solve_depth, PhysicalConstants, ShootingOptions, TrialForm, TrialState, VariationalOptions, YukawaProblem, CALIBRATION_DEPTH,
    CORE_BRACKET, OMEGA_RANGE_FM, SIGMA_RANGE_FM,
};
use fuzzyqm::numerics::{DiffScheme, MomentumGrid};
use fuzzyqm::operators::{
    build_fuzzy_position_op, build_position_op, commutator_ladder, fuzzy_angular_eigenvalue, uncertainty_report, GridState, Measure,
    SmearingParams,
};
use fuzzyqm::oscillator::{
    anharmonic_spectrum_formula, harmonic_spectrum_formula, numeric_spectrum, EnergyCoupling, NumericOptions, OscillatorSpec,
    Truncation,
};
use fuzzyqm_validation::{ensure, run_all, within_rel, within_time, Criterion, Outcome};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn constants() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn ordinary_headline() -> Outcome {
    let start = Instant::now();
    let c = constants();
    let t = YukawaProblem::ordinary(&c, 0.0, SIGMA_RANGE_FM).map_err(|e| e.to_string())?;
    let p = solve_depth(&t, SIGMA_RANGE_FM, c.e0_binding, &VariationalOptions::default()).map_err(|e| e.to_string())?;
    let detail = format!("V0(0.3596 fm) = {:.3} MeV, target 660.77 ± 2%", p.depth);
    ensure(p.converged && within_rel(p.depth, 660.77, 0.02), detail.clone())?;
    within_time(start, Duration::from_secs(10), detail)
}

fn fuzzy_headline() -> Outcome {
    let start = Instant::now();
    let c = constants();
    let opts = VariationalOptions::default();
    let cal = calibrate_smearing(&c, SIGMA_RANGE_FM, CALIBRATION_DEPTH, &opts).map_err(|e| e.to_string())?;
    let t = YukawaProblem::fuzzy(&c, 0.0, SIGMA_RANGE_FM, cal.smearing_mass).map_err(|e| e.to_string())?;
    let p = solve_depth(&t, SIGMA_RANGE_FM, c.e0_binding, &opts).map_err(|e| e.to_string())?;
    let detail = format!("V0'(0.3596 fm) = {:.3} MeV with {:?} smearing ({:.2} MeV), target -81.0 ± 10%", p.depth, cal.choice, cal.smearing_mass);
    ensure(p.converged && p.depth < 0.0 && within_rel(p.depth, -81.0, 0.10), detail.clone())?;
    within_time(start, Duration::from_secs(60), detail)
}

fn core_radius_criterion() -> Outcome {
    let c = constants();
    let opts = VariationalOptions::default();
    let cal = calibrate_smearing(&c, SIGMA_RANGE_FM, CALIBRATION_DEPTH, &opts).map_err(|e| e.to_string())?;
    let t = YukawaProblem::fuzzy(&c, 0.0, SIGMA_RANGE_FM, cal.smearing_mass).map_err(|e| e.to_string())?;
    let core = core_radius(&t, c.e0_binding, CORE_BRACKET, 9, 1e-7, &opts).map_err(|e| e.to_string())?;
    let depth = |r0: f64| solve_depth(&t, r0, c.e0_binding, &opts).map(|p| p.depth).map_err(|e| e.to_string());
    let (inside, outside) = (depth(core.r_c - 0.1)?, depth(core.r_c + 0.1)?);
    ensure(
        (core.r_c - 0.563).abs() <= 0.03 && core.below.1 < 0.0 && core.above.1 > 0.0 && inside < 0.0 && outside > 0.0,
        format!(
            "r_c = {:.4} fm, target 0.563 ± 0.03; V0'(r_c-0.1) = {inside:.2}, V0'(r_c+0.1) = {outside:.2} MeV; scan bracket ({:.2}, {:.2}) fm",
            core.r_c, core.below.0, core.above.0
        ),
    )
}

fn repulsive_strength_criterion() -> Outcome {
    let v1 = repulsive_strength(660.77, -81.0, SIGMA_RANGE_FM, OMEGA_RANGE_FM).map_err(|e| e.to_string())?;
    ensure(within_rel(v1, 1419.07, 0.005), format!("V1 = {v1:.3} MeV, target 1419.07 ± 0.5%"))
}

fn couplings_criterion() -> Outcome {
    let r = coupling_report(&constants(), 660.77, -81.0, SIGMA_RANGE_FM, OMEGA_RANGE_FM, None).map_err(|e| e.to_string())?;
    ensure(
        within_rel(r.g_sigma_sq_over_4pi, 1.20, 0.01)
            && within_rel(r.g_omega_sq_over_4pi, 1.815, 0.01)
            && within_rel(r.ratio, 1.512, 0.01)
            && within_rel(r.g_omega_phenom_sq_over_4pi, 11.03, 0.02)
            && (r.deviation_percent - 1.85).abs() <= 0.1,
        format!(
            "g_sigma^2/4pi = {:.4}, g_omega^2/4pi = {:.4}, ratio = {:.4}, prediction = {:.3}, deviation from {} = {:.2}%",
            r.g_sigma_sq_over_4pi, r.g_omega_sq_over_4pi, r.ratio, r.g_omega_phenom_sq_over_4pi, r.g_omega_reference, r.deviation_percent
        ),
    )
}

fn variational_vs_exact() -> Outcome {
    let c = constants();
    let mut errs = Vec::new();
    let mut detail = Vec::new();
    for r0 in [0.72, 1.43] {
        let t = YukawaProblem::ordinary(&c, 0.0, r0).map_err(|e| e.to_string())?;
        let var = solve_depth(&t, r0, c.e0_binding, &VariationalOptions::default()).map_err(|e| e.to_string())?.depth;
        let exact = exact_depth(&t.with_range(r0), c.e0_binding, &ShootingOptions::default()).map_err(|e| e.to_string())?;
        let err = (var - exact).abs() / exact;
        errs.push(err);
        detail.push(format!("r0 = {r0}: variational {var:.3}, exact {exact:.3} MeV, {:.2}%", 100.0 * err));
    }
    ensure(errs.iter().all(|&e| e <= 0.05) && errs[1] < errs[0], format!("{} (bound 5%, decreasing)", detail.join("; ")))
}

fn oscillator_criterion() -> Outcome {
    let start = Instant::now();
    let opts = NumericOptions { coupling: EnergyCoupling::Leading, ..NumericOptions::default() };
    let (w, m) = (0.01, 1.0);
    let quad = OscillatorSpec::new(w, m, Truncation::Quadratic).map_err(|e| e.to_string())?;
    let grid = quad.default_grid(1024).map_err(|e| e.to_string())?;
    let numeric = numeric_spectrum(&quad, &grid, 3, &opts).map_err(|e| e.to_string())?;
    let formula = harmonic_spectrum_formula(&quad, 3).map_err(|e| e.to_string())?;
    let allowed = 10.0 * (w / m).powi(3) * m;
    let worst_quad = (0..=3).map(|n| (numeric.energies[n] - formula.energies[n]).abs()).fold(0.0, f64::max);

    let quart = quad.with_truncation(Truncation::Quartic);
    let numeric4 = numeric_spectrum(&quart, &quart.default_grid(1024).map_err(|e| e.to_string())?, 3, &opts).map_err(|e| e.to_string())?;
    let formula4 = anharmonic_spectrum_formula(&quart, 3).map_err(|e| e.to_string())?;
    let worst_frac = (0..=3)
        .map(|n| (numeric4.energies[n] - formula4.energies[n]).abs() / (formula4.energies[n] - formula.energies[n]))
        .fold(0.0, f64::max);
    let detail = format!(
        "quadratic max |dE| = {worst_quad:.3e} (budget {allowed:.1e}); quartic max |dE|/shift = {:.3} (budget 0.1), n <= 3, N = 1024",
        worst_frac
    );
    ensure(worst_quad <= allowed && worst_frac <= 0.1, detail.clone())?;
    within_time(start, Duration::from_secs(30), detail)
}

fn random_state(grid: &MomentumGrid, rng: &mut ChaCha8Rng) -> GridState {
    let packets: Vec<(f64, f64, f64, Complex64)> = (0..rng.random_range(1..=4))
        .map(|_| {
            (
                rng.random_range(-2.5..2.5),
                rng.random_range(0.3..1.0),
                rng.random_range(-4.0..4.0),
                Complex64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..std::f64::consts::TAU)),
            )
        })
        .collect();
    GridState::from_fn(grid, Measure::Plain, |p| {
        packets.iter().map(|&(c, s, x0, a)| a * Complex64::from_polar((-(p - c).powi(2) / (4.0 * s * s)).exp(), -x0 * p)).sum()
    })
    .and_then(GridState::normalize)
    .expect("normalizable packet")
}

fn property_suites() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let grid = MomentumGrid::symmetric(12.0, 512).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    for _ in 0..1000 {
        let s = SmearingParams::new(rng.random_range(0.5..4.0)).map_err(|e| e.to_string())?;
        let r = uncertainty_report(&random_state(&grid, &mut rng), &s, DiffScheme::Spectral).map_err(|e| e.to_string())?;
        if r.margin() < -1e-9 {
            violations += 1;
        }
    }
    ok &= violations == 0;
    notes.push(format!("Robertson violations {violations}/1000"));

    let rows =
        commutator_ladder(&SmearingParams::new(1.0).map_err(|e| e.to_string())?, 8.0, 128, 4, DiffScheme::CentralDifference)
            .map_err(|e| e.to_string())?;
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.order).collect();
    ok &= orders.len() == 3 && orders.iter().all(|o| (o - 2.0).abs() <= 0.3);
    notes.push(format!("ladder orders {:?}", orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()));

    let g = MomentumGrid::symmetric(4.0, 64).map_err(|e| e.to_string())?;
    let big = build_fuzzy_position_op(&g, &SmearingParams::new(1e12).map_err(|e| e.to_string())?, DiffScheme::Spectral);
    let op_dev = big.sub(&build_position_op(&g, DiffScheme::Spectral)).map_err(|e| e.to_string())?.max_abs();
    ok &= op_dev <= 1e-8;
    notes.push(format!("X_f -> X deviation {op_dev:.1e}"));

    let osc = OscillatorSpec::new(1.0, 1e4, Truncation::Quadratic).map_err(|e| e.to_string())?;
    let levels = numeric_spectrum(&osc, &osc.default_grid(256).map_err(|e| e.to_string())?, 3, &NumericOptions::default())
        .map_err(|e| e.to_string())?;
    let osc_dev = (0..=3).map(|n| ((levels.energies[n] - (n as f64 + 0.5)) / (n as f64 + 0.5)).abs()).fold(0.0, f64::max);
    ok &= osc_dev <= 1e-4;
    notes.push(format!("oscillator m = 1e4 omega rel dev {osc_dev:.4e}"));

    let c = constants();
    let mut deut_dev: f64 = 0.0;
    for alpha in [0.3, 0.8, 2.0] {
        let r0 = 0.7;
        let ord = YukawaProblem::ordinary(&c, 200.0, r0).map_err(|e| e.to_string())?;
        let heavy = YukawaProblem::fuzzy(&c, 200.0, r0, 100.0 * 3f64.sqrt() * c.hbar_c / (alpha * r0)).map_err(|e| e.to_string())?;
        let (t, v) = energy_parts(&ord, &TrialState::new(alpha, TrialForm::Plain).unwrap()).map_err(|e| e.to_string())?;
        let e1 = energy_expectation(&heavy, &TrialState::new(alpha, TrialForm::Fuzzy).unwrap()).map_err(|e| e.to_string())?;
        deut_dev = deut_dev.max((e1 - t - v).abs() / (t.abs() + v.abs()));
    }
    ok &= deut_dev <= 1e-4;
    notes.push(format!("deuteron m_s = 100 p_rms rel dev {deut_dev:.1e}"));

    let mut worst_k: f64 = 0.0;
    for mass in [0.7, 1.3, 5.0] {
        let s = SmearingParams::new(mass).unwrap();
        for k in -6i64..=6 {
            for p in [0.0, 0.4, 1.1, 2.5] {
                let back = fuzzy_angular_eigenvalue(k, p, &s) / s.kernel(p);
                worst_k = worst_k.max((back - back.round()).abs().max((back - k as f64).abs()));
            }
        }
    }
    ok &= worst_k <= 1e-12;
    notes.push(format!("angular quantization residual {worst_k:.1e}"));
    ensure(ok, notes.join("; "))
}

fn depth_ordering() -> Outcome {
    let c = constants();
    let opts = VariationalOptions::default();
    let cal = calibrate_smearing(&c, SIGMA_RANGE_FM, CALIBRATION_DEPTH, &opts).map_err(|e| e.to_string())?;
    let ord = YukawaProblem::ordinary(&c, 0.0, 1.0).map_err(|e| e.to_string())?;
    let fz = YukawaProblem::fuzzy(&c, 0.0, 1.0, cal.smearing_mass).map_err(|e| e.to_string())?;
    let mut exceptions = Vec::new();
    let mut smallest_gap = f64::INFINITY;
    for i in 0..10 {
        let r0 = 0.25 + 1.25 * i as f64 / 9.0;
        let a = solve_depth(&ord, r0, c.e0_binding, &opts).map_err(|e| e.to_string())?;
        let b = solve_depth(&fz, r0, c.e0_binding, &opts).map_err(|e| e.to_string())?;
        smallest_gap = smallest_gap.min(a.depth - b.depth);
        if !(b.depth < a.depth && a.converged && b.converged) {
            exceptions.push(r0);
        }
    }
    ensure(exceptions.is_empty(), format!("10 ranges in [0.25, 1.5] fm, exceptions {exceptions:?}, smallest V0 - V0' = {smallest_gap:.2} MeV"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "1 ordinary range-depth headline", run: ordinary_headline },
        Criterion { name: "2 fuzzy range-depth headline", run: fuzzy_headline },
        Criterion { name: "3 core radius", run: core_radius_criterion },
        Criterion { name: "4 repulsive strength", run: repulsive_strength_criterion },
        Criterion { name: "5 couplings", run: couplings_criterion },
        Criterion { name: "6 variational vs exact depth", run: variational_vs_exact },
        Criterion { name: "7 oscillator spectrum", run: oscillator_criterion },
        Criterion { name: "8 property suites", run: property_suites },
        Criterion { name: "9 fuzzy below ordinary depth", run: depth_ordering },
    ];
    if run_all(&criteria) == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
