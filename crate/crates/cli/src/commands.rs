use clap::ValueEnum;
use fuzzyqm::deuteron::{
    self, calibrate_smearing, core_radius, range_depth_curve, trial_samples, Calibration, PhysicalConstants, RangeDepthPoint,
    SmearingChoice, TrialState, YukawaProblem, CALIBRATION_DEPTH, CORE_BRACKET, SIGMA_RANGE_FM,
};
use fuzzyqm::numerics::{DiffScheme, MomentumGrid};
use fuzzyqm::operators::{
    commutator_ladder, uncertainty_report, verify_position_momentum, verify_spacetime_commutator, GridState, Measure,
    SmearingParams, DEFAULT_AXIS_CAP,
};
use fuzzyqm::oscillator::{
    anharmonic_spectrum_formula, harmonic_spectrum_formula, numeric_spectrum, EnergyCoupling, NumericOptions, OscillatorSpec,
    Truncation,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{RunConfig, SmearingSetting};
use crate::output::{Document, Format, Header, Sink, Table};

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or configuration.
    Usage(String),
    /// A computation errored or a named check failed.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

fn numerical(stage: &str) -> impl Fn(fuzzyqm::Error) -> Failure + '_ {
    move |e| Failure::Numerical(format!("{stage}: {e}"))
}

fn io(e: anyhow::Error) -> Failure {
    Failure::Usage(format!("output: {e:#}"))
}

pub type Outcome = Result<(), Failure>;

/// Outcome of one named check.
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn finish(checks: &[Check]) -> Outcome {
    for c in checks {
        eprintln!("check {}: {} ({})", c.name, if c.passed { "ok" } else { "FAILED" }, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("failed checks: {}", failed.join(", "))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    CentralDifference,
    Spectral,
}

impl From<Scheme> for DiffScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::CentralDifference => DiffScheme::CentralDifference,
            Scheme::Spectral => DiffScheme::Spectral,
        }
    }
}

pub struct CommutatorArgs {
    pub levels: usize,
    pub mass: f64,
    pub cutoff: f64,
    pub scheme: Scheme,
}

/// Order tolerance of the central-difference ladder.
const ORDER_TOL: f64 = 0.3;
/// Largest `m²`-scaled residual accepted for the 2-D commutator.
const SPACETIME_TOL: f64 = 1e-6;
/// Below this the coordinates commute to round-off, as for very heavy smearing.
const COMMUTING_TOL: f64 = 1e-9;
const ROBERTSON_SLACK: f64 = 1e-9;

pub fn commutators(args: &CommutatorArgs, cfg: &RunConfig, sink: &Sink, header: &Header) -> Outcome {
    if args.levels < 2 {
        return Err(Failure::Usage("--levels must be at least 2".into()));
    }
    if !args.cutoff.is_finite() || args.cutoff <= 0.0 {
        return Err(Failure::Usage("--cutoff must be positive".into()));
    }
    let smearing = SmearingParams::new(args.mass).map_err(|e| Failure::Usage(e.to_string()))?;
    let scheme = DiffScheme::from(args.scheme);
    let rows = commutator_ladder(&smearing, args.cutoff, cfg.commutator_base, args.levels, scheme).map_err(numerical("ladder"))?;

    let mut table = Table::new(&["points", "spacing", "residual", "order", "canonical_residual"]);
    for r in &rows {
        let grid = MomentumGrid::symmetric(args.cutoff, r.points).map_err(numerical("ladder"))?;
        table.push(vec![json!(r.points), json!(r.spacing), json!(r.residual), json!(r.order), json!(verify_position_momentum(&grid, scheme))]);
    }
    sink.primary(header, "commutators", &Document::Table(table)).map_err(io)?;

    let mut checks = Vec::new();
    match scheme {
        DiffScheme::CentralDifference => {
            let orders: Vec<f64> = rows.iter().filter_map(|r| r.order).collect();
            checks.push(Check {
                name: "ladder-order",
                passed: orders.iter().all(|o| (o - 2.0).abs() <= ORDER_TOL),
                detail: format!("orders {orders:?}, nominal 2"),
            });
        }
        DiffScheme::Spectral => {
            let res: Vec<f64> = rows.iter().map(|r| r.residual).collect();
            checks.push(Check {
                name: "ladder-decrease",
                passed: res.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-10),
                detail: format!("residuals {res:?}"),
            });
        }
    }

    let grid = MomentumGrid::symmetric(12.0, 512).map_err(numerical("uncertainty"))?;
    let mut worst = f64::INFINITY;
    for state in probe_states(&grid) {
        let r = uncertainty_report(&state, &smearing, scheme).map_err(numerical("uncertainty"))?;
        worst = worst.min(r.margin());
    }
    checks.push(Check { name: "robertson", passed: worst >= -ROBERTSON_SLACK, detail: format!("smallest margin {worst:e}") });

    let patch = MomentumGrid::symmetric(args.cutoff.min(4.0 * args.mass), DEFAULT_AXIS_CAP).map_err(numerical("spacetime"))?;
    let raw = verify_spacetime_commutator(&patch, &smearing, DiffScheme::Spectral, DEFAULT_AXIS_CAP).map_err(numerical("spacetime"))?;
    let st = raw * args.mass * args.mass;
    checks.push(Check {
        name: "spacetime-commutator",
        passed: st <= SPACETIME_TOL || raw <= COMMUTING_TOL,
        detail: format!("m²-scaled residual {st:e}, unscaled {raw:e}"),
    });

    let report = json!({
        "robertson_min_margin": worst,
        "spacetime_scaled_residual": st,
        "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
    });
    sink.auxiliary(header, "commutator_checks", &Document::Report(report), Format::Json).map_err(io)?;
    finish(&checks)
}

/// Deterministic two-packet superpositions spanning centre, width and
/// position offset.
fn probe_states(grid: &MomentumGrid) -> Vec<GridState> {
    let mut out = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            let c = -2.0 + 4.0 * i as f64 / 7.0;
            let s = 0.3 + 0.7 * j as f64 / 7.0;
            let x0 = -3.0 + 6.0 * ((i * 8 + j) % 5) as f64 / 4.0;
            let state = GridState::from_fn(grid, Measure::Plain, |p| {
                Complex64::from_polar((-(p - c).powi(2) / (4.0 * s * s)).exp(), -x0 * p)
                    + Complex64::from_polar(0.5 * (-(p + 0.5 * c).powi(2) / (2.0 * s * s)).exp(), 0.7 * x0 * p + 1.0)
            })
            .and_then(GridState::normalize);
            if let Ok(s) = state {
                out.push(s);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    Quadratic,
    Quartic,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    Leading,
    Weighted,
}

pub struct OscillatorArgs {
    pub omega: f64,
    pub mass: f64,
    pub truncation: TruncationArg,
    pub nmax: usize,
    pub coupling: CouplingArg,
    pub scheme: Scheme,
    pub points: Option<usize>,
}

/// `budget = QUADRATIC_BUDGET · (ω/m)³ m` for the quadratic truncation.
const QUADRATIC_BUDGET: f64 = 10.0;
/// Fraction of the first-order shift allowed for the quartic truncation.
const QUARTIC_FRACTION: f64 = 0.1;

pub fn oscillator(args: &OscillatorArgs, cfg: &RunConfig, sink: &Sink, header: &Header) -> Outcome {
    let truncation = match args.truncation {
        TruncationArg::Quadratic => Truncation::Quadratic,
        TruncationArg::Quartic => Truncation::Quartic,
        TruncationArg::Exact => Truncation::Exact,
    };
    let spec = OscillatorSpec::new(args.omega, args.mass, truncation).map_err(|e| Failure::Usage(e.to_string()))?;
    let points = args.points.unwrap_or(cfg.oscillator_points);
    let grid = MomentumGrid::symmetric_open(spec.default_cutoff() * cfg.oscillator_cutoff_scale, points)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let opts = NumericOptions {
        coupling: match args.coupling {
            CouplingArg::Leading => EnergyCoupling::Leading,
            CouplingArg::Weighted => EnergyCoupling::Weighted,
        },
        scheme: args.scheme.into(),
        eigenfunctions: true,
        refinement_check: true,
    };
    let numeric = numeric_spectrum(&spec, &grid, args.nmax, &opts).map_err(numerical("diagonalization"))?;
    let quadratic = spec.with_truncation(Truncation::Quadratic);
    let harmonic = harmonic_spectrum_formula(&quadratic, args.nmax).map_err(numerical("formula"))?;
    let anharmonic = anharmonic_spectrum_formula(&spec.with_truncation(Truncation::Quartic), args.nmax).map_err(numerical("formula"))?;
    let formula = if truncation == Truncation::Quadratic { &harmonic } else { &anharmonic };

    let mut table = Table::new(&[
        "n",
        "energy_diagonalization",
        "energy_formula",
        "abs_deviation",
        "rel_deviation",
        "budget",
        "status",
        "breakdown_warning",
    ]);
    let mut failed = Vec::new();
    for n in 0..=args.nmax {
        let (e, f) = (numeric.energies[n], formula.energies[n]);
        let dev = (e - f).abs();
        let budget = match truncation {
            Truncation::Quadratic => Some(QUADRATIC_BUDGET * spec.ratio().powi(3) * spec.mass),
            Truncation::Quartic => Some(QUARTIC_FRACTION * (anharmonic.energies[n] - harmonic.energies[n])),
            Truncation::Exact => None,
        };
        let breakdown = anharmonic.breakdown[n] && truncation != Truncation::Quadratic;
        let status = match budget {
            None => "reference",
            Some(_) if breakdown => "warn",
            Some(b) if dev <= b => "ok",
            Some(_) => {
                failed.push(n);
                "fail"
            }
        };
        table.push(vec![json!(n), json!(e), json!(f), json!(dev), json!(dev / f.abs()), json!(budget), json!(status), json!(breakdown)]);
    }
    sink.primary(header, "oscillator_spectrum", &Document::Table(table)).map_err(io)?;

    if let Some(states) = &numeric.eigenfunctions {
        let mut t = Table::new(&["p", "psi_0", "psi_1"]);
        let lowest: Vec<&GridState> = states.iter().take(2).collect();
        for (i, &p) in grid.points().iter().enumerate() {
            let mut row = vec![json!(p)];
            row.extend(lowest.iter().map(|s| json!(s.samples()[i].re)));
            row.resize(3, Value::Null);
            t.push(row);
        }
        sink.auxiliary(header, "oscillator_eigenfunctions", &Document::Table(t), Format::Csv).map_err(io)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("spectrum budget exceeded at n = {failed:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Ordinary,
    Fuzzy,
}

/// Default range sweep, fm.
pub fn default_ranges() -> Vec<f64> {
    (0..=26).map(|i| 0.2 + 0.05 * i as f64).collect()
}

/// Smearing mass for the fuzzy variant and the calibration behind it, if run.
fn resolve_smearing(cfg: &RunConfig, header: &mut Header) -> Result<(SmearingChoice, Option<Calibration>), Failure> {
    let (choice, cal) = match cfg.smearing {
        SmearingSetting::Fixed(c) => (c, None),
        SmearingSetting::Auto => {
            let cal = calibrate_smearing(&cfg.constants, SIGMA_RANGE_FM, CALIBRATION_DEPTH, &cfg.variational)
                .map_err(numerical("calibration"))?;
            (cal.choice, Some(cal))
        }
    };
    let name = serde_json::to_value(choice).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    header.notes.push(("smearing_choice".into(), name));
    header.notes.push(("smearing_mass_mev".into(), choice.mass(&cfg.constants).to_string()));
    if let Some(cal) = &cal {
        for (c, d) in &cal.candidates {
            header.notes.push((format!("calibration_depth_mev[{}]", serde_json::to_value(c).unwrap().as_str().unwrap()), d.to_string()));
        }
    }
    Ok((choice, cal))
}

fn template(constants: &PhysicalConstants, variant: Variant, smearing: Option<SmearingChoice>) -> Result<YukawaProblem, Failure> {
    match (variant, smearing) {
        (Variant::Fuzzy, Some(c)) => YukawaProblem::fuzzy(constants, 0.0, 1.0, c.mass(constants)),
        _ => YukawaProblem::ordinary(constants, 0.0, 1.0),
    }
    .map_err(|e| Failure::Usage(e.to_string()))
}

fn depth_table(points: &[RangeDepthPoint]) -> Table {
    let mut t = Table::new(&["r0_fm", "depth_mev", "alpha_star", "converged", "error"]);
    for p in points {
        let finite = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
        t.push(vec![json!(p.r0), finite(p.depth), finite(p.alpha_star), json!(p.converged), json!(p.error)]);
    }
    t
}

pub fn range_depth(variant: Variant, r0s: &[f64], cfg: &RunConfig, sink: &Sink, header: &mut Header) -> Outcome {
    if r0s.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Failure::Usage("--r0 values must be positive".into()));
    }
    let smearing = match variant {
        Variant::Fuzzy => Some(resolve_smearing(cfg, header)?.0),
        Variant::Ordinary => None,
    };
    let t = template(&cfg.constants, variant, smearing)?;
    let points = range_depth_curve(&t, r0s, cfg.constants.e0_binding, &cfg.variational);
    let stem = match variant {
        Variant::Ordinary => "range_depth_ordinary",
        Variant::Fuzzy => "range_depth_fuzzy",
    };
    sink.primary(header, stem, &Document::Table(depth_table(&points))).map_err(io)?;
    let bad: Vec<f64> = points.iter().filter(|p| !p.converged).map(|p| p.r0).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("range-depth: not converged at r0 = {bad:?} fm")))
    }
}

pub fn core(cfg: &RunConfig, sink: &Sink, header: &mut Header) -> Outcome {
    let (choice, _) = resolve_smearing(cfg, header)?;
    let t = template(&cfg.constants, Variant::Fuzzy, Some(choice))?;
    let c = core_radius(&t, cfg.constants.e0_binding, CORE_BRACKET, 9, 1e-7, &cfg.variational).map_err(numerical("core-radius"))?;
    let report = json!({
        "r_c_fm": c.r_c,
        "bracket_below": { "r0_fm": c.below.0, "depth_mev": c.below.1 },
        "bracket_above": { "r0_fm": c.above.0, "depth_mev": c.above.1 },
        "smearing_mass_mev": choice.mass(&cfg.constants),
        "curve": c.curve.iter().map(|(r, d)| json!({ "r0_fm": r, "depth_mev": d })).collect::<Vec<_>>(),
    });
    sink.primary(header, "core_radius", &Document::Report(report)).map_err(io)?;
    eprintln!("r_c = {} fm (depth {} MeV at {} fm, {} MeV at {} fm)", c.r_c, c.below.1, c.below.0, c.above.1, c.above.0);
    if c.below.1 < 0.0 && c.above.1 > 0.0 {
        Ok(())
    } else {
        Err(Failure::Numerical("core-radius: bracket does not change sign".into()))
    }
}

pub fn couplings(cfg: &RunConfig, sink: &Sink, header: &mut Header) -> Outcome {
    let fixed = match cfg.smearing {
        SmearingSetting::Fixed(c) => Some(c),
        SmearingSetting::Auto => None,
    };
    let a = deuteron::coupling_analysis(&cfg.constants, fixed, &cfg.variational).map_err(numerical("couplings"))?;
    let r = &a.report;
    let report = json!({
        "v0_mev": r.v0,
        "v0_prime_mev": r.v0_prime,
        "r0_fm": r.r0,
        "r1_fm": r.r1,
        "r_c_fm": r.r_c,
        "v1_mev": r.v1,
        "g_sigma_sq_over_4pi": r.g_sigma_sq_over_4pi,
        "g_omega_sq_over_4pi": r.g_omega_sq_over_4pi,
        "ratio": r.ratio,
        "g_omega_phenom_sq_over_4pi": r.g_omega_phenom_sq_over_4pi,
        "g_omega_reference": r.g_omega_reference,
        "deviation_percent": r.deviation_percent,
        "smearing_choice": a.smearing,
        "smearing_mass_mev": a.smearing_mass,
        "calibration": {
            "r0_fm": a.calibration.r0,
            "target_depth_mev": a.calibration.target_depth,
            "selected": a.calibration.choice,
            "candidates": a.calibration.candidates.iter().map(|(c, d)| json!({ "smearing": c, "depth_mev": d })).collect::<Vec<_>>(),
        },
        "ordinary_alpha_star": a.ordinary.alpha_star,
        "fuzzy_alpha_star": a.fuzzy.alpha_star,
    });
    sink.primary(header, "couplings", &Document::Report(report)).map_err(io)?;

    let mut pot = Table::new(&["r_fm", "potential_mev"]);
    for (x, v) in &a.potential {
        pot.push(vec![json!(x), json!(v)]);
    }
    sink.auxiliary(header, "effective_potential", &Document::Table(pot), Format::Csv).map_err(io)?;

    let ord = YukawaProblem::ordinary(&cfg.constants, a.ordinary.depth, SIGMA_RANGE_FM).map_err(numerical("trial states"))?;
    let fz = YukawaProblem::fuzzy(&cfg.constants, a.fuzzy.depth, SIGMA_RANGE_FM, a.smearing_mass).map_err(numerical("trial states"))?;
    let ps: Vec<f64> = (0..=200).map(|i| 20.0 * i as f64).collect();
    let samples = |p: &YukawaProblem, alpha: f64| {
        TrialState::for_problem(p, alpha).and_then(|t| trial_samples(p, &t, &ps)).map_err(numerical("trial states"))
    };
    let so = samples(&ord, a.ordinary.alpha_star)?;
    let sf = samples(&fz, a.fuzzy.alpha_star)?;
    let mut trial = Table::new(&["p_mev", "ordinary_density_per_mev", "fuzzy_density_per_mev"]);
    for (o, f) in so.iter().zip(&sf) {
        trial.push(vec![json!(o.0), json!(o.2), json!(f.2)]);
    }
    sink.auxiliary(header, "trial_states", &Document::Table(trial), Format::Csv).map_err(io)?;

    let mut stalled = Vec::new();
    if !a.ordinary.converged {
        stalled.push("ordinary depth");
    }
    if !a.fuzzy.converged {
        stalled.push("fuzzy depth");
    }
    if stalled.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("couplings: not converged: {}", stalled.join(", "))))
    }
}
