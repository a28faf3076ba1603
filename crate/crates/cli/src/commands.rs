//! Subcommand implementations. Humans get a readable report on stdout;
//! `--json` switches to a schema-stable machine format. Exit codes: 0 ok,
//! 1 usage, 2 model-domain error, 3 numerical failure.

use crate::csvio;
use crate::scenario::{parse_scenario, Scenario, ScenarioError, Variant};
use crate::svg;
use clap::Args;
use revolt_core as core;
use revolt_core::{
    balanced_stalemate, basic_thresholds, check_conjecture, classify_basic, classify_direct,
    conjecture_sweep, direct_victory_threshold, indirect_thresholds, integrate,
    opportunistic_equilibria, outcome_from_trajectory, outcome_map, outcome_map_cross_checked,
    stability_basic, stability_direct, AxisScale, AxisSpec, BasinCoord, BasinSpec, BasinTag,
    Boundary, CellOutcome, ConjectureRanges, ConjectureReport, Outcome, StabilityReport, SweepBase,
    SweepParam, SweepSpec, SweepVariant, Terminal,
};
use serde::Serialize;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<core::Error> for CliError {
    fn from(e: core::Error) -> Self {
        match e {
            core::Error::IntegrationFailure { .. } | core::Error::Inconclusive { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Domain(format!("scenario: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_scenario(&text)?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, content)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
        }
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON report shapes.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RatesOut {
    f_s: f64,
    h_s: f64,
    f_c: f64,
    h_c: f64,
    r_s: f64,
    r_c: f64,
}

impl RatesOut {
    fn of(r: &core::RateParams) -> Self {
        Self {
            f_s: r.f_s(),
            h_s: r.h_s(),
            f_c: r.f_c(),
            h_c: r.h_c(),
            r_s: r.r_s(),
            r_c: r.r_c(),
        }
    }
}

#[derive(Serialize)]
struct PointOut {
    sb: f64,
    sr: f64,
    cr: f64,
    cb: f64,
}

#[derive(Serialize)]
struct OutcomeOut {
    kind: String,
    boundary: Option<String>,
    point: Option<PointOut>,
    blue_fraction: Option<f64>,
}

impl OutcomeOut {
    fn of(outcome: &Outcome) -> Self {
        match outcome {
            Outcome::BlueVictory => Self {
                kind: "blue-victory".into(),
                boundary: None,
                point: None,
                blue_fraction: Some(1.0),
            },
            Outcome::RedVictory => Self {
                kind: "red-victory".into(),
                boundary: None,
                point: None,
                blue_fraction: Some(0.0),
            },
            Outcome::Stalemate(p) => Self {
                kind: "stalemate".into(),
                boundary: None,
                point: Some(PointOut {
                    sb: p.sb(),
                    sr: p.sr(),
                    cr: p.cr(),
                    cb: p.cb(),
                }),
                blue_fraction: Some(p.blue_controlled()),
            },
            Outcome::MarginalBoundary(b) => Self {
                kind: "marginal".into(),
                boundary: Some(boundary_name(*b).into()),
                point: None,
                blue_fraction: None,
            },
        }
    }
}

fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::BlueVictory => "blue-victory-threshold",
        Boundary::RedVictory => "red-victory-threshold",
        Boundary::DirectIntervention => "intervention-threshold",
    }
}

#[derive(Serialize)]
struct StabilityOut {
    equilibrium: String,
    coordinates: Vec<f64>,
    eigenvalues: Vec<[f64; 2]>,
    stable: bool,
    marginal: bool,
}

impl StabilityOut {
    fn of(r: &StabilityReport) -> Self {
        Self {
            equilibrium: r.kind.to_string(),
            coordinates: r.equilibrium.clone(),
            eigenvalues: r.eigenvalues.iter().map(|e| [e.re, e.im]).collect(),
            stable: r.stable,
            marginal: r.marginal,
        }
    }
}

fn fmt_eigs(r: &StabilityReport) -> String {
    r.eigenvalues
        .iter()
        .map(|e| {
            if e.im == 0.0 {
                format!("{:.6}", e.re)
            } else {
                format!(
                    "{:.6}{}{:.6}i",
                    e.re,
                    if e.im < 0.0 { "-" } else { "+" },
                    e.im.abs()
                )
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_stability(reports: &[StabilityReport]) {
    println!("stability survey:");
    for r in reports {
        let coords = r
            .equilibrium
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect::<Vec<_>>()
            .join(", ");
        let verdict = if r.stable {
            "stable"
        } else if r.marginal {
            "marginal"
        } else {
            "unstable"
        };
        println!(
            "  {:<20} at ({coords}): {verdict}; eigenvalues {}",
            r.kind.to_string(),
            fmt_eigs(r)
        );
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Scenario file (.scn).
    pub scenario: PathBuf,
    /// Print eigenvalue stability reports for every equilibrium.
    #[arg(long)]
    pub stability: bool,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct ClassifyReport {
    scenario: String,
    variant: String,
    s: Option<f64>,
    rates: RatesOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    effective_rates: Option<RatesOut>,
    dominant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    blue_victory_if_r_c_below: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    red_victory_if_r_s_below: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_c_victory_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_s_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_c_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indirect_needed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<OutcomeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    balanced_stalemate: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basin_outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjecture_condition_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjecture_numerically_stable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<Vec<StabilityOut>>,
}

pub fn cmd_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let sc = load_scenario(&args.scenario)?;
    let rates = sc.rates;
    let mut report = ClassifyReport {
        scenario: sc.name.clone(),
        variant: sc.variant.name().into(),
        s: sc.split.map(|s| s.s()),
        rates: RatesOut::of(&rates),
        effective_rates: None,
        dominant: rates.dominant(),
        blue_victory_if_r_c_below: None,
        red_victory_if_r_s_below: None,
        lambda_c_victory_threshold: None,
        mu_s_min: None,
        mu_c_min: None,
        indirect_needed: None,
        outcome: None,
        balanced_stalemate: None,
        basin_outcome: None,
        conjecture_condition_holds: None,
        conjecture_numerically_stable: None,
        stability: None,
    };
    let mut stability_reports: Option<Vec<StabilityReport>> = None;

    match sc.variant {
        Variant::Basic | Variant::Indirect => {
            let split = sc.split.expect("validated");
            let effective = sc.effective_rates();
            if sc.variant == Variant::Indirect {
                report.effective_rates = Some(RatesOut::of(&effective));
                let th = indirect_thresholds(&split, &rates)?;
                report.mu_s_min = Some(th.mu_s_min);
                report.mu_c_min = Some(th.mu_c_min);
                report.indirect_needed = Some(th.needed);
            }
            let th = basic_thresholds(&split)?;
            report.blue_victory_if_r_c_below = Some(th.blue_if_rc_below);
            report.red_victory_if_r_s_below = Some(th.red_if_rs_below);
            let outcome = classify_basic(&split, &effective)?;
            report.outcome = Some(OutcomeOut::of(&outcome));
            if args.stability {
                stability_reports = Some(stability_basic(&split, &effective)?);
            }
        }
        Variant::Direct => {
            let split = sc.split.expect("validated");
            let iv = sc.direct.expect("validated");
            report.lambda_c_victory_threshold = Some(direct_victory_threshold(&split, &rates));
            let outcome = classify_direct(&split, &rates, &iv)?;
            if outcome.is_stalemate() {
                let chk = check_conjecture(&split, &rates, &iv)?;
                report.conjecture_condition_holds = Some(chk.condition_holds);
                report.conjecture_numerically_stable = Some(chk.numerically_stable);
            }
            report.outcome = Some(OutcomeOut::of(&outcome));
            if args.stability {
                stability_reports = Some(stability_direct(&split, &rates, &iv)?);
            }
        }
        Variant::Opportunistic => {
            let op = sc.opportunistic.expect("validated");
            let eq = opportunistic_equilibria(&rates, &op);
            report.balanced_stalemate = Some([eq.balanced.sb(), eq.balanced.cr(), eq.balanced.s()]);
            if sc.init.is_some() {
                let model = sc.model();
                let traj = integrate(&model, &sc.initial_state()?, &sc.integrator_config())?;
                report.basin_outcome = Some(match traj.terminal {
                    Terminal::ConvergedToEquilibrium(kind) => kind.to_string(),
                    Terminal::HorizonReached => "inconclusive".into(),
                });
            }
            if args.stability {
                stability_reports = Some(eq.reports);
            }
        }
    }

    if args.json {
        report.stability = stability_reports
            .as_deref()
            .map(|rs| rs.iter().map(StabilityOut::of).collect());
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
        return Ok(());
    }

    println!(
        "scenario: {} (variant: {})",
        report.scenario, report.variant
    );
    if let Some(s) = report.s {
        println!("population split: S = {s}, C = {}", 1.0 - s);
    }
    println!(
        "rates: f_S = {}, h_S = {}, f_C = {}, h_C = {} (r_S = {}, r_C = {})",
        rates.f_s(),
        rates.h_s(),
        rates.f_c(),
        rates.h_c(),
        rates.r_s(),
        rates.r_c()
    );
    if let Some(eff) = &report.effective_rates {
        println!(
            "with multipliers applied: r_S = {}, r_C = {}",
            eff.r_s, eff.r_c
        );
    }
    println!(
        "dominance assumption: {}",
        if report.dominant {
            "satisfied"
        } else {
            "violated"
        }
    );
    if let (Some(rc), Some(rs)) = (
        report.blue_victory_if_r_c_below,
        report.red_victory_if_r_s_below,
    ) {
        println!("victory thresholds: Blue wins iff r_C < {rc:.4}; Red wins iff r_S < {rs:.4}");
    }
    if let Some(th) = report.lambda_c_victory_threshold {
        println!("intervention threshold: Blue wins iff lambda_C > {th:.6}");
    }
    if let (Some(ms), Some(mc)) = (report.mu_s_min, report.mu_c_min) {
        println!(
            "required multipliers: avoid defeat mu_S >= {ms:.4}; secure victory mu_C > {mc:.4} \
             (win multiplier needed: {})",
            if report.indirect_needed == Some(true) {
                "yes"
            } else {
                "no"
            }
        );
    }
    if let Some(out) = &report.outcome {
        println!("outcome: {}", out.kind);
        if let Some(b) = &out.boundary {
            println!("  on boundary: {b}");
        }
        if let Some(p) = &out.point {
            println!(
                "  stalemate point: SB = {:.6}, SR = {:.6}, CR = {:.6}, CB = {:.6}",
                p.sb, p.sr, p.cr, p.cb
            );
        }
        if let Some(f) = out.blue_fraction {
            println!("  Blue-controlled fraction: {f:.6}");
        }
    }
    if let (Some(c), Some(n)) = (
        report.conjecture_condition_holds,
        report.conjecture_numerically_stable,
    ) {
        println!(
            "stalemate stability (conjectural): condition {}; eigenvalues {}; verdicts {}",
            if c { "holds" } else { "fails" },
            if n { "negative" } else { "not all negative" },
            if c == n { "agree" } else { "DISAGREE" }
        );
    }
    if let Some(b) = &report.balanced_stalemate {
        println!(
            "balanced stalemate (basin boundary): SB* = {:.6}, CR* = {:.6}, S* = {:.6}",
            b[0], b[1], b[2]
        );
        println!("possible outcomes: Blue or Red victory, depending on initial conditions");
    }
    if let Some(b) = &report.basin_outcome {
        println!("from the scenario's initial state: converges to {b}");
    }
    if let Some(rs) = &stability_reports {
        print_stability(rs);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario file (.scn).
    pub scenario: PathBuf,
    /// Trajectory CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Machine-readable summary on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct SimulateReport {
    scenario: String,
    terminal: String,
    t_final: f64,
    sb: f64,
    sr: f64,
    cr: f64,
    cb: f64,
    s: f64,
    outcome: String,
    steps_accepted: usize,
    steps_rejected: usize,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let sc = load_scenario(&args.scenario)?;
    let model = sc.model();
    let traj = integrate(&model, &sc.initial_state()?, &sc.integrator_config())?;

    let mut csv = Vec::new();
    csvio::write_trajectory_csv(&mut csv, &model, &traj)?;
    let csv = String::from_utf8(csv).expect("csv is ascii");

    let last = traj.final_sample();
    let terminal = match traj.terminal {
        Terminal::ConvergedToEquilibrium(kind) => format!("converged:{kind}"),
        Terminal::HorizonReached => "horizon".to_string(),
    };
    let outcome = match outcome_from_trajectory(&traj, 1e-6) {
        Ok(Outcome::BlueVictory) => "blue-victory".to_string(),
        Ok(Outcome::RedVictory) => "red-victory".to_string(),
        Ok(Outcome::Stalemate(_)) => "stalemate".to_string(),
        Ok(Outcome::MarginalBoundary(_)) => "marginal".to_string(),
        Err(_) => "inconclusive".to_string(),
    };

    match &args.out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            if args.json {
                let report = SimulateReport {
                    scenario: sc.name.clone(),
                    terminal,
                    t_final: last.t,
                    sb: last.sb,
                    sr: last.sr(),
                    cr: last.cr,
                    cb: last.cb(),
                    s: last.s,
                    outcome,
                    steps_accepted: traj.steps_accepted,
                    steps_rejected: traj.steps_rejected,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                println!("wrote {} samples to {}", traj.samples.len(), path.display());
                println!("terminal: {terminal} at t = {}", last.t);
                println!(
                    "final state: SB = {:.8}, SR = {:.8}, CR = {:.8}, CB = {:.8}",
                    last.sb,
                    last.sr(),
                    last.cr,
                    last.cb()
                );
                println!("outcome: {outcome}");
            }
        }
        None => {
            // Bare CSV on stdout; keep it machine-consumable.
            print!("{csv}");
            std::io::stdout().flush().ok();
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Scenario file providing the base parameters (not needed with a preset).
    pub scenario: Option<PathBuf>,
    /// Named preset: `fig2` (LSER outcome map and control surface at S = 0.4).
    #[arg(long)]
    pub preset: Option<String>,
    /// X axis as `param:min:max[:log]`, e.g. `r_S:0.1:5`.
    #[arg(long)]
    pub x: Option<String>,
    /// Y axis as `param:min:max[:log]`.
    #[arg(long)]
    pub y: Option<String>,
    /// Grid resolution `NxM` (x-count by y-count).
    #[arg(long)]
    pub grid: Option<String>,
    /// Grid CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Outcome-map SVG output path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Blue-control-surface SVG output path.
    #[arg(long)]
    pub svg_surface: Option<PathBuf>,
    /// Re-derive each non-marginal cell by trajectory integration.
    #[arg(long)]
    pub cross_check: bool,
    /// Machine-readable summary.
    #[arg(long)]
    pub json: bool,
}

fn parse_grid(text: Option<&str>, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    match text {
        None => Ok(default),
        Some(t) => {
            let (a, b) = t
                .split_once('x')
                .ok_or_else(|| CliError::Usage(format!("--grid expects NxM, got `{t}`")))?;
            let nx = a
                .parse()
                .map_err(|_| CliError::Usage(format!("bad grid count `{a}`")))?;
            let ny = b
                .parse()
                .map_err(|_| CliError::Usage(format!("bad grid count `{b}`")))?;
            Ok((nx, ny))
        }
    }
}

fn parse_sweep_param(name: &str) -> Result<SweepParam, CliError> {
    Ok(match name {
        "S" => SweepParam::S,
        "r_S" => SweepParam::RS,
        "r_C" => SweepParam::RC,
        "f_S" => SweepParam::FS,
        "h_S" => SweepParam::HS,
        "f_C" => SweepParam::FC,
        "h_C" => SweepParam::HC,
        "lambda_S" => SweepParam::LambdaS,
        "lambda_C" => SweepParam::LambdaC,
        "mu_S" => SweepParam::MuS,
        "mu_C" => SweepParam::MuC,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown sweep parameter `{name}` (expected one of S, r_S, r_C, f_S, h_S, f_C, \
                 h_C, lambda_S, lambda_C, mu_S, mu_C)"
            )))
        }
    })
}

fn parse_axis(text: &str, count: usize) -> Result<AxisSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "axis `{text}` must be param:min:max[:log]"
        )));
    }
    let param = parse_sweep_param(parts[0])?;
    let min: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad axis bound `{}`", parts[1])))?;
    let max: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad axis bound `{}`", parts[2])))?;
    let scale = match parts.get(3) {
        None => AxisScale::Linear,
        Some(&"log") => AxisScale::Log,
        Some(&"linear") => AxisScale::Linear,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "axis scale `{other}` must be linear or log"
            )))
        }
    };
    Ok(AxisSpec {
        param,
        min,
        max,
        count,
        scale,
    })
}

fn sweep_base_of(sc: &Scenario) -> Result<(SweepVariant, SweepBase), CliError> {
    let split = sc
        .split
        .ok_or_else(|| CliError::Domain("sweep needs a variant with a fixed split".into()))?;
    Ok(match sc.variant {
        Variant::Basic => (SweepVariant::Basic, SweepBase::basic(split, sc.rates)),
        Variant::Direct => (
            SweepVariant::Direct,
            SweepBase {
                split,
                rates: sc.rates,
                intervention: sc.direct.unwrap_or_else(core::DirectIntervention::none),
                indirect: None,
            },
        ),
        Variant::Indirect => (
            SweepVariant::Indirect,
            SweepBase {
                split,
                rates: sc.rates,
                intervention: core::DirectIntervention::none(),
                indirect: sc.indirect,
            },
        ),
        Variant::Opportunistic => {
            return Err(CliError::Domain(
                "outcome maps need an analytically classifiable variant (basic, direct, indirect)"
                    .into(),
            ))
        }
    })
}

#[derive(Serialize)]
struct SweepReport {
    cells: usize,
    blue: usize,
    red: usize,
    stalemate: usize,
    marginal: usize,
    excluded: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheckOut>,
}

#[derive(Serialize)]
struct CrossCheckOut {
    checked: usize,
    agreements: usize,
    inconclusive: usize,
    mismatches: usize,
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let (nx, ny) = parse_grid(args.grid.as_deref(), (50, 50))?;
    let mut cross_cfg = core::IntegratorConfig::default();

    let spec = match args.preset.as_deref() {
        Some("fig2") => {
            if args.scenario.is_some() {
                return Err(CliError::Usage(
                    "--preset fig2 fixes the scenario; drop the scenario argument".into(),
                ));
            }
            SweepSpec {
                variant: SweepVariant::Basic,
                base: SweepBase::basic(
                    core::PopulationSplit::new(0.4).expect("valid"),
                    core::RateParams::new(2.0, 1.0, 2.0, 1.0).expect("valid"),
                ),
                x: AxisSpec::linear(SweepParam::RS, 0.1, 5.0, nx),
                y: AxisSpec::linear(SweepParam::RC, 0.1, 5.0, ny),
            }
        }
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown preset `{other}` (available: fig2)"
            )))
        }
        None => {
            let scenario_path = args
                .scenario
                .as_ref()
                .ok_or_else(|| CliError::Usage("sweep needs a scenario file or --preset".into()))?;
            let sc = load_scenario(scenario_path)?;
            cross_cfg = sc.integrator_config();
            let (variant, base) = sweep_base_of(&sc)?;
            let x = parse_axis(
                args.x
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("sweep needs --x param:min:max".into()))?,
                nx,
            )?;
            let y = parse_axis(
                args.y
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("sweep needs --y param:min:max".into()))?,
                ny,
            )?;
            SweepSpec {
                variant,
                base,
                x,
                y,
            }
        }
    };

    let map = if args.cross_check {
        outcome_map_cross_checked(&spec, &cross_cfg)?
    } else {
        outcome_map(&spec)?
    };

    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        csvio::write_grid_csv(&mut buf, &map)?;
        fs::write(path, buf)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.svg {
        let title = format!(
            "Outcomes over ({}, {})",
            spec.x.param.name(),
            spec.y.param.name()
        );
        fs::write(path, svg::svg_outcome_map(&map, &title))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.svg_surface {
        let title = format!(
            "Blue-controlled fraction over ({}, {})",
            spec.x.param.name(),
            spec.y.param.name()
        );
        fs::write(path, svg::svg_surface(&map, &title))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let count = |o: CellOutcome| map.cells.iter().filter(|c| c.outcome == o).count();
    let report = SweepReport {
        cells: map.cells.len(),
        blue: count(CellOutcome::BlueVictory),
        red: count(CellOutcome::RedVictory),
        stalemate: count(CellOutcome::Stalemate),
        marginal: count(CellOutcome::Marginal),
        excluded: count(CellOutcome::Excluded),
        cross_check: map.cross_check.as_ref().map(|cc| CrossCheckOut {
            checked: cc.checked,
            agreements: cc.agreements,
            inconclusive: cc.inconclusive,
            mismatches: cc.mismatches.len(),
        }),
    };

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        println!(
            "{} cells: {} blue, {} red, {} stalemate, {} marginal, {} excluded",
            report.cells,
            report.blue,
            report.red,
            report.stalemate,
            report.marginal,
            report.excluded
        );
        if let Some(cc) = &report.cross_check {
            println!(
                "cross-check: {} cells integrated, {} agree, {} inconclusive, {} mismatches",
                cc.checked, cc.agreements, cc.inconclusive, cc.mismatches
            );
        }
    }

    if let Some(cc) = &map.cross_check {
        if !cc.mismatches.is_empty() {
            for (x, y, analytic, integrated) in &cc.mismatches {
                eprintln!(
                    "mismatch at ({x}, {y}): analytic {} vs integrated {}",
                    analytic.tag(),
                    integrated.tag()
                );
            }
            return Err(CliError::Numerical(format!(
                "{} cross-check mismatches",
                cc.mismatches.len()
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// basin
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct BasinArgs {
    /// Opportunistic scenario file (not needed with a preset).
    pub scenario: Option<PathBuf>,
    /// Named preset: `balanced` (unit rates and switching rate).
    #[arg(long)]
    pub preset: Option<String>,
    /// Pinned coordinate as `coord=value`, e.g. `S0=0.5` (default: S0 at the
    /// balanced stalemate).
    #[arg(long)]
    pub fix: Option<String>,
    /// X-axis range `min:max` (defaults to the valid range).
    #[arg(long)]
    pub x: Option<String>,
    /// Y-axis range `min:max`.
    #[arg(long)]
    pub y: Option<String>,
    /// Grid resolution `NxM`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Basin-cell CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Separatrix-sample CSV output path.
    #[arg(long)]
    pub separatrix: Option<PathBuf>,
    /// Basin SVG output path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Machine-readable summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct BasinReport {
    cells: usize,
    blue: usize,
    red: usize,
    boundary: usize,
    inconclusive: usize,
    out_of_domain: usize,
    separatrix_samples: usize,
    unresolved_brackets: usize,
    balanced_stalemate: [f64; 3],
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("range `{text}` must be min:max")))?;
    let min = a
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range bound `{a}`")))?;
    let max = b
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range bound `{b}`")))?;
    Ok((min, max))
}

fn parse_basin_coord(name: &str) -> Result<BasinCoord, CliError> {
    Ok(match name {
        "SB0" => BasinCoord::Sb0,
        "CR0" => BasinCoord::Cr0,
        "S0" => BasinCoord::S0,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown initial coordinate `{name}` (expected SB0, CR0, S0)"
            )))
        }
    })
}

pub fn cmd_basin(args: &BasinArgs) -> Result<(), CliError> {
    let mut cfg = core::IntegratorConfig::default();
    let (rates, op) = match args.preset.as_deref() {
        Some("balanced") => (
            core::RateParams::new(1.0, 1.0, 1.0, 1.0).expect("valid"),
            core::OpportunisticParams::new(1.0).expect("valid"),
        ),
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown preset `{other}` (available: balanced)"
            )))
        }
        None => {
            let path = args.scenario.as_ref().ok_or_else(|| {
                CliError::Usage("basin needs an opportunistic scenario or --preset".into())
            })?;
            let sc = load_scenario(path)?;
            let Some(op) = sc.opportunistic else {
                return Err(CliError::Domain(
                    "basin maps require the opportunistic variant".into(),
                ));
            };
            cfg = sc.integrator_config();
            (sc.rates, op)
        }
    };

    let balanced = balanced_stalemate(&rates);
    let (fixed, fixed_value) = match args.fix.as_deref() {
        None => (BasinCoord::S0, balanced.s()),
        Some(text) => {
            let (name, value) = text
                .split_once('=')
                .ok_or_else(|| CliError::Usage("--fix expects coord=value".into()))?;
            let coord = parse_basin_coord(name.trim())?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad --fix value `{value}`")))?;
            (coord, value)
        }
    };

    let free: Vec<BasinCoord> = [BasinCoord::Sb0, BasinCoord::Cr0, BasinCoord::S0]
        .into_iter()
        .filter(|c| *c != fixed)
        .collect();

    // Default ranges: the tight valid box when S0 is pinned, [0, 1] otherwise.
    let default_range = |coord: BasinCoord| -> (f64, f64) {
        if fixed == BasinCoord::S0 {
            match coord {
                BasinCoord::Sb0 => (0.0, fixed_value),
                BasinCoord::Cr0 => (0.0, 1.0 - fixed_value),
                BasinCoord::S0 => unreachable!("S0 is pinned"),
            }
        } else {
            (0.0, 1.0)
        }
    };
    let (x_min, x_max) = match &args.x {
        Some(t) => parse_range(t)?,
        None => default_range(free[0]),
    };
    let (y_min, y_max) = match &args.y {
        Some(t) => parse_range(t)?,
        None => default_range(free[1]),
    };
    let (nx, ny) = parse_grid(args.grid.as_deref(), (21, 21))?;

    let spec = BasinSpec {
        x: core::explore::BasinAxis {
            coord: free[0],
            min: x_min,
            max: x_max,
            count: nx,
        },
        y: core::explore::BasinAxis {
            coord: free[1],
            min: y_min,
            max: y_max,
            count: ny,
        },
        fixed,
        fixed_value,
    };

    let map = core::basin_map(&rates, &op, &spec, &cfg)?;

    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        csvio::write_basin_csv(&mut buf, &map)?;
        fs::write(path, buf)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.separatrix {
        let mut buf = Vec::new();
        csvio::write_separatrix_csv(&mut buf, &map)?;
        fs::write(path, buf)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.svg {
        let title = format!("Basins of attraction ({} = {})", fixed.name(), fixed_value);
        fs::write(path, svg::svg_basin(&map, &title))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let count = |t: BasinTag| map.cells.iter().filter(|c| c.tag == t).count();
    let report = BasinReport {
        cells: map.cells.len(),
        blue: count(BasinTag::BlueVictory),
        red: count(BasinTag::RedVictory),
        boundary: count(BasinTag::OnBoundary),
        inconclusive: count(BasinTag::Inconclusive),
        out_of_domain: count(BasinTag::OutOfDomain),
        separatrix_samples: map.separatrix.len(),
        unresolved_brackets: map.unresolved_brackets,
        balanced_stalemate: [balanced.sb(), balanced.cr(), balanced.s()],
    };

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        println!(
            "{} cells: {} blue, {} red, {} boundary, {} inconclusive, {} out of domain",
            report.cells,
            report.blue,
            report.red,
            report.boundary,
            report.inconclusive,
            report.out_of_domain
        );
        println!(
            "separatrix: {} samples located ({} brackets unresolved)",
            report.separatrix_samples, report.unresolved_brackets
        );
        println!(
            "balanced stalemate: SB* = {:.6}, CR* = {:.6}, S* = {:.6}",
            report.balanced_stalemate[0],
            report.balanced_stalemate[1],
            report.balanced_stalemate[2]
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// conjecture
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// Number of random parameter draws.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// RNG seed; reports are reproducible bit-for-bit.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report file path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Machine-readable report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct ConjectureCaseOut {
    index: usize,
    s: f64,
    f_s: f64,
    h_s: f64,
    f_c: f64,
    h_c: f64,
    lambda_s: f64,
    lambda_c: f64,
    condition_holds: bool,
    numerically_stable: bool,
}

#[derive(Serialize)]
struct ConjectureOut {
    n_samples: usize,
    seed: u64,
    agreements: usize,
    marginal: usize,
    skipped_region: usize,
    disagreements: Vec<ConjectureCaseOut>,
}

fn render_conjecture_report(report: &ConjectureReport) -> String {
    let mut out = String::new();
    out.push_str(
        "conjecture probe: the intervention stalemate is stable iff (r_C - A_C)/(1 + r_C) > S\n",
    );
    out.push_str(&format!(
        "samples = {}, seed = {}\n",
        report.n_samples, report.seed
    ));
    out.push_str(&format!(
        "rates log-uniform over [1e{}, 1e{}], S uniform over [{}, {}], lambda uniform over \
         [0, {}] with P(zero) = {}\n",
        report.ranges.rate_log10.0,
        report.ranges.rate_log10.1,
        report.ranges.s_range.0,
        report.ranges.s_range.1,
        report.ranges.lambda_max,
        report.ranges.zero_lambda_prob
    ));
    out.push_str(&format!("agreements           = {}\n", report.agreements));
    out.push_str(&format!("marginal (no call)   = {}\n", report.marginal));
    out.push_str(&format!(
        "skipped (no stalemate) = {}\n",
        report.skipped_region
    ));
    out.push_str(&format!(
        "disagreements        = {}\n",
        report.disagreements.len()
    ));
    for case in &report.disagreements {
        out.push_str(&format!(
            "COUNTEREXAMPLE draw {}: S={:.17e} f_S={:.17e} h_S={:.17e} f_C={:.17e} h_C={:.17e} \
             lambda_S={:.17e} lambda_C={:.17e} condition_holds={} numerically_stable={}\n",
            case.index,
            case.s,
            case.f_s,
            case.h_s,
            case.f_c,
            case.h_c,
            case.lambda_s,
            case.lambda_c,
            case.check.condition_holds,
            case.check.numerically_stable
        ));
    }
    out
}

pub fn cmd_conjecture(args: &ConjectureArgs) -> Result<(), CliError> {
    let ranges = ConjectureRanges::default();
    let report = conjecture_sweep(args.n, &ranges, args.seed);

    let content = if args.json {
        let out = ConjectureOut {
            n_samples: report.n_samples,
            seed: report.seed,
            agreements: report.agreements,
            marginal: report.marginal,
            skipped_region: report.skipped_region,
            disagreements: report
                .disagreements
                .iter()
                .map(|c| ConjectureCaseOut {
                    index: c.index,
                    s: c.s,
                    f_s: c.f_s,
                    h_s: c.h_s,
                    f_c: c.f_c,
                    h_c: c.h_c,
                    lambda_s: c.lambda_s,
                    lambda_c: c.lambda_c,
                    condition_holds: c.check.condition_holds,
                    numerically_stable: c.check.numerically_stable,
                })
                .collect(),
        };
        format!(
            "{}\n",
            serde_json::to_string_pretty(&out).expect("serializable")
        )
    } else {
        render_conjecture_report(&report)
    };
    write_output(args.out.as_ref(), &content)?;

    if report.all_agree() {
        Ok(())
    } else {
        Err(CliError::Domain(format!(
            "{} disagreements with the conjectured stability condition",
            report.disagreements.len()
        )))
    }
}
