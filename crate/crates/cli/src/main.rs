//! Scenario-driven command-line interface for the possibilistic portfolio
//! models: indicator reports, exact/approximate solves, model comparison,
//! sweeps, and a seeded randomized self-test.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fuzzyfolio::{
    approximate_allocation, background_adjustment, ordering_condition, solve_exact,
    validate_weighting, wealth_sweep, Error as CoreError, ModelSpec, ModelTag, Risk,
};
use fuzzyfolio_cli::report::{
    CompareReport, CompareRow, IndicatorsReport, OrderingOut, ScaleSweepRowOut, SolveOut,
    SweepOut, SweepReportOut,
};
use fuzzyfolio_cli::scenario::{CliError, Overrides, Scenario, Sweep};
use fuzzyfolio_cli::selftest;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "fuzzyfolio",
    version,
    about = "Possibilistic indicators and two-asset portfolio models with background risk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,

    /// Override the quadrature node count
    #[arg(long, global = true, env = "PPF_QUAD_NODES")]
    nodes: Option<usize>,

    /// Override the quadrature/validation tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Seed for the randomized self-test suite
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the possibilistic/probabilistic indicators of a scenario
    Indicators { file: PathBuf },
    /// Solve a scenario: exact optimum and closed-form approximation
    Solve { file: PathBuf },
    /// Instantiate and solve every model the scenario's risk encodings allow
    Compare { file: PathBuf },
    /// Re-solve over the scenario's wealth or risk-scale grid
    Sweep { file: PathBuf },
    /// Run the seeded randomized property suite
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ov = Overrides {
        nodes: cli.nodes,
        tolerance: cli.tolerance,
    };
    match &cli.command {
        Command::Indicators { file } => {
            let scenario = Scenario::from_path(file)?;
            let report = indicators_report(&scenario, &ov)?;
            emit(cli.output, &report, report.render_table())
        }
        Command::Solve { file } => {
            let scenario = Scenario::from_path(file)?;
            let m = scenario.build_model(&ov)?;
            let report = solve_report(&m)?;
            emit(cli.output, &report, report.render_table())
        }
        Command::Compare { file } => {
            let scenario = Scenario::from_path(file)?;
            let report = compare_report(&scenario, &ov)?;
            emit(cli.output, &report, report.render_table())
        }
        Command::Sweep { file } => {
            let scenario = Scenario::from_path(file)?;
            let report = sweep_report(&scenario, &ov)?;
            emit(cli.output, &report, report.render_table())
        }
        Command::Selftest => {
            let outcome = selftest::run(cli.seed.unwrap_or(7));
            println!(
                "selftest: {} passed, {} failed",
                outcome.passed, outcome.failed
            );
            if outcome.failed > 0 {
                return Err(CliError::Solver(format!(
                    "{} self-test properties failed",
                    outcome.failed
                )));
            }
            Ok(())
        }
    }
}

fn emit<T: Serialize>(output: Output, report: &T, table: String) -> Result<(), CliError> {
    match output {
        Output::Table => print!("{table}"),
        Output::Json => {
            let json = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Solver(format!("serialization failed: {e}")))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn model_name(tag: ModelTag) -> String {
    format!("{tag:?}")
}

fn indicators_report(scenario: &Scenario, ov: &Overrides) -> Result<IndicatorsReport, CliError> {
    let m = scenario.build_model(ov)?;
    let snapshot = m.indicator_snapshot()?;
    let weighting = validate_weighting(m.weighting(), 64, m.quadrature())?;
    Ok(IndicatorsReport {
        model: model_name(m.tag()),
        indicators: snapshot.into(),
        weighting_integral: weighting.integral,
        notes: scenario_notes(&m),
    })
}

/// Degenerate-background and Mossin annotations shared by the reports.
fn scenario_notes(m: &ModelSpec) -> Vec<String> {
    let mut notes = Vec::new();
    let zero_background = match m.background() {
        Some(Risk::Fuzzy(b)) => b.is_point() && b.support() == (0.0, 0.0),
        Some(Risk::Random(y)) => y.is_degenerate() && y.mean() == 0.0,
        None => false,
    };
    if zero_background {
        notes.push(
            "background risk is degenerate at 0; the model coincides with the \
             background-free baseline"
                .into(),
        );
    }
    if let Ok(snap) = m.indicator_snapshot() {
        let mean = snap.fuzzy_return_mean.or(snap.random_return_mean);
        if let Some(e) = mean {
            if (e - m.market().r).abs() <= 1e-12 {
                notes.push(
                    "Mossin case: the mean risky return equals the risk-free rate, \
                     so the optimal allocation is 0"
                        .into(),
                );
            }
        }
    }
    notes
}

fn solve_report(m: &ModelSpec) -> Result<SolveOut, CliError> {
    let approx = approximate_allocation(m)?;
    let mut notes = scenario_notes(m);
    let mut out = SolveOut {
        model: model_name(m.tag()),
        alpha_exact: None,
        alpha_approx: approx.alpha,
        gap: None,
        objective_at_exact: None,
        derivative_at_exact: None,
        iterations: None,
        bracket: None,
        degenerate: false,
        indicators: approx.indicators.into(),
        background_adjustment: None,
        ordering: None,
        notes: Vec::new(),
    };
    match solve_exact(m) {
        Ok(sol) => {
            out.alpha_exact = Some(sol.alpha_exact);
            out.gap = Some((sol.alpha_exact - sol.alpha_approx).abs());
            out.objective_at_exact = Some(sol.objective_at_exact);
            out.derivative_at_exact = Some(sol.derivative_at_exact);
            out.iterations = Some(sol.iterations);
            out.bracket = Some(sol.bracket);
            out.degenerate = sol.degenerate;
        }
        Err(CoreError::NoInteriorOptimum(msg)) => {
            notes.push(format!(
                "no interior optimum: {msg}; the objective is monotone in alpha up to \
                 the domain boundary, so only the closed-form approximation is reported"
            ));
        }
        Err(e) => return Err(e.into()),
    }
    if m.tag() != ModelTag::M1 {
        out.background_adjustment = Some(background_adjustment(m)?);
    }
    if matches!(m.tag(), ModelTag::M2 | ModelTag::M3) {
        let cond = ordering_condition(m)?;
        out.ordering = Some(OrderingOut {
            background_leq: cond.background_leq,
            condition_value: cond.condition_value,
        });
    }
    out.notes = notes;
    Ok(out)
}

fn compare_report(scenario: &Scenario, ov: &Overrides) -> Result<CompareReport, CliError> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut missing = Vec::new();
    for tag in [ModelTag::M1, ModelTag::M2, ModelTag::M3, ModelTag::M4] {
        let Some(m) = scenario.build_model_for(tag, ov)? else {
            let requirement = match tag {
                ModelTag::M1 => "a fuzzy investment risk",
                ModelTag::M2 => "a fuzzy investment risk and a fuzzy background risk",
                ModelTag::M3 => "a fuzzy investment risk and a discrete random background risk",
                ModelTag::M4 => "a discrete random investment risk and a fuzzy background risk",
            };
            missing.push(format!("{}: needs {requirement}", model_name(tag)));
            continue;
        };
        let alpha_approx = approximate_allocation(&m)?.alpha;
        let alpha_exact = match solve_exact(&m) {
            Ok(sol) => Some(sol.alpha_exact),
            Err(CoreError::NoInteriorOptimum(msg)) => {
                notes.push(format!("{}: no interior optimum ({msg})", model_name(tag)));
                None
            }
            Err(e) => return Err(e.into()),
        };
        let bg_adjustment = if tag == ModelTag::M1 {
            None
        } else {
            Some(background_adjustment(&m)?)
        };
        let condition_value = if matches!(tag, ModelTag::M2 | ModelTag::M3) {
            Some(ordering_condition(&m)?.condition_value)
        } else {
            None
        };
        rows.push(CompareRow {
            model: model_name(tag),
            alpha_exact,
            alpha_approx,
            background_adjustment: bg_adjustment,
            condition_value,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!(
            "no model can be instantiated from the scenario's risk encodings: {}",
            missing.join("; ")
        )));
    }
    if let Some(base) = rows.iter().find(|r| r.model == "M1").map(|r| r.alpha_approx) {
        for r in rows.iter().filter(|r| r.model != "M1") {
            notes.push(format!(
                "{} vs M1 baseline: alpha_approx {} the background-free value",
                r.model,
                if r.alpha_approx <= base + 1e-12 {
                    "does not exceed"
                } else {
                    "exceeds"
                }
            ));
        }
    }
    for m in missing {
        notes.push(format!("skipped {m}"));
    }
    Ok(CompareReport { rows, notes })
}

fn sweep_report(scenario: &Scenario, ov: &Overrides) -> Result<SweepReportOut, CliError> {
    let Some(sweep) = &scenario.sweep else {
        return Err(CliError::Validation(
            "scenario has no sweep block; add \"sweep\": {\"wealth\": [...]} or \
             {\"risk_scale\": [...]}"
                .into(),
        ));
    };
    let m = scenario.build_model(ov)?;
    match sweep {
        Sweep::Wealth(grid) => {
            let r = wealth_sweep(&m, grid)?;
            Ok(SweepReportOut::from_wealth(
                model_name(m.tag()),
                &r,
                scenario_notes(&m),
            ))
        }
        Sweep::RiskScale(grid) => {
            let mut rows = Vec::new();
            let mut notes = scenario_notes(&m);
            for &scale in grid {
                let scaled = m.with_scaled_risks(scale)?;
                let alpha_approx = approximate_allocation(&scaled)?.alpha;
                let alpha_exact = match solve_exact(&scaled) {
                    Ok(sol) => Some(sol.alpha_exact),
                    Err(CoreError::NoInteriorOptimum(msg)) => {
                        notes.push(format!("scale {scale}: no interior optimum ({msg})"));
                        None
                    }
                    Err(e) => return Err(e.into()),
                };
                rows.push(ScaleSweepRowOut {
                    scale,
                    alpha_exact,
                    alpha_approx,
                    relative_gap: alpha_exact.map(|a| {
                        if a == 0.0 {
                            (a - alpha_approx).abs()
                        } else {
                            (a - alpha_approx).abs() / a.abs()
                        }
                    }),
                });
            }
            Ok(SweepReportOut {
                model: model_name(m.tag()),
                sweep: SweepOut::RiskScale { rows },
                notes,
            })
        }
    }
}
