//! Subcommand execution and exit codes.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};

use biprom_core::bicapacity::validate;
use biprom_core::choquet::ranking_report;
use biprom_core::lp::DEFAULT_EPS_THRESHOLD;
use biprom_core::{
    bipolar_flows, classical_flows, constructive_elicitation, parse_statements, ror_snapshot, CriterionSpec,
    DecisionProblem, ElicitationOptions, ElicitationResult, Flows, ModelLevel, PreferenceStatement, RorOptions,
    TwoAdditiveBicapacity,
};

use crate::args::{Cli, Command, EvaluateArgs, Format, OutputArgs, ProblemArgs, StatementArgs};
use crate::render;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;

/// Runs one command and maps the outcome to a process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Flows(args) => flows(&args),
        Command::Rank(args) => rank(&args),
        Command::Elicit(args) => elicit(&args),
        Command::Ror(args) => ror(&args),
        Command::Serve(args) => crate::service::serve(args).map(|()| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    }
}

pub fn load_problem(args: &ProblemArgs) -> Result<DecisionProblem> {
    let path = &args.problem;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let criteria_path = args.criteria.as_ref().context("a CSV problem needs --criteria")?;
        let criteria: Vec<CriterionSpec> = serde_json::from_str(&read(criteria_path)?)
            .with_context(|| format!("parsing {}", criteria_path.display()))?;
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        return DecisionProblem::from_csv(file, &criteria).with_context(|| format!("parsing {}", path.display()));
    }
    DecisionProblem::from_json_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_statements(path: &Path) -> Result<Vec<PreferenceStatement>> {
    parse_statements(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_report(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn compute_flows(problem: &DecisionProblem, args: &EvaluateArgs) -> Result<Flows> {
    if let Some(weights) = &args.weights {
        return Ok(classical_flows(problem, weights)?);
    }
    let path = args.bicapacity.as_ref().context("either --bicapacity or --weights is required")?;
    let b: TwoAdditiveBicapacity =
        serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let report = validate(&b, 1e-9)?;
    if let Some(v) = report.violations.first() {
        bail!("{} is not a valid bicapacity: {v} ({} violations)", path.display(), report.violations.len());
    }
    Ok(bipolar_flows(problem, &b)?)
}

fn flows(args: &EvaluateArgs) -> Result<u8> {
    let problem = load_problem(&args.problem)?;
    let flows = compute_flows(&problem, args)?;
    let text = match args.output.format {
        Format::Json => to_json(&flows)?,
        Format::Table => render::flows_table(&flows),
    };
    write_report(&args.output, &text)?;
    Ok(EXIT_OK)
}

fn rank(args: &EvaluateArgs) -> Result<u8> {
    let problem = load_problem(&args.problem)?;
    let report = ranking_report(&compute_flows(&problem, args)?);
    let text = match args.output.format {
        Format::Json => to_json(&report)?,
        Format::Table => render::ranking_table(&report),
    };
    write_report(&args.output, &text)?;
    Ok(EXIT_OK)
}

fn threshold(eps: Option<f64>) -> Result<f64> {
    let t = eps.unwrap_or(DEFAULT_EPS_THRESHOLD);
    if !(t.is_finite() && t >= 0.0) {
        bail!("--eps-threshold must be a non-negative number, got {t}");
    }
    Ok(t)
}

/// Cumulative statement sets, one per supplied batch.
fn iterations(args: &StatementArgs) -> Result<Vec<Vec<PreferenceStatement>>> {
    let mut out: Vec<Vec<PreferenceStatement>> = Vec::new();
    for path in &args.statements {
        let mut set = out.last().cloned().unwrap_or_default();
        set.extend(load_statements(path)?);
        out.push(set);
    }
    Ok(out)
}

fn write_elicitation(output: &OutputArgs, result: &ElicitationResult) -> Result<u8> {
    let text = match output.format {
        Format::Json => to_json(result)?,
        Format::Table => render::elicitation_table(result),
    };
    write_report(output, &text)?;
    Ok(if result.level == ModelLevel::Inconsistent { EXIT_INCONSISTENT } else { EXIT_OK })
}

fn elicit(args: &StatementArgs) -> Result<u8> {
    let problem = load_problem(&args.problem)?;
    let statements = iterations(args)?.pop().unwrap_or_default();
    let options = ElicitationOptions { eps_threshold: threshold(args.eps_threshold)? };
    let result = constructive_elicitation(&problem, &statements, options)?;
    write_elicitation(&args.output, &result)
}

fn ror(args: &StatementArgs) -> Result<u8> {
    let problem = load_problem(&args.problem)?;
    let eps_threshold = threshold(args.eps_threshold)?;
    let sets = iterations(args)?;
    for set in &sets {
        let result = constructive_elicitation(&problem, set, ElicitationOptions { eps_threshold })?;
        if result.level == ModelLevel::Inconsistent {
            eprintln!("error: the statements admit no compatible bicapacity");
            return write_elicitation(&args.output, &result);
        }
    }
    let options = RorOptions { eps_threshold };
    let last = sets.len();
    let previous = match last {
        0 | 1 => None,
        k => Some(ror_snapshot(&problem, &sets[k - 2], k - 1, None, options)?),
    };
    let snapshot = ror_snapshot(&problem, &sets[last - 1], last, previous.as_ref(), options)?;
    let text = match args.output.format {
        Format::Json => to_json(&snapshot)?,
        Format::Table => render::snapshot_table(&snapshot),
    };
    write_report(&args.output, &text)?;
    Ok(EXIT_OK)
}
