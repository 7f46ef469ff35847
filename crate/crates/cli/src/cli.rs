//! Argument definitions and subcommand dispatch.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use leakaudit_core::sim::{leakage_sweep, true_c, validity_trials, CategoricalWorld};
use leakaudit_core::stats::DEFAULT_PARAM_CAP;
use leakaudit_core::{measure, o1_measure, AuditConfig, BaselineBudget, BoundKind, RecallWindow, UnionBound};

use crate::document::{self, AuditInputs, O1Inputs, Payload, ResultDocument, SimulationReport};
use crate::input::{load_scores, ScoreFormat};
use crate::plot::write_audit_plots;
use crate::validate::{run_validation, soundness_cap};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "leakaudit", version, about = "Measure privacy leakage from membership scores on a synthetic-vs-member audit set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower-bound generator closeness and attack leakage from two score files.
    Audit(AuditArgs),
    /// Leakage lower bound of an attack that may abstain.
    O1(O1Args),
    /// Run validity trials and a leakage sweep in a synthetic categorical world.
    Simulate(SimulateArgs),
    /// Check the numerical bounds against exact oracles and the soundness of the audit.
    ValidateBounds(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Exact,
    Hoeffding,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Baseline scores (JSONL, or CSV by `.csv` extension).
    #[arg(long)]
    pub baseline: PathBuf,
    /// Attack scores over the same ids.
    #[arg(long)]
    pub mia: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = BoundArg::Exact)]
    pub bound: BoundArg,
    /// Spend the full per-side level on every threshold.
    #[arg(long, conflicts_with = "union_bound_audit_size")]
    pub no_union_bound: bool,
    /// Split the level over the audit size instead of the tested thresholds.
    #[arg(long)]
    pub union_bound_audit_size: bool,
    /// Use `2 m delta` instead of `2 m gamma` as the baseline failure budget.
    #[arg(long)]
    pub baseline_delta_budget: bool,
    #[arg(long, default_value_t = 0.0)]
    pub recall_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub recall_max: f64,
    #[arg(long, default_value_t = DEFAULT_PARAM_CAP)]
    pub param_cap: f64,
    /// Result document path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for precision/recall and bound/recall SVG charts.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct O1Args {
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Default,
    Custom,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    /// Comma-separated symbol probabilities of the data distribution (custom preset).
    #[arg(long)]
    pub p_data: Option<String>,
    /// Comma-separated symbol probabilities of the generator (custom preset).
    #[arg(long)]
    pub p_gen: Option<String>,
    /// Member loss shift in units of the loss noise.
    #[arg(long)]
    pub separation: Option<f64>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub mia_weight: Option<f64>,
    /// Audit size.
    #[arg(long)]
    pub m: Option<usize>,
    /// Validity trials.
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// Comma-separated loss separations for the leakage sweep.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub sweep_trials: u64,
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Soundness trials on the default world.
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

impl AuditArgs {
    pub fn config(&self) -> AuditConfig {
        AuditConfig {
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            bound_kind: match self.bound {
                BoundArg::Exact => BoundKind::Exact,
                BoundArg::Hoeffding => BoundKind::Hoeffding,
            },
            union_bound: if self.no_union_bound {
                UnionBound::Off
            } else if self.union_bound_audit_size {
                UnionBound::AuditSize
            } else {
                UnionBound::Tests
            },
            recall_window: RecallWindow { min: self.recall_min, max: self.recall_max },
            param_cap: self.param_cap,
            baseline_budget: if self.baseline_delta_budget { BaselineBudget::Delta } else { BaselineBudget::Gamma },
        }
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{flag}: {s:?} is not a finite number")))
        })
        .collect()
}

impl SimulateArgs {
    pub fn world(&self) -> Result<CategoricalWorld, CliError> {
        let mut world = CategoricalWorld::default_world();
        match self.preset {
            Preset::Default => {
                if self.p_data.is_some() || self.p_gen.is_some() {
                    return Err(CliError::Usage("--p-data and --p-gen need --preset custom".into()));
                }
            }
            Preset::Custom => {
                let (Some(d), Some(g)) = (&self.p_data, &self.p_gen) else {
                    return Err(CliError::Usage("--preset custom needs --p-data and --p-gen".into()));
                };
                world.symbol_probs_data = parse_list("p-data", d)?;
                world.symbol_probs_gen = parse_list("p-gen", g)?;
            }
        }
        if let Some(x) = self.separation {
            world.loss_separation = x;
        }
        if let Some(x) = self.noise {
            world.loss_noise = x;
        }
        if let Some(x) = self.mia_weight {
            world.mia_weight = x;
        }
        if let Some(x) = self.m {
            world.m = x;
        }
        world.validate()?;
        Ok(world)
    }
}

fn ensure_finite(what: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(CliError::Numerical(format!("{what} came out as {x}"))),
        None => Ok(()),
    }
}

fn emit(doc: &ResultDocument, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => document::write_result(doc, path)?,
        None => {
            let text = document::to_json(doc)?;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| document::DocumentError::Write { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn audit(args: &AuditArgs) -> Result<(), CliError> {
    let config = args.config();
    config.validate()?;
    let baseline = load_scores(&args.baseline, ScoreFormat::from_path(&args.baseline))?;
    let mia = load_scores(&args.mia, ScoreFormat::from_path(&args.mia))?;
    let result = measure(&baseline, &mia, &config)?;
    ensure_finite("audit bound", &[result.c_lb.value, result.c_plus_eps_lb.value, result.eps_tilde])?;
    if let Some(dir) = &args.plot {
        write_audit_plots(dir, &baseline, &mia, &config).map_err(CliError::Plot)?;
    }
    let doc = ResultDocument::new(
        None,
        Payload::Audit {
            inputs: AuditInputs { baseline: display(&args.baseline), mia: display(&args.mia), records: baseline.len() },
            audit_result: result,
        },
    );
    emit(&doc, args.out.as_deref())
}

fn o1(args: &O1Args) -> Result<(), CliError> {
    let records = load_scores(&args.scores, ScoreFormat::from_path(&args.scores))?;
    let result = o1_measure(&records, args.grid, args.beta)?;
    ensure_finite("o1 epsilon", &[result.epsilon, result.per_test_level])?;
    let doc = ResultDocument::new(
        None,
        Payload::O1 {
            inputs: O1Inputs { scores: display(&args.scores), records: records.len(), grid: args.grid, beta: args.beta },
            o1_result: result,
        },
    );
    emit(&doc, args.out.as_deref())
}

fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let world = args.world()?;
    let config = AuditConfig { beta: args.beta, gamma: args.gamma, ..AuditConfig::default() };
    config.validate()?;
    let separations = args.sweep.as_deref().map(|s| parse_list("sweep", s)).transpose()?;
    let validity = validity_trials(&world, args.trials, &config, args.seed)?;
    let sweep = separations.map(|seps| leakage_sweep(&world, &seps, args.sweep_trials, &config, args.seed)).transpose()?;
    ensure_finite("validity rate", &[validity.rate])?;
    if let Some(points) = &sweep {
        ensure_finite("sweep median", &points.iter().map(|p| p.median_eps_tilde).collect::<Vec<_>>())?;
    }
    let report = SimulationReport {
        preset: match args.preset {
            Preset::Default => "default".into(),
            Preset::Custom => "custom".into(),
        },
        true_c: true_c(&world)?,
        validity_cap: soundness_cap(config.beta, args.trials),
        sweep_trials_per_level: sweep.as_ref().map(|_| args.sweep_trials),
        world,
        config,
        validity,
        sweep,
    };
    emit(&ResultDocument::new(Some(args.seed), Payload::Simulation { report }), Some(&args.out))
}

fn validate_bounds(args: &ValidateArgs) -> Result<(), CliError> {
    let report = run_validation(args.trials, args.seed)?;
    let passed = report.passed;
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let soundness_passed = report.soundness_passed;
    emit(&ResultDocument::new(Some(args.seed), Payload::ValidateBounds { report }), Some(&args.out))?;
    if passed {
        return Ok(());
    }
    let mut what = failed;
    if !soundness_passed {
        what.push("soundness".into());
    }
    Err(CliError::Numerical(format!("failed checks: {}", what.join(", "))))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Audit(a) => audit(a),
        Command::O1(a) => o1(a),
        Command::Simulate(a) => simulate(a),
        Command::ValidateBounds(a) => validate_bounds(a),
    }
}
