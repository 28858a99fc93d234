//! `limithodge`: batch front end reading monodromy data, model experiments
//! and solver inputs from JSON and writing one report per invocation.

mod dbar_cmd;
mod error;
mod exact;
mod input;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use limithodge_core::growth::Region;
use limithodge_core::l2complex::StalkMode;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dbar_cmd::OracleDomain;
use crate::error::CliError;
use crate::input::InputFile;

#[derive(Parser, Debug)]
#[command(name = "limithodge", version, about = "Asymptotic Hodge theory of two-variable degenerations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Sector for growth and L2 verdicts; each command has its own default.
    #[arg(long, global = true, value_enum)]
    region: Option<RegionChoice>,
    /// Index at which weight filtrations are centered.
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    center: i64,
    /// Polynomial degree of the truncated global model.
    #[arg(long, global = true, default_value_t = 3)]
    truncation_degree: usize,
    /// Relative residual accepted by dbar-solve.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    /// Seed for randomized samples and change of basis.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads used across input files.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionChoice {
    DEps,
    DEpsPrime,
    Global,
}

impl RegionChoice {
    pub fn name(self) -> &'static str {
        match self {
            RegionChoice::DEps => "d-eps",
            RegionChoice::DEpsPrime => "d-eps-prime",
            RegionChoice::Global => "global",
        }
    }

    pub fn regions(self) -> Vec<Region> {
        match self {
            RegionChoice::DEps => vec![Region::DEps],
            RegionChoice::DEpsPrime => vec![Region::DEpsPrime],
            RegionChoice::Global => vec![Region::DEps, Region::DEpsPrime],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeChoice {
    LocalSystem,
    HodgeBundle,
}

impl ModeChoice {
    fn mode(self) -> StalkMode {
        match self {
            ModeChoice::LocalSystem => StalkMode::LocalSystem,
            ModeChoice::HodgeBundle => StalkMode::HodgeBundle,
        }
    }
}

#[derive(Args, Debug)]
struct Inputs {
    /// Input JSON files; relative names missing from the working directory
    /// are looked up under $LIMITHODGE_CORPUS.
    #[arg(required = true)]
    files: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight filtrations of N1, N2 and N1+N2 with graded dimensions.
    WeightFiltration(Inputs),
    /// Compares W(l1 N1 + l2 N2) at random positive rational points of the cone.
    ConeCheck {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Splits a model experiment into irreducible factors.
    Decompose(Inputs),
    /// Alpha bases of the symmetric factors with their weights.
    AlphaBasis(Inputs),
    /// Checks that (W(N1+N2)[-k], F) is a (polarized) mixed Hodge structure.
    MhsCheck(Inputs),
    /// Hodge norm growth classes of the alpha basis.
    NormClass(Inputs),
    /// Growth of the Higgs field images of the alpha basis.
    ThetaBound(Inputs),
    /// Square integrability of every generator and form component.
    L2Classify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = ModeChoice::LocalSystem)]
        mode: ModeChoice,
    },
    /// Cohomology of the stalk complex and of the truncated global model.
    StalkCohomology {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = ModeChoice::LocalSystem)]
        mode: ModeChoice,
    },
    /// Symbolic L2 verdicts against a numerical integrability test.
    OracleCompare {
        #[arg(long, value_enum, default_value_t = OracleDomain::Sector)]
        domain: OracleDomain,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Lower bound of -log|t| on the test domain.
        #[arg(long, default_value_t = 10.0)]
        start: f64,
    },
    /// Checks that N1 and N2 define L2 classes in the End complex.
    EndCheck(Inputs),
    /// Solves the weighted dbar-problem and measures the bound constant.
    DbarSolve(Inputs),
    /// Whether the classical L2 existence theorem covers (p, q, k, l).
    DbarRegion {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        l: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WeightFiltration(_) => "weight-filtration",
            Command::ConeCheck { .. } => "cone-check",
            Command::Decompose(_) => "decompose",
            Command::AlphaBasis(_) => "alpha-basis",
            Command::MhsCheck(_) => "mhs-check",
            Command::NormClass(_) => "norm-class",
            Command::ThetaBound(_) => "theta-bound",
            Command::L2Classify { .. } => "l2-classify",
            Command::StalkCohomology { .. } => "stalk-cohomology",
            Command::OracleCompare { .. } => "oracle-compare",
            Command::EndCheck(_) => "end-check",
            Command::DbarSolve(_) => "dbar-solve",
            Command::DbarRegion { .. } => "dbar-region",
        }
    }

    fn files(&self) -> &[String] {
        match self {
            Command::WeightFiltration(i)
            | Command::Decompose(i)
            | Command::AlphaBasis(i)
            | Command::MhsCheck(i)
            | Command::NormClass(i)
            | Command::ThetaBound(i)
            | Command::EndCheck(i)
            | Command::DbarSolve(i)
            | Command::ConeCheck { inputs: i, .. }
            | Command::L2Classify { inputs: i, .. }
            | Command::StalkCohomology { inputs: i, .. } => &i.files,
            Command::OracleCompare { .. } | Command::DbarRegion { .. } => &[],
        }
    }

    /// Command-specific arguments that affect the results.
    fn arguments(&self) -> Value {
        match self {
            Command::ConeCheck { samples, .. } => json!({ "samples": samples }),
            Command::L2Classify { mode, .. } | Command::StalkCohomology { mode, .. } => json!({ "mode": format!("{mode:?}") }),
            Command::OracleCompare { domain, eps, start } => json!({ "domain": format!("{domain:?}"), "eps": eps, "start": start }),
            Command::DbarRegion { p, q, k, l } => json!({ "p": p, "q": q, "k": k, "l": l }),
            _ => json!({}),
        }
    }
}

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct Options {
    pub region: Option<RegionChoice>,
    pub center: i64,
    pub truncation_degree: usize,
    pub tolerance: f64,
    pub seed: u64,
}

/// Results of one command on one input.
#[derive(Clone, Debug, Default)]
pub struct CommandOutput {
    pub results: Value,
    pub warnings: Vec<String>,
}

impl CommandOutput {
    pub fn new(results: Value) -> Self {
        CommandOutput { results, warnings: Vec::new() }
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }
}

fn run_file(command: &Command, opts: &Options, input: &InputFile) -> Result<CommandOutput, CliError> {
    let v = input.json()?;
    match command {
        Command::WeightFiltration(_) => exact::weight_filtration(opts, &v),
        Command::ConeCheck { samples, .. } => exact::cone_check(opts, *samples, &v),
        Command::Decompose(_) => exact::decompose(opts, &v),
        Command::AlphaBasis(_) => exact::alpha(opts, &v),
        Command::MhsCheck(_) => exact::mhs(opts, &v),
        Command::NormClass(_) => exact::norm_class(opts, &v),
        Command::ThetaBound(_) => exact::theta_bound(opts, &v),
        Command::L2Classify { mode, .. } => exact::l2_classify(opts, mode.mode(), &v),
        Command::StalkCohomology { mode, .. } => exact::stalk_cohomology(opts, mode.mode(), &v),
        Command::EndCheck(_) => exact::end_check(opts, &v),
        Command::DbarSolve(_) => dbar_cmd::dbar_solve(opts, &v),
        Command::OracleCompare { .. } | Command::DbarRegion { .. } => Err(CliError::internal("command takes no input files")),
    }
    .map_err(|e| e.with_input(&input.label))
}

fn options_json(cli: &Cli) -> Value {
    json!({
        "region": cli.region.map(RegionChoice::name),
        "center": cli.center,
        "truncation_degree": cli.truncation_degree,
        "tolerance": cli.tolerance,
        "seed": cli.seed,
        "arguments": cli.command.arguments(),
    })
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let opts = Options {
        region: cli.region,
        center: cli.center,
        truncation_degree: cli.truncation_degree,
        tolerance: cli.tolerance,
        seed: cli.seed,
    };
    if cli.jobs == 0 {
        return Err(CliError::invalid("--jobs must be at least 1"));
    }
    let inputs = input::read_inputs(cli.command.files())?;
    let digest = input::digest(cli.command.name(), &options_json(cli), &inputs);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build().map_err(|e| CliError::internal(e.to_string()))?;
    let (results, warnings) = match &cli.command {
        Command::OracleCompare { domain, eps, start } => {
            let out = pool.install(|| dbar_cmd::oracle_compare(&opts, *domain, *eps, *start))?;
            (out.results, out.warnings)
        }
        Command::DbarRegion { p, q, k, l } => {
            let out = dbar_cmd::dbar_region(*p, *q, *k, *l)?;
            (out.results, out.warnings)
        }
        command => {
            let outputs: Vec<Result<CommandOutput, CliError>> =
                pool.install(|| inputs.par_iter().map(|input| run_file(command, &opts, input)).collect());
            let outputs = outputs.into_iter().collect::<Result<Vec<_>, _>>()?;
            if let [single] = outputs.as_slice() {
                (single.results.clone(), single.warnings.clone())
            } else {
                let mut warnings = Vec::new();
                let mut results = Vec::new();
                for (input, out) in inputs.iter().zip(outputs) {
                    warnings.extend(out.warnings.iter().map(|w| format!("{}: {w}", input.label)));
                    results.push(json!({ "input": input.label, "result": out.results }));
                }
                (Value::Array(results), warnings)
            }
        }
    };
    Ok(json!({
        "command": cli.command.name(),
        "inputs_digest": digest,
        "results": results,
        "warnings": warnings,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")),
                Format::Table => render::table(&report),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(5);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.kind.code() as u8)
        }
    }
}
