use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use scdas::baselines::OracleConfig;
use scdas::experiment::{
    emit_csv, emit_plotdata, preset, run_experiment, solve, ExperimentSpec, PRESET_NAMES,
};
use scdas::instance::{all_fixtures, fixture, generate_instance, GenConfig, DEFAULT_MAX_ATTEMPTS};
use scdas::io::{read_instance, write_instance, IdBase};
use scdas::sim::{simulate_approx, simulate_ldhd};
use scdas::{Algorithm, Instance, NodeId};

#[derive(Parser)]
#[command(
    name = "scdas",
    version,
    about = "Virtual backbones in directed disk graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random strongly connected instance.
    Generate(GenerateArgs),
    /// Run one algorithm on an instance and print its solution.
    Solve(SolveArgs),
    /// Check whether a node set is a valid backbone of an instance.
    Verify(VerifyArgs),
    /// Run a distributed execution and print the solution and round trace.
    Simulate(SimulateArgs),
    /// Run an experiment and write CSV, series and SVG files.
    Experiment(ExperimentArgs),
    /// List the built-in instances.
    Fixtures,
}

#[derive(Args)]
struct InputArgs {
    /// Instance file.
    #[arg(long = "in", value_name = "FILE", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Built-in instance instead of a file.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
    /// Node ids in the file start at 1.
    #[arg(long)]
    one_based: bool,
}

impl InputArgs {
    fn base(&self) -> IdBase {
        if self.one_based {
            IdBase::OneBased
        } else {
            IdBase::Zero
        }
    }

    fn load(&self) -> Result<Instance> {
        match (&self.input, &self.fixture) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let g = read_instance(&text, self.base())
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(Instance::Disk(g))
            }
            (None, Some(name)) => {
                fixture(name).with_context(|| format!("unknown fixture `{name}`"))
            }
            (None, None) => bail!("one of --in or --fixture is required"),
        }
    }

    /// Shifts ids for printing when the input is one-based.
    fn shown(&self, id: NodeId) -> NodeId {
        id + usize::from(self.one_based)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Side of the square area.
    #[arg(long, default_value_t = 1000.0)]
    side: f64,
    #[arg(long, default_value_t = 200.0)]
    r_min: f64,
    #[arg(long, default_value_t = 600.0)]
    r_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    /// Write here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long)]
    one_based: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Opt,
    Ldhd,
    Dast,
    Gcma,
    Approx,
    CdsDgb,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Opt => Algorithm::Opt,
            AlgArg::Ldhd => Algorithm::Ldhd,
            AlgArg::Dast => Algorithm::Dast,
            AlgArg::Gcma => Algorithm::Gcma,
            AlgArg::Approx => Algorithm::Approx,
            AlgArg::CdsDgb => Algorithm::CdsDgb,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: AlgArg,
    #[command(flatten)]
    input: InputArgs,
    /// Seed of the randomized MIS (approx, cds-dgb); sequential MIS if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest set size the oracle searches.
    #[arg(long)]
    size_cap: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Node ids separated by commas or spaces.
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimAlg {
    Approx,
    Ldhd,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    alg: SimAlg,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    /// key=value experiment description.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed; falls back to SCDAS_SEED, then to the preset or file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    oracle_cap: Option<usize>,
}

fn main() -> ExitCode {
    let mut out = String::new();
    let result = run(Cli::parse(), &mut out);
    // a closed pipe downstream is not an error worth reporting
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs a command, collecting its standard output in `out`.
fn run(cli: Cli, out: &mut String) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Solve(a) => solve_cmd(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Fixtures => {
            for (name, inst) in all_fixtures() {
                let g = inst.digraph();
                let kind = if inst.disk().is_some() {
                    "disk"
                } else {
                    "abstract"
                };
                writeln!(out, "{name} n={} arcs={} {kind}", g.n(), g.arc_count())?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn generate(a: GenerateArgs, out: &mut String) -> Result<ExitCode> {
    let cfg = GenConfig {
        max_attempts: a.max_attempts,
        ..GenConfig::new(a.n, a.side, a.r_min, a.r_max, a.seed)
    };
    let generated = generate_instance(&cfg)?;
    let base = if a.one_based {
        IdBase::OneBased
    } else {
        IdBase::Zero
    };
    let text = write_instance(&generated.graph, base);
    match a.out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "wrote {} (attempts {}, discarded {})",
                path.display(),
                generated.attempts,
                generated.discards()
            );
        }
        None => write!(out, "{text}")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn shift_text(text: &str, input: &InputArgs) -> String {
    if !input.one_based {
        return text.to_string();
    }
    // member and witness lines hold ids only
    text.lines()
        .map(|line| {
            let shifted = |rest: &str| {
                rest.split(' ')
                    .map(|t| match t.parse::<NodeId>() {
                        Ok(id) => input.shown(id).to_string(),
                        Err(_) => t.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            if let Some(rest) = line.strip_prefix("members") {
                format!("members{}", shifted(rest))
            } else if line.contains(" : ") || line.ends_with(" :") {
                shifted(line)
            } else {
                line.to_string()
            }
        })
        .map(|l| l + "\n")
        .collect()
}

fn solve_cmd(a: SolveArgs, out: &mut String) -> Result<ExitCode> {
    let inst = a.input.load()?;
    let g = inst.digraph();
    let oracle = OracleConfig {
        size_cap: a.size_cap,
        time_budget: None,
    };
    let sol = solve(g, a.alg.into(), a.seed, &oracle)?;
    write!(out, "{}", shift_text(&sol.to_text(), &a.input))?;
    let verdict = sol.validate(g)?;
    writeln!(out, "verdict {verdict}")?;
    Ok(if verdict.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn parse_set(text: &str, input: &InputArgs) -> Result<Vec<NodeId>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let id: NodeId = t.parse().with_context(|| format!("bad node id `{t}`"))?;
            if input.one_based {
                id.checked_sub(1).context("node id 0 in a one-based set")
            } else {
                Ok(id)
            }
        })
        .collect()
}

fn verify(a: VerifyArgs, out: &mut String) -> Result<ExitCode> {
    let inst = a.input.load()?;
    let set = parse_set(&a.set, &a.input)?;
    let verdict = inst.digraph().validate_scdas(&set)?;
    writeln!(out, "{verdict}")?;
    Ok(if verdict.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn simulate(a: SimulateArgs, out: &mut String) -> Result<ExitCode> {
    let inst = a.input.load()?;
    let (solution, trace) = match a.alg {
        SimAlg::Approx => {
            let sim = simulate_approx(&inst, a.seed)?;
            (sim.solution, sim.trace)
        }
        SimAlg::Ldhd => {
            let sim = simulate_ldhd(&inst)?;
            (sim.solution, sim.trace)
        }
    };
    write!(out, "{}", shift_text(&solution.to_text(), &a.input))?;
    writeln!(out, "rounds {}", trace.rounds())?;
    writeln!(out, "messages {}", trace.total_messages())?;
    writeln!(out, "max_message_bits {}", trace.max_message_bits)?;
    if let Some(p) = trace.phases {
        writeln!(
            out,
            "phases mis_end={} connect_end={} inform_end={}",
            p.mis_end, p.connect_end, p.inform_end
        )?;
    }
    write!(out, "{}", trace.dump())?;
    Ok(ExitCode::SUCCESS)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn experiment(a: ExperimentArgs, out: &mut String) -> Result<ExitCode> {
    let mut spec = match (&a.preset, &a.spec) {
        (Some(name), _) => {
            preset(name).with_context(|| format!("presets: {}", PRESET_NAMES.join(", ")))?
        }
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentSpec::parse(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("one of --preset or --spec is required"),
    };
    if let Some(reps) = a.reps {
        spec.reps = reps;
    }
    let env_seed = match std::env::var("SCDAS_SEED") {
        Ok(v) => Some(v.trim().parse::<u64>().context("SCDAS_SEED is not a u64")?),
        Err(_) => None,
    };
    if let Some(seed) = a.seed.or(env_seed) {
        spec.base_seed = seed;
    }
    if let Some(cap) = a.oracle_cap {
        spec = spec.with_oracle_cap(cap);
    }
    let result = run_experiment(&spec)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let csv = emit_csv(&result.rows);
    write_file(&a.out, &format!("{}.csv", spec.name), &csv)?;
    for f in emit_plotdata(&result.rows) {
        write_file(&a.out, &f.name, &f.contents)?;
    }
    let mut meta = spec.metadata();
    for fail in &result.failures {
        meta.push_str(&format!(
            "failure param={} seed={} {}\n",
            fail.param, fail.seed, fail.error
        ));
    }
    write_file(&a.out, &format!("{}.meta", spec.name), &meta)?;
    write!(out, "{csv}")?;
    for fail in &result.failures {
        eprintln!(
            "param {} skipped at seed {}: {}",
            fail.param, fail.seed, fail.error
        );
    }
    Ok(ExitCode::SUCCESS)
}
