use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rotlab::fixtures::{paper_g, paper_h, paper_seed, theorem_main};
use rotlab::obstruction::{gamma_map, is_f_obstruction, ObstructionInput};
use rotlab::plmap::{family_boshernitzan, family_fqr, MapFile};
use rotlab::renorm::{renorm_trace, rotation_number_estimate, rotation_number_exact, Budgets, TraceOutcome};
use rotlab::scan::{scan, write_csv, ScanConfig};
use rotlab::{PLCircleMap, Rational};

#[derive(Parser)]
#[command(name = "rotlab", version, about = "Exact rotation numbers of rational PL circle homeomorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rotation number.
    Rot(RotArgs),
    /// Renormalization trace, stage by stage.
    Trace(RotArgs),
    /// Orbit-average estimate with its error bound.
    Estimate {
        #[command(flatten)]
        source: MapSource,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the pieces of a map.
    Family {
        #[command(flatten)]
        source: MapSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweeps the f_{q,r} family over a grid of reduced fractions.
    Scan(ScanArgs),
    /// Builds gamma from an interval-map pair and classifies it.
    Obstruct(ObstructArgs),
}

#[derive(Args)]
struct MapSource {
    /// JSON map file of kind "circle".
    #[arg(long, conflicts_with_all = ["family", "fixture"])]
    map: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "fixture")]
    family: Option<Family>,
    #[arg(long)]
    q: Option<Rational>,
    #[arg(long)]
    r: Option<Rational>,
    #[arg(long)]
    a: Option<Rational>,
    #[arg(long)]
    b: Option<Rational>,
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fqr,
    Bosh,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    TheoremMain,
    PaperGh,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budgets::default().max_stages)]
    max_stages: usize,
    #[arg(long, default_value_t = Budgets::default().orbit_budget)]
    orbit_budget: u64,
    #[arg(long, default_value_t = Budgets::default().max_bits)]
    max_bits: u64,
    /// Orbit length for the estimate reported when the result is undetermined.
    #[arg(long, default_value_t = Budgets::default().estimate_iters)]
    iters: u64,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets {
            max_stages: self.max_stages,
            orbit_budget: self.orbit_budget,
            max_bits: self.max_bits,
            estimate_iters: self.iters.max(1),
        }
    }
}

#[derive(Args)]
struct RotArgs {
    #[command(flatten)]
    source: MapSource,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 9)]
    q_max_den: u64,
    #[arg(long, default_value_t = 60)]
    r_max_den: u64,
    /// Sweep only this q (repeatable).
    #[arg(long = "q")]
    q_only: Vec<Rational>,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, env = "ROTLAB_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Fill the elapsed_ms column (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ObstructArgs {
    /// Interval map file for g.
    #[arg(long, requires_all = ["h", "s"], conflicts_with = "fixture")]
    g: Option<PathBuf>,
    #[arg(long)]
    h: Option<PathBuf>,
    #[arg(long)]
    s: Option<Rational>,
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(anyhow::Error),
    Other(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.into())
    }
}

fn input<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(e.into()))
}

fn missing(flag: &str, why: &str) -> Failure {
    Failure::Input(anyhow::anyhow!("missing --{flag}: {why}"))
}

fn read_map(path: &Path) -> Result<MapFile, Failure> {
    let text = input(fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())))?;
    input(MapFile::from_json_str(&text).with_context(|| format!("invalid map file {}", path.display())))
}

fn paper_input() -> ObstructionInput {
    ObstructionInput::new(paper_g(), paper_h(), paper_seed()).expect("built-in pair is valid")
}

fn load_map(src: &MapSource, budgets: &Budgets) -> Result<PLCircleMap, Failure> {
    if let Some(path) = &src.map {
        return input(read_map(path)?.into_circle());
    }
    match (src.family, src.fixture) {
        (Some(Family::Fqr), _) => {
            let q = src.q.as_ref().ok_or_else(|| missing("q", "family fqr needs --q"))?;
            let r = src.r.clone().unwrap_or_else(Rational::zero);
            input(family_fqr(q, &r))
        }
        (Some(Family::Bosh), _) => {
            let a = src.a.as_ref().ok_or_else(|| missing("a", "family bosh needs --a"))?;
            let b = src.b.as_ref().ok_or_else(|| missing("b", "family bosh needs --b"))?;
            Ok(input(family_boshernitzan(a, b))?.map)
        }
        (None, Some(Fixture::TheoremMain)) => Ok(theorem_main()),
        (None, Some(Fixture::PaperGh)) => Ok(gamma_map(&paper_input(), budgets.orbit_budget)?.rescaled),
        (None, None) => Err(missing("map", "give one of --map, --family or --fixture")),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<(), Failure> {
    emit(out, &format!("{v}\n"))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Rot(args) => {
            let budgets = args.budgets.budgets();
            let f = load_map(&args.source, &budgets)?;
            let res = rotation_number_exact(&f, &budgets)?;
            emit_json(args.out.as_deref(), &res.to_json_value())?;
            Ok(if res.rotation.is_undetermined() { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Trace(args) => {
            let budgets = args.budgets.budgets();
            let f = load_map(&args.source, &budgets)?;
            let trace = renorm_trace(&f, &budgets)?;
            emit_json(args.out.as_deref(), &trace.to_json_value())?;
            let undetermined = matches!(trace.outcome, TraceOutcome::BudgetExceeded { .. });
            Ok(if undetermined { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
        Command::Estimate { source, iters, out } => {
            if iters == 0 {
                return Err(Failure::Input(anyhow::anyhow!("--iters must be at least 1")));
            }
            let f = load_map(&source, &Budgets::default())?;
            let (estimate, err) = rotation_number_estimate(&f, iters);
            let v = json!({
                "estimate": estimate,
                "error_bound": err,
                "approx": estimate.to_f64(),
                "iters": iters,
            });
            emit_json(out.as_deref(), &v)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Family { source, out } => {
            let f = load_map(&source, &Budgets::default())?;
            emit_json(out.as_deref(), &f.to_json_value())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => {
            if args.jobs == 0 {
                return Err(Failure::Input(anyhow::anyhow!("--jobs must be at least 1")));
            }
            let config = ScanConfig {
                q_max_den: args.q_max_den,
                r_max_den: args.r_max_den,
                q_only: args.q_only,
                budgets: args.budgets.budgets(),
                jobs: args.jobs,
                timings: args.timings,
            };
            let (records, summaries) = scan(&config)?;
            match args.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv(&records, &mut buf)?;
                    emit(args.out.as_deref(), &String::from_utf8(buf)?)?;
                }
                Format::Json => {
                    emit_json(args.out.as_deref(), &json!({"records": records, "summary": summaries}))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Obstruct(args) => {
            let obstruction = match (&args.g, &args.h, &args.s, args.fixture) {
                (Some(g), Some(h), Some(s), _) => {
                    let g = input(read_map(g)?.into_interval())?;
                    let h = input(read_map(h)?.into_interval())?;
                    input(ObstructionInput::new(g, h, s.clone()))?
                }
                (None, _, _, Some(Fixture::PaperGh)) => paper_input(),
                (None, _, _, Some(Fixture::TheoremMain)) => {
                    return Err(Failure::Input(anyhow::anyhow!("--fixture for obstruct must be paper-gh")));
                }
                _ => return Err(missing("g", "give --g, --h and --s, or --fixture paper-gh")),
            };
            let (verdict, gamma) = is_f_obstruction(&obstruction, &args.budgets.budgets())?;
            let mut v = verdict.to_json_value();
            v["chain"] = json!(obstruction.chain());
            v["gamma"] = gamma.rescaled.to_json_value();
            v["return_times"] = json!(gamma.return_times);
            emit_json(args.out.as_deref(), &v)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
