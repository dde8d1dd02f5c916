use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use prim_cobordism::cli::{run, Status, Subcommand};
use prim_cobordism::config::{ConfigFile, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Folds (curves) or fold curves and cusps (surfaces).
    Strata,
    /// Multiple points of the lift and the covering check.
    Multipoints,
    /// Mixed-set counts and their parities.
    ChainVerify,
    /// Arcs joining consecutive mixed sets.
    TraceCobordism,
    /// Exact checks on the local normal form.
    NormalForm,
    /// Random trigonometric curves.
    Sweep,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Strata => Subcommand::Strata,
            Command::Multipoints => Subcommand::Multipoints,
            Command::ChainVerify => Subcommand::ChainVerify,
            Command::TraceCobordism => Subcommand::TraceCobordism,
            Command::NormalForm => Subcommand::NormalForm,
            Command::Sweep => Subcommand::Sweep,
        }
    }
}

/// Multiple points of immersion lifts against Morin singularities.
///
/// Exit status: 0 all verdicts pass, 1 a verdict failed, 2 usage or config
/// error, 3 inconclusive.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Config file (key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    /// Directory for the report and plots; the report goes to stdout
    /// when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    svg: bool,
    /// Override a tolerance, e.g. `--tol-override gap_margin=1e-4`.
    #[arg(long = "tol-override", value_name = "KEY=VAL")]
    tol_override: Vec<String>,
}

fn load(args: &Args) -> Result<RunConfig, String> {
    let mut file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            ConfigFile::parse(&text).map_err(|e| e.to_string())?
        }
        None => ConfigFile::default(),
    };
    for item in &args.tol_override {
        let (key, value) = item.split_once('=').ok_or_else(|| format!("--tol-override expects KEY=VAL, got `{item}`"))?;
        file.set(&format!("tol.{}", key.trim()), value).map_err(|e| e.to_string())?;
    }
    let mut cfg = RunConfig::from_file(&file).map_err(|e| e.to_string())?;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.count.is_some() {
        cfg.count = args.count;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    cfg.svg |= args.svg;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage.code() as u8 } else { 0 });
        }
    };
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(Status::Usage.code() as u8);
        }
    };
    let sub = Subcommand::from(args.command);
    let output = run(sub, &cfg);
    if let Some(msg) = &output.message {
        eprintln!("error: {msg}");
    }
    if let Some(report) = &output.report {
        let text = report.to_json();
        match &cfg.out {
            Some(dir) => {
                let written = std::fs::create_dir_all(dir).and_then(|_| {
                    std::fs::write(dir.join(format!("{}.json", sub.name())), &text)?;
                    for (stem, svg) in &output.plots {
                        std::fs::write(dir.join(format!("{stem}.svg")), svg)?;
                    }
                    Ok(())
                });
                if let Err(e) = written {
                    eprintln!("error: {}: {e}", dir.display());
                    return ExitCode::from(Status::Usage.code() as u8);
                }
            }
            None => {
                print!("{text}");
                if !output.plots.is_empty() {
                    eprintln!("note: plots are only written with --out");
                }
            }
        }
        eprintln!("{}: {:?}", sub.name(), output.status);
    }
    ExitCode::from(output.status.code() as u8)
}
