use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use hcomoment::exec::Exec;
use hcomoment::foundation::{parse_rational, Rational};
use hcomoment_cli::{run, Command, Format, RunOptions};

/// Exact obstruction checks and constructions for homotopy co-moment maps.
///
/// Exit codes: 0 success or existence, 1 I/O or usage error, 2 validation
/// failure, 3 obstructed, 4 inconclusive within the coefficient bound,
/// 5 verification failure.
#[derive(Parser, Debug)]
#[command(name = "hcomoment", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug)]
struct Flags {
    /// Largest polynomial coefficient degree tried by the solver.
    #[arg(long = "max-degree", value_name = "INT", global = true)]
    max_degree: Option<usize>,
    /// Sample point "x,y,..." for the nondegeneracy check and the point class.
    #[arg(long, value_name = "COORDS", global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// Write the artifact (co-moment, weak co-moment, multi-moment map) here.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Run the solver on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the Lie algebra, omega, nondegeneracy and the action.
    Validate { problem: PathBuf },
    /// Obstruction classes h_k, the point class c_p and existence verdicts.
    Obstruction { problem: PathBuf },
    /// Solve for a co-moment map.
    Comoment { problem: PathBuf },
    /// Check a co-moment file against the problem.
    Verify { problem: PathBuf, comoment: PathBuf },
    /// Weak co-moment map and the covariant obstruction.
    Weak { problem: PathBuf },
    /// Co-moment map from the invariant potential eta.
    Exact { problem: PathBuf },
    /// Multi-moment map on P_g.
    Multimoment { problem: PathBuf },
}

fn parse_point(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|c| parse_rational(c).with_context(|| format!("--point: bad coordinate {c:?}")))
        .collect()
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn main_inner(cli: Cli) -> anyhow::Result<i32> {
    let (problem_path, command) = match cli.command {
        Cmd::Validate { problem } => (problem, Command::Validate),
        Cmd::Obstruction { problem } => (problem, Command::Obstruction),
        Cmd::Comoment { problem } => (problem, Command::Comoment),
        Cmd::Verify { problem, comoment } => (
            problem,
            Command::Verify {
                artifact: read(&comoment)?,
            },
        ),
        Cmd::Weak { problem } => (problem, Command::Weak),
        Cmd::Exact { problem } => (problem, Command::Exact),
        Cmd::Multimoment { problem } => (problem, Command::Multimoment),
    };
    let text = read(&problem_path)?;
    let point = cli.flags.point.as_deref().map(parse_point).transpose()?;
    let opts = RunOptions {
        max_degree: cli.flags.max_degree,
        point,
        exec: if cli.flags.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    };
    let start = Instant::now();
    let mut out = run(&command, &text, &opts);
    if cli.flags.timing {
        out.report.set_timing(start.elapsed().as_secs_f64() * 1e3);
    }
    if let Some(path) = &cli.flags.out {
        match &out.artifact {
            Some(a) => std::fs::write(path, a).with_context(|| format!("cannot write {}", path.display()))?,
            None if out.report.exit_code() == 0 => bail!("{} produces no artifact for --out", command.name()),
            None => {}
        }
    }
    print!("{}", out.report.render(cli.flags.format));
    Ok(out.report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
