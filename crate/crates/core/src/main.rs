use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use conenorm::{bundled, parse_input, run, ConeInput, Error, Options, RunReport, TaskSet};

#[derive(Parser)]
#[command(
    name = "conenorm",
    version,
    about = "Hilbert bases, triangulations and Hilbert series of rational cones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the requested data of the cone described in an input file.
    Run {
        /// Input file, `-` for standard input.
        input: PathBuf,
        #[command(flatten)]
        opts: RunArgs,
    },
    /// Print a bundled example in the input format.
    Example {
        #[arg(value_enum)]
        family: Family,
        /// Size parameter.
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Cross polytope of dimension n.
    Cross,
    /// n x n magic squares.
    Magic,
    /// Cone over the n-th roots of unity.
    Cyclo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Support hyperplanes and extreme rays.
    #[arg(long)]
    supp: bool,
    /// Triangulation size and determinant sum.
    #[arg(long)]
    tri: bool,
    /// Multiplicity.
    #[arg(long)]
    volume: bool,
    /// Hilbert series and quasipolynomial.
    #[arg(long)]
    series: bool,
    /// Hilbert basis.
    #[arg(long)]
    basis: bool,
    /// Degree 1 elements.
    #[arg(long)]
    deg1: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Skip pyramids of height 1 (Hilbert basis and degree 1 elements only).
    #[arg(long)]
    partial: bool,
    /// Start recursive pyramids when a step would pair more hyperplanes.
    #[arg(long, value_name = "N")]
    threshold_supp: Option<usize>,
    /// Start stored pyramids when a step would create more simplices.
    #[arg(long, value_name = "N")]
    threshold_tri: Option<usize>,
    /// Number of simplices collected before an evaluation round.
    #[arg(long, value_name = "N")]
    buffer_size: Option<usize>,
    /// Write the simplices of the triangulation to a file.
    #[arg(long, value_name = "FILE")]
    keep_triangulation: Option<PathBuf>,
    /// Recompute inherited determinants and cross-check all series forms.
    #[arg(long)]
    verify: bool,
    /// Largest numerator degree of the standard series form.
    #[arg(long, value_name = "N")]
    max_standard_degree: Option<usize>,
    /// Largest quasipolynomial period.
    #[arg(long, value_name = "N")]
    max_period: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl RunArgs {
    fn options(&self) -> Options {
        let picked = TaskSet {
            supp: self.supp,
            tri: self.tri || self.keep_triangulation.is_some(),
            volume: self.volume,
            series: self.series,
            basis: self.basis,
            deg1: self.deg1,
        };
        let mut o = Options::with_tasks(if picked.is_empty() { TaskSet::default() } else { picked });
        o.threads = self.threads;
        o.strategy.partial = self.partial;
        if let Some(n) = self.threshold_supp {
            o.strategy.supp_bound = n;
        }
        if let Some(n) = self.threshold_tri {
            o.strategy.tri_bound = n;
        }
        if let Some(n) = self.buffer_size {
            o.strategy.buffer_size = n;
        }
        if let Some(n) = self.max_standard_degree {
            o.limits.max_standard_degree = n;
        }
        if let Some(n) = self.max_period {
            o.limits.max_period = n;
        }
        o.keep_triangulation = self.keep_triangulation.is_some();
        o.verify = self.verify;
        o
    }
}

fn read_input(path: &PathBuf) -> Result<ConeInput, Error> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path)?
    };
    parse_input(&text)
}

fn write_triangulation(path: &PathBuf, report: &mut RunReport) -> Result<(), Error> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    if let Some(t) = report.triangulation.as_mut() {
        for s in t.simplices.take().unwrap_or_default() {
            let key: Vec<String> = s.key.iter().map(ToString::to_string).collect();
            writeln!(out, "{} {}", key.join(" "), s.det)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(s: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Example { family, n } => {
            let input = match family {
                Family::Cross => bundled::cross(n),
                Family::Magic => bundled::magic(n),
                Family::Cyclo => bundled::cyclo(n),
            };
            emit(&input.to_text())?;
        }
        Command::Run { input, opts } => {
            let cone = read_input(&input)?;
            let mut report = run(&cone, &opts.options())?;
            if let Some(path) = &opts.keep_triangulation {
                write_triangulation(path, &mut report)?;
            }
            match opts.format {
                Format::Text => emit(&report.to_text())?,
                Format::Json => emit(&(report.to_json() + "\n"))?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("conenorm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
