//! The `hcexp` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cluster::{coefficient, count_covers, hypercube, CoefficientOptions, LambdaMode};
use crate::compressed::{GenOptions, Prune};
use crate::error::{Error, Result};
use crate::oracle::{run_suite, Suite, SuiteConfig, SCHEMA};
use crate::polyring::{Rational, Var};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "HCEXP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hcexp", version, about = "Cluster-expansion coefficients of the hard-core model on K_{s,s}^t")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count compressed sets (per size) and covers at level j.
    Counts {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute the normalised coefficient L̂_j.
    Coefficients {
        #[command(flatten)]
        run: RunArgs,
        /// `symbolic` or a positive rational `p/q`.
        #[arg(long, default_value = "symbolic")]
        lambda: LambdaArg,
        #[arg(long, value_enum, default_value_t = Family::Kss)]
        family: Family,
        /// Comma-separated assignments such as `s=2,t=5`.
        #[arg(long)]
        specialize: Option<Specialization>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Memoise Tutte evaluations (more memory, less time).
        #[arg(long)]
        tutte_cache: bool,
    },
    /// Run an exhaustive verification suite on small graphs.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Graph token, e.g. `C4`, `Q3`, `K22^2`, `Kss:2,Kss:1`.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        lambda: Option<PositiveRational>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=7))]
    pub j: u32,
    /// Worker threads; defaults to $HCEXP_THREADS, then 1.
    #[arg(long, env = THREADS_ENV, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[arg(long, value_enum, default_value_t = Convention::Monotone)]
    pub convention: Convention,
    #[arg(long, value_enum, default_value_t = PruneArg::Deficit)]
    pub prune: PruneArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `K_{s,s}^t`, symbolic in `s`, `t` and `u = (1+λ)^s`.
    Kss,
    /// `s = 1`, `u = 1+λ`; `t` plays the dimension.
    Hypercube,
}

/// Which sets count as compressed. `monotone` also orders coordinates by
/// `|O_i| + |E_i|` and weights each set by its orbit; both give the same
/// coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Base,
    Monotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PruneArg {
    Off,
    ActivePrefix,
    Deficit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Isoperimetry,
    Sampler,
    Estimates,
}

/// A rational with positive value.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveRational(pub Rational);

impl FromStr for PositiveRational {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let q = Rational::from_str(s.trim()).map_err(|_| format!("{s:?} is not a rational p/q"))?;
        if q <= Rational::from_integer(0.into()) {
            return Err(format!("{s:?} must be positive"));
        }
        Ok(PositiveRational(q))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaArg(pub LambdaMode);

impl FromStr for LambdaArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "symbolic" {
            return Ok(LambdaArg(LambdaMode::Symbolic));
        }
        Ok(LambdaArg(LambdaMode::Value(PositiveRational::from_str(s)?.0)))
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Specialization(pub Vec<(Var, Rational)>);

impl FromStr for Specialization {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| format!("{part:?} is not var=value"))?;
            let var = Var::from_name(name.trim()).ok_or_else(|| format!("unknown variable {name:?}"))?;
            let value = Rational::from_str(value.trim()).map_err(|_| format!("{value:?} is not a rational"))?;
            out.push((var, value));
        }
        Ok(Specialization(out))
    }
}

impl RunArgs {
    fn options(&self) -> CoefficientOptions {
        let prune = match self.prune {
            PruneArg::Off => Prune::Off,
            PruneArg::ActivePrefix => Prune::ActivePrefix,
            PruneArg::Deficit => Prune::Deficit,
        };
        CoefficientOptions {
            generation: GenOptions { prune, monotone: self.convention == Convention::Monotone },
            tutte_cache: false,
            parallel: self.threads.unwrap_or(1) > 1,
        }
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let threads = self.threads.unwrap_or(1) as usize;
        if threads <= 1 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn counts(run: &RunArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let j = run.j as usize;
    let opts = run.options();
    let (stats, covers) = run.in_pool(|| count_covers(j, opts))??;
    let convention = match run.convention {
        Convention::Base => "base",
        Convention::Monotone => "monotone",
    };
    let text = match format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "j": j,
                "convention": convention,
                "compressed": stats.total(),
                "covers": covers,
                "by_size": &stats.emitted[1..],
                "calls": stats.calls,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Text | Format::Latex => {
            let mut s = format!("compressed: {}, covers: {covers}\n", stats.total());
            for (size, n) in stats.emitted.iter().enumerate().skip(1) {
                s += &format!("size {size}: {n}\n");
            }
            s += &format!("convention: {convention}\n");
            s
        }
    };
    emit(out, run.out.as_ref(), &text)?;
    Ok(0)
}

fn coefficients(
    run: &RunArgs,
    lambda: &LambdaMode,
    family: Family,
    specialize: &Specialization,
    format: Format,
    tutte_cache: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let j = run.j as usize;
    let opts = CoefficientOptions { tutte_cache, ..run.options() };
    let c = run.in_pool(|| coefficient(j, &LambdaMode::Symbolic, opts))??;
    let mut p = c.polynomial;
    if family == Family::Hypercube {
        p = hypercube(&p);
    }
    if let LambdaMode::Value(q) = lambda {
        p = p.substitute_value(Var::Lambda, q);
    }
    for (var, value) in &specialize.0 {
        p = p.substitute_value(*var, value);
    }
    let text = match format {
        Format::Text => p.canonical_text() + "\n",
        Format::Latex => p.to_latex() + "\n",
        Format::Json => {
            let spec: serde_json::Map<String, serde_json::Value> =
                specialize.0.iter().map(|(v, q)| (v.ascii_name().to_string(), json!(q.to_string()))).collect();
            let doc = json!({
                "schema": SCHEMA,
                "j": j,
                "lambda": match lambda { LambdaMode::Symbolic => "symbolic".to_string(), LambdaMode::Value(q) => q.to_string() },
                "family": match family { Family::Kss => "kss", Family::Hypercube => "hypercube" },
                "specialize": spec,
                "compressed_sets": c.compressed_sets,
                "covers": c.covers,
                "text": p.canonical_text(),
                "polynomial": p.to_json(),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    emit(out, run.out.as_ref(), &text)?;
    Ok(0)
}

fn verify(
    suite: SuiteArg,
    graph: Option<String>,
    lambda: Option<Rational>,
    seed: Option<u64>,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let suite = match suite {
        SuiteArg::Identities => Suite::Identities,
        SuiteArg::Isoperimetry => Suite::Isoperimetry,
        SuiteArg::Sampler => Suite::Sampler,
        SuiteArg::Estimates => Suite::Estimates,
    };
    let report = run_suite(suite, &SuiteConfig { graph, lambda, seed })?;
    emit(out, path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if report.passed { 0 } else { 1 })
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit status: 0 on success, 1 when a verification fails, 2 on a usage
/// or input error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Counts { run, format } => counts(&run, format, out),
        Command::Coefficients { run, lambda, family, specialize, format, tutte_cache } => {
            coefficients(&run, &lambda.0, family, &specialize.unwrap_or_default(), format, tutte_cache, out)
        }
        Command::Verify { suite, graph, lambda, seed, out: path } => {
            verify(suite, graph, lambda.map(|l| l.0), seed, path.as_ref(), out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
