//! Command-line front end for `dirichlet-ruc`.
//!
//! Every subcommand prints one table, CSV with a header row by default or a
//! JSON array of row objects with `--format json`. Exit status is 0 on
//! success, 2 for invalid arguments or problem files, 1 for failures during
//! the computation itself.

pub mod output;
pub mod plot;
pub mod problem;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_ruc::bohr::{self, MultiIndex};
use dirichlet_ruc::constants::{self, RatioReport, SearchConfig};
use dirichlet_ruc::dirichlet::{circle_hp_norm, hp_norm};
use dirichlet_ruc::random::{hprad_norm, rad_norm, Estimate, Mode, SamplerConfig};
use dirichlet_ruc::spaces::Element;
use dirichlet_ruc::Complex64;

use output::{render, Cell, Format, Row};
use problem::{parse_problem, Problem};

/// Environment variable consulted for the seed when neither the flag nor
/// the problem file sets one.
pub const SEED_ENV: &str = "DIRICHLET_RUC_SEED";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input; exit status 2.
    Invalid(String),
    /// The computation failed; exit status 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<dirichlet_ruc::Error> for CliError {
    fn from(e: dirichlet_ruc::Error) -> Self {
        use dirichlet_ruc::Error as E;
        match e {
            E::Domain(_) | E::Shape(_) | E::Arity { .. } | E::Precondition(_) => {
                CliError::Invalid(e.to_string())
            }
            E::Overflow(_) | E::Resource(_) | E::UndefinedRatio(_) => CliError::Failed(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dirichlet-ruc", version, about = "Hardy-space norms of vector-valued Dirichlet polynomials")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the problem file and the DIRICHLET_RUC_SEED variable.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Primes and the n ↔ α(n) correspondence.
    #[command(subcommand)]
    Bohr(BohrCommand),
    /// ‖D‖ in H_p(X).
    Norm(WithP),
    /// ‖Σ x_n z^n‖ in L_p(T; X), coefficients taken in increasing n.
    CircleNorm(WithP),
    /// (E‖Σ ε_n x_n‖²)^{1/2} of the coefficients.
    RadNorm(Input),
    /// E_ε ‖Σ ε_n x_n n^{-s}‖_{H_p}.
    HpradNorm(WithP),
    /// ‖D‖_{H_p^rad} / ‖D‖_{H_p}, or its reciprocal with --rud.
    RucRatio(RatioArgs),
    /// Lower bound for the RUC constant of the family x_1, …, x_N.
    RucSearch(SearchArgs),
    /// Type 2 witness of the coefficients.
    TypeWitness(Input),
    /// Cotype 2 witness of the coefficients.
    CotypeWitness(Input),
    /// Tables for the classical separating examples.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Subcommand)]
enum BohrCommand {
    /// Exponent vectors α(n).
    Factorize {
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// n(α) for an exponent vector.
    Index {
        #[arg(required = true)]
        exponents: Vec<u32>,
    },
    /// Primes up to a limit with their slots.
    Primes { limit: u64 },
    /// First progression of primes of the given length below the bound.
    Ap {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Problem file (JSON, schema 1).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct WithP {
    #[command(flatten)]
    input: Input,
    /// Overrides `p` in the problem file.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug, Args)]
struct RatioArgs {
    #[command(flatten)]
    base: WithP,
    /// Report ‖D‖_{H_p} / ‖D‖_{H_p^rad} instead.
    #[arg(long)]
    rud: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    base: WithP,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Debug, Args)]
struct PlotArg {
    /// Writes an SVG line chart of the table.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// √N against the L_1 norm over progressions of N primes.
    PrimeAp {
        #[arg(long, value_parser = parse_list, default_value = "1..10")]
        lengths: IntList,
        #[arg(long, default_value_t = 3000)]
        bound: u64,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// √N / ‖Σ_{n≤N} w^n‖_{L_1} for the dyadic power series.
    Lacunary {
        #[arg(long, value_parser = parse_list, default_value = "2,4,8,16,32,64")]
        ns: IntList,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// Maximal tail function of the summing basis in H_2(ℓ_∞^m).
    Summing {
        /// Lengths m of all-ones coefficient vectors.
        #[arg(long, value_parser = parse_list, default_value = "1..8")]
        lengths: IntList,
        /// Scalar problem file giving a_n = x_n instead.
        #[arg(long, conflicts_with = "lengths")]
        input: Option<PathBuf>,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// L_1 norms of Dirichlet kernels and their slope against ln N.
    Kernel {
        #[arg(long, value_parser = parse_list, default_value = "8,16,32,64,128,256")]
        ns: IntList,
        #[command(flatten)]
        plot: PlotArg,
    },
}

#[derive(Debug, Clone)]
struct IntList(Vec<u64>);

/// Comma-separated integers and inclusive ranges `a..b`.
fn parse_list(s: &str) -> Result<IntList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad integer `{part}`"))?);
        }
    }
    Ok(IntList(out))
}

struct Context {
    format: Format,
    seed: Option<u64>,
    samples: Option<usize>,
    env_seed: Option<String>,
}

impl Context {
    fn load(&self, path: &Path) -> CliResult<Problem> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let mut problem = parse_problem(&bytes)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        let file_seed = problem.seed_in_file.then_some(problem.sampler.seed);
        problem.sampler.seed = self.resolve_seed(file_seed)?;
        if let Some(s) = self.samples {
            problem.sampler.samples = s;
        }
        problem.sampler.validate()?;
        Ok(problem)
    }

    /// Flag, then problem file, then environment, then 0.
    fn resolve_seed(&self, file_seed: Option<u64>) -> CliResult<u64> {
        if let Some(s) = self.seed.or(file_seed) {
            return Ok(s);
        }
        match &self.env_seed {
            None => Ok(0),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        }
    }

    fn sampler(&self) -> CliResult<SamplerConfig> {
        let mut cfg = SamplerConfig::default().with_seed(self.resolve_seed(None)?);
        if let Some(s) = self.samples {
            cfg.samples = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn p_of(problem: &Problem, flag: Option<f64>) -> CliResult<f64> {
    let p = flag
        .or(problem.p)
        .ok_or_else(|| CliError::Invalid("no exponent: pass --p or set `p` in the problem file".into()))?;
    if !(p >= 1.0) {
        return Err(CliError::Invalid(format!("p = {p} is below 1")));
    }
    Ok(p)
}

fn ratio_row(row: Row, r: &RatioReport) -> Row {
    let rel_abs = |e: &Estimate| {
        if e.value > 0.0 {
            e.abs_error / e.value
        } else {
            0.0
        }
    };
    let abs = r.ratio * (rel_abs(&r.numerator) + rel_abs(&r.denominator));
    row.derived("ratio", r.ratio, r.mode(), r.stderr(), abs)
        .estimate("numerator", &r.numerator)
        .estimate("denominator", &r.denominator)
}

/// `a / b` for an estimate `b` of a positive quantity and an exact `a`.
fn over(a: f64, b: &Estimate) -> (f64, Mode, f64, f64) {
    let r = a / b.value;
    (r, b.mode, r * b.stderr / b.value, r * b.abs_error / b.value)
}

fn write_plot(plot: &PlotArg, title: &str, x: &str, y: &str, pts: &[(f64, f64)]) -> CliResult<()> {
    if let Some(path) = &plot.plot {
        std::fs::write(path, plot::line_chart(title, x, y, pts))
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn bohr_rows(cmd: BohrCommand) -> CliResult<Vec<Row>> {
    Ok(match cmd {
        BohrCommand::Factorize { n } => n
            .into_iter()
            .map(|n| {
                let alpha = bohr::factorize(n)?;
                Ok(Row::new()
                    .int("n", n)
                    .cell("exponents", Cell::Ints(alpha.exponents().iter().map(|&e| e as u64).collect())))
            })
            .collect::<CliResult<_>>()?,
        BohrCommand::Index { exponents } => {
            let alpha = MultiIndex::new(exponents);
            let n = bohr::index_of(&alpha)?;
            vec![Row::new()
                .cell("exponents", Cell::Ints(alpha.exponents().iter().map(|&e| e as u64).collect()))
                .int("n", n)]
        }
        BohrCommand::Primes { limit } => bohr::primes_up_to(limit)?
            .primes()
            .iter()
            .enumerate()
            .map(|(i, &p)| Row::new().int("slot", i as u64 + 1).int("p", p))
            .collect(),
        BohrCommand::Ap { length, bound } => {
            let ap = bohr::prime_ap_search(length, bound)?.ok_or_else(|| {
                CliError::Failed(format!("no progression of {length} primes up to {bound}"))
            })?;
            vec![Row::new()
                .int("N", ap.length as u64)
                .int("start", ap.start)
                .int("step", ap.step)]
        }
    })
}

fn experiment_rows(cmd: ExperimentCommand, ctx: &Context, notes: &mut Vec<String>) -> CliResult<Vec<Row>> {
    let to_usize = |v: &[u64]| -> CliResult<Vec<usize>> {
        v.iter()
            .map(|&n| usize::try_from(n).map_err(|_| CliError::Invalid(format!("{n} is too large"))))
            .collect()
    };
    match cmd {
        ExperimentCommand::PrimeAp { lengths, bound, plot } => {
            let table = constants::experiment_prime_ap(&to_usize(&lengths.0)?, bound)?;
            for n in &table.skipped {
                notes.push(format!("no progression of {n} primes up to {bound}"));
            }
            let mut pts = Vec::new();
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    pts.push((r.n as f64, r.ratio));
                    let (ratio, mode, se, abs) = over(r.lhs.value, &r.rhs);
                    Row::new()
                        .int("N", r.n as u64)
                        .int("start", r.ap.start)
                        .int("step", r.ap.step)
                        .estimate("lhs", &r.lhs)
                        .estimate("rhs", &r.rhs)
                        .derived("ratio", ratio, mode, se, abs)
                })
                .collect();
            write_plot(&plot, "prime progressions: sqrt(N) / L1", "N", "ratio", &pts)?;
            Ok(rows)
        }
        ExperimentCommand::Lacunary { ns, plot } => {
            let rows = constants::experiment_lacunary_power(&ns.0)?;
            let pts: Vec<_> = rows.iter().map(|r| (r.n as f64, r.ratio)).collect();
            write_plot(&plot, "dyadic power series: sqrt(N) / L1", "N", "ratio", &pts)?;
            Ok(rows
                .iter()
                .map(|r| {
                    let (ratio, mode, se, abs) = over(r.lhs.value, &r.rhs);
                    Row::new()
                        .int("N", r.n)
                        .estimate("lhs", &r.lhs)
                        .estimate("rhs", &r.rhs)
                        .derived("ratio", ratio, mode, se, abs)
                })
                .collect())
        }
        ExperimentCommand::Kernel { ns, plot } => {
            let t = constants::kernel_growth(&ns.0)?;
            let pts: Vec<_> = t.rows.iter().map(|r| (r.n as f64, r.l1.value)).collect();
            write_plot(&plot, "Dirichlet kernel L1 norm", "N", "L1", &pts)?;
            Ok(t.rows
                .iter()
                .map(|r| {
                    Row::new()
                        .int("N", r.n)
                        .estimate("l1", &r.l1)
                        .float("asymptotic", r.asymptotic)
                        .float("slope", t.slope)
                })
                .collect())
        }
        ExperimentCommand::Summing { lengths, input, plot } => {
            let (cfg, vectors): (SamplerConfig, Vec<Vec<Complex64>>) = match input {
                Some(path) => {
                    let problem = ctx.load(&path)?;
                    if problem.space().dim() != Some(1) {
                        return Err(CliError::Invalid(format!(
                            "{}: the summing experiment needs scalar coefficients (d = 1)",
                            path.display()
                        )));
                    }
                    let top = problem.polynomial.support().max().unwrap_or(0);
                    let a = (1..=top)
                        .map(|n| match problem.polynomial.coefficient(n) {
                            Element::Coords(v) => v[0],
                            _ => unreachable!("coordinate space"),
                        })
                        .collect();
                    (problem.sampler, vec![a])
                }
                None => {
                    let one = Complex64::new(1.0, 0.0);
                    (
                        ctx.sampler()?,
                        to_usize(&lengths.0)?.into_iter().map(|m| vec![one; m]).collect(),
                    )
                }
            };
            let mut pts = Vec::new();
            let mut rows = Vec::new();
            for a in vectors {
                let r = constants::experiment_summing_basis(&a, &cfg)?;
                pts.push((a.len() as f64, r.ratio));
                rows.push(
                    Row::new()
                        .int("N", a.len() as u64)
                        .estimate("m", &r.m)
                        .float("l2", r.l2)
                        .derived("ratio", r.ratio, r.m.mode, r.m.stderr / r.l2, r.m.abs_error / r.l2)
                        .cell("holds", Cell::Bool(r.holds)),
                );
            }
            write_plot(&plot, "summing basis: M / l2", "N", "ratio", &pts)?;
            Ok(rows)
        }
    }
}

fn execute(cli: Cli, ctx: &Context, notes: &mut Vec<String>) -> CliResult<Vec<Row>> {
    Ok(match cli.command {
        Command::Bohr(cmd) => bohr_rows(cmd)?,
        Command::Experiment(cmd) => experiment_rows(cmd, ctx, notes)?,
        Command::Norm(a) => {
            let pr = ctx.load(&a.input.input)?;
            let p = p_of(&pr, a.p)?;
            let e = hp_norm(&pr.polynomial, p, &pr.sampler)?;
            vec![Row::new().float("p", p).estimate("norm", &e).int("samples", e.samples_used)]
        }
        Command::CircleNorm(a) => {
            let pr = ctx.load(&a.input.input)?;
            let p = p_of(&pr, a.p)?;
            let e = circle_hp_norm(&pr.elements(), pr.space(), p, &pr.sampler)?;
            vec![Row::new().float("p", p).estimate("norm", &e).int("samples", e.samples_used)]
        }
        Command::RadNorm(a) => {
            let pr = ctx.load(&a.input)?;
            let e = rad_norm(&pr.elements(), pr.space(), &pr.sampler)?;
            vec![Row::new().estimate("norm", &e).int("samples", e.samples_used)]
        }
        Command::HpradNorm(a) => {
            let pr = ctx.load(&a.input.input)?;
            let p = p_of(&pr, a.p)?;
            let e = hprad_norm(&pr.polynomial, p, &pr.sampler)?;
            vec![Row::new().float("p", p).estimate("norm", &e).int("samples", e.samples_used)]
        }
        Command::RucRatio(a) => {
            let pr = ctx.load(&a.base.input.input)?;
            let p = p_of(&pr, a.base.p)?;
            let (kind, r) = if a.rud {
                ("rud", constants::rud_ratio(&pr.polynomial, p, &pr.sampler)?)
            } else {
                ("ruc", constants::ruc_ratio(&pr.polynomial, p, &pr.sampler)?)
            };
            vec![ratio_row(Row::new().cell("kind", Cell::Text(kind.into())).float("p", p), &r)]
        }
        Command::RucSearch(a) => {
            let pr = ctx.load(&a.base.input.input)?;
            let p = p_of(&pr, a.base.p)?;
            let support: Vec<u64> = pr.polynomial.support().collect();
            if support.iter().copied().ne(1..=support.len() as u64) {
                return Err(CliError::Invalid(
                    "ruc-search needs the family at n = 1, 2, …, N without gaps".into(),
                ));
            }
            let mut scfg: SearchConfig = pr.search.clone().unwrap_or_default();
            if let Some(r) = a.restarts {
                scfg.restarts = r;
            }
            if let Some(i) = a.iterations {
                scfg.iterations = i;
            }
            let out = constants::ruc_constant_search(pr.space(), &pr.elements(), p, &scfg, &pr.sampler)?;
            vec![ratio_row(Row::new().float("p", p), &out.best)
                .float("start_ratio", out.start_ratio)
                .int("restart", out.restart as u64)
                .int("evaluations", out.evaluations as u64)
                .cell("lower_bound", Cell::Bool(out.lower_bound))
                .cell("coefficients", Cell::Complexes(out.coefficients))]
        }
        Command::TypeWitness(a) => {
            let pr = ctx.load(&a.input)?;
            let r = constants::type_constant_witness(pr.space(), &pr.elements(), &pr.sampler)?;
            vec![ratio_row(Row::new(), &r)]
        }
        Command::CotypeWitness(a) => {
            let pr = ctx.load(&a.input)?;
            let r = constants::cotype_constant_witness(pr.space(), &pr.elements(), &pr.sampler)?;
            vec![ratio_row(Row::new(), &r)]
        }
    })
}

/// Runs the command line `args` (program name first), writing the table to
/// `out` and diagnostics to `err`; returns the exit status. `env_seed` is
/// the value of [`SEED_ENV`], if set.
pub fn run_with<I, T>(args: I, env_seed: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let ctx = Context {
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        seed: cli.seed,
        samples: cli.samples,
        env_seed,
    };
    let mut notes = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli, &ctx, &mut notes)),
            Err(e) => Err(CliError::Failed(format!("cannot start {t} threads: {e}"))),
        },
        None => execute(cli, &ctx, &mut notes),
    };
    for n in &notes {
        let _ = writeln!(err, "note: {n}");
    }
    match result {
        Ok(rows) => {
            if out.write_all(render(&rows, ctx.format).as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let msg = match &e {
                CliError::Invalid(m) | CliError::Failed(m) => m,
            };
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

/// [`run_with`] reading the seed fallback from the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, std::env::var(SEED_ENV).ok(), out, err)
}
