//! `ffhyper`: field construction, series evaluation, identity verification
//! runs and special-value tables from the command line.
//!
//! Exit codes: 0 success (all scans passed), 1 verification failure,
//! 2 usage/domain/constraint/resource errors. Machine-readable reports go to
//! stdout (or `--out`); progress and summaries go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use ffhyper::characters::{char_algebra, special_char, Special};
use ffhyper::identity::runner::{
    self, BackendChoice, ReportFormat, RunConfig, StrategyChoice, DEFAULT_Q_SUITE,
};
use ffhyper::identity::{self, DEFAULT_BUDGET};
use ffhyper::series::{eval_series, Family, SeriesSpec};
use ffhyper::value::DEFAULT_COMPLEX_TOL;
use ffhyper::{CharIndex, Elem, Error, FieldCtx, SumTable};

#[derive(Parser)]
#[command(
    name = "ffhyper",
    version,
    about = "Hypergeometric character sums over finite fields, with an exact identity verifier"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Greene,
    Mccarthy,
    FuselierP,
    FuselierF,
    Appell,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Complex,
    Modular,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print construction data for F_{p^r}: modulus, generator, characters.
    FieldInfo { p: u32, r: u32 },
    /// List the identity catalog with arities and congruence constraints.
    List,
    /// Evaluate one series.
    Eval {
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        /// Upper characters: dual exponents or eps/phi/chi3/chi4, comma separated.
        #[arg(long, default_value = "")]
        up: String,
        /// Lower characters, same syntax.
        #[arg(long, default_value = "")]
        low: String,
        /// Argument: element index in 0..q, or a negative integer mapped into
        /// the prime subfield.
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        /// Second argument (Appell F4 only).
        #[arg(long, allow_hyphen_values = true)]
        y: Option<i64>,
        #[arg(long, value_enum, default_value_t = BackendArg::Both)]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_COMPLEX_TOL)]
        tol: f64,
    },
    /// Verify one identity, the LEMMA_PACK group, or `all`.
    Verify {
        id: String,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u32>,
        #[arg(long, value_enum, default_value_t = BackendArg::Both)]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `auto`, `exhaustive`, or `random:N:SEED`.
        #[arg(long, default_value = "auto")]
        strategy: String,
        #[arg(long, default_value_t = DEFAULT_COMPLEX_TOL)]
        tol: f64,
        /// Exhaustive-scan budget in series evaluations
        /// (default 10^7; env FFHYPER_BUDGET overrides).
        #[arg(long)]
        budget: Option<u64>,
        /// Worker thread cap.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Write reports here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a special-value identity as CSV.
    Table {
        id: String,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u32>,
        #[arg(long, value_enum, default_value_t = BackendArg::Complex)]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_COMPLEX_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::FieldInfo { p, r } => {
            let ctx = FieldCtx::build(p, r)?;
            println!("q = {}^{} = {}", ctx.p(), ctx.r(), ctx.q());
            println!("modulus: {}", ctx.modulus_string());
            println!(
                "generator: {} (index {})",
                ctx.elem_string(ctx.generator()),
                ctx.generator()
            );
            for (name, which) in [
                ("eps", Special::Eps),
                ("phi", Special::Phi),
                ("chi3", Special::Chi3),
                ("chi4", Special::Chi4),
            ] {
                match special_char(&ctx, which) {
                    Ok(chi) => {
                        let alg = char_algebra(chi);
                        println!("{name}: T^{} (order {})", chi.k(), alg.order);
                    }
                    Err(_) => println!("{name}: unavailable (order does not divide q-1)"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::List => {
            for info in identity::list_identities() {
                println!(
                    "{:16} {:14} chars={} elems={} variants={} constraint=[{}] {}",
                    info.id,
                    info.kind,
                    info.chars,
                    info.elems,
                    info.variants,
                    info.congruence,
                    info.description
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval {
            family,
            q,
            up,
            low,
            x,
            y,
            backend,
            seed,
            tol,
        } => {
            let (p, r) = runner::factor_prime_power(q)?;
            let ctx = Arc::new(FieldCtx::build(p, r)?);
            let spec = SeriesSpec {
                family: match family {
                    FamilyArg::Greene => Family::Greene,
                    FamilyArg::Mccarthy => Family::Mccarthy,
                    FamilyArg::FuselierP => Family::FuselierP,
                    FamilyArg::FuselierF => Family::FuselierF,
                    FamilyArg::Appell => Family::AppellF4,
                },
                uppers: parse_chars(&up, &ctx)?,
                lowers: parse_chars(&low, &ctx)?,
                x: parse_elem(x, &ctx)?,
                y: y.map(|v| parse_elem(v, &ctx)).transpose()?,
            };
            let cfg = RunConfig {
                backend: backend_choice(backend),
                seed,
                tol,
                ..RunConfig::default()
            };
            for b in runner::build_backends(p as u64, ctx.m() as u64, &cfg)? {
                let table = SumTable::new(Arc::clone(&ctx), b);
                let value = eval_series(&table, &spec)?;
                println!("{} {}", table.backend().label(), value);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            id,
            q,
            backend,
            seed,
            strategy,
            tol,
            budget,
            jobs,
            format,
            out,
        } => {
            configure_jobs(jobs);
            let cfg = RunConfig {
                qs: if q.is_empty() {
                    DEFAULT_Q_SUITE.to_vec()
                } else {
                    q
                },
                backend: backend_choice(backend),
                seed,
                tol,
                strategy: parse_strategy(&strategy, seed)?,
                budget: budget.or_else(budget_from_env).unwrap_or(DEFAULT_BUDGET),
                format: match format {
                    FormatArg::Json => ReportFormat::Json,
                    FormatArg::Csv => ReportFormat::Csv,
                },
            };
            let outcome = runner::run_verify(&id, &cfg)?;
            eprint!("{}", outcome.summary);
            emit(&outcome.rendered, out.as_deref())?;
            Ok(if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Table {
            id,
            q,
            backend,
            seed,
            tol,
            out,
        } => {
            let cfg = RunConfig {
                qs: if q.is_empty() {
                    DEFAULT_Q_SUITE.to_vec()
                } else {
                    q
                },
                backend: backend_choice(backend),
                seed,
                tol,
                ..RunConfig::default()
            };
            let outcome = runner::run_table(&id, &cfg)?;
            eprint!("{}", outcome.summary);
            emit(&outcome.rendered, out.as_deref())?;
            Ok(if outcome.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn emit(rendered: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::BadConfig(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn backend_choice(b: BackendArg) -> BackendChoice {
    match b {
        BackendArg::Complex => BackendChoice::Complex,
        BackendArg::Modular => BackendChoice::Modular,
        BackendArg::Both => BackendChoice::Both,
    }
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // ignore failure if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn budget_from_env() -> Option<u64> {
    std::env::var("FFHYPER_BUDGET").ok()?.parse().ok()
}

fn parse_strategy(s: &str, seed: u64) -> Result<StrategyChoice, Error> {
    if s == "auto" {
        return Ok(StrategyChoice::Auto { n_random: 500 });
    }
    if s == "exhaustive" {
        return Ok(StrategyChoice::Exhaustive);
    }
    if let Some(rest) = s.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let n = parts
            .first()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::BadConfig(format!("bad strategy `{s}`")))?;
        let seed_override = match parts.get(1) {
            None => None,
            Some(t) => Some(
                t.parse()
                    .map_err(|_| Error::BadConfig(format!("bad strategy seed in `{s}`")))?,
            ),
        };
        let _ = seed;
        return Ok(StrategyChoice::Random {
            n,
            seed: seed_override,
        });
    }
    Err(Error::BadConfig(format!(
        "unknown strategy `{s}` (want auto, exhaustive, or random:N[:SEED])"
    )))
}

fn parse_chars(s: &str, ctx: &FieldCtx) -> Result<Vec<CharIndex>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok {
                "eps" => special_char(ctx, Special::Eps),
                "phi" => special_char(ctx, Special::Phi),
                "chi3" => special_char(ctx, Special::Chi3),
                "chi4" => special_char(ctx, Special::Chi4),
                _ => tok
                    .parse::<i64>()
                    .map(|k| CharIndex::new(k, ctx.m()))
                    .map_err(|_| Error::BadConfig(format!("bad character `{tok}`"))),
            }
        })
        .collect()
}

fn parse_elem(v: i64, ctx: &FieldCtx) -> Result<Elem, Error> {
    if v < 0 {
        return Ok(ctx.from_int(v));
    }
    if (v as u64) < ctx.q() as u64 {
        Ok(v as Elem)
    } else {
        Err(Error::BadConfig(format!(
            "element index {v} out of range for q = {}",
            ctx.q()
        )))
    }
}
