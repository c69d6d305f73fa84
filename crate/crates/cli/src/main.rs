use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use steering_core::constructions::{
    bernoulli_signs, build_dichotomic_functional, build_paper_povms, build_pauli_family, build_random_functional,
    build_rho_lambda, ppt_threshold, SchmidtState, DEFAULT_K,
};
use steering_core::experiments::{
    rows_to_csv, run_dichotomic, run_ppt, run_scaling, verify, ExperimentConfig, Tolerances,
};
use steering_core::io::{canonical_hash, to_json_pretty};
use steering_core::model::BipartiteState;
use steering_core::{Error, Exec};

#[derive(Parser)]
#[command(name = "steering", version, about = "Steering-inequality constructions, bounds and experiments")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Object {
    RandomFunctional,
    PaperPovms,
    SchmidtState,
    RhoLambda,
    PauliFamily,
    DichotomicFunctional,
}

#[derive(clap::Args)]
struct Common {
    /// Seed list: `1,2,5` or a range `1..5` (inclusive).
    #[arg(long, value_parser = parse_u64_list)]
    seeds: Option<U64List>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "K")]
    k: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Sampled measurement settings per row (0 keeps only the explicit candidate).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write one construction as JSON.
    Construct {
        #[arg(long, value_enum)]
        object: Object,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        alpha: f64,
        #[arg(long = "K", default_value_t = DEFAULT_K)]
        k: f64,
        /// For rho-lambda: one value, as a fraction of the PPT threshold.
        #[arg(long, value_parser = parse_f64_list)]
        lambda_grid: Option<F64List>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// LHS bound vs. explicit and sampled quantum values of the random functional.
    Scaling {
        /// n values: `2..7` (inclusive) or `2,4,6`.
        #[arg(long, value_parser = parse_usize_list)]
        n: Option<UsizeList>,
        #[command(flatten)]
        common: Common,
    },
    /// The anticommuting Pauli-string family: bound, witness and see-saw.
    Dichotomic {
        #[arg(long, value_parser = parse_usize_list)]
        m: Option<UsizeList>,
        #[command(flatten)]
        common: Common,
    },
    /// Noisy Schmidt states up to the PPT threshold.
    Ppt {
        #[arg(long, value_parser = parse_usize_list)]
        n: Option<UsizeList>,
        /// Noise levels as fractions of the PPT threshold, e.g. `0,0.5,1`.
        #[arg(long, value_parser = parse_f64_list)]
        lambda_grid: Option<F64List>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification checks; exit status 1 if any fails.
    Verify {
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// `key=value,...` replacing default tolerances.
        #[arg(long)]
        tolerance_overrides: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone)]
struct UsizeList(Vec<usize>);
#[derive(Clone)]
struct U64List(Vec<u64>);
#[derive(Clone)]
struct F64List(Vec<f64>);

fn parse_int_list(s: &str) -> Result<Vec<u64>, String> {
    let bad = |e: std::num::ParseIntError| format!("`{s}`: {e}");
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim_start_matches('=').trim().parse().map_err(bad)?);
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(bad)).collect()
}

fn parse_usize_list(s: &str) -> Result<UsizeList, String> {
    Ok(UsizeList(parse_int_list(s)?.into_iter().map(|v| v as usize).collect()))
}

fn parse_u64_list(s: &str) -> Result<U64List, String> {
    parse_int_list(s).map(U64List)
}

fn parse_f64_list(s: &str) -> Result<F64List, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()
        .map(F64List)
}

enum Failure {
    Usage(String),
    Runtime(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// JSON (or CSV rows) to `out`, canonical hash of the JSON form to stderr.
fn emit_report<R: serde::Serialize, Row: serde::Serialize>(
    report: &R,
    rows: &[Row],
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let text = match format {
        Format::Json => to_json_pretty(report)? + "\n",
        Format::Csv => rows_to_csv(rows)?,
    };
    emit(&text, out)?;
    eprintln!("sha256 {}", canonical_hash(report)?);
    Ok(())
}

fn configure(name: &str, common: &Common, exec: Exec) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(name);
    if let Some(U64List(s)) = &common.seeds {
        cfg.seeds = s.clone();
    }
    if let Some(a) = common.alpha {
        cfg.alpha = a;
    }
    if let Some(k) = common.k {
        cfg.k = k;
    }
    if let Some(s) = common.samples {
        cfg.samples = s;
    }
    cfg.exec = exec;
    cfg
}

fn construct(
    object: Object,
    (n, m, seed, alpha, k): (usize, usize, u64, f64, f64),
    lambda_grid: Option<F64List>,
) -> Result<(String, String), Failure> {
    let (json, hash) = match object {
        Object::RandomFunctional => {
            let f = build_random_functional(n, &bernoulli_signs(n, seed)?)?;
            (to_json_pretty(&f)?, canonical_hash(&f)?)
        }
        Object::PaperPovms => {
            let p = build_paper_povms(n, &bernoulli_signs(n, seed)?, k)?;
            (to_json_pretty(&p)?, canonical_hash(&p)?)
        }
        Object::SchmidtState => {
            let s = SchmidtState::paper_family(n, alpha)?.to_state();
            (to_json_pretty(&s)?, canonical_hash(&s)?)
        }
        Object::RhoLambda => {
            let fraction = match lambda_grid.as_ref().map(|g| g.0.as_slice()) {
                None => 1.0,
                Some([f]) => *f,
                Some(_) => return Err(Failure::Usage("rho-lambda takes a single --lambda-grid value".into())),
            };
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Failure::Usage(format!("--lambda-grid {fraction} is not a fraction in [0, 1]")));
            }
            let schmidt = SchmidtState::paper_family(n, alpha)?;
            let d = schmidt.dim();
            let rho = build_rho_lambda(&schmidt, fraction * ppt_threshold(&schmidt)?)?;
            let s = BipartiteState::mixed(rho, d, d)?;
            (to_json_pretty(&s)?, canonical_hash(&s)?)
        }
        Object::PauliFamily => {
            let p = build_pauli_family(m)?;
            (to_json_pretty(&p)?, canonical_hash(&p)?)
        }
        Object::DichotomicFunctional => {
            let f = build_dichotomic_functional(m, 1 << m)?;
            (to_json_pretty(&f)?, canonical_hash(&f)?)
        }
    };
    Ok((json + "\n", hash))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Construct {
            object,
            n,
            m,
            seed,
            alpha,
            k,
            lambda_grid,
            out,
            format,
        } => {
            if format == Format::Csv {
                return Err(Failure::Usage("construct writes JSON only".into()));
            }
            let (json, hash) = construct(object, (n, m, seed, alpha, k), lambda_grid)?;
            emit(&json, &out)?;
            eprintln!("sha256 {hash}");
        }
        Command::Scaling { n, common } => {
            let mut cfg = configure("scaling", &common, exec);
            if let Some(UsizeList(n)) = n {
                cfg.n_values = n;
            }
            let report = run_scaling(&cfg)?;
            for s in &report.skipped {
                eprintln!("skipped n={} seed={}: {}", s.n, s.seed, s.reason);
            }
            emit_report(&report, &report.rows, common.format, &common.out)?;
        }
        Command::Dichotomic { m, common } => {
            let mut cfg = configure("dichotomic", &common, exec);
            if let Some(UsizeList(m)) = m {
                cfg.m_values = m;
            }
            let report = run_dichotomic(&cfg)?;
            emit_report(&report, &report.rows, common.format, &common.out)?;
        }
        Command::Ppt { n, lambda_grid, common } => {
            let mut cfg = configure("ppt", &common, exec);
            if let Some(UsizeList(n)) = n {
                cfg.n_values = n;
            }
            if let Some(F64List(g)) = lambda_grid {
                cfg.lambda_grid = g;
            }
            let report = run_ppt(&cfg)?;
            for s in &report.skipped {
                eprintln!("skipped n={} seed={}: {}", s.n, s.seed, s.reason);
            }
            emit_report(&report, &report.rows, common.format, &common.out)?;
        }
        Command::Verify {
            only,
            tolerance_overrides,
            out,
            format,
        } => {
            let mut tol = Tolerances::default();
            if let Some(o) = &tolerance_overrides {
                tol.apply_overrides(o)?;
            }
            let results = verify::run_checks(only.as_deref(), &tol, exec)?;
            for r in &results {
                eprintln!("{}", verify::format_line(r));
            }
            let text = match format {
                Format::Json => to_json_pretty(&results)? + "\n",
                Format::Csv => {
                    let rows: Vec<_> = results
                        .iter()
                        .map(|r| (r.id, r.criterion, r.passed, r.elapsed_ms, r.summary.as_str()))
                        .collect();
                    let mut s = String::from("id,criterion,passed,elapsed_ms,summary\n");
                    s += rows_to_csv(&rows)?.as_str();
                    s
                }
            };
            emit(&text, &out)?;
            if results.iter().any(|r| !r.passed) {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
