//! `hypercover`: construct, verify and search skew covers; run the
//! interpolation and kernel checks.
//!
//! Exit codes: 0 success/covered, 1 semantic negative, 2 parse or usage
//! error, 3 validation error, 4 violated precondition.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypercover::constructions;
use hypercover::formats;
use hypercover::fourier::{inverse_wht, wht};
use hypercover::interpolation::{build_scheme, min_dimension, recover_coefficient};
use hypercover::kernel;
use hypercover::rational;
use hypercover::search::{min_cover_search, SearchConfig, SearchStatus};
use hypercover::{verify_cover, CoverFamily, Error};

const WORKERS_ENV: &str = "HYPERCOVER_WORKERS";

#[derive(Parser)]
#[command(name = "hypercover", version, about = "Exact skew-hyperplane covers of {-1,1}^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pow2,
    Levels,
    Balanced,
    #[value(name = "example-n5")]
    ExampleN5,
    #[value(name = "example-n6")]
    ExampleN6,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether the planes in FILE (or stdin for `-`) cover the cube.
    Verify {
        file: PathBuf,
        /// Expected dimension.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print an explicit cover as a plane file.
    Construct {
        kind: Kind,
        /// m for pow2, n for levels and balanced.
        param: Option<usize>,
    },
    /// Recover f̂(S) from values on W(m) and compare with the direct transform.
    Interp {
        poly_file: PathBuf,
        #[arg(long)]
        m: usize,
        /// Comma-separated 1-based indices, e.g. `2,4`; empty for S = ∅.
        #[arg(long = "S", value_delimiter = ',', num_args = 0..)]
        s: Vec<usize>,
    },
    /// Print the signed measure used by `interp`.
    Scheme {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "S", value_delimiter = ',', num_args = 0..)]
        s: Vec<usize>,
    },
    /// Nullity of the degree-d system for coefficients a_1..a_n.
    Kernel {
        n: usize,
        d: usize,
        #[arg(allow_negative_numbers = true, required = true)]
        a: Vec<String>,
    },
    /// Bounded exact search for a cover with at most max-k planes.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long = "B", alias = "coeff-bound", default_value_t = 1)]
        coeff_bound: i64,
        /// Defaults to n.
        #[arg(long)]
        offset_bound: Option<i64>,
        #[arg(long)]
        max_k: usize,
        /// Seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        /// Overrides the HYPERCOVER_WORKERS environment variable.
        #[arg(long)]
        workers: Option<usize>,
        /// Disable first-plane symmetry breaking.
        #[arg(long)]
        no_canonical: bool,
    },
}

/// A command's JSON result or error message together with its exit code.
struct Outcome {
    code: u8,
    stdout: Option<String>,
    stderr: Option<String>,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Self::with_code(0, v)
    }

    fn with_code(code: u8, v: Value) -> Self {
        Outcome { code, stdout: Some(format!("{v}\n")), stderr: None }
    }

    fn fail(code: u8, msg: impl Into<String>) -> Self {
        Outcome { code, stdout: None, stderr: Some(msg.into()) }
    }
}

fn validation_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::EmptyFamily => 2,
        Error::DegreeTooHigh { .. } | Error::OddModulus(_) | Error::BadModulus(_) => 4,
        _ => 3,
    }
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn verify(file: &PathBuf, n: Option<usize>) -> Outcome {
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(2, e),
    };
    let family = match formats::parse_planes(&text) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(validation_code(&e), e.to_string()),
    };
    if let Some(n) = n {
        if n != family.n() {
            return Outcome::fail(3, format!("planes have n = {}, expected n = {n}", family.n()));
        }
    }
    match verify_cover(&family) {
        Ok(r) => Outcome::with_code(if r.covered { 0 } else { 1 }, formats::report_to_json(&r)),
        Err(e) => Outcome::fail(3, e.to_string()),
    }
}

fn construct(kind: Kind, param: Option<usize>) -> Result<CoverFamily, String> {
    let need = |name: &str| param.ok_or_else(|| format!("missing parameter {name}"));
    let fam = match kind {
        Kind::Pow2 => {
            let m = need("m")?;
            constructions::power_of_two_cover(u32::try_from(m).map_err(|e| e.to_string())?)
        }
        Kind::Levels => constructions::level_set_cover(need("n")?),
        Kind::Balanced => constructions::balanced_even_cover(need("n")?),
        Kind::ExampleN5 => Ok(constructions::example_n5()),
        Kind::ExampleN6 => Ok(constructions::example_n6()),
    };
    fam.map_err(|e| e.to_string())
}

fn subset_mask(s: &[usize], n: usize) -> Result<u32, Outcome> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() {
        return Err(Outcome::fail(2, "S has repeated indices"));
    }
    formats::subset_from_indices(&sorted, n, 1).map_err(|e| match e {
        Error::Parse { msg, .. } => Outcome::fail(2, format!("S: {msg}")),
        other => Outcome::fail(3, other.to_string()),
    })
}

/// Checks that m is even and d <= n/m - 1/2, naming the inequality otherwise.
fn precondition(n: usize, m: usize, d: usize) -> Result<(), Outcome> {
    if m < 2 || m % 2 == 1 {
        return Err(Outcome::fail(4, format!("m = {m} must be an even integer >= 2")));
    }
    let needed = min_dimension(m, d);
    if n < needed {
        return Err(Outcome::fail(
            4,
            format!("condition d <= n/m - 1/2 fails: {d} > {n}/{m} - 1/2 (needs n >= {needed})"),
        ));
    }
    Ok(())
}

fn interp(poly_file: &PathBuf, m: usize, s: &[usize]) -> Outcome {
    let text = match read_input(poly_file) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(2, e),
    };
    let poly = match formats::parse_poly(&text) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(2, e.to_string()),
    };
    let n = poly.n();
    let mask = match subset_mask(s, n) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let d = s.len();
    if let Err(o) = precondition(n, m, d) {
        return o;
    }
    if poly.degree() > d {
        return Outcome::fail(4, format!("deg(f) = {} exceeds |S| = {d}", poly.degree()));
    }
    let run = || -> Result<(Vec<rational::Rational>, Vec<rational::Rational>), Error> {
        let scheme = build_scheme(n, m, d, mask)?;
        let table = inverse_wht(&poly)?;
        let recovered = recover_coefficient(&scheme, &table)?;
        let direct = wht(&table)?.coefficient(mask);
        Ok((recovered, direct))
    };
    match run() {
        Ok((recovered, direct)) => {
            let matched = recovered == direct;
            let to_json = |v: &[rational::Rational]| v.iter().map(formats::rational_to_json).collect::<Vec<_>>();
            Outcome::with_code(
                if matched { 0 } else { 1 },
                json!({
                    "S": formats::subset_to_json(mask),
                    "m": m,
                    "coefficient": to_json(&recovered),
                    "direct": to_json(&direct),
                    "match": matched,
                }),
            )
        }
        Err(e) => Outcome::fail(validation_code(&e), e.to_string()),
    }
}

fn scheme(n: usize, m: usize, s: &[usize]) -> Outcome {
    let mask = match subset_mask(s, n) {
        Ok(m) => m,
        Err(o) => return o,
    };
    if let Err(o) = precondition(n, m, s.len()) {
        return o;
    }
    match build_scheme(n, m, s.len(), mask) {
        Ok(sc) => Outcome::ok(formats::scheme_to_json(&sc)),
        Err(e) => Outcome::fail(validation_code(&e), e.to_string()),
    }
}

fn kernel_cmd(n: usize, d: usize, a: &[String]) -> Outcome {
    let parsed: Option<Vec<_>> = a.iter().map(|s| rational::parse(s)).collect();
    let Some(a) = parsed else {
        return Outcome::fail(2, "coefficients must be integers or p/q");
    };
    if a.len() != n {
        return Outcome::fail(3, format!("expected {n} coefficients, got {}", a.len()));
    }
    match kernel::certify(&a, d) {
        Ok(c) => Outcome::with_code(if c.consistent() { 0 } else { 1 }, formats::kernel_to_json(&c)),
        Err(e) => Outcome::fail(3, e.to_string()),
    }
}

fn workers_from_env() -> Result<usize, String> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&w| w > 0)
            .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer")),
        Err(_) => Ok(1),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { file, n } => verify(&file, n),
        Command::Construct { kind, param } => match construct(kind, param) {
            Ok(fam) => Outcome {
                code: 0,
                stdout: Some(formats::write_planes(&fam)),
                stderr: None,
            },
            Err(e) => Outcome::fail(2, e),
        },
        Command::Interp { poly_file, m, s } => interp(&poly_file, m, &s),
        Command::Scheme { n, m, s } => scheme(n, m, &s),
        Command::Kernel { n, d, a } => kernel_cmd(n, d, &a),
        Command::Search {
            n,
            coeff_bound,
            offset_bound,
            max_k,
            time_budget,
            workers,
            no_canonical,
        } => {
            let workers = match workers.map_or_else(workers_from_env, Ok) {
                Ok(w) => w,
                Err(e) => return Outcome::fail(3, e),
            };
            let mut cfg = SearchConfig::new(n, coeff_bound, max_k);
            if let Some(ob) = offset_bound {
                cfg.offset_bound = ob;
            }
            cfg.time_budget = time_budget.map(Duration::from_secs_f64);
            cfg.workers = workers;
            cfg.canonical_first = !no_canonical;
            match min_cover_search(&cfg) {
                Ok(out) => Outcome::with_code(
                    if out.status == SearchStatus::FoundCover { 0 } else { 1 },
                    formats::outcome_to_json(&out),
                ),
                Err(e) => Outcome::fail(3, e.to_string()),
            }
        }
    }
}

fn main() -> ExitCode {
    let out = run(Cli::parse());
    if let Some(text) = &out.stdout {
        print!("{text}");
    }
    if let Some(msg) = &out.stderr {
        eprintln!("error: {msg}");
    }
    ExitCode::from(out.code)
}
