use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drinfeld_delta::bench::run_bench;
use drinfeld_delta::expansion::{delta_expansion, ExpansionConfig, Mode};
use drinfeld_delta::field::prime_power;
use drinfeld_delta::verify::{
    builtin_points, check_with_expansion, error_status, expansion_for, random_point, run_suite,
    NumericParams, Status, SuiteConfig, TestPoint,
};
use drinfeld_delta::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

const BENCH_RUNS: usize = 3;

#[derive(Parser)]
#[command(
    name = "drinfeld-delta",
    version,
    about = "u-expansions of the Drinfeld discriminant over F_q[t]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the u-expansion of Δ by the product formula.
    Expand(Common),
    /// Check the product formula against the lattice definition of Δ.
    Verify(Common),
    /// Evaluate Δ both ways at the built-in (or a seeded random) point.
    Eval(Common),
    /// Time Frobenius powering against square-and-multiply.
    Bench(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Field size, a prime power (default 3; verify runs q = 2, 3).
    #[arg(long)]
    q: Option<u32>,
    /// Rank, at least 2 (default 2; verify runs r = 2, 3).
    #[arg(long)]
    r: Option<usize>,
    /// Truncation order in u.
    #[arg(long = "N", default_value_t = 50)]
    n: usize,
    #[arg(long, default_value = "monic")]
    mode: Mode,
    /// Degree bound of the lattice box.
    #[arg(long = "B", default_value_t = NumericParams::default().b)]
    b: usize,
    /// Relative precision of the period, in s-digits.
    #[arg(long = "P", default_value_t = NumericParams::default().p)]
    p: i64,
    /// Override of the product degree bound.
    #[arg(long = "D")]
    d: Option<usize>,
    /// Seed for random points, arguments and matrices.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => Failure::Usage(msg),
            e => Failure::Run(e),
        }
    }
}

impl Common {
    fn q(&self) -> u32 {
        self.q.unwrap_or(3)
    }

    fn r(&self) -> usize {
        self.r.unwrap_or(2)
    }

    fn validate(&self) -> Result<(), Failure> {
        if let Some(q) = self.q {
            if prime_power(q).is_none() {
                return Err(Failure::Usage(format!("q = {q} is not a prime power")));
            }
        }
        if self.r.is_some_and(|r| r < 2) {
            return Err(Failure::Usage("r must be at least 2".into()));
        }
        if self.n == 0 {
            return Err(Failure::Usage("N must be at least 1".into()));
        }
        if self.p < 1 {
            return Err(Failure::Usage("P must be at least 1".into()));
        }
        Ok(())
    }

    fn expansion_config(&self) -> ExpansionConfig {
        let mut cfg = ExpansionConfig::new(self.q(), self.r(), self.n, self.mode);
        cfg.d = self.d;
        cfg
    }

    fn params(&self) -> NumericParams {
        NumericParams {
            b: self.b,
            p: self.p,
            n: self.n,
            d: self.d,
        }
    }

    fn emit(&self, body: &str) -> Result<(), Failure> {
        let written = match &self.out {
            Some(path) => fs::write(path, body),
            None => io::stdout().write_all(body.as_bytes()),
        };
        written.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        let mut body = serde_json::to_string_pretty(value).expect("report serializes");
        body.push('\n');
        self.emit(&body)
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => EXIT_FAIL,
        Status::PrecisionExhausted => EXIT_EXHAUSTED,
    }
}

fn cmd_expand(c: &Common) -> Result<u8, Failure> {
    let result = delta_expansion(&c.expansion_config())?;
    eprintln!("D = {}, factors = {}", result.d(), result.factor_count());
    match c.format {
        Format::Json => c.emit_json(&result.to_json())?,
        Format::Text => c.emit(&result.to_text())?,
    }
    Ok(0)
}

fn cmd_verify(c: &Common) -> Result<u8, Failure> {
    let mut cfg = SuiteConfig {
        params: c.params(),
        ..Default::default()
    };
    cfg.shapes
        .retain(|&(q, r)| c.q.is_none_or(|x| x == q) && c.r.is_none_or(|x| x == r));
    if cfg.shapes.is_empty() {
        return Err(Failure::Usage(
            "the suite covers q in {2, 3} and r in {2, 3}".into(),
        ));
    }
    if let Some(seed) = c.seed {
        cfg.seed = seed;
        cfg.random_points = 1;
    }
    let report = run_suite(&cfg)?;
    let passed = report.cases.iter().filter(|x| x.pass).count();
    eprintln!("{passed}/{} cases pass", report.cases.len());
    match c.format {
        Format::Json => c.emit_json(&report)?,
        Format::Text => {
            let mut body = String::new();
            for case in &report.cases {
                let mark = match case.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::PrecisionExhausted => "EXHAUSTED",
                };
                let digits = case
                    .relative_digits
                    .map_or(String::new(), |d| format!(" ({d} digits)"));
                let detail = case
                    .detail
                    .as_deref()
                    .map_or(String::new(), |d| format!(": {d}"));
                body.push_str(&format!("{mark} {}{digits}{detail}\n", case.case));
            }
            c.emit(&body)?;
        }
    }
    Ok(status_code(report.status()))
}

#[derive(Serialize)]
struct EvalRecord {
    point: String,
    u: drinfeld_delta::field::RamifiedSeries,
    delta_direct: drinfeld_delta::field::RamifiedSeries,
    delta_product: drinfeld_delta::field::RamifiedSeries,
    tail_precision: i64,
    discrepancy: drinfeld_delta::verify::Discrepancy,
}

fn cmd_eval(c: &Common) -> Result<u8, Failure> {
    let (q, r) = (c.q(), c.r());
    let points: Vec<TestPoint> = match c.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            vec![random_point(
                q,
                r,
                &mut rng,
                c.params(),
                format!("q{q}-r{r}-seed{seed}"),
            )?]
        }
        None => builtin_points(q, r, c.params())?,
    };
    let mut records = Vec::new();
    let mut worst = Status::Pass;
    for point in &points {
        let check = check_with_expansion(point, &expansion_for(point)?)?;
        if check.discrepancy.status != Status::Pass && worst != Status::Fail {
            worst = check.discrepancy.status;
        }
        records.push(EvalRecord {
            point: point.name.clone(),
            u: point.u.clone(),
            delta_direct: check.direct,
            delta_product: check.product,
            tail_precision: check.tail_precision,
            discrepancy: check.discrepancy,
        });
    }
    match c.format {
        Format::Json => c.emit_json(&records)?,
        Format::Text => {
            let mut body = String::new();
            for rec in &records {
                body.push_str(&format!(
                    "{}: {:?}, {} digits\n  u = {}\n  direct  = {}\n  product = {}\n",
                    rec.point,
                    rec.discrepancy.status,
                    rec.discrepancy.relative_digits,
                    rec.u,
                    rec.delta_direct,
                    rec.delta_product
                ));
            }
            c.emit(&body)?;
        }
    }
    Ok(status_code(worst))
}

fn cmd_bench(c: &Common) -> Result<u8, Failure> {
    let report = run_bench(&c.expansion_config(), c.params(), BENCH_RUNS)?;
    eprintln!("D = {}", report.d);
    match c.format {
        Format::Json => c.emit_json(&report)?,
        Format::Text => {
            let e = &report.expansion;
            let mut body = format!(
                "q={} r={} N={} D={} best of {}\n  charp {:.2} ms  naive {:.2} ms  speedup {:.2}x\n",
                report.q, report.r, report.n, report.d, report.runs, e.charp_ms, e.naive_ms, e.speedup
            );
            for ev in &report.evaluation {
                body.push_str(&format!(
                    "  {}: product {:.2} ms  direct {:.2} ms  {} digits\n",
                    ev.point, ev.product_ms, ev.direct_ms, ev.relative_digits
                ));
            }
            c.emit(&body)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (Command::Expand(c) | Command::Verify(c) | Command::Eval(c) | Command::Bench(c)) =
        &cli.command;
    let outcome = c.validate().and_then(|()| match &cli.command {
        Command::Expand(c) => cmd_expand(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Eval(c) => cmd_eval(c),
        Command::Bench(c) => cmd_bench(c),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match error_status(&e) {
                Status::PrecisionExhausted => EXIT_EXHAUSTED,
                _ => EXIT_FAIL,
            })
        }
    }
}
