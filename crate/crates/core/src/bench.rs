//! Timings of the expansion with Frobenius powering against
//! square-and-multiply, and of the product formula against the lattice sum.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{delta_expansion, ExpansionConfig, ExpansionResult, PowMethod};
use crate::verify::{builtin_points, check_with_expansion, NumericParams};

#[derive(Clone, Debug, Serialize)]
pub struct PowTiming {
    pub charp_ms: f64,
    pub naive_ms: f64,
    /// `naive / charp`.
    pub speedup: f64,
    /// Outputs of both methods are equal; checked on every run.
    pub identical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalTiming {
    pub point: String,
    /// Specializing and evaluating the expansion at `u`.
    pub product_ms: f64,
    /// `Δ` from the lattice box.
    pub direct_ms: f64,
    pub relative_digits: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub q: u32,
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub runs: usize,
    pub expansion: PowTiming,
    /// Present when built-in points exist for `(q, r)`.
    pub evaluation: Vec<EvalTiming>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed()))
}

/// Best of `runs` alternating runs of each powering method.
pub fn time_expansion(cfg: &ExpansionConfig, runs: usize) -> Result<(PowTiming, ExpansionResult)> {
    if runs == 0 {
        return Err(Error::InvalidParameter(
            "bench needs at least one run".into(),
        ));
    }
    let charp_cfg = ExpansionConfig {
        pow: PowMethod::CharP,
        ..cfg.clone()
    };
    let naive_cfg = ExpansionConfig {
        pow: PowMethod::Naive,
        ..cfg.clone()
    };
    let (mut best_c, mut best_n) = (Duration::MAX, Duration::MAX);
    let mut result = None;
    for _ in 0..runs {
        let (c, tc) = timed(|| delta_expansion(&charp_cfg))?;
        let (n, tn) = timed(|| delta_expansion(&naive_cfg))?;
        if !c.same_series(&n) {
            return Err(Error::Inconsistent(
                "Frobenius and square-and-multiply powers differ".into(),
            ));
        }
        best_c = best_c.min(tc);
        best_n = best_n.min(tn);
        result = Some(c);
    }
    let timing = PowTiming {
        charp_ms: ms(best_c),
        naive_ms: ms(best_n),
        speedup: best_n.as_secs_f64() / best_c.as_secs_f64().max(1e-9),
        identical: true,
    };
    Ok((timing, result.unwrap()))
}

pub fn run_bench(cfg: &ExpansionConfig, params: NumericParams, runs: usize) -> Result<BenchReport> {
    let (expansion, result) = time_expansion(cfg, runs)?;
    let mut evaluation = Vec::new();
    if let Ok(points) = builtin_points(
        cfg.q,
        cfg.r,
        NumericParams {
            n: cfg.n,
            d: cfg.d,
            ..params
        },
    ) {
        for point in points {
            let (check, total) = timed(|| check_with_expansion(&point, &result))?;
            let (_, direct) =
                timed(|| crate::drinfeld::delta_direct(&point.omega, point.params.b))?;
            evaluation.push(EvalTiming {
                point: point.name.clone(),
                product_ms: ms(total.saturating_sub(direct)),
                direct_ms: ms(direct),
                relative_digits: check.discrepancy.relative_digits,
                pass: check.discrepancy.pass(),
            });
        }
    }
    Ok(BenchReport {
        q: cfg.q,
        r: cfg.r,
        n: cfg.n,
        d: result.d(),
        runs,
        expansion,
        evaluation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::Mode;

    #[test]
    fn small_bench_runs() {
        let cfg = ExpansionConfig::new(2, 2, 12, Mode::Monic);
        let report = run_bench(&cfg, NumericParams::default(), 1).unwrap();
        assert!(report.expansion.identical);
        assert_eq!(report.evaluation.len(), 3);
        assert!(report.evaluation.iter().all(|e| e.pass));
    }
}
