//! The verification suite: every check over the built-in points (plus
//! seeded random points), collected into an ordered report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    builtin_points, check_with_expansion, covariance_matrices, expansion_for, lemma1_decreasing,
    lemma1_empirical, random_argument, random_point, verify_covariance, verify_delta_two_ways,
    verify_exp_product, verify_leading_power, verify_torsion_product, Discrepancy, NumericParams,
    Status, TestPoint,
};
use crate::error::{Error, Result};
use crate::expansion::degree_bound;

/// Number of terms `B'` kept in the exponential product check.
pub const EXP_PRODUCT_TERMS: usize = 3;

/// Degrees covered by the `f_a(u)` decay table.
pub const LEMMA1_DEGREES: usize = 4;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub shapes: Vec<(u32, usize)>,
    pub params: NumericParams,
    pub seed: u64,
    /// Extra random points per shape.
    pub random_points: usize,
    /// Random arguments per point for the exponential and torsion identities.
    pub random_arguments: usize,
    /// Rerun each product check with `B`, `P` and `D` raised by one step.
    pub stability: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            shapes: vec![(2, 2), (3, 2), (2, 3), (3, 3)],
            params: NumericParams::default(),
            seed: 0,
            random_points: 0,
            random_arguments: 3,
            stability: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseParams {
    pub q: u32,
    pub r: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "P")]
    pub p: i64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
}

impl CaseParams {
    fn of(point: &TestPoint) -> Self {
        let p = point.params;
        CaseParams {
            q: point.q(),
            r: point.rank(),
            b: p.b,
            p: p.p,
            n: p.n,
            d: p.d
                .unwrap_or_else(|| degree_bound(p.n, point.q(), point.rank())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub params: CaseParams,
    pub pass: bool,
    pub status: Status,
    pub valuation_of_difference: Option<i64>,
    pub guaranteed_precision: Option<i64>,
    pub relative_digits: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseReport {
    fn from_discrepancy(case: String, params: CaseParams, d: &Discrepancy) -> Self {
        CaseReport {
            case,
            params,
            pass: d.pass(),
            status: d.status,
            valuation_of_difference: d.valuation_of_difference,
            guaranteed_precision: Some(d.guaranteed_precision),
            relative_digits: Some(d.relative_digits),
            detail: None,
        }
    }

    fn from_error(case: String, params: CaseParams, e: &Error) -> Self {
        CaseReport {
            case,
            params,
            pass: false,
            status: error_status(e),
            valuation_of_difference: None,
            guaranteed_precision: None,
            relative_digits: None,
            detail: Some(e.to_string()),
        }
    }

    fn from_result(case: String, params: CaseParams, r: Result<Discrepancy>) -> Self {
        match r {
            Ok(d) => Self::from_discrepancy(case, params, &d),
            Err(e) => Self::from_error(case, params, &e),
        }
    }
}

/// Errors caused by too little precision are exhaustion, not failure.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::PrecisionLoss(_)
        | Error::DivisionByZero(_)
        | Error::ZeroInverse
        | Error::DegenerateAction => Status::PrecisionExhausted,
        _ => Status::Fail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    /// `Fail` if any case failed, else `PrecisionExhausted` if any case ran
    /// out of precision, else `Pass`.
    pub fn status(&self) -> Status {
        let statuses = self.cases.iter().map(|c| c.status);
        if statuses.clone().any(|s| s == Status::Fail) {
            Status::Fail
        } else if statuses.clone().any(|s| s == Status::PrecisionExhausted) {
            Status::PrecisionExhausted
        } else {
            Status::Pass
        }
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Parameters one step up in `B`, `P` and `D`, each raised alone.
pub fn raised_params(
    params: NumericParams,
    q: u32,
    r: usize,
) -> [(&'static str, NumericParams); 3] {
    let d = params.d.unwrap_or_else(|| degree_bound(params.n, q, r));
    [
        (
            "B+1",
            NumericParams {
                b: params.b + 1,
                ..params
            },
        ),
        (
            "P+20",
            NumericParams {
                p: params.p + 20,
                ..params
            },
        ),
        (
            "D+1",
            NumericParams {
                d: Some(d + 1),
                ..params
            },
        ),
    ]
}

fn product_case(case: String, point: &TestPoint) -> CaseReport {
    let params = CaseParams::of(point);
    let r = expansion_for(point)
        .and_then(|e| check_with_expansion(point, &e))
        .map(|c| c.discrepancy);
    CaseReport::from_result(case, params, r)
}

/// All cases for one point, in a fixed order.
fn point_cases(point: &TestPoint, cfg: &SuiteConfig, stream: u64) -> Vec<CaseReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let name = &point.name;
    let params = CaseParams::of(point);
    let mut out = vec![product_case(format!("product_vs_direct/{name}"), point)];
    if cfg.stability {
        for (label, raised) in raised_params(point.params, point.q(), point.rank()) {
            let case = format!("stability/{name}/{label}");
            out.push(match point.with_params(raised) {
                Ok(p) => product_case(case, &p),
                Err(e) => CaseReport::from_error(case, CaseParams::of(point), &e),
            });
        }
    }
    let labelled = covariance_matrices(point.omega.field(), point.rank(), &mut rng);
    let gammas: Vec<_> = labelled.iter().map(|(_, g)| g.clone()).collect();
    match verify_covariance(point, &gammas) {
        Ok(ds) => {
            for ((label, _), d) in labelled.iter().zip(&ds) {
                out.push(CaseReport::from_discrepancy(
                    format!("covariance/{name}/{label}"),
                    params.clone(),
                    d,
                ));
            }
        }
        Err(e) => out.push(CaseReport::from_error(
            format!("covariance/{name}"),
            params.clone(),
            &e,
        )),
    }
    for k in 1..=cfg.random_arguments {
        match random_argument(point, &mut rng) {
            Ok(x) => {
                out.push(CaseReport::from_result(
                    format!("exp_product/{name}/{k}"),
                    params.clone(),
                    verify_exp_product(point, &x, EXP_PRODUCT_TERMS),
                ));
                out.push(CaseReport::from_result(
                    format!("torsion_product/{name}/{k}"),
                    params.clone(),
                    verify_torsion_product(point, &x),
                ));
            }
            Err(e) => out.push(CaseReport::from_error(
                format!("exp_product/{name}/{k}"),
                params.clone(),
                &e,
            )),
        }
    }
    if point.rank() == 2 {
        let case = format!("fa_decay/{name}");
        out.push(match lemma1_empirical(point, LEMMA1_DEGREES) {
            Ok(rows) => {
                let pass = lemma1_decreasing(&rows);
                let table: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{}:{}",
                            r.degree,
                            r.max_log_abs.map_or("-inf".into(), |v| v.to_string())
                        )
                    })
                    .collect();
                CaseReport {
                    case,
                    params: params.clone(),
                    pass,
                    status: if pass { Status::Pass } else { Status::Fail },
                    valuation_of_difference: None,
                    guaranteed_precision: None,
                    relative_digits: None,
                    detail: Some(format!("max log_q |f_a(u)| by degree: {}", table.join(" "))),
                }
            }
            Err(e) => CaseReport::from_error(case, params.clone(), &e),
        });
    }
    out.push(CaseReport::from_result(
        format!("leading_power/{name}"),
        params.clone(),
        verify_leading_power(&point.sub_lattice),
    ));
    out.push(CaseReport::from_result(
        format!("delta_two_ways/{name}"),
        params,
        verify_delta_two_ways(point),
    ));
    out
}

enum Slot {
    Point(Box<TestPoint>),
    Broken(String, CaseParams, Error),
}

/// Runs the suite. Cases run in parallel; the report order is fixed by the
/// configuration alone.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut slots = Vec::new();
    for &(q, r) in &cfg.shapes {
        let shape_params = CaseParams {
            q,
            r,
            b: cfg.params.b,
            p: cfg.params.p,
            n: cfg.params.n,
            d: cfg
                .params
                .d
                .unwrap_or_else(|| degree_bound(cfg.params.n, q, r)),
        };
        match builtin_points(q, r, cfg.params) {
            Ok(points) => slots.extend(points.into_iter().map(|p| Slot::Point(Box::new(p)))),
            Err(e @ Error::InvalidParameter(_)) => return Err(e),
            Err(e) => slots.push(Slot::Broken(
                format!("points/q{q}-r{r}"),
                shape_params.clone(),
                e,
            )),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((q as u64) << 32) | r as u64);
        for k in 0..cfg.random_points {
            let name = format!("q{q}-r{r}-rand{}", k + 1);
            slots.push(
                match random_point(q, r, &mut rng, cfg.params, name.clone()) {
                    Ok(p) => Slot::Point(Box::new(p)),
                    Err(e) => Slot::Broken(format!("points/{name}"), shape_params.clone(), e),
                },
            );
        }
    }
    let cases = slots
        .par_iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            Slot::Point(p) => point_cases(p, cfg, i as u64),
            Slot::Broken(case, params, e) => {
                vec![CaseReport::from_error(case.clone(), params.clone(), e)]
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SuiteReport { cases })
}
