//! Numeric cross-checks of the product expansion against the lattice
//! definition of `Δ`, and of the identities it rests on.

mod checks;
mod points;
mod suite;

pub use checks::{
    covariance_matrices, lemma1_decreasing, lemma1_empirical, numeric_module, random_argument,
    random_unimodular, verify_covariance, verify_delta_two_ways, verify_exp_product,
    verify_leading_power, verify_torsion_product, Lemma1Row,
};
pub use points::{builtin_points, point_ramification, random_point, NumericParams, TestPoint};
pub use suite::{
    error_status, raised_params, run_suite, CaseParams, CaseReport, SuiteConfig, SuiteReport,
    EXP_PRODUCT_TERMS, LEMMA1_DEGREES,
};

use num_rational::Ratio;
use serde::Serialize;

use crate::drinfeld::{delta_direct, LatticeSpec};
use crate::error::{Error, Result};
use crate::expansion::{delta_expansion, ExpansionConfig, ExpansionResult, Mode, USeries};
use crate::field::RamifiedSeries;
use crate::ring::Ring;
use crate::symbolic::CoeffRing;

/// Digits of agreement required for a pass.
pub const TARGET_DIGITS: i64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    PrecisionExhausted,
}

/// Outcome of comparing two values known to finite precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// `v(a - b)` in `s`-units, `None` when the difference vanishes at `guaranteed_precision`.
    pub valuation_of_difference: Option<i64>,
    /// Absolute `s`-adic precision both values are certified to.
    pub guaranteed_precision: i64,
    /// `guaranteed_precision - v(reference)`.
    pub relative_digits: i64,
    /// Ramification `m`; `|a - b| = q^{-valuation_of_difference / m}`.
    pub m: u32,
    pub status: Status,
}

impl Discrepancy {
    /// Compares `a` against the reference `b`; `cap` is an extra bound on the
    /// precision (e.g. a truncation tail).
    pub fn compare(a: &RamifiedSeries, b: &RamifiedSeries, cap: i64, target: i64) -> Self {
        let prec = a.precision().min(b.precision()).min(cap);
        let diff = a.sub(b).with_precision(prec);
        let reference = b.valuation().or(a.valuation());
        let relative_digits = match reference {
            Some(v) => prec.saturating_sub(v),
            None => 0,
        };
        let valuation_of_difference = diff.valuation();
        let status = if valuation_of_difference.is_some() {
            Status::Fail
        } else if relative_digits < target {
            Status::PrecisionExhausted
        } else {
            Status::Pass
        };
        Discrepancy {
            valuation_of_difference,
            guaranteed_precision: prec,
            relative_digits,
            m: a.ramification().max(b.ramification()),
            status,
        }
    }

    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// `log_q |a - b|`.
    pub fn abs_log(&self) -> Option<Ratio<i64>> {
        self.valuation_of_difference
            .map(|v| Ratio::new(-v, self.m as i64))
    }
}

/// Valuation of `d = sup_{|x| <= rho} |e_L(x)|` with `rho = max |b_i| / q`,
/// which bounds `|e_L(lambda)|` for every torsion representative
/// `lambda = sum (c_i / a) b_i`, `deg c_i < deg a`. The basis must have
/// distinct valuation classes.
pub fn torsion_bound_valuation(lattice: &LatticeSpec) -> Result<i64> {
    if !crate::drinfeld::has_distinct_classes(lattice.reduced_basis()) {
        return Err(Error::InvalidParameter(
            "torsion bound needs an orthogonal basis".into(),
        ));
    }
    let m = lattice.ramification() as i64;
    let q = lattice.field().q() as u128;
    let vals: Vec<i64> = lattice
        .reduced_basis()
        .iter()
        .map(|b| b.valuation().unwrap())
        .collect();
    let rho = vals.iter().min().unwrap() + m;
    let top = *vals.iter().max().unwrap();
    // |e(x)| = |x| prod_{0 < |lambda| < |x|} |x / lambda|; in valuations
    // v(d) = v(rho) - sum_{w > v(rho)} #{lambda != 0 : v(lambda) >= w}.
    let mut excess: i64 = 0;
    for w in rho + 1..=top {
        let mut count: u128 = 1;
        for &v in &vals {
            let k = (v - w).div_euclid(m) + 1;
            if k > 0 {
                count = q
                    .checked_pow(k as u32)
                    .and_then(|x| count.checked_mul(x))
                    .ok_or_else(|| {
                        Error::InvalidParameter("lattice too dense for torsion bound".into())
                    })?;
            }
        }
        excess += (count - 1) as i64;
    }
    Ok(rho - excess)
}

/// `sum_n c_n u^n` with coefficients specialized at the point.
fn eval_expansion<R: CoeffRing>(series: &USeries<R>, point: &TestPoint) -> Result<RamifiedSeries> {
    series.eval_with(&point.u, |c| c.specialize(&point.module))
}

/// Certified precision of the product side: `v(Δ' ^q u^{q-1}) + (N - q + 1) v(d u)`.
fn tail_precision(point: &TestPoint, n: usize) -> Result<i64> {
    let q = point.q() as i64;
    let vd = torsion_bound_valuation(&point.sub_lattice)?;
    let vu = point
        .u
        .valuation()
        .ok_or_else(|| Error::PrecisionLoss("u vanishes".into()))?;
    let step = vu + vd;
    if step <= 0 {
        return Err(Error::PrecisionLoss(format!(
            "|d u| = q^{} >= 1: the tail bound does not converge at this point",
            Ratio::new(-step, point.ramification() as i64)
        )));
    }
    let vdelta = point
        .module
        .delta()
        .valuation()
        .ok_or_else(|| Error::PrecisionLoss("Δ' vanishes".into()))?;
    let order = n as i64 - (q - 1);
    Ok(q * vdelta + (q - 1) * vu + order.max(0) * step)
}

/// The two sides of the product formula at one point.
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub direct: RamifiedSeries,
    pub product: RamifiedSeries,
    pub tail_precision: i64,
    pub discrepancy: Discrepancy,
}

/// Product side from a precomputed expansion.
pub fn check_with_expansion(
    point: &TestPoint,
    expansion: &ExpansionResult,
) -> Result<ProductCheck> {
    let (product, n) = match expansion {
        ExpansionResult::Rank2(e) => (eval_expansion(&e.delta, point)?, e.n),
        ExpansionResult::Symbolic(e) => (eval_expansion(&e.delta, point)?, e.n),
    };
    let tail = tail_precision(point, n)?;
    let direct = delta_direct(&point.omega, point.params.b)?;
    let discrepancy = Discrepancy::compare(&product, &direct, tail, TARGET_DIGITS);
    Ok(ProductCheck {
        direct,
        product,
        tail_precision: tail,
        discrepancy,
    })
}

pub fn expansion_for(point: &TestPoint) -> Result<ExpansionResult> {
    let mut cfg = ExpansionConfig::new(point.q(), point.rank(), point.params.n, Mode::Monic);
    cfg.d = point.params.d;
    delta_expansion(&cfg)
}

/// `Δ` by the product formula (specialized at `g`, `Δ'`, evaluated at `u`)
/// against `Δ` from the lattice.
pub fn verify_product_vs_direct(point: &TestPoint) -> Result<Discrepancy> {
    Ok(check_with_expansion(point, &expansion_for(point)?)?.discrepancy)
}
