//! The Carlitz period `xi`, the generator of the period lattice of
//! `phi_t = tX + X^q`.
//!
//! With the uniformizer `s^m = -1/t` and `l = m/(q-1)`,
//!
//! ```text
//! xi = s^{-lq} * (1 - t^{1-q})^{1/(q-1)} * prod_{i>=1} (1 - [i]/[i+1]),   [i] = t^{q^i} - t.
//! ```
//!
//! `s^{-lq}` is the fixed `(q-1)`-st root of `-t^q`: its `(q-1)`-st power
//! is `s^{-mq} = (-t)^q = -t^q`. The unit factor turns `-t^q` into
//! `-[1] = t - t^q`; without it the lattice `A xi` has a Carlitz leading
//! coefficient different from 1 (see the tests). The unit is computed as
//! `prod_{i>=0} (1 - x^{q^i})^{-1}` with `x = t^{1-q} = s^{m(q-1)}`.

use crate::error::{Error, Result};
use crate::field::{APoly, Gf, RamifiedSeries};
use crate::ring::Ring;

/// Truncation of `xi` to a requested relative precision.
#[derive(Clone, Debug)]
pub struct XiValue {
    pub value: RamifiedSeries,
    /// Number of factors of the infinite product that were multiplied in.
    pub product_factors: usize,
}

/// Smallest ramification that can hold `xi`.
pub fn default_ramification(q: u32) -> u32 {
    q - 1
}

fn check_ramification(field: &Gf, m: u32) -> Result<u32> {
    let q = field.q();
    if m == 0 || !m.is_multiple_of(q - 1) {
        return Err(Error::InvalidParameter(format!(
            "ramification {m} is not a multiple of q - 1 = {}",
            q - 1
        )));
    }
    Ok(m / (q - 1))
}

/// `prod_{i>=1} (1 - [i]/[i+1])` to relative precision `prec`.
fn bracket_product(field: &'static Gf, m: u32, prec: i64) -> Result<(RamifiedSeries, usize)> {
    let q = field.q() as i64;
    let one = RamifiedSeries::one(field, m);
    let mut acc = one.with_precision(prec);
    let mut used = 0;
    let mut i = 1u32;
    // Factor i is 1 + O(s^{m(q^{i+1} - q^i)}).
    while m as i64 * (q.pow(i + 1) - q.pow(i)) < prec {
        let num = RamifiedSeries::from_apoly(&APoly::carlitz_bracket(field, i), m);
        let den = RamifiedSeries::from_apoly(&APoly::carlitz_bracket(field, i + 1), m)
            .with_relative_precision(prec);
        let factor = one.sub(&num.div(&den)?);
        acc = acc.mul(&factor);
        used += 1;
        i += 1;
    }
    Ok((acc, used))
}

/// `(1 - t^{1-q})^{1/(q-1)}` to absolute (= relative) precision `prec`.
fn bracket_unit(field: &'static Gf, m: u32, prec: i64) -> Result<RamifiedSeries> {
    let q = field.q() as i64;
    let one = RamifiedSeries::one(field, m);
    let x = RamifiedSeries::monomial(field, m, 1, m as i64 * (q - 1));
    let mut acc = one.with_precision(prec);
    let mut xp = x;
    while xp.valuation().is_some_and(|v| v < prec) {
        acc = acc.mul(&one.sub(&xp).with_precision(prec).inv()?);
        xp = xp.frobenius_q();
    }
    Ok(acc)
}

/// `xi` at ramification `m` (a multiple of `q - 1`) and relative precision `prec`.
pub fn compute_xi(field: &'static Gf, m: u32, prec: i64) -> Result<XiValue> {
    let l = check_ramification(field, m)?;
    if prec < 1 {
        return Err(Error::InvalidParameter("xi needs precision >= 1".into()));
    }
    let q = field.q() as i64;
    let root = RamifiedSeries::monomial(field, m, 1, -(l as i64) * q);
    let (prod, used) = bracket_product(field, m, prec)?;
    let unit = bracket_unit(field, m, prec)?;
    Ok(XiValue {
        value: root.mul(&unit).mul(&prod),
        product_factors: used,
    })
}

/// The same product with the bare root of `-t^q` in front and no unit
/// correction. Kept to document why the correction is needed.
#[doc(hidden)]
pub fn compute_xi_uncorrected(field: &'static Gf, m: u32, prec: i64) -> Result<XiValue> {
    let l = check_ramification(field, m)?;
    let q = field.q() as i64;
    let root = RamifiedSeries::monomial(field, m, 1, -(l as i64) * q);
    let (prod, used) = bracket_product(field, m, prec)?;
    Ok(XiValue {
        value: root.mul(&prod),
        product_factors: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn absolute_value() {
        for q in [2u32, 3, 4, 5] {
            let f = Gf::get(q).unwrap();
            for mult in [1u32, 2] {
                let m = (q - 1) * mult;
                let xi = compute_xi(f, m, 40).unwrap().value;
                assert_eq!(xi.abs_log(), Some(Ratio::new(q as i64, q as i64 - 1)));
                assert_eq!(xi.relative_precision(), 40);
            }
        }
    }

    #[test]
    fn power_is_unramified() {
        for q in [3u32, 4, 5] {
            let f = Gf::get(q).unwrap();
            let xi = compute_xi(f, q - 1, 50).unwrap().value;
            let pow = xi.pow(q as u64 - 1);
            assert!(pow.is_unramified());
            let ratio = pow
                .div(&RamifiedSeries::from_apoly(&APoly::t(f).pow(q as u64), q - 1).neg())
                .unwrap();
            assert!(ratio.is_unramified());
            assert_eq!(ratio.valuation(), Some(0));
        }
    }

    #[test]
    fn first_factor_for_q2() {
        // 1 - (t^2 - t)/(t^4 - t) = 1 - s^2 - s^3 - ... at m = 1, expanded directly.
        let f = Gf::get(2).unwrap();
        let p = 30;
        let t = RamifiedSeries::t(f, 1);
        let num = t.pow(2).sub(&t);
        let den = t.pow(4).sub(&t).with_relative_precision(p);
        let factor = RamifiedSeries::one(f, 1).sub(&num.div(&den).unwrap());
        // (t^2 - t)/(t^4 - t) = 1/(t^2 + t + 1) over F_2 = s^2/(1 + s + s^2)
        let mut expected = RamifiedSeries::one(f, 1);
        let series = RamifiedSeries::from_coeffs(f, 1, 0, vec![1, 1, 1], crate::field::EXACT)
            .with_precision(p)
            .inv()
            .unwrap();
        expected = expected.sub(&RamifiedSeries::monomial(f, 1, 1, 2).mul(&series));
        assert!(factor.agrees(&expected));
        assert_eq!(factor.coeff(1), 0);
        assert_eq!(factor.coeff(2), 1);
        assert_eq!(factor.coeff(3), 1);
    }

    #[test]
    fn precision_is_stable() {
        for q in [2u32, 3, 9] {
            let f = Gf::get(q).unwrap();
            let a = compute_xi(f, q - 1, 30).unwrap().value;
            let b = compute_xi(f, q - 1, 60).unwrap().value;
            assert!(a.agrees(&b));
            assert_eq!(b.with_precision(a.precision()), a);
        }
    }

    #[test]
    fn rejects_incompatible_ramification() {
        let f = Gf::get(3).unwrap();
        assert!(compute_xi(f, 3, 10).is_err());
        assert!(compute_xi(f, 4, 0).is_err());
    }
}
