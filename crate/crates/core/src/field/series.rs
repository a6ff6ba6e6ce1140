//! Truncated Laurent series in a uniformizer `s` of a tamely ramified
//! extension of `F_inf = F_q((1/t))`.
//!
//! The uniformizer satisfies `s^m = -1/t`, so `t = -s^{-m}` and
//! `|x| = q^{-v(x)/m}`. Precision is absolute: a value is known modulo
//! `s^prec`. Exact values (finite Laurent polynomials in `s`) carry
//! `prec == EXACT`.

use std::borrow::Cow;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::field::{APoly, Gf};
use crate::ring::Ring;

/// Sentinel absolute precision of exact values.
pub const EXACT: i64 = i64::MAX;

#[inline]
fn padd(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

/// Element of `F_q((s))`, `s^m = -1/t`, known modulo `s^prec`.
///
/// Invariants: `coeffs[0] != 0` and `coeffs.last() != 0` when non-empty,
/// and `val + coeffs.len() <= prec`. A series with no coefficients is zero
/// at its precision; with `prec == EXACT` it is exactly zero.
#[derive(Clone, PartialEq, Eq)]
pub struct RamifiedSeries {
    field: &'static Gf,
    m: u32,
    val: i64,
    coeffs: Vec<u32>,
    prec: i64,
}

impl RamifiedSeries {
    /// Build from coefficients of `s^val, s^{val+1}, ...` known modulo `s^prec`.
    pub fn from_coeffs(
        field: &'static Gf,
        m: u32,
        val: i64,
        mut coeffs: Vec<u32>,
        prec: i64,
    ) -> Self {
        assert!(m >= 1, "ramification must be positive");
        if prec != EXACT {
            let keep = (prec - val).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => RamifiedSeries {
                field,
                m,
                val: if prec == EXACT { 0 } else { prec },
                coeffs: Vec::new(),
                prec,
            },
            Some(k) => {
                let end = coeffs.iter().rposition(|&c| c != 0).unwrap() + 1;
                coeffs.truncate(end);
                coeffs.drain(..k);
                RamifiedSeries {
                    field,
                    m,
                    val: val + k as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    pub fn zero(field: &'static Gf, m: u32) -> Self {
        Self::from_coeffs(field, m, 0, Vec::new(), EXACT)
    }

    /// Zero known only modulo `s^prec`.
    pub fn zero_mod(field: &'static Gf, m: u32, prec: i64) -> Self {
        Self::from_coeffs(field, m, 0, Vec::new(), prec)
    }

    pub fn one(field: &'static Gf, m: u32) -> Self {
        Self::constant(field, m, 1)
    }

    pub fn constant(field: &'static Gf, m: u32, c: u32) -> Self {
        Self::monomial(field, m, c, 0)
    }

    /// `c * s^exp`, exact.
    pub fn monomial(field: &'static Gf, m: u32, c: u32, exp: i64) -> Self {
        Self::from_coeffs(field, m, exp, vec![c], EXACT)
    }

    /// The uniformizer `s`.
    pub fn uniformizer(field: &'static Gf, m: u32) -> Self {
        Self::monomial(field, m, 1, 1)
    }

    /// `t = -s^{-m}`.
    pub fn t(field: &'static Gf, m: u32) -> Self {
        Self::monomial(field, m, field.neg(1), -(m as i64))
    }

    /// Exact image of `a(t)`.
    pub fn from_apoly(a: &APoly, m: u32) -> Self {
        let field = a.field();
        let Some(d) = a.degree() else {
            return Self::zero(field, m);
        };
        // a(t) = sum c_j (-1)^j s^{-jm}; lowest s-exponent is -dm.
        let mm = m as usize;
        let mut coeffs = vec![0u32; d * mm + 1];
        for (j, &c) in a.coeffs().iter().enumerate() {
            let signed = if j % 2 == 1 { field.neg(c) } else { c };
            coeffs[(d - j) * mm] = signed;
        }
        Self::from_coeffs(field, m, -((d * mm) as i64), coeffs, EXACT)
    }

    pub fn field(&self) -> &'static Gf {
        self.field
    }

    pub fn ramification(&self) -> u32 {
        self.m
    }

    /// `s`-adic valuation, `None` when zero at the tracked precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Absolute precision (`EXACT` for exact values).
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Number of known digits after the leading one (`EXACT` for exact values,
    /// 0 for a zero series).
    pub fn relative_precision(&self) -> i64 {
        match self.valuation() {
            None => 0,
            Some(_) if self.prec == EXACT => EXACT,
            Some(v) => self.prec - v,
        }
    }

    /// Coefficient of `s^exp`; meaningful only for `exp < precision()`.
    pub fn coeff(&self, exp: i64) -> u32 {
        let i = exp - self.val;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn leading_coeff(&self) -> u32 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `log_q |x| = -v/m`, `None` for zero.
    pub fn abs_log(&self) -> Option<Ratio<i64>> {
        self.valuation().map(|v| Ratio::new(-v, self.m as i64))
    }

    /// Forget digits at and above `s^prec`.
    pub fn with_precision(&self, prec: i64) -> Self {
        Self::from_coeffs(
            self.field,
            self.m,
            self.val,
            self.coeffs.clone(),
            prec.min(self.prec),
        )
    }

    /// Keep `r` digits from the leading one. Zero series are unchanged.
    pub fn with_relative_precision(&self, r: i64) -> Self {
        match self.valuation() {
            Some(v) => self.with_precision(padd(v, r)),
            None => self.clone(),
        }
    }

    /// Re-express over `s' = s^{1/k}` with `k = new_m / m`.
    pub fn refine(&self, new_m: u32) -> Self {
        assert!(
            new_m.is_multiple_of(self.m),
            "ramification {new_m} does not refine {}",
            self.m
        );
        let k = (new_m / self.m) as i64;
        if k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![
            0u32;
            if self.coeffs.is_empty() {
                0
            } else {
                (self.coeffs.len() - 1) * k as usize + 1
            }
        ];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c;
        }
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec * k
        };
        Self::from_coeffs(self.field, new_m, self.val * k, coeffs, prec)
    }

    fn aligned<'a>(&'a self, rhs: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        if self.m == rhs.m {
            (Cow::Borrowed(self), Cow::Borrowed(rhs))
        } else {
            let m = self.m.lcm(&rhs.m);
            (Cow::Owned(self.refine(m)), Cow::Owned(rhs.refine(m)))
        }
    }

    /// Multiplicative inverse.
    ///
    /// A series that is zero at finite precision raises `PrecisionLoss`;
    /// exact non-monomials must first be given a finite precision.
    pub fn inv(&self) -> Result<Self> {
        let f = self.field;
        let Some(v) = self.valuation() else {
            return if self.prec == EXACT {
                Err(Error::ZeroInverse)
            } else {
                Err(Error::PrecisionLoss(format!(
                    "inverting a series that vanishes modulo s^{}",
                    self.prec
                )))
            };
        };
        let c_inv = f.inv(self.coeffs[0])?;
        if self.prec == EXACT {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(f, self.m, c_inv, -v));
            }
            return Err(Error::PrecisionLoss(
                "inverse of an exact non-monomial needs a finite precision".into(),
            ));
        }
        let r = (self.prec - v) as usize;
        let a = &self.coeffs;
        let mut b = vec![0u32; r];
        b[0] = c_inv;
        let neg_c_inv = f.neg(c_inv);
        if f.is_prime() {
            let p = f.p() as u64;
            for n in 1..r {
                let kmax = n.min(a.len() - 1);
                let mut acc = 0u64;
                for k in 1..=kmax {
                    acc += a[k] as u64 * b[n - k] as u64;
                }
                b[n] = f.mul((acc % p) as u32, neg_c_inv);
            }
        } else {
            for n in 1..r {
                let kmax = n.min(a.len() - 1);
                let mut acc = 0u32;
                for k in 1..=kmax {
                    acc = f.add(acc, f.mul(a[k], b[n - k]));
                }
                b[n] = f.mul(acc, neg_c_inv);
            }
        }
        Ok(Self::from_coeffs(f, self.m, -v, b, -v + r as i64))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Whether `self` and `rhs` agree modulo the coarser of their precisions.
    pub fn agrees(&self, rhs: &Self) -> bool {
        self.sub(rhs).is_zero()
    }

    /// No nonzero coefficient at an exponent outside `m Z`, i.e. the value
    /// lies in `F_q((1/t))` as far as it is known.
    pub fn is_unramified(&self) -> bool {
        let m = self.m as i64;
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || (self.val + i as i64) % m == 0)
    }
}

impl Ring for RamifiedSeries {
    fn field(&self) -> &'static Gf {
        self.field
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.field, self.m)
    }

    fn one_like(&self) -> Self {
        Self::one(self.field, self.m)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let (x, y) = self.aligned(rhs);
        let f = x.field;
        let prec = x.prec.min(y.prec);
        let (xv, yv) = (x.valuation(), y.valuation());
        let lo = match (xv, yv) {
            (None, None) => return Self::zero_mod(f, x.m, prec),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        let end = |s: &RamifiedSeries| s.val + s.coeffs.len() as i64;
        let hi = end(&x).max(end(&y)).min(prec);
        if hi <= lo {
            return Self::zero_mod(f, x.m, prec);
        }
        let mut coeffs = vec![0u32; (hi - lo) as usize];
        for s in [&*x, &*y] {
            for (i, &c) in s.coeffs.iter().enumerate() {
                let k = s.val + i as i64 - lo;
                if k >= 0 && (k as usize) < coeffs.len() {
                    coeffs[k as usize] = f.add(coeffs[k as usize], c);
                }
            }
        }
        Self::from_coeffs(f, x.m, lo, coeffs, prec)
    }

    fn neg(&self) -> Self {
        let f = self.field;
        RamifiedSeries {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            ..self.clone()
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let (x, y) = self.aligned(rhs);
        let f = x.field;
        let vx = x.valuation().unwrap_or(x.prec);
        let vy = y.valuation().unwrap_or(y.prec);
        if (x.is_zero() && x.prec == EXACT) || (y.is_zero() && y.prec == EXACT) {
            return Self::zero(f, x.m);
        }
        let prec = padd(vx, y.prec).min(padd(vy, x.prec));
        if x.is_zero() || y.is_zero() {
            return Self::zero_mod(f, x.m, prec);
        }
        let full = x.coeffs.len() + y.coeffs.len() - 1;
        let len = if prec == EXACT {
            full
        } else {
            ((prec - vx - vy).max(0) as usize).min(full)
        };
        let coeffs = f.convolve(&x.coeffs, &y.coeffs, len);
        Self::from_coeffs(f, x.m, vx + vy, coeffs, prec)
    }

    fn scale(&self, c: u32) -> Self {
        let f = self.field;
        if c == 0 {
            return if self.prec == EXACT {
                self.zero_like()
            } else {
                Self::zero_mod(f, self.m, self.prec)
            };
        }
        RamifiedSeries {
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            ..self.clone()
        }
    }

    fn frobenius(&self) -> Self {
        let f = self.field;
        let p = f.p() as i64;
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec * p
        };
        if self.coeffs.is_empty() {
            return Self::from_coeffs(f, self.m, 0, Vec::new(), prec);
        }
        let mut coeffs = vec![0u32; (self.coeffs.len() - 1) * p as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = f.frobenius(c);
        }
        Self::from_coeffs(f, self.m, self.val * p, coeffs, prec)
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}

impl fmt::Display for RamifiedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 6;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                terms.push(format!("{c}*s^{}", self.val + i as i64));
                if terms.len() == SHOWN {
                    break;
                }
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        let body = terms.join(" + ");
        if self.prec == EXACT {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O(s^{})", self.prec)
        }
    }
}

impl fmt::Debug for RamifiedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RamifiedSeries[q={}, m={}]({self})",
            self.field.q(),
            self.m
        )
    }
}

impl Serialize for RamifiedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RamifiedSeries", 5)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("k", &1u32)?;
        st.serialize_field("v", &self.val)?;
        st.serialize_field("P", &(self.prec != EXACT).then_some(self.prec))?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> &'static Gf {
        Gf::get(q).unwrap()
    }

    #[test]
    fn absolute_value_of_rational_function() {
        for q in [2u32, 3, 4] {
            for m in [1u32, 2, 3] {
                let fld = f(q);
                let t = APoly::t(fld);
                let num = RamifiedSeries::from_apoly(&t.pow(2), m);
                let den = RamifiedSeries::from_apoly(&t.pow(3).add(&APoly::one(fld)), m)
                    .with_precision(60);
                let x = num.div(&den).unwrap();
                assert_eq!(x.abs_log(), Some(Ratio::from_integer(-1)));
            }
        }
    }

    #[test]
    fn geometric_series() {
        let fld = f(5);
        let p = 30;
        let one = RamifiedSeries::one(fld, 1);
        let s = RamifiedSeries::uniformizer(fld, 1);
        let x = one.sub(&s).with_precision(p);
        let inv = x.inv().unwrap();
        assert_eq!(inv.precision(), p);
        assert_eq!(inv.coeffs(), vec![1u32; p as usize].as_slice());
        let prod = x.mul(&inv);
        assert!(prod.agrees(&one));
        assert_eq!(prod.precision(), p);
    }

    #[test]
    fn t_is_minus_inverse_uniformizer_power() {
        let fld = f(3);
        let t = RamifiedSeries::t(fld, 2);
        let s = RamifiedSeries::uniformizer(fld, 2);
        let prod = t.mul(&s.pow(2));
        assert_eq!(prod, RamifiedSeries::constant(fld, 2, 2));
        assert_eq!(RamifiedSeries::from_apoly(&APoly::t(fld), 2), t);
    }

    #[test]
    fn precision_rules() {
        let fld = f(3);
        let x = RamifiedSeries::from_coeffs(fld, 1, -2, vec![1, 1, 2, 0, 1], 5);
        let y = RamifiedSeries::from_coeffs(fld, 1, 3, vec![2, 1], 10);
        assert_eq!(x.add(&y).precision(), 5);
        // min(v(x) + P(y), v(y) + P(x)) = min(8, 8)
        assert_eq!(x.mul(&y).precision(), 8);
        let z = RamifiedSeries::zero_mod(fld, 1, 4);
        assert_eq!(x.mul(&z).precision(), 2);
        assert!(matches!(z.inv(), Err(Error::PrecisionLoss(_))));
        assert_eq!(RamifiedSeries::zero(fld, 1).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn refinement_preserves_value() {
        let fld = f(3);
        let x = RamifiedSeries::from_coeffs(fld, 2, -3, vec![1, 2, 0, 1], 4);
        let y = RamifiedSeries::from_coeffs(fld, 3, 1, vec![1, 1], 5);
        let sum = x.add(&y);
        assert_eq!(sum.ramification(), 6);
        assert_eq!(sum.valuation(), Some(-9));
        assert_eq!(sum.precision(), 10);
        let back = x.refine(6);
        assert_eq!(back.coeff(-9), 1);
        assert_eq!(back.coeff(-6), 2);
        assert_eq!(back.coeff(-3), 0);
        assert_eq!(back.coeff(0), 1);
    }

    #[test]
    fn frobenius_tracks_precision() {
        let fld = f(9);
        let x = RamifiedSeries::from_coeffs(fld, 2, -1, vec![3, 5, 7], 6);
        let fx = x.frobenius();
        assert_eq!(fx.precision(), 18);
        assert!(fx.agrees(&x.mul(&x).mul(&x)));
    }

    #[test]
    fn serialization_shape() {
        let fld = f(2);
        let x = RamifiedSeries::from_coeffs(fld, 2, -1, vec![1, 0, 1], 4);
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"m":2,"k":1,"v":-1,"P":4,"coeffs":[1,0,1]}"#
        );
    }
}
