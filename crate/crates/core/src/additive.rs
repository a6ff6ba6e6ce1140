//! `F_q`-linear polynomials `sum_i a_i X^{q^i}` over a [`Ring`].
//!
//! Composition is the twisted product of the skew ring `R{tau}` with
//! `tau a = a^q tau`: `(f o g)_{i+j} += a_i * b_j^{q^i}`.

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct AdditivePoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> AdditivePoly<R> {
    /// `coeffs[i]` multiplies `X^{q^i}`. Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        AdditivePoly { coeffs }
    }

    pub fn zero() -> Self {
        AdditivePoly { coeffs: Vec::new() }
    }

    /// `a X`.
    pub fn linear(a: R) -> Self {
        Self::new(vec![a])
    }

    /// `X`, with the unit taken from `like`.
    pub fn identity(like: &R) -> Self {
        Self::linear(like.one_like())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&R> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `tau`, i.e. `log_q` of the degree in `X`.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Result<&R> {
        self.coeffs.last().ok_or(Error::ZeroPolynomial)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(coeffs)
    }

    /// Multiply every coefficient by the `F_q` element `c` (this is `c o f`).
    pub fn scale(&self, c: u32) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// `self o rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let (n, k) = (self.coeffs.len(), rhs.coeffs.len());
        let mut out: Vec<Option<R>> = vec![None; n + k - 1];
        // twisted[j] = b_j^{q^i}, advanced by one Frobenius per row.
        let mut twisted = rhs.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(Ring::frobenius_q).collect();
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                let term = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        let zero = self.coeffs[0].zero_like();
        Self::new(
            out.into_iter()
                .map(|c| c.unwrap_or_else(|| zero.clone()))
                .collect(),
        )
    }

    /// `sum a_i x^{q^i}` by iterated Frobenius.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = x.zero_like();
        let mut power = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.frobenius_q();
            }
            acc = acc.add(&a.mul(&power));
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> AdditivePoly<S> {
        AdditivePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<AdditivePoly<S>> {
        Ok(AdditivePoly::new(
            self.coeffs.iter().map(f).collect::<Result<_>>()?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{APoly, Gf, RamifiedSeries};

    fn carlitz(q: u32) -> AdditivePoly<APoly> {
        let f = Gf::get(q).unwrap();
        AdditivePoly::new(vec![APoly::t(f), APoly::one(f)])
    }

    #[test]
    fn carlitz_square() {
        let f = Gf::get(3).unwrap();
        let phi = carlitz(3);
        let sq = phi.compose(&phi);
        let t = APoly::t(f);
        assert_eq!(sq.coeffs()[0], t.pow(2));
        assert_eq!(sq.coeffs()[1], t.pow(3).add(&t));
        assert_eq!(sq.coeffs()[2], APoly::one(f));
        assert_eq!(sq.q_degree(), Some(2));
    }

    #[test]
    fn identity_and_zero() {
        let phi = carlitz(3);
        let id = AdditivePoly::identity(&phi.coeffs()[0]);
        assert_eq!(phi.compose(&id), phi);
        assert_eq!(id.compose(&phi), phi);
        assert!(AdditivePoly::<APoly>::zero().compose(&phi).is_zero());
        assert_eq!(
            AdditivePoly::<APoly>::zero().leading(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn leading_coefficients() {
        let f = Gf::get(3).unwrap();
        let phi = carlitz(3);
        assert!(phi.leading().unwrap().is_one());
        let lin = AdditivePoly::linear(APoly::constant(f, 2));
        assert_eq!(lin.leading().unwrap(), &APoly::constant(f, 2));
        let g = AdditivePoly::new(vec![APoly::t(f), APoly::new(f, vec![1, 2])]);
        let h = AdditivePoly::new(vec![APoly::one(f), APoly::t(f)]);
        let lead = g.compose(&h).leading().unwrap().clone();
        assert_eq!(lead, g.leading().unwrap().mul(&h.leading().unwrap().pow(3)));
    }

    #[test]
    fn eval_on_constants_and_zero() {
        let f = Gf::get(3).unwrap();
        let m = 2;
        let phi = carlitz(3).map(|a| RamifiedSeries::from_apoly(a, m));
        let zero = RamifiedSeries::zero(f, m);
        assert!(phi.eval(&zero).is_zero());
        for c in 1..3 {
            let x = RamifiedSeries::constant(f, m, c);
            let t = RamifiedSeries::t(f, m);
            let expected = t.mul(&x).add(&x);
            assert_eq!(phi.eval(&x), expected);
        }
    }
}
