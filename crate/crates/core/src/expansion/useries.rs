//! Truncated power series `sum_{n < N} f_n u^n + O(u^N)` over a [`Ring`].

use crate::error::Result;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct USeries<R> {
    order: usize,
    /// Length `order`; zero entries are stored explicitly.
    coeffs: Vec<R>,
}

impl<R: Ring> USeries<R> {
    /// Series from leading coefficients; missing ones are zero, extra ones dropped.
    pub fn new(like: &R, order: usize, mut coeffs: Vec<R>) -> Self {
        coeffs.truncate(order);
        coeffs.resize(order, like.zero_like());
        USeries { order, coeffs }
    }

    pub fn zero(like: &R, order: usize) -> Self {
        Self::new(like, order, Vec::new())
    }

    pub fn one(like: &R, order: usize) -> Self {
        Self::new(like, order, vec![like.one_like()])
    }

    /// `c u^n`.
    pub fn monomial(c: R, n: usize, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        if n < order {
            s.coeffs[n] = c;
        }
        s
    }

    /// `1 + sum c_k u^{e_k}` from sparse terms.
    pub fn one_plus(like: &R, order: usize, terms: &[(u64, R)]) -> Self {
        let mut s = Self::one(like, order);
        for (e, c) in terms {
            if (*e as usize) < order {
                s.coeffs[*e as usize] = s.coeffs[*e as usize].add(c);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `u^n`; `None` beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&R> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn like(&self) -> Option<&R> {
        self.coeffs.first()
    }

    /// Same series known to a smaller order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order);
        USeries {
            order: order.min(self.order),
            coeffs,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .take(order)
            .map(|(a, b)| a.add(b))
            .collect();
        USeries { order, coeffs }
    }

    pub fn neg(&self) -> Self {
        USeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale_by(&self, c: &R) -> Self {
        USeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Product truncated at the smaller order. Zero coefficients are skipped,
    /// which makes products with sparse factors cheap.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut out: Vec<Option<R>> = vec![None; order];
        let (sparse, dense) = if self.nnz() <= rhs.nnz() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (i, a) in sparse.coeffs.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in dense.coeffs.iter().enumerate().take(order - i) {
                if b.is_zero() {
                    continue;
                }
                let term = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        match self.like() {
            Some(like) => {
                let zero = like.zero_like();
                USeries {
                    order,
                    coeffs: out
                        .into_iter()
                        .map(|c| c.unwrap_or_else(|| zero.clone()))
                        .collect(),
                }
            }
            None => USeries {
                order,
                coeffs: Vec::new(),
            },
        }
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Inverse; the constant term must be a unit of the coefficient ring.
    pub fn inv(&self) -> Result<Self> {
        let Some(c0) = self.like() else {
            return Ok(self.clone());
        };
        let c0_inv = c0.try_inv()?;
        let mut out: Vec<R> = Vec::with_capacity(self.order);
        out.push(c0_inv.clone());
        for n in 1..self.order {
            let mut acc = c0.zero_like();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !out[n - k].is_zero() {
                    acc = acc.add(&self.coeffs[k].mul(&out[n - k]));
                }
            }
            out.push(acc.mul(&c0_inv).neg());
        }
        Ok(USeries {
            order: self.order,
            coeffs: out,
        })
    }

    /// `x^p = sum f_n^p u^{np}`.
    pub fn frobenius(&self) -> Self {
        let Some(like) = self.like() else {
            return self.clone();
        };
        let p = like.field().p() as usize;
        let mut coeffs = vec![like.zero_like(); self.order];
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * p >= self.order {
                break;
            }
            if !c.is_zero() {
                coeffs[n * p] = c.frobenius();
            }
        }
        USeries {
            order: self.order,
            coeffs,
        }
    }

    /// `x^e` from the base-`p` digits of `e`: `prod_k (x^{p^k})^{d_k}`, with
    /// each `x^{p^k}` obtained by the Frobenius shortcut.
    pub fn charp_pow(&self, mut e: u64) -> Self {
        let Some(like) = self.like() else {
            return self.clone();
        };
        let p = like.field().p() as u64;
        let mut acc = Self::one(like, self.order);
        let mut block = self.clone();
        while e > 0 {
            for _ in 0..e % p {
                acc = acc.mul(&block);
            }
            e /= p;
            if e > 0 {
                block = block.frobenius();
            }
        }
        acc
    }

    /// `x^e` by generic square-and-multiply.
    pub fn naive_pow(&self, mut e: u64) -> Self {
        let Some(like) = self.like() else {
            return self.clone();
        };
        let mut acc = Self::one(like, self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `sum f_n x^n` with the coefficients mapped into the ring of `x`.
    pub fn eval_with<S: Ring>(&self, x: &S, f: impl Fn(&R) -> Result<S>) -> Result<S> {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x);
            if !c.is_zero() {
                acc = acc.add(&f(c)?);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{APoly, Gf};

    fn series(q: u32, order: usize, coeffs: &[&[u32]]) -> USeries<APoly> {
        let f = Gf::get(q).unwrap();
        let cs = coeffs.iter().map(|c| APoly::new(f, c.to_vec())).collect();
        USeries::new(&APoly::one(f), order, cs)
    }

    #[test]
    fn geometric_inverse() {
        let x = series(3, 10, &[&[1], &[1]]);
        let inv = x.inv().unwrap();
        for (n, c) in inv.coeffs().iter().enumerate() {
            let expected = if n % 2 == 0 { 1 } else { 2 };
            assert_eq!(c.coeffs(), &[expected]);
        }
        assert_eq!(
            x.mul(&inv),
            USeries::one(&APoly::one(x.coeffs()[0].field()), 10)
        );
    }

    #[test]
    fn truncation_of_products() {
        let f = Gf::get(2).unwrap();
        let one = APoly::one(f);
        let a = USeries::monomial(one.clone(), 9, 10);
        let b = USeries::monomial(one.clone(), 1, 10);
        assert!(a.mul(&b).is_zero());
        assert_eq!(a.mul(&b).order(), 10);
    }

    #[test]
    fn inverse_of_non_unit_fails() {
        let x = series(3, 5, &[&[0, 1], &[1]]);
        assert!(x.inv().is_err());
    }

    #[test]
    fn frobenius_is_pth_power() {
        let x = series(3, 20, &[&[1], &[0, 1], &[2], &[1, 1]]);
        assert_eq!(x.frobenius(), x.naive_pow(3));
        let q = series(9, 20, &[&[1], &[3, 1], &[2]]);
        assert_eq!(q.frobenius().frobenius(), q.naive_pow(9));
    }

    #[test]
    fn charp_pow_matches_naive() {
        let x = series(3, 30, &[&[1], &[0, 0, 1], &[1, 2]]);
        for e in [0u64, 1, 2, 3, 8, 16, 26, 80] {
            assert_eq!(x.charp_pow(e), x.naive_pow(e), "e = {e}");
        }
        assert_eq!(x.charp_pow(0), USeries::one(&x.coeffs()[0], 30));
    }

    #[test]
    fn eval_is_horner() {
        let f = Gf::get(3).unwrap();
        let x = series(3, 3, &[&[1], &[2], &[0, 1]]);
        let t = APoly::t(f);
        let v = x.eval_with(&t, |c| Ok(c.clone())).unwrap();
        // 1 + 2t + t * t^2
        assert_eq!(v, APoly::new(f, vec![1, 2, 0, 1]));
    }
}
