//! Elements of `A = F_q[t]`.

use std::fmt;

use serde::ser::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::ring::Ring;

/// Polynomial in `t` over `F_q`, coefficients low degree first, no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct APoly {
    field: &'static Gf,
    coeffs: Vec<u32>,
}

impl APoly {
    pub fn new(field: &'static Gf, mut coeffs: Vec<u32>) -> APoly {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        APoly { field, coeffs }
    }

    pub fn zero(field: &'static Gf) -> APoly {
        APoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &'static Gf) -> APoly {
        APoly::constant(field, 1)
    }

    pub fn constant(field: &'static Gf, c: u32) -> APoly {
        APoly::new(field, vec![c])
    }

    /// The variable `t`.
    pub fn t(field: &'static Gf) -> APoly {
        APoly::monomial(field, 1, 1)
    }

    pub fn monomial(field: &'static Gf, c: u32, degree: usize) -> APoly {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        APoly::new(field, coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; 0 for the zero polynomial.
    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `t^{q^i} - t`.
    pub fn carlitz_bracket(field: &'static Gf, i: u32) -> APoly {
        let n = (field.q() as usize).pow(i);
        let mut out = APoly::monomial(field, 1, n);
        out = out.sub(&APoly::t(field));
        out
    }

    /// Divide by the leading coefficient.
    pub fn monic_part(&self) -> Result<APoly> {
        let inv = self.field.inv(self.leading())?;
        Ok(self.scale(inv))
    }
}

impl Ring for APoly {
    fn field(&self) -> &'static Gf {
        self.field
    }

    fn zero_like(&self) -> Self {
        APoly::zero(self.field)
    }

    fn one_like(&self) -> Self {
        APoly::one(self.field)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn add(&self, rhs: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        APoly::new(f, coeffs)
    }

    fn neg(&self) -> Self {
        let f = self.field;
        APoly {
            field: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        APoly::new(
            self.field,
            self.field.convolve(&self.coeffs, &rhs.coeffs, len),
        )
    }

    fn scale(&self, c: u32) -> Self {
        let f = self.field;
        APoly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    fn frobenius(&self) -> Self {
        let f = self.field;
        let p = f.p() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = f.frobenius(c);
        }
        APoly { field: f, coeffs }
    }

    fn try_inv(&self) -> Result<Self> {
        match self.degree() {
            Some(0) => Ok(APoly::constant(self.field, self.field.inv(self.coeffs[0])?)),
            Some(_) => Err(Error::DivisionByZero(format!(
                "{self} is not a unit of F_q[t]"
            ))),
            None => Err(Error::ZeroInverse),
        }
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APoly[{}]({self})", self.field.q())
    }
}

impl Serialize for APoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Every monic polynomial of degree `<= max_degree`, degree-major and then
/// counting upward in the lower coefficients with `c_0` varying fastest.
pub fn monic_polys(field: &'static Gf, max_degree: usize) -> impl Iterator<Item = APoly> {
    (0..=max_degree).flat_map(move |d| monic_of_degree(field, d))
}

pub fn monic_of_degree(field: &'static Gf, d: usize) -> impl Iterator<Item = APoly> {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((k % q) as u32);
            k /= q;
        }
        coeffs.push(1);
        APoly::new(field, coeffs)
    })
}

/// Every nonzero polynomial of degree `<= max_degree`, ordered by degree,
/// then leading coefficient, then the monic order above.
pub fn nonzero_polys(field: &'static Gf, max_degree: usize) -> impl Iterator<Item = APoly> {
    (0..=max_degree).flat_map(move |d| {
        (1..field.q()).flat_map(move |c| monic_of_degree(field, d).map(move |m| m.scale(c)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn monic_enumeration_examples() {
        let f2 = Gf::get(2).unwrap();
        let got: Vec<String> = monic_polys(f2, 1).map(|a| a.to_string()).collect();
        assert_eq!(got, ["1", "t", "t + 1"]);
        assert_eq!(monic_polys(f2, 2).count(), 7);
        let f3 = Gf::get(3).unwrap();
        assert_eq!(monic_of_degree(f3, 2).count(), 9);
    }

    #[test]
    fn monic_enumeration_complete_and_distinct() {
        for q in [2u32, 3] {
            let f = Gf::get(q).unwrap();
            for d in 0..=3usize {
                let all: Vec<APoly> = monic_polys(f, d).collect();
                let expected: usize = (0..=d).map(|j| (q as usize).pow(j as u32)).sum();
                assert_eq!(all.len(), expected);
                let keys: HashSet<Vec<u32>> = all.iter().map(|a| a.coeffs().to_vec()).collect();
                assert_eq!(keys.len(), expected);
                assert!(all.iter().all(|a| a.is_monic() && a.degree().unwrap() <= d));
            }
            let nz = nonzero_polys(f, 2).count();
            assert_eq!(nz, (q as usize).pow(3) - 1);
        }
    }

    #[test]
    fn degree_is_additive() {
        let f = Gf::get(9).unwrap();
        let a = APoly::new(f, vec![1, 2, 0, 5]);
        let b = APoly::new(f, vec![0, 7, 3]);
        assert_eq!(a.mul(&b).degree(), Some(5));
        assert!(a.mul(&APoly::zero(f)).is_zero());
    }

    #[test]
    fn canonical_form_strips_zeros() {
        let f = Gf::get(3).unwrap();
        let a = APoly::new(f, vec![1, 0, 0]);
        assert_eq!(a.coeffs(), &[1]);
        assert!(APoly::new(f, vec![0, 0]).is_zero());
        assert_eq!(
            serde_json::to_string(&APoly::new(f, vec![2, 0, 1])).unwrap(),
            "[2,0,1]"
        );
    }

    #[test]
    fn frobenius_matches_power() {
        let f = Gf::get(9).unwrap();
        let a = APoly::new(f, vec![4, 1, 8]);
        assert_eq!(a.frobenius(), a.pow(3));
        assert_eq!(a.frobenius_q(), a.pow(9));
    }

    #[test]
    fn only_constants_invert() {
        let f = Gf::get(5).unwrap();
        assert_eq!(
            APoly::constant(f, 2).try_inv().unwrap(),
            APoly::constant(f, 3)
        );
        assert!(APoly::t(f).try_inv().is_err());
        assert_eq!(APoly::zero(f).try_inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn display() {
        let f = Gf::get(3).unwrap();
        assert_eq!(APoly::carlitz_bracket(f, 1).to_string(), "t^3 + 2*t");
    }
}
