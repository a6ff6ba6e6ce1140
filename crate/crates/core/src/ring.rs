use std::fmt;

use crate::error::Result;
use crate::field::Gf;

/// Commutative `F_q`-algebra of characteristic `p` with a first-class
/// Frobenius `x -> x^p`.
///
/// Elements carry their base field, so there is no context-free zero; use
/// [`Ring::zero_like`] and [`Ring::one_like`] on an existing element.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn field(&self) -> &'static Gf;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiply by the `F_q` element with code `c`.
    fn scale(&self, c: u32) -> Self;
    /// `x^p`.
    fn frobenius(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    /// `x^q`, as `e` iterated `p`-th powers.
    fn frobenius_q(&self) -> Self {
        let mut x = self.frobenius();
        for _ in 1..self.field().e() {
            x = x.frobenius();
        }
        x
    }

    /// Square-and-multiply.
    fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}
