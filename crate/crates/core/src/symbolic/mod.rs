//! The coefficient rings of `u`-expansions and the symbolic Drinfeld module
//! attached to the sub-lattice `Λ'`.
//!
//! For a rank-`r` expansion the sub-lattice has rank `r - 1` and its module is
//! `phi'_t = tX + g_1 X^q + ... + g_{r-2} X^{q^{r-2}} + Δ' X^{q^{r-1}}`. For
//! `r = 2` this is the Carlitz module, `Δ' = 1`, and coefficients stay in `A`.

mod sym;

pub use sym::{Monomial, SymCoeff};

use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::additive::AdditivePoly;
use crate::error::{Error, Result};
use crate::expansion::USeries;
use crate::field::{APoly, Gf, RamifiedSeries};
use crate::ring::Ring;

/// Numeric values for the generators of a coefficient ring.
#[derive(Clone, Debug)]
pub struct Specialization {
    m: u32,
    g: Vec<RamifiedSeries>,
    delta: RamifiedSeries,
    delta_inv: Option<RamifiedSeries>,
}

impl Specialization {
    /// `g = [g_1, ..., g_{r-2}]` and `Δ'`.
    pub fn new(g: Vec<RamifiedSeries>, delta: RamifiedSeries) -> Self {
        let delta_inv = delta.inv().ok();
        Specialization {
            m: delta.ramification(),
            g,
            delta,
            delta_inv,
        }
    }

    /// Values read off a numeric rank-`(r-1)` module `phi'_t`.
    pub fn from_phi(phi_t: &AdditivePoly<RamifiedSeries>) -> Result<Self> {
        let c = phi_t.coeffs();
        if c.len() < 2 {
            return Err(Error::InvalidParameter(
                "phi_t must have tau-degree >= 1".into(),
            ));
        }
        Ok(Self::new(
            c[1..c.len() - 1].to_vec(),
            c[c.len() - 1].clone(),
        ))
    }

    /// `Δ' = 1` and no `g`: the Carlitz case.
    pub fn carlitz(field: &'static Gf, m: u32) -> Self {
        Self::new(Vec::new(), RamifiedSeries::one(field, m))
    }

    pub fn ramification(&self) -> u32 {
        self.m
    }

    pub fn g(&self) -> &[RamifiedSeries] {
        &self.g
    }

    pub fn delta(&self) -> &RamifiedSeries {
        &self.delta
    }

    fn delta_pow(&self, d: i64) -> Result<RamifiedSeries> {
        if d >= 0 {
            return Ok(self.delta.pow(d as u64));
        }
        let inv = self
            .delta_inv
            .as_ref()
            .ok_or_else(|| Error::DivisionByZero("Δ' vanishes at working precision".into()))?;
        Ok(inv.pow(d.unsigned_abs()))
    }
}

/// Coefficient rings that expansions are computed over.
pub trait CoeffRing: Ring + Serialize + fmt::Display + 'static {
    /// Numeric value under the given substitution.
    fn specialize(&self, at: &Specialization) -> Result<RamifiedSeries>;

    /// Smallest `Δ'` exponent that occurs, when `Δ'` is a variable.
    fn min_delta_exponent(&self) -> Option<i64> {
        None
    }
}

impl CoeffRing for APoly {
    fn specialize(&self, at: &Specialization) -> Result<RamifiedSeries> {
        Ok(RamifiedSeries::from_apoly(self, at.m))
    }
}

impl CoeffRing for RamifiedSeries {
    fn specialize(&self, _: &Specialization) -> Result<RamifiedSeries> {
        Ok(self.clone())
    }
}

impl CoeffRing for SymCoeff {
    fn specialize(&self, at: &Specialization) -> Result<RamifiedSeries> {
        if at.g.len() + 2 != self.rank() {
            return Err(Error::InvalidParameter(format!(
                "rank {} coefficient needs {} g values, got {}",
                self.rank(),
                self.rank() - 2,
                at.g.len()
            )));
        }
        let mut acc = RamifiedSeries::zero(self.field(), at.m);
        for (mono, a) in self.terms() {
            let mut term = RamifiedSeries::from_apoly(a, at.m);
            for (g, &e) in at.g.iter().zip(&mono.g) {
                if e > 0 {
                    term = term.mul(&g.pow(e));
                }
            }
            if mono.delta != 0 {
                term = term.mul(&at.delta_pow(mono.delta)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    fn min_delta_exponent(&self) -> Option<i64> {
        SymCoeff::min_delta_exponent(self)
    }
}

/// `(q^{(r-1) d} - 1) / (q^{r-1} - 1)`: the power of `Δ'` leading `phi'_a`
/// for `deg a = d`.
pub fn delta_exponent(q: u32, r: usize, d: usize) -> u64 {
    let base = (q as u64).pow((r - 1) as u32);
    (base.pow(d as u32) - 1) / (base - 1)
}

/// A rank-`(r-1)` Drinfeld module given by `phi'_t`, with `phi'_a` built
/// from cached composition powers of `phi'_t`.
pub struct GenericModule<R: Ring> {
    phi_t: AdditivePoly<R>,
    powers: RwLock<Vec<AdditivePoly<R>>>,
}

impl GenericModule<APoly> {
    /// `tX + X^q`.
    pub fn carlitz(field: &'static Gf) -> Self {
        Self::new(AdditivePoly::new(vec![APoly::t(field), APoly::one(field)])).unwrap()
    }
}

impl GenericModule<SymCoeff> {
    /// The generic module for expansions in rank `r >= 3`.
    pub fn generic(field: &'static Gf, r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidParameter(
                "symbolic modules need r >= 3".into(),
            ));
        }
        let mut coeffs = vec![SymCoeff::scalar(r, APoly::t(field))];
        coeffs.extend((1..=r - 2).map(|i| SymCoeff::g(field, r, i)));
        coeffs.push(SymCoeff::delta_prime(field, r, 1));
        Self::new(AdditivePoly::new(coeffs))
    }
}

impl<R: Ring> GenericModule<R> {
    pub fn new(phi_t: AdditivePoly<R>) -> Result<Self> {
        let Some(d) = phi_t.q_degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if d == 0 {
            return Err(Error::InvalidParameter(
                "phi_t must have tau-degree >= 1".into(),
            ));
        }
        let id = AdditivePoly::identity(&phi_t.coeffs()[0]);
        Ok(GenericModule {
            powers: RwLock::new(vec![id, phi_t.clone()]),
            phi_t,
        })
    }

    pub fn phi_t(&self) -> &AdditivePoly<R> {
        &self.phi_t
    }

    /// Rank of the module, i.e. the `tau`-degree of `phi'_t`.
    pub fn rank(&self) -> usize {
        self.phi_t.q_degree().unwrap()
    }

    pub fn field(&self) -> &'static Gf {
        self.phi_t.coeffs()[0].field()
    }

    /// Leading coefficient `Δ'` of `phi'_t`.
    pub fn delta_prime(&self) -> &R {
        self.phi_t.leading().unwrap()
    }

    fn power(&self, j: usize) -> AdditivePoly<R> {
        if let Some(p) = self.powers.read().unwrap().get(j) {
            return p.clone();
        }
        let mut powers = self.powers.write().unwrap();
        while powers.len() <= j {
            let next = self.phi_t.compose(powers.last().unwrap());
            powers.push(next);
        }
        powers[j].clone()
    }

    /// `phi'_a = sum_j c_j (phi'_t)^{o j}` for `a = sum_j c_j t^j`.
    pub fn phi_a(&self, a: &APoly) -> Result<AdditivePoly<R>> {
        if a.is_zero() {
            return Err(Error::InvalidParameter("phi_a needs a nonzero a".into()));
        }
        let mut acc = AdditivePoly::zero();
        for (j, &c) in a.coeffs().iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.power(j).scale(c));
            }
        }
        Ok(acc)
    }

    /// `lc(a) Δ'^{E(a)}`, the leading coefficient of `phi'_a`.
    pub fn delta_a_power(&self, a: &APoly) -> Result<R> {
        let Some(d) = a.degree() else {
            return Err(Error::InvalidParameter(
                "delta_a_power needs a nonzero a".into(),
            ));
        };
        let e = delta_exponent(self.field().q(), self.rank() + 1, d);
        Ok(self.delta_prime().pow(e).scale(a.leading()))
    }

    /// `f_a(X) = X^{Q} Δ'_a^{-1} phi'_a(1/X) - 1` with `Q = q^{(r-1) deg a}`.
    pub fn f_a(&self, a: &APoly) -> Result<FaPoly<R>> {
        let phi = self.phi_a(a)?;
        let q = self.field().q() as u64;
        let n = phi.q_degree().unwrap();
        let big_q = q.pow(n as u32);
        let lead_inv = phi.leading()?.try_inv()?;
        // phi'_a = sum_i a_i X^{q^i}, so X^Q phi'_a(1/X) / a_n = 1 + sum_{i<n} (a_i / a_n) X^{Q - q^i}.
        let terms = (0..n)
            .rev()
            .filter_map(|i| {
                let c = &phi.coeffs()[i];
                (!c.is_zero()).then(|| (big_q - q.pow(i as u32), c.mul(&lead_inv)))
            })
            .collect();
        let fa = FaPoly {
            a: a.clone(),
            degree_bound: big_q,
            terms,
        };
        fa.check_invariants()?;
        Ok(fa)
    }
}

/// The factor polynomial `f_a` as sparse `(exponent, coefficient)` terms in
/// increasing exponent order.
#[derive(Clone, Debug, PartialEq)]
pub struct FaPoly<R> {
    a: APoly,
    degree_bound: u64,
    terms: Vec<(u64, R)>,
}

impl<R: Ring> FaPoly<R> {
    pub fn a(&self) -> &APoly {
        &self.a
    }

    pub fn terms(&self) -> &[(u64, R)] {
        &self.terms
    }

    /// `Q = q^{(r-1) deg a}`; the degree of `f_a` is below `Q`.
    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent present.
    pub fn order(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    /// `Q - Q/q`: `X` to this power divides `f_a` (0 for constant `a`).
    pub fn guaranteed_order(&self) -> u64 {
        let q = self.a.field().q() as u64;
        if self.degree_bound == 1 {
            0
        } else {
            self.degree_bound - self.degree_bound / q
        }
    }

    fn check_invariants(&self) -> Result<()> {
        if self.a.is_constant() && !self.terms.is_empty() {
            return Err(Error::Inconsistent(format!(
                "f_a is nonzero for constant a = {}",
                self.a
            )));
        }
        if let Some(o) = self.order() {
            if o == 0
                || o < self.guaranteed_order()
                || self.terms.last().unwrap().0 >= self.degree_bound
            {
                return Err(Error::Inconsistent(format!(
                    "f_a for a = {} has exponents out of range",
                    self.a
                )));
            }
        }
        Ok(())
    }

    /// `1 + f_a(u) + O(u^order)`.
    pub fn one_plus(&self, like: &R, order: usize) -> USeries<R> {
        USeries::one_plus(like, order, &self.terms)
    }

    /// Checks `u^Q phi'_a(1/u) (1 + f_a(u))^{-1} = Δ'_a + O(u^order)`.
    pub fn check_reciprocal(&self, module: &GenericModule<R>, order: usize) -> Result<()> {
        let phi = module.phi_a(&self.a)?;
        let like = &phi.coeffs()[0];
        let q = self.a.field().q() as u64;
        let reversed: Vec<(u64, R)> = phi
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (self.degree_bound - q.pow(i as u32), c.clone()))
            .collect();
        let lhs = USeries::one_plus(like, order, &reversed).sub(&USeries::one(like, order));
        let prod = lhs.mul(&self.one_plus(like, order).inv()?);
        let expected = USeries::new(like, order, vec![module.delta_a_power(&self.a)?]);
        if prod == expected {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!(
                "reciprocal identity fails for a = {}",
                self.a
            )))
        }
    }
}

impl<R: CoeffRing> FaPoly<R> {
    /// `f_a(u)` with coefficients specialized.
    pub fn eval(&self, u: &RamifiedSeries, at: &Specialization) -> Result<RamifiedSeries> {
        let mut acc = u.zero_like();
        for (e, c) in &self.terms {
            acc = acc.add(&c.specialize(at)?.mul(&u.pow(*e)));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{monic_polys, nonzero_polys};

    #[test]
    fn carlitz_square_symbolic() {
        let f = Gf::get(3).unwrap();
        let module = GenericModule::carlitz(f);
        let t = APoly::t(f);
        let phi = module.phi_a(&t.pow(2)).unwrap();
        assert_eq!(phi.coeffs(), &[t.pow(2), t.pow(3).add(&t), APoly::one(f)]);
    }

    #[test]
    fn generic_phi_t_rank3() {
        let f = Gf::get(2).unwrap();
        let module = GenericModule::generic(f, 3).unwrap();
        let phi = module.phi_a(&APoly::t(f)).unwrap();
        assert_eq!(phi.to_owned(), module.phi_t().clone());
        assert_eq!(phi.coeffs()[1], SymCoeff::g(f, 3, 1));
        assert_eq!(phi.coeffs()[2], SymCoeff::delta_prime(f, 3, 1));
        assert!(module.phi_a(&APoly::zero(f)).is_err());
    }

    #[test]
    fn leading_coefficient_power_law() {
        for q in [2u32, 3] {
            let f = Gf::get(q).unwrap();
            let module = GenericModule::generic(f, 3).unwrap();
            for a in nonzero_polys(f, 2) {
                let phi = module.phi_a(&a).unwrap();
                assert_eq!(
                    phi.leading().unwrap(),
                    &module.delta_a_power(&a).unwrap(),
                    "a = {a}"
                );
            }
            let t2 = APoly::t(f).pow(2);
            let e = delta_exponent(q, 3, 2);
            assert_eq!(e, 1 + (q as u64).pow(2));
            assert_eq!(
                module.delta_a_power(&t2).unwrap(),
                SymCoeff::delta_prime(f, 3, e as i64)
            );
        }
        let f = Gf::get(3).unwrap();
        let carlitz = GenericModule::carlitz(f);
        assert_eq!(delta_exponent(3, 2, 2), 4);
        assert!(carlitz.delta_a_power(&APoly::t(f).pow(2)).unwrap().is_one());
        assert_eq!(
            carlitz.delta_a_power(&APoly::constant(f, 2)).unwrap(),
            APoly::constant(f, 2)
        );
    }

    #[test]
    fn f_t_is_t_u_to_q_minus_1() {
        for q in [2u32, 3, 4] {
            let f = Gf::get(q).unwrap();
            let fa = GenericModule::carlitz(f).f_a(&APoly::t(f)).unwrap();
            assert_eq!(fa.terms(), &[(q as u64 - 1, APoly::t(f))]);
        }
    }

    #[test]
    fn constants_give_zero_and_scalars_cancel() {
        let f = Gf::get(3).unwrap();
        let module = GenericModule::generic(f, 3).unwrap();
        for c in 1..3 {
            assert!(module.f_a(&APoly::constant(f, c)).unwrap().is_zero());
        }
        let t = APoly::t(f);
        let two_t = t.scale(2);
        assert_eq!(
            module.f_a(&two_t).unwrap().terms(),
            module.f_a(&t).unwrap().terms()
        );
        let carlitz = GenericModule::carlitz(f);
        assert_eq!(
            carlitz.f_a(&two_t).unwrap().terms(),
            carlitz.f_a(&t).unwrap().terms()
        );
    }

    #[test]
    fn divisibility_and_reciprocal_identity() {
        for q in [2u32, 3] {
            let f = Gf::get(q).unwrap();
            let rank2 = GenericModule::carlitz(f);
            let rank3 = GenericModule::generic(f, 3).unwrap();
            for a in monic_polys(f, 2) {
                for fa in [
                    rank2.f_a(&a).unwrap().terms().len(),
                    rank3.f_a(&a).unwrap().terms().len(),
                ] {
                    assert_eq!(fa == 0, a.is_constant());
                }
                let fa = rank3.f_a(&a).unwrap();
                if let Some(o) = fa.order() {
                    assert!(o >= fa.guaranteed_order());
                }
                rank2.f_a(&a).unwrap().check_reciprocal(&rank2, 12).unwrap();
                fa.check_reciprocal(&rank3, 8).unwrap();
            }
        }
    }

    #[test]
    fn specialization_basics() {
        let f = Gf::get(3).unwrap();
        let m = 2;
        let v = RamifiedSeries::t(f, m)
            .add(&RamifiedSeries::one(f, m))
            .with_relative_precision(30);
        let at = Specialization::new(vec![RamifiedSeries::constant(f, m, 2)], v.clone());
        let inv = SymCoeff::delta_prime(f, 3, -1).specialize(&at).unwrap();
        assert!(inv.agrees(&v.inv().unwrap()));
        assert!(SymCoeff::scalar(3, APoly::one(f))
            .specialize(&at)
            .unwrap()
            .is_one());
        let x = SymCoeff::g(f, 3, 1).add(&SymCoeff::delta_prime(f, 3, 2));
        let y = SymCoeff::delta_prime(f, 3, -1).add(&SymCoeff::scalar(3, APoly::t(f)));
        let lhs = x.mul(&y).specialize(&at).unwrap();
        let rhs = x.specialize(&at).unwrap().mul(&y.specialize(&at).unwrap());
        assert!(lhs.agrees(&rhs));
        let zero = Specialization::new(vec![RamifiedSeries::one(f, m)], RamifiedSeries::zero(f, m));
        assert!(matches!(
            SymCoeff::delta_prime(f, 3, -1).specialize(&zero),
            Err(Error::DivisionByZero(_))
        ));
    }
}
