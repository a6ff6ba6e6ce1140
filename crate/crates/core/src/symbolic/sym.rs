use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{APoly, Gf};
use crate::ring::Ring;

/// `g_1^{e_1} ... g_{r-2}^{e_{r-2}} Δ'^d`, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub g: Vec<u64>,
    pub delta: i64,
}

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial {
            g: vec![0; vars],
            delta: 0,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.g.iter().sum::<u64>() as i64 + self.delta
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial {
            g: self.g.iter().zip(&rhs.g).map(|(a, b)| a + b).collect(),
            delta: self.delta + rhs.delta,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| self.delta.cmp(&other.delta))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Laurent polynomial in `g_1, ..., g_{r-2}` and `Δ'^{±1}` with coefficients
/// in `A`. `rank` is the rank `r` of the lattice whose expansion uses it.
#[derive(Clone, PartialEq)]
pub struct SymCoeff {
    field: &'static Gf,
    rank: usize,
    terms: BTreeMap<Monomial, APoly>,
}

impl SymCoeff {
    pub fn zero(field: &'static Gf, rank: usize) -> Self {
        assert!(rank >= 2, "SymCoeff needs rank >= 2");
        SymCoeff {
            field,
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, a: APoly) -> Self {
        Self::term(rank, Monomial::one(rank - 2), a)
    }

    pub fn term(rank: usize, mono: Monomial, a: APoly) -> Self {
        let mut s = Self::zero(a.field(), rank);
        assert_eq!(
            mono.g.len(),
            rank - 2,
            "monomial has the wrong number of variables"
        );
        if !a.is_zero() {
            s.terms.insert(mono, a);
        }
        s
    }

    /// `g_i`, 1-based as in `phi'_t = tX + g_1 X^q + ... + Δ' X^{q^{r-1}}`.
    pub fn g(field: &'static Gf, rank: usize, i: usize) -> Self {
        assert!((1..=rank - 2).contains(&i), "g index out of range");
        let mut mono = Monomial::one(rank - 2);
        mono.g[i - 1] = 1;
        Self::term(rank, mono, APoly::one(field))
    }

    /// `Δ'^d`.
    pub fn delta_prime(field: &'static Gf, rank: usize, d: i64) -> Self {
        let mut mono = Monomial::one(rank - 2);
        mono.delta = d;
        Self::term(rank, mono, APoly::one(field))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &APoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest `Δ'` exponent among the terms.
    pub fn min_delta_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.delta).min()
    }

    pub fn map_scalars(&self, f: impl Fn(&APoly) -> APoly) -> Self {
        let mut out = Self::zero(self.field, self.rank);
        for (m, a) in &self.terms {
            let b = f(a);
            if !b.is_zero() {
                out.terms.insert(m.clone(), b);
            }
        }
        out
    }

    fn accumulate(&mut self, mono: Monomial, a: APoly) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                if !a.is_zero() {
                    v.insert(a);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&a);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Ring for SymCoeff {
    fn field(&self) -> &'static Gf {
        self.field
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.field, self.rank)
    }

    fn one_like(&self) -> Self {
        Self::scalar(self.rank, APoly::one(self.field))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, a) in &rhs.terms {
            out.accumulate(m.clone(), a.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        self.map_scalars(APoly::neg)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.zero_like();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.accumulate(ma.mul(mb), a.mul(b));
            }
        }
        out
    }

    fn scale(&self, c: u32) -> Self {
        self.map_scalars(|a| a.scale(c))
    }

    /// Scalars to the `p`-th power and every exponent times `p`.
    fn frobenius(&self) -> Self {
        let p = self.field.p();
        let mut out = self.zero_like();
        for (m, a) in &self.terms {
            let mono = Monomial {
                g: m.g.iter().map(|e| e * p as u64).collect(),
                delta: m.delta * p as i64,
            };
            out.terms.insert(mono, a.frobenius());
        }
        out
    }

    /// Only `c Δ'^d` with `c in F_q^*` is a unit.
    fn try_inv(&self) -> Result<Self> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((m, a)), None) if m.g.iter().all(|&e| e == 0) && a.is_constant() => {
                let mono = Monomial {
                    g: m.g.clone(),
                    delta: -m.delta,
                };
                Ok(Self::term(self.rank, mono, a.try_inv()?))
            }
            (None, _) => Err(Error::ZeroInverse),
            _ => Err(Error::DivisionByZero(
                "symbolic coefficient is not a unit".into(),
            )),
        }
    }
}

impl fmt::Display for SymCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, a) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut vars = Vec::new();
            for (i, &e) in m.g.iter().enumerate() {
                match e {
                    0 => {}
                    1 => vars.push(format!("g{}", i + 1)),
                    _ => vars.push(format!("g{}^{e}", i + 1)),
                }
            }
            match m.delta {
                0 => {}
                1 => vars.push("D".to_string()),
                d => vars.push(format!("D^{d}")),
            }
            let scalar = if a.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
                format!("({a})")
            } else {
                a.to_string()
            };
            if vars.is_empty() {
                write!(f, "{scalar}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{scalar}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymCoeff[q={}, r={}]({self})", self.field.q(), self.rank)
    }
}

struct TermRef<'a>(&'a Monomial, &'a APoly);

impl Serialize for TermRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 3)?;
        st.serialize_field("g_exponents", &self.0.g)?;
        st.serialize_field("delta_exponent", &self.0.delta)?;
        st.serialize_field("scalar", self.1)?;
        st.end()
    }
}

impl Serialize for SymCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, a) in &self.terms {
            seq.serialize_element(&TermRef(m, a))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> &'static Gf {
        Gf::get(3).unwrap()
    }

    #[test]
    fn laurent_units() {
        let d = SymCoeff::delta_prime(f3(), 3, 2).scale(2);
        let inv = d.try_inv().unwrap();
        assert!(d.mul(&inv).is_one());
        assert_eq!(inv.min_delta_exponent(), Some(-2));
        let g = SymCoeff::g(f3(), 3, 1);
        assert!(g.try_inv().is_err());
        assert!(g.add(&d).try_inv().is_err());
        assert_eq!(SymCoeff::zero(f3(), 3).try_inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn cancellation_removes_terms() {
        let g = SymCoeff::g(f3(), 3, 1);
        assert!(g.add(&g.neg()).is_zero());
        assert!(g.add(&g).add(&g).is_zero());
    }

    #[test]
    fn frobenius_is_structural_pth_power() {
        let f = f3();
        let t = APoly::t(f);
        let x = SymCoeff::g(f, 3, 1)
            .mul(&SymCoeff::scalar(3, t.add(&APoly::one(f))))
            .add(&SymCoeff::delta_prime(f, 3, -1))
            .add(&SymCoeff::scalar(3, t.clone()));
        assert_eq!(x.frobenius(), x.pow(3));
        let y = SymCoeff::g(f, 4, 2).add(&SymCoeff::g(f, 4, 1).scale(2));
        assert_eq!(y.frobenius(), y.mul(&y).mul(&y));
    }

    #[test]
    fn serialization_is_ordered() {
        let f = f3();
        let x = SymCoeff::delta_prime(f, 3, -1).add(&SymCoeff::g(f, 3, 1).scale(2));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"[{"g_exponents":[0],"delta_exponent":-1,"scalar":[1]},{"g_exponents":[1],"delta_exponent":0,"scalar":[2]}]"#
        );
        assert_eq!(x.to_string(), "2*g1 + D^-1");
    }
}
