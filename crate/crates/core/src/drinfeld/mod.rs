//! Period lattices, their exponentials and Drinfeld modules, the
//! `u`-parameter, the `GL_r(A)` action, and the discriminant computed
//! straight from the lattice.

mod lattice;

pub use lattice::{has_distinct_classes, reduce_basis, Certificate, LatticeSpec};

use serde::Serialize;

use crate::additive::AdditivePoly;
use crate::error::{Error, Result};
use crate::field::{APoly, Gf, RamifiedSeries};
use crate::ring::Ring;

/// A point `omega = (omega_1, ..., omega_r)` of the period domain,
/// normalized so that `omega_r = xi`.
#[derive(Clone, Debug)]
pub struct Omega {
    entries: Vec<RamifiedSeries>,
    general_position: bool,
}

impl Omega {
    /// `entries` must end with (an approximation of) `xi`; the last entry is
    /// replaced by `xi` itself.
    pub fn new(mut entries: Vec<RamifiedSeries>, xi: &RamifiedSeries) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidParameter("rank must be at least 2".into()));
        }
        let last = entries.last().unwrap();
        if !last.agrees(xi) {
            return Err(Error::InvalidParameter(
                "last entry of omega must equal xi".into(),
            ));
        }
        *entries.last_mut().unwrap() = xi.clone();
        let general_position = has_distinct_classes(&entries);
        Ok(Omega {
            entries,
            general_position,
        })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[RamifiedSeries] {
        &self.entries
    }

    pub fn xi(&self) -> &RamifiedSeries {
        self.entries.last().unwrap()
    }

    /// `omega' = (omega_2, ..., omega_r)`.
    pub fn tail(&self) -> &[RamifiedSeries] {
        &self.entries[1..]
    }

    /// True when the entries themselves have pairwise distinct valuation
    /// classes, which forces `F_inf`-linear independence. False means
    /// "unverified", not "degenerate".
    pub fn general_position(&self) -> bool {
        self.general_position
    }

    pub fn field(&self) -> &'static Gf {
        self.entries[0].field()
    }

    pub fn ramification(&self) -> u32 {
        self.entries[0].ramification()
    }

    pub fn lattice(&self, bound: usize) -> Result<LatticeSpec> {
        LatticeSpec::new(self.entries.clone(), bound)
    }

    /// `Lambda' = A^{r-1} omega'`.
    pub fn sub_lattice(&self, bound: usize) -> Result<LatticeSpec> {
        LatticeSpec::new(self.tail().to_vec(), bound)
    }
}

/// `r x r` matrix over `A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaMatrix {
    rows: Vec<Vec<APoly>>,
}

impl GammaMatrix {
    pub fn new(rows: Vec<Vec<APoly>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParameter("gamma must be square".into()));
        }
        let g = GammaMatrix { rows };
        if g.det().is_zero() {
            return Err(Error::InvalidParameter("gamma is singular".into()));
        }
        Ok(g)
    }

    pub fn identity(field: &'static Gf, r: usize) -> Self {
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            APoly::one(field)
                        } else {
                            APoly::zero(field)
                        }
                    })
                    .collect()
            })
            .collect();
        GammaMatrix { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &APoly {
        &self.rows[i][j]
    }

    /// Copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: APoly) -> Self {
        let mut rows = self.rows.clone();
        rows[i][j] = value;
        GammaMatrix { rows }
    }

    /// Determinant by cofactor expansion (ranks here are small).
    pub fn det(&self) -> APoly {
        fn minor_det(rows: &[Vec<APoly>], cols: &[usize]) -> APoly {
            let row = &rows[rows.len() - cols.len()];
            if cols.len() == 1 {
                return row[cols[0]].clone();
            }
            let mut acc = APoly::zero(row[0].field());
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = row[c].mul(&minor_det(rows, &rest));
                acc = if k % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
        let cols: Vec<usize> = (0..self.rank()).collect();
        minor_det(&self.rows, &cols)
    }

    /// Whether `det` is a nonzero constant, i.e. `gamma` lies in `GL_r(A)`.
    pub fn is_unimodular(&self) -> bool {
        let d = self.det();
        d.degree() == Some(0)
    }

    pub fn mul(&self, rhs: &GammaMatrix) -> GammaMatrix {
        let r = self.rank();
        let field = self.rows[0][0].field();
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..r).fold(APoly::zero(field), |acc, k| {
                            acc.add(&self.rows[i][k].mul(&rhs.rows[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        GammaMatrix { rows }
    }

    /// `[gamma][omega]` as a column vector of series.
    pub fn apply(&self, v: &[RamifiedSeries]) -> Vec<RamifiedSeries> {
        let m = v[0].ramification();
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(v[0].zero_like(), |acc, (a, x)| {
                    acc.add(&RamifiedSeries::from_apoly(a, m).mul(x))
                })
            })
            .collect()
    }
}

/// `gamma . omega = j^{-1} [gamma][omega]` and `j = xi^{-1} ([gamma][omega])_r`.
pub fn gamma_act(gamma: &GammaMatrix, omega: &Omega) -> Result<(Omega, RamifiedSeries)> {
    if gamma.rank() != omega.rank() {
        return Err(Error::InvalidParameter(
            "gamma and omega ranks differ".into(),
        ));
    }
    let image = gamma.apply(omega.entries());
    let last = image.last().unwrap();
    if last.is_zero() {
        return Err(Error::DegenerateAction);
    }
    let xi = omega.xi();
    let j = last.div(xi)?;
    let j_inv = j.inv()?;
    let mut entries: Vec<RamifiedSeries> = image.iter().map(|x| x.mul(&j_inv)).collect();
    *entries.last_mut().unwrap() = xi.clone();
    let general_position = has_distinct_classes(&entries);
    Ok((
        Omega {
            entries,
            general_position,
        },
        j,
    ))
}

/// `phi^L_a(Z) = a Z prod'_{lambda in a^{-1}L/L} (1 - Z / e_L(lambda))`,
/// expanded as an ordinary polynomial in `Z` and checked to be additive.
pub fn phi_from_lattice(lattice: &LatticeSpec, a: &APoly) -> Result<AdditivePoly<RamifiedSeries>> {
    let m = lattice.ramification();
    let field = lattice.field();
    let Some(d) = a.degree() else {
        return Err(Error::InvalidParameter(
            "phi_0 is not a Drinfeld module map".into(),
        ));
    };
    let a_series = RamifiedSeries::from_apoly(a, m);
    if d == 0 {
        return Ok(AdditivePoly::linear(a_series));
    }
    // Torsion representatives b/a, deg b < deg a, on the reduced basis.
    let a_inv = a_series.with_relative_precision(max_rel(lattice)).inv()?;
    let t = RamifiedSeries::t(field, m);
    let mut reps = Vec::new();
    for b in lattice.reduced_basis() {
        let mut x = b.mul(&a_inv);
        for j in 0..d {
            if j > 0 {
                x = x.mul(&t);
            }
            reps.push(x.clone());
        }
    }
    let torsion = LatticeSpec::span(&lattice.exp_eval_many(&reps)?);
    let mut poly = vec![RamifiedSeries::zero(field, m), a_series];
    for e in torsion.iter().skip(1) {
        let c = e.inv()?.neg();
        let mut next = poly.clone();
        next.push(RamifiedSeries::zero(field, m));
        for (k, coeff) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(&coeff.mul(&c));
        }
        poly = next;
    }
    let q = field.q() as usize;
    let mut additive = Vec::new();
    let mut next_power = 1usize;
    for (k, c) in poly.into_iter().enumerate() {
        if k == next_power {
            additive.push(c);
            next_power *= q;
        } else if !c.is_zero() {
            return Err(Error::Inconsistent(format!(
                "coefficient of Z^{k} in phi_a does not vanish (valuation {:?}); raise B or P",
                c.valuation()
            )));
        }
    }
    Ok(AdditivePoly::new(additive))
}

fn max_rel(lattice: &LatticeSpec) -> i64 {
    lattice
        .reduced_basis()
        .iter()
        .map(|b| b.relative_precision())
        .filter(|&r| r != crate::field::EXACT)
        .max()
        .unwrap_or(64)
}

/// `u = 1 / e_{Lambda'}(omega_1)`.
pub fn u_param(omega: &Omega, bound: usize) -> Result<RamifiedSeries> {
    let sub = omega.sub_lattice(bound)?;
    let e = sub.exp_eval(&omega.entries()[0])?;
    e.inv().map_err(|err| match err {
        Error::ZeroInverse | Error::PrecisionLoss(_) => {
            Error::DivisionByZero("omega_1 lies in Lambda' at working precision".into())
        }
        other => other,
    })
}

/// The points `omega alpha` for `alpha in (t^{-1}A/A)^r`, zero first.
pub fn t_torsion_values(lattice: &LatticeSpec) -> Result<Vec<RamifiedSeries>> {
    let field = lattice.field();
    let m = lattice.ramification();
    let t_inv = RamifiedSeries::t(field, m).inv()?;
    let reps: Vec<RamifiedSeries> = lattice
        .reduced_basis()
        .iter()
        .map(|b| b.mul(&t_inv))
        .collect();
    Ok(LatticeSpec::span(&lattice.exp_eval_many(&reps)?))
}

/// `Delta(omega) = t prod'_{alpha} e_Lambda(omega alpha)^{-1}`.
pub fn delta_direct(omega: &Omega, bound: usize) -> Result<RamifiedSeries> {
    delta_of_lattice(&omega.lattice(bound)?)
}

pub fn delta_of_lattice(lattice: &LatticeSpec) -> Result<RamifiedSeries> {
    let field = lattice.field();
    let m = lattice.ramification();
    let mut acc = RamifiedSeries::t(field, m);
    for e in t_torsion_values(lattice)?.iter().skip(1) {
        acc = acc.mul(&e.inv()?);
    }
    Ok(acc)
}

/// `Delta` as the leading coefficient of `phi^Lambda_t`.
pub fn delta_via_phi(omega: &Omega, bound: usize) -> Result<RamifiedSeries> {
    let lattice = omega.lattice(bound)?;
    let phi = phi_from_lattice(&lattice, &APoly::t(omega.field()))?;
    Ok(phi.leading()?.clone())
}
