//! Lattices `A b_1 + ... + A b_r` inside `F_q((s))` and their truncated
//! exponential functions.
//!
//! The exponential of a lattice `L` is `e_L(z) = z prod'_{lambda in L} (1 - z/lambda)`.
//! We truncate to the box `L_B = { sum a_i b_i : deg a_i <= B }`. Since `L_B`
//! is an `F_q`-vector space, the truncated product is itself additive and can
//! be built one basis vector at a time:
//!
//! ```text
//! e_{W + F_q w}(x) = e_W(x) * (1 - (e_W(x) / e_W(w))^{q-1}),
//! ```
//!
//! which equals the product over all `q^{r(B+1)}` box points but costs only
//! `O((r(B+1))^2)` series operations. [`LatticeSpec::exp_eval_enumerated`]
//! keeps the literal product for cross-checking at small `B`.
//!
//! Before truncating, the basis is reduced until its valuations are pairwise
//! distinct modulo `m`. Then `|sum a_i b_i| = max |a_i| |b_i|` for all
//! `a_i in F_inf`, every omitted lattice point has `|lambda| >= q^{B+1} min |b_i|`,
//! and the omitted factors change `e_L(z)` by a relative error of at most
//! `|z| / (q^{B+1} min |b_i|)`. That bound caps the precision of every result.
//!
//! Usually the recursion stops well inside the box: once `|e_W(z) / e_W(w)|^{q-1}`
//! drops below the relative precision of `e_W(z)`, the remaining factors are
//! `1` to that precision and the bound above is not needed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{APoly, Gf, RamifiedSeries};
use crate::ring::Ring;

const MAX_REDUCTION_STEPS: usize = 100_000;

/// How the truncation error of `e_{L_B}` is accounted for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Orthogonal basis: relative error bounded by `|z| / min omitted |lambda|`.
    APriori,
    /// No orthogonal basis found: recompute at `B + 1` and keep the agreeing digits.
    Doubling,
}

/// Valuations pairwise distinct modulo `m` (and all entries nonzero).
pub fn has_distinct_classes(entries: &[RamifiedSeries]) -> bool {
    let mut classes = Vec::with_capacity(entries.len());
    for e in entries {
        let Some(v) = e.valuation() else { return false };
        let c = v.rem_euclid(e.ramification() as i64);
        if classes.contains(&c) {
            return false;
        }
        classes.push(c);
    }
    true
}

fn common_ramification(entries: &[RamifiedSeries]) -> u32 {
    use num_integer::Integer;
    entries.iter().fold(1u32, |m, e| m.lcm(&e.ramification()))
}

/// Reduce a basis by cancelling leading terms between entries of the same
/// valuation class. Returns the reduced basis sorted by increasing `|b|` and
/// whether it ended orthogonal.
pub fn reduce_basis(basis: &[RamifiedSeries]) -> Result<(Vec<RamifiedSeries>, bool)> {
    let m = common_ramification(basis);
    let mut b: Vec<RamifiedSeries> = basis.iter().map(|x| x.refine(m)).collect();
    let field = b
        .first()
        .map(|x| x.field())
        .ok_or_else(|| Error::InvalidParameter("lattice needs at least one basis vector".into()))?;
    let mut steps = 0;
    loop {
        let vals: Vec<i64> = b
            .iter()
            .map(|x| {
                x.valuation().ok_or_else(|| {
                    Error::PrecisionLoss("basis vector vanishes at working precision".into())
                })
            })
            .collect::<Result<_>>()?;
        let mut pair = None;
        'search: for i in 0..b.len() {
            for j in 0..b.len() {
                if i != j && vals[i] <= vals[j] && (vals[j] - vals[i]) % m as i64 == 0 {
                    pair = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        steps += 1;
        if steps > MAX_REDUCTION_STEPS {
            return Ok((sorted(b), false));
        }
        let k = ((vals[j] - vals[i]) / m as i64) as usize;
        let tk = RamifiedSeries::from_apoly(&APoly::monomial(field, 1, k), m);
        let shifted = tk.mul(&b[j]);
        let c = field.mul(b[i].leading_coeff(), field.inv(shifted.leading_coeff())?);
        b[i] = b[i].sub(&shifted.scale(c));
    }
    Ok((sorted(b), true))
}

fn sorted(mut b: Vec<RamifiedSeries>) -> Vec<RamifiedSeries> {
    b.sort_by_key(|x| std::cmp::Reverse(x.valuation().unwrap_or(i64::MAX)));
    b
}

/// A lattice truncated to coefficient degree `<= bound` in a reduced basis.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    basis: Vec<RamifiedSeries>,
    reduced: Vec<RamifiedSeries>,
    bound: usize,
    certificate: Certificate,
}

impl LatticeSpec {
    pub fn new(basis: Vec<RamifiedSeries>, bound: usize) -> Result<Self> {
        let (reduced, orthogonal) = reduce_basis(&basis)?;
        let certificate = if orthogonal {
            Certificate::APriori
        } else {
            Certificate::Doubling
        };
        Ok(LatticeSpec {
            basis,
            reduced,
            bound,
            certificate,
        })
    }

    pub fn basis(&self) -> &[RamifiedSeries] {
        &self.basis
    }

    /// Reduced basis, smallest vector first.
    pub fn reduced_basis(&self) -> &[RamifiedSeries] {
        &self.reduced
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn field(&self) -> &'static Gf {
        self.reduced[0].field()
    }

    pub fn ramification(&self) -> u32 {
        self.reduced[0].ramification()
    }

    /// Number of enumerated lattice points `(q^{B+1})^r`.
    pub fn point_count(&self) -> u128 {
        (self.field().q() as u128).pow(((self.bound + 1) * self.rank()) as u32)
    }

    /// Same lattice with a different degree bound.
    pub fn with_bound(&self, bound: usize) -> Self {
        LatticeSpec {
            bound,
            ..self.clone()
        }
    }

    /// Valuation of the smallest lattice vector outside the box.
    pub fn omitted_valuation(&self) -> i64 {
        let m = self.ramification() as i64;
        self.reduced
            .iter()
            .map(|b| b.valuation().expect("reduced basis is nonzero"))
            .max()
            .unwrap()
            - m * (self.bound as i64 + 1)
    }

    /// `F_q`-basis `t^j b_i`, `j <= bound`, smallest first.
    fn box_basis(&self, bound: usize) -> Vec<RamifiedSeries> {
        let m = self.ramification();
        let t = RamifiedSeries::t(self.field(), m);
        let mut out = Vec::with_capacity(self.rank() * (bound + 1));
        for b in &self.reduced {
            let mut x = b.clone();
            for j in 0..=bound {
                if j > 0 {
                    x = x.mul(&t);
                }
                out.push(x.clone());
            }
        }
        sorted(out)
    }

    /// Runs the recursion over the box basis for every point in `zs`.
    ///
    /// A basis vector `w` is pushed through the earlier steps only when its
    /// turn comes. A point `x` stops once `|x / e_W(w)|^{q-1}` is below its
    /// relative precision: every later factor is then `1` to that precision,
    /// since `|e_W|` grows with `|w|` along an orthogonal basis. The flag says
    /// whether that happened inside the box.
    fn exp_box(&self, bound: usize, zs: &[RamifiedSeries]) -> Result<Vec<(RamifiedSeries, bool)>> {
        let q = self.field().q() as u64;
        let step = |x: &RamifiedSeries, w_inv: &RamifiedSeries| {
            let y = x.mul(w_inv);
            x.sub(&x.mul(&y.pow(q - 1)))
        };
        let mut points: Vec<(RamifiedSeries, bool)> =
            zs.iter().map(|z| (z.clone(), z.is_zero())).collect();
        let mut inverses: Vec<RamifiedSeries> = Vec::new();
        for raw in self.box_basis(bound) {
            if points.iter().all(|p| p.1) {
                break;
            }
            let w = inverses.iter().fold(raw, |acc, w_inv| {
                if acc.is_zero() {
                    acc
                } else {
                    step(&acc, w_inv)
                }
            });
            let Some(vw) = w.valuation() else {
                return Err(Error::PrecisionLoss(
                    "lattice basis vector lost all precision".into(),
                ));
            };
            let w_inv = w.inv()?;
            points.par_iter_mut().for_each(|(x, done)| {
                if *done {
                    return;
                }
                if let Some(vx) = x.valuation() {
                    if !x.is_exact() && (q as i64 - 1) * (vx - vw) >= x.precision() - vx {
                        *done = true;
                        return;
                    }
                }
                *x = step(x, &w_inv);
                *done = x.is_zero();
            });
            inverses.push(w_inv);
        }
        Ok(points)
    }

    /// Truncated `e_L(z)` with the truncation error folded into the precision.
    pub fn exp_eval(&self, z: &RamifiedSeries) -> Result<RamifiedSeries> {
        Ok(self.exp_eval_many(std::slice::from_ref(z))?.remove(0))
    }

    pub fn exp_eval_many(&self, zs: &[RamifiedSeries]) -> Result<Vec<RamifiedSeries>> {
        let raw = self.exp_box(self.bound, zs)?;
        match self.certificate {
            Certificate::APriori => {
                let omitted = self.omitted_valuation();
                zs.iter()
                    .zip(raw)
                    .map(|(z, (y, done))| {
                        if done {
                            return Ok(y);
                        }
                        let Some(vz) = z.valuation() else {
                            return Ok(y);
                        };
                        let gap = vz - omitted;
                        if gap <= 0 {
                            return Err(Error::PrecisionLoss(format!(
                                "|z| = q^{} is not below the smallest omitted lattice vector",
                                -(vz as f64) / self.ramification() as f64
                            )));
                        }
                        Ok(match y.valuation() {
                            Some(vy) => y.with_precision(vy + gap),
                            None => y,
                        })
                    })
                    .collect()
            }
            Certificate::Doubling => {
                let wider = self.exp_box(self.bound + 1, zs)?;
                Ok(raw
                    .into_iter()
                    .zip(wider)
                    .map(|((x, _), (y, _))| {
                        let d = x.sub(&y);
                        match d.valuation() {
                            Some(v) => y.with_precision(v),
                            None => y.with_precision(d.precision()),
                        }
                    })
                    .collect())
            }
        }
    }

    /// All `F_q`-combinations of `values`, starting with 0, with the
    /// coefficient of the last value varying slowest.
    pub fn span(values: &[RamifiedSeries]) -> Vec<RamifiedSeries> {
        let Some(first) = values.first() else {
            return Vec::new();
        };
        let q = first.field().q();
        let mut out = vec![first.zero_like()];
        for v in values {
            let layer: Vec<RamifiedSeries> = out.clone();
            for c in 1..q {
                let cv = v.scale(c);
                out.extend(layer.iter().map(|x| x.add(&cv)));
            }
        }
        out
    }

    /// Every lattice point of the box.
    pub fn points(&self) -> Vec<RamifiedSeries> {
        Self::span(&self.box_basis(self.bound))
    }

    /// The literal product `z prod'(1 - z/lambda)` over all box points,
    /// without any truncation certificate. Exponential cost; for tests.
    pub fn exp_eval_enumerated(&self, z: &RamifiedSeries) -> Result<RamifiedSeries> {
        let mut acc = z.clone();
        for lambda in self.points().iter().skip(1) {
            let ratio = z.div(lambda)?;
            acc = acc.mul(&ratio.one_like().sub(&ratio));
        }
        Ok(acc)
    }
}
