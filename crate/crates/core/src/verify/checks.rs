use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Discrepancy, Status, TestPoint, TARGET_DIGITS};
use crate::additive::AdditivePoly;
use crate::drinfeld::{
    delta_direct, delta_of_lattice, gamma_act, phi_from_lattice, t_torsion_values, GammaMatrix,
    LatticeSpec,
};
use crate::error::{Error, Result};
use crate::field::{monic_of_degree, APoly, Gf, RamifiedSeries, EXACT};
use crate::ring::Ring;
use crate::symbolic::GenericModule;

/// Fixed covariance suite: identity, a swap, shears by `t` above and below
/// the diagonal, a diagonal unit (or a degree-2 shear over `F_2`), a cyclic
/// permutation for `r >= 3`, and two seeded random elements of `GL_r(A)`.
pub fn covariance_matrices(
    field: &'static Gf,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, GammaMatrix)> {
    let id = GammaMatrix::identity(field, r);
    let zero = APoly::zero(field);
    let one = APoly::one(field);
    let t = APoly::t(field);
    let mut out = vec![("identity".to_string(), id.clone())];
    let swap = id
        .with_entry(0, 0, zero.clone())
        .with_entry(r - 1, r - 1, zero.clone())
        .with_entry(0, r - 1, one.clone())
        .with_entry(r - 1, 0, one.clone());
    out.push(("swap-1-r".into(), swap));
    out.push(("upper-t".into(), id.with_entry(0, r - 1, t.clone())));
    out.push(("lower-t".into(), id.with_entry(r - 1, 0, t.clone())));
    if field.q() > 2 {
        out.push((
            "diag-c".into(),
            id.with_entry(r - 1, r - 1, APoly::constant(field, field.generator())),
        ));
    } else {
        out.push(("upper-t2+1".into(), id.with_entry(0, 1, t.pow(2).add(&one))));
    }
    if r >= 3 {
        let mut cyc = GammaMatrix::identity(field, r);
        for i in 0..r {
            cyc = cyc
                .with_entry(i, i, zero.clone())
                .with_entry(i, (i + 1) % r, one.clone());
        }
        out.push(("cycle".into(), cyc));
    }
    for k in 0..2 {
        out.push((
            format!("random-{}", k + 1),
            random_unimodular(field, r, rng),
        ));
    }
    out
}

/// Product of a few elementary matrices with entries of degree <= 1 and a
/// random permutation.
pub fn random_unimodular(field: &'static Gf, r: usize, rng: &mut ChaCha8Rng) -> GammaMatrix {
    let q = field.q();
    let mut g = GammaMatrix::identity(field, r);
    for _ in 0..3 {
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let entry = APoly::new(field, vec![rng.gen_range(0..q), rng.gen_range(1..q)]);
        g = g.mul(&GammaMatrix::identity(field, r).with_entry(i, j, entry));
    }
    let mut perm: Vec<usize> = (0..r).collect();
    perm.shuffle(rng);
    let zero = APoly::zero(field);
    let mut p = GammaMatrix::identity(field, r);
    for i in 0..r {
        p = p.with_entry(i, i, zero.clone());
    }
    for (i, &j) in perm.iter().enumerate() {
        p = p.with_entry(i, j, APoly::one(field));
    }
    g.mul(&p)
}

/// `Δ(gamma omega)` against `j(gamma, omega)^{q^r - 1} Δ(omega)`.
pub fn verify_covariance(point: &TestPoint, gammas: &[GammaMatrix]) -> Result<Vec<Discrepancy>> {
    let b = point.params.b;
    let base = delta_direct(&point.omega, b)?;
    let w = (point.q() as u64).pow(point.rank() as u32) - 1;
    gammas
        .iter()
        .map(|g| {
            if !g.is_unimodular() {
                return Err(Error::InvalidParameter(
                    "covariance needs det in F_q^*".into(),
                ));
            }
            let (moved, j) = gamma_act(g, &point.omega)?;
            let lhs = delta_direct(&moved, b)?;
            Ok(Discrepancy::compare(
                &lhs,
                &j.pow(w).mul(&base),
                EXACT,
                TARGET_DIGITS,
            ))
        })
        .collect()
}

/// One row of the `f_a(u)` decay table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Row {
    pub degree: usize,
    /// `q^{(r-1)d} - q^{(r-1)d - 1}`, the order of vanishing of `f_a`.
    pub exponent: u64,
    /// `max_{a monic, deg a = d} log_q |f_a(u)|`; `None` when every `f_a(u)` is 0.
    #[serde(serialize_with = "ser_ratio")]
    pub max_log_abs: Option<Ratio<i64>>,
}

fn ser_ratio<S: serde::Serializer>(
    x: &Option<Ratio<i64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// The numeric module `phi'` of `Λ'` (the Carlitz module in rank 2).
pub fn numeric_module(point: &TestPoint) -> Result<GenericModule<RamifiedSeries>> {
    let f = point.omega.field();
    let m = point.ramification();
    let phi = if point.rank() == 2 {
        AdditivePoly::new(vec![RamifiedSeries::t(f, m), RamifiedSeries::one(f, m)])
    } else {
        phi_from_lattice(&point.sub_lattice, &APoly::t(f))?
    };
    GenericModule::new(phi)
}

/// `|f_a(u)|` per degree, for monic `a` of degree `0..=max_degree`.
pub fn lemma1_empirical(point: &TestPoint, max_degree: usize) -> Result<Vec<Lemma1Row>> {
    let module = numeric_module(point)?;
    let f = point.omega.field();
    let q = point.q() as u64;
    let r = point.rank();
    (0..=max_degree)
        .map(|d| {
            let mut best: Option<Ratio<i64>> = None;
            for a in monic_of_degree(f, d) {
                let fa = module.f_a(&a)?;
                let mut value = point.u.zero_like();
                for (e, c) in fa.terms() {
                    value = value.add(&c.mul(&point.u.pow(*e)));
                }
                match value.abs_log() {
                    Some(size) => best = Some(best.map_or(size, |b| b.max(size))),
                    None if !fa.is_zero() => {
                        return Err(Error::PrecisionLoss(format!(
                            "f_a(u) for a = {a} vanishes at precision"
                        )));
                    }
                    None => {}
                }
            }
            let k = ((r - 1) * d) as u32;
            let exponent = if d == 0 { 0 } else { q.pow(k) - q.pow(k - 1) };
            Ok(Lemma1Row {
                degree: d,
                exponent,
                max_log_abs: best,
            })
        })
        .collect()
}

/// Strictly decreasing `max_log_abs` for degrees `1..`.
pub fn lemma1_decreasing(rows: &[Lemma1Row]) -> bool {
    let sizes: Vec<Option<Ratio<i64>>> = rows
        .iter()
        .filter(|r| r.degree >= 1)
        .map(|r| r.max_log_abs)
        .collect();
    sizes.iter().all(Option::is_some) && sizes.windows(2).all(|w| w[1] < w[0])
}

/// `e_Λ(x)` against `e_{Λ'}(x) prod'_{deg a <= b_prime} (1 + e_{Λ'}(x) / e_{Λ'}(a omega_1))`.
pub fn verify_exp_product(
    point: &TestPoint,
    x: &RamifiedSeries,
    b_prime: usize,
) -> Result<Discrepancy> {
    let lattice = point.omega.lattice(point.params.b)?;
    let sub = &point.sub_lattice;
    let lhs = lattice.exp_eval(x)?;
    let y = sub.exp_eval(x)?;
    let t = RamifiedSeries::t(point.omega.field(), point.ramification());
    let mut shifts = Vec::with_capacity(b_prime + 2);
    let mut w = point.omega.entries()[0].clone();
    for _ in 0..=b_prime + 1 {
        shifts.push(w.clone());
        w = w.mul(&t);
    }
    let images = sub.exp_eval_many(&shifts)?;
    let first_omitted = images[b_prime + 1]
        .valuation()
        .ok_or_else(|| Error::PrecisionLoss("e'(a omega_1) vanishes".into()))?;
    let mut rhs = y.clone();
    for e in LatticeSpec::span(&images[..=b_prime]).iter().skip(1) {
        rhs = rhs.mul(&rhs.one_like().add(&y.div(e)?));
    }
    let (Some(vy), Some(vr)) = (y.valuation(), rhs.valuation()) else {
        return Err(Error::PrecisionLoss("e'(x) vanishes at precision".into()));
    };
    let gap = vy
        .checked_sub(first_omitted)
        .filter(|g| *g > 0)
        .ok_or_else(|| {
            Error::PrecisionLoss("x is not below the first omitted term of the product".into())
        })?;
    Ok(Discrepancy::compare(&rhs, &lhs, vr + gap, TARGET_DIGITS))
}

/// `Δ' prod_{phi'_t(z) = phi'_t(z0)} (X - z)` against `phi'_t(X) - phi'_t(z0)`,
/// coefficient by coefficient. Digits are counted on the coefficients that
/// do not vanish; the others must vanish at their tracked precision.
pub fn verify_torsion_product(point: &TestPoint, z0: &RamifiedSeries) -> Result<Discrepancy> {
    let f = point.omega.field();
    let phi = phi_from_lattice(&point.sub_lattice, &APoly::t(f))?;
    let torsion = t_torsion_values(&point.sub_lattice)?;
    let delta = phi.leading()?.clone();
    let mut poly = vec![delta];
    for tau in &torsion {
        let z = z0.add(tau).neg();
        let mut next = vec![z0.zero_like(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].add(&c.mul(&z));
        }
        poly = next;
    }
    // poly[k] multiplies X^k, highest degree last.
    let q = f.q() as usize;
    let mut expected = vec![phi.eval(z0).neg()];
    expected.resize(poly.len(), z0.zero_like());
    for (i, c) in phi.coeffs().iter().enumerate() {
        let k = q.pow(i as u32);
        expected[k] = expected[k].add(c);
    }
    let mut worst: Option<Discrepancy> = None;
    for (got, want) in poly.iter().zip(&expected) {
        let d = if want.is_zero() {
            let mut d = Discrepancy::compare(got, want, EXACT, 0);
            d.relative_digits = i64::MAX;
            d
        } else {
            Discrepancy::compare(got, want, EXACT, TARGET_DIGITS)
        };
        worst = Some(match worst {
            None => d,
            Some(w) => pick_worse(w, d),
        });
    }
    Ok(worst.unwrap())
}

fn pick_worse(a: Discrepancy, b: Discrepancy) -> Discrepancy {
    let rank = |d: &Discrepancy| match d.status {
        Status::Fail => 0,
        Status::PrecisionExhausted => 1,
        Status::Pass => 2,
    };
    match rank(&a).cmp(&rank(&b)) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if b.relative_digits < a.relative_digits {
                b
            } else {
                a
            }
        }
    }
}

/// `leading(phi_{t^2}) = leading(phi_t)^{1 + q^k}` for the rank-`k` lattice.
pub fn verify_leading_power(lattice: &LatticeSpec) -> Result<Discrepancy> {
    let f = lattice.field();
    let t = APoly::t(f);
    let lead_t = phi_from_lattice(lattice, &t)?.leading()?.clone();
    let lead_t2 = phi_from_lattice(lattice, &t.pow(2))?.leading()?.clone();
    let e = 1 + (f.q() as u64).pow(lattice.rank() as u32);
    Ok(Discrepancy::compare(
        &lead_t2,
        &lead_t.pow(e),
        EXACT,
        TARGET_DIGITS,
    ))
}

/// `Δ` from the torsion product against the leading coefficient of `phi_t`.
pub fn verify_delta_two_ways(point: &TestPoint) -> Result<Discrepancy> {
    let lattice = point.omega.lattice(point.params.b)?;
    let a = delta_of_lattice(&lattice)?;
    let b = phi_from_lattice(&lattice, &APoly::t(point.omega.field()))?
        .leading()?
        .clone();
    Ok(Discrepancy::compare(&a, &b, EXACT, TARGET_DIGITS))
}

/// A random `x = xi s^{-j} (c_0 + c_1 s + ...)` with `|x| <= |omega_1|`.
/// `c_1 != 0` keeps `x` off `A xi`, whose elements only have digits at
/// multiples of `m` relative to `xi`. Draws whose `e_Lambda(x)` is not known
/// to `2 * TARGET_DIGITS` relative digits sit too close to the lattice and
/// are redrawn.
pub fn random_argument(point: &TestPoint, rng: &mut ChaCha8Rng) -> Result<RamifiedSeries> {
    let f = point.omega.field();
    let m = point.ramification();
    let xi = point.omega.xi();
    let reach = point.omega.entries()[0]
        .div(xi)?
        .valuation()
        .ok_or(Error::PrecisionLoss("omega_1 vanishes".into()))?;
    let lattice = point.omega.lattice(point.params.b)?;
    for _ in 0..64 {
        let j = rng.gen_range(0..=-reach);
        let mut coeffs = vec![rng.gen_range(1..f.q()), rng.gen_range(1..f.q())];
        coeffs.extend((0..3).map(|_| rng.gen_range(0..f.q())));
        let unit = RamifiedSeries::from_coeffs(f, m, 0, coeffs, EXACT);
        let x = xi.mul(&RamifiedSeries::monomial(f, m, 1, -j)).mul(&unit);
        let image = lattice.exp_eval(&x)?;
        if image.valuation().is_some() && image.relative_precision() >= 2 * TARGET_DIGITS {
            return Ok(x);
        }
    }
    Err(Error::PrecisionLoss(
        "no random argument away from the lattice".into(),
    ))
}
