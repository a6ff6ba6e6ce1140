//! The `u`-expansion of `Δ` as the truncated product
//!
//! ```text
//! monic: Δ = -Δ'^q u^{q-1} prod_{a monic, 1 <= deg a <= D} (1 + f_a(u))^{(q^r - 1)(q - 1)}
//! full:  Δ = -Δ'^q u^{q-1} prod_{a != 0, deg a <= D}        (1 + f_a(u))^{q^r - 1}
//! ```
//!
//! Since `u^{q^{(r-1)d} - q^{(r-1)d - 1}}` divides `f_a` for `deg a = d`, the
//! factors with `deg a > D` are `1 + O(u^N)` once `D = degree_bound(N, q, r)`.

mod useries;

pub use useries::USeries;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{monic_of_degree, nonzero_polys, prime_power, APoly, Gf};
use crate::symbolic::{CoeffRing, GenericModule, SymCoeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Monic,
    Full,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monic" => Ok(Mode::Monic),
            "full" => Ok(Mode::Full),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Monic => "monic",
            Mode::Full => "full",
        })
    }
}

/// How each factor is raised to its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowMethod {
    CharP,
    Naive,
}

#[derive(Clone, Debug)]
pub struct ExpansionConfig {
    pub q: u32,
    pub r: usize,
    pub n: usize,
    pub mode: Mode,
    /// Override for the product degree bound.
    pub d: Option<usize>,
    pub pow: PowMethod,
}

impl ExpansionConfig {
    pub fn new(q: u32, r: usize, n: usize, mode: Mode) -> Self {
        ExpansionConfig {
            q,
            r,
            n,
            mode,
            d: None,
            pow: PowMethod::CharP,
        }
    }

    pub fn validate(&self) -> Result<&'static Gf> {
        if prime_power(self.q).is_none() {
            return Err(Error::InvalidParameter(format!(
                "q = {} is not a prime power",
                self.q
            )));
        }
        if self.r < 2 {
            return Err(Error::InvalidParameter("r must be at least 2".into()));
        }
        if self.n < 1 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        Gf::get(self.q)
    }
}

/// Smallest `D` with `q^{(r-1)(D+1)} - q^{(r-1)(D+1)-1} >= N`.
pub fn degree_bound(n: usize, q: u32, r: usize) -> usize {
    let q = q as u128;
    let mut d = 0usize;
    loop {
        let k = ((r - 1) * (d + 1)) as u32;
        if q.pow(k) - q.pow(k - 1) >= n as u128 {
            return d;
        }
        d += 1;
    }
}

/// `(q^r - 1)(q - 1)` for the monic product, `q^r - 1` for the full one.
pub fn factor_exponent(q: u32, r: usize, mode: Mode) -> u64 {
    let w = (q as u64).pow(r as u32) - 1;
    match mode {
        Mode::Monic => w * (q as u64 - 1),
        Mode::Full => w,
    }
}

fn index_set(field: &'static Gf, d: usize, mode: Mode) -> Vec<APoly> {
    match mode {
        Mode::Monic => (1..=d).flat_map(|k| monic_of_degree(field, k)).collect(),
        Mode::Full => nonzero_polys(field, d)
            .filter(|a| !a.is_constant())
            .collect(),
    }
}

/// `Δ + O(u^N)` over the coefficient ring `R`.
#[derive(Clone, Debug)]
pub struct Expansion<R> {
    pub q: u32,
    pub r: usize,
    pub n: usize,
    pub mode: Mode,
    pub d: usize,
    /// Product over the factors, known to `O(u^{N - (q-1)})`.
    pub product: USeries<R>,
    /// `Δ` itself, known to `O(u^N)`.
    pub delta: USeries<R>,
    pub factor_count: usize,
}

/// Product expansion over a given rank-`(r-1)` module.
pub fn expand_over<R: CoeffRing>(
    module: &GenericModule<R>,
    cfg: &ExpansionConfig,
) -> Result<Expansion<R>> {
    let field = cfg.validate()?;
    if module.rank() + 1 != cfg.r {
        return Err(Error::InvalidParameter(format!(
            "module of rank {} cannot expand in rank {}",
            module.rank(),
            cfg.r
        )));
    }
    let q = cfg.q;
    let shift = q as usize - 1;
    let order = cfg.n.saturating_sub(shift);
    let d = cfg.d.unwrap_or_else(|| degree_bound(cfg.n, q, cfg.r));
    let e = factor_exponent(q, cfg.r, cfg.mode);
    let like = module.delta_prime().one_like();
    let indices = index_set(field, d, cfg.mode);
    let factors: Vec<USeries<R>> = indices
        .par_iter()
        .map(|a| {
            let f = module.f_a(a)?.one_plus(&like, order);
            Ok(match cfg.pow {
                PowMethod::CharP => f.charp_pow(e),
                PowMethod::Naive => f.naive_pow(e),
            })
        })
        .collect::<Result<_>>()?;
    let chunk = factors
        .len()
        .div_ceil(rayon::current_num_threads().max(1))
        .max(1);
    let partial: Vec<USeries<R>> = factors
        .par_chunks(chunk)
        .map(|c| {
            c.iter()
                .fold(USeries::one(&like, order), |acc, f| acc.mul(f))
        })
        .collect();
    let product = partial
        .iter()
        .fold(USeries::one(&like, order), |acc, f| acc.mul(f));
    let lead = module.delta_prime().pow(q as u64).neg();
    let mut coeffs = vec![like.zero_like(); shift.min(cfg.n)];
    coeffs.extend(product.coeffs().iter().map(|c| c.mul(&lead)));
    let delta = USeries::new(&like, cfg.n, coeffs);
    Ok(Expansion {
        q,
        r: cfg.r,
        n: cfg.n,
        mode: cfg.mode,
        d,
        product,
        delta,
        factor_count: indices.len(),
    })
}

impl<R: CoeffRing> Expansion<R> {
    fn nonzero(&self) -> impl Iterator<Item = (usize, &R)> {
        self.delta
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn min_delta_exponent(&self) -> Option<i64> {
        self.delta
            .coeffs()
            .iter()
            .filter_map(CoeffRing::min_delta_exponent)
            .min()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients: Vec<_> = self
            .nonzero()
            .map(|(n, c)| json!({ "n": n, "value": c }))
            .collect();
        let mut meta = json!({
            "degree_bound": degree_bound(self.n, self.q, self.r),
            "factor_count": self.factor_count,
            "factor_exponent": factor_exponent(self.q, self.r, self.mode),
            "coefficient_ring": if self.r == 2 { "A" } else { "A[g, D, 1/D]" },
        });
        if let Some(e) = self.min_delta_exponent() {
            meta["min_delta_exponent"] = json!(e);
        }
        json!({
            "q": self.q,
            "r": self.r,
            "N": self.n,
            "mode": self.mode,
            "D": self.d,
            "prefactor_shift": self.q - 1,
            "coefficients": coefficients,
            "meta": meta,
        })
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = format!(
            "Delta for q={}, r={} ({} product, D={}, {} factors), mod u^{}\n",
            self.q, self.r, self.mode, self.d, self.factor_count, self.n
        );
        if self.r > 2 {
            out.push_str("D denotes Delta'\n");
        }
        for (n, c) in self.nonzero() {
            writeln!(out, "u^{n}: {c}").unwrap();
        }
        out
    }
}

/// The expansion in the coefficient ring matching `r`.
#[derive(Clone, Debug)]
pub enum ExpansionResult {
    Rank2(Expansion<APoly>),
    Symbolic(Expansion<SymCoeff>),
}

impl ExpansionResult {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ExpansionResult::Rank2(e) => e.to_json(),
            ExpansionResult::Symbolic(e) => e.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            ExpansionResult::Rank2(e) => e.to_text(),
            ExpansionResult::Symbolic(e) => e.to_text(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            ExpansionResult::Rank2(e) => e.d,
            ExpansionResult::Symbolic(e) => e.d,
        }
    }

    pub fn factor_count(&self) -> usize {
        match self {
            ExpansionResult::Rank2(e) => e.factor_count,
            ExpansionResult::Symbolic(e) => e.factor_count,
        }
    }

    /// Same truncated series, ignoring how it was obtained.
    pub fn same_series(&self, other: &ExpansionResult) -> bool {
        match (self, other) {
            (ExpansionResult::Rank2(a), ExpansionResult::Rank2(b)) => a.delta == b.delta,
            (ExpansionResult::Symbolic(a), ExpansionResult::Symbolic(b)) => a.delta == b.delta,
            _ => false,
        }
    }
}

pub fn delta_expansion(cfg: &ExpansionConfig) -> Result<ExpansionResult> {
    let field = cfg.validate()?;
    if cfg.r == 2 {
        Ok(ExpansionResult::Rank2(expand_over(
            &GenericModule::carlitz(field),
            cfg,
        )?))
    } else {
        Ok(ExpansionResult::Symbolic(expand_over(
            &GenericModule::generic(field, cfg.r)?,
            cfg,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn degree_bounds() {
        assert_eq!(degree_bound(20, 3, 2), 3);
        assert_eq!(degree_bound(2, 2, 2), 1);
        assert_eq!(degree_bound(1, 2, 2), 0);
        assert_eq!(degree_bound(1, 3, 3), 0);
        assert_eq!(degree_bound(200, 3, 2), 5);
    }

    #[test]
    fn rank2_q2_leading_terms() {
        // Degree-1 factors are (1 + a u)^3; degree-2 ones start at u^2.
        let cfg = ExpansionConfig::new(2, 2, 4, Mode::Monic);
        let ExpansionResult::Rank2(e) = delta_expansion(&cfg).unwrap() else {
            panic!()
        };
        let f = Gf::get(2).unwrap();
        assert!(e.delta.coeffs()[0].is_zero());
        assert_eq!(e.delta.coeffs()[1], APoly::one(f));
        // u^2 coefficient: -3 * (t + (t+1)) = 1 in F_2
        assert_eq!(e.d, 2);
        assert_eq!(e.delta.coeffs()[2], APoly::one(f));
    }

    #[test]
    fn short_orders() {
        let cfg = ExpansionConfig::new(3, 2, 1, Mode::Monic);
        let ExpansionResult::Rank2(e) = delta_expansion(&cfg).unwrap() else {
            panic!()
        };
        assert!(e.delta.is_zero());
        assert_eq!(e.delta.order(), 1);
        let bad = ExpansionConfig::new(3, 2, 0, Mode::Monic);
        assert!(delta_expansion(&bad).is_err());
        assert!(delta_expansion(&ExpansionConfig::new(6, 2, 5, Mode::Monic)).is_err());
        assert!(delta_expansion(&ExpansionConfig::new(3, 1, 5, Mode::Monic)).is_err());
    }

    #[test]
    fn monic_equals_full_small() {
        for (q, r, n) in [(2u32, 2usize, 12usize), (3, 2, 12), (2, 3, 8)] {
            let a = delta_expansion(&ExpansionConfig::new(q, r, n, Mode::Monic)).unwrap();
            let b = delta_expansion(&ExpansionConfig::new(q, r, n, Mode::Full)).unwrap();
            assert!(a.same_series(&b), "q={q} r={r}");
        }
    }

    #[test]
    fn json_shape() {
        let cfg = ExpansionConfig::new(3, 2, 10, Mode::Monic);
        let v = delta_expansion(&cfg).unwrap().to_json();
        assert_eq!(v["prefactor_shift"], 2);
        assert_eq!(v["coefficients"][0], json!({"n": 2, "value": [2]}));
        assert_eq!(v["D"], 2);
    }
}
