//! Prime-power finite fields `F_q`, `q = p^e <= 2^16`.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial in `x` modulo a fixed primitive polynomial.
//! The primitive polynomial is the first one (in increasing order of its
//! digit encoding) of degree `e` over `F_p`, so every run builds the same
//! field with the same element codes.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAX_Q: u32 = 1 << 16;

/// Arithmetic context for one finite field.
pub struct Gf {
    p: u32,
    e: u32,
    q: u32,
    /// Low coefficients `c_0..c_{e-1}` of the monic modulus `x^e + ...`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Gf {}

/// Factor `q` as `p^e`; `None` unless `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static Gf>>> = OnceLock::new();

impl Gf {
    /// Shared field of order `q`. Built once per process and leaked.
    pub fn get(q: u32) -> Result<&'static Gf> {
        if q > MAX_Q {
            return Err(Error::InvalidParameter(format!("q = {q} exceeds 2^16")));
        }
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
        let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = registry.lock().expect("field registry poisoned");
        if let Some(f) = map.get(&q) {
            return Ok(f);
        }
        let field: &'static Gf = Box::leak(Box::new(Gf::build(p, e)));
        map.insert(q, field);
        Ok(field)
    }

    fn build(p: u32, e: u32) -> Gf {
        let q = p.pow(e);
        let n = (q - 1) as usize;
        if e == 1 {
            let g = (1..p.max(2))
                .find(|&g| is_primitive_root(g, p))
                .unwrap_or(1);
            let mut exp = Vec::with_capacity(2 * n);
            let mut cur = 1u32;
            for _ in 0..2 * n {
                exp.push(cur);
                cur = ((cur as u64 * g as u64) % p as u64) as u32;
            }
            let mut log = vec![0u32; q as usize];
            for (i, &v) in exp.iter().take(n).enumerate() {
                log[v as usize] = i as u32;
            }
            return Gf {
                p,
                e,
                q,
                modulus: Vec::new(),
                exp,
                log,
            };
        }
        for k in 0..q {
            let modulus = digits(k, p, e);
            if let Some(cycle) = powers_of_x(&modulus, p, q) {
                let mut exp = cycle.clone();
                exp.extend_from_slice(&cycle);
                let mut log = vec![0u32; q as usize];
                for (i, &v) in cycle.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                return Gf {
                    p,
                    e,
                    q,
                    modulus,
                    exp,
                    log,
                };
            }
        }
        unreachable!("a primitive polynomial of degree {e} over F_{p} always exists")
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn is_prime(&self) -> bool {
        self.e == 1
    }
    /// Low coefficients of the defining primitive polynomial (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
            for _ in 0..self.e {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let (mut a, mut out, mut place) = (a, 0, 1);
            for _ in 0..self.e {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (n % order)) % order;
        self.exp[l as usize]
    }

    /// `a^p`.
    #[inline]
    pub fn frobenius(&self, a: u32) -> u32 {
        if self.e == 1 {
            a
        } else {
            self.pow(a, self.p as u64)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len().max(1)]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn elem(&'static self, v: u32) -> FqElem {
        debug_assert!(v < self.q);
        FqElem { field: self, v }
    }

    /// `out[k] = sum_{i+j=k} a[i] b[j]` for `k < out_len`.
    pub fn convolve(&self, a: &[u32], b: &[u32], out_len: usize) -> Vec<u32> {
        let mut out = vec![0u32; out_len];
        if a.is_empty() || b.is_empty() {
            return out;
        }
        if self.e == 1 {
            let p = self.p as u64;
            // Each product is < 2^32, so u64 sums of up to 2^32 products cannot overflow.
            let mut acc = vec![0u64; out_len];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 || i >= out_len {
                    continue;
                }
                let x = x as u64;
                let lim = (out_len - i).min(b.len());
                for (slot, &y) in acc[i..i + lim].iter_mut().zip(&b[..lim]) {
                    *slot += x * y as u64;
                }
            }
            for (o, s) in out.iter_mut().zip(acc) {
                *o = (s % p) as u32;
            }
        } else {
            for (i, &x) in a.iter().enumerate() {
                if x == 0 || i >= out_len {
                    continue;
                }
                let lx = self.log[x as usize];
                let lim = (out_len - i).min(b.len());
                for (k, &y) in b[..lim].iter().enumerate() {
                    if y != 0 {
                        let prod = self.exp[(lx + self.log[y as usize]) as usize];
                        out[i + k] = self.add(out[i + k], prod);
                    }
                }
            }
        }
        out
    }
}

fn digits(mut k: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = k % p;
            k /= p;
            d
        })
        .collect()
}

fn is_primitive_root(g: u32, p: u32) -> bool {
    if p == 2 {
        return g == 1;
    }
    let mut cur = 1u64;
    for i in 1..p {
        cur = (cur * g as u64) % p as u64;
        if cur == 1 {
            return i == p - 1;
        }
    }
    false
}

/// Codes of `x^0, ..., x^{q-2}` if `x` generates `F_p[x]/(modulus)^*`.
fn powers_of_x(low: &[u32], p: u32, q: u32) -> Option<Vec<u32>> {
    let e = low.len();
    let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
    let mut cur = vec![0u32; e];
    cur[0] = 1;
    let mut out = Vec::with_capacity((q - 1) as usize);
    for step in 0..(q - 1) {
        let code = encode(&cur);
        if code == 0 || (step > 0 && code == 1) {
            return None;
        }
        out.push(code);
        let top = cur[e - 1];
        for i in (1..e).rev() {
            cur[i] = (cur[i - 1] + p - (top * low[i]) % p) % p;
        }
        cur[0] = (p - (top * low[0]) % p) % p;
    }
    (encode(&cur) == 1).then_some(out)
}

/// A standalone element of `F_q`.
#[derive(Clone, Copy)]
pub struct FqElem {
    field: &'static Gf,
    v: u32,
}

impl FqElem {
    pub fn value(self) -> u32 {
        self.v
    }
    pub fn field(self) -> &'static Gf {
        self.field
    }
    pub fn is_zero(self) -> bool {
        self.v == 0
    }
    pub fn inv(self) -> Result<FqElem> {
        Ok(self.field.elem(self.field.inv(self.v)?))
    }
    pub fn pow(self, n: u64) -> FqElem {
        self.field.elem(self.field.pow(self.v, n))
    }
    pub fn frobenius(self) -> FqElem {
        self.field.elem(self.field.frobenius(self.v))
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.q == other.field.q && self.v == other.v
    }
}
impl Eq for FqElem {}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: FqElem) -> FqElem {
        self.field.elem(self.field.add(self.v, rhs.v))
    }
}
impl Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: FqElem) -> FqElem {
        self.field.elem(self.field.sub(self.v, rhs.v))
    }
}
impl Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: FqElem) -> FqElem {
        self.field.elem(self.field.mul(self.v, rhs.v))
    }
}
impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        self.field.elem(self.field.neg(self.v))
    }
}
