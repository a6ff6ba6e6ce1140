use num_rational::Ratio;
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use crate::drinfeld::{phi_from_lattice, u_param, LatticeSpec, Omega};
use crate::error::{Error, Result};
use crate::field::{compute_xi, APoly, Gf, RamifiedSeries};
use crate::ring::Ring;
use crate::symbolic::Specialization;

/// Lattice bound, series precision and expansion order for numeric checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumericParams {
    /// Degree bound `B` of the lattice box.
    pub b: usize,
    /// Relative precision `P` of `xi`, in `s`-digits.
    pub p: i64,
    /// Truncation order `N` of the `u`-expansion.
    pub n: usize,
    /// Override of the product degree bound `D`.
    pub d: Option<usize>,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            b: 24,
            p: 200,
            n: 50,
            d: None,
        }
    }
}

/// Smallest multiple of `q - 1` that is at least `r`, so that `r` distinct
/// valuation classes exist.
pub fn point_ramification(q: u32, r: usize) -> u32 {
    let step = q - 1;
    (r as u32).div_ceil(step) * step
}

fn xi_valuation(q: u32, m: u32) -> i64 {
    -((m / (q - 1)) as i64) * q as i64
}

/// Entry `xi s^{-c} (1 + sum_k a_k s^k)`.
fn entry(xi: &RamifiedSeries, c: i64, unit: &[u32]) -> RamifiedSeries {
    let f = xi.field();
    let m = xi.ramification();
    let mut coeffs = vec![1];
    coeffs.extend_from_slice(unit);
    let u = RamifiedSeries::from_coeffs(f, m, 0, coeffs, crate::field::EXACT);
    xi.mul(&RamifiedSeries::monomial(f, m, 1, -c)).mul(&u)
}

/// A point of the period domain together with the data derived from it.
#[derive(Clone, Debug)]
pub struct TestPoint {
    pub name: String,
    pub omega: Omega,
    pub params: NumericParams,
    /// Lattice `Λ'` spanned by `omega_2, ..., omega_r`.
    pub sub_lattice: LatticeSpec,
    pub u: RamifiedSeries,
    /// Numeric `g_i` and `Δ'` of the module of `Λ'`; `Δ' = 1` for rank 2.
    pub module: Specialization,
    /// `log_q |omega_1| - log_q max |omega'_i|`, the distance into the
    /// region where `|u|` is small.
    pub separation: Ratio<i64>,
    /// `(c_i, unit_i)` when the point was built by [`TestPoint::from_shifts`].
    shifts: Option<Vec<(i64, Vec<u32>)>>,
}

impl TestPoint {
    /// `omega_i = xi s^{-c_i} (1 + units_i)` for `i < r` and `omega_r = xi`.
    pub fn from_shifts(
        name: impl Into<String>,
        q: u32,
        shifts: &[(i64, Vec<u32>)],
        params: NumericParams,
    ) -> Result<Self> {
        let f = Gf::get(q)?;
        let r = shifts.len() + 1;
        let m = point_ramification(q, r);
        let xi = compute_xi(f, m, params.p)?.value;
        let mut entries: Vec<RamifiedSeries> = shifts
            .iter()
            .map(|(c, unit)| entry(&xi, *c, unit))
            .collect();
        entries.push(xi.clone());
        let omega = Omega::new(entries, &xi)?;
        if !omega.general_position() {
            return Err(Error::InvalidParameter(format!(
                "shifts {:?} do not give distinct valuation classes mod {m}",
                shifts.iter().map(|s| s.0).collect::<Vec<_>>()
            )));
        }
        let mut pt = Self::from_omega(name, omega, params)?;
        pt.shifts = Some(shifts.to_vec());
        Ok(pt)
    }

    pub fn from_omega(
        name: impl Into<String>,
        omega: Omega,
        params: NumericParams,
    ) -> Result<Self> {
        let sub_lattice = omega.sub_lattice(params.b)?;
        let u = u_param(&omega, params.b)?;
        let module = if omega.rank() == 2 {
            Specialization::carlitz(omega.field(), omega.ramification())
        } else {
            let phi = phi_from_lattice(&sub_lattice, &APoly::t(omega.field()))?;
            Specialization::from_phi(&phi)?
        };
        let size = |x: &RamifiedSeries| x.abs_log().expect("entries are nonzero");
        let biggest = omega.tail().iter().map(size).max().unwrap();
        let separation = size(&omega.entries()[0]) - biggest;
        Ok(TestPoint {
            name: name.into(),
            omega,
            params,
            sub_lattice,
            u,
            module,
            separation,
            shifts: None,
        })
    }

    pub fn q(&self) -> u32 {
        self.omega.field().q()
    }

    pub fn rank(&self) -> usize {
        self.omega.rank()
    }

    pub fn ramification(&self) -> u32 {
        self.omega.ramification()
    }

    /// Same point rebuilt with other numeric parameters.
    pub fn with_params(&self, params: NumericParams) -> Result<Self> {
        let shifts = self.shifts.as_ref().ok_or_else(|| {
            Error::InvalidParameter(format!("point {} was not built from shifts", self.name))
        })?;
        Self::from_shifts(self.name.clone(), self.q(), shifts, params)
    }
}

/// `(c, unit)` for each entry `omega_1, ..., omega_{r-1}` of one point.
type Shifts = Vec<(i64, Vec<u32>)>;

/// Shifts and units of the built-in points, by `(q, r)`.
fn builtin_shifts(q: u32, r: usize) -> Option<Vec<Shifts>> {
    Some(match (q, r) {
        (2, 2) => vec![
            vec![(1, vec![1])],
            vec![(3, vec![0, 1, 1])],
            vec![(5, vec![1, 0, 1])],
        ],
        (3, 2) => vec![
            vec![(1, vec![2])],
            vec![(3, vec![1, 1])],
            vec![(5, vec![0, 2, 1])],
        ],
        (2, 3) => vec![
            vec![(2, vec![1]), (1, vec![0, 1])],
            vec![(4, vec![0, 1]), (2, vec![1, 1])],
        ],
        (3, 3) => vec![
            vec![(2, vec![1]), (1, vec![2])],
            vec![(5, vec![2, 1]), (2, vec![0, 1])],
        ],
        _ => return None,
    })
}

/// The committed test points for `q, r in {2, 3}`.
pub fn builtin_points(q: u32, r: usize, params: NumericParams) -> Result<Vec<TestPoint>> {
    let shifts = builtin_shifts(q, r)
        .ok_or_else(|| Error::InvalidParameter(format!("no built-in points for q={q}, r={r}")))?;
    shifts
        .iter()
        .enumerate()
        .map(|(i, s)| TestPoint::from_shifts(format!("q{q}-r{r}-p{}", i + 1), q, s, params))
        .collect()
}

/// A random point with the same shape as the built-in ones: `omega_1` far
/// out and the other entries in distinct valuation classes.
pub fn random_point(
    q: u32,
    r: usize,
    rng: &mut ChaCha8Rng,
    params: NumericParams,
    name: String,
) -> Result<TestPoint> {
    let m = point_ramification(q, r) as i64;
    let base = xi_valuation(q, m as u32).rem_euclid(m);
    let mut used = vec![base];
    let mut shifts = Vec::new();
    for i in 0..r - 1 {
        let (lo, hi) = if i == 0 {
            (2 * m + 1, 4 * m)
        } else {
            (1, 2 * m)
        };
        let c = loop {
            let c: i64 = rng.gen_range(lo..=hi);
            let class = (xi_valuation(q, m as u32) - c).rem_euclid(m);
            if !used.contains(&class) {
                used.push(class);
                break c;
            }
        };
        let unit: Vec<u32> = (0..3).map(|_| rng.gen_range(0..q)).collect();
        shifts.push((c, unit));
    }
    TestPoint::from_shifts(name, q, &shifts, params)
}
