//! Acceptance criteria, one test each. Every test prints one
//! `criterion N: PASS|FAIL ...` line (visible with `--nocapture`) and then
//! asserts.

use std::time::Instant;

use drinfeld_delta::bench::time_expansion;
use drinfeld_delta::expansion::{delta_expansion, ExpansionConfig, ExpansionResult, Mode, USeries};
use drinfeld_delta::field::{nonzero_polys, APoly, Gf};
use drinfeld_delta::symbolic::GenericModule;
use drinfeld_delta::verify::{
    builtin_points, check_with_expansion, covariance_matrices, expansion_for, lemma1_decreasing,
    lemma1_empirical, raised_params, random_argument, verify_covariance, verify_exp_product,
    verify_leading_power, verify_torsion_product, NumericParams, Status, TestPoint,
    EXP_PRODUCT_TERMS, TARGET_DIGITS,
};
use drinfeld_delta::{CarlitzModule, Ring, SymbolicModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, title: &str, failures: &[String], detail: String) {
    let ok = failures.is_empty();
    println!(
        "criterion {n}: {} {title} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed:\n{}", failures.join("\n"));
}

fn points(q: u32, r: usize, params: NumericParams) -> Vec<TestPoint> {
    builtin_points(q, r, params).expect("built-in points")
}

/// Runs the product-vs-direct check and returns the digits, or a failure line.
fn product_digits(point: &TestPoint) -> Result<i64, String> {
    let check = expansion_for(point)
        .and_then(|e| check_with_expansion(point, &e))
        .map_err(|e| format!("{}: {e}", point.name))?;
    let d = check.discrepancy;
    if d.status == Status::Pass && d.relative_digits >= TARGET_DIGITS {
        Ok(d.relative_digits)
    } else {
        Err(format!("{}: {:?}", point.name, d))
    }
}

#[test]
fn criterion_01_product_equals_definition_rank2() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut digits = Vec::new();
    for q in [2, 3] {
        let pts = points(q, 2, NumericParams::default());
        assert_eq!(pts.len(), 3);
        for p in &pts {
            match product_digits(p) {
                Ok(d) => digits.push(d),
                Err(e) => failures.push(e),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 30 {
        failures.push(format!("took {elapsed:?}"));
    }
    let min = digits.iter().min().copied().unwrap_or(0);
    report(
        1,
        "product formula equals lattice definition, r = 2",
        &failures,
        format!("6 points, min {min} digits, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_product_equals_definition_rank3() {
    let start = Instant::now();
    let params = NumericParams {
        n: 20,
        ..Default::default()
    };
    let mut failures = Vec::new();
    let mut digits = Vec::new();
    let pts = points(2, 3, params);
    assert_eq!(pts.len(), 2);
    for p in &pts {
        match product_digits(p) {
            Ok(d) => digits.push(d),
            Err(e) => failures.push(e),
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 120 {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        2,
        "symbolic rank-3 expansion equals lattice definition",
        &failures,
        format!("digits {digits:?}, {elapsed:?}"),
    );
}

#[test]
fn criterion_03_monic_equals_full() {
    let mut failures = Vec::new();
    for (q, r, n) in [(2, 2, 30), (3, 2, 30), (2, 3, 15)] {
        let monic = delta_expansion(&ExpansionConfig::new(q, r, n, Mode::Monic)).unwrap();
        let full = delta_expansion(&ExpansionConfig::new(q, r, n, Mode::Full)).unwrap();
        if !monic.same_series(&full) {
            failures.push(format!("q={q} r={r} N={n}"));
        }
    }
    report(
        3,
        "monic and full products agree exactly",
        &failures,
        "3 shapes".into(),
    );
}

#[test]
fn criterion_04_prefactor_and_support() {
    let mut failures = Vec::new();
    let mut count = 0;
    let shapes = [
        (2, 2, 30),
        (3, 2, 30),
        (4, 2, 20),
        (5, 2, 20),
        (2, 3, 15),
        (3, 3, 15),
        (2, 4, 10),
    ];
    for (q, r, n) in shapes {
        for mode in [Mode::Monic, Mode::Full] {
            count += 1;
            let f = Gf::get(q).unwrap();
            let lead = (q - 1) as usize;
            let ok = match delta_expansion(&ExpansionConfig::new(q, r, n, mode)).unwrap() {
                ExpansionResult::Rank2(e) => {
                    (0..lead).all(|k| e.delta.coeff(k).is_some_and(Ring::is_zero))
                        && e.delta.coeff(lead) == Some(&APoly::constant(f, f.neg(1)))
                }
                ExpansionResult::Symbolic(e) => {
                    let expected = SymbolicModule::generic(f, r)
                        .unwrap()
                        .delta_prime()
                        .pow(q as u64)
                        .neg();
                    (0..lead).all(|k| e.delta.coeff(k).is_some_and(Ring::is_zero))
                        && e.delta.coeff(lead) == Some(&expected)
                }
            };
            if !ok {
                failures.push(format!("q={q} r={r} N={n} {mode}"));
            }
        }
    }
    report(
        4,
        "leading term is -Δ'^q u^(q-1)",
        &failures,
        format!("{count} expansions"),
    );
}

fn check_fa<R: Ring>(module: &GenericModule<R>, label: &str, failures: &mut Vec<String>) -> usize {
    let f = module.field();
    let mut count = 0;
    for a in nonzero_polys(f, 3) {
        count += 1;
        let fa = match module.f_a(&a) {
            Ok(fa) => fa,
            Err(e) => {
                failures.push(format!("{label} a={a}: {e}"));
                continue;
            }
        };
        let q = f.q() as u64;
        let k = ((module.rank()) * a.degree().unwrap()) as u32;
        if a.is_constant() {
            if !fa.is_zero() {
                failures.push(format!("{label} a={a}: f_a nonzero"));
            }
        } else {
            let need = q.pow(k) - q.pow(k - 1);
            if fa.order().is_none_or(|o| o < need) {
                failures.push(format!(
                    "{label} a={a}: order {:?} below {need}",
                    fa.order()
                ));
            }
        }
    }
    count
}

#[test]
fn criterion_05_divisibility_and_degeneration() {
    let mut failures = Vec::new();
    let mut count = 0;
    for q in [2, 3] {
        let f = Gf::get(q).unwrap();
        count += check_fa(
            &CarlitzModule::carlitz(f),
            &format!("q={q} r=2"),
            &mut failures,
        );
        count += check_fa(
            &SymbolicModule::generic(f, 3).unwrap(),
            &format!("q={q} r=3"),
            &mut failures,
        );
    }
    report(
        5,
        "X^(Q - Q/q) divides f_a and f_c = 0",
        &failures,
        format!("{count} polynomials a"),
    );
}

fn check_homomorphism<R: Ring>(
    module: &GenericModule<R>,
    label: &str,
    failures: &mut Vec<String>,
) -> usize {
    let f = module.field();
    let polys: Vec<APoly> = nonzero_polys(f, 2).collect();
    let mut count = 0;
    for a in &polys {
        let pa = module.phi_a(a).unwrap();
        if pa.leading().unwrap() != &module.delta_a_power(a).unwrap() {
            failures.push(format!("{label}: leading(phi_{a}) != delta_a_power"));
        }
        for b in &polys {
            count += 1;
            let pb = module.phi_a(b).unwrap();
            if module.phi_a(&a.mul(b)).unwrap() != pa.compose(&pb) {
                failures.push(format!("{label}: phi_({a})({b}) != phi_{a} o phi_{b}"));
            }
        }
    }
    count
}

#[test]
fn criterion_06_homomorphism_and_leading_power() {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for q in [2, 3] {
        let f = Gf::get(q).unwrap();
        pairs += check_homomorphism(
            &CarlitzModule::carlitz(f),
            &format!("q={q} r=2"),
            &mut failures,
        );
        pairs += check_homomorphism(
            &SymbolicModule::generic(f, 3).unwrap(),
            &format!("q={q} r=3"),
            &mut failures,
        );
    }
    let mut numeric = 0;
    for (q, r) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        for p in points(q, r, NumericParams::default()) {
            numeric += 1;
            match verify_leading_power(&p.sub_lattice) {
                Ok(d) if d.pass() => {}
                other => failures.push(format!("{}: {other:?}", p.name)),
            }
        }
    }
    report(
        6,
        "phi_ab = phi_a o phi_b, leading coefficients, leading(phi_t^2) power law",
        &failures,
        format!("{pairs} pairs, {numeric} numeric points"),
    );
}

#[test]
fn criterion_07_exp_and_torsion_product_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut min_digits = i64::MAX;
    for (q, r) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        for p in points(q, r, NumericParams::default()) {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for k in 0..10 {
                let x = random_argument(&p, &mut rng).unwrap();
                for (label, result) in [
                    ("exp", verify_exp_product(&p, &x, EXP_PRODUCT_TERMS)),
                    ("torsion", verify_torsion_product(&p, &x)),
                ] {
                    checks += 1;
                    match result {
                        Ok(d) if d.pass() => min_digits = min_digits.min(d.relative_digits),
                        other => failures.push(format!("{} {label} #{k}: {other:?}", p.name)),
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        failures.push(format!("took {elapsed:?}"));
    }
    report(
        7,
        "exponential and torsion product identities",
        &failures,
        format!("{checks} checks, min {min_digits} digits, {elapsed:?}"),
    );
}

#[test]
fn criterion_08_modular_covariance() {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (q, r) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let f = Gf::get(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in points(q, r, NumericParams::default()) {
            let gammas: Vec<_> = covariance_matrices(f, r, &mut rng)
                .into_iter()
                .map(|(_, g)| g)
                .collect();
            if gammas.len() < 5 {
                failures.push(format!("only {} matrices for r={r}", gammas.len()));
            }
            match verify_covariance(&p, &gammas) {
                Ok(ds) => {
                    for (i, d) in ds.iter().enumerate() {
                        checks += 1;
                        if !d.pass() {
                            failures.push(format!("{} gamma #{i}: {d:?}", p.name));
                        }
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", p.name)),
            }
        }
    }
    report(
        8,
        "Δ(γω) = j^(q^r - 1) Δ(ω)",
        &failures,
        format!("{checks} checks"),
    );
}

#[test]
fn criterion_09_lemma1_table_decreases() {
    let mut failures = Vec::new();
    let mut tables = Vec::new();
    for q in [2, 3] {
        for p in points(q, 2, NumericParams::default()) {
            let rows = lemma1_empirical(&p, 4).unwrap();
            if rows[0].max_log_abs.is_some() {
                failures.push(format!("{}: f_a(u) nonzero for deg a = 0", p.name));
            }
            if q == 3 {
                let exps: Vec<u64> = rows[1..].iter().map(|r| r.exponent).collect();
                assert_eq!(exps, [2, 6, 18, 54]);
            }
            if !lemma1_decreasing(&rows) {
                failures.push(format!("{}: {rows:?}", p.name));
            }
            let sizes: Vec<String> = rows[1..]
                .iter()
                .map(|r| r.max_log_abs.unwrap().to_string())
                .collect();
            tables.push(format!("{} [{}]", p.name, sizes.join(", ")));
        }
    }
    report(
        9,
        "max log_q |f_a(u)| strictly decreasing in deg a",
        &failures,
        tables.join("; "),
    );
}

fn random_series(rng: &mut ChaCha8Rng) -> (USeries<APoly>, u64) {
    let q = [2, 3, 4, 5, 9][rng.gen_range(0..5)];
    let f = Gf::get(q).unwrap();
    let order = rng.gen_range(10..60);
    let coeffs = (0..order)
        .map(|_| {
            if rng.gen_bool(0.3) {
                APoly::zero(f)
            } else {
                APoly::new(
                    f,
                    (0..rng.gen_range(1..4))
                        .map(|_| rng.gen_range(0..q))
                        .collect(),
                )
            }
        })
        .collect();
    (
        USeries::new(&APoly::one(f), order, coeffs),
        rng.gen_range(0..300),
    )
}

#[test]
fn criterion_10_frobenius_powering() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..50 {
        let (x, e) = random_series(&mut rng);
        if x.charp_pow(e) != x.naive_pow(e) {
            failures.push(format!("instance {i}: exponent {e}"));
        }
    }
    let cfg = ExpansionConfig::new(3, 2, 200, Mode::Monic);
    let (timing, _) = time_expansion(&cfg, 3).unwrap();
    if !timing.identical || timing.charp_ms > timing.naive_ms {
        failures.push(format!("{timing:?}"));
    }
    report(
        10,
        "Frobenius powering matches and is not slower",
        &failures,
        format!(
            "50 instances; q=3 r=2 N=200 charp {:.1} ms, naive {:.1} ms",
            timing.charp_ms, timing.naive_ms
        ),
    );
}

#[test]
fn criterion_11_stability_under_more_resources() {
    let mut failures = Vec::new();
    let mut runs = 0;
    let shapes = [
        (2, 2, NumericParams::default()),
        (3, 2, NumericParams::default()),
        (
            2,
            3,
            NumericParams {
                n: 20,
                ..Default::default()
            },
        ),
    ];
    for (q, r, params) in shapes {
        for p in points(q, r, params) {
            if product_digits(&p).is_err() {
                continue;
            }
            for (label, raised) in raised_params(params, q, r) {
                runs += 1;
                let again = p.with_params(raised).unwrap();
                if let Err(e) = product_digits(&again) {
                    failures.push(format!("{label}: {e}"));
                }
            }
        }
    }
    report(
        11,
        "passes survive B+1, P+20, D+1",
        &failures,
        format!("{runs} reruns"),
    );
}
