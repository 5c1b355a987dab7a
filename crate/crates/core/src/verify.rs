//! Seeded property suite over every module, plus the random generators it
//! shares with the test targets.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{factorize, is_perfect_square, is_prime, jacobi, jacobi_big, multiplicative_order};
use crate::bounds::{exponent_table, grakol_optimize, interpolation_check, regime_value, Regime, TermSystem};
use crate::census::{count_q, count_q_total, distinct_fields, sequence_kernels};
use crate::chars::{complete_sum_pair, incomplete_sum, product_formula_residual, weil_scan, FLOAT_RESIDUAL};
use crate::harvest::{SetVariant, SievePrimeSet};
use crate::poly::{Polynomial, SequenceSpec};
use crate::sieve::{detector, gcd_bound_holds, omega_z, sieve_run};

/// Monic polynomial of degree `1..=max_degree` with no repeated roots and coefficients in `[-5, 5]`.
pub fn random_monic_separable(rng: &mut impl Rng, max_degree: usize) -> Polynomial {
    loop {
        let d = rng.gen_range(1..=max_degree);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        c.push(1);
        let f = Polynomial::from_i64(&c).unwrap();
        if f.gcd_with_derivative().degree() == 0 {
            return f;
        }
    }
}

/// Inputs to the pair sums with `gcd(lp, lambda) = gcd(tau_l, tau_p) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleTuple {
    pub f: Polynomial,
    pub lambda: i64,
    pub ell: u64,
    pub p: u64,
    pub a: i64,
    pub period: u64,
}

/// Draws an admissible tuple with odd primes `l != p <= prime_max`; with
/// `coprime_constant` also `gcd(lp, f(0)) = 1`.
pub fn random_admissible_tuple(
    rng: &mut impl Rng,
    max_degree: usize,
    prime_max: u64,
    coprime_constant: bool,
) -> AdmissibleTuple {
    let primes: Vec<u64> = (3..=prime_max).filter(|&q| is_prime(q)).collect();
    loop {
        let f = random_monic_separable(rng, max_degree);
        let lambda = *[2i64, 3, 5].choose(rng).unwrap();
        let ell = *primes.choose(rng).unwrap();
        let p = *primes.choose(rng).unwrap();
        if ell == p || lambda as u64 % ell == 0 || lambda as u64 % p == 0 {
            continue;
        }
        if coprime_constant {
            let c = f.constant();
            if (c % BigInt::from(ell)).sign() == num_bigint::Sign::NoSign
                || (c % BigInt::from(p)).sign() == num_bigint::Sign::NoSign
            {
                continue;
            }
        }
        let tl = multiplicative_order(lambda, ell).unwrap().order;
        let tp = multiplicative_order(lambda, p).unwrap().order;
        if tl.gcd(&tp) != 1 {
            continue;
        }
        let period = tl * tp;
        let a = rng.gen_range(0..period as i64);
        return AdmissibleTuple {
            f,
            lambda,
            ell,
            p,
            a,
            period,
        };
    }
}

/// The second test sequence `X^3 + 2`.
pub fn cubic_spec(g: u64) -> SequenceSpec {
    SequenceSpec::validate(Polynomial::from_i64(&[2, 0, 0, 1]).unwrap(), g).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub quick: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Sizes {
    random_cases: usize,
    window: u64,
    weil_p_max: u64,
}

fn check_jacobi(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for _ in 0..sz.random_cases * 20 {
        let m = 2 * rng.gen_range(0..1_000_000u64) + 1;
        let a: i64 = rng.gen();
        let small = jacobi(a, m).map_err(|e| e.to_string())?;
        let big = jacobi_big(&BigInt::from(a), &BigInt::from(m)).map_err(|e| e.to_string())?;
        ensure(small == big, || format!("({a}/{m}): {small} vs {big}"))?;
    }
    Ok(format!("{} symbols", sz.random_cases * 20))
}

fn check_factorization(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for _ in 0..sz.random_cases * 20 {
        let n = rng.gen_range(2..u64::MAX);
        let f = factorize(n).map_err(|e| e.to_string())?;
        ensure(f.product() == n as u128, || format!("{n}: product mismatch"))?;
        ensure(f.primes().all(is_prime), || format!("{n}: composite factor"))?;
    }
    Ok(format!("{} factorizations", sz.random_cases * 20))
}

fn check_orders(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for _ in 0..sz.random_cases * 5 {
        let m = rng.gen_range(3..1_000_000u64);
        let b = rng.gen_range(1..m) as i64;
        if b.gcd(&(m as i64)) != 1 {
            continue;
        }
        let r = multiplicative_order(b, m).map_err(|e| e.to_string())?;
        let phi = crate::arith::euler_phi(m).unwrap();
        ensure(phi % r.order == 0, || format!("ord_{m}({b}) = {} does not divide phi", r.order))?;
        ensure(crate::arith::pow_mod(b as u64, r.order, m) == 1 % m, || format!("ord_{m}({b}) not a period"))?;
    }
    Ok("orders divide phi".into())
}

fn check_product_formula(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..sz.random_cases {
        let t = random_admissible_tuple(rng, 4, 300, false);
        let exact = product_formula_residual(&t.f, t.lambda, t.ell, t.p, 0).map_err(|e| e.to_string())?;
        ensure(exact == 0.0, || format!("{t:?}: residual {exact} at a = 0"))?;
        let r = product_formula_residual(&t.f, t.lambda, t.ell, t.p, t.a).map_err(|e| e.to_string())?;
        ensure(r <= FLOAT_RESIDUAL * t.period as f64, || format!("{t:?}: residual {r}"))?;
        worst = worst.max(r / t.period as f64);
    }
    Ok(format!("{} tuples, worst residual/period {worst:.2e}", sz.random_cases))
}

fn check_completion(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for _ in 0..sz.random_cases / 4 + 1 {
        let t = random_admissible_tuple(rng, 4, 150, true);
        let full = incomplete_sum(&t.f, 1, t.lambda, t.ell, t.p, t.period).map_err(|e| e.to_string())?;
        let pair = complete_sum_pair(&t.f, t.lambda, t.ell, t.p, 0).map_err(|e| e.to_string())?;
        ensure(full.exact == pair.exact, || format!("{t:?}: {:?} vs {:?}", full.exact, pair.exact))?;
    }
    Ok("incomplete sums over a full period are complete".into())
}

fn check_weil(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let f = random_monic_separable(rng, 5);
        let lambda = *[2i64, 3].choose(rng).unwrap();
        let scan = weil_scan(&f, lambda, sz.weil_p_max).map_err(|e| e.to_string())?;
        ensure(scan.violations.is_empty(), || format!("f = {f}: violations at {:?}", scan.violations))?;
        worst = worst.max(scan.max_ratio / scan.slack);
    }
    Ok(format!("worst ratio/(d+1) {worst:.3}"))
}

fn check_sieve(sz: &Sizes) -> Check {
    let mut squares = 0;
    for spec in [SequenceSpec::shanks(), cubic_spec(2), cubic_spec(3)] {
        let set = SievePrimeSet::build(spec.g, 50.0, 2.0, 0.677, SetVariant::Standard).map_err(|e| e.to_string())?;
        ensure(set.check().is_ok(), || format!("harvest invariant: {:?}", set.check()))?;
        ensure(gcd_bound_holds(&set), || "gcd bound".into())?;
        for (n, kern) in sequence_kernels(&spec, 0, sz.window, 10_000) {
            let Some(kern) = kern else { continue };
            let mult = kern.square_completer();
            let d = detector(&spec, n, &mult, &set).map_err(|e| e.to_string())?;
            let w = omega_z(&spec, n, &mult, &set).map_err(|e| e.to_string())?;
            ensure(d == set.len() as i64 - w as i64, || format!("detector identity fails at n = {n}"))?;
            squares += 1;
        }
        for s in [1u64, 17, 41] {
            let run = sieve_run(&spec, 0, sz.window, s, &set).map_err(|e| e.to_string())?;
            ensure(run.certificate.holds, || format!("certificate fails for s = {s}"))?;
        }
    }
    Ok(format!("{squares} square multiples checked"))
}

fn check_census(sz: &Sizes) -> Check {
    for spec in [SequenceSpec::shanks(), cubic_spec(2)] {
        for m in [0u64, 1000] {
            let n = sz.window.min(30);
            let total = count_q_total(&spec, m, n, 200).map_err(|e| e.to_string())?;
            let direct: u64 = (1..=200u64)
                .filter(|&s| crate::arith::is_squarefree(s))
                .map(|s| count_q(&spec, m, n, s).unwrap())
                .sum();
            ensure(total.total == direct, || format!("M = {m}: {} vs {direct}", total.total))?;
            let classes = distinct_fields(&spec, m, n).map_err(|e| e.to_string())?;
            ensure(classes.classes.iter().map(|c| c.members.len()).sum::<usize>() as u64 + classes.skipped.len() as u64 == n, || {
                "classes do not partition the window".into()
            })?;
        }
    }
    Ok("kernel totals match direct counts".into())
}

fn check_squares(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for _ in 0..sz.random_cases * 10 {
        let bytes: Vec<u8> = (0..rng.gen_range(1..80)).map(|_| rng.gen()).collect();
        let r = BigUint::from_bytes_le(&bytes);
        let sq = BigInt::from(&r * &r);
        ensure(is_perfect_square(&sq), || format!("{sq} not recognized"))?;
        let near = &sq + BigInt::from(1u32);
        ensure(r == BigUint::from(0u32) || !is_perfect_square(&near), || format!("{near} misjudged"))?;
    }
    Ok("square recognition".into())
}

fn check_bounds(rng: &mut ChaCha8Rng, sz: &Sizes) -> Check {
    for a in [0.51, 0.6, 0.677, 0.75, 0.9, 0.99] {
        let c = interpolation_check(a).map_err(|e| e.to_string())?;
        ensure(c.holds, || format!("interpolation at alpha = {a}"))?;
        let t = exponent_table(a).map_err(|e| e.to_string())?;
        let n = 1e9f64;
        for (e, r1, r2) in [(t.switch1, Regime::R1, Regime::R2), (t.switch2, Regime::R2, Regime::R3)] {
            let s = n.powf(e);
            let (x, y) = (regime_value(a, n, s, r1), regime_value(a, n, s, r2));
            ensure((x - y).abs() <= 1e-9 * y, || format!("discontinuity at alpha = {a}"))?;
        }
    }
    for _ in 0..sz.random_cases {
        let term = |rng: &mut ChaCha8Rng| (rng.gen_range(0.01..100.0), rng.gen_range(0.1..3.0));
        let asc = (0..rng.gen_range(1..4)).map(|_| term(rng)).collect();
        let desc = (0..rng.gen_range(1..4)).map(|_| term(rng)).collect();
        let lo = rng.gen_range(-5.0..0.0);
        let ts = TermSystem::with_log_range(asc, desc, lo, lo + rng.gen_range(0.0..20.0)).unwrap();
        ensure(grakol_optimize(&ts).guarantee_holds, || format!("guarantee fails on {ts:?}"))?;
    }
    Ok("exponent calculus and balancing".into())
}

fn check_export(rng: &mut ChaCha8Rng) -> Check {
    let g = rng.gen_range(2..12u64);
    let set = SievePrimeSet::build(g, 300.0, 2.0, 0.677, SetVariant::ErhStyle).map_err(|e| e.to_string())?;
    let back = SievePrimeSet::import(&set.export()).map_err(|e| e.to_string())?;
    ensure(back == set, || "prime-set export roundtrip".into())?;
    Ok(format!("{} primes roundtripped", set.len()))
}

/// Runs every check; each draws from its own stream derived from `seed`.
pub fn run_suite(seed: u64, quick: bool) -> VerifyReport {
    let sz = if quick {
        Sizes {
            random_cases: 20,
            window: 60,
            weil_p_max: 500,
        }
    } else {
        Sizes {
            random_cases: 200,
            window: 300,
            weil_p_max: 3000,
        }
    };
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    let results: Vec<(&'static str, Check)> = vec![
        ("jacobi", check_jacobi(&mut rng(1), &sz)),
        ("factorization", check_factorization(&mut rng(2), &sz)),
        ("orders", check_orders(&mut rng(3), &sz)),
        ("squares", check_squares(&mut rng(4), &sz)),
        ("product_formula", check_product_formula(&mut rng(5), &sz)),
        ("completion", check_completion(&mut rng(6), &sz)),
        ("weil_scan", check_weil(&mut rng(7), &sz)),
        ("square_sieve", check_sieve(&sz)),
        ("census", check_census(&sz)),
        ("bounds", check_bounds(&mut rng(8), &sz)),
        ("prime_export", check_export(&mut rng(9))),
    ];
    VerifyReport {
        seed,
        quick,
        checks: results
            .into_iter()
            .map(|(name, r)| match r {
                Ok(detail) => CheckOutcome {
                    name,
                    passed: true,
                    detail,
                },
                Err(detail) => CheckOutcome {
                    name,
                    passed: false,
                    detail,
                },
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_and_is_deterministic() {
        let a = run_suite(0, true);
        assert!(a.all_passed(), "{}", a.to_text());
        assert_eq!(a, run_suite(0, true));
    }

    #[test]
    fn generated_tuples_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let t = random_admissible_tuple(&mut rng, 4, 300, true);
            assert!(t.f.is_monic() && t.f.degree() <= 4);
            assert_ne!(t.ell, t.p);
            assert!(t.a >= 0 && (t.a as u64) < t.period);
            assert!(complete_sum_pair(&t.f, t.lambda, t.ell, t.p, t.a).is_ok());
        }
    }
}
