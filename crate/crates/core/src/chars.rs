//! Jacobi-symbol character sums over orbits of `lambda` modulo `p` and `lp`:
//! complete sums, the product decomposition across coprime periods,
//! incomplete sums, and empirical bound scans.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith::{factorize, is_prime, is_squarefree, jacobi_odd, mod_inverse, mul_mod, order_dividing, residue};
use crate::error::{Error, Result};
use crate::poly::{ModPoly, Polynomial};

/// Relative roundoff allowance for floating-point sums: `tolerance = FLOAT_RESIDUAL * period`.
pub const FLOAT_RESIDUAL: f64 = 1e-9;

/// Frequencies `(a_l, a_p)` with `a_l tau_p + a_p tau_l = a (mod tau_l tau_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrequencySplit {
    pub a: i64,
    pub tau_l: u64,
    pub tau_p: u64,
    pub a_l: u64,
    pub a_p: u64,
}

pub fn split_frequencies(a: i64, tau_l: u64, tau_p: u64) -> Result<FrequencySplit> {
    if tau_l == 0 || tau_p == 0 || tau_l.gcd(&tau_p) != 1 {
        return Err(Error::PeriodsNotCoprime(tau_l, tau_p));
    }
    let inv_p = mod_inverse(tau_p % tau_l, tau_l).unwrap();
    let inv_l = mod_inverse(tau_l % tau_p, tau_p).unwrap();
    Ok(FrequencySplit {
        a,
        tau_l,
        tau_p,
        a_l: mul_mod(residue(a, tau_l), inv_p, tau_l),
        a_p: mul_mod(residue(a, tau_p), inv_l, tau_p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CharSumKind {
    CompleteP,
    CompletePair,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSumResult {
    pub value: Complex64,
    /// The integer value when every phase is 1 (zero frequency, incomplete sums).
    pub exact: Option<i64>,
    pub modulus: u64,
    pub period: u64,
    pub frequency: i64,
    pub lambda: i64,
    pub kind: CharSumKind,
    /// `|value| / sqrt(modulus)` for complete sums; the completion bound ratio for incomplete ones.
    pub ratio: f64,
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `tau_p(lambda)` for an odd prime `p` not dividing `lambda`.
fn orbit_period(lambda: i64, p: u64) -> u64 {
    let f = factorize(p - 1).unwrap_or_else(|_| crate::arith::Factorization { n: 1, factors: vec![] });
    order_dividing(residue(lambda, p), p, p - 1, &f)
}

fn require_weil_polynomial(f: &Polynomial) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.gcd_with_derivative().degree() != 0 {
        return Err(Error::NotSeparable);
    }
    Ok(())
}

fn f_residue(f: &Polynomial, m: u64) -> u64 {
    residue(f.constant().mod_floor(&m.into()).to_i64().unwrap(), m)
}

/// Symbols `(f(lambda^x) / m)` for `x = 1..=period`.
fn orbit_symbols(fm: &ModPoly, lambda: u64, period: u64) -> Vec<i8> {
    let m = fm.modulus();
    let mut y = 1u64;
    (0..period)
        .map(|_| {
            y = mul_mod(y, lambda, m);
            jacobi_odd(fm.eval(y), m)
        })
        .collect()
}

/// `sum_{x=1}^{tau} c_x e(a x / tau)`, exactly when `a = 0 (mod tau)`.
fn twisted_sum(symbols: &[i8], a: i64) -> (Complex64, Option<i64>) {
    let tau = symbols.len() as u64;
    let k = residue(a, tau.max(1));
    if k == 0 {
        let s: i64 = symbols.iter().map(|&c| c as i64).sum();
        return (Complex64::new(s as f64, 0.0), Some(s));
    }
    let mut acc = Complex64::zero();
    for (i, &c) in symbols.iter().enumerate() {
        if c != 0 {
            let phase = mul_mod(k, (i as u64 + 1) % tau, tau) as f64 / tau as f64;
            acc += Complex64::from_polar(c as f64, TAU * phase);
        }
    }
    (acc, None)
}

/// Orbit sum `sum_{x=1}^{tau_p} (f(lambda^x)/p) e(a x / tau_p)` for any integer `f`.
///
/// Only requires `p` an odd prime not dividing `lambda`; [`complete_sum_p`]
/// adds the hypotheses under which the square-root bound applies.
pub fn orbit_sum(f: &Polynomial, lambda: i64, p: u64, a: i64) -> Result<CharSumResult> {
    require_odd_prime(p)?;
    if residue(lambda, p) == 0 {
        return Err(Error::PrimeDivides { prime: p, what: "lambda" });
    }
    let period = orbit_period(lambda, p);
    let symbols = orbit_symbols(&f.reduce(p), residue(lambda, p), period);
    let (value, exact) = twisted_sum(&symbols, a);
    Ok(CharSumResult {
        value,
        exact,
        modulus: p,
        period,
        frequency: a,
        lambda,
        kind: CharSumKind::CompleteP,
        ratio: value.norm() / (p as f64).sqrt(),
    })
}

/// Complete sum modulo a prime under the Weil-bound hypotheses
/// (`f` monic and separable, `p` odd and coprime to `lambda f(0)`).
pub fn complete_sum_p(f: &Polynomial, lambda: i64, p: u64, a: i64) -> Result<CharSumResult> {
    require_weil_polynomial(f)?;
    require_odd_prime(p)?;
    if f_residue(f, p) == 0 {
        return Err(Error::PrimeDivides { prime: p, what: "f(0)" });
    }
    orbit_sum(f, lambda, p, a)
}

struct PairSetup {
    modulus: u64,
    tau_l: u64,
    tau_p: u64,
}

fn pair_setup(lambda: i64, ell: u64, p: u64) -> Result<PairSetup> {
    if ell == p {
        return Err(Error::SamePrime(p));
    }
    require_odd_prime(ell)?;
    require_odd_prime(p)?;
    for q in [ell, p] {
        if residue(lambda, q) == 0 {
            return Err(Error::PrimeDivides { prime: q, what: "lambda" });
        }
    }
    let tau_l = orbit_period(lambda, ell);
    let tau_p = orbit_period(lambda, p);
    if tau_l.gcd(&tau_p) != 1 {
        return Err(Error::PeriodsNotCoprime(tau_l, tau_p));
    }
    Ok(PairSetup {
        modulus: ell * p,
        tau_l,
        tau_p,
    })
}

/// `sum_{n=1}^{tau_lp} (f(lambda^n)/lp) e(a n / tau_lp)`.
pub fn complete_sum_pair(f: &Polynomial, lambda: i64, ell: u64, p: u64, a: i64) -> Result<CharSumResult> {
    let setup = pair_setup(lambda, ell, p)?;
    let m = setup.modulus;
    let period = setup.tau_l * setup.tau_p;
    let symbols = orbit_symbols(&f.reduce(m), residue(lambda, m), period);
    let (value, exact) = twisted_sum(&symbols, a);
    Ok(CharSumResult {
        value,
        exact,
        modulus: m,
        period,
        frequency: a,
        lambda,
        kind: CharSumKind::CompletePair,
        ratio: value.norm() / (m as f64).sqrt(),
    })
}

/// `|pair sum - product of split prime sums|`; exact integer comparison at zero frequency.
pub fn product_formula_residual(f: &Polynomial, lambda: i64, ell: u64, p: u64, a: i64) -> Result<f64> {
    let lhs = complete_sum_pair(f, lambda, ell, p, a)?;
    let setup = pair_setup(lambda, ell, p)?;
    let split = split_frequencies(a, setup.tau_l, setup.tau_p)?;
    let x = orbit_sum(f, lambda, ell, split.a_l as i64)?;
    let y = orbit_sum(f, lambda, p, split.a_p as i64)?;
    match (lhs.exact, x.exact, y.exact) {
        (Some(l), Some(u), Some(v)) => Ok((l - u * v).unsigned_abs() as f64),
        _ => Ok((lhs.value - x.value * y.value).norm()),
    }
}

/// `sum_{k=1}^{K} (f(A lambda^k) / lp)` with its completion bound ratio
/// `|value| / (K sqrt(lp) / tau_lp + sqrt(lp) ln(lp))`.
pub fn incomplete_sum(f: &Polynomial, shift: i64, lambda: i64, ell: u64, p: u64, k: u64) -> Result<CharSumResult> {
    require_weil_polynomial(f)?;
    let setup = pair_setup(lambda, ell, p)?;
    for q in [ell, p] {
        if f_residue(f, q) == 0 {
            return Err(Error::PrimeDivides { prime: q, what: "f(0)" });
        }
        if residue(shift, q) == 0 {
            return Err(Error::PrimeDivides { prime: q, what: "A" });
        }
    }
    let m = setup.modulus;
    let period = setup.tau_l * setup.tau_p;
    let fm = f.reduce(m);
    let lam = residue(lambda, m);
    let mut y = residue(shift, m);
    let mut total = 0i64;
    for _ in 0..k {
        y = mul_mod(y, lam, m);
        total += jacobi_odd(fm.eval(y), m) as i64;
    }
    let root = (m as f64).sqrt();
    let bound = k as f64 * root / period as f64 + root * (m as f64).ln();
    Ok(CharSumResult {
        value: Complex64::new(total as f64, 0.0),
        exact: Some(total),
        modulus: m,
        period,
        frequency: 0,
        lambda,
        kind: CharSumKind::Incomplete,
        ratio: total.unsigned_abs() as f64 / bound,
    })
}

/// Worst frequency for one prime in a [`weil_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilRow {
    pub modulus: u64,
    pub period: u64,
    pub frequency: u64,
    pub re: f64,
    pub im: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilScan {
    pub degree: usize,
    /// Asserted constant: `|sum| <= (d + 1) sqrt(p)`.
    pub slack: f64,
    pub rows: Vec<WeilRow>,
    pub max_ratio: f64,
    pub violations: Vec<u64>,
}

impl WeilScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("modulus,period,frequency,re,im,ratio\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{:.9},{:.9},{:.9}", r.modulus, r.period, r.frequency, r.re, r.im, r.ratio).unwrap();
        }
        out
    }
}

/// All frequencies of the orbit sum at once: `S(a) = sum_x c_x e(a x / tau)` via one FFT.
pub fn orbit_spectrum(f: &Polynomial, lambda: i64, p: u64) -> Result<Vec<Complex64>> {
    require_odd_prime(p)?;
    if residue(lambda, p) == 0 {
        return Err(Error::PrimeDivides { prime: p, what: "lambda" });
    }
    let period = orbit_period(lambda, p);
    let symbols = orbit_symbols(&f.reduce(p), residue(lambda, p), period);
    let n = period as usize;
    // index by x mod tau; x = tau lands on 0
    let mut buf: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(symbols[(i + n - 1) % n] as f64, 0.0))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf)
}

/// Max over admissible primes `p <= p_max` and all frequencies of `|sum| / sqrt(p)`.
pub fn weil_scan(f: &Polynomial, lambda: i64, p_max: u64) -> Result<WeilScan> {
    require_weil_polynomial(f)?;
    let degree = f.degree();
    let slack = (degree + 1) as f64;
    let primes: Vec<u64> = crate::harvest::primes_in_range(3, p_max)
        .into_iter()
        .filter(|&p| residue(lambda, p) != 0 && f_residue(f, p) != 0)
        .collect();
    let rows: Vec<WeilRow> = primes
        .par_iter()
        .map(|&p| {
            let spectrum = orbit_spectrum(f, lambda, p).expect("admissible prime");
            let (a, v) = spectrum
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .map(|(a, v)| (a as u64, *v))
                .unwrap();
            WeilRow {
                modulus: p,
                period: spectrum.len() as u64,
                frequency: a,
                re: v.re,
                im: v.im,
                ratio: v.norm() / (p as f64).sqrt(),
            }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| r.ratio > slack).map(|r| r.modulus).collect();
    Ok(WeilScan {
        degree,
        slack,
        rows,
        max_ratio,
        violations,
    })
}

/// Average of `|sum_{s<=S} psi(s) (s/m)|^2` over odd squarefree `m <= R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HbAverage {
    pub lhs: f64,
    /// `lhs / (S (R + S) max|psi|^2)`; zero when `psi` vanishes.
    pub normalized: f64,
    pub moduli: usize,
}

/// `psi[s - 1]` holds `psi(s)` for `s = 1..=S`.
pub fn hb_average(r: u64, psi: &[f64]) -> Result<HbAverage> {
    let s = psi.len() as u64;
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument("R and S must be at least 1".into()));
    }
    let moduli: Vec<u64> = (1..=r).step_by(2).filter(|&m| is_squarefree(m)).collect();
    let lhs: f64 = moduli
        .par_iter()
        .map(|&m| {
            let inner: f64 = psi
                .iter()
                .enumerate()
                .map(|(i, &w)| w * jacobi_odd(i as u64 + 1, m) as f64)
                .sum();
            inner * inner
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    let max_sq = psi.iter().map(|w| w * w).fold(0.0, f64::max);
    let denom = s as f64 * (r + s) as f64 * max_sq;
    Ok(HbAverage {
        lhs,
        normalized: if max_sq == 0.0 { 0.0 } else { lhs / denom },
        moduli: moduli.len(),
    })
}

/// `|sum_{n<=k} (n/q)|` and its ratio to `sqrt(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalMeasure {
    pub sum: i64,
    pub ratio: f64,
}

pub fn conditional_char_measure(q: u64, k: u64) -> Result<ConditionalMeasure> {
    require_odd_prime(q)?;
    if k == 0 || k >= q {
        return Err(Error::InvalidArgument(format!("need 1 <= k < q, got k = {k}, q = {q}")));
    }
    let sum: i64 = (1..=k).map(|n| jacobi_odd(n, q) as i64).sum();
    Ok(ConditionalMeasure {
        sum,
        ratio: sum.unsigned_abs() as f64 / (k as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{multiplicative_order, pow_mod};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c).unwrap()
    }

    #[test]
    fn split_examples() {
        let s = split_frequencies(7, 3, 10).unwrap();
        assert_eq!((s.a_l, s.a_p), (1, 9));
        assert_eq!((s.a_l * 10 + s.a_p * 3) % 30, 7);
        let z = split_frequencies(0, 5, 12).unwrap();
        assert_eq!((z.a_l, z.a_p), (0, 0));
        let w = split_frequencies(60, 5, 12).unwrap();
        assert_eq!((w.a_l, w.a_p), (0, 0));
        assert_eq!(split_frequencies(1, 4, 6), Err(Error::PeriodsNotCoprime(4, 6)));
        for a in -100..100i64 {
            let s = split_frequencies(a, 7, 9).unwrap();
            assert_eq!(((s.a_l * 9 + s.a_p * 7) % 63) as i64, a.rem_euclid(63));
        }
    }

    #[test]
    fn orbit_sum_identity_polynomial() {
        // 2, 4, 1 are all squares mod 7
        let r = orbit_sum(&Polynomial::x(), 2, 7, 0).unwrap();
        assert_eq!(r.exact, Some(3));
        assert_eq!(r.period, 3);
        // f = X has f(0) = 0, outside the Weil hypotheses
        assert_eq!(
            complete_sum_p(&Polynomial::x(), 2, 7, 0),
            Err(Error::PrimeDivides { prime: 7, what: "f(0)" })
        );
    }

    #[test]
    fn complete_sum_gates_and_bounds() {
        let f = poly(&[2, 0, 0, 1]);
        let r = complete_sum_p(&f, 2, 101, 1).unwrap();
        assert!(r.value.norm() <= 4.0 * 101f64.sqrt());
        assert!(r.value.norm() <= r.period as f64);
        let full = complete_sum_p(&f, 2, 101, r.period as i64).unwrap();
        let zero = complete_sum_p(&f, 2, 101, 0).unwrap();
        assert_eq!(full.exact, zero.exact);
        assert_eq!(complete_sum_p(&poly(&[2, 0, 2]), 2, 101, 0), Err(Error::NotMonic));
        assert_eq!(complete_sum_p(&poly(&[1, 2, 1]), 2, 101, 0), Err(Error::NotSeparable));
        assert_eq!(complete_sum_p(&f, 2, 2, 0), Err(Error::EvenPrime(2)));
        assert_eq!(complete_sum_p(&f, 2, 91, 0), Err(Error::NotPrime(91)));
        assert_eq!(
            complete_sum_p(&f, 7, 7, 0),
            Err(Error::PrimeDivides { prime: 7, what: "lambda" })
        );
    }

    #[test]
    fn pair_sum_examples() {
        let x = Polynomial::x();
        let pair = complete_sum_pair(&x, 2, 7, 11, 0).unwrap();
        assert_eq!(pair.period, 30);
        let l = orbit_sum(&x, 2, 7, 0).unwrap().exact.unwrap();
        let p = orbit_sum(&x, 2, 11, 0).unwrap().exact.unwrap();
        assert_eq!(pair.exact, Some(l * p));

        let pair7 = complete_sum_pair(&x, 2, 7, 11, 7).unwrap();
        let a = orbit_sum(&x, 2, 7, 1).unwrap().value;
        let b = orbit_sum(&x, 2, 11, 9).unwrap().value;
        assert!((pair7.value - a * b).norm() < 1e-9 * 30.0);

        assert_eq!(complete_sum_pair(&x, 2, 7, 7, 0), Err(Error::SamePrime(7)));
        assert_eq!(
            complete_sum_pair(&x, 3, 3, 7, 0),
            Err(Error::PrimeDivides { prime: 3, what: "lambda" })
        );
        // tau_7(2) = 3 and tau_13(2) = 12 share the factor 3
        assert_eq!(complete_sum_pair(&x, 2, 7, 13, 0), Err(Error::PeriodsNotCoprime(3, 12)));
        assert_eq!(complete_sum_pair(&x, 2, 7, 9, 0), Err(Error::NotPrime(9)));
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(product_formula_residual(&Polynomial::x(), 2, 7, 11, 0).unwrap(), 0.0);
        let shanks = poly(&[1, 6, 1]);
        assert!(product_formula_residual(&shanks, 2, 7, 11, 7).unwrap() <= 1e-9 * 30.0);
        assert!(product_formula_residual(&shanks, 2, 7, 13, 1).is_err());
    }

    fn admissible_pair(rng: &mut ChaCha8Rng, lambda: i64) -> (u64, u64) {
        let primes: Vec<u64> = crate::harvest::primes_in_range(3, 300);
        loop {
            let l = primes[rng.gen_range(0..primes.len())];
            let p = primes[rng.gen_range(0..primes.len())];
            if l == p || lambda as u64 % l == 0 || lambda as u64 % p == 0 {
                continue;
            }
            let tl = multiplicative_order(lambda, l).unwrap().order;
            let tp = multiplicative_order(lambda, p).unwrap().order;
            if tl.gcd(&tp) == 1 {
                return (l, p);
            }
        }
    }

    #[test]
    fn product_formula_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let d = rng.gen_range(1..=4);
            let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
            c.push(1);
            let f = poly(&c);
            let lambda = [2i64, 3, 5][rng.gen_range(0..3)];
            let (l, p) = admissible_pair(&mut rng, lambda);
            let pair = complete_sum_pair(&f, lambda, l, p, 0).unwrap();
            assert_eq!(product_formula_residual(&f, lambda, l, p, 0).unwrap(), 0.0);
            let a = rng.gen_range(1..pair.period as i64);
            let res = product_formula_residual(&f, lambda, l, p, a).unwrap();
            assert!(res <= 1e-9 * pair.period as f64, "residual {res}");
        }
    }

    #[test]
    fn frequency_periodicity() {
        let f = poly(&[3, 1, 0, 1]);
        for p in [11u64, 29, 101, 197] {
            for a in [0i64, 1, 5, 17] {
                let r = orbit_sum(&f, 3, p, a).unwrap();
                let shifted = orbit_sum(&f, 3, p, a + r.period as i64).unwrap();
                let neg = orbit_sum(&f, 3, p, a - 2 * r.period as i64).unwrap();
                assert!((r.value - shifted.value).norm() < 1e-9);
                assert!((r.value - neg.value).norm() < 1e-9);
                assert!(r.value.norm() <= r.period as f64 + 1e-9);
            }
        }
    }

    /// Brute-force discrete logarithms and a primitive root `theta` with `theta^s = lambda`.
    fn orbit_reduction_rhs(f: &Polynomial, lambda: u64, p: u64, a: i64) -> Complex64 {
        let n = p - 1;
        let root = (2..p).find(|&r| multiplicative_order(r as i64, p).unwrap().order == n).unwrap();
        let mut log = vec![0u64; p as usize];
        let mut y = 1u64;
        for x in 0..n {
            log[y as usize] = x;
            y = y * root % p;
        }
        let tau = multiplicative_order(lambda as i64, p).unwrap().order;
        let s = n / tau;
        let e = log[lambda as usize];
        let t = e / s;
        let j = (0..s).find(|&j| (t + j * tau).gcd(&n) == 1).unwrap();
        let theta = pow_mod(root, t + j * tau, p);
        assert_eq!(pow_mod(theta, s, p), lambda % p);
        let mut tlog = vec![0u64; p as usize];
        let mut y = 1u64;
        for x in 0..n {
            tlog[y as usize] = x;
            y = y * theta % p;
        }
        let fp = f.reduce(p);
        let k = residue(a, n);
        let mut acc = Complex64::zero();
        for w in 1..p {
            let sym = jacobi_odd(fp.eval(pow_mod(w, s, p)), p) as f64;
            let x = tlog[w as usize];
            // chi(w) = e(a s x / (p - 1))
            let phase = ((k as u128 * s as u128 * x as u128) % n as u128) as f64 / n as f64;
            acc += Complex64::from_polar(sym, TAU * phase);
        }
        acc / s as f64
    }

    #[test]
    fn orbit_reduction_identity() {
        let polys = [poly(&[1, 6, 1]), poly(&[2, 0, 0, 1]), poly(&[1, 1, 0, 0, 1])];
        for f in &polys {
            for p in [13u64, 31, 41, 97, 151] {
                for lambda in [2u64, 3, 4, 9] {
                    for a in [0i64, 1, 2, 7] {
                        let lhs = orbit_sum(f, lambda as i64, p, a).unwrap().value;
                        let rhs = orbit_reduction_rhs(f, lambda, p, a);
                        assert!((lhs - rhs).norm() < 1e-8, "f={f} p={p} lambda={lambda} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_matches_direct_sums() {
        let f = poly(&[2, 0, 0, 1]);
        for p in [101u64, 257, 1009] {
            let spec = orbit_spectrum(&f, 2, p).unwrap();
            for a in 0..spec.len().min(40) {
                let direct = complete_sum_p(&f, 2, p, a as i64).unwrap().value;
                assert!((spec[a] - direct).norm() < 1e-8, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn incomplete_sum_examples() {
        let f = poly(&[2, 0, 0, 1]);
        let full = incomplete_sum(&f, 1, 2, 7, 11, 30).unwrap();
        let pair = complete_sum_pair(&f, 2, 7, 11, 0).unwrap();
        assert_eq!(full.exact, pair.exact);
        let empty = incomplete_sum(&f, 1, 2, 7, 11, 0).unwrap();
        assert_eq!(empty.exact, Some(0));
        let part = incomplete_sum(&f, 1, 2, 7, 11, 15).unwrap();
        let brute: i64 = (1..=15u32)
            .map(|k| {
                let v = f.eval(&num_bigint::BigInt::from(2u64.pow(k)));
                crate::arith::jacobi_big(&v, &77.into()).unwrap() as i64
            })
            .sum();
        assert_eq!(part.exact, Some(brute));
        assert!(part.ratio.is_finite());
        assert_eq!(
            incomplete_sum(&f, 7, 2, 7, 11, 5),
            Err(Error::PrimeDivides { prime: 7, what: "A" })
        );
        assert_eq!(incomplete_sum(&poly(&[1, 0, 1, 0, 1, 2]), 1, 2, 7, 11, 3), Err(Error::NotMonic));
    }

    #[test]
    fn weil_scans() {
        let empty = weil_scan(&Polynomial::x(), 2, 100).unwrap();
        assert!(empty.rows.is_empty());
        let lin = weil_scan(&poly(&[1, 1]), 2, 100).unwrap();
        assert!(lin.rows.iter().all(|r| r.ratio.is_finite()));
        assert!(lin.violations.is_empty());
        assert!(lin.max_ratio <= 2.0, "{}", lin.max_ratio);
        assert_eq!(weil_scan(&poly(&[1, 2, 1]), 2, 100), Err(Error::NotSeparable));
        let cubic = weil_scan(&poly(&[2, 0, 0, 1]), 3, 2000).unwrap();
        assert!(cubic.violations.is_empty());
        let csv = cubic.to_csv();
        assert!(csv.starts_with("modulus,period,frequency,re,im,ratio\n"));
        assert_eq!(csv.lines().count(), cubic.rows.len() + 1);
    }

    #[test]
    fn hb_average_examples() {
        for s in [1usize, 10, 100] {
            let r = hb_average(1, &vec![1.0; s]).unwrap();
            assert_eq!(r.lhs, (s * s) as f64);
        }
        let zero = hb_average(50, &vec![0.0; 20]).unwrap();
        assert_eq!(zero.lhs, 0.0);
        assert_eq!(zero.normalized, 0.0);
        let r = hb_average(100, &vec![1.0; 100]).unwrap();
        assert_eq!(r.moduli, 41);
        assert!((r.normalized - GOLDEN_HB_100).abs() < 1e-12, "{}", r.normalized);
        assert!(hb_average(0, &[1.0]).is_err());
    }

    const GOLDEN_HB_100: f64 = 0.5202;

    #[test]
    fn conditional_measure_examples() {
        let r = conditional_char_measure(7, 3).unwrap();
        assert_eq!(r.sum, 1);
        assert!((r.ratio - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        for q in [5u64, 7, 11, 101, 103] {
            assert_eq!(conditional_char_measure(q, q - 1).unwrap().sum, 0);
        }
        assert!(conditional_char_measure(7, 7).is_err());
        assert!(conditional_char_measure(9, 2).is_err());
        let big = conditional_char_measure(1_000_003, 1000).unwrap();
        assert!(big.ratio < 2.0 * (1_000_003f64).ln());
    }
}
