//! Number-theoretic kernel: integer square roots, Jacobi symbols, 64-bit
//! factorization, Euler's totient and multiplicative orders.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper limit of the cached small-prime table.
pub const SMALL_PRIME_LIMIT: u32 = 1_000_000;

/// Trial division bound used by [`factorize`] before switching to Pollard rho.
const TRIAL_DIVISION_BOUND: u64 = 10_000;

/// Prefilter moduli for [`is_perfect_square`]; their product fits in a `u32`.
const SQUARE_FILTER_MODULI: [u32; 4] = [64, 63, 65, 11];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// All primes below [`SMALL_PRIME_LIMIT`], computed once.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeInput);
    }
    Ok(n.sqrt())
}

pub fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

fn square_residue_tables() -> &'static [Vec<bool>; 4] {
    static TABLES: OnceLock<[Vec<bool>; 4]> = OnceLock::new();
    TABLES.get_or_init(|| {
        SQUARE_FILTER_MODULI.map(|m| {
            let mut t = vec![false; m as usize];
            for x in 0..m as u64 {
                t[(x * x % m as u64) as usize] = true;
            }
            t
        })
    })
}

/// Residue filter: `false` means `n` is certainly not a square.
fn passes_square_filter(r: u32) -> bool {
    let tables = square_residue_tables();
    SQUARE_FILTER_MODULI
        .iter()
        .zip(tables.iter())
        .all(|(&m, t)| t[(r % m) as usize])
}

/// True iff `n = r^2` for some integer `r`. Negative `n` is never a square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    match n.sign() {
        Sign::Minus => false,
        Sign::NoSign => true,
        Sign::Plus => is_perfect_square_unsigned(n.magnitude()),
    }
}

pub fn is_perfect_square_unsigned(n: &BigUint) -> bool {
    let combined: u32 = SQUARE_FILTER_MODULI.iter().product();
    let r = (n % combined).to_u32().expect("remainder fits in u32");
    if !passes_square_filter(r) {
        return false;
    }
    let root = n.sqrt();
    &root * &root == *n
}

pub fn is_perfect_square_u64(n: u64) -> bool {
    let combined: u64 = SQUARE_FILTER_MODULI.iter().map(|&m| m as u64).product();
    if !passes_square_filter((n % combined) as u32) {
        return false;
    }
    let r = n.sqrt();
    r * r == n
}

/// Jacobi symbol `(a/m)` for odd `m >= 1`; negative `a` is reduced modulo `m` first.
pub fn jacobi(a: i64, m: u64) -> Result<i8> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    Ok(jacobi_odd(residue(a, m), m))
}

/// Jacobi symbol for odd `m`; the caller guarantees `m` is odd and positive.
#[inline]
pub fn jacobi_odd(mut a: u64, mut m: u64) -> i8 {
    debug_assert!(m & 1 == 1);
    a %= m;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/m) = -1 iff m = 3, 5 (mod 8)
        if tz & 1 == 1 && matches!(m & 7, 3 | 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        if a & 3 == 3 && m & 3 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol with arbitrary-precision arguments.
pub fn jacobi_big(a: &BigInt, m: &BigInt) -> Result<i8> {
    if !m.is_positive() || m.is_even() {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    let mut m = m.magnitude().clone();
    let mut a = a.mod_floor(&BigInt::from_biguint(Sign::Plus, m.clone())).into_parts().1;
    let mut t = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let m8 = (&m % 8u32).to_u32().unwrap();
        if tz & 1 == 1 && (m8 == 3 || m8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        if (&a % 4u32).to_u32() == Some(3) && (&m % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a %= &m;
    }
    Ok(if m.is_one() { t } else { 0 })
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a 64-bit integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Largest prime factor, i.e. `P+(n)`.
    pub fn largest_prime(&self) -> u64 {
        self.factors.last().map(|&(p, _)| p).unwrap_or(1)
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of an odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    let step = |x: u64, c: u64| (mul_mod(x, x, n) + c) % n;
    for c in 1u64.. {
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y, c);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot: replay one step at a time
            loop {
                ys = step(ys, c);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("some polynomial x^2 + c splits every odd composite")
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorization of `n >= 2`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::NoFactorization(n));
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p >= TRIAL_DIVISION_BOUND || p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_into(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(Factorization { n, factors })
}

/// `P+(n)`, the largest prime divisor of `n >= 2`.
pub fn largest_prime_factor(n: u64) -> Result<u64> {
    Ok(factorize(n)?.largest_prime())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    match n {
        0 => Err(Error::ZeroArgument),
        1 => Ok(1),
        _ => Ok(factorize(n)?.totient()),
    }
}

pub fn is_squarefree(n: u64) -> bool {
    match n {
        0 => false,
        1 => true,
        _ => factorize(n)
            .map(|f| f.factors.iter().all(|&(_, e)| e == 1))
            .unwrap_or(false),
    }
}

/// `tau_m(lambda)` together with its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderRecord {
    pub base: i64,
    pub modulus: u64,
    pub order: u64,
}

/// Multiplicative order of `base` modulo `modulus >= 2`.
pub fn multiplicative_order(base: i64, modulus: u64) -> Result<OrderRecord> {
    if modulus < 2 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    let b = residue(base, modulus);
    if b.gcd(&modulus) != 1 {
        return Err(Error::NotCoprime {
            base: base.to_string(),
            modulus,
        });
    }
    let phi = euler_phi(modulus)?;
    let order = if phi == 1 {
        1
    } else {
        order_dividing(b, modulus, phi, &factorize(phi)?)
    };
    Ok(OrderRecord {
        base,
        modulus,
        order,
    })
}

/// Order of a unit `b` modulo `m`, given a multiple `exponent` of that order and its factorization.
pub fn order_dividing(b: u64, m: u64, exponent: u64, factors: &Factorization) -> u64 {
    let mut order = exponent;
    for &(q, _) in &factors.factors {
        while order % q == 0 && pow_mod(b, order / q, m) == 1 {
            order /= q;
        }
    }
    order
}

/// Totients of `0..=n` by sieve (`phi[0]` is 0).
pub fn totients_up_to(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= n {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}
