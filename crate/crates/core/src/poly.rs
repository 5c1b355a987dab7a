//! Integer polynomials and the sequence `u(n) = f(g^n)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Nonzero polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The identity polynomial `X`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1]).unwrap()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Formal derivative; `None` for constants.
    pub fn derivative(&self) -> Option<Self> {
        let d: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::new(d).ok()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients reduced into `[0, m)` for repeated modular evaluation.
    pub fn reduce(&self, m: u64) -> ModPoly {
        let mb = BigInt::from(m);
        ModPoly {
            m,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.mod_floor(&mb).to_u64().unwrap())
                .collect(),
        }
    }

    /// Resultant of `f` and `f'` up to sign; zero iff `f` has a repeated root.
    pub fn discriminant_resultant(&self) -> BigInt {
        match self.derivative() {
            None => BigInt::one(),
            Some(df) => prs::resultant(&self.coeffs, &df.coeffs),
        }
    }

    /// `gcd(f, f')` over the rationals, as a primitive integer polynomial.
    pub fn gcd_with_derivative(&self) -> Polynomial {
        match self.derivative() {
            None => Polynomial::from_i64(&[1]).unwrap(),
            Some(df) => Polynomial::new(prs::subresultant_gcd(&self.coeffs, &df.coeffs)).unwrap(),
        }
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::PolynomialParse(s.to_string()))?;
        Self::new(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A polynomial with coefficients reduced modulo `m`.
#[derive(Debug, Clone)]
pub struct ModPoly {
    m: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.m;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| ((mul_mod(acc, x, m) as u128 + c as u128) % m as u128) as u64)
    }
}

/// Exact polynomial remainder sequences over the integers.
mod prs {
    use super::*;

    type Dense = Vec<BigInt>;

    fn trim(mut p: Dense) -> Dense {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn deg(p: &Dense) -> usize {
        p.len() - 1
    }

    fn lc(p: &Dense) -> &BigInt {
        p.last().unwrap()
    }

    fn content(p: &Dense) -> BigInt {
        p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_scalar(p: &Dense, c: &BigInt) -> Dense {
        p.iter().map(|x| x / c).collect()
    }

    /// `lc(b)^(deg a - deg b + 1) * a mod b`.
    fn prem(a: &Dense, b: &Dense) -> Dense {
        let mut r = a.clone();
        let db = deg(b);
        let lb = lc(b).clone();
        let mut steps = deg(a) + 1 - db;
        while !r.is_empty() && r.len() > db {
            let dr = deg(&r);
            let lr = lc(&r).clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.iter().enumerate() {
                r[dr - db + i] -= &lr * bc;
            }
            r = trim(r);
            steps -= 1;
        }
        let scale = num_traits::pow(lb, steps);
        r.iter().map(|c| c * &scale).collect()
    }

    pub fn subresultant_gcd(a: &Dense, b: &Dense) -> Dense {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        if deg(&a) < deg(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        let d = content(&a).gcd(&content(&b));
        a = div_scalar(&a, &content(&a));
        b = div_scalar(&b, &content(&b));
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = deg(&a) - deg(&b);
            let r = trim(prem(&a, &b));
            if r.is_empty() {
                let pb = div_scalar(&b, &content(&b));
                let mut out: Dense = pb.iter().map(|c| c * &d).collect();
                if lc(&out).is_negative() {
                    out = out.iter().map(|c| -c).collect();
                }
                return out;
            }
            if deg(&r) == 0 {
                return vec![d];
            }
            a = b;
            let div = &g * num_traits::pow(h.clone(), delta);
            b = div_scalar(&r, &div);
            g = lc(&a).clone();
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1),
            };
        }
    }

    pub fn resultant(a: &Dense, b: &Dense) -> BigInt {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        if a.is_empty() || b.is_empty() {
            return BigInt::zero();
        }
        let (ca, cb) = (content(&a), content(&b));
        a = div_scalar(&a, &ca);
        b = div_scalar(&b, &cb);
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        let mut s = BigInt::one();
        let t = num_traits::pow(ca, deg(&b)) * num_traits::pow(cb, deg(&a));
        if deg(&a) < deg(&b) {
            std::mem::swap(&mut a, &mut b);
            if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
                s = -s;
            }
        }
        while deg(&b) > 0 {
            let delta = deg(&a) - deg(&b);
            if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
                s = -s;
            }
            let r = trim(prem(&a, &b));
            if r.is_empty() {
                return BigInt::zero();
            }
            a = b;
            let div = &g * num_traits::pow(h.clone(), delta);
            b = div_scalar(&r, &div);
            g = lc(&a).clone();
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1),
            };
        }
        let da = deg(&a);
        let hb = num_traits::pow(lc(&b).clone(), da);
        let hh = if da == 0 {
            h * hb
        } else {
            hb / num_traits::pow(h, da - 1)
        };
        s * t * hh
    }
}

/// Hypothesis flags recorded by [`SequenceSpec::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationFlags {
    pub separable: bool,
    pub positive_leading: bool,
    pub degree_ge_3: bool,
    pub monic: bool,
}

/// The pair `(f, g)` defining `u(n) = f(g^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceSpec {
    pub f: Polynomial,
    pub g: u64,
    pub flags: ValidationFlags,
}

impl SequenceSpec {
    pub fn validate(f: Polynomial, g: u64) -> Result<Self> {
        if g <= 1 {
            return Err(Error::InvalidBase(g));
        }
        let flags = ValidationFlags {
            separable: f.gcd_with_derivative().degree() == 0,
            positive_leading: f.leading().is_positive(),
            degree_ge_3: f.degree() >= 3,
            monic: f.is_monic(),
        };
        Ok(Self { f, g, flags })
    }

    /// The Shanks sequence `u(n) = (2^n + 3)^2 - 8`.
    pub fn shanks() -> Self {
        Self::validate(Polynomial::from_i64(&[1, 6, 1]).unwrap(), 2).unwrap()
    }

    pub fn require_separable(&self) -> Result<()> {
        if self.flags.separable {
            Ok(())
        } else {
            Err(Error::NotSeparable)
        }
    }

    /// Exact value `f(g^n)`.
    pub fn u_eval(&self, n: u64) -> BigInt {
        let exp = u32::try_from(n).expect("exponent fits in u32");
        self.f.eval(&num_traits::pow(BigInt::from(self.g), exp as usize))
    }

    /// `f(g^n) mod m` without big-integer arithmetic.
    pub fn u_eval_mod(&self, n: u64, m: u64) -> u64 {
        self.f.reduce(m).eval(pow_mod(self.g, n, m))
    }

    /// Residues `u(n) mod m` for `n = start, start+1, ..., start+len-1`.
    pub fn window_residues(&self, start: u64, len: usize, m: u64) -> Vec<u64> {
        let fp = self.f.reduce(m);
        let gm = self.g % m;
        let mut x = pow_mod(self.g, start, m);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(fp.eval(x));
            x = mul_mod(x, gm, m);
        }
        out
    }

    /// Integer `B` with `f(x) > 0` for every real `x >= B` (Cauchy root bound).
    fn cauchy_bound(&self) -> BigInt {
        let lead = self.f.leading().abs();
        let max = self.f.coeffs()[..self.f.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigInt::one() + num_integer::Integer::div_ceil(&max, &lead)
    }

    /// Smallest `n0` with `u(n) > 0` for every `n >= n0`; `None` when the leading coefficient is negative.
    pub fn positivity_threshold(&self) -> Option<u64> {
        if !self.flags.positive_leading {
            return None;
        }
        let bound = self.cauchy_bound();
        let mut safe = 0u64;
        let mut pow = BigInt::one();
        let gb = BigInt::from(self.g);
        while pow < bound {
            pow *= &gb;
            safe += 1;
        }
        (0..safe)
            .rev()
            .find(|&n| !self.u_eval(n).is_positive())
            .map(|n| n + 1)
            .or(Some(0))
    }

    /// True iff `u(n) = 0`, decided without evaluating large terms.
    pub fn vanishes_at(&self, n: u64) -> bool {
        let bound = self.cauchy_bound();
        let gb = BigInt::from(self.g);
        let mut pow = BigInt::one();
        for _ in 0..n {
            pow *= &gb;
            if pow >= bound {
                return false;
            }
        }
        self.f.eval(&pow).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f: Polynomial = "1,6,1".parse().unwrap();
        assert_eq!(f, poly(&[1, 6, 1]));
        assert_eq!(f.to_string(), "1,6,1");
        assert_eq!(" 2 , 0, 1 ,0".parse::<Polynomial>().unwrap(), poly(&[2, 0, 1]));
        assert!("1,x".parse::<Polynomial>().is_err());
        assert_eq!("0,0".parse::<Polynomial>(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn validate_examples() {
        let shanks = SequenceSpec::validate(poly(&[1, 6, 1]), 2).unwrap();
        assert!(shanks.flags.separable && shanks.flags.monic && !shanks.flags.degree_ge_3);
        let double = SequenceSpec::validate(poly(&[1, -2, 1]), 2).unwrap();
        assert!(!double.flags.separable);
        let cubic = SequenceSpec::validate(poly(&[2, 0, 0, 1]), 3).unwrap();
        assert!(cubic.flags.separable && cubic.flags.degree_ge_3);
        assert_eq!(SequenceSpec::validate(poly(&[1, 1]), 1), Err(Error::InvalidBase(1)));
        let neg = SequenceSpec::validate(poly(&[5, 0, -3]), 2).unwrap();
        assert!(!neg.flags.positive_leading && !neg.flags.monic);
    }

    #[test]
    fn shanks_expansion_matches_printed_form() {
        let spec = SequenceSpec::shanks();
        for n in 0..40u64 {
            let t = num_traits::pow(BigInt::from(2), n as usize) + 3;
            assert_eq!(spec.u_eval(n), &t * &t - 8);
        }
    }

    #[test]
    fn u_eval_examples() {
        let spec = SequenceSpec::shanks();
        assert_eq!(spec.u_eval(1), BigInt::from(17));
        assert_eq!(spec.u_eval(3), BigInt::from(113));
        let id = SequenceSpec::validate(Polynomial::x(), 7).unwrap();
        assert_eq!(id.u_eval(5), BigInt::from(7u64.pow(5)));
        assert_eq!(spec.u_eval_mod(1, 7), 3);
        assert_eq!(id.u_eval_mod(0, 11), 1);
    }

    #[test]
    fn modular_path_agrees_with_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let d = rng.gen_range(1..=5);
            let coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-50..=50)).collect();
            let Ok(f) = Polynomial::from_i64(&coeffs) else { continue };
            let spec = SequenceSpec::validate(f, rng.gen_range(2..20)).unwrap();
            let n = rng.gen_range(0..=200);
            let m = rng.gen_range(2..=1_000_000u64);
            let exact = spec.u_eval(n).mod_floor(&BigInt::from(m)).to_u64().unwrap();
            assert_eq!(spec.u_eval_mod(n, m), exact);
        }
        let spec = SequenceSpec::shanks();
        let w = spec.window_residues(10, 50, 9973);
        for (i, r) in w.iter().enumerate() {
            assert_eq!(*r, spec.u_eval_mod(10 + i as u64, 9973));
        }
    }

    #[test]
    fn separability_matches_resultant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let d = rng.gen_range(1..=4);
            let coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-6..=6)).collect();
            let Ok(f) = Polynomial::from_i64(&coeffs) else { continue };
            let sep = f.gcd_with_derivative().degree() == 0;
            assert_eq!(sep, !f.discriminant_resultant().is_zero(), "f = {f}");
            // squaring a nonconstant factor always creates a repeated root
            if f.degree() >= 1 {
                let sq = mul(&f, &f);
                assert_eq!(sq.gcd_with_derivative().degree(), f.gcd_with_derivative().degree() + f.degree());
                assert!(sq.discriminant_resultant().is_zero());
            }
        }
    }

    fn mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut c = vec![BigInt::zero(); a.degree() + b.degree() + 1];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Polynomial::new(c).unwrap()
    }

    #[test]
    fn known_resultants() {
        // Res(f, f') for X^2 + bX + c is -(b^2 - 4c) up to sign conventions; check magnitudes
        assert_eq!(poly(&[1, 6, 1]).discriminant_resultant().abs(), BigInt::from(32));
        assert_eq!(poly(&[2, 0, 0, 1]).discriminant_resultant().abs(), BigInt::from(108));
        assert_eq!(poly(&[1, 1, 0, 0, 1]).discriminant_resultant().abs(), BigInt::from(229));
        assert_eq!(poly(&[1, -2, 1]).gcd_with_derivative(), poly(&[-1, 1]));
    }

    #[test]
    fn positivity_threshold_scan() {
        assert_eq!(SequenceSpec::shanks().positivity_threshold(), Some(0));
        // X^2 - 10X: negative for g^n < 10, zero never for powers of 2 (8 < 10 < 16)
        let spec = SequenceSpec::validate(poly(&[0, -10, 1]), 2).unwrap();
        assert_eq!(spec.positivity_threshold(), Some(4));
        for n in 0..4 {
            assert!(!spec.u_eval(n).is_positive());
        }
        for n in 4..60 {
            assert!(spec.u_eval(n).is_positive());
        }
        let neg = SequenceSpec::validate(poly(&[1, -1]), 2).unwrap();
        assert_eq!(neg.positivity_threshold(), None);
    }

    #[test]
    fn vanishing_terms() {
        // X - 8 vanishes at g^3 for g = 2
        let spec = SequenceSpec::validate(poly(&[-8, 1]), 2).unwrap();
        assert!(spec.vanishes_at(3));
        assert!(!spec.vanishes_at(2));
        assert!(!spec.vanishes_at(100));
    }
}
