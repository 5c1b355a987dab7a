//! Harvesting sieve primes `l` in a window `[z, Cz]` whose shifted value
//! `l - 1` has a large prime factor, plus finite-scale density measurements.

use std::fmt::Write as _;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, order_dividing, small_primes, totients_up_to};
use crate::error::{Error, Result};

const SEGMENT: u64 = 1 << 18;

/// Primes in `[lo, hi]` by a segmented sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = num_integer::Roots::sqrt(&hi);
    let base: Vec<u64> = if root < crate::arith::SMALL_PRIME_LIMIT as u64 {
        small_primes()
            .iter()
            .map(|&p| p as u64)
            .take_while(|&p| p <= root)
            .collect()
    } else {
        primes_in_range(2, root)
    };
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &base {
            let sq = p * p;
            if sq > end {
                break;
            }
            let first = sq.max(start.div_ceil(p) * p);
            let mut j = first;
            while j <= end {
                composite[(j - start) as usize] = true;
                j += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

/// A sieve prime with its shifted-prime data attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SievePrime {
    pub ell: u64,
    /// `P+(l - 1)`
    pub p_plus: u64,
    /// `tau_l(g)`
    pub order_g: u64,
    /// `tau_l(g) > l / ln l`
    pub large_order: bool,
}

impl SievePrime {
    /// Computes the record for prime `ell` and base `g`; `None` when `ell | g`.
    pub fn compute(ell: u64, g: u64) -> Option<Self> {
        if g % ell == 0 || ell < 3 {
            return None;
        }
        let f = factorize(ell - 1).ok()?;
        let order_g = order_dividing(g % ell, ell, ell - 1, &f);
        Some(Self {
            ell,
            p_plus: f.largest_prime(),
            order_g,
            large_order: order_g as f64 > ell as f64 / (ell as f64).ln(),
        })
    }

    /// Exact divisibility invariants of the record.
    pub fn check(&self) -> std::result::Result<(), String> {
        if (self.ell - 1) % self.p_plus != 0 {
            return Err(format!("P+ = {} does not divide {} - 1", self.p_plus, self.ell));
        }
        if (self.ell - 1) % self.order_g != 0 {
            return Err(format!("order {} does not divide {} - 1", self.order_g, self.ell));
        }
        if self.p_plus * self.p_plus >= self.ell
            && self.order_g >= self.p_plus
            && self.order_g % self.p_plus != 0
        {
            return Err(format!("P+ = {} does not divide order {}", self.p_plus, self.order_g));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetVariant {
    /// `tau_l(g) >= P+(l-1) >= z^alpha`
    Standard,
    /// additionally `tau_l(g) > l / ln l`
    ErhStyle,
}

impl FromStr for SetVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "erh" | "erh_style" | "erh-style" => Ok(Self::ErhStyle),
            _ => Err(Error::InvalidArgument(format!("unknown prime-set variant {s:?}"))),
        }
    }
}

/// The sieving set for a window `[z, Cz]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SievePrimeSet {
    pub z: f64,
    pub c: f64,
    pub alpha: f64,
    pub g: u64,
    pub variant: SetVariant,
    pub members: Vec<SievePrime>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

impl SievePrimeSet {
    /// Harvests every qualifying prime in `[z, Cz]`, ascending.
    pub fn build(g: u64, z: f64, c: f64, alpha: f64, variant: SetVariant) -> Result<Self> {
        check_alpha(alpha)?;
        if g <= 1 {
            return Err(Error::InvalidBase(g));
        }
        if !(z >= 10.0) || !(c > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need z >= 10 and C > 1, got z = {z}, C = {c}"
            )));
        }
        let lo = z.ceil() as u64;
        let hi = (c * z).floor() as u64;
        let window = primes_in_range(lo, hi);
        if window.is_empty() {
            return Err(Error::EmptyWindow { lo, hi });
        }
        let threshold = z.powf(alpha);
        let members = window
            .par_iter()
            .filter_map(|&ell| SievePrime::compute(ell, g))
            .filter(|sp| sp.p_plus as f64 >= threshold && sp.order_g >= sp.p_plus)
            .filter(|sp| variant == SetVariant::Standard || sp.large_order)
            .collect();
        Ok(Self {
            z,
            c,
            alpha,
            g,
            variant,
            members,
        })
    }

    /// A set with explicitly chosen members, for experiments and tests.
    pub fn from_members(g: u64, z: f64, c: f64, alpha: f64, members: Vec<SievePrime>) -> Self {
        Self {
            z,
            c,
            alpha,
            g,
            variant: SetVariant::Standard,
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|m| m.ell)
    }

    /// `|L_z| ln z / z`, the measured constant in the set-size lower bound.
    pub fn density_constant(&self) -> f64 {
        self.len() as f64 * self.z.ln() / self.z
    }

    /// Checks window membership, the filter conditions and every record invariant.
    pub fn check(&self) -> std::result::Result<(), String> {
        let threshold = self.z.powf(self.alpha);
        for m in &self.members {
            m.check()?;
            if (m.ell as f64) < self.z || m.ell as f64 > self.c * self.z {
                return Err(format!("{} outside [z, Cz]", m.ell));
            }
            if (m.p_plus as f64) < threshold || m.order_g < m.p_plus {
                return Err(format!("{} fails the harvest filter", m.ell));
            }
            if self.variant == SetVariant::ErhStyle && !m.large_order {
                return Err(format!("{} lacks large order", m.ell));
            }
        }
        if !self.members.windows(2).all(|w| w[0].ell < w[1].ell) {
            return Err("members not strictly ascending".into());
        }
        Ok(())
    }

    /// Line-oriented export: a `#` header, then `ell,p_plus,order_g,flags` per member.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let variant = match self.variant {
            SetVariant::Standard => "standard",
            SetVariant::ErhStyle => "erh",
        };
        writeln!(
            out,
            "# g={} z={} C={} alpha={} variant={}",
            self.g, self.z, self.c, self.alpha, variant
        )
        .unwrap();
        for m in &self.members {
            let flags = if m.large_order { "L" } else { "-" };
            writeln!(out, "{},{},{},{}", m.ell, m.p_plus, m.order_g, flags).unwrap();
        }
        out
    }

    /// Parses the output of [`SievePrimeSet::export`].
    pub fn import(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("prime-set record: {what}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut g = None;
        let (mut z, mut c, mut alpha) = (None, None, None);
        let mut variant = SetVariant::Standard;
        for kv in header.trim_start_matches('#').split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(kv))?;
            match k {
                "g" => g = v.parse().ok(),
                "z" => z = v.parse().ok(),
                "C" => c = v.parse().ok(),
                "alpha" => alpha = v.parse().ok(),
                "variant" => variant = v.parse()?,
                _ => return Err(bad(k)),
            }
        }
        let mut members = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad(line));
            }
            let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad(line));
            members.push(SievePrime {
                ell: num(fields[0])?,
                p_plus: num(fields[1])?,
                order_g: num(fields[2])?,
                large_order: fields[3].trim() == "L",
            });
        }
        Ok(Self {
            z: z.ok_or_else(|| bad("z"))?,
            c: c.ok_or_else(|| bad("C"))?,
            alpha: alpha.ok_or_else(|| bad("alpha"))?,
            g: g.ok_or_else(|| bad("g"))?,
            variant,
            members,
        })
    }
}

/// Counts of primes `l <= z` (coprime to `g`) with large `P+(l-1)` or large order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityReport {
    pub z: u64,
    pub alpha: f64,
    pub total_primes: usize,
    /// `#{l <= z : P+(l-1) >= l^alpha}`
    pub count_alpha: usize,
    /// `#{l <= z : tau_l(g) >= l^alpha}`
    pub count_order: usize,
    pub ratio_alpha: f64,
    pub ratio_order: f64,
    /// `count_alpha ln z / z`
    pub normalized_alpha: f64,
    /// `1 - rho(1/alpha) = ln(1/alpha)`, the Dickman expectation for random integers.
    pub dickman_reference: f64,
}

/// Dickman's `rho(u)` on `[0, 2]`, where it has the closed form `1 - ln u` for `u >= 1`.
pub fn dickman_rho(u: f64) -> f64 {
    if u <= 1.0 {
        1.0
    } else {
        assert!(u <= 2.0, "closed form only valid on [1, 2]");
        1.0 - u.ln()
    }
}

pub fn density_report(g: u64, z: u64, alpha: f64) -> Result<DensityReport> {
    check_alpha(alpha)?;
    if z < 1000 {
        return Err(Error::InvalidArgument(format!("density report needs z >= 1000, got {z}")));
    }
    let records: Vec<SievePrime> = primes_in_range(3, z)
        .par_iter()
        .filter_map(|&ell| SievePrime::compute(ell, g))
        .collect();
    let total = records.len();
    let big = |x: u64, ell: u64| x as f64 >= (ell as f64).powf(alpha);
    let count_alpha = records.iter().filter(|r| big(r.p_plus, r.ell)).count();
    let count_order = records.iter().filter(|r| big(r.order_g, r.ell)).count();
    Ok(DensityReport {
        z,
        alpha,
        total_primes: total,
        count_alpha,
        count_order,
        ratio_alpha: count_alpha as f64 / total as f64,
        ratio_order: count_order as f64 / total as f64,
        normalized_alpha: count_alpha as f64 * (z as f64).ln() / z as f64,
        dickman_reference: 1.0 - dickman_rho(1.0 / alpha),
    })
}

/// `pi(t; m, a)` with the Brun-Titchmarsh normalization `pi * phi(m) * ln t / t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgressionCount {
    pub count: u64,
    pub ratio: f64,
}

pub fn pi_progression(t: f64, m: u64, a: i64) -> Result<ProgressionCount> {
    if !(t >= 2.0) || m == 0 || m as f64 > t {
        return Err(Error::InvalidArgument(format!("need t >= 2 and 1 <= m <= t, got t = {t}, m = {m}")));
    }
    let r = crate::arith::residue(a, m);
    let count = primes_in_range(2, t.floor() as u64)
        .iter()
        .filter(|&&p| p % m == r)
        .count() as u64;
    let phi = crate::arith::euler_phi(m)? as f64;
    Ok(ProgressionCount {
        count,
        ratio: count as f64 * phi * t.ln() / t,
    })
}

/// `sum_{n <= t} n / phi(n)^2` and its ratio to `ln t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerSum {
    pub sum: f64,
    pub ratio: f64,
}

pub fn euler_sum(t: f64) -> Result<EulerSum> {
    if !(t >= 2.0) {
        return Err(Error::InvalidArgument(format!("need t >= 2, got {t}")));
    }
    let n = t.floor() as usize;
    let phi = totients_up_to(n);
    let sum: f64 = (1..=n)
        .map(|k| k as f64 / (phi[k] as f64 * phi[k] as f64))
        .sum();
    Ok(EulerSum {
        sum,
        ratio: sum / t.ln(),
    })
}

/// `gcd(l - 1, p - 1)` for two sieve primes.
pub fn shifted_gcd(a: &SievePrime, b: &SievePrime) -> u64 {
    (a.ell - 1).gcd(&(b.ell - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_prime, largest_prime_factor, multiplicative_order};

    #[test]
    fn segmented_sieve_matches_primality() {
        let ps = primes_in_range(0, 300_000);
        let brute: Vec<u64> = (0..=300_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, brute);
        let window = primes_in_range(1_000_000_000, 1_000_400_000);
        assert!(window.iter().all(|&p| is_prime(p)));
        let count = (1_000_000_000..=1_000_400_000u64).filter(|&n| is_prime(n)).count();
        assert_eq!(window.len(), count);
        assert!(primes_in_range(24, 28).is_empty());
        assert_eq!(primes_in_range(2, 2), vec![2]);
    }

    #[test]
    fn build_example_window() {
        let set = SievePrimeSet::build(2, 100.0, 2.0, 0.677, SetVariant::Standard).unwrap();
        set.check().unwrap();
        let m107 = set.members.iter().find(|m| m.ell == 107).expect("107 harvested");
        assert_eq!(m107.p_plus, 53);
        assert_eq!(m107.order_g, 106);
        assert!(!set.primes().any(|p| p == 101));
        for m in &set.members {
            assert_eq!(m.p_plus, largest_prime_factor(m.ell - 1).unwrap());
            assert_eq!(m.order_g, multiplicative_order(2, m.ell).unwrap().order);
        }
        assert!(matches!(
            SievePrimeSet::build(2, 100.0, 2.0, 0.4, SetVariant::Standard),
            Err(Error::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            SievePrimeSet::build(2, 114.0, 1.01, 0.677, SetVariant::Standard),
            Err(Error::EmptyWindow { .. })
        ));
    }

    #[test]
    fn golden_set_size_at_1000() {
        let set = SievePrimeSet::build(2, 1000.0, 2.0, 0.677, SetVariant::Standard).unwrap();
        set.check().unwrap();
        assert_eq!(set.len(), GOLDEN_SET_SIZE_1000);
        let erh = SievePrimeSet::build(2, 1000.0, 2.0, 0.677, SetVariant::ErhStyle).unwrap();
        erh.check().unwrap();
        assert!(erh.members.iter().all(|m| m.large_order && m.order_g >= m.p_plus));
        assert!(erh.members.iter().all(|m| set.members.contains(m)));
    }

    const GOLDEN_SET_SIZE_1000: usize = 45;

    #[test]
    fn monotone_in_alpha_and_divisibility() {
        for g in [2u64, 3, 10] {
            for z in [50.0, 100.0, 200.0, 1000.0] {
                let mut prev: Option<SievePrimeSet> = None;
                for alpha in [0.55, 0.6, 0.677, 0.75, 0.9] {
                    let set = SievePrimeSet::build(g, z, 2.0, alpha, SetVariant::Standard).unwrap();
                    set.check().unwrap();
                    for m in &set.members {
                        assert_eq!(m.order_g % m.p_plus, 0, "g={g} z={z} alpha={alpha} l={}", m.ell);
                    }
                    if let Some(p) = &prev {
                        assert!(set.members.iter().all(|m| p.members.contains(m)));
                    }
                    prev = Some(set);
                }
            }
        }
    }

    #[test]
    fn export_roundtrip() {
        let set = SievePrimeSet::build(3, 200.0, 2.0, 0.677, SetVariant::ErhStyle).unwrap();
        let text = set.export();
        assert!(text.starts_with("# g=3 z=200 C=2 alpha=0.677 variant=erh"));
        assert_eq!(SievePrimeSet::import(&text).unwrap(), set);
        assert!(SievePrimeSet::import("# g=2 z=10 C=2 alpha=0.6\n1,2\n").is_err());
    }

    #[test]
    fn density_examples() {
        let r = density_report(2, 100_000, 0.677).unwrap();
        assert_eq!(r.total_primes, GOLDEN_PRIMES_1E5);
        assert_eq!(r.count_alpha, GOLDEN_COUNT_ALPHA_1E5);
        assert!((r.dickman_reference - (1.0f64 / 0.677).ln()).abs() < 1e-15);
        let strict = density_report(2, 10_000, 0.999).unwrap();
        let mid = density_report(2, 10_000, 0.677).unwrap();
        let loose = density_report(2, 10_000, 0.501).unwrap();
        assert!(strict.count_alpha <= mid.count_alpha);
        assert!(loose.ratio_alpha > mid.ratio_alpha);
        assert!(mid.count_order >= mid.count_alpha / 2);
        assert!(density_report(2, 999, 0.677).is_err());
    }

    const GOLDEN_PRIMES_1E5: usize = 9591;
    const GOLDEN_COUNT_ALPHA_1E5: usize = 3065;

    #[test]
    fn progression_counts() {
        assert_eq!(pi_progression(100.0, 4, 1).unwrap().count, 11);
        assert_eq!(pi_progression(10.0, 2, 0).unwrap().count, 1);
        assert_eq!(pi_progression(100.0, 1, 0).unwrap().count, 25);
        let r = pi_progression(1e5, 10, 3).unwrap();
        assert!(r.ratio > 0.5 && r.ratio < 2.0);
        assert!(pi_progression(10.0, 11, 0).is_err());
    }

    #[test]
    fn euler_sums() {
        assert!((euler_sum(2.0).unwrap().sum - 3.0).abs() < 1e-12);
        assert!((euler_sum(4.0).unwrap().sum - 4.75).abs() < 1e-12);
        let small = euler_sum(1e3).unwrap();
        let large = euler_sum(1e6).unwrap();
        assert!(large.ratio <= small.ratio + 1.0);
        assert!((large.ratio - GOLDEN_EULER_RATIO_1E6).abs() < 1e-6, "{}", large.ratio);
    }

    const GOLDEN_EULER_RATIO_1E6: f64 = 4.231672444292673;

    #[test]
    fn dickman_closed_form() {
        assert_eq!(dickman_rho(0.5), 1.0);
        assert!((dickman_rho(2.0) - (1.0 - 2f64.ln())).abs() < 1e-15);
    }
}
