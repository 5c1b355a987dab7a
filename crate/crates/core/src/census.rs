//! Exact census of the fields `Q(sqrt(u(n)))` over a window of `n`,
//! without factoring the (large) values `u(n)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{is_perfect_square_unsigned, is_squarefree, jacobi_odd, small_primes, SMALL_PRIME_LIMIT};
use crate::error::{Error, Result};
use crate::poly::SequenceSpec;

/// Default trial-division bound for kernel extraction.
pub const DEFAULT_KERNEL_BOUND: u64 = 1_000_000;

/// Primes used as quadratic-residue witnesses before exact square tests.
const WITNESS_PRIMES: [u64; 16] = [
    1009, 2003, 3001, 4001, 5003, 6007, 7001, 8009, 9001, 10007, 11003, 12007, 13001, 14009, 15013, 16001,
];

fn positive(a: &BigInt) -> Result<&BigUint> {
    if a.is_positive() {
        Ok(a.magnitude())
    } else {
        Err(Error::InvalidArgument(format!("expected a positive integer, got {a}")))
    }
}

fn symbol_of(a: &BigUint, q: u64) -> i8 {
    jacobi_odd((a % q).to_u64().unwrap(), q)
}

/// `Q(sqrt a) = Q(sqrt b)`, i.e. `ab` is a perfect square.
pub fn same_field(a: &BigInt, b: &BigInt) -> Result<bool> {
    let (a, b) = (positive(a)?, positive(b)?);
    for q in WITNESS_PRIMES {
        if symbol_of(a, q) * symbol_of(b, q) == -1 {
            return Ok(false);
        }
    }
    Ok(same_field_exact(a, b))
}

/// `ab` square iff `a/gcd` and `b/gcd` are both squares.
fn same_field_exact(a: &BigUint, b: &BigUint) -> bool {
    let g = a.gcd(b);
    is_perfect_square_unsigned(&(a / &g)) && is_perfect_square_unsigned(&(b / &g))
}

/// Squarefree part of a positive integer, possibly only bounded from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    /// Exact squarefree kernel when `complete`; otherwise the lower bound `small_part * (B + 1)`.
    pub kernel: BigUint,
    pub complete: bool,
    /// Product of primes `<= B` dividing `n` to an odd power.
    pub small_part: BigUint,
    /// What remains of `n` after removing every prime `<= B`.
    pub cofactor: BigUint,
}

impl Kernel {
    /// A multiplier `m` with `n * m` a perfect square (the kernel itself when complete).
    pub fn square_completer(&self) -> BigUint {
        if self.complete {
            self.kernel.clone()
        } else {
            &self.small_part * &self.cofactor
        }
    }

    /// The exact kernel if it is known and fits in a `u64`.
    pub fn small_kernel(&self) -> Option<u64> {
        if self.complete {
            self.kernel.to_u64()
        } else {
            None
        }
    }
}

fn finish_kernel(mut rest: BigUint, divisors: &[u64], bound: u64) -> Kernel {
    let mut small = BigUint::one();
    for &p in divisors {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e % 2 == 1 {
            small *= p;
        }
    }
    let complete = rest.is_one() || is_perfect_square_unsigned(&rest);
    let kernel = if complete {
        small.clone()
    } else {
        &small * (bound + 1)
    };
    Kernel {
        kernel,
        complete,
        small_part: small,
        cofactor: rest,
    }
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < SMALL_PRIME_LIMIT as u64 {
        small_primes()
            .iter()
            .map(|&p| p as u64)
            .take_while(|&p| p <= bound)
            .collect()
    } else {
        crate::harvest::primes_in_range(2, bound)
    }
}

/// Kernel of `n > 0` by trial division with every prime `<= bound`.
pub fn squarefree_kernel(n: &BigInt, bound: u64) -> Result<Kernel> {
    let n = positive(n)?;
    if bound < 2 {
        return Err(Error::InvalidArgument(format!("kernel bound must be at least 2, got {bound}")));
    }
    let primes = primes_up_to(bound);
    // reduce once per batch of primes whose product fits in a u64
    let mut divisors = Vec::new();
    let mut i = 0;
    while i < primes.len() {
        let mut prod = 1u64;
        let mut j = i;
        while j < primes.len() {
            match prod.checked_mul(primes[j]) {
                Some(x) => prod = x,
                None => break,
            }
            j += 1;
        }
        let r = (n % prod).to_u64().unwrap();
        divisors.extend(primes[i..j].iter().copied().filter(|&p| r % p == 0));
        i = j;
    }
    Ok(finish_kernel(n.clone(), &divisors, bound))
}

/// Primes `<= bound` dividing `u(n)` for each `n` in `start..start+len`, by modular evaluation.
fn window_small_divisors(spec: &SequenceSpec, start: u64, len: usize, bound: u64) -> Vec<Vec<u64>> {
    let primes = primes_up_to(bound);
    let partial: Vec<Vec<Vec<u64>>> = primes
        .par_chunks(4096)
        .map(|chunk| {
            let mut hits = vec![Vec::new(); len];
            for &p in chunk {
                for (k, r) in spec.window_residues(start, len, p).into_iter().enumerate() {
                    if r == 0 {
                        hits[k].push(p);
                    }
                }
            }
            hits
        })
        .collect();
    let mut out = vec![Vec::new(); len];
    for hits in partial {
        for (k, h) in hits.into_iter().enumerate() {
            out[k].extend(h);
        }
    }
    out
}

/// Kernels of `u(n)` for `n = M+1..=M+N` with `u(n) > 0` (others are `None`).
pub fn sequence_kernels(spec: &SequenceSpec, m: u64, n: u64, bound: u64) -> Vec<(u64, Option<Kernel>)> {
    let start = m + 1;
    let divisors = window_small_divisors(spec, start, n as usize, bound);
    (0..n)
        .into_par_iter()
        .map(|k| {
            let idx = start + k;
            let u = spec.u_eval(idx);
            let kern = u
                .is_positive()
                .then(|| finish_kernel(u.magnitude().clone(), &divisors[k as usize], bound));
            (idx, kern)
        })
        .collect()
}

/// One field-equality class of the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldClass {
    pub representative: u64,
    pub members: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub m: u64,
    pub n: u64,
    pub s_bound: Option<u64>,
    /// `Q_u(M, N; s)` for each squarefree `s` that occurs.
    pub per_s: BTreeMap<u64, u64>,
    pub total: u64,
    pub classes: Vec<FieldClass>,
    /// `n` with `u(n) <= 0`, excluded from every count.
    pub skipped: Vec<u64>,
}

impl CensusResult {
    /// `{M, N, S, per_s: [[s, count]...], classes: [[representative, size]...], skipped: [...]}`
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "M": self.m,
            "N": self.n,
            "S": self.s_bound,
            "per_s": self.per_s.iter().map(|(s, c)| [*s, *c]).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| [c.representative, c.members.len() as u64]).collect::<Vec<_>>(),
            "skipped": self.skipped,
        })
    }
}

fn check_window(spec: &SequenceSpec, n: u64) -> Result<()> {
    spec.require_separable()?;
    if n == 0 {
        return Err(Error::InvalidArgument("window length N must be at least 1".into()));
    }
    Ok(())
}

/// Witness residues `u(n) mod q` for the window, one vector per witness prime.
fn witness_table(spec: &SequenceSpec, start: u64, len: usize) -> Vec<Vec<u64>> {
    WITNESS_PRIMES
        .iter()
        .map(|&q| spec.window_residues(start, len, q))
        .collect()
}

/// `s u(n)` is a positive perfect square, with `u(n)` already known positive.
pub(crate) fn matches_multiplier(u: &BigUint, s: u64) -> bool {
    let (q, r) = u.div_rem(&BigUint::from(s));
    r.is_zero() && is_perfect_square_unsigned(&q)
}

/// `Q_u(M, N; s)`: the number of `n` in `[M+1, M+N]` with `u(n) > 0` and `s u(n)` a square.
pub fn count_q(spec: &SequenceSpec, m: u64, n: u64, s: u64) -> Result<u64> {
    check_window(spec, n)?;
    if !is_squarefree(s) {
        return Err(Error::NotSquarefree(s));
    }
    let start = m + 1;
    let table = witness_table(spec, start, n as usize);
    let s_symbols: Vec<i8> = WITNESS_PRIMES.iter().map(|&q| jacobi_odd(s % q, q)).collect();
    let mut count = 0;
    for k in 0..n as usize {
        let rejected = WITNESS_PRIMES
            .iter()
            .enumerate()
            .any(|(i, &q)| s_symbols[i] * jacobi_odd(table[i][k], q) == -1);
        if rejected {
            continue;
        }
        let u = spec.u_eval(start + k as u64);
        if u.is_positive() && matches_multiplier(u.magnitude(), s) {
            count += 1;
        }
    }
    Ok(count)
}

/// `sum_{s <= S squarefree} Q_u(M, N; s)` via kernel extraction.
pub fn count_q_total(spec: &SequenceSpec, m: u64, n: u64, s_bound: u64) -> Result<CensusResult> {
    count_q_total_with_bound(spec, m, n, s_bound, DEFAULT_KERNEL_BOUND)
}

pub fn count_q_total_with_bound(
    spec: &SequenceSpec,
    m: u64,
    n: u64,
    s_bound: u64,
    kernel_bound: u64,
) -> Result<CensusResult> {
    check_window(spec, n)?;
    if s_bound == 0 {
        return Err(Error::InvalidArgument("S must be at least 1".into()));
    }
    let mut per_s = BTreeMap::new();
    let mut skipped = Vec::new();
    for (idx, kern) in sequence_kernels(spec, m, n, kernel_bound) {
        let Some(kern) = kern else {
            skipped.push(idx);
            continue;
        };
        let hit = if kern.complete {
            kern.kernel.to_u64().filter(|&k| k <= s_bound)
        } else if s_bound <= kernel_bound {
            None
        } else {
            // undecided by the certificate: definitional test over every
            // squarefree multiple of the small part up to S
            let u = spec.u_eval(idx);
            let small = kern.small_part.to_u64();
            small.and_then(|sp| {
                (1..=s_bound / sp)
                    .map(|t| sp * t)
                    .find(|&s| is_squarefree(s) && matches_multiplier(u.magnitude(), s))
            })
        };
        if let Some(s) = hit {
            *per_s.entry(s).or_insert(0) += 1;
        }
    }
    let total = per_s.values().sum();
    Ok(CensusResult {
        m,
        n,
        s_bound: Some(s_bound),
        per_s,
        total,
        classes: Vec::new(),
        skipped,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Roots are always the smaller index, so class representatives are minimal.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Partition of the positive terms of the window into field-equality classes.
pub fn distinct_fields(spec: &SequenceSpec, m: u64, n: u64) -> Result<CensusResult> {
    check_window(spec, n)?;
    let start = m + 1;
    let values: Vec<(u64, BigInt)> = (start..start + n)
        .into_par_iter()
        .map(|i| (i, spec.u_eval(i)))
        .collect();
    let (pos, neg): (Vec<_>, Vec<_>) = values.into_iter().partition(|(_, u)| u.is_positive());
    let skipped = neg.into_iter().map(|(i, _)| i).collect();
    let signatures: Vec<Vec<i8>> = pos
        .par_iter()
        .map(|(_, u)| WITNESS_PRIMES.iter().map(|&q| symbol_of(u.magnitude(), q)).collect())
        .collect();
    let mut uf = UnionFind::new(pos.len());
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if uf.find(i) == uf.find(j) {
                continue;
            }
            let compatible = signatures[i]
                .iter()
                .zip(&signatures[j])
                .all(|(a, b)| a * b != -1);
            if compatible && same_field_exact(pos[i].1.magnitude(), pos[j].1.magnitude()) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (k, (idx, _)) in pos.iter().enumerate() {
        let root = uf.find(k);
        groups.entry(root).or_default().push(*idx);
    }
    let classes: Vec<FieldClass> = groups
        .into_values()
        .map(|members| FieldClass {
            representative: members[0],
            members,
        })
        .collect();
    let total = classes.len() as u64;
    Ok(CensusResult {
        m,
        n,
        s_bound: None,
        per_s: BTreeMap::new(),
        total,
        classes,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_perfect_square;
    use crate::poly::Polynomial;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn cubic(g: u64) -> SequenceSpec {
        SequenceSpec::validate(Polynomial::from_i64(&[2, 0, 0, 1]).unwrap(), g).unwrap()
    }

    #[test]
    fn same_field_examples() {
        assert!(same_field(&big(8), &big(2)).unwrap());
        assert!(!same_field(&big(17), &big(41)).unwrap());
        let a = BigInt::from(3u32).pow(77) * 7;
        assert!(same_field(&a, &a).unwrap());
        assert!(same_field(&big(0), &big(1)).is_err());
        assert!(same_field(&big(-2), &big(8)).is_err());
        for a in 1..300i64 {
            for b in 1..60i64 {
                let sq = is_perfect_square(&big(a * b));
                assert_eq!(same_field(&big(a), &big(b)).unwrap(), sq, "{a} {b}");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let k = squarefree_kernel(&big(72), 10).unwrap();
        assert!(k.complete);
        assert_eq!(k.kernel, BigUint::from(2u32));
        let n = BigInt::from(17) * BigInt::from(2).pow(100) * 9;
        let k = squarefree_kernel(&n, 100).unwrap();
        assert!(k.complete);
        assert_eq!(k.kernel, BigUint::from(17u32));
        // two 80-bit primes
        let p: BigInt = "1208925819614629174706189".parse().unwrap();
        let q: BigInt = "1208925819614629174706111".parse().unwrap();
        let k = squarefree_kernel(&(&p * &q), 1_000_000).unwrap();
        assert!(!k.complete);
        assert!(k.kernel > BigUint::from(1_000_000u32));
        assert_eq!(k.square_completer(), (&p * &q).magnitude().clone());
        // a large square cofactor still completes
        let k = squarefree_kernel(&(&p * &p * 6), 1000).unwrap();
        assert!(k.complete);
        assert_eq!(k.kernel, BigUint::from(6u32));
        assert!(squarefree_kernel(&big(0), 10).is_err());
    }

    #[test]
    fn kernel_matches_factorization_oracle() {
        for n in 1..20_000u64 {
            let k = squarefree_kernel(&BigInt::from(n), 200).unwrap();
            let f = if n == 1 { vec![] } else { crate::arith::factorize(n).unwrap().factors };
            let expect: u64 = f.iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p).product();
            if k.complete {
                assert_eq!(k.kernel.to_u64(), Some(expect), "n = {n}");
            } else {
                assert!(expect > 200);
                assert!(k.kernel <= BigUint::from(expect) * 201u32);
            }
            let m = BigUint::from(n) * k.square_completer();
            assert!(is_perfect_square_unsigned(&m));
        }
    }

    #[test]
    fn count_q_examples() {
        let shanks = SequenceSpec::shanks();
        assert_eq!(count_q(&shanks, 0, 10, 17).unwrap(), 1);
        assert_eq!(count_q(&shanks, 0, 10, 3).unwrap(), 0);
        assert_eq!(count_q(&shanks, 0, 10, 12), Err(Error::NotSquarefree(12)));
        let square = SequenceSpec::validate(Polynomial::from_i64(&[0, 0, 1]).unwrap(), 2).unwrap();
        assert_eq!(count_q(&square, 0, 10, 1), Err(Error::NotSeparable));
        assert!(count_q(&shanks, 0, 0, 1).is_err());
    }

    /// Brute-force count with no prefilter.
    fn brute_count(spec: &SequenceSpec, m: u64, n: u64, s: u64) -> u64 {
        (m + 1..=m + n)
            .filter(|&i| {
                let u = spec.u_eval(i);
                u.is_positive() && is_perfect_square(&(u * s))
            })
            .count() as u64
    }

    #[test]
    fn count_q_matches_brute_force() {
        let specs = [
            SequenceSpec::shanks(),
            cubic(2),
            SequenceSpec::validate(Polynomial::from_i64(&[-7, 0, 1]).unwrap(), 2).unwrap(),
            SequenceSpec::validate(Polynomial::from_i64(&[1, 0, 1]).unwrap(), 3).unwrap(),
        ];
        for spec in &specs {
            for s in [1u64, 2, 3, 5, 6, 17, 41, 113] {
                assert_eq!(count_q(spec, 0, 40, s).unwrap(), brute_count(spec, 0, 40, s));
            }
        }
        // X^2 + 1 at g = 3 gives 10, 82, ... ; X^2 - 7 at g = 2 has u(1) = -3 skipped
        let neg = &specs[2];
        assert_eq!(count_q(neg, 0, 1, 3).unwrap(), 0);
    }

    #[test]
    fn total_examples() {
        let shanks = SequenceSpec::shanks();
        let r = count_q_total(&shanks, 0, 5, 50).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.per_s, BTreeMap::from([(17, 1), (41, 1)]));
        let all = count_q_total(&shanks, 0, 5, 10_000).unwrap();
        assert_eq!(all.total, 5);
        let one = count_q_total(&shanks, 0, 30, 1).unwrap();
        assert_eq!(one.total, brute_count(&shanks, 0, 30, 1));
        let json = r.to_json();
        assert_eq!(json["per_s"], json!([[17, 1], [41, 1]]));
        assert_eq!(json["M"], json!(0));
    }

    #[test]
    fn fallback_path_when_bound_is_small() {
        // bound below S forces the definitional fallback for incomplete kernels
        let shanks = SequenceSpec::shanks();
        for s_bound in [50u64, 500, 5000] {
            let fast = count_q_total(&shanks, 0, 12, s_bound).unwrap();
            let slow = count_q_total_with_bound(&shanks, 0, 12, s_bound, 10).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn distinct_field_examples() {
        let shanks = SequenceSpec::shanks();
        let r = distinct_fields(&shanks, 0, 5).unwrap();
        assert_eq!(r.classes.len(), 5);
        let r = distinct_fields(&shanks, 7, 1).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].representative, 8);
        // X^2 + 2X gives u(n) = g^n (g^n + 2); repeated fields appear
        let spec = SequenceSpec::validate(Polynomial::from_i64(&[0, 2, 1]).unwrap(), 4).unwrap();
        let r = distinct_fields(&spec, 0, 40).unwrap();
        for class in &r.classes {
            for w in class.members.windows(2) {
                assert!(same_field(&spec.u_eval(w[0]), &spec.u_eval(w[1])).unwrap());
            }
        }
        for (i, a) in r.classes.iter().enumerate() {
            for b in &r.classes[i + 1..] {
                assert!(!same_field(&spec.u_eval(a.representative), &spec.u_eval(b.representative)).unwrap());
            }
        }
    }

    #[test]
    fn sequence_kernels_agree_with_direct_trial_division() {
        let spec = cubic(3);
        for (n, k) in sequence_kernels(&spec, 0, 30, 5000) {
            let direct = squarefree_kernel(&spec.u_eval(n), 5000).unwrap();
            assert_eq!(k.unwrap(), direct);
        }
    }
}
