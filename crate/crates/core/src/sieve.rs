//! The square sieve over a window of the sequence, evaluated literally:
//! every Jacobi symbol comes from modular evaluation of `u(n)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_squarefree, jacobi_odd};
use crate::census::matches_multiplier;
use crate::error::{Error, Result};
use crate::harvest::SievePrimeSet;
use crate::poly::SequenceSpec;

fn reject_zero(spec: &SequenceSpec, n: u64) -> Result<()> {
    if spec.vanishes_at(n) {
        Err(Error::ZeroTerm(n))
    } else {
        Ok(())
    }
}

/// `omega_z(s u(n))`: sieve primes dividing `s` or `u(n)`.
pub fn omega_z(spec: &SequenceSpec, n: u64, s: &BigUint, set: &SievePrimeSet) -> Result<u64> {
    reject_zero(spec, n)?;
    Ok(set
        .primes()
        .filter(|&ell| (s % ell).to_u64() == Some(0) || spec.u_eval_mod(n, ell) == 0)
        .count() as u64)
}

/// `D(n) = sum_l (s u(n) / l)`.
pub fn detector(spec: &SequenceSpec, n: u64, s: &BigUint, set: &SievePrimeSet) -> Result<i64> {
    reject_zero(spec, n)?;
    Ok(set
        .primes()
        .map(|ell| {
            let sm = (s % ell).to_u64().unwrap();
            jacobi_odd(crate::arith::mul_mod(sm, spec.u_eval_mod(n, ell), ell), ell) as i64
        })
        .sum())
}

/// Residues of `u` on the window, one row per sieve prime.
struct ResidueTable {
    start: u64,
    len: usize,
    rows: Vec<Vec<u64>>,
}

impl ResidueTable {
    fn new(spec: &SequenceSpec, m: u64, n: u64, set: &SievePrimeSet) -> Self {
        let start = m + 1;
        let len = n as usize;
        let rows = set
            .members
            .par_iter()
            .map(|sp| spec.window_residues(start, len, sp.ell))
            .collect();
        Self { start, len, rows }
    }

    fn omega(&self, k: usize) -> u64 {
        self.rows.iter().filter(|r| r[k] == 0).count() as u64
    }

    /// Symbol rows `(s u(n) / l)`.
    fn symbols(&self, s: u64, set: &SievePrimeSet) -> Vec<Vec<i8>> {
        set.members
            .par_iter()
            .zip(&self.rows)
            .map(|(sp, row)| {
                let sm = s % sp.ell;
                row.iter()
                    .map(|&r| jacobi_odd(crate::arith::mul_mod(sm, r, sp.ell), sp.ell))
                    .collect()
            })
            .collect()
    }
}

fn zero_terms(spec: &SequenceSpec, m: u64, n: u64) -> Vec<u64> {
    (m + 1..=m + n).filter(|&i| spec.vanishes_at(i)).collect()
}

fn check_run(n: u64, s: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("window length N must be at least 1".into()));
    }
    if s == 0 || !is_squarefree(s) {
        return Err(Error::NotSquarefree(s));
    }
    Ok(())
}

/// The split of the window by `omega_z(u(n)) <= floor(|L_z| / 2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub normal: Vec<u64>,
    pub exceptional: Vec<u64>,
    /// `n` with `u(n) = 0`, in neither part.
    pub skipped: Vec<u64>,
    /// `|E_z| / (N z^-alpha + ln z)`
    pub exceptional_ratio: f64,
}

fn partition_from(table: &ResidueTable, set: &SievePrimeSet, zeros: &[u64]) -> Partition {
    let half = set.len() as u64 / 2;
    let (mut normal, mut exceptional) = (Vec::new(), Vec::new());
    for k in 0..table.len {
        let idx = table.start + k as u64;
        if zeros.contains(&idx) {
            continue;
        }
        if table.omega(k) <= half {
            normal.push(idx);
        } else {
            exceptional.push(idx);
        }
    }
    let scale = table.len as f64 * set.z.powf(-set.alpha) + set.z.ln();
    Partition {
        exceptional_ratio: exceptional.len() as f64 / scale,
        normal,
        exceptional,
        skipped: zeros.to_vec(),
    }
}

pub fn partition(spec: &SequenceSpec, m: u64, n: u64, set: &SievePrimeSet) -> Result<Partition> {
    check_run(n, 1)?;
    let table = ResidueTable::new(spec, m, n, set);
    Ok(partition_from(&table, set, &zero_terms(spec, m, n)))
}

/// `|N_{s,z}| <= (2 / |L_z|) sum_{N_{s,z}} D(n)^2`, checked in integers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub lhs: u64,
    /// `2 sum D(n)^2`
    pub rhs_numerator: u64,
    /// `|L_z|`
    pub rhs_denominator: u64,
    pub rhs: f64,
    pub holds: bool,
    /// The members of `N_{s,z}`.
    pub matches: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveRun {
    pub spec: SequenceSpec,
    pub m: u64,
    pub n: u64,
    pub s: u64,
    pub prime_set: SievePrimeSet,
    pub detector: BTreeMap<u64, i64>,
    pub omega: BTreeMap<u64, u64>,
    pub partition: Partition,
    pub certificate: Certificate,
}

impl SieveRun {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sieve run serializes")
    }
}

/// Detector, `omega_z`, partition and certificate for one `(window, s, L_z)`.
pub fn sieve_run(spec: &SequenceSpec, m: u64, n: u64, s: u64, set: &SievePrimeSet) -> Result<SieveRun> {
    check_run(n, s)?;
    let table = ResidueTable::new(spec, m, n, set);
    let zeros = zero_terms(spec, m, n);
    let partition = partition_from(&table, set, &zeros);
    let symbols = table.symbols(s, set);
    let mut detector = BTreeMap::new();
    let mut omega = BTreeMap::new();
    let s_omega: Vec<bool> = set.primes().map(|ell| s % ell == 0).collect();
    for k in 0..table.len {
        let idx = table.start + k as u64;
        if zeros.contains(&idx) {
            continue;
        }
        detector.insert(idx, symbols.iter().map(|row| row[k] as i64).sum());
        let w = (0..set.len()).filter(|&i| s_omega[i] || table.rows[i][k] == 0).count();
        omega.insert(idx, w as u64);
    }
    let matches: Vec<u64> = partition
        .normal
        .par_iter()
        .copied()
        .filter(|&i| {
            let u = spec.u_eval(i);
            u.is_positive() && matches_multiplier(u.magnitude(), s)
        })
        .collect();
    let certificate = certificate_from(&matches, &detector, set.len() as u64);
    Ok(SieveRun {
        spec: spec.clone(),
        m,
        n,
        s,
        prime_set: set.clone(),
        detector,
        omega,
        partition,
        certificate,
    })
}

fn certificate_from(matches: &[u64], detector: &BTreeMap<u64, i64>, size: u64) -> Certificate {
    let lhs = matches.len() as u64;
    let rhs_numerator: u64 = 2 * matches.iter().map(|i| detector[i].pow(2) as u64).sum::<u64>();
    let holds = if size == 0 {
        lhs == 0
    } else {
        lhs * size <= rhs_numerator
    };
    Certificate {
        lhs,
        rhs_numerator,
        rhs_denominator: size,
        rhs: if size == 0 { 0.0 } else { rhs_numerator as f64 / size as f64 },
        holds,
        matches: matches.to_vec(),
    }
}

pub fn certificate(spec: &SequenceSpec, m: u64, n: u64, s: u64, set: &SievePrimeSet) -> Result<Certificate> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("certificate needs a nonempty prime set".into()));
    }
    Ok(sieve_run(spec, m, n, s, set)?.certificate)
}

/// Exact pair sums behind the sieve estimates, with their ratios to the
/// corresponding size bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Pairs with equal `P+`.
    pub u: i64,
    /// Pairs with distinct `P+`.
    pub v: i64,
    /// `U + V`
    pub w: i64,
    /// `sum gcd(l-1, p-1)` over pairs with distinct `P+`.
    pub t: u64,
    /// `sum gcd(l-1, p-1)^2` over the same pairs.
    pub q: u64,
    pub ordered_pairs: u64,
    pub gcd_bound_holds: bool,
    pub max_gcd: u64,
    /// Pairs whose gcd exceeds `min(m0, n0)`, the cofactors of `l - 1` and `p - 1`.
    pub min_cofactor_exceedances: u64,
    /// `U / (N z^{2-alpha})`
    pub u_ratio: f64,
    /// `V / (N z^{3-2alpha} (ln z)^-2 + z^3)`
    pub v_ratio: f64,
    /// `T / (z^2 / ln z)`
    pub t_ratio: f64,
    /// `Q / z^{3-alpha}`
    pub q_ratio: f64,
}

pub fn diagnostics(spec: &SequenceSpec, m: u64, n: u64, s: u64, set: &SievePrimeSet) -> Result<Diagnostics> {
    check_run(n, s)?;
    let table = ResidueTable::new(spec, m, n, set);
    let symbols = table.symbols(s, set);
    let ms = &set.members;
    let bound = set.c * set.z.powf(1.0 - set.alpha);
    let rows: Vec<Diagnostics> = (0..ms.len())
        .into_par_iter()
        .map(|i| {
            let mut d = Diagnostics::zero();
            for j in (0..ms.len()).filter(|&j| j != i) {
                let inner: i64 = symbols[i]
                    .iter()
                    .zip(&symbols[j])
                    .map(|(&a, &b)| (a * b) as i64)
                    .sum();
                d.ordered_pairs += 1;
                if ms[i].p_plus == ms[j].p_plus {
                    d.u += inner;
                    continue;
                }
                d.v += inner;
                let g = (ms[i].ell - 1).gcd(&(ms[j].ell - 1));
                d.t += g;
                d.q += g * g;
                d.max_gcd = d.max_gcd.max(g);
                if g as f64 > bound {
                    d.gcd_bound_holds = false;
                }
                let m0 = (ms[i].ell - 1) / ms[i].p_plus;
                let n0 = (ms[j].ell - 1) / ms[j].p_plus;
                if g > m0.min(n0) {
                    d.min_cofactor_exceedances += 1;
                }
            }
            d
        })
        .collect();
    let mut d = rows.into_iter().fold(Diagnostics::zero(), |mut acc, r| {
        acc.u += r.u;
        acc.v += r.v;
        acc.t += r.t;
        acc.q += r.q;
        acc.ordered_pairs += r.ordered_pairs;
        acc.gcd_bound_holds &= r.gcd_bound_holds;
        acc.max_gcd = acc.max_gcd.max(r.max_gcd);
        acc.min_cofactor_exceedances += r.min_cofactor_exceedances;
        acc
    });
    let (z, a, nf) = (set.z, set.alpha, n as f64);
    d.w = d.u + d.v;
    d.u_ratio = d.u as f64 / (nf * z.powf(2.0 - a));
    d.v_ratio = d.v as f64 / (nf * z.powf(3.0 - 2.0 * a) / z.ln().powi(2) + z.powi(3));
    d.t_ratio = d.t as f64 / (z * z / z.ln());
    d.q_ratio = d.q as f64 / z.powf(3.0 - a);
    Ok(d)
}

impl Diagnostics {
    fn zero() -> Self {
        Self {
            u: 0,
            v: 0,
            w: 0,
            t: 0,
            q: 0,
            ordered_pairs: 0,
            gcd_bound_holds: true,
            max_gcd: 0,
            min_cofactor_exceedances: 0,
            u_ratio: 0.0,
            v_ratio: 0.0,
            t_ratio: 0.0,
            q_ratio: 0.0,
        }
    }
}

/// Cross-pair gcd bound for a harvested set, independent of any sequence.
pub fn gcd_bound_holds(set: &SievePrimeSet) -> bool {
    let bound = set.c * set.z.powf(1.0 - set.alpha);
    let ms = &set.members;
    ms.iter().enumerate().all(|(i, a)| {
        ms[i + 1..]
            .iter()
            .filter(|b| b.p_plus != a.p_plus)
            .all(|b| ((a.ell - 1).gcd(&(b.ell - 1)) as f64) <= bound)
    })
}
