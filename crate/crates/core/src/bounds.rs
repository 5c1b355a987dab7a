//! Exponent calculus for the counting bounds and Graham–Kolesnik term balancing.
//!
//! All `o(1)` exponents are rendered as zero: the values here describe the
//! shape of a bound, never a certified finite-`N` inequality.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harvest::check_alpha;

/// `B(z) = sum A_j z^B_j + sum C_k z^-D_k` on `[z1, z2]`, with the range kept
/// in logarithms so that very large `z2` stay representable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermSystem {
    pub ascending: Vec<(f64, f64)>,
    pub descending: Vec<(f64, f64)>,
    pub ln_z1: f64,
    pub ln_z2: f64,
}

fn positive_terms(terms: &[(f64, f64)]) -> bool {
    terms.iter().all(|&(c, e)| c > 0.0 && e > 0.0 && c.is_finite() && e.is_finite())
}

impl TermSystem {
    pub fn new(ascending: Vec<(f64, f64)>, descending: Vec<(f64, f64)>, z1: f64, z2: f64) -> Result<Self> {
        if !(z1 > 0.0) {
            return Err(Error::InvalidArgument(format!("z1 must be positive, got {z1}")));
        }
        Self::with_log_range(ascending, descending, z1.ln(), z2.ln())
    }

    pub fn with_log_range(
        ascending: Vec<(f64, f64)>,
        descending: Vec<(f64, f64)>,
        ln_z1: f64,
        ln_z2: f64,
    ) -> Result<Self> {
        if ascending.is_empty() || descending.is_empty() {
            return Err(Error::InvalidArgument("term system needs ascending and descending terms".into()));
        }
        if !positive_terms(&ascending) || !positive_terms(&descending) {
            return Err(Error::InvalidArgument("coefficients and exponents must be positive".into()));
        }
        if !(ln_z1 <= ln_z2) || !ln_z1.is_finite() || !ln_z2.is_finite() {
            return Err(Error::InvalidArgument(format!("bad z range [e^{ln_z1}, e^{ln_z2}]")));
        }
        Ok(Self {
            ascending,
            descending,
            ln_z1,
            ln_z2,
        })
    }

    fn log_terms(&self, t: f64) -> impl Iterator<Item = f64> + '_ {
        let up = self.ascending.iter().map(move |&(a, b)| a.ln() + b * t);
        let down = self.descending.iter().map(move |&(c, d)| c.ln() - d * t);
        up.chain(down)
    }

    /// `ln B(e^t)`, convex in `t`.
    pub fn ln_value(&self, t: f64) -> f64 {
        let max = self.log_terms(t).fold(f64::NEG_INFINITY, f64::max);
        max + self.log_terms(t).map(|x| (x - max).exp()).sum::<f64>().ln()
    }

    pub fn value(&self, z: f64) -> f64 {
        self.ln_value(z.ln()).exp()
    }

    /// `T_jk = (A_j^D_k C_k^B_j)^(1/(B_j+D_k))`.
    pub fn balancing_terms(&self) -> Vec<Vec<f64>> {
        self.ascending
            .iter()
            .map(|&(a, b)| {
                self.descending
                    .iter()
                    .map(|&(c, d)| ((d * a.ln() + b * c.ln()) / (b + d)).exp())
                    .collect()
            })
            .collect()
    }

    /// `sum A_j z1^B_j + sum C_k z2^-D_k`
    pub fn edge_terms(&self) -> f64 {
        let up: f64 = self.ascending.iter().map(|&(a, b)| (a.ln() + b * self.ln_z1).exp()).sum();
        let down: f64 = self.descending.iter().map(|&(c, d)| (c.ln() - d * self.ln_z2).exp()).sum();
        up + down
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrakolResult {
    pub z_star: f64,
    pub ln_z_star: f64,
    pub value: f64,
    pub t: Vec<Vec<f64>>,
    pub edges: f64,
    /// `2 J K sum T_jk + edges`
    pub guarantee: f64,
    pub guarantee_holds: bool,
}

impl GrakolResult {
    pub fn t_sum(&self) -> f64 {
        self.t.iter().flatten().sum()
    }
}

const GRID_POINTS: usize = 2001;
const LOG_STEP: f64 = 1e-4;

/// Minimizes `B` over the range: balancing points and a logarithmic grid,
/// then golden-section refinement to relative step `1e-4` in `z`.
pub fn grakol_optimize(ts: &TermSystem) -> GrakolResult {
    let (lo, hi) = (ts.ln_z1, ts.ln_z2);
    let mut candidates: Vec<f64> = ts
        .ascending
        .iter()
        .flat_map(|&(a, b)| {
            ts.descending
                .iter()
                .map(move |&(c, d)| ((c.ln() - a.ln()) / (b + d)).clamp(lo, hi))
        })
        .collect();
    let width = hi - lo;
    candidates.extend((0..GRID_POINTS).map(|i| lo + width * i as f64 / (GRID_POINTS - 1) as f64));
    let mut best = candidates
        .iter()
        .copied()
        .min_by(|x, y| ts.ln_value(*x).total_cmp(&ts.ln_value(*y)))
        .unwrap();
    let cell = width / (GRID_POINTS - 1) as f64;
    let (mut a, mut b) = ((best - cell).max(lo), (best + cell).min(hi));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > LOG_STEP {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if ts.ln_value(c) <= ts.ln_value(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = 0.5 * (a + b);
    if ts.ln_value(refined) < ts.ln_value(best) {
        best = refined;
    }
    let t = ts.balancing_terms();
    let edges = ts.edge_terms();
    let jk = (ts.ascending.len() * ts.descending.len()) as f64;
    let t_sum: f64 = t.iter().flatten().sum();
    let guarantee = 2.0 * jk * t_sum + edges;
    let value = ts.ln_value(best).exp();
    GrakolResult {
        z_star: best.exp(),
        ln_z_star: best,
        value,
        t,
        edges,
        guarantee,
        guarantee_holds: value <= guarantee,
    }
}

fn check_n(n: f64) -> Result<()> {
    if n >= 2.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")))
    }
}

/// `N z^(1-2alpha) + z` on `[ln N, N]`, the single-`s` endgame with its log factor dropped.
pub fn endgame_system(alpha: f64, n: f64) -> Result<TermSystem> {
    check_alpha(alpha)?;
    check_n(n)?;
    TermSystem::with_log_range(vec![(1.0, 1.0)], vec![(n, 2.0 * alpha - 1.0)], n.ln().ln().max(0.0), n.ln())
}

/// `S z` against `S^(1/2) N z^-(2alpha-1) + S N z^-alpha`, the first averaged bound.
pub fn av1_system(alpha: f64, n: f64, s: f64) -> Result<TermSystem> {
    check_alpha(alpha)?;
    check_n(n)?;
    TermSystem::with_log_range(
        vec![(s, 1.0)],
        vec![(s.sqrt() * n, 2.0 * alpha - 1.0), (s * n, alpha)],
        n.ln().ln().max(0.0),
        100.0 * (s * n).ln(),
    )
}

/// The `J = K = 2` system of the second averaged bound on `[ln N, (SN)^100]`.
pub fn av2_system(alpha: f64, n: f64, s: f64) -> Result<TermSystem> {
    check_alpha(alpha)?;
    check_n(n)?;
    TermSystem::with_log_range(
        vec![(s.sqrt(), 1.5 - alpha / 2.0), (s, 0.5 - alpha / 2.0)],
        vec![(s * n, alpha), (s.sqrt() * n, 2.0 * alpha - 1.0)],
        n.ln().ln().max(0.0),
        100.0 * (s * n).ln(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentTable {
    pub alpha: f64,
    /// `1 / (2 alpha)`
    pub beta: f64,
    /// `2 - 1/alpha`
    pub gamma: f64,
    /// `3 / (2 (1 + alpha))`
    pub beta0: f64,
    /// `(4 + alpha) / (1 + alpha)`
    pub gamma0: f64,
    /// `2 (1 - alpha) / (1 + alpha)`, where the two terms of the first averaged bound cross
    pub av1_switch: f64,
    pub switch1: f64,
    pub switch2: f64,
    pub switch3: f64,
    pub theta: f64,
    /// `1 / (1 + alpha)`
    pub erh_exponent: f64,
    /// `switch1 < switch2 < switch3`; holds exactly when `alpha > 2/3`.
    pub regimes_ordered: bool,
}

pub fn theta(alpha: f64) -> f64 {
    let a = alpha;
    (1.0 - a).powi(2) * (1.0 + 3.0 * a) / ((1.0 + a * a) * (3.0 * a - 1.0))
}

pub fn exponent_table(alpha: f64) -> Result<ExponentTable> {
    check_alpha(alpha)?;
    let a = alpha;
    let switch1 = 2.0 * (1.0 - a) / (1.0 + 3.0 * a);
    let switch2 = 4.0 * (1.0 - a) / (1.0 + 3.0 * a);
    let switch3 = 2.0 * a / 3.0;
    let table = ExponentTable {
        alpha,
        beta: 1.0 / (2.0 * a),
        gamma: 2.0 - 1.0 / a,
        beta0: 3.0 / (2.0 * (1.0 + a)),
        gamma0: (4.0 + a) / (1.0 + a),
        av1_switch: 2.0 * (1.0 - a) / (1.0 + a),
        switch1,
        switch2,
        switch3,
        theta: theta(a),
        erh_exponent: 1.0 / (1.0 + a),
        regimes_ordered: switch1 < switch2 && switch2 < switch3,
    };
    debug_assert!(table.theta > 0.0 && table.theta < 1.0);
    Ok(table)
}

impl ExponentTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("beta0", self.beta0),
            ("gamma0", self.gamma0),
            ("av1_switch", self.av1_switch),
            ("switch1", self.switch1),
            ("switch2", self.switch2),
            ("switch3", self.switch3),
            ("theta", self.theta),
            ("erh_exponent", self.erh_exponent),
        ];
        for (name, v) in rows {
            writeln!(out, "{name:<13}{v:.10}").unwrap();
        }
        writeln!(out, "{:<13}{}", "ordered", self.regimes_ordered).unwrap();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    R1,
    R2,
    R3,
    Trivial,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Self::R1 => "R1",
            Self::R2 => "R2",
            Self::R3 => "R3",
            Self::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeBound {
    pub value: f64,
    pub regime: Regime,
}

/// `N`-exponent pieces of the three regime formulas, as `(S power, N power)`.
fn regime_exponents(a: f64, regime: Regime) -> (f64, f64) {
    match regime {
        Regime::R1 => (1.0 - 1.0 / (4.0 * a), 1.0 / (2.0 * a)),
        Regime::R2 => (0.5, (3.0 - a) / (1.0 + 3.0 * a)),
        Regime::R3 => (3.0 / (3.0 + a), (3.0 - a) / (3.0 + a)),
        Regime::Trivial => (0.0, 1.0),
    }
}

/// Value of one regime formula at `(N, S)`.
pub fn regime_value(alpha: f64, n: f64, s: f64, regime: Regime) -> f64 {
    let (es, en) = regime_exponents(alpha, regime);
    (es * s.ln() + en * n.ln()).exp()
}

/// The piecewise bound on the sum over `s <= S`, selected by `log S / log N`.
pub fn regime_bound(alpha: f64, n: f64, s: f64) -> Result<RegimeBound> {
    let table = exponent_table(alpha)?;
    check_n(n)?;
    if !(s >= 1.0) {
        return Err(Error::InvalidArgument(format!("S must be at least 1, got {s}")));
    }
    let e = s.ln() / n.ln();
    let regime = if e <= table.switch1 {
        Regime::R1
    } else if e <= table.switch2 {
        Regime::R2
    } else if e <= table.switch3 {
        Regime::R3
    } else {
        Regime::Trivial
    };
    Ok(RegimeBound {
        value: regime_value(alpha, n, s, regime),
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationCheck {
    pub theta: f64,
    pub theta_in_unit: bool,
    /// `|(1 - theta/2) - (-3+5a+3a^2+3a^3)/((6a-2)(1+a^2))|`
    pub identity_residual: f64,
    /// `1 - theta/2 >= (7a-3)/(6a-2)`
    pub inequality_holds: bool,
    /// `N`-exponent of `T12^theta T21^(1-theta)` minus `(1-a)/(3a-1)`
    pub product_residual: f64,
    pub holds: bool,
}

pub fn interpolation_check(alpha: f64) -> Result<InterpolationCheck> {
    check_alpha(alpha)?;
    let a = alpha;
    let th = theta(a);
    let printed = (-3.0 + 5.0 * a + 3.0 * a * a + 3.0 * a.powi(3)) / ((6.0 * a - 2.0) * (1.0 + a * a));
    let identity_residual = ((1.0 - th / 2.0) - printed).abs();
    let inequality_holds = 1.0 - th / 2.0 >= (7.0 * a - 3.0) / (6.0 * a - 2.0);
    let n_exp = th * (3.0 - a) / (1.0 + 3.0 * a) + (1.0 - th) * (1.0 - a) / (1.0 + a);
    let product_residual = (n_exp - (1.0 - a) / (3.0 * a - 1.0)).abs();
    let theta_in_unit = th > 0.0 && th < 1.0;
    Ok(InterpolationCheck {
        theta: th,
        theta_in_unit,
        identity_residual,
        inequality_holds,
        product_residual,
        holds: theta_in_unit && inequality_holds && identity_residual < 1e-12 && product_residual < 1e-12,
    })
}

/// `z = N^(1/(2alpha)) (ln N)^(-1/alpha)`
pub fn default_z(n: f64, alpha: f64) -> f64 {
    n.powf(1.0 / (2.0 * alpha)) * n.ln().powf(-1.0 / alpha)
}

/// The two endgame terms `(N z^(1-2alpha), z (ln z)^2)`.
pub fn endgame_terms(n: f64, alpha: f64, z: f64) -> (f64, f64) {
    (n * z.powf(1.0 - 2.0 * alpha), z * z.ln().powi(2))
}

/// Larger over smaller endgame term at the default `z`.
pub fn endgame_balance_ratio(n: f64, alpha: f64) -> f64 {
    let (x, y) = endgame_terms(n, alpha, default_z(n, alpha));
    x.max(y) / x.min(y)
}

/// Least-squares slope of `ln count` against `ln N`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(n, c)| !(n > 0.0) || !(c > 0.0)) {
        return Err(Error::InvalidArgument("points must have positive N and count".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all N values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Regime bound over a grid of `(N, S)`, as CSV `N,S,bound,regime`.
pub fn bound_curve_csv(alpha: f64, ns: &[f64], ss: &[f64]) -> Result<String> {
    let mut out = String::from("N,S,bound,regime\n");
    for &n in ns {
        for &s in ss {
            let b = regime_bound(alpha, n, s)?;
            writeln!(out, "{n},{s},{:.6e},{}", b.value, b.regime.label()).unwrap();
        }
    }
    Ok(out)
}
