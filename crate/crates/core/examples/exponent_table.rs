//! Exponents of the counting bounds, the regime table and its switching points.

use quadsieve::bounds::{bound_curve_csv, exponent_table, interpolation_check, regime_bound};

fn main() -> quadsieve::Result<()> {
    let table = exponent_table(0.677)?;
    print!("{}", table.to_text());
    for a in [0.51, 0.6, 0.75, 0.9, 0.99] {
        let c = interpolation_check(a)?;
        let t = exponent_table(a)?;
        println!("alpha = {a}: theta = {:.6}, interpolation holds {}, regimes ordered {}", c.theta, c.holds, t.regimes_ordered);
    }
    let n = 1e12;
    for s in [1.0, 1e2, 1e3, 1e5, 1e9] {
        let b = regime_bound(0.677, n, s)?;
        println!("N = 1e12, S = {s:e}: {:.4e} [{}] (shape comparison)", b.value, b.regime.label());
    }
    print!("{}", bound_curve_csv(0.677, &[1e6, 1e9], &[1.0, 100.0])?);
    Ok(())
}
