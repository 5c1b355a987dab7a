//! Complete sums modulo l p factor into sums modulo l and p when the orbit
//! periods are coprime.

use quadsieve::chars::{complete_sum_pair, orbit_sum, product_formula_residual, split_frequencies};
use quadsieve::Polynomial;

fn main() -> quadsieve::Result<()> {
    let f: Polynomial = "1,6,1".parse()?;
    let (lambda, ell, p) = (2, 7, 31);
    let (tl, tp) = (3, 5);
    for a in [0, 1, 7, 14] {
        let whole = complete_sum_pair(&f, lambda, ell, p, a)?;
        let split = split_frequencies(a, tl, tp)?;
        let x = orbit_sum(&f, lambda, ell, split.a_l as i64)?;
        let y = orbit_sum(&f, lambda, p, split.a_p as i64)?;
        println!(
            "a = {a:>2}: S = {:.6}, S_l(a_l = {}) S_p(a_p = {}) = {:.6}, residual {:.1e}",
            whole.value,
            split.a_l,
            split.a_p,
            x.value * y.value,
            product_formula_residual(&f, lambda, ell, p, a)?
        );
    }
    Ok(())
}
