//! Incomplete sums against the completion bound, the mean-square average over
//! moduli, and short sums of the Legendre symbol.

use quadsieve::chars::{complete_sum_pair, conditional_char_measure, hb_average, incomplete_sum};
use quadsieve::Polynomial;

fn main() -> quadsieve::Result<()> {
    let f: Polynomial = "1,6,1".parse()?;
    let (ell, p) = (11, 7);
    let full = complete_sum_pair(&f, 2, ell, p, 0)?;
    println!("complete sum mod {}: {:?} over period {}", ell * p, full.exact, full.period);
    for k in [10, 25, full.period] {
        let s = incomplete_sum(&f, 3, 2, ell, p, k)?;
        println!("K = {k:>3}: sum {:>4}, ratio to completion bound {:.3}", s.exact.unwrap(), s.ratio);
    }

    for (r, s) in [(1, 10), (100, 100), (1000, 50)] {
        let hb = hb_average(r, &vec![1.0; s])?;
        println!("R = {r}, S = {s}: {} moduli, mean square total {}, normalized {:.4}", hb.moduli, hb.lhs, hb.normalized);
    }

    let q = 1_000_003;
    for k in [100, 10_000, 500_000] {
        let c = conditional_char_measure(q, k)?;
        println!("sum_(n <= {k}) (n/{q}) = {}, over sqrt(k) {:.3}", c.sum, c.ratio);
    }
    Ok(())
}
