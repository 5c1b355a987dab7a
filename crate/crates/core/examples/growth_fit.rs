//! Log-log slopes of measured counts as the window doubles.

use quadsieve::bounds::{exponent_table, fit_exponent};
use quadsieve::census::{count_q, distinct_fields};
use quadsieve::SequenceSpec;

fn main() -> quadsieve::Result<()> {
    let shanks = SequenceSpec::shanks();
    let windows = [100u64, 200, 400, 800];
    let mut fields = Vec::new();
    let mut matches = Vec::new();
    for &n in &windows {
        let distinct = distinct_fields(&shanks, 0, n)?.classes.len();
        let q = count_q(&shanks, 0, n, 17)?;
        println!("N = {n}: {distinct} distinct fields, Q(0, N; 17) = {q}");
        fields.push((n as f64, distinct as f64));
        matches.push((n as f64, q as f64));
    }
    let beta = exponent_table(0.677)?.beta;
    println!("distinct-field slope {:.4} (lower-bound exponent 1 - beta = {:.4})", fit_exponent(&fields)?, 1.0 - beta);
    println!("Q(0, N; 17) slope {:.4} (upper-bound exponent beta = {beta:.4})", fit_exponent(&matches)?);
    Ok(())
}
