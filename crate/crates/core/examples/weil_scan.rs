//! Largest complete orbit sum over all frequencies, scaled by sqrt(p).

use quadsieve::chars::weil_scan;
use quadsieve::Polynomial;

fn main() -> quadsieve::Result<()> {
    for coeffs in ["1,6,1", "2,0,0,1", "1,-1,0,0,0,1"] {
        let f: Polynomial = coeffs.parse()?;
        let scan = weil_scan(&f, 2, 5000)?;
        let worst = scan.rows.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
        println!(
            "f = {f}: {} primes, max ratio {:.4} at p = {} (allowed {}), violations {}",
            scan.rows.len(),
            scan.max_ratio,
            worst.modulus,
            scan.slack,
            scan.violations.len()
        );
    }
    let small = weil_scan(&"1,0,1".parse()?, 3, 60)?;
    print!("{}", small.to_csv());
    Ok(())
}
