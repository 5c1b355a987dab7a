//! Harvesting sieve primes with a large shifted-prime factor and large order,
//! the export format, and density measurements.

use quadsieve::harvest::{density_report, euler_sum, pi_progression, SetVariant, SievePrimeSet};

fn main() -> quadsieve::Result<()> {
    let set = SievePrimeSet::build(2, 1000.0, 2.0, 0.677, SetVariant::Standard)?;
    let erh = SievePrimeSet::build(2, 1000.0, 2.0, 0.677, SetVariant::ErhStyle)?;
    println!("|L_1000| = {} ({} with large order), |L| ln z / z = {:.3}", set.len(), erh.len(), set.density_constant());
    print!("{}", set.export().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    for z in [10_000, 100_000, 1_000_000] {
        let r = density_report(2, z, 0.677)?;
        println!(
            "z = {z}: P+(l-1) >= l^alpha for {:.4} of primes, order >= l^alpha for {:.4}",
            r.ratio_alpha, r.ratio_order
        );
    }

    let p = pi_progression(1e6, 12, 1)?;
    println!("pi(10^6; 12, 1) = {}, normalized {:.3}", p.count, p.ratio);
    let e = euler_sum(1e6)?;
    println!("sum n/phi(n)^2 to 10^6 = {:.4}, over ln t {:.4}", e.sum, e.ratio);
    Ok(())
}
