//! One square-sieve run: detector values, the exceptional set, the certificate
//! inequality and the pair diagnostics.

use quadsieve::harvest::{SetVariant, SievePrimeSet};
use quadsieve::sieve::{diagnostics, sieve_run};
use quadsieve::SequenceSpec;

fn main() -> quadsieve::Result<()> {
    let spec = SequenceSpec::shanks();
    let set = SievePrimeSet::build(2, 100.0, 2.0, 0.677, SetVariant::Standard)?;
    println!("sieve primes: {:?}", set.primes().collect::<Vec<_>>());

    let run = sieve_run(&spec, 0, 200, 17, &set)?;
    let c = &run.certificate;
    println!("D(1) = {} (|L| = {}), omega(17 u(1)) = {}", run.detector[&1], set.len(), run.omega[&1]);
    println!("|E_z| = {}, ratio {:.3}", run.partition.exceptional.len(), run.partition.exceptional_ratio);
    println!("certificate: {} <= {:.3} ({})", c.lhs, c.rhs, c.holds);

    let d = diagnostics(&spec, 0, 200, 17, &set)?;
    println!("U = {}, V = {}, W = {}, T = {}, Q = {}", d.u, d.v, d.w, d.t, d.q);
    println!("gcd bound holds on every pair: {} (max gcd {})", d.gcd_bound_holds, d.max_gcd);
    Ok(())
}
