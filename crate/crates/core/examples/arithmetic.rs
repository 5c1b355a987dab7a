//! Jacobi symbols, 64-bit factorization and multiplicative orders.

use num_bigint::BigInt;
use quadsieve::arith::{factorize, is_perfect_square, isqrt, jacobi, jacobi_big, multiplicative_order};

fn main() -> quadsieve::Result<()> {
    println!("(2/7) = {}, (3/7) = {}, (-1/13) = {}", jacobi(2, 7)?, jacobi(3, 7)?, jacobi(-1, 13)?);

    let big: BigInt = "340282366920938463463374607431768211457".parse().unwrap();
    let modulus: BigInt = "1000000000000000000000000000057".parse().unwrap();
    println!("(2^128+1 / 10^30+57) = {}", jacobi_big(&big, &modulus)?);

    for n in [600_851_475_143u64, u64::MAX, 4_294_967_291 * 4_294_967_279] {
        let f = factorize(n)?;
        let parts: Vec<String> = f.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        println!("{n} = {}", parts.join(" * "));
    }

    for (b, m) in [(2, 107), (10, 1_000_003), (3, 1 << 20)] {
        let r = multiplicative_order(b, m)?;
        println!("ord_{m}({b}) = {}", r.order);
    }

    let square = BigInt::from(3u32).pow(201) * BigInt::from(3u32).pow(201);
    println!("3^402 is a square: {}, root has {} digits", is_perfect_square(&square), isqrt(&square)?.to_string().len());
    Ok(())
}
