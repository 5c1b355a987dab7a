//! Balancing increasing against decreasing powers of z, as in the proofs.

use quadsieve::bounds::{av1_system, av2_system, default_z, endgame_balance_ratio, endgame_system, grakol_optimize};

fn main() -> quadsieve::Result<()> {
    let alpha = 0.677;
    let n = 1e6;
    for (name, ts) in [
        ("endgame", endgame_system(alpha, n)?),
        ("av1", av1_system(alpha, n, 100.0)?),
        ("av2", av2_system(alpha, n, 100.0)?),
    ] {
        let r = grakol_optimize(&ts);
        println!(
            "{name}: z* = {:.4e}, B(z*) = {:.4e}, sum T = {:.4e}, guarantee {:.4e} ({})",
            r.z_star,
            r.value,
            r.t_sum(),
            r.guarantee,
            r.guarantee_holds
        );
    }
    for n in [1e3, 1e6, 1e9] {
        println!(
            "N = {n:e}: default z = {:.2}, endgame terms differ by a factor {:.3}",
            default_z(n, alpha),
            endgame_balance_ratio(n, alpha)
        );
    }
    Ok(())
}
