//! Exact census of the fields Q(sqrt(u(n))) for the Shanks sequence (2^n + 3)^2 - 8.

use quadsieve::census::{count_q, count_q_total, distinct_fields, squarefree_kernel};
use quadsieve::SequenceSpec;

fn main() -> quadsieve::Result<()> {
    let shanks = SequenceSpec::shanks();
    for n in 1..=8 {
        let u = shanks.u_eval(n);
        let k = squarefree_kernel(&u, 1_000_000)?;
        println!("u({n}) = {u}, kernel {} ({})", k.kernel, if k.complete { "exact" } else { "lower bound" });
    }

    println!("Q(0, 10; 17) = {}", count_q(&shanks, 0, 10, 17)?);

    let total = count_q_total(&shanks, 0, 40, 10_000)?;
    println!("sum over s <= 10^4: {}", serde_json::to_string(&total.to_json()).unwrap());

    let fields = distinct_fields(&shanks, 1000, 60)?;
    println!("distinct fields for n in [1001, 1060]: {} of 60", fields.classes.len());
    Ok(())
}
