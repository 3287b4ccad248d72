//! Rényi entropies of distributions and of code distribution functions.
//!
//! cargo run --example renyi_entropies

use noisy_codes::bitspace::{make_code, CodeKind};
use noisy_codes::boolfn::{
    binary_entropy, h_q, renyi_entropy, BooleanFunction, Distribution, RenyiOrder,
};

fn main() -> noisy_codes::Result<()> {
    let p = Distribution::new(vec![0.5, 0.25, 0.125, 0.125])?;
    for q in ["1", "2", "4", "inf"] {
        let order: RenyiOrder = q.parse()?;
        println!("H_{q}(p) = {:.6}", renyi_entropy(&p, order));
    }

    let eps = 0.11;
    println!("h({eps}) = {:.6}", binary_entropy(eps));
    for q in [2.0, 3.0] {
        println!("h_{q}({eps}) = {:.6}", h_q(eps, RenyiOrder::new(q)?)?);
    }

    // f_X = 2^n Pr[X = x]; Ent[f_X] = n - H(X).
    let code = make_code(CodeKind::ReedMuller { r: 1, m: 4 })?;
    let f = BooleanFunction::from_code(&code)?;
    println!(
        "{}: E f = {}, ||f||_2 = {:.3}, Ent[f] = {:.3}, H_2 = {:.3}",
        code.id(),
        f.mean(),
        f.norm(RenyiOrder::Finite(2.0)),
        f.ent(),
        f.renyi_entropy(RenyiOrder::Finite(2.0))
    );
    Ok(())
}
