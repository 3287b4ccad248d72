//! The noise operator and conditional expectations on the boolean cube.
//!
//! cargo run --example noise_operator

use noisy_codes::bitspace::{make_code, CodeKind, SubsetMask};
use noisy_codes::boolfn::BooleanFunction;
use noisy_codes::channels::{conditional_expectation, noise_operator, noise_operator_fast};

fn main() -> noisy_codes::Result<()> {
    let code = make_code(CodeKind::Repetition(3))?;
    let f = BooleanFunction::from_code(&code)?;
    println!("f_X        = {:?}", f.values());

    let noisy = noise_operator_fast(&f, 0.1)?;
    let rounded: Vec<String> = noisy.values().iter().map(|v| format!("{v:.4}")).collect();
    println!("T_0.1 f_X  = [{}]", rounded.join(", "));

    let direct = noise_operator(&f, 0.1)?;
    let gap = direct
        .values()
        .iter()
        .zip(noisy.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("direct vs transform: max difference {gap:.1e}");

    // Noise contracts: the 2-norm drops as eps grows.
    for eps in [0.0, 0.05, 0.1, 0.2, 0.3, 0.5] {
        let t = noise_operator_fast(&f, eps)?;
        println!("eps={eps:<4} Ent[T f] = {:.4}", t.ent());
    }

    let s = SubsetMask::from_coords(3, &[0, 2])?;
    let marginal = conditional_expectation(&f, &s)?;
    println!("E(f_X | {{0, 2}}) = {:?}", marginal.values());
    Ok(())
}
