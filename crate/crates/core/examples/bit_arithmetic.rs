//! Vectors, projections, and the built-in code families.
//!
//! cargo run --example bit_arithmetic

use noisy_codes::bitspace::{make_code, BitVector, CodeKind, SubsetMask};

fn main() -> noisy_codes::Result<()> {
    let x: BitVector = "1011".parse()?;
    let y: BitVector = "0110".parse()?;
    println!("{x} + {y} = {}", x.add(&y)?);
    println!("d({x}, {y}) = {}", x.distance(&y)?);

    let s = SubsetMask::from_coords(4, &[0, 2])?;
    println!("{x} restricted to {{0, 2}} = {}", x.project(&s)?);

    for kind in [
        "repetition(5)",
        "parity(4)",
        "hamming74",
        "reed_muller(1,3)",
        "random_linear(10,4,7)",
    ] {
        let code = make_code(kind.parse::<CodeKind>()?)?;
        println!(
            "{:<24} n={:<3} |C|={:<4} rate={:.3}",
            code.id(),
            code.n(),
            code.size(),
            code.rate()
        );
    }

    let hamming = make_code(CodeKind::Hamming74)?;
    let first: Vec<String> = hamming.codewords().take(4).map(|w| w.to_string()).collect();
    println!("first hamming codewords: {}", first.join(" "));
    Ok(())
}
