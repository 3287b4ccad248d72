//! Radius list decoding and failure accounting.
//!
//! cargo run --example list_decoding

use noisy_codes::bitspace::{make_code, BitVector, CodeKind};
use noisy_codes::listdecode::{
    decode, rs22_lower_bound, simulate, theoretical_list_size, DecoderConfig,
};

fn main() -> noisy_codes::Result<()> {
    let code = make_code(CodeKind::ReedMuller { r: 1, m: 4 })?;
    let cfg = DecoderConfig::new(code.n(), 0.1, 0.1, 4)?;
    let y: BitVector = "1101000000000000".parse()?;
    let out = decode(&y, &code, &cfg)?;
    println!(
        "radius {:.3}: {} candidates within, kept {}",
        cfg.radius(),
        out.qualifying,
        out.list.len()
    );
    for w in &out.list {
        println!("  {w}  d={}", w.distance(&y)?);
    }

    // At n = 16 the n^{3/4} slack exceeds the minimum distance, so nearly every
    // output has more candidates than the cap and truncation dominates.
    for eps in [0.05, 0.1, 0.2] {
        let cap = theoretical_list_size(code.rate(), eps, 0.1, code.n())?.min(code.size() as u64)
            as usize;
        let cfg = DecoderConfig::new(code.n(), eps, 0.1, cap.max(1))?;
        let s = simulate(&code, &cfg, 50_000, 42)?;
        println!(
            "eps={eps}: cap {cap}, error {:.4} +/- {:.4}, heavy noise {}, truncations {}, unexplained {}",
            s.error_rate, s.std_err, s.heavy_noise, s.truncations, s.unexplained_failures
        );
    }

    let b = rs22_lower_bound(0.5, 0.1, 2000)?;
    println!(
        "log2 list-size lower bound at R=0.5, eps=0.1, n=2000: {:.2} (in range: {})",
        b.exponent, b.in_hypothesis
    );
    Ok(())
}
