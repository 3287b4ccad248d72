//! Conditional entropy after BSC(eps) and BEC(eta) side by side.
//!
//! When 4 eps (1 - eps) >= eta the erasure channel leaves at least as much
//! uncertainty as the symmetric one.
//!
//! cargo run --example bsc_vs_bec

use noisy_codes::bitspace::{make_code, CodeKind};
use noisy_codes::entropy_analysis::{cond_entropy_bec, cond_entropy_bsc, Mode};

fn main() -> noisy_codes::Result<()> {
    let codes = [
        CodeKind::Hamming74,
        CodeKind::ReedMuller { r: 1, m: 4 },
        CodeKind::Parity(8),
    ];
    println!(
        "{:<18} {:>5} {:>6} {:>10} {:>10}",
        "code", "eps", "eta", "H(X|Ybsc)", "H(X|Ybec)"
    );
    for kind in codes {
        let code = make_code(kind)?;
        for eps in [0.05, 0.1, 0.2] {
            let eta = 4.0 * eps * (1.0 - eps);
            let bsc = cond_entropy_bsc(&code, eps)?;
            let bec = cond_entropy_bec(&code, eta, Mode::Exact)?.value;
            println!(
                "{:<18} {eps:>5} {eta:>6.3} {bsc:>10.5} {bec:>10.5}",
                code.id()
            );
        }
    }

    // Past the exact cap the BEC side is estimated by sampling erasure patterns.
    let long = make_code(CodeKind::Repetition(40))?;
    let est = cond_entropy_bec(
        &long,
        0.9,
        Mode::MonteCarlo {
            trials: 20_000,
            seed: 1,
        },
    )?;
    println!(
        "{}: H(X|Ybec) ~ {:.5} +/- {:.5} (exact {:.5})",
        long.id(),
        est.value,
        est.std_err.unwrap_or(0.0),
        0.9f64.powi(40)
    );
    Ok(())
}
