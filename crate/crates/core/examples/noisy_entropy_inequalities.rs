//! Checking the noisy-function inequalities and reading their slack.
//!
//! cargo run --example noisy_entropy_inequalities

use noisy_codes::bitspace::{make_code, CodeKind};
use noisy_codes::corpus::standard_corpus;
use noisy_codes::inequalities::{
    check_bsc_bec, check_cor_rv, check_cor_rv_entropy, Battery, Checker,
};

fn main() -> noisy_codes::Result<()> {
    let code = make_code(CodeKind::Hamming74)?;
    for q in [2, 3, 4] {
        let r = check_cor_rv(&code, 0.1, q)?;
        println!(
            "cor_rv q={q}: {:.5} <= {:.5} (slack {:.2e})",
            r.lhs, r.rhs, r.slack
        );
    }
    let r = check_cor_rv_entropy(&code, 0.1)?;
    println!("cor_rv_entropy: slack {:.2e}", r.slack);

    match check_bsc_bec(&code, 0.1, 0.5) {
        Ok(r) => println!("bsc_bec: slack {:.2e}", r.slack),
        Err(e) => println!("bsc_bec not applicable: {e}"),
    }

    let battery = Battery {
        eps: vec![0.1, 0.3],
        eta: vec![0.25, 0.5],
        q: vec![2, 3],
        checker: Checker::default(),
    };
    let (rows, summary) = battery.run(&standard_corpus()?)?;
    println!(
        "battery: {} rows, {} failures, {} skipped, min slack {:.2e} at {}",
        rows.len(),
        summary.failures,
        summary.skipped,
        summary.min_slack.unwrap_or(f64::NAN),
        summary.argmin.as_deref().unwrap_or("-")
    );
    Ok(())
}
