//! A sweep written as CSV, the same way the command-line tool does it.
//!
//! cargo run --example parameter_sweep > sweep.csv

use noisy_codes::bitspace::{make_code, CodeKind};
use noisy_codes::boolfn::RenyiOrder;
use noisy_codes::cli::{write_rows, Format};
use noisy_codes::entropy_analysis::entropy_report;

fn main() -> noisy_codes::Result<()> {
    let mut rows = Vec::new();
    for m in [3, 4] {
        let code = make_code(CodeKind::ReedMuller { r: 1, m })?;
        for i in 1..10 {
            let eps = 0.05 * i as f64;
            rows.push(entropy_report(
                &code,
                Some(eps),
                Some(4.0 * eps * (1.0 - eps)),
                RenyiOrder::Finite(2.0),
                None,
                None,
            )?);
        }
    }
    write_rows(&rows, Format::Csv, std::io::stdout().lock())
}
