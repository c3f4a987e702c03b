//! Builds a window from building blocks, checks the involution conditions
//! and prints the generators `σ_n`.
//!
//!     cargo run --example build_involution -- 3 1 4

use neumann::involution::{assemble, sigma, sigma_star, validate, CaseId};

fn main() {
    let ids: Vec<u8> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("case ids are integers 1-6"))
        .collect();
    let ids = if ids.is_empty() { vec![3, 1, 4] } else { ids };
    let cases: Vec<CaseId> = ids
        .iter()
        .map(|&i| CaseId::new(i).expect("case ids are 1-6"))
        .collect();

    let w = assemble(&cases).expect("blocks always join");
    println!("window {}..{} ({} generators)", w.lo(), w.hi(), w.len());
    for b in w.blocks() {
        println!(
            "  case {} at base {}, indices {}..{}",
            b.case(),
            b.base(),
            b.lo(),
            b.hi()
        );
    }
    for j in w.joins() {
        println!("  join: outer pair {:?}, seam at {}", j.outer, j.seam);
    }
    print!("{}", validate(&w));

    println!("\n  n  iota delta  sigma*_n              sigma_n");
    for n in w.indices() {
        println!(
            "{n:>3} {:>5} {:>5}  {:<22} {}",
            w.iota(n).unwrap(),
            w.delta(n).unwrap(),
            sigma_star(&w, n).unwrap().to_string(),
            sigma(&w, n).unwrap()
        );
    }

    // A single wrong entry is caught.
    let n = w.lo() + 1;
    let report = validate(&w.with_entry(n, n, 1).unwrap());
    println!(
        "\nafter corrupting iota({n}): {} failures",
        report.failure_count()
    );
}
