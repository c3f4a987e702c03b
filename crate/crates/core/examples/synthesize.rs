//! Finds block sequences with a requested free-product structure.

use neumann::involution::{assemble, validate, CaseId};
use neumann::structure::{structure_report, synthesize_blocks, StructureCounts};

fn main() {
    let pad = CaseId::new(3).unwrap();
    let targets = [
        StructureCounts::new(1, 0, 0, 1),
        StructureCounts::new(0, 1, 2, 1),
        StructureCounts::new(2, 2, 2, 2),
        StructureCounts::new(0, 0, 4, 2),
        StructureCounts::new(0, 0, 1, 1),
        StructureCounts::new(0, 0, 0, 3),
    ];
    for t in targets {
        match synthesize_blocks(t, pad, 6) {
            Ok(s) => {
                let ids: Vec<String> = s.cases.iter().map(|c| c.to_string()).collect();
                let w = assemble(&s.cases).unwrap();
                println!(
                    "({t}) -> [{}], prefix of {} gives ({}), window valid: {}",
                    ids.join(","),
                    s.exact_prefix,
                    structure_report(s.prefix()).totals,
                    validate(&w).is_valid()
                );
            }
            Err(e) => println!("({t}) -> {e}"),
        }
    }
}
