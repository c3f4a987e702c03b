//! Existence and uniqueness of the element sending ∞ to each vertex, for a
//! window of fixed-point blocks.
//!
//!     cargo run --release --example neumann_check -- 20

use neumann::gl2::PVertex;
use neumann::involution::assemble_ids;
use neumann::neumann::{check_neumann, descend, max_supported_height};

fn main() {
    let blocks: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("block count"))
        .unwrap_or(10);
    let w = assemble_ids(&vec![1; blocks]).unwrap();
    let h = max_supported_height(&w, 64);
    println!(
        "{blocks} fixed-point blocks, window {}..{}, supports height {h}",
        w.lo(),
        w.hi()
    );

    let report = check_neumann(&w, h);
    print!("{report}");

    let v = PVertex::new(5, 3).unwrap();
    let d = descend(&w, &v).unwrap();
    println!("\ndescent to {v}:");
    for s in &d.steps {
        println!("  {:?} + {:?} -> {:?}", s.near, s.far, s.child);
    }
    println!(
        "element {} sends ∞ to {}",
        d.element,
        d.element.at_infinity()
    );

    let small = assemble_ids(&[1, 1]).unwrap();
    let r = check_neumann(&small, 2);
    println!(
        "\ntwo blocks at height 2: {} failure(s), window-limited: {}",
        r.failures.len(),
        r.only_window_limited()
    );
}
