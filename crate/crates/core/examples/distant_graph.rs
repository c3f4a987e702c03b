//! The distant graph of height at most 3: cliques, harmonic quadruples,
//! automorphisms and the comparison with a Cayley graph.
//!
//!     cargo run --example distant_graph > graph.dot

use neumann::gl2::{PVertex, ProjMat2};
use neumann::graph::{cayley_vs_distant, clique_transitivity_map, DistantGraph};
use neumann::involution::assemble_ids;

fn main() {
    let g = DistantGraph::build(3).unwrap();
    eprintln!("{} vertices, {} edges", g.vertex_count(), g.edge_count());

    let v = |p: i64, q: i64| PVertex::new(p, q).unwrap();
    let (u, w) = (v(1, 1), v(2, 1));
    for c in g.maximal_cliques_of_edge(&u, &w).unwrap() {
        eprintln!(
            "clique on {u} {w}: third vertex {} (in range: {})",
            c.vertex, c.in_range
        );
    }

    let base = [v(1, 0), v(0, 1), v(1, 1)];
    let chain = g.harmonic_chain(&base, &v(3, 2)).unwrap();
    eprintln!(
        "chain of {} harmonic quadruple(s) from the base clique to 3/2",
        chain.len()
    );
    for q in &chain {
        let labels: Vec<String> = q.iter().map(PVertex::label).collect();
        eprintln!("  {}", labels.join(" "));
    }

    let x = clique_transitivity_map(&base, &[v(2, 1), v(1, 1), v(3, 2)]).unwrap();
    eprintln!("map between ordered cliques: {x}");
    let y = ProjMat2::from_entries(2, 1, 3, 2).unwrap();
    eprintln!("{y} preserves adjacency: {}", g.check_automorphism(&y));

    let s = assemble_ids(&[1, 2, 3, 4, 5, 6]).unwrap();
    eprintln!(
        "Cayley graph matches at height 3: {}",
        cayley_vs_distant(&s, 3).unwrap()
    );

    print!("{}", g.to_dot());
}
