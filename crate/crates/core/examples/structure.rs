//! Free-product structure of a block sequence: generator classes, the
//! elimination identities, a bounded relation search and the determinant
//! +1 subgroup.

use neumann::involution::{assemble_ids, CaseId};
use neumann::structure::{
    check_independence, check_tietze, independent_generators, s_intersection_report,
    structure_report,
};

fn main() {
    let ids = [4, 3, 6, 2];
    let cases: Vec<CaseId> = ids.iter().map(|&i| CaseId::new(i).unwrap()).collect();
    print!("{}", structure_report(&cases));

    let w = assemble_ids(&ids).unwrap();
    for b in w.blocks() {
        println!("\ncase {} at base {}", b.case(), b.base());
        let gens = independent_generators(&w, b).unwrap();
        for g in &gens {
            println!(
                "  s{} {} (trace {})",
                g.index,
                g.class,
                g.element.rep().trace()
            );
        }
        for t in check_tietze(b, &w).unwrap() {
            println!(
                "  {} : {}",
                t.identity,
                if t.holds { "holds" } else { "fails" }
            );
        }
        let pairs: Vec<_> = gens.iter().map(|g| (g.element.clone(), g.class)).collect();
        println!(
            "  no relation up to length 6: {}",
            check_independence(&pairs, 6)
        );
    }

    let r = s_intersection_report(&assemble_ids(&[4]).unwrap(), 4);
    println!(
        "\nsingle case 4 block: {} elements up to length 4, {} of determinant +1, index two: {}",
        r.ball_size, r.det_plus, r.index_two
    );
    for (name, x) in &r.sample_generators {
        println!("  {name} = {x}");
    }
}
