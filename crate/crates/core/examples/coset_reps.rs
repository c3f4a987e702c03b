//! Writes group elements as `s·t` with `s` in the generated subgroup and
//! `t` one of `τ^n`, `τ^n ν`.

use neumann::gl2::{compose_all, nu, omega, tau, ProjMat2};
use neumann::involution::assemble_ids;
use neumann::neumann::{coset_decompose, elements_up_to_height};

fn main() {
    let w = assemble_ids(&[1; 12]).unwrap();
    let samples = [
        compose_all([&tau(), &omega(), &tau(), &tau()]),
        compose_all([&omega(), &nu(), &tau().inverse(), &omega()]),
        ProjMat2::from_entries(2, 3, 1, 2).unwrap(),
        ProjMat2::from_entries(3, -1, 2, -1).unwrap(),
    ];
    for g in &samples {
        let d = coset_decompose(&w, g).unwrap();
        println!("{g} = {} · {}^{}", d.s, d.kind, d.n);
        assert_eq!(d.s.compose(&d.t()), *g);
    }

    let all = elements_up_to_height(3);
    let ok = all
        .iter()
        .filter(|g| {
            coset_decompose(&w, g)
                .map(|d| d.s.compose(&d.t()) == **g)
                .unwrap_or(false)
        })
        .count();
    println!(
        "\n{ok} of {} elements of height <= 3 reconstructed exactly",
        all.len()
    );
}
