//! Construction and exact verification of Neumann subgroups of the extended
//! modular group PGL(2,Z).
//!
//! A Neumann subgroup contains exactly one element sending ∞ to each point of
//! Q ∪ {∞}. Such subgroups are generated by the matrices
//! `σ_n = [[n, -n·ι(n) - δ_n], [1, -ι(n)]]` attached to an involution `ι` of Z
//! with determinant marks `δ_n = ±1`. This crate builds such involutions from
//! six building blocks, emits the generators, and checks the group-theoretic
//! claims about them with exact integer arithmetic at bounded height:
//!
//! - [`gl2`]: GL(2,Z), PGL(2,Z) and the action on the projective line.
//! - [`involution`]: building blocks, the `⊔`-join, assembly, validation.
//! - [`neumann`]: the mediant descent, a breadth-first oracle, and coset
//!   decomposition against `⟨τ, ν⟩`.
//! - [`structure`]: generator classification, free-product structure counts,
//!   elimination identities, independence and block synthesis.
//! - [`graph`]: the distant graph of Z at bounded height.
//! - [`cli`]: the command-line surface and text formats.

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod gl2;
pub mod graph;
pub mod involution;
pub mod neumann;
pub mod structure;

pub use gl2::{mat, IntMat2, PVertex, ProjMat2};
pub use involution::{assemble, assemble_ids, make_block, BuildingBlock, CaseId, InvolutionWindow};
