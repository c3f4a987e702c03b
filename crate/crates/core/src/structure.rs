//! Free-product structure of the generated group.
//!
//! Each building block contributes a fixed set of independent generators:
//! an involution, an element of order 3, hyperbolic elements of determinant
//! +1 or -1. This module classifies generators by exact matrix powers,
//! totals the contributions of a block sequence, checks the admissibility
//! constraints on the totals, re-evaluates the printed elimination
//! identities, searches for short relations among designated generators and
//! synthesizes block sequences for a requested structure.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use thiserror::Error;

use crate::gl2::{IntMat2, ProjMat2};
use crate::involution::{
    block, sigma, sigma_star, BuildingBlock, CaseId, InvolutionError, InvolutionWindow,
};
use crate::neumann::bfs_enumerate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("block case {case} at base {base} is not part of the window")]
    UnknownBlock { case: CaseId, base: i64 },
    #[error(transparent)]
    Window(#[from] InvolutionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenClass {
    Identity,
    Order2,
    Order3,
    /// Infinite order, determinant +1.
    InfinitePlus,
    /// Infinite order, determinant -1.
    InfiniteMinus,
}

impl GenClass {
    pub fn is_torsion(self) -> bool {
        matches!(self, GenClass::Order2 | GenClass::Order3)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, GenClass::InfinitePlus | GenClass::InfiniteMinus)
    }
}

impl fmt::Display for GenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GenClass::Identity => "identity",
            GenClass::Order2 => "order2",
            GenClass::Order3 => "order3",
            GenClass::InfinitePlus => "infinite+",
            GenClass::InfiniteMinus => "infinite-",
        };
        f.write_str(s)
    }
}

/// Element orders in PGL(2,Z) are 1, 2, 3 or infinite, so two powers decide.
pub fn classify_element(x: &ProjMat2) -> GenClass {
    if x.is_identity() {
        return GenClass::Identity;
    }
    let sq = x.compose(x);
    if sq.is_identity() {
        GenClass::Order2
    } else if sq.compose(x).is_identity() {
        GenClass::Order3
    } else if x.det() == 1 {
        GenClass::InfinitePlus
    } else {
        GenClass::InfiniteMinus
    }
}

/// Torsion of determinant +1 with `|trace| < 2`.
pub fn is_elliptic(x: &ProjMat2) -> bool {
    let t = x.rep().trace();
    x.det() == 1 && t > BigInt::from(-2) && t < BigInt::from(2)
}

/// `(r2, r3, r∞+, r∞-)`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct StructureCounts {
    pub r2: u64,
    pub r3: u64,
    pub rinf_plus: u64,
    pub rinf_minus: u64,
}

impl StructureCounts {
    pub const fn new(r2: u64, r3: u64, rinf_plus: u64, rinf_minus: u64) -> Self {
        StructureCounts {
            r2,
            r3,
            rinf_plus,
            rinf_minus,
        }
    }

    pub fn of_case(case: CaseId) -> Self {
        match case.get() {
            1 => StructureCounts::new(1, 0, 0, 0),
            2 => StructureCounts::new(0, 1, 0, 0),
            3 => StructureCounts::new(0, 0, 2, 0),
            4 => StructureCounts::new(1, 0, 0, 1),
            5 => StructureCounts::new(0, 1, 0, 1),
            _ => StructureCounts::new(0, 0, 2, 1),
        }
    }

    pub fn rinf(&self) -> u64 {
        self.rinf_plus + self.rinf_minus
    }

    /// `r∞+` even, and `r∞- >= 1` unless the group lies in the modular
    /// group (no determinant -1 generators at all).
    pub fn constraint2(&self) -> bool {
        self.rinf_plus.is_multiple_of(2)
    }

    /// `r2 + r3 + r∞+/2 >= r∞-`
    pub fn constraint3(&self) -> bool {
        2 * (self.r2 + self.r3) + self.rinf_plus >= 2 * self.rinf_minus
    }

    pub fn in_modular_group(&self) -> bool {
        self.rinf_minus == 0
    }
}

impl Add for StructureCounts {
    type Output = StructureCounts;

    fn add(self, o: StructureCounts) -> StructureCounts {
        StructureCounts::new(
            self.r2 + o.r2,
            self.r3 + o.r3,
            self.rinf_plus + o.rinf_plus,
            self.rinf_minus + o.rinf_minus,
        )
    }
}

impl AddAssign for StructureCounts {
    fn add_assign(&mut self, o: StructureCounts) {
        *self = *self + o;
    }
}

impl fmt::Display for StructureCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.r2, self.r3, self.rinf_plus, self.rinf_minus
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub totals: StructureCounts,
    pub per_block: Vec<(CaseId, StructureCounts)>,
    pub constraint2: bool,
    pub constraint3: bool,
    /// Every designated torsion generator is elliptic. Informational.
    pub elliptic: bool,
}

impl StructureReport {
    /// `(2·r2, 2·r3, 2·r∞ - 1)` for the determinant +1 part, when some
    /// generator has determinant -1.
    pub fn index_two_structure(&self) -> Option<(u64, u64, u64)> {
        let t = &self.totals;
        (!t.in_modular_group()).then(|| (2 * t.r2, 2 * t.r3, 2 * t.rinf() - 1))
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = |b: bool| if b { "ok" } else { "fail" };
        let t = &self.totals;
        writeln!(f, "r2 {}", t.r2)?;
        writeln!(f, "r3 {}", t.r3)?;
        writeln!(f, "rinf_plus {}", t.rinf_plus)?;
        writeln!(f, "rinf_minus {}", t.rinf_minus)?;
        for (case, c) in &self.per_block {
            writeln!(f, "block {case} {c}")?;
        }
        writeln!(f, "constraint1 prefix-only")?;
        writeln!(f, "constraint2 {}", ok(self.constraint2))?;
        writeln!(f, "constraint3 {}", ok(self.constraint3))?;
        writeln!(f, "elliptic {}", ok(self.elliptic))?;
        writeln!(
            f,
            "in_modular_group {}",
            if t.in_modular_group() { "yes" } else { "no" }
        )?;
        if let Some((a, b, c)) = self.index_two_structure() {
            writeln!(f, "s_structure {a} {b} {c}")?;
        }
        Ok(())
    }
}

/// Totals over a finite block sequence. The infinitude condition on the
/// full structure is a property of the infinite sequence and is reported as
/// prefix-only.
pub fn structure_report(cases: &[CaseId]) -> StructureReport {
    let per_block: Vec<_> = cases
        .iter()
        .map(|&c| (c, StructureCounts::of_case(c)))
        .collect();
    let totals = per_block
        .iter()
        .fold(StructureCounts::default(), |acc, (_, c)| acc + *c);
    let elliptic = cases.iter().all(|&case| {
        let b = block(case, 0);
        let w = b.to_window();
        designated_offsets(case).iter().all(|&(off, _)| {
            let x = sigma(&w, off).expect("designated index inside its block");
            !classify_element(&x).is_torsion() || is_elliptic(&x)
        })
    });
    StructureReport {
        totals,
        per_block,
        constraint2: totals.constraint2(),
        constraint3: totals.constraint3(),
        elliptic,
    }
}

/// Offsets of the independent generators a block delivers, with the class
/// each one must have.
pub fn designated_offsets(case: CaseId) -> &'static [(i64, GenClass)] {
    use GenClass::*;
    match case.get() {
        1 => &[(0, Order2)],
        2 => &[(0, Order3)],
        3 => &[(1, InfinitePlus), (2, InfinitePlus)],
        4 => &[(1, InfiniteMinus), (2, Order2)],
        5 => &[(1, InfiniteMinus), (2, Order3)],
        _ => &[(1, InfiniteMinus), (3, InfinitePlus), (4, InfinitePlus)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignatedGenerator {
    pub index: i64,
    pub element: ProjMat2,
    pub class: GenClass,
    pub expected: GenClass,
}

impl DesignatedGenerator {
    pub fn matches(&self) -> bool {
        self.class == self.expected
    }
}

fn ensure_member(w: &InvolutionWindow, b: &BuildingBlock) -> Result<(), StructureError> {
    if w.blocks().contains(b) {
        Ok(())
    } else {
        Err(StructureError::UnknownBlock {
            case: b.case(),
            base: b.base(),
        })
    }
}

pub fn independent_generators(
    w: &InvolutionWindow,
    b: &BuildingBlock,
) -> Result<Vec<DesignatedGenerator>, StructureError> {
    ensure_member(w, b)?;
    designated_offsets(b.case())
        .iter()
        .map(|&(off, expected)| {
            let index = b.base() + off;
            let element = sigma(w, index)?;
            Ok(DesignatedGenerator {
                index,
                class: classify_element(&element),
                element,
                expected,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: String,
    pub product: IntMat2,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, relation: impl FnOnce() -> String, product: IntMat2, expected_sign: i32) {
        self.checked += 1;
        if product.scalar_sign() != Some(expected_sign) {
            self.failures.push(RelationFailure {
                relation: relation(),
                product,
            });
        }
    }

    fn record_projective(
        &mut self,
        relation: impl FnOnce() -> String,
        lhs: &ProjMat2,
        rhs: &ProjMat2,
    ) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(RelationFailure {
                relation: relation(),
                product: lhs.compose(&rhs.inverse()).into_rep(),
            });
        }
    }
}

/// `σ_n* σ_ι(n)* = -δ_n I*` and
/// `σ_n* σ_{ι(n)-εδ_n}* σ_ι(n+ε)* = εδ_nδ_{n+ε} I*` for every in-window
/// instance. The sign-exact form implies the projective one.
pub fn check_relations(w: &InvolutionWindow) -> RelationReport {
    let mut report = RelationReport::default();
    for n in w.indices() {
        let dn = i32::from(w.delta(n).expect("in window"));
        match w.iota(n).and_then(|m| sigma_star(w, m)) {
            Ok(partner) => {
                let p = &sigma_star(w, n).expect("in window") * &partner;
                report.record(|| format!("s{n} s_iota({n})"), p, -dn);
            }
            Err(_) => report.skipped += 1,
        }
        for eps in [1i64, -1] {
            let lookup = || -> Result<(IntMat2, i64, i32), InvolutionError> {
                let mid = w.iota(n)? - eps * i64::from(dn);
                let next = w.iota(n + eps)?;
                let d_next = i32::from(w.delta(n + eps)?);
                let p = &(&sigma_star(w, n)? * &sigma_star(w, mid)?) * &sigma_star(w, next)?;
                Ok((p, mid, d_next))
            };
            match lookup() {
                Ok((p, mid, d_next)) => {
                    let sign = eps as i32 * dn * d_next;
                    report.record(|| format!("s{n} s{mid} s_iota({})", n + eps), p, sign);
                }
                Err(_) => report.skipped += 1,
            }
        }
    }
    report
}

/// `σ_n⁻¹ σ_{n+1} = σ_{ι(n)-δ_n}` wherever all three are in the window.
pub fn check_neighbor_identity(w: &InvolutionWindow) -> RelationReport {
    let mut report = RelationReport::default();
    for n in w.indices() {
        let lookup = || -> Result<(ProjMat2, ProjMat2, i64), InvolutionError> {
            let m = w.iota(n)? - i64::from(w.delta(n)?);
            let lhs = sigma(w, n)?.inverse().compose(&sigma(w, n + 1)?);
            Ok((lhs, sigma(w, m)?, m))
        };
        match lookup() {
            Ok((lhs, rhs, m)) => {
                report.record_projective(|| format!("s{n}^-1 s{} = s{m}", n + 1), &lhs, &rhs)
            }
            Err(_) => report.skipped += 1,
        }
    }
    report
}

/// For in-window `k, l`: `σ_k⁻¹ σ_l` equals some in-window `σ_m` exactly
/// when `|k - l| = 1`. Pairs whose candidate `m` falls outside the window
/// are skipped.
pub fn membership_scan(w: &InvolutionWindow) -> RelationReport {
    let mut report = RelationReport::default();
    let gens: Vec<ProjMat2> = w
        .indices()
        .map(|n| sigma(w, n).expect("in window"))
        .collect();
    let at = |n: i64| &gens[(n - w.lo()) as usize];
    for k in w.indices() {
        let inv = at(k).inverse();
        for l in w.indices() {
            let y = inv.compose(at(l));
            let col = y.at_infinity();
            let member = match col.as_integer().map(i64::try_from) {
                Some(Ok(m)) if w.contains(m) => at(m) == &y,
                Some(_) => {
                    report.skipped += 1;
                    continue;
                }
                None => false,
            };
            report.checked += 1;
            if member != ((k - l).abs() == 1) {
                report.failures.push(RelationFailure {
                    relation: format!("s{k}^-1 s{l} member={member}"),
                    product: y.into_rep(),
                });
            }
        }
    }
    report
}

/// The relations introduced by each `⊔`-join: with left operand ending at
/// `s - 1`, right operand starting at `s` and new outer pair `(a, b)`,
/// `σ_a = σ_{a+1} σ_s`, `σ_{s-1} = σ_s σ_b`, `σ_{b-1} = σ_b σ_{a+1}` and
/// `σ_a σ_b = 1`.
pub fn check_join_relations(w: &InvolutionWindow) -> RelationReport {
    let mut report = RelationReport::default();
    for j in w.joins() {
        let (a, b) = j.outer;
        let s = j.seam;
        let triples = [(a, a + 1, s), (s - 1, s, b), (b - 1, b, a + 1)];
        for (x, y, z) in triples {
            match (sigma(w, x), sigma(w, y), sigma(w, z)) {
                (Ok(x_), Ok(y_), Ok(z_)) => {
                    report.record_projective(|| format!("s{x} = s{y} s{z}"), &x_, &y_.compose(&z_))
                }
                _ => report.skipped += 1,
            }
        }
        match (sigma(w, a), sigma(w, b)) {
            (Ok(x), Ok(y)) => report.record_projective(
                || format!("s{a} s{b} = 1"),
                &x.compose(&y),
                &ProjMat2::identity(),
            ),
            _ => report.skipped += 1,
        }
    }
    report
}

/// A letter `σ_{k+offset}^exp` of an elimination identity.
type Letter = (i64, i8);

/// The elimination identities of a block: `σ_{k+lhs} = word`.
pub fn elimination_identities(case: CaseId) -> &'static [(i64, &'static [Letter])] {
    match case.get() {
        3 => &[
            (3, &[(1, -1), (2, 1)]),
            (5, &[(2, -1), (1, -1), (2, 1)]),
            (0, &[(1, 1), (2, -1), (1, -1), (2, 1)]),
        ],
        4 => &[(3, &[(2, 1), (1, 1)]), (0, &[(1, 1), (2, 1), (1, 1)])],
        5 => &[(4, &[(2, -1), (1, 1)]), (0, &[(1, 1), (2, -1), (1, 1)])],
        6 => &[(12, &[(2, -1), (1, 1)]), (0, &[(1, 1), (12, 1)])],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TietzeVerdict {
    pub identity: String,
    pub holds: bool,
}

fn describe_identity(k: i64, lhs: i64, word: &[Letter]) -> String {
    let rhs: Vec<String> = word
        .iter()
        .map(|&(off, e)| {
            if e == 1 {
                format!("s{}", k + off)
            } else {
                format!("s{}^{}", k + off, e)
            }
        })
        .collect();
    format!("s{} = {}", k + lhs, rhs.join(" "))
}

/// Evaluates every elimination identity of the block exactly. Discrepancies
/// are reported as `holds: false`, never corrected.
pub fn check_tietze(
    b: &BuildingBlock,
    w: &InvolutionWindow,
) -> Result<Vec<TietzeVerdict>, StructureError> {
    ensure_member(w, b)?;
    let k = b.base();
    elimination_identities(b.case())
        .iter()
        .map(|&(lhs, word)| {
            let mut rhs = ProjMat2::identity();
            for &(off, e) in word {
                rhs = rhs.compose(&sigma(w, k + off)?.pow(e.into()));
            }
            Ok(TietzeVerdict {
                identity: describe_identity(k, lhs, word),
                holds: sigma(w, k + lhs)? == rhs,
            })
        })
        .collect()
}

/// Outcome of a bounded search for relations among generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceOutcome {
    pub max_len: usize,
    pub words_checked: u64,
    /// A reduced word equal to the identity, as `(generator, exponent)`.
    pub relation: Option<Vec<(usize, i8)>>,
}

impl IndependenceOutcome {
    pub fn independent(&self) -> bool {
        self.relation.is_none()
    }
}

/// Searches all nonempty reduced words of length at most `max_len`.
///
/// Letters are `x` for order-2 generators, `x, x²` for order-3 ones and
/// `x, x⁻¹` for the rest. A word is reduced when no two adjacent letters
/// belong to the same torsion generator and no infinite-order letter is
/// followed by its inverse.
pub fn find_relation(gens: &[(ProjMat2, GenClass)], max_len: usize) -> IndependenceOutcome {
    struct Letter {
        gen: usize,
        exp: i8,
        infinite: bool,
        m: IntMat2,
    }
    let mut letters = Vec::new();
    for (i, (x, class)) in gens.iter().enumerate() {
        let exps: &[i8] = match class {
            GenClass::Identity | GenClass::Order2 => &[1],
            GenClass::Order3 => &[1, 2],
            GenClass::InfinitePlus | GenClass::InfiniteMinus => &[1, -1],
        };
        for &e in exps {
            letters.push(Letter {
                gen: i,
                exp: e,
                infinite: class.is_infinite(),
                m: x.pow(e.into()).into_rep(),
            });
        }
    }
    let allowed = |prev: &Letter, next: &Letter| {
        prev.gen != next.gen || (prev.infinite && prev.exp == next.exp)
    };

    let mut words_checked = 0u64;
    // Iterative DFS: stack of (letter index, product up to and including it).
    let mut path: Vec<(usize, IntMat2)> = Vec::with_capacity(max_len);
    let mut next_choice = vec![0usize; max_len + 1];
    if max_len == 0 {
        return IndependenceOutcome {
            max_len,
            words_checked,
            relation: None,
        };
    }
    loop {
        let depth = path.len();
        let choice = next_choice[depth];
        if choice >= letters.len() {
            if path.pop().is_none() {
                break;
            }
            continue;
        }
        next_choice[depth] += 1;
        if let Some((prev, _)) = path.last() {
            if !allowed(&letters[*prev], &letters[choice]) {
                continue;
            }
        }
        let product = match path.last() {
            Some((_, p)) => p * &letters[choice].m,
            None => letters[choice].m.clone(),
        };
        words_checked += 1;
        if product.scalar_sign().is_some() {
            path.push((choice, product));
            let relation = path
                .iter()
                .map(|(i, _)| (letters[*i].gen, letters[*i].exp))
                .collect();
            return IndependenceOutcome {
                max_len,
                words_checked,
                relation: Some(relation),
            };
        }
        if depth + 1 < max_len {
            path.push((choice, product));
            next_choice[depth + 1] = 0;
        }
    }
    IndependenceOutcome {
        max_len,
        words_checked,
        relation: None,
    }
}

/// True iff no nonempty reduced word of length at most `max_len` is trivial.
pub fn check_independence(gens: &[(ProjMat2, GenClass)], max_len: usize) -> bool {
    find_relation(gens, max_len).independent()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SIntersectionReport {
    pub index_two: bool,
    pub note: String,
    pub ball_size: usize,
    pub det_plus: usize,
    pub det_minus: usize,
    pub multiplicative: bool,
    pub plus_closed: bool,
    /// Index `a` of the determinant -1 generator used as `α = σ_a`.
    pub alpha_index: Option<i64>,
    pub sample_generators: Vec<(String, ProjMat2)>,
    /// `|αD ∪ Dα⁻¹ \ {I}|` for `D` the determinant -1 generators.
    pub negative_products: usize,
}

/// Determinant character on a bounded Cayley ball, and the generating set
/// `{σ_n, ασ_nα⁻¹ : δ_n = 1} ∪ {ασ_n, σ_nα⁻¹ : δ_n = -1}` of the
/// determinant +1 subgroup.
pub fn s_intersection_report(w: &InvolutionWindow, max_len: usize) -> SIntersectionReport {
    let alpha_index = w.indices().find(|&n| w.delta(n) == Ok(-1));
    let Some(a) = alpha_index else {
        return SIntersectionReport {
            index_two: false,
            note: "all generators have determinant +1; the group lies in the modular group".into(),
            ball_size: 0,
            det_plus: 0,
            det_minus: 0,
            multiplicative: true,
            plus_closed: true,
            alpha_index: None,
            sample_generators: Vec::new(),
            negative_products: 0,
        };
    };

    let ball = bfs_enumerate(w, max_len);
    let mut by_level: Vec<Vec<&ProjMat2>> = vec![Vec::new(); max_len + 1];
    for (x, l) in ball.iter() {
        by_level[l].push(x);
    }
    let det_plus = ball.elements().filter(|x| x.det() == 1).count();
    let det_minus = ball.len() - det_plus;
    let mut multiplicative = true;
    let mut plus_closed = true;
    for i in 0..=max_len {
        for j in 0..=(max_len - i) {
            for x in &by_level[i] {
                for y in &by_level[j] {
                    let xy = x.compose(y);
                    if xy.det() != x.det() * y.det() {
                        multiplicative = false;
                    }
                    if x.det() == 1 && y.det() == 1 && !(ball.contains(&xy) && xy.det() == 1) {
                        plus_closed = false;
                    }
                }
            }
        }
    }

    let alpha = sigma(w, a).expect("in window");
    let alpha_inv = alpha.inverse();
    let mut sample_generators = Vec::new();
    let mut negative = HashSet::new();
    for n in w.indices() {
        let s = sigma(w, n).expect("in window");
        let candidates = if w.delta(n) == Ok(1) {
            vec![
                (format!("s{n}"), s.clone()),
                (
                    format!("s{a} s{n} s{a}^-1"),
                    alpha.compose(&s).compose(&alpha_inv),
                ),
            ]
        } else {
            let left = alpha.compose(&s);
            let right = s.compose(&alpha_inv);
            for x in [&left, &right] {
                if !x.is_identity() {
                    negative.insert(x.clone());
                }
            }
            vec![
                (format!("s{a} s{n}"), left),
                (format!("s{n} s{a}^-1"), right),
            ]
        };
        sample_generators.extend(candidates.into_iter().filter(|(_, x)| !x.is_identity()));
    }

    let index_two = det_plus > 0 && det_minus > 0 && multiplicative && plus_closed;
    SIntersectionReport {
        index_two,
        note: format!("alpha = s{a}; checked on words of length <= {max_len}"),
        ball_size: ball.len(),
        det_plus,
        det_minus,
        multiplicative,
        plus_closed,
        alpha_index,
        sample_generators,
        negative_products: negative.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("target structure {0} is not admissible: {1}")]
    Unrealizable(StructureCounts, &'static str),
    #[error("target needs {needed} blocks, only {requested} requested")]
    TooFewBlocks { needed: usize, requested: usize },
}

/// A block sequence whose first `exact_prefix` blocks realize the target
/// exactly; the rest is padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesis {
    pub cases: Vec<CaseId>,
    pub exact_prefix: usize,
}

impl Synthesis {
    pub fn prefix(&self) -> &[CaseId] {
        &self.cases[..self.exact_prefix]
    }

    pub fn padding(&self) -> &[CaseId] {
        &self.cases[self.exact_prefix..]
    }
}

/// Greedy construction: each determinant -1 generator comes from a block
/// that also supplies an order-2 generator (case 4), else an order-3 one
/// (case 5), else two hyperbolic ones (case 6); the remainders come from
/// cases 1, 2 and 3.
pub fn synthesize_blocks(
    target: StructureCounts,
    pad: CaseId,
    n_blocks: usize,
) -> Result<Synthesis, SynthesisError> {
    if !target.constraint2() {
        return Err(SynthesisError::Unrealizable(
            target,
            "the number of determinant +1 free generators must be even",
        ));
    }
    if !target.constraint3() {
        return Err(SynthesisError::Unrealizable(
            target,
            "r2 + r3 + rinf_plus/2 must be at least rinf_minus",
        ));
    }
    let case = |id| CaseId::new(id).expect("valid case");
    let mut left = target;
    let mut cases = Vec::new();
    for _ in 0..target.rinf_minus {
        if left.r2 > 0 {
            left.r2 -= 1;
            cases.push(case(4));
        } else if left.r3 > 0 {
            left.r3 -= 1;
            cases.push(case(5));
        } else {
            left.rinf_plus -= 2;
            cases.push(case(6));
        }
    }
    cases.extend(std::iter::repeat_n(case(1), left.r2 as usize));
    cases.extend(std::iter::repeat_n(case(2), left.r3 as usize));
    cases.extend(std::iter::repeat_n(case(3), (left.rinf_plus / 2) as usize));
    let needed = cases.len();
    if n_blocks < needed {
        return Err(SynthesisError::TooFewBlocks {
            needed,
            requested: n_blocks,
        });
    }
    cases.resize(n_blocks, pad);
    Ok(Synthesis {
        cases,
        exact_prefix: needed,
    })
}
