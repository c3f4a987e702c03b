//! Involutions of Z with determinant marks, the six building blocks, the
//! `⊔`-join and the left-to-right assembly of block sequences.
//!
//! A window stores `ι` and `δ` on a contiguous range `{lo..=hi}`. Finite
//! windows are prefixes of an infinite involution, so conditions that refer
//! to indices outside the window are skipped rather than failed.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::gl2::{nu, omega, tau_pow, IntMat2, ProjMat2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("unknown building block case {0}, expected 1..=6")]
    BadCase(u8),
    #[error("windows are not adjacent: left ends at {left_hi}, right starts at {right_lo}")]
    NotAdjacent { left_hi: i64, right_lo: i64 },
    #[error("index {0} lies outside the window")]
    OutOfWindow(i64),
    #[error("determinant mark at {n} is {value}, expected ±1")]
    BadDelta { n: i64, value: i64 },
    #[error("window data has {iota} iota entries but {delta} delta entries")]
    LengthMismatch { iota: usize, delta: usize },
    #[error("cannot assemble an empty block sequence")]
    EmptySequence,
    #[error("window is empty")]
    EmptyWindow,
}

/// Identifier of one of the six building involutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseId(u8);

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId(1),
        CaseId(2),
        CaseId(3),
        CaseId(4),
        CaseId(5),
        CaseId(6),
    ];

    pub fn new(id: u8) -> Result<Self, InvolutionError> {
        if (1..=6).contains(&id) {
            Ok(CaseId(id))
        } else {
            Err(InvolutionError::BadCase(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// `l` in the block domain `{k..=k+l}`.
    pub fn span(self) -> i64 {
        match self.0 {
            1 => 0,
            2 => 1,
            3 => 9,
            4 => 6,
            5 => 7,
            _ => 15,
        }
    }

    /// Nontrivial pairs and fixed points as offsets from the base, plus the
    /// offsets carrying determinant -1.
    fn table(self) -> (Vec<(i64, i64)>, Vec<i64>, &'static [i64]) {
        const CASE3: [(i64, i64); 5] = [(0, 9), (1, 4), (2, 6), (3, 7), (5, 8)];
        match self.0 {
            1 => (vec![], vec![0], &[]),
            2 => (vec![(0, 1)], vec![], &[]),
            3 => (CASE3.to_vec(), vec![], &[]),
            4 => (vec![(0, 6), (1, 4), (3, 5)], vec![2], &[1, 3, 4, 5]),
            5 => (vec![(0, 7), (1, 5), (2, 3), (4, 6)], vec![], &[1, 4, 5, 6]),
            _ => {
                let mut pairs = vec![(0, 15), (1, 13), (12, 14)];
                pairs.extend(CASE3.iter().map(|&(a, b)| (a + 2, b + 2)));
                (pairs, vec![], &[1, 12, 13, 14])
            }
        }
    }
}

impl TryFrom<u8> for CaseId {
    type Error = InvolutionError;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        CaseId::new(id)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the six building involutions, placed at base `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingBlock {
    case: CaseId,
    base: i64,
    iota: Vec<i64>,
    delta: Vec<i8>,
}

impl BuildingBlock {
    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn lo(&self) -> i64 {
        self.base
    }

    pub fn hi(&self) -> i64 {
        self.base + self.case.span()
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.lo()..=self.hi()).contains(&n)
    }

    pub fn iota(&self, n: i64) -> Option<i64> {
        self.contains(n)
            .then(|| self.iota[(n - self.base) as usize])
    }

    pub fn delta(&self, n: i64) -> Option<i8> {
        self.contains(n)
            .then(|| self.delta[(n - self.base) as usize])
    }

    /// `(n, ι(n))` over the whole domain.
    pub fn table(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.iota
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.base + i as i64, m))
    }

    pub fn to_window(&self) -> InvolutionWindow {
        InvolutionWindow {
            lo: self.base,
            iota: self.iota.clone(),
            delta: self.delta.clone(),
            blocks: vec![self.clone()],
            joins: Vec::new(),
        }
    }
}

/// Builds building block `case_id` on `{k..=k+l}`.
pub fn make_block(case_id: u8, k: i64) -> Result<BuildingBlock, InvolutionError> {
    Ok(block(CaseId::new(case_id)?, k))
}

pub fn block(case: CaseId, k: i64) -> BuildingBlock {
    let l = case.span();
    let (pairs, fixed, negative) = case.table();
    let mut iota = vec![0i64; (l + 1) as usize];
    for (a, b) in pairs {
        iota[a as usize] = k + b;
        iota[b as usize] = k + a;
    }
    for f in fixed {
        iota[f as usize] = k + f;
    }
    let delta = (0..=l)
        .map(|j| if negative.contains(&j) { -1 } else { 1 })
        .collect();
    BuildingBlock {
        case,
        base: k,
        iota,
        delta,
    }
}

/// A finite contiguous piece of an involution `ι` of Z with marks `δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionWindow {
    lo: i64,
    iota: Vec<i64>,
    delta: Vec<i8>,
    blocks: Vec<BuildingBlock>,
    joins: Vec<JoinRecord>,
}

/// A `⊔`-join: the outer pair it added and the first index of its right
/// operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinRecord {
    pub outer: (i64, i64),
    pub seam: i64,
}

impl InvolutionWindow {
    /// A window with no block provenance, e.g. read from a file or built by
    /// hand. The data is not required to satisfy any condition; use
    /// [`validate`] to inspect it.
    pub fn from_maps(lo: i64, iota: Vec<i64>, delta: Vec<i64>) -> Result<Self, InvolutionError> {
        if iota.len() != delta.len() {
            return Err(InvolutionError::LengthMismatch {
                iota: iota.len(),
                delta: delta.len(),
            });
        }
        if iota.is_empty() {
            return Err(InvolutionError::EmptyWindow);
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(i, d)| match d {
                1 => Ok(1),
                -1 => Ok(-1),
                value => Err(InvolutionError::BadDelta {
                    n: lo + i as i64,
                    value,
                }),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        Ok(InvolutionWindow {
            lo,
            iota,
            delta,
            blocks: Vec::new(),
            joins: Vec::new(),
        })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.iota.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.iota.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iota.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi()
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn iota(&self, n: i64) -> Result<i64, InvolutionError> {
        if self.contains(n) {
            Ok(self.iota[(n - self.lo) as usize])
        } else {
            Err(InvolutionError::OutOfWindow(n))
        }
    }

    pub fn delta(&self, n: i64) -> Result<i8, InvolutionError> {
        if self.contains(n) {
            Ok(self.delta[(n - self.lo) as usize])
        } else {
            Err(InvolutionError::OutOfWindow(n))
        }
    }

    pub fn blocks(&self) -> &[BuildingBlock] {
        &self.blocks
    }

    /// Joins in the order they were applied, innermost first.
    pub fn joins(&self) -> &[JoinRecord] {
        &self.joins
    }

    /// Overwrites one entry without any consistency repair.
    pub fn with_entry(mut self, n: i64, iota: i64, delta: i8) -> Result<Self, InvolutionError> {
        if !self.contains(n) {
            return Err(InvolutionError::OutOfWindow(n));
        }
        if delta != 1 && delta != -1 {
            return Err(InvolutionError::BadDelta {
                n,
                value: delta.into(),
            });
        }
        let i = (n - self.lo) as usize;
        self.iota[i] = iota;
        self.delta[i] = delta;
        Ok(self)
    }

    /// Lines `n ι(n) δ_n`, sorted by `n`.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        for n in self.indices() {
            let i = (n - self.lo) as usize;
            out.push_str(&format!("{} {} {}\n", n, self.iota[i], self.delta[i]));
        }
        out
    }

    /// Inverse of [`to_canonical_string`](Self::to_canonical_string). Lines
    /// must be sorted and contiguous; blank lines and `#` comments are
    /// ignored.
    pub fn parse_canonical(text: &str) -> Result<Self, String> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<i64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            if fields.len() != 3 {
                return Err(format!("line {}: expected `n iota delta`", lineno + 1));
            }
            rows.push((fields[0], fields[1], fields[2]));
        }
        let lo = rows.first().ok_or("no window entries")?.0;
        for (i, row) in rows.iter().enumerate() {
            if row.0 != lo + i as i64 {
                return Err(format!("entry for {} out of order", row.0));
            }
        }
        InvolutionWindow::from_maps(
            lo,
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
        )
        .map_err(|e| e.to_string())
    }
}

impl From<BuildingBlock> for InvolutionWindow {
    fn from(b: BuildingBlock) -> Self {
        b.to_window()
    }
}

/// `w0 ⊔ w1`: the interiors are kept and a new outer pair
/// `w0.lo - 1 ↔ w1.hi + 1` with `δ = +1` closes the window.
pub fn join(
    w0: &InvolutionWindow,
    w1: &InvolutionWindow,
) -> Result<InvolutionWindow, InvolutionError> {
    if w1.lo != w0.hi() + 1 {
        return Err(InvolutionError::NotAdjacent {
            left_hi: w0.hi(),
            right_lo: w1.lo,
        });
    }
    let lo = w0.lo - 1;
    let hi = w1.hi() + 1;
    let mut iota = Vec::with_capacity(w0.len() + w1.len() + 2);
    iota.push(hi);
    iota.extend_from_slice(&w0.iota);
    iota.extend_from_slice(&w1.iota);
    iota.push(lo);
    let mut delta = Vec::with_capacity(iota.len());
    delta.push(1);
    delta.extend_from_slice(&w0.delta);
    delta.extend_from_slice(&w1.delta);
    delta.push(1);
    let mut blocks = w0.blocks.clone();
    blocks.extend(w1.blocks.iter().cloned());
    let mut joins = w0.joins.clone();
    joins.extend(w1.joins.iter().copied());
    joins.push(JoinRecord {
        outer: (lo, hi),
        seam: w1.lo,
    });
    Ok(InvolutionWindow {
        lo,
        iota,
        delta,
        blocks,
        joins,
    })
}

/// Bases of consecutive blocks: `k0 = -1`, `k1 = k0 + l0 + 1`,
/// `k(i+1) = k(i) + l(i) + 2` afterwards.
pub fn block_bases(cases: &[CaseId]) -> Vec<i64> {
    let mut bases = Vec::with_capacity(cases.len());
    let mut k = -1;
    for (i, case) in cases.iter().enumerate() {
        bases.push(k);
        k += case.span() + if i == 0 { 1 } else { 2 };
    }
    bases
}

/// Places the blocks and folds `⊔` left to right. With `n + 1` blocks the
/// result covers `{-n-1 ..= k_n + l_n + 1}`.
pub fn assemble(cases: &[CaseId]) -> Result<InvolutionWindow, InvolutionError> {
    let (first, rest) = cases.split_first().ok_or(InvolutionError::EmptySequence)?;
    let bases = block_bases(cases);
    let mut window = block(*first, bases[0]).to_window();
    for (case, &k) in rest.iter().zip(&bases[1..]) {
        window = join(&window, &block(*case, k).to_window())?;
    }
    Ok(window)
}

/// [`assemble`] from raw case numbers.
pub fn assemble_ids(ids: &[u8]) -> Result<InvolutionWindow, InvolutionError> {
    let cases = ids
        .iter()
        .map(|&id| CaseId::new(id))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(&cases)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaFailure {
    pub n: i64,
    pub eps: i8,
    /// `ι(ι(n) - εδ_n)`
    pub lhs: i64,
    /// `ι(n + ε) + εδ_{n+ε}`
    pub rhs: i64,
}

/// Tally of one orientation of the index condition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IotaCheck {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<IotaFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Indices where `ι(n)` leaves the window or `ι(ι(n)) != n`.
    pub involution_failures: Vec<i64>,
    /// Indices where `δ_n != δ_{ι(n)}`.
    pub delta_failures: Vec<i64>,
    /// `ι(ι(n) - δ_n) = ι(n+1) + δ_{n+1}`.
    pub forward: IotaCheck,
    /// `ι(ι(n) + δ_n) = ι(n-1) - δ_{n-1}`.
    pub backward: IotaCheck,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.involution_failures.is_empty()
            && self.delta_failures.is_empty()
            && self.forward.failures.is_empty()
            && self.backward.failures.is_empty()
    }

    pub fn failure_count(&self) -> usize {
        self.involution_failures.len()
            + self.delta_failures.len()
            + self.forward.failures.len()
            + self.backward.failures.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid {}", if self.is_valid() { "yes" } else { "no" })?;
        for n in &self.involution_failures {
            writeln!(f, "involution_failure {n}")?;
        }
        for n in &self.delta_failures {
            writeln!(f, "delta_failure {n}")?;
        }
        for (name, check) in [("iota+", &self.forward), ("iota-", &self.backward)] {
            writeln!(
                f,
                "{name} checked {} skipped {} failed {}",
                check.checked,
                check.skipped,
                check.failures.len()
            )?;
            for x in &check.failures {
                writeln!(f, "{name}_failure n {} lhs {} rhs {}", x.n, x.lhs, x.rhs)?;
            }
        }
        Ok(())
    }
}

fn check_iota_at(w: &InvolutionWindow, n: i64, eps: i8, check: &mut IotaCheck) {
    let e = i64::from(eps);
    let lookup = || -> Option<(i64, i64)> {
        let dn = i64::from(w.delta(n).ok()?);
        let a = w.iota(n).ok()? - e * dn;
        let lhs = w.iota(a).ok()?;
        let m = n + e;
        let rhs = w.iota(m).ok()? + e * i64::from(w.delta(m).ok()?);
        Some((lhs, rhs))
    };
    match lookup() {
        Some((lhs, rhs)) => {
            check.checked += 1;
            if lhs != rhs {
                check.failures.push(IotaFailure { n, eps, lhs, rhs });
            }
        }
        None => check.skipped += 1,
    }
}

pub fn validate(w: &InvolutionWindow) -> ValidationReport {
    let mut involution_failures = Vec::new();
    let mut delta_failures = Vec::new();
    let mut forward = IotaCheck::default();
    let mut backward = IotaCheck::default();
    for n in w.indices() {
        let m = w.iota(n).expect("index in window");
        match w.iota(m) {
            Ok(back) if back == n => {
                if w.delta(n).ok() != w.delta(m).ok() {
                    delta_failures.push(n);
                }
            }
            _ => involution_failures.push(n),
        }
        check_iota_at(w, n, 1, &mut forward);
        check_iota_at(w, n, -1, &mut backward);
    }
    ValidationReport {
        involution_failures,
        delta_failures,
        forward,
        backward,
    }
}

/// `σ_n* = [[n, -n·ι(n) - δ_n], [1, -ι(n)]]` in GL(2,Z).
pub fn sigma_star(w: &InvolutionWindow, n: i64) -> Result<IntMat2, InvolutionError> {
    let m = w.iota(n)?;
    let d = i64::from(w.delta(n)?);
    let (n_big, m_big) = (BigInt::from(n), BigInt::from(m));
    let b = -(&n_big * &m_big) - d;
    Ok(IntMat2::new_unchecked(n_big, b, BigInt::from(1), -m_big))
}

pub fn sigma(w: &InvolutionWindow, n: i64) -> Result<ProjMat2, InvolutionError> {
    sigma_star(w, n).map(ProjMat2::from_int)
}

/// Checks `σ_n = τ^n ω ν^((1-δ_n)/2) τ^(-ι(n))`.
pub fn check_sigma_decomposition(w: &InvolutionWindow, n: i64) -> Result<bool, InvolutionError> {
    let s = sigma(w, n)?;
    let mut rhs = tau_pow(n).compose(&omega());
    if w.delta(n)? == -1 {
        rhs = rhs.compose(&nu());
    }
    rhs = rhs.compose(&tau_pow(-w.iota(n)?));
    Ok(s == rhs)
}
