//! Deciding the Neumann property at bounded height.
//!
//! The descent walks the sign-tracked Cayley graph of `⟨±σ_n*⟩` from the two
//! root edges `{I*, εσ_0*}`. An edge state `(α*, ε, k)` stands for the edge
//! `{α*, α*(εσ_k*)}`; its child vertex is `β* = α*(εσ_{k+ε}*)` and the first
//! column of `β*` is the sum of the endpoint columns. Branching follows the
//! Stern-Brocot order of columns, so the walk reaches any primitive target in
//! finitely many steps. The same child can be reached from the other
//! endpoint as `α*(εσ_k*)(-εδ_k σ_{ι(k)-εδ_k}*)`, which gives the second
//! descent rule.
//!
//! [`bfs_enumerate`] is an independent oracle: plain breadth-first products of
//! generators, with no knowledge of the descent rules.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::gl2::{nu, omega, tau_pow, vertices_up_to_height, IntMat2, PVertex, ProjMat2};
use crate::involution::{sigma, sigma_star, InvolutionError, InvolutionWindow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("descent needs generator index {0}, which lies outside the window")]
    OutOfWindow(i64),
    #[error(
        "mediant law broken at edge state k={k}, eps={eps}: child column {child:?} != {expected:?}"
    )]
    MediantViolation {
        k: i64,
        eps: i8,
        child: (BigInt, BigInt),
        expected: (BigInt, BigInt),
    },
}

impl From<InvolutionError> for DescentError {
    fn from(e: InvolutionError) -> Self {
        match e {
            InvolutionError::OutOfWindow(n) => DescentError::OutOfWindow(n),
            other => unreachable!("window lookups only fail with OutOfWindow, got {other}"),
        }
    }
}

/// The ordered edge `{α*, α*(εσ_k*)}` of the sign-tracked Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeState {
    pub alpha: IntMat2,
    pub eps: i8,
    pub k: i64,
}

impl EdgeState {
    pub fn root(eps: i8) -> Self {
        EdgeState {
            alpha: IntMat2::identity(),
            eps,
            k: 0,
        }
    }

    /// `α*(εσ_k*)`
    pub fn far_end(&self, w: &InvolutionWindow) -> Result<IntMat2, DescentError> {
        Ok(&self.alpha * &sigma_star(w, self.k)?.scale(self.eps.into()))
    }

    /// `β* = α*(εσ_{k+ε}*)`
    pub fn child(&self, w: &InvolutionWindow) -> Result<IntMat2, DescentError> {
        let next = self.k + i64::from(self.eps);
        Ok(&self.alpha * &sigma_star(w, next)?.scale(self.eps.into()))
    }

    /// The edge `{α*, β*}`.
    pub fn keep_alpha(&self) -> EdgeState {
        EdgeState {
            alpha: self.alpha.clone(),
            eps: self.eps,
            k: self.k + i64::from(self.eps),
        }
    }

    /// The edge `{α*(εσ_k*), β*}`, written from its other endpoint.
    pub fn keep_far_end(&self, w: &InvolutionWindow) -> Result<EdgeState, DescentError> {
        let dk = w.delta(self.k)?;
        let eps = -self.eps * dk;
        Ok(EdgeState {
            alpha: self.far_end(w)?,
            eps,
            k: w.iota(self.k)? + i64::from(eps),
        })
    }
}

/// One level of the descent: the two endpoint columns and their mediant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentStep {
    pub near: (BigInt, BigInt),
    pub far: (BigInt, BigInt),
    pub child: (BigInt, BigInt),
}

#[derive(Debug, Clone)]
pub struct Descent {
    pub element: ProjMat2,
    pub steps: Vec<DescentStep>,
}

fn cross(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> BigInt {
    &u.0 * &v.1 - &u.1 * &v.0
}

/// Strictly inside the cone spanned by `a` and `b`.
fn strictly_between(a: &(BigInt, BigInt), b: &(BigInt, BigInt), t: &(BigInt, BigInt)) -> bool {
    let ab = cross(a, b).signum();
    cross(a, t).signum() == ab && cross(t, b).signum() == ab
}

/// Runs the mediant descent towards `v` and records every step.
pub fn descend(w: &InvolutionWindow, v: &PVertex) -> Result<Descent, DescentError> {
    if v.is_infinity() {
        return Ok(Descent {
            element: ProjMat2::identity(),
            steps: Vec::new(),
        });
    }
    if let Some(n) = v.as_integer() {
        let n = i64::try_from(n).map_err(|_| DescentError::OutOfWindow(i64::MAX))?;
        return Ok(Descent {
            element: sigma(w, n)?,
            steps: Vec::new(),
        });
    }
    // Columns in the ε-tree are (x, εy) with x, y ≥ 0.
    let eps: i8 = if v.p().is_positive() { 1 } else { -1 };
    let target = (v.p().abs(), BigInt::from(eps) * v.q());
    let mut state = EdgeState::root(eps);
    let mut steps = Vec::new();
    loop {
        let near = state.alpha.first_column();
        let far = state.far_end(w)?.first_column();
        let beta = state.child(w)?;
        let child = beta.first_column();
        let expected = (&near.0 + &far.0, &near.1 + &far.1);
        if child != expected {
            return Err(DescentError::MediantViolation {
                k: state.k,
                eps: state.eps,
                child,
                expected,
            });
        }
        let found = child == target;
        let go_near = !found && strictly_between(&near, &child, &target);
        steps.push(DescentStep { near, far, child });
        if found {
            return Ok(Descent {
                element: ProjMat2::from_int(beta),
                steps,
            });
        }
        state = if go_near {
            state.keep_alpha()
        } else {
            state.keep_far_end(w)?
        };
    }
}

/// The element `α` of the generated group with `α(∞) = v`.
pub fn element_for_vertex(w: &InvolutionWindow, v: &PVertex) -> Result<ProjMat2, DescentError> {
    descend(w, v).map(|d| d.element)
}

/// Elements reached by breadth-first multiplication, with their word length.
#[derive(Debug, Clone, Default)]
pub struct Ball {
    levels: HashMap<ProjMat2, usize>,
    max_len: usize,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn contains(&self, x: &ProjMat2) -> bool {
        self.levels.contains_key(x)
    }

    /// Shortest word length found for `x`.
    pub fn level(&self, x: &ProjMat2) -> Option<usize> {
        self.levels.get(x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProjMat2, usize)> {
        self.levels.iter().map(|(x, &l)| (x, l))
    }

    pub fn elements(&self) -> impl Iterator<Item = &ProjMat2> {
        self.levels.keys()
    }

    /// Elements grouped by their image of ∞.
    pub fn by_vertex(&self) -> BTreeMap<PVertex, Vec<&ProjMat2>> {
        let mut out: BTreeMap<PVertex, Vec<&ProjMat2>> = BTreeMap::new();
        for x in self.levels.keys() {
            out.entry(x.at_infinity()).or_default().push(x);
        }
        out
    }

    /// Non-identity elements fixing ∞, i.e. of the form `τ^n` or `τ^n ν`.
    pub fn translation_like(&self) -> Vec<&ProjMat2> {
        self.levels
            .keys()
            .filter(|x| !x.is_identity() && x.rep().c().is_zero())
            .collect()
    }
}

fn generators(w: &InvolutionWindow) -> Vec<ProjMat2> {
    w.indices()
        .map(|n| sigma(w, n).expect("index in window"))
        .collect()
}

fn enumerate(w: &InvolutionWindow, max_len: usize, keep: impl Fn(&ProjMat2) -> bool) -> Ball {
    let gens = generators(w);
    let mut levels = HashMap::new();
    levels.insert(ProjMat2::identity(), 0);
    let mut frontier = vec![ProjMat2::identity()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = x.compose(g);
                if !levels.contains_key(&y) && keep(&y) {
                    levels.insert(y.clone(), len);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ball { levels, max_len }
}

/// All distinct products of at most `max_len` in-window generators.
pub fn bfs_enumerate(w: &InvolutionWindow, max_len: usize) -> Ball {
    enumerate(w, max_len, |_| true)
}

/// Like [`bfs_enumerate`], but drops any product whose image of ∞ is higher
/// than `height_cap` (and does not extend words through it). Keeps the ball
/// small on large windows, where the unrestricted ball grows like
/// `|window|^max_len`.
pub fn bfs_enumerate_capped(w: &InvolutionWindow, max_len: usize, height_cap: u64) -> Ball {
    enumerate(w, max_len, |x| x.at_infinity().height_at_most(height_cap))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// The descent failed or returned an element not sending ∞ to the target.
    Missing,
    /// Two distinct enumerated elements send ∞ to the target.
    Duplicate,
    /// The descent needed this generator index.
    OutOfWindow(i64),
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Missing => write!(f, "missing"),
            FailureReason::Duplicate => write!(f, "duplicate"),
            FailureReason::OutOfWindow(n) => write!(f, "out-of-window {n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NeumannOptions {
    /// Oracle word length; `2 * height` when unset.
    pub oracle_len: Option<usize>,
    /// Oracle height cap; `2 * height` when unset.
    pub oracle_height_cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeumannReport {
    pub height_bound: u64,
    pub verified: bool,
    pub targets_checked: usize,
    pub oracle_len: usize,
    pub oracle_height_cap: u64,
    pub oracle_size: usize,
    pub failures: Vec<(PVertex, FailureReason)>,
}

impl NeumannReport {
    pub fn has_out_of_window(&self) -> bool {
        self.failures
            .iter()
            .any(|(_, r)| matches!(r, FailureReason::OutOfWindow(_)))
    }

    /// True when every failure is an out-of-window one.
    pub fn only_window_limited(&self) -> bool {
        self.failures
            .iter()
            .all(|(_, r)| matches!(r, FailureReason::OutOfWindow(_)))
    }
}

impl fmt::Display for NeumannReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "height_bound {}", self.height_bound)?;
        writeln!(f, "targets_checked {}", self.targets_checked)?;
        writeln!(
            f,
            "oracle words<={} height<={} elements {} (uniqueness checked within this ball only)",
            self.oracle_len, self.oracle_height_cap, self.oracle_size
        )?;
        for (v, reason) in &self.failures {
            writeln!(f, "failure {} {}", v, reason)?;
        }
        writeln!(f, "verified {}", if self.verified { "yes" } else { "no" })
    }
}

pub fn check_neumann(w: &InvolutionWindow, height: u64) -> NeumannReport {
    check_neumann_with(w, height, NeumannOptions::default())
}

/// For every vertex of height at most `height`: the descent must produce an
/// element sending ∞ there, and the oracle ball must contain no second
/// element doing the same.
pub fn check_neumann_with(
    w: &InvolutionWindow,
    height: u64,
    opts: NeumannOptions,
) -> NeumannReport {
    let oracle_len = opts.oracle_len.unwrap_or(2 * height as usize);
    let cap = opts.oracle_height_cap.unwrap_or(2 * height);
    let ball = bfs_enumerate_capped(w, oracle_len, cap);
    let grouped = ball.by_vertex();
    let targets = vertices_up_to_height(height);
    let mut failures = Vec::new();
    for v in &targets {
        let found = match element_for_vertex(w, v) {
            Ok(x) if &x.at_infinity() == v => Some(x),
            Ok(_) | Err(DescentError::MediantViolation { .. }) => {
                failures.push((v.clone(), FailureReason::Missing));
                None
            }
            Err(DescentError::OutOfWindow(n)) => {
                failures.push((v.clone(), FailureReason::OutOfWindow(n)));
                None
            }
        };
        let rivals = grouped.get(v).map(Vec::as_slice).unwrap_or(&[]);
        let duplicate = rivals.len() > 1
            || found
                .as_ref()
                .is_some_and(|x| rivals.iter().any(|&r| r != x));
        if duplicate {
            failures.push((v.clone(), FailureReason::Duplicate));
        }
    }
    NeumannReport {
        height_bound: height,
        verified: failures.is_empty(),
        targets_checked: targets.len(),
        oracle_len,
        oracle_height_cap: cap,
        oracle_size: ball.len(),
        failures,
    }
}

/// Largest `H <= limit` such that every vertex of height at most `H`
/// descends without leaving the window; 0 if even height 1 does not.
pub fn max_supported_height(w: &InvolutionWindow, limit: u64) -> u64 {
    let all = vertices_up_to_height(limit);
    let mut best = 0;
    for h in 1..=limit {
        let h_big = BigInt::from(h);
        let ok = all
            .iter()
            .filter(|v| v.height() == h_big)
            .all(|v| !matches!(element_for_vertex(w, v), Err(DescentError::OutOfWindow(_))));
        if !ok {
            break;
        }
        best = h;
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetKind {
    /// `τ^n`
    TauPower,
    /// `τ^n ν`
    TauPowerNu,
}

impl fmt::Display for CosetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetKind::TauPower => write!(f, "tau"),
            CosetKind::TauPowerNu => write!(f, "tau_nu"),
        }
    }
}

/// `g = s·t` with `s` in the generated group and `t` in `⟨τ, ν⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub s: ProjMat2,
    pub kind: CosetKind,
    pub n: BigInt,
}

impl CosetDecomposition {
    pub fn t(&self) -> ProjMat2 {
        let n = i64::try_from(&self.n).expect("translation fits in i64");
        match self.kind {
            CosetKind::TauPower => tau_pow(n),
            CosetKind::TauPowerNu => tau_pow(n).compose(&nu()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error("s^-1 g = {0} does not fix ∞")]
    NotInCoset(ProjMat2),
}

pub fn coset_decompose(
    w: &InvolutionWindow,
    g: &ProjMat2,
) -> Result<CosetDecomposition, CosetError> {
    let s = element_for_vertex(w, &g.at_infinity())?;
    let t = s.inverse().compose(g);
    let rep = t.rep();
    if !rep.c().is_zero() {
        return Err(CosetError::NotInCoset(t));
    }
    // Canonical with c = 0 forces a = 1 and d = ±1.
    debug_assert!(rep.a().is_one());
    let (kind, n) = if rep.d().is_one() {
        (CosetKind::TauPower, rep.b().clone())
    } else {
        // τ^n ν = ±[[1, -n], [0, -1]]
        (CosetKind::TauPowerNu, -rep.b())
    };
    Ok(CosetDecomposition { s, kind, n })
}

/// Every element of PGL(2,Z) whose canonical representative has all entries
/// of absolute value at most `h`.
pub fn elements_up_to_height(h: u64) -> Vec<ProjMat2> {
    let h = h as i64;
    let mut out = Vec::new();
    for c in 0..=h {
        for a in -h..=h {
            if c == 0 && a <= 0 {
                continue;
            }
            for b in -h..=h {
                for d in -h..=h {
                    if (a * d - b * c).abs() == 1 {
                        out.push(ProjMat2::from_entries(a, b, c, d).expect("unimodular"));
                    }
                }
            }
        }
    }
    out
}

/// Up to `count` distinct elements of height at most `max_height`, drawn as
/// random words in `τ^{±1}`, `ω` and `ν` whose prefixes all stay within the
/// height bound.
pub fn sample_elements(count: usize, max_height: u64, seed: u64) -> Vec<ProjMat2> {
    let mut rng = StdRng::seed_from_u64(seed);
    let letters = [tau_pow(1), tau_pow(-1), omega(), nu()];
    let cap = BigInt::from(max_height);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 1000 {
        attempts += 1;
        let len = rng.gen_range(0..=32);
        let mut g = ProjMat2::identity();
        for _ in 0..len {
            let next = g.compose(&letters[rng.gen_range(0..letters.len())]);
            if next.rep().height() <= cap {
                g = next;
            }
        }
        if g.rep().height() <= cap && seen.insert(g.clone()) {
            out.push(g);
        }
    }
    out
}
