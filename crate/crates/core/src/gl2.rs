//! Exact arithmetic in GL(2,Z) and PGL(2,Z), and the action of PGL(2,Z) on
//! the projective line P(Z) = Q ∪ {∞}.
//!
//! [`IntMat2`] is a sign-tracked unimodular matrix. [`ProjMat2`] is the class
//! `{A, -A}` stored through its canonical representative: `c > 0`, or `c = 0`
//! and `a > 0`. [`PVertex`] is a primitive column `(p, q)` up to sign with the
//! same rule applied to `(q, p)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gl2Error {
    #[error("matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected ±1")]
    NotUnimodular {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
        det: BigInt,
    },
    #[error("({p}, {q}) is not a primitive vector")]
    NotPrimitive { p: BigInt, q: BigInt },
}

/// A 2×2 integer matrix of determinant ±1, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMat2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Builds a unimodular matrix, rejecting anything with `|ad - bc| != 1`.
pub fn mat<A, B, C, D>(a: A, b: B, c: C, d: D) -> Result<IntMat2, Gl2Error>
where
    A: Into<BigInt>,
    B: Into<BigInt>,
    C: Into<BigInt>,
    D: Into<BigInt>,
{
    IntMat2::new(a.into(), b.into(), c.into(), d.into())
}

impl IntMat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, Gl2Error> {
        let det = &a * &d - &b * &c;
        if det.abs().is_one() {
            Ok(IntMat2 { a, b, c, d })
        } else {
            Err(Gl2Error::NotUnimodular { a, b, c, d, det })
        }
    }

    /// Caller guarantees unimodularity.
    pub(crate) fn new_unchecked(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        debug_assert!((&a * &d - &b * &c).abs().is_one());
        IntMat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        IntMat2::new_unchecked(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Determinant, always `1` or `-1`.
    pub fn det(&self) -> i32 {
        if (&self.a * &self.d - &self.b * &self.c).is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// First column `(a, c)`, i.e. the image of `e = (1, 0)`.
    pub fn first_column(&self) -> (BigInt, BigInt) {
        (self.a.clone(), self.c.clone())
    }

    /// Exact inverse in GL(2,Z).
    pub fn inverse(&self) -> Self {
        if self.det() == 1 {
            IntMat2::new_unchecked(self.d.clone(), -&self.b, -&self.c, self.a.clone())
        } else {
            IntMat2::new_unchecked(-&self.d, self.b.clone(), self.c.clone(), -&self.a)
        }
    }

    /// `Some(s)` when the matrix equals `s·I` for `s = ±1`.
    pub fn scalar_sign(&self) -> Option<i32> {
        if !self.b.is_zero() || !self.c.is_zero() || self.a != self.d {
            return None;
        }
        if self.a.is_one() {
            Some(1)
        } else {
            Some(-1)
        }
    }

    pub fn scale(&self, sign: i32) -> Self {
        if sign >= 0 {
            self.clone()
        } else {
            -self
        }
    }

    pub fn apply(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        (&self.a * p + &self.b * q, &self.c * p + &self.d * q)
    }

    /// Largest absolute entry.
    pub fn height(&self) -> BigInt {
        self.entries()
            .into_iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }
}

impl Mul for &IntMat2 {
    type Output = IntMat2;

    fn mul(self, rhs: &IntMat2) -> IntMat2 {
        IntMat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;

    fn mul(self, rhs: IntMat2) -> IntMat2 {
        &self * &rhs
    }
}

impl Neg for &IntMat2 {
    type Output = IntMat2;

    fn neg(self) -> IntMat2 {
        IntMat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for IntMat2 {
    type Output = IntMat2;

    fn neg(self) -> IntMat2 {
        -&self
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// True when `(x, y)` is already the canonical member of `{(x, y), (-x, -y)}`
/// under the rule `y > 0`, or `y = 0` and `x > 0`.
fn is_canonical_pair(x: &BigInt, y: &BigInt) -> bool {
    y.is_positive() || (y.is_zero() && x.is_positive())
}

/// An element of PGL(2,Z), stored as the canonical representative of `±A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjMat2 {
    rep: IntMat2,
}

impl ProjMat2 {
    pub fn from_int(m: IntMat2) -> Self {
        if is_canonical_pair(&m.a, &m.c) {
            ProjMat2 { rep: m }
        } else {
            ProjMat2 { rep: -m }
        }
    }

    pub fn from_entries(a: i64, b: i64, c: i64, d: i64) -> Result<Self, Gl2Error> {
        mat(a, b, c, d).map(ProjMat2::from_int)
    }

    pub fn identity() -> Self {
        ProjMat2 {
            rep: IntMat2::identity(),
        }
    }

    pub fn rep(&self) -> &IntMat2 {
        &self.rep
    }

    pub fn into_rep(self) -> IntMat2 {
        self.rep
    }

    pub fn is_identity(&self) -> bool {
        self.rep.scalar_sign().is_some()
    }

    pub fn det(&self) -> i32 {
        self.rep.det()
    }

    pub fn compose(&self, other: &ProjMat2) -> ProjMat2 {
        ProjMat2::from_int(&self.rep * &other.rep)
    }

    pub fn inverse(&self) -> ProjMat2 {
        ProjMat2::from_int(self.rep.inverse())
    }

    /// `self^n` for any integer `n`, by repeated squaring.
    pub fn pow(&self, n: i64) -> ProjMat2 {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = ProjMat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Fractional-linear action on P(Z), computed on columns.
    pub fn act(&self, v: &PVertex) -> PVertex {
        let (p, q) = self.rep.apply(&v.p, &v.q);
        PVertex::canonical_unchecked(p, q)
    }

    /// The image of ∞, i.e. the first column up to sign.
    pub fn at_infinity(&self) -> PVertex {
        PVertex::canonical_unchecked(self.rep.a.clone(), self.rep.c.clone())
    }
}

impl Mul for &ProjMat2 {
    type Output = ProjMat2;

    fn mul(self, rhs: &ProjMat2) -> ProjMat2 {
        self.compose(rhs)
    }
}

impl Mul for ProjMat2 {
    type Output = ProjMat2;

    fn mul(self, rhs: ProjMat2) -> ProjMat2 {
        self.compose(&rhs)
    }
}

impl fmt::Display for ProjMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.rep)
    }
}

/// Product of a sequence of elements, left to right.
pub fn compose_all<'a, I>(items: I) -> ProjMat2
where
    I: IntoIterator<Item = &'a ProjMat2>,
{
    items
        .into_iter()
        .fold(ProjMat2::identity(), |acc, x| acc.compose(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseGenerator {
    /// z ↦ z + 1
    Tau,
    /// z ↦ -1/z
    Omega,
    /// z ↦ -z
    Nu,
}

pub fn base_generator(name: BaseGenerator) -> ProjMat2 {
    let m = match name {
        BaseGenerator::Tau => (1, 1, 0, 1),
        BaseGenerator::Omega => (0, -1, 1, 0),
        BaseGenerator::Nu => (-1, 0, 0, 1),
    };
    ProjMat2::from_entries(m.0, m.1, m.2, m.3).expect("base generators are unimodular")
}

pub fn tau() -> ProjMat2 {
    base_generator(BaseGenerator::Tau)
}

pub fn omega() -> ProjMat2 {
    base_generator(BaseGenerator::Omega)
}

pub fn nu() -> ProjMat2 {
    base_generator(BaseGenerator::Nu)
}

/// `τ^n`, the translation `z ↦ z + n`.
pub fn tau_pow(n: i64) -> ProjMat2 {
    ProjMat2::from_entries(1, n, 0, 1).expect("translations are unimodular")
}

/// A point of P(Z): a primitive integer column up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PVertex {
    p: BigInt,
    q: BigInt,
}

impl PVertex {
    pub fn new<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Result<Self, Gl2Error> {
        let (p, q) = (p.into(), q.into());
        if !p.gcd(&q).is_one() {
            return Err(Gl2Error::NotPrimitive { p, q });
        }
        Ok(PVertex::canonical_unchecked(p, q))
    }

    /// Canonicalizes the sign; the caller guarantees `gcd(p, q) = 1`.
    pub(crate) fn canonical_unchecked(p: BigInt, q: BigInt) -> Self {
        debug_assert!(p.gcd(&q).is_one());
        if is_canonical_pair(&p, &q) {
            PVertex { p, q }
        } else {
            PVertex { p: -p, q: -q }
        }
    }

    pub fn infinity() -> Self {
        PVertex {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    /// The vertex `n/1`.
    pub fn integer(n: i64) -> Self {
        PVertex {
            p: BigInt::from(n),
            q: BigInt::one(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// `Some(n)` when the vertex is `n/1`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.q.is_one().then_some(&self.p)
    }

    /// `max(|p|, |q|)`.
    pub fn height(&self) -> BigInt {
        self.p.abs().max(self.q.clone())
    }

    pub fn height_at_most(&self, h: u64) -> bool {
        self.height() <= BigInt::from(h)
    }

    /// `|p·q' - q·p'|`; the vertices are adjacent in the distant graph iff
    /// this is 1.
    pub fn cross_abs(&self, other: &PVertex) -> BigInt {
        (&self.p * &other.q - &self.q * &other.p).abs()
    }

    pub fn is_adjacent(&self, other: &PVertex) -> bool {
        self.cross_abs(other).is_one()
    }

    /// `p/q` with `∞` for the point at infinity.
    pub fn label(&self) -> String {
        if self.is_infinity() {
            "∞".to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for PVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Orders by height, then denominator, then numerator.
impl Ord for PVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.p.cmp(&other.p))
    }
}

impl PartialOrd for PVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All vertices of height at most `h`, sorted.
pub fn vertices_up_to_height(h: u64) -> Vec<PVertex> {
    let h = h as i64;
    let mut out = Vec::new();
    if h >= 1 {
        out.push(PVertex::infinity());
    }
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 {
                out.push(PVertex::canonical_unchecked(p.into(), q.into()));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(a: i64, b: i64, c: i64, d: i64) -> ProjMat2 {
        ProjMat2::from_entries(a, b, c, d).unwrap()
    }

    #[test]
    fn constructor_checks_determinant() {
        assert!(mat(1, 1, 0, 1).is_ok());
        assert!(mat(0, -1, 1, 0).is_ok());
        assert!(matches!(
            mat(2, 0, 0, 2),
            Err(Gl2Error::NotUnimodular { .. })
        ));
        assert_eq!(ProjMat2::from_int(mat(1, 1, 0, 1).unwrap()), tau());
        assert_eq!(ProjMat2::from_int(mat(0, -1, 1, 0).unwrap()), omega());
    }

    #[test]
    fn canonical_sign_rule() {
        let m = pm(0, 1, -1, 0);
        assert_eq!(m.rep(), &mat(0, -1, 1, 0).unwrap());
        let m = pm(-1, 0, 0, 1);
        assert_eq!(m.rep(), &mat(1, 0, 0, -1).unwrap());
        assert_eq!(pm(-1, 0, 0, -1), ProjMat2::identity());
    }

    #[test]
    fn composition_examples() {
        assert!(omega().compose(&omega()).is_identity());
        assert_eq!(tau().compose(&tau()), pm(1, 2, 0, 1));
        // Case-2 block at 0: σ0 = [[0,-1],[1,-1]], σ1 = [[1,-1],[1,0]]
        assert!(pm(0, -1, 1, -1).compose(&pm(1, -1, 1, 0)).is_identity());
        assert_eq!(
            &mat(0, -1, 1, -1).unwrap() * &mat(1, -1, 1, 0).unwrap(),
            -IntMat2::identity()
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ProjMat2::identity().inverse(), ProjMat2::identity());
        assert_eq!(pm(0, -1, 1, -1).inverse(), pm(1, -1, 1, 0));
        assert_eq!(tau().inverse(), pm(1, -1, 0, 1));
        let m = mat(1, -3, 1, -4).unwrap();
        assert_eq!(&m * &m.inverse(), IntMat2::identity());
    }

    #[test]
    fn action_examples() {
        assert_eq!(tau().act(&PVertex::infinity()), PVertex::infinity());
        assert_eq!(omega().act(&PVertex::infinity()), PVertex::integer(0));
        assert_eq!(
            pm(2, -5, 1, -2).act(&PVertex::infinity()),
            PVertex::new(2, 1).unwrap()
        );
        assert_eq!(
            tau().act(&PVertex::new(-1, 2).unwrap()),
            PVertex::new(1, 2).unwrap()
        );
    }

    #[test]
    fn presentation_relations() {
        let (t, w, n) = (tau(), omega(), nu());
        assert!(n.pow(2).is_identity());
        assert!(w.pow(2).is_identity());
        assert!((&w * &n).pow(2).is_identity());
        assert!((&t * &n).pow(2).is_identity());
        assert!((&w * &t).pow(3).is_identity());
        assert!(!(&w * &t).pow(2).is_identity());
    }

    #[test]
    fn omega_tau_nu_has_infinite_order() {
        // With ν(z) = -z, ωτν is z ↦ 1/(z - 1); its square is z ↦ (z-1)/(2-z).
        let x = &(&omega() * &tau()) * &nu();
        assert_eq!(x.pow(2), ProjMat2::from_entries(1, -1, -1, 2).unwrap());
        assert!(!x.pow(2).is_identity());
    }

    #[test]
    fn pvertex_rejects_non_primitive() {
        assert!(PVertex::new(2, 4).is_err());
        assert!(PVertex::new(0, 0).is_err());
        assert_eq!(PVertex::new(-1, 0).unwrap(), PVertex::infinity());
        assert_eq!(PVertex::new(1, -2).unwrap(), PVertex::new(-1, 2).unwrap());
    }

    #[test]
    fn vertex_enumeration_counts() {
        assert_eq!(vertices_up_to_height(1).len(), 4);
        assert_eq!(vertices_up_to_height(2).len(), 8);
        assert_eq!(vertices_up_to_height(0).len(), 0);
    }

    #[test]
    fn pow_matches_repeated_composition() {
        let g = pm(2, 1, 1, 1);
        let mut acc = ProjMat2::identity();
        for n in 0..6 {
            assert_eq!(g.pow(n), acc);
            assert_eq!(g.pow(-n), acc.inverse());
            acc = acc.compose(&g);
        }
    }
}
