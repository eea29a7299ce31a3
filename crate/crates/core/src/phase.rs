//! Arithmetic on S¹ ∪ {0}.
//!
//! A nonzero [`Phase`] stores its angle as a fixed-point fraction of a full
//! turn (`u64`, one unit = 2π / 2⁶⁴). Multiplication is wrapping addition, so
//! the group operations are exact: negation and inversion close bit-for-bit,
//! and phases assigned as ±1 stay exactly ±1 under rephasing.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex numbers with modulus below this cutoff have phase zero.
pub const ZERO_NORM_CUTOFF: f64 = 1e-12;

const TURN: f64 = 18_446_744_073_709_551_616.0; // 2^64
const HALF_TURN: u64 = 1 << 63;
const QUARTER_TURN: u64 = 1 << 62;

/// Angular comparison tolerance in radians, `0 < eps < π/4`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < PI / 4.0 {
            Ok(Tolerance(eps))
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// An element of S¹ ∪ {0}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Option<u64>);

impl Phase {
    pub const ZERO: Phase = Phase(None);
    pub const ONE: Phase = Phase(Some(0));
    pub const MINUS_ONE: Phase = Phase(Some(HALF_TURN));
    pub const I: Phase = Phase(Some(QUARTER_TURN));

    /// The unit phase `e^{iθ}` for an angle in radians (any real value).
    pub fn from_angle(radians: f64) -> Phase {
        debug_assert!(radians.is_finite(), "non-finite angle {radians}");
        Phase(Some(turns_to_bits(radians / TAU)))
    }

    /// The unit phase `e^{iπx}`.
    pub fn from_angle_over_pi(x: f64) -> Phase {
        debug_assert!(x.is_finite(), "non-finite angle {x}");
        Phase(Some(turns_to_bits(x / 2.0)))
    }

    /// `ph(z)`: zero when `|z| < ZERO_NORM_CUTOFF`, else `z / |z|`.
    pub fn of(z: Complex64) -> Phase {
        if z.norm() < ZERO_NORM_CUTOFF {
            Phase::ZERO
        } else {
            Phase::from_angle(z.im.atan2(z.re))
        }
    }

    /// `(-1)^k` as a phase.
    pub fn sign(k: usize) -> Phase {
        if k.is_multiple_of(2) {
            Phase::ONE
        } else {
            Phase::MINUS_ONE
        }
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// Normalized angle in `[0, 2π)`, or `None` for zero.
    pub fn angle(self) -> Option<f64> {
        self.0.map(|bits| {
            let a = bits as f64 / TURN * TAU;
            if a >= TAU {
                0.0
            } else {
                a
            }
        })
    }

    /// Angle divided by π, in `[0, 2)`, or `None` for zero.
    pub fn angle_over_pi(self) -> Option<f64> {
        self.0.map(|bits| {
            let x = bits as f64 / TURN * 2.0;
            if x >= 2.0 {
                0.0
            } else {
                x
            }
        })
    }

    /// Multiplicative inverse; zero maps to zero.
    pub fn inv(self) -> Phase {
        Phase(self.0.map(u64::wrapping_neg))
    }

    pub fn to_complex(self) -> Complex64 {
        match self.angle() {
            None => Complex64::new(0.0, 0.0),
            Some(a) => Complex64::from_polar(1.0, a),
        }
    }

    /// Circular distance in radians. Zero is at distance 0 from itself and
    /// infinitely far from every unit phase.
    pub fn distance(self, other: Phase) -> f64 {
        match (self.0, other.0) {
            (None, None) => 0.0,
            (Some(a), Some(b)) => {
                let d = a.wrapping_sub(b);
                d.min(d.wrapping_neg()) as f64 / TURN * TAU
            }
            _ => f64::INFINITY,
        }
    }

    pub fn approx_eq(self, other: Phase, tol: Tolerance) -> bool {
        self.distance(other) < tol.eps()
    }

    /// True for zero and for phases within `tol` of ±1.
    pub fn is_real(self, tol: Tolerance) -> bool {
        self.is_zero() || self.approx_eq(Phase::ONE, tol) || self.approx_eq(Phase::MINUS_ONE, tol)
    }

    fn bits(self) -> Option<u64> {
        self.0
    }
}

fn turns_to_bits(turns: f64) -> u64 {
    let t = turns.rem_euclid(1.0);
    let scaled = t * TURN;
    if scaled >= TURN {
        0
    } else {
        scaled.round() as u64
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        match (self.0, rhs.0) {
            (Some(a), Some(b)) => Phase(Some(a.wrapping_add(b))),
            _ => Phase::ZERO,
        }
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase(self.0.map(|a| a.wrapping_add(HALF_TURN)))
    }
}

impl std::iter::Product for Phase {
    fn product<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ONE, Mul::mul)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle_over_pi() {
            None => write!(f, "0"),
            Some(x) => write!(f, "e^(i{x}pi)"),
        }
    }
}

/// Symbolic value of the hypersum `⊞S`: the set of phases of strictly
/// positive linear combinations of `S`.
#[derive(Clone, Debug, PartialEq)]
pub enum HypersumSet {
    Empty,
    Finite(Vec<Phase>),
    /// Phases strictly between `start` and `end`, counterclockwise.
    OpenArc {
        start: Phase,
        end: Phase,
        includes_zero: bool,
    },
    /// All of S¹ ∪ {0}.
    Full,
}

impl HypersumSet {
    pub fn contains_zero(&self) -> bool {
        match self {
            HypersumSet::Empty => false,
            HypersumSet::Finite(elems) => elems.iter().any(|p| p.is_zero()),
            HypersumSet::OpenArc { includes_zero, .. } => *includes_zero,
            HypersumSet::Full => true,
        }
    }

    /// Membership test; arc endpoints are excluded up to `tol`.
    pub fn contains(&self, p: Phase, tol: Tolerance) -> bool {
        match self {
            HypersumSet::Empty => false,
            HypersumSet::Finite(elems) => elems.iter().any(|q| q.approx_eq(p, tol)),
            HypersumSet::OpenArc {
                start,
                end,
                includes_zero,
            } => match (p.bits(), start.bits(), end.bits()) {
                (None, ..) => *includes_zero,
                (Some(x), Some(s), Some(e)) => {
                    let span = e.wrapping_sub(s);
                    let offset = x.wrapping_sub(s);
                    offset < span && p.distance(*start) >= tol.eps() && p.distance(*end) >= tol.eps()
                }
                _ => false,
            },
            HypersumSet::Full => true,
        }
    }
}

/// Sorted, tolerance-deduplicated nonzero angles of `phases`.
fn distinct_nonzero(phases: &[Phase], tol: Tolerance, out: &mut Vec<u64>) {
    out.clear();
    out.extend(phases.iter().filter_map(|p| p.bits()));
    out.sort_unstable();
    let eps = tol.eps();
    out.dedup_by(|b, a| Phase(Some(*a)).distance(Phase(Some(*b))) < eps);
    if out.len() > 1 {
        let first = Phase(Some(out[0]));
        let last = Phase(Some(out[out.len() - 1]));
        if first.distance(last) < eps {
            out.pop();
        }
    }
}

/// Index `p` of the largest circular gap (from `angles[p]` to its successor)
/// and its size in radians. `angles` is sorted with at least two entries.
fn largest_gap(angles: &[u64]) -> (usize, f64) {
    let k = angles.len();
    let mut best = (0, 0u64);
    for p in 0..k {
        let gap = angles[(p + 1) % k].wrapping_sub(angles[p]);
        if gap > best.1 {
            best = (p, gap);
        }
    }
    (best.0, best.1 as f64 / TURN * TAU)
}

enum Shape {
    Empty,
    AllZero,
    Single(u64),
    Antipodal(u64, u64),
    Arc(u64, u64),
    Full,
}

fn classify(phases: &[Phase], tol: Tolerance, buf: &mut Vec<u64>) -> Shape {
    if phases.is_empty() {
        return Shape::Empty;
    }
    distinct_nonzero(phases, tol, buf);
    let eps = tol.eps();
    match buf.len() {
        0 => Shape::AllZero,
        1 => Shape::Single(buf[0]),
        k => {
            let (p, gap) = largest_gap(buf);
            if gap < PI - eps {
                return Shape::Full;
            }
            let start = buf[(p + 1) % k];
            let end = buf[p];
            if k == 2 && (TAU - gap - PI).abs() < eps {
                Shape::Antipodal(buf[0], buf[1])
            } else {
                Shape::Arc(start, end)
            }
        }
    }
}

/// `⊞S` for a finite multiset of phases, treating phases within `tol` of
/// each other as equal. A zero summand contributes nothing to a strictly
/// positive combination, so `⊞{μ, 0} = {μ}`.
pub fn hypersum(phases: &[Phase], tol: Tolerance) -> HypersumSet {
    let mut buf = Vec::with_capacity(phases.len());
    match classify(phases, tol, &mut buf) {
        Shape::Empty => HypersumSet::Empty,
        Shape::AllZero => HypersumSet::Finite(vec![Phase::ZERO]),
        Shape::Single(a) => HypersumSet::Finite(vec![Phase(Some(a))]),
        Shape::Antipodal(a, b) => HypersumSet::Finite(vec![Phase(Some(a)), Phase::ZERO, Phase(Some(b))]),
        Shape::Arc(s, e) => HypersumSet::OpenArc {
            start: Phase(Some(s)),
            end: Phase(Some(e)),
            includes_zero: false,
        },
        Shape::Full => HypersumSet::Full,
    }
}

/// `0 ∈ ⊞S` without materializing the set: true iff the nonzero elements
/// are exactly an antipodal pair or do not fit in a closed half-circle, or
/// `S` is nonempty and all zero.
pub fn zero_in_hypersum(phases: &[Phase], tol: Tolerance) -> bool {
    let mut buf = Vec::with_capacity(phases.len());
    zero_in_hypersum_with(phases, tol, &mut buf)
}

pub(crate) fn zero_in_hypersum_with(phases: &[Phase], tol: Tolerance, buf: &mut Vec<u64>) -> bool {
    matches!(
        classify(phases, tol, buf),
        Shape::AllZero | Shape::Antipodal(..) | Shape::Full
    )
}

/// Which side of a triangular equation is unknown.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Unknown {
    S1,
    S2,
}

/// `γ = ph(s₁α − s₂β)` with `α ≠ ±β` and exactly one of `s₁, s₂` unknown.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleEquation {
    pub gamma: Phase,
    pub alpha: Phase,
    pub beta: Phase,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
}

impl TriangleEquation {
    pub fn new(
        gamma: Phase,
        alpha: Phase,
        beta: Phase,
        s1: Option<f64>,
        s2: Option<f64>,
        tol: Tolerance,
    ) -> Result<Self> {
        let eq = TriangleEquation {
            gamma,
            alpha,
            beta,
            s1,
            s2,
        };
        let nonzero = !(gamma.is_zero() || alpha.is_zero() || beta.is_zero());
        let one_unknown = s1.is_some() != s2.is_some();
        let known_positive = s1.or(s2).is_some_and(|s| s > 0.0 && s.is_finite());
        if !(nonzero && one_unknown && known_positive) {
            return Err(Error::DegenerateTriangle(eq));
        }
        if alpha.approx_eq(beta, tol) || alpha.approx_eq(-beta, tol) {
            return Err(Error::DegenerateTriangle(eq));
        }
        Ok(eq)
    }

    /// `γ = ph(s₁α − s₂β)` with `s₁` known.
    pub fn for_s2(gamma: Phase, alpha: Phase, beta: Phase, s1: f64, tol: Tolerance) -> Result<Self> {
        Self::new(gamma, alpha, beta, Some(s1), None, tol)
    }

    /// `γ = ph(s₁α − s₂β)` with `s₂` known.
    pub fn for_s1(gamma: Phase, alpha: Phase, beta: Phase, s2: f64, tol: Tolerance) -> Result<Self> {
        Self::new(gamma, alpha, beta, None, Some(s2), tol)
    }

    pub fn unknown(&self) -> Unknown {
        if self.s1.is_none() {
            Unknown::S1
        } else {
            Unknown::S2
        }
    }
}

impl fmt::Display for TriangleEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: Option<f64>, name: &str| match s {
            Some(v) => format!("{v}"),
            None => name.to_string(),
        };
        write!(
            f,
            "{} = ph({}*{} - {}*{})",
            self.gamma,
            side(self.s1, "s1"),
            self.alpha,
            side(self.s2, "s2"),
            self.beta
        )
    }
}

/// Solution of a triangular equation: the unknown norm and `|s₁α − s₂β|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleSolution {
    pub value: f64,
    pub residual_norm: f64,
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Solves `s₁α − s₂β = t·γ` for the unknown norm and `t > 0` by 2×2
/// elimination. The system is singular exactly when `γ = ±β` (unknown `s₂`)
/// or `γ = ±α` (unknown `s₁`); since `α ≠ ±β` such an equation has no
/// solution at all, and it is reported as degenerate.
pub fn triangle_solve(eq: &TriangleEquation, tol: Tolerance) -> Result<TriangleSolution> {
    let a = eq.alpha.to_complex();
    let b = eq.beta.to_complex();
    let c = eq.gamma.to_complex();
    let (value, t) = match eq.unknown() {
        Unknown::S2 => {
            // s2·β + t·γ = s1·α
            let rhs = a * eq.s1.expect("s1 known");
            let det = cross(b, c);
            if det.abs() < tol.eps() {
                return Err(Error::DegenerateTriangle(*eq));
            }
            (cross(rhs, c) / det, cross(b, rhs) / det)
        }
        Unknown::S1 => {
            // s1·α − t·γ = s2·β
            let rhs = b * eq.s2.expect("s2 known");
            let det = cross(a, -c);
            if det.abs() < tol.eps() {
                return Err(Error::DegenerateTriangle(*eq));
            }
            (cross(rhs, -c) / det, cross(a, rhs) / det)
        }
    };
    if !(value > 0.0 && t > 0.0 && value.is_finite() && t.is_finite()) {
        return Err(Error::InfeasibleTriangle(*eq));
    }
    let (s1, s2) = match eq.unknown() {
        Unknown::S1 => (value, eq.s2.unwrap()),
        Unknown::S2 => (eq.s1.unwrap(), value),
    };
    let check = Phase::of(a * s1 - b * s2);
    if check.distance(eq.gamma) >= 10.0 * tol.eps() {
        return Err(Error::DegenerateTriangle(*eq));
    }
    Ok(TriangleSolution {
        value,
        residual_norm: t,
    })
}
