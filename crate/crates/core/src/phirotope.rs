//! Phirotopes: alternating maps from r-tuples of `[0, n)` to S¹ ∪ {0}
//! satisfying the combinatorial complex Grassmann–Plücker relations.
//!
//! Values are stored once per sorted r-subset, in lexicographic order; the
//! alternating extension to arbitrary tuples is computed on demand.
//!
//! The relations quantify over subsets `Y`. Reordering `Y` multiplies every
//! term of one relation by the same sign, which does not change whether the
//! hypersum contains zero, so only sorted `Y` are checked.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::phase::{zero_in_hypersum_with, Phase, Tolerance};
use crate::subsets::{combinations, sort_with_parity, Binomials};

/// Largest supported ground set (bases are kept as 64-bit masks).
pub const MAX_GROUND_SIZE: usize = 64;

/// A pair `(X, Y)` of sorted index sets, `|X| = r + 1`, `|Y| = r − 1`, whose
/// Grassmann–Plücker relation fails.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GpViolation {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Phirotope {
    n: usize,
    r: usize,
    values: Vec<Phase>,
    tol: Tolerance,
    binom: Binomials,
}

impl PartialEq for Phirotope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.values == other.values
    }
}

impl Phirotope {
    /// Builds and validates a phirotope from its values on sorted r-subsets
    /// in lexicographic order.
    pub fn new(n: usize, r: usize, values: Vec<Phase>, tol: Tolerance) -> Result<Self> {
        let phi = Self::new_unchecked(n, r, values, tol)?;
        let violations = phi.check_gp();
        if violations.is_empty() {
            Ok(phi)
        } else {
            Err(Error::NotAPhirotope(violations.len()))
        }
    }

    /// Like [`Phirotope::new`] but skips the Grassmann–Plücker check.
    /// Shape and the not-identically-zero condition are still enforced.
    pub fn new_unchecked(n: usize, r: usize, values: Vec<Phase>, tol: Tolerance) -> Result<Self> {
        if r == 0 || r > n || n > MAX_GROUND_SIZE {
            return Err(Error::DimensionMismatch(format!(
                "rank {r} on a ground set of size {n}"
            )));
        }
        let binom = Binomials::new(n);
        if values.len() != binom.get(n, r) {
            return Err(Error::DimensionMismatch(format!(
                "{} values for C({n}, {r}) = {} subsets",
                values.len(),
                binom.get(n, r)
            )));
        }
        if values.iter().all(|v| v.is_zero()) {
            return Err(Error::AllZero);
        }
        Ok(Phirotope {
            n,
            r,
            values,
            tol,
            binom,
        })
    }

    /// Evaluates `f` on every sorted r-subset, then validates.
    pub fn from_fn(n: usize, r: usize, tol: Tolerance, f: impl FnMut(&[usize]) -> Phase) -> Result<Self> {
        let phi = Self::from_fn_unchecked(n, r, tol, f)?;
        Self::new(n, r, phi.values, tol)
    }

    pub fn from_fn_unchecked(n: usize, r: usize, tol: Tolerance, mut f: impl FnMut(&[usize]) -> Phase) -> Result<Self> {
        let values = combinations(n, r).map(|s| f(&s)).collect();
        Self::new_unchecked(n, r, values, tol)
    }

    /// `λ ↦ ph([λ]_M)`. Matrices always induce phirotopes, so the
    /// Grassmann–Plücker relations are not re-checked here.
    pub fn from_matrix(m: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let values: Vec<Phase> = combinations(m.cols(), m.rows())
            .map(|s| m.maximal_minor(&s).map(Phase::of))
            .collect::<Result<_>>()?;
        match Self::new_unchecked(m.cols(), m.rows(), values, tol) {
            Err(Error::AllZero) => Err(Error::RankDeficient),
            other => other,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    /// Values on sorted r-subsets, lexicographic order.
    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    /// `(sorted subset, value)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Phase)> + '_ {
        combinations(self.n, self.r).zip(self.values.iter().copied())
    }

    /// Value on a sorted, repetition-free r-subset.
    pub fn value(&self, sorted: &[usize]) -> Phase {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        self.values[self.binom.rank(sorted)]
    }

    /// The alternating extension: zero on repeated indices, otherwise the
    /// stored value times the sign of the sorting permutation.
    pub fn eval(&self, lambda: &[usize]) -> Result<Phase> {
        if lambda.len() != self.r {
            return Err(Error::Arity {
                expected: self.r,
                got: lambda.len(),
            });
        }
        if let Some(&index) = lambda.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        Ok(match sort_with_parity(lambda) {
            None => Phase::ZERO,
            Some((sorted, odd)) => {
                let v = self.value(&sorted);
                if odd {
                    -v
                } else {
                    v
                }
            }
        })
    }

    /// `φ(x, y₁, …, y_{r−1})` for sorted `y`, without allocating.
    fn eval_prepended(&self, x: usize, y: &[usize], buf: &mut Vec<usize>) -> Phase {
        let pos = y.partition_point(|&v| v < x);
        if y.get(pos) == Some(&x) {
            return Phase::ZERO;
        }
        buf.clear();
        buf.extend_from_slice(&y[..pos]);
        buf.push(x);
        buf.extend_from_slice(&y[pos..]);
        let v = self.value(buf);
        if pos % 2 == 1 {
            -v
        } else {
            v
        }
    }

    fn relation_holds(&self, x: &[usize], y: &[usize], scratch: &mut Scratch) -> bool {
        scratch.terms.clear();
        for k in 0..x.len() {
            scratch.subset.clear();
            scratch
                .subset
                .extend(x.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v));
            let left = self.value(&scratch.subset);
            let right = self.eval_prepended(x[k], y, &mut scratch.subset);
            scratch.terms.push(Phase::sign(k + 1) * left * right);
        }
        zero_in_hypersum_with(&scratch.terms, self.tol, &mut scratch.angles)
    }

    /// All `(X, Y)` pairs whose combinatorial complex Grassmann–Plücker
    /// relation fails, sorted lexicographically by `X` then `Y`. `Y` ranges
    /// over every (r−1)-subset, including those meeting `X`.
    pub fn check_gp(&self) -> Vec<GpViolation> {
        let ys: Vec<Vec<usize>> = combinations(self.n, self.r - 1).collect();
        let xs: Vec<Vec<usize>> = combinations(self.n, self.r + 1).collect();
        xs.par_iter()
            .map_init(Scratch::default, |scratch, x| {
                ys.iter()
                    .filter(|y| !self.relation_holds(x, y, scratch))
                    .map(|y| GpViolation {
                        x: x.clone(),
                        y: y.clone(),
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// Whether every relation holds; stops at the first failure.
    pub fn satisfies_gp(&self) -> bool {
        let ys: Vec<Vec<usize>> = combinations(self.n, self.r - 1).collect();
        let xs: Vec<Vec<usize>> = combinations(self.n, self.r + 1).collect();
        xs.par_iter()
            .map_init(Scratch::default, |scratch, x| {
                ys.iter().all(|y| self.relation_holds(x, y, scratch))
            })
            .all(|ok| ok)
    }

    /// Whether a single `(X, Y)` relation holds; `x` and `y` must be sorted.
    pub fn gp_relation_holds(&self, x: &[usize], y: &[usize]) -> Result<bool> {
        if x.len() != self.r + 1 || y.len() + 1 != self.r {
            return Err(Error::Arity {
                expected: self.r + 1,
                got: x.len(),
            });
        }
        if let Some(&index) = x.iter().chain(y).find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        let sorted = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if !sorted(x) || !sorted(y) {
            return Err(Error::Format("X and Y must be strictly increasing".into()));
        }
        Ok(self.relation_holds(x, y, &mut Scratch::default()))
    }

    /// `φ^ρ(λ) = ρ_{λ₁}⋯ρ_{λ_r} φ(λ)`.
    pub fn rephase(&self, rho: &Rephasing) -> Result<Self> {
        if rho.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "rephasing of length {} for ground set of size {}",
                rho.len(),
                self.n
            )));
        }
        let values = self
            .iter()
            .map(|(s, v)| s.iter().map(|&i| rho.0[i]).product::<Phase>() * v)
            .collect();
        Ok(Phirotope { values, ..self.clone() })
    }

    /// `αφ`, another phirotope of the same phased matroid.
    pub fn scale_global(&self, alpha: Phase) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::Format("global phase must be nonzero".into()));
        }
        Ok(Phirotope {
            values: self.values.iter().map(|&v| alpha * v).collect(),
            ..self.clone()
        })
    }

    pub fn underlying_matroid(&self) -> UnderlyingMatroid {
        UnderlyingMatroid {
            n: self.n,
            r: self.r,
            bases: self.iter().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s).collect(),
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    /// Largest circular distance between corresponding values (infinite if
    /// the supports differ).
    pub fn max_distance(&self, other: &Phirotope) -> f64 {
        if self.n != other.n || self.r != other.r {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Phirotope, tol: Tolerance) -> bool {
        self.max_distance(other) < tol.eps()
    }
}

#[derive(Default)]
struct Scratch {
    terms: Vec<Phase>,
    subset: Vec<usize>,
    angles: Vec<u64>,
}

/// A vector `ρ ∈ (S¹)ⁿ` acting on phirotopes by rephasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Rephasing(Vec<Phase>);

impl Rephasing {
    pub fn new(rho: Vec<Phase>) -> Result<Self> {
        if let Some(p) = rho.iter().position(|v| v.is_zero()) {
            return Err(Error::ZeroScalar(p));
        }
        Ok(Rephasing(rho))
    }

    pub fn identity(n: usize) -> Self {
        Rephasing(vec![Phase::ONE; n])
    }

    pub fn inverse(&self) -> Self {
        Rephasing(self.0.iter().map(|p| p.inv()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Phase] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Phase::ONE)
    }
}

/// The bases `{λ : φ(λ) ≠ 0}` of a phirotope.
#[derive(Clone, Debug, PartialEq)]
pub struct UnderlyingMatroid {
    n: usize,
    r: usize,
    bases: Vec<Vec<usize>>,
}

impl UnderlyingMatroid {
    /// Validates nonemptiness and the basis-exchange axiom.
    pub fn new(n: usize, r: usize, mut bases: Vec<Vec<usize>>) -> Result<Self> {
        if n > MAX_GROUND_SIZE || r > n {
            return Err(Error::DimensionMismatch(format!("rank {r} on {n} elements")));
        }
        for b in bases.iter_mut() {
            b.sort_unstable();
            b.dedup();
            if b.len() != r {
                return Err(Error::Arity {
                    expected: r,
                    got: b.len(),
                });
            }
            if let Some(&index) = b.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        bases.sort();
        bases.dedup();
        if bases.is_empty() {
            return Err(Error::AllZero);
        }
        let m = UnderlyingMatroid { n, r, bases };
        if !m.satisfies_basis_exchange() {
            return Err(Error::BasisExchange);
        }
        Ok(m)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Sorted bases in lexicographic order.
    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn is_basis(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.bases.binary_search(&s).is_ok()
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == Binomials::new(self.n).get(self.n, self.r)
    }

    /// For all bases `A, B` and `a ∈ A \ B` there is `b ∈ B \ A` with
    /// `A − a + b` a basis.
    pub fn satisfies_basis_exchange(&self) -> bool {
        let mask = |b: &[usize]| b.iter().fold(0u64, |m, &i| m | (1 << i));
        let masks: Vec<u64> = self.bases.iter().map(|b| mask(b)).collect();
        let set: HashSet<u64> = masks.iter().copied().collect();
        masks.iter().all(|&a| {
            masks.iter().all(|&b| {
                let mut only_a = a & !b;
                while only_a != 0 {
                    let x = only_a & only_a.wrapping_neg();
                    only_a ^= x;
                    let mut only_b = b & !a;
                    let mut found = false;
                    while only_b != 0 {
                        let y = only_b & only_b.wrapping_neg();
                        only_b ^= y;
                        if set.contains(&((a ^ x) | y)) {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return false;
                    }
                }
                true
            })
        })
    }
}
