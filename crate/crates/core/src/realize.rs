//! Reconstruction of the canonical realization of a uniform phirotope,
//! verification of candidate realizations, and the realizability decision.
//!
//! A canonical realization is `(I | N)` with entry phases forced by the
//! phirotope and norm 1 on the canonical spanning tree (column `r` and row
//! `r − 1`, 0-based). Every other norm is fixed by the phase of a 2×2 minor
//! through a triangular equation once enough neighbouring norms are known.

use rayon::prelude::*;

use crate::canonical::{
    canonical_spanning_forest, canonicalize, check_canonical, entry_phase, minor_phase, AssociatedBipartiteGraph,
    SpanningForest,
};
use crate::cmatrix::{ComplexMatrix, Entry};
use crate::error::{Error, Result};
use crate::phase::{triangle_solve, Phase, TriangleEquation};
use crate::phirotope::{Phirotope, Rephasing};

/// Norms and phases of the non-identity block `N` of a candidate `(I | N)`.
/// Column indices are ground-set indices (`r..n`).
#[derive(Clone, Debug, PartialEq)]
pub struct NormGrid {
    r: usize,
    n: usize,
    norms: Vec<Option<f64>>,
    phases: Vec<Phase>,
}

impl NormGrid {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.n - self.r) + (j - self.r)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn norm(&self, i: usize, j: usize) -> Option<f64> {
        self.norms[self.idx(i, j)]
    }

    pub fn phase(&self, i: usize, j: usize) -> Phase {
        self.phases[self.idx(i, j)]
    }

    fn set(&mut self, i: usize, j: usize, s: f64) {
        let k = self.idx(i, j);
        self.norms[k] = Some(s);
    }

    fn is_real(&self, i: usize, j: usize, phi: &Phirotope) -> bool {
        self.phase(i, j).is_real(phi.tolerance())
    }

    /// Entry phases of `phi` with norm 1 on the forest and unknown elsewhere.
    fn new(phi: &Phirotope, forest: &SpanningForest) -> Result<Self> {
        let (n, r) = (phi.ground_size(), phi.rank());
        let mut phases = Vec::with_capacity(r * (n - r));
        for i in 0..r {
            for j in r..n {
                phases.push(entry_phase(phi, i, j)?);
            }
        }
        let mut grid = NormGrid {
            r,
            n,
            norms: vec![None; r * (n - r)],
            phases,
        };
        for &(i, j) in &forest.edges {
            grid.set(i, j, 1.0);
        }
        Ok(grid)
    }

    /// The matrix `(I | N)`; unknown norms are an error.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let mut entries = Vec::with_capacity(self.r * self.n);
        for i in 0..self.r {
            for j in 0..self.n {
                entries.push(if j < self.r {
                    if i == j {
                        Entry::new(1.0, Phase::ONE)?
                    } else {
                        Entry::ZERO
                    }
                } else {
                    let s = self
                        .norm(i, j)
                        .ok_or_else(|| Error::Format(format!("norm of entry ({}, {}) unknown", i + 1, j + 1)))?;
                    Entry::new(s, self.phase(i, j))?
                });
            }
        }
        ComplexMatrix::new(self.r, self.n, entries)
    }

    /// Solves for the norm at `target` from the phase of
    /// `det [[x_ac, x_ad], [x_bc, x_bd]] = x_ac·x_bd − x_ad·x_bc`, where
    /// `rows = (a, b)` and `cols = (c, d)` need not be sorted and `target`
    /// is the only unknown norm among the four entries.
    fn solve_by_minor(
        &self,
        phi: &Phirotope,
        rows: (usize, usize),
        cols: (usize, usize),
        target: (usize, usize),
    ) -> Result<(f64, TriangleEquation)> {
        let tol = phi.tolerance();
        let (a, b) = rows;
        let (c, d) = cols;
        let sorted_rows = [a.min(b), a.max(b)];
        let sorted_cols = [c.min(d), c.max(d)];
        let flips = usize::from(a > b) + usize::from(c > d);
        let gamma = Phase::sign(flips) * minor_phase(phi, &sorted_rows, &sorted_cols)?;

        let term1 = [(a, c), (b, d)];
        let term2 = [(a, d), (b, c)];
        let phase_of = |t: &[(usize, usize); 2]| self.phase(t[0].0, t[0].1) * self.phase(t[1].0, t[1].1);
        // product of the known norms of a term, skipping the target
        let known = |t: &[(usize, usize); 2]| -> f64 {
            t.iter()
                .filter(|&&e| e != target)
                .map(|&(i, j)| self.norm(i, j).expect("neighbouring norm solved in an earlier pass"))
                .product()
        };
        let (alpha, beta) = (phase_of(&term1), phase_of(&term2));
        let (k1, k2) = (known(&term1), known(&term2));
        if term1.contains(&target) {
            let eq = TriangleEquation::for_s1(gamma, alpha, beta, k2, tol)?;
            Ok((triangle_solve(&eq, tol)?.value / k1, eq))
        } else {
            let eq = TriangleEquation::for_s2(gamma, alpha, beta, k1, tol)?;
            Ok((triangle_solve(&eq, tol)?.value / k2, eq))
        }
    }
}

/// The uniform canonical tree: column `r` and row `r − 1`.
fn uniform_tree(r: usize, n: usize) -> SpanningForest {
    let edges = (0..r).map(|i| (i, r)).chain((r + 1..n).map(|j| (r - 1, j))).collect();
    SpanningForest {
        edges,
        component_count: 1,
    }
}

fn check_reconstructible(canonical: &Phirotope) -> Result<SpanningForest> {
    if !canonical.is_uniform() {
        return Err(Error::NotCanonical("phirotope is not uniform".into()));
    }
    let (n, r) = (canonical.ground_size(), canonical.rank());
    if n == r {
        return Err(Error::DisconnectedGraph(n));
    }
    let forest = uniform_tree(r, n);
    check_canonical(canonical, &forest)?;
    Ok(forest)
}

fn solve_step(
    grid: &mut NormGrid,
    phi: &Phirotope,
    pass: u8,
    rows: (usize, usize),
    cols: (usize, usize),
    target: (usize, usize),
) -> Result<()> {
    match grid.solve_by_minor(phi, rows, cols, target) {
        Ok((s, _)) => {
            grid.set(target.0, target.1, s);
            Ok(())
        }
        Err(e) => Err(Error::TriangleUnsolvable {
            row: target.0,
            col: target.1,
            pass,
            source: Box::new(e),
        }),
    }
}

/// Solves every norm of the canonical realization of a uniform,
/// canonical, not essentially oriented phirotope.
pub fn reconstruct_grid(canonical: &Phirotope) -> Result<NormGrid> {
    let forest = check_reconstructible(canonical)?;
    let (n, r) = (canonical.ground_size(), canonical.rank());
    let phi = canonical;
    let mut grid = NormGrid::new(phi, &forest)?;
    let unknown: Vec<(usize, usize)> = (0..r.saturating_sub(1))
        .flat_map(|i| (r + 1..n).map(move |j| (i, j)))
        .collect();
    let non_real: Vec<(usize, usize)> = unknown
        .iter()
        .copied()
        .filter(|&(i, j)| !grid.is_real(i, j, phi))
        .collect();
    let Some(&(m0, k0)) = non_real.first() else {
        return Err(Error::EssentiallyOriented);
    };
    let last = r - 1;

    // Pass 1: rows {i, r−1}, columns {r, j}: det = 1·α_{r−1,j} − s_ij α_ij.
    for &(i, j) in &non_real {
        solve_step(&mut grid, phi, 1, (i, last), (r, j), (i, j))?;
    }
    let row_anchor = |i: usize| non_real.iter().find(|&&(a, _)| a == i).map(|&(_, k)| k);
    let col_anchor = |j: usize| non_real.iter().find(|&&(_, b)| b == j).map(|&(m, _)| m);

    // Pass 2: real entry in a row with a non-real entry at column k:
    // rows {i, r−1}, columns {j, k}: det = s_ij α_ij − s_ik α_ik.
    for &(i, j) in &unknown {
        if grid.norm(i, j).is_none() {
            if let Some(k) = row_anchor(i) {
                solve_step(&mut grid, phi, 2, (i, last), (j, k), (i, j))?;
            }
        }
    }
    // Pass 3: real row, column with a non-real entry at row m:
    // rows {i, m}, columns {r, j}: det = s_mj α_mj − s_ij α_ij.
    for &(i, j) in &unknown {
        if grid.norm(i, j).is_none() {
            if let Some(m) = col_anchor(j) {
                solve_step(&mut grid, phi, 3, (i, m), (r, j), (i, j))?;
            }
        }
    }
    // Pass 4: real row and real column, anchor (m, k):
    // rows {i, m}, columns {k, j}: det = s_ik s_mj α_ik α_mj − s_ij s_mk α_ij α_mk.
    for &(i, j) in &unknown {
        if grid.norm(i, j).is_none() {
            solve_step(&mut grid, phi, 4, (i, m0), (k0, j), (i, j))?;
        }
    }
    Ok(grid)
}

/// The canonical realization `(I | Ñ)` of a uniform canonical phirotope
/// that is not essentially oriented.
pub fn reconstruct(canonical: &Phirotope) -> Result<ComplexMatrix> {
    reconstruct_grid(canonical)?.to_matrix()
}

/// A basis on which a candidate realization disagrees with a phirotope.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub basis: Vec<usize>,
    pub expected: Phase,
    pub computed: Phase,
}

fn check_dims(phi: &Phirotope, m: &ComplexMatrix) -> Result<()> {
    if (m.rows(), m.cols()) != (phi.rank(), phi.ground_size()) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a phirotope of rank {} on {} elements",
            m.rows(),
            m.cols(),
            phi.rank(),
            phi.ground_size()
        )));
    }
    Ok(())
}

/// The lexicographically first sorted r-subset whose minor phase differs
/// from the phirotope by at least the tolerance, if any.
pub fn verify(phi: &Phirotope, m: &ComplexMatrix) -> Result<Option<Witness>> {
    check_dims(phi, m)?;
    let tol = phi.tolerance();
    let subsets: Vec<(Vec<usize>, Phase)> = phi.iter().collect();
    subsets
        .par_iter()
        .map(|(basis, expected)| {
            let computed = Phase::of(m.maximal_minor(basis)?);
            Ok((!computed.approx_eq(*expected, tol)).then(|| Witness {
                basis: basis.clone(),
                expected: *expected,
                computed,
            }))
        })
        .collect::<Result<Vec<_>>>()
        .map(|w| w.into_iter().flatten().next())
}

/// Largest circular distance between `φ(λ)` and the phase of the minor
/// `[λ]_M` over all sorted r-subsets (infinite on a zero/nonzero mismatch).
pub fn max_phase_residual(phi: &Phirotope, m: &ComplexMatrix) -> Result<f64> {
    check_dims(phi, m)?;
    let subsets: Vec<(Vec<usize>, Phase)> = phi.iter().collect();
    subsets
        .par_iter()
        .map(|(basis, expected)| Ok(Phase::of(m.maximal_minor(basis)?).distance(*expected)))
        .collect::<Result<Vec<f64>>>()
        .map(|d| d.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnsupportedReason {
    EssentiallyOriented,
    NotUniform,
    NotAPhirotope,
    Disconnected,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NonRealizability {
    /// The unique candidate realization disagrees with the canonical
    /// phirotope on `witness.basis`.
    Mismatch { witness: Witness, candidate: ComplexMatrix },
    /// A triangular equation for entry `(row, col)` has no positive solution.
    Infeasible {
        row: usize,
        col: usize,
        pass: u8,
        equation: TriangleEquation,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RealizabilityVerdict {
    /// `matrix` is the canonical realization of
    /// `global_phase · φ^rho`.
    Realizable {
        matrix: ComplexMatrix,
        rho: Rephasing,
        global_phase: Phase,
    },
    NotRealizable(NonRealizability),
    Unsupported(UnsupportedReason),
}

impl RealizabilityVerdict {
    pub fn is_realizable(&self) -> bool {
        matches!(self, RealizabilityVerdict::Realizable { .. })
    }

    /// For a realizable verdict, a realization of the input phirotope
    /// itself: the canonical matrix with columns scaled by `ρ⁻¹` and the
    /// first row by the inverse global phase.
    pub fn realization_of_input(&self) -> Option<ComplexMatrix> {
        let RealizabilityVerdict::Realizable {
            matrix,
            rho,
            global_phase,
        } = self
        else {
            return None;
        };
        let mut rows = vec![Phase::ONE.to_complex(); matrix.rows()];
        rows[0] = global_phase.inv().to_complex();
        let cols: Vec<_> = rho.inverse().as_slice().iter().map(|p| p.to_complex()).collect();
        matrix.scale(&rows, &cols).ok()
    }
}

/// Decides whether a uniform phirotope that is not essentially oriented is
/// realizable. Every other input is reported as unsupported.
pub fn decide_realizability(phi: &Phirotope) -> RealizabilityVerdict {
    use RealizabilityVerdict::*;
    if !phi.satisfies_gp() {
        return Unsupported(UnsupportedReason::NotAPhirotope);
    }
    if !phi.is_uniform() {
        return Unsupported(UnsupportedReason::NotUniform);
    }
    // a uniform phirotope always has a basis first and a complete graph, so
    // canonicalization can only fail when there are no columns beyond r
    let Ok(c) = canonicalize(phi) else {
        return Unsupported(UnsupportedReason::Disconnected);
    };
    let tol = phi.tolerance();
    if c.canonical.values().iter().all(|v| v.is_real(tol)) {
        return Unsupported(UnsupportedReason::EssentiallyOriented);
    }
    let candidate = match reconstruct(&c.canonical) {
        Ok(m) => m,
        // all entry phases real but some value is not: the all-ones
        // candidate has only real minors and exposes a mismatch
        Err(Error::EssentiallyOriented) => all_ones_candidate(&c.canonical),
        Err(Error::TriangleUnsolvable { row, col, pass, source }) => {
            let equation = match *source {
                Error::DegenerateTriangle(eq) | Error::InfeasibleTriangle(eq) => eq,
                other => unreachable!("triangle solver error {other:?}"),
            };
            return NotRealizable(NonRealizability::Infeasible {
                row,
                col,
                pass,
                equation,
            });
        }
        Err(e) => unreachable!("reconstruction of a checked canonical phirotope failed: {e}"),
    };
    match verify(&c.canonical, &candidate).expect("dimensions agree") {
        None => Realizable {
            matrix: candidate,
            rho: c.rho,
            global_phase: c.global_phase,
        },
        Some(witness) => NotRealizable(NonRealizability::Mismatch { witness, candidate }),
    }
}

fn all_ones_candidate(canonical: &Phirotope) -> ComplexMatrix {
    let (n, r) = (canonical.ground_size(), canonical.rank());
    let mut grid = NormGrid::new(canonical, &uniform_tree(r, n)).expect("checked canonical phirotope");
    for i in 0..r {
        for j in r..n {
            grid.set(i, j, 1.0);
        }
    }
    grid.to_matrix().expect("all norms set")
}

fn check_rank2_column(canonical: &Phirotope, j: usize) -> Result<()> {
    if canonical.rank() != 2 {
        return Err(Error::DimensionMismatch(format!("rank {} is not 2", canonical.rank())));
    }
    if j < 2 || j >= canonical.ground_size() {
        return Err(Error::IndexOutOfRange {
            index: j,
            n: canonical.ground_size(),
        });
    }
    Ok(())
}

/// Norm of entry `(0, j)` of the canonical realization of a rank-2
/// canonical phirotope.
pub fn rank2_norm(canonical: &Phirotope, j: usize) -> Result<f64> {
    check_rank2_column(canonical, j)?;
    if j == 2 {
        return Ok(1.0);
    }
    let forest = uniform_tree(2, canonical.ground_size());
    let grid = NormGrid::new(canonical, &forest)?;
    Ok(grid.solve_by_minor(canonical, (0, 1), (2, j), (0, j))?.0)
}

/// `sin θ_j / sin ψ_j` with `θ_j = arg φ(2, j)` and
/// `ψ_j = arg φ(2, j) − arg φ(1, j)` (0-based elements). For a canonical
/// phirotope this is the negated norm of entry `(0, j)`.
pub fn rank2_sine_ratio(canonical: &Phirotope, j: usize) -> Result<f64> {
    check_rank2_column(canonical, j)?;
    let theta = canonical.eval(&[2, j])?.angle();
    let other = canonical.eval(&[1, j])?.angle();
    match (theta, other) {
        (Some(t), Some(o)) => Ok(t.sin() / (t - o).sin()),
        _ => Err(Error::NotCanonical("zero value in rank-2 sine ratio".into())),
    }
}

/// Rescales a standard-form matrix by positive row and column factors
/// (keeping the identity block) so the entry on the `k`-th forest edge has
/// norm `values[k]`. Phases are untouched.
pub fn normalize_to_tree(m: &ComplexMatrix, forest: &SpanningForest, values: &[f64]) -> Result<ComplexMatrix> {
    let (r, n) = (m.rows(), m.cols());
    if !m.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let bad = |msg: String| Err(Error::NonSpanningForest(msg));
    if values.len() != forest.edges.len() {
        return bad(format!("{} values for {} edges", values.len(), forest.edges.len()));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return bad(format!("value {v} is not positive"));
    }
    if forest.edges.len() + forest.component_count != n {
        return bad(format!(
            "{} edges and {} components on {n} vertices",
            forest.edges.len(),
            forest.component_count
        ));
    }
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(n);
    for &(i, j) in &forest.edges {
        if i >= r || j < r || j >= n {
            return bad(format!("edge ({}, {}) outside the bipartite graph", i + 1, j + 1));
        }
        if m.entry(i, j).is_zero() {
            return bad(format!("entry ({}, {}) is zero", i + 1, j + 1));
        }
        if !uf.union(i, j) {
            return bad(format!("edge ({}, {}) closes a cycle", i + 1, j + 1));
        }
    }

    // scale[v] is a_v for rows and b_v for columns
    let mut scale: Vec<Option<f64>> = vec![None; n];
    for root in 0..n {
        if scale[root].is_some() {
            continue;
        }
        scale[root] = Some(1.0);
        let mut changed = true;
        while changed {
            changed = false;
            for (&(i, j), &v) in forest.edges.iter().zip(values) {
                let e = m.entry(i, j).norm();
                match (scale[i], scale[j]) {
                    (Some(a), None) => scale[j] = Some(v / (a * e)),
                    (None, Some(b)) => scale[i] = Some(v / (e * b)),
                    _ => continue,
                }
                changed = true;
            }
        }
    }
    let scale: Vec<f64> = scale.into_iter().map(|s| s.expect("every vertex has a root")).collect();
    let mut entries = Vec::with_capacity(r * n);
    for i in 0..r {
        for j in 0..n {
            let e = m.entry(i, j);
            entries.push(if j < r || e.is_zero() {
                e
            } else {
                Entry::new(e.norm() * scale[i] * scale[j], e.phase())?
            });
        }
    }
    ComplexMatrix::new(r, n, entries)
}

/// The canonical spanning forest of the bipartite graph of `phi`.
pub fn canonical_forest_of(phi: &Phirotope) -> Result<SpanningForest> {
    Ok(canonical_spanning_forest(&AssociatedBipartiteGraph::from_phirotope(
        phi,
    )?))
}
