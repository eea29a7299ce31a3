//! Associated bipartite graph, canonical spanning forest, and the
//! canonical rephasing of a phirotope.
//!
//! Ground elements `0..r` are the rows of a standard-form realization
//! `(I | N)` and `r..n` its remaining columns; an edge `(i, j)` always has
//! `i < r <= j`. All indices are 0-based.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::phirotope::{Phirotope, Rephasing, UnderlyingMatroid};

/// `σ = Σ_{h∈H} #{k ∈ [r] \ H : k > h}`.
pub fn shuffle_exponent(h: &[usize], r: usize) -> usize {
    h.iter().map(|&x| (x + 1..r).filter(|k| !h.contains(k)).count()).sum()
}

/// `(−1)^σ` for the shuffle moving the rows `H` behind the rows `[r] \ H`.
pub fn shuffle_sign(h: &[usize], r: usize) -> Phase {
    Phase::sign(shuffle_exponent(h, r))
}

/// `(1, …, î, …, r, j)` as a tuple (not sorted).
fn swap_tuple(r: usize, i: usize, j: usize) -> Vec<usize> {
    (0..r).filter(|&k| k != i).chain([j]).collect()
}

/// The phase forced on entry `(i, j)` of every standard-form realization:
/// `(−1)^{r−i} φ(1, …, î, …, r, j)` in 1-based terms.
pub fn entry_phase(phi: &Phirotope, i: usize, j: usize) -> Result<Phase> {
    let r = phi.rank();
    if i >= r {
        return Err(Error::IndexOutOfRange { index: i, n: r });
    }
    let v = phi.eval(&swap_tuple(r, i, j))?;
    Ok(Phase::sign(r - 1 - i) * v)
}

/// Phase of the determinant of the submatrix of `N` (the non-identity part
/// of a standard-form realization) on sorted rows `H` and sorted columns
/// `J`, with `|H| = |J| ∈ {1, 2}` and every column `>= r`.
pub fn minor_phase(phi: &Phirotope, h: &[usize], j: &[usize]) -> Result<Phase> {
    let r = phi.rank();
    if h.len() != j.len() {
        return Err(Error::Arity {
            expected: h.len(),
            got: j.len(),
        });
    }
    if h.is_empty() || h.len() > 2 {
        return Err(Error::UnsupportedMinorSize(h.len()));
    }
    if let Some(&index) = h.iter().find(|&&i| i >= r) {
        return Err(Error::IndexOutOfRange { index, n: r });
    }
    if let Some(&c) = j.iter().find(|&&c| c < r) {
        return Err(Error::Format(format!("column {c} lies in the identity block")));
    }
    let sorted = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
    if !sorted(h) || !sorted(j) {
        return Err(Error::Format(
            "minor rows and columns must be strictly increasing".into(),
        ));
    }
    let tuple: Vec<usize> = (0..r).filter(|k| !h.contains(k)).chain(j.iter().copied()).collect();
    Ok(shuffle_sign(h, r) * phi.eval(&tuple)?)
}

/// Bipartite graph on rows `0..r` and columns `r..n`; `(i, j)` is an edge
/// iff exchanging `i` for `j` in `{0, …, r−1}` gives a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedBipartiteGraph {
    n: usize,
    r: usize,
    edges: Vec<(usize, usize)>,
}

impl AssociatedBipartiteGraph {
    pub fn from_matroid(m: &UnderlyingMatroid) -> Result<Self> {
        let (n, r) = (m.ground_size(), m.rank());
        if !m.is_basis(&(0..r).collect::<Vec<_>>()) {
            return Err(Error::FirstSubsetNotBasis);
        }
        let mut edges = Vec::new();
        for i in 0..r {
            for j in r..n {
                if m.is_basis(&swap_tuple(r, i, j)) {
                    edges.push((i, j));
                }
            }
        }
        Ok(AssociatedBipartiteGraph { n, r, edges })
    }

    pub fn from_phirotope(phi: &Phirotope) -> Result<Self> {
        let (n, r) = (phi.ground_size(), phi.rank());
        if phi.value(&(0..r).collect::<Vec<_>>()).is_zero() {
            return Err(Error::FirstSubsetNotBasis);
        }
        let mut edges = Vec::new();
        for i in 0..r {
            for j in r..n {
                if !phi.eval(&swap_tuple(r, i, j))?.is_zero() {
                    edges.push((i, j));
                }
            }
        }
        Ok(AssociatedBipartiteGraph { n, r, edges })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Edges sorted by row, then column.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.r * (self.n - self.r)
    }
}

/// An acyclic edge set touching every vertex class, with `n − k` edges for
/// `k` connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    pub edges: Vec<(usize, usize)>,
    pub component_count: usize,
}

impl SpanningForest {
    /// Whether `(i, j)` is a forest edge.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }
}

/// Greedy forest: first each row's smallest neighbour, then columns in
/// ascending order with rows scanned from the bottom, keeping every edge
/// that closes no cycle.
pub fn canonical_spanning_forest(g: &AssociatedBipartiteGraph) -> SpanningForest {
    let mut uf = UnionFind::<usize>::new(g.n);
    let mut edges = Vec::with_capacity(g.n.saturating_sub(1));
    for i in 0..g.r {
        if let Some(&(_, j)) = g.edges.iter().find(|&&(row, _)| row == i) {
            uf.union(i, j);
            edges.push((i, j));
        }
    }
    for j in g.r..g.n {
        for i in (0..g.r).rev() {
            if g.has_edge(i, j) && uf.union(i, j) {
                edges.push((i, j));
            }
        }
    }
    SpanningForest {
        component_count: g.n - edges.len(),
        edges,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalizationResult {
    pub rho: Rephasing,
    pub global_phase: Phase,
    pub canonical: Phirotope,
}

/// Finds `ρ` and `g` such that `g · φ^ρ` takes value 1 on `(1, …, r)` and
/// has entry phase 1 on every edge of the canonical spanning tree.
///
/// The gauge is fixed by `ρ_{r+1} = 1` (0-based element `r`).
pub fn canonicalize(phi: &Phirotope) -> Result<CanonicalizationResult> {
    let (n, r) = (phi.ground_size(), phi.rank());
    let graph = AssociatedBipartiteGraph::from_phirotope(phi)?;
    let forest = canonical_spanning_forest(&graph);
    if n == r || forest.component_count != 1 {
        return Err(Error::DisconnectedGraph(forest.component_count));
    }
    let phi0 = phi.value(&(0..r).collect::<Vec<_>>());
    let phi0_inv = phi0.inv();

    // α̃_{ij} = α_{ij} / φ₀ on tree edges; ρ_j = ρ_i / α̃_{ij}.
    let mut rho: Vec<Option<Phase>> = vec![None; n];
    rho[r] = Some(Phase::ONE);
    let mut pending = forest.edges.clone();
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for (i, j) in pending {
            let alpha = entry_phase(phi, i, j)? * phi0_inv;
            match (rho[i], rho[j]) {
                (Some(ri), None) => rho[j] = Some(ri * alpha.inv()),
                (None, Some(rj)) => rho[i] = Some(rj * alpha),
                (None, None) => rest.push((i, j)),
                (Some(_), Some(_)) => unreachable!("forest edge closes a cycle"),
            }
        }
        if rest.len() == before {
            return Err(Error::DisconnectedGraph(forest.component_count));
        }
        pending = rest;
    }
    let rho: Vec<Phase> = rho
        .into_iter()
        .map(|p| p.expect("spanning tree reaches every vertex"))
        .collect();
    let global_phase = (phi0 * rho[..r].iter().copied().product::<Phase>()).inv();
    let rho = Rephasing::new(rho)?;
    let canonical = phi.rephase(&rho)?.scale_global(global_phase)?;

    check_canonical(&canonical, &forest)?;
    Ok(CanonicalizationResult {
        rho,
        global_phase,
        canonical,
    })
}

/// Exact check that `φ(1, …, r) = 1` and every tree entry phase is 1.
pub fn check_canonical(phi: &Phirotope, forest: &SpanningForest) -> Result<()> {
    let r = phi.rank();
    if phi.value(&(0..r).collect::<Vec<_>>()) != Phase::ONE {
        return Err(Error::NotCanonical("value on the first r elements is not 1".into()));
    }
    for &(i, j) in &forest.edges {
        if entry_phase(phi, i, j)? != Phase::ONE {
            return Err(Error::NotCanonical(format!(
                "entry phase at tree edge ({}, {}) is not 1",
                i + 1,
                j + 1
            )));
        }
    }
    Ok(())
}

/// Whether the canonical form has all values in `{−1, 0, 1}`.
pub fn is_essentially_oriented(phi: &Phirotope) -> Result<bool> {
    let c = canonicalize(phi)?;
    let tol = phi.tolerance();
    Ok(c.canonical.values().iter().all(|v| v.is_real(tol)))
}
