//! Helpers shared by the integration tests: seeded random instances, the
//! brute-force hypersum oracle, and the canonical-matrix oracle.
#![allow(dead_code)]

use num_complex::Complex64;
use phasemat::canonical::{canonical_spanning_forest, canonicalize, AssociatedBipartiteGraph};
use phasemat::json::{parse_matrix, parse_phirotope};
use phasemat::realize::normalize_to_tree;
use phasemat::{ComplexMatrix, Phase, Phirotope, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const TOL: Tolerance = Tolerance::DEFAULT;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, n: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..r * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_complex(r, n, &v).unwrap()
}

pub fn random_real_matrix(rng: &mut ChaCha8Rng, r: usize, n: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..r * n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
        .collect();
    ComplexMatrix::from_complex(r, n, &v).unwrap()
}

/// `(I | N)` with Gaussian `N`.
pub fn random_standard_form(rng: &mut ChaCha8Rng, r: usize, n: usize) -> ComplexMatrix {
    let mut v = vec![Complex64::new(0.0, 0.0); r * n];
    for i in 0..r {
        v[i * n + i] = Complex64::new(1.0, 0.0);
        for j in r..n {
            v[i * n + j] = gaussian(rng);
        }
    }
    ComplexMatrix::from_complex(r, n, &v).unwrap()
}

pub fn random_phase(rng: &mut ChaCha8Rng) -> Phase {
    Phase::from_angle_over_pi(rng.random_range(0.0..2.0))
}

pub fn random_invertible(rng: &mut ChaCha8Rng, r: usize) -> Vec<Complex64> {
    loop {
        let mut a: Vec<Complex64> = (0..r * r).map(|_| gaussian(rng)).collect();
        let keep = a.clone();
        if phasemat::cmatrix::determinant(&mut a, r).norm() > 1e-3 {
            return keep;
        }
    }
}

/// The canonical realization computed directly from a realization `m`:
/// rephase the columns, bring to standard form, and rescale so the
/// canonical tree has norm 1. Independent of the triangle-solving passes.
pub fn oracle_canonical_matrix(m: &ComplexMatrix, tol: Tolerance) -> (Phirotope, ComplexMatrix) {
    let phi = Phirotope::from_matrix(m, tol).unwrap();
    let c = canonicalize(&phi).unwrap();
    let cols: Vec<Complex64> = c.rho.as_slice().iter().map(|p| p.to_complex()).collect();
    let rows = vec![Complex64::new(1.0, 0.0); m.rows()];
    let standard = m.scale(&rows, &cols).unwrap().to_standard_form().unwrap();
    let forest = canonical_spanning_forest(&AssociatedBipartiteGraph::from_phirotope(&c.canonical).unwrap());
    let ones = vec![1.0; forest.edges.len()];
    (c.canonical, normalize_to_tree(&standard, &forest, &ones).unwrap())
}

/// Whether `Σ c_k z_k = 0` for some `c ∈ [1e-4, 1]^k` (up to a residual of
/// 1e-7). The feasible set is a polytope cut by two real equations, so if
/// it is nonempty it has a vertex with at most two coefficients strictly
/// inside the box; all such vertices are enumerated.
pub fn positive_combination_vanishes(z: &[Complex64]) -> bool {
    const LO: f64 = 1e-4;
    const HI: f64 = 1.0;
    let k = z.len();
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let inside = |c: f64| (LO - 1e-12..=HI + 1e-12).contains(&c);
    let mut free_sets: Vec<Vec<usize>> = vec![vec![]];
    free_sets.extend((0..k).map(|p| vec![p]));
    for p in 0..k {
        for q in p + 1..k {
            free_sets.push(vec![p, q]);
        }
    }
    for free in free_sets {
        let fixed: Vec<usize> = (0..k).filter(|i| !free.contains(i)).collect();
        for mask in 0u32..(1 << fixed.len()) {
            let rest: Complex64 = fixed
                .iter()
                .enumerate()
                .map(|(b, &i)| z[i] * if mask >> b & 1 == 1 { HI } else { LO })
                .sum();
            let residual = match free[..] {
                [] => rest.norm(),
                [p] => {
                    let c = -(z[p].conj() * rest).re / z[p].norm_sqr();
                    if !inside(c) {
                        continue;
                    }
                    (rest + z[p] * c).norm()
                }
                [p, q] => {
                    let det = cross(z[p], z[q]);
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let cp = cross(-rest, z[q]) / det;
                    let cq = cross(z[p], -rest) / det;
                    if !(inside(cp) && inside(cq)) {
                        continue;
                    }
                    (rest + z[p] * cp + z[q] * cq).norm()
                }
                _ => unreachable!(),
            };
            if residual < 1e-7 {
                return true;
            }
        }
    }
    false
}

/// Oracle for `0 ∈ ⊞ phases`: all-zero (nonempty) sets contain zero,
/// otherwise zero must be a strictly positive combination of the nonzero
/// phases.
pub fn oracle_contains_zero(phases: &[Phase]) -> bool {
    if phases.is_empty() {
        return false;
    }
    let z: Vec<Complex64> = phases.iter().filter(|p| !p.is_zero()).map(|p| p.to_complex()).collect();
    z.is_empty() || positive_combination_vanishes(&z)
}

pub fn fixture(name: &str) -> serde_json::Value {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR")).into()
}

pub fn runex_matrix() -> ComplexMatrix {
    parse_matrix(fixture("runex_matrix.json")).unwrap()
}

pub fn runex_phirotope() -> Phirotope {
    parse_phirotope(fixture("runex_phirotope.json"), TOL).unwrap()
}

pub fn nonreal2ex() -> Phirotope {
    parse_phirotope(fixture("nonreal2ex_phirotope.json"), TOL).unwrap()
}

pub fn ph(x: f64) -> Phase {
    Phase::from_angle_over_pi(x)
}
