//! Python bindings. Phases cross the boundary as `angle_over_pi` floats
//! (`None` for zero), matrices as lists of rows of complex numbers, and
//! ground-set indices are 1-based as in the JSON formats.

use num_complex::Complex64;
use phasemat::json::{forest_to_doc, PhirotopeDoc, VerdictDoc};
use phasemat::realize::{canonical_forest_of, decide_realizability, verify, RealizabilityVerdict};
use phasemat::{hypersum, ComplexMatrix, Phase, Tolerance};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Angle = Option<f64>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tolerance(tol: f64) -> PyResult<Tolerance> {
    Tolerance::new(tol).map_err(err)
}

fn to_phase(a: Angle) -> PyResult<Phase> {
    match a {
        None => Ok(Phase::ZERO),
        Some(x) if x.is_finite() => Ok(Phase::from_angle_over_pi(x.rem_euclid(2.0))),
        Some(x) => Err(err(format!("angle {x} is not finite"))),
    }
}

fn zero_based(basis: &[usize], n: usize) -> PyResult<Vec<usize>> {
    basis
        .iter()
        .map(|&b| match b {
            1.. if b <= n => Ok(b - 1),
            _ => Err(err(format!("element {b} outside 1..={n}"))),
        })
        .collect()
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.to_rows()
}

fn json_text(value: &impl serde::Serialize) -> String {
    serde_json::to_string(value).expect("documents serialize")
}

/// A phirotope stored by its values on sorted bases.
#[pyclass(module = "pyphasemat", frozen)]
struct Phirotope(phasemat::Phirotope);

#[pymethods]
impl Phirotope {
    /// Parses the JSON phirotope format (a bare document or one under a
    /// `"phirotope"` key).
    #[staticmethod]
    #[pyo3(signature = (text, tol = 1e-9))]
    fn from_json(text: &str, tol: f64) -> PyResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(err)?;
        phasemat::json::parse_phirotope(value, tolerance(tol)?)
            .map(Self)
            .map_err(err)
    }

    /// Phirotope of a full-rank matrix given as rows of complex numbers.
    #[staticmethod]
    #[pyo3(signature = (rows, tol = 1e-9))]
    fn from_matrix(rows: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        phasemat::Phirotope::from_matrix(&matrix(rows)?, tolerance(tol)?)
            .map(Self)
            .map_err(err)
    }

    /// Builds a phirotope from `angle_over_pi` values on the bases in
    /// lexicographic order, without checking the Grassmann–Plücker relations.
    #[staticmethod]
    #[pyo3(signature = (n, r, values, tol = 1e-9))]
    fn from_values(n: usize, r: usize, values: Vec<Angle>, tol: f64) -> PyResult<Self> {
        let values = values.into_iter().map(to_phase).collect::<PyResult<_>>()?;
        phasemat::Phirotope::new_unchecked(n, r, values, tolerance(tol)?)
            .map(Self)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        json_text(&PhirotopeDoc::from(&self.0))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.ground_size()
    }

    #[getter]
    fn r(&self) -> usize {
        self.0.rank()
    }

    /// Value on a tuple of 1-based elements (any order).
    fn value(&self, basis: Vec<usize>) -> PyResult<Angle> {
        let tuple = zero_based(&basis, self.0.ground_size())?;
        Ok(self.0.eval(&tuple).map_err(err)?.angle_over_pi())
    }

    /// Values on all bases in lexicographic order.
    fn values(&self) -> Vec<Angle> {
        self.0.values().iter().map(|p| p.angle_over_pi()).collect()
    }

    /// Violated relations as `(X, Y)` pairs of 1-based elements.
    fn check_gp(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.0
            .check_gp()
            .iter()
            .map(|v| (one_based(&v.x), one_based(&v.y)))
            .collect()
    }

    fn is_uniform(&self) -> bool {
        self.0.is_uniform()
    }

    fn is_essentially_oriented(&self) -> PyResult<bool> {
        phasemat::is_essentially_oriented(&self.0).map_err(err)
    }

    /// Canonical spanning forest as 1-based `(row, column)` edges.
    fn spanning_forest(&self) -> PyResult<Vec<[usize; 2]>> {
        Ok(forest_to_doc(&canonical_forest_of(&self.0).map_err(err)?))
    }

    /// `(rho, global_phase, canonical)` with `canonical = global_phase · φ^rho`.
    fn canonicalize(&self) -> PyResult<(Vec<Angle>, Angle, Phirotope)> {
        let c = phasemat::canonicalize(&self.0).map_err(err)?;
        let rho = c.rho.as_slice().iter().map(|p| p.angle_over_pi()).collect();
        Ok((rho, c.global_phase.angle_over_pi(), Phirotope(c.canonical)))
    }

    fn realize(&self) -> Verdict {
        Verdict(decide_realizability(&self.0))
    }

    /// First basis (1-based) where the matrix disagrees, with the expected
    /// and computed phases; `None` if the matrix realizes the phirotope.
    fn verify(&self, rows: Vec<Vec<Complex64>>) -> PyResult<Option<(Vec<usize>, Angle, Angle)>> {
        let w = verify(&self.0, &matrix(rows)?).map_err(err)?;
        Ok(w.map(|w| {
            (
                one_based(&w.basis),
                w.expected.angle_over_pi(),
                w.computed.angle_over_pi(),
            )
        }))
    }

    fn __len__(&self) -> usize {
        self.0.values().len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Phirotope(n={}, r={})", self.0.ground_size(), self.0.rank())
    }
}

/// Outcome of the realizability decision.
#[pyclass(module = "pyphasemat", frozen)]
struct Verdict(RealizabilityVerdict);

#[pymethods]
impl Verdict {
    #[getter]
    fn is_realizable(&self) -> bool {
        self.0.is_realizable()
    }

    /// Canonical realization for a realizable verdict.
    #[getter]
    fn matrix(&self) -> Option<Vec<Vec<Complex64>>> {
        match &self.0 {
            RealizabilityVerdict::Realizable { matrix, .. } => Some(rows(matrix)),
            _ => None,
        }
    }

    /// A realization of the input phirotope itself.
    fn realization_of_input(&self) -> Option<Vec<Vec<Complex64>>> {
        self.0.realization_of_input().as_ref().map(rows)
    }

    /// The JSON report body, as printed by the `realize` command.
    fn to_json(&self) -> String {
        json_text(&VerdictDoc::from(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.to_json())
    }
}

/// Whether 0 lies in the hypersum of phases given as `angle_over_pi`
/// values (`None` for zero).
#[pyfunction]
#[pyo3(signature = (angles, tol = 1e-9))]
fn hypersum_contains_zero(angles: Vec<Angle>, tol: f64) -> PyResult<bool> {
    let phases = angles.into_iter().map(to_phase).collect::<PyResult<Vec<_>>>()?;
    Ok(hypersum(&phases, tolerance(tol)?).contains_zero())
}

#[pymodule]
fn pyphasemat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Phirotope>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(hypersum_contains_zero, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
