//! JSON wire formats. Indices are 1-based on the wire and angles are given
//! as fractions of π in `[0, 2)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::{CanonicalizationResult, SpanningForest};
use crate::cmatrix::{ComplexMatrix, Entry};
use crate::error::{Error, Result};
use crate::phase::{Phase, Tolerance, TriangleEquation};
use crate::phirotope::{GpViolation, Phirotope};
use crate::realize::{NonRealizability, RealizabilityVerdict, UnsupportedReason, Witness};
use crate::subsets::{combinations, Binomials};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AngleRepr {
    angle_over_pi: f64,
}

fn check_angle(x: f64) -> std::result::Result<f64, String> {
    if x.is_finite() && (0.0..2.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("angle_over_pi {x} outside [0, 2)"))
    }
}

/// `null` for zero, otherwise `{"angle_over_pi": x}`.
impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.angle_over_pi()
            .map(|angle_over_pi| AngleRepr { angle_over_pi })
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Option::<AngleRepr>::deserialize(d)? {
            None => Ok(Phase::ZERO),
            Some(a) => check_angle(a.angle_over_pi)
                .map(Phase::from_angle_over_pi)
                .map_err(D::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisValue {
    pub basis: Vec<usize>,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhirotopeDoc {
    pub n: usize,
    pub r: usize,
    pub values: Vec<BasisValue>,
}

impl From<&Phirotope> for PhirotopeDoc {
    fn from(phi: &Phirotope) -> Self {
        PhirotopeDoc {
            n: phi.ground_size(),
            r: phi.rank(),
            values: phi
                .iter()
                .map(|(s, phase)| BasisValue {
                    basis: one_based(&s),
                    phase,
                })
                .collect(),
        }
    }
}

impl PhirotopeDoc {
    /// Builds the phirotope without checking the Grassmann–Plücker
    /// relations. Every sorted r-subset must be listed exactly once, in any
    /// order.
    pub fn to_phirotope(&self, tol: Tolerance) -> Result<Phirotope> {
        let (n, r) = (self.n, self.r);
        if r == 0 || r > n || n > crate::phirotope::MAX_GROUND_SIZE {
            return Err(Error::Format(format!("rank {r} on a ground set of size {n}")));
        }
        let binom = Binomials::new(n);
        let mut values: Vec<Option<Phase>> = vec![None; binom.get(n, r)];
        for v in &self.values {
            let b = &v.basis;
            if b.len() != r || b.iter().any(|&i| i == 0 || i > n) || !b.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Format(format!(
                    "basis {b:?} is not an increasing {r}-subset of 1..={n}"
                )));
            }
            let slot = &mut values[binom.rank(&zero_based(b))];
            if slot.is_some() {
                return Err(Error::Format(format!("basis {b:?} listed twice")));
            }
            *slot = Some(v.phase);
        }
        if let Some((s, _)) = combinations(n, r).zip(&values).find(|(_, v)| v.is_none()) {
            return Err(Error::Format(format!("basis {:?} missing", one_based(&s))));
        }
        Phirotope::new_unchecked(n, r, values.into_iter().map(Option::unwrap).collect(), tol)
            .map_err(|e| Error::Format(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub norm: f64,
    pub angle_over_pi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Option<EntryDoc>>>,
}

impl From<&ComplexMatrix> for MatrixDoc {
    fn from(m: &ComplexMatrix) -> Self {
        let entries = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| {
                        let e = m.entry(i, j);
                        e.phase().angle_over_pi().map(|angle_over_pi| EntryDoc {
                            norm: e.norm(),
                            angle_over_pi,
                        })
                    })
                    .collect()
            })
            .collect();
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|row| row.len() != self.cols) {
            return Err(Error::Format(format!(
                "entries do not form a {}x{} array",
                self.rows, self.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for e in self.entries.iter().flatten() {
            entries.push(match e {
                None => Entry::ZERO,
                Some(e) => {
                    let angle = check_angle(e.angle_over_pi).map_err(Error::Format)?;
                    if !(e.norm.is_finite() && e.norm > 0.0) {
                        return Err(Error::Format(format!(
                            "norm {} is not positive (zero entries are null)",
                            e.norm
                        )));
                    }
                    Entry::new(e.norm, Phase::from_angle_over_pi(angle))?
                }
            });
        }
        ComplexMatrix::new(self.rows, self.cols, entries).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Forest edges as 1-based `[row, column]` pairs.
pub fn forest_to_doc(f: &SpanningForest) -> Vec<[usize; 2]> {
    f.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationDoc {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl From<&GpViolation> for ViolationDoc {
    fn from(v: &GpViolation) -> Self {
        ViolationDoc {
            x: one_based(&v.x),
            y: one_based(&v.y),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalizationDoc {
    pub rho: Vec<Phase>,
    pub global_phase: Phase,
    pub canonical: PhirotopeDoc,
}

impl From<&CanonicalizationResult> for CanonicalizationDoc {
    fn from(c: &CanonicalizationResult) -> Self {
        CanonicalizationDoc {
            rho: c.rho.as_slice().to_vec(),
            global_phase: c.global_phase,
            canonical: (&c.canonical).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessDoc {
    pub basis: Vec<usize>,
    pub expected: Phase,
    pub computed: Phase,
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        WitnessDoc {
            basis: one_based(&w.basis),
            expected: w.expected,
            computed: w.computed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationDoc {
    pub gamma: Phase,
    pub alpha: Phase,
    pub beta: Phase,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
}

impl From<&TriangleEquation> for EquationDoc {
    fn from(e: &TriangleEquation) -> Self {
        EquationDoc {
            gamma: e.gamma,
            alpha: e.alpha,
            beta: e.beta,
            s1: e.s1,
            s2: e.s2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictDoc {
    Realizable {
        matrix: MatrixDoc,
        rho: Vec<Phase>,
        global_phase: Phase,
    },
    NotRealizable(NotRealizableDoc),
    Unsupported {
        reason: &'static str,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotRealizableDoc {
    /// The witness refers to the canonical phirotope.
    Mismatch { witness: WitnessDoc, candidate: MatrixDoc },
    Infeasible {
        entry: [usize; 2],
        pass: u8,
        equation: EquationDoc,
    },
}

pub fn unsupported_reason_name(r: UnsupportedReason) -> &'static str {
    match r {
        UnsupportedReason::EssentiallyOriented => "essentially_oriented",
        UnsupportedReason::NotUniform => "not_uniform",
        UnsupportedReason::NotAPhirotope => "not_a_phirotope",
        UnsupportedReason::Disconnected => "disconnected",
    }
}

impl From<&RealizabilityVerdict> for VerdictDoc {
    fn from(v: &RealizabilityVerdict) -> Self {
        match v {
            RealizabilityVerdict::Realizable {
                matrix,
                rho,
                global_phase,
            } => VerdictDoc::Realizable {
                matrix: matrix.into(),
                rho: rho.as_slice().to_vec(),
                global_phase: *global_phase,
            },
            RealizabilityVerdict::NotRealizable(NonRealizability::Mismatch { witness, candidate }) => {
                VerdictDoc::NotRealizable(NotRealizableDoc::Mismatch {
                    witness: witness.into(),
                    candidate: candidate.into(),
                })
            }
            RealizabilityVerdict::NotRealizable(NonRealizability::Infeasible {
                row,
                col,
                pass,
                equation,
            }) => VerdictDoc::NotRealizable(NotRealizableDoc::Infeasible {
                entry: [row + 1, col + 1],
                pass: *pass,
                equation: equation.into(),
            }),
            RealizabilityVerdict::Unsupported(r) => VerdictDoc::Unsupported {
                reason: unsupported_reason_name(*r),
            },
        }
    }
}

/// Accepts either a bare document or an object wrapping it under `key`
/// (so reports can be fed back as inputs).
pub fn unwrap_key(value: serde_json::Value, key: &str) -> serde_json::Value {
    match value {
        serde_json::Value::Object(mut map) if map.contains_key(key) => map.remove(key).expect("key present"),
        other => other,
    }
}

pub fn parse_phirotope(value: serde_json::Value, tol: Tolerance) -> Result<Phirotope> {
    let doc: PhirotopeDoc =
        serde_json::from_value(unwrap_key(value, "phirotope")).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_phirotope(tol)
}

pub fn parse_matrix(value: serde_json::Value) -> Result<ComplexMatrix> {
    let doc: MatrixDoc =
        serde_json::from_value(unwrap_key(value, "matrix")).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_matrix()
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|&i| i + 1).collect()
}

fn zero_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|&i| i - 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn phase_wire_format() {
        assert_eq!(serde_json::to_value(Phase::ZERO).unwrap(), json!(null));
        assert_eq!(serde_json::to_value(Phase::I).unwrap(), json!({"angle_over_pi": 0.5}));
        let p: Phase = serde_json::from_value(json!({"angle_over_pi": 1.75})).unwrap();
        assert_eq!(p, Phase::from_angle_over_pi(1.75));
        assert!(serde_json::from_value::<Phase>(json!({"angle_over_pi": 2.0})).is_err());
        assert!(serde_json::from_value::<Phase>(json!({"angle_over_pi": -0.5})).is_err());
        assert!(serde_json::from_value::<Phase>(json!({"angle": 0.5})).is_err());
    }

    #[test]
    fn phirotope_doc_checks_coverage() {
        let base = json!({"n": 3, "r": 2, "values": [
            {"basis": [1, 2], "phase": {"angle_over_pi": 0}},
            {"basis": [2, 3], "phase": null},
            {"basis": [1, 3], "phase": {"angle_over_pi": 0.5}}
        ]});
        let phi = parse_phirotope(base.clone(), Tolerance::DEFAULT).unwrap();
        assert_eq!(phi.value(&[0, 2]), Phase::I);
        let wrapped = json!({"command": "x", "phirotope": base});
        assert_eq!(parse_phirotope(wrapped, Tolerance::DEFAULT).unwrap(), phi);

        let missing = json!({"n": 3, "r": 2, "values": [{"basis": [1, 2], "phase": null}]});
        assert!(parse_phirotope(missing, Tolerance::DEFAULT).is_err());
        let unsorted = json!({"n": 2, "r": 2, "values": [{"basis": [2, 1], "phase": null}]});
        assert!(parse_phirotope(unsorted, Tolerance::DEFAULT).is_err());
        let twice = json!({"n": 2, "r": 1, "values": [
            {"basis": [1], "phase": null}, {"basis": [1], "phase": null}, {"basis": [2], "phase": null}
        ]});
        assert!(parse_phirotope(twice, Tolerance::DEFAULT).is_err());
    }

    #[test]
    fn matrix_doc_round_trip() {
        let doc = json!({"rows": 1, "cols": 2, "entries": [[{"norm": 2.0, "angle_over_pi": 0.25}, null]]});
        let m = parse_matrix(doc.clone()).unwrap();
        assert_eq!(serde_json::to_value(MatrixDoc::from(&m)).unwrap(), doc);
        let bad = json!({"rows": 1, "cols": 2, "entries": [[{"norm": 0.0, "angle_over_pi": 0.25}, null]]});
        assert!(parse_matrix(bad).is_err());
        let ragged = json!({"rows": 1, "cols": 2, "entries": [[null]]});
        assert!(parse_matrix(ragged).is_err());
    }
}
