//! Dense complex matrices in polar form, with just the linear algebra the
//! realization machinery needs: maximal minors, row/column scaling and the
//! standard form `(I | N)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::{Phase, ZERO_NORM_CUTOFF};

/// A matrix entry `norm · phase`, with `norm = 0` iff `phase` is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    norm: f64,
    phase: Phase,
}

impl Entry {
    pub const ZERO: Entry = Entry {
        norm: 0.0,
        phase: Phase::ZERO,
    };

    pub fn new(norm: f64, phase: Phase) -> Result<Entry> {
        if !norm.is_finite() || norm < 0.0 || (norm == 0.0) != phase.is_zero() {
            return Err(Error::Format(format!(
                "entry norm {norm} inconsistent with phase {phase}"
            )));
        }
        Ok(Entry { norm, phase })
    }

    /// Moduli below the zero cutoff become the exact zero entry.
    pub fn from_complex(z: Complex64) -> Entry {
        let norm = z.norm();
        if norm < ZERO_NORM_CUTOFF || !norm.is_finite() {
            Entry::ZERO
        } else {
            Entry {
                norm,
                phase: Phase::of(z),
            }
        }
    }

    pub fn norm(self) -> f64 {
        self.norm
    }

    pub fn phase(self) -> Phase {
        self.phase
    }

    pub fn is_zero(self) -> bool {
        self.phase.is_zero()
    }

    pub fn to_complex(self) -> Complex64 {
        self.phase.to_complex() * self.norm
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Entry>) -> Result<Self> {
        if rows == 0 || rows > cols {
            return Err(Error::DimensionMismatch(format!(
                "need 0 < rows <= cols, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    /// Row-major complex entries.
    pub fn from_complex(rows: usize, cols: usize, values: &[Complex64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().copied().map(Entry::from_complex).collect())
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_complex(rows.len(), cols, &flat)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entry(i, j).to_complex()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `[λ]_M`: determinant of the columns `lambda`, in the given order.
    pub fn maximal_minor(&self, lambda: &[usize]) -> Result<Complex64> {
        if lambda.len() != self.rows {
            return Err(Error::Arity {
                expected: self.rows,
                got: lambda.len(),
            });
        }
        if let Some(&index) = lambda.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange { index, n: self.cols });
        }
        let k = self.rows;
        for (a, &x) in lambda.iter().enumerate() {
            if lambda[a + 1..].contains(&x) {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        let mut block = Vec::with_capacity(k * k);
        for i in 0..k {
            for &c in lambda {
                block.push(self.get(i, c));
            }
        }
        Ok(determinant(&mut block, k))
    }

    /// Entry `(i, j)` multiplied by `row_scalars[i] · col_scalars[j]`.
    pub fn scale(&self, row_scalars: &[Complex64], col_scalars: &[Complex64]) -> Result<Self> {
        if row_scalars.len() != self.rows || col_scalars.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} row and {} column scalars for a {}x{} matrix",
                row_scalars.len(),
                col_scalars.len(),
                self.rows,
                self.cols
            )));
        }
        let zero =
            |s: &[Complex64], offset: usize| s.iter().position(|z| z.norm() < ZERO_NORM_CUTOFF).map(|p| p + offset);
        if let Some(p) = zero(row_scalars, 0).or_else(|| zero(col_scalars, self.rows)) {
            return Err(Error::ZeroScalar(p));
        }
        let entries = row_scalars
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| {
                col_scalars
                    .iter()
                    .enumerate()
                    .map(move |(j, &b)| Entry::from_complex(self.get(i, j) * a * b))
            })
            .collect();
        Self::new(self.rows, self.cols, entries)
    }

    /// `A · M` for a square `A` given row-major.
    pub fn left_multiply(&self, a: &[Complex64]) -> Result<Self> {
        let r = self.rows;
        if a.len() != r * r {
            return Err(Error::DimensionMismatch(format!(
                "left factor with {} entries for {r} rows",
                a.len()
            )));
        }
        let mut out = Vec::with_capacity(self.entries.len());
        for i in 0..r {
            for j in 0..self.cols {
                let z: Complex64 = (0..r).map(|k| a[i * r + k] * self.get(k, j)).sum();
                out.push(z);
            }
        }
        Self::from_complex(r, self.cols, &out)
    }

    /// The representative `(I | N)` of the orbit `{A·M : A ∈ GL(r, ℂ)}`,
    /// obtained by Gauss–Jordan elimination on the leading block.
    pub fn to_standard_form(&self) -> Result<Self> {
        let r = self.rows;
        let n = self.cols;
        let mut lead: Vec<Complex64> = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        if determinant(&mut lead, r).norm() < ZERO_NORM_CUTOFF {
            return Err(Error::SingularLeadingBlock(r));
        }
        let mut work: Vec<Vec<Complex64>> = self.to_rows();
        for col in 0..r {
            let pivot = (col..r)
                .max_by(|&a, &b| work[a][col].norm().total_cmp(&work[b][col].norm()))
                .expect("nonempty pivot range");
            work.swap(col, pivot);
            let inv = work[col][col].inv();
            for x in work[col].iter_mut() {
                *x *= inv;
            }
            for row in 0..r {
                if row == col {
                    continue;
                }
                let factor = work[row][col];
                if factor.norm() == 0.0 {
                    continue;
                }
                let pivot_row = work[col].clone();
                for (x, &p) in work[row].iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        let mut entries = Vec::with_capacity(r * n);
        for (i, row) in work.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                entries.push(if j < r {
                    if i == j {
                        Entry {
                            norm: 1.0,
                            phase: Phase::ONE,
                        }
                    } else {
                        Entry::ZERO
                    }
                } else {
                    Entry::from_complex(z)
                });
            }
        }
        Self::new(r, n, entries)
    }

    /// Whether the leading `r` columns are exactly the identity.
    pub fn is_standard_form(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.rows).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.norm == 1.0 && e.phase == Phase::ONE
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - other.get(i, j)).norm())
            .fold(0.0, f64::max)
    }
}

/// Determinant of a row-major `k×k` block (overwritten). Cofactor expansion
/// for `k ≤ 3`, LU with partial pivoting above that.
pub fn determinant(m: &mut [Complex64], k: usize) -> Complex64 {
    debug_assert_eq!(m.len(), k * k);
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            let mut det = Complex64::new(1.0, 0.0);
            for col in 0..k {
                let pivot = (col..k)
                    .max_by(|&a, &b| m[a * k + col].norm().total_cmp(&m[b * k + col].norm()))
                    .expect("nonempty pivot range");
                if m[pivot * k + col].norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                if pivot != col {
                    for j in 0..k {
                        m.swap(col * k + j, pivot * k + j);
                    }
                    det = -det;
                }
                let p = m[col * k + col];
                det *= p;
                for row in col + 1..k {
                    let factor = m[row * k + col] / p;
                    for j in col..k {
                        let delta = factor * m[col * k + j];
                        m[row * k + j] -= delta;
                    }
                }
            }
            det
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn polar(r: f64, x: f64) -> Complex64 {
        Complex64::from_polar(r, x * PI)
    }

    fn runex() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(1., 0.), c(0., 0.), c(0., 0.), polar(0.5, 0.25), polar(1. / 3., 0.5)],
            vec![c(0., 0.), c(1., 0.), c(0., 0.), c(1., 0.), polar(4. / 3., 0.25)],
            vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.), c(-1., 0.)],
        ])
        .unwrap()
    }

    #[test]
    fn runex_minors() {
        let m = runex();
        assert_eq!(m.maximal_minor(&[0, 1, 3]).unwrap().norm(), 0.0);
        let d = m.maximal_minor(&[0, 2, 4]).unwrap();
        assert!((d - -polar(4. / 3., 0.25)).norm() < 1e-14);
        assert_eq!(m.maximal_minor(&[0, 1, 2]).unwrap(), c(1., 0.));
        assert_eq!(m.maximal_minor(&[0, 0, 2]).unwrap(), c(0., 0.));
        assert!(m.maximal_minor(&[0, 1]).is_err());
        assert!(m.maximal_minor(&[0, 1, 5]).is_err());
    }

    #[test]
    fn lu_agrees_with_cofactor_on_small_blocks() {
        let vals = [
            c(1., 2.),
            c(-0.5, 0.3),
            c(2., -1.),
            c(0.1, 0.),
            c(3., 1.),
            c(-1., -1.),
            c(0.7, 0.2),
            c(0., 1.),
            c(1.5, -0.4),
        ];
        let mut a = vals;
        let cof = determinant(&mut a, 3);
        // embed as a 4x4 block diag(A, 1): same determinant through LU
        let mut big = vec![c(0., 0.); 16];
        for i in 0..3 {
            for j in 0..3 {
                big[i * 4 + j] = vals[i * 3 + j];
            }
        }
        big[15] = c(1., 0.);
        let lu = determinant(&mut big, 4);
        assert!((cof - lu).norm() < 1e-12);
    }

    #[test]
    fn scaling_reproduces_runex() {
        let real = ComplexMatrix::from_rows(&[
            vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.), c(1., 0.)],
            vec![c(0., 0.), c(1., 0.), c(0., 0.), c(1., 0.), c(2., 0.)],
            vec![c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.), c(-1., 0.)],
        ])
        .unwrap();
        let rows = [polar(1., 0.5), polar(2., 0.25), c(3., 0.)];
        let cols = [
            polar(1., 1.5),
            polar(0.5, 1.75),
            c(1. / 3., 0.),
            polar(0.5, 1.75),
            c(1. / 3., 0.),
        ];
        let scaled = real.scale(&rows, &cols).unwrap();
        assert!(scaled.max_abs_diff(&runex()) < 1e-14);
        assert_eq!(real.scale(&[c(1., 0.); 3], &[c(1., 0.); 5]).unwrap(), real);
        assert_eq!(
            real.scale(&[c(1., 0.), c(0., 0.), c(1., 0.)], &[c(1., 0.); 5]),
            Err(Error::ZeroScalar(1))
        );
        assert_eq!(
            real.scale(
                &[c(1., 0.); 3],
                &[c(1., 0.), c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]
            ),
            Err(Error::ZeroScalar(6))
        );
    }

    #[test]
    fn standard_form_fixed_points_and_errors() {
        let m = runex();
        assert!(m.is_standard_form());
        assert_eq!(m.to_standard_form().unwrap(), m);
        let singular = ComplexMatrix::from_rows(&[
            vec![c(1., 0.), c(2., 0.), c(0., 1.)],
            vec![c(2., 0.), c(4., 0.), c(1., 0.)],
        ])
        .unwrap();
        assert_eq!(singular.to_standard_form(), Err(Error::SingularLeadingBlock(2)));
    }

    #[test]
    fn standard_form_of_left_multiple() {
        let m = runex();
        let a = [
            c(0., 1.),
            c(2., 0.),
            c(0., 0.),
            c(1., 1.),
            c(0., 0.),
            c(3., 0.),
            c(0., 0.),
            c(1., -1.),
            c(1., 0.),
        ];
        let am = m.left_multiply(&a).unwrap();
        assert!(!am.is_standard_form());
        let back = am.to_standard_form().unwrap();
        assert!(back.max_abs_diff(&m) < 1e-12);
        // zero entries of N survive exactly
        assert!(back.entry(2, 3).is_zero());
    }

    #[test]
    fn shape_validation() {
        assert!(ComplexMatrix::from_complex(3, 2, &[c(1., 0.); 6]).is_err());
        assert!(ComplexMatrix::from_complex(2, 3, &[c(1., 0.); 5]).is_err());
        assert!(Entry::new(0.0, Phase::ONE).is_err());
        assert!(Entry::new(1.0, Phase::ZERO).is_err());
        assert!(Entry::new(-1.0, Phase::ONE).is_err());
    }
}
