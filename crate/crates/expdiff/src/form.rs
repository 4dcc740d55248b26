//! Bilinear forms `phi(x, y) = x^T M y` on `K^n` and the vectors they act on.
//!
//! Matrix forms are the computable subclass of biadditive maps: biadditive-
//! but-not-bilinear maps exist over the reals (via Q-linear pathologies) but
//! admit no finite representation, so this module does not attempt them.
//!
//! Forms are stored densely and immutably. Construction normalizes the
//! backend: if any entry is floating, every entry is converted to floating,
//! so each form (and vector) is either fully exact or fully floating.
//! Asymmetric matrices are representable on purpose; the solver rejects
//! them with a dedicated reason instead of silently symmetrizing.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{sqrt_principal_lossy, FieldTag, Scalar, ScalarError};

#[derive(Debug, Error, PartialEq)]
pub enum FormError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("entries do not form a square matrix: row {row} has length {len}, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("real field cannot hold a complex value at position ({row}, {col})")]
    FieldMismatch { row: usize, col: usize },
    #[error("form is not symmetric: entries ({i}, {j}) and ({j}, {i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("negative diagonal entry at index {index} over the real field")]
    NegativeDiagonal { index: usize },
    #[error("form has rank greater than one (residual {residual})")]
    NotRankOne { residual: f64 },
    #[error("form is identically zero")]
    ZeroForm,
}

/// Element of `K^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct Vector {
    coords: Vec<Scalar>,
}

impl Vector {
    /// Coordinates are promoted to a uniform backend (all exact or all
    /// floating).
    pub fn new(coords: Vec<Scalar>) -> Result<Self, FormError> {
        if coords.is_empty() {
            return Err(FormError::EmptyDimension);
        }
        Ok(Vector {
            coords: promote_uniform(coords),
        })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0);
        Vector {
            coords: vec![Scalar::zero(); dim],
        }
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut coords = vec![Scalar::zero(); dim];
        coords[index] = Scalar::one();
        Vector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector::new(coords.iter().map(|&c| Scalar::integer(c)).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(Scalar::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn is_real_valued(&self) -> bool {
        self.coords.iter().all(Scalar::is_real)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coords.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Vector) -> Result<Vector, FormError> {
        self.check_dim(other.dim())?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector, FormError> {
        self.check_dim(other.dim())?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Plain bilinear dot product `sum_i x_i y_i` (no conjugation).
    pub fn dot(&self, other: &Vector) -> Result<Scalar, FormError> {
        self.check_dim(other.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn to_approx(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(Scalar::to_approx).collect(),
        }
    }

    fn check_dim(&self, other: usize) -> Result<(), FormError> {
        if self.dim() != other {
            return Err(FormError::DimensionMismatch {
                expected: self.dim(),
                got: other,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Scalar>> for Vector {
    type Error = FormError;
    fn try_from(coords: Vec<Scalar>) -> Result<Self, FormError> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<Scalar> {
    fn from(v: Vector) -> Vec<Scalar> {
        v.coords
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn promote_uniform(scalars: Vec<Scalar>) -> Vec<Scalar> {
    if scalars.iter().all(Scalar::is_exact) {
        scalars
    } else {
        scalars.iter().map(Scalar::to_approx).collect()
    }
}

/// Bilinear form `phi(x, y) = x^T M y` given by a dense `n x n` matrix over
/// the tagged field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct BilinearForm {
    field: FieldTag,
    dim: usize,
    entries: Vec<Scalar>, // row-major
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    field: FieldTag,
    dim: usize,
    entries: Vec<Vec<Scalar>>,
}

impl TryFrom<FormRepr> for BilinearForm {
    type Error = FormError;
    fn try_from(r: FormRepr) -> Result<Self, FormError> {
        let form = BilinearForm::new(r.field, r.entries)?;
        if form.dim != r.dim {
            return Err(FormError::DimensionMismatch {
                expected: r.dim,
                got: form.dim,
            });
        }
        Ok(form)
    }
}

impl From<BilinearForm> for FormRepr {
    fn from(m: BilinearForm) -> FormRepr {
        FormRepr {
            field: m.field,
            dim: m.dim,
            entries: (0..m.dim)
                .map(|i| (0..m.dim).map(|j| m.entry(i, j).clone()).collect())
                .collect(),
        }
    }
}

impl BilinearForm {
    pub fn new(field: FieldTag, rows: Vec<Vec<Scalar>>) -> Result<Self, FormError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(FormError::EmptyDimension);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(FormError::NotSquare {
                    row,
                    len: r.len(),
                    dim,
                });
            }
            if field.is_real() {
                if let Some(col) = r.iter().position(|s| !s.is_real()) {
                    return Err(FormError::FieldMismatch { row, col });
                }
            }
        }
        let entries = promote_uniform(rows.into_iter().flatten().collect());
        Ok(BilinearForm {
            field,
            dim,
            entries,
        })
    }

    pub fn from_int_rows(field: FieldTag, rows: &[&[i64]]) -> Self {
        BilinearForm::new(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::integer(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// The `1 x 1` form `phi(x, y) = alpha * x * y`.
    pub fn from_scalar(alpha: Scalar, field: FieldTag) -> Result<Self, FormError> {
        BilinearForm::new(field, vec![vec![alpha]])
    }

    pub fn zero(field: FieldTag, dim: usize) -> Self {
        assert!(dim > 0);
        BilinearForm {
            field,
            dim,
            entries: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(field: FieldTag, dim: usize) -> Self {
        let mut m = BilinearForm::zero(field, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Scalar::one();
        }
        m
    }

    /// Rank-one form `w w^T`.
    pub fn outer(field: FieldTag, w: &Vector) -> Result<Self, FormError> {
        let rows = (0..w.dim())
            .map(|i| (0..w.dim()).map(|j| w.get(i) * w.get(j)).collect())
            .collect();
        BilinearForm::new(field, rows)
    }

    pub fn scaled(&self, s: &Scalar) -> Result<Self, FormError> {
        let rows = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j) * s).collect())
            .collect();
        BilinearForm::new(self.field, rows)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(Scalar::is_exact)
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    fn zero_scale(&self) -> f64 {
        1.0 + self.max_modulus()
    }

    /// Backend-aware zero test for a single entry: exact zero on the exact
    /// backend, `|s| <= tol * (1 + max|M|)` on the floating one.
    fn entry_is_zero(&self, s: &Scalar, tol: f64) -> bool {
        if s.is_exact() {
            s.is_zero()
        } else {
            s.modulus() <= tol * self.zero_scale()
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|s| self.entry_is_zero(s, tol))
    }

    /// Evaluates `phi(x, y) = x^T M y`. Biadditive in each argument by
    /// construction.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Result<Scalar, FormError> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(FormError::DimensionMismatch {
                    expected: self.dim,
                    got: v.dim(),
                });
            }
        }
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            let mut row = Scalar::zero();
            for j in 0..self.dim {
                row = row + self.entry(i, j) * y.get(j);
            }
            acc = acc + x.get(i) * row;
        }
        Ok(acc)
    }

    /// Matrix-vector product `M x`.
    pub fn apply(&self, x: &Vector) -> Result<Vector, FormError> {
        if x.dim() != self.dim {
            return Err(FormError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let coords = (0..self.dim)
            .map(|i| (0..self.dim).fold(Scalar::zero(), |acc, j| acc + self.entry(i, j) * x.get(j)))
            .collect();
        Vector::new(coords)
    }

    /// `|M_ij - M_ji| <= tol * (1 + |M_ij|)` for every pair; exact equality
    /// on the exact backend.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry_witness(tol).is_none()
    }

    /// The worst-violating pair `(i, j)` with `i < j`, by the modulus of
    /// `M_ij - M_ji`; `None` when symmetric within tolerance.
    pub fn asymmetry_witness(&self, tol: f64) -> Option<(usize, usize)> {
        let mut worst: Option<(f64, (usize, usize))> = None;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let a = self.entry(i, j);
                let b = self.entry(j, i);
                let violates = if a.is_exact() && b.is_exact() {
                    a != b
                } else {
                    (a - b).modulus() > tol * (1.0 + a.modulus())
                };
                if violates {
                    let mag = (a - b).modulus();
                    if worst.is_none_or(|(m, _)| mag > m) {
                        worst = Some((mag, (i, j)));
                    }
                }
            }
        }
        worst.map(|(_, pair)| pair)
    }

    /// Finds `z0` with `phi(z0, z0) != 0`, or `None` when the form is zero.
    ///
    /// Deterministic search: first basis vector `e_i` with `M_ii != 0`,
    /// else the first pair `i < j` with `M_ij != 0` (then `e_i + e_j` has
    /// `phi = 2 M_ij != 0`), else `None`. For a symmetric form over a
    /// characteristic-zero field the `None` case means `M = 0`.
    pub fn diagonal_witness(&self, tol: f64) -> Result<Option<Vector>, FormError> {
        if let Some((i, j)) = self.asymmetry_witness(tol) {
            return Err(FormError::NotSymmetric { i, j });
        }
        for i in 0..self.dim {
            if !self.entry_is_zero(self.entry(i, i), tol) {
                return Ok(Some(Vector::basis(self.dim, i)));
            }
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if !self.entry_is_zero(self.entry(i, j), tol) {
                    let z = Vector::basis(self.dim, i)
                        .add(&Vector::basis(self.dim, j))
                        .expect("dims match");
                    return Ok(Some(z));
                }
            }
        }
        Ok(None)
    }

    /// Symmetric rank-one factorization `M = w w^T`.
    ///
    /// Pivots on the diagonal entry of largest modulus (a symmetric rank-one
    /// matrix with zero diagonal is zero), takes `w_p = sqrt(M_pp)` and
    /// `w_j = M_pj / w_p`, then verifies the residual. Over the real field a
    /// negative pivot is the no-solution obstruction and is reported as
    /// [`FormError::NegativeDiagonal`] with the witness index.
    pub fn rank1_factor(&self, tol: f64) -> Result<Rank1Factorization, FormError> {
        if let Some((i, j)) = self.asymmetry_witness(tol) {
            return Err(FormError::NotSymmetric { i, j });
        }
        if self.is_zero(tol) {
            return Err(FormError::ZeroForm);
        }
        let pivot = (0..self.dim)
            .max_by(|&a, &b| {
                let (sa, sb) = (self.entry(a, a), self.entry(b, b));
                match (sa.exact_norm_sq(), sb.exact_norm_sq()) {
                    (Some(na), Some(nb)) => na.cmp(&nb),
                    _ => sa
                        .modulus()
                        .partial_cmp(&sb.modulus())
                        .unwrap_or(std::cmp::Ordering::Equal),
                }
            })
            .expect("dim > 0");
        let mpp = self.entry(pivot, pivot);
        if self.entry_is_zero(mpp, tol) {
            // Nonzero symmetric matrix with zero diagonal: rank >= 2.
            return Err(FormError::NotRankOne {
                residual: self.max_modulus(),
            });
        }
        if self.field.is_real() {
            let negative = match mpp.exact_parts() {
                Some((re, _)) => num_traits::Signed::is_negative(re),
                None => mpp.re_f64() < 0.0,
            };
            if negative {
                return Err(FormError::NegativeDiagonal { index: pivot });
            }
        }
        let wp = sqrt_principal_lossy(mpp, self.field).map_err(|e| match e {
            ScalarError::NegativeRealSqrt => FormError::NegativeDiagonal { index: pivot },
            ScalarError::InexactSqrt => unreachable!("lossy sqrt never reports inexact"),
        })?;
        let coords: Vec<Scalar> = (0..self.dim).map(|j| self.entry(pivot, j) / &wp).collect();
        let w = Vector::new(coords)?;

        let all_exact = self.is_exact() && w.is_exact();
        let mut residual_norm = 0.0f64;
        let mut exact_zero = true;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.entry(i, j) - &(w.get(i) * w.get(j));
                if !d.is_zero() {
                    exact_zero = false;
                }
                residual_norm = residual_norm.max(d.modulus());
            }
        }
        let accepted = if all_exact {
            exact_zero
        } else {
            residual_norm <= tol * self.zero_scale()
        };
        if !accepted {
            return Err(FormError::NotRankOne {
                residual: residual_norm,
            });
        }
        Ok(Rank1Factorization { w, residual_norm })
    }
}

impl fmt::Display for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Successful factorization `M = w w^T` together with the max-entry norm of
/// the residual `M - w w^T` (zero on the exact backend).
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Factorization {
    pub w: Vector,
    pub residual_norm: f64,
}
