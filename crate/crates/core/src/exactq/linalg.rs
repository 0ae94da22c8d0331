//! Gaussian elimination over the fraction field of [`QScalar`](super::QScalar).

use serde::{Serialize, Serializer};

use super::{ExactError, QFraction};

/// Dense row-major matrix over [`QFraction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QFraction>,
}

impl Serialize for FracMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rows).map(|i| self.row(i)))
    }
}

impl FracMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![QFraction::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, QFraction::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QFraction>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::Dimension("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QFraction {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QFraction) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[QFraction] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<QFraction>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    let next = cur + &(a * b);
                    out.set(i, j, next);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[QFraction]) -> Result<Vec<QFraction>, ExactError> {
        if self.cols != v.len() {
            return Err(ExactError::Dimension(format!("{}x{} times vector of {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(QFraction::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, ExactError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(ExactError::Dimension(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &QFraction) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Kronecker product, with the left factor's index varying slowest.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> QFraction {
        (0..self.rows.min(self.cols)).fold(QFraction::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QFraction::is_zero)
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self, label: &str) -> Result<Self, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, QFraction::one());
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(ExactError::Singular { label: label.into() });
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Determinant by fraction-free-style elimination over the field.
    pub fn determinant(&self) -> Result<QFraction, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::Dimension("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = QFraction::one();
        for col in 0..n {
            let Some(p) = choose_pivot(&m, col, col) else {
                return Ok(QFraction::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for r in col + 1..n {
                let factor = m.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                m.axpy_row(r, col, &factor, col);
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[target] -= factor * row[source]` for columns `from..`.
    fn axpy_row(&mut self, target: usize, source: usize, factor: &QFraction, from: usize) {
        for j in from..self.cols {
            let s = self.get(source, j);
            if s.is_zero() {
                continue;
            }
            let next = self.get(target, j) - &(factor * s);
            self.set(target, j, next);
        }
    }

    /// Reduce to reduced row echelon form, pivoting only in the first `pivot_cols` columns.
    /// Returns the pivot columns in order.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(p) = choose_pivot(self, row, col) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                self.axpy_row(r, row, &factor, col);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Columns that are linearly independent of all earlier columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        let cols = m.cols;
        m.rref_in_place(cols)
    }
}

/// Prefer the structurally simplest nonzero entry to limit expression swell.
fn choose_pivot(m: &FracMatrix, from_row: usize, col: usize) -> Option<usize> {
    (from_row..m.rows)
        .filter(|&r| !m.get(r, col).is_zero())
        .min_by_key(|&r| {
            let e = m.get(r, col);
            e.num().len() + e.den().len()
        })
}

pub fn rank(m: &FracMatrix) -> usize {
    m.pivot_columns().len()
}

/// Solve a square nonsingular system exactly; the solution is checked by substitution.
pub fn frac_solve(a: &FracMatrix, b: &[QFraction], label: &str) -> Result<Vec<QFraction>, ExactError> {
    if a.rows() != a.cols() {
        return Err(ExactError::Dimension(format!("{label}: matrix is {}x{}", a.rows(), a.cols())));
    }
    let x = solve_linear(a, b, label).map_err(|e| match e {
        ExactError::Underdetermined { label, .. } | ExactError::Inconsistent { label } => {
            ExactError::Singular { label }
        }
        other => other,
    })?;
    Ok(x)
}

/// Solve `a x = b` for a system with any number of equations, requiring a unique solution.
pub fn solve_linear(a: &FracMatrix, b: &[QFraction], label: &str) -> Result<Vec<QFraction>, ExactError> {
    if a.rows() != b.len() {
        return Err(ExactError::Dimension(format!("{label}: {} equations, {} right-hand sides", a.rows(), b.len())));
    }
    let n = a.cols();
    let mut aug = FracMatrix::zeros(a.rows(), n + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, bi.clone());
    }
    let pivots = aug.rref_in_place(n);
    for r in pivots.len()..aug.rows() {
        if !aug.get(r, n).is_zero() {
            return Err(ExactError::Inconsistent { label: label.into() });
        }
    }
    if pivots.len() < n {
        return Err(ExactError::Underdetermined { label: label.into(), rank: pivots.len(), unknowns: n });
    }
    let x: Vec<QFraction> = (0..n).map(|i| aug.get(i, n).clone()).collect();
    if a.mul_vec(&x)? != b {
        return Err(ExactError::Inconsistent { label: label.into() });
    }
    Ok(x)
}
