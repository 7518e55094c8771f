//! Dense exact linear algebra over the rationals.
//!
//! Elimination always picks the first nonzero entry (in row order) of the
//! leftmost column that still has one, so every result is deterministic.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!("ragged rows, expected {cols} columns")));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape(format!("column length differs from {rows}")));
        }
        Ok(Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!("cannot subtract {}x{} and {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// `self^k` for a square matrix; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> Matrix {
        assert_eq!(self.rows, self.cols, "pow of a non-square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    /// Stacks `blocks` (a grid of row-blocks of column-blocks) into one matrix.
    pub fn block(blocks: &[Vec<&Matrix>]) -> Result<Matrix> {
        let heights: Vec<usize> = blocks.iter().map(|r| r.first().map_or(0, |m| m.rows)).collect();
        let widths: Vec<usize> = blocks.first().map_or(Vec::new(), |r| r.iter().map(|m| m.cols).collect());
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != widths.len() || row.iter().zip(&widths).any(|(m, &w)| m.cols != w || m.rows != heights[bi]) {
                return Err(Error::Shape(format!("inconsistent block row {bi}")));
            }
        }
        let total_rows = heights.iter().sum();
        let total_cols = widths.iter().sum();
        let mut out = Matrix::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for m in row {
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        let e = m.get(i, j);
                        if !e.is_zero() {
                            out.set(r0 + i, c0 + j, e.clone());
                        }
                    }
                }
                c0 += m.cols;
            }
            r0 += heights[bi];
        }
        Ok(out)
    }
}

/// Linearly independent vectors spanning a subspace of `Q^ambient_dim`.
///
/// Bases produced by [`kernel_basis`] are in reduced form: there is a set of
/// coordinate positions at which the basis vectors restrict to the identity,
/// so coordinates of a member vector can be read off directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Scalar>>,
    positions: Option<Vec<usize>>,
}

impl SubspaceBasis {
    /// Validates lengths and linear independence.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::Shape(format!("basis vector length differs from {ambient_dim}")));
        }
        let basis = SubspaceBasis { ambient_dim, vectors, positions: None };
        if rank(&basis.as_row_matrix()) != basis.vectors.len() {
            return Err(Error::Shape("basis vectors are linearly dependent".into()));
        }
        Ok(basis)
    }

    /// A basis of the span of arbitrary (possibly dependent) vectors.
    pub fn span_of(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::Shape(format!("vector length differs from {ambient_dim}")));
        }
        let m = Matrix::from_rows(vectors.to_vec())?;
        let m = if vectors.is_empty() { Matrix::zeros(0, ambient_dim) } else { m };
        let reduced = Echelon::new(&m, true);
        let vectors = (0..reduced.pivots.len()).map(|r| reduced.rows[r].clone()).collect();
        Ok(SubspaceBasis { ambient_dim, vectors, positions: Some(reduced.pivots) })
    }

    /// The standard basis of `Q^n`.
    pub fn standard(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                v
            })
            .collect();
        SubspaceBasis { ambient_dim: n, vectors, positions: Some((0..n).collect()) }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, vectors: Vec::new(), positions: Some(Vec::new()) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    /// Basis vectors as the rows of a matrix.
    pub fn as_row_matrix(&self) -> Matrix {
        Matrix { rows: self.vectors.len(), cols: self.ambient_dim, entries: self.vectors.iter().flatten().cloned().collect() }
    }

    /// `sum coords[i] * vectors[i]`.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ambient_dim];
        for (c, v) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        match &self.positions {
            Some(pos) => {
                let coords: Vec<Scalar> = pos.iter().map(|&p| v[p].clone()).collect();
                (self.combine(&coords) == v).then_some(coords)
            }
            None => solve(&self.as_row_matrix().transpose(), v).ok().flatten(),
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Row echelon form with the pivot columns, optionally fully reduced.
struct Echelon {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(m: &Matrix, reduce: bool) -> Self {
        let mut rows: Vec<Vec<Scalar>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][col].recip();
            let support: Vec<usize> = (col..m.cols).filter(|&j| !rows[r][j].is_zero()).collect();
            for &j in &support {
                rows[r][j] *= &inv;
            }
            let pivot_row = core::mem::take(&mut rows[r]);
            let start = if reduce { 0 } else { r + 1 };
            for (i, row) in rows.iter_mut().enumerate().skip(start) {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for &j in &support {
                    let delta = &factor * &pivot_row[j];
                    row[j] -= delta;
                }
            }
            rows[r] = pivot_row;
            pivots.push(col);
            r += 1;
        }
        Echelon { rows, pivots }
    }
}

/// Rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    Echelon::new(m, false).pivots.len()
}

/// A basis of `{x : m x = 0}` in reduced form (one vector per free column).
pub fn kernel_basis(m: &Matrix) -> SubspaceBasis {
    let e = Echelon::new(m, true);
    let mut is_pivot = vec![false; m.cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..m.cols).filter(|&j| !is_pivot[j]).collect();
    let vectors = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); m.cols];
            v[f] = Scalar::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                let entry = &e.rows[r][f];
                if !entry.is_zero() {
                    v[p] = -entry.clone();
                }
            }
            v
        })
        .collect();
    SubspaceBasis { ambient_dim: m.cols, vectors, positions: Some(free) }
}

/// Some `x` with `m x = b`, or `Ok(None)` when `b` is outside the column space.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", b.len(), m.rows)));
    }
    let augmented = Matrix::from_fn(m.rows, m.cols + 1, |i, j| if j < m.cols { m.get(i, j).clone() } else { b[i].clone() });
    let e = Echelon::new(&augmented, true);
    if e.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (r, &p) in e.pivots.iter().enumerate() {
        x[p] = e.rows[r][m.cols].clone();
    }
    Ok(Some(x))
}

/// `dim span(z) - dim span(b)`, rejecting `b` not contained in `span(z)`.
pub fn quotient_dim(z: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize> {
    if z.ambient_dim != b.ambient_dim {
        return Err(Error::Shape(format!("ambient dimensions {} and {}", z.ambient_dim, b.ambient_dim)));
    }
    let zr = rank(&z.as_row_matrix());
    let br = rank(&b.as_row_matrix());
    let mut stacked = z.vectors.clone();
    stacked.extend(b.vectors.iter().cloned());
    let stacked = if stacked.is_empty() { Matrix::zeros(0, z.ambient_dim) } else { Matrix::from_rows(stacked)? };
    if rank(&stacked) != zr {
        return Err(Error::NotSubspace);
    }
    Ok(zr - br)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(2)), 2);
        assert_eq!(rank(&Matrix::zeros(3, 3)), 0);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&Matrix::identity(2)).dim(), 0);
        let k = kernel_basis(&mat(&[&[1, -1]]));
        assert_eq!(k.vectors(), &[vec![int(1), int(1)]]);
        assert_eq!(kernel_basis(&Matrix::zeros(2, 3)).dim(), 3);
    }

    #[test]
    fn solve_examples() {
        let b = vec![ratio(3, 2), int(-1)];
        assert_eq!(solve(&Matrix::identity(2), &b).unwrap(), Some(b.clone()));

        let m = mat(&[&[1, 1]]);
        let x = solve(&m, &[int(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![int(2)]);

        assert_eq!(solve(&mat(&[&[1], &[1]]), &[int(0), int(1)]).unwrap(), None);
        assert!(solve(&Matrix::identity(2), &[int(1)]).is_err());
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_dim(&SubspaceBasis::standard(5), &SubspaceBasis::empty(5)).unwrap(), 5);
        let z = SubspaceBasis::standard(3);
        assert_eq!(quotient_dim(&z, &z).unwrap(), 0);

        let plane = SubspaceBasis::new(3, vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]]).unwrap();
        let line = SubspaceBasis::new(3, vec![vec![int(2), int(3), int(0)]]).unwrap();
        assert_eq!(quotient_dim(&plane, &line).unwrap(), 1);

        let outside = SubspaceBasis::new(3, vec![vec![int(0), int(0), int(1)]]).unwrap();
        assert_eq!(quotient_dim(&plane, &outside), Err(Error::NotSubspace));
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(SubspaceBasis::new(2, vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_err());
        let span = SubspaceBasis::span_of(2, &[vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(span.dim(), 1);
        assert_eq!(span.coordinates(&[int(3), int(6)]), Some(vec![int(3)]));
        assert_eq!(span.coordinates(&[int(3), int(5)]), None);
    }

    #[test]
    fn coordinates_without_positions() {
        let b = SubspaceBasis::new(3, vec![vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)]]).unwrap();
        assert_eq!(b.coordinates(&[int(2), int(5), int(3)]), Some(vec![int(2), int(3)]));
        assert!(!b.contains(&[int(1), int(0), int(0)]));
    }
}
