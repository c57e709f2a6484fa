//! Sparse matrices over a [`Scalar`] field with exact row reduction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

/// Sparse matrix keyed by `(row, col)`. Zero entries are never stored and
/// iteration is lexicographic in the index pair.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), F>,
}

impl<F: Scalar> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, value: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, value.clone());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = ((usize, usize), F)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for ((r, c), v) in entries {
            m.add_at(r, c, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(F::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if value.is_negligible() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), value);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, value: F) {
        let current = self.get(r, c);
        self.set(r, c, current + value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &F)> {
        self.entries.iter()
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.cols, self.rows, self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())))
    }

    pub fn scale(&self, factor: &F) -> Self {
        if factor.is_negligible() {
            return Self::zeros(self.rows, self.cols);
        }
        Self::from_entries(
            self.rows,
            self.cols,
            self.entries.iter().map(|(&k, v)| (k, v.clone() * factor.clone())),
        )
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut by_row: BTreeMap<usize, Vec<(usize, &F)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_at(r, c, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_at(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_at(r, c, -v.clone());
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![F::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            out[r] += a.clone() * v[c].clone();
        }
        out
    }

    /// Row reduction: reduced row-echelon form, rank and a kernel basis.
    pub fn reduce(&self) -> Reduction<F> {
        let mut echelon = RowEchelon::new(self.cols);
        for row in self.dense_rows() {
            echelon.insert(row);
            if echelon.rank() == self.cols {
                break;
            }
        }
        let kernel = echelon.kernel();
        let rank = echelon.rank();
        let pivots = echelon.pivots().to_vec();
        let mut rref = Self::zeros(self.rows, self.cols);
        for (r, row) in echelon.rows().iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                rref.set(r, c, v.clone());
            }
        }
        Reduction { rref, rank, pivots, kernel }
    }

    pub fn rank(&self) -> usize {
        self.reduce().rank
    }

    /// Solves `self · x = rhs`; `Ok(None)` when the system is inconsistent.
    pub fn solve(&self, rhs: &[F]) -> Result<Option<Vec<F>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, actual: rhs.len() });
        }
        let mut echelon = RowEchelon::new(self.cols + 1);
        for (mut row, b) in self.dense_rows().into_iter().zip(rhs) {
            row.push(b.clone());
            echelon.insert(row);
        }
        if echelon.pivots().contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in echelon.rows().iter().zip(echelon.pivots()) {
            x[p] = row[self.cols].clone();
        }
        Ok(Some(x))
    }

    fn dense_rows(&self) -> Vec<Vec<F>> {
        let mut rows = vec![vec![F::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r][c] = v.clone();
        }
        rows
    }

    /// Horizontal concatenation. Row counts must agree.
    pub fn hstack(blocks: &[Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut out = Self::zeros(rows, blocks.iter().map(|b| b.cols).sum());
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "row mismatch in hstack");
            for (&(r, c), v) in &b.entries {
                out.set(r, c + offset, v.clone());
            }
            offset += b.cols;
        }
        out
    }

    /// Vertical concatenation. Column counts must agree.
    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut out = Self::zeros(blocks.iter().map(|b| b.rows).sum(), cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            for (&(r, c), v) in &b.entries {
                out.set(r + offset, c, v.clone());
            }
            offset += b.rows;
        }
        out
    }
}

impl<F: Scalar> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of [`SparseMatrix::reduce`].
#[derive(Clone)]
pub struct Reduction<F> {
    pub rref: SparseMatrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<F>>,
}

impl<F: Scalar> fmt::Debug for Reduction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reduction")
            .field("rank", &self.rank)
            .field("pivots", &self.pivots)
            .field("kernel", &self.kernel)
            .finish()
    }
}

/// Incrementally maintained reduced row-echelon basis of a row space.
///
/// Rows are dense, have a leading one in their pivot column, and are kept
/// sorted by pivot; every pivot column is zero in all other rows.
#[derive(Debug, Clone)]
pub struct RowEchelon<F> {
    width: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> RowEchelon<F> {
    pub fn new(width: usize) -> Self {
        RowEchelon { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the current basis.
    pub fn reduce_vector(&self, mut v: Vec<F>) -> Vec<F> {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_negligible() {
                continue;
            }
            let factor = v[p].clone();
            for (c, x) in row.iter().enumerate().skip(p) {
                if !x.is_negligible() {
                    v[c] -= factor.clone() * x.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce_vector(v.to_vec()).iter().all(Scalar::is_negligible)
    }

    /// Adds `v` to the row space. Returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce_vector(v);
        let Some(p) = v.iter().position(|x| !x.is_negligible()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut().skip(p) {
            if !x.is_negligible() {
                *x /= lead.clone();
            }
        }
        for row in &mut self.rows {
            if row[p].is_negligible() {
                continue;
            }
            let factor = row[p].clone();
            for (c, x) in v.iter().enumerate().skip(p) {
                if !x.is_negligible() {
                    row[c] -= factor.clone() * x.clone();
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    /// Basis of the null space of the stored rows, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.width)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![F::zero(); self.width];
                v[free] = F::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for SparseMatrix<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&(r, c), v)| (r, c, v.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let mut m = SparseMatrix::zeros(raw.rows, raw.cols);
        for (r, c, v) in raw.entries {
            if r >= raw.rows || c >= raw.cols {
                return Err(serde::de::Error::custom(format!(
                    "entry ({r},{c}) outside {}x{}",
                    raw.rows, raw.cols
                )));
            }
            m.set(r, c, parse_rational(&v).map_err(serde::de::Error::custom)?);
        }
        Ok(m)
    }
}
