//! Exact dense matrices and a sparse echelon basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

/// Result of row reduction: the reduced matrix and its pivot columns.
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Representation("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for tests and catalog data.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| F::from_i64(x)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
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

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Representation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.get(k, j);
                    if !y.is_zero() {
                        let v = out.get(i, j).add(&x.mul(y));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, F::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, F::sub)
    }

    fn zip(&self, other: &Self, op: impl Fn(&F, &F) -> F) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Representation(format!(
                "shape mismatch {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| op(x, y))
                .collect(),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc.add(&self.get(r, c).mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Block `[r0, r0+nr) x [c0, c0+nc)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut m = Matrix::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                m.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Self], rows: usize) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            m.set_block(0, c0, p);
            c0 += p.cols;
        }
        m
    }

    pub fn vstack(parts: &[&Self], cols: usize) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            m.set_block(r0, 0, p);
            r0 += p.rows;
        }
        m
    }

    /// Selected columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Matrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form with leftmost pivots.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c).sub(&f.mul(m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space as columns of a `cols x k` matrix, one basis
    /// vector per free column (free entry 1, other free entries 0).
    pub fn kernel(&self) -> Self {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, F::one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, matrix.get(i, f).neg());
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> Self {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// Some `x` with `self * x = b`, or `None`.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(b.rows, self.rows);
        let aug = Matrix::hstack(&[self, b], self.rows);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, matrix.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let x = self.solve(&Matrix::identity(n))?;
        // solve only guarantees a solution; squareness plus full rank makes it the inverse.
        (self.rank() == n).then_some(x)
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = det.neg();
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = m.get(r, col).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c).sub(&f.mul(m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }
}

/// Extends the independent columns of `base` by standard basis vectors to a
/// basis of the ambient space `F^n`; returns the added columns.
pub fn complete_basis<F: Field>(base: &Matrix<F>, n: usize) -> Matrix<F> {
    extend_within(base, &Matrix::identity(n))
}

/// Greedily extends the columns of `base` by columns of `pool`, keeping only
/// those that enlarge the span; returns the chosen columns of `pool`.
pub fn extend_within<F: Field>(base: &Matrix<F>, pool: &Matrix<F>) -> Matrix<F> {
    let n = pool.rows();
    let mut cur = base.clone();
    let mut rank = cur.rank();
    let mut chosen = Vec::new();
    for c in 0..pool.cols() {
        let col = pool.select_columns(&[c]);
        let trial = Matrix::hstack(&[&cur, &col], n);
        let r = trial.rank();
        if r > rank {
            rank = r;
            cur = trial;
            chosen.push(c);
        }
    }
    pool.select_columns(&chosen)
}

/// Sparse vector keyed by an ordered basis label.
pub type SparseVec<K, F> = BTreeMap<K, F>;

/// Echelon basis of a subspace of a space with ordered basis labels.
///
/// Each stored vector is monic at its leading (smallest) key and no two
/// stored vectors share a leading key. Rows are not inter-reduced, but
/// `reduce` eliminates pivots in increasing key order, so the remainder
/// never contains a leading key and is a normal form of the coset.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Ord + Clone, F> {
    rows: BTreeMap<K, SparseVec<K, F>>,
}

impl<K: Ord + Clone, F: Field> Default for EchelonBasis<K, F> {
    fn default() -> Self {
        EchelonBasis {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone, F: Field> EchelonBasis<K, F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn leading_keys(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn is_leading(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn vectors(&self) -> impl Iterator<Item = (&K, &SparseVec<K, F>)> {
        self.rows.iter()
    }

    /// Reduces `v` against the basis; zero result means membership.
    pub fn reduce(&self, mut v: SparseVec<K, F>) -> SparseVec<K, F> {
        use std::ops::Bound;
        let mut lo: Bound<K> = Bound::Unbounded;
        loop {
            let next = v
                .range((lo.clone(), Bound::Unbounded))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else {
                return v;
            };
            let row = &self.rows[&k];
            for (rk, rc) in row {
                let entry = v.entry(rk.clone()).or_insert_with(F::zero);
                *entry = entry.sub(&c.mul(rc));
                if entry.is_zero() {
                    v.remove(rk);
                }
            }
            lo = Bound::Excluded(k);
        }
    }

    /// Adds `v` to the span; returns whether the span grew.
    pub fn insert(&mut self, v: SparseVec<K, F>) -> bool {
        let r = self.reduce(v);
        let Some((lead, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv().expect("nonzero leading coefficient");
        let monic = r.into_iter().map(|(k, x)| (k, x.mul(&inv))).collect();
        self.rows.insert(lead, monic);
        true
    }

    pub fn contains(&self, v: SparseVec<K, F>) -> bool {
        self.reduce(v).is_empty()
    }
}
