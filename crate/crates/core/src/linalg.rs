//! Dense linear algebra over prime fields.
//!
//! Everything upstream (resolutions, Macaulay matrices, restriction maps)
//! funnels through [`FpMatrix`] and [`RowSpace`]. Pivoting always takes the
//! first nonzero entry in column order so that results are reproducible.

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=65_521).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p as u64 - 2)
    }

    /// Reduce an arbitrary signed integer into `0..p`.
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// `x += c * y` on slices of equal length.
    pub fn axpy(self, x: &mut [u32], c: u32, y: &[u32]) {
        if c == 0 {
            return;
        }
        if self.p == 2 {
            for (a, b) in x.iter_mut().zip(y) {
                *a ^= *b;
            }
            return;
        }
        for (a, &b) in x.iter_mut().zip(y) {
            if b != 0 {
                *a = self.add(*a, self.mul(c, b));
            }
        }
    }

    pub fn scale(self, x: &mut [u32], c: u32) {
        if c == 1 {
            return;
        }
        for a in x.iter_mut() {
            *a = self.mul(*a, c);
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix with entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from explicit rows. Entries are reduced mod p; rows must agree in length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    pub fn from_rows_with_cols(field: PrimeField, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| field.reduce(x)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Rows already reduced mod p.
    pub fn from_vecs(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            assert_eq!(row.len(), cols, "row length");
            debug_assert!(row.iter().all(|&x| x < field.p()));
            data.extend(row);
        }
        Self {
            field,
            rows: n,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (lo, hi) = (i * other.cols, (i + 1) * other.cols);
                    f.axpy(&mut out.data[lo..hi], a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (&a, &b) in self.row(i).iter().zip(v) {
                    acc += a as u64 * b as u64;
                }
                (acc % f.p() as u64) as u32
            })
            .collect())
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduce in place to reduced row echelon form; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            f.scale(self.row_mut(r), inv);
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i != r {
                    let a = self.get(i, c);
                    if a != 0 {
                        f.axpy(self.row_mut(i), f.neg(a), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let pivots = reduced.rref_in_place();
        let rank = pivots.len();
        Rref {
            reduced,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Rows form a basis of the right null space `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> FpMatrix {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(k, free));
            }
            basis.push(v);
        }
        FpMatrix::from_vecs(f, self.cols, basis)
    }

    /// One solution of `M x = rhs` with free variables set to zero, or `None`.
    pub fn solve(&self, rhs: &[u32]) -> Result<Option<Vec<u32>>> {
        Solver::new(self).solve(rhs)
    }
}

/// Reusable solver for repeated right-hand sides against a fixed matrix.
///
/// Stores the row transformation `T` with `T M = rref(M)`. Over F_2 the
/// elimination and `T` are bit-packed.
#[derive(Clone, Debug)]
pub struct Solver {
    transform: Transform,
    pivots: Vec<usize>,
    rows: usize,
    cols: usize,
}

#[derive(Clone, Debug)]
enum Transform {
    Dense(FpMatrix),
    Packed(Vec<Vec<u64>>),
}

fn pack_bits(v: &[u32]) -> Vec<u64> {
    let mut out = vec![0u64; v.len().div_ceil(64)];
    for (i, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

impl Solver {
    pub fn new(m: &FpMatrix) -> Self {
        if m.field().p() == 2 {
            Self::new_packed(m)
        } else {
            Self::new_dense(m)
        }
    }

    fn new_packed(m: &FpMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut aug: Vec<Vec<u64>> = (0..rows)
            .map(|i| {
                let mut v = vec![0u64; (cols + rows).div_ceil(64)];
                for (j, &x) in m.row(i).iter().enumerate() {
                    if x & 1 == 1 {
                        v[j / 64] |= 1 << (j % 64);
                    }
                }
                v[(cols + i) / 64] |= 1 << ((cols + i) % 64);
                v
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| bit(&aug[i], c)) else {
                continue;
            };
            aug.swap(pr, r);
            let pivot_row = std::mem::take(&mut aug[r]);
            let from = c / 64;
            for (i, row) in aug.iter_mut().enumerate() {
                if i != r && bit(row, c) {
                    for (a, b) in row[from..].iter_mut().zip(&pivot_row[from..]) {
                        *a ^= b;
                    }
                }
            }
            aug[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        let transform = aug
            .iter()
            .map(|row| {
                let mut t = vec![0u64; rows.div_ceil(64)];
                for j in 0..rows {
                    if bit(row, cols + j) {
                        t[j / 64] |= 1 << (j % 64);
                    }
                }
                t
            })
            .collect();
        Self {
            transform: Transform::Packed(transform),
            pivots,
            rows,
            cols,
        }
    }

    fn new_dense(m: &FpMatrix) -> Self {
        let f = m.field();
        let (rows, cols) = (m.rows(), m.cols());
        let mut aug = FpMatrix::zeros(f, rows, cols + rows);
        for i in 0..rows {
            aug.row_mut(i)[..cols].copy_from_slice(m.row(i));
            aug.row_mut(i)[cols + i] = 1;
        }
        // Only pivot on the original columns.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| aug.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..aug.cols() {
                    aug.data.swap(pr * aug.cols + j, r * aug.cols + j);
                }
            }
            let inv = f.inv(aug.get(r, c));
            f.scale(aug.row_mut(r), inv);
            let pivot_row = aug.row(r).to_vec();
            for i in 0..rows {
                if i != r {
                    let a = aug.get(i, c);
                    if a != 0 {
                        f.axpy(aug.row_mut(i), f.neg(a), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut transform = FpMatrix::zeros(f, rows, rows);
        for i in 0..rows {
            transform.row_mut(i).copy_from_slice(&aug.row(i)[cols..]);
        }
        Self {
            transform: Transform::Dense(transform),
            pivots,
            rows,
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, rhs: &[u32]) -> Result<Option<Vec<u32>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        let t = match &self.transform {
            Transform::Packed(rows) => {
                let b = pack_bits(rhs);
                rows.iter()
                    .map(|row| row.iter().zip(&b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() & 1)
                    .collect()
            }
            Transform::Dense(t) => t.mul_vec(rhs)?,
        };
        if t[self.pivots.len()..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (k, &c) in self.pivots.iter().enumerate() {
            x[c] = t[k];
        }
        Ok(Some(x))
    }
}

/// An incrementally built subspace kept in reduced echelon form.
///
/// Each stored row has a leading 1 at its pivot and every other stored row is
/// zero in that column.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduce `v` against the stored rows; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let a = v[c];
            if a != 0 {
                f.axpy(v, f.neg(a), row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Add `v` to the span. Returns true when it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.field;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[c]);
        f.scale(&mut w, inv);
        for row in &mut self.rows {
            let a = row[c];
            if a != 0 {
                f.axpy(row, f.neg(a), &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` with respect to the stored basis, if it lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix::from_vecs(self.field, self.dim, self.rows.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composite() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn rref_duplicate_rows() {
        let m = FpMatrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_identity() {
        let id = FpMatrix::identity(f(3), 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_proportional_rows_mod3() {
        let m = FpMatrix::from_rows(f(3), &[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(m.rref().rank, 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FpMatrix::identity(f(2), 2).kernel_basis().rows(), 0);
        let k = FpMatrix::from_rows(f(2), &[vec![1, 1]]).unwrap().kernel_basis();
        assert_eq!(k.to_rows(), vec![vec![1, 1]]);
        assert_eq!(FpMatrix::zeros(f(2), 2, 3).kernel_basis().rows(), 3);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(f(2), 2);
        assert_eq!(id.solve(&[1, 0]).unwrap(), Some(vec![1, 0]));
        let m = FpMatrix::from_rows(f(2), &[vec![1, 1]]).unwrap();
        assert_eq!(m.solve(&[1]).unwrap(), Some(vec![1, 0]));
        let z = FpMatrix::from_rows(f(2), &[vec![0, 0]]).unwrap();
        assert_eq!(z.solve(&[1]).unwrap(), None);
        assert!(matches!(
            z.solve(&[1, 0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn row_space_coordinates() {
        let mut rs = RowSpace::new(f(5), 3);
        assert!(rs.insert(&[1, 2, 0]));
        assert!(rs.insert(&[0, 1, 1]));
        assert!(!rs.insert(&[1, 3, 1]));
        let c = rs.coordinates(&[2, 4, 0]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(rs.coordinates(&[0, 0, 1]).is_none());
    }

    fn matrix_strategy() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..6, 1usize..7).prop_flat_map(
            |(p, r, c)| {
                (
                    Just(p),
                    prop::collection::vec(prop::collection::vec(0i64..p as i64, c), r),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn rref_idempotent((p, rows) in matrix_strategy()) {
            let m = FpMatrix::from_rows(f(p), &rows).unwrap();
            let once = m.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once.clone());
        }

        #[test]
        fn rank_nullity((p, rows) in matrix_strategy()) {
            let m = FpMatrix::from_rows(f(p), &rows).unwrap();
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.rows(), m.cols());
            for v in k.to_rows() {
                prop_assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
            }
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn solutions_are_exact((p, rows) in matrix_strategy(), seed in prop::collection::vec(0u32..7, 7)) {
            let m = FpMatrix::from_rows(f(p), &rows).unwrap();
            let x0: Vec<u32> = (0..m.cols()).map(|i| seed[i] % p).collect();
            let rhs = m.mul_vec(&x0).unwrap();
            let x = m.solve(&rhs).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs);
        }
    }
}
