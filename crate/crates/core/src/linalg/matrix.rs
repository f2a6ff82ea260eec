use std::fmt;

use num_traits::Zero;

use super::LinalgError;
use crate::scalar::Scalar;

/// Dense integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix data",
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.data[i * cols + i] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share a length.
    ///
    /// An empty list of rows gives the 0×0 matrix; use [`Matrix::zeros`] for
    /// other empty shapes.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    context: "ragged rows",
                    expected: (r, c),
                    found: (r, row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Convenience constructor from machine integers. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| T::from_int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("rows must have equal length")
    }

    /// Builds a single column.
    pub fn column_vector(entries: Vec<T>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Matrix product `self · rhs`. Panics when the inner dimensions differ.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * rhs.cols + c;
                    out.data[idx] = out.data[idx].add_exact(&a.mul_exact(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc.add_exact(&a.mul_exact(b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in addition");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add_exact(b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in subtraction");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub_exact(b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        let data = self.data.iter().map(|a| a.mul_exact(s)).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product `self ⊗ rhs`; row index `(i, k)` maps to `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            a.mul_exact(rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "row count mismatch in hcat");
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Self {
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: impl IntoIterator<Item = usize>) -> Self {
        let picked: Vec<usize> = cols.into_iter().collect();
        let mut out = Self::zeros(self.rows, picked.len());
        for r in 0..self.rows {
            for (j, &c) in picked.iter().enumerate() {
                out.data[r * picked.len() + j] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn max_bit_len(&self) -> u64 {
        self.data.iter().map(Scalar::bit_len).max().unwrap_or(0)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(T::zero());
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = pivot
                        .mul_exact(a.get(i, j))
                        .sub_exact(&a.get(i, k).mul_exact(a.get(k, j)));
                    a.set(i, j, num / prev.clone());
                }
                a.set(i, k, T::zero());
            }
            prev = pivot;
        }
        Ok(sign * a.get(n - 1, n - 1).clone())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] -= q * row[src]`, returning the largest bit length written.
    pub(crate) fn row_sub_mul(&mut self, dst: usize, q: &T, src: usize) -> u64 {
        let mut peak = 0;
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = self.data[dst * self.cols + c].sub_mul_exact(q, s);
            peak = peak.max(v.bit_len());
            self.data[dst * self.cols + c] = v;
        }
        peak
    }

    /// `col[dst] -= q * col[src]`, returning the largest bit length written.
    pub(crate) fn col_sub_mul(&mut self, dst: usize, q: &T, src: usize) -> u64 {
        let mut peak = 0;
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let v = self.data[r * self.cols + dst].sub_mul_exact(q, s);
            peak = peak.max(v.bit_len());
            self.data[r * self.cols + dst] = v;
        }
        peak
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -v.clone();
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + c];
            *v = -v.clone();
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)).take(self.rows))
            .finish()
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    type M = Matrix<BigInt>;

    #[test]
    fn product_and_transpose() {
        let a = M::from_i64_rows(&[[1, 2], [3, 4]]);
        let b = M::from_i64_rows(&[[0, 1], [1, 0]]);
        assert_eq!(a.mul(&b), M::from_i64_rows(&[[2, 1], [4, 3]]));
        assert_eq!(a.transpose(), M::from_i64_rows(&[[1, 3], [2, 4]]));
        assert_eq!(
            a.mul_vec(&[BigInt::from(1), BigInt::from(-1)]),
            vec![BigInt::from(-1), BigInt::from(-1)]
        );
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = M::zeros(2, 0);
        let b = M::zeros(0, 3);
        assert_eq!(a.mul(&b), M::zeros(2, 3));
        assert_eq!(b.transpose().shape(), (3, 0));
        assert_eq!(M::zeros(0, 0).determinant().unwrap(), BigInt::from(1));
    }

    #[test]
    fn kronecker_layout() {
        let a = M::from_i64_rows(&[[2]]);
        let swap = M::from_i64_rows(&[[0, 1], [1, 0]]);
        assert_eq!(a.kron(&M::identity(2)), M::from_i64_rows(&[[2, 0], [0, 2]]));
        let k = M::identity(2).kron(&swap);
        assert_eq!(k.get(0, 1), &BigInt::from(1));
        assert_eq!(k.get(2, 3), &BigInt::from(1));
        assert_eq!(k.get(0, 3), &BigInt::from(0));
    }

    #[test]
    fn bareiss_determinant() {
        let a = M::from_i64_rows(&[[-4, -2], [-2, -2]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(4));
        let b = M::from_i64_rows(&[[0, 2, 1], [1, 0, 0], [3, 1, 5]]);
        // 0*(0-0) - 2*(5-0) + 1*(1-0)
        assert_eq!(b.determinant().unwrap(), BigInt::from(-9));
        assert!(M::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = M::from_rows(vec![vec![BigInt::from(1)], vec![]]);
        assert!(err.is_err());
        assert!(M::new(2, 2, vec![BigInt::from(0); 3]).is_err());
    }
}
