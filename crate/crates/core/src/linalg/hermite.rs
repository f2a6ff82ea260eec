use super::{cmp_abs, nearest_quotient, LinalgError, Matrix};
use crate::scalar::Scalar;

/// Column Hermite form `a · transform = h` with `transform` unimodular.
///
/// The first `rank` columns of `h` are nonzero and in echelon form: column
/// `j` vanishes above `pivot_rows[j]`, has a positive pivot there, and every
/// earlier column is reduced into `[0, pivot)` in that row. The remaining
/// columns of `h` are zero, so the matching columns of `transform` span the
/// integer kernel of `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnHermite<T> {
    pub h: Matrix<T>,
    pub transform: Matrix<T>,
    pub pivot_rows: Vec<usize>,
    pub peak_bits: u64,
}

impl<T: Scalar> ColumnHermite<T> {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn column_hermite<T: Scalar>(a: &Matrix<T>) -> ColumnHermite<T> {
    reduce(a, true)
}

pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    reduce(a, false).rank()
}

/// Primitive basis (as columns) of the integer kernel `{x : a x = 0}`.
pub fn kernel_basis<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let hf = column_hermite(a);
    let r = hf.rank();
    hf.transform.select_columns(r..a.cols())
}

/// Finds `y` with `a · y = b`, column by column.
pub fn solve_columns<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            context: "solve_columns right-hand side",
            expected: (a.rows(), b.cols()),
            found: b.shape(),
        });
    }
    let hf = column_hermite(a);
    let rank = hf.rank();
    let mut z = Matrix::zeros(rank, b.cols());
    for col in 0..b.cols() {
        let mut x = b.column(col);
        for (j, &r) in hf.pivot_rows.iter().enumerate() {
            if x[r].is_zero() {
                continue;
            }
            let (q, rem) = x[r].div_rem(hf.h.get(r, j));
            if !rem.is_zero() {
                return Err(LinalgError::NoIntegerSolution { column: col });
            }
            for (i, xi) in x.iter_mut().enumerate().skip(r) {
                let h = hf.h.get(i, j);
                if !h.is_zero() {
                    *xi = xi.sub_mul_exact(&q, h);
                }
            }
            z.set(j, col, q);
        }
        if x.iter().any(|v| !v.is_zero()) {
            return Err(LinalgError::NoIntegerSolution { column: col });
        }
    }
    Ok(hf.transform.select_columns(0..rank).mul(&z))
}

fn reduce<T: Scalar>(a: &Matrix<T>, track: bool) -> ColumnHermite<T> {
    let (rows, cols) = a.shape();
    let mut h = a.clone();
    let mut w = if track {
        Matrix::identity(cols)
    } else {
        Matrix::zeros(0, 0)
    };
    let mut pivot_rows = Vec::new();
    let mut peak = a.max_bit_len();
    let mut pc = 0;

    let mut col_op = |h: &mut Matrix<T>, w: &mut Matrix<T>, dst: usize, q: &T, src: usize| {
        peak = peak.max(h.col_sub_mul(dst, q, src));
        if track {
            peak = peak.max(w.col_sub_mul(dst, q, src));
        }
    };

    for r in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pc..cols {
                let x = h.get(r, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if cmp_abs(x, h.get(r, b)).is_ge() => {}
                    _ => best = Some(c),
                }
            }
            let Some(c) = best else { break };
            h.swap_cols(pc, c);
            if track {
                w.swap_cols(pc, c);
            }
            let p = h.get(r, pc).clone();
            let mut dirty = false;
            for c in pc + 1..cols {
                if h.get(r, c).is_zero() {
                    continue;
                }
                let q = nearest_quotient(h.get(r, c), &p);
                col_op(&mut h, &mut w, c, &q, pc);
                dirty |= !h.get(r, c).is_zero();
            }
            if dirty {
                continue;
            }
            if p.is_negative() {
                h.negate_col(pc);
                if track {
                    w.negate_col(pc);
                }
            }
            let p = h.get(r, pc).clone();
            for c in 0..pc {
                let q = h.get(r, c).div_floor(&p);
                if !q.is_zero() {
                    col_op(&mut h, &mut w, c, &q, pc);
                }
            }
            pivot_rows.push(r);
            pc += 1;
            break;
        }
    }

    ColumnHermite {
        h,
        transform: w,
        pivot_rows,
        peak_bits: peak,
    }
}
