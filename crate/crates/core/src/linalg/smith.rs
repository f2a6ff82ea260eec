use super::{cmp_abs, nearest_quotient, Matrix};
use crate::abelian::FgAbGroup;
use crate::scalar::Scalar;

/// Smith normal form `u · a · v = diag(d)` of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith<T> {
    /// `min(rows, cols)` diagonal entries: the `rank` nonzero invariant
    /// factors in divisibility order, followed by zeros.
    pub d: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
}

impl<T: Scalar> Smith<T> {
    pub fn diagonal_matrix(&self) -> Matrix<T> {
        Matrix::diagonal(self.u.rows(), self.v.rows(), &self.d)
    }

    pub fn invariant_factors(&self) -> &[T] {
        &self.d[..self.rank]
    }
}

/// Coefficient growth observed while reducing one matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SmithStats {
    pub input_bits: u64,
    /// Largest entry bit length ever written to the working matrix.
    pub peak_bits: u64,
    /// Largest entry bit length written to `u` or `v`; zero when transforms
    /// were not tracked.
    pub peak_transform_bits: u64,
    pub pivots: usize,
    pub elementary_steps: usize,
}

pub fn snf<T: Scalar>(a: &Matrix<T>) -> Smith<T> {
    snf_with_stats(a).0
}

pub fn snf_with_stats<T: Scalar>(a: &Matrix<T>) -> (Smith<T>, SmithStats) {
    let mut work = Reduction::new(a, true, false);
    work.run();
    let rank = work.rank;
    let d = work.diagonal();
    let stats = work.stats;
    let smith = Smith {
        d,
        u: work.u.expect("tracked"),
        v: work.v.expect("tracked"),
        rank,
    };
    (smith, stats)
}

/// Smith form together with integer inverses of both transforms.
///
/// `u · u_inv = I` and `v · v_inv = I` with all four matrices integral is an
/// exact certificate that `u` and `v` are unimodular, and is much cheaper to
/// check than a determinant once the transform entries have grown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedSmith<T> {
    pub smith: Smith<T>,
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub stats: SmithStats,
}

pub fn snf_certified<T: Scalar>(a: &Matrix<T>) -> CertifiedSmith<T> {
    let mut work = Reduction::new(a, true, true);
    work.run();
    let d = work.diagonal();
    CertifiedSmith {
        smith: Smith {
            d,
            u: work.u.expect("tracked"),
            v: work.v.expect("tracked"),
            rank: work.rank,
        },
        u_inv: work.u_inv.expect("tracked"),
        v_inv: work.v_inv.expect("tracked"),
        stats: work.stats,
    }
}

/// Nonzero invariant factors of `a` (unit factors included), without the
/// transform bookkeeping.
pub fn invariant_factors<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    invariant_factors_with_stats(a).0
}

pub fn invariant_factors_with_stats<T: Scalar>(a: &Matrix<T>) -> (Vec<T>, SmithStats) {
    let mut work = Reduction::new(a, false, false);
    work.run();
    let mut d = work.diagonal();
    d.truncate(work.rank);
    (d, work.stats)
}

/// `ℤ^rows / column span(a)` in canonical form.
pub fn cokernel<T: Scalar>(a: &Matrix<T>) -> FgAbGroup {
    cokernel_with_stats(a).0
}

pub fn cokernel_with_stats<T: Scalar>(a: &Matrix<T>) -> (FgAbGroup, SmithStats) {
    let (d, stats) = invariant_factors_with_stats(a);
    let group = FgAbGroup::from_cyclic_orders(a.rows() - d.len(), d.iter().map(Scalar::to_bigint));
    (group, stats)
}

struct Reduction<T> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    // u_inv absorbs the inverse of every row operation from the right,
    // v_inv the inverse of every column operation from the left.
    u_inv: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
    rank: usize,
    stats: SmithStats,
}

impl<T: Scalar> Reduction<T> {
    fn new(a: &Matrix<T>, transforms: bool, inverses: bool) -> Self {
        let input_bits = a.max_bit_len();
        Self {
            a: a.clone(),
            u: transforms.then(|| Matrix::identity(a.rows())),
            v: transforms.then(|| Matrix::identity(a.cols())),
            u_inv: inverses.then(|| Matrix::identity(a.rows())),
            v_inv: inverses.then(|| Matrix::identity(a.cols())),
            rank: 0,
            stats: SmithStats {
                input_bits,
                peak_bits: input_bits,
                ..SmithStats::default()
            },
        }
    }

    /// Position of the nonzero entry of least absolute value in the block
    /// starting at `(t, t)`; ties go to the lowest `(row, col)`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let x = self.a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if cmp_abs(x, self.a.get(br, bc)).is_ge() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }

    fn swap_into(&mut self, t: usize, (r, c): (usize, usize)) {
        self.a.swap_rows(t, r);
        self.a.swap_cols(t, c);
        if let Some(u) = &mut self.u {
            u.swap_rows(t, r);
        }
        if let Some(v) = &mut self.v {
            v.swap_cols(t, c);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(t, r);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(t, c);
        }
    }

    fn row_op(&mut self, dst: usize, q: &T, src: usize) {
        let bits = self.a.row_sub_mul(dst, q, src);
        self.stats.peak_bits = self.stats.peak_bits.max(bits);
        self.stats.elementary_steps += 1;
        if let Some(u) = &mut self.u {
            let bits = u.row_sub_mul(dst, q, src);
            self.stats.peak_transform_bits = self.stats.peak_transform_bits.max(bits);
        }
        if let Some(ui) = &mut self.u_inv {
            // (I - q e_dst e_src^t)^{-1} = I + q e_dst e_src^t
            ui.col_sub_mul(src, &-q.clone(), dst);
        }
    }

    fn col_op(&mut self, dst: usize, q: &T, src: usize) {
        let bits = self.a.col_sub_mul(dst, q, src);
        self.stats.peak_bits = self.stats.peak_bits.max(bits);
        self.stats.elementary_steps += 1;
        if let Some(v) = &mut self.v {
            let bits = v.col_sub_mul(dst, q, src);
            self.stats.peak_transform_bits = self.stats.peak_transform_bits.max(bits);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.row_sub_mul(src, &-q.clone(), dst);
        }
    }

    /// Clears row and column `t` against the pivot; returns whether nonzero
    /// remainders were left behind.
    fn clear_cross(&mut self, t: usize) -> bool {
        let p = self.a.get(t, t).clone();
        let mut dirty = false;
        for r in t + 1..self.a.rows() {
            if self.a.get(r, t).is_zero() {
                continue;
            }
            let q = nearest_quotient(self.a.get(r, t), &p);
            if !q.is_zero() {
                self.row_op(r, &q, t);
            }
            dirty |= !self.a.get(r, t).is_zero();
        }
        for c in t + 1..self.a.cols() {
            if self.a.get(t, c).is_zero() {
                continue;
            }
            let q = nearest_quotient(self.a.get(t, c), &p);
            if !q.is_zero() {
                self.col_op(c, &q, t);
            }
            dirty |= !self.a.get(t, c).is_zero();
        }
        dirty
    }

    /// First row below `t` holding an entry the pivot does not divide.
    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = self.a.get(t, t);
        (t + 1..self.a.rows()).find(|&r| {
            (t + 1..self.a.cols()).any(|c| {
                let x = self.a.get(r, c);
                !x.is_zero() && !x.is_multiple_of(p)
            })
        })
    }

    fn run(&mut self) {
        let bound = self.a.rows().min(self.a.cols());
        let mut t = 0;
        while t < bound {
            let Some(pos) = self.min_entry(t) else { break };
            self.swap_into(t, pos);
            self.stats.pivots += 1;
            loop {
                if self.clear_cross(t) {
                    let pos = self.min_entry(t).expect("a remainder is nonzero");
                    self.swap_into(t, pos);
                    self.stats.pivots += 1;
                    continue;
                }
                if let Some(r) = self.non_divisible_row(t) {
                    self.row_op(t, &-T::one(), r);
                    continue;
                }
                break;
            }
            if self.a.get(t, t).is_negative() {
                self.a.negate_row(t);
                if let Some(u) = &mut self.u {
                    u.negate_row(t);
                }
                if let Some(ui) = &mut self.u_inv {
                    ui.negate_col(t);
                }
            }
            t += 1;
        }
        self.rank = t;
    }

    fn diagonal(&self) -> Vec<T> {
        let n = self.a.rows().min(self.a.cols());
        (0..n).map(|i| self.a.get(i, i).clone()).collect()
    }
}
