//! The complex `⋀^p ℤ^k ⊗ ℤ^m` attached to `k` commuting endomorphisms
//! `S_1, …, S_k` of `ℤ^m`.
//!
//! Degree `p` has basis `(T, v)` where `T = (i_1 < … < i_p)` runs over the
//! `p`-subsets of `0..k` in lexicographic order and `v` over `0..m`, with `v`
//! varying fastest. The boundary sends `ε_T ⊗ e_v` to
//!
//! ```text
//! Σ_j (-1)^{j+1} ε_{T \ i_j} ⊗ (I - S_{i_j}) e_v
//! ```
//!
//! (with `j` counted from 1) and the empty wedge in degree 0 is the scalar 1.

use std::borrow::Cow;
use std::collections::HashMap;

use thiserror::Error;

use crate::abelian::{FgAbGroup, HomologyProfile};
use crate::linalg::{
    cokernel_with_stats, column_hermite, invariant_factors, kernel_basis, solve_columns,
    LinalgError, Matrix, SmithStats,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("expected {expected} endomorphisms, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("endomorphism {index} is {shape:?}, expected {m}x{m}")]
    DimensionMismatch {
        index: usize,
        shape: (usize, usize),
        m: usize,
    },
    #[error("endomorphisms {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("boundary composite d_{}∘d_{} is nonzero", .degree - 1, .degree)]
    SquareNonZero { degree: usize },
    #[error("image of d_{} is not inside ker d_{}: {source}", .degree + 1, .degree)]
    BrokenComplex {
        degree: usize,
        #[source]
        source: LinalgError,
    },
    #[error("sample {index} in degree {degree} is not a cycle")]
    NotACycle { degree: usize, index: usize },
    #[error("sample {index} has length {found}, degree {degree} has rank {expected}")]
    WrongLength {
        degree: usize,
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range for a rank-{k} complex")]
    IndexOutOfRange { index: usize, k: usize },
}

/// `p`-subsets of `0..k` in lexicographic order.
pub fn wedge_basis(k: usize, p: usize) -> Vec<Vec<usize>> {
    fn extend(start: usize, k: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < p - cur.len() {
                break;
            }
            cur.push(i);
            extend(i + 1, k, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= k {
        extend(0, k, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficient growth while computing one homology group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub degree: usize,
    pub boundary_bits: u64,
    /// Peak bit length in the Hermite reduction of `∂_p`, transform included.
    pub kernel_peak_bits: u64,
    pub cycle_basis_bits: u64,
    /// The Smith reduction of `∂_{p+1}` written in the cycle basis.
    pub smith: SmithStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Koszul<T> {
    k: usize,
    m: usize,
    endos: Vec<Matrix<T>>,
    /// `boundaries[p - 1]` is `∂_p` for `1 ≤ p ≤ k`.
    boundaries: Vec<Matrix<T>>,
}

impl<T: Scalar> Koszul<T> {
    /// Builds the complex and checks `∂_{p-1} ∘ ∂_p = 0` in every degree.
    ///
    /// `m` is taken from the endomorphisms; with `k = 0` use
    /// [`Koszul::trivial_rank`] instead, since there is nothing to read it from.
    pub fn build(k: usize, endos: Vec<Matrix<T>>) -> Result<Self, KoszulError> {
        if endos.len() != k {
            return Err(KoszulError::WrongCount {
                expected: k,
                found: endos.len(),
            });
        }
        let m = endos.first().map_or(0, Matrix::rows);
        Self::build_on(m, endos)
    }

    /// The rank-0 complex: `ℤ^m` in degree 0, no boundaries.
    pub fn trivial_rank(m: usize) -> Self {
        Self {
            k: 0,
            m,
            endos: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    fn build_on(m: usize, endos: Vec<Matrix<T>>) -> Result<Self, KoszulError> {
        let k = endos.len();
        for (index, s) in endos.iter().enumerate() {
            if s.shape() != (m, m) {
                return Err(KoszulError::DimensionMismatch {
                    index,
                    shape: s.shape(),
                    m,
                });
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if endos[i].mul(&endos[j]) != endos[j].mul(&endos[i]) {
                    return Err(KoszulError::NonCommuting(i, j));
                }
            }
        }

        let shifts: Vec<Matrix<T>> = endos.iter().map(|s| Matrix::identity(m).sub(s)).collect();
        let bases: Vec<Vec<Vec<usize>>> = (0..=k).map(|p| wedge_basis(k, p)).collect();

        let mut boundaries = Vec::with_capacity(k);
        for p in 1..=k {
            let lower: HashMap<&[usize], usize> = bases[p - 1]
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect();
            let mut d = Matrix::zeros(bases[p - 1].len() * m, bases[p].len() * m);
            for (ti, tuple) in bases[p].iter().enumerate() {
                for (j, &factor) in tuple.iter().enumerate() {
                    let face: Vec<usize> = tuple
                        .iter()
                        .enumerate()
                        .filter_map(|(jj, &x)| (jj != j).then_some(x))
                        .collect();
                    let row_block = lower[face.as_slice()];
                    // j is 0-based here, so (-1)^{(j+1)+1} = (-1)^j
                    let negate = j % 2 == 1;
                    let shift = &shifts[factor];
                    for v in 0..m {
                        for w in 0..m {
                            let x = shift.get(w, v);
                            if x.is_zero() {
                                continue;
                            }
                            let x = if negate { -x.clone() } else { x.clone() };
                            d.set(row_block * m + w, ti * m + v, x);
                        }
                    }
                }
            }
            boundaries.push(d);
        }

        for p in 2..=k {
            if !boundaries[p - 2].mul(&boundaries[p - 1]).is_zero() {
                return Err(KoszulError::SquareNonZero { degree: p });
            }
        }

        Ok(Self {
            k,
            m,
            endos,
            boundaries,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn endos(&self) -> &[Matrix<T>] {
        &self.endos
    }

    /// Rank of the chain group in degree `p`.
    pub fn chain_rank(&self, p: usize) -> usize {
        binomial(self.k, p) * self.m
    }

    /// `∂_p : C_p → C_{p-1}`. The ends `∂_0` and `∂_{k+1}` are zero maps of
    /// shapes `0×m` and `m×0`; beyond those, both sides are zero.
    pub fn boundary(&self, p: usize) -> Cow<'_, Matrix<T>> {
        if (1..=self.k).contains(&p) {
            Cow::Borrowed(&self.boundaries[p - 1])
        } else {
            let rows = if p == 0 { 0 } else { self.chain_rank(p - 1) };
            Cow::Owned(Matrix::zeros(rows, self.chain_rank(p)))
        }
    }

    /// Primitive basis of the cycles `ker ∂_p`.
    pub fn cycles(&self, p: usize) -> Matrix<T> {
        kernel_basis(&self.boundary(p))
    }

    /// `H_p = ker ∂_p / im ∂_{p+1}` for `0 ≤ p ≤ k`, by expressing the
    /// boundaries in a cycle basis and taking the cokernel.
    pub fn homology(&self) -> Result<HomologyProfile, KoszulError> {
        let groups = (0..=self.k)
            .map(|p| self.homology_in_degree(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HomologyProfile::new(self.k, groups))
    }

    pub fn homology_in_degree(&self, p: usize) -> Result<FgAbGroup, KoszulError> {
        Ok(self.homology_in_degree_with_stats(p)?.0)
    }

    /// [`Koszul::homology`] together with the coefficient growth of each step.
    pub fn homology_with_stats(&self) -> Result<(HomologyProfile, Vec<DegreeStats>), KoszulError> {
        let mut groups = Vec::with_capacity(self.k + 1);
        let mut stats = Vec::with_capacity(self.k + 1);
        for p in 0..=self.k {
            let (g, st) = self.homology_in_degree_with_stats(p)?;
            groups.push(g);
            stats.push(st);
        }
        Ok((HomologyProfile::new(self.k, groups), stats))
    }

    fn homology_in_degree_with_stats(
        &self,
        p: usize,
    ) -> Result<(FgAbGroup, DegreeStats), KoszulError> {
        let d = self.boundary(p);
        let hf = column_hermite(&d);
        let z = hf.transform.select_columns(hf.rank()..d.cols());
        let coords = solve_columns(&z, &self.boundary(p + 1))
            .map_err(|source| KoszulError::BrokenComplex { degree: p, source })?;
        let (group, smith) = cokernel_with_stats(&coords);
        let stats = DegreeStats {
            degree: p,
            boundary_bits: d.max_bit_len(),
            kernel_peak_bits: hf.peak_bits,
            cycle_basis_bits: z.max_bit_len(),
            smith,
        };
        Ok((group, stats))
    }

    /// Homology from invariant factors alone: `rank H_p = c_p − rk ∂_p −
    /// rk ∂_{p+1}` and the torsion of `H_p` is that of `coker ∂_{p+1}`.
    ///
    /// Shares no code path with [`Koszul::homology`] beyond the Smith
    /// reduction, which makes it a cross-check.
    pub fn homology_via_invariant_factors(&self) -> HomologyProfile {
        let factors: Vec<Vec<T>> = (0..=self.k + 1)
            .map(|p| invariant_factors(&self.boundary(p)))
            .collect();
        let groups = (0..=self.k)
            .map(|p| {
                let free = self.chain_rank(p) - factors[p].len() - factors[p + 1].len();
                FgAbGroup::from_cyclic_orders(free, factors[p + 1].iter().map(Scalar::to_bigint))
            })
            .collect();
        HomologyProfile::new(self.k, groups)
    }

    /// Applies `id ⊗ S_i` to a chain in degree `p`.
    pub fn apply_shift(&self, i: usize, p: usize, chain: &[T]) -> Vec<T> {
        let s = &self.endos[i];
        let mut out = Vec::with_capacity(chain.len());
        for block in chain.chunks(self.m.max(1)) {
            out.extend(s.mul_vec(block));
        }
        debug_assert_eq!(out.len(), self.chain_rank(p));
        out
    }

    /// Checks that `id ⊗ S_i` acts as the identity on the homology classes of
    /// the given degree-`p` cycles: `(id ⊗ S_i) z − z ∈ im ∂_{p+1}` for each.
    pub fn verify_shift_identity(
        &self,
        i: usize,
        p: usize,
        samples: &[Vec<T>],
    ) -> Result<bool, KoszulError> {
        if i >= self.k {
            return Err(KoszulError::IndexOutOfRange {
                index: i,
                k: self.k,
            });
        }
        if p > self.k {
            return Err(KoszulError::IndexOutOfRange {
                index: p,
                k: self.k,
            });
        }
        let d = self.boundary(p);
        let expected = self.chain_rank(p);
        let mut diffs = Matrix::zeros(expected, samples.len());
        for (index, z) in samples.iter().enumerate() {
            if z.len() != expected {
                return Err(KoszulError::WrongLength {
                    degree: p,
                    index,
                    expected,
                    found: z.len(),
                });
            }
            if d.mul_vec(z).iter().any(|x| !x.is_zero()) {
                return Err(KoszulError::NotACycle { degree: p, index });
            }
            let shifted = self.apply_shift(i, p, z);
            for (r, (a, b)) in shifted.iter().zip(z).enumerate() {
                diffs.set(r, index, a.sub_exact(b));
            }
        }
        Ok(solve_columns(&self.boundary(p + 1), &diffs).is_ok())
    }

    /// Conjugates every endomorphism by `g`: `S_i ↦ g S_i g⁻¹`.
    pub fn conjugate(&self, g: &Matrix<T>, g_inv: &Matrix<T>) -> Result<Self, KoszulError> {
        let endos = self.endos.iter().map(|s| g.mul(s).mul(g_inv)).collect();
        Self::build_on(self.m, endos)
    }
}

/// Every endomorphism the identity.
pub fn identity_endos<T: Scalar>(k: usize, m: usize) -> Vec<Matrix<T>> {
    (0..k).map(|_| Matrix::identity(m)).collect()
}

/// Homology of the complex for the identity action of `ℤ^k` on `ℤ^m`,
/// i.e. `(ℤ^m)^{binom(k, n)}` in degree `n`.
pub fn free_profile(k: usize, m: usize) -> HomologyProfile {
    let groups = (0..=k)
        .map(|n| FgAbGroup::free(binomial(k, n) * m))
        .collect();
    HomologyProfile::new(k, groups)
}
