//! Actions of `ℤ^k` on a finite set, the finite-space case of the
//! Deaconu–Renault construction.
//!
//! A surjective self-map of a finite set is a bijection, so an action of
//! `ℕ^k` by surjective local homeomorphisms of a finite discrete space is the
//! same thing as `k` commuting permutations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{FgAbGroup, HomologyProfile};
use crate::koszul::KoszulError;
use crate::linalg::Matrix;
use crate::{IntMatrix, KoszulComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("expected {expected} permutations, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("permutation {index} has {found} images, expected one per point ({points})")]
    WrongLength {
        index: usize,
        points: usize,
        found: usize,
    },
    #[error(
        "map {index} is not a bijection of 0..{points}: {detail}. A surjective \
         self-map of a finite set must be bijective; model non-invertible finite \
         dynamics as a k-graph instead"
    )]
    NotBijective {
        index: usize,
        points: usize,
        detail: String,
    },
    #[error("permutations {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

/// `k` pairwise commuting permutations of `0..points`, given as image arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZkAction {
    k: usize,
    points: usize,
    perms: Vec<Vec<usize>>,
}

impl ZkAction {
    pub fn new(k: usize, points: usize, perms: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        if perms.len() != k {
            return Err(ActionError::WrongCount {
                expected: k,
                found: perms.len(),
            });
        }
        for (index, p) in perms.iter().enumerate() {
            if p.len() != points {
                return Err(ActionError::WrongLength {
                    index,
                    points,
                    found: p.len(),
                });
            }
            let mut hit = vec![false; points];
            for (x, &y) in p.iter().enumerate() {
                if y >= points {
                    return Err(ActionError::NotBijective {
                        index,
                        points,
                        detail: format!("point {x} maps to {y}, outside the set"),
                    });
                }
                if hit[y] {
                    return Err(ActionError::NotBijective {
                        index,
                        points,
                        detail: format!("point {y} is hit twice"),
                    });
                }
                hit[y] = true;
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if (0..points).any(|x| perms[i][perms[j][x]] != perms[j][perms[i][x]]) {
                    return Err(ActionError::NonCommuting(i, j));
                }
            }
        }
        Ok(Self { k, points, perms })
    }

    /// The trivial action of `ℤ^k` on one point.
    pub fn point(k: usize) -> Self {
        Self {
            k,
            points: 1,
            perms: vec![vec![0]; k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Permutation matrix of generator `i`: column `y` has its single 1 in
    /// row `perms[i][y]`, so that `1_y ↦ 1_{σ(y)}`.
    pub fn permutation_matrix(&self, i: usize) -> IntMatrix {
        let mut m = Matrix::zeros(self.points, self.points);
        for (y, &image) in self.perms[i].iter().enumerate() {
            m.set(image, y, BigInt::from(1));
        }
        m
    }

    pub fn to_koszul(&self) -> Result<KoszulComplex, ActionError> {
        if self.k == 0 {
            return Ok(KoszulComplex::trivial_rank(self.points));
        }
        let endos = (0..self.k).map(|i| self.permutation_matrix(i)).collect();
        Ok(KoszulComplex::build(self.k, endos)?)
    }

    pub fn homology(&self) -> Result<HomologyProfile, ActionError> {
        Ok(self.to_koszul()?.homology()?)
    }

    /// Orbits of the generated group, each listed in increasing order and
    /// keyed by its least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut orbit_of = vec![usize::MAX; self.points];
        let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for start in 0..self.points {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let mut members = vec![start];
            orbit_of[start] = start;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for p in &self.perms {
                    let y = p[x];
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = start;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            orbits.insert(start, members);
        }
        orbits.into_values().collect()
    }
}

/// Homology of the action by orbit decomposition: each orbit `ℤ^k / L`
/// contributes `H_*(L; ℤ)`, and the stabilizer `L` has finite index, hence
/// is free abelian of rank `k`. Each contribution is computed on the point
/// with the identity action.
pub fn orbit_oracle(a: &ZkAction) -> HomologyProfile {
    let orbits = a.orbits().len();
    let per_orbit = ZkAction::point(a.k)
        .homology()
        .expect("the point action is valid");
    let groups = per_orbit
        .groups
        .iter()
        .map(|g| FgAbGroup::free(g.free_rank() * orbits))
        .collect();
    HomologyProfile::new(a.k, groups)
        .with_note(format!("{orbits} orbit(s), stabilizers of rank {}", a.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::binomial;

    fn free_groups(ranks: &[usize]) -> Vec<FgAbGroup> {
        ranks.iter().map(|&r| FgAbGroup::free(r)).collect()
    }

    #[test]
    fn point_action() {
        for k in 0..=5 {
            let h = ZkAction::point(k).homology().unwrap();
            let expected: Vec<usize> = (0..=k).map(|n| binomial(k, n)).collect();
            assert_eq!(h.groups, free_groups(&expected), "k = {k}");
        }
    }

    #[test]
    fn three_cycle() {
        let a = ZkAction::new(1, 3, vec![vec![1, 2, 0]]).unwrap();
        assert_eq!(a.homology().unwrap().groups, free_groups(&[1, 1]));
        assert!(a.homology().unwrap().same_groups(&orbit_oracle(&a)));
    }

    #[test]
    fn swap_and_identity() {
        let a = ZkAction::new(2, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let h = a.homology().unwrap();
        assert_eq!(h.groups, free_groups(&[1, 2, 1]));
        assert!(h.same_groups(&orbit_oracle(&a)));
    }

    #[test]
    fn two_disjoint_two_cycles() {
        let a = ZkAction::new(1, 4, vec![vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(orbit_oracle(&a).groups, free_groups(&[2, 2]));
        assert_eq!(a.homology().unwrap().groups, free_groups(&[2, 2]));
    }

    #[test]
    fn transitive_pair() {
        // ℤ/2 × ℤ/3 acting on 6 points through a 6-cycle and its square
        let c: Vec<usize> = (0..6).map(|x| (x + 1) % 6).collect();
        let c2: Vec<usize> = (0..6).map(|x| (x + 2) % 6).collect();
        let a = ZkAction::new(2, 6, vec![c, c2]).unwrap();
        assert_eq!(a.orbits().len(), 1);
        assert_eq!(a.homology().unwrap().groups, free_groups(&[1, 2, 1]));
    }

    #[test]
    fn permutation_matrix_orientation() {
        let a = ZkAction::new(1, 3, vec![vec![1, 2, 0]]).unwrap();
        let m = a.permutation_matrix(0);
        assert_eq!(m.get(1, 0), &BigInt::from(1));
        assert_eq!(m.get(0, 2), &BigInt::from(1));
    }

    #[test]
    fn rejects_non_bijections() {
        let err = ZkAction::new(1, 3, vec![vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(err, ActionError::NotBijective { .. }));
        assert!(err.to_string().contains("k-graph"));
        assert!(matches!(
            ZkAction::new(1, 2, vec![vec![0, 2]]),
            Err(ActionError::NotBijective { .. })
        ));
        assert!(matches!(
            ZkAction::new(1, 2, vec![vec![0]]),
            Err(ActionError::WrongLength { .. })
        ));
    }

    #[test]
    fn rejects_non_commuting() {
        let a = vec![1, 0, 2];
        let b = vec![0, 2, 1];
        assert_eq!(
            ZkAction::new(2, 3, vec![a, b]),
            Err(ActionError::NonCommuting(0, 1))
        );
    }
}
