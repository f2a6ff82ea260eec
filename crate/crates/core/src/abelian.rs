//! Finitely generated abelian groups in invariant-factor form, and the
//! graded families of them that homology computations produce.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `ℤ^free_rank ⊕ ℤ_{d_1} ⊕ … ⊕ ℤ_{d_n}` with `2 ≤ d_1 | d_2 | … | d_n`.
///
/// The representation is canonical, so structural equality is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ_n`; `n = 0` gives `ℤ` and `n = ±1` the trivial group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, [n.into()])
    }

    pub fn torsion_only(orders: Vec<i64>) -> Self {
        Self::from_cyclic_orders(0, orders.into_iter().map(BigInt::from))
    }

    /// Canonical form of `ℤ^free_rank ⊕ ⊕_i ℤ_{orders[i]}` for arbitrary
    /// cyclic orders. Zero orders count as extra free summands, signs are
    /// ignored, and unit orders vanish.
    pub fn from_cyclic_orders(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut chain: Vec<BigInt> = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                chain.push(d);
            }
        }
        // Replacing (a, b) by (gcd, lcm) preserves the group; sweeping every
        // later entry through position i leaves there a divisor of all of them.
        for i in 0..chain.len() {
            for j in i + 1..chain.len() {
                let g = chain[i].gcd(&chain[j]);
                let l = chain[i].lcm(&chain[j]);
                chain[i] = g;
                chain[j] = l;
            }
        }
        chain.retain(|d| !d.is_one());
        Self {
            free_rank,
            torsion: chain,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Every cyclic summand, free summands written as order 0.
    fn summands(&self) -> impl Iterator<Item = BigInt> + '_ {
        std::iter::repeat_n(BigInt::zero(), self.free_rank).chain(self.torsion.iter().cloned())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// `ℤ_m ⊗ ℤ_n = ℤ_gcd(m, n)` extended bilinearly, with `ℤ = ℤ_0`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for a in self.summands() {
            for b in other.summands() {
                orders.push(a.gcd(&b));
            }
        }
        Self::from_cyclic_orders(0, orders)
    }

    /// `Tor(ℤ_m, ℤ_n) = ℤ_gcd(m, n)`, vanishing when either side is free.
    pub fn tor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for a in &self.torsion {
            for b in &other.torsion {
                orders.push(a.gcd(b));
            }
        }
        Self::from_cyclic_orders(0, orders)
    }

    pub fn equals(&self, other: &Self) -> bool {
        self == other
    }

    pub fn sum<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> Self {
        groups
            .into_iter()
            .fold(Self::trivial(), |acc, g| acc.direct_sum(g))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        f.write_str(&parts.join(" (+) "))
    }
}

/// Homology groups `H_0, …, H_k` of a complex concentrated in degrees `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub k: usize,
    pub groups: Vec<FgAbGroup>,
    pub notes: Vec<String>,
}

impl HomologyProfile {
    /// Panics unless `groups.len() == k + 1`.
    pub fn new(k: usize, groups: Vec<FgAbGroup>) -> Self {
        assert_eq!(
            groups.len(),
            k + 1,
            "a rank-{k} profile needs {} groups",
            k + 1
        );
        Self {
            k,
            groups,
            notes: Vec::new(),
        }
    }

    /// The profile of a point: `ℤ` in degree 0.
    pub fn point() -> Self {
        Self::new(0, vec![FgAbGroup::free(1)])
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// `H_n`, trivial outside `0..=k`.
    pub fn group(&self, n: usize) -> FgAbGroup {
        self.groups.get(n).cloned().unwrap_or_default()
    }

    /// Compares the groups degreewise, ignoring notes.
    pub fn same_groups(&self, other: &Self) -> bool {
        let top = self.k.max(other.k);
        (0..=top).all(|n| self.group(n) == other.group(n))
    }

    /// `Σ (-1)^p rank H_p`.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(p, g)| {
                let r = g.free_rank() as i64;
                if p % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    pub fn even_sum(&self) -> FgAbGroup {
        FgAbGroup::sum(self.groups.iter().step_by(2))
    }

    pub fn odd_sum(&self) -> FgAbGroup {
        FgAbGroup::sum(self.groups.iter().skip(1).step_by(2))
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_trivial)
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, g) in self.groups.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "H_{n} = {g}")?;
        }
        Ok(())
    }
}

/// Split Künneth composition of two profiles:
/// `H_n = ⊕_{i+j=n} a_i ⊗ b_j ⊕ ⊕_{i+j=n-1} Tor(a_i, b_j)`.
pub fn kunneth(a: &HomologyProfile, b: &HomologyProfile) -> HomologyProfile {
    let k = a.k + b.k;
    let mut groups = vec![FgAbGroup::trivial(); k + 1];
    for (i, ai) in a.groups.iter().enumerate() {
        for (j, bj) in b.groups.iter().enumerate() {
            groups[i + j] = groups[i + j].direct_sum(&ai.tensor(bj));
            if i + j < k {
                groups[i + j + 1] = groups[i + j + 1].direct_sum(&ai.tor(bj));
            }
        }
    }
    HomologyProfile::new(k, groups)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn g(free: usize, torsion: &[i64]) -> FgAbGroup {
        FgAbGroup::from_cyclic_orders(free, torsion.iter().map(|&d| BigInt::from(d)))
    }

    #[test]
    fn canonical_form() {
        assert_eq!(
            g(0, &[6, 4]).torsion(),
            &[BigInt::from(2), BigInt::from(12)]
        );
        assert_eq!(g(0, &[1, 1]), FgAbGroup::trivial());
        assert_eq!(g(0, &[0, -3]), g(1, &[3]));
        assert_eq!(g(0, &[2, 3]), g(0, &[6]));
    }

    #[test]
    fn direct_sums() {
        assert_eq!(g(1, &[]).direct_sum(&g(0, &[2])), g(1, &[2]));
        assert_eq!(
            g(0, &[2]).direct_sum(&g(0, &[2])).torsion(),
            &[BigInt::from(2), BigInt::from(2)]
        );
        // already a chain, matching the SNF of diag(2, 4)
        assert_eq!(
            g(0, &[2]).direct_sum(&g(0, &[4])).torsion(),
            &[BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn tensor_products() {
        assert_eq!(g(0, &[4]).tensor(&g(0, &[6])), g(0, &[2]));
        assert_eq!(g(2, &[]).tensor(&g(1, &[3])), g(2, &[3, 3]));
        assert!(g(3, &[5]).tensor(&FgAbGroup::trivial()).is_trivial());
    }

    #[test]
    fn tor_products() {
        assert_eq!(g(0, &[4]).tor(&g(0, &[6])), g(0, &[2]));
        assert!(g(5, &[]).tor(&g(2, &[7, 14])).is_trivial());
        assert_eq!(g(1, &[2]).tor(&g(0, &[2])), g(0, &[2]));
    }

    #[test]
    fn equality_is_isomorphism() {
        assert!(g(0, &[2, 2]).equals(&g(0, &[2, 2])));
        assert!(!g(0, &[4]).equals(&g(0, &[2, 2])));
        assert!(!g(1, &[]).equals(&g(0, &[])));
    }

    #[test]
    fn rendering() {
        assert_eq!(FgAbGroup::trivial().to_string(), "0");
        assert_eq!(g(0, &[2, 2]).to_string(), "Z_2 (+) Z_2");
        assert_eq!(g(3, &[4]).to_string(), "Z^3 (+) Z_4");
        assert_eq!(g(1, &[]).to_string(), "Z");
    }

    #[test]
    fn kunneth_examples() {
        let z2 = HomologyProfile::new(1, vec![g(0, &[2]), g(0, &[])]);
        let composed = kunneth(&z2, &z2);
        assert_eq!(composed.groups, vec![g(0, &[2]), g(0, &[2]), g(0, &[])]);

        assert!(kunneth(&z2, &HomologyProfile::point()).same_groups(&z2));

        let circle = HomologyProfile::new(1, vec![g(1, &[]), g(1, &[])]);
        assert_eq!(
            kunneth(&circle, &circle).groups,
            vec![g(1, &[]), g(2, &[]), g(1, &[])]
        );
    }

    #[test]
    fn profile_accessors() {
        let p = HomologyProfile::new(2, vec![g(1, &[2]), g(2, &[]), g(1, &[3])]);
        assert_eq!(p.euler_characteristic(), 0);
        assert_eq!(p.even_sum(), g(2, &[6]));
        assert_eq!(p.odd_sum(), g(2, &[]));
        assert!(p.group(7).is_trivial());
        assert_eq!(p.to_string(), "H_0 = Z (+) Z_2, H_1 = Z^2, H_2 = Z (+) Z_3");
    }

    fn arb_group() -> impl Strategy<Value = FgAbGroup> {
        (0usize..3, prop::collection::vec(1i64..40, 0..4)).prop_map(|(r, t)| g(r, &t))
    }

    /// Product of all cyclic orders, computed from the raw summands.
    fn raw_order(orders: &[i64]) -> BigInt {
        orders.iter().map(|&d| BigInt::from(d)).product()
    }

    proptest! {
        #[test]
        fn canonical_invariants(free in 0usize..3, orders in prop::collection::vec(1i64..60, 0..6)) {
            let grp = g(free, &orders);
            prop_assert_eq!(grp.free_rank(), free);
            prop_assert_eq!(grp.torsion_order(), raw_order(&orders));
            for d in grp.torsion() {
                prop_assert!(*d >= BigInt::from(2));
            }
            for w in grp.torsion().windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }

        #[test]
        fn tensor_and_tor_are_commutative_and_additive(a in arb_group(), b in arb_group(), c in arb_group()) {
            prop_assert_eq!(a.tensor(&b), b.tensor(&a));
            prop_assert_eq!(a.tor(&b), b.tor(&a));
            prop_assert_eq!(a.direct_sum(&b).tensor(&c), a.tensor(&c).direct_sum(&b.tensor(&c)));
            prop_assert_eq!(a.direct_sum(&b).tor(&c), a.tor(&c).direct_sum(&b.tor(&c)));
        }

        #[test]
        fn integers_are_the_unit(a in arb_group()) {
            prop_assert_eq!(a.tensor(&FgAbGroup::free(1)), a.clone());
            prop_assert!(a.tor(&FgAbGroup::free(1)).is_trivial());
        }
    }
}
