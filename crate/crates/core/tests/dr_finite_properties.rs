use ample_homology::{orbit_oracle, ZkAction};
use proptest::prelude::*;

/// Points split into consecutive cycles; generator `i` rotates cycle `b` by
/// `powers[i][b]`. Disjoint cycles commute, as do powers of one cycle.
fn cycle_action() -> impl Strategy<Value = ZkAction> {
    (prop::collection::vec(1usize..=4, 1..=4), 1usize..=3).prop_flat_map(|(lengths, k)| {
        let blocks = lengths.len();
        prop::collection::vec(prop::collection::vec(0usize..4, blocks), k).prop_map(move |powers| {
            let points: usize = lengths.iter().sum();
            let perms = powers
                .iter()
                .map(|pw| {
                    let mut image = vec![0; points];
                    let mut start = 0;
                    for (b, &len) in lengths.iter().enumerate() {
                        for x in 0..len {
                            image[start + x] = start + (x + pw[b]) % len;
                        }
                        start += len;
                    }
                    image
                })
                .collect();
            ZkAction::new(powers.len(), points, perms).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn koszul_homology_matches_orbit_count(a in cycle_action()) {
        let h = a.homology().unwrap();
        prop_assert!(h.same_groups(&orbit_oracle(&a)));
        prop_assert!(h.groups.iter().all(|g| g.is_torsion_free()));
    }
}
