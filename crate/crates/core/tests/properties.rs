use proptest::prelude::*;
use trop_moduli::automorphism::{reconstruct_sigma, sn_action};
use trop_moduli::complex::build_complex;
use trop_moduli::enumeration::expansions;
use trop_moduli::perm::Permutation;
use trop_moduli::tree::{
    are_isomorphic, tree_from_canonical, tree_from_splits, CanonicalForm, LeggedTree,
};

/// A random stable tree, grown from the single vertex by random expansions.
fn arb_tree() -> impl Strategy<Value = LeggedTree> {
    (4usize..=8, prop::collection::vec(any::<usize>(), 0..6)).prop_map(|(n, picks)| {
        let mut t = LeggedTree::single_vertex(n).unwrap();
        for p in picks {
            let options = expansions(&t);
            if options.is_empty() {
                break;
            }
            t = options[p % options.len()].tree.clone();
        }
        t
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn arb_tree_and_perms() -> impl Strategy<Value = (LeggedTree, Permutation, Permutation)> {
    arb_tree().prop_flat_map(|t| {
        let n = t.n();
        (Just(t), arb_perm(n), arb_perm(n))
    })
}

proptest! {
    #[test]
    fn split_round_trip(t in arb_tree()) {
        prop_assert!(t.is_stable());
        let cf = t.splits_of().unwrap();
        let back = tree_from_splits(t.n(), cf.splits()).unwrap();
        prop_assert!(are_isomorphic(&t, &back).unwrap());
        prop_assert_eq!(back.splits_of().unwrap(), cf.clone());
        let json = serde_json::to_string(&cf).unwrap();
        let parsed: CanonicalForm = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(parsed, cf);
    }

    #[test]
    fn splits_are_pairwise_compatible(t in arb_tree()) {
        let cf = t.splits_of().unwrap();
        for a in cf.splits() {
            for b in cf.splits() {
                prop_assert!(a.compatible(b).unwrap());
            }
        }
        prop_assert_eq!(cf.dimension(), t.num_edges());
    }

    #[test]
    fn marking_action_is_a_left_action((t, s, u) in arb_tree_and_perms()) {
        let su = s.compose(&u);
        let lhs = t.apply_marking_permutation(&su).unwrap().splits_of().unwrap();
        let rhs = t
            .apply_marking_permutation(&u)
            .unwrap()
            .apply_marking_permutation(&s)
            .unwrap()
            .splits_of()
            .unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, t.splits_of().unwrap().permuted(&su));
        let id = Permutation::identity(t.n());
        prop_assert_eq!(t.apply_marking_permutation(&id).unwrap().splits_of().unwrap(), t.splits_of().unwrap());
    }

    #[test]
    fn contraction_is_functorial(t in arb_tree(), mask1 in any::<u8>(), mask2 in any::<u8>()) {
        let m = t.num_edges();
        let s1: Vec<usize> = (0..m).filter(|&e| mask1 >> e & 1 == 1).collect();
        let s2: Vec<usize> = (0..m).filter(|&e| mask2 >> e & 1 == 1 && !s1.contains(&e)).collect();
        let first = t.contract(&s1).unwrap();
        let s2_image: Vec<usize> = s2.iter().map(|&e| first.retained[e].unwrap()).collect();
        let stepwise = first.tree.contract(&s2_image).unwrap();
        let union: Vec<usize> = s1.iter().chain(&s2).copied().collect();
        let direct = t.contract(&union).unwrap();
        prop_assert!(direct.tree.is_stable());
        prop_assert_eq!(stepwise.tree.splits_of().unwrap(), direct.tree.splits_of().unwrap());
        prop_assert_eq!(direct.tree.num_edges(), m - union.len());
    }

    #[test]
    fn canonical_tree_is_rigid(t in arb_tree()) {
        let rebuilt = tree_from_canonical(&t.splits_of().unwrap());
        prop_assert_eq!(trop_moduli::tree::automorphisms_of_tree(&rebuilt).len(), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sn_action_is_a_homomorphism_and_reconstructs(s in arb_perm(6), u in arb_perm(6)) {
        let cx = build_complex(6).unwrap();
        let fs = sn_action(&cx, &s).unwrap();
        let fu = sn_action(&cx, &u).unwrap();
        let fsu = sn_action(&cx, &s.compose(&u)).unwrap();
        prop_assert_eq!(&fsu, &fs.compose(&fu));
        prop_assert_eq!(reconstruct_sigma(&cx, &fsu).unwrap(), s.compose(&u));
        prop_assert_eq!(fs.inverse(), sn_action(&cx, &s.inverse()).unwrap());
    }
}
