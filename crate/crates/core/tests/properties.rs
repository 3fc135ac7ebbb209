use proptest::prelude::*;

use morita_core::bimodule::{derived_identities, verify_context};
use morita_core::constructions::build_symmetric_inverse_monoid;
use morita_core::enlargement::{canonical_context, corner, is_full};
use morita_core::groupoid::{characters, universal_groupoid};
use morita_core::iso::{is_isomorphism, isomorphism};
use morita_core::karoubi::idempotent_splitting;
use morita_core::search::invariant_screen;
use morita_core::structure::subsemigroup_closure;
use morita_core::InverseSemigroup;

/// Inverse subsemigroups of the symmetric inverse monoid on three points,
/// generated by a few elements and their inverses.
fn subsemigroup() -> impl Strategy<Value = InverseSemigroup> {
    prop::collection::vec(0usize..34, 1..4).prop_map(|gens| {
        let sym = build_symmetric_inverse_monoid(3).unwrap();
        let mut seed = gens.clone();
        seed.extend(gens.iter().map(|&g| sym.inv(g)));
        let elems = subsemigroup_closure(&sym, &seed);
        sym.restrict(&elems).unwrap().0
    })
}

fn relabel(s: &InverseSemigroup, perm: &[usize]) -> InverseSemigroup {
    let n = s.size();
    let mut table = vec![vec![0; n]; n];
    for a in s.elements() {
        for b in s.elements() {
            table[perm[a]][perm[b]] = perm[s.mul(a, b)];
        }
    }
    InverseSemigroup::from_table(table, None).unwrap()
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut x = seed | 1;
    for i in (1..n).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        p.swap(i, (x % (i as u64 + 1)) as usize);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identity_context_verifies(s in subsemigroup()) {
        let all: Vec<usize> = s.elements().collect();
        let ctx = canonical_context(&s, &all).unwrap();
        prop_assert!(verify_context(&ctx).all_pass());
        prop_assert!(derived_identities(&ctx).unwrap().all_pass());
    }

    #[test]
    fn full_corners_give_contexts(s in subsemigroup()) {
        for &e in s.idempotents() {
            if is_full(&s, e) {
                let (_, embed) = corner(&s, e).unwrap();
                let ctx = canonical_context(&s, &embed).unwrap();
                prop_assert!(verify_context(&ctx).all_pass());
            }
        }
    }

    #[test]
    fn relabelling_preserves_everything(s in subsemigroup(), seed in any::<u64>()) {
        let perm = permutation(s.size(), seed);
        let r = relabel(&s, &perm);
        prop_assert!(is_isomorphism(&s, &r, &perm));
        let found = isomorphism(&s, &r).unwrap();
        prop_assert!(is_isomorphism(&s, &r, &found));
        prop_assert!(invariant_screen(&s, &r).all_pass());
    }

    #[test]
    fn finite_characters_are_principal(s in subsemigroup()) {
        let chars = characters(&s);
        prop_assert_eq!(chars.len(), s.idempotents().len());
        let g = universal_groupoid(&s).unwrap();
        prop_assert_eq!(g.groupoid.unit_count(), chars.len());
    }

    #[test]
    fn splitting_hom_sets_are_corners(s in subsemigroup()) {
        let sp = idempotent_splitting(&s);
        let es = s.idempotents();
        let expected: usize = es
            .iter()
            .map(|&f| es.iter().map(|&e| s.elements().filter(|&x| s.mul3(f, x, e) == x).count()).sum::<usize>())
            .sum();
        prop_assert_eq!(sp.category.arrow_count(), expected);
        prop_assert_eq!(sp.category.object_count(), es.len());
    }
}
