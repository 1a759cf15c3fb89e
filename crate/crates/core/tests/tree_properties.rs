mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{automorphism, proptest_config, random_automorphism, rng};
use sft_core::tree::full_automorphism_generators;
use sft_core::{
    Alphabet, Error, LeafNumbering, PatternGroup, Permutation, PermutationGroup, TreeAutomorphism,
    Vertex,
};

const B: Alphabet = Alphabet::BINARY;

fn ternary() -> Alphabet {
    Alphabet::new(3).unwrap()
}

fn all_vertices(alphabet: Alphabet, depth: usize) -> Vec<Vertex> {
    (0..alphabet.level_size(depth))
        .map(|i| Vertex::from_index(alphabet, depth, i))
        .collect()
}

proptest! {
    #![proptest_config(proptest_config(64))]

    #[test]
    fn group_axioms(depth in 0usize..=6, seeds in any::<[u64; 3]>()) {
        let r = |s: u64| random_automorphism(&mut ChaCha8Rng::seed_from_u64(s), B, depth);
        let (g, h, k) = (r(seeds[0]), r(seeds[1]), r(seeds[2]));
        let id = TreeAutomorphism::identity(B, depth);
        prop_assert_eq!(g.compose(&h).unwrap().compose(&k).unwrap(), g.compose(&h.compose(&k).unwrap()).unwrap());
        prop_assert_eq!(g.compose(&id).unwrap(), g.clone());
        prop_assert_eq!(id.compose(&g).unwrap(), g.clone());
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().compose(&g).unwrap().is_identity());
    }

    #[test]
    fn ternary_group_axioms(g in automorphism(ternary(), 3), h in automorphism(ternary(), 3)) {
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.inverse(), h.inverse().compose(&g.inverse()).unwrap());
        prop_assert_eq!(
            gh.to_leaf_permutation(),
            g.to_leaf_permutation().compose(&h.to_leaf_permutation())
        );
    }

    /// `(gh)_(v) = g_(h(v)) h_(v)`, `(g^-1)_(v) = (g_(g^-1(v)))^-1` and
    /// `g_(vu) = (g_(v))_(u)`.
    #[test]
    fn section_cocycle(g in automorphism(B, 5), h in automorphism(B, 5), level in 0usize..=5, idx in any::<usize>()) {
        let v = Vertex::from_index(B, level, idx % B.level_size(level));
        let gh = g.compose(&h).unwrap();
        let hv = h.apply(&v).unwrap();
        prop_assert_eq!(
            gh.section(&v).unwrap(),
            g.section(&hv).unwrap().compose(&h.section(&v).unwrap()).unwrap()
        );
        let g_inv = g.inverse();
        prop_assert_eq!(
            g_inv.section(&v).unwrap(),
            g.section(&g_inv.apply(&v).unwrap()).unwrap().inverse()
        );
        for split in 0..=level {
            let letters: Vec<usize> = v.letters().collect();
            let head = Vertex::new(B, &letters[..split]).unwrap();
            let tail = Vertex::new(B, &letters[split..]).unwrap();
            prop_assert_eq!(
                g.section(&head).unwrap().section(&tail).unwrap(),
                g.section(&v).unwrap()
            );
        }
    }

    /// `g(vx) = g(v) g_(v)(x)`.
    #[test]
    fn action_through_sections(g in automorphism(ternary(), 4), idx in any::<usize>(), x in 0usize..3) {
        let v = Vertex::from_index(ternary(), 3, idx % 27);
        let lhs = g.apply(&v.child(x)).unwrap();
        let y = g.section(&v).unwrap().apply(&Vertex::new(ternary(), &[x]).unwrap()).unwrap();
        prop_assert_eq!(lhs, g.apply(&v).unwrap().child(y.letters().next().unwrap()));
    }

    #[test]
    fn restriction_is_a_homomorphism(g in automorphism(B, 6), h in automorphism(B, 6), m in 0usize..=6) {
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(
            gh.restrict(m).unwrap(),
            g.restrict(m).unwrap().compose(&h.restrict(m).unwrap()).unwrap()
        );
        for m2 in 0..=m {
            prop_assert_eq!(g.restrict(m).unwrap().restrict(m2).unwrap(), g.restrict(m2).unwrap());
        }
    }

    #[test]
    fn leaf_permutation_is_an_injective_homomorphism(
        depth in 1usize..=6,
        seeds in any::<[u64; 2]>(),
        reversed in any::<bool>()
    ) {
        let numbering = if reversed { LeafNumbering::Reversed } else { LeafNumbering::Lex };
        let r = |s: u64| random_automorphism(&mut ChaCha8Rng::seed_from_u64(s), B, depth);
        let (g, h) = (r(seeds[0]), r(seeds[1]));
        let pg = g.to_leaf_permutation_with(numbering);
        let ph = h.to_leaf_permutation_with(numbering);
        prop_assert_eq!(g.compose(&h).unwrap().to_leaf_permutation_with(numbering), pg.compose(&ph));
        prop_assert_eq!(TreeAutomorphism::from_leaf_permutation_with(&pg, B, depth, numbering).unwrap(), g.clone());
        prop_assert_eq!(pg == ph, g == h);
    }

    #[test]
    fn text_round_trip(g in automorphism(ternary(), 3)) {
        prop_assert_eq!(TreeAutomorphism::parse_portrait_text(&g.to_portrait_text()).unwrap(), g);
    }
}

#[test]
fn apply_agrees_with_leaf_permutation_on_every_leaf() {
    let mut r = rng(1);
    for _ in 0..20 {
        let g = random_automorphism(&mut r, B, 5);
        let p = g.to_leaf_permutation();
        for v in all_vertices(B, 5) {
            assert_eq!(g.apply(&v).unwrap().index(B), p.image(v.index(B)));
        }
    }
}

#[test]
fn exhaustive_round_trip_depth_three() {
    let all = PatternGroup::full(B, 3).unwrap();
    assert_eq!(all.order(), 128);
    let mut leaf = HashSet::new();
    for g in all.elements() {
        for numbering in [LeafNumbering::Lex, LeafNumbering::Reversed] {
            let p = g.to_leaf_permutation_with(numbering);
            assert_eq!(
                TreeAutomorphism::from_leaf_permutation_with(&p, B, 3, numbering).unwrap(),
                *g
            );
        }
        assert!(leaf.insert(g.to_leaf_permutation()));
    }
    // homomorphism on all pairs
    for g in all.elements().iter().step_by(3) {
        for h in all.elements() {
            assert_eq!(
                g.compose(h).unwrap().to_leaf_permutation(),
                g.to_leaf_permutation().compose(&h.to_leaf_permutation())
            );
        }
    }
}

#[test]
fn full_group_orders_from_vertex_swaps() {
    for n in 0..=4usize {
        let gens: Vec<Permutation> = full_automorphism_generators(B, n)
            .iter()
            .map(|g| g.to_leaf_permutation())
            .collect();
        let g = PermutationGroup::new(B.level_size(n), gens).unwrap();
        assert_eq!(g.order(), BigUint::from(2u32).pow((1u32 << n) - 1), "n={n}");
    }
}

#[test]
fn spec_examples() {
    let id3 = TreeAutomorphism::identity(B, 3);
    let v = Vertex::new(B, &[0, 1, 1]).unwrap();
    assert_eq!(id3.apply(&v).unwrap(), v);
    let sigma = TreeAutomorphism::vertex_swap(B, 2, &Vertex::root(), &[1, 0]).unwrap();
    assert_eq!(
        sigma.apply(&Vertex::new(B, &[0, 1]).unwrap()).unwrap(),
        Vertex::new(B, &[1, 1]).unwrap()
    );
    let sigma1 = TreeAutomorphism::vertex_swap(B, 1, &Vertex::root(), &[1, 0]).unwrap();
    assert!(sigma1.compose(&sigma1).unwrap().is_identity());
    assert_eq!(sigma1.inverse(), sigma1);
    assert_eq!(sigma1.to_leaf_permutation().to_string(), "(1,2)");
    let g = random_automorphism(&mut rng(2), B, 4);
    assert_eq!(g.section(&Vertex::root()).unwrap(), g);
    assert_eq!(g.restrict(4).unwrap(), g);
    assert_eq!(g.restrict(0).unwrap(), TreeAutomorphism::identity(B, 0));
    assert!(matches!(g.restrict(5), Err(Error::Domain(_))));
    assert!(matches!(
        g.apply(&Vertex::new(B, &[0, 0, 0, 0, 0]).unwrap()),
        Err(Error::Domain(_))
    ));
    assert!(matches!(sigma.compose(&sigma1), Err(Error::Domain(_))));
    assert_eq!(
        TreeAutomorphism::identity(B, 4).to_leaf_permutation(),
        Permutation::identity(16)
    );
}

#[test]
fn non_prefix_preserving_permutation_is_rejected_with_level() {
    // swaps leaves 00 and 10 only, splitting the block {00, 01}
    let p = Permutation::parse_cycles("(1,3)", 4).unwrap();
    match TreeAutomorphism::from_leaf_permutation(&p, B, 2) {
        Err(Error::Structure { level: Some(1), .. }) => {}
        other => panic!("expected a level-1 structure error, got {other:?}"),
    }
}
