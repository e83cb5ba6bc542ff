//! Homomorphism counts against brute-force oracles, Tietze and permutation
//! invariance, and the level-rewriting identity.

use kleinian_tree::groups::{catalog_groups, enumerate_homs, FiniteGroup, Presentation, Word};
use kleinian_tree::tree::{expand_to_level, is_alternating, presentation_full, presentation_leaf, sample_alternating_words, VertexAddress};
use proptest::prelude::*;

/// Evaluates a word directly from the multiplication table.
fn eval(h: &FiniteGroup, p: &Presentation, images: &[usize], w: &Word) -> usize {
    w.syllables().iter().fold(h.identity(), |acc, s| {
        let i = p.generator_index(&s.generator).unwrap();
        let mut x = h.identity();
        let base = if s.exponent < 0 { h.inv(images[i]) } else { images[i] };
        for _ in 0..s.exponent.unsigned_abs() {
            x = h.mul(x, base);
        }
        h.mul(acc, x)
    })
}

/// Counts tuples of generator images satisfying every relator, without
/// any pruning.
fn brute_force_count(p: &Presentation, h: &FiniteGroup) -> usize {
    let k = p.generators().len();
    let total = h.order().pow(k as u32);
    let mut images = vec![0; k];
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        for x in images.iter_mut() {
            *x = c % h.order();
            c /= h.order();
        }
        if p.relators().iter().all(|r| eval(h, p, &images, r) == h.identity()) {
            count += 1;
        }
    }
    count
}

fn small_catalog(max_order: usize) -> Vec<FiniteGroup> {
    catalog_groups(max_order).unwrap()
}

#[test]
fn enumeration_matches_brute_force() {
    for h in small_catalog(6) {
        for n in 1..=2 {
            for p in [presentation_leaf(n).unwrap(), presentation_full(n).unwrap()] {
                if h.order().pow(p.generators().len() as u32) > 2_000_000 {
                    continue;
                }
                assert_eq!(enumerate_homs(&p, &h).len(), brute_force_count(&p, &h), "{} n={n}", h.name());
            }
        }
    }
}

#[test]
fn full_and_leaf_presentations_have_equal_hom_counts() {
    for h in small_catalog(12) {
        for n in 1..=2 {
            let full = enumerate_homs(&presentation_full(n).unwrap(), &h).len();
            let leaf = enumerate_homs(&presentation_leaf(n).unwrap(), &h).len();
            assert_eq!(full, leaf, "{} n={n}", h.name());
        }
    }
}

#[test]
fn hom_counts_do_not_depend_on_generator_order() {
    let p = presentation_leaf(2).unwrap();
    let orders: [Vec<usize>; 3] = [vec![3, 2, 1, 0], vec![1, 3, 0, 2], vec![2, 0, 3, 1]];
    for h in small_catalog(10) {
        let base = enumerate_homs(&p, &h).len();
        for order in &orders {
            let q = p.with_generator_order(order).unwrap();
            assert_eq!(enumerate_homs(&q, &h).len(), base, "{} {order:?}", h.name());
        }
    }
}

#[test]
fn full_homs_send_generators_to_their_expansions() {
    let n = 2;
    let p = presentation_full(n).unwrap();
    for h in small_catalog(8) {
        for f in enumerate_homs(&p, &h) {
            for v in VertexAddress::all_up_to(n) {
                let name = v.generator_name().unwrap();
                let expanded = eval(&h, &p, f.images(), &expand_to_level(&v, n).unwrap());
                assert_eq!(f.image_of(&name).unwrap(), expanded, "{} {v}", h.name());
            }
        }
    }
}

#[test]
fn relators_never_mix_root_subtrees() {
    for n in 1..=4 {
        for r in presentation_full(n).unwrap().relators() {
            let sides: std::collections::BTreeSet<u8> = r
                .syllables()
                .iter()
                .map(|s| VertexAddress::from_generator_name(&s.generator).unwrap().root_subtree().unwrap())
                .collect();
            assert_eq!(sides.len(), 1, "{r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_words_are_alternating(seed in any::<u64>(), n in 1usize..=3, syllables in 1usize..=8) {
        let words = sample_alternating_words(n, 20, syllables, seed);
        prop_assert_eq!(words.len(), 20);
        for w in &words {
            prop_assert!(!w.is_empty());
            prop_assert!(is_alternating(w, n));
        }
        prop_assert_eq!(words, sample_alternating_words(n, 20, syllables, seed));
    }
}
