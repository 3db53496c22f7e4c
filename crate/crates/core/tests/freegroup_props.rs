use std::collections::BTreeSet;

use mqknot::fox::{abelianize_knot, fox_derivative};
use mqknot::freegroup::{
    chain_check, commutator, derived_depth, kill_generators, lemma_check, lemma_witness, random_word, word_inverse,
    word_product, DerivedDepth, Letter, Word,
};
use mqknot::laurent::LaurentPoly;
use mqknot::Exec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..4, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..12).prop_map(Word::from_letters)
}

/// Cancels adjacent inverse pairs in whatever order the rng picks.
fn reduce_randomly(mut letters: Vec<Letter>, rng: &mut ChaCha8Rng) -> Vec<Letter> {
    loop {
        let spots: Vec<usize> = (0..letters.len().saturating_sub(1)).filter(|&i| letters[i + 1] == letters[i].inv()).collect();
        if spots.is_empty() {
            return letters;
        }
        let i = spots[rng.gen_range(0..spots.len())];
        letters.drain(i..i + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_is_associative(a in word(), b in word(), c in word()) {
        prop_assert_eq!(word_product(&word_product(&a, &b), &c), word_product(&a, &word_product(&b, &c)));
    }

    #[test]
    fn inverse_is_an_involution(w in word()) {
        prop_assert_eq!(word_inverse(&word_inverse(&w)), w.clone());
        prop_assert!(word_product(&w, &word_inverse(&w)).is_empty());
    }

    #[test]
    fn free_reduction_is_confluent(raw in prop::collection::vec(letter(), 0..24), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = reduce_randomly(raw.clone(), &mut rng);
        let b = reduce_randomly(raw.clone(), &mut rng);
        prop_assert_eq!(&a, &b);
        let reduced = Word::from_letters(raw);
        prop_assert_eq!(reduced.letters(), &a[..]);
    }

    #[test]
    fn fox_product_rule(u in word(), v in word(), x in 0usize..4) {
        let lhs = fox_derivative(&u.mul(&v), x);
        let rhs = &fox_derivative(&u, x) + &fox_derivative(&v, x).left_mul(&u);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn witness_identity(a in word(), b in word(), c in word(), d in word()) {
        let lw = lemma_witness(&a, &b, &c, &d);
        prop_assert_eq!(commutator(&c.mul(&a), &d.mul(&b)), lw.witness.mul(&commutator(&a, &b)));
        let killed: BTreeSet<usize> = c.generators().union(&d.generators()).copied().collect();
        prop_assert!(kill_generators(&lw.witness, &killed).is_empty());
        let bases = [c.clone(), d.clone()];
        prop_assert_eq!(lw.decomposition.evaluate(&bases).unwrap(), lw.witness);
    }

    #[test]
    fn commutators_go_one_level_deeper(u in word(), v in word()) {
        let du = derived_depth(&u, 4, 2).unwrap();
        let dv = derived_depth(&v, 4, 2).unwrap();
        let level = |d: DerivedDepth| match d {
            DerivedDepth::Exact(k) | DerivedDepth::AtLeast(k) => Some(k),
            DerivedDepth::Trivial => None,
        };
        let w = commutator(&u, &v);
        match (level(du), level(dv), derived_depth(&w, 4, 2).unwrap()) {
            (_, _, DerivedDepth::Trivial) => prop_assert!(w.is_empty()),
            (Some(a), Some(b), d) => {
                let want = (a.min(b) + 1).min(2);
                prop_assert!(level(d).unwrap() >= want, "{} from {} and {}", d, du, dv);
            }
            _ => {}
        }
    }
}

#[test]
fn depth_examples() {
    let d = |s: &str, rank| derived_depth(&s.parse().unwrap(), rank, 2).unwrap();
    assert_eq!(d("a", 1), DerivedDepth::Exact(0));
    assert_eq!(d("A B a b", 2), DerivedDepth::Exact(1));
    assert_eq!(d("[[a,b],[a,c]]", 3), DerivedDepth::AtLeast(2));
    assert_eq!(derived_depth(&Word::empty(), 2, 2).unwrap(), DerivedDepth::Trivial);
}

#[test]
fn abelianized_fox_derivatives_of_a_commutator() {
    let w: Word = "A B a b".parse().unwrap();
    let da = abelianize_knot(&fox_derivative(&w, 0));
    let db = abelianize_knot(&fox_derivative(&w, 1));
    assert_eq!(da, LaurentPoly::from_ints(-2, &[1, -1]));
    assert_eq!(db, LaurentPoly::from_ints(-2, &[-1, 1]));
}

#[test]
fn nonempty_random_words_are_never_trivial() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..1000 {
        let rank = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=20);
        let w = random_word(&mut rng, rank, len);
        assert_ne!(derived_depth(&w, rank, 2).unwrap(), DerivedDepth::Trivial, "{w}");
    }
}

#[test]
fn lemma_and_chain_checks_pass() {
    let l = lemma_check(3, 2000, Exec::default());
    assert!(l.all_passed(), "{l}");
    let c = chain_check(3, 500, 3, Exec::default());
    assert_eq!(c.passed, 500, "{c}");
}

#[test]
fn checks_agree_across_execution_modes() {
    assert_eq!(lemma_check(11, 300, Exec::Sequential), lemma_check(11, 300, Exec::Parallel));
    assert_eq!(chain_check(11, 300, 4, Exec::Sequential), chain_check(11, 300, 4, Exec::Parallel));
}
