//! Paramodular membership, involutions and the reduction to generators,
//! checked on random words in `L`, `U` and `U^opp`.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thetaobs::paramod::{random_gamma_word, reduce_to_identity, word_product, ParaMatrix, ParaShape};

const WORD_LEN: usize = 12;

fn word_matrix(shape: ParaShape, bits: u32, seed: u64) -> ParaMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    word_product(shape, &random_gamma_word(shape, bits, WORD_LEN, &mut rng)).unwrap()
}

#[test]
fn ten_thousand_words_are_members() {
    for (n, k) in [(3, 2), (3, 4)] {
        let shape = ParaShape::new(n, k).unwrap();
        for bits in [3, 4] {
            for seed in 0..10_000 {
                let m = word_matrix(shape, bits, seed);
                assert!(m.is_member(bits).unwrap(), "shape ({n},{k}) mod 2^{bits}, seed {seed}");
                assert!(m.is_in_gamma(bits).unwrap(), "shape ({n},{k}) mod 2^{bits}, seed {seed}");
            }
        }
    }
}

#[test]
fn identity_reduces_to_the_empty_word() {
    let shape = ParaShape::new(3, 2).unwrap();
    assert!(reduce_to_identity(&ParaMatrix::identity(shape), 4).unwrap().is_empty());
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((3, 2)), Just((3, 4)), Just((1, 1)), Just((2, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_an_involution_on_members((n, k) in shapes(), bits in 2u32..=6, seed in any::<u64>()) {
        let shape = ParaShape::new(n, k).unwrap();
        let m = word_matrix(shape, bits, seed);
        let s = m.star().unwrap();
        prop_assert!(s.is_member(bits).unwrap());
        prop_assert!(s.star().unwrap().eq_mod(&m, bits).unwrap());
    }

    #[test]
    fn h_conjugation_is_an_involution((n, k) in shapes(), bits in 2u32..=6, seed in any::<u64>()) {
        let shape = ParaShape::new(n, k).unwrap();
        let m = word_matrix(shape, bits, seed);
        prop_assert!(m.h_conj().is_member(bits).unwrap());
        prop_assert!(m.h_conj().h_conj().eq_mod(&m, bits).unwrap());
    }

    #[test]
    fn reduction_reproduces_the_word((n, k) in shapes(), bits in 2u32..=6, seed in any::<u64>()) {
        let shape = ParaShape::new(n, k).unwrap();
        let m = word_matrix(shape, bits, seed);
        let r = reduce_to_identity(&m, bits).unwrap();
        prop_assert!(word_product(shape, &r.word).unwrap().eq_mod(&m, bits).unwrap());
        let (a, b, c) = r.letter_counts();
        prop_assert_eq!(a + b + c, r.len());
    }

    #[test]
    fn products_and_inverses_stay_members((n, k) in shapes(), bits in 2u32..=6, s1 in any::<u64>(), s2 in any::<u64>()) {
        let shape = ParaShape::new(n, k).unwrap();
        let (a, b) = (word_matrix(shape, bits, s1), word_matrix(shape, bits, s2));
        prop_assert!(a.mul(&b).is_member(bits).unwrap());
        let inv = a.inverse().unwrap();
        prop_assert!(inv.is_member(bits).unwrap());
        prop_assert!(a.mul(&inv).is_identity_mod(bits).unwrap());
    }
}
