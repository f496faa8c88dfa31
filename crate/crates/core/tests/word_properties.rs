//! Property tests for the word layer and the word calculus.

use proptest::prelude::*;

use orbilink::{
    block_decomposition, is_admissible, trace, word_to_matrix, CyclicWord, LrWord, SurfaceSpec,
};

fn word_strategy(max_len: usize) -> impl Strategy<Value = CyclicWord> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 1..=max_len)
        .prop_map(|v| CyclicWord::parse(&v.into_iter().collect::<String>()).unwrap())
}

fn lr_strategy(max_len: usize) -> impl Strategy<Value = LrWord> {
    proptest::collection::vec(prop_oneof![Just('L'), Just('R')], 1..=max_len)
        .prop_map(|v| LrWord::parse(&v.into_iter().collect::<String>()).unwrap())
}

proptest! {
    #[test]
    fn canonicalize_idempotent(w in word_strategy(16)) {
        let c = w.canonicalize();
        prop_assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn canonicalize_rotation_invariant(w in word_strategy(16), shift in 0usize..16) {
        prop_assert_eq!(w.rotation(shift).canonicalize(), w.canonicalize());
    }

    #[test]
    fn canonicalize_preserves_counts(w in word_strategy(16)) {
        prop_assert_eq!(w.canonicalize().letter_counts(), w.letter_counts());
    }

    #[test]
    fn admissibility_rotation_invariant(w in word_strategy(14), shift in 0usize..14) {
        for surface in [SurfaceSpec::new(2, 3, 7).unwrap(), SurfaceSpec::new(3, 3, 4).unwrap()] {
            prop_assert_eq!(
                is_admissible(&w.rotation(shift), &surface).unwrap(),
                is_admissible(&w, &surface).unwrap()
            );
        }
    }

    #[test]
    fn blocks_cover_all_letters(w in word_strategy(14)) {
        for surface in [SurfaceSpec::new(2, 3, 7).unwrap(), SurfaceSpec::new(3, 3, 4).unwrap()] {
            if is_admissible(&w, &surface).unwrap() {
                let blocks = block_decomposition(&w, &surface).unwrap();
                let letters: usize = blocks
                    .iter()
                    .map(|b| {
                        let (i, j) = (b.i as usize, b.j as usize);
                        if surface.is_237() { 2 * i + 3 * j } else { i + j }
                    })
                    .sum();
                prop_assert_eq!(letters, w.len());
            }
        }
    }

    #[test]
    fn lr_det_one_and_trace_rotation_invariant(w in lr_strategy(12), shift in 0usize..12) {
        prop_assert_eq!(word_to_matrix(&w).det(), 1);
        prop_assert_eq!(trace(&w.rotation(shift)), trace(&w));
    }
}
