use houghton::decompose::{element_to_word_transpositions, transposition_conjugator};
use houghton::{element_to_word, transposition_word, EventualTranslation, FinitePermutation, Letter, Point, Word};
use proptest::prelude::*;

fn points(n: usize, radius: i64) -> Vec<Point> {
    (1..=n)
        .flat_map(|r| (1..=radius).map(move |p| Point::new(r, p)))
        .collect()
}

#[test]
fn transposition_words_evaluate_to_transpositions() {
    for n in 2..=5 {
        let pts = points(n, 6);
        for &p in &pts {
            for &q in &pts {
                if p == q {
                    continue;
                }
                let w = transposition_word(p, q, n).unwrap();
                let t = FinitePermutation::transposition(n, p, q).unwrap();
                assert_eq!(
                    w.evaluate(n).unwrap(),
                    EventualTranslation::from_fsym(&t),
                    "n={n} ({p} {q}) word {w}"
                );
            }
        }
    }
}

#[test]
fn conjugators_for_listed_pairs() {
    let h = transposition_conjugator(Point::new(2, 2), Point::new(2, 1), 3).unwrap();
    assert_eq!(h.to_string(), "g2^2");
    let h = transposition_conjugator(Point::new(2, 1), Point::new(3, 1), 3).unwrap();
    assert_eq!(h.to_string(), "g2 g3");
}

#[test]
fn transposition_of_equal_points_is_degenerate() {
    let p = Point::new(1, 1);
    assert!(transposition_word(p, p, 3).is_err());
}

fn letter_strategy(n: usize) -> impl Strategy<Value = Letter> {
    (2..=n, any::<bool>(), any::<bool>()).prop_map(move |(i, inv, a)| {
        if n == 2 && a {
            Letter::ALPHA
        } else if inv {
            Letter::g_inv(i)
        } else {
            Letter::g(i)
        }
    })
}

fn word_strategy() -> impl Strategy<Value = (usize, Word)> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(letter_strategy(n), 0..40)
            .prop_map(move |ls| (n, Word::from_letters(ls)))
    })
}

proptest! {
    #[test]
    fn shunting_round_trip((n, w) in word_strategy()) {
        let g = w.evaluate(n).unwrap();
        let v = element_to_word(&g);
        prop_assert_eq!(v.evaluate(n).unwrap(), g);
    }

    #[test]
    fn transposition_decomposition_round_trip((n, w) in word_strategy()) {
        let g = w.evaluate(n).unwrap();
        let v = element_to_word_transpositions(&g).unwrap();
        prop_assert_eq!(v.evaluate(n).unwrap(), g);
    }
}
