mod common;

use common::*;
use dsex::pattern::{contains, decompose_awa, expand_runs, is_free, run_length_encode};
use dsex::Pattern;
use proptest::prelude::*;

fn pat(w: &[u8]) -> Pattern {
    Pattern::new(&seq(w)).unwrap()
}

fn small_patterns() -> Vec<Word> {
    (1..=4).flat_map(|len| normal_words(len, 3)).collect()
}

#[test]
fn paper_style_examples() {
    let host = seq(&parse("144255134351"));
    assert!(pat(&parse("121331")).contains_in(&host).is_some());
    assert!(pat(&parse("513435")).contains_in(&host).is_some());
    assert!(pat(&parse("121331")).contains_in(&seq(&parse("1212"))).is_none());
}

#[test]
fn occurrences_are_leftmost_and_valid() {
    let host = seq(&parse("3113223"));
    let v = pat(&parse("abba"));
    let occ = v.contains_in(&host).unwrap();
    assert!(occ.validates(host.letters(), &v));
    // 3 1 1 3 at positions 0 1 2 3 is the first occurrence by position vector
    assert_eq!(occ.positions, [0, 1, 2, 3]);
}

#[test]
fn returned_occurrences_validate_exhaustively() {
    let pats: Vec<Pattern> = small_patterns().iter().map(|v| pat(v)).collect();
    for len in 0..=6 {
        for u in normal_words(len, 3) {
            let host = seq(&u);
            for v in &pats {
                if let Some(occ) = v.contains_in(&host) {
                    assert!(occ.validates(host.letters(), v), "{u:?} {v}");
                    assert!(occ.positions.windows(2).all(|p| p[0] < p[1]));
                }
            }
        }
    }
}

#[test]
fn transitivity_on_small_triples() {
    let us: Vec<Word> = (1..=6).flat_map(|l| normal_words(l, 3)).collect();
    let vs: Vec<Word> = (1..=4).flat_map(|l| normal_words(l, 3)).collect();
    let ws: Vec<Word> = (1..=3).flat_map(|l| normal_words(l, 3)).collect();
    for v in &vs {
        let vp = pat(v);
        let below: Vec<Pattern> = ws.iter().filter(|w| naive_contains(v, w)).map(|w| pat(w)).collect();
        for u in &us {
            let host = seq(u);
            if vp.contains_in(&host).is_some() {
                for w in &below {
                    assert!(w.contains_in(&host).is_some(), "{u:?} > {v:?} > {w}");
                }
            }
        }
    }
}

#[test]
fn incremental_check_agrees_with_full_matcher() {
    let pats: Vec<Pattern> = small_patterns().iter().map(|v| pat(v)).collect();
    for len in 0..=7 {
        for u in normal_words(len, 3) {
            let host = seq(&u);
            for v in &pats {
                if !is_free(host.letters(), v) {
                    continue;
                }
                let m = distinct(&u) as u8;
                for c in 1..=(m + 1).min(4) {
                    let next = host.appended(dsex::Letter::new(c as u64).unwrap());
                    assert_eq!(
                        v.creates_copy_at_end(host.letters(), next.letters()[len]),
                        contains(next.letters(), v).is_some(),
                        "u={u:?} c={c} v={v}"
                    );
                }
            }
        }
    }
}

#[test]
fn run_length_round_trip_and_chain_implications() {
    for len in 1..=6 {
        for v in normal_words(len, 4) {
            let s = seq(&v);
            let rl = run_length_encode(&s);
            assert_eq!(expand_runs(&rl), s);
            let p = pat(&v);
            if p.is_chain() {
                assert!(p.is_blowup_of_chain());
                assert!(p.is_two_sparse());
            }
            assert_eq!(p.is_blowup_of_chain(), is_blowup_of_chain(&v), "{v:?}");
            assert_eq!(p.is_two_sparse(), naive_sparse(&v, 2, 1));
            let awa = decompose_awa(&s);
            assert_eq!(awa.is_some(), len >= 2 && v[0] == v[len - 1]);
            if let Some(shape) = awa {
                assert_eq!(shape.is_chain_shape(), is_awa_chain(&v), "{v:?}");
            }
        }
    }
}

fn word_strategy(max_len: usize, letters: u8) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=letters, 0..=max_len)
}

fn perm_strategy(n: u8) -> impl Strategy<Value = Vec<u8>> {
    Just((1..=n).collect::<Vec<u8>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn containment_matches_oracle(u in word_strategy(10, 4), v in word_strategy(4, 3)) {
        prop_assume!(!v.is_empty());
        prop_assert_eq!(contains(seq(&u).letters(), &pat(&v)).is_some(), naive_contains(&u, &v));
    }

    #[test]
    fn containment_is_isomorphism_invariant(
        u in word_strategy(12, 5),
        v in word_strategy(4, 5),
        pu in perm_strategy(5),
        pv in perm_strategy(5),
    ) {
        prop_assume!(!v.is_empty());
        let base = pat(&v).contains_in(&seq(&u)).is_some();
        let moved = pat(&relabel(&v, &pv)).contains_in(&seq(&relabel(&u, &pu))).is_some();
        prop_assert_eq!(base, moved);
    }
}
