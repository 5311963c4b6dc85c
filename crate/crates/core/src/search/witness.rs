//! Explicit extremal constructions.

use crate::error::{Error, Result};
use crate::seq::{Letter, Sequence, L_MAX};

fn check_alphabet(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::TooSmall { name: "n", value: n, min });
    }
    if n > L_MAX {
        return Err(Error::TooLarge { name: "n", value: n, max: L_MAX });
    }
    Ok(())
}

fn letters(range: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = Letter> + Clone {
    range.map(|i| Letter::new_unchecked(i as u8))
}

/// `1^r 2^r ... n^r`, of length `rn`.
pub fn build_uniform_witness(n: usize, r: usize) -> Result<Sequence> {
    check_alphabet(n, 1)?;
    if r == 0 {
        return Err(Error::TooSmall { name: "r", value: r, min: 1 });
    }
    Ok(Sequence::new(
        letters(1..=n).flat_map(|c| std::iter::repeat_n(c, r)).collect(),
    ))
}

/// `(12...n)^(s-1)`, of length `(s-1)n`; `a^s`-free.
pub fn build_power_witness(n: usize, s: usize) -> Result<Sequence> {
    check_alphabet(n, 1)?;
    if s < 2 {
        return Err(Error::TooSmall { name: "s", value: s, min: 2 });
    }
    Ok(Sequence::new(
        std::iter::repeat_n(letters(1..=n), s - 1).flatten().collect(),
    ))
}

/// `12...n 12...n n`, of length `2n+1`: abba-free, and (k,2)-sparse when
/// `n >= 2k`.
pub fn build_abba_r2_counterexample(n: usize) -> Result<Sequence> {
    check_alphabet(n, 2)?;
    let mut out: Vec<Letter> = letters(1..=n).chain(letters(1..=n)).collect();
    out.push(Letter::new_unchecked(n as u8));
    Ok(Sequence::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;
    use crate::seq::SparsityParams;

    fn sp(k: usize, r: usize) -> SparsityParams {
        SparsityParams::new(k, r).unwrap()
    }

    #[test]
    fn uniform() {
        assert_eq!(build_uniform_witness(3, 2).unwrap().to_string(), "112233");
        assert_eq!(build_uniform_witness(5, 1).unwrap().to_string(), "12345");
        assert!(build_uniform_witness(0, 1).is_err());
        assert!(build_uniform_witness(65, 1).is_err());
        assert!(build_uniform_witness(3, 0).is_err());
    }

    #[test]
    fn uniform_is_sparse_and_avoids_non_blowups() {
        for n in 1..=6 {
            for r in 1..=4 {
                let u = build_uniform_witness(n, r).unwrap();
                assert_eq!(u.len(), r * n);
                for k in 1..=n {
                    assert!(u.is_sparse(sp(k, r)), "n={n} r={r} k={k}");
                }
                for v in ["abab", "abba", "aba"] {
                    let v: Pattern = v.parse().unwrap();
                    assert!(v.contains_in(&u).is_none());
                }
            }
        }
    }

    #[test]
    fn power() {
        assert_eq!(build_power_witness(3, 3).unwrap().to_string(), "123123");
        assert_eq!(build_power_witness(4, 2).unwrap().to_string(), "1234");
        assert!(build_power_witness(3, 1).is_err());
        let u = build_power_witness(4, 3).unwrap();
        assert!(Pattern::power(3).unwrap().contains_in(&u).is_none());
        assert!(u.is_sparse(sp(2, 2)));
    }

    #[test]
    fn abba_r2() {
        let w = build_abba_r2_counterexample(4).unwrap();
        assert_eq!(w.to_string(), "123412344");
        assert_eq!(w.len(), 9);
        assert!("abba".parse::<Pattern>().unwrap().contains_in(&w).is_none());
        for k in 2..=4 {
            assert_eq!(w.is_sparse(sp(k, 2)), 4 >= 2 * k, "k={k}");
        }
        assert!(build_abba_r2_counterexample(1).is_err());
    }
}
