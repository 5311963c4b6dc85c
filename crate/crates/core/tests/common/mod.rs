//! Brute-force oracles over plain `u8` words. Nothing here calls into the
//! library, so agreement with it is evidence rather than tautology.

#![allow(dead_code)]

use dsex::Sequence;

pub type Word = Vec<u8>;

pub fn seq(w: &[u8]) -> Sequence {
    Sequence::from_values(w.iter().map(|&c| c as u64)).unwrap()
}

pub fn word(s: &Sequence) -> Word {
    s.values()
}

/// Letters of `text` where `a` (or `1`) is 1.
pub fn parse(text: &str) -> Word {
    text.bytes()
        .map(|b| match b {
            b'a'..=b'z' => b - b'a' + 1,
            b'1'..=b'9' => b - b'0',
            _ => panic!("bad letter {b}"),
        })
        .collect()
}

/// Every word of length `len` over `1..=n`, in lexicographic order.
pub fn all_words(len: usize, n: u8) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=n).map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn is_normal(w: &[u8]) -> bool {
    let mut next = 1;
    for &c in w {
        if c == next {
            next += 1;
        } else if c > next {
            return false;
        }
    }
    true
}

/// Normal words of length `len` using at most `n` letters.
pub fn normal_words(len: usize, n: u8) -> Vec<Word> {
    all_words(len, n).into_iter().filter(|w| is_normal(w)).collect()
}

pub fn distinct(w: &[u8]) -> usize {
    let mut seen: Vec<u8> = w.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// `(k,r)`-sparse: no two equal letters at a distance `m r` with `1 <= m < k`.
pub fn naive_sparse(w: &[u8], k: usize, r: usize) -> bool {
    for p in 0..w.len() {
        for m in 1..k {
            let q = p + m * r;
            if q < w.len() && w[p] == w[q] {
                return false;
            }
        }
    }
    true
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every injective map from the letters of `v` into the letters of `u`.
fn injections(from: &[u8], to: &[u8]) -> Vec<Vec<(u8, u8)>> {
    let mut out = vec![Vec::new()];
    for &a in from {
        out = out
            .into_iter()
            .flat_map(|m: Vec<(u8, u8)>| {
                to.iter()
                    .filter(|&&b| !m.iter().any(|&(_, y)| y == b))
                    .map(|&b| {
                        let mut m = m.clone();
                        m.push((a, b));
                        m
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// Containment by exhausting index subsets and injective letter maps.
pub fn naive_contains(u: &[u8], v: &[u8]) -> bool {
    if v.len() > u.len() {
        return false;
    }
    let mut vl: Vec<u8> = v.to_vec();
    vl.sort_unstable();
    vl.dedup();
    let mut ul: Vec<u8> = u.to_vec();
    ul.sort_unstable();
    ul.dedup();
    let maps = injections(&vl, &ul);
    combinations(u.len(), v.len()).iter().any(|idx| {
        maps.iter().any(|m| {
            idx.iter().zip(v).all(|(&i, &a)| {
                let image = m.iter().find(|&&(x, _)| x == a).unwrap().1;
                u[i] == image
            })
        })
    })
}

/// Run-length encoding.
pub fn runs(w: &[u8]) -> Vec<(u8, usize)> {
    let mut out: Vec<(u8, usize)> = Vec::new();
    for &c in w {
        match out.last_mut() {
            Some((d, m)) if *d == c => *m += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

pub fn is_blowup_of_chain(w: &[u8]) -> bool {
    let rl = runs(w);
    distinct(&rl.iter().map(|&(c, _)| c).collect::<Vec<_>>()) == rl.len()
}

/// `v = a w a` with `w` a chain avoiding `a`.
pub fn is_awa_chain(v: &[u8]) -> bool {
    v.len() >= 2 && v[0] == v[v.len() - 1] && {
        let inner = &v[1..v.len() - 1];
        distinct(inner) == inner.len() && !inner.contains(&v[0])
    }
}

/// `Ex_r(v,k,n)` by scanning every word over `[n]` level by level, with no
/// normal-form restriction. A level with no valid word ends the scan, since
/// prefixes of valid words are valid.
pub fn brute_ex(v: &[u8], k: usize, r: usize, n: u8) -> usize {
    let mut best = 0;
    for len in 1.. {
        let ok = all_words(len, n)
            .iter()
            .any(|w| naive_sparse(w, k, r) && !naive_contains(w, v));
        if !ok {
            break;
        }
        best = len;
    }
    best
}

/// Relabels letters through `perm` (`perm[c-1]` is the image of `c`).
pub fn relabel(w: &[u8], perm: &[u8]) -> Word {
    w.iter().map(|&c| perm[c as usize - 1]).collect()
}
