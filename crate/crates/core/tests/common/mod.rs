//! Test-only helpers and independent oracles.
#![allow(dead_code)]

use std::collections::HashSet;

use genestream::Sequence;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn seq(s: &str) -> Sequence {
    Sequence::normalize(s).unwrap()
}

pub fn random_seq(rng: &mut impl Rng, len: usize) -> Sequence {
    let bases: Vec<u8> = (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
    Sequence::from_bases(bases).unwrap()
}

pub fn has_repeated_window(s: &Sequence, w: usize) -> bool {
    if w == 0 || s.len() < w {
        return false;
    }
    let mut seen = HashSet::new();
    s.as_bytes().windows(w).any(|x| !seen.insert(x))
}

/// Smallest k in `min_k..=31` such that `s` has no repeated (k-1)-mer and its
/// first and last (k-1)-mers differ.
pub fn safe_k(s: &Sequence, min_k: usize) -> Option<usize> {
    (min_k..=31).find(|&k| {
        let w = k - 1;
        s.len() > w
            && !has_repeated_window(s, w)
            && s.as_bytes()[..w] != s.as_bytes()[s.len() - w..]
    })
}

/// `count` equal-length windows spread evenly over `s`, consecutive windows
/// overlapping by at least `min_overlap`.
pub fn tile(s: &Sequence, count: usize, min_overlap: usize) -> Vec<Sequence> {
    let n = s.len();
    if count <= 1 {
        return vec![s.clone()];
    }
    let len = ((n + (count - 1) * min_overlap).div_ceil(count) + 1).min(n);
    (0..count)
        .map(|i| {
            let start = i * (n - len) / (count - 1);
            s.subseq(start..start + len)
        })
        .collect()
}

pub fn shuffled<T: Clone>(v: &[T], rng: &mut impl Rng) -> Vec<T> {
    let mut v = v.to_vec();
    v.shuffle(rng);
    v
}

fn overlap(a: &[u8], b: &[u8]) -> usize {
    (1..a.len().min(b.len()))
        .rev()
        .find(|&w| a[a.len() - w..] == b[..w])
        .unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Shortest superstring length over every ordering of the segments, after
/// removing duplicates and contained segments. Exhaustive: O(n!).
pub fn brute_force_superstring_len(segments: &[Sequence]) -> usize {
    let strs: Vec<&[u8]> = segments.iter().map(|s| s.as_bytes()).collect();
    let mut uniq: Vec<&[u8]> = Vec::new();
    for s in &strs {
        if !uniq.contains(s) {
            uniq.push(s);
        }
    }
    let kept: Vec<&[u8]> = uniq
        .iter()
        .filter(|s| {
            !uniq
                .iter()
                .any(|t| t.len() > s.len() && t.windows(s.len()).any(|w| w == **s))
        })
        .copied()
        .collect();
    permutations(kept.len())
        .into_iter()
        .map(|p| {
            let mut len = kept[p[0]].len();
            for w in p.windows(2) {
                len += kept[w[1]].len() - overlap(kept[w[0]], kept[w[1]]);
            }
            len
        })
        .min()
        .unwrap_or(0)
}

/// Every string of `segments` occurs in `s`.
pub fn is_superstring(s: &Sequence, segments: &[Sequence]) -> bool {
    segments.iter().all(|x| s.as_str().contains(x.as_str()))
}

/// Least-squares fit `y = a + b x`; returns R².
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (a + b * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Contigs computed directly from the k-mer strings of `reads`: chains of
/// distinct edges whose interior nodes have one distinct predecessor and one
/// distinct successor, started from every other node in lexicographic order,
/// followed by leftover cycles opened at their smallest node.
pub fn contigs_oracle(reads: &[Sequence], k: usize) -> Vec<String> {
    use std::collections::{BTreeMap, BTreeSet};

    let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut indeg: BTreeMap<&str, usize> = BTreeMap::new();
    for r in reads {
        let s = r.as_str();
        for i in 0..(s.len() + 1).saturating_sub(k) {
            let (u, v) = (&s[i..i + k - 1], &s[i + 1..i + k]);
            if succ.entry(u).or_default().insert(v) {
                *indeg.entry(v).or_default() += 1;
            }
            succ.entry(v).or_default();
        }
    }
    let plain = |n: &str| indeg.get(n).copied().unwrap_or(0) == 1 && succ[n].len() == 1;
    let next = |n: &str| *succ[n].iter().next().unwrap();

    let mut out = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (&u, vs) in &succ {
        if plain(u) {
            continue;
        }
        for &v in vs {
            let mut s = u.to_string();
            let mut cur = v;
            s.push_str(&cur[cur.len() - 1..]);
            while plain(cur) {
                seen.insert(cur);
                cur = next(cur);
                s.push_str(&cur[cur.len() - 1..]);
            }
            out.push(s);
        }
    }
    for &u in succ.keys() {
        if seen.contains(u) || !plain(u) {
            continue;
        }
        let mut s = u.to_string();
        let mut cur = u;
        loop {
            seen.insert(cur);
            cur = next(cur);
            s.push_str(&cur[cur.len() - 1..]);
            if cur == u {
                break;
            }
        }
        out.push(s);
    }
    out
}
