//! Exact shortest common superstring for a handful of segments.
//!
//! Segments become nodes of an overlap graph weighted by the longest
//! suffix/prefix overlap. The shortest superstring is the Hamiltonian path of
//! maximum total overlap, found by Held-Karp dynamic programming over subsets
//! in O(2^n n^2). Among optimal paths the lexicographically smallest
//! superstring is returned.

use std::cmp::Ordering;

use thiserror::Error;

use crate::seqcore::Sequence;

/// Largest instance the exact solver accepts.
pub const MAX_ORACLE_SEGMENTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} segments exceed the exact solver limit of {MAX_ORACLE_SEGMENTS}")]
    TooManySegments(usize),
    #[error("no segments")]
    NoSegments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapEdge {
    pub from: usize,
    pub to: usize,
    pub overlap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    pub nodes: Vec<Sequence>,
    pub edges: Vec<OverlapEdge>,
}

impl OverlapGraph {
    pub fn overlap(&self, from: usize, to: usize) -> usize {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map_or(0, |e| e.overlap)
    }
}

/// Longest `w >= 1` with `suffix_w(a) == prefix_w(b)`, at most the shorter
/// length; 0 if none.
pub fn max_overlap(a: &[u8], b: &[u8]) -> usize {
    let cap = a.len().min(b.len());
    (1..=cap)
        .rev()
        .find(|&w| a[a.len() - w..] == b[..w])
        .unwrap_or(0)
}

pub fn build_overlap_graph(segments: &[Sequence]) -> Result<OverlapGraph, OracleError> {
    if segments.len() > MAX_ORACLE_SEGMENTS {
        return Err(OracleError::TooManySegments(segments.len()));
    }
    let mut edges = Vec::new();
    for (i, a) in segments.iter().enumerate() {
        for (j, b) in segments.iter().enumerate() {
            if i == j {
                continue;
            }
            let w = max_overlap(a.as_bytes(), b.as_bytes());
            if w > 0 {
                edges.push(OverlapEdge {
                    from: i,
                    to: j,
                    overlap: w,
                });
            }
        }
    }
    Ok(OverlapGraph {
        nodes: segments.to_vec(),
        edges,
    })
}

/// Removes duplicates and segments that occur inside another segment.
/// Survivors keep sorted order.
pub fn drop_contained(segments: &[Sequence]) -> Vec<Sequence> {
    let mut uniq: Vec<Sequence> = segments.to_vec();
    uniq.sort();
    uniq.dedup();
    let contained = |s: &Sequence| {
        uniq.iter()
            .any(|t| t.len() > s.len() && t.as_bytes().windows(s.len()).any(|w| w == s.as_bytes()))
    };
    uniq.iter().filter(|s| !contained(s)).cloned().collect()
}

struct HeldKarp<'a> {
    segs: &'a [Sequence],
    n: usize,
    overlap: Vec<Vec<usize>>,
    /// best[mask][last]: largest overlap collected by visiting every node
    /// outside `mask`, continuing from `last`.
    best: Vec<Vec<usize>>,
    next: Vec<Vec<Option<usize>>>,
}

impl<'a> HeldKarp<'a> {
    fn solve(segs: &'a [Sequence]) -> Self {
        let n = segs.len();
        let overlap: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0
                        } else {
                            max_overlap(segs[i].as_bytes(), segs[j].as_bytes())
                        }
                    })
                    .collect()
            })
            .collect();
        let full = (1usize << n) - 1;
        let mut hk = HeldKarp {
            segs,
            n,
            overlap,
            best: vec![vec![0; n]; full + 1],
            next: vec![vec![None; n]; full + 1],
        };
        // Larger masks first: every successor state has one more bit.
        for mask in (1..full).rev() {
            for last in (0..n).filter(|&l| mask & (1 << l) != 0) {
                let mut chosen: Option<(usize, usize)> = None;
                for j in (0..n).filter(|&j| mask & (1 << j) == 0) {
                    let value = hk.overlap[last][j] + hk.best[mask | (1 << j)][j];
                    let better = match chosen {
                        None => true,
                        Some((v, c)) => {
                            value > v
                                || (value == v && hk.cmp_step(mask, last, j, c) == Ordering::Less)
                        }
                    };
                    if better {
                        chosen = Some((value, j));
                    }
                }
                let (v, j) = chosen.expect("mask is not full");
                hk.best[mask][last] = v;
                hk.next[mask][last] = Some(j);
            }
        }
        hk
    }

    /// Bases appended after `segs[last]` when the path continues through `j`.
    fn step_tail(&self, mask: usize, last: usize, j: usize) -> impl Iterator<Item = u8> + '_ {
        let piece = &self.segs[j].as_bytes()[self.overlap[last][j]..];
        piece
            .iter()
            .copied()
            .chain(self.completion(mask | (1 << j), j))
    }

    fn cmp_step(&self, mask: usize, last: usize, a: usize, b: usize) -> Ordering {
        self.step_tail(mask, last, a)
            .cmp(self.step_tail(mask, last, b))
    }

    /// Bases appended after `segs[last]` along the stored optimal path.
    fn completion(&self, mask: usize, last: usize) -> Completion<'_, 'a> {
        Completion {
            hk: self,
            mask,
            last,
            piece: &[],
        }
    }

    fn superstring_from(&self, first: usize) -> impl Iterator<Item = u8> + '_ {
        self.segs[first]
            .as_bytes()
            .iter()
            .copied()
            .chain(self.completion(1 << first, first))
    }
}

struct Completion<'h, 'a> {
    hk: &'h HeldKarp<'a>,
    mask: usize,
    last: usize,
    piece: &'a [u8],
}

impl Iterator for Completion<'_, '_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        loop {
            if let Some((&b, rest)) = self.piece.split_first() {
                self.piece = rest;
                return Some(b);
            }
            if self.mask == (1 << self.hk.n) - 1 {
                return None;
            }
            let j = self.hk.next[self.mask][self.last]?;
            self.piece = &self.hk.segs[j].as_bytes()[self.hk.overlap[self.last][j]..];
            self.mask |= 1 << j;
            self.last = j;
        }
    }
}

/// Exact shortest common superstring, ties broken lexicographically.
pub fn superstring_oracle(segments: &[Sequence]) -> Result<Sequence, OracleError> {
    if segments.len() > MAX_ORACLE_SEGMENTS {
        return Err(OracleError::TooManySegments(segments.len()));
    }
    if segments.is_empty() {
        return Err(OracleError::NoSegments);
    }
    let segs = drop_contained(segments);
    let hk = HeldKarp::solve(&segs);
    let first = (0..hk.n)
        .min_by(|&a, &b| {
            hk.best[1 << b][b]
                .cmp(&hk.best[1 << a][a])
                .then_with(|| hk.superstring_from(a).cmp(hk.superstring_from(b)))
        })
        .expect("at least one segment");
    let bases: Vec<u8> = hk.superstring_from(first).collect();
    Ok(Sequence::from_bases_unchecked(bases))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(v: &[&str]) -> Vec<Sequence> {
        v.iter().map(|s| Sequence::normalize(s).unwrap()).collect()
    }

    #[test]
    fn overlap_graph_examples() {
        let g = build_overlap_graph(&seqs(&["AAGTC", "GTCAT"])).unwrap();
        assert_eq!(
            g.edges,
            vec![OverlapEdge {
                from: 0,
                to: 1,
                overlap: 3
            }]
        );
        assert!(build_overlap_graph(&seqs(&["AAAA"]))
            .unwrap()
            .edges
            .is_empty());
        let g = build_overlap_graph(&seqs(&["ACGT", "TTTT"])).unwrap();
        assert_eq!(g.overlap(0, 1), 1);
        assert_eq!(g.overlap(1, 0), 0);
        let many = seqs(&["A"; 13]);
        assert_eq!(
            build_overlap_graph(&many).unwrap_err(),
            OracleError::TooManySegments(13)
        );
    }

    #[test]
    fn oracle_examples() {
        let s = superstring_oracle(&seqs(&["AAGTC", "GTCAT", "CATTA", "TTACA"])).unwrap();
        assert_eq!(s.as_str(), "AAGTCATTACA");
        let s = superstring_oracle(&seqs(&["TTACA", "AAGTC", "CATTA", "GTCAT"])).unwrap();
        assert_eq!(s.as_str(), "AAGTCATTACA");
        assert_eq!(
            superstring_oracle(&seqs(&["ACGT"])).unwrap().as_str(),
            "ACGT"
        );
        assert_eq!(
            superstring_oracle(&seqs(&["AAA", "AAA"])).unwrap().as_str(),
            "AAA"
        );
        assert_eq!(
            superstring_oracle(&[]).unwrap_err(),
            OracleError::NoSegments
        );
    }

    #[test]
    fn contained_segments_are_dropped() {
        let kept = drop_contained(&seqs(&["ACGTAC", "GTA", "ACGTAC", "TTT"]));
        let kept: Vec<&str> = kept.iter().map(|s| s.as_str()).collect();
        assert_eq!(kept, ["ACGTAC", "TTT"]);
    }

    #[test]
    fn ties_break_lexicographically() {
        // No overlaps at all: every order has the same length.
        let s = superstring_oracle(&seqs(&["GG", "CC", "TT"])).unwrap();
        assert_eq!(s.as_str(), "CCGGTT");
        // ACG -> GTT overlaps by one; the reverse order does not.
        let s = superstring_oracle(&seqs(&["GTT", "ACG"])).unwrap();
        assert_eq!(s.as_str(), "ACGTT");
    }
}
