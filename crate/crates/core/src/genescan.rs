//! Greedy gene extraction.
//!
//! Starting from a cursor at 0, take the leftmost start codon at or after the
//! cursor and pair it with the nearest stop codon in the same reading frame.
//! The gene runs through that stop and the cursor moves past it, so emitted
//! genes never overlap. A start with no in-frame stop downstream is skipped.

use serde::{Deserialize, Serialize};

use crate::patmatch::find_all_codons;
use crate::seqcore::{CodonTable, Sequence};

/// A gene at `[start, end)` of the scanned text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gene {
    pub start: usize,
    pub end: usize,
    #[serde(with = "seq_string")]
    pub bases: Sequence,
}

impl Gene {
    pub fn new(text: &Sequence, start: usize, end: usize) -> Self {
        Gene {
            start,
            end,
            bases: text.subseq(start..end),
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

pub(crate) mod seq_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::seqcore::Sequence;

    pub fn serialize<S: Serializer>(seq: &Sequence, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(seq.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Sequence, D::Error> {
        let raw = String::deserialize(d)?;
        Sequence::normalize(&raw).map_err(serde::de::Error::custom)
    }
}

/// Genes sorted by start, pairwise disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneSet {
    pub genes: Vec<Gene>,
}

impl GeneSet {
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gene> {
        self.genes.iter()
    }
}

impl From<Vec<Gene>> for GeneSet {
    fn from(genes: Vec<Gene>) -> Self {
        GeneSet { genes }
    }
}

pub fn scan_genes(text: &Sequence, table: &CodonTable) -> GeneSet {
    let hits = find_all_codons(text.as_bytes(), table);
    // Stop positions bucketed by frame, each bucket ascending.
    let mut by_frame: [Vec<usize>; 3] = Default::default();
    for &(i, _) in &hits.stops {
        by_frame[i % 3].push(i);
    }

    let mut genes = Vec::new();
    let mut cursor = 0usize;
    for &s in &hits.starts {
        if s < cursor {
            continue;
        }
        let frame = &by_frame[s % 3];
        let idx = frame.partition_point(|&t| t < s + 3);
        if let Some(&t) = frame.get(idx) {
            genes.push(Gene::new(text, s, t + 3));
            cursor = t + 3;
        }
    }
    GeneSet { genes }
}

/// Reference scan: walks each candidate's codon grid directly, no index.
/// Quadratic; intended for test-scale inputs.
pub fn scan_genes_oracle(text: &Sequence, table: &CodonTable) -> GeneSet {
    let b = text.as_bytes();
    let n = b.len();
    let mut genes = Vec::new();
    let mut cursor = 0usize;
    let mut s = 0usize;
    while s + 3 <= n {
        if s >= cursor && table.is_start(&b[s..s + 3]) {
            let mut t = s + 3;
            while t + 3 <= n {
                if table.is_stop(&b[t..t + 3]) {
                    genes.push(Gene::new(text, s, t + 3));
                    cursor = t + 3;
                    break;
                }
                t += 3;
            }
        }
        s += 1;
    }
    GeneSet { genes }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneDiff {
    pub added: Vec<Gene>,
    pub removed: Vec<Gene>,
}

impl GeneDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}

/// Multiset difference of two gene lists by `(start, end, bases)`.
pub fn diff(old: &GeneSet, new: &GeneSet) -> GeneDiff {
    let (removed, added) = multiset_diff(&old.genes, &new.genes);
    GeneDiff { added, removed }
}

/// Returns `(only_in_old, only_in_new)`, each in input order.
pub(crate) fn multiset_diff<T: Ord + Clone>(old: &[T], new: &[T]) -> (Vec<T>, Vec<T>) {
    multiset_diff_by(old, new, |t| t)
}

/// Multiset difference where identity is `key(item)`.
pub(crate) fn multiset_diff_by<T: Clone, K: Ord>(
    old: &[T],
    new: &[T],
    key: impl Fn(&T) -> &K,
) -> (Vec<T>, Vec<T>) {
    use std::collections::BTreeMap;
    let mut surplus: BTreeMap<&K, isize> = BTreeMap::new();
    for g in old {
        *surplus.entry(key(g)).or_default() += 1;
    }
    for g in new {
        *surplus.entry(key(g)).or_default() -= 1;
    }
    let mut old_left = surplus.clone();
    let only_old = old
        .iter()
        .filter(|g| {
            let c = old_left.get_mut(key(g)).expect("counted");
            let keep = *c > 0;
            if keep {
                *c -= 1;
            }
            keep
        })
        .cloned()
        .collect();
    let only_new = new
        .iter()
        .filter(|g| {
            let c = surplus.get_mut(key(g)).expect("counted");
            let keep = *c < 0;
            if keep {
                *c += 1;
            }
            keep
        })
        .cloned()
        .collect();
    (only_old, only_new)
}

/// Checks the structural invariants of a gene set against its source text.
/// Returns a description of the first violation.
pub fn check_gene_set(text: &Sequence, table: &CodonTable, set: &GeneSet) -> Result<(), String> {
    let b = text.as_bytes();
    let mut prev_end = 0usize;
    let mut prev_start: Option<usize> = None;
    for g in &set.genes {
        if g.end > b.len() || g.start >= g.end {
            return Err(format!("gene {}..{} out of bounds", g.start, g.end));
        }
        if g.bases.as_bytes() != &b[g.start..g.end] {
            return Err(format!(
                "gene {}..{} bases differ from text",
                g.start, g.end
            ));
        }
        let len = g.len();
        if len < 6 || len % 3 != 0 {
            return Err(format!("gene {}..{} has length {len}", g.start, g.end));
        }
        if !table.is_start(&b[g.start..g.start + 3]) {
            return Err(format!(
                "gene {}..{} does not begin with a start codon",
                g.start, g.end
            ));
        }
        if !table.is_stop(&b[g.end - 3..g.end]) {
            return Err(format!(
                "gene {}..{} does not end with a stop codon",
                g.start, g.end
            ));
        }
        if (g.start + 3..g.end - 3)
            .step_by(3)
            .any(|t| table.is_stop(&b[t..t + 3]))
        {
            return Err(format!(
                "gene {}..{} has a premature in-frame stop",
                g.start, g.end
            ));
        }
        if let Some(ps) = prev_start {
            if g.start <= ps {
                return Err(format!("gene starts not increasing at {}", g.start));
            }
            if g.start < prev_end {
                return Err(format!(
                    "gene {}..{} overlaps the previous gene",
                    g.start, g.end
                ));
            }
        }
        prev_start = Some(g.start);
        prev_end = g.end;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> Sequence {
        Sequence::normalize(s).unwrap()
    }

    fn spans(set: &GeneSet) -> Vec<(usize, usize)> {
        set.genes.iter().map(|g| (g.start, g.end)).collect()
    }

    #[test]
    fn scan_examples() {
        let t = CodonTable::standard();
        assert_eq!(spans(&scan_genes(&seq("ATGTAA"), &t)), [(0, 6)]);
        let g = scan_genes(&seq("CCATGAAATAGCC"), &t);
        assert_eq!(spans(&g), [(2, 11)]);
        assert_eq!(g.genes[0].bases.as_str(), "ATGAAATAG");
        assert!(scan_genes(&seq("CCCCCC"), &t).is_empty());
    }

    #[test]
    fn oracle_examples() {
        let t = CodonTable::standard();
        assert_eq!(spans(&scan_genes_oracle(&seq("ATGTAA"), &t)), [(0, 6)]);
        assert_eq!(spans(&scan_genes_oracle(&seq("ATGATGTAA"), &t)), [(0, 9)]);
        assert!(scan_genes_oracle(&seq("ATGCTAA"), &t).is_empty());
        assert_eq!(spans(&scan_genes(&seq("ATGATGTAA"), &t)), [(0, 9)]);
        assert!(scan_genes(&seq("ATGCTAA"), &t).is_empty());
    }

    #[test]
    fn start_without_stop_is_skipped() {
        // ATG at 0 has no in-frame stop; ATG at 4 pairs with TAG at 7.
        let t = CodonTable::standard();
        let s = seq("ATGCATGTAGC");
        assert_eq!(spans(&scan_genes(&s, &t)), [(4, 10)]);
        assert_eq!(scan_genes(&s, &t), scan_genes_oracle(&s, &t));
    }

    #[test]
    fn diff_examples() {
        let t = CodonTable::standard();
        let a = scan_genes(&seq("ATGTAA"), &t);
        let b = scan_genes(&seq("CCATGAAATAGCC"), &t);
        let d = diff(&GeneSet::default(), &a);
        assert_eq!(d.added, a.genes);
        assert!(d.removed.is_empty());
        assert!(diff(&a, &a).is_empty());
        let d = diff(&a, &b);
        assert_eq!(d.added, b.genes);
        assert_eq!(d.removed, a.genes);
    }

    #[test]
    fn multiset_diff_counts_duplicates() {
        let (old, new) = multiset_diff(&[1, 1, 2], &[1, 3]);
        assert_eq!(old, [1, 2]);
        assert_eq!(new, [3]);
    }

    fn genic() -> impl Strategy<Value = String> {
        // Bias toward codons so genes actually show up.
        prop::collection::vec(
            prop_oneof![
                Just("ATG".to_string()),
                Just("TAA".to_string()),
                Just("TAG".to_string()),
                Just("TGA".to_string()),
                "[ACGT]{1,5}",
            ],
            0..120,
        )
        .prop_map(|parts| parts.concat())
    }

    proptest! {
        #[test]
        fn scan_matches_oracle_and_invariants(s in genic()) {
            let t = CodonTable::standard();
            let s = seq(&s);
            let fast = scan_genes(&s, &t);
            prop_assert_eq!(&fast, &scan_genes_oracle(&s, &t));
            prop_assert_eq!(check_gene_set(&s, &t, &fast), Ok(()));
        }

        #[test]
        fn first_gene_is_leftmost_viable_start(s in genic()) {
            let t = CodonTable::standard();
            let s = seq(&s);
            let b = s.as_bytes();
            let viable = (0..b.len().saturating_sub(2)).find(|&i| {
                t.is_start(&b[i..i + 3])
                    && (i + 3..b.len().saturating_sub(2)).step_by(3).any(|j| t.is_stop(&b[j..j + 3]))
            });
            let got = scan_genes(&s, &t);
            prop_assert_eq!(got.genes.first().map(|g| g.start), viable);
        }
    }
}
