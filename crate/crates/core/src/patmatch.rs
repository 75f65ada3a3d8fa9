//! Exact search over nucleotide text.
//!
//! [`bm_search`] is Boyer-Moore with both the bad-character and the (strong)
//! good-suffix rule, shifting by the larger of the two. After a full match it
//! shifts by the pattern period so overlapping occurrences are reported.
//! [`naive_search`] checks every window left to right and serves as the
//! reference result and baseline comparison count.

use thiserror::Error;

use crate::seqcore::{base_code, Codon, CodonTable, Sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("empty pattern")]
    EmptyPattern,
}

/// A preprocessed search pattern.
#[derive(Debug, Clone)]
pub struct Pattern {
    bases: Vec<u8>,
    /// Rightmost index of each symbol in the pattern, -1 if absent.
    last: [isize; 4],
    /// `good_suffix[j]`: shift when `bases[j..]` matched and `bases[j-1]`
    /// mismatched; `good_suffix[0]` is the shift after a full match.
    good_suffix: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchReport {
    pub occurrences: Vec<usize>,
    pub comparisons: u64,
}

impl Pattern {
    pub fn new(pattern: &[u8]) -> Result<Self, MatchError> {
        if pattern.is_empty() {
            return Err(MatchError::EmptyPattern);
        }
        let mut last = [-1isize; 4];
        for (i, &b) in pattern.iter().enumerate() {
            if let Some(c) = base_code(b) {
                last[c as usize] = i as isize;
            }
        }
        Ok(Pattern {
            bases: pattern.to_vec(),
            last,
            good_suffix: good_suffix_table(pattern),
        })
    }

    pub fn from_sequence(seq: &Sequence) -> Result<Self, MatchError> {
        Self::new(seq.as_bytes())
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[u8] {
        &self.bases
    }

    /// Bad-character shift for a mismatch at pattern index `j` against `text_byte`.
    fn bad_char_shift(&self, j: usize, text_byte: u8) -> isize {
        let last = base_code(text_byte).map_or(-1, |c| self.last[c as usize]);
        j as isize - last
    }

    pub fn good_suffix(&self) -> &[usize] {
        &self.good_suffix
    }
}

/// Strong good-suffix shifts, indexed 0..=m.
fn good_suffix_table(p: &[u8]) -> Vec<usize> {
    let m = p.len();
    let mut shift = vec![0usize; m + 1];
    let mut border = vec![0usize; m + 1];

    let mut i = m;
    let mut j = m + 1;
    border[i] = j;
    while i > 0 {
        while j <= m && p[i - 1] != p[j - 1] {
            if shift[j] == 0 {
                shift[j] = j - i;
            }
            j = border[j];
        }
        i -= 1;
        j -= 1;
        border[i] = j;
    }

    let mut j = border[0];
    for (i, s) in shift.iter_mut().enumerate() {
        if *s == 0 {
            *s = j;
        }
        if i == j {
            j = border[j];
        }
    }
    shift
}

pub fn bm_search(text: &[u8], pattern: &Pattern) -> MatchReport {
    let n = text.len();
    let m = pattern.len();
    let mut report = MatchReport::default();
    if m > n {
        return report;
    }
    let p = &pattern.bases;
    let mut s = 0usize;
    while s <= n - m {
        let mut j = m;
        while j > 0 {
            report.comparisons += 1;
            if p[j - 1] != text[s + j - 1] {
                break;
            }
            j -= 1;
        }
        if j == 0 {
            report.occurrences.push(s);
            s += pattern.good_suffix[0];
        } else {
            let bc = pattern.bad_char_shift(j - 1, text[s + j - 1]);
            let gs = pattern.good_suffix[j] as isize;
            s += bc.max(gs).max(1) as usize;
        }
    }
    report
}

pub fn naive_search(text: &[u8], pattern: &[u8]) -> Result<MatchReport, MatchError> {
    let m = pattern.len();
    if m == 0 {
        return Err(MatchError::EmptyPattern);
    }
    let mut report = MatchReport::default();
    if m > text.len() {
        return Ok(report);
    }
    for s in 0..=text.len() - m {
        let mut matched = true;
        for j in 0..m {
            report.comparisons += 1;
            if text[s + j] != pattern[j] {
                matched = false;
                break;
            }
        }
        if matched {
            report.occurrences.push(s);
        }
    }
    Ok(report)
}

/// Start and stop codon positions in a text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodonHits {
    pub starts: Vec<usize>,
    /// Sorted stop positions, each with the stop codon found there.
    pub stops: Vec<(usize, Codon)>,
    pub comparisons: u64,
}

impl CodonHits {
    pub fn stop_positions(&self) -> Vec<usize> {
        self.stops.iter().map(|&(i, _)| i).collect()
    }
}

/// One Boyer-Moore pass for the start codon and one per stop codon.
pub fn find_all_codons(text: &[u8], table: &CodonTable) -> CodonHits {
    let start = Pattern::new(table.start()).expect("codon is non-empty");
    let r = bm_search(text, &start);
    let mut hits = CodonHits {
        starts: r.occurrences,
        stops: Vec::new(),
        comparisons: r.comparisons,
    };
    for stop in table.stops() {
        let pat = Pattern::new(stop).expect("codon is non-empty");
        let r = bm_search(text, &pat);
        hits.comparisons += r.comparisons;
        hits.stops
            .extend(r.occurrences.into_iter().map(|i| (i, *stop)));
    }
    // Distinct codons cannot share a start index.
    hits.stops.sort_unstable_by_key(|&(i, _)| i);
    hits
}

/// Same hits via the naive scanner, with its comparison count.
pub fn find_all_codons_naive(text: &[u8], table: &CodonTable) -> CodonHits {
    let r = naive_search(text, table.start()).expect("codon is non-empty");
    let mut hits = CodonHits {
        starts: r.occurrences,
        stops: Vec::new(),
        comparisons: r.comparisons,
    };
    for stop in table.stops() {
        let r = naive_search(text, stop).expect("codon is non-empty");
        hits.comparisons += r.comparisons;
        hits.stops
            .extend(r.occurrences.into_iter().map(|i| (i, *stop)));
    }
    hits.stops.sort_unstable_by_key(|&(i, _)| i);
    hits
}
