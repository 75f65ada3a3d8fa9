//! Error-free read simulator.
//!
//! A reference is built from gene cassettes (start codon, body codons without
//! a stop, one stop codon) separated by spacers that never contain the start
//! codon. The greedy scanner must find exactly `gene_count` genes on the
//! result or the reference is regenerated; the scan becomes the ground truth.
//! Reads are overlapping windows that cover every position.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genescan::{scan_genes, GeneSet};
use crate::seqcore::{CodonTable, Sequence, ALPHABET};

/// Reads must be shorter than this many bases.
pub const READ_LEN_LIMIT: usize = 100;

const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
    #[error("cannot embed {genes} genes in {length} bases")]
    Unsatisfiable { genes: usize, length: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimSpec {
    pub seed: u64,
    pub length: usize,
    pub gene_count: usize,
    pub read_len_min: usize,
    pub read_len_max: usize,
    pub min_overlap: usize,
    pub shuffle: bool,
}

impl SimSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidSpec(msg));
        if self.read_len_max >= READ_LEN_LIMIT {
            return bad(format!(
                "maximum read length {} must be below {READ_LEN_LIMIT}",
                self.read_len_max
            ));
        }
        if self.read_len_min == 0 || self.read_len_min > self.read_len_max {
            return bad(format!(
                "read length range {}..={} is empty",
                self.read_len_min, self.read_len_max
            ));
        }
        if self.min_overlap >= self.read_len_min {
            return bad(format!(
                "overlap {} must be shorter than the minimum read length {}",
                self.min_overlap, self.read_len_min
            ));
        }
        if self.length < 6 * self.gene_count {
            return Err(SimError::Unsatisfiable {
                genes: self.gene_count,
                length: self.length,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub reference: Sequence,
    pub reads: Vec<Sequence>,
    pub truth: GeneSet,
}

pub fn simulate(spec: &SimSpec) -> Result<Simulation, SimError> {
    spec.validate()?;
    let table = CodonTable::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    for _ in 0..MAX_ATTEMPTS {
        let reference = random_reference(&mut rng, spec.length, spec.gene_count, &table);
        let truth = scan_genes(&reference, &table);
        if truth.len() != spec.gene_count {
            continue;
        }
        let max_overlap = spec
            .min_overlap
            .max((spec.min_overlap + spec.read_len_min) / 2);
        let mut reads = fragment(
            &reference,
            spec.read_len_min..=spec.read_len_max,
            spec.min_overlap..=max_overlap,
            &mut rng,
        );
        if spec.shuffle {
            reads.shuffle(&mut rng);
        }
        return Ok(Simulation {
            reference,
            reads,
            truth,
        });
    }
    Err(SimError::Unsatisfiable {
        genes: spec.gene_count,
        length: spec.length,
    })
}

fn random_reference(
    rng: &mut impl Rng,
    length: usize,
    genes: usize,
    table: &CodonTable,
) -> Sequence {
    // Genes take at most about two thirds of their share of the reference.
    let share = length / genes.max(1);
    let max_codons = (share * 2 / 3 / 3).max(2);
    let gene_codons: Vec<usize> = (0..genes).map(|_| rng.gen_range(2..=max_codons)).collect();
    let spacer_total = length - gene_codons.iter().map(|c| 3 * c).sum::<usize>();

    let mut cuts: Vec<usize> = (0..genes)
        .map(|_| rng.gen_range(0..=spacer_total))
        .collect();
    cuts.sort_unstable();
    let mut spacer_lens = Vec::with_capacity(genes + 1);
    let mut prev = 0;
    for c in cuts {
        spacer_lens.push(c - prev);
        prev = c;
    }
    spacer_lens.push(spacer_total - prev);

    let mut out = Vec::with_capacity(length);
    for (i, &sp) in spacer_lens.iter().enumerate() {
        push_spacer(rng, &mut out, sp, table);
        if let Some(&codons) = gene_codons.get(i) {
            push_gene(rng, &mut out, codons, table);
        }
    }
    debug_assert_eq!(out.len(), length);
    Sequence::from_bases(out).expect("generated from the alphabet")
}

/// Random bases with no start codon starting inside the spacer.
fn push_spacer(rng: &mut impl Rng, out: &mut Vec<u8>, len: usize, table: &CodonTable) {
    let start = *table.start();
    let begin = out.len();
    for _ in 0..len {
        loop {
            let b = ALPHABET[rng.gen_range(0..4)];
            let n = out.len();
            let makes_start =
                n >= begin + 2 && out[n - 2] == start[0] && out[n - 1] == start[1] && b == start[2];
            if !makes_start {
                out.push(b);
                break;
            }
        }
    }
}

fn push_gene(rng: &mut impl Rng, out: &mut Vec<u8>, codons: usize, table: &CodonTable) {
    out.extend_from_slice(table.start());
    for _ in 0..codons - 2 {
        loop {
            let c = [
                ALPHABET[rng.gen_range(0..4)],
                ALPHABET[rng.gen_range(0..4)],
                ALPHABET[rng.gen_range(0..4)],
            ];
            if !table.is_stop(&c) {
                out.extend_from_slice(&c);
                break;
            }
        }
    }
    out.extend_from_slice(&table.stops()[rng.gen_range(0..3)]);
}

/// Cuts `reference` into windows covering every base, with consecutive
/// windows overlapping by an amount drawn from `overlap`. A reference shorter
/// than the smallest read becomes a single read.
pub fn fragment(
    reference: &Sequence,
    read_len: RangeInclusive<usize>,
    overlap: RangeInclusive<usize>,
    rng: &mut impl Rng,
) -> Vec<Sequence> {
    let n = reference.len();
    let mut reads = Vec::new();
    if n == 0 {
        return reads;
    }
    let mut starts: Vec<usize> = Vec::new();
    let mut pos = 0usize;
    loop {
        let len = rng.gen_range(read_len.clone());
        if pos + len >= n {
            let start = n.saturating_sub(len).min(pos);
            // A final window reaching back over earlier windows replaces them.
            while starts.last().is_some_and(|&s| s >= start) {
                starts.pop();
                reads.pop();
            }
            reads.push(reference.subseq(start..n));
            break;
        }
        starts.push(pos);
        reads.push(reference.subseq(pos..pos + len));
        let ov = rng.gen_range(overlap.clone()).min(len - 1);
        pos += len - ov;
    }
    reads
}
