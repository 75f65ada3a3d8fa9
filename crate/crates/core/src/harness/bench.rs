//! One benchmark row: simulate, stream, and count matcher work.
//!
//! Memory is reported as the number of distinct k-mers held by the graph.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::simulate::{simulate, SimError, SimSpec};
use crate::patmatch::{find_all_codons, find_all_codons_naive};
use crate::seqcore::CodonTable;
use crate::stream::{run_stream, StreamConfig, StreamError};

pub const CSV_HEADER: &str = "sequence_length,distinct_kmers,segments_total,segments_consumed,genes_found,target_genes,wall_time_ms,bm_comparisons,naive_comparisons";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Stream(#[from] StreamError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub sequence_length: usize,
    pub distinct_kmers: usize,
    pub segments_total: usize,
    pub segments_consumed: usize,
    pub genes_found: usize,
    pub target_genes: Option<usize>,
    pub wall_time: Duration,
    pub bm_comparisons: u64,
    pub naive_comparisons: u64,
}

impl BenchRecord {
    /// CSV row matching [`CSV_HEADER`]; an unset target is an empty field.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{},{}",
            self.sequence_length,
            self.distinct_kmers,
            self.segments_total,
            self.segments_consumed,
            self.genes_found,
            self.target_genes.map(|t| t.to_string()).unwrap_or_default(),
            self.wall_time.as_secs_f64() * 1e3,
            self.bm_comparisons,
            self.naive_comparisons,
        )
    }

    /// Equality ignoring wall time.
    pub fn same_work(&self, other: &BenchRecord) -> bool {
        BenchRecord {
            wall_time: Duration::ZERO,
            ..self.clone()
        } == BenchRecord {
            wall_time: Duration::ZERO,
            ..other.clone()
        }
    }
}

/// One line of a bench spec file: a simulation plus the stream settings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub seed: u64,
    pub length: usize,
    pub genes: usize,
    pub read_min: usize,
    pub read_max: usize,
    pub overlap: usize,
    pub shuffle: bool,
    pub k: usize,
    pub target_genes: Option<usize>,
    pub emit_partial: bool,
}

impl BenchRow {
    pub fn sim_spec(&self) -> SimSpec {
        SimSpec {
            seed: self.seed,
            length: self.length,
            gene_count: self.genes,
            read_len_min: self.read_min,
            read_len_max: self.read_max,
            min_overlap: self.overlap,
            shuffle: self.shuffle,
        }
    }

    pub fn stream_config(&self) -> StreamConfig {
        StreamConfig {
            k: self.k,
            codon_table: CodonTable::standard(),
            target_genes: self.target_genes,
            emit_partial: self.emit_partial,
        }
    }
}

pub fn bench_run(spec: &SimSpec, cfg: &StreamConfig) -> Result<BenchRecord, BenchError> {
    cfg.validate()?;
    let sim = simulate(spec)?;

    let started = Instant::now();
    let summary = run_stream(&sim.reads, cfg, |_| {})?;
    let wall_time = started.elapsed();

    let text = sim.reference.as_bytes();
    let bm = find_all_codons(text, &cfg.codon_table);
    let naive = find_all_codons_naive(text, &cfg.codon_table);
    debug_assert_eq!(bm.starts, naive.starts);

    Ok(BenchRecord {
        sequence_length: sim.reference.len(),
        distinct_kmers: summary.graph.distinct_kmers(),
        segments_total: sim.reads.len(),
        segments_consumed: summary.segments_consumed,
        genes_found: summary.genes.len(),
        target_genes: cfg.target_genes,
        wall_time,
        bm_comparisons: bm.comparisons,
        naive_comparisons: naive.comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64, length: usize, genes: usize) -> SimSpec {
        SimSpec {
            seed,
            length,
            gene_count: genes,
            read_len_min: 30,
            read_len_max: 99,
            min_overlap: 20,
            shuffle: false,
        }
    }

    #[test]
    fn zero_read_input() {
        let r = bench_run(&spec(1, 0, 0), &StreamConfig::default()).unwrap();
        assert_eq!(
            (
                r.sequence_length,
                r.distinct_kmers,
                r.segments_total,
                r.segments_consumed,
                r.genes_found
            ),
            (0, 0, 0, 0, 0)
        );
        assert_eq!((r.bm_comparisons, r.naive_comparisons), (0, 0));
    }

    #[test]
    fn deterministic_apart_from_time() {
        let cfg = StreamConfig::default();
        let a = bench_run(&spec(5, 3000, 8), &cfg).unwrap();
        let b = bench_run(&spec(5, 3000, 8), &cfg).unwrap();
        assert!(a.same_work(&b));
        assert_eq!(a.distinct_kmers, 3000 - 21 + 1);
        assert!(a.bm_comparisons < a.naive_comparisons);
    }

    #[test]
    fn unreachable_target_consumes_everything() {
        let cfg = StreamConfig {
            target_genes: Some(50),
            ..StreamConfig::default()
        };
        let r = bench_run(&spec(2, 6000, 40), &cfg).unwrap();
        assert_eq!(r.segments_consumed, r.segments_total);
        assert_eq!(r.genes_found, 40);
    }

    #[test]
    fn csv_row_shape() {
        let r = BenchRecord {
            sequence_length: 10,
            distinct_kmers: 8,
            segments_total: 3,
            segments_consumed: 2,
            genes_found: 1,
            target_genes: None,
            wall_time: Duration::from_micros(1500),
            bm_comparisons: 4,
            naive_comparisons: 9,
        };
        assert_eq!(r.csv_row(), "10,8,3,2,1,,1.500,4,9");
        assert_eq!(
            CSV_HEADER.split(',').count(),
            r.csv_row().split(',').count()
        );
    }
}
