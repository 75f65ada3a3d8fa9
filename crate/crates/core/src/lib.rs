//! Streaming de novo assembly of error-free DNA segments with on-line gene
//! extraction.
//!
//! Segments arrive one at a time and are folded into a de Bruijn graph
//! ([`debruijn`]). After each segment the graph is walked to reconstruct the
//! sequence (or, while it is still fragmented, its contigs), and genes are
//! re-extracted with a Boyer-Moore codon search ([`patmatch`]) followed by a
//! greedy leftmost start / nearest in-frame stop scan ([`genescan`]).
//! [`stream`] ties this together and reports changes as ordered events.
//!
//! [`harness`] provides a read simulator, an exact shortest-common-superstring
//! solver used as a correctness baseline, and benchmark records.

pub mod cli;
pub mod debruijn;
pub mod fasta;
pub mod genescan;
pub mod harness;
pub mod patmatch;
pub mod seqcore;
pub mod stream;

pub use debruijn::{AssemblyResult, Contig, DeBruijnGraph, GraphError, GraphStats, DEFAULT_K};
pub use genescan::{diff, scan_genes, scan_genes_oracle, Gene, GeneDiff, GeneSet};
pub use patmatch::{bm_search, find_all_codons, naive_search, MatchReport, Pattern};
pub use seqcore::{encode_kmer, kmers_of, CodonTable, Kmer, SeqError, Sequence};
pub use stream::{run_stream, DoneReason, StreamConfig, StreamEvent, Streamer};
