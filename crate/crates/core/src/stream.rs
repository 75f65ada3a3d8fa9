//! On-line driver: ingest one segment at a time, re-assemble, re-scan genes
//! and report what changed.
//!
//! Events come out in one total order. Each segment produces a
//! `SegmentIngested` (ordinals count from 1), possibly a `SegmentRejected`
//! and a `GenesUpdated` when the gene list changed, and every run ends with
//! exactly one `Done`.
//!
//! While the assembly is not complete and `emit_partial` is set, genes are
//! scanned per contig and carry the contig's index with contig-local
//! coordinates. A complete assembly is reported as contig 0. Genes seen on
//! partial contigs are provisional and may be withdrawn later.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::debruijn::{AssemblyResult, DeBruijnGraph, GraphError, DEFAULT_K};
use crate::genescan::{multiset_diff_by, scan_genes, Gene, GeneSet};
use crate::seqcore::{CodonTable, Sequence, MAX_K};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("k = {0} outside 2..={MAX_K}")]
    KOutOfRange(usize),
    #[error("target gene count must be at least 1")]
    ZeroTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamConfig {
    pub k: usize,
    pub codon_table: CodonTable,
    pub target_genes: Option<usize>,
    pub emit_partial: bool,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            k: DEFAULT_K,
            codon_table: CodonTable::standard(),
            target_genes: None,
            emit_partial: true,
        }
    }
}

impl StreamConfig {
    pub fn validate(&self) -> Result<(), StreamError> {
        if !(2..=MAX_K).contains(&self.k) {
            return Err(StreamError::KOutOfRange(self.k));
        }
        if self.target_genes == Some(0) {
            return Err(StreamError::ZeroTarget);
        }
        Ok(())
    }
}

/// A gene plus the contig it was found on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocatedGene {
    pub contig: usize,
    #[serde(flatten)]
    pub gene: Gene,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum AssemblyStatus {
    Empty,
    Complete { length: usize },
    Partial { contigs: usize },
    Ambiguous { node: String },
}

impl AssemblyStatus {
    fn of(result: &AssemblyResult) -> Self {
        match result {
            AssemblyResult::Complete(s) => AssemblyStatus::Complete { length: s.len() },
            AssemblyResult::Partial(c) if c.is_empty() => AssemblyStatus::Empty,
            AssemblyResult::Partial(c) => AssemblyStatus::Partial { contigs: c.len() },
            AssemblyResult::Ambiguous { node, .. } => AssemblyStatus::Ambiguous {
                node: node.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoneReason {
    TargetReached,
    InputExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum StreamEvent {
    SegmentIngested {
        ordinal: usize,
        length: usize,
    },
    SegmentRejected {
        ordinal: usize,
        length: usize,
        reason: String,
    },
    GenesUpdated {
        ordinal: usize,
        status: AssemblyStatus,
        genes: Vec<LocatedGene>,
        added: Vec<LocatedGene>,
        removed: Vec<LocatedGene>,
    },
    Done {
        reason: DoneReason,
        segments_consumed: usize,
        status: AssemblyStatus,
        genes: Vec<LocatedGene>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// Final state of a run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub reason: DoneReason,
    pub segments_consumed: usize,
    pub genes: Vec<LocatedGene>,
    pub assembly: AssemblyResult,
    pub graph: DeBruijnGraph,
}

impl RunSummary {
    pub fn segments_consumed(&self) -> usize {
        self.segments_consumed
    }

    /// Genes as a plain set. Only meaningful for a single-contig assembly.
    pub fn gene_set(&self) -> GeneSet {
        self.genes
            .iter()
            .map(|g| g.gene.clone())
            .collect::<Vec<_>>()
            .into()
    }
}

/// Incremental state of one run. Drive it with [`Streamer::ingest`] and close
/// it with [`Streamer::finish`].
#[derive(Debug)]
pub struct Streamer {
    cfg: StreamConfig,
    graph: DeBruijnGraph,
    genes: Vec<LocatedGene>,
    assembly: AssemblyResult,
    ordinal: usize,
    done: Option<DoneReason>,
    scans: FxHashMap<Sequence, GeneSet>,
}

impl Streamer {
    pub fn new(cfg: StreamConfig) -> Result<Self, StreamError> {
        cfg.validate()?;
        let graph = DeBruijnGraph::new(cfg.k).map_err(|_| StreamError::KOutOfRange(cfg.k))?;
        Ok(Streamer {
            cfg,
            graph,
            genes: Vec::new(),
            assembly: AssemblyResult::Partial(Vec::new()),
            ordinal: 0,
            done: None,
            scans: FxHashMap::default(),
        })
    }

    pub fn graph(&self) -> &DeBruijnGraph {
        &self.graph
    }

    pub fn genes(&self) -> &[LocatedGene] {
        &self.genes
    }

    pub fn is_done(&self) -> bool {
        self.done.is_some()
    }

    pub fn ingest(&mut self, segment: &Sequence, sink: &mut impl FnMut(StreamEvent)) -> Flow {
        if self.done.is_some() {
            return Flow::Stop;
        }
        self.ordinal += 1;
        let ordinal = self.ordinal;
        sink(StreamEvent::SegmentIngested {
            ordinal,
            length: segment.len(),
        });

        if let Err(e @ GraphError::ReadTooShort { .. }) = self.graph.insert_segment(segment) {
            sink(StreamEvent::SegmentRejected {
                ordinal,
                length: segment.len(),
                reason: e.to_string(),
            });
            return Flow::Continue;
        }

        self.assembly = self.graph.assemble();
        if let Some(genes) = self.current_genes() {
            let (removed, added) = multiset_diff_by(&self.genes, &genes, |g| &g.gene);
            if !(added.is_empty() && removed.is_empty()) {
                sink(StreamEvent::GenesUpdated {
                    ordinal,
                    status: AssemblyStatus::of(&self.assembly),
                    genes: genes.clone(),
                    added,
                    removed,
                });
            }
            self.genes = genes;
        }

        match self.cfg.target_genes {
            Some(target) if self.genes.len() >= target => {
                self.done = Some(DoneReason::TargetReached);
                sink(self.done_event());
                Flow::Stop
            }
            _ => Flow::Continue,
        }
    }

    /// Gene list for the current assembly, or `None` to keep the previous one.
    /// Contigs unchanged since the last segment reuse their earlier scan.
    fn current_genes(&mut self) -> Option<Vec<LocatedGene>> {
        let ambiguous_contigs;
        let contigs: Vec<&Sequence> = match &self.assembly {
            AssemblyResult::Complete(s) => vec![s],
            _ if !self.cfg.emit_partial => return None,
            AssemblyResult::Partial(c) => c.iter().map(|c| &c.bases).collect(),
            AssemblyResult::Ambiguous { .. } => {
                ambiguous_contigs = self.graph.contigs();
                ambiguous_contigs.iter().map(|c| &c.bases).collect()
            }
        };
        let mut previous = std::mem::take(&mut self.scans);
        let mut genes = Vec::new();
        for (contig, &bases) in contigs.iter().enumerate() {
            let set = previous
                .remove(bases)
                .unwrap_or_else(|| scan_genes(bases, &self.cfg.codon_table));
            genes.extend(set.iter().map(|gene| LocatedGene {
                contig,
                gene: gene.clone(),
            }));
            self.scans.insert(bases.clone(), set);
        }
        Some(genes)
    }

    fn done_event(&self) -> StreamEvent {
        StreamEvent::Done {
            reason: self.done.unwrap_or(DoneReason::InputExhausted),
            segments_consumed: self.ordinal,
            status: AssemblyStatus::of(&self.assembly),
            genes: self.genes.clone(),
        }
    }

    /// Emits `Done(InputExhausted)` unless the run already stopped.
    pub fn finish(mut self, sink: &mut impl FnMut(StreamEvent)) -> RunSummary {
        if self.done.is_none() {
            self.done = Some(DoneReason::InputExhausted);
            sink(self.done_event());
        }
        RunSummary {
            reason: self.done.expect("set above"),
            segments_consumed: self.ordinal,
            genes: self.genes,
            assembly: self.assembly,
            graph: self.graph,
        }
    }
}

/// Runs a whole source through a [`Streamer`], stopping early on the target.
pub fn run_stream<I>(
    segments: I,
    cfg: &StreamConfig,
    mut sink: impl FnMut(StreamEvent),
) -> Result<RunSummary, StreamError>
where
    I: IntoIterator,
    I::Item: AsRef<Sequence>,
{
    let mut streamer = Streamer::new(cfg.clone())?;
    for seg in segments {
        if streamer.ingest(seg.as_ref(), &mut sink) == Flow::Stop {
            break;
        }
    }
    Ok(streamer.finish(&mut sink))
}

impl AsRef<Sequence> for Sequence {
    fn as_ref(&self) -> &Sequence {
        self
    }
}
