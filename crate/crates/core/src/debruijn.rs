//! Incremental de Bruijn graph over (k-1)-mer nodes.
//!
//! Every k-mer of an ingested read adds one edge `prefix -> suffix`. Edge
//! multiplicities and the multiplicity-weighted degree counters are kept, but
//! traversal treats each distinct edge once: overlapping error-free reads
//! repeat k-mers without adding information.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::seqcore::{code_base, decode_code, mask, Kmer, RollingKmers, SeqError, Sequence, MAX_K};

pub const DEFAULT_K: usize = 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("read of length {len} is shorter than k = {k}")]
    ReadTooShort { len: usize, k: usize },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Debug, Clone)]
struct Node {
    code: u64,
    /// Distinct successors (node ids) with their multiplicities, in
    /// first-seen order.
    succ: Vec<(u32, u32)>,
    indegree: u64,
    outdegree: u64,
    distinct_in: u32,
}

impl Node {
    fn new(code: u64) -> Self {
        Node {
            code,
            succ: Vec::new(),
            indegree: 0,
            outdegree: 0,
            distinct_in: 0,
        }
    }

    fn is_start(&self) -> bool {
        self.distinct_in == 0 || self.succ.len() as i64 - self.distinct_in as i64 == 1
    }

    fn is_one_in_one_out(&self) -> bool {
        self.distinct_in == 1 && self.succ.len() == 1
    }
}

/// Nodes live in an arena indexed by id; `index` maps packed codes to ids.
/// Start nodes and junctions (nodes that are not 1-in/1-out) are kept sorted
/// by code as edges arrive, so neither needs a full scan.
#[derive(Debug, Clone)]
pub struct DeBruijnGraph {
    k: usize,
    index: FxHashMap<u64, u32>,
    nodes: Vec<Node>,
    edge_count: u64,
    distinct_edges: usize,
    starts: BTreeSet<u64>,
    junctions: BTreeSet<u64>,
}

/// A maximal unambiguous path through the collapsed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contig {
    pub bases: Sequence,
    pub source_path: Vec<Kmer>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssemblyResult {
    /// One deterministic walk spells every distinct edge.
    Complete(Sequence),
    /// Disconnected or otherwise unfinished graph, reported as contigs.
    Partial(Vec<Contig>),
    /// The walk reached a node with two or more unused distinct successors.
    Ambiguous { node: Kmer, successors: Vec<Kmer> },
}

impl AssemblyResult {
    pub fn is_complete(&self) -> bool {
        matches!(self, AssemblyResult::Complete(_))
    }

    pub fn complete_sequence(&self) -> Option<&Sequence> {
        match self {
            AssemblyResult::Complete(s) => Some(s),
            _ => None,
        }
    }

    pub fn status_name(&self) -> &'static str {
        match self {
            AssemblyResult::Complete(_) => "complete",
            AssemblyResult::Partial(_) => "partial",
            AssemblyResult::Ambiguous { .. } => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GraphStats {
    pub node_count: usize,
    pub distinct_edge_count: usize,
    pub edge_count: u64,
    pub start_node_count: usize,
}

impl DeBruijnGraph {
    pub fn new(k: usize) -> Result<Self, GraphError> {
        if k > MAX_K {
            return Err(SeqError::KTooLarge(k).into());
        }
        if k < 2 {
            return Err(SeqError::KTooSmall(k).into());
        }
        Ok(DeBruijnGraph {
            k,
            index: FxHashMap::default(),
            nodes: Vec::new(),
            edge_count: 0,
            distinct_edges: 0,
            starts: BTreeSet::new(),
            junctions: BTreeSet::new(),
        })
    }

    pub fn from_reads<'a>(
        k: usize,
        reads: impl IntoIterator<Item = &'a Sequence>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(k)?;
        for r in reads {
            g.insert_segment(r)?;
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Number of distinct k-mers seen so far.
    pub fn distinct_kmers(&self) -> usize {
        self.distinct_edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node_kmer(&self, code: u64) -> Kmer {
        Kmer::from_code(self.k - 1, code).expect("k-1 within range")
    }

    /// Adds every k-mer of `read` as an edge, accumulating multiplicity.
    pub fn insert_segment(&mut self, read: &Sequence) -> Result<(), GraphError> {
        if read.len() < self.k {
            return Err(GraphError::ReadTooShort {
                len: read.len(),
                k: self.k,
            });
        }
        let node_mask = mask(self.k - 1);
        for code in RollingKmers::new(read.as_bytes(), self.k) {
            self.add_edge(code >> 2, code & node_mask);
        }
        Ok(())
    }

    fn node_id(&mut self, code: u64) -> u32 {
        if let Some(&id) = self.index.get(&code) {
            return id;
        }
        let id = u32::try_from(self.nodes.len()).expect("fewer than 2^32 nodes");
        self.index.insert(code, id);
        self.nodes.push(Node::new(code));
        self.starts.insert(code);
        self.junctions.insert(code);
        id
    }

    /// Applies `f` to a node and keeps the start and junction sets in step.
    fn update(&mut self, id: u32, f: impl FnOnce(&mut Node)) {
        let n = &mut self.nodes[id as usize];
        let (was_start, was_plain) = (n.is_start(), n.is_one_in_one_out());
        f(n);
        let (is_start, is_plain) = (n.is_start(), n.is_one_in_one_out());
        let code = n.code;
        if was_start != is_start {
            if is_start {
                self.starts.insert(code);
            } else {
                self.starts.remove(&code);
            }
        }
        if was_plain != is_plain {
            if is_plain {
                self.junctions.remove(&code);
            } else {
                self.junctions.insert(code);
            }
        }
    }

    fn add_edge(&mut self, from: u64, to: u64) {
        self.edge_count += 1;
        let src = self.node_id(from);
        let dst = self.node_id(to);
        let mut new_edge = false;
        self.update(src, |n| {
            n.outdegree += 1;
            match n.succ.iter_mut().find(|(s, _)| *s == dst) {
                Some((_, m)) => *m += 1,
                None => {
                    n.succ.push((dst, 1));
                    new_edge = true;
                }
            }
        });
        self.update(dst, |n| {
            n.indegree += 1;
            if new_edge {
                n.distinct_in += 1;
            }
        });
        if new_edge {
            self.distinct_edges += 1;
        }
    }

    fn node(&self, kmer: &Kmer) -> Option<&Node> {
        self.index
            .get(&kmer.code())
            .map(|&id| &self.nodes[id as usize])
    }

    pub fn multiplicity(&self, from: &Kmer, to: &Kmer) -> u32 {
        self.node(from)
            .and_then(|n| {
                n.succ
                    .iter()
                    .find(|&&(s, _)| self.nodes[s as usize].code == to.code())
            })
            .map_or(0, |&(_, m)| m)
    }

    /// Multiplicity-weighted (indegree, outdegree) of a node.
    pub fn degrees(&self, node: &Kmer) -> Option<(u64, u64)> {
        self.node(node).map(|n| (n.indegree, n.outdegree))
    }

    /// Nodes with sorted distinct successors, sorted by code.
    pub fn adjacency(&self) -> Vec<(Kmer, Vec<(Kmer, u32)>)> {
        let mut out: Vec<_> = self
            .nodes
            .iter()
            .map(|n| {
                let mut succ: Vec<_> = n
                    .succ
                    .iter()
                    .map(|&(s, m)| (self.node_kmer(self.nodes[s as usize].code), m))
                    .collect();
                succ.sort();
                (self.node_kmer(n.code), succ)
            })
            .collect();
        out.sort_by_key(|(k, _)| k.code());
        out
    }

    /// Nodes with no incoming edge, or one more outgoing than incoming
    /// distinct edge, ordered by packed code.
    pub fn find_start_nodes(&self) -> Vec<Kmer> {
        self.starts.iter().map(|&c| self.node_kmer(c)).collect()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            node_count: self.nodes.len(),
            distinct_edge_count: self.distinct_edges,
            edge_count: self.edge_count,
            start_node_count: self.starts.len(),
        }
    }

    /// Distinct successor ids of a node, ordered by code.
    fn sorted_succ(&self, id: u32) -> Vec<u32> {
        let mut succ: Vec<u32> = self.nodes[id as usize]
            .succ
            .iter()
            .map(|&(s, _)| s)
            .collect();
        succ.sort_unstable_by_key(|&s| self.nodes[s as usize].code);
        succ
    }

    pub fn assemble(&self) -> AssemblyResult {
        if self.starts.len() != 1 {
            return AssemblyResult::Partial(self.contigs());
        }
        let start = *self.starts.first().expect("one start");
        let mut id = self.index[&start];
        let mut bases = decode_code(start, self.k - 1);
        // Bit i set = i-th distinct successor already walked.
        let mut used = vec![0u8; self.nodes.len()];
        let mut walked = 0usize;
        loop {
            let n = &self.nodes[id as usize];
            let mask = used[id as usize];
            let mut viable = n
                .succ
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) == 0);
            let Some((idx, &(next, _))) = viable.next() else {
                break;
            };
            if viable.next().is_some() {
                let mut successors: Vec<Kmer> = n
                    .succ
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) == 0)
                    .map(|(_, &(s, _))| self.node_kmer(self.nodes[s as usize].code))
                    .collect();
                successors.sort();
                return AssemblyResult::Ambiguous {
                    node: self.node_kmer(n.code),
                    successors,
                };
            }
            used[id as usize] = mask | (1 << idx);
            bases.push(code_base((self.nodes[next as usize].code & 3) as u8));
            walked += 1;
            id = next;
        }
        if walked == self.distinct_edges {
            AssemblyResult::Complete(Sequence::from_bases_unchecked(bases))
        } else {
            AssemblyResult::Partial(self.contigs())
        }
    }

    /// Maximal unambiguous paths: chains whose interior nodes have exactly one
    /// distinct predecessor and one distinct successor. Isolated cycles are
    /// opened at their smallest node.
    pub fn contigs(&self) -> Vec<Contig> {
        let mut contigs = Vec::new();
        let mut seen = vec![false; self.nodes.len()];
        let mut interior = 0usize;

        for code in &self.junctions {
            let u = self.index[code];
            for v in self.sorted_succ(u) {
                let mut path = vec![u, v];
                let mut cur = v;
                while self.nodes[cur as usize].is_one_in_one_out() {
                    seen[cur as usize] = true;
                    interior += 1;
                    cur = self.nodes[cur as usize].succ[0].0;
                    path.push(cur);
                }
                contigs.push(self.spell(&path));
            }
        }

        // Whatever plain node no chain reached lies on an isolated cycle.
        if interior < self.nodes.len() - self.junctions.len() {
            let mut rest: Vec<u32> = (0..self.nodes.len() as u32)
                .filter(|&i| !seen[i as usize])
                .filter(|&i| self.nodes[i as usize].is_one_in_one_out())
                .collect();
            rest.sort_unstable_by_key(|&i| self.nodes[i as usize].code);
            for u in rest {
                if seen[u as usize] {
                    continue;
                }
                let mut path = vec![u];
                let mut cur = u;
                loop {
                    seen[cur as usize] = true;
                    cur = self.nodes[cur as usize].succ[0].0;
                    path.push(cur);
                    if cur == u {
                        break;
                    }
                }
                contigs.push(self.spell(&path));
            }
        }
        contigs
    }

    fn spell(&self, path: &[u32]) -> Contig {
        let code = |id: u32| self.nodes[id as usize].code;
        let mut bases = decode_code(code(path[0]), self.k - 1);
        bases.extend(path[1..].iter().map(|&id| code_base((code(id) & 3) as u8)));
        Contig {
            bases: Sequence::from_bases_unchecked(bases),
            source_path: path.iter().map(|&id| self.node_kmer(code(id))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::encode_kmer;

    const GRAPH2: &str = "AAGTCATTACA";

    fn seq(s: &str) -> Sequence {
        Sequence::normalize(s).unwrap()
    }

    fn node(s: &str) -> Kmer {
        encode_kmer(s.as_bytes()).unwrap()
    }

    fn graph(k: usize, reads: &[&str]) -> DeBruijnGraph {
        let reads: Vec<Sequence> = reads.iter().map(|r| seq(r)).collect();
        DeBruijnGraph::from_reads(k, &reads).unwrap()
    }

    #[test]
    fn single_kmer_read() {
        let g = graph(4, &["AAGT"]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.multiplicity(&node("AAG"), &node("AGT")), 1);
    }

    #[test]
    fn graph2_is_a_simple_path() {
        let g = graph(4, &[GRAPH2]);
        let st = g.stats();
        assert_eq!(st.edge_count, 8);
        assert_eq!(st.distinct_edge_count, 8);
        assert_eq!(st.node_count, 9);
        assert_eq!(g.find_start_nodes(), vec![node("AAG")]);
        for (_, succ) in g.adjacency() {
            assert!(succ.len() <= 1);
        }
    }

    #[test]
    fn repeated_read_accumulates_multiplicity() {
        let once = graph(4, &[GRAPH2]);
        let twice = graph(4, &[GRAPH2, GRAPH2]);
        assert_eq!(twice.edge_count(), 16);
        assert_eq!(twice.distinct_kmers(), 8);
        let a: Vec<_> = once.adjacency().into_iter().map(|(n, _)| n).collect();
        let b: Vec<_> = twice.adjacency().into_iter().map(|(n, _)| n).collect();
        assert_eq!(a, b);
        for (_, succ) in twice.adjacency() {
            for (_, m) in succ {
                assert_eq!(m, 2);
            }
        }
        assert_eq!(twice.assemble(), once.assemble());
    }

    #[test]
    fn short_read_is_rejected() {
        let mut g = DeBruijnGraph::new(4).unwrap();
        assert_eq!(
            g.insert_segment(&seq("AAG")),
            Err(GraphError::ReadTooShort { len: 3, k: 4 })
        );
        assert!(g.is_empty());
        assert!(DeBruijnGraph::new(1).is_err());
        assert!(DeBruijnGraph::new(32).is_err());
    }

    #[test]
    fn start_nodes() {
        assert!(DeBruijnGraph::new(4).unwrap().find_start_nodes().is_empty());
        let g = graph(4, &["AAGT", "TTAC"]);
        assert_eq!(g.find_start_nodes(), vec![node("AAG"), node("TTA")]);
    }

    #[test]
    fn assemble_graph2() {
        assert_eq!(
            graph(4, &[GRAPH2]).assemble(),
            AssemblyResult::Complete(seq(GRAPH2))
        );
        assert_eq!(
            graph(4, &["AAGTC", "GTCAT", "CATTA", "TTACA"]).assemble(),
            AssemblyResult::Complete(seq(GRAPH2))
        );
        // Order of arrival does not matter.
        assert_eq!(
            graph(4, &["TTACA", "CATTA", "AAGTC", "GTCAT"]).assemble(),
            AssemblyResult::Complete(seq(GRAPH2))
        );
    }

    #[test]
    fn one_read_is_complete_and_its_own_contig() {
        let g = graph(4, &["CATTA"]);
        assert_eq!(g.assemble(), AssemblyResult::Complete(seq("CATTA")));
        let contigs = g.contigs();
        assert_eq!(contigs.len(), 1);
        assert_eq!(contigs[0].bases, seq("CATTA"));
        assert_eq!(contigs[0].source_path.len() + 4 - 2, 5);
    }

    #[test]
    fn disconnected_reads_are_partial() {
        let g = graph(4, &["AAGTC", "TTACA"]);
        match g.assemble() {
            AssemblyResult::Partial(contigs) => {
                let got: Vec<&str> = contigs.iter().map(|c| c.bases.as_str()).collect();
                assert_eq!(got, ["AAGTC", "TTACA"]);
            }
            other => panic!("expected partial, got {other:?}"),
        }
    }

    #[test]
    fn k3_revisits_node_with_unique_successor() {
        let g = graph(3, &[GRAPH2]);
        let st = g.stats();
        assert_eq!(st.node_count, 9);
        assert_eq!(st.edge_count, 9);
        assert_eq!(g.assemble(), AssemblyResult::Complete(seq(GRAPH2)));
        // CA has two predecessors, so the contig view splits there.
        let contigs = g.contigs();
        let total: usize = contigs.iter().map(|c| c.source_path.len() - 1).sum();
        assert_eq!(total, 9);
        for c in &contigs {
            assert_eq!(c.bases.len(), c.source_path.len() + 3 - 2);
        }
    }

    #[test]
    fn branching_is_ambiguous() {
        // AC repeats with successors CG and CA; AC is the only start.
        let g = graph(3, &["ACGTACA"]);
        match g.assemble() {
            AssemblyResult::Ambiguous {
                node: n,
                successors,
            } => {
                assert_eq!(n, node("AC"));
                assert_eq!(successors, vec![node("CA"), node("CG")]);
            }
            other => panic!("expected ambiguous, got {other:?}"),
        }
    }

    #[test]
    fn cycle_without_start_is_partial() {
        // AC->CG, CG->GA, GA->AC
        let g = graph(3, &["ACGAC"]);
        assert!(g.find_start_nodes().is_empty());
        match g.assemble() {
            AssemblyResult::Partial(contigs) => {
                assert_eq!(contigs.len(), 1);
                assert_eq!(contigs[0].bases, seq("ACGAC"));
            }
            other => panic!("expected partial, got {other:?}"),
        }
    }

    #[test]
    fn empty_graph() {
        let g = DeBruijnGraph::new(21).unwrap();
        assert_eq!(g.stats(), GraphStats::default());
        assert_eq!(g.assemble(), AssemblyResult::Partial(vec![]));
    }
}
