//! Read simulation, the exact superstring baseline and benchmark records.

pub mod bench;
pub mod simulate;
pub mod superstring;

pub use bench::{bench_run, BenchError, BenchRecord, BenchRow, CSV_HEADER};
pub use simulate::{fragment, simulate, SimError, SimSpec, Simulation, READ_LEN_LIMIT};
pub use superstring::{
    build_overlap_graph, drop_contained, max_overlap, superstring_oracle, OracleError, OverlapEdge,
    OverlapGraph, MAX_ORACLE_SEGMENTS,
};
