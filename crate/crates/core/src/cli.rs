//! Command-line front end.
//!
//! Exit codes: 0 success, 2 malformed input, 3 parameter out of range or an
//! unsatisfiable request.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, LineWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::debruijn::AssemblyResult;
use crate::fasta::{write_record, FastaReader, FastaRecord};
use crate::harness::{
    bench_run, simulate, superstring_oracle, BenchError, BenchRow, OracleError, SimError, SimSpec,
    CSV_HEADER, MAX_ORACLE_SEGMENTS,
};
use crate::seqcore::{CodonTable, Sequence, MAX_K};
use crate::stream::{Flow, LocatedGene, StreamConfig, Streamer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_RANGE: i32 = 3;

pub const GENE_TSV_HEADER: &str = "contig_id\tstart\tend\tsequence";

#[derive(Debug, Parser)]
#[command(
    name = "genestream",
    version,
    about = "Streaming de Bruijn assembly and gene finding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream FASTA reads through the assembler and gene scanner.
    Run(RunArgs),
    /// Generate a reference with known genes and its reads.
    Simulate(SimulateArgs),
    /// Exact shortest common superstring of at most 12 reads.
    Oracle(OracleArgs),
    /// Run benchmark rows from a spec CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub reads: PathBuf,
    #[arg(long, default_value_t = crate::debruijn::DEFAULT_K)]
    pub k: usize,
    #[arg(long)]
    pub target_genes: Option<usize>,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub emit_partial: bool,
    #[arg(long, default_value = "standard")]
    pub codon_table: String,
    #[arg(long)]
    pub genes_out: PathBuf,
    #[arg(long)]
    pub events_out: PathBuf,
    /// Also write the final assembly (or its contigs) as FASTA.
    #[arg(long)]
    pub assembly_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub length: usize,
    #[arg(long)]
    pub genes: usize,
    #[arg(long)]
    pub read_min: usize,
    #[arg(long)]
    pub read_max: usize,
    #[arg(long)]
    pub overlap: usize,
    #[arg(long)]
    pub shuffle: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Also write the reference sequence as FASTA.
    #[arg(long)]
    pub reference_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub reads: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn malformed(message: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_MALFORMED,
            message: message.to_string(),
        }
    }

    fn range(message: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_RANGE,
            message: message.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn open_input(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

fn create_output(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

fn write_err(e: io::Error) -> CliError {
    CliError::malformed(format!("write failed: {e}"))
}

/// Parses arguments, runs, prints errors to stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

pub fn execute(command: Command, stdout: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Run(a) => cmd_run(&a).map(|_| ()),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Oracle(a) => cmd_oracle(&a, stdout),
        Command::Bench(a) => cmd_bench(&a),
    }
}

/// Streams the reads file and writes genes, events and optionally the assembly.
pub fn cmd_run(args: &RunArgs) -> Result<crate::stream::RunSummary, CliError> {
    if !(2..=MAX_K).contains(&args.k) {
        return Err(CliError::range(format!(
            "k = {} outside 2..={MAX_K}",
            args.k
        )));
    }
    if args.target_genes == Some(0) {
        return Err(CliError::range("--target-genes must be at least 1"));
    }
    let codon_table = CodonTable::by_name(&args.codon_table).ok_or_else(|| {
        CliError::malformed(format!("unknown codon table {:?}", args.codon_table))
    })?;
    let cfg = StreamConfig {
        k: args.k,
        codon_table,
        target_genes: args.target_genes,
        emit_partial: args.emit_partial,
    };
    let reader = FastaReader::new(open_input(&args.reads)?);
    let mut events = LineWriter::new(create_output(&args.events_out)?);
    let genes_file = create_output(&args.genes_out)?;
    let assembly_file = args
        .assembly_out
        .as_deref()
        .map(create_output)
        .transpose()?;

    let mut streamer = Streamer::new(cfg).map_err(CliError::range)?;
    let mut io_error: Option<io::Error> = None;
    let mut sink = |e: crate::stream::StreamEvent| {
        if io_error.is_none() {
            let line = serde_json::to_string(&e).expect("events serialize");
            if let Err(err) = writeln!(events, "{line}") {
                io_error = Some(err);
            }
        }
    };
    for record in reader {
        let record = record.map_err(CliError::malformed)?;
        if streamer.ingest(&record.seq, &mut sink) == Flow::Stop {
            break;
        }
    }
    let summary = streamer.finish(&mut sink);
    if let Some(e) = io_error {
        return Err(write_err(e));
    }

    let mut genes_out = BufWriter::new(genes_file);
    write_gene_tsv(&mut genes_out, &summary.genes).map_err(write_err)?;
    genes_out.flush().map_err(write_err)?;

    if let Some(f) = assembly_file {
        let mut w = BufWriter::new(f);
        write_assembly(&mut w, &summary).map_err(write_err)?;
        w.flush().map_err(write_err)?;
    }
    Ok(summary)
}

fn write_assembly(w: &mut impl Write, summary: &crate::stream::RunSummary) -> io::Result<()> {
    let contigs = match &summary.assembly {
        AssemblyResult::Complete(s) => return write_record(w, "assembly status=complete", s),
        AssemblyResult::Partial(c) => c.clone(),
        AssemblyResult::Ambiguous { .. } => summary.graph.contigs(),
    };
    let status = summary.assembly.status_name();
    for (i, c) in contigs.iter().enumerate() {
        write_record(w, &format!("contig_{i} status={status}"), &c.bases)?;
    }
    Ok(())
}

pub fn write_gene_tsv(w: &mut impl Write, genes: &[LocatedGene]) -> io::Result<()> {
    writeln!(w, "{GENE_TSV_HEADER}")?;
    for g in genes {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            g.contig, g.gene.start, g.gene.end, g.gene.bases
        )?;
    }
    Ok(())
}

/// Reads a gene TSV written by [`write_gene_tsv`].
pub fn read_gene_tsv(r: impl BufRead) -> Result<Vec<LocatedGene>, String> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if i == 0 {
            if line != GENE_TSV_HEADER {
                return Err(format!("unexpected header {line:?}"));
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [contig, start, end, seq] = cols[..] else {
            return Err(format!("line {}: expected 4 columns", i + 1));
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| format!("line {}: {e}", i + 1))
        };
        let bases = Sequence::normalize(seq).map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push(LocatedGene {
            contig: num(contig)?,
            gene: crate::genescan::Gene {
                start: num(start)?,
                end: num(end)?,
                bases,
            },
        });
    }
    Ok(out)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let spec = SimSpec {
        seed: args.seed,
        length: args.length,
        gene_count: args.genes,
        read_len_min: args.read_min,
        read_len_max: args.read_max,
        min_overlap: args.overlap,
        shuffle: args.shuffle,
    };
    let sim = simulate(&spec).map_err(|e: SimError| CliError::range(e))?;

    let mut out = BufWriter::new(create_output(&args.out)?);
    for (i, r) in sim.reads.iter().enumerate() {
        write_record(&mut out, &format!("read_{}", i + 1), r).map_err(write_err)?;
    }
    out.flush().map_err(write_err)?;

    let genes: Vec<LocatedGene> = sim
        .truth
        .genes
        .iter()
        .map(|g| LocatedGene {
            contig: 0,
            gene: g.clone(),
        })
        .collect();
    let mut truth = BufWriter::new(create_output(&args.truth)?);
    write_gene_tsv(&mut truth, &genes).map_err(write_err)?;
    truth.flush().map_err(write_err)?;

    if let Some(path) = &args.reference_out {
        let mut w = BufWriter::new(create_output(path)?);
        write_record(&mut w, "reference", &sim.reference).map_err(write_err)?;
        w.flush().map_err(write_err)?;
    }
    Ok(())
}

pub fn cmd_oracle(args: &OracleArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let mut reads = Vec::new();
    for record in FastaReader::new(open_input(&args.reads)?) {
        let FastaRecord { seq, .. } = record.map_err(CliError::malformed)?;
        reads.push(seq);
        if reads.len() > MAX_ORACLE_SEGMENTS {
            return Err(CliError::range(OracleError::TooManySegments(reads.len())));
        }
    }
    let s = superstring_oracle(&reads).map_err(CliError::range)?;
    writeln!(stdout, "{s}").map_err(write_err)?;
    writeln!(stdout, "length {}", s.len()).map_err(write_err)?;
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open_input(&args.spec)?);
    let rows: Vec<BenchRow> = rdr
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::malformed(format!("{}: {e}", args.spec.display())))?;

    let mut out = BufWriter::new(create_output(&args.out)?);
    writeln!(out, "{CSV_HEADER}").map_err(write_err)?;
    for row in &rows {
        let rec = bench_run(&row.sim_spec(), &row.stream_config()).map_err(|e| match e {
            BenchError::Sim(e) => CliError::range(e),
            BenchError::Stream(e) => CliError::range(e),
        })?;
        writeln!(out, "{}", rec.csv_row()).map_err(write_err)?;
    }
    out.flush().map_err(write_err)?;
    Ok(())
}
