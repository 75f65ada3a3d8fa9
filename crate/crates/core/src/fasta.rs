//! Record-by-record FASTA reading and writing.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::seqcore::{SeqError, Sequence};

/// Sequence line width used when writing.
pub const LINE_WIDTH: usize = 80;

#[derive(Debug, Error)]
pub enum FastaError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: sequence data before the first '>' header")]
    MissingHeader { line: usize },
    #[error("record {record:?}: invalid symbol {ch:?} at position {position}")]
    InvalidSymbol {
        record: String,
        position: usize,
        ch: char,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub seq: Sequence,
}

/// Yields one record at a time; a record is complete when the next header
/// or end of input is seen.
pub struct FastaReader<R> {
    inner: R,
    line: String,
    line_no: usize,
    header: Option<String>,
    finished: bool,
}

impl<R: BufRead> FastaReader<R> {
    pub fn new(inner: R) -> Self {
        FastaReader {
            inner,
            line: String::new(),
            line_no: 0,
            header: None,
            finished: false,
        }
    }

    fn read_line(&mut self) -> io::Result<bool> {
        self.line.clear();
        let n = self.inner.read_line(&mut self.line)?;
        self.line_no += 1;
        Ok(n > 0)
    }

    fn next_record(&mut self) -> Result<Option<FastaRecord>, FastaError> {
        // Find the first header.
        while self.header.is_none() {
            if !self.read_line()? {
                return Ok(None);
            }
            let l = self.line.trim();
            if l.is_empty() {
                continue;
            }
            match l.strip_prefix('>') {
                Some(h) => self.header = Some(h.trim().to_string()),
                None => return Err(FastaError::MissingHeader { line: self.line_no }),
            }
        }
        let id = self.header.take().expect("header present");
        let mut raw = String::new();
        while self.read_line()? {
            let l = self.line.trim();
            if let Some(h) = l.strip_prefix('>') {
                self.header = Some(h.trim().to_string());
                break;
            }
            raw.push_str(l);
        }
        let seq = Sequence::normalize(&raw).map_err(|e| match e {
            SeqError::InvalidSymbol { position, ch } => FastaError::InvalidSymbol {
                record: id.clone(),
                position,
                ch,
            },
            other => unreachable!("normalize only reports symbols: {other}"),
        })?;
        Ok(Some(FastaRecord { id, seq }))
    }
}

impl<R: BufRead> Iterator for FastaReader<R> {
    type Item = Result<FastaRecord, FastaError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        match self.next_record() {
            Ok(Some(r)) => Some(Ok(r)),
            Ok(None) => {
                self.finished = true;
                None
            }
            Err(e) => {
                self.finished = true;
                Some(Err(e))
            }
        }
    }
}

pub fn write_record(w: &mut impl Write, id: &str, seq: &Sequence) -> io::Result<()> {
    writeln!(w, ">{id}")?;
    for chunk in seq.as_bytes().chunks(LINE_WIDTH) {
        w.write_all(chunk)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
