//! Nucleotide alphabet, validated sequences, codon tables and 2-bit packed k-mers.
//!
//! Bases are stored as uppercase ASCII (`A`, `C`, `G`, `T`). `U` is accepted on
//! input and folded to `T`, so RNA-style codons such as `AUG` can be given
//! directly and are matched as `ATG`.
//!
//! Packing uses A=00, C=01, G=10, T=11 with the first base in the most
//! significant position, which keeps packed codes ordered like the strings.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

/// Largest k that fits a single `u64` at two bits per base.
pub const MAX_K: usize = 31;

/// Alphabet symbols in code order.
pub const ALPHABET: [u8; 4] = *b"ACGT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("invalid symbol {ch:?} at position {position}")]
    InvalidSymbol { position: usize, ch: char },
    #[error("k = {0} exceeds the packing limit of {MAX_K}")]
    KTooLarge(usize),
    #[error("k = {0} is too small")]
    KTooSmall(usize),
    #[error("invalid codon table: {0}")]
    InvalidCodonTable(String),
}

/// 2-bit code of an uppercase base, `None` for anything outside the alphabet.
#[inline]
pub fn base_code(base: u8) -> Option<u8> {
    match base {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

#[inline]
pub fn code_base(code: u8) -> u8 {
    ALPHABET[(code & 3) as usize]
}

/// A run of validated nucleotides. May be empty.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence(Vec<u8>);

impl Sequence {
    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    /// Uppercases, folds `U` to `T` and validates.
    pub fn normalize(raw: &str) -> Result<Self, SeqError> {
        let mut bases = Vec::with_capacity(raw.len());
        for (position, ch) in raw.chars().enumerate() {
            let b = match ch.to_ascii_uppercase() {
                'A' => b'A',
                'C' => b'C',
                'G' => b'G',
                'T' | 'U' => b'T',
                _ => return Err(SeqError::InvalidSymbol { position, ch }),
            };
            bases.push(b);
        }
        Ok(Sequence(bases))
    }

    /// Wraps bytes that are already uppercase ACGT.
    pub fn from_bases(bases: Vec<u8>) -> Result<Self, SeqError> {
        if let Some(position) = bases.iter().position(|&b| base_code(b).is_none()) {
            return Err(SeqError::InvalidSymbol {
                position,
                ch: bases[position] as char,
            });
        }
        Ok(Sequence(bases))
    }

    pub(crate) fn from_bases_unchecked(bases: Vec<u8>) -> Self {
        debug_assert!(bases.iter().all(|&b| base_code(b).is_some()));
        Sequence(bases)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // ACGT only, always valid UTF-8.
        std::str::from_utf8(&self.0).expect("sequence holds ASCII bases")
    }

    pub fn subseq(&self, range: Range<usize>) -> Sequence {
        Sequence(self.0[range].to_vec())
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({:?})", self.as_str())
    }
}

impl AsRef<[u8]> for Sequence {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl std::str::FromStr for Sequence {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sequence::normalize(s)
    }
}

pub type Codon = [u8; 3];

/// One start codon and three distinct stop codons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodonTable {
    start: Codon,
    stops: [Codon; 3],
}

impl CodonTable {
    pub fn new(start: &str, stops: [&str; 3]) -> Result<Self, SeqError> {
        let codon = |s: &str| -> Result<Codon, SeqError> {
            let seq = Sequence::normalize(s)?;
            <[u8; 3]>::try_from(seq.as_bytes())
                .map_err(|_| SeqError::InvalidCodonTable(format!("codon {s:?} is not 3 bases")))
        };
        let start = codon(start)?;
        let stops = [codon(stops[0])?, codon(stops[1])?, codon(stops[2])?];
        if stops.contains(&start) {
            return Err(SeqError::InvalidCodonTable(
                "start codon is also a stop codon".into(),
            ));
        }
        if stops[0] == stops[1] || stops[0] == stops[2] || stops[1] == stops[2] {
            return Err(SeqError::InvalidCodonTable(
                "stop codons are not distinct".into(),
            ));
        }
        Ok(CodonTable { start, stops })
    }

    /// AUG start; UAA, UAG, UGA stops (stored as ATG / TAA, TAG, TGA).
    pub fn standard() -> Self {
        CodonTable {
            start: *b"ATG",
            stops: [*b"TAA", *b"TAG", *b"TGA"],
        }
    }

    /// Looks a table up by name. Only `standard` is known.
    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "standard" | "std" => Some(Self::standard()),
            _ => None,
        }
    }

    pub fn start(&self) -> &Codon {
        &self.start
    }

    pub fn stops(&self) -> &[Codon; 3] {
        &self.stops
    }

    pub fn is_stop(&self, codon: &[u8]) -> bool {
        self.stops.iter().any(|s| s.as_slice() == codon)
    }

    pub fn is_start(&self, codon: &[u8]) -> bool {
        self.start.as_slice() == codon
    }
}

impl Default for CodonTable {
    fn default() -> Self {
        Self::standard()
    }
}

/// A k-mer packed into a `u64`, first base in the high bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kmer {
    k: u8,
    code: u64,
}

impl Kmer {
    pub fn from_code(k: usize, code: u64) -> Result<Self, SeqError> {
        check_k(k, 1)?;
        Ok(Kmer {
            k: k as u8,
            code: code & mask(k),
        })
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn decode(&self) -> Sequence {
        Sequence(decode_code(self.code, self.k()))
    }
}

impl fmt::Debug for Kmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kmer({})", self.decode())
    }
}

impl fmt::Display for Kmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.decode(), f)
    }
}

#[inline]
pub(crate) fn mask(k: usize) -> u64 {
    if k >= 32 {
        u64::MAX
    } else {
        (1u64 << (2 * k)) - 1
    }
}

fn check_k(k: usize, min: usize) -> Result<(), SeqError> {
    if k > MAX_K {
        Err(SeqError::KTooLarge(k))
    } else if k < min {
        Err(SeqError::KTooSmall(k))
    } else {
        Ok(())
    }
}

pub(crate) fn decode_code(code: u64, k: usize) -> Vec<u8> {
    (0..k)
        .map(|i| code_base(((code >> (2 * (k - 1 - i))) & 3) as u8))
        .collect()
}

/// Packs a whole slice as one k-mer (k = slice length).
pub fn encode_kmer(bases: &[u8]) -> Result<Kmer, SeqError> {
    check_k(bases.len(), 1)?;
    let mut code = 0u64;
    for (position, &b) in bases.iter().enumerate() {
        let c = base_code(b).ok_or(SeqError::InvalidSymbol {
            position,
            ch: b as char,
        })?;
        code = (code << 2) | c as u64;
    }
    Ok(Kmer {
        k: bases.len() as u8,
        code,
    })
}

/// All consecutive k-mers of `seq`, left to right. Empty if `seq` is shorter than k.
pub fn kmers_of(seq: &Sequence, k: usize) -> Result<Vec<Kmer>, SeqError> {
    check_k(k, 2)?;
    Ok(RollingKmers::new(seq.as_bytes(), k)
        .map(|code| Kmer { k: k as u8, code })
        .collect())
}

/// Rolling packed codes of every k-window in a slice of valid bases.
pub(crate) struct RollingKmers<'a> {
    bases: &'a [u8],
    pos: usize,
    code: u64,
    mask: u64,
}

impl<'a> RollingKmers<'a> {
    pub(crate) fn new(bases: &'a [u8], k: usize) -> Self {
        let mut code = 0u64;
        if bases.len() >= k {
            for &b in &bases[..k - 1] {
                code = (code << 2) | base_code(b).expect("validated base") as u64;
            }
        }
        RollingKmers {
            bases,
            pos: k - 1,
            code,
            mask: mask(k),
        }
    }
}

impl Iterator for RollingKmers<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let b = *self.bases.get(self.pos)?;
        self.code = ((self.code << 2) | base_code(b).expect("validated base") as u64) & self.mask;
        self.pos += 1;
        Some(self.code)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bases.len().saturating_sub(self.pos);
        (n, Some(n))
    }
}
