//! Reading input strings from files.

use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::types::{Alphabet, SymbolString, CANONICAL_SYMBOLS};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum AlphabetMode {
    /// Sorted union of the bytes seen in both inputs.
    #[default]
    Auto,
    /// Exactly these bytes, in this id order.
    Explicit(Vec<u8>),
}

impl FromStr for AlphabetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(AlphabetMode::Auto)
        } else {
            Ok(AlphabetMode::Explicit(s.as_bytes().to_vec()))
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct IngestOptions {
    pub alphabet: AlphabetMode,
    /// Keep ASCII whitespace and newlines as symbols.
    pub keep_whitespace: bool,
}

fn clean(bytes: Vec<u8>, keep_whitespace: bool) -> Vec<u8> {
    if keep_whitespace {
        bytes
    } else {
        bytes
            .into_iter()
            .filter(|b| !b.is_ascii_whitespace())
            .collect()
    }
}

/// Alphabet of the observed bytes in ascending order. Fewer than two
/// distinct bytes are padded from `0-9a-zA-Z`, then from byte 0 upward.
pub fn auto_alphabet(a: &[u8], b: &[u8]) -> Result<Alphabet> {
    let mut seen = [false; 256];
    for &c in a.iter().chain(b) {
        seen[c as usize] = true;
    }
    let distinct = seen.iter().filter(|&&x| x).count();
    if distinct > 255 {
        return Err(Error::AlphabetTooLarge { distinct });
    }
    let mut pad = CANONICAL_SYMBOLS.iter().copied().chain(0..=255u8);
    let mut count = distinct;
    while count < 2 {
        let c = pad.find(|&c| !seen[c as usize]).expect("256 byte values");
        seen[c as usize] = true;
        count += 1;
    }
    Alphabet::new(
        (0..=255u8)
            .filter(|&c| seen[c as usize])
            .collect::<Vec<_>>(),
    )
}

/// Map two byte strings onto a shared alphabet.
pub fn ingest_bytes(
    a: Vec<u8>,
    b: Vec<u8>,
    options: &IngestOptions,
) -> Result<(SymbolString, SymbolString)> {
    let a = clean(a, options.keep_whitespace);
    let b = clean(b, options.keep_whitespace);
    let alphabet = Arc::new(match &options.alphabet {
        AlphabetMode::Auto => auto_alphabet(&a, &b)?,
        AlphabetMode::Explicit(symbols) => Alphabet::new(symbols.clone())?,
    });
    Ok((
        SymbolString::parse(&alphabet, a)?,
        SymbolString::parse(&alphabet, b)?,
    ))
}

/// Read and map two files.
pub fn ingest(
    path_a: &Path,
    path_b: &Path,
    options: &IngestOptions,
) -> Result<(SymbolString, SymbolString)> {
    ingest_bytes(fs::read(path_a)?, fs::read(path_b)?, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::lcs_exact;
    use crate::multi::{lcs_approx, SolveConfig};
    use crate::primitives::BandedExactEd;

    #[test]
    fn dna_auto_alphabet() {
        let (a, b) = ingest_bytes(
            b"ACGTTGCA\n".to_vec(),
            b"GATTACA".to_vec(),
            &IngestOptions::default(),
        )
        .unwrap();
        assert_eq!(a.sigma(), 4);
        assert_eq!(a.alphabet().symbols(), b"ACGT");
        assert_eq!(a.len(), 8);
        assert_eq!(b.to_bytes(), b"GATTACA");
    }

    #[test]
    fn empty_inputs_give_zero() {
        let (a, b) = ingest_bytes(Vec::new(), b"0101".to_vec(), &IngestOptions::default()).unwrap();
        assert!(a.is_empty());
        assert_eq!(lcs_exact(&a, &b).unwrap().0, 0);
        assert_eq!(
            lcs_approx(&a, &b, &SolveConfig::default(), &BandedExactEd)
                .unwrap()
                .len(),
            0
        );
        let (a, _) = ingest_bytes(Vec::new(), Vec::new(), &IngestOptions::default()).unwrap();
        assert_eq!(a.alphabet().symbols(), b"01");
    }

    #[test]
    fn padding_single_symbol() {
        let (a, _) =
            ingest_bytes(b"000".to_vec(), b"0".to_vec(), &IngestOptions::default()).unwrap();
        assert_eq!(a.alphabet().symbols(), b"01");
        let (a, _) = ingest_bytes(b"zz".to_vec(), b"".to_vec(), &IngestOptions::default()).unwrap();
        assert_eq!(a.alphabet().symbols(), b"0z");
    }

    #[test]
    fn explicit_alphabet() {
        let opts = IngestOptions {
            alphabet: "01".parse().unwrap(),
            keep_whitespace: false,
        };
        assert!(matches!(
            ingest_bytes(b"012".to_vec(), b"0".to_vec(), &opts),
            Err(Error::UnknownSymbol { byte: b'2' })
        ));
        let (a, _) = ingest_bytes(b"10 1".to_vec(), b"0".to_vec(), &opts).unwrap();
        assert_eq!(a.ids(), &[1, 0, 1]);
    }

    #[test]
    fn whitespace_handling() {
        let keep = IngestOptions {
            alphabet: AlphabetMode::Auto,
            keep_whitespace: true,
        };
        let (a, _) = ingest_bytes(b"a b\n".to_vec(), b"ab".to_vec(), &keep).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.sigma(), 4);
    }

    #[test]
    fn too_many_bytes() {
        let all: Vec<u8> = (0..=255u8).collect();
        let keep = IngestOptions {
            alphabet: AlphabetMode::Auto,
            keep_whitespace: true,
        };
        assert!(matches!(
            ingest_bytes(all, Vec::new(), &keep),
            Err(Error::AlphabetTooLarge { distinct: 256 })
        ));
    }

    #[test]
    fn reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let (pa, pb) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
        fs::write(&pa, "ACGT").unwrap();
        fs::write(&pb, "TTGA\n").unwrap();
        let (a, b) = ingest(&pa, &pb, &IngestOptions::default()).unwrap();
        assert_eq!((a.len(), b.len()), (4, 4));
        assert!(ingest(&dir.path().join("missing"), &pb, &IngestOptions::default()).is_err());
    }
}
