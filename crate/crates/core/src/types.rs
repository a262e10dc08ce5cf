//! Alphabets, symbol strings, histograms, witnesses and restrictions.
//!
//! Strings are stored as dense symbol ids (`u8`) together with a shared
//! [`Alphabet`] that maps ids back to bytes. All types are immutable once
//! built, so they can be shared freely between threads.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Printable symbols used for canonical alphabets (generated instances).
pub const CANONICAL_SYMBOLS: &[u8] =
    b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// An ordered set of distinct bytes. The i-th byte has symbol id `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
    lookup: Box<[Option<u8>; 256]>,
}

impl Alphabet {
    pub fn new(symbols: impl Into<Vec<u8>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.len() > 255 {
            return Err(Error::AlphabetTooLarge {
                distinct: symbols.len(),
            });
        }
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        let mut lookup = Box::new([None; 256]);
        for (id, &byte) in symbols.iter().enumerate() {
            if lookup[byte as usize].is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate symbol {:?}",
                    byte as char
                )));
            }
            lookup[byte as usize] = Some(id as u8);
        }
        Ok(Alphabet { symbols, lookup })
    }

    /// The alphabet `{'0', '1'}`.
    pub fn binary() -> Self {
        Self::canonical(2).expect("binary alphabet is valid")
    }

    /// The first `s` symbols of `0-9a-zA-Z`.
    pub fn canonical(s: usize) -> Result<Self> {
        if s > CANONICAL_SYMBOLS.len() {
            return Err(Error::InvalidAlphabet(format!(
                "canonical alphabets hold at most {} symbols, asked for {s}",
                CANONICAL_SYMBOLS.len()
            )));
        }
        Self::new(&CANONICAL_SYMBOLS[..s])
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn id_of(&self, byte: u8) -> Option<u8> {
        self.lookup[byte as usize]
    }

    pub fn byte_of(&self, id: u8) -> u8 {
        self.symbols[id as usize]
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", String::from_utf8_lossy(&self.symbols))
    }
}

/// A validated sequence of symbol ids over an [`Alphabet`].
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolString {
    ids: Vec<u8>,
    alphabet: Arc<Alphabet>,
}

impl SymbolString {
    pub fn new(alphabet: Arc<Alphabet>, ids: Vec<u8>) -> Result<Self> {
        let size = alphabet.size();
        if let Some(&bad) = ids.iter().find(|&&id| id as usize >= size) {
            return Err(Error::InvalidSymbol {
                id: bad as usize,
                size,
            });
        }
        Ok(SymbolString { ids, alphabet })
    }

    /// Map raw bytes through `alphabet`.
    pub fn parse(alphabet: &Arc<Alphabet>, bytes: impl AsRef<[u8]>) -> Result<Self> {
        let ids = bytes
            .as_ref()
            .iter()
            .map(|&b| alphabet.id_of(b).ok_or(Error::UnknownSymbol { byte: b }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymbolString {
            ids,
            alphabet: Arc::clone(alphabet),
        })
    }

    /// Shorthand for a string over `{'0','1'}`.
    pub fn binary(bytes: impl AsRef<[u8]>) -> Result<Self> {
        Self::parse(&Arc::new(Alphabet::binary()), bytes)
    }

    pub(crate) fn from_trusted(alphabet: Arc<Alphabet>, ids: Vec<u8>) -> Self {
        debug_assert!(ids.iter().all(|&id| (id as usize) < alphabet.size()));
        SymbolString { ids, alphabet }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u8] {
        &self.ids
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Alphabet size `s`.
    pub fn sigma(&self) -> usize {
        self.alphabet.size()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.ids
            .iter()
            .map(|&id| self.alphabet.byte_of(id))
            .collect()
    }

    /// Same symbols over the same alphabet.
    pub fn with_ids(&self, ids: Vec<u8>) -> Self {
        Self::from_trusted(Arc::clone(&self.alphabet), ids)
    }

    pub fn histogram(&self) -> Histogram {
        histogram(self)
    }
}

impl fmt::Debug for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", String::from_utf8_lossy(&self.to_bytes()))
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.to_bytes()))
    }
}

pub(crate) fn same_alphabet(a: &SymbolString, b: &SymbolString) -> Result<()> {
    if Arc::ptr_eq(&a.alphabet, &b.alphabet) || a.alphabet == b.alphabet {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Per-symbol occurrence counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<usize>,
}

impl Histogram {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, id: u8) -> usize {
        self.counts[id as usize]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn histogram(a: &SymbolString) -> Histogram {
    Histogram {
        counts: count_ids(a.ids(), a.sigma()),
    }
}

pub(crate) fn count_ids(ids: &[u8], s: usize) -> Vec<usize> {
    let mut counts = vec![0usize; s];
    for &id in ids {
        counts[id as usize] += 1;
    }
    counts
}

/// `|s * count - n| <= rho * n * s` for every count: the string is within
/// `rho * n` of the uniform frequency `n / s` on every symbol.
pub(crate) fn counts_balanced(counts: &[usize], n: usize, rho: f64) -> bool {
    let s = counts.len();
    let slack = rho * n as f64 * s as f64;
    counts
        .iter()
        .all(|&c| ((s * c) as f64 - n as f64).abs() <= slack)
}

/// Every symbol frequency lies within `rho * n` of `n / s`.
pub fn is_balanced(a: &SymbolString, rho: f64) -> bool {
    counts_balanced(histogram(a).counts(), a.len(), rho)
}

/// An index-aligned common subsequence: pairs `(i, j)` with `a[i] == b[j]`,
/// strictly increasing in both coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pairs: Vec<(usize, usize)>,
}

impl Witness {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Witness { pairs }
    }

    pub fn empty() -> Self {
        Witness::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<(usize, usize)> {
        self.pairs
    }

    /// The common subsequence spelled out as symbol ids of `a`.
    pub fn symbols(&self, a: &SymbolString) -> Vec<u8> {
        self.pairs.iter().map(|&(i, _)| a.ids()[i]).collect()
    }
}

/// Check every witness invariant against `a` and `b`. Never fails; returns
/// `false` instead.
pub fn validate_witness(a: &SymbolString, b: &SymbolString, w: &Witness) -> bool {
    if w.pairs.len() > a.len().min(b.len()) {
        return false;
    }
    let mut last: Option<(usize, usize)> = None;
    for &(i, j) in &w.pairs {
        if i >= a.len() || j >= b.len() {
            return false;
        }
        // compare bytes so strings over distinct alphabets are handled too
        if a.alphabet.byte_of(a.ids[i]) != b.alphabet.byte_of(b.ids[j]) {
            return false;
        }
        if let Some((pi, pj)) = last {
            if i <= pi || j <= pj {
                return false;
            }
        }
        last = Some((i, j));
    }
    true
}

/// The maximal subsequence of a string over a subalphabet, plus the position
/// of each kept symbol in the original string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub restricted: SymbolString,
    pub index_map: Vec<usize>,
    /// Original symbol id of each restricted id.
    pub symbols: Vec<u8>,
}

/// Restrict `a` to the symbol ids in `sub` (at least two, all in range).
///
/// The restricted alphabet keeps the subalphabet's bytes in ascending id
/// order, so restricted id `k` is the k-th smallest id of `sub`.
pub fn restrict(a: &SymbolString, sub: &[u8]) -> Result<Restriction> {
    let mut symbols = sub.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.len() < 2 {
        return Err(Error::InvalidSubalphabet(format!(
            "need at least 2 distinct symbols, got {}",
            symbols.len()
        )));
    }
    if let Some(&bad) = symbols.iter().find(|&&id| id as usize >= a.sigma()) {
        return Err(Error::InvalidSubalphabet(format!(
            "symbol id {bad} outside alphabet of size {}",
            a.sigma()
        )));
    }
    let mut remap = [u8::MAX; 256];
    for (k, &id) in symbols.iter().enumerate() {
        remap[id as usize] = k as u8;
    }
    let bytes: Vec<u8> = symbols.iter().map(|&id| a.alphabet.byte_of(id)).collect();
    let alphabet = Arc::new(Alphabet::new(bytes)?);
    let mut ids = Vec::new();
    let mut index_map = Vec::new();
    for (pos, &id) in a.ids.iter().enumerate() {
        let k = remap[id as usize];
        if k != u8::MAX {
            ids.push(k);
            index_map.push(pos);
        }
    }
    Ok(Restriction {
        restricted: SymbolString::from_trusted(alphabet, ids),
        index_map,
        symbols,
    })
}

/// Map a witness on two restrictions back to the original strings.
pub fn lift_witness(r_a: &Restriction, r_b: &Restriction, w: &Witness) -> Result<Witness> {
    if !validate_witness(&r_a.restricted, &r_b.restricted, w) {
        return Err(Error::ContractViolation(
            "witness does not validate against the restricted strings".into(),
        ));
    }
    Ok(Witness::new(
        w.pairs
            .iter()
            .map(|&(i, j)| (r_a.index_map[i], r_b.index_map[j]))
            .collect(),
    ))
}
