//! Exact LCS and insert/delete edit distance.
//!
//! * [`lcs_exact`] — quadratic DP with a linear-space (Hirschberg) witness.
//! * [`lcs_length`] — bit-parallel LCS length, used by the harness for ratios.
//! * [`lcs_bruteforce`] — subsequence enumeration, an oracle for the oracle.
//! * [`ed_exact`] — standalone indel DP, independent of the LCS code.
//! * [`ed_banded`] — exact indel distance in `O((n+m)·d)` by band doubling,
//!   with a banded divide-and-conquer alignment for witness recovery.

use crate::error::{Error, Result};
use crate::types::{SymbolString, Witness};

/// Default cap on DP cells for the quadratic oracles.
pub const DEFAULT_MAX_CELLS: u64 = 400_000_000;

/// Longest shorter-string length accepted by [`lcs_bruteforce`].
pub const BRUTEFORCE_MAX_LEN: usize = 20;

/// Subproblems at most this many cells are aligned with a full table.
const SMALL_TABLE: usize = 1 << 12;

const INF: u32 = u32::MAX / 2;

fn check_cells(n: usize, m: usize, cap: u64) -> Result<()> {
    let needed = n as u64 * m as u64;
    if needed > cap {
        return Err(Error::SizeLimit { needed, cap });
    }
    Ok(())
}

/// Exact LCS with a witness, under the default cell cap.
pub fn lcs_exact(a: &SymbolString, b: &SymbolString) -> Result<(usize, Witness)> {
    lcs_exact_capped(a, b, DEFAULT_MAX_CELLS)
}

pub fn lcs_exact_capped(
    a: &SymbolString,
    b: &SymbolString,
    max_cells: u64,
) -> Result<(usize, Witness)> {
    check_cells(a.len(), b.len(), max_cells)?;
    let mut pairs = Vec::new();
    hirschberg_lcs(a.ids(), b.ids(), 0, 0, &mut pairs);
    Ok((pairs.len(), Witness::new(pairs)))
}

/// LCS length only (bit-parallel, `O(n·m/64)`), under a cell cap.
pub fn lcs_length(a: &SymbolString, b: &SymbolString, max_cells: u64) -> Result<usize> {
    check_cells(a.len(), b.len(), max_cells)?;
    Ok(lcs_length_bitparallel(a.ids(), b.ids(), a.sigma()))
}

/// Exact LCS length by enumerating every subsequence of the shorter string.
pub fn lcs_bruteforce(a: &SymbolString, b: &SymbolString) -> Result<usize> {
    let (short, long) = if a.len() <= b.len() {
        (a.ids(), b.ids())
    } else {
        (b.ids(), a.ids())
    };
    if short.len() > BRUTEFORCE_MAX_LEN {
        return Err(Error::SizeLimit {
            needed: short.len() as u64,
            cap: BRUTEFORCE_MAX_LEN as u64,
        });
    }
    // sizes from largest down; the first subsequence found is optimal
    let k = short.len();
    for size in (1..=k).rev() {
        let mut mask: u32 = (1 << size) - 1;
        while mask < (1 << k) {
            if is_subsequence(short, mask, long) {
                return Ok(size);
            }
            // next mask with the same popcount
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            mask = ripple | (((mask ^ ripple) >> 2) / low);
        }
    }
    Ok(0)
}

fn is_subsequence(short: &[u8], mask: u32, long: &[u8]) -> bool {
    let mut it = long.iter();
    short
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .all(|(_, c)| it.any(|x| x == c))
}

/// Exact insert/delete distance under the default cell cap.
pub fn ed_exact(a: &SymbolString, b: &SymbolString) -> Result<usize> {
    ed_exact_capped(a, b, DEFAULT_MAX_CELLS)
}

pub fn ed_exact_capped(a: &SymbolString, b: &SymbolString, max_cells: u64) -> Result<usize> {
    check_cells(a.len(), b.len(), max_cells)?;
    let (a, b) = (a.ids(), b.ids());
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    let mut cur = vec![0u32; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for (j, &cb) in b.iter().enumerate() {
            // deletion or insertion
            let mut v = prev[j + 1].min(cur[j]) + 1;
            if ca == cb {
                v = v.min(prev[j]);
            }
            cur[j + 1] = v;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[b.len()] as usize)
}

/// Parameters of the band-doubling search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandConfig {
    pub initial_band: usize,
    /// Cap on DP cells visited over all doubling rounds.
    pub max_cells: u64,
}

impl Default for BandConfig {
    fn default() -> Self {
        BandConfig {
            initial_band: 1,
            max_cells: u64::MAX,
        }
    }
}

/// Outcome of [`ed_banded_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandedDistance {
    pub distance: usize,
    /// Band half-width at which the result was certified.
    pub band: usize,
    pub cells: u64,
}

/// Exact indel distance by band doubling. Never fails.
pub fn ed_banded(a: &SymbolString, b: &SymbolString) -> usize {
    banded_distance_ids(a.ids(), b.ids(), &BandConfig::default())
        .expect("unbounded band search cannot hit a cell cap")
        .distance
}

pub fn ed_banded_with(
    a: &SymbolString,
    b: &SymbolString,
    config: &BandConfig,
) -> Result<BandedDistance> {
    if config.initial_band == 0 {
        return Err(Error::Precondition(
            "initial_band must be at least 1".into(),
        ));
    }
    if config.max_cells < (a.len() + b.len()) as u64 {
        return Err(Error::Precondition(format!(
            "max_cells {} is below n + m = {}",
            config.max_cells,
            a.len() + b.len()
        )));
    }
    banded_distance_ids(a.ids(), b.ids(), config)
}

/// Exact indel distance together with an optimal alignment (as a witness).
pub fn ed_banded_alignment(a: &SymbolString, b: &SymbolString) -> (usize, Witness) {
    let pairs = indel_alignment(a.ids(), b.ids());
    (a.len() + b.len() - 2 * pairs.len(), Witness::new(pairs))
}

pub(crate) fn banded_distance_ids(
    a: &[u8],
    b: &[u8],
    config: &BandConfig,
) -> Result<BandedDistance> {
    let mut band = config.initial_band.max(1);
    let full = a.len().max(b.len());
    let mut cells = 0u64;
    loop {
        let (dist, visited) = banded_pass(a, b, band);
        cells += visited;
        if cells > config.max_cells {
            return Err(Error::SizeLimit {
                needed: cells,
                cap: config.max_cells,
            });
        }
        // a path of cost <= band never leaves the band, so the banded
        // optimum is exact once it fits inside it
        if dist as usize <= band || band >= full {
            return Ok(BandedDistance {
                distance: dist as usize,
                band,
                cells,
            });
        }
        band *= 2;
    }
}

/// Indel DP restricted to `|i - j| <= band`; returns `(D[n][m], cells)`.
fn banded_pass(a: &[u8], b: &[u8], band: usize) -> (u32, u64) {
    let row = banded_last_row(a, b, band);
    let cells = banded_cells(a.len(), b.len(), band);
    (row[b.len()], cells)
}

fn banded_cells(n: usize, m: usize, band: usize) -> u64 {
    (0..=n)
        .map(|i| {
            let lo = i.saturating_sub(band);
            let hi = (i + band).min(m);
            if lo > hi {
                0
            } else {
                (hi - lo + 1) as u64
            }
        })
        .sum()
}

/// Last row `D[|a|][j]` (for every `j` in `0..=|b|`) of the indel DP
/// restricted to cells with `|i - j| <= band`; cells outside are `INF`.
fn banded_last_row(a: &[u8], b: &[u8], band: usize) -> Vec<u32> {
    let n = a.len();
    let m = b.len();
    let width = 2 * band + 1;
    // band index k holds column j = i + k - band
    let mut prev = vec![INF; width + 1];
    let mut cur = vec![INF; width + 1];
    for k in 0..width {
        let j = k as isize - band as isize;
        if j >= 0 && j as usize <= m {
            prev[k] = j as u32;
        }
    }
    // every read below lands on a cell written for the previous row, on the
    // never-written sentinel at index `width`, or is guarded by `k > 0`
    for i in 1..=n {
        let lo = i.saturating_sub(band);
        let hi = (i + band).min(m);
        let ca = a[i - 1];
        for j in lo..=hi {
            let k = j + band - i;
            let v = if j == 0 {
                i as u32
            } else {
                // prev[k + 1] is D[i-1][j], cur[k - 1] is D[i][j-1]
                let up = prev[k + 1];
                let left = if k > 0 { cur[k - 1] } else { INF };
                let mut v = up.min(left) + 1;
                if ca == b[j - 1] {
                    v = v.min(prev[k]);
                }
                v
            };
            cur[k] = v.min(INF);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let mut row = vec![INF; m + 1];
    let lo = n.saturating_sub(band);
    let hi = (n + band).min(m);
    for j in lo..=hi {
        row[j] = prev[j + band - n];
    }
    row
}

/// Optimal indel alignment in linear space, `O((n+m)·d)` time.
pub(crate) fn indel_alignment(a: &[u8], b: &[u8]) -> Vec<(usize, usize)> {
    let d = banded_distance_ids(a, b, &BandConfig::default())
        .expect("unbounded band search cannot hit a cell cap")
        .distance;
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    banded_hirschberg(a, b, d, 0, 0, &mut out);
    out
}

/// Divide and conquer on the middle row of `a`. `d` is the exact distance of
/// the subproblem, so an optimal path stays within `d` diagonals of both the
/// start and the end corner.
fn banded_hirschberg(
    a: &[u8],
    b: &[u8],
    d: usize,
    a_off: usize,
    b_off: usize,
    out: &mut Vec<(usize, usize)>,
) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if d == 0 {
        debug_assert_eq!(a, b);
        out.extend((0..a.len()).map(|k| (a_off + k, b_off + k)));
        return;
    }
    if a.len() == 1 || a.len() * b.len() <= SMALL_TABLE {
        table_traceback(a, b, a_off, b_off, out);
        return;
    }
    let mid = a.len() / 2;
    let m = b.len();
    let fwd = banded_last_row(&a[..mid], b, d);
    let ra: Vec<u8> = a[mid..].iter().rev().copied().collect();
    let rb: Vec<u8> = b.iter().rev().copied().collect();
    let bwd = banded_last_row(&ra, &rb, d);
    let (split, _) = (0..=m)
        .map(|j| (j, fwd[j].saturating_add(bwd[m - j])))
        .min_by_key(|&(_, v)| v)
        .expect("non-empty range");
    let (d1, d2) = (fwd[split] as usize, bwd[m - split] as usize);
    debug_assert_eq!(d1 + d2, d);
    banded_hirschberg(&a[..mid], &b[..split], d1, a_off, b_off, out);
    banded_hirschberg(&a[mid..], &b[split..], d2, a_off + mid, b_off + split, out);
}

/// Full LCS table with traceback; for small subproblems only.
fn table_traceback(a: &[u8], b: &[u8], a_off: usize, b_off: usize, out: &mut Vec<(usize, usize)>) {
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    let mut t = vec![0u32; (n + 1) * w];
    for i in 1..=n {
        for j in 1..=m {
            t[i * w + j] = if a[i - 1] == b[j - 1] {
                t[(i - 1) * w + j - 1] + 1
            } else {
                t[(i - 1) * w + j].max(t[i * w + j - 1])
            };
        }
    }
    let start = out.len();
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        if a[i - 1] == b[j - 1] && t[i * w + j] == t[(i - 1) * w + j - 1] + 1 {
            out.push((a_off + i - 1, b_off + j - 1));
            i -= 1;
            j -= 1;
        } else if t[(i - 1) * w + j] >= t[i * w + j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    out[start..].reverse();
}

/// LCS lengths `L[|a|][j]` for every `j`.
fn lcs_last_row(a: &[u8], b: &[u8]) -> Vec<u32> {
    if a.len().min(b.len()) < usize::from(u16::MAX) {
        lcs_row::<u16>(a, b).into_iter().map(u32::from).collect()
    } else {
        lcs_row::<u32>(a, b)
    }
}

// single rolling row, branch free; narrow cells keep it cache resident
fn lcs_row<T>(a: &[u8], b: &[u8]) -> Vec<T>
where
    T: Copy + Ord + Default + std::ops::Add<Output = T> + From<bool>,
{
    let mut row = vec![T::default(); b.len() + 1];
    for &ca in a {
        let mut diag = T::default();
        let mut left = T::default();
        for (cell, &cb) in row[1..].iter_mut().zip(b) {
            let up = *cell;
            // on a match diag + 1 is already the maximum
            left = (diag + T::from(ca == cb)).max(up).max(left);
            *cell = left;
            diag = up;
        }
    }
    row
}

fn hirschberg_lcs(a: &[u8], b: &[u8], a_off: usize, b_off: usize, out: &mut Vec<(usize, usize)>) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if a.len() == 1 {
        if let Some(j) = b.iter().position(|&c| c == a[0]) {
            out.push((a_off, b_off + j));
        }
        return;
    }
    if a.len() * b.len() <= SMALL_TABLE {
        table_traceback(a, b, a_off, b_off, out);
        return;
    }
    let mid = a.len() / 2;
    let m = b.len();
    let fwd = lcs_last_row(&a[..mid], b);
    let ra: Vec<u8> = a[mid..].iter().rev().copied().collect();
    let rb: Vec<u8> = b.iter().rev().copied().collect();
    let bwd = lcs_last_row(&ra, &rb);
    let split = (0..=m)
        .max_by_key(|&j| (fwd[j] + bwd[m - j], std::cmp::Reverse(j)))
        .expect("non-empty range");
    hirschberg_lcs(&a[..mid], &b[..split], a_off, b_off, out);
    hirschberg_lcs(&a[mid..], &b[split..], a_off + mid, b_off + split, out);
}

/// Bit-parallel LCS length over `a`'s positions (Allison–Dix / Hyyrö).
fn lcs_length_bitparallel(a: &[u8], b: &[u8], s: usize) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let words = a.len().div_ceil(64);
    let mut masks = vec![0u64; s * words];
    for (i, &c) in a.iter().enumerate() {
        masks[c as usize * words + i / 64] |= 1 << (i % 64);
    }
    let mut v = vec![u64::MAX; words];
    for &c in b {
        let mask = &masks[c as usize * words..(c as usize + 1) * words];
        let mut carry = 0u64;
        for (vw, &mw) in v.iter_mut().zip(mask) {
            let u = *vw & mw;
            let (sum, c1) = vw.overflowing_add(u);
            let (sum, c2) = sum.overflowing_add(carry);
            carry = (c1 | c2) as u64;
            *vw = sum | (*vw & !mw);
        }
    }
    let tail = a.len() % 64;
    let zeros: usize = v
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let w = if k + 1 == words && tail != 0 {
                w | (u64::MAX << tail)
            } else {
                w
            };
            w.count_zeros() as usize
        })
        .sum();
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{validate_witness, Alphabet};
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn bin(s: &str) -> SymbolString {
        SymbolString::binary(s).unwrap()
    }

    fn random_string(rng: &mut impl Rng, al: &Arc<Alphabet>, len: usize) -> SymbolString {
        let s = al.size() as u8;
        SymbolString::new(
            al.clone(),
            (0..len).map(|_| rng.random_range(0..s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn lcs_examples() {
        let (len, w) = lcs_exact(&bin("0110"), &bin("0110")).unwrap();
        assert_eq!(len, 4);
        assert_eq!(w.pairs(), &[(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(lcs_exact(&bin("01"), &bin("10")).unwrap().0, 1);
        assert_eq!(lcs_exact(&bin("0011"), &bin("0101")).unwrap().0, 3);
        assert_eq!(lcs_exact(&bin(""), &bin("0101")).unwrap().0, 0);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(lcs_bruteforce(&bin(""), &bin("0101")).unwrap(), 0);
        assert_eq!(lcs_bruteforce(&bin("000"), &bin("000")).unwrap(), 3);
        assert_eq!(lcs_bruteforce(&bin("0011"), &bin("0101")).unwrap(), 3);
        let long = bin(&"01".repeat(11));
        assert!(matches!(
            lcs_bruteforce(&long, &long),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn ed_examples() {
        assert_eq!(ed_exact(&bin("0110"), &bin("0110")).unwrap(), 0);
        assert_eq!(ed_exact(&bin("01"), &bin("10")).unwrap(), 2);
        assert_eq!(ed_exact(&bin("0011"), &bin("0101")).unwrap(), 2);
        assert_eq!(ed_banded(&bin("0011"), &bin("0101")), 2);
        assert_eq!(ed_banded(&bin("00000000"), &bin("11111111")), 16);
        assert_eq!(ed_banded(&bin(""), &bin("")), 0);
        assert_eq!(ed_banded(&bin(""), &bin("0101")), 4);
    }

    #[test]
    fn cell_cap_is_enforced() {
        let a = bin("0101");
        match lcs_exact_capped(&a, &a, 15) {
            Err(Error::SizeLimit {
                needed: 16,
                cap: 15,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(ed_exact_capped(&a, &a, 15).is_err());
        assert!(lcs_length(&a, &a, 15).is_err());
        let cfg = BandConfig {
            initial_band: 1,
            max_cells: 7,
        };
        assert!(ed_banded_with(&a, &a, &cfg).is_err());
    }

    #[test]
    fn identical_long_strings_are_linear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let al = Arc::new(Alphabet::binary());
        let a = random_string(&mut rng, &al, 100_000);
        let out = ed_banded_with(&a, &a, &BandConfig::default()).unwrap();
        assert_eq!(out.distance, 0);
        assert_eq!(out.band, 1);
        assert!(out.cells <= 3 * 100_001);
        let (d, w) = ed_banded_alignment(&a, &a);
        assert_eq!(d, 0);
        assert_eq!(w.len(), a.len());
    }

    #[test]
    fn band_work_tracks_distance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let al = Arc::new(Alphabet::canonical(4).unwrap());
        let a = random_string(&mut rng, &al, 20_000);
        let mut ids = a.ids().to_vec();
        for k in 0..10 {
            let p = 1000 + k * 1500;
            ids[p] = (ids[p] + 1) % 4;
        }
        let b = a.with_ids(ids);
        let out = ed_banded_with(&a, &b, &BandConfig::default()).unwrap();
        assert_eq!(out.distance, 20);
        // rounds at bands 1, 2, ..., 32: sum of (2b + 1) is 132 cells per row
        assert_eq!(out.band, 32);
        assert!(out.cells <= 20_001 * 132);
        let (d, w) = ed_banded_alignment(&a, &b);
        assert_eq!(d, 20);
        assert!(validate_witness(&a, &b, &w));
    }

    #[test]
    fn oracles_agree_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for s in [2usize, 3, 4, 7] {
            let al = Arc::new(Alphabet::canonical(s).unwrap());
            for _ in 0..300 {
                let n = rng.random_range(0..90);
                let m = rng.random_range(0..90);
                let a = random_string(&mut rng, &al, n);
                let b = random_string(&mut rng, &al, m);
                let (l, w) = lcs_exact(&a, &b).unwrap();
                assert!(validate_witness(&a, &b, &w));
                assert_eq!(w.len(), l);
                assert_eq!(lcs_length(&a, &b, DEFAULT_MAX_CELLS).unwrap(), l);
                let e = ed_exact(&a, &b).unwrap();
                assert_eq!(2 * l + e, n + m);
                assert_eq!(ed_banded(&a, &b), e);
                let (d, aw) = ed_banded_alignment(&a, &b);
                assert_eq!(d, e);
                assert!(validate_witness(&a, &b, &aw));
            }
        }
    }

    #[test]
    fn hirschberg_on_larger_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let al = Arc::new(Alphabet::canonical(3).unwrap());
        for (n, m) in [(700, 650), (1, 500), (500, 1), (300, 1200)] {
            let a = random_string(&mut rng, &al, n);
            let b = random_string(&mut rng, &al, m);
            let (l, w) = lcs_exact(&a, &b).unwrap();
            assert!(validate_witness(&a, &b, &w));
            assert_eq!(l, lcs_length(&a, &b, DEFAULT_MAX_CELLS).unwrap());
            assert_eq!(2 * l + ed_exact(&a, &b).unwrap(), n + m);
            let (d, aw) = ed_banded_alignment(&a, &b);
            assert_eq!(d, n + m - 2 * l);
            assert!(validate_witness(&a, &b, &aw));
        }
    }

    #[test]
    fn bitparallel_multiword_tail() {
        // lengths straddling word boundaries
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let al = Arc::new(Alphabet::binary());
        for n in [63, 64, 65, 127, 128, 129, 200] {
            let a = random_string(&mut rng, &al, n);
            let b = random_string(&mut rng, &al, 150);
            let dp = lcs_last_row(a.ids(), b.ids())[b.len()] as usize;
            assert_eq!(lcs_length(&a, &b, DEFAULT_MAX_CELLS).unwrap(), dp);
        }
    }
}
