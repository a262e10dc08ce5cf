//! Linear-time unary subroutines (`match`, `bm`, `greed`), the ED-based LCS
//! lower bound, and the balanced-input solver built on them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::indel_alignment;
use crate::schedule::ConstantSchedule;
use crate::types::{count_ids, counts_balanced, same_alphabet, SymbolString, Witness};

/// Which construction produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Longest common unary subsequence.
    BestMatch,
    /// Best two-way split of unary matches.
    Greedy,
    /// Unary left part plus balanced solver on the right ends.
    EndsBalanced,
    /// 0-match on the ends, 1-match in the middle.
    Triple,
    /// 0-match on the left, 1-match on the right.
    Pair,
    Match,
    ApproxEd,
    FrequencyGap,
    Exact,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::BestMatch => "bm",
            Strategy::Greedy => "greed",
            Strategy::EndsBalanced => "case1a-split",
            Strategy::Triple => "case3-triple",
            Strategy::Pair => "case5-pair",
            Strategy::Match => "match",
            Strategy::ApproxEd => "approx-ed",
            Strategy::FrequencyGap => "freq-gap",
            Strategy::Exact => "exact",
        }
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A labeled common subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub strategy: Strategy,
    /// Where the candidate was built, e.g. a symmetry transform or subalphabet.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<String>,
    pub witness: Witness,
}

impl Candidate {
    pub fn new(strategy: Strategy, pairs: Vec<(usize, usize)>) -> Self {
        Candidate {
            strategy,
            via: None,
            witness: Witness::new(pairs),
        }
    }

    pub fn len(&self) -> usize {
        self.witness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witness.is_empty()
    }

    /// `strategy` or `strategy@via`.
    pub fn label(&self) -> String {
        match &self.via {
            Some(v) => format!("{}@{}", self.strategy, v),
            None => self.strategy.label().to_string(),
        }
    }

    pub(crate) fn with_via(mut self, via: impl Into<String>) -> Self {
        let via = via.into();
        self.via = Some(match self.via.take() {
            Some(inner) => format!("{via}/{inner}"),
            None => via,
        });
        self
    }
}

/// First candidate of maximal length.
pub(crate) fn longest(candidates: &[Candidate]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, c) in candidates.iter().enumerate() {
        if best.is_none_or(|b| c.len() > candidates[b].len()) {
            best = Some(k);
        }
    }
    best
}

/// An edit-distance estimator that also returns an alignment.
///
/// The alignment is a common subsequence of `a` and `b`; its implied distance
/// `|a| + |b| - 2·|alignment|` is the estimate, which is therefore never
/// below the true distance. Implementations promise it is at most
/// `ratio()` times the true distance.
pub trait EdApproximator: Send + Sync {
    fn ratio(&self) -> f64;

    fn align(&self, a: &[u8], b: &[u8]) -> Vec<(usize, usize)>;

    fn name(&self) -> &str;

    fn estimate(&self, a: &[u8], b: &[u8]) -> usize {
        a.len() + b.len() - 2 * self.align(a, b).len()
    }
}

/// Exact banded edit distance (`c = 1`), the default estimator.
#[derive(Clone, Copy, Debug, Default)]
pub struct BandedExactEd;

impl EdApproximator for BandedExactEd {
    fn ratio(&self) -> f64 {
        1.0
    }

    fn align(&self, a: &[u8], b: &[u8]) -> Vec<(usize, usize)> {
        indel_alignment(a, b)
    }

    fn name(&self) -> &str {
        "banded-exact"
    }
}

fn check_symbol(a: &SymbolString, sigma: u8) -> Result<()> {
    if sigma as usize >= a.sigma() {
        return Err(Error::InvalidSymbol {
            id: sigma as usize,
            size: a.sigma(),
        });
    }
    Ok(())
}

fn check_binary(a: &SymbolString) -> Result<()> {
    if a.sigma() != 2 {
        return Err(Error::InvalidAlphabet(format!(
            "expected a binary alphabet, got size {}",
            a.sigma()
        )));
    }
    Ok(())
}

/// Pair the first `min(σ(a), σ(b))` occurrences of `sigma`, appending to `out`
/// with the given offsets.
pub(crate) fn push_match(
    a: &[u8],
    b: &[u8],
    sigma: u8,
    a_off: usize,
    b_off: usize,
    out: &mut Vec<(usize, usize)>,
) {
    let ia = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == sigma)
        .map(|(i, _)| i);
    let ib = b
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == sigma)
        .map(|(j, _)| j);
    out.extend(ia.zip(ib).map(|(i, j)| (a_off + i, b_off + j)));
}

/// The symbol with the longest unary match; ties go to the smaller id.
pub(crate) fn best_symbol(a: &[u8], b: &[u8], s: usize) -> (u8, usize) {
    let ca = count_ids(a, s);
    let cb = count_ids(b, s);
    let mut best = (0u8, 0usize);
    for sym in 0..s {
        let len = ca[sym].min(cb[sym]);
        if len > best.1 {
            best = (sym as u8, len);
        }
    }
    best
}

pub(crate) fn best_match_pairs(a: &[u8], b: &[u8], s: usize) -> Vec<(usize, usize)> {
    let (sym, _) = best_symbol(a, b, s);
    let mut out = Vec::new();
    push_match(a, b, sym, 0, 0, &mut out);
    out
}

/// Largest common subsequence made only of `sigma`.
pub fn match_sym(a: &SymbolString, b: &SymbolString, sigma: u8) -> Result<Candidate> {
    same_alphabet(a, b)?;
    check_symbol(a, sigma)?;
    let mut pairs = Vec::new();
    push_match(a.ids(), b.ids(), sigma, 0, 0, &mut pairs);
    Ok(Candidate::new(Strategy::Match, pairs))
}

/// Longest common unary subsequence over all symbols: the `1/s` baseline.
pub fn best_match(a: &SymbolString, b: &SymbolString) -> Result<Candidate> {
    same_alphabet(a, b)?;
    Ok(Candidate::new(
        Strategy::BestMatch,
        best_match_pairs(a.ids(), b.ids(), a.sigma()),
    ))
}

/// `max over splits B = B1 B2 of bm(a1, B1) + bm(a2, B2)` as pairs against
/// `(a1 ++ a2, b)`. Linear time in `|a1| + |a2| + |b|`.
pub(crate) fn greedy_pairs(a1: &[u8], a2: &[u8], b: &[u8], s: usize) -> Vec<(usize, usize)> {
    let c1 = count_ids(a1, s);
    let c2 = count_ids(a2, s);
    let total = count_ids(b, s);
    let mut prefix = vec![0usize; s];
    let value = |prefix: &[usize]| -> usize {
        let left = (0..s).map(|k| c1[k].min(prefix[k])).max().unwrap_or(0);
        let right = (0..s)
            .map(|k| c2[k].min(total[k] - prefix[k]))
            .max()
            .unwrap_or(0);
        left + right
    };
    let (mut best_split, mut best_val) = (0, value(&prefix));
    for (p, &c) in b.iter().enumerate() {
        prefix[c as usize] += 1;
        let v = value(&prefix);
        if v > best_val {
            best_val = v;
            best_split = p + 1;
        }
    }
    let (b1, b2) = b.split_at(best_split);
    let (left_sym, _) = best_symbol(a1, b1, s);
    let (right_sym, _) = best_symbol(a2, b2, s);
    let mut out = Vec::with_capacity(best_val);
    push_match(a1, b1, left_sym, 0, 0, &mut out);
    push_match(a2, b2, right_sym, a1.len(), best_split, &mut out);
    debug_assert_eq!(out.len(), best_val);
    out
}

/// Best split of `b` against the two halves `a1`, `a2`; the witness indexes
/// the concatenation `a1 ++ a2`.
pub fn greedy_split(a1: &SymbolString, a2: &SymbolString, b: &SymbolString) -> Result<Candidate> {
    same_alphabet(a1, b)?;
    same_alphabet(a2, b)?;
    check_binary(b)?;
    Ok(Candidate::new(
        Strategy::Greedy,
        greedy_pairs(a1.ids(), a2.ids(), b.ids(), 2),
    ))
}

/// Common subsequence of length `n - ẽd/2` recovered from the estimator's
/// alignment. Equal lengths only.
pub fn approx_ed_lcs(
    a: &SymbolString,
    b: &SymbolString,
    ed: &dyn EdApproximator,
) -> Result<Candidate> {
    same_alphabet(a, b)?;
    if a.len() != b.len() {
        return Err(Error::Precondition(format!(
            "approx_ed_lcs needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(Candidate::new(
        Strategy::ApproxEd,
        ed.align(a.ids(), b.ids()),
    ))
}

/// The longer of the unary baseline and the ED-based bound.
pub(crate) fn balanced_pairs(
    a: &[u8],
    b: &[u8],
    s: usize,
    ed: &dyn EdApproximator,
) -> (Strategy, Vec<(usize, usize)>) {
    let bm = best_match_pairs(a, b, s);
    let via_ed = ed.align(a, b);
    if via_ed.len() > bm.len() {
        (Strategy::ApproxEd, via_ed)
    } else {
        (Strategy::BestMatch, bm)
    }
}

/// Balanced-input solver at the schedule's radius `rho`.
pub fn balanced_lcs_approx(
    a: &SymbolString,
    b: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<Candidate> {
    balanced_lcs_approx_at(a, b, schedule.rho, ed)
}

/// Balanced-input solver requiring one input to be `radius`-balanced.
pub fn balanced_lcs_approx_at(
    a: &SymbolString,
    b: &SymbolString,
    radius: f64,
    ed: &dyn EdApproximator,
) -> Result<Candidate> {
    same_alphabet(a, b)?;
    if a.len() != b.len() {
        return Err(Error::Precondition(format!(
            "balanced solver needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let s = a.sigma();
    let balanced = |x: &SymbolString| counts_balanced(&count_ids(x.ids(), s), x.len(), radius);
    if !balanced(a) && !balanced(b) {
        return Err(Error::Precondition(format!(
            "neither input is {radius}-balanced"
        )));
    }
    let (strategy, pairs) = balanced_pairs(a.ids(), b.ids(), s, ed);
    Ok(Candidate::new(strategy, pairs))
}
