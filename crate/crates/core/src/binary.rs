//! Binary LCS solver for strings of possibly unequal length.
//!
//! The case analysis for imbalanced binary strings splits on quantities that
//! depend on an optimal alignment, which the algorithm cannot see. Each case
//! however ends in a constructive common subsequence, so the solver builds
//! every construction (for all eight symmetry variants of the input) and
//! keeps the longest. Whichever case actually holds, its construction is in
//! the pool.

use std::fmt;
use std::ops::Range;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::primitives::{
    balanced_pairs, best_match_pairs, greedy_pairs, longest, push_match, Candidate, EdApproximator,
    Strategy,
};
use crate::schedule::ConstantSchedule;
use crate::types::{count_ids, counts_balanced, is_balanced, same_alphabet, SymbolString};

fn check_binary(a: &SymbolString) -> Result<()> {
    if a.sigma() != 2 {
        return Err(Error::InvalidAlphabet(format!(
            "binary solver needs a binary alphabet, got size {}",
            a.sigma()
        )));
    }
    Ok(())
}

/// Left, middle and right spans of a string with equal-length ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentSplit {
    pub left: Range<usize>,
    pub middle: Range<usize>,
    pub right: Range<usize>,
}

/// Split a string of length `len` into ends of length `⌊alpha·m⌋`.
pub fn segment_len(len: usize, alpha: Ratio<usize>, m: usize) -> Result<SegmentSplit> {
    let end = alpha.numer() * m / alpha.denom();
    if end == 0 || 2 * end > len {
        return Err(Error::Segmentation { end, len });
    }
    Ok(SegmentSplit {
        left: 0..end,
        middle: end..len - end,
        right: len - end..len,
    })
}

/// Segment `s` with ends of length `⌊alpha·m⌋`.
pub fn segment(s: &SymbolString, alpha: Ratio<usize>, m: usize) -> Result<SegmentSplit> {
    segment_len(s.len(), alpha, m)
}

/// Any combination of swapping the strings, complementing symbols and
/// reversing both strings. Each is an involution and they commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymmetryTransform {
    pub swap_strings: bool,
    pub complement_symbols: bool,
    pub reverse_both: bool,
}

impl SymmetryTransform {
    pub const IDENTITY: SymmetryTransform = SymmetryTransform {
        swap_strings: false,
        complement_symbols: false,
        reverse_both: false,
    };

    /// All eight transforms, identity first.
    pub fn all() -> [SymmetryTransform; 8] {
        std::array::from_fn(|k| SymmetryTransform {
            swap_strings: k & 4 != 0,
            complement_symbols: k & 2 != 0,
            reverse_both: k & 1 != 0,
        })
    }

    pub fn apply_ids(&self, x: &[u8], y: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let (p, q) = if self.swap_strings { (y, x) } else { (x, y) };
        let map = |v: &[u8]| -> Vec<u8> {
            let it = v
                .iter()
                .map(|&c| if self.complement_symbols { 1 - c } else { c });
            if self.reverse_both {
                it.rev().collect()
            } else {
                it.collect()
            }
        };
        (map(p), map(q))
    }

    pub fn apply(&self, x: &SymbolString, y: &SymbolString) -> (SymbolString, SymbolString) {
        let (p, q) = self.apply_ids(x.ids(), y.ids());
        (x.with_ids(p), y.with_ids(q))
    }

    /// Map pairs on the transformed strings (lengths `p_len`, `q_len`) back to
    /// the original pair.
    pub fn invert_pairs(
        &self,
        pairs: &[(usize, usize)],
        p_len: usize,
        q_len: usize,
    ) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(i, j)| {
                let (i, j) = if self.reverse_both {
                    (p_len - 1 - i, q_len - 1 - j)
                } else {
                    (i, j)
                };
                if self.swap_strings {
                    (j, i)
                } else {
                    (i, j)
                }
            })
            .collect();
        if self.reverse_both {
            out.reverse();
        }
        out
    }

    pub fn label(&self) -> String {
        let parts: Vec<&str> = [
            (self.swap_strings, "swap"),
            (self.complement_symbols, "comp"),
            (self.reverse_both, "rev"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, name)| *name)
        .collect();
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for SymmetryTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A binary pair with its frequency profile. `alpha = 1(X)/|Y|`.
#[derive(Clone, Debug)]
pub struct BinaryContext {
    pub x: SymbolString,
    pub y: SymbolString,
    pub alpha: Option<Ratio<usize>>,
    pub zeros_x: usize,
    pub ones_x: usize,
    pub zeros_y: usize,
    pub ones_y: usize,
}

/// Whether the imbalanced-pair hypotheses hold (recorded, not enforced).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImbalanceHypotheses {
    /// `0(Y), 1(X) <= (1/2 - rho)·m`.
    pub frequencies_small: bool,
    /// `|0(Y) - 1(X)| <= delta·m`.
    pub frequencies_close: bool,
}

impl ImbalanceHypotheses {
    pub fn hold(&self) -> bool {
        self.frequencies_small && self.frequencies_close
    }
}

impl BinaryContext {
    pub fn new(x: &SymbolString, y: &SymbolString) -> Result<Self> {
        check_binary(x)?;
        same_alphabet(x, y)?;
        let cx = count_ids(x.ids(), 2);
        let cy = count_ids(y.ids(), 2);
        let alpha = (!y.is_empty()).then(|| Ratio::new(cx[1], y.len()));
        Ok(BinaryContext {
            x: x.clone(),
            y: y.clone(),
            alpha,
            zeros_x: cx[0],
            ones_x: cx[1],
            zeros_y: cy[0],
            ones_y: cy[1],
        })
    }

    /// Reorient so that `|X| >= |Y|` and `0(Y) <= 1(Y)`; returns the
    /// transform that was applied.
    pub fn normalized(x: &SymbolString, y: &SymbolString) -> Result<(Self, SymmetryTransform)> {
        let swap = x.len() < y.len();
        let (_, second) = if swap { (y, x) } else { (x, y) };
        let cy = count_ids(second.ids(), 2);
        let t = SymmetryTransform {
            swap_strings: swap,
            complement_symbols: cy[0] > cy[1],
            reverse_both: false,
        };
        let (p, q) = t.apply(x, y);
        Ok((Self::new(&p, &q)?, t))
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn hypotheses(&self, schedule: &ConstantSchedule) -> ImbalanceHypotheses {
        let m = self.m() as f64;
        let cap = (0.5 - schedule.rho) * m;
        ImbalanceHypotheses {
            frequencies_small: (self.zeros_y as f64) <= cap && (self.ones_x as f64) <= cap,
            frequencies_close: (self.zeros_y.abs_diff(self.ones_x) as f64) <= schedule.delta * m,
        }
    }
}

/// If one symbol's common count dominates the other's by a `1 + delta`
/// factor, the unary match is a `(1+delta)/(2+delta)` approximation.
pub fn frequency_gap_check(
    x: &SymbolString,
    y: &SymbolString,
    delta: f64,
) -> Result<Option<Candidate>> {
    check_binary(x)?;
    same_alphabet(x, y)?;
    let cx = count_ids(x.ids(), 2);
    let cy = count_ids(y.ids(), 2);
    let min0 = cx[0].min(cy[0]) as f64;
    let min1 = cx[1].min(cy[1]) as f64;
    if min0 > (1.0 + delta) * min1 || min1 > (1.0 + delta) * min0 {
        let pairs = best_match_pairs(x.ids(), y.ids(), 2);
        Ok(Some(Candidate::new(Strategy::FrequencyGap, pairs)))
    } else {
        Ok(None)
    }
}

/// Constructions for one orientation `(x, y)` of the pair.
fn oriented_candidates(
    x: &[u8],
    y: &[u8],
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Vec<(Strategy, Vec<(usize, usize)>)> {
    let mut out = vec![(Strategy::BestMatch, best_match_pairs(x, y, 2))];
    let (n, m) = (x.len(), y.len());
    if m == 0 {
        return out;
    }
    // alpha·m = 1(X) exactly
    let e = x.iter().filter(|&&c| c == 1).count();
    if e == 0 || 2 * e > m {
        return out;
    }

    if e <= n {
        out.push((
            Strategy::Greedy,
            greedy_pairs(&x[..n - e], &x[n - e..], y, 2),
        ));
    }

    if e <= n {
        let (rx, ry) = (&x[n - e..], &y[m - e..]);
        // (4β/α)-balanced ends, with α = e/m
        let radius = 4.0 * schedule.beta * m as f64 / e as f64;
        if counts_balanced(&count_ids(rx, 2), e, radius)
            && counts_balanced(&count_ids(ry, 2), e, radius)
        {
            let mut pairs = Vec::new();
            push_match(&x[..n - e], &y[..m - e], 0, 0, 0, &mut pairs);
            let (_, tail) = balanced_pairs(rx, ry, 2, ed);
            pairs.extend(tail.into_iter().map(|(i, j)| (i + n - e, j + m - e)));
            out.push((Strategy::EndsBalanced, pairs));
        }
    }

    if 2 * e <= n {
        let mut pairs = Vec::new();
        push_match(&x[..e], &y[..e], 0, 0, 0, &mut pairs);
        push_match(&x[e..n - e], &y[e..m - e], 1, e, e, &mut pairs);
        push_match(&x[n - e..], &y[m - e..], 0, n - e, m - e, &mut pairs);
        out.push((Strategy::Triple, pairs));
    }

    if e <= n {
        let mut pairs = Vec::new();
        push_match(&x[..e], &y[..m - e], 0, 0, 0, &mut pairs);
        push_match(&x[e..], &y[m - e..], 1, e, m - e, &mut pairs);
        out.push((Strategy::Pair, pairs));
    }
    out
}

fn portfolio_rank(s: Strategy) -> u8 {
    match s {
        Strategy::BestMatch => 0,
        Strategy::Greedy => 1,
        Strategy::EndsBalanced => 2,
        Strategy::Triple => 3,
        Strategy::Pair => 4,
        _ => 5,
    }
}

/// Every construction of the case analysis, for all eight symmetry variants,
/// mapped back to `ctx.x` / `ctx.y`. Ordered by strategy, then transform.
pub fn portfolio_candidates(
    ctx: &BinaryContext,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    for t in SymmetryTransform::all() {
        let (p, q) = t.apply_ids(ctx.x.ids(), ctx.y.ids());
        for (strategy, pairs) in oriented_candidates(&p, &q, schedule, ed) {
            let pairs = t.invert_pairs(&pairs, p.len(), q.len());
            out.push(Candidate::new(strategy, pairs).with_via(t.label()));
        }
    }
    out.sort_by_key(|c| portfolio_rank(c.strategy));
    out
}

/// Longest portfolio candidate; never shorter than the unary baseline.
pub fn imbalanced_lcs(
    x: &SymbolString,
    y: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<Candidate> {
    let ctx = BinaryContext::new(x, y)?;
    let mut all = portfolio_candidates(&ctx, schedule, ed);
    let k = longest(&all).expect("portfolio always contains bm");
    Ok(all.swap_remove(k))
}

/// Every candidate considered by [`binary_lcs_approx`], in tie-break order.
pub fn binary_candidates(
    x: &SymbolString,
    y: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<Vec<Candidate>> {
    let ctx = BinaryContext::new(x, y)?;
    let mut out = vec![Candidate::new(
        Strategy::BestMatch,
        best_match_pairs(x.ids(), y.ids(), 2),
    )];
    if let Some(c) = frequency_gap_check(x, y, schedule.delta)? {
        out.push(c);
    }
    if x.len() == y.len() && (is_balanced(x, schedule.rho) || is_balanced(y, schedule.rho)) {
        let (strategy, pairs) = balanced_pairs(x.ids(), y.ids(), 2, ed);
        out.push(Candidate::new(strategy, pairs).with_via("balanced"));
    }
    out.extend(portfolio_candidates(&ctx, schedule, ed));
    Ok(out)
}

/// Better-than-1/2 binary solver: the best of the unary baseline, the
/// frequency-gap shortcut, the balanced-input solver (equal lengths) and the
/// imbalanced portfolio.
pub fn binary_lcs_approx(
    x: &SymbolString,
    y: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<Candidate> {
    let mut all = binary_candidates(x, y, schedule, ed)?;
    let k = longest(&all).expect("candidate list always contains bm");
    Ok(all.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::lcs_exact;
    use crate::primitives::BandedExactEd;
    use crate::primitives::Strategy;
    use crate::schedule::derive_schedule;
    use crate::types::{validate_witness, Alphabet};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn bin(s: &str) -> SymbolString {
        SymbolString::binary(s).unwrap()
    }

    fn sched() -> ConstantSchedule {
        derive_schedule(2, 1.0)
    }

    #[test]
    fn frequency_gap_examples() {
        let c = frequency_gap_check(&bin("0001"), &bin("0010"), 0.5)
            .unwrap()
            .unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.witness.symbols(&bin("0001")), vec![0, 0, 0]);
        assert!(frequency_gap_check(&bin("0101"), &bin("0101"), 0.5)
            .unwrap()
            .is_none());
        let c = frequency_gap_check(&bin("1110"), &bin("1101"), 0.5)
            .unwrap()
            .unwrap();
        assert_eq!(c.witness.symbols(&bin("1110")), vec![1, 1, 1]);
    }

    #[test]
    fn segment_examples() {
        let s = bin("00110011");
        let split = segment(&s, Ratio::new(1, 4), 8).unwrap();
        assert_eq!(split.left, 0..2);
        assert_eq!(split.middle, 2..6);
        assert_eq!(split.right, 6..8);
        assert_eq!(&s.ids()[split.middle.clone()], &[1, 1, 0, 0]);

        let split = segment(&s, Ratio::new(1, 2), 8).unwrap();
        assert_eq!((split.left, split.middle, split.right), (0..4, 4..4, 4..8));

        assert!(matches!(
            segment(&bin("00000"), Ratio::new(3, 5), 5),
            Err(Error::Segmentation { end: 3, len: 5 })
        ));
        assert!(segment(&s, Ratio::new(0, 1), 8).is_err());
    }

    #[test]
    fn transforms_are_involutions() {
        let x = bin("0011010");
        let y = bin("1101");
        for t in SymmetryTransform::all() {
            let (p, q) = t.apply(&x, &y);
            let (x2, y2) = t.apply(&p, &q);
            assert_eq!((x2, y2), (x.clone(), y.clone()), "{t}");
            // a witness on the transformed pair maps back to a valid one
            let (_, w) = lcs_exact(&p, &q).unwrap();
            let back = t.invert_pairs(w.pairs(), p.len(), q.len());
            assert!(validate_witness(
                &x,
                &y,
                &crate::types::Witness::new(back.clone())
            ));
            assert_eq!(back.len(), w.len());
        }
        assert_eq!(SymmetryTransform::all()[0], SymmetryTransform::IDENTITY);
    }

    #[test]
    fn normalization() {
        let (ctx, t) = BinaryContext::normalized(&bin("001"), &bin("0001")).unwrap();
        assert!(t.swap_strings && t.complement_symbols && !t.reverse_both);
        assert_eq!(ctx.x, bin("1110"));
        assert_eq!(ctx.y, bin("110"));
        assert!(ctx.zeros_y <= ctx.ones_y);
        assert_eq!(ctx.alpha, Some(Ratio::new(1, 1)));
    }

    #[test]
    fn identical_strings_get_full_length() {
        let x = bin(&"01".repeat(32));
        let ctx = BinaryContext::new(&x, &x).unwrap();
        let all = portfolio_candidates(&ctx, &sched(), &BandedExactEd);
        // ends of length 32: unary left part (16) plus ED on the right ends (32)
        let ends = all.iter().filter(|c| c.strategy == Strategy::EndsBalanced);
        assert_eq!(ends.map(Candidate::len).max(), Some(48));
        assert_eq!(
            imbalanced_lcs(&x, &x, &sched(), &BandedExactEd)
                .unwrap()
                .len(),
            48
        );
        // the balanced-input branch covers the whole pair
        assert_eq!(
            binary_lcs_approx(&x, &x, &sched(), &BandedExactEd)
                .unwrap()
                .len(),
            64
        );
        // block strings are covered by the portfolio alone
        let x = bin("0000011111111");
        assert_eq!(
            imbalanced_lcs(&x, &x, &sched(), &BandedExactEd)
                .unwrap()
                .len(),
            13
        );
    }

    #[test]
    fn triple_beats_bm_on_block_layout() {
        // X = 0^8 1^8, Y = 1^4 0^4 1^4
        let x = bin("0000000011111111");
        let y = bin("111100001111");
        let ctx = BinaryContext::new(&x, &y).unwrap();
        let all = portfolio_candidates(&ctx, &sched(), &BandedExactEd);
        for c in &all {
            assert!(validate_witness(&x, &y, &c.witness), "{}", c.label());
        }
        let bm = all
            .iter()
            .find(|c| c.strategy == Strategy::BestMatch)
            .unwrap()
            .len();
        assert_eq!(bm, 8);
        let lcs = lcs_exact(&x, &y).unwrap().0;
        assert_eq!(lcs, 8);
        // the winning candidate attains the optimum
        let best = imbalanced_lcs(&x, &y, &sched(), &BandedExactEd).unwrap();
        assert_eq!(best.len(), lcs);

        assert!(all
            .iter()
            .any(|c| c.strategy == Strategy::Triple && c.len() == 8));

        // X = 0^3 1^2 0^3, Y = 0^2 1^4 0^2: ends of length 2, three-way match is optimal
        let x = bin("00011000");
        let y = bin("00111100");
        let ctx = BinaryContext::new(&x, &y).unwrap();
        let all = portfolio_candidates(&ctx, &sched(), &BandedExactEd);
        let best_of = |s: Strategy| {
            all.iter()
                .filter(|c| c.strategy == s)
                .map(Candidate::len)
                .max()
        };
        assert_eq!(best_of(Strategy::BestMatch), Some(4));
        assert_eq!(best_of(Strategy::Triple), Some(6));
        assert_eq!(lcs_exact(&x, &y).unwrap().0, 6);
    }

    #[test]
    fn binary_examples() {
        let sc = sched();
        let ed = BandedExactEd;
        assert_eq!(
            binary_lcs_approx(&bin("0011"), &bin("0101"), &sc, &ed)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            binary_lcs_approx(&bin("0001"), &bin("0010"), &sc, &ed)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            binary_lcs_approx(&bin("01"), &bin("01"), &sc, &ed)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            binary_lcs_approx(&bin(""), &bin("0101"), &sc, &ed)
                .unwrap()
                .len(),
            0
        );
        let ternary =
            SymbolString::parse(&Arc::new(Alphabet::canonical(3).unwrap()), "012").unwrap();
        assert!(binary_lcs_approx(&ternary, &ternary, &sc, &ed).is_err());
    }

    fn arb_pair() -> impl proptest::strategy::Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (
            proptest::collection::vec(0u8..2, 0..40),
            proptest::collection::vec(0u8..2, 0..40),
        )
    }

    proptest! {
        #[test]
        fn portfolio_is_valid_and_dominates_bm((a, b) in arb_pair()) {
            let al = Arc::new(Alphabet::binary());
            let x = SymbolString::new(al.clone(), a).unwrap();
            let y = SymbolString::new(al, b).unwrap();
            let sc = sched();
            let all = binary_candidates(&x, &y, &sc, &BandedExactEd).unwrap();
            for c in &all {
                prop_assert!(validate_witness(&x, &y, &c.witness), "{}", c.label());
            }
            let best = binary_lcs_approx(&x, &y, &sc, &BandedExactEd).unwrap();
            let bm = best_match_pairs(x.ids(), y.ids(), 2).len();
            prop_assert!(best.len() >= bm);
            prop_assert!(imbalanced_lcs(&x, &y, &sc, &BandedExactEd).unwrap().len() >= bm);
        }

        #[test]
        fn output_length_is_transform_invariant((a, b) in arb_pair()) {
            let al = Arc::new(Alphabet::binary());
            let x = SymbolString::new(al.clone(), a).unwrap();
            let y = SymbolString::new(al, b).unwrap();
            let sc = sched();
            let base = imbalanced_lcs(&x, &y, &sc, &BandedExactEd).unwrap().len();
            for t in SymmetryTransform::all() {
                let (p, q) = t.apply(&x, &y);
                prop_assert_eq!(imbalanced_lcs(&p, &q, &sc, &BandedExactEd).unwrap().len(), base);
            }
        }
    }
}
