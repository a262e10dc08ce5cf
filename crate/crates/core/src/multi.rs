//! Alphabet reduction and the equal-length s-ary solver.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::binary::{binary_candidates, binary_lcs_approx};
use crate::error::{Error, Result};
use crate::primitives::{
    balanced_pairs, best_match_pairs, longest, Candidate, EdApproximator, Strategy,
};
use crate::restriction::{find_imbalanced_pair, verify_pair};
use crate::schedule::{derive_schedule, validate_schedule, ConstantSchedule};
use crate::types::{
    count_ids, counts_balanced, lift_witness, restrict, same_alphabet, validate_witness,
    SymbolString,
};

/// What the output is guaranteed to achieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    /// Better than `1/s` (equal-length inputs).
    Improved,
    /// Only the unary `1/s` baseline is guaranteed.
    BaselineOnly,
}

/// Work counters of an alphabet reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionStats {
    pub sub_instances: usize,
    /// Symbols scanned while building restrictions.
    pub restrict_steps: usize,
    /// Pairs mapped back through index maps.
    pub lift_steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub answer: Candidate,
    pub candidates: Vec<Candidate>,
    /// Label of the winning branch.
    pub path: String,
    pub schedule: ConstantSchedule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    pub guarantee: Guarantee,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<ReductionStats>,
}

impl SolveReport {
    fn from_candidates(
        candidates: Vec<Candidate>,
        schedule: ConstantSchedule,
        guarantee: Guarantee,
    ) -> Self {
        let k = longest(&candidates).expect("candidate list is never empty");
        let answer = candidates[k].clone();
        SolveReport {
            path: answer.label(),
            answer,
            candidates,
            schedule,
            exact: None,
            guarantee,
            stats: None,
        }
    }

    pub fn len(&self) -> usize {
        self.answer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answer.is_empty()
    }
}

pub type SubSolver<'a> = dyn Fn(&SymbolString, &SymbolString) -> Result<Candidate> + Sync + 'a;

/// Below this combined length sub-instances run sequentially.
const PARALLEL_MIN_LEN: usize = 1 << 12;

fn map_subsets<T, R, F>(items: &[T], total_len: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    if total_len >= PARALLEL_MIN_LEN {
        items.par_iter().map(&f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn sub_label(symbols: &[u8]) -> String {
    format!("sub[{}]", symbols.iter().join(","))
}

fn solve_restricted(
    a: &SymbolString,
    b: &SymbolString,
    symbols: &[u8],
    solver: &SubSolver<'_>,
) -> Result<(Candidate, ReductionStats)> {
    let ra = restrict(a, symbols)?;
    let rb = restrict(b, symbols)?;
    let inner = solver(&ra.restricted, &rb.restricted)?;
    if !validate_witness(&ra.restricted, &rb.restricted, &inner.witness) {
        return Err(Error::InvalidWitness(inner.label()));
    }
    let lifted = lift_witness(&ra, &rb, &inner.witness)?;
    let stats = ReductionStats {
        sub_instances: 1,
        restrict_steps: a.len() + b.len(),
        lift_steps: lifted.len(),
    };
    let mut c = inner.with_via(sub_label(&ra.symbols));
    c.witness = lifted;
    Ok((c, stats))
}

/// Solve every `ell`-symbol restriction and keep the longest lifted result.
pub fn alphabet_reduce(
    a: &SymbolString,
    b: &SymbolString,
    ell: usize,
    schedule: &ConstantSchedule,
    solver: &SubSolver<'_>,
) -> Result<SolveReport> {
    same_alphabet(a, b)?;
    let s = a.sigma();
    if ell < 2 || ell >= s {
        return Err(Error::Precondition(format!(
            "subalphabet size must satisfy 2 <= ell < s = {s}, got {ell}"
        )));
    }
    let subsets: Vec<Vec<u8>> = (0..s as u8).combinations(ell).collect();
    let solved = map_subsets(&subsets, a.len() + b.len(), |sub| {
        solve_restricted(a, b, sub, solver)
    })?;
    let mut stats = ReductionStats::default();
    let mut candidates = Vec::with_capacity(solved.len());
    for (c, st) in solved {
        stats.sub_instances += st.sub_instances;
        stats.restrict_steps += st.restrict_steps;
        stats.lift_steps += st.lift_steps;
        candidates.push(c);
    }
    let mut report = SolveReport::from_candidates(candidates, *schedule, Guarantee::BaselineOnly);
    report.stats = Some(stats);
    Ok(report)
}

fn check_equal(a: &SymbolString, b: &SymbolString) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Precondition(format!(
            "equal-length solver needs |A| = |B|, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Better-than-`1/s` solver for equal-length strings.
///
/// Always includes the unary baseline. If either input is `rho·s`-balanced
/// the edit-distance branch runs; otherwise each two-symbol restriction on
/// which both inputs stay imbalanced is solved by the binary solver, the
/// pair found by [`find_imbalanced_pair`] first.
pub fn equal_length_lcs_approx(
    a: &SymbolString,
    b: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<SolveReport> {
    same_alphabet(a, b)?;
    check_equal(a, b)?;
    let s = a.sigma();
    if s == 2 {
        let candidates = binary_candidates(a, b, schedule, ed)?;
        return Ok(SolveReport::from_candidates(
            candidates,
            *schedule,
            Guarantee::Improved,
        ));
    }

    let mut candidates = vec![Candidate::new(
        Strategy::BestMatch,
        best_match_pairs(a.ids(), b.ids(), s),
    )];
    let radius = schedule.rho * s as f64;
    let balanced = |x: &SymbolString| counts_balanced(&count_ids(x.ids(), s), x.len(), radius);
    if balanced(a) || balanced(b) {
        let (strategy, pairs) = balanced_pairs(a.ids(), b.ids(), s, ed);
        candidates.push(Candidate::new(strategy, pairs).with_via("balanced"));
    } else {
        let first = find_imbalanced_pair(a, b, radius)?;
        let mut pairs = vec![first];
        pairs.extend(
            (0..s as u8)
                .tuple_combinations()
                .map(|(p, q)| [p, q])
                .filter(|&p| p != first && verify_pair(a, b, p, radius)),
        );
        let solver = |x: &SymbolString, y: &SymbolString| binary_lcs_approx(x, y, schedule, ed);
        let solved = map_subsets(&pairs, a.len() + b.len(), |p| {
            solve_restricted(a, b, p, &solver).map(|(c, _)| c)
        })?;
        candidates.extend(solved);
    }
    Ok(SolveReport::from_candidates(
        candidates,
        *schedule,
        Guarantee::Improved,
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SolveMode {
    /// Equal lengths go to the equal-length solver; otherwise reduce to
    /// binary sub-instances.
    #[default]
    Auto,
    Equal,
    Binary,
    Reduce,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub mode: SolveMode,
    /// Subalphabet size for the reduction.
    pub ell: usize,
    /// Overrides the schedule derived from `(s, ed.ratio())`.
    pub schedule: Option<ConstantSchedule>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: SolveMode::Auto,
            ell: 2,
            schedule: None,
        }
    }
}

fn binary_report(
    a: &SymbolString,
    b: &SymbolString,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<SolveReport> {
    let guarantee = if a.len() == b.len() {
        Guarantee::Improved
    } else {
        Guarantee::BaselineOnly
    };
    Ok(SolveReport::from_candidates(
        binary_candidates(a, b, schedule, ed)?,
        *schedule,
        guarantee,
    ))
}

fn reduce_report(
    a: &SymbolString,
    b: &SymbolString,
    ell: usize,
    schedule: &ConstantSchedule,
    ed: &dyn EdApproximator,
) -> Result<SolveReport> {
    let c = ed.ratio();
    let solver = |x: &SymbolString, y: &SymbolString| -> Result<Candidate> {
        if ell == 2 {
            binary_lcs_approx(x, y, &derive_schedule(2, c), ed)
        } else {
            Ok(lcs_approx(x, y, &SolveConfig::default(), ed)?.answer)
        }
    };
    let mut report = alphabet_reduce(a, b, ell, schedule, &solver)?;
    let bm = Candidate::new(
        Strategy::BestMatch,
        best_match_pairs(a.ids(), b.ids(), a.sigma()),
    );
    report.candidates.insert(0, bm);
    let k = longest(&report.candidates).expect("non-empty");
    report.answer = report.candidates[k].clone();
    report.path = report.answer.label();
    Ok(report)
}

/// Dispatch facade over the solvers.
pub fn lcs_approx(
    a: &SymbolString,
    b: &SymbolString,
    config: &SolveConfig,
    ed: &dyn EdApproximator,
) -> Result<SolveReport> {
    same_alphabet(a, b)?;
    let s = a.sigma();
    let schedule = match config.schedule {
        Some(sc) => {
            if !validate_schedule(&sc, s) {
                return Err(Error::Precondition(format!(
                    "schedule violates its invariants for s = {s}"
                )));
            }
            sc
        }
        None => derive_schedule(s, ed.ratio()),
    };
    let report = match config.mode {
        SolveMode::Auto if a.len() == b.len() => equal_length_lcs_approx(a, b, &schedule, ed)?,
        SolveMode::Auto if s == 2 => binary_report(a, b, &schedule, ed)?,
        SolveMode::Auto => reduce_report(a, b, 2, &schedule, ed)?,
        SolveMode::Equal => equal_length_lcs_approx(a, b, &schedule, ed)?,
        SolveMode::Binary => binary_report(a, b, &schedule, ed)?,
        SolveMode::Reduce => reduce_report(a, b, config.ell, &schedule, ed)?,
    };
    if !validate_witness(a, b, &report.answer.witness) {
        return Err(Error::InvalidWitness(report.answer.label()));
    }
    Ok(report)
}
