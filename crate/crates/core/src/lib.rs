//! Approximation algorithms for the longest common subsequence over
//! constant-size alphabets, with exact oracles and an experiment harness.

pub mod binary;
pub mod error;
pub mod exact;
pub mod harness;
pub mod multi;
pub mod primitives;
pub mod restriction;
pub mod schedule;
pub mod types;

pub use binary::{binary_lcs_approx, imbalanced_lcs, BinaryContext, SymmetryTransform};
pub use error::{Error, Result};
pub use exact::{ed_banded, ed_exact, lcs_bruteforce, lcs_exact};
pub use multi::{
    alphabet_reduce, equal_length_lcs_approx, lcs_approx, Guarantee, SolveConfig, SolveMode,
    SolveReport,
};
pub use primitives::{best_match, BandedExactEd, Candidate, EdApproximator, Strategy};
pub use restriction::{find_imbalanced_pair, verify_pair};
pub use schedule::{derive_schedule, validate_schedule, ConstantSchedule};
pub use types::{
    histogram, is_balanced, lift_witness, restrict, validate_witness, Alphabet, SymbolString,
    Witness,
};
