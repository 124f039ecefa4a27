//! MergeInsertion (the Ford-Johnson algorithm) with pluggable binary-insertion
//! strategies, plus an exact toolkit for its average number of comparisons.
//!
//! The crate is split along the lines of the work it does:
//!
//! * [`sequence`]: the positional main chain used during insertion.
//! * [`strategy`]: binary insertion under the four two-layer decision trees.
//! * [`schedule`] and [`sorter`]: MergeInsertion, the factor-modified batch
//!   schedule, (1,2)-Insertion and the combined algorithm.
//! * [`probability`]: exact insertion-position and insertion-length
//!   distributions of a single batch.
//! * [`exact`]: exact `F(n)` and `G(n)` via decision-tree path lengths.
//! * [`bounds`]: analytic and numeric bounds.
//! * [`harness`]: seeded experiments and TSV output.
//!
//! Trial loops in [`harness`] run on rayon when the `parallel` feature is
//! enabled (the default) and sequentially otherwise.

pub mod bounds;
mod error;
pub mod exact;
pub mod harness;
mod par;
pub mod probability;
pub mod schedule;
pub mod sequence;
pub mod sorter;
pub mod strategy;

pub use error::{Error, Result};
pub use par::Execution;
pub use schedule::Schedule;
pub use sequence::PosSequence;
pub use sorter::{
    combined_sort, merge_insertion, one_two_insertion, Algorithm, InsertionRecord, SortOutcome,
    Sorter,
};
pub use strategy::{binary_insert, decision_depths, Strategy, Tally};

/// Exact rational used by the analysis modules.
pub type Rational = num_rational::BigRational;
