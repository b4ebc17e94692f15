//! Ground truth: exhaustive verification of packing and covering codes and
//! exact or greedy search for small parameters.

mod search;
mod verify;

pub use search::{exhaustive_max, greedy_lower, Incidence, SearchOutcome, MAX_CANDIDATES};
pub use verify::{coverage_counts, verify_covering, verify_packing, Check, CoveringCheck, VerifyReport, Witness};
