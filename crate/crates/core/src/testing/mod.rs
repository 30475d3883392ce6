//! Test support: policy generators, independent oracles, and sample
//! objects of every serializable type.

mod generators;
mod oracles;
mod samples;

pub use generators::{all_subsets, all_trees, random_subset, random_tree};
pub use oracles::{all_selections, combinations, relabel_distinct, truth_table};
pub use samples::{corruption_sweep, golden_objects, reencode, SampleObjects, GOLDEN_SEED};
