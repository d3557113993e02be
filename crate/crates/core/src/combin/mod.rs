//! Partition and tree combinatorics underlying the fixed-point formula.

pub mod enumerate;
pub mod partition;
pub mod trees;

pub use enumerate::{check_dimensions, enumerate_fixed_points};
pub use partition::{BoxPos, FixedPoint, LabeledPartition, Partition};
pub use trees::{admissible_trees, l_shapes, Tree, TreeEdge};
