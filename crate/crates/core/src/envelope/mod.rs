//! Stable envelopes: the closed formula and its restriction matrices.
//!
//! This layer assembles everything below it. For a fixed point of the
//! quiver variety it builds the three theta products `S1`, `S2`, `S3`
//! over the boxes of the point's partitions, multiplies by the tree
//! weights `W` summed over tuples of admissible spanning trees,
//! symmetrizes over the Chern roots of every vertex, and obtains the
//! elliptic stable envelope. On top of that sit
//!
//! * restriction matrices over all fixed points in chamber order
//!   ([`stab_matrix`]), upper triangular with theta-products of repelling
//!   tangent weights on the diagonal;
//! * elliptic Thom classes of arbitrary characters ([`thom_class`]);
//! * quasi-period factors of the envelope in every variable
//!   ([`quasiperiods_of_stab`]);
//! * the K-theoretic limit at a chosen slope ([`kstab`],
//!   [`k_stab_matrix`]), with an optional linear-quiver specialization.

mod context;
mod ktheory;
mod quasi;
mod sprod;
mod stab;
mod thom;
mod wtree;

pub use context::{BoxData, StabContext};
pub use ktheory::{k_stab_matrix, kstab, linear_substitution, KStabMatrix, Slope};
pub use quasi::quasiperiods_of_stab;
pub use sprod::{s1, s2, s3};
pub use stab::{stab, stab_matrix, StabMatrix};
pub use thom::thom_class;
pub use wtree::w_tree;
