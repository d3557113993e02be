//! # stabenv-core
//!
//! Exact symbolic computation of elliptic and K-theoretic stable envelopes
//! for Nakajima quiver varieties of affine (cyclic) and linear type A.
//!
//! The library is organized in four layers, each usable on its own:
//!
//! * [`symbolic`] — an exact kernel for Laurent monomials with rational
//!   exponents and formal sums of theta / q-Pochhammer symbols
//!   ([`Monomial`], [`ThetaExpr`]), including quasi-periodicity normal form,
//!   substitution, truncated-product numeric evaluation, the `q → 0`
//!   leading-order limit, and a text grammar with a round-tripping parser.
//! * [`combin`] — partitions, labeled partitions, `(v, w)`-tuples of
//!   partitions indexing torus fixed points, L-shaped subgraphs, and the
//!   `2^m` admissible spanning trees of a Young diagram with their canonical
//!   orientation and sign statistic `kappa`.
//! * [`quiver`] — quiver-variety data: tautological bundles, the virtual
//!   tangent space, fixed-point restriction of Chern roots, chambers,
//!   the exact `rho`-ordering of boxes, attracting/repelling decomposition,
//!   polarizations, and the per-box index exponents.
//! * [`envelope`] — the stable-envelope formula itself: the `S1`, `S2`, `S3`
//!   products, tree weights `W`, symmetrization over Chern roots, restriction
//!   matrices, Thom classes, quasi-period factors, and the K-theoretic limit
//!   at a chosen slope.
//!
//! All arithmetic is exact (arbitrary-precision rationals); floating point
//! appears only in the explicitly numeric evaluation oracle.
//!
//! With the default `parallel` feature the heavy sums (symmetrization
//! summands, matrix entries) run on a rayon thread pool; disabling the
//! feature yields a fully sequential build with identical results.

pub mod combin;
pub mod envelope;
pub mod error;
pub mod par;
pub mod quiver;
pub mod rational;
pub mod symbolic;

pub use combin::{BoxPos, FixedPoint, LabeledPartition, Partition, Tree};
pub use envelope::{
    k_stab_matrix, kstab, quasiperiods_of_stab, stab, stab_matrix, thom_class, KStabMatrix,
    Slope, StabContext, StabMatrix,
};
pub use error::{Error, Result};
pub use quiver::{Arrows, Chamber, QuiverData, RhoKey, TSign};
pub use rational::QRat;
pub use symbolic::{FactorKind, Monomial, ThetaExpr, ThetaFactor, Variable};
