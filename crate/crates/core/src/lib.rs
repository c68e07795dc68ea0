//! Explicit continuity bounds for the roots of complex polynomials.
//!
//! The crate answers two questions about a polynomial `f` of degree `n`:
//!
//! * given a root tolerance `ε`, how far (`δ`) may every coefficient move
//!   before some root escapes its `ε`-ball ([`bounds::delta_aligned`],
//!   [`bounds::delta_all_roots`], [`bounds::delta_zero_root`]);
//! * given a coefficient tolerance `δ`, how far may the roots move before
//!   the monic coefficients deviate by `δ` ([`bounds::epsilon_inverse`]).
//!
//! Supporting modules provide Horner evaluation, Viète reconstruction,
//! single-root deflation, a simultaneous root finder, root clustering and an
//! exact bottleneck matching between root sequences.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod alignment;
pub mod bounds;
mod error;
pub mod poly;
pub mod roots;
mod scalar;

pub use alignment::{
    balls_disjoint, bottleneck_match, is_delta_deformation, is_epsilon_aligned, AlignmentReport,
    Ball, Matching,
};
pub use bounds::{
    delta_aligned, delta_all_roots, delta_zero_root, epsilon_inverse, kappa_deflation,
    proportional_iff_always_aligned_check, BoundOptions, DeltaCertificate, Method, TraceLevel,
};
pub use error::{Error, Result};
pub use poly::{elementary_symmetric, viete_coefficients, Polynomial};
pub use roots::{cluster_roots, find_roots, separation, Cluster, FindRootsOptions, RootClusters, RootSequence};
pub use scalar::{dist, Scalar};
