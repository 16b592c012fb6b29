//! Anti-concentration toolkit: exact and sampled distributions of
//! multilinear polynomials in independent Bernoulli variables, random
//! graph statistics, and verification of the associated concentration
//! bounds.
//!
//! The crate is organized as:
//! - [`poly`]: multilinear polynomials over {0,1}^n, JSON interchange,
//!   symmetric compact forms.
//! - [`dist`]: exact distributions (enumeration, component convolution,
//!   symmetric weight tables) and the Lévy concentration function.
//! - [`rank`]: polynomial rank via hypergraph matching certificates.
//! - [`sampler`]: reproducible Monte Carlo estimation and the one-bit
//!   flip process trace.
//! - [`graph`]: G(n,p), clique and copy counting, induced edge
//!   statistics, degree peeling, dispersedness.
//! - [`bounds`]: closed-form bound values, extremal generators, and the
//!   verification harness.

pub mod bounds;
pub mod dist;
pub mod error;
pub mod graph;
pub mod poly;
pub mod rank;
pub mod sampler;

pub use error::{Error, Result};
