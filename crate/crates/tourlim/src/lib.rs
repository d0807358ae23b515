//! Exact computation for finite tournaments and tournament kernels.
//!
//! The crate covers both sides of the finite/limit correspondence:
//!
//! - [`tournament`]: tournaments and pattern digraphs, named families,
//!   direct sums, induced subgraphs, small-order isomorphism.
//! - [`homcount`]: exact homomorphism / injective / induced counts and
//!   densities, the identities relating them, and the nine-criterion
//!   transitivity report.
//! - [`tdecomp`]: the canonical decomposition into a linear order of
//!   irreducible components with transitive runs merged, and the
//!   direct-sum induced-density formula.
//! - [`kernel`]: step kernels and segment kernels (ordered direct sums of
//!   irreducible atoms and transitive mass), constructors, embeddings, and
//!   the JSON file format.
//! - [`kdensity`]: exact pattern densities against kernels and the
//!   transitive-kernel criteria.
//! - [`kdecomp`]: kernel irreducibility, reducibility witnesses and the
//!   canonical kernel decomposition.
//! - [`sampler`]: seed-deterministic W-random tournaments and Monte Carlo
//!   density estimation.
//!
//! Everything exact is `BigRational`; sampling is bit-reproducible across
//! platforms (ChaCha8 with one stream per vertex and per vertex pair).
//! With the default `parallel` feature the heavy enumerations and
//! estimator loops run on rayon; disabling it yields an identical,
//! single-threaded build.

pub mod error;
pub mod homcount;
pub mod kdecomp;
pub mod kdensity;
pub mod kernel;
pub mod rational;
pub mod sampler;
pub mod tdecomp;
pub mod tournament;

mod exec;
mod scc;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use kernel::{Segment, SegmentKernel, StepKernel};
pub use rational::Rational;
pub use tournament::{Digraph, OrderedParts, Tournament};
