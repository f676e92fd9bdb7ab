//! Desk-scale laboratory for an entanglement-based private bit string
//! commitment protocol in the random oracle model.
//!
//! The sender commits to a `2n`-bit message by measuring her halves of `n`
//! shared EPR pairs in a uniformly random basis string `b`, then publishing
//! `c1 = m ^ H1(b|O)` and `c2 = H2(b)`. Opening reveals only `b`; the
//! receiver reproduces the outcomes on his own halves and unmasks `m`
//! himself, so the message never crosses the channel.
//!
//! The crate ships, side by side:
//!
//! - [`qsim`] — an exact lazy-collapse sampler for Bell pairs under Z/X
//!   measurements, validated against a 4-dimensional statevector oracle;
//! - [`functionalities`] — the ideal resources: a programmable random
//!   oracle with query logging, the trusted EPR source, and the ideal
//!   commitment functionality;
//! - [`protocol`] — the honest committer/receiver machines and the session
//!   transcript recorder;
//! - [`simproof`] — the security argument made executable: simulators for a
//!   corrupted receiver and a corrupted sender, real/ideal world assemblies,
//!   and a Monte Carlo distinguisher-advantage estimator;
//! - [`attacks`] — concrete adversaries: the source-substituting
//!   man-in-the-middle, the collision-forging sender, and the query-bounded
//!   guessing receiver;
//! - [`puf`] — the same protocol with the oracles realized as strong
//!   physical unclonable functions, including maliciously manufactured
//!   (simulatable / challenge-logging) devices.
//!
//! Everything is deterministic under a caller-supplied 64-bit seed.

pub mod attacks;
pub mod bits;
pub mod error;
pub mod functionalities;
pub mod protocol;
pub mod puf;
pub mod qsim;
pub mod rng;
pub mod simproof;
pub mod stats;
pub mod transcript;

pub use bits::BitString;
pub use error::{Error, Result};
