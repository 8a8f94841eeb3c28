//! Packet error prediction for interleaved, block-coded transmission over
//! correlated (Markov-modulated) bit-error channels.
//!
//! * [`channel`]: channel specs and finite-state Markov channel models.
//! * [`dist`]: error-count distributions of one and two interleaved codewords.
//! * [`models`]: the three analytical packet-error models and the
//!   memoryless baseline.
//! * [`mc`]: Monte Carlo reference simulator with confidence intervals.
//! * [`oracle`]: exhaustive enumeration for small instances.
//! * [`analysis`]: sweeps, depth optimisation, throughput and result files.

pub mod analysis;
pub mod channel;
pub mod dist;
mod error;
pub mod linalg;
pub mod mc;
pub mod models;
pub mod oracle;
mod par;

pub use channel::{ibp_from_stats, ChannelSpec, CodeSpec, FsmcModel, SchemeSpec};
pub use error::{Error, Result};
pub use models::{ModelKind, PacketErrorResult};
pub use par::Execution;
