//! Sum-rate maximization on the two-user Gaussian interference channel with
//! successive interference cancellation, and a decentralized rate-oscillation
//! algorithm that approaches it without coordination.
//!
//! - [`channel`]: gains, SNRs and Shannon capacities.
//! - [`centralized`]: exact optimum over the four decoding architectures.
//! - [`symmetric`]: closed forms and region geometry for the symmetric channel.
//! - [`sim`]: time-stepped simulation of the decentralized algorithm.
//! - [`analysis`]: expected rates, efficiency and benchmark sweeps.
//! - [`oracle`]: brute-force references used for verification.
//! - [`verify`]: seeded randomized check suites.
//! - [`cli`]: the `sicrate` command line.

pub mod analysis;
pub mod centralized;
pub mod channel;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod sim;
pub mod symmetric;
pub mod verify;

pub use error::{Error, Result};
