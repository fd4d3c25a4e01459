//! Design and evaluation of irregular LDPC codes for the binary erasure
//! channel.
//!
//! The crate covers the full design loop:
//!
//! - [`degree_dist`] — edge-perspective degree distributions and rates;
//! - [`de_engine`] — density evolution, BP thresholds, bounds, and the data
//!   behind bifurcation / graphical-threshold plots;
//! - [`nde_train`] — gradient training of the unrolled recursion with
//!   analytic reverse-mode gradients (the design optimizer);
//! - [`diffevo`] — a differential-evolution baseline for comparison;
//! - [`code_builder`] — finite parity-check matrices sampled from a design,
//!   with 4-cycle removal;
//! - [`decoder_sim`] — BEC peeling and AWGN sum-product decoding plus a
//!   Monte Carlo BER harness.

pub mod de_engine;
pub mod degree_dist;
pub mod error;

pub use error::{Error, Result};
