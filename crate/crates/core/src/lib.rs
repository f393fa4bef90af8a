//! Link-level simulation of OAM (orbital angular momentum) multiplexing between
//! two uniform circular arrays under co-frequency, co-mode jamming.
//!
//! The transmitter senses which OAM modes are jammed by energy detection,
//! re-modulates the received jamming with a programmable gain amplifier on
//! those modes, and multiplexes ordinary payload on the remaining modes. The
//! receiver recovers the jammed-mode bits with a preamble-calibrated energy
//! detector. Per-mode SNR and the spectrum efficiency of the whole link are
//! evaluated by seeded Monte Carlo sweeps.
//!
//! Module map:
//!
//! * [`geometry`]: element layout, LoS channel matrix, per-mode channel gain.
//! * [`special`]: Bessel J, gamma and chi-square CDFs.
//! * [`transceiver`]: sample blocks, mode multiplexing and decomposition.
//! * [`jamming`]: seeded generators for jamming, noise and payload.
//! * [`sensing`]: transmit-side jammed/unjammed classification.
//! * [`backscatter`]: PGA re-modulation and the receive energy detector.
//! * [`metrics`]: per-mode SNR, power allocation, spectrum efficiency.
//! * [`sweep`]: end-to-end trials over the SNR / jammed-count / array-size grid.
//! * [`scenario`], [`report`]: scenario files, CSV output and trend checks.
//! * [`oracle`]: slow independent cross-checks used by `oam-sim --oracle`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backscatter;
pub mod config;
pub mod error;
pub mod geometry;
pub mod jamming;
pub mod metrics;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod sensing;
pub mod special;
pub mod sweep;
pub mod transceiver;

pub use num::complex::Complex64;

pub use config::{LinkConfig, ModeRange, PgaAlphabet};
pub use error::{Error, Result};
