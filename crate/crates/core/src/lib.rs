//! Link-level kernels for multicarrier waveforms over doubly selective channels.
//!
//! The crate is `no_std` (it needs `alloc`) and holds everything that is a pure
//! function of its inputs:
//!
//! - [`transforms`]: unitary kernels (DFT, DFnT, DAFT, WHT, ISFFT/SFFT,
//!   row-column interleaver) and the discrete Mellin-Fourier mapping.
//! - [`channel`]: random P-path linear time-varying channels, their sampled
//!   response and the post-prefix time-domain channel matrix.
//! - [`modems`]: OFDM, OCDM, AFDM, OTFS, ODDM, OTSM and ODSS behind one
//!   [`modems::Modem`] interface.
//! - [`detection`]: Gray QAM, linear MMSE detection and bit-error counting.
//!
//! IO, configuration and the Monte Carlo driver live in the `wavebench` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod detection;
mod error;
pub mod fft;
pub mod linalg;
pub mod modems;
pub mod transforms;

pub use error::{Error, Result};
pub use linalg::CMatrix;

/// Complex baseband sample.
pub type C64 = num_complex::Complex64;

/// Direction of a transform pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}
