//! Rate-distortion tools for lossy source coding with side information at the
//! decoder, and certificates that a two-message exchange (decoder speaks
//! first) strictly lowers the sum rate below the one-message optimum.
//!
//! - [`info`]: entropies, conditional mutual information, pmf and channel types.
//! - [`wyner_ziv`]: a grid oracle for the one-message rate-distortion function.
//! - [`erasure`]: exact one-message rate reductions of binary sources with
//!   erasure distortion, and the functionals used by the certificates.
//! - [`gain`]: midpoint-violation certificates and witness search.
//! - [`two_message`]: explicit two-message schemes and ratio witnesses.
//! - [`cli`]: the `wzgain` command line.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod erasure;
pub mod error;
pub mod gain;
pub mod info;
pub mod io;
pub mod search;
pub mod two_message;
pub mod wyner_ziv;

pub use error::{Error, Result};
pub use info::{
    binary_entropy, conditional_entropy, conditional_mutual_information, entropy_of_ratio, expected_distortion, Bits,
    Channel, DistortionMatrix, FinitePmf, JointPmf, JointTable, ERASURE,
};
