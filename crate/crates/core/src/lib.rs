//! Direct nonlinear Fourier transform of the Zakharov–Shabat system with
//! sixth-order conservative one-step schemes.

pub mod error;
pub mod experiments;
pub mod fastlayer;
pub mod metrics;
pub mod pauli;
pub mod poly;
pub mod propagator;
pub mod schemes;
pub mod signals;
pub mod stencil;
pub mod zbuilder;

pub use error::{Error, Result};
pub use num_complex::Complex64;
