//! Phase retrieval for finite frames.
//!
//! Builds real and complex frames, decides whether a signal is determined up
//! to a global unimodular factor by the magnitudes of its frame coefficients,
//! produces explicit ambiguous pairs when it is not, and reconstructs signals
//! from magnitude-only measurements.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod frames;
pub mod injectivity;
pub mod linalg;
pub mod magnitude;
pub mod reconstruct;

pub use error::Error;
pub use frames::{AnyFrame, CoefficientRange, Frame, FrameBounds};
pub use injectivity::{certify, InjectivityCertificate, SearchBudget, Verdict, Witness};
pub use linalg::{DenseMatrix, Field, Scalar, Tolerance};
pub use magnitude::{magnitude_map, ray_equal, MagnitudeVector, Ray, SignPattern};
pub use reconstruct::{reconstruct_complex, reconstruct_real, ReconstructionResult, Status};
