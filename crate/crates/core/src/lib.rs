//! Grover search over DNA read windows with explicit data loading, hardware
//! runtime arithmetic, QUBO/Ising encoders for genomics optimization
//! problems, classical reference solvers, and time-to-solution scaling.

pub mod cli;
pub mod error;
pub mod fit;
pub mod genome;
pub mod grover;
pub mod output;
pub mod qsim;
pub mod qubo;
pub mod runtime;
pub mod solvers;
pub mod tts;

pub use error::{Error, Result};
