//! Quadratic models over spins or bits, genomics encoders, and an embedding
//! cost estimate.

mod embedding;
mod encoders;
mod model;
mod native;

pub use embedding::{embedding_overhead, Connectivity, EmbeddingEstimate};
pub use encoders::*;
pub use model::{BinaryModel, Convention, IsingModel, QuadraticModel};
pub use native::{NativeInstance, NativeSolution, Problem};
