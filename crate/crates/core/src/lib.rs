pub mod coxeter;
pub mod graph;
pub mod numeric;
pub mod rho;
pub mod sigma;
pub mod star;
pub mod vector;

pub use graph::{Bipartition, Graph, GraphError, Parity, SpectralResult};
pub use numeric::{ExtendedValue, Mode, Number, Rational, Scalar};
pub use rho::{
    BranchClass, BranchTag, BranchVector, RecurrenceSequence, RhoError, RhoSolutions, SequenceKind,
};
pub use vector::GVector;
