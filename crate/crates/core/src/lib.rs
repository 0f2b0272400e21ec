pub mod error;
pub mod inner;
pub mod lp;
pub mod oracle;
pub mod outer;
pub mod solvers;
pub mod sparse;

pub use error::{Error, Result};
pub use lp::{LpProblem, PrimalDualPoint, ResidualKind};
pub use sparse::SparseMatrix;
