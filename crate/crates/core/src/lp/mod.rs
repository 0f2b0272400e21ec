//! Problem representation, residuals, transformations and file formats.

pub mod json;
pub mod mps;
pub mod problem;
pub mod residual;
pub mod transform;

pub use problem::{LpProblem, PrimalDualPoint};
pub use residual::{residual_e1, residual_e2, residual_e3, KktParts, ResidualKind};
pub use transform::{apply_form, choose_form, dualize, Form, SolutionMap};
