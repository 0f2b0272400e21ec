//! Ground truth for tiny problems and reproducible instance generators.

mod dense;
mod exact;
mod gen;
mod vertex;

pub use exact::{dist_to_optimal_face, exact_inner_minimizer, exact_resolvent, hull_distance};
pub use gen::{
    gen_covering_lp, gen_random_sparse_certified, gen_random_sparse_lp, gen_tiny_mixed, l1svm_to_lp, normalize_samples,
    Certified,
};
pub use vertex::{vertex_enum_solve, OracleSolution, MAX_M, MAX_N};
