//! Solvers for the diverse rule (`lambda = 1`).

mod fptas;
mod kpcover;
mod polymul;
mod sc;
mod unanimous;

pub use fptas::{scaled_utility, solve_dk_fptas, FptasSolution};
pub use kpcover::solve_dk_kpcover;
pub use polymul::{
    poly_product_project, poly_product_project_with, solve_dk_polymul, solve_dk_polymul_with, IndexedPolynomial,
    PolyKey, ProductMethod,
};
pub use sc::solve_dk_sc_unary;
pub use unanimous::solve_dk_unanimous;
