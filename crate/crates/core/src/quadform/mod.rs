//! Quadratic forms attached to the equation: the pencil matrices, the two
//! changes of variables, the reduced pencils derived from them, ternary form
//! solving and conic parameterisation.

mod conic;
mod matrix;
mod reduce;
mod ternary;

pub use conic::{
    conic_base_point, parameterize_conic, BinaryQuadric, ConicBasePoint, ConicOutcome, QuadricOrder, QuadricPair,
};
pub use matrix::{
    build_m1, build_m2, change_c, change_d, conjugate, evaluate_form, pencil_reductions, pqrs_from_solution,
    Chart, Matrix4, PencilReductions, SymMatrix4,
};
pub use ternary::{hilbert_symbol, legendre_solve, local_obstruction, Diagonalization, Place, TernaryForm};
