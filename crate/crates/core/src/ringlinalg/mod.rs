//! Exact linear algebra over `Z/m` and over `Z`.
//!
//! [`ResMatrix`] is a dense row-major matrix of residues; [`BitMatrix`] is
//! its bit-packed specialization to `m = 2`. [`solve_mod`] handles arbitrary
//! composite moduli by splitting into prime powers, [`howell_span`] returns a
//! canonical basis of a submodule of `(Z/m)^c`, and [`smith_form`] computes
//! the Smith normal form of an integer matrix with unimodular transforms.

mod bitmatrix;
mod howell;
mod resmatrix;
mod smith;
mod solve;

pub use bitmatrix::{BitMatrix, BitSolution};
pub use howell::{howell_span, span_contains, span_size};
pub use resmatrix::ResMatrix;
pub use smith::{int_det, int_mul, smith_form, IntMatrix, SmithForm};
pub use solve::{solve_mod, ModSolution};
