//! Finite theta groups: the standard group `H_D`, general groups given by a
//! bilinear cocycle, automorphisms and their lifts, inversions, the
//! odd-order construction with its canonical splitting, Baer sums,
//! the Schrödinger representation and quadratic refinements.

mod aut;
mod group;
mod quadratic;
mod schrodinger;

pub use aut::*;
pub use group::*;
pub use quadratic::*;
pub use schrodinger::*;
