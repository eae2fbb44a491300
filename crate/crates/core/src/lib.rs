//! Finite-group computations around theta groups and symplectic modules.
//!
//! The crate covers finite symplectic modules over residue rings
//! ([`symmod`]), their symplectic groups and stabilizer chains
//! ([`spgroup`]), finite theta (Heisenberg) groups and their automorphisms
//! ([`theta`]), the degree-two cohomology class of the automorphism
//! extension and the lifting decision it governs ([`cohom`]), the exceptional
//! isomorphisms `S6 = Sp4(F2)` and `W(E7) -> Sp6(F2)` ([`exceptional`]), and
//! finite-precision checks of paramodular group identities over `Z/2^k`
//! ([`paramod`]). [`ringlinalg`] supplies the exact linear algebra used by
//! all of them, [`suite`] runs the verification criteria and
//! [`report`] serializes their results.

// Matrix code indexes several arrays by the same coordinate.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod cohom;
pub mod error;
pub mod exceptional;
pub mod par;
pub mod paramod;
pub mod report;
pub mod ringlinalg;
pub mod spgroup;
pub mod suite;
pub mod symmod;
pub mod theta;

pub use error::{Error, Result};
