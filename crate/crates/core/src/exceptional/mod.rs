//! The exceptional isomorphisms `S_6 ≅ Sp_4(F_2)` (six-point model) and
//! `W(E_7) / {±1} ≅ Sp_6(F_2)` (E_7 root lattice mod 2), with certificates.

mod e7;
mod six;

pub use e7::{certify_e7, E7Certificate, E7Lattice, WeylE7, E7_CARTAN};
pub use six::{certify_s6, S6Certificate, SixPointModel};

use crate::error::Result;
use crate::spgroup::SpMatrix;
use crate::symmod::{Classification, SymplecticModule, TypeD};

/// The matrix, in the standard symplectic basis given by `cls`, of a linear
/// map on `module` given on coordinates.
pub(crate) fn standard_matrix<F>(module: &SymplecticModule, cls: &Classification, map: F) -> Result<SpMatrix>
where
    F: Fn(&[u64]) -> Vec<u64>,
{
    let d: &TypeD = &cls.type_d;
    let r = 2 * d.g();
    let cols: Vec<Vec<u64>> = (0..r)
        .map(|j| {
            let mut unit = vec![0u64; r];
            unit[j] = 1;
            cls.to_standard(module, &map(&cls.from_standard(module, &unit)))
        })
        .collect();
    SpMatrix::from_columns(d, &cols)
}
