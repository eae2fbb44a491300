//! Finite symplectic modules: types, the standard module, classification,
//! direct sums and primary decomposition.

mod classify;
mod module;
mod typed;

pub use classify::{change_basis, classify, direct_sum, prime_parts, scramble, Classification, PrimePart};
pub use module::{ModElement, SymplecticModule, MAX_ENUMERATED};
pub use typed::{scalar_modulus, types_up_to, TypeD};

/// The standard module of type `D`.
pub fn standard_module(d: &TypeD) -> SymplecticModule {
    SymplecticModule::standard(d)
}
