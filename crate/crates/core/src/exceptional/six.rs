use crate::error::{Error, Result};
use crate::spgroup::{Perm, SpGroup, SpMatrix, StabChain, DEFAULT_SEED};
use crate::symmod::{classify, Classification, SymplecticModule};

use super::standard_matrix;

/// `N = ker(Σ) / ⟨Δ⟩` inside `F_2^6`, with the pairing induced by the
/// standard dot product.
///
/// The basis of `N` is the cosets of `b_i + b_6` for `i = 1..4`; vectors of
/// `F_2^6` are bitmasks with bit `i` for `b_{i+1}`.
#[derive(Clone, Debug)]
pub struct SixPointModel {
    module: SymplecticModule,
    classification: Classification,
}

const ALL: u8 = 0b11_1111;

impl SixPointModel {
    pub fn new() -> Result<Self> {
        let reps: Vec<u8> = (0..4).map(Self::basis_rep).collect();
        let gram: Vec<u64> = reps.iter().flat_map(|&a| reps.iter().map(move |&b| dot(a, b))).collect();
        let module = SymplecticModule::new(vec![2; 4], 2, gram)?;
        let classification = classify(&module)?;
        Ok(SixPointModel { module, classification })
    }

    fn basis_rep(i: usize) -> u8 {
        (1 << i) | (1 << 5)
    }

    /// The module `N` in the coset basis.
    pub fn module(&self) -> &SymplecticModule {
        &self.module
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    /// The representative of a coset with the given coordinates.
    pub fn representative(&self, coords: &[u64]) -> u8 {
        (0..4).filter(|&i| coords[i] % 2 == 1).fold(0, |acc, i| acc ^ Self::basis_rep(i))
    }

    /// Coordinates of the coset of an even-weight vector.
    pub fn coset_coords(&self, v: u8) -> Result<Vec<u64>> {
        if v & !ALL != 0 || v.count_ones() % 2 == 1 {
            return Err(Error::Input(format!("{v:#08b} is not in ker(Σ)")));
        }
        let v = if v & (1 << 4) != 0 { v ^ ALL } else { v };
        Ok((0..4).map(|i| u64::from(v >> i & 1)).collect())
    }

    /// The induced pairing `e_N` on coset coordinates, via representatives.
    pub fn pairing(&self, a: &[u64], b: &[u64]) -> u64 {
        dot(self.representative(a), self.representative(b))
    }

    fn permute(sigma: &Perm, v: u8) -> u8 {
        (0..6).filter(|&i| v >> i & 1 == 1).fold(0, |acc, i| acc | 1 << sigma.apply(i as u32))
    }

    /// The induced action of `σ ∈ S_6` on `N`, as a matrix in the standard
    /// symplectic basis of type `(2,2)`.
    pub fn s6_to_sp4(&self, sigma: &Perm) -> Result<SpMatrix> {
        if sigma.images().len() != 6 {
            return Err(Error::Input("expected a permutation of 6 points".into()));
        }
        standard_matrix(&self.module, &self.classification, |x| {
            self.coset_coords(Self::permute(sigma, self.representative(x))).expect("permutations preserve ker(Σ)")
        })
    }
}

fn dot(a: u8, b: u8) -> u64 {
    u64::from((a & b).count_ones() % 2)
}

/// Certification data for `S_6 -> Sp_4(F_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S6Certificate {
    pub pairing_alternating: bool,
    pub source_order: u128,
    pub image_order: u128,
    pub kernel_size: usize,
    /// `ρ(στ) = ρ(σ)ρ(τ)` on every pair.
    pub homomorphism: bool,
    pub images_symplectic: bool,
}

impl S6Certificate {
    pub fn is_isomorphism(&self) -> bool {
        self.pairing_alternating
            && self.homomorphism
            && self.images_symplectic
            && self.kernel_size == 1
            && self.source_order == self.image_order
    }
}

/// Evaluate the six-point map on all of `S_6`.
pub fn certify_s6() -> Result<S6Certificate> {
    let model = SixPointModel::new()?;
    let m = model.module();
    let pairing_alternating = (0..m.size()).all(|x| model.pairing(&m.decode(x), &m.decode(x)) == 0);
    let gens = [Perm::from_images(vec![1, 0, 2, 3, 4, 5]), Perm::from_images(vec![1, 2, 3, 4, 5, 0])];
    let s6 = StabChain::new(6, &gens, DEFAULT_SEED);
    let elements = s6.elements();
    let images: Vec<SpMatrix> = elements.iter().map(|s| model.s6_to_sp4(s)).collect::<Result<_>>()?;
    let d = model.classification().type_d.clone();
    let std = SymplecticModule::standard(&d);
    let images_symplectic = images.iter().all(|a| a.is_symplectic(&std));
    let identity = SpMatrix::identity(&d);
    let kernel_size = images.iter().filter(|a| **a == identity).count();
    let index: std::collections::HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elements.len();
    let homomorphism = crate::par::all_range(n * n, |ij| {
        let (i, j) = (ij / n, ij % n);
        // `then` applies the left factor first, so it maps to the reversed product.
        let prod = elements[i].then(&elements[j]);
        images[index[&prod]] == images[j].mul(&images[i])
    });
    let image = SpGroup::generated(&d, gens.iter().map(|g| model.s6_to_sp4(g)).collect::<Result<_>>()?, DEFAULT_SEED)?;
    Ok(S6Certificate {
        pairing_alternating,
        source_order: s6.order(),
        image_order: image.order(),
        kernel_size,
        homomorphism,
        images_symplectic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity() {
        let model = SixPointModel::new().unwrap();
        assert_eq!(model.classification().type_d.divisors(), &[2, 2]);
        let id = model.s6_to_sp4(&Perm::identity(6)).unwrap();
        assert_eq!(id, SpMatrix::identity(&model.classification().type_d));
    }

    #[test]
    fn transposition_is_a_transvection() {
        let model = SixPointModel::new().unwrap();
        let t = model.s6_to_sp4(&Perm::from_images(vec![1, 0, 2, 3, 4, 5])).unwrap();
        // A - I has rank one: all nonzero columns of A - I coincide.
        let cols: Vec<Vec<u64>> =
            (0..4).map(|j| (0..4).map(|i| (t.get(i, j) + u64::from(i == j)) % 2).collect()).collect();
        let nonzero: Vec<&Vec<u64>> = cols.iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
        assert!(!nonzero.is_empty());
        assert!(nonzero.iter().all(|c| *c == nonzero[0]));
    }

    #[test]
    fn coset_coordinates_round_trip() {
        let model = SixPointModel::new().unwrap();
        for v in 0..64u8 {
            if v.count_ones() % 2 == 0 {
                let c = model.coset_coords(v).unwrap();
                let r = model.representative(&c);
                assert!(r == v || r == v ^ ALL);
            } else {
                assert!(model.coset_coords(v).is_err());
            }
        }
    }

    #[test]
    fn certificate() {
        let c = certify_s6().unwrap();
        assert_eq!(c.image_order, 720);
        assert!(c.is_isomorphism(), "{c:?}");
    }
}
