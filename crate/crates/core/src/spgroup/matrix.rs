use std::fmt;

use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::ringlinalg::ResMatrix;
use crate::symmod::{SymplecticModule, TypeD};

use super::Perm;

/// An automorphism of the standard module `M_D`, as a `2g x 2g` integer
/// matrix whose row `i` is read modulo the order of generator `i`.
///
/// Column `j` holds the coordinates of the image of generator `j`; elements
/// act as column vectors `(x_1..x_g, chi_1..chi_g)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpMatrix {
    size: usize,
    row_mod: Vec<u64>,
    data: Vec<u64>,
}

impl SpMatrix {
    /// Matrix for type `D` from row-major entries (reduced per row).
    pub fn new(d: &TypeD, data: Vec<u64>) -> Result<Self> {
        let size = 2 * d.g();
        if data.len() != size * size {
            return Err(Error::Input(format!("expected {} entries, got {}", size * size, data.len())));
        }
        let mut row_mod = d.divisors().to_vec();
        row_mod.extend_from_slice(d.divisors());
        let data = data.iter().enumerate().map(|(k, &x)| x % row_mod[k / size]).collect();
        Ok(SpMatrix { size, row_mod, data })
    }

    /// Matrix from signed rows.
    pub fn from_signed(d: &TypeD, rows: &[Vec<i64>]) -> Result<Self> {
        let flat: Vec<u64> = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(d.exponent().max(1) as i64) as u64)
            .collect();
        Self::new(d, flat)
    }

    pub fn identity(d: &TypeD) -> Self {
        let size = 2 * d.g();
        let mut data = vec![0u64; size * size];
        for i in 0..size {
            data[i * size + i] = 1;
        }
        Self::new(d, data).expect("square")
    }

    /// `-I`.
    pub fn minus_identity(d: &TypeD) -> Self {
        let size = 2 * d.g();
        let mut row_mod = d.divisors().to_vec();
        row_mod.extend_from_slice(d.divisors());
        let mut data = vec![0u64; size * size];
        for i in 0..size {
            data[i * size + i] = row_mod[i] - 1;
        }
        Self::new(d, data).expect("square")
    }

    /// The matrix whose columns are the given images of the generators.
    pub fn from_columns(d: &TypeD, cols: &[Vec<u64>]) -> Result<Self> {
        let size = 2 * d.g();
        if cols.len() != size || cols.iter().any(|c| c.len() != size) {
            return Err(Error::Input("column count or length mismatch".into()));
        }
        let mut data = vec![0u64; size * size];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..size {
                data[i * size + j] = c[i];
            }
        }
        Self::new(d, data)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.size + j]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn row_moduli(&self) -> &[u64] {
        &self.row_mod
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.size).map(|i| self.get(i, j)).collect()
    }

    /// `A m`.
    pub fn apply(&self, m: &[u64]) -> Vec<u64> {
        (0..self.size)
            .map(|i| {
                let r = self.row_mod[i];
                (0..self.size).fold(0u64, |acc, j| (acc + mul_mod(self.get(i, j), m[j] % r, r)) % r)
            })
            .collect()
    }

    /// Product `self * other` (apply `other` first).
    pub fn mul(&self, other: &SpMatrix) -> SpMatrix {
        let cols: Vec<Vec<u64>> = (0..self.size).map(|j| self.apply(&other.column(j))).collect();
        let mut data = vec![0u64; self.size * self.size];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..self.size {
                data[i * self.size + j] = c[i];
            }
        }
        SpMatrix { size: self.size, row_mod: self.row_mod.clone(), data }
    }

    /// Whether the pairing of the standard module is preserved.
    pub fn is_symplectic(&self, module: &SymplecticModule) -> bool {
        let cols: Vec<Vec<u64>> = (0..self.size).map(|j| self.column(j)).collect();
        let wd = (0..self.size).all(|j| {
            // Column j must have order dividing the order of generator j.
            module.element_order(&cols[j]) <= module.orders()[j] && module.orders()[j].is_multiple_of(module.element_order(&cols[j]))
        });
        wd && (0..self.size).all(|i| {
            (0..self.size).all(|j| module.pair_coords(&cols[i], &cols[j]) == module.gram_entry(i, j))
        })
    }

    /// Inverse of a symplectic matrix via `e(A^-1 x, y) = e(x, A y)`.
    pub fn symplectic_inverse(&self, module: &SymplecticModule, d: &TypeD) -> SpMatrix {
        let g = d.g();
        let n = module.modulus();
        let images: Vec<Vec<u64>> = (0..self.size).map(|j| self.column(j)).collect();
        let cols: Vec<Vec<u64>> = (0..self.size)
            .map(|j| {
                let mut x = vec![0u64; self.size];
                x[j] = 1 % module.orders()[j];
                let mut out = vec![0u64; self.size];
                for (i, &di) in d.divisors().iter().enumerate() {
                    let unit = n / di;
                    out[i] = module.pair_coords(&x, &images[g + i]) / unit;
                    out[g + i] = module.pair_coords(&images[i], &x) / unit;
                }
                out
            })
            .collect();
        SpMatrix::from_columns(d, &cols).expect("square")
    }

    /// Permutation of the elements of `module` (by index) induced by `self`.
    pub fn to_perm(&self, module: &SymplecticModule) -> Perm {
        let r = module.rank();
        let gen_images: Vec<usize> = (0..r).map(|j| module.encode(&self.column(j))).collect();
        let mut images = vec![0u32; module.size()];
        // Walk indices in order; each element's image is built from a
        // predecessor differing in the last nonzero coordinate.
        for idx in 1..module.size() {
            let c = module.decode(idx);
            let k = (0..r).rev().find(|&k| c[k] != 0).expect("nonzero");
            let mut prev = c.clone();
            prev[k] -= 1;
            let p = module.encode(&prev);
            images[idx] = module.add(images[p] as usize, gen_images[k]) as u32;
        }
        Perm::from_images(images)
    }

    /// Recover the matrix of a linear permutation.
    pub fn from_perm(p: &Perm, module: &SymplecticModule, d: &TypeD) -> SpMatrix {
        let cols: Vec<Vec<u64>> =
            (0..module.rank()).map(|j| module.decode(p.apply(module.generator(j) as u32) as usize)).collect();
        SpMatrix::from_columns(d, &cols).expect("square")
    }

    /// As a residue matrix modulo the exponent (for serialization).
    pub fn to_res(&self) -> ResMatrix {
        let m = self.row_mod.iter().copied().max().unwrap_or(1);
        ResMatrix::from_vec(self.size, self.size, m, self.data.clone()).expect("reduced entries")
    }
}

impl fmt::Debug for SpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpMatrix{:?}", self.to_res())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_round_trip_and_inverse() {
        let d = TypeD::new(&[2, 4]).unwrap();
        let m = SymplecticModule::standard(&d);
        // Transvection along the order-4 generator x2.
        let t = {
            let cols: Vec<Vec<u64>> = (0..4)
                .map(|j| {
                    let mut y = vec![0u64; 4];
                    y[j] = 1;
                    let v = vec![0, 1, 0, 0];
                    let w = m.pair_coords(&y, &v) / (m.modulus() / 4);
                    m.add_coords(&y, &m.scale_coords(w, &v))
                })
                .collect();
            SpMatrix::from_columns(&d, &cols).unwrap()
        };
        assert!(t.is_symplectic(&m));
        let a = SpMatrix::identity(&d).mul(&t);
        let p = a.to_perm(&m);
        assert_eq!(SpMatrix::from_perm(&p, &m, &d), a);
        let inv = a.symplectic_inverse(&m, &d);
        assert_eq!(inv.mul(&a), SpMatrix::identity(&d));
        for idx in 0..m.size() {
            assert_eq!(m.encode(&a.apply(&m.decode(idx))), p.apply(idx as u32) as usize);
        }
    }
}
