use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ringlinalg::{int_det, int_mul, smith_form, IntMatrix};
use crate::spgroup::{Perm, SpGroup, SpMatrix, StabChain, DEFAULT_SEED};
use crate::symmod::{classify, Classification, SymplecticModule};

use super::standard_matrix;

/// Cartan matrix of `E_7` (Bourbaki labeling: the chain `1-3-4-5-6-7` with
/// node `2` attached to node `4`).
pub const E7_CARTAN: [[i64; 7]; 7] = [
    [2, 0, -1, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0],
    [0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, -1, 2],
];

const RANK: usize = 7;

/// The `E_7` root lattice in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct E7Lattice {
    pub cartan: IntMatrix,
    /// The roots, sorted lexicographically.
    pub roots: Vec<Vec<i64>>,
    /// Simple reflections `s_i(v) = v - (v, α_i) α_i` as integer matrices.
    pub reflections: Vec<IntMatrix>,
    index: HashMap<Vec<i64>, u32>,
}

impl E7Lattice {
    pub fn new() -> Self {
        let cartan: IntMatrix = E7_CARTAN.iter().map(|r| r.to_vec()).collect();
        let reflections: Vec<IntMatrix> = (0..RANK)
            .map(|i| {
                let mut r: IntMatrix = (0..RANK).map(|a| (0..RANK).map(|b| i64::from(a == b)).collect()).collect();
                for j in 0..RANK {
                    r[i][j] -= cartan[i][j];
                }
                r
            })
            .collect();
        let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..RANK {
            let mut v = vec![0i64; RANK];
            v[i] = 1;
            if found.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for r in &reflections {
                let w = mat_vec(r, &v);
                if found.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let roots: Vec<Vec<i64>> = found.into_iter().collect();
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i as u32)).collect();
        E7Lattice { cartan, roots, reflections, index }
    }

    /// `(x, y) = xᵗ C y`.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        dot(x, &mat_vec(&self.cartan, y))
    }

    pub fn root_index(&self, v: &[i64]) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn gram_det(&self) -> Result<i128> {
        int_det(&self.cartan)
    }

    pub fn smith_diagonal(&self) -> Result<Vec<i64>> {
        Ok(smith_form(&self.cartan)?.diagonal())
    }

    /// Whether `w` preserves the form, i.e. `wᵗ C w = C`.
    pub fn is_isometry(&self, w: &IntMatrix) -> Result<bool> {
        if w.len() != RANK || w.iter().any(|r| r.len() != RANK) {
            return Ok(false);
        }
        let wt: IntMatrix = (0..RANK).map(|i| (0..RANK).map(|j| w[j][i]).collect()).collect();
        Ok(int_mul(&int_mul(&wt, &self.cartan)?, w)? == self.cartan)
    }

    /// The permutation of the roots induced by a lattice automorphism.
    pub fn root_perm(&self, w: &IntMatrix) -> Result<Perm> {
        let images = self
            .roots
            .iter()
            .map(|r| self.root_index(&mat_vec(w, r)).ok_or_else(|| Error::Validation("matrix does not permute the roots".into())))
            .collect::<Result<Vec<u32>>>()?;
        Ok(Perm::from_images(images))
    }

    /// The lattice automorphism with the given action on roots; its columns
    /// are the images of the simple roots.
    pub fn perm_matrix(&self, p: &Perm) -> IntMatrix {
        let cols: Vec<&Vec<i64>> = (0..RANK)
            .map(|j| {
                let mut v = vec![0i64; RANK];
                v[j] = 1;
                &self.roots[p.apply(self.index[&v]) as usize]
            })
            .collect();
        (0..RANK).map(|i| (0..RANK).map(|j| cols[j][i]).collect()).collect()
    }

    /// One root per line, space separated simple-root coordinates.
    pub fn roots_text(&self) -> String {
        self.roots.iter().map(|r| join(r) + "\n").collect()
    }
}

impl Default for E7Lattice {
    fn default() -> Self {
        Self::new()
    }
}

fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| dot(row, v)).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// The Weyl group of `E_7` acting on the roots, with the reduction map to
/// the symplectic group of `N = image(Λ/2Λ -> Λ^∨/2Λ^∨)`.
///
/// `N` is the column space of `C mod 2`; its basis is the images of the
/// first six simple roots whose columns are independent mod 2 (scanning in
/// label order), and `e_N(Cx, Cy) = xᵗ C y mod 2`.
#[derive(Clone, Debug)]
pub struct WeylE7 {
    pub lattice: E7Lattice,
    pub chain: StabChain,
    /// Simple roots whose images form the basis of `N`.
    pub basis_roots: Vec<usize>,
    n_module: SymplecticModule,
    classification: Classification,
    coords: HashMap<u8, Vec<u64>>,
}

impl WeylE7 {
    pub fn new() -> Result<Self> {
        let lattice = E7Lattice::new();
        let gens: Vec<Perm> = lattice.reflections.iter().map(|r| lattice.root_perm(r)).collect::<Result<_>>()?;
        let chain = StabChain::new(lattice.roots.len(), &gens, DEFAULT_SEED);
        let column = |j: usize| -> u8 { (0..RANK).fold(0, |acc, i| acc | ((lattice.cartan[i][j].rem_euclid(2) as u8) << i)) };
        // Greedy independent columns, tracked through the span they generate.
        let mut basis_roots = Vec::new();
        let mut span: Vec<u8> = vec![0];
        for j in 0..RANK {
            let c = column(j);
            if !span.contains(&c) {
                basis_roots.push(j);
                span = span.iter().flat_map(|&s| [s, s ^ c]).collect();
            }
        }
        if basis_roots.len() != 6 {
            return Err(Error::Soundness(format!("C mod 2 has rank {}, expected 6", basis_roots.len())));
        }
        let mut coords = HashMap::new();
        for mask in 0..64u32 {
            let v = basis_roots
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .fold(0u8, |acc, (_, &j)| acc ^ column(j));
            coords.insert(v, (0..6).map(|k| u64::from(mask >> k & 1)).collect());
        }
        let gram: Vec<u64> = basis_roots
            .iter()
            .flat_map(|&a| basis_roots.iter().map(move |&b| E7_CARTAN[a][b].rem_euclid(2) as u64))
            .collect();
        let n_module = SymplecticModule::new(vec![2; 6], 2, gram)?;
        let classification = classify(&n_module)?;
        Ok(WeylE7 { lattice, chain, basis_roots, n_module, classification, coords })
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// `N` in the basis of [`WeylE7::basis_roots`].
    pub fn n_module(&self) -> &SymplecticModule {
        &self.n_module
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    /// Coordinates in `N` of the image of a lattice vector.
    pub fn n_coords(&self, x: &[i64]) -> Vec<u64> {
        let cx = mat_vec(&self.lattice.cartan, x);
        let mask = cx.iter().enumerate().fold(0u8, |acc, (i, v)| acc | ((v.rem_euclid(2) as u8) << i));
        self.coords[&mask].clone()
    }

    fn lift(&self, y: &[u64]) -> Vec<i64> {
        let mut x = vec![0i64; RANK];
        for (k, &j) in self.basis_roots.iter().enumerate() {
            x[j] = (y[k] % 2) as i64;
        }
        x
    }

    /// The induced symplectic matrix of a lattice isometry, in the standard
    /// basis of type `(2,2,2)`.
    pub fn weyl_to_sp6(&self, w: &IntMatrix) -> Result<SpMatrix> {
        if !self.lattice.is_isometry(w)? {
            return Err(Error::Validation("matrix is not an isometry of the E7 lattice".into()));
        }
        standard_matrix(&self.n_module, &self.classification, |y| self.n_coords(&mat_vec(w, &self.lift(y))))
    }

    pub fn perm_to_sp6(&self, p: &Perm) -> Result<SpMatrix> {
        self.weyl_to_sp6(&self.lattice.perm_matrix(p))
    }

    /// `α ↦ -α` on the roots.
    pub fn minus_identity(&self) -> Perm {
        let images = self.lattice.roots.iter().map(|r| {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            self.lattice.root_index(&neg).expect("roots are closed under negation")
        });
        Perm::from_images(images.collect())
    }

    /// Images of the simple reflections.
    pub fn reflection_images(&self) -> Result<Vec<SpMatrix>> {
        self.lattice.reflections.iter().map(|r| self.weyl_to_sp6(r)).collect()
    }

    /// The seven 6x6 reflection images, each as a header line `s<i>`
    /// followed by its rows.
    pub fn reflection_images_text(&self) -> Result<String> {
        let mut out = String::new();
        for (i, a) in self.reflection_images()?.iter().enumerate() {
            out.push_str(&format!("s{}\n", i + 1));
            for r in 0..a.size() {
                out.push_str(&join(&(0..a.size()).map(|c| a.get(r, c)).collect::<Vec<_>>()));
                out.push('\n');
            }
        }
        Ok(out)
    }
}

/// Certification data for `W(E_7) -> Sp_6(F_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E7Certificate {
    pub root_count: usize,
    pub roots_have_norm_two: bool,
    pub gram_det: i128,
    pub smith_diagonal: Vec<i64>,
    pub weyl_order: u128,
    pub image_order: u128,
    pub minus_identity_in_w: bool,
    pub minus_identity_maps_to_identity: bool,
    pub reflections_have_det_minus_one: bool,
    pub w1_order: u128,
    pub w1_contains_minus_identity: bool,
    pub w1_image_order: u128,
    pub pairing_type: Vec<u64>,
    /// Every nonzero vector of `N` is the image of exactly the two roots `±α`.
    pub root_fibers_are_pairs: bool,
    pub homomorphism_on_generators: bool,
    pub random_pairs_checked: usize,
    pub homomorphism_on_random_pairs: bool,
}

impl E7Certificate {
    /// The kernel is `{±1}`: its order is `|W| / |image| = 2` and contains `-1`.
    pub fn kernel_is_plus_minus_one(&self) -> bool {
        self.image_order * 2 == self.weyl_order && self.minus_identity_in_w && self.minus_identity_maps_to_identity
    }

    /// `W^1` has index 2, meets the kernel trivially and maps onto the image.
    pub fn w1_is_isomorphic(&self) -> bool {
        self.w1_order * 2 == self.weyl_order && !self.w1_contains_minus_identity && self.w1_image_order == self.w1_order
    }

    pub fn is_certified(&self) -> bool {
        self.root_count == 126
            && self.roots_have_norm_two
            && self.gram_det == 2
            && self.pairing_type == [2, 2, 2]
            && self.root_fibers_are_pairs
            && self.reflections_have_det_minus_one
            && self.homomorphism_on_generators
            && self.homomorphism_on_random_pairs
            && self.kernel_is_plus_minus_one()
            && self.w1_is_isomorphic()
    }
}

/// Build the Weyl group and check every property of the reduction map.
pub fn certify_e7(random_pairs: usize, seed: u64) -> Result<E7Certificate> {
    let w = WeylE7::new()?;
    let lat = &w.lattice;
    let d = w.classification().type_d.clone();
    let roots_have_norm_two = lat.roots.iter().all(|r| lat.form(r, r) == 2);
    let images = w.reflection_images()?;
    let image = SpGroup::generated(&d, images.clone(), DEFAULT_SEED)?;
    let minus = w.minus_identity();
    let identity = SpMatrix::identity(&d);
    let reflections_have_det_minus_one =
        lat.reflections.iter().map(int_det).collect::<Result<Vec<_>>>()?.iter().all(|&x| x == -1);

    let gens: Vec<Perm> = lat.reflections.iter().map(|r| lat.root_perm(r)).collect::<Result<_>>()?;
    let w1_gens: Vec<Perm> = gens.iter().skip(1).map(|g| gens[0].then(g)).collect();
    let w1 = StabChain::new(lat.roots.len(), &w1_gens, DEFAULT_SEED);
    let w1_images: Vec<SpMatrix> = w1_gens.iter().map(|p| w.perm_to_sp6(p)).collect::<Result<_>>()?;
    let w1_image = SpGroup::generated(&d, w1_images, DEFAULT_SEED)?;

    let mut fibers: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (i, r) in lat.roots.iter().enumerate() {
        fibers.entry(w.n_coords(r)).or_default().push(i);
    }
    let root_fibers_are_pairs = fibers.len() == 63
        && !fibers.contains_key(&vec![0; 6])
        && fibers.values().all(|f| f.len() == 2 && minus.apply(f[0] as u32) == f[1] as u32);

    let hom = |a: &Perm, b: &Perm| -> Result<bool> {
        Ok(w.perm_to_sp6(&a.then(b))? == w.perm_to_sp6(b)?.mul(&w.perm_to_sp6(a)?))
    };
    let mut homomorphism_on_generators = true;
    for a in &gens {
        for b in &gens {
            homomorphism_on_generators &= hom(a, b)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Perm, Perm)> =
        (0..random_pairs).map(|_| (w.chain.random_element(&mut rng), w.chain.random_element(&mut rng))).collect();
    let results = crate::par::map_slice(&pairs, |(a, b)| hom(a, b));
    let homomorphism_on_random_pairs = results.into_iter().collect::<Result<Vec<bool>>>()?.into_iter().all(|x| x);

    Ok(E7Certificate {
        root_count: lat.roots.len(),
        roots_have_norm_two,
        gram_det: lat.gram_det()?,
        smith_diagonal: lat.smith_diagonal()?,
        weyl_order: w.order(),
        image_order: image.order(),
        minus_identity_in_w: w.chain.contains(&minus),
        minus_identity_maps_to_identity: w.perm_to_sp6(&minus)? == identity,
        reflections_have_det_minus_one,
        w1_order: w1.order(),
        w1_contains_minus_identity: w1.contains(&minus),
        w1_image_order: w1_image.order(),
        pairing_type: d.divisors().to_vec(),
        root_fibers_are_pairs,
        homomorphism_on_generators,
        random_pairs_checked: random_pairs,
        homomorphism_on_random_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_basics() {
        let lat = E7Lattice::new();
        assert_eq!(lat.roots.len(), 126);
        assert_eq!(lat.gram_det().unwrap(), 2);
        assert_eq!(lat.smith_diagonal().unwrap(), vec![1, 1, 1, 1, 1, 1, 2]);
        assert!(lat.reflections.iter().all(|r| lat.is_isometry(r).unwrap()));
    }

    #[test]
    fn minus_identity_is_trivial_mod_two() {
        let w = WeylE7::new().unwrap();
        let minus: IntMatrix = (0..RANK).map(|i| (0..RANK).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        let d = w.classification().type_d.clone();
        assert_eq!(w.weyl_to_sp6(&minus).unwrap(), SpMatrix::identity(&d));
        assert_eq!(w.lattice.perm_matrix(&w.minus_identity()), minus);
    }

    #[test]
    fn non_isometry_is_rejected() {
        let w = WeylE7::new().unwrap();
        let mut bad: IntMatrix = (0..RANK).map(|i| (0..RANK).map(|j| i64::from(i == j)).collect()).collect();
        bad[0][1] = 1;
        assert!(matches!(w.weyl_to_sp6(&bad), Err(Error::Validation(_))));
    }

    #[test]
    fn certificate() {
        let c = certify_e7(200, 5).unwrap();
        assert_eq!(c.weyl_order, 2_903_040);
        assert_eq!(c.image_order, 1_451_520);
        assert!(c.is_certified(), "{c:?}");
    }
}
