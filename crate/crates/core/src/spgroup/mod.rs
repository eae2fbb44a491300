//! Symplectic groups `Sp(M_D)` for homogeneous prime types: transvection
//! generators, the permutation action on `M_D`, stabilizer chains and the
//! distinguished subgroups used by the obstruction computations.

mod chain;
mod matrix;
mod perm;

pub use chain::{StabChain, DEFAULT_SEED};
pub use matrix::SpMatrix;
pub use perm::Perm;

use crate::error::{Error, Result};
use crate::ringlinalg::ResMatrix;
use crate::symmod::{SymplecticModule, TypeD};

/// `p^{g^2} prod_{i=1..g} (p^{2i} - 1)`, the order of `Sp_2g(F_p)`.
pub fn classical_order(p: u64, g: usize) -> u128 {
    let p = p as u128;
    let mut acc = p.pow((g * g) as u32);
    for i in 1..=g {
        acc *= p.pow(2 * i as u32) - 1;
    }
    acc
}

/// The transvection `x -> x + w(x, v) v`, where `w = e / (n/p)` is the
/// `F_p`-valued form attached to the pairing.
pub fn transvection(module: &SymplecticModule, d: &TypeD, v: &[u64]) -> SpMatrix {
    let p = d.exponent();
    let unit = module.modulus() / p;
    let cols: Vec<Vec<u64>> = (0..module.rank())
        .map(|j| {
            let mut y = vec![0u64; module.rank()];
            y[j] = 1;
            let w = module.pair_coords(&y, v) / unit;
            module.add_coords(&y, &module.scale_coords(w, v))
        })
        .collect();
    SpMatrix::from_columns(d, &cols).expect("square")
}

fn homogeneous_prime(d: &TypeD) -> Result<u64> {
    d.homogeneous_prime()
        .ok_or_else(|| Error::Unsupported(format!("type {d} is not (p,...,p) with p prime")))
}

fn unit_vector(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; len];
    v[i] = 1;
    v
}

/// Transvections along `e_i`, `f_i` and `f_i + f_{i+1}`.
pub fn transvection_generators(d: &TypeD) -> Result<Vec<SpMatrix>> {
    homogeneous_prime(d)?;
    let g = d.g();
    let module = SymplecticModule::standard(d);
    let mut vs: Vec<Vec<u64>> = Vec::new();
    for i in 0..g {
        vs.push(unit_vector(2 * g, i));
        vs.push(unit_vector(2 * g, g + i));
        if i + 1 < g {
            let mut v = unit_vector(2 * g, g + i);
            v[g + i + 1] = 1;
            vs.push(v);
        }
    }
    Ok(vs.iter().map(|v| transvection(&module, d, v)).collect())
}

/// A subgroup of `Sp(M_D)` with its stabilizer chain on the elements of `M_D`.
#[derive(Clone, Debug)]
pub struct SpGroup {
    d: TypeD,
    module: SymplecticModule,
    seed: u64,
    generators: Vec<SpMatrix>,
    chain: StabChain,
}

impl SpGroup {
    /// The full group `Sp(M_D)`, certified against the classical order.
    pub fn full(d: &TypeD, seed: u64) -> Result<SpGroup> {
        let p = homogeneous_prime(d)?;
        let grp = SpGroup::generated(d, transvection_generators(d)?, seed)?;
        let expect = classical_order(p, d.g());
        if grp.order() != expect {
            return Err(Error::Soundness(format!(
                "transvections generate a group of order {} instead of {expect}",
                grp.order()
            )));
        }
        Ok(grp)
    }

    /// The subgroup generated by symplectic matrices.
    pub fn generated(d: &TypeD, generators: Vec<SpMatrix>, seed: u64) -> Result<SpGroup> {
        homogeneous_prime(d)?;
        let module = SymplecticModule::standard(d);
        module.ensure_enumerable()?;
        if let Some(bad) = generators.iter().position(|a| !a.is_symplectic(&module)) {
            return Err(Error::Validation(format!("generator {bad} does not preserve the pairing")));
        }
        let perms: Vec<Perm> = generators.iter().map(|a| a.to_perm(&module)).collect();
        let chain = StabChain::new(module.size(), &perms, seed);
        Ok(SpGroup { d: d.clone(), module, seed, generators, chain })
    }

    fn with_chain(&self, chain: StabChain) -> SpGroup {
        let generators = chain.generators().iter().map(|p| self.matrix_of(p)).collect();
        SpGroup { d: self.d.clone(), module: self.module.clone(), seed: self.seed, generators, chain }
    }

    pub fn type_d(&self) -> &TypeD {
        &self.d
    }

    pub fn module(&self) -> &SymplecticModule {
        &self.module
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generators(&self) -> &[SpMatrix] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn perm_of(&self, a: &SpMatrix) -> Perm {
        a.to_perm(&self.module)
    }

    pub fn matrix_of(&self, p: &Perm) -> SpMatrix {
        SpMatrix::from_perm(p, &self.module, &self.d)
    }

    pub fn contains(&self, a: &SpMatrix) -> bool {
        a.is_symplectic(&self.module) && self.chain.contains(&self.perm_of(a))
    }

    /// Point index of an element of `M_D`.
    pub fn point(&self, coords: &[u64]) -> u32 {
        self.module.encode(coords) as u32
    }

    /// Orbit of an element.
    pub fn orbit(&self, coords: &[u64]) -> Vec<u32> {
        self.chain.orbit(self.point(coords))
    }

    /// Stabilizer of an element.
    pub fn stabilizer(&self, coords: &[u64]) -> SpGroup {
        self.with_chain(self.chain.stabilizer(self.point(coords), self.seed))
    }

    /// Derived subgroup, certified normal.
    pub fn derived_subgroup(&self) -> Result<SpGroup> {
        let derived = self.chain.derived_subgroup(self.seed);
        if !derived.normalized_by(self.chain.generators()) {
            return Err(Error::Soundness("derived subgroup is not normal".into()));
        }
        Ok(self.with_chain(derived))
    }

    /// `|G / [G,G]|`.
    pub fn abelianization_order(&self) -> Result<u128> {
        Ok(self.order() / self.derived_subgroup()?.order())
    }

    /// Subgroup generated by this group and extra matrices.
    pub fn extend(&self, extra: &[SpMatrix]) -> SpGroup {
        let perms: Vec<Perm> = extra.iter().map(|a| self.perm_of(a)).collect();
        self.with_chain(self.chain.extend(&perms, self.seed))
    }

    /// A short generating list of matrices.
    pub fn small_generating_set(&self) -> Vec<SpMatrix> {
        self.chain.small_generating_set(self.seed).iter().map(|p| self.matrix_of(p)).collect()
    }

    /// Serialize as a `g d seed` header followed by the generator matrices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.d.g(), self.d.exponent(), self.seed);
        for a in &self.generators {
            out.push_str(&a.to_res().to_text());
        }
        out
    }

    /// Parse the format written by [`SpGroup::to_text`].
    pub fn from_text(text: &str) -> Result<SpGroup> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let header: Vec<u64> = parse_line(lines.first().ok_or_else(|| Error::Input("empty group text".into()))?)?;
        let [g, d, seed] = header[..] else {
            return Err(Error::Input("header must be `g d seed`".into()));
        };
        let ty = TypeD::homogeneous(d, g as usize)?;
        let mut gens = Vec::new();
        let mut k = 1;
        while k < lines.len() {
            let dims = parse_line(lines[k])?;
            let rows = *dims.first().ok_or_else(|| Error::Input("missing matrix header".into()))? as usize;
            let end = k + 1 + rows;
            if end > lines.len() {
                return Err(Error::Input("truncated matrix".into()));
            }
            let m = ResMatrix::from_text(&lines[k..end].join("\n"))?;
            if m.modulus() != d {
                return Err(Error::Input("matrix modulus does not match the header".into()));
            }
            gens.push(SpMatrix::new(&ty, m.data().to_vec())?);
            k = end;
        }
        SpGroup::generated(&ty, gens, seed)
    }
}

fn parse_line(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::Input(format!("bad number {t:?}"))))
        .collect()
}

/// The stabilizer `G_m` of `m = e_1` split as `L` (acting on the orthogonal
/// complement of `<e_1, f_1>`) and the unipotent radical `U`.
#[derive(Clone, Debug)]
pub struct LeviUnipotent {
    pub stabilizer: SpGroup,
    pub levi: SpGroup,
    pub unipotent: SpGroup,
    pub unipotent_derived: SpGroup,
    /// The transvection along `e_1` (the matrix `I + E` with `E` the
    /// elementary matrix in the top-right block at `(1,1)`).
    pub top_right: SpMatrix,
}

impl LeviUnipotent {
    /// Structural checks: `U` normal in `G_m`, `L` and `U` inside `G_m`,
    /// `|L||U| = |G_m|`, and `<L, U> = G_m` (hence `L ∩ U = 1`).
    pub fn verify(&self) -> bool {
        let st = &self.stabilizer;
        let inside = self.levi.generators().iter().chain(self.unipotent.generators()).all(|a| st.contains(a));
        let normal = self.unipotent.chain().normalized_by(st.chain().generators());
        let product = self.levi.order() * self.unipotent.order() == st.order();
        let joined = self.levi.extend(self.unipotent.generators()).order() == st.order();
        inside && normal && product && joined
    }
}

/// Levi/unipotent decomposition of the stabilizer of `e_1` in `Sp_2g(F_2)`.
pub fn levi_unipotent(g: usize, seed: u64) -> Result<LeviUnipotent> {
    if g == 0 {
        return Err(Error::Input("the stabilizer of 0 has no such decomposition".into()));
    }
    let d = TypeD::homogeneous(2, g)?;
    let full = SpGroup::full(&d, seed)?;
    let module = full.module().clone();
    let e1 = unit_vector(2 * g, 0);
    let stabilizer = full.stabilizer(&e1);
    let mut levi_gens = Vec::new();
    for i in 1..g {
        levi_gens.push(transvection(&module, &d, &unit_vector(2 * g, i)));
        levi_gens.push(transvection(&module, &d, &unit_vector(2 * g, g + i)));
        if i + 1 < g {
            let mut v = unit_vector(2 * g, g + i);
            v[g + i + 1] = 1;
            levi_gens.push(transvection(&module, &d, &v));
        }
    }
    let top_right = transvection(&module, &d, &e1);
    let mut unip_gens = vec![top_right.clone()];
    for i in 1..g {
        for w in [unit_vector(2 * g, i), unit_vector(2 * g, g + i)] {
            let mut we = w.clone();
            we[0] = 1;
            unip_gens.push(transvection(&module, &d, &w).mul(&transvection(&module, &d, &we)));
        }
    }
    let levi = SpGroup::generated(&d, levi_gens, seed)?;
    let unipotent = SpGroup::generated(&d, unip_gens, seed)?;
    let unipotent_derived = unipotent.derived_subgroup()?;
    Ok(LeviUnipotent { stabilizer, levi, unipotent, unipotent_derived, top_right })
}

/// `diag(X, X^{-T})` for `X = I + c E_ij`.
fn alpha_elementary(d: &TypeD, i: usize, j: usize, c: u64) -> SpMatrix {
    let g = d.g();
    let p = d.exponent();
    let mut a = SpMatrix::identity(d).data().to_vec();
    let size = 2 * g;
    a[i * size + j] = c % p;
    a[(g + j) * size + g + i] = (p - c % p) % p;
    SpMatrix::new(d, a).expect("square")
}

/// `(I S; 0 I)` for the symmetric elementary matrix `S = E_ij + E_ji` (or `E_ii`).
fn beta_elementary(d: &TypeD, i: usize, j: usize) -> SpMatrix {
    let g = d.g();
    let size = 2 * g;
    let mut a = SpMatrix::identity(d).data().to_vec();
    a[i * size + g + j] = 1;
    a[j * size + g + i] = 1;
    SpMatrix::new(d, a).expect("square")
}

/// Stabilizer of the standard isotropic flag `<e_1> ⊂ <e_1,e_2> ⊂ ...`,
/// a Sylow `p`-subgroup of order `p^{g^2}`.
pub fn sylow(d: &TypeD, seed: u64) -> Result<SpGroup> {
    let p = homogeneous_prime(d)?;
    let g = d.g();
    let mut gens = Vec::new();
    for i in 0..g {
        for j in i + 1..g {
            gens.push(alpha_elementary(d, i, j, 1));
        }
        for j in i..g {
            gens.push(beta_elementary(d, i, j));
        }
    }
    let grp = SpGroup::generated(d, gens, seed)?;
    let expect = (p as u128).pow((g * g) as u32);
    if grp.order() != expect {
        return Err(Error::Soundness(format!("flag stabilizer has order {} instead of {expect}", grp.order())));
    }
    Ok(grp)
}

/// Sylow 2-subgroup of `Sp_2g(F_2)`.
pub fn sylow2(g: usize, seed: u64) -> Result<SpGroup> {
    sylow(&TypeD::homogeneous(2, g)?, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u64, g: usize) -> TypeD {
        TypeD::homogeneous(p, g).unwrap()
    }

    /// Count symplectic matrices by brute force.
    fn brute_order(p: u64, g: usize) -> u128 {
        let d = t(p, g);
        let m = SymplecticModule::standard(&d);
        let size = 2 * g;
        let total = (p as usize).pow((size * size) as u32);
        let mut count = 0u128;
        for code in 0..total {
            let mut c = code;
            let data: Vec<u64> = (0..size * size)
                .map(|_| {
                    let x = (c % p as usize) as u64;
                    c /= p as usize;
                    x
                })
                .collect();
            if SpMatrix::new(&d, data).unwrap().is_symplectic(&m) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn order_formula_matches_enumeration() {
        for (g, p) in [(1, 2), (1, 3), (2, 2)] {
            assert_eq!(classical_order(p, g), brute_order(p, g), "g={g} p={p}");
        }
    }

    #[test]
    fn full_groups_small() {
        assert_eq!(SpGroup::full(&t(2, 1), DEFAULT_SEED).unwrap().order(), 6);
        assert_eq!(SpGroup::full(&t(3, 1), DEFAULT_SEED).unwrap().order(), 24);
        let sp4 = SpGroup::full(&t(2, 2), DEFAULT_SEED).unwrap();
        assert_eq!(sp4.order(), 720);
        assert_eq!(sp4.orbit(&[1, 0, 0, 0]).len(), 15);
        assert_eq!(sp4.stabilizer(&[1, 0, 0, 0]).order(), 48);
        assert_eq!(sp4.abelianization_order().unwrap(), 2);
    }

    #[test]
    fn s3_derived() {
        let sp2 = SpGroup::full(&t(2, 1), 5).unwrap();
        assert_eq!(sp2.derived_subgroup().unwrap().order(), 3);
        assert_eq!(sp2.abelianization_order().unwrap(), 2);
    }

    #[test]
    fn unsupported_types() {
        assert!(matches!(transvection_generators(&TypeD::new(&[2, 4]).unwrap()), Err(Error::Unsupported(_))));
        assert!(matches!(transvection_generators(&TypeD::new(&[4]).unwrap()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sylow_and_levi_small() {
        assert_eq!(sylow2(1, 1).unwrap().order(), 2);
        assert_eq!(sylow2(2, 1).unwrap().order(), 16);
        let lu = levi_unipotent(2, 1).unwrap();
        assert_eq!((lu.levi.order(), lu.unipotent.order()), (6, 8));
        assert!(lu.verify());
        // In characteristic 2 the generators of U commute and square to 1.
        let gens = lu.unipotent.generators();
        let id = SpMatrix::identity(lu.unipotent.type_d());
        assert!(gens.iter().all(|a| a.mul(a) == id));
        assert!(gens.iter().all(|a| gens.iter().all(|b| a.mul(b) == b.mul(a))));
        assert_eq!(lu.unipotent_derived.order(), 1);
        assert!(lu.unipotent.contains(&lu.top_right));
    }

    #[test]
    fn levi_g3_orders() {
        let lu = levi_unipotent(3, 2).unwrap();
        assert_eq!(lu.stabilizer.order(), 23040);
        assert_eq!((lu.levi.order(), lu.unipotent.order()), (720, 32));
        assert!(lu.verify());
    }

    #[test]
    fn sp6_is_perfect_and_sylow() {
        let sp6 = SpGroup::full(&t(2, 3), 4).unwrap();
        assert_eq!(sp6.order(), 1451520);
        assert_eq!(sp6.derived_subgroup().unwrap().order(), 1451520);
        assert_eq!(sylow2(3, 4).unwrap().order(), 512);
    }

    #[test]
    fn text_round_trip() {
        let sp4 = SpGroup::full(&t(2, 2), 9).unwrap();
        let back = SpGroup::from_text(&sp4.to_text()).unwrap();
        assert_eq!(back.generators(), sp4.generators());
        assert_eq!(back.order(), 720);
    }
}
