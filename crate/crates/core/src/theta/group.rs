use std::fmt;

use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::symmod::{SymplecticModule, TypeD};

/// Largest `|M|` for which dense per-element tables are built.
pub const MAX_TABLE: usize = 1 << 12;

/// An element `(t, m)` of a finite theta group: `t` is the exponent of the
/// central `n`-th root of unity and `m` the coordinates in the module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaElement {
    pub t: u64,
    pub m: Vec<u64>,
}

impl fmt::Display for ThetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = self.m.len() / 2;
        let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}; {} | {})", self.t, join(&self.m[..half]), join(&self.m[half..]))
    }
}

/// A finite theta group: the central extension of a symplectic module `M`
/// by `Z/n` with product `(t,m)(t',m') = (t + t' + B(m,m'), m + m')` for a
/// bilinear form `B` given on generators.
///
/// Its commutator pairing is `B - B^T`, which must equal the module's
/// pairing (rescaled to `Z/n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaGroup {
    module: SymplecticModule,
    n: u64,
    cocycle: Vec<u64>,
}

impl ThetaGroup {
    /// Build and validate: `B` well defined on the module, and `B - B^T`
    /// equal to the pairing.
    pub fn new(module: SymplecticModule, n: u64, cocycle: Vec<u64>) -> Result<Self> {
        let r = module.rank();
        if cocycle.len() != r * r {
            return Err(Error::Input("cocycle table has the wrong size".into()));
        }
        if n == 0 || !n.is_multiple_of(module.modulus()) && !module.modulus().is_multiple_of(n) {
            return Err(Error::Input(format!(
                "central modulus {n} is incompatible with pairing modulus {}",
                module.modulus()
            )));
        }
        let cocycle: Vec<u64> = cocycle.into_iter().map(|x| x % n).collect();
        for i in 0..r {
            for j in 0..r {
                let b = cocycle[i * r + j];
                let (oi, oj) = (module.orders()[i] % n, module.orders()[j] % n);
                if mul_mod(b, oi, n) != 0 || mul_mod(b, oj, n) != 0 {
                    return Err(Error::Validation(format!("cocycle entry ({i},{j}) is not well defined")));
                }
            }
        }
        let h = ThetaGroup { module, n, cocycle };
        for i in 0..r {
            for j in 0..r {
                let comm = (h.cocycle[i * r + j] + n - h.cocycle[j * r + i]) % n;
                if comm != h.pairing_value(h.module.gram_entry(i, j))? {
                    return Err(Error::Validation(format!(
                        "commutator pairing differs from the module pairing at ({i},{j})"
                    )));
                }
            }
        }
        Ok(h)
    }

    /// The standard group `H_D` with `B((x,χ),(x',χ')) = Σ (n/d_i) χ'_i x_i`.
    pub fn standard(d: &TypeD) -> Self {
        let module = SymplecticModule::standard(d);
        let g = d.g();
        let n = d.n();
        let r = 2 * g;
        let mut cocycle = vec![0u64; r * r];
        for (i, &di) in d.divisors().iter().enumerate() {
            cocycle[i * r + g + i] = n / di;
        }
        ThetaGroup::new(module, n, cocycle).expect("standard theta group is valid")
    }

    /// Convert a module pairing value (in `Z/N`) to the central `Z/n`.
    fn pairing_value(&self, v: u64) -> Result<u64> {
        let big_n = self.module.modulus();
        if self.n.is_multiple_of(big_n) {
            Ok(v * (self.n / big_n))
        } else {
            let s = big_n / self.n;
            if !v.is_multiple_of(s) {
                return Err(Error::Validation("pairing value does not fit the central modulus".into()));
            }
            Ok(v / s)
        }
    }

    pub fn module(&self) -> &SymplecticModule {
        &self.module
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cocycle(&self) -> &[u64] {
        &self.cocycle
    }

    pub fn type_d(&self) -> Option<&TypeD> {
        self.module.standard_type()
    }

    /// `|H| = n |M|`.
    pub fn order(&self) -> u128 {
        self.n as u128 * self.module.size() as u128
    }

    /// Error unless dense per-element tables are allowed.
    pub fn ensure_tabulable(&self) -> Result<()> {
        if self.module.size() > MAX_TABLE {
            return Err(Error::Capacity(format!(
                "module of order {} exceeds the table limit {MAX_TABLE}",
                self.module.size()
            )));
        }
        Ok(())
    }

    /// `B(a, b)` on coordinates.
    pub fn phi(&self, a: &[u64], b: &[u64]) -> u64 {
        let r = self.module.rank();
        let n = self.n as u128;
        let mut acc: u128 = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            let mut inner: u128 = 0;
            for j in 0..r {
                inner += self.cocycle[i * r + j] as u128 * b[j] as u128;
            }
            acc = (acc + (inner % n) * a[i] as u128) % n;
        }
        acc as u64
    }

    /// Commutator pairing value `B(a,b) - B(b,a)`.
    pub fn commutator_value(&self, a: &[u64], b: &[u64]) -> u64 {
        (self.phi(a, b) + self.n - self.phi(b, a)) % self.n
    }

    /// Module pairing rescaled to `Z/n`.
    pub fn module_pairing(&self, a: &[u64], b: &[u64]) -> u64 {
        self.pairing_value(self.module.pair_coords(a, b)).expect("validated at construction")
    }

    pub fn identity(&self) -> ThetaElement {
        ThetaElement { t: 0, m: vec![0; self.module.rank()] }
    }

    pub fn mul(&self, a: &ThetaElement, b: &ThetaElement) -> ThetaElement {
        ThetaElement {
            t: (a.t + b.t + self.phi(&a.m, &b.m)) % self.n,
            m: self.module.add_coords(&a.m, &b.m),
        }
    }

    /// Inverse: `(-t + B(m,m), -m)`.
    pub fn inv(&self, a: &ThetaElement) -> ThetaElement {
        ThetaElement { t: (2 * self.n - a.t + self.phi(&a.m, &a.m)) % self.n, m: self.module.neg_coords(&a.m) }
    }

    /// Group commutator `a b a^-1 b^-1`.
    pub fn commutator(&self, a: &ThetaElement, b: &ThetaElement) -> ThetaElement {
        let ab = self.mul(a, b);
        self.mul(&self.mul(&ab, &self.inv(a)), &self.inv(b))
    }

    /// Element by index: `t` major, module index minor.
    pub fn element(&self, idx: usize) -> ThetaElement {
        let s = self.module.size();
        ThetaElement { t: (idx / s) as u64, m: self.module.decode(idx % s) }
    }

    pub fn index(&self, a: &ThetaElement) -> usize {
        a.t as usize * self.module.size() + self.module.encode(&a.m)
    }

    /// Orthogonal direct sum with central moduli identified in `lcm(n1, n2)`.
    pub fn baer_sum(&self, other: &ThetaGroup) -> ThetaGroup {
        let module = crate::symmod::direct_sum(&self.module, &other.module);
        let n = crate::arith::lcm(self.n, other.n);
        let (ra, rb) = (self.module.rank(), other.module.rank());
        let r = ra + rb;
        let mut cocycle = vec![0u64; r * r];
        for i in 0..ra {
            for j in 0..ra {
                cocycle[i * r + j] = self.cocycle[i * ra + j] * (n / self.n);
            }
        }
        for i in 0..rb {
            for j in 0..rb {
                cocycle[(ra + i) * r + ra + j] = other.cocycle[i * rb + j] * (n / other.n);
            }
        }
        ThetaGroup::new(module, n, cocycle).expect("sum of valid theta groups")
    }

    /// Preimage of the subgroup generated by the listed generators, with the
    /// central modulus reduced to the scalar modulus of that subgroup.
    pub fn restrict(&self, generators: &[usize]) -> Result<ThetaGroup> {
        let r = self.module.rank();
        let orders: Vec<u64> = generators.iter().map(|&i| self.module.orders()[i]).collect();
        let exponent = orders.iter().fold(1, |a, &b| crate::arith::lcm(a, b));
        let n_sub = crate::symmod::scalar_modulus(exponent);
        if !self.n.is_multiple_of(n_sub) {
            return Err(Error::Validation("restricted scalar modulus does not divide n".into()));
        }
        let s = self.n / n_sub;
        let k = generators.len();
        let mut cocycle = vec![0u64; k * k];
        let mut gram = vec![0u64; k * k];
        for (a, &i) in generators.iter().enumerate() {
            for (b, &j) in generators.iter().enumerate() {
                let v = self.cocycle[i * r + j];
                if !v.is_multiple_of(s) {
                    return Err(Error::Validation("cocycle does not restrict to the smaller modulus".into()));
                }
                cocycle[a * k + b] = v / s;
                let e = self.module_pairing(&unit(r, i), &unit(r, j));
                gram[a * k + b] = e / s;
            }
        }
        let module = SymplecticModule::new(orders, n_sub, gram)?;
        module.validate_nondegenerate()?;
        ThetaGroup::new(module, n_sub, cocycle)
    }

    /// Re-present on the generators listed in `order` (a permutation).
    pub fn reorder(&self, order: &[usize]) -> Result<ThetaGroup> {
        let r = self.module.rank();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..r).collect::<Vec<_>>() {
            return Err(Error::Input("reorder needs a permutation of the generators".into()));
        }
        let orders: Vec<u64> = order.iter().map(|&i| self.module.orders()[i]).collect();
        let mut cocycle = vec![0u64; r * r];
        let mut gram = vec![0u64; r * r];
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                cocycle[a * r + b] = self.cocycle[i * r + j];
                gram[a * r + b] = self.module.gram_entry(i, j);
            }
        }
        let module = SymplecticModule::new(orders, self.module.modulus(), gram)?;
        ThetaGroup::new(module, self.n, cocycle)
    }

    /// Replace the module by an equal standard module (so automorphisms by
    /// symplectic matrices of that type apply).
    pub fn with_standard_module(&self, d: &TypeD) -> Result<ThetaGroup> {
        let std = SymplecticModule::standard(d);
        if std != self.module {
            return Err(Error::Validation(format!("module is not the standard module of type {d}")));
        }
        Ok(ThetaGroup { module: std, n: self.n, cocycle: self.cocycle.clone() })
    }
}

fn unit(r: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; r];
    v[i] = 1;
    v
}

/// Outcome of the exhaustive structural checks on a theta group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// `|H|` as enumerated.
    pub order: u128,
    /// Associativity was checked on all triples (otherwise via bi-additivity).
    pub triples_exhaustive: bool,
    pub associative: bool,
    pub identity_and_inverses: bool,
    pub commutator_matches_pairing: bool,
    /// Commutators of central elements are trivial.
    pub center_commutes: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.associative && self.identity_and_inverses && self.commutator_matches_pairing && self.center_commutes
    }
}

/// Largest `|M|` for which associativity is checked on every triple.
pub const EXHAUSTIVE_TRIPLES: usize = 256;

/// Check the group axioms and the commutator pairing.
///
/// The central coordinate cancels from the associativity condition, which
/// reduces to the cocycle identity `δB = 0` on `M^3`. For `|M| <=`
/// [`EXHAUSTIVE_TRIPLES`] it is checked on every triple, and identities,
/// inverses and commutators are computed with the group operations on
/// every pair.
///
/// Above that size the checks use generators. `B` is bi-additive (which
/// implies the cocycle identity) iff the forms `a -> B(a, g_j)` and
/// `a -> B(g_j, a)` satisfy `f(a + g_i) = f(a) + f(g_i)` for all `a` and
/// generators `g_i`, by induction on word length. Both the group commutator
/// and the pairing are then bi-additive, so their agreement on
/// `M x generators` and `generators x M` implies agreement on all pairs.
pub fn check_axioms(h: &ThetaGroup) -> Result<AxiomReport> {
    h.ensure_tabulable()?;
    let m = h.module();
    let size = m.size();
    let r = m.rank();
    let coords: Vec<Vec<u64>> = (0..size).map(|i| m.decode(i)).collect();
    let n = h.n();
    let gens: Vec<usize> = (0..r).map(|j| m.generator(j)).collect();
    let triples_exhaustive = size <= EXHAUSTIVE_TRIPLES;
    // left[a][j] = B(a, g_j), right[a][j] = B(g_j, a).
    let forms = |f: &(dyn Fn(&[u64], &[u64]) -> u64 + Sync)| -> Vec<Vec<u64>> {
        crate::par::map_range(size, |a| gens.iter().map(|&g| f(&coords[a], &coords[g])).collect())
    };
    let left = forms(&|a, g| h.phi(a, g));
    let right = forms(&|a, g| h.phi(g, a));
    let associative = if triples_exhaustive {
        let phi = crate::par::map_range(size * size, |ab| h.phi(&coords[ab / size], &coords[ab % size]));
        let add = crate::par::map_range(size * size, |ab| m.add(ab / size, ab % size));
        crate::par::all_range(size * size, |ab| {
            let (a, b) = (ab / size, ab % size);
            let (ab_sum, pab) = (add[ab], phi[ab]);
            (0..size).all(|c| {
                let bc = add[b * size + c];
                (pab + phi[ab_sum * size + c]) % n == (phi[b * size + c] + phi[a * size + bc]) % n
            })
        })
    } else {
        crate::par::all_range(size * r, |ai| {
            let (a, i) = (ai / r, ai % r);
            let (g, s) = (gens[i], m.add(ai / r, gens[i]));
            (0..r).all(|j| {
                (left[a][j] + left[g][j]) % n == left[s][j] && (right[a][j] + right[g][j]) % n == right[s][j]
            })
        })
    };
    let e = h.identity();
    let identity_and_inverses = crate::par::all_range(size, |a| {
        (0..n).all(|t| {
            let x = ThetaElement { t, m: coords[a].clone() };
            h.mul(&e, &x) == x && h.mul(&x, &e) == x && h.mul(&x, &h.inv(&x)) == e && h.mul(&h.inv(&x), &x) == e
        })
    });
    let group_commutator = |a: usize, b: usize| {
        let x = ThetaElement { t: 1 % n, m: coords[a].clone() };
        let y = ThetaElement { t: 0, m: coords[b].clone() };
        let c = h.commutator(&x, &y);
        c.m.iter().all(|&v| v == 0) && c.t == h.module_pairing(&coords[a], &coords[b])
    };
    let commutator_matches_pairing = if triples_exhaustive {
        crate::par::all_range(size * size, |ab| group_commutator(ab / size, ab % size))
    } else {
        
        crate::par::all_range(size * r, |aj| {
            let (a, g) = (aj / r, gens[aj % r]);
            group_commutator(a, g) && group_commutator(g, a)
        })
    };
    let center_commutes = (0..n).all(|t| {
        let z = ThetaElement { t, m: vec![0; r] };
        coords.iter().all(|c| {
            let x = ThetaElement { t: 0, m: c.clone() };
            h.commutator(&z, &x) == e
        })
    });
    Ok(AxiomReport {
        order: n as u128 * size as u128,
        triples_exhaustive,
        associative,
        identity_and_inverses,
        commutator_matches_pairing,
        center_commutes,
    })
}

/// The commutator pairing table on module elements (index order), in `Z/n`.
pub fn commutator_pairing(h: &ThetaGroup) -> Result<Vec<u64>> {
    h.ensure_tabulable()?;
    let m = h.module();
    let size = m.size();
    Ok(crate::par::map_range(size * size, |ab| {
        let (a, b) = (m.decode(ab / size), m.decode(ab % size));
        let c = h.commutator(&ThetaElement { t: 0, m: a }, &ThetaElement { t: 0, m: b });
        c.t
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[u64]) -> TypeD {
        TypeD::new(d).unwrap()
    }

    #[test]
    fn commutator_of_e1_f1_for_type_two() {
        let h = ThetaGroup::standard(&t(&[2]));
        let e1 = ThetaElement { t: 0, m: vec![1, 0] };
        let f1 = ThetaElement { t: 0, m: vec![0, 1] };
        assert_eq!(h.commutator(&e1, &f1), ThetaElement { t: 2, m: vec![0, 0] });
        assert_eq!(h.mul(&h.identity(), &e1), e1);
    }

    #[test]
    fn exponent_three() {
        let h = ThetaGroup::standard(&t(&[3]));
        for idx in 0..h.order() as usize {
            let x = h.element(idx);
            assert_eq!(h.mul(&h.mul(&x, &x), &x), h.identity());
        }
    }

    #[test]
    fn axioms_small() {
        for d in [&[2][..], &[3], &[2, 2], &[4]] {
            let h = ThetaGroup::standard(&t(d));
            let rep = check_axioms(&h).unwrap();
            assert!(rep.all_pass(), "{d:?}");
            assert_eq!(rep.order, h.n() as u128 * (t(d).order() as u128).pow(2));
        }
    }

    #[test]
    fn display_format() {
        let x = ThetaElement { t: 3, m: vec![1, 0, 1, 1] };
        assert_eq!(x.to_string(), "(3; 1,0 | 1,1)");
    }

    #[test]
    fn broken_cocycle_rejected() {
        let m = SymplecticModule::standard(&t(&[2]));
        assert!(ThetaGroup::new(m, 4, vec![0, 1, 0, 0]).is_err());
    }
}
