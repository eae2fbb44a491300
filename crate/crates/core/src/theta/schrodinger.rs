use crate::error::{Error, Result};
use crate::symmod::TypeD;

use super::{framed_isomorphism, ThetaElement, ThetaGroup};

/// A monomial matrix with entries `n`-th roots of unity: row `y` has its
/// single nonzero entry `ζ_n^{exps[y]}` in column `cols[y]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    pub n: u64,
    pub cols: Vec<u32>,
    pub exps: Vec<u64>,
}

impl MonomialMatrix {
    pub fn identity(dim: usize, n: u64) -> Self {
        MonomialMatrix { n, cols: (0..dim as u32).collect(), exps: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let cols = self.cols.iter().map(|&c| other.cols[c as usize]).collect();
        let exps = self
            .cols
            .iter()
            .zip(&self.exps)
            .map(|(&c, &e)| (e + other.exps[c as usize]) % self.n)
            .collect();
        MonomialMatrix { n: self.n, cols, exps }
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(i, &c)| c as usize == i) && self.exps.iter().all(|&e| e == 0)
    }

    /// Whether this is the scalar `ζ_n^k`.
    pub fn is_scalar(&self, k: u64) -> bool {
        self.cols.iter().enumerate().all(|(i, &c)| c as usize == i) && self.exps.iter().all(|&e| e == k % self.n)
    }
}

/// The Schrödinger representation of `H_D` on functions `K_D -> C`:
/// `((t, x, χ) f)(y) = ζ^t χ(y) f(y + x)`.
#[derive(Clone, Debug)]
pub struct SchrodingerRep {
    d: TypeD,
    n: u64,
    dim: usize,
}

impl SchrodingerRep {
    pub fn new(d: &TypeD) -> Result<Self> {
        let dim = usize::try_from(d.order()).map_err(|_| Error::Capacity("dimension overflow".into()))?;
        if dim > super::MAX_TABLE {
            return Err(Error::Capacity(format!("dimension {dim} exceeds {}", super::MAX_TABLE)));
        }
        Ok(SchrodingerRep { d: d.clone(), n: d.n(), dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn decode(&self, mut y: usize) -> Vec<u64> {
        let ds = self.d.divisors();
        let mut out = vec![0u64; ds.len()];
        for i in (0..ds.len()).rev() {
            out[i] = y as u64 % ds[i];
            y /= ds[i] as usize;
        }
        out
    }

    fn encode(&self, y: &[u64]) -> usize {
        self.d.divisors().iter().zip(y).fold(0usize, |acc, (&d, &c)| acc * d as usize + (c % d) as usize)
    }

    /// Matrix of an element of `H_D`.
    pub fn matrix(&self, x: &ThetaElement) -> MonomialMatrix {
        let g = self.d.g();
        let ds = self.d.divisors();
        let (xs, chis) = x.m.split_at(g);
        let mut cols = Vec::with_capacity(self.dim);
        let mut exps = Vec::with_capacity(self.dim);
        for yi in 0..self.dim {
            let y = self.decode(yi);
            let shifted: Vec<u64> = y.iter().zip(xs).zip(ds).map(|((&a, &b), &d)| (a + b) % d).collect();
            cols.push(self.encode(&shifted) as u32);
            let mut e = x.t % self.n;
            for i in 0..g {
                e = (e + (self.n / ds[i]) * (chis[i] * y[i] % ds[i])) % self.n;
            }
            exps.push(e);
        }
        MonomialMatrix { n: self.n, cols, exps }
    }
}

/// Outcome of the representation checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepReport {
    pub dim: usize,
    /// `ρ(a)ρ(b) = ρ(ab)` for all pairs `a = (0,m)`, `b = (0,m')`.
    pub multiplicative: bool,
    /// `(t, 0)` acts as the scalar `ζ_n^t` for all `t`.
    pub center_scalar: bool,
    /// Only the identity acts trivially.
    pub faithful: bool,
    pub identity_to_identity: bool,
}

impl RepReport {
    pub fn all_pass(&self) -> bool {
        self.multiplicative && self.center_scalar && self.faithful && self.identity_to_identity
    }
}

/// Check a representation `rho` of the theta group `h`.
///
/// Multiplicativity is checked on all pairs of elements with trivial central
/// coordinate; together with the central scalar check this covers every
/// pair, since `(t, m) = (t, 0)(0, m)` and the centre acts by scalars.
pub fn check_representation<F>(h: &ThetaGroup, dim: usize, rho: F) -> RepReport
where
    F: Fn(&ThetaElement) -> MonomialMatrix + Sync + Send,
{
    let m = h.module();
    let size = m.size();
    let n = h.n();
    let mats: Vec<MonomialMatrix> =
        crate::par::map_range(size, |i| rho(&ThetaElement { t: 0, m: m.decode(i) }));
    let multiplicative = crate::par::all_range(size * size, |ab| {
        let (a, b) = (ab / size, ab % size);
        let prod = h.mul(&ThetaElement { t: 0, m: m.decode(a) }, &ThetaElement { t: 0, m: m.decode(b) });
        mats[a].mul(&mats[b]) == rho(&prod)
    });
    let zero = vec![0u64; m.rank()];
    let center_scalar = (0..n).all(|t| rho(&ThetaElement { t, m: zero.clone() }).is_scalar(t));
    let identity_to_identity = rho(&h.identity()).is_identity();
    let faithful = crate::par::all_range(size, |i| {
        (0..n).all(|t| (i == 0 && t == 0) || !rho(&ThetaElement { t, m: m.decode(i) }).is_identity())
    });
    RepReport { dim, multiplicative, center_scalar, faithful, identity_to_identity }
}

/// Check the Schrödinger representation of `H_D`.
pub fn check_schrodinger(d: &TypeD) -> Result<RepReport> {
    let rep = SchrodingerRep::new(d)?;
    let h = ThetaGroup::standard(d);
    h.ensure_tabulable()?;
    Ok(check_representation(&h, rep.dim(), |x| rep.matrix(x)))
}

/// Result of transporting the Schrödinger representation to a theta group
/// on the standard module through a framed isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerReport {
    pub found: bool,
    /// The framed isomorphism `H -> H_D`, when found.
    pub beta: Option<Vec<u64>>,
    /// Checks of the transported representation.
    pub rep: Option<RepReport>,
}

/// Search for a framed isomorphism from `h` (on the standard module of type
/// `D`) to `H_D`, and if one exists check `ρ_D ∘ F` as a representation of `h`.
pub fn transport_schrodinger(h: &ThetaGroup, d: &TypeD) -> Result<IntertwinerReport> {
    let std = ThetaGroup::standard(d);
    let h = h.with_standard_module(d)?;
    if h.n() != std.n() {
        return Err(Error::Input("central moduli differ".into()));
    }
    let Some(beta) = framed_isomorphism(&h, &std)? else {
        return Ok(IntertwinerReport { found: false, beta: None, rep: None });
    };
    let rep = SchrodingerRep::new(d)?;
    let m = h.module();
    let n = h.n();
    let report = check_representation(&h, rep.dim(), |x| {
        let fx = ThetaElement { t: (x.t + beta[m.encode(&x.m)]) % n, m: x.m.clone() };
        rep.matrix(&fx)
    });
    Ok(IntertwinerReport { found: true, beta: Some(beta), rep: Some(report) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_matrices_for_type_two() {
        let rep = SchrodingerRep::new(&TypeD::new(&[2]).unwrap()).unwrap();
        let x = rep.matrix(&ThetaElement { t: 0, m: vec![1, 0] });
        assert_eq!((x.cols.clone(), x.exps.clone()), (vec![1, 0], vec![0, 0]));
        let z = rep.matrix(&ThetaElement { t: 0, m: vec![0, 1] });
        assert_eq!((z.cols.clone(), z.exps.clone()), (vec![0, 1], vec![0, 2]));
    }

    #[test]
    fn small_types_pass() {
        for d in [&[2][..], &[3], &[2, 2], &[4]] {
            let t = TypeD::new(d).unwrap();
            let r = check_schrodinger(&t).unwrap();
            assert!(r.all_pass(), "{d:?}");
            assert_eq!(r.dim as u64, t.order());
        }
    }
}
