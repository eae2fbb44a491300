use crate::arith::inv_mod;
use crate::error::{Error, Result};
use crate::ringlinalg::{howell_span, solve_mod, span_size, ResMatrix};
use crate::spgroup::SpMatrix;
use crate::symmod::TypeD;

use super::{ThetaElement, ThetaGroup};

/// Largest `|M|` for which the dense linear systems over all of `M` are solved.
pub const MAX_SOLVE: usize = 256;

/// An automorphism `(t, m) -> (t + β(m), A m)` of a theta group on a standard module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaAut {
    pub a: SpMatrix,
    /// `β` by module element index.
    pub beta: Vec<u64>,
}

fn type_of(h: &ThetaGroup) -> Result<&TypeD> {
    h.type_d()
        .ok_or_else(|| Error::Unsupported("automorphisms need a theta group on a standard module".into()))
}

impl ThetaAut {
    pub fn identity(h: &ThetaGroup) -> Result<ThetaAut> {
        let d = type_of(h)?;
        h.ensure_tabulable()?;
        Ok(ThetaAut { a: SpMatrix::identity(d), beta: vec![0; h.module().size()] })
    }

    pub fn apply(&self, h: &ThetaGroup, x: &ThetaElement) -> ThetaElement {
        let idx = h.module().encode(&x.m);
        ThetaElement { t: (x.t + self.beta[idx]) % h.n(), m: self.a.apply(&x.m) }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, h: &ThetaGroup, other: &ThetaAut) -> ThetaAut {
        let m = h.module();
        let beta = (0..m.size())
            .map(|x| {
                let ax = m.encode(&other.a.apply(&m.decode(x)));
                (other.beta[x] + self.beta[ax]) % h.n()
            })
            .collect();
        ThetaAut { a: self.a.mul(&other.a), beta }
    }

    pub fn inverse(&self, h: &ThetaGroup) -> Result<ThetaAut> {
        let d = type_of(h)?;
        let m = h.module();
        let a_inv = self.a.symplectic_inverse(m, d);
        let beta = (0..m.size())
            .map(|x| {
                let y = m.encode(&a_inv.apply(&m.decode(x)));
                (h.n() - self.beta[y]) % h.n()
            })
            .collect();
        Ok(ThetaAut { a: a_inv, beta })
    }

    /// `A` symplectic, `β(0) = 0`, and the homomorphism condition
    /// `β(m+g) - β(m) - β(g) = B(Am, Ag) - B(m, g)` for every `m` and every
    /// generator `g`. Since both sides are compatible with induction on the
    /// second argument, this is equivalent to the condition on all pairs.
    pub fn is_valid(&self, h: &ThetaGroup) -> bool {
        let m = h.module();
        if self.beta.len() != m.size() || self.beta[0] != 0 || !self.a.is_symplectic(m) {
            return false;
        }
        let n = h.n();
        let gens: Vec<usize> = (0..m.rank()).filter(|&j| m.orders()[j] > 1).collect();
        crate::par::all_range(m.size(), |x| {
            let xc = m.decode(x);
            let ax = self.a.apply(&xc);
            gens.iter().all(|&j| {
                let gc = m.decode(m.generator(j));
                let s = m.add(x, m.generator(j));
                let lhs = (self.beta[s] + 2 * n - self.beta[x] - self.beta[m.generator(j)]) % n;
                let rhs = (h.phi(&ax, &self.a.apply(&gc)) + n - h.phi(&xc, &gc)) % n;
                lhs == rhs
            })
        })
    }

    /// The homomorphism condition on every pair (exhaustive check).
    pub fn is_valid_on_all_pairs(&self, h: &ThetaGroup) -> bool {
        let m = h.module();
        let size = m.size();
        let n = h.n();
        crate::par::all_range(size * size, |ab| {
            let (x, y) = (ab / size, ab % size);
            let (xc, yc) = (m.decode(x), m.decode(y));
            let lhs = (self.beta[m.add(x, y)] + 2 * n - self.beta[x] - self.beta[y]) % n;
            let rhs = (h.phi(&self.a.apply(&xc), &self.a.apply(&yc)) + n - h.phi(&xc, &yc)) % n;
            lhs == rhs
        })
    }

    /// Serialize as the matrix text followed by one line of `β` values.
    pub fn to_text(&self) -> String {
        let betas: Vec<String> = self.beta.iter().map(u64::to_string).collect();
        format!("{}{}\n", self.a.to_res().to_text(), betas.join(" "))
    }
}

/// A particular `β` table and the Howell basis of the solution kernel.
pub type QuadraticSolution = (Vec<u64>, Vec<Vec<u64>>);

/// Solve `β(m + g_j) - β(m) - β(g_j) = rhs(m, j)` over `Z/n` for a table
/// `β` on the module with `β(0) = 0`; returns a particular solution and
/// the Howell basis of the solution kernel.
pub fn solve_quadratic_system<F>(h: &ThetaGroup, rhs: F) -> Result<Option<QuadraticSolution>>
where
    F: Fn(&[u64], usize) -> u64 + Sync + Send,
{
    let m = h.module();
    if m.size() > MAX_SOLVE {
        return Err(Error::Capacity(format!(
            "linear system over a module of order {} exceeds the limit {MAX_SOLVE}",
            m.size()
        )));
    }
    let n = h.n();
    let size = m.size();
    let cols = size - 1;
    let gens: Vec<usize> = (0..m.rank()).filter(|&j| m.orders()[j] > 1).collect();
    let rows = size * gens.len();
    let mut a = ResMatrix::zeros(rows, cols.max(1), n);
    let mut b = vec![0u64; rows];
    let bump = |a: &mut ResMatrix, r: usize, elem: usize, delta: u64| {
        if elem != 0 {
            let c = elem - 1;
            a.set(r, c, (a.get(r, c) + delta) % n);
        }
    };
    for x in 0..size {
        let xc = m.decode(x);
        for (k, &j) in gens.iter().enumerate() {
            let r = x * gens.len() + k;
            let gj = m.generator(j);
            bump(&mut a, r, m.add(x, gj), 1);
            bump(&mut a, r, x, n - 1);
            bump(&mut a, r, gj, n - 1);
            b[r] = rhs(&xc, j) % n;
        }
    }
    if cols == 0 {
        return Ok(b.iter().all(|&v| v == 0).then(|| (vec![0], Vec::new())));
    }
    Ok(solve_mod(&a, &b)?.map(|sol| {
        let mut beta = vec![0u64];
        beta.extend(sol.x);
        let kernel = howell_span(&sol.kernel, n)
            .into_iter()
            .map(|k| {
                let mut full = vec![0u64];
                full.extend(k);
                full
            })
            .collect();
        (beta, kernel)
    }))
}

/// A particular solution of the system in [`solve_quadratic_system`],
/// without the kernel.
///
/// Walking each element from `0` by generator steps that do not wrap
/// determines `β(x) = Q(x) + Σ x_j c_j` with `c_j = β(g_j)`. Going once round
/// the cycle of `g_j` then forces `d_j c_j ≡ r_j`, a scalar congruence. Any
/// solution of those congruences differs from a true solution by a
/// homomorphism `M -> Z/n`, so the final check over all equations is exact.
pub fn particular_solution<F>(h: &ThetaGroup, rhs: F) -> Result<Option<Vec<u64>>>
where
    F: Fn(&[u64], usize) -> u64,
{
    h.ensure_tabulable()?;
    let m = h.module();
    let n = h.n();
    let size = m.size();
    let gens: Vec<usize> = (0..m.rank()).filter(|&j| m.orders()[j] > 1).collect();
    let coords: Vec<Vec<u64>> = (0..size).map(|x| m.decode(x)).collect();
    let mut q = vec![0u64; size];
    for x in 1..size {
        let j = gens.iter().copied().find(|&j| coords[x][j] > 0).expect("nonzero element");
        let prev = x - m.generator(j);
        q[x] = (q[prev] + rhs(&coords[prev], j)) % n;
    }
    let mut c = vec![0u64; m.rank()];
    for &j in &gens {
        let d = m.orders()[j];
        let last = m.scale(d - 1, m.generator(j));
        let r = (2 * n - q[last] % n + n - rhs(&coords[last], j) % n) % n;
        let g = crate::arith::gcd(d % n, n);
        if !r.is_multiple_of(g) {
            return Ok(None);
        }
        let inv = inv_mod((d % n) / g, n / g).expect("coprime after dividing by the gcd");
        c[j] = (r / g) % (n / g) * inv % (n / g);
    }
    let beta: Vec<u64> = (0..size)
        .map(|x| (q[x] + gens.iter().map(|&j| coords[x][j] % n * c[j]).sum::<u64>()) % n)
        .collect();
    let consistent = (0..size).all(|x| {
        gens.iter().all(|&j| {
            let gj = m.generator(j);
            (beta[m.add(x, gj)] + 2 * n - beta[x] - beta[gj]) % n == rhs(&coords[x], j) % n
        })
    });
    Ok(consistent.then_some(beta))
}

/// The inner automorphism `α_m(x̃) = e(m, x) x̃`, i.e. conjugation by a lift of `m`.
pub fn inner_aut(h: &ThetaGroup, m: &[u64]) -> Result<ThetaAut> {
    let d = type_of(h)?;
    h.ensure_tabulable()?;
    let module = h.module();
    let beta = (0..module.size()).map(|x| h.module_pairing(m, &module.decode(x))).collect();
    Ok(ThetaAut { a: SpMatrix::identity(d), beta })
}

/// `ψ_A(x, y) = B(Ax, Ay) - B(x, y)`.
fn psi(h: &ThetaGroup, a: &SpMatrix, x: &[u64], y: &[u64]) -> u64 {
    (h.phi(&a.apply(x), &a.apply(y)) + h.n() - h.phi(x, y)) % h.n()
}

/// Some automorphism over `A`, with the size of the solution kernel.
pub fn lift_sp_with_kernel(h: &ThetaGroup, a: &SpMatrix) -> Result<(ThetaAut, Vec<Vec<u64>>)> {
    let m = h.module();
    if !a.is_symplectic(m) {
        return Err(Error::Validation("matrix does not preserve the pairing".into()));
    }
    let gens: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.decode(m.generator(j))).collect();
    let sol = solve_quadratic_system(h, |x, j| psi(h, a, x, &gens[j]))?;
    let Some((beta, kernel)) = sol else {
        return Err(Error::Soundness("surjectivity violated: no automorphism over a symplectic matrix".into()));
    };
    Ok((ThetaAut { a: a.clone(), beta }, kernel))
}

/// Some automorphism over `A` (the forgetful map to `Sp` is surjective).
pub fn lift_sp(h: &ThetaGroup, a: &SpMatrix) -> Result<ThetaAut> {
    let m = h.module();
    if !a.is_symplectic(m) {
        return Err(Error::Validation("matrix does not preserve the pairing".into()));
    }
    let gens: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.decode(m.generator(j))).collect();
    match particular_solution(h, |x, j| psi(h, a, x, &gens[j]))? {
        Some(beta) => Ok(ThetaAut { a: a.clone(), beta }),
        None => Err(Error::Soundness("surjectivity violated: no automorphism over a symplectic matrix".into())),
    }
}

/// Number of automorphisms over `A`: the size of the solution set.
pub fn fiber_size(h: &ThetaGroup, a: &SpMatrix) -> Result<u128> {
    let (_, kernel) = lift_sp_with_kernel(h, a)?;
    Ok(span_size(&kernel, h.n()))
}

/// Every automorphism over `A`: the particular lift plus the kernel span.
pub fn all_lifts(h: &ThetaGroup, a: &SpMatrix) -> Result<Vec<ThetaAut>> {
    let (base, kernel) = lift_sp_with_kernel(h, a)?;
    let n = h.n();
    let mut tables = vec![base.beta.clone()];
    for k in &kernel {
        let pivot = k.iter().copied().find(|&x| x != 0).expect("nonzero row");
        let steps = n / crate::arith::gcd(pivot, n);
        let mut next = Vec::with_capacity(tables.len() * steps as usize);
        for t in &tables {
            for s in 0..steps {
                next.push(t.iter().zip(k).map(|(&x, &y)| (x + s * y) % n).collect::<Vec<u64>>());
            }
        }
        tables = next;
    }
    Ok(tables.into_iter().map(|beta| ThetaAut { a: a.clone(), beta }).collect())
}

/// The inversion `(t, m) -> (t, -m)`.
pub fn standard_inversion(h: &ThetaGroup) -> Result<ThetaAut> {
    let d = type_of(h)?;
    h.ensure_tabulable()?;
    Ok(ThetaAut { a: SpMatrix::minus_identity(d), beta: vec![0; h.module().size()] })
}

/// Whether `ι` is an automorphism inducing `-I` on the module.
pub fn is_inversion(h: &ThetaGroup, iota: &ThetaAut) -> bool {
    match h.type_d() {
        Some(d) => iota.a == SpMatrix::minus_identity(d) && iota.is_valid(h),
        None => false,
    }
}

/// All inversions: the automorphisms over `-I`.
pub fn find_inversions(h: &ThetaGroup) -> Result<Vec<ThetaAut>> {
    let d = type_of(h)?;
    all_lifts(h, &SpMatrix::minus_identity(d))
}

/// The element `m` with `e(m, g_j) = values[j]` for all generators.
pub fn element_from_pairing(h: &ThetaGroup, values: &[u64]) -> Result<Vec<u64>> {
    let m = h.module();
    let gens: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.decode(m.generator(j))).collect();
    crate::par::find_first(m.size(), |x| {
        let xc = m.decode(x);
        gens.iter().zip(values).all(|(g, &v)| h.module_pairing(&xc, g) == v).then_some(xc)
    })
    .map(|(_, c)| c)
    .ok_or_else(|| Error::Soundness("no module element realizes the pairing values".into()))
}

/// A framed isomorphism `H1 -> H2` (identity on the centre and on `M`):
/// `(t, m) -> (t + β(m), m)` with `β(m+m') - β(m) - β(m') = B2(m,m') - B1(m,m')`.
///
/// Returns `None` only when the linear system is certified unsolvable.
pub fn framed_isomorphism(h1: &ThetaGroup, h2: &ThetaGroup) -> Result<Option<Vec<u64>>> {
    if h1.module() != h2.module() || h1.n() != h2.n() {
        return Err(Error::Input("framed isomorphisms need equal modules and central moduli".into()));
    }
    let m = h1.module();
    let n = h1.n();
    let gens: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.decode(m.generator(j))).collect();
    let sol = solve_quadratic_system(h1, |x, j| (h2.phi(x, &gens[j]) + n - h1.phi(x, &gens[j])) % n)?;
    Ok(sol.map(|(beta, _)| beta))
}

/// Check a framed isomorphism on every pair of module elements.
pub fn verify_framed(h1: &ThetaGroup, h2: &ThetaGroup, beta: &[u64]) -> bool {
    let m = h1.module();
    let size = m.size();
    let n = h1.n();
    beta.len() == size
        && beta[0] == 0
        && crate::par::all_range(size * size, |ab| {
            let (x, y) = (ab / size, ab % size);
            let (xc, yc) = (m.decode(x), m.decode(y));
            let lhs = (beta[m.add(x, y)] + 2 * n - beta[x] - beta[y]) % n;
            lhs == (h2.phi(&xc, &yc) + n - h1.phi(&xc, &yc)) % n
        })
}

/// The square-root pairing `b = e/2` of a module of odd order, as a Gram table.
pub fn odd_sqrt_pairing(module: &crate::symmod::SymplecticModule) -> Result<Vec<u64>> {
    if module.size().is_multiple_of(2) {
        return Err(Error::Input("the square-root pairing needs a module of odd order".into()));
    }
    let big_n = module.modulus();
    let half = inv_mod(2 % big_n, big_n).ok_or_else(|| Error::Input("pairing modulus must be odd".into()))?;
    Ok(module.gram().iter().map(|&v| crate::arith::mul_mod(v, half, big_n)).collect())
}

/// The theta group `(t,m)(t',m') = (t + t' + b(m,m'), m + m')` for `b = e/2`.
pub fn odd_theta_group(module: &crate::symmod::SymplecticModule) -> Result<ThetaGroup> {
    let b = odd_sqrt_pairing(module)?;
    ThetaGroup::new(module.clone(), module.modulus(), b)
}

/// `Φ(α) = ι α ι^{-1}` for the standard inversion: `(A, β) -> (A, β(-x))`.
pub fn conjugate_by_inversion(h: &ThetaGroup, alpha: &ThetaAut) -> ThetaAut {
    let m = h.module();
    let beta = (0..m.size()).map(|x| alpha.beta[m.neg(x)]).collect();
    ThetaAut { a: alpha.a.clone(), beta }
}

/// The unique lift of `A` commuting with the standard inversion, for a theta
/// group of odd order.
///
/// Takes any lift `α`, writes the framed automorphism `Φ(α) α^{-1}` as
/// `α_m`, and corrects by `α_{m/2}`.
pub fn odd_canonical_section(h: &ThetaGroup, a: &SpMatrix) -> Result<ThetaAut> {
    let m = h.module();
    if m.size().is_multiple_of(2) {
        return Err(Error::Input("the canonical section needs a module of odd order".into()));
    }
    let alpha = lift_sp(h, a)?;
    let framed = conjugate_by_inversion(h, &alpha).compose(h, &alpha.inverse(h)?);
    let values: Vec<u64> = (0..m.rank()).map(|j| framed.beta[m.generator(j)]).collect();
    let m0 = element_from_pairing(h, &values)?;
    if inner_aut(h, &m0)?.beta != framed.beta {
        return Err(Error::Soundness("framed automorphism is not inner".into()));
    }
    let half = inv_mod(2, m.exponent()).expect("odd exponent");
    let c = m.scale_coords(half, &m0);
    let s = inner_aut(h, &c)?.compose(h, &alpha);
    if conjugate_by_inversion(h, &s) != s {
        return Err(Error::Soundness("canonical lift does not commute with the inversion".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::SpGroup;

    fn t(d: &[u64]) -> TypeD {
        TypeD::new(d).unwrap()
    }

    #[test]
    fn identity_lift_and_zero_beta() {
        let h = ThetaGroup::standard(&t(&[2, 2]));
        let id = ThetaAut::identity(&h).unwrap();
        assert!(id.is_valid(&h));
        let lifted = lift_sp(&h, &SpMatrix::identity(&t(&[2, 2]))).unwrap();
        assert!(lifted.is_valid(&h));
    }

    #[test]
    fn swap_lift_for_type_two() {
        let d = t(&[2]);
        let h = ThetaGroup::standard(&d);
        // e1 -> f1, f1 -> -e1 = e1.
        let a = SpMatrix::from_columns(&d, &[vec![0, 1], vec![1, 0]]).unwrap();
        let l = lift_sp(&h, &a).unwrap();
        assert!(l.is_valid_on_all_pairs(&h));
        assert!(l.beta.iter().all(|&b| b < 4));
    }

    #[test]
    fn walked_lifts_satisfy_all_pairs() {
        for dims in [&[2u64, 2][..], &[3, 3], &[5], &[2, 2, 2]] {
            let d = t(dims);
            let h = ThetaGroup::standard(&d);
            let sp = SpGroup::full(&d, 7).unwrap();
            for a in sp.generators() {
                let l = lift_sp(&h, a).unwrap();
                assert!(l.is_valid_on_all_pairs(&h), "{d}");
                assert!(lift_sp_with_kernel(&h, a).unwrap().0.is_valid_on_all_pairs(&h));
            }
        }
    }

    #[test]
    fn walked_solution_detects_inconsistency() {
        let h = ThetaGroup::standard(&t(&[2]));
        // β(m + g) - β(m) - β(g) = 1 for every m and g has no solution.
        assert!(particular_solution(&h, |_, _| 1).unwrap().is_none());
        assert!(solve_quadratic_system(&h, |_, _| 1).unwrap().is_none());
    }

    #[test]
    fn fibers_have_size_of_module() {
        let d = t(&[2, 2]);
        let h = ThetaGroup::standard(&d);
        let sp = SpGroup::full(&d, 1).unwrap();
        for a in sp.generators() {
            assert_eq!(fiber_size(&h, a).unwrap(), 16);
        }
    }

    #[test]
    fn inner_automorphisms() {
        let h = ThetaGroup::standard(&t(&[2]));
        let a = inner_aut(&h, &[1, 0]).unwrap();
        // Fixes (t, e1), negates the centre on (t, f1).
        assert_eq!(a.apply(&h, &ThetaElement { t: 1, m: vec![1, 0] }), ThetaElement { t: 1, m: vec![1, 0] });
        assert_eq!(a.apply(&h, &ThetaElement { t: 1, m: vec![0, 1] }), ThetaElement { t: 3, m: vec![0, 1] });
        assert!(inner_aut(&h, &[0, 0]).unwrap().beta.iter().all(|&b| b == 0));
        // Conjugation by a lift of m.
        let mt = ThetaElement { t: 0, m: vec![1, 1] };
        let al = inner_aut(&h, &[1, 1]).unwrap();
        for idx in 0..h.order() as usize {
            let x = h.element(idx);
            assert_eq!(al.apply(&h, &x), h.mul(&h.mul(&mt, &x), &h.inv(&mt)));
        }
    }

    #[test]
    fn inversions_for_two_torsion() {
        let h = ThetaGroup::standard(&t(&[2, 2]));
        let inv = find_inversions(&h).unwrap();
        assert_eq!(inv.len(), 16);
        assert!(inv.iter().all(|i| is_inversion(&h, i)));
        assert!(is_inversion(&h, &standard_inversion(&h).unwrap()));
        let sq = inv[3].compose(&h, &inv[5]);
        assert_eq!(sq.a, SpMatrix::identity(&t(&[2, 2])));
    }

    #[test]
    fn odd_pairing_values() {
        let m3 = crate::symmod::SymplecticModule::standard(&t(&[3]));
        assert_eq!(odd_sqrt_pairing(&m3).unwrap()[1], 2);
        let m5 = crate::symmod::SymplecticModule::standard(&t(&[5]));
        let b = odd_sqrt_pairing(&m5).unwrap();
        assert!(m5.gram().iter().zip(&b).all(|(&e, &x)| x == e * 3 % 5));
        assert!(odd_sqrt_pairing(&crate::symmod::SymplecticModule::standard(&t(&[2]))).is_err());
    }

    #[test]
    fn canonical_section_matches_half_psi() {
        let d = t(&[3]);
        let h = ThetaGroup::standard(&d);
        let sp = SpGroup::full(&d, 1).unwrap();
        let m = h.module();
        for p in sp.chain().elements() {
            let a = sp.matrix_of(&p);
            let s = odd_canonical_section(&h, &a).unwrap();
            for x in 0..m.size() {
                let xc = m.decode(x);
                assert_eq!(s.beta[x], psi(&h, &a, &xc, &xc) * 2 % 3);
            }
        }
    }

    #[test]
    fn framed_iso_between_sum_and_standard() {
        let h2 = ThetaGroup::standard(&t(&[2]));
        let sum = h2.baer_sum(&h2).reorder(&[0, 2, 1, 3]).unwrap();
        let std = ThetaGroup::standard(&t(&[2, 2]));
        let sum = sum.with_standard_module(&t(&[2, 2])).unwrap();
        let beta = framed_isomorphism(&sum, &std).unwrap().unwrap();
        assert!(verify_framed(&sum, &std, &beta));
    }
}
