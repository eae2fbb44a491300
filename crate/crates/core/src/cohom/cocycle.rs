use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ringlinalg::{solve_mod, BitMatrix, ResMatrix};
use crate::symmod::SymplecticModule;
use crate::theta::{inner_aut, lift_sp, odd_canonical_section, ThetaAut, ThetaGroup};

use super::FiniteGroupTable;

/// Largest number of unknown coordinates accepted by the coboundary solver.
pub const MAX_UNKNOWNS: usize = 1 << 23;

/// A normalized 2-cocycle `c: G x G -> M` for a matrix group acting on a
/// module by `g·m = A_g m`; values are module element indices.
#[derive(Clone, Debug)]
pub struct Cocycle2 {
    pub group: FiniteGroupTable,
    pub module: SymplecticModule,
    /// `table[g * |G| + h] = c(g, h)`.
    pub table: Vec<u32>,
    act: Vec<Vec<u32>>,
    ops: ModuleOps,
}

/// Index arithmetic on a module, tabulated when the module is small.
#[derive(Clone, Debug)]
struct ModuleOps {
    size: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

const MAX_ADD_TABLE: usize = 256;

impl ModuleOps {
    fn new(m: &SymplecticModule) -> Self {
        let size = m.size();
        let neg = (0..size).map(|a| m.neg(a) as u32).collect();
        let add = if size <= MAX_ADD_TABLE {
            (0..size * size).map(|ab| m.add(ab / size, ab % size) as u32).collect()
        } else {
            Vec::new()
        };
        ModuleOps { size, add, neg }
    }

    #[inline]
    fn add(&self, m: &SymplecticModule, a: usize, b: usize) -> usize {
        if self.add.is_empty() {
            m.add(a, b)
        } else {
            self.add[a * self.size + b] as usize
        }
    }

    #[inline]
    fn sub(&self, m: &SymplecticModule, a: usize, b: usize) -> usize {
        self.add(m, a, self.neg[b] as usize)
    }
}

impl Cocycle2 {
    pub fn new(group: FiniteGroupTable, module: SymplecticModule, table: Vec<u32>) -> Result<Self> {
        if table.len() != group.len() * group.len() {
            return Err(Error::Input("cocycle table has the wrong size".into()));
        }
        let act = group.action_table(&module);
        let ops = ModuleOps::new(&module);
        Ok(Cocycle2 { group, module, table, act, ops })
    }

    pub fn zero(group: FiniteGroupTable, module: SymplecticModule) -> Self {
        let n = group.len();
        Self::new(group, module, vec![0; n * n]).expect("sized")
    }

    #[inline]
    pub fn value(&self, g: usize, h: usize) -> usize {
        self.table[g * self.group.len() + h] as usize
    }

    #[inline]
    pub fn act(&self, g: usize, m: usize) -> usize {
        self.act[g][m] as usize
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.group.len()).all(|g| self.value(0, g) == 0 && self.value(g, 0) == 0)
    }

    /// `g·c(h,k) - c(gh,k) + c(g,hk) - c(g,h)` at one triple.
    fn defect(&self, g: usize, h: usize, k: usize) -> usize {
        let (m, o, gr) = (&self.module, &self.ops, &self.group);
        let lhs = o.add(m, self.act(g, self.value(h, k)), self.value(g, gr.mul(h, k)));
        let rhs = o.add(m, self.value(gr.mul(g, h), k), self.value(g, h));
        o.sub(m, lhs, rhs)
    }

    /// Cocycle identity on every triple.
    pub fn is_cocycle(&self) -> bool {
        let n = self.group.len();
        self.is_normalized() && crate::par::all_range(n * n, |gh| (0..n).all(|k| self.defect(gh / n, gh % n, k) == 0))
    }

    /// Cocycle identity on random triples.
    pub fn is_cocycle_sampled(&self, samples: usize, seed: u64) -> bool {
        let n = self.group.len();
        let triples: Vec<(usize, usize, usize)> = {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))).collect()
        };
        self.is_normalized() && crate::par::all_range(triples.len(), |i| {
            let (g, h, k) = triples[i];
            self.defect(g, h, k) == 0
        })
    }

    /// Whether `c = δf`, i.e. `c(g,h) = g·f(h) - f(gh) + f(g)` on all pairs.
    pub fn is_coboundary_of(&self, f: &[u32]) -> bool {
        let n = self.group.len();
        let (m, o) = (&self.module, &self.ops);
        f.len() == n
            && crate::par::all_range(n * n, |gh| {
                let (g, h) = (gh / n, gh % n);
                let df = o.add(m, o.sub(m, self.act(g, f[h] as usize), f[self.group.mul(g, h)] as usize), f[g] as usize);
                df == self.value(g, h)
            })
    }

    /// `self - other` (same group and module).
    pub fn difference(&self, other: &Cocycle2) -> Cocycle2 {
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&a, &b)| self.ops.sub(&self.module, a as usize, b as usize) as u32)
            .collect();
        Cocycle2 { table, ..self.clone() }
    }

    /// Restriction to a subgroup given by its own table; its elements are
    /// located in this group by matrix lookup.
    pub fn restrict(&self, sub: &FiniteGroupTable) -> Result<Cocycle2> {
        let map: Vec<usize> = sub
            .elements()
            .iter()
            .map(|a| self.group.index_of(a).ok_or_else(|| Error::Input("subgroup element outside the group".into())))
            .collect::<Result<_>>()?;
        let k = sub.len();
        let table = (0..k * k).map(|ij| self.value(map[ij / k], map[ij % k]) as u32).collect();
        Cocycle2::new(sub.clone(), self.module.clone(), table)
    }

    /// The cocycle transported to a relisting of the same group.
    pub fn relabel(&self, relisted: &FiniteGroupTable) -> Result<Cocycle2> {
        self.restrict(relisted)
    }
}

/// Lookup from the pairing row `(e(m, g_j))_j` to `m`.
struct PairingIndex {
    rows: HashMap<Vec<u64>, u32>,
}

impl PairingIndex {
    fn new(h: &ThetaGroup) -> Self {
        let m = h.module();
        let gens: Vec<Vec<u64>> = (0..m.rank()).map(|j| m.decode(m.generator(j))).collect();
        let rows = (0..m.size())
            .map(|x| {
                let xc = m.decode(x);
                (gens.iter().map(|g| h.module_pairing(&xc, g)).collect(), x as u32)
            })
            .collect();
        PairingIndex { rows }
    }

    fn find(&self, values: &[u64]) -> Option<u32> {
        self.rows.get(values).copied()
    }
}

/// Chosen lifts `α_g` of the group elements (identity lifted to the identity).
pub fn default_lifts(h: &ThetaGroup, group: &FiniteGroupTable) -> Result<Vec<ThetaAut>> {
    let mut lifts: Vec<Result<ThetaAut>> = crate::par::map_range(group.len(), |g| lift_sp(h, group.element(g)));
    lifts[0] = ThetaAut::identity(h);
    lifts.into_iter().collect()
}

/// The lifts `α_{k(g)} ∘ α_g` for seeded random `k(g)` with `k(1) = 0`.
pub fn perturbed_lifts(h: &ThetaGroup, lifts: &[ThetaAut], seed: u64) -> Result<Vec<ThetaAut>> {
    let m = h.module();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<usize> = (0..lifts.len()).map(|g| if g == 0 { 0 } else { rng.random_range(0..m.size()) }).collect();
    lifts
        .iter()
        .zip(shifts)
        .map(|(l, k)| Ok(inner_aut(h, &m.decode(k))?.compose(h, l)))
        .collect()
}

/// The extension cocycle for the given lifts: `c(g,h)` is the unique `m`
/// with `α_g α_h = α_m α_{gh}`.
pub fn extension_cocycle_with_lifts(
    h: &ThetaGroup,
    group: &FiniteGroupTable,
    lifts: &[ThetaAut],
) -> Result<Cocycle2> {
    let m = h.module();
    let n = h.n();
    let size = group.len();
    let r = m.rank();
    let index = PairingIndex::new(h);
    // y[k][j] = A_k^{-1} g_j, so that e(c, g_j) = β_h(y) + β_g(A_h y) - β_gh(y).
    let pre: Vec<Vec<usize>> = (0..size)
        .map(|k| {
            let inv = group.element(group.inv(k));
            (0..r).map(|j| m.encode(&inv.apply(&m.decode(m.generator(j))))).collect()
        })
        .collect();
    let acts = group.action_table(m);
    let rows: Vec<Option<Vec<u32>>> = crate::par::map_range(size, |g| {
        let mut row = Vec::with_capacity(size);
        for hh in 0..size {
            let gh = group.mul(g, hh);
            let values: Vec<u64> = pre[gh]
                .iter()
                .map(|&y| {
                    let ahy = acts[hh][y] as usize;
                    (lifts[hh].beta[y] + lifts[g].beta[ahy] + n - lifts[gh].beta[y]) % n
                })
                .collect();
            row.push(index.find(&values)?);
        }
        Some(row)
    });
    let mut table = Vec::with_capacity(size * size);
    for row in rows {
        table.extend(row.ok_or_else(|| Error::Soundness("defect automorphism is not inner".into()))?);
    }
    Cocycle2::new(group.clone(), m.clone(), table)
}

/// The extension cocycle of `1 -> M -> Aut(H) -> Sp(M) -> 1` restricted to
/// `group`, for the default lifts.
pub fn extension_cocycle(h: &ThetaGroup, group: &FiniteGroupTable) -> Result<Cocycle2> {
    let lifts = default_lifts(h, group)?;
    extension_cocycle_with_lifts(h, group, &lifts)
}

/// Outcome of a coboundary solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryVerdict {
    /// `c = δf` with the verified witness `f` (module element indices).
    Coboundary(Vec<u32>),
    /// The linear system for `f` is inconsistent.
    NotCoboundary { unknowns: usize, equations: usize },
}

impl CoboundaryVerdict {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryVerdict::Coboundary(_))
    }
}

impl std::fmt::Display for CoboundaryVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoboundaryVerdict::Coboundary(w) => write!(f, "a coboundary (witness with {} values)", w.len()),
            CoboundaryVerdict::NotCoboundary { unknowns, equations } => {
                write!(f, "not a coboundary ({unknowns} unknowns, {equations} equations, inconsistent)")
            }
        }
    }
}

/// Decide whether `c` is a coboundary over a module of type `(p, ..., p)`.
///
/// Unknowns are the coordinates of `f(g)` for `g != 1`; equations are
/// `c(g,s) = g·f(s) - f(gs) + f(g)` for all `g` and generators `s`. A
/// cocycle agreeing with `δf` on `G x S` agrees everywhere (the difference
/// is a normalized cocycle invariant under right multiplication by `S` in
/// its second argument), and any witness is re-verified on every pair.
pub fn is_coboundary(c: &Cocycle2) -> Result<CoboundaryVerdict> {
    let m = &c.module;
    let p = m.orders().first().copied().unwrap_or(1);
    if m.orders().iter().any(|&o| o != p) || !crate::arith::is_prime(p) {
        return Err(Error::Unsupported("coboundary solver needs a module of type (p,...,p)".into()));
    }
    let size = c.group.len();
    let r = m.rank();
    let unknowns = (size - 1) * r;
    if unknowns > MAX_UNKNOWNS {
        return Err(Error::Capacity(format!(
            "{unknowns} unknowns exceed {MAX_UNKNOWNS}; restrict to a Sylow subgroup instead"
        )));
    }
    let gens = c.group.small_generating_set();
    let equations = size * gens.len() * r;
    let col = |g: usize, i: usize| (g - 1) * r + i;
    // Coefficient lists per equation row.
    let mut rows: Vec<(Vec<(usize, u64)>, u64)> = Vec::with_capacity(equations);
    for g in 0..size {
        let ag = c.group.element(g);
        for &s in &gens {
            let gs = c.group.mul(g, s);
            let target = m.decode(c.value(g, s));
            for i in 0..r {
                let mut coeffs: Vec<(usize, u64)> = Vec::new();
                if s != 0 {
                    for j in 0..r {
                        let a = ag.get(i, j) % p;
                        if a != 0 {
                            coeffs.push((col(s, j), a));
                        }
                    }
                }
                if gs != 0 {
                    coeffs.push((col(gs, i), p - 1));
                }
                if g != 0 {
                    coeffs.push((col(g, i), 1));
                }
                rows.push((coeffs, target[i]));
            }
        }
    }
    let solution: Option<Vec<u64>> = if p == 2 {
        let mut a = BitMatrix::zeros(0, unknowns);
        let mut b = Vec::with_capacity(rows.len());
        for (coeffs, rhs) in &rows {
            let mut acc: HashMap<usize, u64> = HashMap::new();
            for &(k, v) in coeffs {
                *acc.entry(k).or_insert(0) += v;
            }
            let mut support: Vec<usize> = acc.into_iter().filter(|(_, v)| v % 2 == 1).map(|(k, _)| k).collect();
            support.sort_unstable();
            a.push_row_from_support(&support);
            b.push(rhs % 2 == 1);
        }
        a.solve(&b)?.map(|s| s.x.into_iter().map(u64::from).collect())
    } else {
        let mut a = ResMatrix::zeros(rows.len(), unknowns, p);
        let mut b = Vec::with_capacity(rows.len());
        for (row, (coeffs, rhs)) in rows.iter().enumerate() {
            for &(k, v) in coeffs {
                a.set(row, k, (a.get(row, k) + v) % p);
            }
            b.push(rhs % p);
        }
        solve_mod(&a, &b)?.map(|s| s.x)
    };
    match solution {
        None => Ok(CoboundaryVerdict::NotCoboundary { unknowns, equations }),
        Some(x) => {
            let mut f = vec![0u32; size];
            for (g, fg) in f.iter_mut().enumerate().skip(1) {
                *fg = m.encode(&x[col(g, 0)..col(g, 0) + r]) as u32;
            }
            if !c.is_coboundary_of(&f) {
                return Err(Error::Soundness("coboundary witness fails on some pair".into()));
            }
            Ok(CoboundaryVerdict::Coboundary(f))
        }
    }
}

/// For odd modules: the witness `f = -u` where the canonical section is
/// `s(g) = α_{u(g)} ∘ α_g`.
pub fn odd_coboundary_witness(h: &ThetaGroup, group: &FiniteGroupTable, lifts: &[ThetaAut]) -> Result<Vec<u32>> {
    let m = h.module();
    let index = PairingIndex::new(h);
    let gens: Vec<usize> = (0..m.rank()).map(|j| m.generator(j)).collect();
    (0..group.len())
        .map(|g| {
            let s = odd_canonical_section(h, group.element(g))?;
            let framed = s.compose(h, &lifts[g].inverse(h)?);
            let values: Vec<u64> = gens.iter().map(|&y| framed.beta[y]).collect();
            let u = index.find(&values).ok_or_else(|| Error::Soundness("section offset is not inner".into()))?;
            Ok(m.neg(u as usize) as u32)
        })
        .collect()
}

/// Result of the lifting decision for a subgroup.
#[derive(Clone, Debug)]
pub struct LiftingDecision {
    pub lifts: bool,
    /// The homomorphic section `g -> α_{-f(g)} ∘ α_g`, when it exists.
    pub section: Option<Vec<ThetaAut>>,
    pub verdict: CoboundaryVerdict,
}

/// Whether the subgroup lifts to `Aut(H)`, with a verified homomorphic section.
pub fn lifting_decision(h: &ThetaGroup, group: &FiniteGroupTable) -> Result<LiftingDecision> {
    let lifts = default_lifts(h, group)?;
    let c = extension_cocycle_with_lifts(h, group, &lifts)?;
    let verdict = is_coboundary(&c)?;
    let CoboundaryVerdict::Coboundary(f) = &verdict else {
        return Ok(LiftingDecision { lifts: false, section: None, verdict });
    };
    let m = h.module();
    let section: Vec<ThetaAut> = (0..group.len())
        .map(|g| Ok(inner_aut(h, &m.decode(m.neg(f[g] as usize)))?.compose(h, &lifts[g])))
        .collect::<Result<_>>()?;
    let n = group.len();
    let homomorphic = crate::par::all_range(n * n, |gh| {
        let (g, k) = (gh / n, gh % n);
        section[g].compose(h, &section[k]) == section[group.mul(g, k)]
    });
    if !homomorphic {
        return Err(Error::Soundness("assembled section is not a homomorphism".into()));
    }
    Ok(LiftingDecision { lifts: true, section: Some(section), verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::{SpGroup, SpMatrix};
    use crate::symmod::TypeD;

    fn full_table(d: &TypeD) -> FiniteGroupTable {
        let sp = SpGroup::full(d, 1).unwrap();
        FiniteGroupTable::generate(SpMatrix::identity(d), sp.generators()).unwrap()
    }

    #[test]
    fn trivial_group_gives_zero_cocycle() {
        let d = TypeD::new(&[2, 2]).unwrap();
        let h = ThetaGroup::standard(&d);
        let g = FiniteGroupTable::generate(SpMatrix::identity(&d), &[]).unwrap();
        let c = extension_cocycle(&h, &g).unwrap();
        assert_eq!(c.table, vec![0]);
        assert_eq!(is_coboundary(&c).unwrap(), CoboundaryVerdict::Coboundary(vec![0]));
    }

    #[test]
    fn type_three_splits_with_both_witnesses() {
        let d = TypeD::new(&[3]).unwrap();
        let h = ThetaGroup::standard(&d);
        let g = full_table(&d);
        let lifts = default_lifts(&h, &g).unwrap();
        let c = extension_cocycle_with_lifts(&h, &g, &lifts).unwrap();
        assert!(c.is_cocycle());
        assert!(is_coboundary(&c).unwrap().is_coboundary());
        let f = odd_coboundary_witness(&h, &g, &lifts).unwrap();
        assert!(c.is_coboundary_of(&f));
        let dec = lifting_decision(&h, &g).unwrap();
        assert!(dec.lifts);
    }

    #[test]
    fn type_two_cocycle_and_lift_rechoice() {
        let d = TypeD::new(&[2]).unwrap();
        let h = ThetaGroup::standard(&d);
        let g = full_table(&d);
        let lifts = default_lifts(&h, &g).unwrap();
        let c = extension_cocycle_with_lifts(&h, &g, &lifts).unwrap();
        assert!(c.is_cocycle());
        let other = extension_cocycle_with_lifts(&h, &g, &perturbed_lifts(&h, &lifts, 3).unwrap()).unwrap();
        assert!(other.is_cocycle());
        assert!(is_coboundary(&c.difference(&other)).unwrap().is_coboundary());
    }
}
