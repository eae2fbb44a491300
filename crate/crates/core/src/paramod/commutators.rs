//! Explicit commutator expressions for the generators of `Γ`.
//!
//! Every element of `L`, `U` and `U^opp` is written as a product of
//! commutators `[a, b] = a b a⁻¹ b⁻¹` with `a, b ∈ Γ`, following the
//! elementary-matrix decompositions: `α` of an elementary matrix is a single
//! commutator of two `α`s, the long-root elements `β(tE_aa)` and the
//! symmetric off-diagonal `β`s come from `[α, β]` commutators, the diagonal
//! torus elements are products of long-root elements, and the `Y22` and
//! off-diagonal parts of `U′` come from the lower-block and off-diagonal
//! commutator identities. Together with the reduction of members to words,
//! this certifies that the tested elements lie in `Γ^der`.

use crate::error::{Error, Result};
use crate::spgroup::SpGroup;
use crate::symmod::TypeD;

use super::mat::{inv_odd, Mat2};
use super::para::{
    embed_alpha, embed_beta, random_l_prime, random_u_prime, reduce_entries, Letter, ParaMatrix, ParaShape,
};
use super::reduce::{random_gamma_word, reduce_to_identity};
use super::{run_trials, ShadowCheck};

/// A target written as `∏ [a_i, b_i]`.
#[derive(Clone, Debug)]
pub struct CommutatorExpression {
    pub target: ParaMatrix,
    pub pairs: Vec<(ParaMatrix, ParaMatrix)>,
}

impl CommutatorExpression {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn product(&self) -> Result<ParaMatrix> {
        self.pairs.iter().try_fold(ParaMatrix::identity(self.target.shape), |acc, (a, b)| {
            Ok(acc.mul(&ParaMatrix::commutator(a, b)?))
        })
    }

    /// Every `a_i, b_i` lies in `Γ` and the product equals the target
    /// modulo `2^bits`.
    pub fn verify(&self, bits: u32) -> Result<bool> {
        for (a, b) in &self.pairs {
            if !a.is_in_gamma(bits)? || !b.is_in_gamma(bits)? {
                return Ok(false);
            }
        }
        self.product()?.eq_mod(&self.target, bits)
    }
}

type Pairs = Vec<(ParaMatrix, ParaMatrix)>;

struct Builder {
    shape: ParaShape,
    bits: u32,
}

impl Builder {
    fn new(shape: ParaShape, bits: u32) -> Result<Self> {
        if shape.n < 3 || shape.k < 2 {
            return Err(Error::Unsupported("commutator expressions need n >= 3 and k >= 2".into()));
        }
        Ok(Builder { shape, bits })
    }

    fn g(&self) -> usize {
        self.shape.g()
    }

    fn in_block_one(&self, i: usize) -> bool {
        i < self.shape.n
    }

    fn elem(&self, i: usize, j: usize, t: u64) -> Mat2 {
        Mat2::identity(self.g()).add(&Mat2::unit(self.g(), self.g(), i, j, t))
    }

    fn alpha(&self, x: &Mat2) -> Result<ParaMatrix> {
        embed_alpha(self.shape, x)
    }

    fn beta(&self, y: &Mat2) -> Result<ParaMatrix> {
        embed_beta(self.shape, y, self.bits)
    }

    /// An index of block one different from all of `avoid`.
    fn spare(&self, avoid: &[usize]) -> usize {
        (0..self.shape.n).find(|z| !avoid.contains(z)).expect("n >= 3 leaves a spare index")
    }

    /// `α(I + tE_ij)` for `i != j`, `t` even when `i` is in block one and `j` in block two.
    fn elementary(&self, i: usize, j: usize, t: u64) -> Result<Pairs> {
        if t == 0 {
            return Ok(Vec::new());
        }
        let z = self.spare(&[i, j]);
        let (a, b) = if self.in_block_one(j) {
            (self.elem(i, z, t), self.elem(z, j, 1))
        } else {
            if t & 1 == 1 {
                return Err(Error::Input("an elementary matrix into block two from block one needs an even entry".into()));
            }
            (self.elem(i, z, t >> 1), self.elem(z, j, 2))
        };
        Ok(vec![(self.alpha(&a)?, self.alpha(&b)?)])
    }

    fn sym_unit(&self, a: usize, b: usize, t: u64) -> Mat2 {
        let g = self.g();
        if a == b {
            Mat2::unit(g, g, a, a, t)
        } else {
            Mat2::unit(g, g, a, b, t).add(&Mat2::unit(g, g, b, a, t))
        }
    }

    /// `β(s(E_ab + E_ba))` for distinct `a, b` in block one.
    fn beta_sym_pair(&self, a: usize, b: usize, s: u64) -> Result<Pairs> {
        if s == 0 {
            return Ok(Vec::new());
        }
        let l = self.spare(&[a, b]);
        Ok(vec![(self.alpha(&self.elem(a, l, 1))?, self.beta(&self.sym_unit(l, b, s))?)])
    }

    /// `β(tE_aa)` for `a` in block one.
    fn long_root(&self, a: usize, t: u64) -> Result<Pairs> {
        if t == 0 {
            return Ok(Vec::new());
        }
        let j = self.spare(&[a]);
        let mut out = vec![(self.alpha(&self.elem(a, j, 1))?, self.beta(&self.sym_unit(j, j, t))?)];
        out.extend(self.beta_sym_pair(a, j, t.wrapping_neg())?);
        Ok(out)
    }

    /// `β^opp(tE_aa) = h β(−tE_aa) h⁻¹`.
    fn long_root_opp(&self, a: usize, t: u64) -> Result<Pairs> {
        Ok(conj_h(self.long_root(a, t.wrapping_neg())?))
    }

    /// `α(diag)` with `u` at block-one index `a`, as
    /// `x(u) y(−u⁻¹) x(u) x(−1) y(1) x(−1)` in the `(e_a, f_a)` plane.
    fn torus_block_one(&self, a: usize, u: u64) -> Result<Pairs> {
        if u == 1 {
            return Ok(Vec::new());
        }
        let ui = inv_odd(u);
        let m1 = 1u64.wrapping_neg();
        let mut out = Vec::new();
        out.extend(self.long_root(a, u)?);
        out.extend(self.long_root_opp(a, ui.wrapping_neg())?);
        out.extend(self.long_root(a, u)?);
        out.extend(self.long_root(a, m1)?);
        out.extend(self.long_root_opp(a, 1)?);
        out.extend(self.long_root(a, m1)?);
        Ok(out)
    }

    /// `α(diag)` with the odd unit `u` at block-two index `i`, as
    /// `diag(v, v⁻¹)` on `(a, i)` with `v = u⁻¹`, times `u` at `a`.
    fn torus_block_two(&self, i: usize, u: u64) -> Result<Pairs> {
        if u == 1 {
            return Ok(Vec::new());
        }
        let a = 0;
        let v = inv_odd(u);
        let vi = u;
        let vm1 = v.wrapping_sub(1);
        let mut out = Vec::new();
        out.extend(self.elementary(i, a, vi.wrapping_neg())?);
        out.extend(self.elementary(a, i, vm1)?);
        out.extend(self.elementary(i, a, 1)?);
        out.extend(self.elementary(a, i, vm1.wrapping_mul(vi).wrapping_neg())?);
        out.extend(self.torus_block_one(a, u)?);
        Ok(out)
    }

    fn torus(&self, i: usize, u: u64) -> Result<Pairs> {
        if self.in_block_one(i) {
            self.torus_block_one(i, u)
        } else {
            self.torus_block_two(i, u)
        }
    }

    /// Gauss–Jordan on the square block at `offset`: `M = ∏ e(op)⁻¹ · diag`.
    fn gl_block(&self, m: &Mat2, offset: usize) -> Result<Pairs> {
        let size = m.rows();
        let mut a = m.clone();
        let mut ops: Vec<(usize, usize, u64)> = Vec::new();
        let row_add = |a: &mut Mat2, r: usize, c: usize, f: u64| {
            for col in 0..size {
                let v = a.get(r, col).wrapping_add(f.wrapping_mul(a.get(c, col)));
                a.set(r, col, v);
            }
        };
        for c in 0..size {
            if a.get(c, c) & 1 == 0 {
                let r = (c + 1..size)
                    .find(|&r| a.get(r, c) & 1 == 1)
                    .ok_or_else(|| Error::Input("block is not invertible modulo 2".into()))?;
                row_add(&mut a, c, r, 1);
                ops.push((c, r, 1));
            }
            let pivot_inv = inv_odd(a.get(c, c));
            for r in 0..size {
                if r != c && a.get(r, c) != 0 {
                    let f = a.get(r, c).wrapping_mul(pivot_inv).wrapping_neg();
                    row_add(&mut a, r, c, f);
                    ops.push((r, c, f));
                }
            }
        }
        let mut out = Vec::new();
        for &(r, c, f) in &ops {
            out.extend(self.elementary(offset + r, offset + c, f.wrapping_neg())?);
        }
        for d in 0..size {
            out.extend(self.torus(offset + d, a.get(d, d))?);
        }
        Ok(out)
    }

    /// `α(X)` for `X ∈ L′`, via `X = (I 0; C I)(X11 0; 0 S)(I B; 0 I)`.
    fn l_prime(&self, x: &Mat2) -> Result<Pairs> {
        let s = self.shape;
        let (n, k) = (s.n, s.k);
        let x11 = s.sub_block(x, 1, 1);
        let x11i = x11.inverse()?;
        let c = s.sub_block(x, 2, 1).mul(&x11i);
        let b = x11i.mul(&s.sub_block(x, 1, 2));
        let sc = s.sub_block(x, 2, 2).sub(&c.mul(&x11).mul(&b));
        let mut out = Vec::new();
        for i in 0..k {
            for a in 0..n {
                out.extend(self.elementary(n + i, a, c.get(i, a))?);
            }
        }
        out.extend(self.gl_block(&x11, 0)?);
        out.extend(self.gl_block(&sc, n)?);
        for a in 0..n {
            for i in 0..k {
                out.extend(self.elementary(a, n + i, b.get(a, i))?);
            }
        }
        Ok(out)
    }

    /// `β(offdiag(pE_ia))` (`Y21 = pE_ia`, `Y12 = 2pE_ai`) for `i` in block two, `a` in block one.
    fn off_diagonal(&self, i: usize, a: usize, p: u64) -> Result<Pairs> {
        if p == 0 {
            return Ok(Vec::new());
        }
        let b = self.spare(&[a]);
        Ok(vec![(self.alpha(&self.elem(a, b, 1))?, self.beta(&self.offdiag_unit(i, b, p))?)])
    }

    fn offdiag_unit(&self, i: usize, a: usize, p: u64) -> Mat2 {
        let g = self.g();
        Mat2::unit(g, g, i, a, p).add(&Mat2::unit(g, g, a, i, p.wrapping_mul(2)))
    }

    /// `β(2t E_ii)` or `β(2t(E_ij + E_ji))` for `i, j` in block two.
    fn block_two_symmetric(&self, i: usize, j: usize, t: u64) -> Result<Pairs> {
        if t == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        if i == j {
            let a = 0;
            out.push((self.alpha(&self.elem(i, a, 1))?, self.beta(&self.sym_unit(a, a, t))?));
            out.extend(self.off_diagonal(i, a, t.wrapping_neg())?);
        } else {
            let (a, b) = (0, 1);
            let x = self.elem(i, a, 1).add(&Mat2::unit(self.g(), self.g(), j, b, 1));
            out.push((self.alpha(&x)?, self.beta(&self.sym_unit(a, b, t))?));
            out.extend(self.off_diagonal(i, b, t.wrapping_neg())?);
            out.extend(self.off_diagonal(j, a, t.wrapping_neg())?);
        }
        Ok(out)
    }

    /// `β(Y)` for `Y ∈ U′`, part by part.
    fn u_prime(&self, y: &Mat2) -> Result<Pairs> {
        let (n, g) = (self.shape.n, self.g());
        let mut out = Vec::new();
        for a in 0..n {
            out.extend(self.long_root(a, y.get(a, a))?);
            for b in a + 1..n {
                out.extend(self.beta_sym_pair(a, b, y.get(a, b))?);
            }
        }
        for i in n..g {
            for a in 0..n {
                out.extend(self.off_diagonal(i, a, y.get(i, a))?);
            }
        }
        for i in n..g {
            for j in i..g {
                let v = y.get(i, j);
                if v & 1 == 1 {
                    return Err(Error::Input("Y22 must be even".into()));
                }
                out.extend(self.block_two_symmetric(i, j, v >> 1)?);
            }
        }
        Ok(out)
    }
}

fn conj_h(pairs: Pairs) -> Pairs {
    pairs.into_iter().map(|(a, b)| (a.h_conj(), b.h_conj())).collect()
}

fn finish(target: ParaMatrix, pairs: Pairs, bits: u32) -> Result<CommutatorExpression> {
    let e = CommutatorExpression { target, pairs };
    if !e.verify(bits)? {
        return Err(Error::Soundness("commutator expression does not reproduce its target".into()));
    }
    Ok(e)
}

/// `α(X)` for `X ∈ L′` as a verified product of commutators.
pub fn express_l_prime(shape: ParaShape, x: &Mat2, bits: u32) -> Result<CommutatorExpression> {
    let b = Builder::new(shape, bits)?;
    let target = embed_alpha(shape, x)?;
    finish(target, b.l_prime(x)?, bits)
}

/// `β(Y)` for `Y ∈ U′` as a verified product of commutators.
pub fn express_u_prime(shape: ParaShape, y: &Mat2, bits: u32) -> Result<CommutatorExpression> {
    let b = Builder::new(shape, bits)?;
    let target = embed_beta(shape, y, bits)?;
    finish(target, b.u_prime(y)?, bits)
}

/// `β^opp(Z)` as the `h`-conjugate of the expression for `β(−Z)`.
pub fn express_u_opp(shape: ParaShape, z: &Mat2, bits: u32) -> Result<CommutatorExpression> {
    let b = Builder::new(shape, bits)?;
    let target = embed_beta(shape, &z.neg(), bits)?.h_conj();
    finish(target, conj_h(b.u_prime(&z.neg())?), bits)
}

/// An arbitrary member of `Γ`: reduce it to a word, then concatenate the
/// expressions of its letters.
pub fn express_element(gamma: &ParaMatrix, bits: u32) -> Result<CommutatorExpression> {
    let shape = gamma.shape;
    let b = Builder::new(shape, bits)?;
    let word = reduce_to_identity(gamma, bits)?.word;
    let mut pairs = Vec::new();
    for letter in &word {
        pairs.extend(match letter {
            Letter::Alpha(x) => b.l_prime(x)?,
            Letter::Beta(y) => b.u_prime(y)?,
            Letter::BetaOpp(z) => conj_h(b.u_prime(&z.neg())?),
        });
    }
    finish(gamma.clone(), pairs, bits)
}

/// The sampled generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// `α(diag(X11, I))`.
    LBlockOne,
    /// `α(diag(I, X22))` with `X22 ≡ I mod 4`.
    LBlockTwoLevelFour,
    /// `α(diag(I, X22))` with `X22 ≡ I mod 2`.
    LBlockTwo,
    /// `α((I 0; C I))` and `α((I B; 0 I))`.
    LTriangular,
    /// General `α(X)`, `X ∈ L′`.
    LGeneral,
    /// `β(diag(Y11, 0))`.
    UBlockOne,
    /// `β(diag(0, Y22))`.
    UBlockTwo,
    /// `β(Y)` with `Y` off-diagonal only.
    UOffDiagonal,
    /// General `β(Y)`, `Y ∈ U′`.
    UGeneral,
    /// General `β^opp(Z)`.
    UOppGeneral,
    /// Random `Γ`-words, via the reduction to letters.
    GammaWord,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 11] = [
        GeneratorFamily::LBlockOne,
        GeneratorFamily::LBlockTwoLevelFour,
        GeneratorFamily::LBlockTwo,
        GeneratorFamily::LTriangular,
        GeneratorFamily::LGeneral,
        GeneratorFamily::UBlockOne,
        GeneratorFamily::UBlockTwo,
        GeneratorFamily::UOffDiagonal,
        GeneratorFamily::UGeneral,
        GeneratorFamily::UOppGeneral,
        GeneratorFamily::GammaWord,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorFamily::LBlockOne => "commutators.l_block_one",
            GeneratorFamily::LBlockTwoLevelFour => "commutators.l_block_two_level_four",
            GeneratorFamily::LBlockTwo => "commutators.l_block_two",
            GeneratorFamily::LTriangular => "commutators.l_triangular",
            GeneratorFamily::LGeneral => "commutators.l_general",
            GeneratorFamily::UBlockOne => "commutators.u_block_one",
            GeneratorFamily::UBlockTwo => "commutators.u_block_two",
            GeneratorFamily::UOffDiagonal => "commutators.u_off_diagonal",
            GeneratorFamily::UGeneral => "commutators.u_general",
            GeneratorFamily::UOppGeneral => "commutators.u_opp_general",
            GeneratorFamily::GammaWord => "commutators.gamma_word",
        }
    }

    fn sample(&self, shape: ParaShape, bits: u32, rng: &mut rand_chacha::ChaCha8Rng) -> Result<CommutatorExpression> {
        let (n, k) = (shape.n, shape.k);
        let keep = |m: Mat2, bl: usize, bm: usize| -> Mat2 {
            let z11 = Mat2::zeros(n, n);
            let z22 = Mat2::zeros(k, k);
            let b11 = if bl == 1 && bm == 1 { shape.sub_block(&m, 1, 1) } else { z11 };
            let b22 = if bl == 2 && bm == 2 { shape.sub_block(&m, 2, 2) } else { z22 };
            shape.from_sub_blocks(&b11, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &b22)
        };
        let x = random_l_prime(shape, bits, rng);
        let y = random_u_prime(shape, bits, rng);
        let id = Mat2::identity(shape.g());
        match self {
            GeneratorFamily::LBlockOne => {
                let x11 = shape.sub_block(&x, 1, 1);
                express_l_prime(shape, &shape.from_sub_blocks(&x11, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &Mat2::identity(k)), bits)
            }
            GeneratorFamily::LBlockTwoLevelFour | GeneratorFamily::LBlockTwo => {
                let scale = if *self == GeneratorFamily::LBlockTwo { 2 } else { 4 };
                let x22 = Mat2::identity(k).add(&Mat2::random(k, k, bits, rng).scale(scale));
                let m = reduce_entries(&shape.from_sub_blocks(&Mat2::identity(n), &Mat2::zeros(n, k), &Mat2::zeros(k, n), &x22), bits);
                express_l_prime(shape, &m, bits)
            }
            GeneratorFamily::LTriangular => {
                let lower = id.add(&shape.from_sub_blocks(&Mat2::zeros(n, n), &Mat2::zeros(n, k), &shape.sub_block(&x, 2, 1), &Mat2::zeros(k, k)));
                let upper = id.add(&shape.from_sub_blocks(&Mat2::zeros(n, n), &shape.sub_block(&x, 1, 2), &Mat2::zeros(k, n), &Mat2::zeros(k, k)));
                let e1 = express_l_prime(shape, &lower, bits)?;
                let e2 = express_l_prime(shape, &upper, bits)?;
                let mut pairs = e1.pairs;
                pairs.extend(e2.pairs);
                finish(e1.target.mul(&e2.target), pairs, bits)
            }
            GeneratorFamily::LGeneral => express_l_prime(shape, &x, bits),
            GeneratorFamily::UBlockOne => express_u_prime(shape, &keep(y, 1, 1), bits),
            GeneratorFamily::UBlockTwo => express_u_prime(shape, &keep(y, 2, 2), bits),
            GeneratorFamily::UOffDiagonal => {
                let off = y.sub(&keep(y.clone(), 1, 1)).sub(&keep(y.clone(), 2, 2));
                express_u_prime(shape, &off, bits)
            }
            GeneratorFamily::UGeneral => express_u_prime(shape, &y, bits),
            GeneratorFamily::UOppGeneral => express_u_opp(shape, &y, bits),
            GeneratorFamily::GammaWord => {
                let w = random_gamma_word(shape, bits, 20, rng);
                express_element(&super::para::word_product(shape, &w)?, bits)
            }
        }
    }
}

/// For each generator family, `samples` random elements are written as
/// verified commutator products; the detail records the largest number of
/// commutators used. The identity is checked to need none.
pub fn express_generators_as_commutators(shape: ParaShape, bits: u32, samples: usize, seed: u64) -> Result<Vec<ShadowCheck>> {
    Builder::new(shape, bits)?;
    let mut out = Vec::new();
    let id = express_l_prime(shape, &Mat2::identity(shape.g()), bits)?;
    out.push(ShadowCheck::exact(
        "commutators.identity",
        id.is_empty(),
        "the identity generator is the empty product".into(),
    ));
    for (tag, fam) in GeneratorFamily::ALL.iter().enumerate() {
        let max_len = std::sync::atomic::AtomicUsize::new(0);
        let mut check = run_trials(fam.name(), "", samples, seed, 100 + tag as u64, |rng| {
            match fam.sample(shape, bits, rng) {
                Ok(e) => {
                    max_len.fetch_max(e.len(), std::sync::atomic::Ordering::Relaxed);
                    Ok(None)
                }
                Err(Error::Soundness(msg)) => Ok(Some(msg)),
                Err(e) => Err(e),
            }
        })?;
        check.detail = format!(
            "verified commutator products modulo 2^{bits}; at most {} commutators per element",
            max_len.into_inner()
        );
        out.push(check);
    }
    Ok(out)
}

/// `|Sp_{2n}(F_2)^der|` and `|Sp_{2n}(F_2)|`, recomputed by Schreier–Sims.
pub fn sp_f2_derived_order(n: usize, seed: u64) -> Result<(u128, u128)> {
    let d = TypeD::new(&vec![2; n])?;
    let grp = SpGroup::full(&d, seed)?;
    Ok((grp.derived_subgroup()?.order(), grp.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torus_elements() {
        let s = ParaShape::new(3, 2).unwrap();
        let b = Builder::new(s, 4).unwrap();
        for i in 0..5 {
            let mut x = Mat2::identity(5);
            x.set(i, i, 3);
            finish(embed_alpha(s, &x).unwrap(), b.torus(i, 3).unwrap(), 4).unwrap();
        }
    }

    #[test]
    fn general_families() {
        let s = ParaShape::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for fam in GeneratorFamily::ALL {
            fam.sample(s, 4, &mut rng).unwrap();
        }
    }

    #[test]
    fn small_shapes_unsupported() {
        let s = ParaShape::new(2, 2).unwrap();
        assert!(matches!(express_generators_as_commutators(s, 4, 1, 0), Err(Error::Unsupported(_))));
    }
}
