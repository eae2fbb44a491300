use rand::Rng;

use crate::error::{Error, Result};
use crate::spgroup::SpMatrix;
use crate::symmod::TypeD;

use super::mat::{mask, Mat2};

/// The type `D = (1^n, 2^k)` of length `g = n + k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParaShape {
    pub n: usize,
    pub k: usize,
}

impl ParaShape {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n + k == 0 {
            return Err(Error::Input("paramodular shape needs n + k >= 1".into()));
        }
        Ok(ParaShape { n, k })
    }

    pub fn g(&self) -> usize {
        self.n + self.k
    }

    /// `d_i` for `0 <= i < g`.
    pub fn d(&self, i: usize) -> u64 {
        if i < self.n {
            1
        } else {
            2
        }
    }

    /// `J_D = ((0, D), (-D, 0))`.
    pub fn j_d(&self) -> Mat2 {
        let g = self.g();
        let mut j = Mat2::zeros(2 * g, 2 * g);
        for i in 0..g {
            j.set(i, g + i, self.d(i));
            j.set(g + i, i, self.d(i).wrapping_neg());
        }
        j
    }

    /// The type `(2,...,2)` of length `k`, target of the reduction map.
    pub fn reduction_type(&self) -> Result<TypeD> {
        if self.k == 0 {
            return Err(Error::Unsupported("the reduction target is trivial when k = 0".into()));
        }
        TypeD::new(&vec![2; self.k])
    }

    /// `D⁻¹ M D`, entry `(i,j)` scaled by `d_j / d_i`.
    pub fn dinv_m_d(&self, m: &Mat2) -> Result<Mat2> {
        self.rescale(m, |di, dj| (dj, di))
    }

    /// `D M D⁻¹`, entry `(i,j)` scaled by `d_i / d_j`.
    pub fn d_m_dinv(&self, m: &Mat2) -> Result<Mat2> {
        self.rescale(m, |di, dj| (di, dj))
    }

    fn rescale<F: Fn(u64, u64) -> (u64, u64)>(&self, m: &Mat2, ratio: F) -> Result<Mat2> {
        let g = self.g();
        let mut doubled = Mat2::zeros(g, g).with_precision(m.precision());
        let mut halves = Mat2::zeros(g, g);
        let mut any_half = false;
        for i in 0..g {
            for j in 0..g {
                let (num, den) = ratio(self.d(i), self.d(j));
                let v = m.get(i, j);
                if num == den {
                    doubled.set(i, j, v);
                } else if num == 2 {
                    doubled.set(i, j, v.wrapping_mul(2));
                } else {
                    halves.set(i, j, v);
                    any_half = true;
                }
            }
        }
        if !any_half {
            return Ok(doubled);
        }
        let halves = halves.with_precision(m.precision()).half().map_err(|_| {
            Error::Soundness("D-conjugate is not integral: an entry to be halved is odd".into())
        })?;
        Ok(doubled.with_precision(halves.precision()).add(&halves))
    }

    /// Which quadrant sub-block `(i, j)` of a `g x g` block falls in:
    /// `(1|2, 1|2)` by the `n | k` split.
    pub fn sub_block(&self, m: &Mat2, a: usize, b: usize) -> Mat2 {
        let (r0, r) = if a == 1 { (0, self.n) } else { (self.n, self.k) };
        let (c0, c) = if b == 1 { (0, self.n) } else { (self.n, self.k) };
        m.block(r0, c0, r, c)
    }

    /// Assemble a `g x g` matrix from its four sub-blocks.
    pub fn from_sub_blocks(&self, b11: &Mat2, b12: &Mat2, b21: &Mat2, b22: &Mat2) -> Mat2 {
        let mut m = Mat2::zeros(self.g(), self.g());
        m.set_block(0, 0, b11);
        m.set_block(0, self.n, b12);
        m.set_block(self.n, 0, b21);
        m.set_block(self.n, self.n, b22);
        m
    }
}

/// A `2g x 2g` matrix `((X, Y), (Z, W))` for the paramodular group of type
/// `(1^n, 2^k)` over `Z/2^64` (with tracked precision).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParaMatrix {
    pub shape: ParaShape,
    pub m: Mat2,
}

impl ParaMatrix {
    pub fn new(shape: ParaShape, m: Mat2) -> Result<Self> {
        if m.rows() != 2 * shape.g() || m.cols() != 2 * shape.g() {
            return Err(Error::Input("matrix size does not match 2g".into()));
        }
        Ok(ParaMatrix { shape, m })
    }

    pub fn identity(shape: ParaShape) -> Self {
        ParaMatrix { shape, m: Mat2::identity(2 * shape.g()) }
    }

    pub fn from_blocks(shape: ParaShape, x: &Mat2, y: &Mat2, z: &Mat2, w: &Mat2) -> Self {
        let g = shape.g();
        let mut m = Mat2::zeros(2 * g, 2 * g);
        m.set_block(0, 0, x);
        m.set_block(0, g, y);
        m.set_block(g, 0, z);
        m.set_block(g, g, w);
        ParaMatrix { shape, m }
    }

    fn quadrant(&self, r: usize, c: usize) -> Mat2 {
        let g = self.shape.g();
        self.m.block(r * g, c * g, g, g)
    }

    pub fn x(&self) -> Mat2 {
        self.quadrant(0, 0)
    }

    pub fn y(&self) -> Mat2 {
        self.quadrant(0, 1)
    }

    pub fn z(&self) -> Mat2 {
        self.quadrant(1, 0)
    }

    pub fn w(&self) -> Mat2 {
        self.quadrant(1, 1)
    }

    pub fn mul(&self, o: &ParaMatrix) -> ParaMatrix {
        ParaMatrix { shape: self.shape, m: self.m.mul(&o.m) }
    }

    pub fn inverse(&self) -> Result<ParaMatrix> {
        Ok(ParaMatrix { shape: self.shape, m: self.m.inverse()? })
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &ParaMatrix, b: &ParaMatrix) -> Result<ParaMatrix> {
        Ok(a.mul(b).mul(&a.inverse()?).mul(&b.inverse()?))
    }

    pub fn eq_mod(&self, o: &ParaMatrix, bits: u32) -> Result<bool> {
        self.m.eq_mod(&o.m, bits)
    }

    pub fn is_identity_mod(&self, bits: u32) -> Result<bool> {
        self.m.is_identity_mod(bits)
    }

    /// `γᵗ J_D γ = J_D` modulo `2^bits`.
    pub fn preserves_form(&self, bits: u32) -> Result<bool> {
        let j = self.shape.j_d();
        self.m.transpose().mul(&j).mul(&self.m).eq_mod(&j, bits)
    }

    /// The block description: `XᵗDZ` and `YᵗDW` symmetric and
    /// `XᵗDW − ZᵗDY = D`, modulo `2^bits`.
    pub fn block_conditions(&self, bits: u32) -> Result<bool> {
        let g = self.shape.g();
        let d = Mat2::from_fn(g, g, |i, j| if i == j { self.shape.d(i) } else { 0 });
        let (x, y, z, w) = (self.x(), self.y(), self.z(), self.w());
        let xdz = x.transpose().mul(&d).mul(&z);
        let ydw = y.transpose().mul(&d).mul(&w);
        let cross = x.transpose().mul(&d).mul(&w).sub(&z.transpose().mul(&d).mul(&y));
        Ok(xdz.is_symmetric_mod(bits)? && ydw.is_symmetric_mod(bits)? && cross.eq_mod(&d, bits)?)
    }

    /// The `12` sub-blocks of `X, Y, Z, W` are all even.
    pub fn off_blocks_even(&self) -> bool {
        [self.x(), self.y(), self.z(), self.w()].iter().all(|q| self.shape.sub_block(q, 1, 2).divisible_by_pow2(1))
    }

    /// Membership in the paramodular group modulo `2^bits`.
    pub fn is_member(&self, bits: u32) -> Result<bool> {
        Ok(self.preserves_form(bits)? && self.off_blocks_even() && self.block_conditions(bits)?)
    }

    /// Membership in `Γ = ker(red_D)` modulo `2^bits`.
    pub fn is_in_gamma(&self, bits: u32) -> Result<bool> {
        if !self.is_member(bits)? {
            return Ok(false);
        }
        if self.shape.k == 0 {
            return Ok(true);
        }
        let r = self.reduction_block();
        r.eq_mod(&Mat2::identity(2 * self.shape.k), 1)
    }

    /// `((X22, Y22), (Z22, W22))` as a `2k x 2k` matrix.
    pub fn reduction_block(&self) -> Mat2 {
        let s = self.shape;
        let mut r = Mat2::zeros(2 * s.k, 2 * s.k);
        r.set_block(0, 0, &s.sub_block(&self.x(), 2, 2));
        r.set_block(0, s.k, &s.sub_block(&self.y(), 2, 2));
        r.set_block(s.k, 0, &s.sub_block(&self.z(), 2, 2));
        r.set_block(s.k, s.k, &s.sub_block(&self.w(), 2, 2));
        r
    }

    /// `red_D`: the induced symplectic matrix on `M_D = Λ^∨/Λ`, in the
    /// standard basis of type `(2,...,2)`.
    pub fn red_d(&self) -> Result<SpMatrix> {
        let d = self.shape.reduction_type()?;
        let r = self.reduction_block();
        SpMatrix::new(&d, r.reduced(1))
    }

    /// `γ* = J_D⁻¹ γᵗ J_D`, in block form
    /// `((D⁻¹WᵗD, −D⁻¹YᵗD), (−D⁻¹ZᵗD, D⁻¹XᵗD))`.
    pub fn star(&self) -> Result<ParaMatrix> {
        let s = &self.shape;
        let x = s.dinv_m_d(&self.w().transpose())?;
        let y = s.dinv_m_d(&self.y().transpose())?.neg();
        let z = s.dinv_m_d(&self.z().transpose())?.neg();
        let w = s.dinv_m_d(&self.x().transpose())?;
        Ok(ParaMatrix::from_blocks(self.shape, &x, &y, &z, &w))
    }

    /// `h γ h⁻¹ = ((W, −Z), (−Y, X))` for `h = ((0, I), (−I, 0))`.
    pub fn h_conj(&self) -> ParaMatrix {
        ParaMatrix::from_blocks(self.shape, &self.w(), &self.z().neg(), &self.y().neg(), &self.x())
    }

    /// The element `h` itself.
    pub fn h(shape: ParaShape) -> ParaMatrix {
        let g = shape.g();
        let i = Mat2::identity(g);
        ParaMatrix::from_blocks(shape, &Mat2::zeros(g, g), &i, &i.neg(), &Mat2::zeros(g, g))
    }

    pub fn display_mod(&self, bits: u32) -> String {
        self.m.display_mod(bits)
    }
}

/// Check the paramodular condition on `X` (square, invertible, `X12` even).
fn check_block_x(shape: ParaShape, x: &Mat2) -> Result<()> {
    if x.rows() != shape.g() || x.cols() != shape.g() {
        return Err(Error::Input("X must be g x g".into()));
    }
    if !shape.sub_block(x, 1, 2).divisible_by_pow2(1) {
        return Err(Error::Input("X12 must be even".into()));
    }
    Ok(())
}

/// Whether `X` satisfies `X12 ≡ 0` and `X22 ≡ I` modulo 2 (and is invertible).
pub fn is_l_prime(shape: ParaShape, x: &Mat2) -> bool {
    check_block_x(shape, x).is_ok()
        && shape.sub_block(x, 2, 2).is_identity_mod(1).unwrap_or(false)
        && x.inverse().is_ok()
}

/// Whether `Y` is in `U′`: `Y11, Y22` symmetric, `Y12 = 2Y21ᵗ`, `Y22` even
/// (modulo `2^bits`).
pub fn is_u_prime(shape: ParaShape, y: &Mat2, bits: u32) -> Result<bool> {
    Ok(is_u_para(shape, y, bits)? && shape.sub_block(y, 2, 2).divisible_by_pow2(1))
}

/// Whether `((I, Y), (0, I))` is paramodular: `DY` symmetric.
pub fn is_u_para(shape: ParaShape, y: &Mat2, bits: u32) -> Result<bool> {
    if y.rows() != shape.g() || y.cols() != shape.g() {
        return Ok(false);
    }
    let y12 = shape.sub_block(y, 1, 2);
    let y21 = shape.sub_block(y, 2, 1);
    Ok(shape.sub_block(y, 1, 1).is_symmetric_mod(bits)?
        && shape.sub_block(y, 2, 2).is_symmetric_mod(bits)?
        && y12.eq_mod(&y21.transpose().scale(2), bits)?)
}

/// `X ↦ ((X, 0), (0, D⁻¹X⁻ᵗD))` for any paramodular `X`.
pub fn alpha(shape: ParaShape, x: &Mat2) -> Result<ParaMatrix> {
    check_block_x(shape, x)?;
    let w = shape.dinv_m_d(&x.inverse()?.transpose())?;
    let g = shape.g();
    Ok(ParaMatrix::from_blocks(shape, x, &Mat2::zeros(g, g), &Mat2::zeros(g, g), &w))
}

/// `α` restricted to `L′`, landing in `L ⊂ Γ`.
pub fn embed_alpha(shape: ParaShape, x: &Mat2) -> Result<ParaMatrix> {
    if !is_l_prime(shape, x) {
        return Err(Error::Input("X is not in L′".into()));
    }
    alpha(shape, x)
}

/// `Y ↦ ((I, Y), (0, I))` for paramodular `Y`.
pub fn beta(shape: ParaShape, y: &Mat2, bits: u32) -> Result<ParaMatrix> {
    if !is_u_para(shape, y, bits)? {
        return Err(Error::Input("DY is not symmetric".into()));
    }
    let g = shape.g();
    let i = Mat2::identity(g);
    Ok(ParaMatrix::from_blocks(shape, &i, y, &Mat2::zeros(g, g), &i))
}

/// `β` restricted to `U′`, landing in `U ⊂ Γ`.
pub fn embed_beta(shape: ParaShape, y: &Mat2, bits: u32) -> Result<ParaMatrix> {
    if !is_u_prime(shape, y, bits)? {
        return Err(Error::Input("Y is not in U′".into()));
    }
    beta(shape, y, bits)
}

/// `Z ↦ ((I, 0), (Z, I))` for `Z ∈ U′`, landing in `U^opp`.
pub fn embed_beta_opp(shape: ParaShape, z: &Mat2, bits: u32) -> Result<ParaMatrix> {
    Ok(embed_beta(shape, &z.neg(), bits)?.h_conj())
}

/// A letter of a word in the generators `L`, `U`, `U^opp` of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    Alpha(Mat2),
    Beta(Mat2),
    BetaOpp(Mat2),
}

impl Letter {
    pub fn matrix(&self, shape: ParaShape) -> Result<ParaMatrix> {
        let bits = 1;
        match self {
            Letter::Alpha(x) => alpha(shape, x),
            Letter::Beta(y) => beta(shape, y, bits),
            Letter::BetaOpp(z) => Ok(beta(shape, &z.neg(), bits)?.h_conj()),
        }
    }

    pub fn inverse(&self) -> Result<Letter> {
        Ok(match self {
            Letter::Alpha(x) => Letter::Alpha(x.inverse()?),
            Letter::Beta(y) => Letter::Beta(y.neg()),
            Letter::BetaOpp(z) => Letter::BetaOpp(z.neg()),
        })
    }

    /// Whether the letter lies in `L ∪ U ∪ U^opp` modulo `2^bits`.
    pub fn is_gamma_letter(&self, shape: ParaShape, bits: u32) -> Result<bool> {
        match self {
            Letter::Alpha(x) => Ok(is_l_prime(shape, x)),
            Letter::Beta(y) | Letter::BetaOpp(y) => is_u_prime(shape, y, bits),
        }
    }

    /// The same letter on the type with one more leading `1`, acting
    /// trivially on the new `e_1, f_1`.
    pub fn shift(&self) -> Letter {
        let grow = |m: &Mat2, corner: u64| {
            let mut out = Mat2::zeros(m.rows() + 1, m.cols() + 1).with_precision(m.precision());
            out.set(0, 0, corner);
            out.set_block(1, 1, m);
            out
        };
        match self {
            Letter::Alpha(x) => Letter::Alpha(grow(x, 1)),
            Letter::Beta(y) => Letter::Beta(grow(y, 0)),
            Letter::BetaOpp(z) => Letter::BetaOpp(grow(z, 0)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Letter::Alpha(_) => "L",
            Letter::Beta(_) => "U",
            Letter::BetaOpp(_) => "Uopp",
        }
    }
}

/// Product of the letters of a word, left to right.
pub fn word_product(shape: ParaShape, word: &[Letter]) -> Result<ParaMatrix> {
    word.iter().try_fold(ParaMatrix::identity(shape), |acc, l| Ok(acc.mul(&l.matrix(shape)?)))
}

/// A uniform invertible `n x n` matrix modulo `2^bits`, built as
/// `P · L · U` (permutation, unit lower triangular, upper triangular with
/// odd diagonal).
pub fn random_gl<R: Rng + ?Sized>(n: usize, bits: u32, rng: &mut R) -> Mat2 {
    let m = mask(bits);
    let lower = Mat2::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => rng.random::<u64>() & m,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Less => 0,
    });
    let upper = Mat2::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => rng.random::<u64>() & m,
        std::cmp::Ordering::Equal => (rng.random::<u64>() & m) | 1,
        std::cmp::Ordering::Greater => 0,
    });
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let p = Mat2::from_fn(n, n, |i, j| u64::from(perm[i] == j));
    p.mul(&lower).mul(&upper)
}

/// A random element of `L′` modulo `2^bits`, sampled block by block.
pub fn random_l_prime<R: Rng + ?Sized>(shape: ParaShape, bits: u32, rng: &mut R) -> Mat2 {
    let (n, k) = (shape.n, shape.k);
    let x11 = random_gl(n, bits, rng);
    let x12 = Mat2::random(n, k, bits, rng).scale(2);
    let x21 = Mat2::random(k, n, bits, rng);
    let x22 = Mat2::identity(k).add(&Mat2::random(k, k, bits, rng).scale(2));
    reduce_entries(&shape.from_sub_blocks(&x11, &x12, &x21, &x22), bits)
}

/// A random element of `U′`: the free parameters are drawn modulo
/// `2^bits` and the relation `Y12 = 2Y21ᵗ` holds exactly.
pub fn random_u_prime<R: Rng + ?Sized>(shape: ParaShape, bits: u32, rng: &mut R) -> Mat2 {
    let (n, k) = (shape.n, shape.k);
    let y11 = Mat2::random_symmetric(n, bits, rng);
    let y21 = Mat2::random(k, n, bits, rng);
    let y12 = y21.transpose().scale(2);
    let y22 = Mat2::random_symmetric(k, bits, rng).scale(2);
    shape.from_sub_blocks(&y11, &y12, &y21, &y22)
}

/// Representatives in `[0, 2^bits)`.
pub fn reduce_entries(m: &Mat2, bits: u32) -> Mat2 {
    let r = m.reduced(bits);
    Mat2::from_fn(m.rows(), m.cols(), |i, j| r[i * m.cols() + j]).with_precision(m.precision())
}

/// A random letter: `α(L′)`, `β(U′)` or `U^opp`, with equal probability.
pub fn random_letter<R: Rng + ?Sized>(shape: ParaShape, bits: u32, rng: &mut R) -> Letter {
    match rng.random_range(0..3) {
        0 => Letter::Alpha(random_l_prime(shape, bits, rng)),
        1 => Letter::Beta(random_u_prime(shape, bits, rng)),
        _ => Letter::BetaOpp(random_u_prime(shape, bits, rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_embeddings() {
        let s = ParaShape::new(2, 2).unwrap();
        assert!(embed_alpha(s, &Mat2::identity(4)).unwrap().is_identity_mod(63).unwrap());
        assert!(embed_beta(s, &Mat2::zeros(4, 4), 4).unwrap().is_identity_mod(64).unwrap());
        assert!(ParaMatrix::identity(s).star().unwrap().is_identity_mod(63).unwrap());
    }

    #[test]
    fn random_members() {
        let s = ParaShape::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = random_l_prime(s, 4, &mut rng);
            let a = embed_alpha(s, &x).unwrap();
            assert!(a.is_in_gamma(4).unwrap());
            let y = random_u_prime(s, 4, &mut rng);
            let b = embed_beta(s, &y, 4).unwrap();
            assert!(b.is_in_gamma(4).unwrap());
            let c = embed_beta_opp(s, &y, 4).unwrap();
            assert!(c.is_in_gamma(4).unwrap());
            assert!(ParaMatrix::h(s).mul(&b).mul(&ParaMatrix::h(s).inverse().unwrap()).eq_mod(&b.h_conj(), 4).unwrap());
        }
    }

    #[test]
    fn beta_is_additive() {
        let s = ParaShape::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (y1, y2) = (random_u_prime(s, 4, &mut rng), random_u_prime(s, 4, &mut rng));
        let lhs = embed_beta(s, &y1, 4).unwrap().mul(&embed_beta(s, &y2, 4).unwrap());
        assert!(lhs.eq_mod(&beta(s, &y1.add(&y2), 4).unwrap(), 4).unwrap());
    }

    #[test]
    fn non_members_rejected() {
        let s = ParaShape::new(1, 1).unwrap();
        let mut x = Mat2::identity(2);
        x.set(0, 1, 1);
        assert!(matches!(embed_alpha(s, &x), Err(Error::Input(_))));
        let mut y = Mat2::zeros(2, 2);
        y.set(1, 1, 1);
        assert!(embed_beta(s, &y, 4).is_err());
        assert!(beta(s, &y, 4).is_ok());
    }
}
