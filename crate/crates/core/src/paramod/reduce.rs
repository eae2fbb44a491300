//! Constructive generation of `Γ` by `L`, `U` and `U^opp`: a member is
//! written as an explicit word in the three kinds of letters.
//!
//! The induction peels off the first symplectic pair `(e_1, f_1)`. The first
//! column is moved to `e_1` by letters of the three kinds (making a `v₁`
//! entry odd with `β`, clearing `v₁` with `α(diag(A, I))`, clearing `w₁`
//! with `β^opp`, clearing `w₂` with the off-diagonal `β^opp`, and clearing
//! `v₂` with a lower-triangular `α`). The remaining matrix restricts to a
//! member of the smaller `Γ` of type `(1^{n-1}, 2^k)`, and the leftover is
//! block upper triangular, hence `α(X) β(X⁻¹Y)`. For `n = 0` the member is
//! split as `(I 0; ZX⁻¹ I)(X 0; 0 W′)(I X⁻¹Y; 0 I)`.

use rand::Rng;

use crate::error::{Error, Result};

use super::mat::{inv_odd, Mat2};
use super::para::{random_letter, word_product, Letter, ParaMatrix, ParaShape};

/// A word in `L ∪ U ∪ U^opp` with product equal to the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub shape: ParaShape,
    pub bits: u32,
    pub word: Vec<Letter>,
    /// One flag per induction level (outermost first): whether the first
    /// column already equaled `e_1` so no column moves were needed.
    pub first_column_was_e1: Vec<bool>,
}

impl Reduction {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Letter counts by kind `(L, U, U^opp)`.
    pub fn letter_counts(&self) -> (usize, usize, usize) {
        self.word.iter().fold((0, 0, 0), |(a, b, c), l| match l {
            Letter::Alpha(_) => (a + 1, b, c),
            Letter::Beta(_) => (a, b + 1, c),
            Letter::BetaOpp(_) => (a, b, c + 1),
        })
    }
}

/// A random product of `len` letters (a test input for the reduction).
pub fn random_gamma_word<R: Rng + ?Sized>(shape: ParaShape, bits: u32, len: usize, rng: &mut R) -> Vec<Letter> {
    (0..len).map(|_| random_letter(shape, bits, rng)).collect()
}

/// Write `gamma ∈ Γ` as a word in `L`, `U`, `U^opp` modulo `2^bits`.
///
/// `gamma` should satisfy the block relations in `Z/2^64` (a product of
/// letters does); the construction halves entries, so a matrix that is a
/// member only modulo `2^bits` can lose its top bit and fail verification.
///
/// Errors: `Input` if `gamma` is not in `Γ` modulo `2^bits`; `Soundness` if
/// a primitivity step fails or the final product does not reproduce `gamma`.
pub fn reduce_to_identity(gamma: &ParaMatrix, bits: u32) -> Result<Reduction> {
    if !gamma.is_in_gamma(bits)? {
        return Err(Error::Input("the matrix is not in Γ at this precision".into()));
    }
    let shape = gamma.shape;
    let mut flags = Vec::new();
    let raw = reduce_rec(gamma, bits, &mut flags)?;
    let mut word = Vec::with_capacity(raw.len());
    for letter in raw {
        if !is_trivial(&letter, shape, bits)? {
            word.push(letter);
        }
    }
    for l in &word {
        if !l.is_gamma_letter(shape, bits)? {
            return Err(Error::Soundness(format!("reduction produced a letter outside Γ ({})", l.kind())));
        }
    }
    if !word_product(shape, &word)?.eq_mod(gamma, bits)? {
        return Err(Error::Soundness("reduction word does not reproduce the input".into()));
    }
    Ok(Reduction { shape, bits, word, first_column_was_e1: flags })
}

/// Whether the letter's matrix is the identity modulo `2^bits` (for `α`
/// this is stronger than `X ≡ I`, since `D⁻¹X⁻ᵗD` halves entries).
fn is_trivial(l: &Letter, shape: ParaShape, bits: u32) -> Result<bool> {
    l.matrix(shape)?.is_identity_mod(bits)
}

fn reduce_rec(gamma: &ParaMatrix, bits: u32, flags: &mut Vec<bool>) -> Result<Vec<Letter>> {
    let shape = gamma.shape;
    let g = shape.g();
    if shape.n == 0 {
        let (x, y, z) = (gamma.x(), gamma.y(), gamma.z());
        let xi = x.inverse()?;
        return Ok(vec![Letter::BetaOpp(z.mul(&xi)), Letter::Alpha(x), Letter::Beta(xi.mul(&y))]);
    }

    let column = |m: &ParaMatrix| -> Vec<u64> { (0..2 * g).map(|i| m.m.get(i, 0)).collect() };
    let u = column(gamma);
    let already = (0..2 * g).all(|i| u[i].wrapping_sub(u64::from(i == 0)) & super::mat::mask(bits) == 0);
    flags.push(already);

    // Letters applied on the left, in order of application.
    let mut applied: Vec<Letter> = Vec::new();
    let mut current = gamma.clone();
    let mut apply = |l: Letter, cur: &mut ParaMatrix, applied: &mut Vec<Letter>| -> Result<()> {
        *cur = l.matrix(shape)?.mul(cur);
        applied.push(l);
        Ok(())
    };
    if !already {
        move_block_one_to_e1(&mut current, &mut applied, &mut apply, bits)?;
        let u = column(&current);
        // Clear w₂ with Z = (0 2Z21ᵗ; Z21 0), Z21 having first column −w₂.
        if (shape.n..g).any(|i| u[g + i] & super::mat::mask(bits) != 0) {
            let mut z = Mat2::zeros(g, g);
            for i in shape.n..g {
                let t = u[g + i].wrapping_neg();
                z.set(i, 0, t);
                z.set(0, i, t.wrapping_mul(2));
            }
            apply(Letter::BetaOpp(z), &mut current, &mut applied)?;
        }
        move_block_one_to_e1(&mut current, &mut applied, &mut apply, bits)?;
        let u = column(&current);
        // Clear v₂ with X21 having first column −v₂.
        if (shape.n..g).any(|i| u[i] & super::mat::mask(bits) != 0) {
            let mut x = Mat2::identity(g);
            for i in shape.n..g {
                x.set(i, 0, u[i].wrapping_neg());
            }
            apply(Letter::Alpha(x), &mut current, &mut applied)?;
        }
        let u = column(&current);
        if !(0..2 * g).all(|i| u[i].wrapping_sub(u64::from(i == 0)) & super::mat::mask(bits) == 0) {
            return Err(Error::Soundness("column moves did not reach e_1".into()));
        }
    }

    // Restrict to the span of e_2..e_g, f_2..f_g.
    let sub_word = if g == 1 {
        Vec::new()
    } else {
        let sub_shape = ParaShape::new(shape.n - 1, shape.k)?;
        let idx: Vec<usize> = (1..g).chain(g + 1..2 * g).collect();
        let sub = Mat2::from_fn(idx.len(), idx.len(), |i, j| current.m.get(idx[i], idx[j]))
            .with_precision(current.m.precision());
        let sub = ParaMatrix::new(sub_shape, sub)?;
        if !sub.is_in_gamma(bits)? {
            return Err(Error::Soundness("restriction to the complement is not in the smaller Γ".into()));
        }
        reduce_rec(&sub, bits, flags)?.iter().map(Letter::shift).collect()
    };
    let rest = word_product(shape, &sub_word)?.inverse()?.mul(&current);
    if !rest.z().is_zero_mod(bits)? {
        return Err(Error::Soundness("remainder after the induction step is not block upper triangular".into()));
    }
    let x = rest.x();
    let y = x.inverse()?.mul(&rest.y());

    let mut word: Vec<Letter> = applied.iter().map(Letter::inverse).collect::<Result<_>>()?;
    word.extend(sub_word);
    word.push(Letter::Alpha(x));
    word.push(Letter::Beta(y));
    Ok(word)
}

/// Move the `(v₁; w₁)` part of the first column to `(e_1; 0)`: make some
/// entry of `v₁` odd, clear `v₁` with `α(diag(A, I))`, then clear `w₁` with
/// a symmetric `β^opp`.
fn move_block_one_to_e1<F>(current: &mut ParaMatrix, applied: &mut Vec<Letter>, apply: &mut F, bits: u32) -> Result<()>
where
    F: FnMut(Letter, &mut ParaMatrix, &mut Vec<Letter>) -> Result<()>,
{
    let shape = current.shape;
    let (n, g) = (shape.n, shape.g());
    let col = |m: &ParaMatrix| -> Vec<u64> { (0..2 * g).map(|i| m.m.get(i, 0)).collect() };
    let u = col(current);
    if !(0..n).any(|i| u[i] & 1 == 1) {
        let Some(j) = (0..n).find(|&j| u[g + j] & 1 == 1) else {
            return Err(Error::Soundness("first column is not primitive in the e_1..e_n, f_1..f_n part".into()));
        };
        apply(Letter::Beta(Mat2::unit(g, g, j, j, 1)), current, applied)?;
    }
    let u = col(current);
    let j = (0..n).find(|&j| u[j] & 1 == 1).ok_or_else(|| Error::Soundness("no odd entry after the β step".into()))?;
    // A = E · S · P with P swapping 0 and j, S scaling the pivot to 1, E eliminating.
    let mut p = Mat2::identity(n);
    if j != 0 {
        p.set(0, 0, 0);
        p.set(j, j, 0);
        p.set(0, j, 1);
        p.set(j, 0, 1);
    }
    let v: Vec<u64> = (0..n).map(|i| u[if i == 0 { j } else if i == j { 0 } else { i }]).collect();
    let mut s = Mat2::identity(n);
    s.set(0, 0, inv_odd(v[0]));
    let mut e = Mat2::identity(n);
    for (i, &vi) in v.iter().enumerate().skip(1) {
        e.set(i, 0, vi.wrapping_neg());
    }
    let a = e.mul(&s).mul(&p);
    let mut x = Mat2::identity(g);
    x.set_block(0, 0, &a);
    if x != Mat2::identity(g) {
        apply(Letter::Alpha(x), current, applied)?;
    }
    let u = col(current);
    if (0..n).any(|i| u[g + i] & super::mat::mask(bits) != 0) {
        let mut z = Mat2::zeros(g, g);
        for i in 0..n {
            let t = u[g + i].wrapping_neg();
            z.set(i, 0, t);
            z.set(0, i, t);
        }
        apply(Letter::BetaOpp(z), current, applied)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_gives_empty_word() {
        let s = ParaShape::new(3, 2).unwrap();
        let r = reduce_to_identity(&ParaMatrix::identity(s), 4).unwrap();
        assert!(r.is_empty());
        assert!(r.first_column_was_e1[0]);
    }

    #[test]
    fn random_words_round_trip() {
        let s = ParaShape::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let w = random_gamma_word(s, 4, 20, &mut rng);
            let gamma = word_product(s, &w).unwrap();
            let r = reduce_to_identity(&gamma, 4).unwrap();
            assert!(word_product(s, &r.word).unwrap().eq_mod(&gamma, 4).unwrap());
        }
    }

    #[test]
    fn non_member_rejected() {
        let s = ParaShape::new(1, 1).unwrap();
        let mut m = Mat2::identity(4);
        m.set(0, 1, 1);
        let gamma = ParaMatrix::new(s, m).unwrap();
        assert!(matches!(reduce_to_identity(&gamma, 4), Err(Error::Input(_))));
    }
}
