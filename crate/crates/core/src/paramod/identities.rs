//! Re-evaluation of the displayed commutator identities, spanning claims,
//! the involutions, the level-two commutator congruences and the reduction
//! map on random admissible inputs.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::ringlinalg::{howell_span, span_contains};
use crate::spgroup::{classical_order, SpGroup, SpMatrix};

use super::mat::Mat2;
use super::para::{
    alpha, beta, embed_alpha, embed_beta, embed_beta_opp, random_gl, random_l_prime, random_letter, random_u_prime,
    reduce_entries, ParaMatrix, ParaShape,
};
use super::{run_trials, trial_rng, ShadowCheck};

/// `a b a⁻¹ b⁻¹` for plain matrices.
fn comm(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    Ok(a.mul(b).mul(&a.inverse()?).mul(&b.inverse()?))
}

fn mismatch(what: &str, inputs: &[(&str, &Mat2)], bits: u32) -> Option<String> {
    let mut s = format!("{what} fails for");
    for (name, m) in inputs {
        s.push_str(&format!(" {name} = {}", m.display_mod(bits)));
    }
    Some(s)
}

fn require_bits(bits: u32, at_least: u32, what: &str) -> Result<()> {
    if bits < at_least {
        return Err(Error::Input(format!("{what} needs a modulus of at least 2^{at_least}")));
    }
    Ok(())
}

/// The block-diagonal `X`-type commutator, the lower-upper commutator with
/// its mod-8 Schur complement, the `L′` reduction to `diag(I, S)`, the
/// general `[α(X), β(Y)]` identity with the explicit `W⁻¹`, and the
/// off-diagonal and lower-block specializations.
pub fn verify_commutator_identities(shape: ParaShape, bits: u32, trials: usize, seed: u64) -> Result<Vec<ShadowCheck>> {
    require_bits(bits, 3, "the mod-8 congruence")?;
    let (n, k) = (shape.n, shape.k);
    let mut out = Vec::new();

    out.push(run_trials(
        "commutator.block_diagonal_upper",
        "[(X 0; 0 I), (I Y; 0 I)] = (I XY−Y; 0 I) for X ∈ GL_n, Y ∈ 2Mat_{n,k}",
        trials,
        seed,
        1,
        |rng| {
            let x = random_gl(n, bits, rng);
            let y = Mat2::random(n, k, bits, rng).scale(2);
            let a = shape.from_sub_blocks(&x, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &Mat2::identity(k));
            let b = shape.from_sub_blocks(&Mat2::identity(n), &y, &Mat2::zeros(k, n), &Mat2::identity(k));
            let expect = shape.from_sub_blocks(
                &Mat2::identity(n),
                &x.mul(&y).sub(&y),
                &Mat2::zeros(k, n),
                &Mat2::identity(k),
            );
            Ok(if comm(&a, &b)?.eq_mod(&expect, bits)? { None } else { mismatch("block-diagonal identity", &[("X", &x), ("Y", &y)], bits) })
        },
    )?);

    out.push(run_trials(
        "commutator.lower_upper",
        "[(I 2X; 0 I), (I 0; Y I)] = (I+2XY+4XYXY, −4XYX; 2YXY, I−2YX), Schur complement ≡ I−2YX mod 8",
        trials,
        seed,
        2,
        |rng| {
            let x = Mat2::random(n, k, bits, rng);
            let y = Mat2::random(k, n, bits, rng);
            let a = shape.from_sub_blocks(&Mat2::identity(n), &x.scale(2), &Mat2::zeros(k, n), &Mat2::identity(k));
            let b = shape.from_sub_blocks(&Mat2::identity(n), &Mat2::zeros(n, k), &y, &Mat2::identity(k));
            let xy = x.mul(&y);
            let yx = y.mul(&x);
            let top_left = Mat2::identity(n).add(&xy.scale(2)).add(&xy.mul(&xy).scale(4));
            let top_right = xy.mul(&x).scale(4).neg();
            let bottom_left = yx.mul(&y).scale(2);
            let bottom_right = Mat2::identity(k).sub(&yx.scale(2));
            let expect = shape.from_sub_blocks(&top_left, &top_right, &bottom_left, &bottom_right);
            let c = comm(&a, &b)?;
            if !c.eq_mod(&expect, bits)? {
                return Ok(mismatch("lower-upper identity", &[("X", &x), ("Y", &y)], bits));
            }
            let c11 = shape.sub_block(&c, 1, 1);
            let schur = shape
                .sub_block(&c, 2, 2)
                .sub(&shape.sub_block(&c, 2, 1).mul(&c11.inverse()?).mul(&shape.sub_block(&c, 1, 2)));
            Ok(if schur.eq_mod(&bottom_right, 3)? { None } else { mismatch("Schur complement mod 8", &[("X", &x), ("Y", &y)], bits) })
        },
    )?);

    out.push(run_trials(
        "commutator.l_prime_reduction",
        "α((I 0; −X21 I)(X11⁻¹ 0; 0 I)) · X · (I −X11⁻¹X12; 0 I) = diag(I, S) with S ≡ I mod 2",
        trials,
        seed,
        3,
        |rng| {
            let x = random_l_prime(shape, bits, rng);
            let x11 = shape.sub_block(&x, 1, 1);
            let x11i = x11.inverse()?;
            let x12 = shape.sub_block(&x, 1, 2);
            let x21 = shape.sub_block(&x, 2, 1);
            let left = shape
                .from_sub_blocks(&Mat2::identity(n), &Mat2::zeros(n, k), &x21.neg(), &Mat2::identity(k))
                .mul(&shape.from_sub_blocks(&x11i, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &Mat2::identity(k)));
            let right =
                shape.from_sub_blocks(&Mat2::identity(n), &x11i.mul(&x12).neg(), &Mat2::zeros(k, n), &Mat2::identity(k));
            let r = left.mul(&x).mul(&right);
            let s = shape.sub_block(&r, 2, 2);
            let diag = shape.from_sub_blocks(&Mat2::identity(n), &Mat2::zeros(n, k), &Mat2::zeros(k, n), &s);
            let ok = r.eq_mod(&diag, bits)? && s.is_identity_mod(1)? && embed_alpha(shape, &left).is_ok();
            Ok(if ok { None } else { mismatch("L′ reduction", &[("X", &x)], bits) })
        },
    )?);

    out.push(run_trials(
        "commutator.alpha_beta",
        "[α(X), β(Y)] = β(XYW⁻¹ − Y) with W⁻¹ = D⁻¹XᵗD = (X11ᵗ 2X21ᵗ; ½X12ᵗ X22ᵗ), and XYW⁻¹ − Y ∈ U′",
        trials,
        seed,
        4,
        |rng| {
            let x = random_l_prime(shape, bits, rng);
            let y = random_u_prime(shape, bits, rng);
            let a = embed_alpha(shape, &x)?;
            let b = embed_beta(shape, &y, bits)?;
            let w_inv = a.w().inverse()?;
            let explicit = shape.from_sub_blocks(
                &shape.sub_block(&x, 1, 1).transpose(),
                &shape.sub_block(&x, 2, 1).transpose().scale(2),
                &shape.sub_block(&x, 1, 2).transpose().half()?,
                &shape.sub_block(&x, 2, 2).transpose(),
            );
            let formula_ok = w_inv.eq_mod(&shape.dinv_m_d(&x.transpose())?, bits)? && w_inv.eq_mod(&explicit, bits)?;
            let target = x.mul(&y).mul(&w_inv).sub(&y);
            let c = ParaMatrix::commutator(&a, &b)?;
            let ok = formula_ok && c.eq_mod(&beta(shape, &target, bits)?, bits)? && embed_beta(shape, &target, bits).is_ok();
            Ok(if ok { None } else { mismatch("[α(X), β(Y)] identity", &[("X", &x), ("Y", &y)], bits) })
        },
    )?);

    out.push(run_trials(
        "commutator.off_diagonal",
        "X = diag(X11, I), Y off-diagonal: XYW⁻¹ − Y = (0, X11Y12 − Y12; Y21X11ᵗ − Y21, 0)",
        trials,
        seed,
        5,
        |rng| {
            let x11 = random_gl(n, bits, rng);
            let x = shape.from_sub_blocks(&x11, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &Mat2::identity(k));
            let y21 = Mat2::random(k, n, bits, rng);
            let y12 = y21.transpose().scale(2);
            let y = shape.from_sub_blocks(&Mat2::zeros(n, n), &y12, &y21, &Mat2::zeros(k, k));
            let c = ParaMatrix::commutator(&embed_alpha(shape, &x)?, &embed_beta(shape, &y, bits)?)?;
            let expect = shape.from_sub_blocks(
                &Mat2::zeros(n, n),
                &x11.mul(&y12).sub(&y12),
                &y21.mul(&x11.transpose()).sub(&y21),
                &Mat2::zeros(k, k),
            );
            Ok(if c.eq_mod(&beta(shape, &expect, bits)?, bits)? { None } else { mismatch("off-diagonal identity", &[("X11", &x11), ("Y21", &y21)], bits) })
        },
    )?);

    out.push(run_trials(
        "commutator.lower_block",
        "X = (I 0; X21 I), Y = diag(Y11, 0): XYW⁻¹ − Y = (0, 2Y11X21ᵗ; X21Y11, 2X21Y11X21ᵗ)",
        trials,
        seed,
        6,
        |rng| {
            let x21 = Mat2::random(k, n, bits, rng);
            let x = shape.from_sub_blocks(&Mat2::identity(n), &Mat2::zeros(n, k), &x21, &Mat2::identity(k));
            let y11 = Mat2::random_symmetric(n, bits, rng);
            let y = shape.from_sub_blocks(&y11, &Mat2::zeros(n, k), &Mat2::zeros(k, n), &Mat2::zeros(k, k));
            let c = ParaMatrix::commutator(&embed_alpha(shape, &x)?, &embed_beta(shape, &y, bits)?)?;
            let expect = shape.from_sub_blocks(
                &Mat2::zeros(n, n),
                &y11.mul(&x21.transpose()).scale(2),
                &x21.mul(&y11),
                &x21.mul(&y11).mul(&x21.transpose()).scale(2),
            );
            Ok(if c.eq_mod(&beta(shape, &expect, bits)?, bits)? { None } else { mismatch("lower-block identity", &[("X21", &x21), ("Y11", &y11)], bits) })
        },
    )?);

    Ok(out)
}

/// A random product of `len` letters of `Γ`.
fn random_gamma<R: Rng + ?Sized>(shape: ParaShape, bits: u32, len: usize, rng: &mut R) -> Result<ParaMatrix> {
    let mut acc = ParaMatrix::identity(shape);
    for _ in 0..len {
        acc = acc.mul(&random_letter(shape, bits, rng).matrix(shape)?);
    }
    Ok(acc)
}

/// A random paramodular letter outside `Γ` in general: `α(X)` with `X12`
/// even and `X22` arbitrary invertible, or `β`, `β^opp` with `Y22` any
/// symmetric matrix.
fn random_para_letter<R: Rng + ?Sized>(shape: ParaShape, bits: u32, rng: &mut R) -> Result<ParaMatrix> {
    let (n, k) = (shape.n, shape.k);
    let sym = |rng: &mut R| {
        let y11 = Mat2::random_symmetric(n, bits, rng);
        let y21 = Mat2::random(k, n, bits, rng);
        let y22 = Mat2::random_symmetric(k, bits, rng);
        shape.from_sub_blocks(&y11, &y21.transpose().scale(2), &y21, &y22)
    };
    match rng.random_range(0..3) {
        0 => {
            let x = shape.from_sub_blocks(
                &random_gl(n, bits, rng),
                &Mat2::random(n, k, bits, rng).scale(2),
                &Mat2::random(k, n, bits, rng),
                &random_gl(k, bits, rng),
            );
            alpha(shape, &reduce_entries(&x, bits))
        }
        1 => {
            let y = sym(rng);
            beta(shape, &y, bits)
        }
        _ => {
            let z = sym(rng);
            Ok(beta(shape, &z.neg(), bits)?.h_conj())
        }
    }
}

/// A random paramodular element: a product of `len` paramodular letters.
pub(crate) fn random_paramodular<R: Rng + ?Sized>(shape: ParaShape, bits: u32, len: usize, rng: &mut R) -> Result<ParaMatrix> {
    let mut acc = ParaMatrix::identity(shape);
    for _ in 0..len {
        acc = acc.mul(&random_para_letter(shape, bits, rng)?);
    }
    Ok(acc)
}

/// The involutions and membership closure: `star` matches its block
/// formula (checked as `J_D γ* = γᵗ J_D`), equals `γ⁻¹` on members and is
/// involutive; `h_conj` matches `h γ h⁻¹`, is involutive, and maps `U`
/// onto `U^opp`; products, inverses and both involutions preserve
/// membership in `Γ`; `red_D` is multiplicative on paramodular pairs.
pub fn verify_involutions(shape: ParaShape, bits: u32, trials: usize, word_len: usize, seed: u64) -> Result<Vec<ShadowCheck>> {
    let mut out = Vec::new();
    let j = shape.j_d();
    let h = ParaMatrix::h(shape);
    let h_inv = h.inverse()?;
    out.push(run_trials(
        "involution.star",
        "J_D γ* = γᵗ J_D, γ* = γ⁻¹ on members, (γ*)* = γ, γ* ∈ Γ",
        trials,
        seed,
        11,
        |rng| {
            let gamma = random_gamma(shape, bits, word_len, rng)?;
            let s = gamma.star()?;
            let ok = j.mul(&s.m).eq_mod(&gamma.m.transpose().mul(&j), bits)?
                && s.mul(&gamma).is_identity_mod(bits)?
                && s.star()?.eq_mod(&gamma, bits)?
                && s.is_in_gamma(bits)?;
            Ok(if ok { None } else { Some(format!("star fails at γ = {}", gamma.display_mod(bits))) })
        },
    )?);
    out.push(run_trials(
        "involution.h_conj",
        "h γ h⁻¹ = (W −Z; −Y X), h² = −I, membership preserved, β(U′) maps into U^opp",
        trials,
        seed,
        12,
        |rng| {
            let gamma = random_gamma(shape, bits, word_len, rng)?;
            let c = gamma.h_conj();
            let y = random_u_prime(shape, bits, rng);
            let image = embed_beta(shape, &y, bits)?.h_conj();
            let ok = h.mul(&gamma).mul(&h_inv).eq_mod(&c, bits)?
                && c.h_conj().eq_mod(&gamma, bits)?
                && h.mul(&h).m.eq_mod(&Mat2::identity(2 * shape.g()).neg(), bits)?
                && c.is_in_gamma(bits)?
                && image.eq_mod(&embed_beta_opp(shape, &y.neg(), bits)?, bits)?
                && image.x().is_identity_mod(bits)?
                && image.w().is_identity_mod(bits)?
                && image.y().is_zero_mod(bits)?;
            Ok(if ok { None } else { Some(format!("h-conjugation fails at γ = {}", gamma.display_mod(bits))) })
        },
    )?);
    out.push(run_trials(
        "membership.closure",
        "products, inverses, star and h_conj of random Γ-words stay in Γ",
        trials,
        seed,
        13,
        |rng| {
            let a = random_gamma(shape, bits, word_len, rng)?;
            let b = random_gamma(shape, bits, word_len, rng)?;
            let ok = a.is_in_gamma(bits)?
                && a.mul(&b).is_in_gamma(bits)?
                && a.inverse()?.is_in_gamma(bits)?
                && a.star()?.is_in_gamma(bits)?
                && a.h_conj().is_in_gamma(bits)?;
            Ok(if ok { None } else { Some(format!("membership lost from γ = {}", a.display_mod(bits))) })
        },
    )?);
    if shape.k > 0 {
        out.push(run_trials(
            "red_d.homomorphism",
            "red_D(γγ′) = red_D(γ) red_D(γ′) on random paramodular pairs; red_D of Γ-words is the identity",
            trials,
            seed,
            14,
            |rng| {
                let a = random_paramodular(shape, bits, word_len, rng)?;
                let b = random_paramodular(shape, bits, word_len, rng)?;
                if !a.is_member(bits)? || !b.is_member(bits)? {
                    return Ok(Some(format!("paramodular sample is not a member: {}", a.display_mod(bits))));
                }
                let lhs = a.mul(&b).red_d()?;
                let rhs = a.red_d()?.mul(&b.red_d()?);
                let d = shape.reduction_type()?;
                let gamma = random_gamma(shape, bits, word_len, rng)?;
                let ok = lhs == rhs && gamma.red_d()? == SpMatrix::identity(&d);
                Ok(if ok { None } else { Some(format!("red_D not multiplicative at {}", a.display_mod(bits))) })
            },
        )?);
    }
    Ok(out)
}

fn flatten(m: &Mat2, bits: u32) -> Vec<u64> {
    m.reduced(bits)
}

fn span_equals(generated: &[Vec<u64>], target: &[Vec<u64>], modulus: u64) -> bool {
    let gs = howell_span(generated, modulus);
    let ts = howell_span(target, modulus);
    target.iter().all(|v| span_contains(&gs, v, modulus)) && generated.iter().all(|v| span_contains(&ts, v, modulus))
}

/// The spanning claims, each compared with its target module via Howell
/// forms: `span{XY − Y} = 2Mat_{n,k}`, `span{YXᵗ − Y} = Mat_{k,n}`,
/// `span{2XYXᵗ} = 2Sym_k`, and the closure of `{I − 2YX}` in `GL_k(Z/4)`
/// equal to the congruence kernel of order `2^{k²}`.
pub fn verify_spanning_claims(shape: ParaShape, bits: u32, samples: usize, seed: u64) -> Result<Vec<ShadowCheck>> {
    let (n, k) = (shape.n, shape.k);
    if n == 0 || k == 0 {
        return Err(Error::Unsupported("spanning claims need n >= 1 and k >= 1".into()));
    }
    if bits > 63 {
        return Err(Error::Capacity("spanning modulus must be below 2^64".into()));
    }
    let modulus = 1u64 << bits;
    let mut rng = trial_rng(seed, 21, 0);
    let mut gl_n: Vec<Mat2> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gl_n.push(Mat2::identity(n).add(&Mat2::unit(n, n, i, j, 1)));
            }
        }
    }
    gl_n.push(Mat2::identity(n).neg());
    let random_gl_n: Vec<Mat2> = (0..samples).map(|_| random_gl(n, bits, &mut rng)).collect();
    let mut out = Vec::new();

    // span{XY − Y : X ∈ GL_n, Y ∈ 2Mat_{n,k}}.
    let target: Vec<Vec<u64>> =
        (0..n).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| flatten(&Mat2::unit(n, k, a, b, 2), bits)).collect();
    let mut generated = Vec::new();
    for x in gl_n.iter().chain(&random_gl_n) {
        for a in 0..n {
            for b in 0..k {
                let y = Mat2::unit(n, k, a, b, 2);
                generated.push(flatten(&x.mul(&y).sub(&y), bits));
            }
        }
    }
    out.push(ShadowCheck {
        name: "span.xy_minus_y".into(),
        passed: span_equals(&generated, &target, modulus),
        trials: generated.len(),
        detail: format!("span{{XY − Y}} = 2Mat_{{{n},{k}}} modulo 2^{bits}"),
        counterexample: None,
    });

    // span{YXᵗ − Y : X ∈ GL_n, Y ∈ Mat_{k,n}}.
    let target: Vec<Vec<u64>> =
        (0..k).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| flatten(&Mat2::unit(k, n, a, b, 1), bits)).collect();
    let mut generated = Vec::new();
    for x in gl_n.iter().chain(&random_gl_n) {
        for a in 0..k {
            for b in 0..n {
                let y = Mat2::unit(k, n, a, b, 1);
                generated.push(flatten(&y.mul(&x.transpose()).sub(&y), bits));
            }
        }
    }
    out.push(ShadowCheck {
        name: "span.yxt_minus_y".into(),
        passed: span_equals(&generated, &target, modulus),
        trials: generated.len(),
        detail: format!("span{{YXᵗ − Y}} = Mat_{{{k},{n}}} modulo 2^{bits}"),
        counterexample: None,
    });

    // span{2XYXᵗ : X ∈ Mat_{k,n}, Y ∈ Sym_n}, flattened on the upper triangle.
    let upper = |m: &Mat2| -> Vec<u64> {
        let r = m.reduced(bits);
        (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).map(|(i, j)| r[i * k + j]).collect()
    };
    let mut sym_basis = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut y = Mat2::unit(n, n, a, b, 1);
            if a != b {
                y = y.add(&Mat2::unit(n, n, b, a, 1));
            }
            sym_basis.push(y);
        }
    }
    let mut xs = Vec::new();
    for i in 0..k {
        for a in 0..n {
            xs.push(Mat2::unit(k, n, i, a, 1));
            for j in 0..k {
                for b in 0..n {
                    if i != j && a != b {
                        xs.push(Mat2::unit(k, n, i, a, 1).add(&Mat2::unit(k, n, j, b, 1)));
                    }
                }
            }
        }
    }
    xs.extend((0..samples).map(|_| Mat2::random(k, n, bits, &mut rng)));
    let mut generated = Vec::new();
    for x in &xs {
        for y in &sym_basis {
            generated.push(upper(&x.mul(y).mul(&x.transpose()).scale(2)));
        }
    }
    let mut target = Vec::new();
    for i in 0..k {
        for j in i..k {
            let mut t = Mat2::unit(k, k, i, j, 2);
            if i != j {
                t = t.add(&Mat2::unit(k, k, j, i, 2));
            }
            target.push(upper(&t));
        }
    }
    let basis_rows = howell_span(&generated, modulus).len();
    out.push(ShadowCheck {
        name: "span.two_xyxt".into(),
        passed: span_equals(&generated, &target, modulus),
        trials: generated.len(),
        detail: format!("span{{2XYXᵗ}} = 2Sym_{k} modulo 2^{bits} ({basis_rows} Howell generators, {} expected)", target.len()),
        counterexample: None,
    });

    out.push(congruence_kernel_closure(n, k)?);
    Ok(out)
}

/// Closure in `GL_k(Z/4)` of `{I − 2YX : X = E_ab ∈ Mat_{n,k}, Y = E_cd ∈ Mat_{k,n}}`,
/// compared with `|ker(GL_k(Z/4) → GL_k(Z/2))| = 2^{k²}`.
fn congruence_kernel_closure(n: usize, k: usize) -> Result<ShadowCheck> {
    if k > 4 {
        return Err(Error::Capacity("congruence kernel enumeration is limited to k <= 4".into()));
    }
    // Elements of GL_k(Z/4) as row-major byte vectors.
    let key = |m: &Mat2| -> Vec<u8> { m.reduced(2).into_iter().map(|v| v as u8).collect() };
    let mut gens: Vec<Vec<u8>> = Vec::new();
    for a in 0..n {
        for b in 0..k {
            for c in 0..k {
                for d in 0..n {
                    let x = Mat2::unit(n, k, a, b, 1);
                    let y = Mat2::unit(k, n, c, d, 1);
                    let s = key(&Mat2::identity(k).sub(&y.mul(&x).scale(2)));
                    if !gens.contains(&s) {
                        gens.push(s);
                    }
                }
            }
        }
    }
    let mul4 = |a: &[u8], b: &[u8]| -> Vec<u8> {
        (0..k * k)
            .map(|ij| {
                let (i, j) = (ij / k, ij % k);
                (0..k).map(|t| a[i * k + t] * b[t * k + j]).fold(0u8, |acc, v| (acc + v) & 3)
            })
            .collect()
    };
    let start = key(&Mat2::identity(k));
    let identity_mod_2: Vec<u8> = start.clone();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut all_trivial_mod_2 = true;
    while let Some(m) = queue.pop_front() {
        all_trivial_mod_2 &= m.iter().zip(&identity_mod_2).all(|(x, y)| (x ^ y) & 1 == 0);
        for s in &gens {
            let next = mul4(&m, s);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let expect = 1usize << (k * k);
    Ok(ShadowCheck {
        name: "span.congruence_kernel".into(),
        passed: seen.len() == expect && all_trivial_mod_2,
        trials: gens.len(),
        detail: format!("closure of {{I − 2YX}} in GL_{k}(Z/4) has {} elements; the kernel has {expect}", seen.len()),
        counterexample: None,
    })
}

/// Commutators of random level-two elements of `Sp_{2k}(Z/2^bits)` satisfy
/// `A ≡ I mod 4` with `a_{i,i+k} ≡ a_{i+k,i} ≡ 0 mod 8` (the one direction
/// checkable at finite precision), and a sampled generator family of that
/// group is realized by explicit commutators.
pub fn level_two_commutators_in_sp_4_8(k: usize, bits: u32, trials: usize, word_len: usize, seed: u64) -> Result<Vec<ShadowCheck>> {
    require_bits(bits, 4, "the level-two congruences")?;
    if k < 2 {
        return Err(Error::Unsupported("the level-two statement needs k >= 2".into()));
    }
    let shape = ParaShape::new(0, k)?;
    let in_sp_4_8 = |a: &ParaMatrix| -> Result<bool> {
        let m = &a.m;
        let four = m.sub(&Mat2::identity(2 * k)).reduced(2).iter().all(|&v| v == 0);
        let eight = (0..k).all(|i| m.get(i, i + k) & 7 == 0 && m.get(i + k, i) & 7 == 0);
        Ok(four && eight && a.preserves_form(bits)?)
    };
    let mut out = Vec::new();
    out.push(run_trials(
        "level_two.commutators_in_sp_4_8",
        "[a, b] ≡ I mod 4 with a_{i,i+k} ≡ a_{i+k,i} ≡ 0 mod 8 for level-two a, b",
        trials,
        seed,
        31,
        |rng| {
            let a = random_gamma(shape, bits, word_len, rng)?;
            let b = random_gamma(shape, bits, word_len, rng)?;
            let level_two = a.m.sub(&Mat2::identity(2 * k)).reduced(1).iter().all(|&v| v == 0);
            let c = ParaMatrix::commutator(&a, &b)?;
            Ok(if level_two && in_sp_4_8(&c)? { None } else { Some(format!("commutator outside: {}", c.display_mod(bits))) })
        },
    )?);

    // Witnesses: β(4(E_ij + E_ji) + 8E_ii) = [α(I + 2E_ij), β(2E_jj)] and
    // α(I + 4E_ij) = [α(I + 2E_il), α(I + 2E_lj)] for distinct i, j, l.
    let mut witnesses = 0usize;
    let mut passed = true;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let x = Mat2::identity(k).add(&Mat2::unit(k, k, i, j, 2));
            let y = Mat2::unit(k, k, j, j, 2);
            let target = Mat2::unit(k, k, i, j, 4).add(&Mat2::unit(k, k, j, i, 4)).add(&Mat2::unit(k, k, i, i, 8));
            let c = ParaMatrix::commutator(&embed_alpha(shape, &x)?, &embed_beta(shape, &y, bits)?)?;
            let t = beta(shape, &target, bits)?;
            passed &= c.eq_mod(&t, bits)? && in_sp_4_8(&t)?;
            witnesses += 1;
            for l in 0..k {
                if l == i || l == j {
                    continue;
                }
                let a = Mat2::identity(k).add(&Mat2::unit(k, k, i, l, 2));
                let b = Mat2::identity(k).add(&Mat2::unit(k, k, l, j, 2));
                let c = ParaMatrix::commutator(&embed_alpha(shape, &a)?, &embed_alpha(shape, &b)?)?;
                let t = alpha(shape, &Mat2::identity(k).add(&Mat2::unit(k, k, i, j, 4)))?;
                passed &= c.eq_mod(&t, bits)? && in_sp_4_8(&t)?;
                witnesses += 1;
            }
        }
    }
    out.push(ShadowCheck {
        name: "level_two.generator_witnesses".into(),
        passed,
        trials: witnesses,
        detail: format!("{witnesses} elements of the mod-4/mod-8 group written as single commutators of level-two elements"),
        counterexample: None,
    });
    Ok(out)
}

/// The order of the subgroup of `Sp(M_D) = Sp_{2k}(F_2)` generated by the
/// reductions of structured paramodular elements (`α` on `GL_k` elementary
/// matrices in the `22` block, `β` and `β^opp` on symmetric unit matrices in
/// the `22` block, plus `samples` random paramodular elements), together with
/// `|Sp_{2k}(F_2)|`.
pub fn red_d_image_order(shape: ParaShape, bits: u32, samples: usize, seed: u64) -> Result<(u128, u128)> {
    let (n, k) = (shape.n, shape.k);
    let d = shape.reduction_type()?;
    let mut elems: Vec<ParaMatrix> = Vec::new();
    let embed22 = |b: &Mat2| shape.from_sub_blocks(&Mat2::zeros(n, n), &Mat2::zeros(n, k), &Mat2::zeros(k, n), b);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let x = embed22(&Mat2::unit(k, k, i, j, 1)).add(&Mat2::identity(shape.g()));
                elems.push(alpha(shape, &x)?);
            }
            if i <= j {
                let mut s = Mat2::unit(k, k, i, j, 1);
                if i != j {
                    s = s.add(&Mat2::unit(k, k, j, i, 1));
                }
                let y = embed22(&s);
                elems.push(beta(shape, &y, bits)?);
                elems.push(beta(shape, &y.neg(), bits)?.h_conj());
            }
        }
    }
    let mut rng = trial_rng(seed, 41, 0);
    for _ in 0..samples {
        elems.push(random_paramodular(shape, bits, 4, &mut rng)?);
    }
    for e in &elems {
        if !e.is_member(bits)? {
            return Err(Error::Soundness("structured paramodular element failed membership".into()));
        }
    }
    let images = elems.iter().map(|e| e.red_d()).collect::<Result<Vec<SpMatrix>>>()?;
    let grp = SpGroup::generated(&d, images, seed)?;
    Ok((grp.order(), classical_order(2, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_small() {
        let s = ParaShape::new(3, 2).unwrap();
        for c in verify_commutator_identities(s, 4, 30, 1).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn spans_small() {
        let s = ParaShape::new(2, 1).unwrap();
        for c in verify_spanning_claims(s, 3, 4, 1).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn red_d_surjective_on_one_two() {
        let s = ParaShape::new(1, 1).unwrap();
        assert_eq!(red_d_image_order(s, 2, 2, 5).unwrap(), (6, 6));
    }
}
