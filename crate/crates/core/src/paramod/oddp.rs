//! The congruence kernel `K = ker(Sp_{2g}(Z/p²) → Sp_{2g}(Z/p))` for an odd
//! prime `p`.
//!
//! `I + pA` is symplectic modulo `p²` exactly when `JA + AᵗJ ≡ 0 mod p`, and
//! `(I + pA)(I + pB) ≡ I + p(A + B)`, so `K` is the additive group of the
//! symplectic Lie algebra over `F_p`. Its dimension comes from a linear
//! solve; the group structure is then checked on the basis directly.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ringlinalg::{solve_mod, span_size, ResMatrix};

/// Structure of the mod-`p²` congruence kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddKernelReport {
    pub g: usize,
    pub p: u64,
    /// `log_p |K|`.
    pub dimension: usize,
    /// `2g² + g`.
    pub expected_dimension: usize,
    /// The basis elements commute pairwise modulo `p²`.
    pub abelian: bool,
    /// Every basis element is `≡ I mod p`, symplectic and of order `p` modulo `p²`.
    pub elementary: bool,
    /// `|K|` by exhaustive enumeration of `I + pA`, when `p^{4g²}` is small.
    pub enumerated_order: Option<u64>,
}

impl OddKernelReport {
    pub fn passed(&self) -> bool {
        let enumeration_ok = self.enumerated_order.is_none_or(|c| Some(c) == self.p.checked_pow(self.dimension as u32));
        self.dimension == self.expected_dimension && self.abelian && self.elementary && enumeration_ok
    }
}

/// Enumeration budget for the exhaustive count of `I + pA`.
const ENUMERATION_LIMIT: u64 = 1 << 20;

fn j_matrix(g: usize) -> Vec<i64> {
    let n = 2 * g;
    let mut j = vec![0i64; n * n];
    for i in 0..g {
        j[i * n + g + i] = 1;
        j[(g + i) * n + i] = -1;
    }
    j
}

fn mat_mul(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for t in 0..n {
            let x = a[i * n + t];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[t * n + j]) % m;
            }
        }
    }
    out
}

fn transpose(a: &[u64], n: usize) -> Vec<u64> {
    (0..n * n).map(|ij| a[(ij % n) * n + ij / n]).collect()
}

fn is_symplectic(a: &[u64], j: &[u64], n: usize, m: u64) -> bool {
    mat_mul(&mat_mul(&transpose(a, n), j, n, m), a, n, m) == j
}

/// `I + pA` reduced modulo `p²`.
fn lift(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let m = p * p;
    (0..n * n).map(|ij| (u64::from(ij / n == ij % n) + p * a[ij]) % m).collect()
}

/// Compute `K` for `g <= 3` and an odd prime `p < 2^16`.
pub fn odd_p_kernel_abelianization(g: usize, p: u64) -> Result<OddKernelReport> {
    if g == 0 || g > 3 {
        return Err(Error::Unsupported("the odd-prime kernel check supports 1 <= g <= 3".into()));
    }
    if p == 2 || p >= 1 << 16 || !is_prime(p) {
        return Err(Error::Input(format!("{p} is not an odd prime below 2^16")));
    }
    let n = 2 * g;
    let m2 = p * p;
    let jm = j_matrix(g);
    // Equations (JA + AᵗJ)_{rs} = 0 for r <= s; unknown A_{tc} at index t*n + c.
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for r in 0..n {
        for s in r..n {
            let mut eq = vec![0u64; n * n];
            for t in 0..n {
                let jr = jm[r * n + t].rem_euclid(p as i64) as u64;
                eq[t * n + s] = (eq[t * n + s] + jr) % p;
                let js = jm[t * n + s].rem_euclid(p as i64) as u64;
                eq[t * n + r] = (eq[t * n + r] + js) % p;
            }
            rows.push(eq);
        }
    }
    let mut a = ResMatrix::zeros(rows.len(), n * n, p);
    for (i, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            a.set(i, c, v);
        }
    }
    let sol = solve_mod(&a, &vec![0; rows.len()])?
        .ok_or_else(|| Error::Soundness("homogeneous system reported inconsistent".into()))?;
    let size = span_size(&sol.kernel, p);
    let mut dimension = 0usize;
    let mut rest = size;
    while rest > 1 && rest.is_multiple_of(u128::from(p)) {
        rest /= u128::from(p);
        dimension += 1;
    }
    if rest != 1 {
        return Err(Error::Soundness("kernel size is not a power of p".into()));
    }

    let j2: Vec<u64> = jm.iter().map(|&v| v.rem_euclid(m2 as i64) as u64).collect();
    let lifts: Vec<Vec<u64>> = sol.kernel.iter().map(|v| lift(v, n, p)).collect();
    let identity = lift(&vec![0; n * n], n, p);
    let elementary = lifts.iter().all(|x| {
        let mut pw = identity.clone();
        for _ in 0..p {
            pw = mat_mul(&pw, x, n, m2);
        }
        is_symplectic(x, &j2, n, m2) && pw == identity
    });
    let abelian = lifts
        .iter()
        .enumerate()
        .all(|(i, x)| lifts[i + 1..].iter().all(|y| mat_mul(x, y, n, m2) == mat_mul(y, x, n, m2)));

    let candidates = p.checked_pow((n * n) as u32).filter(|&c| c <= ENUMERATION_LIMIT);
    let enumerated_order = candidates.map(|count| {
        let hits = crate::par::map_range(count as usize, |idx| {
            let mut rem = idx as u64;
            let entries: Vec<u64> = (0..n * n)
                .map(|_| {
                    let d = rem % p;
                    rem /= p;
                    d
                })
                .collect();
            u64::from(is_symplectic(&lift(&entries, n, p), &j2, n, m2))
        });
        hits.iter().sum()
    });

    Ok(OddKernelReport { g, p, dimension, expected_dimension: 2 * g * g + g, abelian, elementary, enumerated_order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_p3_enumerated() {
        let r = odd_p_kernel_abelianization(1, 3).unwrap();
        assert_eq!(r.dimension, 3);
        assert_eq!(r.enumerated_order, Some(27));
        assert!(r.passed());
    }

    #[test]
    fn g2_p3() {
        let r = odd_p_kernel_abelianization(2, 3).unwrap();
        assert_eq!(r.dimension, 10);
        assert!(r.passed());
    }

    #[test]
    fn rejects_even_prime() {
        assert!(odd_p_kernel_abelianization(1, 2).is_err());
    }
}
