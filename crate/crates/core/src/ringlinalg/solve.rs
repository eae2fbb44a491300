use crate::arith::{factorize, inv_mod, mul_mod, valuation};
use crate::error::{Error, Result};

use super::ResMatrix;

/// A particular solution of `A x = b` together with generators of `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSolution {
    pub x: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Solve `A x = b (mod m)` for the modulus `m` of `A`.
///
/// Returns `Ok(None)` when the system is inconsistent. The modulus is split
/// into prime powers; over each `Z/p^e` the matrix is diagonalized by
/// unimodular row and column operations with minimal-valuation pivots, and
/// the local answers are recombined by the Chinese remainder theorem.
pub fn solve_mod(a: &ResMatrix, b: &[u64]) -> Result<Option<ModSolution>> {
    if b.len() != a.rows() {
        return Err(Error::Input(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let m = a.modulus();
    let cols = a.cols();
    if m == 1 {
        return Ok(Some(ModSolution { x: vec![0; cols], kernel: Vec::new() }));
    }
    let mut x = vec![0u64; cols];
    let mut kernel = Vec::new();
    for (p, e) in factorize(m) {
        let q = p.pow(e);
        let Some((xq, kq)) = solve_prime_power(a, b, p, e) else {
            return Ok(None);
        };
        let cofactor = m / q;
        // Idempotent for the q-component: 1 mod q, 0 mod m/q.
        let lift = mul_mod(cofactor, inv_mod(cofactor % q, q).expect("coprime cofactor"), m);
        for (xi, v) in x.iter_mut().zip(&xq) {
            *xi = (*xi + mul_mod(*v, lift, m)) % m;
        }
        kernel.extend(
            kq.into_iter().map(|k| k.into_iter().map(|v| mul_mod(v, lift, m)).collect::<Vec<_>>()),
        );
    }
    let check = a.mul_vec(&x)?;
    if check.iter().zip(b).any(|(&u, &v)| u != v % m) {
        return Err(Error::Soundness("solve_mod produced a non-solution".into()));
    }
    Ok(Some(ModSolution { x, kernel }))
}

type Local = (Vec<u64>, Vec<Vec<u64>>);

/// Diagonalize over `Z/p^e` and read off a solution and kernel generators.
fn solve_prime_power(a: &ResMatrix, b: &[u64], p: u64, e: u32) -> Option<Local> {
    let q = p.pow(e);
    let (rows, cols) = (a.rows(), a.cols());
    let mut mat: Vec<u64> = a.data().iter().map(|&v| v % q).collect();
    let mut rhs: Vec<u64> = b.iter().map(|&v| v % q).collect();
    // Column transform: original unknowns x = t * y.
    let mut t = vec![0u64; cols * cols];
    for i in 0..cols {
        t[i * cols + i] = 1 % q;
    }
    let idx = |r: usize, c: usize| r * cols + c;
    let mut pivots_val = Vec::new();
    let mut rank = 0;
    while rank < rows.min(cols) {
        // Minimal-valuation pivot in the trailing submatrix.
        let mut best: Option<(u32, usize, usize)> = None;
        for r in rank..rows {
            for c in rank..cols {
                let v = mat[idx(r, c)];
                if v != 0 {
                    let val = valuation(v, p);
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, r, c));
                        if val == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((val, pr, pc)) = best else { break };
        if pr != rank {
            for c in 0..cols {
                mat.swap(idx(pr, c), idx(rank, c));
            }
            rhs.swap(pr, rank);
        }
        if pc != rank {
            for r in 0..rows {
                mat.swap(idx(r, pc), idx(r, rank));
            }
            for r in 0..cols {
                t.swap(idx(r, pc), idx(r, rank));
            }
        }
        let pv = p.pow(val);
        let unit = mat[idx(rank, rank)] / pv;
        let uinv = inv_mod(unit % q, q).expect("unit part is invertible");
        for c in rank..cols {
            mat[idx(rank, c)] = mul_mod(mat[idx(rank, c)], uinv, q);
        }
        rhs[rank] = mul_mod(rhs[rank], uinv, q);
        debug_assert_eq!(mat[idx(rank, rank)], pv % q);
        for r in rank + 1..rows {
            let v = mat[idx(r, rank)];
            if v == 0 {
                continue;
            }
            let f = v / pv;
            for c in rank..cols {
                let s = mul_mod(f, mat[idx(rank, c)], q);
                mat[idx(r, c)] = (mat[idx(r, c)] + q - s) % q;
            }
            rhs[r] = (rhs[r] + q - mul_mod(f, rhs[rank], q)) % q;
        }
        for c in rank + 1..cols {
            let v = mat[idx(rank, c)];
            if v == 0 {
                continue;
            }
            let f = v / pv;
            for r in rank..rows {
                let s = mul_mod(f, mat[idx(r, rank)], q);
                mat[idx(r, c)] = (mat[idx(r, c)] + q - s) % q;
            }
            for r in 0..cols {
                let s = mul_mod(f, t[idx(r, rank)], q);
                t[idx(r, c)] = (t[idx(r, c)] + q - s) % q;
            }
        }
        pivots_val.push(val);
        rank += 1;
    }
    if rhs[rank..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut y = vec![0u64; cols];
    for (k, &val) in pivots_val.iter().enumerate() {
        let pv = p.pow(val);
        if !rhs[k].is_multiple_of(pv) {
            return None;
        }
        y[k] = rhs[k] / pv;
    }
    let apply_t = |v: &[u64]| -> Vec<u64> {
        (0..cols)
            .map(|r| (0..cols).fold(0u64, |acc, c| (acc + mul_mod(t[idx(r, c)], v[c], q)) % q))
            .collect()
    };
    let x = apply_t(&y);
    let mut kernel = Vec::new();
    for (k, &val) in pivots_val.iter().enumerate() {
        if val > 0 {
            let mut v = vec![0u64; cols];
            v[k] = p.pow(e - val);
            kernel.push(apply_t(&v));
        }
    }
    for k in rank..cols {
        let mut v = vec![0u64; cols];
        v[k] = 1;
        kernel.push(apply_t(&v));
    }
    Some((x, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = ResMatrix::identity(3, 4);
        let s = solve_mod(&a, &[1, 2, 3]).unwrap().unwrap();
        assert_eq!(s.x, vec![1, 2, 3]);
        assert!(s.kernel.iter().all(|k| k.iter().all(|&v| v == 0)));
    }

    #[test]
    fn two_x_equals_one_mod_four_has_no_solution() {
        let a = ResMatrix::from_vec(1, 1, 4, vec![2]).unwrap();
        assert_eq!(solve_mod(&a, &[1]).unwrap(), None);
    }

    #[test]
    fn two_x_equals_two_mod_four() {
        let a = ResMatrix::from_vec(1, 1, 4, vec![2]).unwrap();
        let s = solve_mod(&a, &[2]).unwrap().unwrap();
        // Oracle: exhaust residues.
        let sols: Vec<u64> = (0..4).filter(|x| (2 * x) % 4 == 2).collect();
        assert_eq!(sols, vec![1, 3]);
        assert!(sols.contains(&s.x[0]));
        assert_eq!(s.kernel, vec![vec![2]]);
    }

    #[test]
    fn composite_modulus_uses_crt() {
        let a = ResMatrix::from_signed_rows(&[vec![2, 3], vec![4, 1]], 12).unwrap();
        let b = [5, 7];
        match solve_mod(&a, &b).unwrap() {
            Some(s) => assert_eq!(a.mul_vec(&s.x).unwrap(), vec![5, 7]),
            None => {
                for x0 in 0..12 {
                    for x1 in 0..12 {
                        assert_ne!(a.mul_vec(&[x0, x1]).unwrap(), vec![5, 7]);
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let a = ResMatrix::identity(2, 3);
        assert!(matches!(solve_mod(&a, &[1]), Err(Error::Input(_))));
    }
}
