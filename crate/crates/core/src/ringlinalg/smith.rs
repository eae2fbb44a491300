use crate::error::{Error, Result};

/// Dense integer matrix as a list of rows.
pub type IntMatrix = Vec<Vec<i64>>;

/// Smith normal form `A = U · S · V` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `s_1 | s_2 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.s.len().min(self.s.first().map_or(0, Vec::len))).map(|i| self.s[i][i]).collect()
    }
}

fn ovf(what: &str) -> Error {
    Error::Overflow(format!("smith_form ({what})"))
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Smith normal form of an integer matrix, with every operation checked for overflow.
pub fn smith_form(a: &IntMatrix) -> Result<SmithForm> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Input("ragged integer matrix".into()));
    }
    let mut s = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    // Row op: row_i += c * row_j on S; compensate U <- U * (I - c e_i e_j^T).
    let row_add = |s: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, c: i64| -> Result<()> {
        for k in 0..cols {
            s[i][k] = c
                .checked_mul(s[j][k])
                .and_then(|x| s[i][k].checked_add(x))
                .ok_or_else(|| ovf("row operation"))?;
        }
        for row in u.iter_mut() {
            row[j] = c
                .checked_mul(row[i])
                .and_then(|x| row[j].checked_sub(x))
                .ok_or_else(|| ovf("left transform"))?;
        }
        Ok(())
    };
    // Column op: col_i += c * col_j on S; compensate V <- (I - c e_j e_i^T) * V.
    let col_add = |s: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, c: i64| -> Result<()> {
        for row in s.iter_mut() {
            row[i] = c
                .checked_mul(row[j])
                .and_then(|x| row[i].checked_add(x))
                .ok_or_else(|| ovf("column operation"))?;
        }
        for k in 0..cols {
            v[j][k] = c
                .checked_mul(v[i][k])
                .and_then(|x| v[j][k].checked_sub(x))
                .ok_or_else(|| ovf("right transform"))?;
        }
        Ok(())
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s[i][j];
                    if x != 0 && best.is_none_or(|(b, _, _)| x.unsigned_abs() < b) {
                        best = Some((x.unsigned_abs(), i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                return finish(s, u, v);
            };
            if bi != t {
                s.swap(bi, t);
                for row in u.iter_mut() {
                    row.swap(bi, t);
                }
            }
            if bj != t {
                for row in s.iter_mut() {
                    row.swap(bj, t);
                }
                v.swap(bj, t);
            }
            let p = s[t][t];
            for i in t + 1..rows {
                let q = s[i][t].div_euclid(p);
                if q != 0 {
                    row_add(&mut s, &mut u, i, t, q.checked_neg().ok_or_else(|| ovf("negate"))?)?;
                }
            }
            for j in t + 1..cols {
                let q = s[t][j].div_euclid(p);
                if q != 0 {
                    col_add(&mut s, &mut v, j, t, q.checked_neg().ok_or_else(|| ovf("negate"))?)?;
                }
            }
            let clean = (t + 1..rows).all(|i| s[i][t] == 0) && (t + 1..cols).all(|j| s[t][j] == 0);
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[i][j] % p != 0));
            match bad {
                Some(i) => row_add(&mut s, &mut u, t, i, 1)?,
                None => break,
            }
        }
        if s[t][t] < 0 {
            for k in 0..cols {
                s[t][k] = s[t][k].checked_neg().ok_or_else(|| ovf("sign fix"))?;
            }
            for row in u.iter_mut() {
                row[t] = row[t].checked_neg().ok_or_else(|| ovf("sign fix"))?;
            }
        }
    }
    finish(s, u, v)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix) -> Result<SmithForm> {
    Ok(SmithForm { u, s, v })
}

/// Product of integer matrices with overflow detection.
pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != k) {
        return Err(Error::Input("dimension mismatch in integer product".into()));
    }
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0i64;
            for l in 0..k {
                acc = a[i][l]
                    .checked_mul(b[l][j])
                    .and_then(|x| acc.checked_add(x))
                    .ok_or_else(|| ovf("verification product"))?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Determinant by fraction-free elimination (Bareiss), in 128-bit arithmetic.
pub fn int_det(a: &IntMatrix) -> Result<i128> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Input("determinant of a non-square matrix".into()));
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|x| m[i][k].checked_mul(m[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or_else(|| ovf("determinant"))?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_form(a).unwrap();
        assert_eq!(&int_mul(&int_mul(&f.u, &f.s).unwrap(), &f.v).unwrap(), a);
        assert_eq!(int_det(&f.u).unwrap().abs(), 1);
        assert_eq!(int_det(&f.v).unwrap().abs(), 1);
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        for (i, row) in f.s.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(x, 0);
                }
            }
        }
        f
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(check(&vec![vec![2, 0], vec![0, 4]]).diagonal(), vec![2, 4]);
        assert_eq!(check(&vec![vec![2, 0], vec![0, 3]]).diagonal(), vec![1, 6]);
    }

    #[test]
    fn rectangular_and_zero() {
        check(&vec![vec![0, 0, 0], vec![0, 0, 0]]);
        check(&vec![vec![4, 6, 8], vec![10, 12, 14]]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let a = vec![vec![big, big - 1], vec![big - 3, big]];
        match smith_form(&a) {
            Ok(f) => {
                // If it did not overflow, the reconstruction must still be exact.
                if let Ok(p) = int_mul(&f.u, &f.s).and_then(|us| int_mul(&us, &f.v)) {
                    assert_eq!(p, a);
                }
            }
            Err(e) => assert!(matches!(e, Error::Overflow(_))),
        }
    }
}
