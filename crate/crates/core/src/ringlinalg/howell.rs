use crate::arith::{egcd, gcd, inv_mod, mul_mod, unit_part};

/// Canonical (Howell-form) basis of the `Z/m`-submodule spanned by `vs`.
///
/// Two lists span the same submodule iff their outputs are identical. Rows
/// are in echelon order; each pivot divides `m`; entries above a pivot `p`
/// lie in `[0, p)`; and the annihilator multiple `(m/p)·row` of every row
/// is reinserted before later columns are processed, which gives the Howell
/// property that makes the form unique.
pub fn howell_span(vs: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let Some(width) = vs.first().map(Vec::len) else {
        return Vec::new();
    };
    assert!(vs.iter().all(|v| v.len() == width), "vectors must have equal length");
    if m == 1 {
        return Vec::new();
    }
    let mut pool: Vec<Vec<u64>> = vs
        .iter()
        .map(|v| v.iter().map(|&x| x % m).collect::<Vec<u64>>())
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for col in 0..width {
        // Gather all rows with a nonzero entry in this column into one pivot row.
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(pool.len());
        for row in pool.drain(..) {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (np, other) = gcd_combine(&p, &row, col, m);
                    pivot = Some(np);
                    if other.iter().any(|&x| x != 0) {
                        rest.push(other);
                    }
                }
            }
        }
        pool = rest;
        let Some(mut p) = pivot else { continue };
        // Normalize the pivot entry to gcd(entry, m).
        let u = unit_part(p[col], m);
        let uinv = inv_mod(u, m).expect("unit");
        for x in p.iter_mut() {
            *x = mul_mod(*x, uinv, m);
        }
        let pv = p[col];
        debug_assert_eq!(pv, gcd(pv, m));
        // Annihilator multiple: kills the pivot entry, may survive further right.
        let ann_scale = m / pv;
        let ann: Vec<u64> = p.iter().map(|&x| mul_mod(x, ann_scale, m)).collect();
        if ann.iter().any(|&x| x != 0) {
            pool.push(ann);
        }
        basis.push((col, p));
    }
    // Reduce entries above each pivot into [0, pivot).
    for i in 0..basis.len() {
        let (col, ref piv) = basis[i];
        let piv = piv.clone();
        let pv = piv[col];
        for (_, row) in basis.iter_mut().take(i) {
            let q = row[col] / pv;
            if q != 0 {
                for (x, &y) in row.iter_mut().zip(&piv) {
                    *x = (*x + m - mul_mod(q, y, m)) % m;
                }
            }
        }
    }
    basis.into_iter().map(|(_, r)| r).collect()
}

/// Replace rows `a`, `b` by a unimodular combination whose first row carries
/// `gcd(a[col], b[col])` at `col` and whose second row vanishes there.
fn gcd_combine(a: &[u64], b: &[u64], col: usize, m: u64) -> (Vec<u64>, Vec<u64>) {
    let (x, y) = (a[col] as i128, b[col] as i128);
    let (g, s, t) = egcd(x, y);
    let (xg, yg) = (x / g, y / g);
    let mi = m as i128;
    let first = a
        .iter()
        .zip(b)
        .map(|(&u, &v)| ((s * u as i128 + t * v as i128).rem_euclid(mi)) as u64)
        .collect();
    let second = a
        .iter()
        .zip(b)
        .map(|(&u, &v)| ((-yg * u as i128 + xg * v as i128).rem_euclid(mi)) as u64)
        .collect();
    (first, second)
}

/// Number of elements of the submodule with Howell basis `basis`.
pub fn span_size(basis: &[Vec<u64>], m: u64) -> u128 {
    basis
        .iter()
        .map(|row| {
            let pivot = row.iter().copied().find(|&x| x != 0).expect("basis rows are nonzero");
            (m / gcd(pivot, m)) as u128
        })
        .product()
}

/// Whether `v` lies in the submodule whose Howell basis is `basis`.
pub fn span_contains(basis: &[Vec<u64>], v: &[u64], m: u64) -> bool {
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    howell_span(&with, m) == basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_span(vs: &[Vec<u64>], m: u64, width: usize) -> BTreeSet<Vec<u64>> {
        let mut span = BTreeSet::new();
        span.insert(vec![0; width]);
        loop {
            let mut grew = false;
            let current: Vec<_> = span.iter().cloned().collect();
            for s in &current {
                for v in vs {
                    let w: Vec<u64> = s.iter().zip(v).map(|(a, b)| (a + b) % m).collect();
                    grew |= span.insert(w);
                }
            }
            if !grew {
                return span;
            }
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(howell_span(&[vec![2, 0], vec![0, 2]], 4), vec![vec![2, 0], vec![0, 2]]);
        assert!(howell_span(&[], 4).is_empty());
        let full = howell_span(&[vec![1, 1], vec![1, 3]], 4);
        // (1,1) - (1,3) = (0,2), so the span has order 8.
        assert_eq!(brute_span(&[vec![1, 1], vec![1, 3]], 4, 2).len(), 8);
        assert_eq!(brute_span(&full, 4, 2).len(), 8);
        assert_eq!(full, vec![vec![1, 1], vec![0, 2]]);
        let unimodular = howell_span(&[vec![1, 1], vec![1, 2]], 4);
        assert_eq!(unimodular, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn span_size_matches_enumeration() {
        for (vs, m) in [
            (vec![vec![2u64, 1]], 4u64),
            (vec![vec![1, 1], vec![1, 3]], 4),
            (vec![vec![2, 4, 2], vec![6, 6, 0]], 8),
            (vec![vec![3, 0, 6], vec![0, 2, 4]], 12),
        ] {
            let width = vs[0].len();
            let basis = howell_span(&vs, m);
            assert_eq!(span_size(&basis, m), brute_span(&vs, m, width).len() as u128);
        }
    }

    #[test]
    fn howell_property_example() {
        // (2,1) mod 4: its double (0,2) must appear explicitly.
        let b = howell_span(&[vec![2, 1]], 4);
        assert_eq!(b, vec![vec![2, 1], vec![0, 2]]);
    }

    #[test]
    fn canonical_on_equal_spans() {
        let a = howell_span(&[vec![2, 2, 0], vec![0, 2, 2]], 8);
        let b = howell_span(&[vec![2, 4, 2], vec![6, 6, 0], vec![4, 0, 4]], 8);
        assert_eq!(brute_span(&a, 8, 3), brute_span(&b, 8, 3));
        assert_eq!(a, b);
    }
}
