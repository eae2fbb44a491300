use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Full precision of the underlying ring `Z/2^64`.
pub const FULL_PRECISION: u32 = 64;

/// `2^bits - 1` (all ones for 64 bits).
pub fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Inverse of an odd residue modulo `2^64` by Newton iteration.
pub fn inv_odd(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    let mut x = u;
    for _ in 0..5 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

/// A matrix over `Z/2^64` whose entries are trusted modulo `2^prec`.
///
/// Arithmetic is exact in `Z/2^64`; halving an even entry loses the top bit,
/// which is recorded by lowering `prec`. Comparisons are made at a caller
/// chosen number of bits, which must not exceed the tracked precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    prec: u32,
}

impl Mat2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat2 { rows, cols, data: vec![0; rows * cols], prec: FULL_PRECISION }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| u64::from(i == j))
    }

    pub fn from_fn<F: FnMut(usize, usize) -> u64>(rows: usize, cols: usize, mut f: F) -> Self {
        let data = (0..rows * cols).map(|ij| f(ij / cols, ij % cols)).collect();
        Mat2 { rows, cols, data, prec: FULL_PRECISION }
    }

    /// Build from signed integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rows[i][j] as u64)
    }

    /// Uniform entries modulo `2^bits`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, bits: u32, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| rng.random::<u64>() & mask(bits))
    }

    /// Uniform symmetric matrix modulo `2^bits`.
    pub fn random_symmetric<R: Rng + ?Sized>(n: usize, bits: u32, rng: &mut R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.random::<u64>() & mask(bits);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    /// `E_ij` scaled by `t`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize, t: u64) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, t);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = self.prec.min(prec);
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    fn same_shape(&self, o: &Mat2) {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix shapes differ");
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        self.same_shape(o);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.wrapping_add(*b)).collect();
        Mat2 { rows: self.rows, cols: self.cols, data, prec: self.prec.min(o.prec) }
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Mat2 {
        self.scale(u64::MAX)
    }

    pub fn scale(&self, t: u64) -> Mat2 {
        let data = self.data.iter().map(|a| a.wrapping_mul(t)).collect();
        Mat2 { data, ..self.clone() }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        assert_eq!(self.cols, o.rows, "matrix shapes do not compose");
        let mut out = Mat2::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].wrapping_add(a.wrapping_mul(o.get(l, j)));
                }
            }
        }
        out.prec = self.prec.min(o.prec);
        out
    }

    pub fn transpose(&self) -> Mat2 {
        let mut t = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i));
        t.prec = self.prec;
        t
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat2 {
        let mut b = Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j));
        b.prec = self.prec;
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat2) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
        self.prec = self.prec.min(b.prec);
    }

    /// Whether every entry is divisible by `2^s` (needs `s <= prec`).
    pub fn divisible_by_pow2(&self, s: u32) -> bool {
        self.data.iter().all(|&x| x & mask(s.min(self.prec)) == 0)
    }

    /// Entrywise halving of an even matrix.
    pub fn half(&self) -> Result<Mat2> {
        if self.prec == 0 || !self.divisible_by_pow2(1) {
            return Err(Error::Soundness("halving a matrix with an odd entry".into()));
        }
        let data = self.data.iter().map(|&x| x >> 1).collect();
        Ok(Mat2 { data, prec: self.prec - 1, ..self.clone() })
    }

    /// Inverse over `Z/2^64`; the matrix must be invertible modulo 2.
    pub fn inverse(&self) -> Result<Mat2> {
        if self.rows != self.cols {
            return Err(Error::Input("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat2::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a.get(r, col) & 1 == 1)
                .ok_or_else(|| Error::Validation("matrix is singular modulo 2".into()))?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let s = inv_odd(a.get(col, col));
            a.scale_row(col, s);
            inv.scale_row(col, s);
            for r in 0..n {
                let f = a.get(r, col);
                if r != col && f != 0 {
                    a.axpy_row(r, col, f.wrapping_neg());
                    inv.axpy_row(r, col, f.wrapping_neg());
                }
            }
        }
        inv.prec = self.prec;
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for j in 0..self.cols {
            let v = self.get(r, j).wrapping_mul(s);
            self.set(r, j, v);
        }
    }

    /// `row[dst] += f * row[src]`.
    fn axpy_row(&mut self, dst: usize, src: usize, f: u64) {
        for j in 0..self.cols {
            let v = self.get(dst, j).wrapping_add(f.wrapping_mul(self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    fn ensure_bits(&self, bits: u32) -> Result<()> {
        if bits > self.prec {
            return Err(Error::Capacity(format!("comparison at {bits} bits exceeds tracked precision {}", self.prec)));
        }
        Ok(())
    }

    /// Equality modulo `2^bits`.
    pub fn eq_mod(&self, o: &Mat2, bits: u32) -> Result<bool> {
        self.same_shape(o);
        self.ensure_bits(bits)?;
        o.ensure_bits(bits)?;
        let m = mask(bits);
        Ok(self.data.iter().zip(&o.data).all(|(a, b)| (a ^ b) & m == 0))
    }

    pub fn is_identity_mod(&self, bits: u32) -> Result<bool> {
        self.eq_mod(&Mat2::identity(self.rows), bits)
    }

    pub fn is_zero_mod(&self, bits: u32) -> Result<bool> {
        self.eq_mod(&Mat2::zeros(self.rows, self.cols), bits)
    }

    pub fn is_symmetric_mod(&self, bits: u32) -> Result<bool> {
        self.eq_mod(&self.transpose(), bits)
    }

    /// Entries reduced modulo `2^bits`, row-major.
    pub fn reduced(&self, bits: u32) -> Vec<u64> {
        self.data.iter().map(|&x| x & mask(bits)).collect()
    }

    /// Rows as text with entries reduced modulo `2^bits`, e.g. `[[1,0],[0,1]]`.
    pub fn display_mod(&self, bits: u32) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| (self.get(i, j) & mask(bits)).to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat2(prec {}, {})", self.prec, self.display_mod(self.prec.min(16)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn odd_inverse() {
        for u in [1u64, 3, 5, 7, 12345, u64::MAX] {
            assert_eq!(u.wrapping_mul(inv_odd(u)), 1);
        }
    }

    #[test]
    fn matrix_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut m = Mat2::random(4, 4, 64, &mut rng);
            for i in 0..4 {
                m.set(i, i, m.get(i, i) | 1);
                for j in 0..i {
                    m.set(i, j, m.get(i, j) & !1);
                }
            }
            let inv = m.inverse().unwrap();
            assert!(m.mul(&inv).is_identity_mod(64).unwrap());
        }
        assert!(Mat2::zeros(2, 2).inverse().is_err());
    }

    #[test]
    fn halving_tracks_precision() {
        let m = Mat2::from_rows(&[vec![2, 4], vec![-2, 0]]);
        let h = m.half().unwrap();
        assert_eq!(h.precision(), 63);
        assert!(h.eq_mod(&Mat2::from_rows(&[vec![1, 2], vec![-1, 0]]), 63).unwrap());
        assert!(h.eq_mod(&h, 64).is_err());
        assert!(Mat2::identity(2).half().is_err());
    }
}
