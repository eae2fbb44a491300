use std::fmt;

use crate::error::{Error, Result};
use crate::par;

use super::ResMatrix;

/// Dense matrix over GF(2) with rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<Vec<u64>>,
}

/// A particular solution of `A x = b` over GF(2) plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSolution {
    pub x: Vec<bool>,
    pub kernel: Vec<Vec<bool>>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![vec![0; words]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r][c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r][c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    /// Flip one entry.
    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r][c / 64] ^= 1 << (c % 64);
    }

    /// Append a row given by the set of its nonzero columns (duplicates cancel).
    pub fn push_row_from_support(&mut self, support: &[usize]) {
        let mut row = vec![0u64; self.words];
        for &c in support {
            assert!(c < self.cols, "column {c} out of range");
            row[c / 64] ^= 1 << (c % 64);
        }
        self.data.push(row);
        self.rows += 1;
    }

    /// Exact conversion from a residue matrix modulo 2.
    pub fn from_res(m: &ResMatrix) -> Result<Self> {
        if m.modulus() != 2 {
            return Err(Error::Input(format!("BitMatrix needs modulus 2, got {}", m.modulus())));
        }
        let mut b = Self::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                b.set(r, c, m.get(r, c) == 1);
            }
        }
        Ok(b)
    }

    /// Exact conversion to a residue matrix modulo 2.
    pub fn to_res(&self) -> ResMatrix {
        let mut m = ResMatrix::zeros(self.rows, self.cols, 2);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, 1);
                }
            }
        }
        m
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Input("dimension mismatch in GF(2) product".into()));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for (o, &w) in out.data[r].iter_mut().zip(&other.data[k]) {
                        *o ^= w;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.cols {
            return Err(Error::Input("vector length mismatch in GF(2) product".into()));
        }
        let packed = pack(x, self.words);
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1)
            .collect())
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(self.cols).len()
    }

    /// Reduce to reduced row echelon form over the first `ncols` columns,
    /// returning the pivot column of each leading row.
    fn eliminate(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == self.rows {
                break;
            }
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (r..self.rows).find(|&i| self.data[i][w] & bit != 0) else {
                continue;
            };
            self.data.swap(p, r);
            let pivot_row = self.data[r].clone();
            par::for_each_mut(&mut self.data, |i, row| {
                if i != r && row[w] & bit != 0 {
                    for (x, &y) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                        *x ^= y;
                    }
                }
            });
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Solve `A x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[bool]) -> Result<Option<BitSolution>> {
        if b.len() != self.rows {
            return Err(Error::Input(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug_cols = self.cols + 1;
        let aug_words = aug_cols.div_ceil(64);
        let mut aug = BitMatrix { rows: self.rows, cols: aug_cols, words: aug_words, data: Vec::new() };
        aug.data = self
            .data
            .iter()
            .zip(b)
            .map(|(row, &bi)| {
                let mut r = row.clone();
                r.resize(aug_words, 0);
                if bi {
                    r[self.cols / 64] |= 1 << (self.cols % 64);
                }
                r
            })
            .collect();
        let pivots = aug.eliminate(self.cols);
        let rhs = |r: usize| aug.get(r, self.cols);
        if (pivots.len()..aug.rows).any(rhs) {
            return Ok(None);
        }
        let mut x = vec![false; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rhs(r);
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let kernel = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut k = vec![false; self.cols];
                k[f] = true;
                for (r, &c) in pivots.iter().enumerate() {
                    k[c] = aug.get(r, f);
                }
                k
            })
            .collect();
        Ok(Some(BitSolution { x, kernel }))
    }
}

fn pack(x: &[bool], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in x.iter().enumerate() {
        if b {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_round_trip() {
        let r = ResMatrix::from_vec(2, 70, 2, (0..140).map(|i| (i * 7 % 3 == 0) as u64).collect()).unwrap();
        let b = BitMatrix::from_res(&r).unwrap();
        assert_eq!(b.to_res(), r);
    }

    #[test]
    fn solves_and_reports_kernel() {
        let mut a = BitMatrix::zeros(0, 3);
        a.push_row_from_support(&[0, 1]);
        a.push_row_from_support(&[1, 2]);
        let s = a.solve(&[true, false]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&s.x).unwrap(), vec![true, false]);
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(a.mul_vec(&s.kernel[0]).unwrap(), vec![false, false]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut a = BitMatrix::zeros(0, 2);
        a.push_row_from_support(&[0, 1]);
        a.push_row_from_support(&[0, 1]);
        assert_eq!(a.solve(&[true, false]).unwrap(), None);
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(BitMatrix::identity(130).rank(), 130);
    }
}
