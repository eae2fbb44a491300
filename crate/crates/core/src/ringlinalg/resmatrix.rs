use std::fmt;

use crate::arith::{add_mod, mul_mod, reduce_signed};
use crate::error::{Error, Result};

/// Dense `rows x cols` matrix over `Z/m`, row-major, entries in `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ResMatrix {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        ResMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(size: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(size, size, modulus);
        for i in 0..size {
            m.data[i * size + i] = 1 % modulus;
        }
        m
    }

    /// Build from row-major data, reducing every entry.
    pub fn from_vec(rows: usize, cols: usize, modulus: u64, data: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Input("modulus must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(ResMatrix { rows, cols, modulus, data: data.into_iter().map(|x| x % modulus).collect() })
    }

    /// Build from signed rows, reducing every entry into `[0, m)`.
    pub fn from_signed_rows(rows: &[Vec<i64>], modulus: u64) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Input("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| reduce_signed(x, modulus)).collect();
        Self::from_vec(r, c, modulus, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Row-major entries.
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product; moduli and inner dimensions must agree.
    pub fn mul(&self, other: &ResMatrix) -> Result<ResMatrix> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::Input(format!(
                "cannot multiply {}x{} mod {} by {}x{} mod {}",
                self.rows, self.cols, self.modulus, other.rows, other.cols, other.modulus
            )));
        }
        let m = self.modulus;
        let mut out = Self::zeros(self.rows, other.cols, m);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, j), m), m);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `A x`.
    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::Input(format!(
                "vector of length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        let m = self.modulus;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b % m, m), m))
            })
            .collect())
    }

    /// Serialize as `"rows cols modulus"` followed by one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.modulus);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the text format produced by [`ResMatrix::to_text`].
    ///
    /// Entries must already be reduced; anything else is rejected so that
    /// the format stays bit-exact.
    pub fn from_text(text: &str) -> Result<ResMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Input("empty matrix text".into()))?;
        let dims: Vec<u64> = parse_numbers(header)?;
        if dims.len() != 3 {
            return Err(Error::Input(format!("bad header {header:?}: expected rows cols modulus")));
        }
        let (rows, cols, modulus) = (dims[0] as usize, dims[1] as usize, dims[2]);
        if modulus == 0 {
            return Err(Error::Input("modulus must be positive".into()));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Input(format!("missing row {r} of {rows}")))?;
            let vals = parse_numbers(line)?;
            if vals.len() != cols {
                return Err(Error::Input(format!("row {r} has {} entries, expected {cols}", vals.len())));
            }
            if let Some(v) = vals.iter().find(|&&v| v >= modulus) {
                return Err(Error::Input(format!("entry {v} is not reduced modulo {modulus}")));
            }
            data.extend(vals);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Input(format!("trailing content {extra:?}")));
        }
        ResMatrix::from_vec(rows, cols, modulus, data)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::Input(format!("not a number: {t:?}"))))
        .collect()
}

impl fmt::Debug for ResMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResMatrix(mod {})[", self.modulus)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ResMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let a = ResMatrix::from_signed_rows(&[vec![1, -1, 5], vec![0, 2, 3]], 4).unwrap();
        assert_eq!(a.to_text(), "2 3 4\n1 3 1\n0 2 3\n");
        assert_eq!(ResMatrix::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn text_rejects_unreduced_entries() {
        assert!(ResMatrix::from_text("1 1 4\n5\n").is_err());
        assert!(ResMatrix::from_text("2 1 4\n1\n").is_err());
    }

    #[test]
    fn product_with_identity() {
        let a = ResMatrix::from_signed_rows(&[vec![1, 2], vec![3, 4]], 5).unwrap();
        let i = ResMatrix::identity(2, 5);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(a.mul_vec(&[1, 1]).unwrap(), vec![3, 2]);
    }
}
