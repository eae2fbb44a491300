use std::fmt;

use crate::arith::{additive_order, lcm, mul_mod};
use crate::error::{Error, Result};
use crate::ringlinalg::ResMatrix;

use super::TypeD;

/// Largest group order for which element-enumerating algorithms run.
pub const MAX_ENUMERATED: usize = 1 << 20;

/// A coordinate vector with respect to a module's generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModElement {
    pub coords: Vec<u64>,
}

impl ModElement {
    pub fn new(coords: Vec<u64>) -> Self {
        ModElement { coords }
    }
}

impl fmt::Display for ModElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite abelian group `⊕ Z/m_i` with a `Z/N`-valued bilinear pairing
/// given by its Gram table on the generators.
///
/// Elements are addressed either by coordinates or by their index in the
/// mixed-radix encoding with the first coordinate most significant, so that
/// index order is lexicographic order of coordinate vectors.
#[derive(Clone)]
pub struct SymplecticModule {
    orders: Vec<u64>,
    modulus: u64,
    gram: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    standard_type: Option<TypeD>,
}

impl SymplecticModule {
    /// Build a module from generator orders, pairing modulus and Gram table.
    ///
    /// Checks that the Gram table is well defined on `⊕ Z/m_i` and
    /// alternating. Nondegeneracy is checked separately by
    /// [`SymplecticModule::validate_nondegenerate`].
    pub fn new(orders: Vec<u64>, modulus: u64, gram: Vec<u64>) -> Result<Self> {
        let r = orders.len();
        if modulus == 0 || orders.contains(&0) {
            return Err(Error::Input("orders and modulus must be positive".into()));
        }
        if gram.len() != r * r {
            return Err(Error::Input(format!("Gram table needs {} entries, got {}", r * r, gram.len())));
        }
        let gram: Vec<u64> = gram.into_iter().map(|x| x % modulus).collect();
        for i in 0..r {
            if gram[i * r + i] != 0 {
                return Err(Error::Validation(format!("pairing is not alternating: e(g{i},g{i}) != 0")));
            }
            for j in 0..r {
                let v = gram[i * r + j];
                if !(v + gram[j * r + i]).is_multiple_of(modulus) {
                    return Err(Error::Validation(format!("pairing is not alternating at ({i},{j})")));
                }
                if mul_mod(v, orders[i] % modulus, modulus) != 0 || mul_mod(v, orders[j] % modulus, modulus) != 0 {
                    return Err(Error::Validation(format!(
                        "Gram entry ({i},{j}) = {v} is not compatible with generator orders"
                    )));
                }
            }
        }
        let mut strides = vec![0usize; r];
        let mut acc: usize = 1;
        for i in (0..r).rev() {
            strides[i] = acc;
            acc = acc
                .checked_mul(orders[i] as usize)
                .ok_or_else(|| Error::Capacity("module order overflows usize".into()))?;
        }
        Ok(SymplecticModule { orders, modulus, gram, strides, size: acc, standard_type: None })
    }

    /// The standard module `M_D = K_D x K_D^` with generators
    /// `x_1..x_g, chi_1..chi_g` and `e = Σ (n/d_i)(χ'_i x_i − χ_i x'_i)`.
    pub fn standard(d: &TypeD) -> Self {
        let g = d.g();
        let n = d.n();
        let mut orders = d.divisors().to_vec();
        orders.extend_from_slice(d.divisors());
        let r = 2 * g;
        let mut gram = vec![0u64; r * r];
        for (i, &di) in d.divisors().iter().enumerate() {
            gram[i * r + g + i] = n / di;
            gram[(g + i) * r + i] = n - n / di;
        }
        let mut m = Self::new(orders, n, gram).expect("standard module is well formed");
        m.standard_type = Some(d.clone());
        m
    }

    /// The trivial module.
    pub fn zero() -> Self {
        Self::new(Vec::new(), 1, Vec::new()).expect("zero module")
    }

    /// Type, if this module was built by [`SymplecticModule::standard`].
    pub fn standard_type(&self) -> Option<&TypeD> {
        self.standard_type.as_ref()
    }

    /// Generator orders.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Modulus `N` of the pairing values.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Gram table, row-major.
    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    #[inline]
    pub fn gram_entry(&self, i: usize, j: usize) -> u64 {
        self.gram[i * self.rank() + j]
    }

    /// Group order `|M|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &b| lcm(a, b))
    }

    /// Error unless the group is small enough to enumerate.
    pub fn ensure_enumerable(&self) -> Result<()> {
        if self.size > MAX_ENUMERATED {
            return Err(Error::Capacity(format!(
                "module of order {} exceeds the enumeration limit {MAX_ENUMERATED}",
                self.size
            )));
        }
        Ok(())
    }

    /// Coordinates to index.
    #[inline]
    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &m), &s)| (c % m) as usize * s)
            .sum()
    }

    /// Index to coordinates.
    #[inline]
    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.rank()];
        for i in 0..self.rank() {
            out[i] = (idx / self.strides[i]) as u64;
            idx %= self.strides[i];
        }
        out
    }

    pub fn element(&self, idx: usize) -> ModElement {
        ModElement::new(self.decode(idx))
    }

    /// Index of the `i`-th generator.
    pub fn generator(&self, i: usize) -> usize {
        if self.orders[i] == 1 {
            0
        } else {
            self.strides[i]
        }
    }

    /// Reduce arbitrary coordinates.
    pub fn reduce(&self, coords: &[u64]) -> Vec<u64> {
        coords.iter().zip(&self.orders).map(|(&c, &m)| c % m).collect()
    }

    pub fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &m)| (x + y) % m).collect()
    }

    pub fn neg_coords(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &m)| (m - x % m) % m).collect()
    }

    pub fn scale_coords(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &m)| mul_mod(k % m, x, m)).collect()
    }

    /// Sum of two elements by index.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0usize;
        let (mut a, mut b) = (a, b);
        for i in 0..self.rank() {
            let s = self.strides[i];
            let (x, y) = (a / s, b / s);
            a %= s;
            b %= s;
            out += ((x + y) % self.orders[i] as usize) * s;
        }
        out
    }

    /// Difference `a - b` by index.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Negation by index.
    pub fn neg(&self, a: usize) -> usize {
        self.encode(&self.neg_coords(&self.decode(a)))
    }

    /// Multiple `k·a` by index.
    pub fn scale(&self, k: u64, a: usize) -> usize {
        self.encode(&self.scale_coords(k, &self.decode(a)))
    }

    /// Pairing of coordinate vectors, in `Z/N`.
    pub fn pair_coords(&self, a: &[u64], b: &[u64]) -> u64 {
        let r = self.rank();
        let n = self.modulus as u128;
        let mut acc: u128 = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            let row = &self.gram[i * r..(i + 1) * r];
            let mut inner: u128 = 0;
            for j in 0..r {
                inner += row[j] as u128 * b[j] as u128;
            }
            acc = (acc + (inner % n) * a[i] as u128) % n;
        }
        acc as u64
    }

    /// Pairing by index.
    pub fn pair(&self, a: usize, b: usize) -> u64 {
        self.pair_coords(&self.decode(a), &self.decode(b))
    }

    /// Values `e(m, g_j)` against all generators.
    pub fn pairing_row(&self, a: &[u64]) -> Vec<u64> {
        let r = self.rank();
        (0..r)
            .map(|j| {
                (0..r).fold(0u64, |acc, i| {
                    (acc + mul_mod(a[i], self.gram[i * r + j], self.modulus)) % self.modulus
                })
            })
            .collect()
    }

    /// Order of an element.
    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(1, |acc, (&x, &m)| lcm(acc, additive_order(x, m)))
    }

    /// Check nondegeneracy; on failure name a nonzero radical element.
    pub fn validate_nondegenerate(&self) -> Result<()> {
        self.ensure_enumerable()?;
        let found = crate::par::find_first(self.size, |idx| {
            if idx == 0 {
                return None;
            }
            let c = self.decode(idx);
            self.pairing_row(&c).iter().all(|&v| v == 0).then_some(c)
        });
        match found {
            Some((_, c)) => Err(Error::Degenerate(ModElement::new(c).to_string())),
            None => Ok(()),
        }
    }

    /// Serialize as a header line followed by the Gram table in matrix text format.
    ///
    /// Standard modules use `type d1,...,dg`; others `orders m1,...,mr`.
    pub fn to_text(&self) -> String {
        let header = match &self.standard_type {
            Some(t) => format!("type {t}"),
            None => {
                let o: Vec<String> = self.orders.iter().map(u64::to_string).collect();
                format!("orders {}", o.join(","))
            }
        };
        let r = self.rank();
        let gram = ResMatrix::from_vec(r, r, self.modulus, self.gram.clone()).expect("square");
        format!("{header}\n{}", gram.to_text())
    }

    /// Parse the format written by [`SymplecticModule::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Input("empty module text".into()))?;
        let rest: Vec<&str> = lines.collect();
        let gram = ResMatrix::from_text(&rest.join("\n"))?;
        if gram.rows() != gram.cols() {
            return Err(Error::Input("Gram table must be square".into()));
        }
        let (kind, value) = header
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Input(format!("bad module header {header:?}")))?;
        match kind {
            "type" => {
                let t: TypeD = value.parse()?;
                let std = SymplecticModule::standard(&t);
                if std.rank() != gram.rows() || std.modulus != gram.modulus() || std.gram != gram.data() {
                    return Err(Error::Validation("Gram table does not match the declared type".into()));
                }
                Ok(std)
            }
            "orders" => {
                let orders: Vec<u64> = value
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Input(format!("bad order {t:?}"))))
                    .collect::<Result<_>>()?;
                if orders.len() != gram.rows() {
                    return Err(Error::Input("number of orders does not match the Gram table".into()));
                }
                SymplecticModule::new(orders, gram.modulus(), gram.data().to_vec())
            }
            other => Err(Error::Input(format!("unknown module header {other:?}"))),
        }
    }
}

impl PartialEq for SymplecticModule {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders && self.modulus == other.modulus && self.gram == other.gram
    }
}

impl Eq for SymplecticModule {}

impl fmt::Debug for SymplecticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticModule(orders {:?}, mod {}, gram {:?})", self.orders, self.modulus, self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1f1(d: &[u64]) -> u64 {
        let t = TypeD::new(d).unwrap();
        let m = SymplecticModule::standard(&t);
        let g = t.g();
        m.pair(m.generator(0), m.generator(g))
    }

    #[test]
    fn standard_pairing_values() {
        // D=(2): n=4, e(e1,f1) = n/d = 2.
        assert_eq!(e1f1(&[2]), 2);
        // D=(3): n=3, e(e1,f1) = 1.
        assert_eq!(e1f1(&[3]), 1);
    }

    #[test]
    fn standard_is_isotropic_on_both_halves() {
        let t = TypeD::new(&[2, 4]).unwrap();
        let m = SymplecticModule::standard(&t);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.pair(m.generator(i), m.generator(j)), 0);
                assert_eq!(m.pair(m.generator(2 + i), m.generator(2 + j)), 0);
            }
        }
        m.validate_nondegenerate().unwrap();
    }

    #[test]
    fn formula_matches_gram_evaluation() {
        let t = TypeD::new(&[2, 6]).unwrap();
        let m = SymplecticModule::standard(&t);
        let n = t.n();
        for a in 0..m.size() {
            for b in (0..m.size()).step_by(7) {
                let (x, y) = (m.decode(a), m.decode(b));
                let mut expect: i128 = 0;
                for i in 0..2 {
                    let w = (n / t.divisors()[i]) as i128;
                    expect += w * (y[2 + i] as i128 * x[i] as i128 - x[2 + i] as i128 * y[i] as i128);
                }
                assert_eq!(m.pair(a, b) as i128, expect.rem_euclid(n as i128));
            }
        }
    }

    #[test]
    fn encoding_is_lexicographic() {
        let m = SymplecticModule::standard(&TypeD::new(&[2, 4]).unwrap());
        let mut prev = m.decode(0);
        for i in 1..m.size() {
            let c = m.decode(i);
            assert!(c > prev);
            assert_eq!(m.encode(&c), i);
            prev = c;
        }
    }

    #[test]
    fn degenerate_and_non_alternating_inputs() {
        let zero = SymplecticModule::new(vec![2, 2], 4, vec![0; 4]).unwrap();
        assert!(matches!(zero.validate_nondegenerate(), Err(Error::Degenerate(_))));
        assert!(matches!(SymplecticModule::new(vec![2, 2], 4, vec![2, 0, 0, 0]), Err(Error::Validation(_))));
    }

    #[test]
    fn text_round_trip() {
        let m = SymplecticModule::standard(&TypeD::new(&[2, 4]).unwrap());
        assert!(m.to_text().starts_with("type 2,4\n4 4 8\n"));
        assert_eq!(SymplecticModule::from_text(&m.to_text()).unwrap(), m);
        let raw = SymplecticModule::new(vec![2, 2], 4, vec![0, 2, 2, 0]).unwrap();
        assert_eq!(SymplecticModule::from_text(&raw.to_text()).unwrap(), raw);
    }
}
