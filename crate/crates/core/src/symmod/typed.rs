use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An elementary-divisor sequence `d_1 | d_2 | ... | d_g`.
///
/// Entries equal to 1 are dropped on construction (they contribute nothing
/// to `M_D`); the length as originally declared is kept in
/// [`TypeD::declared_len`] for dimension bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeD {
    divisors: Vec<u64>,
    declared_len: usize,
}

impl TypeD {
    /// Validate the divisibility chain and normalize away leading ones.
    pub fn new(divisors: &[u64]) -> Result<Self> {
        if divisors.contains(&0) {
            return Err(Error::Input("divisors must be positive".into()));
        }
        for w in divisors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Validation(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        let kept: Vec<u64> = divisors.iter().copied().filter(|&d| d > 1).collect();
        if crate::arith::checked_product(&kept).is_none() {
            return Err(Error::Overflow("order of the type".into()));
        }
        Ok(TypeD { divisors: kept, declared_len: divisors.len() })
    }

    /// The divisors `d_i >= 2`.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Number of divisors after dropping ones.
    pub fn g(&self) -> usize {
        self.divisors.len()
    }

    /// Length as declared, counting entries equal to one.
    pub fn declared_len(&self) -> usize {
        self.declared_len
    }

    /// `#D = d_1 ... d_g`.
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    /// Largest divisor (1 for the empty type).
    pub fn exponent(&self) -> u64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    /// Scalar modulus: `d_g` when odd, `2 d_g` when even.
    pub fn n(&self) -> u64 {
        scalar_modulus(self.exponent())
    }

    /// Whether all divisors are equal to a single prime.
    pub fn homogeneous_prime(&self) -> Option<u64> {
        let d = *self.divisors.first()?;
        (crate::arith::is_prime(d) && self.divisors.iter().all(|&x| x == d)).then_some(d)
    }

    /// Type `(d, ..., d)` of length `g`.
    pub fn homogeneous(d: u64, g: usize) -> Result<Self> {
        Self::new(&vec![d; g])
    }
}

/// The scalar modulus attached to a group of exponent `e`.
pub fn scalar_modulus(e: u64) -> u64 {
    if e.is_multiple_of(2) {
        2 * e
    } else {
        e
    }
}

impl fmt::Display for TypeD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.divisors.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for TypeD {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return TypeD::new(&[]);
        }
        let ds: Vec<u64> = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Input(format!("bad divisor {t:?}"))))
            .collect::<Result<_>>()?;
        TypeD::new(&ds)
    }
}

/// All types with `#D <= bound` (excluding the empty type), in a fixed order.
pub fn types_up_to(bound: u64) -> Vec<TypeD> {
    fn extend(prefix: &mut Vec<u64>, prod: u64, bound: u64, out: &mut Vec<TypeD>) {
        let last = prefix.last().copied();
        let mut d = last.unwrap_or(2);
        while prod * d <= bound {
            if last.is_none_or(|l| d % l == 0) {
                prefix.push(d);
                out.push(TypeD::new(prefix).expect("valid chain"));
                extend(prefix, prod * d, bound, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_modulus_rule() {
        assert_eq!(TypeD::new(&[2]).unwrap().n(), 4);
        assert_eq!(TypeD::new(&[3]).unwrap().n(), 3);
        assert_eq!(TypeD::new(&[2, 6]).unwrap().n(), 12);
        assert_eq!(TypeD::new(&[3, 3]).unwrap().n(), 3);
    }

    #[test]
    fn ones_are_normalized() {
        let t = TypeD::new(&[1, 2]).unwrap();
        assert_eq!(t.divisors(), &[2]);
        assert_eq!(t.declared_len(), 2);
        assert_eq!(t.to_string(), "2");
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(TypeD::new(&[2, 3]).is_err());
        assert!("2,x".parse::<TypeD>().is_err());
        assert_eq!("2,2,2".parse::<TypeD>().unwrap().to_string(), "2,2,2");
    }

    #[test]
    fn enumeration_of_small_types() {
        let ts = types_up_to(8);
        let names: Vec<String> = ts.iter().map(ToString::to_string).collect();
        for expected in ["2", "3", "4", "2,2", "2,4", "2,2,2", "8", "7"] {
            assert!(names.contains(&expected.to_string()), "{expected}");
        }
        assert!(ts.iter().all(|t| t.order() <= 8));
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
    }
}
