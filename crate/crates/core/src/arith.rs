//! Small number-theoretic helpers on machine integers.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple; `lcm(0, x) = 0`.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid on signed integers: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Multiplicative inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = egcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(m as i128) as u64)
}

/// `(a * b) mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(a + b) mod m` for reduced inputs.
#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// `(a - b) mod m` for reduced inputs.
#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Whether `p` is prime.
pub fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p) == vec![(p, 1)]
}

/// Exponent of the prime `p` in `m` (for `m > 0`).
pub fn valuation(mut m: u64, p: u64) -> u32 {
    let mut v = 0;
    while m != 0 && m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

/// Multiplicative order of `a` in the additive group `Z/m`, i.e. `m / gcd(a, m)`.
pub fn additive_order(a: u64, m: u64) -> u64 {
    m / gcd(a % m, m)
}

/// A unit `u` modulo `m` with `u * gcd(a, m) = a (mod m)`.
///
/// Every residue is an associate of its gcd with the modulus; the unit is
/// found by lifting `a / gcd` from `Z/(m/gcd)` to a unit of `Z/m`.
pub fn unit_part(a: u64, m: u64) -> u64 {
    let a = a % m;
    let g = gcd(a, m);
    if a == 0 || m == 1 {
        return 1 % m.max(1);
    }
    let base = (a / g) % (m / g);
    let step = m / g;
    let mut c = base;
    loop {
        if gcd(c, m) == 1 {
            return c;
        }
        c += step;
        debug_assert!(c < m * m.max(2));
    }
}

/// Product of the integers in the slice, checked.
pub fn checked_product(xs: &[u64]) -> Option<u64> {
    xs.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(lcm(0, 6), 0);
    }

    #[test]
    fn inverses_exist_exactly_for_units() {
        for m in 2..40u64 {
            for a in 0..m {
                match inv_mod(a, m) {
                    Some(x) => assert_eq!(mul_mod(a, x, m), 1 % m),
                    None => assert_ne!(gcd(a, m), 1),
                }
            }
        }
    }

    #[test]
    fn unit_part_recovers_associate() {
        for m in 2..50u64 {
            for a in 1..m {
                let u = unit_part(a, m);
                assert_eq!(gcd(u, m), 1);
                assert_eq!(mul_mod(u, gcd(a, m), m), a);
            }
        }
    }

    #[test]
    fn factorization_multiplies_back() {
        for m in 1..500u64 {
            let f = factorize(m);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, m);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }
}
