use std::collections::BTreeMap;

use rand::Rng;

use crate::arith::{additive_order, factorize, gcd, inv_mod, lcm, mul_mod, valuation};
use crate::error::{Error, Result};

use super::{ModElement, SymplecticModule, TypeD};

/// Result of [`classify`]: the type and a symplectic basis.
///
/// The basis satisfies `e(e_i, f_i) = N/d_i` in `Z/N` (the standard value
/// `n/d_i` read through the canonical identification of `d_g`-th roots),
/// with all other pairings between basis vectors zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub type_d: TypeD,
    pub e: Vec<ModElement>,
    pub f: Vec<ModElement>,
}

impl Classification {
    /// Image in `M` of an element of the standard module `M_D`, given by its
    /// standard coordinates `(x_1..x_g, chi_1..chi_g)`.
    pub fn from_standard(&self, m: &SymplecticModule, std_coords: &[u64]) -> Vec<u64> {
        let g = self.type_d.g();
        let mut acc = vec![0u64; m.rank()];
        for i in 0..g {
            acc = m.add_coords(&acc, &m.scale_coords(std_coords[i], &self.e[i].coords));
            acc = m.add_coords(&acc, &m.scale_coords(std_coords[g + i], &self.f[i].coords));
        }
        acc
    }

    /// Standard coordinates of an element of `M`, read off from the pairing.
    pub fn to_standard(&self, m: &SymplecticModule, coords: &[u64]) -> Vec<u64> {
        let g = self.type_d.g();
        let big_n = m.modulus();
        let mut out = vec![0u64; 2 * g];
        for (i, &d) in self.type_d.divisors().iter().enumerate() {
            let unit = big_n / d;
            out[i] = m.pair_coords(coords, &self.f[i].coords) / unit;
            out[g + i] = m.pair_coords(&self.e[i].coords, coords) / unit;
        }
        out
    }

    /// Check the basis Gram values exactly.
    pub fn verify(&self, m: &SymplecticModule) -> bool {
        let g = self.type_d.g();
        let big_n = m.modulus();
        for i in 0..g {
            for j in 0..g {
                let want = if i == j { big_n / self.type_d.divisors()[i] } else { 0 };
                if m.pair_coords(&self.e[i].coords, &self.f[j].coords) != want
                    || m.pair_coords(&self.e[i].coords, &self.e[j].coords) != 0
                    || m.pair_coords(&self.f[i].coords, &self.f[j].coords) != 0
                {
                    return false;
                }
            }
        }
        let orders_ok = (0..g).all(|i| {
            let d = self.type_d.divisors()[i];
            m.element_order(&self.e[i].coords) == d && m.element_order(&self.f[i].coords) == d
        });
        orders_ok && (self.type_d.order() as u128).pow(2) == m.size() as u128
    }
}

fn value_order(v: u64, n: u64) -> u64 {
    additive_order(v, n)
}

/// Classify a nondegenerate alternating module.
///
/// Repeatedly takes the lexicographically first element `m` of maximal
/// order `o`, the lexicographically first `m'` with `e(m, m')` of order
/// `o`, rescales `m'` so that `e(m, m') = N/o`, and recurses on the
/// orthogonal complement of the plane they span.
pub fn classify(module: &SymplecticModule) -> Result<Classification> {
    module.ensure_enumerable()?;
    module.validate_nondegenerate()?;
    let big_n = module.modulus();
    let mut current: Vec<usize> = (0..module.size()).collect();
    let mut planes: Vec<(u64, Vec<u64>, Vec<u64>)> = Vec::new();
    while current.len() > 1 {
        let coords: Vec<Vec<u64>> = crate::par::map_slice(&current, |&i| module.decode(i));
        let ords: Vec<u64> = coords.iter().map(|c| module.element_order(c)).collect();
        let o = *ords.iter().max().expect("nonempty");
        let pos = ords.iter().position(|&x| x == o).expect("max exists");
        let m = coords[pos].clone();
        let Some((_, (mp, v))) = crate::par::find_first(coords.len(), |k| {
            let v = module.pair_coords(&m, &coords[k]);
            (value_order(v, big_n) == o).then(|| (coords[k].clone(), v))
        }) else {
            return Err(Error::Degenerate(format!(
                "no partner of full order for {}",
                ModElement::new(m)
            )));
        };
        let u = (v / (big_n / o)) % o;
        let uinv = inv_mod(u, o).expect("value of exact order has unit part");
        let mp = module.scale_coords(uinv, &mp);
        debug_assert_eq!(module.pair_coords(&m, &mp), big_n / o);
        let keep: Vec<bool> = crate::par::map_range(coords.len(), |k| {
            module.pair_coords(&coords[k], &m) == 0 && module.pair_coords(&coords[k], &mp) == 0
        });
        current = current.iter().zip(keep).filter_map(|(&i, k)| k.then_some(i)).collect();
        planes.push((o, m, mp));
    }
    planes.reverse();
    let divisors: Vec<u64> = planes.iter().map(|p| p.0).collect();
    let type_d = TypeD::new(&divisors)?;
    let (e, f) = planes.into_iter().map(|(_, a, b)| (ModElement::new(a), ModElement::new(b))).unzip();
    let c = Classification { type_d, e, f };
    if !c.verify(module) {
        return Err(Error::Soundness("classified basis failed verification".into()));
    }
    Ok(c)
}

/// Orthogonal direct sum; both Gram tables are rescaled to the lcm of the moduli.
pub fn direct_sum(a: &SymplecticModule, b: &SymplecticModule) -> SymplecticModule {
    if b.rank() == 0 {
        return a.clone();
    }
    if a.rank() == 0 {
        return b.clone();
    }
    let big_n = lcm(a.modulus(), b.modulus());
    let (ra, rb) = (a.rank(), b.rank());
    let r = ra + rb;
    let mut gram = vec![0u64; r * r];
    let (sa, sb) = (big_n / a.modulus(), big_n / b.modulus());
    for i in 0..ra {
        for j in 0..ra {
            gram[i * r + j] = a.gram_entry(i, j) * sa;
        }
    }
    for i in 0..rb {
        for j in 0..rb {
            gram[(ra + i) * r + ra + j] = b.gram_entry(i, j) * sb;
        }
    }
    let mut orders = a.orders().to_vec();
    orders.extend_from_slice(b.orders());
    SymplecticModule::new(orders, big_n, gram).expect("orthogonal sum of valid modules")
}

/// The `p`-primary part of a module with its embedding into the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePart {
    pub module: SymplecticModule,
    /// Parent generator index of each generator of the part.
    pub parent_generator: Vec<usize>,
    /// Multiplier: part generator `k` is `scale[k]` times parent generator `parent_generator[k]`.
    pub scale: Vec<u64>,
}

impl PrimePart {
    /// Parent coordinates of an element of the part.
    pub fn embed(&self, parent: &SymplecticModule, coords: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; parent.rank()];
        for (k, &c) in coords.iter().enumerate() {
            let i = self.parent_generator[k];
            out[i] = (out[i] + c * self.scale[k]) % parent.orders()[i];
        }
        out
    }
}

/// Decompose a module into its primary parts, keyed by prime.
pub fn prime_parts(module: &SymplecticModule) -> BTreeMap<u64, PrimePart> {
    let mut out = BTreeMap::new();
    let big_n = module.modulus();
    for (p, _) in factorize(module.exponent()) {
        let mut parent_generator = Vec::new();
        let mut scale = Vec::new();
        let mut orders = Vec::new();
        for (i, &m) in module.orders().iter().enumerate() {
            let pv = p.pow(valuation(m, p));
            if pv > 1 {
                parent_generator.push(i);
                scale.push(m / pv);
                orders.push(pv);
            }
        }
        let np = p.pow(valuation(big_n, p));
        let unit = big_n / np;
        let r = orders.len();
        let mut gram = vec![0u64; r * r];
        for a in 0..r {
            for b in 0..r {
                let v = mul_mod(
                    mul_mod(module.gram_entry(parent_generator[a], parent_generator[b]), scale[a], big_n),
                    scale[b],
                    big_n,
                );
                debug_assert_eq!(v % unit, 0);
                gram[a * r + b] = v / unit;
            }
        }
        let part = SymplecticModule::new(orders, np, gram).expect("restriction of a valid module");
        out.insert(p, PrimePart { module: part, parent_generator, scale });
    }
    out
}

/// Re-present a module on new generators given by their coordinates.
///
/// The new generators must form a basis: the orders of the images multiply
/// to `|M|` and the images generate `M`.
pub fn change_basis(module: &SymplecticModule, gens: &[Vec<u64>]) -> Result<SymplecticModule> {
    module.ensure_enumerable()?;
    let orders: Vec<u64> = gens.iter().map(|g| module.element_order(g)).collect();
    let prod = orders.iter().try_fold(1usize, |a, &b| a.checked_mul(b as usize));
    if prod != Some(module.size()) {
        return Err(Error::Validation("generator orders do not multiply to the group order".into()));
    }
    let probe = SymplecticModule::new(orders.clone(), 1, vec![0; orders.len() * orders.len()])?;
    let mut seen = vec![false; module.size()];
    for idx in 0..probe.size() {
        let c = probe.decode(idx);
        let mut acc = vec![0u64; module.rank()];
        for (k, g) in gens.iter().enumerate() {
            acc = module.add_coords(&acc, &module.scale_coords(c[k], g));
        }
        let j = module.encode(&acc);
        if seen[j] {
            return Err(Error::Validation("generators are not independent".into()));
        }
        seen[j] = true;
    }
    let r = gens.len();
    let mut gram = vec![0u64; r * r];
    for a in 0..r {
        for b in 0..r {
            gram[a * r + b] = module.pair_coords(&gens[a], &gens[b]);
        }
    }
    SymplecticModule::new(orders, module.modulus(), gram)
}

/// A random basis change: generator permutation, unit rescalings and
/// elementary moves `g_i += k g_j` that keep the presentation valid.
///
/// Errors: `Capacity` if the module is too large to enumerate.
pub fn scramble<R: Rng + ?Sized>(module: &SymplecticModule, rng: &mut R, steps: usize) -> Result<SymplecticModule> {
    let r = module.rank();
    if r == 0 {
        return Ok(module.clone());
    }
    module.ensure_enumerable()?;
    let orders = module.orders();
    let mut gens: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1 % orders[i];
            v
        })
        .collect();
    let ord = |g: &Vec<u64>| module.element_order(g);
    for _ in 0..steps {
        match rng.random_range(0..3) {
            0 => {
                let (i, j) = (rng.random_range(0..r), rng.random_range(0..r));
                gens.swap(i, j);
            }
            1 => {
                let i = rng.random_range(0..r);
                let o = ord(&gens[i]);
                if o > 1 {
                    let u = loop {
                        let u = rng.random_range(1..o.max(2));
                        if gcd(u, o) == 1 {
                            break u;
                        }
                    };
                    gens[i] = module.scale_coords(u, &gens[i]);
                }
            }
            _ => {
                let (i, j) = (rng.random_range(0..r), rng.random_range(0..r));
                if i == j {
                    continue;
                }
                let (oi, oj) = (ord(&gens[i]), ord(&gens[j]));
                let k = rng.random_range(0..oj.max(1));
                let add = module.scale_coords(k, &gens[j]);
                if oi % ord(&add) == 0 {
                    gens[i] = module.add_coords(&gens[i], &add);
                }
            }
        }
    }
    change_basis(module, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(d: &[u64]) -> TypeD {
        TypeD::new(d).unwrap()
    }

    #[test]
    fn standard_classifies_to_itself() {
        for d in [&[2][..], &[3], &[2, 2], &[2, 4], &[3, 3], &[2, 6]] {
            let m = SymplecticModule::standard(&t(d));
            assert_eq!(classify(&m).unwrap().type_d, t(d));
        }
    }

    #[test]
    fn sum_of_two_and_three_is_six() {
        let s = direct_sum(&SymplecticModule::standard(&t(&[2])), &SymplecticModule::standard(&t(&[3])));
        assert_eq!(classify(&s).unwrap().type_d, t(&[6]));
        let s = direct_sum(&SymplecticModule::standard(&t(&[2])), &SymplecticModule::standard(&t(&[2])));
        assert_eq!(classify(&s).unwrap().type_d, t(&[2, 2]));
    }

    #[test]
    fn zero_summand_is_neutral() {
        let m = SymplecticModule::standard(&t(&[2, 4]));
        assert_eq!(direct_sum(&m, &SymplecticModule::zero()), m);
    }

    #[test]
    fn prime_parts_examples() {
        let parts = prime_parts(&SymplecticModule::standard(&t(&[6])));
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(classify(&parts[&2].module).unwrap().type_d, t(&[2]));
        assert_eq!(classify(&parts[&3].module).unwrap().type_d, t(&[3]));
        let parts = prime_parts(&SymplecticModule::standard(&t(&[12])));
        assert_eq!(classify(&parts[&2].module).unwrap().type_d, t(&[4]));
        assert_eq!(classify(&parts[&3].module).unwrap().type_d, t(&[3]));
        let parts = prime_parts(&SymplecticModule::standard(&t(&[2, 2])));
        assert_eq!(parts.len(), 1);
    }

    #[test]
    fn scrambled_modules_classify_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = SymplecticModule::standard(&t(&[2, 4]));
        for _ in 0..10 {
            let s = scramble(&m, &mut rng, 30).unwrap();
            let c = classify(&s).unwrap();
            assert_eq!(c.type_d, t(&[2, 4]));
            for idx in 0..s.size() {
                let x = s.decode(idx);
                assert_eq!(c.from_standard(&s, &c.to_standard(&s, &x)), x);
            }
        }
    }

    #[test]
    fn degenerate_input_names_radical() {
        let m = SymplecticModule::new(vec![2, 2, 2], 2, vec![0, 1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        match classify(&m) {
            Err(Error::Degenerate(msg)) => assert_eq!(msg, "(0,0,1)"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
