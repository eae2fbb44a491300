use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::symmod::SymplecticModule;

/// A quadratic refinement `q: M -> Z/2` of the pairing of a 2-torsion
/// module: `q(x+y) + q(x) + q(y) = e(x,y)` read in `Z/2`, and `q(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticRefinement {
    /// Values by element index.
    pub q: Vec<u8>,
}

fn two_torsion_form(module: &SymplecticModule) -> Result<impl Fn(usize, usize) -> u8 + '_> {
    if module.orders().iter().any(|&o| o != 2) {
        return Err(Error::Unsupported("quadratic refinements need a module of type (2,...,2)".into()));
    }
    let half = module.modulus() / 2;
    Ok(move |a: usize, b: usize| (module.pair(a, b) / half) as u8)
}

/// Whether `q` satisfies the defining identity on every pair.
pub fn is_refinement(module: &SymplecticModule, q: &[u8]) -> Result<bool> {
    let form = two_torsion_form(module)?;
    let size = module.size();
    Ok(q.len() == size
        && q[0] == 0
        && (0..size).all(|a| (0..size).all(|b| (q[module.add(a, b)] ^ q[a] ^ q[b]) == form(a, b))))
}

/// All refinements by brute force over the `2^{|M|-1}` tables with `q(0) = 0`.
pub fn quadratic_refinements(module: &SymplecticModule) -> Result<Vec<QuadraticRefinement>> {
    let _ = two_torsion_form(module)?;
    let size = module.size();
    if size > 16 {
        return Err(Error::Capacity("brute-force refinement search is limited to |M| <= 16".into()));
    }
    let candidates = 1usize << (size - 1);
    let found = crate::par::map_range(candidates, |code| {
        let mut q = vec![0u8; size];
        for (i, v) in q.iter_mut().enumerate().skip(1) {
            *v = ((code >> (i - 1)) & 1) as u8;
        }
        is_refinement(module, &q).expect("checked type").then_some(q)
    });
    Ok(found.into_iter().flatten().map(|q| QuadraticRefinement { q }).collect())
}

/// The translate `x -> q(x) + e(m, x)`.
pub fn translate(module: &SymplecticModule, q: &QuadraticRefinement, m: usize) -> Result<QuadraticRefinement> {
    let form = two_torsion_form(module)?;
    Ok(QuadraticRefinement { q: (0..module.size()).map(|x| q.q[x] ^ form(m, x)).collect() })
}

/// Whether the refinements form one orbit under translation.
pub fn single_translation_orbit(module: &SymplecticModule, qs: &[QuadraticRefinement]) -> Result<bool> {
    let Some(first) = qs.first() else { return Ok(false) };
    let orbit: BTreeSet<QuadraticRefinement> =
        (0..module.size()).map(|m| translate(module, first, m)).collect::<Result<_>>()?;
    let all: BTreeSet<QuadraticRefinement> = qs.iter().cloned().collect();
    Ok(orbit == all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmod::TypeD;

    #[test]
    fn counts() {
        for (g, count) in [(1usize, 4usize), (2, 16)] {
            let m = SymplecticModule::standard(&TypeD::homogeneous(2, g).unwrap());
            let qs = quadratic_refinements(&m).unwrap();
            assert_eq!(qs.len(), count);
            assert!(single_translation_orbit(&m, &qs).unwrap());
            let t = translate(&m, &qs[0], 1).unwrap();
            assert!(is_refinement(&m, &t.q).unwrap());
        }
    }
}
