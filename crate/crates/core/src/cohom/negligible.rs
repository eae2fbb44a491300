use crate::error::{Error, Result};
use crate::spgroup::{sylow2, SpGroup, SpMatrix};
use crate::symmod::TypeD;
use crate::theta::ThetaGroup;

use super::{extension_cocycle, is_coboundary, FiniteGroupTable};

/// Largest `g` for which the Sylow restriction is solved directly.
pub const MAX_SYLOW_G: usize = 3;

/// Largest `g` accepted by the negligibility report.
pub const MAX_REPORT_G: usize = 4;

/// The extension class for `D = (2,...,2)` of length `g` is nonzero iff its
/// restriction to a Sylow 2-subgroup is not a coboundary (restriction to a
/// Sylow p-subgroup is injective on p-primary cohomology).
///
/// The cocycle is computed directly on the Sylow subgroup; since lifts are a
/// deterministic function of the matrix, this is the restriction of the
/// cocycle on the full group.
pub fn nonzero_via_sylow(g: usize) -> Result<bool> {
    if g == 0 || g > MAX_SYLOW_G {
        return Err(Error::Capacity(format!("Sylow restriction is solved for 1 <= g <= {MAX_SYLOW_G}, got {g}")));
    }
    let d = TypeD::new(&vec![2; g])?;
    let syl = sylow2(g, crate::spgroup::DEFAULT_SEED)?;
    let table = FiniteGroupTable::generate(SpMatrix::identity(&d), syl.generators())?;
    let h = ThetaGroup::standard(&d);
    let c = extension_cocycle(&h, &table)?;
    Ok(!is_coboundary(&c)?.is_coboundary())
}

/// One orbit of `Sp(M_D)` on `M_D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub representative: Vec<u64>,
    pub orbit_size: u128,
    pub stabilizer_order: u128,
    pub abelianization_order: u128,
    /// `φ_m` is forced to vanish (`m = 0`, or `G_m^{ab}` trivial).
    pub phi_vanishes: bool,
}

/// How the nonvanishing of the extension class was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nonvanishing {
    /// Decided by the Sylow-restriction solve; `true` means nonzero.
    Computed(bool),
    /// Taken from the literature without recomputation.
    Cited,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegligibilityReport {
    pub g: usize,
    pub rows: Vec<OrbitRow>,
    pub all_phi_vanish: bool,
    pub nonvanishing: Nonvanishing,
    pub verdict: String,
}

pub const VERDICT_NOT_NEGLIGIBLE: &str = "all φ_m vanish; not negligible";

/// Orbit stabilizers and abelianizations for `D = (2,...,2)` of length `g`,
/// combined with the nonvanishing of the extension class into a verdict.
pub fn negligibility_report(g: usize) -> Result<NegligibilityReport> {
    if g == 0 || g > MAX_REPORT_G {
        return Err(Error::Capacity(format!("negligibility report needs 1 <= g <= {MAX_REPORT_G}, got {g}")));
    }
    let d = TypeD::new(&vec![2; g])?;
    let sp = SpGroup::full(&d, crate::spgroup::DEFAULT_SEED)?;
    let module = sp.module().clone();
    let mut rows = Vec::new();
    let mut seen = vec![false; module.size()];
    for rep in 0..module.size() {
        if seen[rep] {
            continue;
        }
        let coords = module.decode(rep);
        let orbit = sp.orbit(&coords);
        for &x in &orbit {
            seen[x as usize] = true;
        }
        let row = if rep == 0 {
            OrbitRow {
                representative: coords,
                orbit_size: 1,
                stabilizer_order: sp.order(),
                abelianization_order: sp.abelianization_order()?,
                phi_vanishes: true,
            }
        } else {
            let stab = sp.stabilizer(&coords);
            let ab = stab.abelianization_order()?;
            OrbitRow {
                representative: coords,
                orbit_size: orbit.len() as u128,
                stabilizer_order: stab.order(),
                abelianization_order: ab,
                phi_vanishes: ab == 1,
            }
        };
        rows.push(row);
    }
    let all_phi_vanish = rows.iter().all(|r| r.phi_vanishes);
    let nonvanishing = if g <= MAX_SYLOW_G { Nonvanishing::Computed(nonzero_via_sylow(g)?) } else { Nonvanishing::Cited };
    let nonzero = !matches!(nonvanishing, Nonvanishing::Computed(false));
    let verdict = match (all_phi_vanish, nonzero) {
        (_, false) => "c_D = 0; negligible".to_string(),
        (true, true) => VERDICT_NOT_NEGLIGIBLE.to_string(),
        (false, true) => "c_D nonzero; some G_m^ab nontrivial; negligibility not concluded".to_string(),
    };
    Ok(NegligibilityReport { g, rows, all_phi_vanish, nonvanishing, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_orbits_with_zero_row_vanishing() {
        let r = negligibility_report(2).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows[0].phi_vanishes);
        assert_eq!(r.rows[0].orbit_size, 1);
        assert_eq!(r.rows[1].orbit_size, 15);
        assert_eq!(r.rows[1].stabilizer_order * 15, 720);
    }

    #[test]
    fn out_of_range_is_capacity_error() {
        assert!(matches!(nonzero_via_sylow(4), Err(Error::Capacity(_))));
        assert!(matches!(negligibility_report(5), Err(Error::Capacity(_))));
    }
}
