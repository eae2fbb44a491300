//! Lifting decisions and coboundary verdicts: exhaustive over the subgroups
//! of `SL_2(F_3)` for the odd type, stable under relabeling the group, and
//! consistent with the Sylow restriction where the full solve is feasible.

use thetaobs::cohom::{extension_cocycle, is_coboundary, lifting_decision, nonzero_via_sylow, FiniteGroupTable};
use thetaobs::spgroup::{SpGroup, SpMatrix};
use thetaobs::symmod::TypeD;
use thetaobs::theta::ThetaGroup;

fn full_table(d: &TypeD, generators: &[SpMatrix]) -> FiniteGroupTable {
    FiniteGroupTable::generate(SpMatrix::identity(d), generators).unwrap()
}

#[test]
fn every_subgroup_lifts_for_odd_type() {
    let d = TypeD::new(&[3]).unwrap();
    let h = ThetaGroup::standard(&d);
    let sp = SpGroup::full(&d, 1).unwrap();
    let group = full_table(&d, sp.generators());
    assert_eq!(group.len(), 24);
    let subgroups = group.two_generated_subgroups();
    // SL_2(F_3) has 15 subgroups and each is generated by two elements.
    assert_eq!(subgroups.len(), 15);
    for s in &subgroups {
        let gens: Vec<usize> = s.iter().copied().filter(|&g| g != 0).collect();
        let sub = group.subgroup(&gens).unwrap();
        assert_eq!(sub.len(), s.len());
        let decision = lifting_decision(&h, &sub).unwrap();
        assert!(decision.lifts, "subgroup of order {} does not lift", sub.len());
        assert!(decision.section.is_some());
    }
}

#[test]
fn verdicts_do_not_depend_on_element_order() {
    for g in [1, 2] {
        let d = TypeD::homogeneous(2, g).unwrap();
        let h = ThetaGroup::standard(&d);
        let sp = SpGroup::full(&d, 1).unwrap();
        let mut gens = sp.generators().to_vec();
        let forward = full_table(&d, &gens);
        gens.reverse();
        gens.push(gens[0].mul(&gens[gens.len() - 1]));
        let relabeled = full_table(&d, &gens);
        assert_eq!(forward.len(), relabeled.len());
        assert_ne!(forward.element(1), relabeled.element(1), "relabeling changed nothing for g = {g}");
        let a = is_coboundary(&extension_cocycle(&h, &forward).unwrap()).unwrap();
        let b = is_coboundary(&extension_cocycle(&h, &relabeled).unwrap()).unwrap();
        assert_eq!(a.is_coboundary(), b.is_coboundary(), "g = {g}");
    }
}

#[test]
fn sylow_restriction_agrees_with_full_solve() {
    for g in [1, 2] {
        let d = TypeD::homogeneous(2, g).unwrap();
        let h = ThetaGroup::standard(&d);
        let sp = SpGroup::full(&d, 1).unwrap();
        let full_nonzero = !is_coboundary(&extension_cocycle(&h, &full_table(&d, sp.generators())).unwrap())
            .unwrap()
            .is_coboundary();
        // Restriction to a Sylow 2-subgroup is injective on 2-primary classes.
        assert_eq!(nonzero_via_sylow(g).unwrap(), full_nonzero, "g = {g}");
    }
}
