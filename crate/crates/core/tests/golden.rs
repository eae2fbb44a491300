//! The `E_7` root list and the images of the simple reflections in
//! `Sp_6(F_2)`, checked against independent constructions and against the
//! committed tables in `tests/golden/`.
//!
//! Set `THETAOBS_BLESS=1` to rewrite the golden files after an intended
//! change of format.

use std::path::PathBuf;

use thetaobs::exceptional::{E7Lattice, WeylE7, E7_CARTAN};
use thetaobs::spgroup::SpMatrix;
use thetaobs::symmod::{SymplecticModule, TypeD};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("THETAOBS_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{} differs from the computed table", path.display());
}

fn norm(x: &[i64]) -> i64 {
    (0..7).map(|i| (0..7).map(|j| x[i] * E7_CARTAN[i][j] * x[j]).sum::<i64>()).sum()
}

/// All vectors of norm 2 with simple-root coordinates in `[-4, 4]` (the
/// highest root has coefficients at most 4), sorted lexicographically.
fn roots_by_enumeration() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![-4i64; 7];
    loop {
        if norm(&x) == 2 {
            out.push(x.clone());
        }
        let Some(i) = (0..7).rev().find(|&i| x[i] < 4) else { break };
        x[i] += 1;
        for v in &mut x[i + 1..] {
            *v = -4;
        }
    }
    out
}

#[test]
fn roots_match_enumeration_and_golden() {
    let lattice = E7Lattice::new();
    let oracle = roots_by_enumeration();
    assert_eq!(oracle.len(), 126);
    assert_eq!(lattice.roots, oracle);
    golden("e7_roots.txt", &lattice.roots_text());
}

#[test]
fn reflection_images_satisfy_coxeter_relations_and_golden() {
    let w = WeylE7::new().unwrap();
    let d = TypeD::homogeneous(2, 3).unwrap();
    let module = SymplecticModule::standard(&d);
    let id = SpMatrix::identity(&d);
    let images = w.reflection_images().unwrap();
    assert_eq!(images.len(), 7);
    for (i, si) in images.iter().enumerate() {
        assert!(si.is_symplectic(&module));
        assert_ne!(si, &id, "s{} maps to the identity", i + 1);
        for (j, sj) in images.iter().enumerate() {
            let m = match E7_CARTAN[i][j] {
                2 => 1,
                0 => 2,
                _ => 3,
            };
            let prod = si.mul(sj);
            let power = (1..m).fold(prod.clone(), |acc, _| acc.mul(&prod));
            assert_eq!(power, id, "(s{} s{})^{m}", i + 1, j + 1);
        }
    }
    golden("e7_reflection_images.txt", &w.reflection_images_text().unwrap());
}
