//! Classification round trips, theta group laws checked by brute force
//! against the module pairing, and report serialization.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thetaobs::report::{digest, Record, Report, Verdict};
use thetaobs::suite::{run_criterion, Level, SuiteConfig};
use thetaobs::symmod::{classify, scramble, SymplecticModule, TypeD};
use thetaobs::theta::{check_axioms, ThetaElement, ThetaGroup};

/// Divisor chains `d_1 | d_2 | ...` built from multipliers, with `|M|`
/// at most `2^14` so every module is small enough to enumerate quickly.
fn divisor_chain() -> impl Strategy<Value = Vec<u64>> {
    (2u64..=6, proptest::collection::vec(1u64..=3, 0..3))
        .prop_map(|(first, steps)| {
            let mut d = vec![first];
            for s in steps {
                let next = d.last().unwrap() * s;
                d.push(next);
            }
            d
        })
        .prop_filter("module too large", |d| d.iter().product::<u64>() <= 128)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scrambled_modules_classify_to_their_type(divisors in divisor_chain(), seed in any::<u64>()) {
        let d = TypeD::new(&divisors).unwrap();
        let std = SymplecticModule::standard(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = scramble(&std, &mut rng, 16).unwrap();
        let c = classify(&m).unwrap();
        prop_assert_eq!(&c.type_d, &d);
        prop_assert!(c.verify(&m));
    }

    #[test]
    fn module_text_round_trips(divisors in divisor_chain(), seed in any::<u64>()) {
        let d = TypeD::new(&divisors).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = scramble(&SymplecticModule::standard(&d), &mut rng, 8).unwrap();
        let back = SymplecticModule::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(classify(&back).unwrap().type_d, d);
    }
}

#[test]
fn degenerate_module_is_rejected() {
    let m = SymplecticModule::from_text("orders 2,2\n2 2 2\n0 0\n0 0\n");
    let outcome = m.and_then(|m| m.validate_nondegenerate());
    assert!(outcome.is_err());
}

/// Every element of a small theta group, multiplied out by hand.
fn elements(h: &ThetaGroup) -> Vec<ThetaElement> {
    (0..h.order() as usize).map(|i| h.element(i)).collect()
}

#[test]
fn theta_group_laws_by_enumeration() {
    for divisors in [&[2u64][..], &[3], &[4], &[2, 2], &[2, 4], &[6]] {
        let d = TypeD::new(divisors).unwrap();
        let h = ThetaGroup::standard(&d);
        let all = elements(&h);
        let size_m = (d.order() * d.order()) as u128;
        assert_eq!(h.order(), d.n() as u128 * size_m, "{d}");
        let e = h.identity();
        for a in &all {
            assert_eq!(h.mul(a, &h.inv(a)), e);
            for b in &all {
                let c = h.commutator(a, b);
                assert_eq!(c.m, vec![0; c.m.len()], "commutators are central");
                assert_eq!(c.t, h.module_pairing(&a.m, &b.m), "type {d}");
                for x in all.iter().step_by(7) {
                    assert_eq!(h.mul(&h.mul(a, b), x), h.mul(a, &h.mul(b, x)));
                }
            }
        }
        assert!(check_axioms(&h).unwrap().all_pass(), "{d}");
    }
}

#[test]
fn digest_is_sha256_hex() {
    assert_eq!(digest("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

#[test]
fn suite_report_round_trips_through_json() {
    let cfg = SuiteConfig::new(7, Level::Quick);
    let mut report = Report::new(vec!["verify-all".into(), "--criterion=10".into()], 7, Some("quick".into()));
    report.extend(run_criterion(10, &cfg));
    assert!(report.is_valid());
    assert_eq!(report.schema, "thetaobs-report v1");
    assert_eq!(report.totals.pass + report.totals.fail + report.totals.recorded, report.records.len());
    let json = report.to_json();
    let back = Report::from_json(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), json);
    assert!(report.records.iter().all(|r| r.wall_ms.is_none() && r.digest_matches()));
}

#[test]
fn tampered_witness_is_detected() {
    let mut r = Record::new("x", "anchor", Verdict::Pass, "ok".into(), "witness\n".into());
    assert!(r.digest_matches());
    r.witness.push('!');
    assert!(!r.digest_matches());
    let mut report = Report::new(vec![], 0, None);
    report.push(r);
    assert!(!report.is_valid());
}

#[test]
fn exit_codes_follow_the_worst_failure() {
    let mut report = Report::new(vec![], 0, None);
    report.push(Record::new("a", "", Verdict::Pass, String::new(), String::new()));
    report.push(Record::new("b", "", Verdict::Recorded, String::new(), String::new()));
    assert_eq!(report.exit_code(), 0);
    report.push(Record::new("c", "", Verdict::Fail, String::new(), String::new()));
    assert_eq!(report.exit_code(), 1);
    report.push(Record::from_error("d", "", &thetaobs::Error::Capacity("too big".into())));
    assert_eq!(report.exit_code(), 3);
}
