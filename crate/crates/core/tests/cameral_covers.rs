use qsplit::cameral::{CameralCover, HitchinBasePoint};
use qsplit::forms::form;
use qsplit::report::{off_discriminant, test_bases};
use qsplit::{Scalar, UPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUASI_SPLIT: [&str; 7] = ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"];

fn random_covers(name: &str, count: usize) -> Vec<CameralCover> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    (0..count).map(|_| CameralCover::build(&HitchinBasePoint::random(name, 1, &mut rng).unwrap()).unwrap()).collect()
}

#[test]
fn generic_fibers_have_weyl_many_points() {
    for name in QUASI_SPLIT {
        let w = form(name).unwrap().roots().unwrap().weyl_order();
        for c in random_covers(name, 10) {
            assert_eq!(c.weyl_order, w);
            for x in off_discriminant(&c, 1) {
                let fib = c.fiber_at(&x).unwrap();
                assert_eq!(fib.count, w, "{name} at {x}");
                assert!(!fib.ramified);
                assert_ne!(fib.transitive, Some(false));
            }
        }
    }
}

#[test]
fn fibers_over_discriminant_roots_shrink() {
    for name in QUASI_SPLIT {
        for c in test_bases(form(name).unwrap(), 7).unwrap().iter().map(|b| CameralCover::build(b).unwrap()) {
            let (roots, _) = c.discriminant.squarefree_part().gaussian_roots();
            for (x, _) in roots {
                let fib = c.fiber_at(&x).unwrap();
                assert!(fib.ramified && fib.count < c.weyl_order, "{name} at {x}");
            }
        }
    }
}

#[test]
fn ramification_degrees_match_the_discriminant() {
    for name in QUASI_SPLIT {
        for c in random_covers(name, 3) {
            let d = c.degree_check().unwrap();
            assert!(d.holds, "{name}: {d:?}");
            assert_eq!(d.sum_ramification, d.half_weyl * d.discriminant_degree);
            let n = c.positive_roots;
            assert_eq!(d.projective_discriminant_degree, 2 * n * c.base.line_bundle_degree as usize);
        }
    }
}

#[test]
fn section_reproduces_the_base_point() {
    for name in QUASI_SPLIT {
        for c in random_covers(name, 3) {
            assert!(c.section_reproduces_base().unwrap(), "{name}");
        }
    }
}

#[test]
fn real_subcover_lies_in_the_cover() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let wa = f.restricted().unwrap().weyl_order();
        let split = f.spec.split;
        for base in test_bases(f, 3).unwrap().iter().take(2) {
            let c = CameralCover::build(base).unwrap();
            let sub = c.real_subcover().unwrap();
            assert_eq!(sub.is_whole_cover(), split, "{name}");
            for x in off_discriminant(&c, 1) {
                let sf = sub.fiber_at(&x).unwrap();
                assert!(sf.in_parent, "{name}");
                assert_eq!(sf.count, wa, "{name} at {x}");
                if split {
                    assert_eq!(sf.points, c.fiber_at(&x).unwrap().points, "{name} at {x}");
                }
            }
        }
    }
}

#[test]
fn su22_real_subcover_counts() {
    let f = form("su22").unwrap();
    let base = HitchinBasePoint::along_line("su22", &[Scalar::int(1), Scalar::int(3)], &[Scalar::int(2), Scalar::int(1)]).unwrap();
    let c = CameralCover::build(&base).unwrap();
    let sub = c.real_subcover().unwrap();
    for x in off_discriminant(&c, 4) {
        let sf = sub.fiber_at(&x).unwrap();
        assert_eq!(sf.count, 8);
        assert_eq!(sf.count, f.restricted().unwrap().weyl_order());
        assert_eq!(c.fiber_at(&x).unwrap().count, 24);
    }
}

#[test]
fn sl2_cover_equation() {
    let base = HitchinBasePoint::parse(r#"{"form":"sl2R","ell":1,"sections":[["0","-1","1"]]}"#).unwrap();
    let c = CameralCover::build(&base).unwrap();
    assert_eq!(c.equations(), vec!["-t1^2 = x^2 - x".to_string()]);
    assert_eq!(c.fiber_at(&Scalar::int(0)).unwrap().count, 1);
    assert_eq!(c.fiber_at(&Scalar::int(1)).unwrap().count, 1);
    assert_eq!(c.fiber_at(&Scalar::int(2)).unwrap().count, 2);
    assert_eq!(c.discriminant.degree(), Some(2));
}

#[test]
fn base_point_json() {
    let text = r#"{"form":"sl3R","ell":1,"sections":[["1","0","-2"],[0,1,0,"1/2"]]}"#;
    let b = HitchinBasePoint::parse(text).unwrap();
    assert_eq!(HitchinBasePoint::from_json(&b.to_json()).unwrap().sections, b.sections);
    assert_eq!(b.sections[1], UPoly::new(vec![Scalar::int(0), Scalar::int(1), Scalar::int(0), Scalar::frac(1, 2)]));
    for bad in [
        r#"{"form":"su13","ell":1,"sections":[["1"]]}"#,
        r#"{"form":"sl3R","ell":1,"sections":[["1"]]}"#,
        r#"{"form":"sl2R","ell":1,"sections":[["1","0","0","1"]]}"#,
        r#"{"form":"sl2R","ell":0,"sections":[["1"]]}"#,
        r#"{"form":"sl2R","sections":[["x"]]}"#,
    ] {
        assert!(HitchinBasePoint::parse(bad).is_err(), "{bad}");
    }
}
