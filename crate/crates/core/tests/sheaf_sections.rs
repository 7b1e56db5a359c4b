use proptest::prelude::*;
use qsplit::centralizers::{centralizer_fiber, regular_a};
use qsplit::forms::{form, RealForm, Subgroup};
use qsplit::sheaves::{
    check_t_condition_dg, check_t_condition_ngo, check_ttheta_condition, enumerate_sections_finite, extend_by_equivariance,
    fixed_point_bundle_check, involution_theta, theta_on_lattice, FiniteCameralFiber,
};
use qsplit::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUASI_SPLIT: [&str; 7] = ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"];

fn fibers(f: &RealForm, s0: &[Scalar]) -> (FiniteCameralFiber, FiniteCameralFiber) {
    let real = FiniteCameralFiber::real_orbit(f, s0).unwrap();
    let mut t0 = s0.to_vec();
    t0.resize(f.rank(), Scalar::int(0));
    (real, FiniteCameralFiber::orbit(f, &t0).unwrap())
}

fn regular_point(f: &RealForm, seed: u64) -> Vec<Scalar> {
    f.dec.a.coords(&regular_a(f, &mut ChaCha8Rng::seed_from_u64(seed))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sections_extend_uniquely_and_validly(k in 0usize..QUASI_SPLIT.len(), seed in any::<u64>(), at_zero in any::<bool>()) {
        let f = form(QUASI_SPLIT[k]).unwrap();
        let td = f.torus().unwrap();
        let s0 = if at_zero { vec![Scalar::int(0); f.real_rank()] } else { regular_point(f, seed) };
        let (real, full) = fibers(f, &s0);
        let secs = enumerate_sections_finite(f, &real, &td.t_theta).unwrap();
        prop_assert!(!secs.is_empty());
        let mut images = std::collections::BTreeSet::new();
        for s in secs.iter().take(64) {
            prop_assert!(check_ttheta_condition(f, &real, s).unwrap().holds);
            let ext = extend_by_equivariance(f, &real, s, &full).unwrap().expect("valid sections extend");
            prop_assert!(check_t_condition_ngo(f, &full, &ext).unwrap().holds);
            prop_assert!(check_t_condition_dg(f, &full, &ext).unwrap().holds);
            images.insert(ext);
        }
        prop_assert_eq!(images.len(), secs.len().min(64));
    }

    #[test]
    fn involution_is_an_involution(k in 0usize..QUASI_SPLIT.len(), seed in any::<u64>()) {
        let f = form(QUASI_SPLIT[k]).unwrap();
        let td = f.torus().unwrap();
        let (real, _) = fibers(f, &regular_point(f, seed));
        for s in enumerate_sections_finite(f, &real, &td.t_theta).unwrap().iter().take(64) {
            let t = involution_theta(f, &real, s).unwrap();
            prop_assert!(check_ttheta_condition(f, &real, &t).unwrap().holds);
            prop_assert_eq!(&involution_theta(f, &real, &t).unwrap(), s);
            if f.spec.split {
                prop_assert_eq!(&t == s, s.iter().all(|v| v.pow(2).is_identity()));
            }
        }
    }
}

#[test]
fn sl2_counts_match_centralizer_components() {
    let f = form("sl2R").unwrap();
    let td = f.torus().unwrap();
    let free = FiniteCameralFiber::real_orbit(f, &[Scalar::int(2)]).unwrap();
    let ramified = FiniteCameralFiber::real_orbit(f, &[Scalar::int(0)]).unwrap();
    let x = f.dec.a.element(&[Scalar::int(2)]);
    let comps = centralizer_fiber(f, &x, Subgroup::GTheta).unwrap().component_witnesses.len();
    assert_eq!(enumerate_sections_finite(f, &free, &td.t_theta).unwrap().len(), 4);
    assert_eq!(comps, 4);
    assert_eq!(enumerate_sections_finite(f, &ramified, &td.t_theta).unwrap().len(), 1);
}

#[test]
fn violating_value_is_obstructed() {
    let f = form("sl2R").unwrap();
    let td = f.torus().unwrap();
    let zero = FiniteCameralFiber::real_orbit(f, &[Scalar::int(0)]).unwrap();
    let moved = td.t_theta.iter().find(|t| td.weyl_apply(1, t) != **t).unwrap().clone();
    let bad = vec![moved];
    assert!(!check_ttheta_condition(f, &zero, &bad).unwrap().holds);
    let ob = extend_by_equivariance(f, &zero, &bad, &zero).unwrap().unwrap_err();
    assert_eq!(ob.point, 0);
}

#[test]
fn dg_and_ngo_clauses_differ_on_a_constructed_value() {
    let f = form("sl2R").unwrap();
    let td = f.torus().unwrap();
    let rd = f.roots().unwrap();
    let zero = FiniteCameralFiber::orbit(f, &[Scalar::int(0)]).unwrap();
    // the root takes the value i: not -1, not 1
    let quarter = num_rational::BigRational::new(1.into(), 4.into());
    let t = td.torsion_points(8).into_iter().find(|t| td.root_character(f, rd.positive[0], t) == quarter).unwrap();
    let s = vec![t];
    let dg = check_t_condition_dg(f, &zero, &s).unwrap();
    let ngo = check_t_condition_ngo(f, &zero, &s).unwrap();
    assert!(dg.pointwise && !ngo.pointwise);
    // both reject it once equivariance is imposed
    assert!(!dg.equivariant && !ngo.equivariant);
}

#[test]
fn fixed_bundle_degrees() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let th = theta_on_lattice(f).unwrap();
        let r = f.torus().unwrap().lattice.basis().len();
        for k in 0..r {
            let mut d = vec![0i64; r];
            d[k] = 1;
            let v: Vec<Scalar> = d.iter().map(|&x| Scalar::int(x)).collect();
            let c = fixed_point_bundle_check(f, &d).unwrap();
            assert_eq!(c.fixed, th.mul_vec(&v) == v, "{name}");
            if f.spec.split {
                assert!(!c.fixed, "{name}");
            }
        }
        assert!(fixed_point_bundle_check(f, &vec![0; r]).unwrap().fixed);
        assert!(fixed_point_bundle_check(f, &vec![0; r + 1]).is_err());
    }
}
