use proptest::prelude::*;
use qsplit::cameral::{CameralCover, HitchinBasePoint};
use qsplit::chevalley::restriction_check;
use qsplit::forms::{form, RealForm, Subgroup, DEFAULT_SEED};
use qsplit::{Matrix, Scalar, UPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUASI_SPLIT: [&str; 7] = ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"];

fn base_point(a: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-12i64..=12, 1i64..=3).prop_map(|(n, d)| Scalar::frac(n, d)), a)
}

fn weyl_orbit(f: &RealForm, p: &[Scalar]) -> Vec<Vec<Scalar>> {
    f.restricted().unwrap().weyl.iter().map(|w| w.mul_vec(p)).collect()
}

fn chi_on_a(f: &RealForm, p: &[Scalar]) -> Vec<Scalar> {
    f.chevalley().unwrap().chi(&f.dec.a.element(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kr_round_trip(k in 0usize..QUASI_SPLIT.len(), c in base_point(2)) {
        let f = form(QUASI_SPLIT[k]).unwrap();
        let cd = f.chevalley().unwrap();
        let c = &c[..f.real_rank()];
        let x = cd.kr_section(c).unwrap();
        prop_assert!(f.in_m(&x));
        prop_assert!(f.is_regular(&x));
        prop_assert_eq!(cd.chi(&x), c.to_vec());
    }

    #[test]
    fn chi_separates_weyl_orbits(k in 0usize..QUASI_SPLIT.len(), p in base_point(2), q in base_point(2)) {
        let f = form(QUASI_SPLIT[k]).unwrap();
        let (p, q) = (&p[..f.real_rank()], &q[..f.real_rank()]);
        let orbit = weyl_orbit(f, p);
        for w in &orbit {
            prop_assert_eq!(chi_on_a(f, w), chi_on_a(f, p));
        }
        let same_orbit = orbit.iter().any(|w| w.as_slice() == q);
        prop_assert_eq!(chi_on_a(f, p) == chi_on_a(f, q), same_orbit);
    }
}

#[test]
fn chi_constant_on_gtheta_orbits() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let cd = f.chevalley().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for g in f.sample_group_elements(Subgroup::GTheta, 10, DEFAULT_SEED) {
            let x = f.random_m(&mut rng, 3);
            let y = &(&g * &x) * &g.inverse().unwrap();
            assert!(f.in_m(&y));
            assert_eq!(cd.chi(&y), cd.chi(&x), "{name}");
        }
    }
}

#[test]
fn restricted_invariants_span_weyl_invariants() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let cd = f.chevalley().unwrap();
        let rr = f.restricted().unwrap();
        let top = *cd.m_degrees.iter().max().unwrap();
        for row in restriction_check(&cd.m_restricted, &cd.m_degrees, &rr.weyl, f.real_rank(), top) {
            assert_eq!(row.invariant_dim, row.generated_dim, "{name} degree {}", row.degree);
        }
    }
}

#[test]
fn sl2_section_formula() {
    let f = form("sl2R").unwrap();
    let cd = f.chevalley().unwrap();
    for k in -5..=5 {
        let c = Scalar::int(k);
        let want = Matrix::from_rows(vec![vec![Scalar::int(0), -&c], vec![Scalar::int(1), Scalar::int(0)]]);
        assert_eq!(cd.kr_section(&[c]).unwrap(), want);
    }
    assert!(cd.round_trip_symbolic());
}

#[test]
fn semisimple_points_meet_a_through_invariants() {
    // a semisimple x with eigenvalues in Q(i) shares its characteristic polynomial with a point of t
    // lying over chi(x); the constant cameral fiber lists those points
    for name in ["sl2R", "su11", "sl3R", "sp4R"] {
        let f = form(name).unwrap();
        let cd = f.chevalley().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut hits = 0;
        for _ in 0..400 {
            let x = f.random_m(&mut rng, 3);
            if !qsplit::lie::is_semisimple(&x) {
                continue;
            }
            let sections = cd.chi(&x).into_iter().map(|c| UPoly::new(vec![c])).collect();
            let cover = CameralCover::build(&HitchinBasePoint::new(name, 1, sections).unwrap()).unwrap();
            let fib = cover.fiber_at(&Scalar::int(0)).unwrap();
            let Some(points) = fib.points else { continue };
            assert!(points.iter().any(|p| f.dec.t.element(p).charpoly() == x.charpoly()), "{name}: {x}");
            hits += 1;
        }
        assert!(hits > 0, "{name}: no split semisimple samples");
    }
}
