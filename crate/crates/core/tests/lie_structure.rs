use proptest::prelude::*;
use qsplit::forms::{form, CATALOG};
use qsplit::lie::{is_nilpotent, is_semisimple, jordan_decomposition};
use qsplit::{Matrix, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coords(dim: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-3i64..=3).prop_map(Scalar::int), dim)
}

#[test]
fn catalog_algebras_build() {
    // closure and independence are checked on construction
    for name in CATALOG {
        let f = form(name).unwrap();
        assert!(f.g.is_semisimple_algebra(), "{name}");
    }
}

#[test]
fn jordan_parts_stay_in_m() {
    for name in CATALOG {
        let f = form(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut samples: Vec<Matrix> = (0..50).map(|_| f.random_m(&mut rng, 2)).collect();
        if let Ok(t) = f.principal_triple() {
            samples.push(t.e.clone());
            samples.push(&t.e + &f.dec.a.basis()[0]);
        }
        for x in samples {
            let (s, n) = jordan_decomposition(&x);
            assert_eq!(&s + &n, x);
            assert!(s.bracket(&n).is_zero());
            assert!(is_semisimple(&s) && is_nilpotent(&n));
            assert!(f.in_m(&s) && f.in_m(&n), "{name}: {x}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn killing_is_ad_invariant(k in 0usize..CATALOG.len(), a in coords(15), b in coords(15), c in coords(15)) {
        let f = form(CATALOG[k]).unwrap();
        let d = f.g.dim();
        let (x, y, z) = (f.g.element(&a[..d]), f.g.element(&b[..d]), f.g.element(&c[..d]));
        prop_assert_eq!(f.g.killing(&x.bracket(&y), &z), f.g.killing(&x, &y.bracket(&z)));
    }

    #[test]
    fn grading_brackets(k in 0usize..CATALOG.len(), seed in any::<u64>()) {
        let f = form(CATALOG[k]).unwrap();
        let d = &f.dec;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = f.random_m(&mut rng, 2);
        let y = f.random_m(&mut rng, 2);
        let h = &d.h.basis()[seed as usize % d.h.dim().max(1)];
        prop_assert!(d.h.contains(&x.bracket(&y)));
        prop_assert!(d.m.contains(&h.bracket(&x)));
        prop_assert_eq!(d.h.dim() + d.m.dim(), f.g.dim());
    }
}
