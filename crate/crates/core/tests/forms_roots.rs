use std::collections::BTreeSet;

use qsplit::forms::{form, Subgroup, CATALOG, DEFAULT_SEED};
use qsplit::report::expected;
use qsplit::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QUASI_SPLIT: [&str; 7] = ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"];

#[test]
fn quasi_split_classification() {
    for name in CATALOG {
        let f = form(name).unwrap();
        let rep = f.is_quasi_split(DEFAULT_SEED);
        assert_eq!(rep.quasi_split, QUASI_SPLIT.contains(&name), "{name}");
        assert_eq!(f.quasi_split(), rep.quasi_split);
        if let Some((p, q)) = rep.witness {
            assert!(!p.bracket(&q).is_zero());
            assert!(f.g.centralizer(f.dec.a.basis()).contains(&p));
        }
    }
    assert!(form("su13").unwrap().is_quasi_split(DEFAULT_SEED).witness.is_some());
}

#[test]
fn isotropy_action_respects_the_grading() {
    for name in CATALOG {
        let f = form(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for h in f.sample_group_elements(Subgroup::H, 6, DEFAULT_SEED) {
            let x = f.random_m(&mut rng, 2);
            let y = f.random_m(&mut rng, 2);
            let (hx, hy) = (f.isotropy_act(&h, &x).unwrap(), f.isotropy_act(&h, &y).unwrap());
            assert!(f.in_m(&hx), "{name}");
            let conj = &(&h * &x.bracket(&y)) * &h.inverse().unwrap();
            assert_eq!(conj, hx.bracket(&hy));
            assert!(f.dec.h.contains(&hx.bracket(&hy)));
        }
    }
}

#[test]
fn invariants_constant_on_h_orbits() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let cd = f.chevalley().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let hs = f.sample_group_elements(Subgroup::H, 20, DEFAULT_SEED);
        for h in &hs {
            let x = f.random_m(&mut rng, 3);
            if !f.is_regular(&x) {
                continue;
            }
            assert_eq!(cd.chi(&f.isotropy_act(h, &x).unwrap()), cd.chi(&x), "{name}");
        }
    }
}

#[test]
fn root_spaces_fill_the_algebra() {
    for name in CATALOG {
        let f = form(name).unwrap();
        let rd = f.roots().unwrap();
        assert_eq!(rd.roots.len() + f.rank(), f.g.dim(), "{name}");
        for r in &rd.roots {
            assert!(f.g.contains(&r.vector));
        }
        let e = expected(name).unwrap();
        assert_eq!(rd.weyl_order(), e.weyl_order, "{name}");
        assert_eq!(f.restricted().unwrap().weyl_order(), e.restricted_weyl_order, "{name}");
    }
}

#[test]
fn restricted_multiplicities_are_weyl_invariant() {
    for name in CATALOG {
        assert!(form(name).unwrap().restricted().unwrap().multiplicities_invariant(), "{name}");
    }
}

#[test]
fn anisotropic_positive_system_restricts_to_a_positive_system() {
    for name in QUASI_SPLIT {
        let f = form(name).unwrap();
        let rd = f.roots().unwrap();
        let rr = f.restricted().unwrap();
        let a = f.real_rank();
        let pos = rd.anisotropic_order().unwrap();
        let restricted: BTreeSet<Vec<Scalar>> =
            pos.iter().map(|&i| rd.roots[i].coeffs[..a].to_vec()).filter(|c| c.iter().any(|x| !num_traits::Zero::is_zero(x))).collect();
        let all: BTreeSet<Vec<Scalar>> = rr.roots.iter().map(|r| r.coeffs.clone()).collect();
        for c in &all {
            let neg: Vec<Scalar> = c.iter().map(|x| -x).collect();
            assert!(restricted.contains(c) != restricted.contains(&neg), "{name}: {c:?}");
        }
    }
    assert!(form("su13").unwrap().roots().unwrap().anisotropic_order().is_err());
}

#[test]
fn split_forms_have_full_restricted_systems() {
    for name in CATALOG {
        let f = form(name).unwrap();
        if !f.spec.split {
            continue;
        }
        let rd = f.roots().unwrap();
        let rr = f.restricted().unwrap();
        assert_eq!(rr.roots.len(), rd.roots.len(), "{name}");
        assert_eq!(rr.weyl_order(), rd.weyl_order(), "{name}");
    }
}
