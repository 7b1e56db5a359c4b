//! Verification suites and their JSON/text reports.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::batch::{self, Exec};
use crate::cameral::{CameralCover, HitchinBasePoint};
use crate::centralizers as cz;
use crate::chevalley::restriction_check;
use crate::error::{Error, Result};
use crate::forms::{form, RealForm, Subgroup, CATALOG};
use crate::lie::is_nilpotent;
use crate::matrix::Matrix;
use crate::roots::stabilizer_inclusion_test;
use crate::scalar::Scalar;
use crate::sheaves::{self as sh, FiniteCameralFiber};

/// Sample sizes used by the centralizer and Kostant-Rallis checks.
pub const REGULAR_SAMPLES: usize = 50;
pub const SMOOTHNESS_SAMPLES: usize = 25;
pub const KR_SAMPLES: usize = 200;

pub const SUITES: [&str; 7] = ["cartan", "roots", "chevalley", "centralizers", "cameral", "sheaves", "all"];

/// Check ids with the statement each one exercises.
pub const CHECKS: &[(&str, &str)] = &[
    ("cartan.decomposition", "Cartan decomposition g = h + m with a maximal abelian in m"),
    ("cartan.quasi_split", "quasi-split iff the centralizer of a in g is abelian"),
    ("cartan.regular_cross_check", "regular elements of m are regular in g exactly for quasi-split forms"),
    ("cartan.isotropy", "sampled H and G_theta elements preserve m and satisfy their membership tests"),
    ("cartan.principal_triple", "principal normal triple in m"),
    ("roots.count", "root count equals dim g minus rank"),
    ("roots.weyl_order", "order of the Weyl group"),
    ("roots.restricted_weyl_order", "order of the restricted Weyl group"),
    ("roots.multiplicities", "restricted root multiplicities are W(a)-invariant"),
    ("roots.lifts", "every restricted Weyl element lifts to a theta-commuting Weyl element"),
    ("roots.stabilizer_inclusion", "Weyl stabilizers of points of a lie in the theta-commuting subgroup, as tabulated per form"),
    ("chevalley.degrees", "degrees of the invariant generators on m and on g"),
    ("chevalley.restriction", "restricted invariants span the W(a)-invariants in each degree"),
    ("chevalley.invariance", "invariant polynomials are constant on H-orbits"),
    ("chevalley.kr_symbolic", "chi composed with the Kostant-Rallis section is the identity polynomially"),
    ("chevalley.kr_round_trip", "chi(KR(c)) = c with KR(c) regular in m at random base points"),
    ("chevalley.kr_sl2", "the sl(2,R) section is c -> [[0,-c],[1,0]]"),
    ("chevalley.embedding", "q(x) = iota(chi(x)) on m"),
    ("centralizers.regular_abelian", "regular centralizers are abelian for quasi-split forms, with a non-abelian witness otherwise"),
    ("centralizers.psi", "the regular centralizer in m contains the point and has dimension dim a"),
    ("centralizers.smoothness", "tangent criterion holds at regular points and fails at a singular one"),
    ("centralizers.f_groups", "F and F^2 are finite groups with F^2 the squares of F"),
    ("centralizers.exact_sequence", "component orders multiply along the exact sequence of centralizers"),
    ("centralizers.semisimple_classes", "F^2-translates of semisimple points keep their invariant class"),
    ("centralizers.merge_witness", "orbit merging by G_theta is detected exactly when (F^2)_e is a proper subgroup"),
    ("centralizers.sl2_example", "sl(2,R): nilpotent cone, two nilpotent classes merged by [[0,i],[i,0]], F = Z/4, F^2 = Z/2"),
    ("cameral.generic_fibers", "generic cameral fibers have |W| points"),
    ("cameral.ramified_fibers", "fibers over discriminant roots have fewer than |W| points"),
    ("cameral.degree_identity", "ramification degrees add up to |W|/2 times the discriminant degree"),
    ("cameral.norms", "the norm of a root over a split fiber equals its predicted polynomial"),
    ("cameral.infinity", "the chart at infinity completes the discriminant to degree 2N l"),
    ("cameral.section", "the Kostant-Rallis section applied to a base point reproduces it"),
    ("cameral.real_subcover", "the real sub-cover lies in the cover and has |W(a)| points generically"),
    ("sheaves.extension", "T_theta sections extend uniquely by equivariance to valid T sections"),
    ("sheaves.counts", "section counts match centralizer component orders"),
    ("sheaves.obstruction", "a section violating the identity-component condition has no extension"),
    ("sheaves.identity_component", "a nontrivial identity-component value is admissible at a wall"),
    ("sheaves.conditions_contrast", "the two ramification clauses differ pointwise and agree on equivariant sections"),
    ("sheaves.involution", "the involution on sections is involutive, preserves validity and fixes exactly s^2 = 1 for split forms"),
    ("sheaves.bundle_degrees", "fixed bundle multidegrees are the theta-fixed cocharacters"),
];

pub fn anchor(id: &str) -> Option<&'static str> {
    CHECKS.iter().find(|(k, _)| *k == id).map(|(_, a)| *a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub form: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("reports serialize"),
        Format::Text => {
            let mut s = format!("suite {} on {} (seed {})\n", r.suite, r.form, r.seed);
            for c in &r.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Unsupported => "SKIP",
                };
                s.push_str(&format!("{tag} {}: {}\n", c.id, c.anchor));
                if c.status != Status::Pass {
                    if let Some(w) = &c.witness {
                        s.push_str(&format!("     {w}\n"));
                    }
                }
            }
            let fails = r.failures().count();
            s.push_str(&format!("{} checks, {} failed\n", r.checks.len(), fails));
            if let Some(ms) = r.runtime_ms {
                s.push_str(&format!("runtime {ms} ms\n"));
            }
            s
        }
    }
}

struct Outcome {
    pass: bool,
    witness: Option<Value>,
}

fn outcome(pass: bool, witness: Value) -> Result<Outcome> {
    Ok(Outcome { pass, witness: Some(witness) })
}

struct Runner {
    f: &'static RealForm,
    seed: u64,
    exec: Exec,
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, id: &str, body: impl FnOnce(&Runner) -> Result<Outcome>) {
        let anchor = anchor(id).unwrap_or_else(|| panic!("check {id} has no anchor"));
        let (status, witness) = match body(self) {
            Ok(o) => (if o.pass { Status::Pass } else { Status::Fail }, o.witness),
            Err(e @ (Error::Domain(_) | Error::Unsupported(_))) => (Status::Unsupported, Some(json!(e.to_string()))),
            Err(e) => (Status::Fail, Some(json!(e.to_string()))),
        };
        self.checks.push(Check { id: id.into(), anchor: anchor.into(), status, witness });
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Reference values for one catalog form.
#[derive(Clone, Copy, Debug)]
pub struct Expected {
    pub weyl_order: usize,
    pub restricted_weyl_order: usize,
    pub m_degrees: &'static [u32],
    pub g_degrees: &'static [u32],
    /// Outcome of the stabilizer test; `None` where it does not apply.
    pub stabilizer: Option<bool>,
}

pub fn expected(name: &str) -> Option<Expected> {
    let e = |weyl_order, restricted_weyl_order, m_degrees, g_degrees, stabilizer| Expected {
        weyl_order,
        restricted_weyl_order,
        m_degrees,
        g_degrees,
        stabilizer,
    };
    Some(match name {
        "sl2R" => e(2, 2, &[2], &[2], Some(true)),
        "sl3R" => e(6, 6, &[2, 3], &[2, 3], Some(true)),
        "su11" => e(2, 2, &[2], &[2], Some(true)),
        "su12" => e(6, 2, &[2], &[2, 3], Some(false)),
        "su22" => e(24, 8, &[2, 4], &[2, 3, 4], Some(true)),
        "su13" => e(24, 2, &[2], &[2, 3, 4], None),
        "sp4R" => e(8, 8, &[2, 4], &[2, 4], Some(true)),
        "so24" => e(24, 8, &[2, 4], &[2, 3, 4], Some(false)),
        _ => return None,
    })
}

fn mat_json(m: &Matrix) -> Value {
    m.to_json()
}

fn cartan(r: &mut Runner) {
    r.run("cartan.decomposition", |r| {
        let f = r.f;
        let d = &f.dec;
        let a_max = d.m.centralizer_of(d.a.basis()).same_space(&d.a);
        let ok = d.h.dim() + d.m.dim() == f.g.dim() && d.a.is_abelian() && d.m.contains_space(&d.a) && a_max;
        outcome(ok, json!({"dim_h": d.h.dim(), "dim_m": d.m.dim(), "dim_a": d.a.dim(), "a_maximal": a_max}))
    });
    r.run("cartan.quasi_split", |r| {
        let q = r.f.is_quasi_split(r.seed);
        let ok = q.quasi_split == r.f.spec.quasi_split_expected && (q.quasi_split || q.witness.is_some());
        outcome(ok, json!({"quasi_split": q.quasi_split, "witness": q.witness.map(|(a, b)| vec![mat_json(&a), mat_json(&b)])}))
    });
    r.run("cartan.regular_cross_check", |r| {
        let q = r.f.is_quasi_split(r.seed);
        let (ok, tried) = q.regular_cross_check;
        outcome((ok == tried) == q.quasi_split && tried > 0, json!({"regular_in_g": ok, "regular_in_m": tried}))
    });
    r.run("cartan.isotropy", |r| {
        let f = r.f;
        let hs = f.sample_group_elements(Subgroup::H, 12, r.seed);
        let gs = f.sample_group_elements(Subgroup::GTheta, 12, r.seed);
        let ok = hs.iter().all(|h| f.in_h(h) && f.normalizes_m(h)) && gs.iter().all(|g| f.in_gtheta(g) && f.normalizes_m(g));
        outcome(ok, json!({"h_samples": hs.len(), "gtheta_samples": gs.len()}))
    });
    r.run("cartan.principal_triple", |r| {
        let t = r.f.principal_triple()?;
        let two = Scalar::int(2);
        let ok = t.x.bracket(&t.e) == t.e.scale(&two) && t.x.bracket(&t.f) == t.f.scale(&-two.clone()) && t.e.bracket(&t.f) == t.x;
        let ok = ok && r.f.in_m(&t.e) && r.f.in_m(&t.f) && r.f.dec.h.contains(&t.x) && r.f.is_regular(&t.e);
        outcome(ok, json!({"e": mat_json(&t.e), "x": mat_json(&t.x), "f": mat_json(&t.f)}))
    });
}

fn roots(r: &mut Runner) {
    let exp = expected(r.f.name());
    r.run("roots.count", |r| {
        let rd = r.f.roots()?;
        outcome(rd.roots.len() == r.f.g.dim() - r.f.rank(), json!({"roots": rd.roots.len()}))
    });
    r.run("roots.weyl_order", |r| {
        let w = r.f.roots()?.weyl_order();
        outcome(Some(w) == exp.map(|e| e.weyl_order), json!({"order": w}))
    });
    r.run("roots.restricted_weyl_order", |r| {
        let w = r.f.restricted()?.weyl_order();
        outcome(Some(w) == exp.map(|e| e.restricted_weyl_order), json!({"order": w}))
    });
    r.run("roots.multiplicities", |r| {
        let rr = r.f.restricted()?;
        let mults: Vec<usize> = rr.positive.iter().map(|&i| rr.roots[i].multiplicity).collect();
        outcome(rr.multiplicities_invariant(), json!({"positive_multiplicities": mults, "reduced": rr.reduced}))
    });
    r.run("roots.lifts", |r| {
        let rd = r.f.roots()?;
        let rr = r.f.restricted()?;
        let ok = rr.lift.len() == rr.weyl.len() && rr.lift.iter().all(|&w| rd.commutes_with_theta(w));
        outcome(ok, json!({"lifts": rr.lift.len(), "w_theta": rr.w_theta.len()}))
    });
    r.run("roots.stabilizer_inclusion", |r| {
        let rd = r.f.roots()?;
        let rr = r.f.restricted()?;
        let rep = stabilizer_inclusion_test(r.f, rd, rr)?;
        let want = exp.and_then(|e| e.stabilizer);
        outcome(
            Some(rep.holds) == want,
            json!({
                "holds": rep.holds,
                "expected": want,
                "holds_on_walls": rep.holds_on_walls,
                "witness": rep.witness.map(|(x, w)| json!({"point": x.iter().map(|s| s.to_string()).collect::<Vec<_>>(), "weyl": mat_json(&w)})),
            }),
        )
    });
}

fn random_base(rng: &mut impl Rng, a: usize, bound: i64) -> Vec<Scalar> {
    (0..a).map(|_| Scalar::int(rng.gen_range(-bound..=bound))).collect()
}

fn chevalley(r: &mut Runner) {
    let exp = expected(r.f.name());
    r.run("chevalley.degrees", |r| {
        let cd = r.f.chevalley()?;
        let ok = exp.is_some_and(|e| cd.m_degrees == e.m_degrees && cd.g_degrees == e.g_degrees);
        outcome(
            ok,
            json!({"m": cd.m_degrees, "g": cd.g_degrees, "g_generators": cd.g_generators.iter().map(|k| k.label()).collect::<Vec<_>>()}),
        )
    });
    r.run("chevalley.restriction", |r| {
        let cd = r.f.chevalley()?;
        let rr = r.f.restricted()?;
        let top = *cd.m_degrees.iter().max().unwrap();
        let rows = restriction_check(&cd.m_restricted, &cd.m_degrees, &rr.weyl, r.f.real_rank(), top);
        let ok = rows.iter().all(|c| c.invariant_dim == c.generated_dim && c.generated_dim == c.monomials);
        outcome(ok, serde_json::to_value(rows).unwrap())
    });
    r.run("chevalley.invariance", |r| {
        let cd = r.f.chevalley()?;
        let mut rng = r.rng(3);
        let hs = r.f.sample_group_elements(Subgroup::GTheta, 10, r.seed);
        let ok = hs.iter().all(|h| {
            let x = r.f.random_m(&mut rng, 3);
            cd.chi(&(&(h * &x) * &h.inverse().unwrap())) == cd.chi(&x)
        });
        outcome(ok, json!({"samples": hs.len()}))
    });
    r.run("chevalley.kr_symbolic", |r| {
        let cd = r.f.chevalley()?;
        if cd.kr_matrix.is_none() {
            return Err(Error::Domain("no principal triple".into()));
        }
        outcome(cd.round_trip_symbolic(), json!({"slice_weights": cd.slice_weights}))
    });
    r.run("chevalley.kr_round_trip", |r| {
        r.f.principal_triple()?;
        let mut rng = r.rng(4);
        let pts: Vec<Vec<Scalar>> = (0..KR_SAMPLES).map(|_| random_base(&mut rng, r.f.real_rank(), 9)).collect();
        let res = batch::kr_round_trips(r.f, &pts, r.exec)?;
        let bad: Vec<usize> = res.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();
        outcome(bad.is_empty(), json!({"samples": pts.len(), "failures": bad}))
    });
    if r.f.name() == "sl2R" {
        r.run("chevalley.kr_sl2", |r| {
            let cd = r.f.chevalley()?;
            let ok = (-3..=3).all(|k| {
                let c = Scalar::frac(k, 2);
                let want = Matrix::from_rows(vec![vec![Scalar::zero(), -&c], vec![Scalar::one(), Scalar::zero()]]);
                cd.kr_section(&[c]).ok() == Some(want)
            });
            outcome(ok, json!({"section": "[[0,-c],[1,0]]", "chi": "det"}))
        });
    }
    r.run("chevalley.embedding", |r| {
        let cd = r.f.chevalley()?;
        r.f.principal_triple()?;
        let mut rng = r.rng(5);
        let ok = (0..20).all(|_| {
            let x = r.f.random_m(&mut rng, 3);
            cd.embed_base(&cd.chi(&x)).ok() == Some(cd.q(&x))
        });
        outcome(ok, json!({"samples": 20}))
    });
}

fn centralizers(r: &mut Runner) {
    let qs = r.f.quasi_split();
    r.run("centralizers.regular_abelian", |r| {
        if !qs {
            let (x, p, q) = cz::non_abelian_witness(r.f).ok_or_else(|| Error::Construction("no non-abelian witness".into()))?;
            let fib = cz::centralizer_fiber(r.f, &x, Subgroup::H)?;
            return outcome(
                !fib.is_abelian,
                json!({"non_abelian_witness_found": true, "point": mat_json(&x), "pair": [mat_json(&p), mat_json(&q)]}),
            );
        }
        let pts = cz::sample_regular_points(r.f, REGULAR_SAMPLES, r.seed)?;
        let xs: Vec<Matrix> = pts.iter().map(|p| p.0.clone()).collect();
        let ab = batch::fibers_abelian(r.f, &xs, r.exec)?;
        let kinds: BTreeSet<String> = pts.iter().map(|p| format!("{:?}", p.1)).collect();
        outcome(ab.iter().all(|b| *b), json!({"points": xs.len(), "abelian": ab.iter().filter(|b| **b).count(), "kinds": kinds}))
    });
    r.run("centralizers.psi", |r| {
        let mut rng = r.rng(6);
        let mut n = 0;
        let mut ok = true;
        for _ in 0..40 {
            let x = r.f.random_m(&mut rng, 3);
            if !r.f.is_regular(&x) {
                continue;
            }
            let p = cz::psi_regular_centralizer(r.f, &x)?;
            ok &= p.contains(&x) && p.dim() == r.f.real_rank() && p.is_abelian();
            n += 1;
        }
        let xa = cz::regular_a(r.f, &mut rng);
        let on_a = cz::psi_regular_centralizer(r.f, &xa)?.same_space(&r.f.dec.a);
        outcome(ok && n > 0 && on_a, json!({"samples": n, "regular_a_gives_a": on_a}))
    });
    r.run("centralizers.smoothness", |r| {
        let pairs = cz::sample_centralizing_pairs(r.f, SMOOTHNESS_SAMPLES, r.seed)?;
        let good = pairs.iter().map(|(x, h)| cz::smoothness_tangent_check(r.f, x, h)).collect::<Result<Vec<_>>>()?;
        let h = r.f.h_torus_point(0, &Scalar::int(2)).ok_or_else(|| Error::Unsupported("H has no torus".into()))?;
        let singular = cz::smoothness_tangent_check(r.f, &Matrix::zeros(r.f.n(), r.f.n()), &h)?;
        outcome(
            good.iter().all(|c| c.passes) && !singular.passes,
            json!({"regular_pairs": good.len(), "passing": good.iter().filter(|c| c.passes).count(), "singular": singular}),
        )
    });
    r.run("centralizers.f_groups", |r| {
        let (fg, f2) = cz::compute_f(r.f)?;
        let sq: BTreeSet<_> = fg.elements.iter().map(|t| t.pow(2)).collect();
        let ok = sq == f2.elements.iter().cloned().collect() && fg.order() % f2.order() == 0;
        outcome(ok, json!({"f_order": fg.order(), "f_orders": fg.element_orders(), "f_squared_order": f2.order()}))
    });
    r.run("centralizers.exact_sequence", |r| {
        let e = r.f.principal_triple()?.e.clone();
        let mut rng = r.rng(7);
        let xa = cz::regular_a(r.f, &mut rng);
        let a = cz::exact_sequence_check(r.f, &e)?;
        let b = cz::exact_sequence_check(r.f, &xa)?;
        outcome(a.holds && b.holds, json!({"nilpotent": a, "semisimple": b}))
    });
    r.run("centralizers.semisimple_classes", |r| {
        let cd = r.f.chevalley()?;
        let td = r.f.torus()?;
        let fm = td.f_matrices();
        let mut rng = r.rng(8);
        let mut n = 0;
        let mut ok = true;
        for _ in 0..5 {
            let x = cd.kr_section(&random_base(&mut rng, r.f.real_rank(), 5))?;
            for a in &fm {
                let y = &(a * &x) * &a.inverse().unwrap();
                ok &= r.f.in_m(&y) && cd.chi(&y) == cd.chi(&x);
                n += 1;
            }
        }
        let xa = cz::regular_a(r.f, &mut rng);
        let full = cz::f_squared_at(r.f, &xa)?.len() == td.f_squared.len();
        outcome(ok && full, json!({"translates": n, "f_squared_acts_within_class": full}))
    });
    r.run("centralizers.merge_witness", |r| {
        let e = r.f.principal_triple()?.e.clone();
        let td = r.f.torus()?;
        let w = cz::orbit_merge_witness(r.f, &e)?;
        let proper = cz::f_squared_at(r.f, &e)?.len() < td.f_squared.len();
        let moved = match (&w, &w.as_ref().and_then(|w| w.matrix.clone())) {
            (Some(_), Some(g)) => cz::moves_orbit(r.f, &e, g)?,
            (Some(_), None) => true,
            (None, _) => false,
        };
        outcome(
            w.is_some() == proper && moved == proper,
            json!({"witness": w.as_ref().and_then(|w| w.matrix.as_ref().map(mat_json)), "image": w.as_ref().and_then(|w| w.image.as_ref().map(mat_json))}),
        )
    });
    if r.f.name() == "sl2R" {
        r.run("centralizers.sl2_example", sl2_example);
    }
}

fn sl2_example(r: &Runner) -> Result<Outcome> {
    let f = r.f;
    let mut cone = true;
    for b in -2..=2 {
        for c in -2..=2 {
            let x = Matrix::from_ints(&[&[0, b], &[c, 0]]);
            cone &= is_nilpotent(&x) == x.det().is_zero();
        }
    }
    let e = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
    let lower = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
    let swap_i = Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::i()], vec![Scalar::i(), Scalar::zero()]]);
    let image = &(&swap_i * &e) * &swap_i.inverse().unwrap();
    let merges = cz::moves_orbit(f, &e, &swap_i)? && image == lower;
    // H-orbits keep the vanishing pattern of the two off-diagonal entries
    let hs = f.sample_group_elements(Subgroup::H, 20, r.seed);
    let pattern = |x: &Matrix| (x.get(0, 1).is_zero(), x.get(1, 0).is_zero());
    let classes: BTreeSet<(bool, bool)> =
        f.sample_group_elements(Subgroup::GTheta, 20, r.seed).iter().map(|g| pattern(&(&(g * &e) * &g.inverse().unwrap()))).collect();
    let h_stable = hs.iter().all(|h| pattern(&(&(h * &e) * &h.inverse().unwrap())) == pattern(&e));
    let witness = cz::orbit_merge_witness(f, &e)?.and_then(|w| w.matrix);
    let witness_ok = witness.as_ref().is_some_and(|w| *w == swap_i || *w == swap_i.scale(&-Scalar::one()));
    let xa = f.dec.a.basis()[0].clone();
    let semisimple_unsplit = cz::f_squared_at(f, &xa)?.len() == f.torus()?.f_squared.len();
    let (fg, f2) = cz::compute_f(f)?;
    let groups = fg.order() == 4 && fg.is_cyclic() && f2.order() == 2;
    outcome(
        cone && merges && h_stable && classes.len() == 2 && witness_ok && semisimple_unsplit && groups,
        json!({
            "nilpotent_cone_is_det_zero": cone,
            "nilpotent_classes": classes.len(),
            "merge_witness": mat_json(&swap_i),
            "witness_found": witness.as_ref().map(mat_json),
            "semisimple_unsplit": semisimple_unsplit,
            "f": fg.element_orders(),
            "f_squared": f2.element_orders(),
        }),
    )
}

/// Test bases: two lines through 𝔞 (rational discriminant roots) and one random base point.
pub fn test_bases(f: &RealForm, seed: u64) -> Result<Vec<HitchinBasePoint>> {
    let a = f.real_rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..2 {
        let s0: Vec<Scalar> = (0..a).map(|_| Scalar::int(rng.gen_range(-4..=4))).collect();
        let s1: Vec<Scalar> = (0..a).map(|_| Scalar::int(rng.gen_range(1..=4))).collect();
        out.push(HitchinBasePoint::along_line(f.name(), &s0, &s1)?);
    }
    out.push(HitchinBasePoint::random(f.name(), 1, &mut rng)?);
    Ok(out)
}

/// Ten rational points of the affine chart off the discriminant.
pub fn off_discriminant(c: &CameralCover, start: i64) -> Vec<Scalar> {
    let mut xs = Vec::new();
    let mut k = start;
    while xs.len() < 10 {
        let x = Scalar::frac(k, 3);
        if !c.discriminant.eval(&x).is_zero() {
            xs.push(x);
        }
        k += 1;
    }
    xs
}

fn rational_roots(p: &crate::poly::UPoly) -> Vec<Scalar> {
    if p.is_zero() {
        return vec![];
    }
    p.squarefree_part().gaussian_roots().0.into_iter().map(|(x, _)| x).collect()
}

fn cameral(r: &mut Runner) {
    let covers: Result<Vec<CameralCover>> = test_bases(r.f, r.seed).and_then(|bs| bs.iter().map(CameralCover::build).collect());
    let covers = match covers {
        Ok(c) => c,
        Err(e) => {
            for id in [
                "cameral.generic_fibers",
                "cameral.ramified_fibers",
                "cameral.degree_identity",
                "cameral.norms",
                "cameral.infinity",
                "cameral.section",
                "cameral.real_subcover",
            ] {
                let e = e.clone();
                r.run(id, move |_| Err(e));
            }
            return;
        }
    };
    let w = covers[0].weyl_order;
    r.run("cameral.generic_fibers", |r| {
        let mut counts = Vec::new();
        for (k, c) in covers.iter().enumerate() {
            let xs = off_discriminant(c, 1 + 5 * k as i64);
            counts.extend(batch::fibers(c, &xs, r.exec)?.into_iter().map(|f| (f.count, f.transitive)));
        }
        let ok = counts.iter().all(|(n, t)| *n == w && *t != Some(false));
        outcome(ok, json!({"weyl_order": w, "fibers": counts.len(), "counts": counts.iter().map(|c| c.0).collect::<BTreeSet<_>>()}))
    });
    r.run("cameral.ramified_fibers", |_| {
        let mut seen = Vec::new();
        for c in &covers {
            for x in rational_roots(&c.discriminant) {
                let f = c.fiber_at(&x)?;
                seen.push((x.to_string(), f.count, f.ramified));
            }
        }
        let ok = !seen.is_empty() && seen.iter().all(|(_, n, ram)| *ram && *n < w);
        outcome(ok, json!(seen))
    });
    r.run("cameral.degree_identity", |_| {
        let checks = covers.iter().map(|c| c.degree_check()).collect::<Result<Vec<_>>>()?;
        outcome(checks.iter().all(|d| d.holds), serde_json::to_value(checks).unwrap())
    });
    r.run("cameral.norms", |r| {
        let rd = r.f.roots()?;
        let c = &covers[0];
        let mut n = 0;
        let mut ok = true;
        for x in off_discriminant(c, 2).iter().take(3) {
            let fib = c.fiber_at(x)?;
            let Some(pts) = fib.points else { continue };
            for (k, o) in c.orbits.iter().enumerate() {
                let a = o.positive[0];
                let prod = pts.iter().fold(Scalar::one(), |acc, t| &acc * &rd.eval_root(a, t));
                ok &= prod == c.norm(k).eval(x);
                n += 1;
            }
        }
        outcome(ok && n > 0, json!({"comparisons": n}))
    });
    r.run("cameral.infinity", |_| {
        let mut rows = Vec::new();
        for c in &covers {
            let inf = c.at_infinity()?;
            let d = c.degree_check()?;
            let at_zero = inf.discriminant.coeffs().iter().position(|x| !x.is_zero()).unwrap_or(0);
            rows.push((d.multiplicity_at_infinity, at_zero, inf.discriminant.degree().unwrap_or(0) <= d.projective_discriminant_degree));
        }
        outcome(rows.iter().all(|(m, z, b)| m == z && *b), json!(rows))
    });
    r.run("cameral.section", |_| {
        let ok = covers.iter().map(|c| c.section_reproduces_base()).collect::<Result<Vec<_>>>()?;
        outcome(ok.iter().all(|b| *b), json!({"bases": ok.len()}))
    });
    r.run("cameral.real_subcover", |r| {
        let rr = r.f.restricted()?;
        let split = r.f.real_rank() == r.f.rank();
        let mut rows = Vec::new();
        let mut ok = true;
        for c in &covers[..2] {
            let sub = c.real_subcover()?;
            for x in off_discriminant(c, 1) {
                let sf = sub.fiber_at(&x)?;
                let pf = c.fiber_at(&x)?;
                let same = !split || (sf.points.is_some() && sf.points == pf.points);
                ok &= sf.in_parent && sf.restricted_weyl_stable != Some(false) && same;
                rows.push(sf.count);
            }
            ok &= sub.stabilizer_holds == stabilizer_inclusion_test(r.f, r.f.roots()?, rr)?.holds;
        }
        ok &= rows.iter().all(|n| *n == rr.weyl_order());
        outcome(ok, json!({"restricted_weyl_order": rr.weyl_order(), "counts": rows.iter().collect::<BTreeSet<_>>(), "split": split}))
    });
}

/// Points of 𝔞 (coordinates): a regular one and, when the rank allows, one on a wall.
fn real_points(f: &RealForm, seed: u64) -> Result<Vec<Vec<Scalar>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xa = cz::regular_a(f, &mut rng);
    let mut out = vec![f.dec.a.coords(&xa).unwrap(), vec![Scalar::zero(); f.real_rank()]];
    let rr = f.restricted()?;
    let root = &rr.roots[rr.simple[0]];
    if f.real_rank() >= 2 {
        let ker = Matrix::from_rows(vec![root.coeffs.clone()]).kernel();
        let mut c = vec![Scalar::zero(); f.real_rank()];
        for (k, v) in ker.iter().enumerate() {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci = &*ci + &(&Scalar::int(k as i64 + 1) * vi);
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// Deterministic subset of at most `k` items.
fn spread<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    if v.len() <= k {
        return v.to_vec();
    }
    (0..k).map(|i| v[i * v.len() / k].clone()).collect()
}

fn sheaves(r: &mut Runner) {
    r.run("sheaves.extension", |r| {
        let f = r.f;
        let td = f.torus()?;
        let mut rows = Vec::new();
        let mut ok = true;
        for s0 in real_points(f, r.seed)? {
            let real = FiniteCameralFiber::real_orbit(f, &s0)?;
            let mut t0 = s0.clone();
            t0.resize(f.rank(), Scalar::zero());
            let full = FiniteCameralFiber::orbit(f, &t0)?;
            let secs = sh::enumerate_sections_finite(f, &real, &td.t_theta)?;
            let sample = spread(&secs, 48);
            let mut exts = BTreeSet::new();
            for s in &sample {
                ok &= sh::check_ttheta_condition(f, &real, s)?.holds;
                match sh::extend_by_equivariance(f, &real, s, &full)? {
                    Ok(ext) => {
                        ok &= sh::check_t_condition_ngo(f, &full, &ext)?.holds;
                        ok &= real.points.iter().enumerate().all(|(i, p)| ext[full.points.iter().position(|q| q == p).unwrap()] == s[i]);
                        exts.insert(ext);
                    }
                    Err(_) => ok = false,
                }
            }
            ok &= exts.len() == sample.len();
            rows.push(json!({"real_points": real.len(), "full_points": full.len(), "sections": secs.len(), "extended": sample.len()}));
        }
        outcome(ok, json!(rows))
    });
    if r.f.name() == "sl2R" {
        r.run("sheaves.counts", |r| {
            let f = r.f;
            let td = f.torus()?;
            let free = FiniteCameralFiber::real_orbit(f, &[Scalar::int(3)])?;
            let ram = FiniteCameralFiber::real_orbit(f, &[Scalar::zero()])?;
            let nf = sh::enumerate_sections_finite(f, &free, &td.t_theta)?.len();
            let nr = sh::enumerate_sections_finite(f, &ram, &td.t_theta)?.len();
            let comps = cz::centralizer_fiber(f, &f.dec.a.basis()[0].scale(&Scalar::int(3)), Subgroup::GTheta)?.component_witnesses.len();
            let nilpotent_center = cz::centralizer_fiber(f, &f.principal_triple()?.e, Subgroup::GTheta)?.component_witnesses.len();
            outcome(
                nf == 4 && nr == 1 && nf == comps,
                json!({"free_fiber": nf, "ramified_fiber": nr, "centralizer_components": comps, "nilpotent_centralizer_components": nilpotent_center}),
            )
        });
    }
    r.run("sheaves.obstruction", |r| {
        let f = r.f;
        let td = f.torus()?;
        let zero = FiniteCameralFiber::real_orbit(f, &vec![Scalar::zero(); f.real_rank()])?;
        let rd = f.roots()?;
        let bad = td
            .t_theta
            .iter()
            .find(|t| (0..rd.weyl.len()).any(|w| td.weyl_apply(w, t) != **t))
            .ok_or_else(|| Error::Unsupported("T_theta torsion is W-fixed".into()))?
            .clone();
        let cond = sh::check_ttheta_condition(f, &zero, &vec![bad.clone()])?;
        let ext = sh::extend_by_equivariance(f, &zero, &vec![bad.clone()], &zero)?;
        outcome(!cond.holds && ext.is_err(), json!({"value": bad.to_string(), "obstruction": ext.err()}))
    });
    r.run("sheaves.identity_component", |r| {
        let f = r.f;
        let td = f.torus()?;
        let pts = real_points(f, r.seed)?;
        let Some(wall) = pts.get(2) else {
            return Err(Error::Unsupported("real rank one has no proper walls".into()));
        };
        let fiber = FiniteCameralFiber::real_orbit(f, wall)?;
        let secs = sh::enumerate_sections_finite(f, &fiber, &td.t_theta)?;
        let id = f.roots()?.identity_index();
        let tags = &fiber.ramification_tags[0];
        let nontrivial = secs.iter().find(|s| !s[0].is_identity() && tags.iter().any(|&w| w != id));
        match nontrivial {
            Some(s) => {
                outcome(sh::check_ttheta_condition(f, &fiber, s)?.holds, json!({"value": s[0].to_string(), "stabilizer": tags.len()}))
            }
            None => Err(Error::Unsupported("identity components at the wall are trivial".into())),
        }
    });
    r.run("sheaves.conditions_contrast", |r| {
        let f = r.f;
        let td = f.torus()?;
        let zero = FiniteCameralFiber::orbit(f, &vec![Scalar::zero(); f.rank()])?;
        // a constant value separating the clauses: no root equal to -1, some root not 1
        let mut cand = None;
        'search: for level in [4, 3, 8, 6] {
            for t in td.torsion_points(level) {
                let s = vec![t; zero.len()];
                if sh::check_t_condition_dg(f, &zero, &s)?.pointwise && !sh::check_t_condition_ngo(f, &zero, &s)?.pointwise {
                    cand = Some(s);
                    break 'search;
                }
            }
        }
        let cand = cand.ok_or_else(|| Error::Unsupported("no separating torus value of small order".into()))?;
        let dg = sh::check_t_condition_dg(f, &zero, &cand)?;
        let ngo = sh::check_t_condition_ngo(f, &zero, &cand)?;
        // on equivariant sections over a wall fiber the two conditions agree
        let real = FiniteCameralFiber::real_orbit(f, &vec![Scalar::zero(); f.real_rank()])?;
        let mut agree = true;
        for s in spread(&sh::enumerate_sections_finite(f, &real, &td.t_theta)?, 24) {
            if let Ok(ext) = sh::extend_by_equivariance(f, &real, &s, &zero)? {
                agree &= sh::check_t_condition_dg(f, &zero, &ext)?.holds == sh::check_t_condition_ngo(f, &zero, &ext)?.holds;
            }
        }
        outcome(dg.pointwise && !ngo.pointwise && agree, json!({"value": cand[0].to_string(), "dg_pointwise": dg.pointwise, "ngo_pointwise": ngo.pointwise, "agree_on_equivariant": agree}))
    });
    r.run("sheaves.involution", |r| {
        let f = r.f;
        let td = f.torus()?;
        let split = f.spec.split;
        let mut ok = true;
        let mut fixed = 0;
        let mut total = 0;
        for s0 in real_points(f, r.seed)? {
            let real = FiniteCameralFiber::real_orbit(f, &s0)?;
            for s in spread(&sh::enumerate_sections_finite(f, &real, &td.t_theta)?, 48) {
                let t = sh::involution_theta(f, &real, &s)?;
                ok &= sh::involution_theta(f, &real, &t)? == s && sh::check_ttheta_condition(f, &real, &t)?.holds;
                let is_fixed = t == s;
                if split {
                    ok &= is_fixed == s.iter().all(|x| x.pow(2).is_identity());
                }
                fixed += usize::from(is_fixed);
                total += 1;
            }
        }
        outcome(ok, json!({"sections": total, "fixed": fixed, "split": split}))
    });
    r.run("sheaves.bundle_degrees", |r| {
        let f = r.f;
        let th = sh::theta_on_lattice(f)?;
        let rank = f.torus()?.lattice.basis().len();
        let mut ok = true;
        let mut fixed = 0;
        let mut n = 0;
        let grid: Vec<i64> = vec![-1, 0, 1, 2];
        let mut idx = vec![0usize; rank];
        loop {
            let d: Vec<i64> = idx.iter().map(|&k| grid[k]).collect();
            let v: Vec<Scalar> = d.iter().map(|x| Scalar::int(*x)).collect();
            let c = sh::fixed_point_bundle_check(f, &d)?;
            ok &= c.fixed == (th.mul_vec(&v) == v);
            if f.spec.split {
                ok &= c.fixed == d.iter().all(|x| *x == 0);
            }
            fixed += usize::from(c.fixed);
            n += 1;
            let mut k = 0;
            while k < rank {
                idx[k] += 1;
                if idx[k] < grid.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
        }
        outcome(ok, json!({"degrees": n, "fixed": fixed}))
    });
}

pub fn run_suite(suite: &str, form_name: &str, seed: u64) -> Result<VerificationReport> {
    run_suite_with(suite, form_name, seed, Exec::default())
}

pub fn run_suite_with(suite: &str, form_name: &str, seed: u64, exec: Exec) -> Result<VerificationReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Usage(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
    }
    let f = form(form_name)?;
    let mut r = Runner { f, seed, exec, checks: Vec::new() };
    let all = suite == "all";
    if all || suite == "cartan" {
        cartan(&mut r);
    }
    if all || suite == "roots" {
        roots(&mut r);
    }
    if all || suite == "chevalley" {
        chevalley(&mut r);
    }
    if all || suite == "centralizers" {
        centralizers(&mut r);
    }
    if all || suite == "cameral" {
        cameral(&mut r);
    }
    if all || suite == "sheaves" {
        sheaves(&mut r);
    }
    Ok(VerificationReport { suite: suite.into(), form: form_name.into(), seed, checks: r.checks, runtime_ms: None })
}

/// Runs a suite and records the elapsed time in the report.
pub fn run_suite_timed(suite: &str, form_name: &str, seed: u64) -> Result<VerificationReport> {
    let t = Instant::now();
    let mut rep = run_suite(suite, form_name, seed)?;
    rep.runtime_ms = Some(t.elapsed().as_millis() as u64);
    Ok(rep)
}

pub fn catalog() -> &'static [&'static str] {
    &CATALOG
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DEFAULT_SEED;

    #[test]
    fn anchors_are_unique() {
        let ids: BTreeSet<&str> = CHECKS.iter().map(|c| c.0).collect();
        assert_eq!(ids.len(), CHECKS.len());
    }

    #[test]
    fn cartan_sl2_passes() {
        let r = run_suite("cartan", "sl2R", DEFAULT_SEED).unwrap();
        assert!(r.passed(), "{}", emit_report(&r, Format::Text));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", "sl2R", 1), Err(Error::Usage(_))));
        assert!(run_suite("cartan", "sl9R", 1).is_err());
    }

    #[test]
    fn report_round_trip() {
        let mut r = VerificationReport { suite: "cartan".into(), form: "sl2R".into(), seed: 1, checks: vec![], runtime_ms: None };
        let text = emit_report(&r, Format::Json);
        assert!(text.contains("\"checks\": []"));
        r.checks.push(Check { id: "x".into(), anchor: "y".into(), status: Status::Fail, witness: Some(json!({"k": 1})) });
        assert!(!r.passed());
        assert_eq!(VerificationReport::from_json(&emit_report(&r, Format::Json)).unwrap(), r);
        assert!(emit_report(&r, Format::Text).contains("{\"k\":1}"));
    }
}
