//! Cameral covers of ℙ¹ with `L = O(ℓ)`, their real sub-covers, discriminants and ramification divisors.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::chevalley::{express_in_generators, invariants_of};
use crate::error::{Error, Result};
use crate::forms::{form, Ambient, RealForm};
use crate::matrix::{independent_subset, Matrix};
use crate::mpoly::{MPoly, PolyMatrix};
use crate::poly::UPoly;
use crate::roots::stabilizer_inclusion_test;
use crate::scalar::Scalar;

/// A point of the Hitchin base: one polynomial section of `L^{d_i}` per invariant generator.
#[derive(Clone, Debug, PartialEq)]
pub struct HitchinBasePoint {
    pub form: String,
    pub line_bundle_degree: u32,
    pub sections: Vec<UPoly>,
}

fn quasi_split_form(name: &str) -> Result<&'static RealForm> {
    let f = form(name)?;
    f.principal_triple()?;
    f.chevalley()?;
    Ok(f)
}

impl HitchinBasePoint {
    pub fn new(form_name: &str, line_bundle_degree: u32, sections: Vec<UPoly>) -> Result<Self> {
        let f = quasi_split_form(form_name)?;
        if line_bundle_degree == 0 {
            return Err(Error::Usage("line bundle degree must be at least 1".into()));
        }
        let degs = &f.chevalley()?.m_degrees;
        if sections.len() != degs.len() {
            return Err(Error::Usage(format!("{} expects {} sections, got {}", form_name, degs.len(), sections.len())));
        }
        for (k, (s, d)) in sections.iter().zip(degs).enumerate() {
            let bound = (d * line_bundle_degree) as usize;
            if s.degree().unwrap_or(0) > bound {
                return Err(Error::Usage(format!("section {k} has degree above {bound}")));
            }
        }
        Ok(HitchinBasePoint { form: form_name.into(), line_bundle_degree, sections })
    }

    pub fn real_form(&self) -> &'static RealForm {
        form(&self.form).expect("validated on construction")
    }

    pub fn degree_bounds(&self) -> Vec<usize> {
        let cd = self.real_form().chevalley().unwrap();
        cd.m_degrees.iter().map(|d| (d * self.line_bundle_degree) as usize).collect()
    }

    /// `b = χ(s₀ + x·s₁)` for points of 𝔞 given in coordinates; needs `ℓ = 1`.
    pub fn along_line(form_name: &str, s0: &[Scalar], s1: &[Scalar]) -> Result<Self> {
        let f = quasi_split_form(form_name)?;
        let a = f.real_rank();
        if s0.len() != a || s1.len() != a {
            return Err(Error::Usage(format!("expected {a} coordinates on a")));
        }
        let line: Vec<UPoly> = s0.iter().zip(s1).map(|(p, q)| UPoly::new(vec![p.clone(), q.clone()])).collect();
        let sections = f.chevalley()?.m_restricted.iter().map(|p| p.substitute_univariate(&line)).collect();
        Self::new(form_name, 1, sections)
    }

    /// Random integer sections of full degree.
    pub fn random(form_name: &str, line_bundle_degree: u32, rng: &mut impl Rng) -> Result<Self> {
        let f = quasi_split_form(form_name)?;
        let sections = f
            .chevalley()?
            .m_degrees
            .iter()
            .map(|d| {
                let top = (d * line_bundle_degree) as usize;
                let mut c: Vec<Scalar> = (0..=top).map(|_| Scalar::int(rng.gen_range(-3..=3))).collect();
                c[top] = Scalar::int(rng.gen_range(1..=3));
                UPoly::new(c)
            })
            .collect();
        Self::new(form_name, line_bundle_degree, sections)
    }

    /// The same base point in the chart `y = 1/x`.
    pub fn at_infinity(&self) -> Self {
        let sections = self
            .sections
            .iter()
            .zip(self.degree_bounds())
            .map(|(s, bound)| {
                let mut c: Vec<Scalar> = (0..=bound).map(|k| s.coeff(k)).collect();
                c.reverse();
                UPoly::new(c)
            })
            .collect();
        HitchinBasePoint { form: self.form.clone(), line_bundle_degree: self.line_bundle_degree, sections }
    }

    pub fn eval(&self, x: &Scalar) -> Vec<Scalar> {
        self.sections.iter().map(|s| s.eval(x)).collect()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let name = v["form"].as_str().ok_or_else(|| Error::Parse("missing \"form\"".into()))?;
        let ell = v["ell"].as_u64().ok_or_else(|| Error::Parse("missing integer \"ell\"".into()))?;
        let secs = v["sections"].as_array().ok_or_else(|| Error::Parse("missing \"sections\" array".into()))?;
        let mut sections = Vec::new();
        for s in secs {
            let coeffs = s.as_array().ok_or_else(|| Error::Parse("each section is an array of coefficients".into()))?;
            let c: Result<Vec<Scalar>> = coeffs
                .iter()
                .map(|c| match c {
                    serde_json::Value::String(t) => t.parse(),
                    serde_json::Value::Number(n) => n.to_string().parse(),
                    _ => Err(Error::Parse("coefficients are strings or integers".into())),
                })
                .collect();
            sections.push(UPoly::new(c?));
        }
        Self::new(name, u32::try_from(ell).map_err(|_| Error::Parse("ell out of range".into()))?, sections)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "form": self.form,
            "ell": self.line_bundle_degree,
            "sections": self.sections.iter().map(|s| s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// A `W`-orbit of roots with its invariant `Δ_O = ∏_{α ∈ O⁺} α²`.
#[derive(Clone, Debug)]
pub struct RootOrbit {
    pub roots: Vec<usize>,
    pub positive: Vec<usize>,
    /// `Δ_O` in the coordinates of `𝔱/W`.
    pub invariant: MPoly,
    /// `Δ_O(ι(b(x)))`.
    pub base_poly: UPoly,
}

#[derive(Clone, Debug)]
pub struct CameralCover {
    pub base: HitchinBasePoint,
    /// Generators `q_j` of the `W`-invariants on `𝔱` coordinates.
    pub invariants: Vec<MPoly>,
    pub invariant_labels: Vec<String>,
    /// `ι(b(x))_j`, the right-hand sides of the defining equations.
    pub rhs: Vec<UPoly>,
    pub discriminant_invariant: MPoly,
    pub discriminant: UPoly,
    pub orbits: Vec<RootOrbit>,
    pub everywhere_ramified: bool,
    pub weyl_order: usize,
    pub positive_roots: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    /// All points listed explicitly over ℚ(i).
    Enumeration,
    /// From root multiplicities of the characteristic polynomial.
    Multiplicities,
    /// Generic count certified by a nonvanishing discriminant.
    Discriminant,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fiber {
    pub x0: Scalar,
    pub base_values: Vec<Scalar>,
    pub charpoly: String,
    pub count: usize,
    pub ramified: bool,
    pub method: CountMethod,
    /// Points in `𝔱` coordinates, when they lie in ℚ(i).
    pub points: Option<Vec<Vec<Scalar>>>,
    pub transitive: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamificationDivisor {
    pub root: usize,
    pub orbit: usize,
    /// Squarefree polynomial whose roots are the images of `D_α` in the affine chart.
    pub support: String,
    pub support_degree: usize,
    /// Degree of `D_α` on the cover: the degree of `∏_w (wα)(t)` in `x`.
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub sum_ramification: usize,
    pub discriminant_degree: usize,
    pub half_weyl: usize,
    pub projective_discriminant_degree: usize,
    pub multiplicity_at_infinity: usize,
    pub holds: bool,
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Multiplicities of the distinct roots, from a squarefree decomposition.
fn root_multiplicities(p: &UPoly) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, fac) in p.squarefree_decomposition().iter().enumerate() {
        out.extend(std::iter::repeat_n(k + 1, fac.degree().unwrap_or(0)));
    }
    out
}

fn arrangements(mults: &[usize]) -> usize {
    factorial(mults.iter().sum()) / mults.iter().map(|&m| factorial(m)).product::<usize>()
}

/// `P(λ) = Q(λ²)` for an even polynomial.
fn even_part(p: &UPoly) -> UPoly {
    UPoly::new((0..=p.degree().unwrap_or(0) / 2).map(|k| p.coeff(2 * k)).collect())
}

/// Number of points of `𝔱` with the given characteristic polynomial (and Pfaffian).
fn count_by_multiplicities(f: &RealForm, charpoly: &UPoly) -> usize {
    match &f.spec.ambient {
        Ambient::SpecialLinear => arrangements(&root_multiplicities(charpoly)),
        Ambient::Symplectic(_) | Ambient::Orthogonal(_) => {
            let q = even_part(charpoly);
            let zero_mult = q.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
            let rest = q.div_rem(&UPoly::monomial(Scalar::one(), zero_mult)).0;
            let mut mults = root_multiplicities(&rest);
            let nonzero: usize = mults.iter().sum();
            if zero_mult > 0 {
                mults.push(zero_mult);
            }
            let signs = if matches!(f.spec.ambient, Ambient::Orthogonal(_)) && zero_mult == 0 {
                1usize << nonzero.saturating_sub(1)
            } else {
                1usize << nonzero
            };
            arrangements(&mults) * signs
        }
    }
}

impl CameralCover {
    pub fn build(base: &HitchinBasePoint) -> Result<Self> {
        let f = quasi_split_form(&base.form)?;
        let cd = f.chevalley()?;
        let rd = f.roots()?;
        let rhs: Vec<UPoly> = cd.iota.iter().map(|p| p.substitute_univariate(&base.sections)).collect();
        let r = f.rank();
        let root_poly = |i: usize| {
            let mut p = MPoly::zero(r);
            for (k, c) in rd.roots[i].coeffs.iter().enumerate() {
                p = &p + &MPoly::var(r, k).scale(c);
            }
            p
        };
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for &a in &rd.positive {
            if seen.contains(&a) {
                continue;
            }
            let roots: BTreeSet<usize> = rd.weyl_perm.iter().map(|p| p[a]).collect();
            seen.extend(roots.iter().copied());
            let positive: Vec<usize> = rd.positive.iter().copied().filter(|p| roots.contains(p)).collect();
            let mut delta = MPoly::one(r);
            for &p in &positive {
                delta = &delta * &root_poly(p).pow(2);
            }
            let invariant = express_in_generators(&cd.g_on_t, &cd.g_degrees, &delta)
                .ok_or_else(|| Error::Construction("root-orbit discriminant is not a polynomial in the invariants".into()))?;
            let base_poly = invariant.substitute_univariate(&rhs);
            orbits.push(RootOrbit { roots: roots.into_iter().collect(), positive, invariant, base_poly });
        }
        let mut discriminant_invariant = MPoly::one(r);
        let mut discriminant = UPoly::one();
        for o in &orbits {
            discriminant_invariant = &discriminant_invariant * &o.invariant;
            discriminant = &discriminant * &o.base_poly;
        }
        Ok(CameralCover {
            base: base.clone(),
            invariant_labels: cd.g_generators.iter().map(|k| k.label()).collect(),
            invariants: cd.g_on_t.clone(),
            rhs,
            everywhere_ramified: discriminant.is_zero(),
            discriminant_invariant,
            discriminant,
            orbits,
            weyl_order: rd.weyl_order(),
            positive_roots: rd.positive.len(),
        })
    }

    fn form(&self) -> &'static RealForm {
        self.base.real_form()
    }

    /// The defining equations `q_j(t) = ι(b(x))_j` as strings.
    pub fn equations(&self) -> Vec<String> {
        let names: Vec<String> = (0..self.form().rank()).map(|k| format!("t{}", k + 1)).collect();
        self.invariants.iter().zip(&self.rhs).map(|(q, b)| format!("{} = {}", q.display_with(&names), b)).collect()
    }

    pub fn discriminant_factors(&self) -> Vec<(String, usize)> {
        if self.everywhere_ramified {
            return vec![];
        }
        self.discriminant
            .squarefree_decomposition()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.degree().unwrap_or(0) > 0)
            .map(|(k, p)| (p.to_string(), k + 1))
            .collect()
    }

    /// The Higgs field `KR(b(x))` as a polynomial matrix in `x`.
    pub fn higgs_field(&self) -> Result<PolyMatrix> {
        let cd = self.form().chevalley()?;
        let km = cd.kr_matrix.as_ref().ok_or_else(|| Error::Domain("no section".into()))?;
        Ok(km.substitute(&self.base.sections.iter().map(MPoly::from_upoly).collect::<Vec<_>>()))
    }

    /// `χ(KR(b(x))) = b(x)` as polynomials.
    pub fn section_reproduces_base(&self) -> Result<bool> {
        let cd = self.form().chevalley()?;
        let hf = self.higgs_field()?;
        let inv = invariants_of(&hf, &cd.m_generators, None);
        Ok(inv.iter().zip(&self.base.sections).all(|(p, b)| p.to_upoly() == *b))
    }

    pub fn fiber_at(&self, x0: &Scalar) -> Result<Fiber> {
        let f = self.form();
        let cd = f.chevalley()?;
        let values: Vec<Scalar> = self.rhs.iter().map(|p| p.eval(x0)).collect();
        let kr = cd.kr_section(&self.base.eval(x0))?;
        let cp = kr.charpoly();
        let ramified = self.discriminant.eval(x0).is_zero();
        let count = count_by_multiplicities(f, &cp);
        let mut fiber = Fiber {
            x0: x0.clone(),
            base_values: values.clone(),
            charpoly: cp.to_string(),
            count,
            ramified,
            method: CountMethod::Multiplicities,
            points: None,
            transitive: None,
        };
        if cp.splits() {
            let pts = enumerate_fiber(f, &cp, &values)?;
            if pts.len() != count {
                return Err(Error::Construction(format!("enumerated {} fiber points but multiplicities give {count}", pts.len())));
            }
            let rd = f.roots()?;
            let orbit: BTreeSet<Vec<Scalar>> = rd.weyl.iter().map(|w| w.mul_vec(&pts[0])).collect();
            fiber.transitive = Some(orbit == pts.iter().cloned().collect());
            fiber.points = Some(pts);
            fiber.method = CountMethod::Enumeration;
        }
        Ok(fiber)
    }

    pub fn ramification_divisor(&self, root: usize) -> Result<RamificationDivisor> {
        let rd = self.form().roots()?;
        if !rd.positive.contains(&root) {
            return Err(Error::Usage(format!("root {root} is not positive")));
        }
        let (k, o) = self.orbits.iter().enumerate().find(|(_, o)| o.roots.contains(&root)).unwrap();
        let support = if o.base_poly.is_zero() { UPoly::zero() } else { o.base_poly.squarefree_part() };
        let norm = self.norm(k);
        Ok(RamificationDivisor {
            root,
            orbit: k,
            support_degree: support.degree().unwrap_or(0),
            support: support.to_string(),
            degree: norm.degree().unwrap_or(0),
        })
    }

    /// `N_α(x) = ∏_w (wα)(t) = ((−1)^{|O⁺|} Δ_O)^{|W|/|O|}` for `α` in orbit `k`.
    pub fn norm(&self, k: usize) -> UPoly {
        let o = &self.orbits[k];
        let sign = if o.positive.len() % 2 == 1 { -Scalar::one() } else { Scalar::one() };
        o.base_poly.scale(&sign).pow((self.weyl_order / o.roots.len()) as u32)
    }

    pub fn ramification(&self) -> Result<Vec<RamificationDivisor>> {
        let rd = self.form().roots()?;
        rd.positive.iter().map(|&a| self.ramification_divisor(a)).collect()
    }

    /// `Σ_{α>0} deg D_α = |W|/2 · deg Δ(ι(b))` on the affine chart, plus the projective count `2Nℓ`.
    pub fn degree_check(&self) -> Result<DegreeCheck> {
        let sum: usize = self.ramification()?.iter().map(|d| d.degree).sum();
        let deg = self.discriminant.degree().unwrap_or(0);
        let proj = 2 * self.positive_roots * self.base.line_bundle_degree as usize;
        Ok(DegreeCheck {
            sum_ramification: sum,
            discriminant_degree: deg,
            half_weyl: self.weyl_order / 2,
            projective_discriminant_degree: proj,
            multiplicity_at_infinity: proj.saturating_sub(deg),
            holds: !self.everywhere_ramified && sum == self.weyl_order / 2 * deg && deg <= proj,
        })
    }

    /// The cover in the chart at infinity.
    pub fn at_infinity(&self) -> Result<CameralCover> {
        CameralCover::build(&self.base.at_infinity())
    }

    pub fn real_subcover(&self) -> Result<RealSubcover<'_>> {
        let f = self.form();
        let rd = f.roots()?;
        let rr = f.restricted()?;
        let stab = stabilizer_inclusion_test(f, rd, rr)?;
        let cd = f.chevalley()?;
        let mut delta = MPoly::one(f.real_rank());
        for &p in &rr.positive {
            let mut l = MPoly::zero(f.real_rank());
            for (k, c) in rr.roots[p].coeffs.iter().enumerate() {
                l = &l + &MPoly::var(f.real_rank(), k).scale(c);
            }
            delta = &delta * &l.pow(2);
        }
        let restricted_discriminant = express_in_generators(&cd.m_restricted, &cd.m_degrees, &delta)
            .ok_or_else(|| Error::Construction("restricted discriminant is not a polynomial in the generators".into()))?;
        Ok(RealSubcover { parent: self, stabilizer_holds: stab.holds, restricted_discriminant, restricted_weyl_order: rr.weyl_order() })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base.to_json(),
            "invariants": self.invariant_labels,
            "equations": self.equations(),
            "discriminant": self.discriminant.to_string(),
            "discriminant_factors": self.discriminant_factors(),
            "everywhere_ramified": self.everywhere_ramified,
            "weyl_order": self.weyl_order,
            "positive_roots": self.positive_roots,
            "root_orbits": self.orbits.iter().map(|o| serde_json::json!({
                "roots": o.roots,
                "positive": o.positive,
                "base_poly": o.base_poly.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// All `t ∈ 𝔱` with the given invariant values, when the eigenvalues lie in ℚ(i).
fn enumerate_fiber(f: &RealForm, charpoly: &UPoly, values: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    let rd = f.roots()?;
    let cd = f.chevalley()?;
    let (roots, _) = charpoly.gaussian_roots();
    let mut eig: Vec<Scalar> = roots.iter().flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m)).collect();
    eig.sort();
    let sel = independent_subset(&rd.weights);
    let m = Matrix::from_rows(sel.iter().map(|&i| rd.weights[i].clone()).collect());
    let minv = m.inverse().ok_or_else(|| Error::Construction("weights do not span".into()))?;
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; sel.len()];
    let n = eig.len();
    loop {
        let distinct = (0..idx.len()).all(|i| (0..i).all(|j| idx[i] != idx[j]));
        if distinct {
            let mu: Vec<Scalar> = idx.iter().map(|&k| eig[k].clone()).collect();
            let t = minv.mul_vec(&mu);
            let mut all: Vec<Scalar> = rd.weights.iter().map(|w| w.iter().zip(&t).map(|(a, b)| a * b).sum()).collect();
            all.sort();
            if all == eig && cd.g_on_t_eval(&t) == values {
                out.insert(t);
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out.into_iter().collect());
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The sub-cover cut out by `t ∈ 𝔞`.
#[derive(Clone, Debug)]
pub struct RealSubcover<'a> {
    pub parent: &'a CameralCover,
    /// Result of the stabilizer characterization; when false the sub-cover is only a `W(𝔞)`-subcover
    /// away from ramification determined by `W(𝔞)`.
    pub stabilizer_holds: bool,
    pub restricted_discriminant: MPoly,
    pub restricted_weyl_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubFiber {
    pub count: usize,
    pub method: CountMethod,
    pub points: Option<Vec<Vec<Scalar>>>,
    /// Every point solves the parent equations.
    pub in_parent: bool,
    pub restricted_weyl_stable: Option<bool>,
}

impl RealSubcover<'_> {
    pub fn fiber_at(&self, x0: &Scalar) -> Result<SubFiber> {
        let f = self.parent.form();
        let a = f.real_rank();
        let parent = self.parent.fiber_at(x0)?;
        if let Some(pts) = &parent.points {
            let sub: Vec<Vec<Scalar>> = pts.iter().filter(|t| t[a..].iter().all(Scalar::is_zero)).cloned().collect();
            let cd = f.chevalley()?;
            let in_parent = sub.iter().all(|t| cd.g_on_t_eval(t) == parent.base_values);
            let rr = f.restricted()?;
            let set: BTreeSet<Vec<Scalar>> = sub.iter().map(|t| t[..a].to_vec()).collect();
            let stable = set.iter().all(|s| rr.weyl.iter().all(|w| set.contains(&w.mul_vec(s))));
            return Ok(SubFiber {
                count: sub.len(),
                method: CountMethod::Enumeration,
                points: Some(sub),
                in_parent,
                restricted_weyl_stable: Some(stable),
            });
        }
        let b = self.parent.base.eval(x0);
        let cd = f.chevalley()?;
        if a == 1 {
            let p = &cd.m_restricted[0].to_upoly() - &UPoly::constant(b[0].clone());
            return Ok(SubFiber {
                count: p.squarefree_part().degree().unwrap_or(0),
                method: CountMethod::Multiplicities,
                points: None,
                in_parent: true,
                restricted_weyl_stable: None,
            });
        }
        if self.restricted_discriminant.eval(&b).is_zero() {
            return Err(Error::Unsupported("sub-cover fiber on the restricted discriminant without rational points".into()));
        }
        Ok(SubFiber {
            count: self.restricted_weyl_order,
            method: CountMethod::Discriminant,
            points: None,
            in_parent: true,
            restricted_weyl_stable: None,
        })
    }

    /// The real sub-cover coincides with the cover (split forms).
    pub fn is_whole_cover(&self) -> bool {
        self.parent.form().real_rank() == self.parent.form().rank()
    }
}
