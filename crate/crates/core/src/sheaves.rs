//! Torus-valued sections over finite cameral fibers: the ramification conditions,
//! extension by equivariance, enumeration, the involution and degree-level fixed points.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::RealForm;
use crate::matrix::Matrix;
use crate::roots::{reflection, RootDatum};
use crate::scalar::Scalar;
use crate::torus::{TorusData, TorusElem};

/// A finite set of points of `𝔱` stable under a subgroup of `W`.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteCameralFiber {
    pub points: Vec<Vec<Scalar>>,
    /// Indices into the Weyl group of the acting elements.
    pub group: Vec<usize>,
    /// `action[g][p]`: index of `group[g]·points[p]`.
    pub action: Vec<Vec<usize>>,
    /// Per point, the indices in `W` (all of it) fixing the point.
    pub ramification_tags: Vec<Vec<usize>>,
}

/// A section: one torus element per fiber point.
pub type Section = Vec<TorusElem>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Equivariance {
        point: usize,
        weyl: usize,
    },
    /// `α(s(x))` has the forbidden value at a point fixed by `s_α`; `value` is the exponent of `α(s(x))` in `[0,1)`.
    Ramification {
        point: usize,
        root: usize,
        value: String,
    },
    NotInTTheta {
        point: usize,
    },
    /// `f(x) ∉ (T_θ^w)⁰` although `w·x = x`.
    IdentityComponent {
        point: usize,
        weyl: usize,
    },
    Length {
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    pub equivariant: bool,
    /// The pointwise clause alone (ramification or identity-component conditions).
    pub pointwise: bool,
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    fn from(violations: Vec<Violation>) -> Self {
        let equivariant = !violations.iter().any(|v| matches!(v, Violation::Equivariance { .. } | Violation::Length { .. }));
        let pointwise = !violations.iter().any(|v| !matches!(v, Violation::Equivariance { .. }));
        ConditionReport { holds: violations.is_empty(), equivariant, pointwise, violations }
    }
}

impl FiniteCameralFiber {
    /// Builds a fiber acted on by `group`; fails if the points are not stable.
    pub fn new(f: &RealForm, points: Vec<Vec<Scalar>>, group: Vec<usize>) -> Result<Self> {
        let rd = f.roots()?;
        let mut action = Vec::with_capacity(group.len());
        for &w in &group {
            let row: Option<Vec<usize>> = points
                .iter()
                .map(|p| {
                    let q = rd.weyl[w].mul_vec(p);
                    points.iter().position(|x| *x == q)
                })
                .collect();
            action.push(row.ok_or_else(|| Error::Domain("point set is not stable under the group".into()))?);
        }
        let ramification_tags = points.iter().map(|p| rd.stabilizer(p)).collect();
        Ok(FiniteCameralFiber { points, group, action, ramification_tags })
    }

    /// The `W`-orbit of a point.
    pub fn orbit(f: &RealForm, t0: &[Scalar]) -> Result<Self> {
        let rd = f.roots()?;
        let pts: BTreeSet<Vec<Scalar>> = rd.weyl.iter().map(|w| w.mul_vec(t0)).collect();
        Self::new(f, pts.into_iter().collect(), (0..rd.weyl.len()).collect())
    }

    /// The `W(𝔞)`-orbit of a point of 𝔞 given in 𝔞 coordinates, acted on through θ-commuting lifts.
    pub fn real_orbit(f: &RealForm, s0: &[Scalar]) -> Result<Self> {
        let rr = f.restricted()?;
        let mut t0 = s0.to_vec();
        t0.resize(f.rank(), Scalar::zero());
        let rd = f.roots()?;
        let pts: BTreeSet<Vec<Scalar>> = rr.lift.iter().map(|&w| rd.weyl[w].mul_vec(&t0)).collect();
        Self::new(f, pts.into_iter().collect(), rr.lift.clone())
    }

    /// Points of a full fiber lying in 𝔞, with the `W(𝔞)` action.
    pub fn real_part(&self, f: &RealForm) -> Result<Self> {
        let a = f.real_rank();
        let pts = self.points.iter().filter(|t| t[a..].iter().all(Scalar::is_zero)).cloned().collect();
        Self::new(f, pts, f.restricted()?.lift.clone())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Representatives of the group orbits on points.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut reps = Vec::new();
        for p in 0..self.len() {
            if seen[p] {
                continue;
            }
            reps.push(p);
            for row in &self.action {
                seen[row[p]] = true;
            }
        }
        reps
    }
}

/// Index in `W` of the reflection in each root.
pub fn reflection_indices(rd: &RootDatum) -> Vec<usize> {
    rd.roots
        .iter()
        .map(|r| {
            let m = reflection(&r.coeffs, &r.coroot);
            rd.weyl.iter().position(|w| *w == m).expect("reflections lie in W")
        })
        .collect()
}

fn equivariance_violations(fiber: &FiniteCameralFiber, td: &TorusData, s: &Section) -> Vec<Violation> {
    let mut v = Vec::new();
    for (g, row) in fiber.action.iter().enumerate() {
        let w = fiber.group[g];
        for p in 0..fiber.len() {
            if s[row[p]] != td.weyl_apply(w, &s[p]) {
                v.push(Violation::Equivariance { point: p, weyl: w });
            }
        }
    }
    v
}

fn length_check(fiber: &FiniteCameralFiber, s: &Section) -> Option<ConditionReport> {
    (s.len() != fiber.len()).then(|| ConditionReport::from(vec![Violation::Length { expected: fiber.len(), found: s.len() }]))
}

fn ramification_check(
    f: &RealForm,
    fiber: &FiniteCameralFiber,
    s: &Section,
    forbidden: impl Fn(&BigRational) -> bool,
) -> Result<ConditionReport> {
    if let Some(r) = length_check(fiber, s) {
        return Ok(r);
    }
    let rd = f.roots()?;
    let td = f.torus()?;
    let refl = reflection_indices(rd);
    let mut v = equivariance_violations(fiber, td, s);
    for p in 0..fiber.len() {
        for &a in &rd.positive {
            if fiber.ramification_tags[p].contains(&refl[a]) {
                let c = td.root_character(f, a, &s[p]);
                if forbidden(&c) {
                    v.push(Violation::Ramification { point: p, root: a, value: c.to_string() });
                }
            }
        }
    }
    Ok(ConditionReport::from(v))
}

/// Equivariance and `α(s(x)) ≠ −1` wherever `s_α` fixes `x`.
pub fn check_t_condition_dg(f: &RealForm, fiber: &FiniteCameralFiber, s: &Section) -> Result<ConditionReport> {
    let half = BigRational::new(1.into(), 2.into());
    ramification_check(f, fiber, s, |c| *c == half)
}

/// Equivariance and `α(s(x)) = 1` wherever `s_α` fixes `x`.
pub fn check_t_condition_ngo(f: &RealForm, fiber: &FiniteCameralFiber, s: &Section) -> Result<ConditionReport> {
    ramification_check(f, fiber, s, |c| !c.is_zero())
}

/// `W(𝔞)`-equivariance, values in `T_θ`, and `f(x) ∈ (T_θ^w)⁰` for every `w ≠ 1` fixing `x`.
pub fn check_ttheta_condition(f: &RealForm, fiber: &FiniteCameralFiber, s: &Section) -> Result<ConditionReport> {
    if let Some(r) = length_check(fiber, s) {
        return Ok(r);
    }
    let td = f.torus()?;
    let id = f.roots()?.identity_index();
    let mut v = equivariance_violations(fiber, td, s);
    for (p, t) in s.iter().enumerate() {
        if !td.in_t_theta(t) {
            v.push(Violation::NotInTTheta { point: p });
        }
        for &w in &fiber.ramification_tags[p] {
            if w != id && !td.in_fixed_identity_component(f, w, t)? {
                v.push(Violation::IdentityComponent { point: p, weyl: w });
            }
        }
    }
    Ok(ConditionReport::from(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub point: usize,
    /// Two ways `(w, x)` of reaching the point that give different values.
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// Extends `f` on the real part to the full fiber by `s(w·x) = w·f(x)`.
pub fn extend_by_equivariance(
    f: &RealForm,
    real: &FiniteCameralFiber,
    values: &Section,
    full: &FiniteCameralFiber,
) -> Result<std::result::Result<Section, Obstruction>> {
    let rd = f.roots()?;
    let td = f.torus()?;
    if values.len() != real.len() {
        return Err(Error::Usage("section length does not match the fiber".into()));
    }
    let mut out: Vec<Option<(TorusElem, (usize, usize))>> = vec![None; full.len()];
    for (x, pt) in real.points.iter().enumerate() {
        for w in 0..rd.weyl.len() {
            let y = rd.weyl[w].mul_vec(pt);
            let yi =
                full.points.iter().position(|q| *q == y).ok_or_else(|| Error::Domain("real fiber is not inside the full fiber".into()))?;
            let val = td.weyl_apply(w, &values[x]);
            match &out[yi] {
                None => out[yi] = Some((val, (w, x))),
                Some((prev, how)) if *prev != val => {
                    return Ok(Err(Obstruction { point: yi, first: *how, second: (w, x) }));
                }
                _ => {}
            }
        }
    }
    let s: Option<Section> = out.into_iter().map(|o| o.map(|p| p.0)).collect();
    s.map(Ok).ok_or_else(|| Error::Domain("full fiber is not a single orbit of the real part".into()))
}

/// All sections with values in a finite `W(𝔞)`-stable subgroup passing the `T_θ` condition.
pub fn enumerate_sections_finite(f: &RealForm, fiber: &FiniteCameralFiber, values: &[TorusElem]) -> Result<Vec<Section>> {
    if values.is_empty() {
        return Err(Error::Usage("value group must be a nonempty finite list".into()));
    }
    let td = f.torus()?;
    let id = f.roots()?.identity_index();
    let reps = fiber.orbit_representatives();
    // admissible values at each representative
    let mut choices: Vec<Vec<&TorusElem>> = Vec::new();
    for &p in &reps {
        let mut ok = Vec::new();
        for v in values {
            let fixed = fiber.action.iter().enumerate().all(|(g, row)| row[p] != p || td.weyl_apply(fiber.group[g], v) == *v);
            if !fixed || !td.in_t_theta(v) {
                continue;
            }
            let mut good = true;
            for &w in &fiber.ramification_tags[p] {
                if w != id && !td.in_fixed_identity_component(f, w, v)? {
                    good = false;
                    break;
                }
            }
            if good {
                ok.push(v);
            }
        }
        choices.push(ok);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; reps.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut s: Vec<Option<TorusElem>> = vec![None; fiber.len()];
        for (k, &p) in reps.iter().enumerate() {
            let v = choices[k][idx[k]];
            for (g, row) in fiber.action.iter().enumerate() {
                s[row[p]] = Some(td.weyl_apply(fiber.group[g], v));
            }
        }
        out.push(s.into_iter().map(|x| x.expect("orbits cover the fiber")).collect());
        let mut k = 0;
        loop {
            if k == reps.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `s′(x) = θ(s(−θx))`.
pub fn involution_theta(f: &RealForm, fiber: &FiniteCameralFiber, s: &Section) -> Result<Section> {
    let rd = f.roots()?;
    let td = f.torus()?;
    let eta = rd.theta_t.scale(&-Scalar::from(1));
    let mut out = Vec::with_capacity(s.len());
    for p in &fiber.points {
        let q = eta.mul_vec(p);
        let qi =
            fiber.points.iter().position(|x| *x == q).ok_or_else(|| Error::Domain("fiber is not stable under the involution".into()))?;
        out.push(td.theta_apply(&s[qi]));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleDegreeCheck {
    pub degree: Vec<i64>,
    pub theta_image: Vec<String>,
    pub fixed: bool,
    /// How the cover involution acts on multidegrees in this model.
    pub eta_reading: &'static str,
}

/// A `T`-bundle of multidegree `d` (coordinates in the cocharacter lattice basis) is fixed
/// exactly when `θ_* d = d`.
pub fn fixed_point_bundle_check(f: &RealForm, degree: &[i64]) -> Result<BundleDegreeCheck> {
    let td = f.torus()?;
    let basis = td.lattice.basis();
    if degree.len() != basis.len() {
        return Err(Error::Usage(format!("expected {} lattice coordinates", basis.len())));
    }
    let mut c = vec![BigRational::zero(); td.n];
    for (d, b) in degree.iter().zip(basis) {
        for (x, y) in c.iter_mut().zip(b) {
            *x += BigRational::from_integer((*d).into()) * y;
        }
    }
    let img: Vec<BigRational> =
        td.theta.perm.iter().zip(&td.theta.negate).map(|(&p, &neg)| if neg { -c[p].clone() } else { c[p].clone() }).collect();
    Ok(BundleDegreeCheck {
        degree: degree.to_vec(),
        theta_image: img.iter().map(|x| x.to_string()).collect(),
        fixed: img == c,
        eta_reading: "identity on multidegrees",
    })
}

/// `θ` on lattice coordinates computed through `𝔱`, independent of the weight permutation.
pub fn theta_on_lattice(f: &RealForm) -> Result<Matrix> {
    let rd = f.roots()?;
    let td = f.torus()?;
    let w = Matrix::from_rows(td.weight_matrix.clone());
    let basis: Vec<Vec<Scalar>> = td.lattice.basis().iter().map(|b| b.iter().map(|x| Scalar::real(x.clone())).collect()).collect();
    let mut cols = Vec::new();
    for b in &basis {
        let h = w.solve_one(b).ok_or_else(|| Error::Construction("lattice vector outside the weight image".into()))?;
        let c = w.mul_vec(&rd.theta_t.mul_vec(&h));
        cols.push(crate::matrix::coordinates_in(&basis, &c).ok_or_else(|| Error::Construction("θ does not preserve the lattice".into()))?);
    }
    Ok(Matrix::from_cols(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::form;

    fn q(n: i64) -> Scalar {
        Scalar::int(n)
    }

    /// An element of `T_θ` with root value `exp(πi k)`.
    fn quarter(td: &TorusData, k: i64) -> TorusElem {
        let target = BigRational::new(k.into(), 2.into()) % BigRational::from_integer(1.into());
        td.t_theta.iter().find(|t| t.character(0, 1) == target).unwrap().clone()
    }

    #[test]
    fn sl2_counts() {
        let f = form("sl2R").unwrap();
        let td = f.torus().unwrap();
        let free = FiniteCameralFiber::real_orbit(f, &[q(3)]).unwrap();
        assert_eq!(free.len(), 2);
        assert_eq!(enumerate_sections_finite(f, &free, &td.t_theta).unwrap().len(), 4);
        let ram = FiniteCameralFiber::real_orbit(f, &[q(0)]).unwrap();
        let secs = enumerate_sections_finite(f, &ram, &td.t_theta).unwrap();
        assert_eq!(secs.len(), 1);
        assert!(secs[0][0].is_identity());
        let empty = FiniteCameralFiber::new(f, vec![], vec![0]).unwrap();
        assert_eq!(enumerate_sections_finite(f, &empty, &td.t_theta).unwrap(), vec![Vec::<TorusElem>::new()]);
    }

    #[test]
    fn dg_and_ngo_differ() {
        let f = form("sl2R").unwrap();
        let td = f.torus().unwrap();
        let ram = FiniteCameralFiber::orbit(f, &[q(0)]).unwrap();
        // α(s) = −1 at the ramified point
        let minus = quarter(td, 1);
        let r = check_t_condition_dg(f, &ram, &vec![minus.clone()]).unwrap();
        assert!(!r.pointwise);
        assert!(!check_t_condition_ngo(f, &ram, &vec![minus]).unwrap().pointwise);
        // α(s) = i: allowed by the first clause, not by the second; never equivariant here
        let fourth = td.torsion_points(8).into_iter().find(|t| t.character(0, 1) == BigRational::new(1.into(), 4.into())).unwrap();
        let dg = check_t_condition_dg(f, &ram, &vec![fourth.clone()]).unwrap();
        let ngo = check_t_condition_ngo(f, &ram, &vec![fourth]).unwrap();
        assert!(dg.pointwise && !ngo.pointwise);
        assert!(!dg.equivariant);
        // an element with α(s) = 1 but s ≠ 1 on the center passes both
        let id = TorusElem::identity(td.n);
        assert!(check_t_condition_dg(f, &ram, &vec![id.clone()]).unwrap().holds);
        assert!(check_t_condition_ngo(f, &ram, &vec![id]).unwrap().holds);
    }

    #[test]
    fn extension_and_obstruction() {
        let f = form("sl2R").unwrap();
        let td = f.torus().unwrap();
        let real = FiniteCameralFiber::real_orbit(f, &[q(2)]).unwrap();
        let full = FiniteCameralFiber::orbit(f, &real.points[0]).unwrap();
        for s in enumerate_sections_finite(f, &real, &td.t_theta).unwrap() {
            let ext = extend_by_equivariance(f, &real, &s, &full).unwrap().unwrap();
            assert!(check_t_condition_ngo(f, &full, &ext).unwrap().holds);
            let back = involution_theta(f, &real, &s).unwrap();
            assert_eq!(involution_theta(f, &real, &back).unwrap(), s);
        }
        let ram = FiniteCameralFiber::real_orbit(f, &[q(0)]).unwrap();
        let bad = td.t_theta.iter().find(|t| td.weyl_apply(1, t) != **t).unwrap().clone();
        assert!(!check_ttheta_condition(f, &ram, &vec![bad.clone()]).unwrap().holds);
        assert!(extend_by_equivariance(f, &ram, &vec![bad], &ram).unwrap().is_err());
    }

    #[test]
    fn bundle_degrees() {
        let f = form("sl2R").unwrap();
        assert!(fixed_point_bundle_check(f, &[0]).unwrap().fixed);
        assert!(!fixed_point_bundle_check(f, &[1]).unwrap().fixed);
        let f = form("su22").unwrap();
        let th = theta_on_lattice(f).unwrap();
        let r = f.torus().unwrap().lattice.basis().len();
        for d in [[1i64, 0, 0], [1, 1, 0], [0, 1, -1], [2, -1, 1]] {
            let d = &d[..r];
            let v: Vec<Scalar> = d.iter().map(|x| q(*x)).collect();
            assert_eq!(fixed_point_bundle_check(f, d).unwrap().fixed, th.mul_vec(&v) == v);
        }
    }
}
