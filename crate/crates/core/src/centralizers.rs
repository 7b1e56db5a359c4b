//! Regular centralizers in `H` and `G_θ`, the finite groups `F`, `F²`, component bookkeeping,
//! the tangent smoothness criterion and orbit-merge witnesses.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{RealForm, Subgroup};
use crate::lie::{abelian_witness, exp_nilpotent, is_nilpotent, spectral_projectors, MatrixSpace};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::torus::{GroupElem, TorusData, TorusElem};

/// How the component witnesses of a fiber were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberRoute {
    /// `x ∈ 𝔞` regular: the centralizer in `G` is the maximal torus.
    Torus,
    /// Regular nilpotent: the centralizer is `Z(G)` times a connected unipotent group.
    Nilpotent,
    /// Anything else: the Lie part plus central elements; components may be missing.
    Generic,
}

#[derive(Clone, Debug)]
pub struct CentralizerFiber {
    pub base_point: Matrix,
    pub group: Subgroup,
    pub lie_part: MatrixSpace,
    pub route: FiberRoute,
    pub component_witnesses: Vec<GroupElem>,
    pub components_complete: bool,
    pub is_abelian: bool,
    pub non_abelian_witness: Option<(Matrix, Matrix)>,
}

impl CentralizerFiber {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base_point": self.base_point.to_json(),
            "group": match self.group { Subgroup::H => "H", Subgroup::GTheta => "Gtheta" },
            "lie_part_dim": self.lie_part.dim(),
            "lie_part": self.lie_part.basis().iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "route": self.route,
            "components_found": self.component_witnesses.len(),
            "component_witnesses": self.component_witnesses,
            "components_complete": self.components_complete,
            "is_abelian": self.is_abelian,
            "non_abelian_witness": self.non_abelian_witness.as_ref().map(|(a, b)| vec![a.to_json(), b.to_json()]),
        })
    }
}

/// A finite abelian group of torus points with its multiplication table.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteGroupData {
    pub elements: Vec<TorusElem>,
    pub multiplication_table: Vec<Vec<usize>>,
}

impl FiniteGroupData {
    pub fn new(elements: Vec<TorusElem>) -> Result<Self> {
        let idx = |t: &TorusElem| elements.iter().position(|e| e == t);
        let mut table = Vec::with_capacity(elements.len());
        for a in &elements {
            let row: Option<Vec<usize>> = elements.iter().map(|b| idx(&a.mul(b))).collect();
            table.push(row.ok_or_else(|| Error::Construction("element list is not closed under products".into()))?);
            if idx(&a.inv()).is_none() {
                return Err(Error::Construction("element list is not closed under inverses".into()));
            }
        }
        Ok(FiniteGroupData { elements, multiplication_table: table })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Orders of the elements, sorted; determines a finite abelian group.
    pub fn element_orders(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.elements.iter().map(|t| u64::try_from(t.order()).unwrap_or(u64::MAX)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_orders().last().copied() == Some(self.order() as u64)
    }

    pub fn matrices(&self, td: &TorusData) -> Vec<Option<Matrix>> {
        self.elements.iter().map(|t| td.to_matrix(t)).collect()
    }
}

fn require_quasi_split(f: &RealForm) -> Result<()> {
    if f.quasi_split() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} is not quasi-split", f.name())))
    }
}

/// `F = {a ∈ exp(𝔞) : a² ∈ Z(G)}` and `F²`.
pub fn compute_f(f: &RealForm) -> Result<(FiniteGroupData, FiniteGroupData)> {
    require_quasi_split(f)?;
    let td = f.torus()?;
    Ok((FiniteGroupData::new(td.f_group.clone())?, FiniteGroupData::new(td.f_squared.clone())?))
}

/// `g⁻¹θ(g)` for a torus point, a central element when `g ∈ T_θ`.
fn defect(td: &TorusData, t: &TorusElem) -> TorusElem {
    td.theta_apply(t).mul(&t.inv())
}

fn center_in(td: &TorusData, group: Subgroup) -> Vec<TorusElem> {
    td.center.iter().filter(|z| group == Subgroup::GTheta || td.theta_apply(z) == **z).cloned().collect()
}

pub fn in_a(f: &RealForm, x: &Matrix) -> bool {
    f.dec.a.contains(x)
}

pub fn centralizer_fiber(f: &RealForm, x: &Matrix, group: Subgroup) -> Result<CentralizerFiber> {
    if !f.in_m(x) {
        return Err(Error::Usage("point is not in m".into()));
    }
    if !f.is_regular(x) {
        return Err(Error::Domain("point is not regular".into()));
    }
    let lie_part = f.dec.h.centralizer_of(std::slice::from_ref(x));
    let qs = f.quasi_split();
    let td = f.torus().ok();
    let (route, witnesses, complete) = match td {
        Some(td) if qs && in_a(f, x) => {
            let grp = if group == Subgroup::H { &td.d_group } else { &td.t_theta };
            (FiberRoute::Torus, td.components_mod_compact(grp), true)
        }
        Some(td) if qs && is_nilpotent(x) => (FiberRoute::Nilpotent, center_in(td, group), true),
        Some(td) => (FiberRoute::Generic, center_in(td, group), false),
        None => (FiberRoute::Generic, vec![], false),
    };
    let witnesses: Vec<GroupElem> = witnesses.into_iter().map(GroupElem::Torus).collect();
    if let Some(td) = td {
        for w in &witnesses {
            if w.conjugate(x, td).as_ref() != Some(x) && !matches!(w, GroupElem::Torus(t) if td.commutes_with(t, x)) {
                return Err(Error::Construction("component witness does not centralize the point".into()));
            }
        }
    }
    let non_abelian_witness = abelian_witness(lie_part.basis());
    let mut is_abelian = non_abelian_witness.is_none();
    if let Some(td) = td {
        let lie: Vec<GroupElem> = lie_part.basis().iter().cloned().map(GroupElem::Matrix).collect();
        is_abelian &= witnesses.iter().all(|a| witnesses.iter().chain(&lie).all(|b| a.commutes(b, td)));
    }
    Ok(CentralizerFiber {
        base_point: x.clone(),
        group,
        lie_part,
        route,
        component_witnesses: witnesses,
        components_complete: complete,
        is_abelian,
        non_abelian_witness,
    })
}

/// `(ℱ²)_x`: the values `g⁻¹θ(g)` over `g ∈ C_θ,x`, a subgroup of `F²`.
pub fn f_squared_at(f: &RealForm, x: &Matrix) -> Result<Vec<TorusElem>> {
    require_quasi_split(f)?;
    let td = f.torus()?;
    let src: Vec<TorusElem> = if in_a(f, x) && f.is_regular(x) {
        td.t_theta.clone()
    } else if is_nilpotent(x) && f.is_regular(x) {
        td.center.clone()
    } else {
        return Err(Error::Unsupported("component data is only available on a and on the regular nilpotent cone".into()));
    };
    Ok(src.iter().map(|t| defect(td, t)).collect::<BTreeSet<_>>().into_iter().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactSequenceCheck {
    pub components_h: usize,
    pub components_gtheta: usize,
    pub f_squared_at_x: usize,
    pub f_squared_inside: bool,
    pub holds: bool,
}

/// `|π₀ C_θ,x| = |π₀ C^θ_x| · |(ℱ²)_x|`.
pub fn exact_sequence_check(f: &RealForm, x: &Matrix) -> Result<ExactSequenceCheck> {
    let ch = centralizer_fiber(f, x, Subgroup::H)?;
    let cg = centralizer_fiber(f, x, Subgroup::GTheta)?;
    if !ch.components_complete || !cg.components_complete {
        return Err(Error::Unsupported("component enumeration is incomplete at this point".into()));
    }
    let f2x = f_squared_at(f, x)?;
    let td = f.torus()?;
    let inside = f2x.iter().all(|t| td.f_squared.contains(t));
    let (a, b) = (ch.component_witnesses.len(), cg.component_witnesses.len());
    Ok(ExactSequenceCheck {
        components_h: a,
        components_gtheta: b,
        f_squared_at_x: f2x.len(),
        f_squared_inside: inside,
        holds: inside && b == a * f2x.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentCheck {
    pub subspace_dim: usize,
    pub m_dim: usize,
    pub passes: bool,
}

/// Computes `{y ∈ 𝔪 : y − h⁻¹yh ∈ ad(x)𝔥}` and compares it with 𝔪.
pub fn smoothness_tangent_check(f: &RealForm, x: &Matrix, h: &Matrix) -> Result<TangentCheck> {
    if !f.in_m(x) {
        return Err(Error::Usage("point is not in m".into()));
    }
    let hinv = h.inverse().ok_or_else(|| Error::Domain("group element is singular".into()))?;
    if h * x != x * h {
        return Err(Error::Domain("group element does not centralize the point".into()));
    }
    if !f.in_h(h) {
        return Err(Error::Domain("group element is not in H".into()));
    }
    let m = &f.dec.m;
    let image = MatrixSpace::span(f.n(), &f.dec.h.basis().iter().map(|y| x.bracket(y)).collect::<Vec<_>>());
    let k = m.dim();
    let mut cols: Vec<Vec<Scalar>> = m
        .basis()
        .iter()
        .map(|b| {
            let v = b - &(&(&hinv * b) * h);
            m.coords(&v).expect("H preserves m")
        })
        .collect();
    for w in image.basis() {
        cols.push(m.coords(w).expect("[m, h] lies in m").into_iter().map(|c| -c).collect());
    }
    let ker = Matrix::from_cols(&cols).kernel();
    let proj: Vec<Vec<Scalar>> = ker.into_iter().map(|v| v[..k].to_vec()).collect();
    let dim = if proj.is_empty() { 0 } else { Matrix::from_rows(proj).rank() };
    Ok(TangentCheck { subspace_dim: dim, m_dim: k, passes: dim == k })
}

#[derive(Clone, Debug, Serialize)]
pub struct MergeWitness {
    pub element: TorusElem,
    pub matrix: Option<Matrix>,
    pub image: Option<Matrix>,
    pub defect: TorusElem,
}

/// Whether `Ad(g)x` leaves the `H`-orbit of the regular nilpotent `x`, for `g ∈ G_θ`.
pub fn moves_orbit(f: &RealForm, x: &Matrix, g: &Matrix) -> Result<bool> {
    if !f.in_gtheta(g) {
        return Err(Error::Domain("element is not in G_theta".into()));
    }
    let td = f.torus()?;
    let c = &g.inverse().unwrap() * &f.theta_group(g);
    let z = td.from_matrix(&c).ok_or_else(|| Error::Unsupported("central defect is not a power of i".into()))?;
    Ok(!f_squared_at(f, x)?.contains(&z))
}

/// An element of `F` moving the regular nilpotent `x` to a different `H`-orbit.
pub fn orbit_merge_witness(f: &RealForm, x: &Matrix) -> Result<Option<MergeWitness>> {
    if !is_nilpotent(x) {
        return Err(Error::Domain("point is not nilpotent".into()));
    }
    if !f.in_m(x) || !f.is_regular(x) {
        return Err(Error::Domain("point is not a regular nilpotent of m".into()));
    }
    let td = f.torus()?;
    let f2x = f_squared_at(f, x)?;
    let mut cands: Vec<&TorusElem> = td.f_group.iter().collect();
    // prefer witnesses with an exact matrix
    cands.sort_by_key(|t| (td.to_matrix(t).is_none(), (*t).clone()));
    for a in cands {
        let d = defect(td, a);
        if !f2x.contains(&d) {
            return Ok(Some(MergeWitness { element: a.clone(), matrix: td.to_matrix(a), image: td.conjugate(a, x), defect: d }));
        }
    }
    Ok(None)
}

/// `ψ(x) = 𝔠_𝔪(x)`.
pub fn psi_regular_centralizer(f: &RealForm, x: &Matrix) -> Result<MatrixSpace> {
    if !f.in_m(x) {
        return Err(Error::Usage("point is not in m".into()));
    }
    if !f.is_regular(x) {
        return Err(Error::Domain("point is not regular".into()));
    }
    let c = f.dec.m.centralizer_of(std::slice::from_ref(x));
    debug_assert!(c.contains(x));
    Ok(c)
}

/// A regular point whose centralizer in `H` is not abelian, with a non-commuting pair.
pub fn non_abelian_witness(f: &RealForm) -> Option<(Matrix, Matrix, Matrix)> {
    for b in f.dec.a.basis() {
        if !f.is_regular(b) {
            continue;
        }
        let c = f.dec.h.centralizer_of(std::slice::from_ref(b));
        if let Some((p, q)) = abelian_witness(c.basis()) {
            return Some((b.clone(), p, q));
        }
    }
    None
}

/// `exp(log z · d)` for a semisimple `d` whose spectrum is a rational multiple of integers.
pub fn torus_point_along(d: &Matrix, z: &Scalar) -> Option<Matrix> {
    let proj = spectral_projectors(d)?;
    let base = proj.iter().find(|(l, _)| !l.is_zero())?.0.clone();
    let ratios: Vec<Scalar> = proj.iter().map(|(l, _)| l / &base).collect();
    let lcm = ratios.iter().try_fold(num_bigint::BigInt::one(), |acc, r| {
        let q = r.as_rational()?;
        Some(num_integer::Integer::lcm(&acc, q.denom()))
    })?;
    let scale = Scalar::real(num_rational::BigRational::from_integer(lcm));
    let mut out = Matrix::zeros(d.rows(), d.rows());
    for ((_, p), r) in proj.iter().zip(&ratios) {
        let k: i64 = (r * &scale).as_rational()?.to_integer().try_into().ok()?;
        out = &out + &p.scale(&z.pow(k));
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Semisimple,
    Nilpotent,
    Mixed,
    Generic,
}

fn conj(g: &Matrix, x: &Matrix) -> Matrix {
    &(g * x) * &g.inverse().unwrap()
}

/// A regular element of 𝔞 with small integer coordinates.
pub fn regular_a(f: &RealForm, rng: &mut impl Rng) -> Matrix {
    loop {
        let x = f.random_a(rng, 4);
        if f.is_regular(&x) {
            return x;
        }
    }
}

/// A nonzero point of 𝔞 on a restricted-root wall.
fn wall_point(f: &RealForm, rng: &mut impl Rng) -> Option<Matrix> {
    let rr = f.restricted().ok()?;
    let a = f.real_rank();
    if a < 2 {
        return None;
    }
    let root = &rr.roots[rr.positive[rng.gen_range(0..rr.positive.len())]];
    let ker = Matrix::from_rows(vec![root.coeffs.clone()]).kernel();
    let mut c = vec![Scalar::zero(); a];
    for v in &ker {
        let k = Scalar::int(rng.gen_range(1..=3));
        for (ci, vi) in c.iter_mut().zip(v) {
            *ci = &*ci + &(&k * vi);
        }
    }
    let x = f.dec.a.element(&c);
    (!x.is_zero()).then_some(x)
}

/// Regular points of 𝔪 cycling through semisimple, nilpotent, mixed and generic kinds.
pub fn sample_regular_points(f: &RealForm, count: usize, seed: u64) -> Result<Vec<(Matrix, PointKind)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hs = f.sample_group_elements(Subgroup::H, count.max(1), seed ^ 0x9e37);
    let e = f.principal_triple()?.e.clone();
    let cd = f.chevalley()?;
    let mut out = Vec::with_capacity(count);
    let kinds = [PointKind::Semisimple, PointKind::Nilpotent, PointKind::Mixed, PointKind::Generic];
    let mut i = 0;
    while out.len() < count {
        let kind = kinds[i % kinds.len()];
        let g = &hs[i % hs.len()];
        i += 1;
        let x = match kind {
            PointKind::Semisimple => conj(g, &regular_a(f, &mut rng)),
            PointKind::Nilpotent => conj(g, &e),
            PointKind::Mixed => match wall_point(f, &mut rng) {
                Some(s) => conj(g, &cd.kr_section(&cd.chi(&s))?),
                None => continue,
            },
            PointKind::Generic => {
                let x = f.random_m(&mut rng, 3);
                if !f.is_regular(&x) {
                    continue;
                }
                x
            }
        };
        out.push((x, kind));
    }
    Ok(out)
}

/// Pairs `(x, h)` with `x` regular and `h ∈ C_H(x)`.
pub fn sample_centralizing_pairs(f: &RealForm, count: usize, seed: u64) -> Result<Vec<(Matrix, Matrix)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let td = f.torus()?;
    let hs = f.sample_group_elements(Subgroup::H, count.max(1), seed ^ 0x51);
    let e = f.principal_triple()?.e.clone();
    let zs = [Scalar::int(2), Scalar::frac(-1, 3), Scalar::i(), Scalar::int(-1)];
    let d_mats: Vec<Matrix> = td.d_group.iter().filter_map(|t| td.to_matrix(t)).collect();
    let z_mats: Vec<Matrix> = center_in(td, Subgroup::H).iter().filter_map(|t| td.to_matrix(t)).collect();
    let nil_lie = f.dec.h.centralizer_of(std::slice::from_ref(&e));
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let g = &hs[i % hs.len()];
        let (x, h) = if i % 2 == 0 {
            let x = regular_a(f, &mut rng);
            let mut h = d_mats[rng.gen_range(0..d_mats.len())].clone();
            for b in f.dec.d.basis() {
                if let Some(p) = torus_point_along(b, &zs[rng.gen_range(0..zs.len())]) {
                    h = &h * &p;
                }
            }
            (x, h)
        } else {
            let mut h = z_mats[rng.gen_range(0..z_mats.len())].clone();
            for b in nil_lie.basis() {
                h = &h * &exp_nilpotent(&b.scale(&Scalar::int(rng.gen_range(-2..=2))));
            }
            (e.clone(), h)
        };
        i += 1;
        out.push((conj(g, &x), conj(g, &h)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::form;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(rows)
    }

    #[test]
    fn sl2_f_groups() {
        let f = form("sl2R").unwrap();
        let (fg, f2) = compute_f(f).unwrap();
        assert_eq!(fg.order(), 4);
        assert!(fg.is_cyclic());
        assert_eq!(f2.order(), 2);
    }

    #[test]
    fn sl2_merge_witness() {
        let f = form("sl2R").unwrap();
        let w = orbit_merge_witness(f, &m(&[&[0, 1], &[0, 0]])).unwrap().unwrap();
        let swap_i = Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::i()], vec![Scalar::i(), Scalar::zero()]]);
        assert!(w.matrix.as_ref() == Some(&swap_i) || w.matrix.as_ref() == Some(&swap_i.scale(&-Scalar::one())));
        assert_eq!(w.image.unwrap(), m(&[&[0, 0], &[1, 0]]));
        assert!(moves_orbit(f, &m(&[&[0, 1], &[0, 0]]), &swap_i).unwrap());
        assert!(orbit_merge_witness(f, &m(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn exact_sequences() {
        let f = form("sl2R").unwrap();
        let c = exact_sequence_check(f, &m(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!((c.components_h, c.components_gtheta, c.f_squared_at_x), (2, 2, 1));
        let c = exact_sequence_check(f, &m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!((c.components_h, c.components_gtheta, c.f_squared_at_x), (2, 4, 2));
        let f = form("sl3R").unwrap();
        let e = f.principal_triple().unwrap().e.clone();
        let c = exact_sequence_check(f, &e).unwrap();
        assert_eq!((c.components_h, c.components_gtheta, c.f_squared_at_x), (1, 3, 3));
        assert!(c.holds);
    }

    #[test]
    fn tangent_criterion() {
        let f = form("sl2R").unwrap();
        let e = m(&[&[0, 1], &[0, 0]]);
        assert!(smoothness_tangent_check(f, &e, &m(&[&[-1, 0], &[0, -1]])).unwrap().passes);
        let h = Matrix::diag(&[Scalar::int(2), Scalar::frac(1, 2)]);
        assert!(!smoothness_tangent_check(f, &Matrix::zeros(2, 2), &h).unwrap().passes);
        assert!(smoothness_tangent_check(f, &e, &h).is_err());
    }

    #[test]
    fn su13_not_abelian() {
        let f = form("su13").unwrap();
        let (x, p, q) = non_abelian_witness(f).unwrap();
        assert!(f.is_regular(&x));
        assert_ne!(&p * &q, &q * &p);
        let fib = centralizer_fiber(f, &x, Subgroup::H).unwrap();
        assert!(!fib.is_abelian);
    }

    #[test]
    fn psi_contains_point() {
        let f = form("sl2R").unwrap();
        let x = m(&[&[0, 1], &[1, 0]]);
        let p = psi_regular_centralizer(f, &x).unwrap();
        assert_eq!(p.dim(), 1);
        assert!(p.contains(&x));
        assert!(psi_regular_centralizer(f, &Matrix::zeros(2, 2)).is_err());
    }
}
