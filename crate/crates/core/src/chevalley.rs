//! Invariant polynomials, the Chevalley map on 𝔪, the Kostant-Rallis section through a
//! principal normal triple, and the embedding of the base `𝔞/W(𝔞) → 𝔱/W`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Ambient, RealForm};
use crate::matrix::Matrix;
use crate::mpoly::{MPoly, PolyMatrix};
use crate::scalar::Scalar;

/// Which invariant polynomial of the defining representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InvKind {
    /// `k`-th elementary symmetric function of the eigenvalues.
    Elementary(usize),
    /// Pfaffian of `J·X` for the orthogonal form `J`.
    Pfaffian,
}

impl InvKind {
    pub fn degree(&self, n: usize) -> u32 {
        match self {
            InvKind::Elementary(k) => *k as u32,
            InvKind::Pfaffian => (n / 2) as u32,
        }
    }

    pub fn label(&self) -> String {
        match self {
            InvKind::Elementary(k) => format!("e{k}"),
            InvKind::Pfaffian => "pf".into(),
        }
    }
}

#[derive(Debug)]
pub struct ChevalleyData {
    /// Generators of `ℂ[𝔪]^H`, as invariants of the defining representation.
    pub m_generators: Vec<InvKind>,
    pub m_degrees: Vec<u32>,
    /// Restrictions of the 𝔪-generators to 𝔞 coordinates.
    pub m_restricted: Vec<MPoly>,
    /// Generators of `ℂ[𝔱]^W`.
    pub g_generators: Vec<InvKind>,
    pub g_degrees: Vec<u32>,
    /// 𝔤-generators on 𝔱 coordinates.
    pub g_on_t: Vec<MPoly>,
    /// Basis of `𝔠_𝔪(e)` by increasing `ad x`-eigenvalue.
    pub slice_basis: Vec<Matrix>,
    pub slice_weights: Vec<u32>,
    /// Slice coefficients as polynomials in the base coordinates.
    pub kr_coeffs: Vec<MPoly>,
    pub kr_matrix: Option<PolyMatrix>,
    /// `ι` as polynomials in the base coordinates.
    pub iota: Vec<MPoly>,
    pfaffian_form: Option<Matrix>,
    n: usize,
}

/// Exponent vectors `e` with `Σ e_i · w_i = d`.
pub fn weighted_exponents(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(w: &[u32], d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if w.is_empty() {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k * w[0] <= d {
            cur.push(k);
            rec(&w[1..], d - k * w[0], cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out
}

/// Monomials in `polys` with the given exponents.
fn power_product(polys: &[MPoly], exps: &[u32], nvars: usize) -> MPoly {
    let mut acc = MPoly::one(nvars);
    for (p, &k) in polys.iter().zip(exps) {
        if k > 0 {
            acc = &acc * &p.pow(k);
        }
    }
    acc
}

/// Rank of a family of polynomials as vectors of coefficients.
pub fn poly_rank(polys: &[MPoly]) -> usize {
    let mut monos: Vec<Vec<u32>> = polys.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    if polys.is_empty() || monos.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Scalar>> = polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    Matrix::from_rows(rows).rank()
}

fn in_span(polys: &[MPoly], p: &MPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    let mut with = polys.to_vec();
    with.push(p.clone());
    poly_rank(&with) == poly_rank(polys)
}

/// Products of generators of weighted degree `d`.
pub fn products_of_degree(gens: &[MPoly], degrees: &[u32], d: u32, nvars: usize) -> Vec<MPoly> {
    weighted_exponents(degrees, d).iter().map(|e| power_product(gens, e, nvars)).collect()
}

/// Writes a weighted-homogeneous invariant as a polynomial in the generators, if possible.
pub fn express_in_generators(gens: &[MPoly], degrees: &[u32], target: &MPoly) -> Option<MPoly> {
    let r = gens.len();
    if target.is_zero() {
        return Some(MPoly::zero(r));
    }
    let d = target.total_degree()?;
    let exps = weighted_exponents(degrees, d);
    let prods: Vec<MPoly> = exps.iter().map(|e| power_product(gens, e, target.nvars())).collect();
    let mut monos: Vec<Vec<u32>> = prods.iter().chain(std::iter::once(target)).flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let cols: Vec<Vec<Scalar>> = prods.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    if cols.is_empty() {
        return None;
    }
    let rhs: Vec<Scalar> = monos.iter().map(|m| target.coeff(m)).collect();
    let c = Matrix::from_cols(&cols).solve_one(&rhs)?;
    let mut out = MPoly::zero(r);
    for (e, ci) in exps.into_iter().zip(c) {
        if !ci.is_zero() {
            out.add_term(e, ci);
        }
    }
    Some(out)
}

/// `p(w·s)` for a linear change of coordinates given by the matrix `w`.
pub fn act_linear(p: &MPoly, w: &Matrix) -> MPoly {
    let r = p.nvars();
    let images: Vec<MPoly> = (0..r)
        .map(|i| {
            let mut acc = MPoly::zero(r);
            for j in 0..r {
                if !w.get(i, j).is_zero() {
                    acc = &acc + &MPoly::var(r, j).scale(w.get(i, j));
                }
            }
            acc
        })
        .collect();
    p.substitute(&images)
}

/// Dimension of the degree-`d` invariants of a finite matrix group, by Reynolds averaging.
pub fn invariant_dimension(group: &[Matrix], nvars: usize, d: u32) -> usize {
    let monos = weighted_exponents(&vec![1; nvars], d);
    let avg: Vec<MPoly> = monos
        .into_iter()
        .map(|e| {
            let m = MPoly::monomial(e, Scalar::one());
            let mut acc = MPoly::zero(nvars);
            for w in group {
                acc = &acc + &act_linear(&m, w);
            }
            acc
        })
        .collect();
    poly_rank(&avg)
}

pub fn pfaffian_form(f: &RealForm) -> Option<Matrix> {
    match &f.spec.ambient {
        Ambient::Orthogonal(j) if f.n().is_multiple_of(2) => Some(j.clone()),
        _ => None,
    }
}

/// Invariants `kinds` of a polynomial matrix.
pub fn invariants_of(m: &PolyMatrix, kinds: &[InvKind], pf: Option<&Matrix>) -> Vec<MPoly> {
    let top = kinds
        .iter()
        .map(|k| match k {
            InvKind::Elementary(j) => *j,
            InvKind::Pfaffian => 0,
        })
        .max()
        .unwrap_or(0);
    let e = m.elementary_invariants(top);
    kinds
        .iter()
        .map(|k| match k {
            InvKind::Elementary(j) => e[*j].clone(),
            InvKind::Pfaffian => {
                let j = pf.expect("Pfaffian needs an orthogonal form");
                PolyMatrix::constant(j, m.nvars()).mul(m).pfaffian()
            }
        })
        .collect()
}

/// Numerical values of invariants at a matrix.
pub fn invariant_values(x: &Matrix, kinds: &[InvKind], pf: Option<&Matrix>) -> Vec<Scalar> {
    let n = x.rows();
    let cp = x.charpoly();
    kinds
        .iter()
        .map(|k| match k {
            InvKind::Elementary(j) => {
                let c = cp.coeff(n - j);
                if j % 2 == 0 {
                    c
                } else {
                    -c
                }
            }
            InvKind::Pfaffian => PolyMatrix::constant(&(pf.unwrap() * x), 0).pfaffian().eval(&[]),
        })
        .collect()
}

/// Select generators among `e_2, e_3, …` (then the Pfaffian) whose restrictions to the
/// given subspace are algebraically new in their degree.
fn select_generators(f: &RealForm, basis: &[Matrix], count: usize, allow_pf: bool) -> (Vec<InvKind>, Vec<MPoly>) {
    let n = f.n();
    let pm = PolyMatrix::affine(&Matrix::zeros(n, n), basis);
    let r = basis.len();
    let mut kinds: Vec<InvKind> = (2..=n).map(InvKind::Elementary).collect();
    let pf = pfaffian_form(f);
    if allow_pf && pf.is_some() {
        kinds.push(InvKind::Pfaffian);
    }
    let all = invariants_of(&pm, &kinds, pf.as_ref());
    let mut sel: Vec<(InvKind, MPoly)> = Vec::new();
    let mut order: Vec<usize> = (0..kinds.len()).collect();
    order.sort_by_key(|&i| (kinds[i].degree(n), i));
    for i in order {
        if sel.len() == count {
            break;
        }
        let d = kinds[i].degree(n);
        let gens: Vec<MPoly> = sel.iter().map(|s| s.1.clone()).collect();
        let degs: Vec<u32> = sel.iter().map(|s| s.0.degree(n)).collect();
        let prods = products_of_degree(&gens, &degs, d, r);
        if !in_span(&prods, &all[i]) {
            sel.push((kinds[i], all[i].clone()));
        }
    }
    sel.sort_by_key(|s| s.0.degree(n));
    sel.into_iter().unzip()
}

impl ChevalleyData {
    pub fn build(f: &RealForm) -> Result<Self> {
        let n = f.n();
        let a = f.real_rank();
        let (m_generators, m_restricted) = select_generators(f, f.dec.a.basis(), a, false);
        if m_generators.len() != a {
            return Err(Error::Construction("not enough invariant generators on a".into()));
        }
        let m_degrees: Vec<u32> = m_generators.iter().map(|k| k.degree(n)).collect();
        let (g_generators, g_on_t) = select_generators(f, f.dec.t.basis(), f.rank(), true);
        if g_generators.len() != f.rank() {
            return Err(Error::Construction("not enough invariant generators on t".into()));
        }
        let g_degrees: Vec<u32> = g_generators.iter().map(|k| k.degree(n)).collect();
        let pfaffian_form = pfaffian_form(f);
        let mut data = ChevalleyData {
            m_generators,
            m_degrees,
            m_restricted,
            g_generators,
            g_degrees,
            g_on_t,
            slice_basis: vec![],
            slice_weights: vec![],
            kr_coeffs: vec![],
            kr_matrix: None,
            iota: vec![],
            pfaffian_form,
            n,
        };
        if let Ok(t) = f.principal_triple() {
            data.build_section(f, &t.e.clone(), &t.x.clone(), &t.f.clone())?;
        }
        Ok(data)
    }

    fn build_section(&mut self, form: &RealForm, e: &Matrix, x: &Matrix, fm: &Matrix) -> Result<()> {
        let a = form.real_rank();
        let ce = form.dec.m.centralizer_of(std::slice::from_ref(e));
        if ce.dim() != a {
            return Err(Error::Construction("centralizer of e in m has the wrong dimension".into()));
        }
        let cols: Vec<Vec<Scalar>> = ce.basis().iter().map(|b| ce.coords(&x.bracket(b)).unwrap()).collect();
        let adx = Matrix::from_cols(&cols);
        let (eig, cof) = adx.charpoly().gaussian_roots();
        if cof.degree() != Some(0) {
            return Err(Error::Construction("ad x on the slice is not split".into()));
        }
        let mut basis: Vec<(i64, Matrix)> = Vec::new();
        for (l, _) in eig {
            let li = l.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer());
            let li: i64 = li.and_then(|v| i64::try_from(v).ok()).ok_or_else(|| Error::Construction("non-integral slice weight".into()))?;
            for v in (&adx - &Matrix::identity(a).scale(&l)).kernel() {
                basis.push((li, ce.element(&v)));
            }
        }
        basis.sort_by_key(|b| b.0);
        self.slice_weights = basis.iter().map(|b| (b.0 / 2 + 1) as u32).collect();
        self.slice_basis = basis.into_iter().map(|b| b.1).collect();
        let slice = PolyMatrix::affine(fm, &self.slice_basis);
        let p = invariants_of(&slice, &self.m_generators, None);
        for (pi, &d) in p.iter().zip(&self.m_degrees) {
            if !pi.is_weighted_homogeneous(&self.slice_weights) || pi.weighted_degree(&self.slice_weights).unwrap_or(d) != d {
                return Err(Error::Construction("invariants on the slice are not weighted homogeneous".into()));
            }
        }
        let cvar = |i: usize| MPoly::var(a, i);
        let mut u: Vec<Option<MPoly>> = vec![None; a];
        let mut degrees: Vec<u32> = self.m_degrees.clone();
        degrees.dedup();
        for d in degrees {
            let gi: Vec<usize> = (0..a).filter(|&i| self.m_degrees[i] == d).collect();
            let vi: Vec<usize> = (0..a).filter(|&k| self.slice_weights[k] == d).collect();
            if gi.len() != vi.len() {
                return Err(Error::Construction(format!("degree {d} has {} generators but {} slice directions", gi.len(), vi.len())));
            }
            let k = Matrix::from_rows(gi.iter().map(|&i| vi.iter().map(|&v| p[i].linear_coeff(v)).collect()).collect());
            let kinv = k.inverse().ok_or_else(|| Error::Construction("slice is not transversal".into()))?;
            let subs: Vec<MPoly> = (0..a).map(|j| u[j].clone().unwrap_or_else(|| MPoly::zero(a))).collect();
            let mut rhs = Vec::new();
            for &i in &gi {
                let mut rem = p[i].clone();
                for &v in &vi {
                    let lin = MPoly::var(a, v).scale(&p[i].linear_coeff(v));
                    rem = &rem - &lin;
                }
                if (0..a).any(|j| rem.uses_var(j) && self.slice_weights[j] >= d) {
                    return Err(Error::Construction("slice equations are not triangular".into()));
                }
                rhs.push(&cvar(i) - &rem.substitute(&subs));
            }
            for (r, &v) in vi.iter().enumerate() {
                let mut acc = MPoly::zero(a);
                for (c, q) in rhs.iter().enumerate() {
                    acc = &acc + &q.scale(kinv.get(r, c));
                }
                u[v] = Some(acc);
            }
        }
        self.kr_coeffs = u.into_iter().map(|x| x.unwrap()).collect();
        let km = PolyMatrix::combination(fm, &self.slice_basis, &self.kr_coeffs);
        self.iota = invariants_of(&km, &self.g_generators, self.pfaffian_form.as_ref());
        self.kr_matrix = Some(km);
        Ok(())
    }

    /// `χ(x)`: values of the 𝔪-generators.
    pub fn chi(&self, x: &Matrix) -> Vec<Scalar> {
        invariant_values(x, &self.m_generators, None)
    }

    /// Values of the 𝔤-generators.
    pub fn q(&self, x: &Matrix) -> Vec<Scalar> {
        invariant_values(x, &self.g_generators, self.pfaffian_form.as_ref())
    }

    pub fn kr_section(&self, c: &[Scalar]) -> Result<Matrix> {
        let km =
            self.kr_matrix.as_ref().ok_or_else(|| Error::Domain("no Kostant-Rallis section for a form that is not quasi-split".into()))?;
        if c.len() != self.m_generators.len() {
            return Err(Error::Usage(format!("expected {} base coordinates, got {}", self.m_generators.len(), c.len())));
        }
        Ok(km.eval(c))
    }

    pub fn embed_base(&self, c: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.iota.is_empty() {
            return Err(Error::Domain("no base embedding for a form that is not quasi-split".into()));
        }
        Ok(self.iota.iter().map(|p| p.eval(c)).collect())
    }

    /// `χ(KR(c)) = c` as polynomial identities.
    pub fn round_trip_symbolic(&self) -> bool {
        let Some(km) = &self.kr_matrix else { return false };
        let a = self.m_generators.len();
        invariants_of(km, &self.m_generators, None).iter().enumerate().all(|(i, p)| *p == MPoly::var(a, i))
    }

    pub fn g_on_t_eval(&self, t: &[Scalar]) -> Vec<Scalar> {
        self.g_on_t.iter().map(|p| p.eval(t)).collect()
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn pfaffian_form(&self) -> Option<&Matrix> {
        self.pfaffian_form.as_ref()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionCheck {
    pub degree: u32,
    pub invariant_dim: usize,
    pub generated_dim: usize,
    pub monomials: usize,
}

/// Degreewise comparison of generated invariants with all invariants of `group`.
pub fn restriction_check(gens: &[MPoly], degrees: &[u32], group: &[Matrix], nvars: usize, upto: u32) -> Vec<RestrictionCheck> {
    (1..=upto)
        .map(|d| {
            let prods = products_of_degree(gens, degrees, d, nvars);
            RestrictionCheck {
                degree: d,
                invariant_dim: invariant_dimension(group, nvars, d),
                generated_dim: poly_rank(&prods),
                monomials: prods.len(),
            }
        })
        .collect()
}

impl RealForm {
    pub fn chevalley(&self) -> Result<&ChevalleyData> {
        self.chevalley_cell.get_or_init(|| ChevalleyData::build(self)).as_ref().map_err(Clone::clone)
    }

    /// Generators of `ℂ[𝔪]^H` as polynomials in the 𝔪 coordinates.
    pub fn invariants_on_m(&self) -> Result<Vec<MPoly>> {
        let cd = self.chevalley()?;
        let n = self.n();
        let pm = PolyMatrix::affine(&Matrix::zeros(n, n), self.dec.m.basis());
        Ok(invariants_of(&pm, &cd.m_generators, None))
    }
}

pub fn scalar_vec_string(v: &[Scalar]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn unit_vector(r: usize, i: usize) -> Vec<Scalar> {
    (0..r).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::form;

    #[test]
    fn degrees() {
        let expect: [(&str, &[u32], &[u32]); 7] = [
            ("sl2R", &[2], &[2]),
            ("sl3R", &[2, 3], &[2, 3]),
            ("su12", &[2], &[2, 3]),
            ("su22", &[2, 4], &[2, 3, 4]),
            ("sp4R", &[2, 4], &[2, 4]),
            ("so24", &[2, 4], &[2, 3, 4]),
            ("su13", &[2], &[2, 3, 4]),
        ];
        for (name, md, gd) in expect {
            let cd = form(name).unwrap().chevalley().unwrap();
            assert_eq!(cd.m_degrees, md, "{name}");
            assert_eq!(cd.g_degrees, gd, "{name}");
        }
        let so = form("so24").unwrap().chevalley().unwrap();
        assert!(so.g_generators.contains(&InvKind::Pfaffian));
    }

    #[test]
    fn sl2_section() {
        let f = form("sl2R").unwrap();
        let cd = f.chevalley().unwrap();
        let b = Scalar::frac(3, 7);
        let k = cd.kr_section(std::slice::from_ref(&b)).unwrap();
        assert_eq!(k, Matrix::from_rows(vec![vec![Scalar::zero(), -&b], vec![Scalar::one(), Scalar::zero()]]));
        assert_eq!(k.det(), b);
        assert!(cd.round_trip_symbolic());
    }

    #[test]
    fn round_trips() {
        for name in ["sl3R", "su12", "su22", "sp4R", "so24", "su11"] {
            let cd = form(name).unwrap().chevalley().unwrap();
            assert!(cd.round_trip_symbolic(), "{name}");
        }
    }

    #[test]
    fn restriction_spans_invariants_su22() {
        let f = form("su22").unwrap();
        let cd = f.chevalley().unwrap();
        let rr = f.restricted().unwrap();
        for c in restriction_check(&cd.m_restricted, &cd.m_degrees, &rr.weyl, 2, 6) {
            assert_eq!(c.invariant_dim, c.generated_dim, "degree {}", c.degree);
            assert_eq!(c.generated_dim, c.monomials);
        }
    }
}
