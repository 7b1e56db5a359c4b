//! Torsion points of the maximal torus `T = exp(𝔱)` in weight coordinates, and the finite
//! groups built from them: the center, `T_θ`, `D = T^θ`, `F` and `F²`.
//!
//! A torus element is stored as its vector of exponents `c_a ∈ [0, 1)`, one per weight of
//! the defining representation, so that it acts on the weight vector `v_a` by `e^{2πi c_a}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::RealForm;
use crate::lattice::Lattice;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElem {
    exps: Vec<BigRational>,
}

fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl TorusElem {
    pub fn new(exps: Vec<BigRational>) -> Self {
        TorusElem { exps: exps.iter().map(frac_part).collect() }
    }

    pub fn identity(n: usize) -> Self {
        TorusElem { exps: vec![BigRational::zero(); n] }
    }

    pub fn exps(&self) -> &[BigRational] {
        &self.exps
    }

    pub fn mul(&self, o: &TorusElem) -> TorusElem {
        TorusElem::new(self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> TorusElem {
        TorusElem::new(self.exps.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, k: i64) -> TorusElem {
        let k = BigRational::from_integer(k.into());
        TorusElem::new(self.exps.iter().map(|a| a * &k).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|x| x.is_zero())
    }

    /// All exponents agree: a scalar matrix.
    pub fn is_scalar(&self) -> bool {
        self.exps.windows(2).all(|w| w[0] == w[1])
    }

    pub fn order(&self) -> BigInt {
        use num_integer::Integer;
        self.exps.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Exponent of `e^{2πi(c_a - c_b)}`, reduced mod 1.
    pub fn character(&self, a: usize, b: usize) -> BigRational {
        frac_part(&(&self.exps[a] - &self.exps[b]))
    }

    /// `e^{2πi c}` when `4c ∈ ℤ`.
    pub fn root_of_unity(c: &BigRational) -> Option<Scalar> {
        let k = (c * BigRational::from_integer(4.into())).to_integer();
        if BigRational::from_integer(k.clone()) != c * BigRational::from_integer(4.into()) {
            return None;
        }
        let r: BigInt = (k % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4);
        Some(match r.to_i64().unwrap() {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => -Scalar::one(),
            _ => -Scalar::i(),
        })
    }

    pub fn eigenvalues(&self) -> Option<Vec<Scalar>> {
        self.exps.iter().map(Self::root_of_unity).collect()
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|x| x.to_string()).collect();
        write!(f, "exp2pi[{}]", parts.join(","))
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for TorusElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Group element witness: an exact matrix, or a torus point whose eigenvalues may lie outside ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupElem {
    Matrix(Matrix),
    Torus(TorusElem),
}

/// Signed permutation of weights: `c'_a = sign_a · c_{perm_a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAction {
    pub perm: Vec<usize>,
    pub negate: Vec<bool>,
}

impl WeightAction {
    pub fn apply(&self, t: &TorusElem) -> TorusElem {
        TorusElem::new(
            self.perm.iter().zip(&self.negate).map(|(&p, &neg)| if neg { -t.exps[p].clone() } else { t.exps[p].clone() }).collect(),
        )
    }
}

/// Rational subspace of weight space with its saturated lattice, for sub-torus membership.
#[derive(Clone, Debug)]
pub struct SubTorus {
    annihilator: Vec<Vec<BigRational>>,
    image: Lattice,
    pub dim: usize,
}

impl SubTorus {
    fn new(n: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let ann = rational_annihilator(n, vectors)?;
        // lattice generated by the columns of the annihilator
        let gens: Vec<Vec<BigRational>> = (0..n).map(|j| ann.iter().map(|row| row[j].clone()).collect()).collect();
        let k = ann.len();
        Ok(SubTorus { dim: n - k, image: Lattice::from_generators(k, &gens), annihilator: ann })
    }

    /// `c ∈ U_ℚ + ℤⁿ`, i.e. the point lies on the sub-torus `exp(U)`.
    pub fn contains(&self, t: &TorusElem) -> bool {
        if self.annihilator.is_empty() {
            return true;
        }
        let v: Vec<BigRational> = self.annihilator.iter().map(|row| row.iter().zip(&t.exps).map(|(a, b)| a * b).sum()).collect();
        self.image.contains(&v)
    }
}

/// Rows spanning the annihilator of `span(vectors)`, which must be defined over ℚ.
fn rational_annihilator(n: usize, vectors: &[Vec<Scalar>]) -> Result<Vec<Vec<BigRational>>> {
    let k = if vectors.is_empty() {
        (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    } else {
        Matrix::from_rows(vectors.to_vec()).kernel()
    };
    k.into_iter()
        .map(|v| {
            v.into_iter()
                .map(|x| {
                    x.as_rational()
                        .cloned()
                        .ok_or_else(|| Error::Unsupported("subspace is not defined over Q in weight coordinates".into()))
                })
                .collect()
        })
        .collect()
}

#[derive(Debug)]
pub struct TorusData {
    pub n: usize,
    pub rank: usize,
    pub real_rank: usize,
    /// `weight_matrix[a][k] = μ_a(t_k)`
    pub weight_matrix: Vec<Vec<Scalar>>,
    pub lattice: Lattice,
    pub torus: SubTorus,
    pub split_part: SubTorus,
    pub compact_part: SubTorus,
    pub theta: WeightAction,
    pub weyl: Vec<WeightAction>,
    eigenbasis: Matrix,
    eigenbasis_inv: Matrix,
    pub center: Vec<TorusElem>,
    pub t_theta: Vec<TorusElem>,
    pub d_group: Vec<TorusElem>,
    pub f_group: Vec<TorusElem>,
    pub f_squared: Vec<TorusElem>,
    pub torsion_level: i64,
    fixed_cache: std::sync::Mutex<HashMap<usize, SubTorus>>,
}

fn match_action(weights: &[Vec<Scalar>], images: &[Vec<Scalar>]) -> Result<WeightAction> {
    let mut perm = Vec::new();
    let mut negate = Vec::new();
    for img in images {
        if let Some(p) = weights.iter().position(|w| w == img) {
            perm.push(p);
            negate.push(false);
        } else {
            let neg: Vec<Scalar> = img.iter().map(|x| -x).collect();
            let p = weights
                .iter()
                .position(|w| *w == neg)
                .ok_or_else(|| Error::Domain("linear map does not permute the weights up to sign".into()))?;
            perm.push(p);
            negate.push(true);
        }
    }
    Ok(WeightAction { perm, negate })
}

/// `μ ∘ w` as a coefficient vector.
fn compose(mu: &[Scalar], w: &Matrix) -> Vec<Scalar> {
    let r = mu.len();
    (0..r).map(|j| (0..r).map(|i| &mu[i] * w.get(i, j)).sum()).collect()
}

impl TorusData {
    pub fn build(f: &RealForm) -> Result<Self> {
        let rd = f.roots()?;
        let n = f.n();
        let r = rd.rank;
        let a = rd.real_rank;
        let wm = rd.weights.clone();
        let col = |k: usize| -> Vec<Scalar> { (0..n).map(|i| wm[i][k].clone()).collect() };
        let all: Vec<Vec<Scalar>> = (0..r).map(col).collect();
        let torus = SubTorus::new(n, &all)?;
        let split_part = SubTorus::new(n, &all[..a])?;
        let compact_part = SubTorus::new(n, &all[a..])?;
        let relations = rational_annihilator(n, &all)?;
        let lattice = Lattice::integral_kernel(n, &relations);
        let theta = match_action(&wm, &wm.iter().map(|mu| compose(mu, &rd.theta_t)).collect::<Vec<_>>())?;
        let weyl = rd
            .weyl
            .iter()
            .map(|w| match_action(&wm, &wm.iter().map(|mu| compose(mu, w)).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let eigenbasis = rd.eigenbasis.clone();
        let eigenbasis_inv = eigenbasis.inverse().unwrap();
        let mut data = TorusData {
            n,
            rank: r,
            real_rank: a,
            weight_matrix: wm,
            lattice,
            torus,
            split_part,
            compact_part,
            theta,
            weyl,
            eigenbasis,
            eigenbasis_inv,
            center: vec![],
            t_theta: vec![],
            d_group: vec![],
            f_group: vec![],
            f_squared: vec![],
            torsion_level: 0,
            fixed_cache: Default::default(),
        };
        let twice_n = 2 * n as i64;
        data.center = (0..twice_n)
            .map(|k| TorusElem::new(vec![BigRational::new(k.into(), twice_n.into()); n]))
            .filter(|t| data.torus.contains(t))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let level = 4 * data.center.len() as i64;
        data.torsion_level = level;
        let torsion = data.torsion_points(level);
        data.t_theta = torsion.iter().filter(|t| data.in_t_theta(t)).cloned().collect();
        data.d_group = torsion.iter().filter(|t| data.theta.apply(t) == **t).cloned().collect();
        data.f_group = torsion.iter().filter(|t| data.split_part.contains(t) && data.is_central(&t.pow(2))).cloned().collect();
        data.f_squared = data.f_group.iter().map(|t| t.pow(2)).collect::<BTreeSet<_>>().into_iter().collect();
        Ok(data)
    }

    /// All `N`-torsion points `Σ k_j/N · l_j` of the torus.
    pub fn torsion_points(&self, level: i64) -> Vec<TorusElem> {
        let basis = self.lattice.basis();
        let r = basis.len();
        let mut out = BTreeSet::new();
        let total = (level as usize).pow(r as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut v = vec![BigRational::zero(); self.n];
            for b in basis {
                let k = (rem % level as usize) as i64;
                rem /= level as usize;
                let c = BigRational::new(k.into(), level.into());
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            out.insert(TorusElem::new(v));
        }
        out.into_iter().collect()
    }

    pub fn is_central(&self, t: &TorusElem) -> bool {
        t.is_scalar() && self.torus.contains(t)
    }

    /// `θ(t)t⁻¹ ∈ Z(G)`
    pub fn in_t_theta(&self, t: &TorusElem) -> bool {
        self.is_central(&self.theta.apply(t).mul(&t.inv()))
    }

    pub fn theta_apply(&self, t: &TorusElem) -> TorusElem {
        self.theta.apply(t)
    }

    pub fn weyl_apply(&self, w: usize, t: &TorusElem) -> TorusElem {
        self.weyl[w].apply(t)
    }

    /// `t ∈ (T_θ^w)⁰ = exp(𝔡^w)`
    pub fn in_fixed_identity_component(&self, f: &RealForm, w: usize, t: &TorusElem) -> Result<bool> {
        let mut cache = self.fixed_cache.lock().unwrap();
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(w) {
            let rd = f.roots()?;
            let r = self.rank;
            let a = self.real_rank;
            // 𝔡^w: vectors supported on the 𝔡 coordinates fixed by w
            let wm = &rd.weyl[w];
            let mut rows = Vec::new();
            for i in 0..r {
                let row: Vec<Scalar> = (a..r)
                    .map(|j| {
                        let id = if i == j { Scalar::one() } else { Scalar::zero() };
                        wm.get(i, j) - &id
                    })
                    .collect();
                rows.push(row);
            }
            let ker = if r == a { vec![] } else { Matrix::from_rows(rows).kernel() };
            let vecs: Vec<Vec<Scalar>> = ker
                .iter()
                .map(|k| {
                    let mut h = vec![Scalar::zero(); a];
                    h.extend(k.iter().cloned());
                    (0..self.n).map(|i| (0..r).map(|j| &self.weight_matrix[i][j] * &h[j]).sum()).collect()
                })
                .collect();
            e.insert(SubTorus::new(self.n, &vecs)?);
        }
        Ok(cache[&w].contains(t))
    }

    /// Class representatives of `group / exp(𝔡)`.
    pub fn components_mod_compact(&self, group: &[TorusElem]) -> Vec<TorusElem> {
        let mut reps: Vec<TorusElem> = Vec::new();
        for t in group {
            if !reps.iter().any(|r| self.compact_part.contains(&t.mul(&r.inv()))) {
                reps.push(t.clone());
            }
        }
        reps
    }

    pub fn pi0_t_theta(&self) -> usize {
        self.components_mod_compact(&self.t_theta).len()
    }

    pub fn pi0_d(&self) -> usize {
        self.components_mod_compact(&self.d_group).len()
    }

    pub fn to_matrix(&self, t: &TorusElem) -> Option<Matrix> {
        let ev = t.eigenvalues()?;
        Some(&(&self.eigenbasis * &Matrix::diag(&ev)) * &self.eigenbasis_inv)
    }

    pub fn f_matrices(&self) -> Vec<Matrix> {
        self.f_group.iter().filter_map(|t| self.to_matrix(t)).collect()
    }

    /// Torus element of a diagonalizable matrix commuting with 𝔱 whose eigenvalues are powers of `i`.
    pub fn from_matrix(&self, g: &Matrix) -> Option<TorusElem> {
        let d = &(&self.eigenbasis_inv * g) * &self.eigenbasis;
        let mut exps = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && !d.get(a, b).is_zero() {
                    return None;
                }
            }
            let z = d.get(a, a);
            let k = [Scalar::one(), Scalar::i(), -Scalar::one(), -Scalar::i()].iter().position(|u| u == z)?;
            exps.push(BigRational::new((k as i64).into(), 4.into()));
        }
        let t = TorusElem::new(exps);
        self.torus.contains(&t).then_some(t)
    }

    /// Whether `t` commutes with the matrix `g`, read off in the weight basis.
    pub fn commutes_with(&self, t: &TorusElem, g: &Matrix) -> bool {
        let d = &(&self.eigenbasis_inv * g) * &self.eigenbasis;
        (0..self.n).all(|a| (0..self.n).all(|b| d.get(a, b).is_zero() || t.character(a, b).is_zero()))
    }

    /// `Ad(t)` applied to a matrix, exact when the relevant characters are powers of `i`.
    pub fn conjugate(&self, t: &TorusElem, g: &Matrix) -> Option<Matrix> {
        let d = &(&self.eigenbasis_inv * g) * &self.eigenbasis;
        let mut out = Matrix::zeros(self.n, self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                if d.get(a, b).is_zero() {
                    continue;
                }
                let z = TorusElem::root_of_unity(&t.character(a, b))?;
                out.set(a, b, d.get(a, b) * &z);
            }
        }
        Some(&(&self.eigenbasis * &out) * &self.eigenbasis_inv)
    }

    pub fn root_character(&self, f: &RealForm, root: usize, t: &TorusElem) -> BigRational {
        let (a, b) = f.roots().unwrap().roots[root].weights;
        t.character(a, b)
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "center_order": self.center.len(),
            "t_theta_torsion": self.t_theta.len(),
            "pi0_t_theta": self.pi0_t_theta(),
            "pi0_d": self.pi0_d(),
            "f_order": self.f_group.len(),
            "f_squared_order": self.f_squared.len(),
            "torsion_level": self.torsion_level,
        })
    }
}

impl GroupElem {
    pub fn to_matrix(&self, td: &TorusData) -> Option<Matrix> {
        match self {
            GroupElem::Matrix(m) => Some(m.clone()),
            GroupElem::Torus(t) => td.to_matrix(t),
        }
    }

    pub fn commutes(&self, o: &GroupElem, td: &TorusData) -> bool {
        match (self, o) {
            (GroupElem::Torus(a), GroupElem::Torus(b)) => {
                let _ = (a, b);
                true
            }
            (GroupElem::Torus(t), GroupElem::Matrix(m)) | (GroupElem::Matrix(m), GroupElem::Torus(t)) => td.commutes_with(t, m),
            (GroupElem::Matrix(a), GroupElem::Matrix(b)) => a * b == b * a,
        }
    }

    /// `Ad(g)` on a matrix.
    pub fn conjugate(&self, x: &Matrix, td: &TorusData) -> Option<Matrix> {
        match self {
            GroupElem::Matrix(g) => Some(&(g * x) * &g.inverse()?),
            GroupElem::Torus(t) => td.conjugate(t, x),
        }
    }
}

impl RealForm {
    pub fn torus(&self) -> Result<&TorusData> {
        self.torus_cell.get_or_init(|| TorusData::build(self)).as_ref().map_err(Clone::clone)
    }
}

pub fn abs_int(x: &BigRational) -> BigInt {
    x.abs().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{form, CATALOG};

    #[test]
    fn centers_match_catalog() {
        for name in CATALOG {
            let f = form(name).unwrap();
            let td = f.torus().unwrap();
            assert_eq!(td.center.len(), f.spec.center_order, "{name}");
            assert_eq!(td.lattice.rank(), f.rank(), "{name}");
        }
    }

    #[test]
    fn sl2_groups() {
        let f = form("sl2R").unwrap();
        let td = f.torus().unwrap();
        assert_eq!(td.t_theta.len(), 4);
        assert_eq!(td.d_group.len(), 2);
        assert_eq!(td.f_group.len(), 4);
        assert_eq!(td.f_squared.len(), 2);
        let fm = td.f_matrices();
        let w = Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::i()], vec![Scalar::i(), Scalar::zero()]]);
        assert!(fm.contains(&w));
        assert!(fm.contains(&Matrix::from_ints(&[&[-1, 0], &[0, -1]])));
    }

    #[test]
    fn sl3_groups() {
        let td = form("sl3R").unwrap().torus().unwrap();
        assert_eq!(td.t_theta.len(), 12);
        assert_eq!(td.d_group.len(), 4);
        assert_eq!(td.f_squared.len(), 3);
        assert_eq!(td.pi0_t_theta(), td.pi0_d() * td.f_squared.len());
    }

    #[test]
    fn component_identity_all_quasi_split() {
        for name in ["sl2R", "sl3R", "su11", "su12", "su22", "sp4R", "so24"] {
            let td = form(name).unwrap().torus().unwrap();
            assert_eq!(td.pi0_t_theta(), td.pi0_d() * td.f_squared.len(), "{name}");
        }
    }

    #[test]
    fn matrix_round_trip() {
        let f = form("sp4R").unwrap();
        let td = f.torus().unwrap();
        for t in &td.d_group {
            if let Some(m) = td.to_matrix(t) {
                assert!(f.in_h(&m));
                assert_eq!(td.from_matrix(&m).as_ref(), Some(t));
            }
        }
    }
}
