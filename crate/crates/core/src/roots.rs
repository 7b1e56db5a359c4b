//! Root systems of 𝔤 relative to 𝔱, restricted roots on 𝔞, Weyl groups as explicit matrix
//! groups, θ-anisotropic positive systems and the stabilizer inclusion test.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::RealForm;
use crate::lie::trace_form;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    /// Values on the 𝔱 basis (𝔞 basis first).
    pub coeffs: Vec<Scalar>,
    pub vector: Matrix,
    /// Coordinates of the coroot direction `H_α` (trace-form dual).
    pub coroot: Vec<Scalar>,
    /// `α = μ_a - μ_b` for weights of the defining representation.
    pub weights: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    pub real_rank: usize,
    pub roots: Vec<Root>,
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    /// Weyl group on 𝔱 coordinates, identity first.
    pub weyl: Vec<Matrix>,
    /// `weyl_perm[w][i]` is the index of `α_i ∘ w⁻¹`.
    pub weyl_perm: Vec<Vec<usize>>,
    pub theta_t: Matrix,
    /// Index of `α ∘ θ`.
    pub theta_perm: Vec<usize>,
    /// Weights of the defining representation on 𝔱 coordinates.
    pub weights: Vec<Vec<Scalar>>,
    /// Columns are weight vectors, aligned with `weights`.
    pub eigenbasis: Matrix,
    pub gram: Matrix,
    pub anisotropic: bool,
    index: HashMap<Vec<Scalar>, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictedRoot {
    pub coeffs: Vec<Scalar>,
    pub multiplicity: usize,
    pub roots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RestrictedRootDatum {
    pub roots: Vec<RestrictedRoot>,
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    /// Restricted Weyl group on 𝔞 coordinates.
    pub weyl: Vec<Matrix>,
    /// For each restricted Weyl element, the index in `W` of its θ-commuting lift.
    pub lift: Vec<usize>,
    /// Indices in `W` of elements commuting with θ.
    pub w_theta: Vec<usize>,
    pub reduced: bool,
    /// Roots vanishing on 𝔞.
    pub imaginary: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatCheck {
    pub codim: usize,
    pub point: Vec<Scalar>,
    pub stabilizer_order: usize,
    pub stabilizer_in_w_theta: usize,
    pub contained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub holds: bool,
    pub holds_on_walls: bool,
    pub flats: Vec<FlatCheck>,
    /// `(x, w)`: point of 𝔞 and a Weyl element fixing it that does not commute with θ.
    pub witness: Option<(Vec<Scalar>, Matrix)>,
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn first_nonzero_positive(v: &[Scalar]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

/// Group generated by `gens` under multiplication.
pub fn close_group(gens: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = gens.first() else { return vec![] };
    let id = Matrix::identity(first.rows());
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let p = &w * g;
            if seen.insert(p.clone()) {
                out.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    out
}

/// Reflection on coordinates: `t ↦ t - 2 α(t)/α(H) · H`.
pub(crate) fn reflection(alpha: &[Scalar], coroot: &[Scalar]) -> Matrix {
    let r = alpha.len();
    let ah = dot(alpha, coroot);
    let c = &Scalar::int(2) / &ah;
    let mut m = Matrix::identity(r);
    for i in 0..r {
        for j in 0..r {
            let v = m.get(i, j) - &(&(&c * &coroot[i]) * &alpha[j]);
            m.set(i, j, v);
        }
    }
    m
}

fn generic_element(f: &RealForm, attempt: i64) -> Matrix {
    let mut t = Matrix::zeros(f.n(), f.n());
    for (k, b) in f.dec.t.basis().iter().enumerate() {
        let c = Scalar::int(1 + (k as i64 + 1) * (3 + attempt) + (k as i64) * (k as i64) * (5 + 2 * attempt));
        t = &t + &b.scale(&c);
    }
    t
}

pub fn compute_roots(f: &RealForm) -> Result<RootDatum> {
    let tb = f.dec.t.basis().to_vec();
    let r = tb.len();
    let n = f.n();
    if f.g.centralizer(&tb).dim() != r {
        return Err(Error::Domain("t is not self-centralizing".into()));
    }
    // defining weights from a generic element with simple spectrum
    let mut found = None;
    for attempt in 0..20 {
        let t = generic_element(f, attempt);
        let (roots, cof) = t.charpoly().gaussian_roots();
        if cof.degree() == Some(0) && roots.len() == n {
            found = Some((t, roots));
            break;
        }
    }
    let (tgen, eig) = found.ok_or_else(|| Error::Unsupported("no generic element of t with simple spectrum over Q(i)".into()))?;
    let mut weights = Vec::new();
    let mut cols = Vec::new();
    for (l, _) in &eig {
        let v = (&tgen - &Matrix::identity(n).scale(l)).kernel().remove(0);
        let j = v.iter().position(|x| !x.is_zero()).unwrap();
        let mu: Vec<Scalar> = tb.iter().map(|b| &b.mul_vec(&v)[j] / &v[j]).collect();
        weights.push(mu);
        cols.push(v);
    }
    let eigenbasis = Matrix::from_cols(&cols);
    let gram = Matrix::from_rows(tb.iter().map(|x| tb.iter().map(|y| trace_form(x, y)).collect()).collect());
    let gram_inv = gram.inverse().ok_or_else(|| Error::Domain("trace form degenerate on t".into()))?;
    let ads: Vec<Matrix> = tb.iter().map(|b| f.g.ad(b)).collect();
    let dim = f.g.dim();
    let mut roots: Vec<Root> = Vec::new();
    let mut index = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let coeffs: Vec<Scalar> = (0..r).map(|k| &weights[a][k] - &weights[b][k]).collect();
            if coeffs.iter().all(|x| x.is_zero()) || index.contains_key(&coeffs) {
                continue;
            }
            let mut rows = Vec::new();
            for (ad, c) in ads.iter().zip(&coeffs) {
                rows.extend((ad - &Matrix::identity(dim).scale(c)).to_rows());
            }
            let k = Matrix::from_rows(rows).kernel();
            if k.is_empty() {
                continue;
            }
            if k.len() != 1 {
                return Err(Error::Domain("root space is not one-dimensional".into()));
            }
            let vector = f.g.element(&k[0]);
            for (bk, ck) in tb.iter().zip(&coeffs) {
                if bk.bracket(&vector) != vector.scale(ck) {
                    return Err(Error::Domain("root vector is not a joint eigenvector".into()));
                }
            }
            let coroot = gram_inv.mul_vec(&coeffs);
            index.insert(coeffs.clone(), roots.len());
            roots.push(Root { coeffs, vector, coroot, weights: (a, b) });
        }
    }
    if roots.len() + r != f.g.dim() {
        return Err(Error::Domain(format!(
            "root space decomposition incomplete: {} roots for dim {} and rank {}",
            roots.len(),
            f.g.dim(),
            r
        )));
    }
    let refl: Vec<Matrix> = roots.iter().map(|a| reflection(&a.coeffs, &a.coroot)).collect();
    let weyl = close_group(&refl);
    let act = |w: &Matrix, a: &[Scalar]| -> Vec<Scalar> {
        // (α ∘ w⁻¹) as a row vector: α · w⁻¹
        let wi = w.inverse().unwrap();
        (0..r).map(|j| (0..r).map(|i| &a[i] * wi.get(i, j)).sum()).collect()
    };
    let mut weyl_perm = Vec::new();
    for w in &weyl {
        let mut p = Vec::new();
        for a in &roots {
            let img = act(w, &a.coeffs);
            p.push(*index.get(&img).ok_or_else(|| Error::Domain("Weyl group does not permute roots".into()))?);
        }
        weyl_perm.push(p);
    }
    let a_dim = f.dec.a.dim();
    let theta_t = Matrix::diag(&(0..r).map(|k| if k < a_dim { -Scalar::one() } else { Scalar::one() }).collect::<Vec<_>>());
    for b in &tb[..a_dim] {
        debug_assert_eq!(f.theta(b), -b);
    }
    let mut theta_perm = Vec::new();
    for a in &roots {
        let img: Vec<Scalar> = a.coeffs.iter().enumerate().map(|(k, c)| if k < a_dim { -c } else { c.clone() }).collect();
        theta_perm.push(*index.get(&img).ok_or_else(|| Error::Domain("theta does not permute roots".into()))?);
    }
    let positive: Vec<usize> = (0..roots.len()).filter(|&i| first_nonzero_positive(&roots[i].coeffs)).collect();
    let simple = simple_of(&roots.iter().map(|a| a.coeffs.clone()).collect::<Vec<_>>(), &positive);
    let anisotropic = positive.iter().all(|&i| !positive.contains(&theta_perm[i]));
    Ok(RootDatum {
        rank: r,
        real_rank: a_dim,
        roots,
        positive,
        simple,
        weyl,
        weyl_perm,
        theta_t,
        theta_perm,
        weights,
        eigenbasis,
        gram,
        anisotropic,
        index,
    })
}

fn simple_of(coeffs: &[Vec<Scalar>], positive: &[usize]) -> Vec<usize> {
    let set: HashSet<&Vec<Scalar>> = positive.iter().map(|&i| &coeffs[i]).collect();
    positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let d: Vec<Scalar> = coeffs[i].iter().zip(&coeffs[j]).map(|(a, b)| a - b).collect();
                j != i && set.contains(&d)
            })
        })
        .collect()
}

impl RootDatum {
    pub fn root_index(&self, coeffs: &[Scalar]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn eval_root(&self, i: usize, t: &[Scalar]) -> Scalar {
        dot(&self.roots[i].coeffs, t)
    }

    /// Indices of Weyl elements fixing the point `t` (𝔱 coordinates).
    pub fn stabilizer(&self, t: &[Scalar]) -> Vec<usize> {
        (0..self.weyl.len()).filter(|&k| self.weyl[k].mul_vec(t) == t).collect()
    }

    pub fn commutes_with_theta(&self, w: usize) -> bool {
        let m = &self.weyl[w];
        (m * &self.theta_t) == (&self.theta_t * m)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Positive system `w(Δ⁺)` for each Weyl element, tested for θ-anisotropy.
    pub fn anisotropic_order(&self) -> Result<Vec<usize>> {
        if self.anisotropic {
            return Ok(self.positive.clone());
        }
        for p in &self.weyl_perm {
            let pos: Vec<usize> = self.positive.iter().map(|&i| p[i]).collect();
            if pos.iter().all(|&i| !pos.contains(&self.theta_perm[i])) {
                return Ok(pos);
            }
        }
        Err(Error::Domain("no theta-anisotropic positive system: the form is not quasi-split".into()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank,
            "roots": self.roots.iter().map(|a| &a.coeffs).collect::<Vec<_>>(),
            "positive": self.positive,
            "simple": self.simple,
            "weyl_order": self.weyl.len(),
        })
    }
}

pub fn restrict_roots(rd: &RootDatum) -> RestrictedRootDatum {
    let a = rd.real_rank;
    let mut groups: Vec<RestrictedRoot> = Vec::new();
    let mut imaginary = Vec::new();
    for (i, r) in rd.roots.iter().enumerate() {
        let c: Vec<Scalar> = r.coeffs[..a].to_vec();
        if c.iter().all(|x| x.is_zero()) {
            imaginary.push(i);
            continue;
        }
        match groups.iter_mut().find(|g| g.coeffs == c) {
            Some(g) => {
                g.multiplicity += 1;
                g.roots.push(i);
            }
            None => groups.push(RestrictedRoot { coeffs: c, multiplicity: 1, roots: vec![i] }),
        }
    }
    groups.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
    let gram_a = Matrix::from_rows((0..a).map(|i| (0..a).map(|j| rd.gram.get(i, j).clone()).collect()).collect());
    let weyl = if a == 0 {
        vec![]
    } else {
        let gi = gram_a.inverse().unwrap();
        let refl: Vec<Matrix> = groups.iter().map(|g| reflection(&g.coeffs, &gi.mul_vec(&g.coeffs))).collect();
        close_group(&refl)
    };
    let w_theta: Vec<usize> = (0..rd.weyl.len()).filter(|&k| rd.commutes_with_theta(k)).collect();
    let block = |w: &Matrix| Matrix::from_rows((0..a).map(|i| (0..a).map(|j| w.get(i, j).clone()).collect()).collect());
    let lift: Vec<usize> =
        weyl.iter().map(|wa| w_theta.iter().copied().find(|&k| block(&rd.weyl[k]) == *wa).unwrap_or(usize::MAX)).collect();
    let positive: Vec<usize> = (0..groups.len()).filter(|&i| first_nonzero_positive(&groups[i].coeffs)).collect();
    let coeffs: Vec<Vec<Scalar>> = groups.iter().map(|g| g.coeffs.clone()).collect();
    let simple = simple_of(&coeffs, &positive)
        .into_iter()
        .filter(|&i| {
            // in non-reduced systems 2λ is never simple
            let half: Vec<Scalar> = coeffs[i].iter().map(|x| x * &Scalar::frac(1, 2)).collect();
            !coeffs.contains(&half)
        })
        .collect();
    let reduced = !coeffs.iter().any(|c| {
        let dbl: Vec<Scalar> = c.iter().map(|x| x * &Scalar::int(2)).collect();
        coeffs.contains(&dbl)
    });
    RestrictedRootDatum { roots: groups, positive, simple, weyl, lift, w_theta, reduced, imaginary }
}

impl RestrictedRootDatum {
    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn multiplicity_of(&self, coeffs: &[Scalar]) -> usize {
        self.roots.iter().find(|g| g.coeffs == coeffs).map_or(0, |g| g.multiplicity)
    }

    /// Multiplicities are constant on W(𝔞)-orbits.
    pub fn multiplicities_invariant(&self) -> bool {
        self.weyl.iter().all(|w| {
            let wi = w.inverse().unwrap();
            self.roots.iter().all(|g| {
                let img: Vec<Scalar> =
                    (0..g.coeffs.len()).map(|j| (0..g.coeffs.len()).map(|i| &g.coeffs[i] * wi.get(i, j)).sum()).collect();
                self.multiplicity_of(&img) == g.multiplicity
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "restricted_roots": self.roots.iter().map(|g| serde_json::json!({"coeffs": g.coeffs, "multiplicity": g.multiplicity})).collect::<Vec<_>>(),
            "restricted_weyl_order": self.weyl.len(),
            "reduced": self.reduced,
            "simple": self.simple,
        })
    }
}

/// Tests `C_W(x) ⊆ W^θ` at a generic point of every flat of the restricted hyperplane
/// arrangement in 𝔞.
pub fn stabilizer_inclusion_test(f: &RealForm, rd: &RootDatum, rr: &RestrictedRootDatum) -> Result<StabilizerReport> {
    if !rr.imaginary.is_empty() {
        return Err(Error::Domain("stabilizer test needs a quasi-split form".into()));
    }
    let a = rd.real_rank;
    let pos: Vec<Vec<Scalar>> = rr.positive.iter().map(|&i| rr.roots[i].coeffs.clone()).collect();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut flats = Vec::new();
    let mut witness = None;
    for mask in 0u32..(1u32 << pos.len()) {
        let chosen: Vec<Vec<Scalar>> = (0..pos.len()).filter(|k| mask >> k & 1 == 1).map(|k| pos[k].clone()).collect();
        let kernel: Vec<Vec<Scalar>> = if chosen.is_empty() {
            (0..a).map(|i| (0..a).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
        } else {
            Matrix::from_rows(chosen).kernel()
        };
        let point = generic_point(&kernel, &pos);
        let vanish: Vec<bool> = pos.iter().map(|p| dot(p, &point).is_zero()).collect();
        if !seen.insert(vanish.clone()) {
            continue;
        }
        let mut t = point.clone();
        t.extend(vec![Scalar::zero(); rd.rank - a]);
        let stab = rd.stabilizer(&t);
        let inside = stab.iter().filter(|&&w| rd.commutes_with_theta(w)).count();
        let contained = inside == stab.len();
        if !contained && witness.is_none() {
            let w = stab.iter().copied().find(|&w| !rd.commutes_with_theta(w)).unwrap();
            witness = Some((point.clone(), rd.weyl[w].clone()));
        }
        flats.push(FlatCheck { codim: a - kernel.len(), point, stabilizer_order: stab.len(), stabilizer_in_w_theta: inside, contained });
    }
    flats.sort_by_key(|c| c.codim);
    let _ = f;
    Ok(StabilizerReport {
        holds: flats.iter().all(|c| c.contained),
        holds_on_walls: flats.iter().filter(|c| c.codim <= 1).all(|c| c.contained),
        flats,
        witness,
    })
}

fn generic_point(kernel: &[Vec<Scalar>], pos: &[Vec<Scalar>]) -> Vec<Scalar> {
    let a = pos.first().map_or(kernel.first().map_or(0, |k| k.len()), |p| p.len());
    if kernel.is_empty() {
        return vec![Scalar::zero(); a];
    }
    let vanish_on_flat: Vec<bool> = pos.iter().map(|p| kernel.iter().all(|k| dot(p, k).is_zero())).collect();
    for s in 0i64.. {
        let coef: Vec<Scalar> =
            (0..kernel.len()).map(|k| Scalar::int(1 + (k as i64 + 1) * (s + 2) + (k as i64) * (k as i64) * 7)).collect();
        let mut x = vec![Scalar::zero(); a];
        for (c, k) in coef.iter().zip(kernel) {
            for j in 0..a {
                x[j] = &x[j] + &(c * &k[j]);
            }
        }
        let ok = pos.iter().zip(&vanish_on_flat).all(|(p, &v)| v || !dot(p, &x).is_zero());
        if ok {
            return x;
        }
    }
    unreachable!()
}
