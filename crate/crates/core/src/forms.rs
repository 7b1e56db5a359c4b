//! Catalog of real forms: involutions, Cartan decompositions, maximal abelian subspaces,
//! quasi-splitness, isotropy action and exact group sampling.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::ChevalleyData;
use crate::error::{Error, Result};
use crate::lie::{abelian_witness, exp_nilpotent, is_semisimple, spectral_projectors, LieAlgebra, MatrixSpace};
use crate::matrix::Matrix;
use crate::roots::{compute_roots, restrict_roots, RestrictedRootDatum, RootDatum};
use crate::scalar::{rat, Scalar};
use crate::torus::TorusData;

pub const CATALOG: [&str; 8] = ["sl2R", "sl3R", "su11", "su12", "su22", "su13", "sp4R", "so24"];

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// The complex matrix group the real form lives in.
#[derive(Clone, Debug)]
pub enum Ambient {
    SpecialLinear,
    /// Preserves the skew form `Ω`.
    Symplectic(Matrix),
    /// Preserves the symmetric form `J`, determinant one.
    Orthogonal(Matrix),
}

/// Holomorphic involution of the group and of its Lie algebra.
#[derive(Clone, Debug)]
pub enum Involution {
    /// `g ↦ s g s⁻¹`
    Inner(Matrix),
    /// `g ↦ J g⁻ᵀ J⁻¹`, so `X ↦ -J Xᵀ J⁻¹` on the algebra.
    TransposeInverse(Matrix),
}

#[derive(Clone, Debug)]
pub struct FormSpec {
    pub name: String,
    pub label: String,
    pub n: usize,
    pub ambient: Ambient,
    pub theta: Involution,
    pub quasi_split_expected: bool,
    pub split: bool,
    pub center_order: usize,
    pub principal_nilpotent: Option<Matrix>,
}

#[derive(Clone, Debug)]
pub struct CartanDecomposition {
    pub h: MatrixSpace,
    pub m: MatrixSpace,
    pub a: MatrixSpace,
    pub d: MatrixSpace,
    /// Basis is the 𝔞 basis followed by the 𝔡 basis.
    pub t: MatrixSpace,
}

/// `(e, x, f)` with `e, f ∈ 𝔪`, `x ∈ 𝔥`, `[x,e] = 2e`, `[x,f] = -2f`, `[e,f] = x`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalTriple {
    pub e: Matrix,
    pub x: Matrix,
    pub f: Matrix,
}

#[derive(Debug)]
pub struct RealForm {
    pub spec: FormSpec,
    pub g: LieAlgebra,
    pub dec: CartanDecomposition,
    theta_inv: Matrix,
    triple: Option<NormalTriple>,
    h_cartan: MatrixSpace,
    h_nilpotents: Vec<Matrix>,
    h_torus_dirs: Vec<Vec<(i64, Matrix)>>,
    quasi_split: bool,
    pub(crate) roots_cell: OnceLock<Result<RootDatum>>,
    pub(crate) restricted_cell: OnceLock<Result<RestrictedRootDatum>>,
    pub(crate) torus_cell: OnceLock<Result<TorusData>>,
    pub(crate) chevalley_cell: OnceLock<Result<ChevalleyData>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiSplitReport {
    pub quasi_split: bool,
    pub centralizer_g_dim: usize,
    pub centralizer_g_abelian: bool,
    pub centralizer_h_dim: usize,
    pub centralizer_h_abelian: bool,
    pub witness: Option<(Matrix, Matrix)>,
    /// Sampled regular `x ∈ 𝔪` that were also regular in 𝔤, out of those tried.
    pub regular_cross_check: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subgroup {
    H,
    GTheta,
}

fn e(n: usize, i: usize, j: usize) -> Matrix {
    Matrix::unit(n, i, j)
}

fn spec(name: &str) -> Result<FormSpec> {
    let i = Scalar::i();
    let one = Scalar::one();
    let s = |d: &[i64]| Matrix::diag_ints(d);
    let anti1 = |n: usize| Matrix::antidiag(&vec![Scalar::one(); n]);
    let f = match name {
        "sl2R" => FormSpec {
            name: name.into(),
            label: "sl(2,R)".into(),
            n: 2,
            ambient: Ambient::SpecialLinear,
            theta: Involution::Inner(s(&[1, -1])),
            quasi_split_expected: true,
            split: true,
            center_order: 2,
            principal_nilpotent: Some(e(2, 0, 1)),
        },
        "sl3R" => FormSpec {
            name: name.into(),
            label: "sl(3,R)".into(),
            n: 3,
            ambient: Ambient::SpecialLinear,
            theta: Involution::TransposeInverse(anti1(3)),
            quasi_split_expected: true,
            split: true,
            center_order: 3,
            principal_nilpotent: Some(&e(3, 0, 1) + &e(3, 1, 2)),
        },
        "su11" => FormSpec {
            name: name.into(),
            label: "su(1,1)".into(),
            n: 2,
            ambient: Ambient::SpecialLinear,
            theta: Involution::Inner(s(&[1, -1])),
            quasi_split_expected: true,
            split: true,
            center_order: 2,
            principal_nilpotent: Some(e(2, 0, 1)),
        },
        "su12" => FormSpec {
            name: name.into(),
            label: "su(1,2)".into(),
            n: 3,
            ambient: Ambient::SpecialLinear,
            theta: Involution::Inner(s(&[1, -1, -1])),
            quasi_split_expected: true,
            split: false,
            center_order: 3,
            principal_nilpotent: Some(&e(3, 1, 0) + &e(3, 0, 2)),
        },
        "su22" => FormSpec {
            name: name.into(),
            label: "su(2,2)".into(),
            n: 4,
            ambient: Ambient::SpecialLinear,
            theta: Involution::Inner(s(&[1, 1, -1, -1])),
            quasi_split_expected: true,
            split: false,
            center_order: 4,
            principal_nilpotent: Some(&(&e(4, 0, 2) + &e(4, 2, 1)) + &e(4, 1, 3)),
        },
        "su13" => FormSpec {
            name: name.into(),
            label: "su(1,3)".into(),
            n: 4,
            ambient: Ambient::SpecialLinear,
            theta: Involution::Inner(s(&[1, -1, -1, -1])),
            quasi_split_expected: false,
            split: false,
            center_order: 4,
            principal_nilpotent: None,
        },
        "sp4R" => FormSpec {
            name: name.into(),
            label: "sp(4,R)".into(),
            n: 4,
            ambient: Ambient::Symplectic(Matrix::antidiag(&[one.clone(), one.clone(), -&one, -&one])),
            theta: Involution::Inner(Matrix::diag(&[-&i, i.clone(), -&i, i.clone()])),
            quasi_split_expected: true,
            split: true,
            center_order: 2,
            principal_nilpotent: Some(&(&e(4, 0, 1) - &e(4, 2, 3)) + &e(4, 1, 2)),
        },
        "so24" => FormSpec {
            name: name.into(),
            label: "so(2,4)".into(),
            n: 6,
            ambient: Ambient::Orthogonal(anti1(6)),
            theta: Involution::Inner(s(&[1, -1, 1, 1, -1, 1])),
            quasi_split_expected: true,
            split: false,
            center_order: 2,
            principal_nilpotent: Some({
                let a = &e(6, 0, 1) - &e(6, 4, 5);
                let b = &e(6, 1, 2) - &e(6, 3, 4);
                let c = &e(6, 1, 3) - &e(6, 2, 4);
                &(&a + &b) + &c
            }),
        },
        _ => return Err(Error::Usage(format!("unknown form {name:?}; known forms: {}", CATALOG.join(", ")))),
    };
    Ok(f)
}

impl FormSpec {
    pub fn theta_lie(&self, x: &Matrix) -> Matrix {
        match &self.theta {
            Involution::Inner(s) => &(s * x) * &s.inverse().unwrap(),
            Involution::TransposeInverse(j) => -&(&(j * &x.transpose()) * &j.inverse().unwrap()),
        }
    }

    pub fn theta_group(&self, g: &Matrix) -> Matrix {
        match &self.theta {
            Involution::Inner(s) => &(s * g) * &s.inverse().unwrap(),
            Involution::TransposeInverse(j) => &(j * &g.inverse().expect("invertible").transpose()) * &j.inverse().unwrap(),
        }
    }

    /// Orthogonal projection of `gl_n` onto the ambient Lie algebra.
    pub fn project_to_algebra(&self, x: &Matrix) -> Matrix {
        match &self.ambient {
            Ambient::SpecialLinear => {
                let t = &x.trace() / &Scalar::int(self.n as i64);
                x - &Matrix::identity(self.n).scale(&t)
            }
            Ambient::Symplectic(w) | Ambient::Orthogonal(w) => {
                let wi = w.inverse().unwrap();
                (x - &(&(&wi * &x.transpose()) * w)).scale(&Scalar::frac(1, 2))
            }
        }
    }

    pub fn algebra_contains(&self, x: &Matrix) -> bool {
        match &self.ambient {
            Ambient::SpecialLinear => x.trace().is_zero(),
            Ambient::Symplectic(w) | Ambient::Orthogonal(w) => (&(&x.transpose() * w) + &(w * x)).is_zero(),
        }
    }

    pub fn group_contains(&self, g: &Matrix) -> bool {
        if g.rows() != self.n || !g.is_square() {
            return false;
        }
        match &self.ambient {
            Ambient::SpecialLinear => g.det().is_one(),
            Ambient::Symplectic(w) => &(&g.transpose() * w) * g == *w,
            Ambient::Orthogonal(w) => &(&g.transpose() * w) * g == *w && g.det().is_one(),
        }
    }

    /// Ordered generator list for the eigenspace bases.
    fn generators(&self) -> Vec<Matrix> {
        let n = self.n;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..n / 2 {
            pairs.push((i, n - 1 - i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if j != n - 1 - i {
                    pairs.push((i, j));
                }
            }
        }
        let mut gens: Vec<Matrix> = (0..n).map(|i| e(n, i, i)).collect();
        for (i, j) in pairs {
            let plus = &e(n, i, j) + &e(n, j, i);
            let minus = &e(n, i, j) - &e(n, j, i);
            gens.push(plus);
            gens.push(minus);
        }
        for i in 0..n {
            for j in 0..n {
                gens.push(e(n, i, j));
            }
        }
        gens.into_iter().map(|g| self.project_to_algebra(&g)).collect()
    }
}

fn toral_extension(space: &MatrixSpace, seed: &[Matrix]) -> Vec<Matrix> {
    let mut chosen: Vec<Matrix> = seed.to_vec();
    let mut n_before = usize::MAX;
    while n_before != chosen.len() {
        n_before = chosen.len();
        let cent = space.centralizer_of(&chosen);
        let chosen_space = MatrixSpace::span(space.matrix_size(), &chosen);
        if cent.dim() == chosen_space.dim() {
            break;
        }
        let mut cands: Vec<Matrix> = cent.basis().to_vec();
        let b = cent.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                cands.push(&b[i] + &b[j].scale(&Scalar::int(2)));
            }
        }
        for c in cands {
            if chosen_space.contains(&c) || !is_semisimple(&c) {
                continue;
            }
            if chosen.iter().all(|x| x.bracket(&c).is_zero()) {
                chosen.push(c);
                break;
            }
        }
    }
    chosen
}

pub fn cartan_decompose(spec: &FormSpec) -> Result<(LieAlgebra, CartanDecomposition)> {
    let n = spec.n;
    let gens = spec.generators();
    let g_span = MatrixSpace::span(n, &gens);
    for b in g_span.basis() {
        let tb = spec.theta_lie(b);
        if !g_span.contains(&tb) {
            return Err(Error::Construction("theta does not preserve the algebra".into()));
        }
        if spec.theta_lie(&tb) != *b {
            return Err(Error::Construction("theta is not an involution".into()));
        }
    }
    let half = Scalar::frac(1, 2);
    let hg: Vec<Matrix> = gens.iter().map(|y| (y + &spec.theta_lie(y)).scale(&half)).collect();
    let mg: Vec<Matrix> = gens.iter().map(|y| (y - &spec.theta_lie(y)).scale(&half)).collect();
    let h = MatrixSpace::span(n, &hg);
    let m = MatrixSpace::span(n, &mg);
    if h.dim() + m.dim() != g_span.dim() {
        return Err(Error::Construction("eigenspaces do not span the algebra".into()));
    }
    let mut basis = h.basis().to_vec();
    basis.extend(m.basis().iter().cloned());
    let g = LieAlgebra::new(n, basis)?;
    for (k, x) in g.basis().iter().enumerate() {
        for y in &g.basis()[k..] {
            if spec.theta_lie(&x.bracket(y)) != spec.theta_lie(x).bracket(&spec.theta_lie(y)) {
                return Err(Error::Construction("theta is not an automorphism".into()));
            }
        }
    }
    let mut greedy: Vec<Matrix> = Vec::new();
    for b in m.basis() {
        if is_semisimple(b) && greedy.iter().all(|x| x.bracket(b).is_zero()) {
            greedy.push(b.clone());
        }
    }
    let a_gens = toral_extension(&m, &greedy);
    let a = MatrixSpace::span(n, &a_gens);
    let ch = h.centralizer_of(a.basis());
    let d = if ch.is_abelian() && ch.basis().iter().all(is_semisimple) {
        ch
    } else {
        let mut seed: Vec<Matrix> = Vec::new();
        for b in ch.basis() {
            if is_semisimple(b) && seed.iter().all(|x| x.bracket(b).is_zero()) {
                seed.push(b.clone());
            }
        }
        MatrixSpace::span(n, &toral_extension(&ch, &seed))
    };
    let mut tb = a.basis().to_vec();
    tb.extend(d.basis().iter().cloned());
    let t = MatrixSpace::span(n, &tb);
    if abelian_witness(t.basis()).is_some() || g.centralizer(t.basis()).dim() != t.dim() {
        return Err(Error::Construction("could not build a Cartan subalgebra containing the abelian subspace".into()));
    }
    Ok((g, CartanDecomposition { h, m, a, d, t }))
}

/// Solve for coordinates `c` in `space` with `Σ c_k L(b_k) = target`.
pub(crate) fn solve_in(space: &MatrixSpace, l: impl Fn(&Matrix) -> Matrix, target: &Matrix) -> Option<Matrix> {
    let cols: Vec<Vec<Scalar>> = space.basis().iter().map(|b| l(b).to_vec()).collect();
    if cols.is_empty() {
        return target.is_zero().then(|| target.clone());
    }
    let c = Matrix::from_cols(&cols).solve_one(&target.to_vec())?;
    Some(space.element(&c))
}

fn principal_triple(g: &LieAlgebra, dec: &CartanDecomposition, e: &Matrix) -> Result<NormalTriple> {
    let n = g.matrix_size();
    if !dec.m.contains(e) || !e.is_nilpotent() {
        return Err(Error::Construction("principal nilpotent must be a nilpotent element of m".into()));
    }
    if dec.m.centralizer_of(std::slice::from_ref(e)).dim() != dec.a.dim() {
        return Err(Error::Construction("nilpotent is not regular".into()));
    }
    let two_e = e.scale(&Scalar::int(2));
    let z = solve_in(&dec.m, |z| e.bracket(z).bracket(e), &two_e)
        .ok_or_else(|| Error::Construction("no neutral element for the nilpotent".into()))?;
    let x = e.bracket(&z);
    // f ∈ 𝔪 with [e,f] = x and [x,f] = -2f, stacked as one linear system
    let cols: Vec<Vec<Scalar>> = dec
        .m
        .basis()
        .iter()
        .map(|b| {
            let mut v = e.bracket(b).to_vec();
            v.extend((&x.bracket(b) + &b.scale(&Scalar::int(2))).to_vec());
            v
        })
        .collect();
    let mut rhs = x.to_vec();
    rhs.extend(vec![Scalar::zero(); n * n]);
    let c = Matrix::from_cols(&cols).solve_one(&rhs).ok_or_else(|| Error::Construction("no nilnegative element".into()))?;
    let f = dec.m.element(&c);
    let t = NormalTriple { e: e.clone(), x, f };
    debug_assert!(t.x.bracket(&t.e) == two_e);
    Ok(t)
}

impl RealForm {
    pub fn build(spec: FormSpec) -> Result<Self> {
        let (g, dec) = cartan_decompose(&spec)?;
        if spec.split != (dec.a.dim() == dec.t.dim()) {
            return Err(Error::Construction(format!("{}: split flag disagrees with the real rank", spec.name)));
        }
        let triple = match &spec.principal_nilpotent {
            Some(e) => Some(principal_triple(&g, &dec, e)?),
            None => None,
        };
        let theta_inv = match &spec.theta {
            Involution::Inner(s) | Involution::TransposeInverse(s) => s.inverse().unwrap(),
        };
        let mut seed = Vec::new();
        for b in dec.h.basis() {
            if is_semisimple(b) && seed.iter().all(|x: &Matrix| x.bracket(b).is_zero()) {
                seed.push(b.clone());
            }
        }
        let h_cartan = MatrixSpace::span(spec.n, &toral_extension(&dec.h, &seed));
        let h_nilpotents = root_vectors(&dec.h, &h_cartan);
        let h_torus_dirs = h_cartan.basis().iter().filter_map(integral_spectrum).collect();
        let quasi_split = abelian_witness(g.centralizer(dec.a.basis()).basis()).is_none();
        Ok(RealForm {
            spec,
            g,
            dec,
            theta_inv,
            triple,
            h_cartan,
            h_nilpotents,
            h_torus_dirs,
            quasi_split,
            roots_cell: OnceLock::new(),
            restricted_cell: OnceLock::new(),
            torus_cell: OnceLock::new(),
            chevalley_cell: OnceLock::new(),
        })
    }

    pub fn roots(&self) -> Result<&RootDatum> {
        self.roots_cell.get_or_init(|| compute_roots(self)).as_ref().map_err(Clone::clone)
    }

    pub fn restricted(&self) -> Result<&RestrictedRootDatum> {
        self.restricted_cell.get_or_init(|| self.roots().map(restrict_roots)).as_ref().map_err(Clone::clone)
    }

    /// `𝔠_𝔤(𝔞)` is abelian; computed once at construction.
    pub fn quasi_split(&self) -> bool {
        self.quasi_split
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn theta(&self, x: &Matrix) -> Matrix {
        self.spec.theta_lie(x)
    }

    pub fn theta_group(&self, g: &Matrix) -> Matrix {
        self.spec.theta_group(g)
    }

    pub fn involution_matrix_inverse(&self) -> &Matrix {
        &self.theta_inv
    }

    pub fn rank(&self) -> usize {
        self.dec.t.dim()
    }

    pub fn real_rank(&self) -> usize {
        self.dec.a.dim()
    }

    pub fn principal_triple(&self) -> Result<&NormalTriple> {
        self.triple.as_ref().ok_or_else(|| Error::Domain(format!("{} is not quasi-split; no principal normal triple", self.name())))
    }

    pub fn h_cartan(&self) -> &MatrixSpace {
        &self.h_cartan
    }

    pub fn h_nilpotents(&self) -> &[Matrix] {
        &self.h_nilpotents
    }

    pub fn in_m(&self, x: &Matrix) -> bool {
        self.dec.m.contains(x)
    }

    /// Regular in 𝔪: the centralizer in 𝔪 has the minimal dimension `dim 𝔞`.
    pub fn is_regular(&self, x: &Matrix) -> bool {
        self.dec.m.centralizer_of(std::slice::from_ref(x)).dim() == self.dec.a.dim()
    }

    /// Regular in 𝔤: centralizer dimension equals the rank.
    pub fn is_regular_in_g(&self, x: &Matrix) -> bool {
        self.g.centralizer(std::slice::from_ref(x)).dim() == self.rank()
    }

    pub fn is_quasi_split(&self, seed: u64) -> QuasiSplitReport {
        let cg = self.g.centralizer(self.dec.a.basis());
        let ch = self.dec.h.centralizer_of(self.dec.a.basis());
        let wg = abelian_witness(cg.basis());
        let wh = abelian_witness(ch.basis());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut ok, mut tried) = (0, 0);
        let mut attempts = 0;
        while tried < 20 && attempts < 200 {
            attempts += 1;
            let x = self.random_m(&mut rng, 3);
            if !self.is_regular(&x) {
                continue;
            }
            tried += 1;
            if self.is_regular_in_g(&x) {
                ok += 1;
            }
        }
        QuasiSplitReport {
            quasi_split: wg.is_none(),
            centralizer_g_dim: cg.dim(),
            centralizer_g_abelian: wg.is_none(),
            centralizer_h_dim: ch.dim(),
            centralizer_h_abelian: wh.is_none(),
            witness: wg,
            regular_cross_check: (ok, tried),
        }
    }

    pub fn random_m(&self, rng: &mut impl Rng, bound: i64) -> Matrix {
        let c: Vec<Scalar> = (0..self.dec.m.dim()).map(|_| Scalar::int(rng.gen_range(-bound..=bound))).collect();
        self.dec.m.element(&c)
    }

    pub fn random_a(&self, rng: &mut impl Rng, bound: i64) -> Matrix {
        let c: Vec<Scalar> = (0..self.dec.a.dim()).map(|_| Scalar::int(rng.gen_range(-bound..=bound))).collect();
        self.dec.a.element(&c)
    }

    pub fn normalizes_m(&self, g: &Matrix) -> bool {
        let Some(gi) = g.inverse() else { return false };
        self.dec.m.basis().iter().all(|b| self.dec.m.contains(&(&(g * b) * &gi)))
    }

    pub fn isotropy_act(&self, g: &Matrix, x: &Matrix) -> Result<Matrix> {
        if !self.in_m(x) {
            return Err(Error::Usage("element is not in m".into()));
        }
        if !self.normalizes_m(g) {
            return Err(Error::Domain("group element does not normalize m".into()));
        }
        Ok(&(g * x) * &g.inverse().unwrap())
    }

    pub fn in_h(&self, g: &Matrix) -> bool {
        self.spec.group_contains(g) && self.theta_group(g) == *g
    }

    /// `g⁻¹ θ(g)` is central.
    pub fn in_gtheta(&self, g: &Matrix) -> bool {
        if !self.spec.group_contains(g) {
            return false;
        }
        let c = &g.inverse().unwrap() * &self.theta_group(g);
        let z = c.get(0, 0).clone();
        c == Matrix::identity(self.n()).scale(&z) && self.spec.group_contains(&c)
    }

    /// Point of the torus of `H` along the `k`-th integral direction at parameter `z`.
    pub fn h_torus_point(&self, k: usize, z: &Scalar) -> Option<Matrix> {
        let dir = self.h_torus_dirs.get(k)?;
        let mut m = Matrix::zeros(self.n(), self.n());
        for (p, proj) in dir {
            m = &m + &proj.scale(&z.pow(*p));
        }
        Some(m)
    }

    pub fn h_torus_rank(&self) -> usize {
        self.h_torus_dirs.len()
    }

    /// Exact elements of `H` (θ-fixed) or `G_θ`. Deterministic given the seed.
    pub fn sample_group_elements(&self, which: Subgroup, count: usize, seed: u64) -> Vec<Matrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let zs = [Scalar::i(), -Scalar::i(), Scalar::int(2), Scalar::frac(1, 2), -Scalar::one(), Scalar::frac(-3, 2)];
        let mut fixed: Vec<Matrix> = Vec::new();
        for k in 0..self.h_torus_rank() {
            for z in &zs {
                fixed.push(self.h_torus_point(k, z).unwrap());
            }
        }
        for nil in &self.h_nilpotents {
            fixed.push(exp_nilpotent(nil));
        }
        let fgroup: Vec<Matrix> = match which {
            Subgroup::H => vec![Matrix::identity(self.n())],
            Subgroup::GTheta => self.torus().map(|t| t.f_matrices()).unwrap_or_default(),
        };
        let mut k = 0;
        while out.len() < count {
            let h = if k < fixed.len() { fixed[k].clone() } else { self.random_h(&mut rng, &zs) };
            let f =
                if which == Subgroup::GTheta && !fgroup.is_empty() { fgroup[k % fgroup.len()].clone() } else { Matrix::identity(self.n()) };
            let g = &f * &h;
            debug_assert!(match which {
                Subgroup::H => self.in_h(&g),
                Subgroup::GTheta => self.in_gtheta(&g),
            });
            out.push(g);
            k += 1;
        }
        out
    }

    fn random_h(&self, rng: &mut ChaCha8Rng, zs: &[Scalar]) -> Matrix {
        let mut g = Matrix::identity(self.n());
        let qs = [Scalar::one(), -Scalar::one(), Scalar::int(2), Scalar::frac(1, 2), Scalar::frac(-1, 3)];
        for _ in 0..3 {
            if !self.h_nilpotents.is_empty() {
                let nil = self.h_nilpotents.choose(rng).unwrap();
                let q = qs.choose(rng).unwrap();
                g = &g * &exp_nilpotent(&nil.scale(q));
            }
            if self.h_torus_rank() > 0 {
                let k = rng.gen_range(0..self.h_torus_rank());
                let z = zs.choose(rng).unwrap();
                g = &g * &self.h_torus_point(k, z).unwrap();
            }
        }
        g
    }

    pub fn info_json(&self) -> serde_json::Value {
        let qs = self.is_quasi_split(DEFAULT_SEED);
        serde_json::json!({
            "name": self.spec.name,
            "label": self.spec.label,
            "matrix_size": self.n(),
            "dim_g": self.g.dim(),
            "dim_h": self.dec.h.dim(),
            "dim_m": self.dec.m.dim(),
            "dim_a": self.dec.a.dim(),
            "dim_d": self.dec.d.dim(),
            "rank": self.rank(),
            "quasi_split": qs.quasi_split,
            "quasi_split_expected": self.spec.quasi_split_expected,
            "split": self.spec.split,
            "center_order": self.spec.center_order,
            "a_basis": self.dec.a.basis().iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            "d_basis": self.dec.d.basis().iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            "centralizer_of_a": {
                "in_g_dim": qs.centralizer_g_dim,
                "in_g_abelian": qs.centralizer_g_abelian,
                "in_h_dim": qs.centralizer_h_dim,
                "in_h_abelian": qs.centralizer_h_abelian,
            },
        })
    }
}

/// Root vectors of `space` for a toral subalgebra, when the spectrum lies in ℚ(i).
fn root_vectors(space: &MatrixSpace, cartan: &MatrixSpace) -> Vec<Matrix> {
    if cartan.dim() == 0 || space.dim() == 0 {
        return vec![];
    }
    let mut c = Matrix::zeros(space.matrix_size(), space.matrix_size());
    for (k, b) in cartan.basis().iter().enumerate() {
        c = &c + &b.scale(&Scalar::int(3 * k as i64 + 2));
    }
    let cols: Vec<Vec<Scalar>> = space.basis().iter().map(|b| space.coords(&c.bracket(b)).unwrap()).collect();
    let ad = Matrix::from_cols(&cols);
    let (roots, _) = ad.charpoly().gaussian_roots();
    let mut out = Vec::new();
    for (l, _) in roots {
        if l.is_zero() {
            continue;
        }
        let k = (&ad - &Matrix::identity(ad.rows()).scale(&l)).kernel();
        for v in k {
            out.push(space.element(&v));
        }
    }
    out.sort_by_key(|m| m.to_string());
    out
}

/// `c` with spectrum in ℚ(i) and rational eigenvalue ratios: exponents and projectors so that
/// `Σ z^{n_k} P_k` is a one-parameter subgroup.
fn integral_spectrum(c: &Matrix) -> Option<Vec<(i64, Matrix)>> {
    use num_integer::Integer;
    let proj = spectral_projectors(c)?;
    let reference = proj.iter().find(|(l, _)| !l.is_zero())?.0.clone();
    let mut ratios = Vec::new();
    let mut den = num_bigint::BigInt::one();
    for (l, _) in &proj {
        let r = l / &reference;
        if !r.is_real() {
            return None;
        }
        den = den.lcm(r.re().denom());
        ratios.push(r.re().clone());
    }
    let mut out = Vec::new();
    for (r, (_, p)) in ratios.into_iter().zip(proj) {
        let k = (r * num_rational::BigRational::from_integer(den.clone())).to_integer();
        out.push((i64::try_from(k).ok()?, p));
    }
    Some(out)
}

static FORMS: [OnceLock<std::result::Result<RealForm, Error>>; 8] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Catalog entry by name; built on first use and shared afterwards.
pub fn form(name: &str) -> Result<&'static RealForm> {
    let idx = CATALOG
        .iter()
        .position(|&n| n == name)
        .ok_or_else(|| Error::Usage(format!("unknown form {name:?}; known forms: {}", CATALOG.join(", "))))?;
    FORMS[idx].get_or_init(|| RealForm::build(spec(name)?)).as_ref().map_err(Clone::clone)
}

pub fn form_spec(name: &str) -> Result<FormSpec> {
    spec(name)
}

/// `diag(λ, λ⁻¹)`-style helper for rational parameters.
pub fn diag_pair(l: i64, d: i64) -> Matrix {
    Matrix::diag(&[Scalar::real(rat(l, d)), Scalar::real(rat(d, l))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let expect = [
            ("sl2R", 3, 1, 2, 1),
            ("sl3R", 8, 3, 5, 2),
            ("su11", 3, 1, 2, 1),
            ("su12", 8, 4, 4, 1),
            ("su22", 15, 7, 8, 2),
            ("su13", 15, 9, 6, 1),
            ("sp4R", 10, 4, 6, 2),
            ("so24", 15, 7, 8, 2),
        ];
        for (name, g, h, m, a) in expect {
            let f = form(name).unwrap();
            assert_eq!((f.g.dim(), f.dec.h.dim(), f.dec.m.dim(), f.dec.a.dim()), (g, h, m, a), "{name}");
            assert_eq!(f.g.centralizer(f.dec.t.basis()).dim(), f.rank(), "{name}");
        }
    }

    #[test]
    fn sl2_abelian_subspace_is_symmetric() {
        let f = form("sl2R").unwrap();
        assert_eq!(f.dec.a.basis()[0], Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(f.dec.h.basis()[0], Matrix::diag(&[Scalar::frac(1, 2), Scalar::frac(-1, 2)]));
    }

    #[test]
    fn quasi_split_flags() {
        for name in CATALOG {
            let f = form(name).unwrap();
            let r = f.is_quasi_split(DEFAULT_SEED);
            assert_eq!(r.quasi_split, f.spec.quasi_split_expected, "{name}");
            if r.quasi_split {
                assert_eq!(r.regular_cross_check.0, r.regular_cross_check.1, "{name}");
            } else {
                let (u, v) = r.witness.unwrap();
                assert!(!u.bracket(&v).is_zero());
            }
        }
    }

    #[test]
    fn principal_triples() {
        for name in CATALOG {
            let f = form(name).unwrap();
            match f.principal_triple() {
                Ok(t) => {
                    assert_eq!(t.x.bracket(&t.e), t.e.scale(&Scalar::int(2)));
                    assert_eq!(t.x.bracket(&t.f), t.f.scale(&Scalar::int(-2)));
                    assert_eq!(t.e.bracket(&t.f), t.x);
                    assert!(f.dec.h.contains(&t.x) && f.in_m(&t.f));
                }
                Err(e) => assert!(matches!(e, Error::Domain(_)) && name == "su13"),
            }
        }
        let t = form("sl2R").unwrap().principal_triple().unwrap();
        assert_eq!(t.x, Matrix::diag_ints(&[1, -1]));
        assert_eq!(t.f, Matrix::unit(2, 1, 0));
    }

    #[test]
    fn isotropy_examples() {
        let f = form("sl2R").unwrap();
        let x = Matrix::from_ints(&[&[0, 3], &[5, 0]]);
        let y = f.isotropy_act(&diag_pair(2, 1), &x).unwrap();
        assert_eq!(y, Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::int(12)], vec![Scalar::frac(5, 4), Scalar::zero()]]));
        let w = Matrix::from_rows(vec![vec![Scalar::zero(), Scalar::i()], vec![Scalar::i(), Scalar::zero()]]);
        assert_eq!(f.isotropy_act(&w, &Matrix::unit(2, 0, 1)).unwrap(), Matrix::unit(2, 1, 0));
        let bad = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(matches!(f.isotropy_act(&bad, &x), Err(Error::Domain(_))));
    }

    #[test]
    fn unknown_form() {
        assert!(matches!(form("e6"), Err(Error::Usage(_))));
    }
}
