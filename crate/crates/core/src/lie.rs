//! Matrix Lie algebras: subspaces of matrices, brackets, Killing form, centralizers,
//! exact Jordan decomposition.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{independent_subset, Matrix};
use crate::poly::UPoly;
use crate::scalar::Scalar;

/// Linear span of a family of `n × n` matrices, with a fixed basis.
#[derive(Clone, Debug)]
pub struct MatrixSpace {
    n: usize,
    basis: Vec<Matrix>,
    pivots: Vec<usize>,
    pivot_inv: Matrix,
}

impl MatrixSpace {
    /// Span of `gens`; the basis is the greedy independent subfamily in the given order.
    pub fn span(n: usize, gens: &[Matrix]) -> Self {
        let vecs: Vec<Vec<Scalar>> = gens.iter().map(|m| m.to_vec()).collect();
        let keep = independent_subset(&vecs);
        let basis: Vec<Matrix> = keep.iter().map(|&k| gens[k].clone()).collect();
        Self::from_basis(n, basis)
    }

    fn from_basis(n: usize, basis: Vec<Matrix>) -> Self {
        if basis.is_empty() {
            return MatrixSpace { n, basis, pivots: vec![], pivot_inv: Matrix::zeros(0, 0) };
        }
        let rows: Vec<Vec<Scalar>> = basis.iter().map(|m| m.to_vec()).collect();
        let (_, pivots) = Matrix::from_rows(rows).rref();
        let d = basis.len();
        let mut sub = Matrix::zeros(d, d);
        for (r, &p) in pivots.iter().enumerate() {
            for (k, b) in basis.iter().enumerate() {
                sub.set(r, k, b.entries()[p].clone());
            }
        }
        let pivot_inv = sub.inverse().expect("independent basis has invertible pivot block");
        MatrixSpace { n, basis, pivots, pivot_inv }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_basis(n, vec![])
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is outside the span.
    pub fn coords(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return x.is_zero().then(Vec::new);
        }
        let v: Vec<Scalar> = self.pivots.iter().map(|&p| x.entries()[p].clone()).collect();
        let c = self.pivot_inv.mul_vec(&v);
        (self.element(&c) == *x).then_some(c)
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.coords(x).is_some()
    }

    pub fn element(&self, c: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                m = &m + &b.scale(x);
            }
        }
        m
    }

    pub fn contains_space(&self, o: &MatrixSpace) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_space(&self, o: &MatrixSpace) -> bool {
        self.dim() == o.dim() && self.contains_space(o)
    }

    pub fn sum(&self, o: &MatrixSpace) -> MatrixSpace {
        let mut g = self.basis.clone();
        g.extend(o.basis.iter().cloned());
        Self::span(self.n, &g)
    }

    pub fn intersect(&self, o: &MatrixSpace) -> MatrixSpace {
        // Solve Σ a_i u_i = Σ b_j v_j.
        let mut cols: Vec<Vec<Scalar>> = self.basis.iter().map(|m| m.to_vec()).collect();
        cols.extend(o.basis.iter().map(|m| (-m).to_vec()));
        if cols.is_empty() {
            return Self::zero(self.n);
        }
        let k = Matrix::from_cols(&cols).kernel();
        let gens: Vec<Matrix> = k.iter().map(|v| self.element(&v[..self.dim()])).collect();
        Self::span(self.n, &gens)
    }

    /// `{y ∈ self : [y, x] = 0 for all x in xs}`
    pub fn centralizer_of(&self, xs: &[Matrix]) -> MatrixSpace {
        if self.basis.is_empty() {
            return self.clone();
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let d = self.dim();
        let n2 = self.n * self.n;
        for x in xs {
            let brs: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.bracket(x).to_vec()).collect();
            for e in 0..n2 {
                let row: Vec<Scalar> = (0..d).map(|k| brs[k][e].clone()).collect();
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return self.clone();
        }
        let k = Matrix::from_rows(rows).kernel();
        let gens: Vec<Matrix> = k.iter().map(|v| self.element(v)).collect();
        Self::from_basis(self.n, independent_basis(self.n, gens))
    }

    pub fn is_abelian(&self) -> bool {
        abelian_witness(&self.basis).is_none()
    }

    /// Image of the space under a linear map on matrices.
    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> MatrixSpace {
        let g: Vec<Matrix> = self.basis.iter().map(f).collect();
        Self::span(self.n, &g)
    }
}

fn independent_basis(_n: usize, gens: Vec<Matrix>) -> Vec<Matrix> {
    let vecs: Vec<Vec<Scalar>> = gens.iter().map(|m| m.to_vec()).collect();
    independent_subset(&vecs).into_iter().map(|k| gens[k].clone()).collect()
}

/// A pair of elements that fail to commute, if any.
pub fn abelian_witness(elems: &[Matrix]) -> Option<(Matrix, Matrix)> {
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if !a.bracket(b).is_zero() {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Lie subalgebra of `gl_n` given by a basis, with cached structure data.
#[derive(Debug)]
pub struct LieAlgebra {
    space: MatrixSpace,
    killing: OnceLock<Matrix>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra { space: self.space.clone(), killing: OnceLock::new() }
    }
}

impl LieAlgebra {
    /// Checks that the basis is independent and closed under the bracket.
    pub fn new(n: usize, basis: Vec<Matrix>) -> Result<Self> {
        if basis.iter().any(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::Usage(format!("basis elements must be {n}x{n}")));
        }
        let space = MatrixSpace::span(n, &basis);
        if space.dim() != basis.len() {
            return Err(Error::Construction("basis is linearly dependent".into()));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                if !space.contains(&a.bracket(b)) {
                    return Err(Error::Construction("span is not closed under the bracket".into()));
                }
            }
        }
        Ok(LieAlgebra { space, killing: OnceLock::new() })
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix_size(&self) -> usize {
        self.space.matrix_size()
    }

    pub fn basis(&self) -> &[Matrix] {
        self.space.basis()
    }

    pub fn coords(&self, x: &Matrix) -> Option<Vec<Scalar>> {
        self.space.coords(x)
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        self.space.contains(x)
    }

    pub fn element(&self, c: &[Scalar]) -> Matrix {
        self.space.element(c)
    }

    /// `c[i][j][k]` with `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        let b = self.basis();
        b.iter().map(|x| b.iter().map(|y| self.coords(&x.bracket(y)).expect("closed")).collect()).collect()
    }

    /// Matrix of `ad x` in the basis.
    pub fn ad(&self, x: &Matrix) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.basis().iter().map(|b| self.coords(&x.bracket(b)).expect("x must lie in the algebra")).collect();
        Matrix::from_cols(&cols)
    }

    pub fn killing_matrix(&self) -> &Matrix {
        self.killing.get_or_init(|| {
            let ads: Vec<Matrix> = self.basis().iter().map(|b| self.ad(b)).collect();
            let d = self.dim();
            let mut k = Matrix::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    let v = (&ads[i] * &ads[j]).trace();
                    k.set(i, j, v.clone());
                    k.set(j, i, v);
                }
            }
            k
        })
    }

    pub fn killing(&self, x: &Matrix, y: &Matrix) -> Scalar {
        let cx = self.coords(x).expect("x in algebra");
        let cy = self.coords(y).expect("y in algebra");
        let ky = self.killing_matrix().mul_vec(&cy);
        cx.iter().zip(&ky).map(|(a, b)| a * b).sum()
    }

    pub fn centralizer(&self, xs: &[Matrix]) -> MatrixSpace {
        self.space.centralizer_of(xs)
    }

    pub fn is_semisimple_algebra(&self) -> bool {
        self.killing_matrix().det() != Scalar::zero()
    }
}

pub fn trace_form(x: &Matrix, y: &Matrix) -> Scalar {
    (x * y).trace()
}

pub fn eval_poly_at(p: &UPoly, x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut acc = Matrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &Matrix::identity(n).scale(c);
    }
    acc
}

pub fn is_semisimple(x: &Matrix) -> bool {
    eval_poly_at(&x.charpoly().squarefree_part(), x).is_zero()
}

pub fn is_nilpotent(x: &Matrix) -> bool {
    x.is_nilpotent()
}

/// `x = s + n` with `s` semisimple, `n` nilpotent, `[s, n] = 0`, by Newton iteration on the
/// squarefree part of the characteristic polynomial.
pub fn jordan_decomposition(x: &Matrix) -> (Matrix, Matrix) {
    let p = x.charpoly().squarefree_part();
    let dp = p.derivative();
    let mut s = x.clone();
    for _ in 0..64 {
        let ps = eval_poly_at(&p, &s);
        if ps.is_zero() {
            break;
        }
        let inv = eval_poly_at(&dp, &s).inverse().expect("p' is invertible at a root of a squarefree p");
        s = &s - &(&ps * &inv);
    }
    let n = x - &s;
    (s, n)
}

/// `exp` of a nilpotent matrix as a finite sum.
pub fn exp_nilpotent(n: &Matrix) -> Matrix {
    let k = n.rows();
    let mut acc = Matrix::identity(k);
    let mut term = Matrix::identity(k);
    for j in 1..=k {
        term = (&term * n).scale(&Scalar::frac(1, j as i64));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    acc
}

/// Eigenvalues and spectral projectors of a semisimple matrix whose spectrum lies in ℚ(i).
pub fn spectral_projectors(x: &Matrix) -> Option<Vec<(Scalar, Matrix)>> {
    let (roots, cof) = x.charpoly().gaussian_roots();
    if cof.degree() != Some(0) || !is_semisimple(x) {
        return None;
    }
    let n = x.rows();
    let eig: Vec<Scalar> = roots.into_iter().map(|(r, _)| r).collect();
    let mut out = Vec::new();
    for (k, lk) in eig.iter().enumerate() {
        let mut p = Matrix::identity(n);
        for (j, lj) in eig.iter().enumerate() {
            if j != k {
                let f = (x - &Matrix::identity(n).scale(lj)).scale(&(lk - lj).inv().unwrap());
                p = &p * &f;
            }
        }
        out.push((lk.clone(), p));
    }
    Some(out)
}

/// Basis of eigenvectors (as columns) of a semisimple matrix with spectrum in ℚ(i).
pub fn eigenbasis(x: &Matrix) -> Option<Vec<(Scalar, Vec<Scalar>)>> {
    let (roots, cof) = x.charpoly().gaussian_roots();
    if cof.degree() != Some(0) {
        return None;
    }
    let n = x.rows();
    let mut out = Vec::new();
    for (l, _) in roots {
        let k = (x - &Matrix::identity(n).scale(&l)).kernel();
        for v in k {
            out.push((l.clone(), v));
        }
    }
    (out.len() == n).then_some(out)
}

/// Standard matrix units of `sl_n` as a basis.
pub fn sl_basis(n: usize) -> Vec<Matrix> {
    let mut b = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.push(Matrix::unit(n, i, j));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        b.push(&Matrix::unit(n, i, i) - &Matrix::unit(n, i + 1, i + 1));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn sl2() -> LieAlgebra {
        LieAlgebra::new(2, sl_basis(2)).unwrap()
    }

    #[test]
    fn killing_of_sl2() {
        let g = sl2();
        let h = Matrix::diag_ints(&[1, -1]);
        let e = Matrix::unit(2, 0, 1);
        let f = Matrix::unit(2, 1, 0);
        assert_eq!(g.killing(&h, &h), Scalar::int(8));
        assert_eq!(g.killing(&e, &f), Scalar::int(4));
        assert_eq!(g.killing(&e, &e), Scalar::zero());
        assert!(g.is_semisimple_algebra());
    }

    #[test]
    fn structure_constants_of_sl2() {
        let g = sl2();
        let c = g.structure_constants();
        // [e, f] = h, the third basis element
        assert_eq!(c[0][1], vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
        for i in 0..3 {
            for j in 0..3 {
                let neg: Vec<Scalar> = c[j][i].iter().map(|x| -x).collect();
                assert_eq!(c[i][j], neg);
            }
        }
    }

    #[test]
    fn rejects_non_subalgebra() {
        let b = vec![Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)];
        assert!(matches!(LieAlgebra::new(2, b), Err(Error::Construction(_))));
    }

    #[test]
    fn jordan_of_block() {
        let x = Matrix::from_ints(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
        let (s, n) = jordan_decomposition(&x);
        assert_eq!(s, Matrix::diag_ints(&[2, 2, 3]));
        assert_eq!(n, Matrix::unit(3, 0, 1));
        assert!(is_semisimple(&s) && is_nilpotent(&n));
        assert!(s.bracket(&n).is_zero());
    }

    #[test]
    fn jordan_non_diagonal_basis() {
        let p = Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let pi = p.inverse().unwrap();
        let x = &(&p * &Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, -1]])) * &pi;
        let (s, n) = jordan_decomposition(&x);
        assert_eq!(&s + &n, x);
        assert!(is_semisimple(&s) && is_nilpotent(&n) && s.bracket(&n).is_zero());
        assert!(!n.is_zero());
    }

    #[test]
    fn centralizer_and_intersection() {
        let g = sl2();
        let c = g.centralizer(&[Matrix::diag_ints(&[1, -1])]);
        assert_eq!(c.dim(), 1);
        let s1 = MatrixSpace::span(2, &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]);
        let s2 = MatrixSpace::span(2, &[&Matrix::unit(2, 0, 1) + &Matrix::unit(2, 1, 0), Matrix::diag_ints(&[1, -1])]);
        assert_eq!(s1.intersect(&s2).dim(), 1);
        assert_eq!(s1.sum(&s2).dim(), 3);
    }

    #[test]
    fn projectors_of_rotation() {
        let j = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let p = spectral_projectors(&j).unwrap();
        assert_eq!(p.len(), 2);
        let sum = &p[0].1 + &p[1].1;
        assert!(sum.is_identity());
        let rebuilt = &p[0].1.scale(&p[0].0) + &p[1].1.scale(&p[1].0);
        assert_eq!(rebuilt, j);
        assert_eq!(exp_nilpotent(&Matrix::unit(2, 0, 1)), Matrix::from_ints(&[&[1, 1], &[0, 1]]));
    }
}
