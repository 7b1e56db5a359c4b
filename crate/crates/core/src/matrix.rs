//! Dense matrices over ℚ(i) and exact linear algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Outcome of solving `A·x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solved { particular: Vec<Scalar>, kernel: Vec<Vec<Scalar>> },
    NoSolution,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Matrix unit `E_ij` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, Scalar::one());
        m
    }

    pub fn diag(d: &[Scalar]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn diag_ints(d: &[i64]) -> Self {
        Self::diag(&d.iter().map(|&k| Scalar::int(k)).collect::<Vec<_>>())
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&k| Scalar::int(k)).collect()).collect())
    }

    /// Columns given as vectors of equal length.
    pub fn from_cols(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Antidiagonal matrix with the given entries read from the top row down.
    pub fn antidiag(d: &[Scalar]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.set(i, n - 1 - i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.conj()).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    /// `[A, B] = AB - BA`
    pub fn bracket(&self, o: &Matrix) -> Matrix {
        &(self * o) - &(o * self)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A·x = 0}` read off the reduced row echelon form.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn solve(&self, b: &[Scalar]) -> Result<LinearSolution> {
        if b.len() != self.rows {
            return Err(Error::Usage(format!("right-hand side has length {} but matrix has {} rows", b.len(), self.rows)));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(LinearSolution::NoSolution);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(LinearSolution::Solved { particular: x, kernel: self.kernel() })
    }

    /// Particular solution, if any.
    pub fn solve_one(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        match self.solve(b).ok()? {
            LinearSolution::Solved { particular, .. } => Some(particular),
            LinearSolution::NoSolution => None,
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return Scalar::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// `det(λI - A)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> UPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![Scalar::zero(); n + 1];
        c[n] = Scalar::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&c[n - k + 1]);
            let am = self * &m;
            c[n - k] = -(&am.trace() / &Scalar::int(k as i64));
        }
        UPoly::new(c)
    }

    /// Flatten row-major.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Parse `[["1","0"],["0","-1"]]`-style JSON rows of scalar strings or integers.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a JSON array".into()))?;
        let mut out = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            let mut row = Vec::new();
            for x in r {
                let s = match x {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    _ => return Err(Error::Parse(format!("bad matrix entry {x}"))),
                };
                row.push(s.parse()?);
            }
            out.push(row);
        }
        let c = out.first().map_or(0, |r| r.len());
        if out.iter().any(|r| r.len() != c) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Self::from_rows(out))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.to_rows().into_iter().map(|r| r.into_iter().map(|x| serde_json::Value::String(x.to_string())).collect()).collect(),
        )
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    m.data[i * o.cols + j] += &(a * b);
                }
            }
        }
        m
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Indices of a maximal independent prefix-greedy subfamily.
pub fn independent_subset(vectors: &[Vec<Scalar>]) -> Vec<usize> {
    if vectors.is_empty() {
        return vec![];
    }
    Matrix::from_cols(vectors).rref().1
}

/// Express `v` in the span of `basis`, if it lies there.
pub fn coordinates_in(basis: &[Vec<Scalar>], v: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    Matrix::from_cols(basis).solve_one(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let a = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        match a.solve(&[Scalar::int(3), Scalar::int(6)]).unwrap() {
            LinearSolution::Solved { particular, kernel } => {
                assert_eq!(particular, vec![Scalar::int(3), Scalar::int(0)]);
                assert_eq!(kernel, vec![vec![Scalar::int(-2), Scalar::int(1)]]);
            }
            LinearSolution::NoSolution => panic!(),
        }
        assert_eq!(a.solve(&[Scalar::int(1), Scalar::int(0)]).unwrap(), LinearSolution::NoSolution);
        assert!(a.solve(&[Scalar::int(1)]).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_rows(vec![vec![Scalar::int(2), Scalar::i()], vec![Scalar::frac(1, 2), Scalar::int(3)]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert_eq!(a.det(), &Scalar::int(6) - &Scalar::frac(1, 2).mul(Scalar::i()));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn charpoly_matches_det() {
        let a = Matrix::from_ints(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 2]]);
        let p = a.charpoly();
        for t in [-2i64, 0, 1, 5] {
            let s = Scalar::int(t);
            let m = &Matrix::identity(3).scale(&s) - &a;
            assert_eq!(p.eval(&s), m.det());
        }
        assert_eq!(Matrix::from_ints(&[&[0, 1], &[-1, 0]]).charpoly(), UPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = Matrix::from_ints(&[&[1, 1, 1, 1], &[1, -1, 2, 0]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_rows(vec![vec![Scalar::i(), Scalar::frac(1, 3)], vec![Scalar::int(0), Scalar::int(-2)]]);
        assert_eq!(Matrix::from_json(&a.to_json()).unwrap(), a);
        assert!(Matrix::from_json(&serde_json::json!([[1, 2], [3]])).is_err());
    }
}
