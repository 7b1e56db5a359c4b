//! Sparse multivariate polynomials over ℚ(i) and matrices with polynomial entries.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::poly::UPoly;
use crate::scalar::Scalar;

/// Polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Scalar::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Scalar) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn weighted_degree(&self, w: &[u32]) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().zip(w).map(|(a, b)| a * b).sum()).max()
    }

    /// Every term has the same weighted degree.
    pub fn is_weighted_homogeneous(&self, w: &[u32]) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().zip(w).map(|(a, b)| a * b).sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars, "wrong number of values");
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = &t * &xi.pow(k as i64);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitute polynomials (all in a common ring) for the variables.
    pub fn substitute(&self, vals: &[MPoly]) -> MPoly {
        assert_eq!(vals.len(), self.nvars);
        let m = vals.first().map_or(0, |v| v.nvars);
        let mut cache: Vec<Vec<MPoly>> = vals.iter().map(|v| vec![MPoly::one(m), v.clone()]).collect();
        let mut acc = MPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &vals[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute univariate polynomials, giving a univariate result.
    pub fn substitute_univariate(&self, vals: &[UPoly]) -> UPoly {
        let lifted: Vec<MPoly> = vals.iter().map(MPoly::from_upoly).collect();
        self.substitute(&lifted).to_upoly()
    }

    pub fn from_upoly(p: &UPoly) -> MPoly {
        let mut out = MPoly::zero(1);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![k as u32], c.clone());
        }
        out
    }

    /// View a polynomial in at most one variable as univariate in that variable (or constant).
    pub fn to_upoly(&self) -> UPoly {
        let used: Vec<usize> = (0..self.nvars).filter(|&i| self.uses_var(i)).collect();
        assert!(used.len() <= 1, "polynomial is not univariate");
        let v = used.first().copied();
        let mut c = Vec::new();
        for (e, x) in &self.terms {
            let k = v.map_or(0, |i| e[i] as usize);
            if c.len() <= k {
                c.resize(k + 1, Scalar::zero());
            }
            c[k] = x.clone();
        }
        UPoly::new(c)
    }

    /// Coefficient of the linear monomial in variable `i`.
    pub fn linear_coeff(&self, i: usize) -> Scalar {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        self.coeff(&e)
    }

    /// Drop terms whose total degree differs from `d`.
    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        crate::poly::join_terms(self.terms.iter().rev().map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            (c, mono.join("*"))
        }))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self + &(-o)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut acc: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Scalar::zero) += &(c1 * c2);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("y{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

/// Square matrix with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    nvars: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn constant(m: &Matrix, nvars: usize) -> Self {
        assert!(m.is_square());
        PolyMatrix { n: m.rows(), nvars, entries: m.entries().iter().map(|c| MPoly::constant(nvars, c.clone())).collect() }
    }

    /// `base + Σ y_k · dirs[k]`
    pub fn affine(base: &Matrix, dirs: &[Matrix]) -> Self {
        let nv = dirs.len();
        let mut p = Self::constant(base, nv);
        for (k, d) in dirs.iter().enumerate() {
            let y = MPoly::var(nv, k);
            for (idx, c) in d.entries().iter().enumerate() {
                if !c.is_zero() {
                    p.entries[idx] = &p.entries[idx] + &y.scale(c);
                }
            }
        }
        p
    }

    /// `base + Σ coeffs[k] · dirs[k]` with polynomial coefficients.
    pub fn combination(base: &Matrix, dirs: &[Matrix], coeffs: &[MPoly]) -> Self {
        let nv = coeffs.first().map_or(0, |c| c.nvars());
        let mut p = Self::constant(base, nv);
        for (d, y) in dirs.iter().zip(coeffs) {
            for (idx, c) in d.entries().iter().enumerate() {
                if !c.is_zero() {
                    p.entries[idx] = &p.entries[idx] + &y.scale(c);
                }
            }
        }
        p
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let n = self.n;
        let mut entries = vec![MPoly::zero(self.nvars); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * n + j] = &entries[i * n + j] + &(a * b);
                }
            }
        }
        PolyMatrix { n, nvars: self.nvars, entries }
    }

    pub fn trace(&self) -> MPoly {
        let mut acc = MPoly::zero(self.nvars);
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Matrix {
        Matrix::from_vec(self.n, self.n, self.entries.iter().map(|p| p.eval(x)).collect())
    }

    pub fn substitute(&self, vals: &[MPoly]) -> PolyMatrix {
        let nv = vals.first().map_or(0, |v| v.nvars());
        PolyMatrix { n: self.n, nvars: nv, entries: self.entries.iter().map(|p| p.substitute(vals)).collect() }
    }

    /// Elementary symmetric functions `e_0..=e_upto` of the eigenvalues, via Newton's identities.
    pub fn elementary_invariants(&self, upto: usize) -> Vec<MPoly> {
        let upto = upto.min(self.n);
        let mut p = Vec::with_capacity(upto + 1);
        p.push(MPoly::zero(self.nvars));
        let mut power = self.clone();
        for k in 1..=upto {
            if k > 1 {
                power = power.mul(self);
            }
            p.push(power.trace());
        }
        let mut e = vec![MPoly::one(self.nvars)];
        for k in 1..=upto {
            let mut acc = MPoly::zero(self.nvars);
            for i in 1..=k {
                let t = &e[k - i] * &p[i];
                acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
            }
            e.push(acc.scale(&Scalar::frac(1, k as i64)));
        }
        e
    }

    /// Pfaffian of a skew-symmetric polynomial matrix of even size.
    pub fn pfaffian(&self) -> MPoly {
        fn rec(m: &PolyMatrix, idx: &[usize]) -> MPoly {
            if idx.is_empty() {
                return MPoly::one(m.nvars);
            }
            let i = idx[0];
            let mut acc = MPoly::zero(m.nvars);
            for (pos, &j) in idx.iter().enumerate().skip(1) {
                let a = m.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx.iter().enumerate().filter(|&(p, _)| p != 0 && p != pos).map(|(_, &k)| k).collect();
                let t = a * &rec(m, &rest);
                acc = if pos % 2 == 1 { &acc + &t } else { &acc - &t };
            }
            acc
        }
        assert!(self.n.is_multiple_of(2), "Pfaffian needs even size");
        let idx: Vec<usize> = (0..self.n).collect();
        rec(self, &idx)
    }
}
