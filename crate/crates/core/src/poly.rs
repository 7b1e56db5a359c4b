//! Dense univariate polynomials over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Coefficients in increasing degree, never with a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| Scalar::int(k)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c·x^k`
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_c(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().unwrap())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::int(k as i64)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(q(x))`
    pub fn compose(&self, q: &UPoly) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &(&c * dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm. Entry `k` is the monic product of the irreducible factors of multiplicity `k + 1`.
    pub fn squarefree_decomposition(&self) -> Vec<UPoly> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = UPoly::gcd(&f, &df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            let g = UPoly::gcd(&b, &d);
            out.push(g.clone());
            b = b.div_rem(&g).0;
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_rem(&g).0;
            d = &c - &b.derivative();
            a = a.div_rem(&g).0;
        }
        let _ = a;
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let g = UPoly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        UPoly::gcd(self, &self.derivative()).degree() == Some(0)
    }

    /// Determinant of the Sylvester matrix.
    pub fn resultant(p: &UPoly, q: &UPoly) -> Scalar {
        let (m, n) = match (p.degree(), q.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Scalar::zero(),
        };
        if m + n == 0 {
            return Scalar::one();
        }
        let size = m + n;
        let mut s = Matrix::zeros(size, size);
        for r in 0..n {
            for (k, c) in p.coeffs.iter().rev().enumerate() {
                s.set(r, r + k, c.clone());
            }
        }
        for r in 0..m {
            for (k, c) in q.coeffs.iter().rev().enumerate() {
                s.set(n + r, r + k, c.clone());
            }
        }
        s.det()
    }

    /// `(-1)^(n(n-1)/2) · res(p, p') / lead(p)`
    pub fn discriminant(&self) -> Scalar {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Scalar::zero(),
        };
        let r = UPoly::resultant(self, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        &(&sign * &r) / &self.lead()
    }

    /// Scale to coefficients in ℤ[i].
    fn integral(&self) -> UPoly {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(&c.denominator_lcm());
        }
        self.scale(&Scalar::real(BigRational::from_integer(l)))
    }

    /// Numerical roots of a squarefree polynomial by Durand-Kerner iteration.
    pub fn numeric_roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return vec![],
        };
        let m = self.monic();
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
        for _ in 0..2000 {
            let mut delta: f64 = 0.0;
            for k in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != k {
                        den *= z[k] - z[j];
                    }
                }
                if den.norm() == 0.0 {
                    den = Complex64::new(1e-12, 0.0);
                }
                let step = m.eval_c(z[k]) / den;
                z[k] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 {
                break;
            }
        }
        z
    }

    /// Roots in ℚ(i) with multiplicity, plus the monic cofactor with no root in ℚ(i).
    pub fn gaussian_roots(&self) -> (Vec<(Scalar, usize)>, UPoly) {
        let mut roots = Vec::new();
        let mut cofactor = UPoly::one();
        for (k, factor) in self.squarefree_decomposition().into_iter().enumerate() {
            if factor.degree().unwrap_or(0) == 0 {
                continue;
            }
            let mut rest = factor.clone();
            let zp = factor.integral();
            let lead = zp.lead();
            for z in factor.numeric_roots() {
                let g = lead.to_complex() * z;
                let cand = &Scalar::round_complex(g, 1) / &lead;
                if rest.degree().unwrap_or(0) > 0 && rest.eval(&cand).is_zero() {
                    rest = rest.div_rem(&UPoly::new(vec![-cand.clone(), Scalar::one()])).0;
                    roots.push((cand, k + 1));
                }
            }
            cofactor = &cofactor * &rest.pow(k as u32 + 1);
        }
        roots.sort();
        (roots, cofactor.monic())
    }

    /// Whether the polynomial is a product of linear factors over ℚ(i).
    pub fn splits(&self) -> bool {
        self.gaussian_roots().1.degree() == Some(0)
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        UPoly::new(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Joins `coefficient * monomial` terms with signs folded in and unit coefficients dropped.
pub(crate) fn join_terms<'a>(terms: impl IntoIterator<Item = (&'a Scalar, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_real() && c.re().is_negative();
        let mag = if neg { -c.clone() } else { c.clone() };
        let cs = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
        let body = match (mono.is_empty(), mag.is_one()) {
            (true, _) => cs,
            (false, true) => mono,
            (false, false) => format!("{cs}*{mono}"),
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            (c, mono)
        });
        f.write_str(&join_terms(terms))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(UPoly::from_ints(&[-1, 0, 1]).discriminant(), Scalar::int(4));
        assert_eq!(UPoly::from_ints(&[0, 0, 1]).discriminant(), Scalar::zero());
        assert_eq!(UPoly::from_ints(&[0, 1, 1]).discriminant(), Scalar::int(1));
        // b² - 4ac for a general quadratic
        assert_eq!(UPoly::from_ints(&[3, 5, 2]).discriminant(), Scalar::int(1));
        // cubic x³ + px + q has -4p³ - 27q²
        assert_eq!(UPoly::from_ints(&[2, -3, 0, 1]).discriminant(), Scalar::int(0));
        assert_eq!(UPoly::from_ints(&[1, 1, 0, 1]).discriminant(), Scalar::int(-31));
    }

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(UPoly::gcd(&a, &UPoly::from_ints(&[1, 2, 1])), b);
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)(x+2)^3
        let p = &UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[2, 1]).pow(3);
        let d = p.squarefree_decomposition();
        assert_eq!(d.len(), 3);
        assert_eq!(d[0], UPoly::from_ints(&[-1, 1]));
        assert_eq!(d[1].degree(), Some(0));
        assert_eq!(d[2], UPoly::from_ints(&[2, 1]));
        assert_eq!(p.squarefree_part(), &UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[2, 1]));
    }

    #[test]
    fn gaussian_roots_found_exactly() {
        // (x² + 1/4)(x - 2/3)² (x² - 2)
        let p = &(&UPoly::new(vec![Scalar::frac(1, 4), Scalar::zero(), Scalar::one()])
            * &UPoly::new(vec![Scalar::frac(-2, 3), Scalar::one()]).pow(2))
            * &UPoly::from_ints(&[-2, 0, 1]);
        let (roots, cof) = p.gaussian_roots();
        assert_eq!(cof, UPoly::from_ints(&[-2, 0, 1]));
        let h = Scalar::new(BigRational::zero(), crate::scalar::rat(1, 2));
        assert_eq!(roots, vec![(-&h, 1), (h, 1), (Scalar::frac(2, 3), 2)]);
        assert!(!p.splits());
    }

    #[test]
    fn compose_and_eval() {
        let p = UPoly::from_ints(&[1, 0, 1]);
        let q = UPoly::from_ints(&[0, 2]);
        assert_eq!(p.compose(&q), UPoly::from_ints(&[1, 0, 4]));
        assert_eq!(p.eval(&Scalar::i()), Scalar::zero());
    }
}
