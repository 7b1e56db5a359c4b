//! Integer lattices inside ℚⁿ: echelon bases, saturation, membership and index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Row echelon basis (over ℤ) of the lattice spanned by integer rows.
pub fn echelon_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let mut pivot = None;
        for i in r..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            match pivot {
                None => {
                    rows.swap(r, i);
                    pivot = Some(r);
                }
                Some(p) => {
                    let (g, x, y) = ext_gcd(&rows[p][c], &rows[i][c]);
                    let a = &rows[p][c] / &g;
                    let b = &rows[i][c] / &g;
                    let rp = rows[p].clone();
                    let ri = rows[i].clone();
                    for k in 0..n {
                        rows[p][k] = &x * &rp[k] + &y * &ri[k];
                        rows[i][k] = &a * &ri[k] - &b * &rp[k];
                    }
                }
            }
        }
        if let Some(p) = pivot {
            if rows[p][c].is_negative() {
                for k in 0..n {
                    rows[p][k] = -rows[p][k].clone();
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// ℤ-basis of `{x ∈ ℤⁿ : A·x = 0}` by unimodular column reduction.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let col_op = |mat: &mut Vec<Vec<BigInt>>, c: usize, j: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt| {
        for row in mat.iter_mut() {
            let vc = row[c].clone();
            let vj = row[j].clone();
            row[c] = x * &vc + y * &vj;
            row[j] = p * &vc + q * &vj;
        }
    };
    let mut c = 0;
    for i in 0..m {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            if a[i][c].is_zero() {
                for row in a.iter_mut() {
                    row.swap(c, j);
                }
                for row in u.iter_mut() {
                    row.swap(c, j);
                }
                continue;
            }
            let (g, x, y) = ext_gcd(&a[i][c], &a[i][j]);
            let p = -(&a[i][j] / &g);
            let q = &a[i][c] / &g;
            col_op(&mut a, c, j, &x, &y, &p, &q);
            col_op(&mut u, c, j, &x, &y, &p, &q);
        }
        if !a[i][c].is_zero() {
            c += 1;
        }
    }
    (c..n).map(|j| (0..n).map(|i| u[i][j].clone()).collect()).collect()
}

/// Lattice of full rank in its ℚ-span, stored by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigRational>>,
}

fn common_denominator(vs: &[Vec<BigRational>]) -> BigInt {
    let mut d = BigInt::one();
    for v in vs {
        for x in v {
            d = d.lcm(x.denom());
        }
    }
    d
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigRational>]) -> Self {
        let d = common_denominator(gens);
        let rows: Vec<Vec<BigInt>> =
            gens.iter().map(|v| v.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()).collect();
        let ech = if rows.is_empty() { vec![] } else { echelon_rows(rows) };
        let basis = ech.into_iter().map(|r| r.into_iter().map(|x| BigRational::new(x, d.clone())).collect()).collect();
        Lattice { dim, basis }
    }

    pub fn standard(dim: usize) -> Self {
        let gens: Vec<Vec<BigRational>> =
            (0..dim).map(|i| (0..dim).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))).collect()).collect();
        Self::from_generators(dim, &gens)
    }

    /// `{x ∈ ℤⁿ : R·x = 0}` for rational relation rows `R`.
    pub fn integral_kernel(dim: usize, relations: &[Vec<BigRational>]) -> Self {
        let rows: Vec<Vec<BigInt>> = relations
            .iter()
            .map(|r| {
                let d = common_denominator(std::slice::from_ref(r));
                r.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()
            })
            .collect();
        let k = integer_kernel(&rows, dim);
        let gens: Vec<Vec<BigRational>> = k.into_iter().map(|v| v.into_iter().map(BigRational::from_integer).collect()).collect();
        Self::from_generators(dim, &gens)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, if `v` lies in the ℚ-span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let cols: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.iter().cloned().map(Scalar::real).collect()).collect();
        let target: Vec<Scalar> = v.iter().cloned().map(Scalar::real).collect();
        let x = crate::matrix::coordinates_in(&cols, &target)?;
        Some(x.into_iter().map(|s| s.re().clone()).collect())
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }

    /// `[self : sub]` when `sub` is a full-rank sublattice.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() {
            return None;
        }
        if self.rank() == 0 {
            return Some(BigInt::one());
        }
        let mut rows = Vec::new();
        for b in &sub.basis {
            let c = self.coordinates(b)?;
            if !c.iter().all(|x| x.is_integer()) {
                return None;
            }
            rows.push(c.into_iter().map(Scalar::real).collect());
        }
        let det = Matrix::from_rows(rows).det();
        Some(det.re().abs().to_integer())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn kernel_of_sum_zero() {
        let l = Lattice::integral_kernel(3, &[vec![q(1), q(1), q(1)]]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[q(1), q(-1), q(0)]));
        assert!(l.contains(&[q(2), q(-5), q(3)]));
        assert!(!l.contains(&[q(1), q(0), q(0)]));
    }

    #[test]
    fn saturation_is_respected() {
        // 2x - 4y = 0 has integer solutions (2k, k)
        let k = integer_kernel(&[vec![BigInt::from(2), BigInt::from(-4)]], 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(&v[0] * BigInt::from(2) - &v[1] * BigInt::from(4), BigInt::zero());
        assert!(v[1].abs() == BigInt::one());
    }

    #[test]
    fn index_of_sublattice() {
        let full = Lattice::standard(2);
        let sub = Lattice::from_generators(2, &[vec![q(2), q(0)], vec![q(1), q(3)]]);
        assert_eq!(full.index_of(&sub), Some(BigInt::from(6)));
        let half = Lattice::from_generators(1, &[vec![BigRational::new(1.into(), 2.into())]]);
        assert!(half.contains(&[q(3)]));
        assert_eq!(half.index_of(&Lattice::standard(1)), Some(BigInt::from(2)));
    }
}
