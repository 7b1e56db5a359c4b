//! Order-preserving batch evaluation, data-parallel when the `parallel` feature is on.

use crate::cameral::{CameralCover, Fiber};
use crate::centralizers::centralizer_fiber;
use crate::error::Result;
use crate::forms::{RealForm, Subgroup};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether parallel execution is compiled in.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// `χ(KR(c)) = c` and regularity of `KR(c)` at each base point.
pub fn kr_round_trips(f: &RealForm, points: &[Vec<Scalar>], exec: Exec) -> Result<Vec<bool>> {
    let cd = f.chevalley()?;
    exec.map(points, |c| {
        let x = cd.kr_section(c)?;
        Ok(cd.chi(&x) == *c && f.in_m(&x) && f.is_regular(&x))
    })
    .into_iter()
    .collect()
}

/// Fibers of a cameral cover at many base values.
pub fn fibers(cover: &CameralCover, xs: &[Scalar], exec: Exec) -> Result<Vec<Fiber>> {
    exec.map(xs, |x| cover.fiber_at(x)).into_iter().collect()
}

/// Abelianness of the `G_θ`-centralizer fiber at each regular point.
pub fn fibers_abelian(f: &RealForm, points: &[Matrix], exec: Exec) -> Result<Vec<bool>> {
    exec.map(points, |x| centralizer_fiber(f, x, Subgroup::GTheta).map(|c| c.is_abelian)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let v: Vec<u64> = (0..100).collect();
        let sq = |x: &u64| x * x;
        assert_eq!(Exec::Sequential.map(&v, sq), Exec::Parallel.map(&v, sq));
    }
}
