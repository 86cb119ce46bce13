//! Independent reference computations used to cross-check the main code
//! paths: brute-force image search on a rational grid, a scalar-loop
//! max-plus product, fixed-point domain membership, and lattice equality by
//! solving for coordinates vector by vector.

use std::collections::HashSet;
use std::env;

use crate::building::{chart, Lattice};
use crate::error::{Error, Result};
use crate::hahn::FieldMatrix;
use crate::rational::{parse_rational, qf, Q};
use crate::trop::{TropMatrix, TropScalar, TropVector};

/// Environment variable overriding the brute-force target grid, as
/// `lo:hi:step` with rational bounds.
pub const GRID_ENV: &str = "TROPBUILD_GRID";

/// Finite set of rational values, one axis of a search grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    values: Vec<Q>,
}

impl Grid {
    /// `lo, lo + step, …` up to and including `hi`.
    pub fn new(lo: Q, hi: Q, step: Q) -> Result<Self> {
        if step <= Q::from_integer(0.into()) || lo > hi {
            return Err(Error::Parse(format!("bad grid {lo}:{hi}:{step}")));
        }
        let mut values = Vec::new();
        let mut v = lo;
        while v <= hi {
            values.push(v.clone());
            v += &step;
        }
        Ok(Grid { values })
    }

    /// `{-3/2, -1, …, 3/2}`: seven points per axis.
    pub fn default_targets() -> Self {
        Grid::new(qf(-3, 2), qf(3, 2), qf(1, 2)).expect("valid grid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid must be lo:hi:step, got `{text}`")));
        };
        Grid::new(parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?)
    }

    /// The target grid, honoring [`GRID_ENV`].
    pub fn from_env() -> Result<Self> {
        match env::var(GRID_ENV) {
            Ok(s) => Grid::parse(&s),
            Err(_) => Ok(Grid::default_targets()),
        }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// All points of `values^m`.
    pub fn points(&self, m: usize) -> Vec<TropVector> {
        let mut out = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|p: Vec<TropScalar>| {
                    self.values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(TropScalar::Finite(v.clone()));
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(TropVector::new).collect()
    }
}

/// Plain max-plus product over `Option<Q>` (`None` is `-inf`).
pub fn max_plus_product(a: &TropMatrix, b: &TropMatrix) -> Option<TropMatrix> {
    if a.cols() != b.rows() {
        return None;
    }
    let mut entries = Vec::with_capacity(a.rows() * b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut best: Option<Q> = None;
            for k in 0..a.cols() {
                if let (TropScalar::Finite(x), TropScalar::Finite(y)) = (a.get(i, k), b.get(k, j)) {
                    let s = x + y;
                    if best.as_ref().is_none_or(|b| s > *b) {
                        best = Some(s);
                    }
                }
            }
            entries.push(best.map_or(TropScalar::NegInf, TropScalar::Finite));
        }
    }
    TropMatrix::new(a.rows(), b.cols(), entries).ok()
}

pub fn max_plus_apply(a: &TropMatrix, x: &TropVector) -> Option<TropVector> {
    let col = TropMatrix::from_columns(std::slice::from_ref(x)).ok()?;
    Some(max_plus_product(a, &col)?.column(0))
}

/// Every value a coordinate of the greatest preimage can take when targets
/// lie on `targets`: `{t - a}` over grid values `t` and finite entries `a`,
/// together with `-inf`.
pub fn search_values(a: &TropMatrix, targets: &Grid) -> Vec<TropScalar> {
    let mut set: Vec<Q> = Vec::new();
    for t in targets.values() {
        for e in a.entries() {
            if let TropScalar::Finite(e) = e {
                set.push(t - e);
            }
        }
    }
    set.sort();
    set.dedup();
    let mut out = vec![TropScalar::NegInf];
    out.extend(set.into_iter().map(TropScalar::Finite));
    out
}

/// Images `A x` over all `x` with coordinates in `search`.
pub fn brute_force_image(a: &TropMatrix, search: &[TropScalar]) -> HashSet<TropVector> {
    let n = a.cols();
    let mut idx = vec![0usize; n];
    let mut out = HashSet::new();
    loop {
        let x = TropVector::new(idx.iter().map(|&i| search[i].clone()).collect());
        out.insert(max_plus_apply(a, &x).expect("matching shape"));
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < search.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Fixed-point form of inversion-domain membership: `α(β(x)) = x`.
pub fn fixed_point_membership(alpha: &TropMatrix, beta: &TropMatrix, x: &TropVector) -> bool {
    max_plus_apply(beta, x)
        .and_then(|bx| max_plus_apply(alpha, &bx))
        .is_some_and(|abx| &abx == x)
}

/// `M ⊂ L`, solving `B_L c = m` by elimination for each basis vector `m`.
pub fn contains_by_solving(l: &Lattice, m: &Lattice) -> Result<bool> {
    for col in m.basis().columns() {
        let c = l.basis().solve(&col)?;
        if !c.iter().all(|x| x.in_valuation_ring()) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn lattices_equal(l: &Lattice, m: &Lattice) -> Result<bool> {
    Ok(contains_by_solving(l, m)? && contains_by_solving(m, l)?)
}

/// Coordinates `x` with `φ_F(x) = L`, found without tropical linear
/// algebra: `t_{xᵢ} fᵢ ∈ L` holds exactly for `xᵢ ≤ -max_k τ(cᵢ,k)`, where
/// `cᵢ` are the coordinates of `fᵢ` in a basis of `L`, so the largest such
/// `x` is the only candidate.
pub fn chart_preimage(f: &FieldMatrix, l: &Lattice) -> Result<Option<TropVector>> {
    let mut xs = Vec::with_capacity(f.cols());
    for col in f.columns() {
        let c = l.basis().solve(&col)?;
        let top = c.iter().map(|z| z.tau()).max().unwrap_or(TropScalar::NegInf);
        let TropScalar::Finite(top) = top else {
            return Err(Error::SingularMatrix);
        };
        xs.push(TropScalar::Finite(-top));
    }
    let x = TropVector::new(xs);
    let candidate = chart(f, &x)?;
    Ok(lattices_equal(&candidate, l)?.then_some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn grid_parsing() {
        assert_eq!(Grid::default_targets().values().len(), 7);
        let g = Grid::parse("-1:1:1/2").unwrap();
        assert_eq!(g.values(), &[q(-1), qf(-1, 2), q(0), qf(1, 2), q(1)]);
        assert!(Grid::parse("0:1").is_err());
        assert!(Grid::parse("0:1:0").is_err());
        assert_eq!(Grid::parse("0:1:1").unwrap().points(2).len(), 4);
    }

    #[test]
    fn scalar_loop_product() {
        let a: TropMatrix = "0,2;1,0".parse().unwrap();
        let x: TropMatrix = "0;0".parse().unwrap();
        assert_eq!(max_plus_product(&a, &x).unwrap(), "2;1".parse().unwrap());
        assert_eq!(max_plus_product(&a, &a).unwrap(), a.mul(&a).unwrap());
    }

    #[test]
    fn brute_force_images() {
        let a: TropMatrix = "0,0;0,0".parse().unwrap();
        let search = search_values(&a, &Grid::default_targets());
        let img = brute_force_image(&a, &search);
        assert!(img.contains(&TropVector::from_ints(&[1, 1])));
        assert!(!img.contains(&TropVector::from_ints(&[0, 1])));
    }

    #[test]
    fn chart_preimages() {
        let id = FieldMatrix::identity(2);
        let u: FieldMatrix = "1,1;0,1".parse().unwrap();
        let l = chart(&id, &TropVector::from_ints(&[3, 1])).unwrap();
        assert_eq!(chart_preimage(&u, &l).unwrap(), Some(TropVector::from_ints(&[3, 1])));
        let l = chart(&id, &TropVector::from_ints(&[0, 2])).unwrap();
        assert_eq!(chart_preimage(&u, &l).unwrap(), None);
    }
}
