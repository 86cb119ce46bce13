//! Residuated pseudo-inverses of tropical matrices and inversion domains of
//! tropicalized inverse pairs.
//!
//! For a matrix `A` whose columns all contain a finite entry, the residual
//! `A^pi(y)^j = min_i (y^i - a^i_j)` is the largest `x` with `A ⊙ x ⪯ y`.
//! Terms with `a^i_j = -inf` are skipped in the minimum.

use crate::error::{Error, Result};
use crate::trop::{TropMatrix, TropScalar, TropVector};

/// Upper bound on `max(rows, cols)` for which [`preimage_unique`] enumerates
/// every witnessing assignment instead of using the structural criterion.
pub const ENUMERATION_LIMIT: usize = 6;

/// A choice, for every row `k`, of a column `ε_k` realizing
/// `y^k - a^k_{ε_k} = A^pi(y)^{ε_k}`.
///
/// Rows of `A` with no finite entry constrain nothing (their image
/// coordinate is always `-inf`) and carry `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonAssignment {
    map: Vec<Option<usize>>,
}

impl EpsilonAssignment {
    pub fn columns(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn get(&self, row: usize) -> Option<usize> {
        self.map[row]
    }

    /// Whether every column in `required` is hit by some row.
    pub fn covers(&self, required: &[bool]) -> bool {
        required
            .iter()
            .enumerate()
            .all(|(j, &needed)| !needed || self.map.contains(&Some(j)))
    }
}

/// `A^pi(y)`.
pub fn pseudo_inverse(a: &TropMatrix, y: &TropVector) -> Result<TropVector> {
    if a.rows() != y.len() {
        return Err(Error::dim(a.rows(), y.len()));
    }
    a.check_columns()?;
    let out = (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .filter_map(|i| a.get(i, j).finite().map(|aij| y.get(i).odiv(aij)))
                .min()
                .expect("column has a finite entry")
        })
        .collect();
    Ok(TropVector::new(out))
}

/// Columns `j` with `a^k_j` finite and `y^k - a^k_j = x̂^j`, per row `k`.
///
/// `None` marks a row with no finite entry.
fn candidates(a: &TropMatrix, y: &TropVector, xhat: &TropVector) -> Vec<Option<Vec<usize>>> {
    (0..a.rows())
        .map(|k| {
            let finite: Vec<usize> = (0..a.cols()).filter(|&j| a.get(k, j).is_finite()).collect();
            if finite.is_empty() {
                return None;
            }
            Some(
                finite
                    .into_iter()
                    .filter(|&j| {
                        let akj = a.get(k, j).finite().unwrap();
                        &y.get(k).odiv(akj) == xhat.get(j)
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Returns the lexicographically least witnessing assignment if `y` lies in
/// the image of `A`, or `None` otherwise.
pub fn in_image(a: &TropMatrix, y: &TropVector) -> Result<Option<EpsilonAssignment>> {
    let xhat = pseudo_inverse(a, y)?;
    let mut map = Vec::with_capacity(a.rows());
    for (k, cand) in candidates(a, y, &xhat).into_iter().enumerate() {
        match cand {
            // a zero row reaches only -inf
            None if y.get(k).is_zero() => map.push(None),
            None => return Ok(None),
            Some(c) => match c.first() {
                Some(&j) => map.push(Some(j)),
                None => return Ok(None),
            },
        }
    }
    Ok(Some(EpsilonAssignment { map }))
}

/// Whether `y` has exactly one preimage under `A`.
///
/// The preimage set is a union, over witnessing assignments `ε`, of sets
/// pinning the coordinates hit by `ε` to `A^pi(y)` and bounding the others
/// above by it. A coordinate where `A^pi(y)` is `-inf` is pinned regardless.
pub fn preimage_unique(a: &TropMatrix, y: &TropVector) -> Result<bool> {
    let xhat = pseudo_inverse(a, y)?;
    if in_image(a, y)?.is_none() {
        return Err(Error::NotInImage);
    }
    let cands = candidates(a, y, &xhat);
    let required = xhat.support();
    if a.rows().max(a.cols()) <= ENUMERATION_LIMIT {
        Ok(all_witnesses(&cands).iter().all(|eps| eps.covers(&required)))
    } else {
        Ok(structurally_unique(&cands, &required))
    }
}

/// Every witness covers column `j` iff some row admits `j` as its only
/// candidate.
pub(crate) fn structurally_unique(cands: &[Option<Vec<usize>>], required: &[bool]) -> bool {
    required.iter().enumerate().all(|(j, &needed)| {
        !needed || cands.iter().flatten().any(|c| c.len() == 1 && c[0] == j)
    })
}

/// Cartesian product of the per-row candidate sets.
fn all_witnesses(cands: &[Option<Vec<usize>>]) -> Vec<EpsilonAssignment> {
    let mut out = vec![Vec::with_capacity(cands.len())];
    for c in cands {
        out = match c {
            None => out
                .into_iter()
                .map(|mut p| {
                    p.push(None);
                    p
                })
                .collect(),
            Some(cols) => out
                .iter()
                .flat_map(|p| {
                    cols.iter().map(move |&j| {
                        let mut q = p.clone();
                        q.push(Some(j));
                        q
                    })
                })
                .collect(),
        };
    }
    out.into_iter().map(|map| EpsilonAssignment { map }).collect()
}

/// Checks `x ⪯ A^pi(y) ⇔ A ⊙ x ⪯ y` for one triple.
pub fn galois_check(a: &TropMatrix, x: &TropVector, y: &TropVector) -> Result<bool> {
    let left = x.precedes(&pseudo_inverse(a, y)?);
    let right = a.apply(x)?.precedes(y);
    Ok(left == right)
}

/// The inversion domain `D_{αβ} = {x : α(β(x)) = x}`, described by the
/// inequalities `x^h ≥ (α⊙β)^h_k ⊙ x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionDomain {
    gram: TropMatrix,
}

impl InversionDomain {
    pub fn gram(&self) -> &TropMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Membership through the explicit inequalities.
    pub fn contains(&self, x: &TropVector) -> Result<bool> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::dim(n, x.len()));
        }
        Ok((0..n).all(|h| (0..n).all(|k| x.get(h) >= &self.gram.get(h, k).odot(x.get(k)))))
    }

    /// The canonical diagonal point `(0, …, 0)` lies in the domain iff every
    /// gram entry is at most `0`.
    pub fn contains_diagonal(&self) -> bool {
        self.contains(&TropVector::new(vec![TropScalar::one(); self.dim()]))
            .unwrap_or(false)
    }
}

fn check_square(m: &TropMatrix, n: usize) -> Result<()> {
    if m.rows() != n {
        return Err(Error::dim(n, m.rows()));
    }
    if m.cols() != n {
        return Err(Error::dim(n, m.cols()));
    }
    Ok(())
}

/// `D_{αβ}` with gram matrix `α ⊙ β`.
pub fn inversion_domain(alpha: &TropMatrix, beta: &TropMatrix) -> Result<InversionDomain> {
    let n = alpha.rows();
    check_square(alpha, n)?;
    check_square(beta, n)?;
    for m in [alpha, beta] {
        m.check_rows()?;
        m.check_columns()?;
    }
    Ok(InversionDomain { gram: alpha.mul(beta)? })
}

pub fn domain_membership(domain: &InversionDomain, x: &TropVector) -> Result<bool> {
    domain.contains(x)
}

/// For `x ∈ D_{αβ}` checks that `β(x) ∈ D_{βα}` and `α(β(x)) = x`.
pub fn domain_bijection_check(alpha: &TropMatrix, beta: &TropMatrix, x: &TropVector) -> Result<bool> {
    let dab = inversion_domain(alpha, beta)?;
    if !dab.contains(x)? {
        return Err(Error::OutsideDomain);
    }
    let dba = inversion_domain(beta, alpha)?;
    let bx = beta.apply(x)?;
    Ok(dba.contains(&bx)? && &alpha.apply(&bx)? == x)
}
