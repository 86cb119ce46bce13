//! Maximal lattices over the valuation ring, tropical charts and the
//! building metric.
//!
//! A [`Lattice`] is stored by an `O`-basis (the columns of an invertible
//! field matrix). Two bases span the same lattice iff the transition matrix
//! and its inverse both have entries with `τ ≤ 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hahn::{FieldElem, FieldMatrix};
use crate::rational::Q;
use crate::residuation::inversion_domain;
use crate::trop::{TropScalar, TropVector};

#[derive(Clone, Debug)]
pub struct Lattice {
    basis: FieldMatrix,
    inverse: FieldMatrix,
}

impl Lattice {
    /// Lattice spanned by the columns of an invertible matrix.
    pub fn new(basis: FieldMatrix) -> Result<Self> {
        let inverse = basis.inverse()?;
        Ok(Lattice { basis, inverse })
    }

    /// The standard lattice `Oⁿ`.
    pub fn standard(n: usize) -> Self {
        Lattice { basis: FieldMatrix::identity(n), inverse: FieldMatrix::identity(n) }
    }

    pub fn from_columns(columns: Vec<Vec<FieldElem>>) -> Result<Self> {
        Lattice::new(FieldMatrix::from_columns(columns)?)
    }

    /// Reduces an arbitrary generating family to a basis. Fails with
    /// [`Error::NonMaximalLattice`] if the generators do not span `Fⁿ`.
    pub fn from_generators(n: usize, generators: &[Vec<FieldElem>]) -> Result<Self> {
        for g in generators {
            if g.len() != n {
                return Err(Error::dim(n, g.len()));
            }
        }
        let basis = reduce_generators(n, generators.to_vec());
        if basis.len() < n {
            return Err(Error::NonMaximalLattice(basis.len()));
        }
        Lattice::from_columns(basis)
    }

    pub fn basis(&self) -> &FieldMatrix {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &FieldMatrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `w` in this basis.
    pub fn coordinates(&self, w: &[FieldElem]) -> Result<Vec<FieldElem>> {
        self.inverse.apply(w)
    }

    pub fn member(&self, w: &[FieldElem]) -> Result<bool> {
        Ok(self.coordinates(w)?.iter().all(FieldElem::in_valuation_ring))
    }

    /// Matrix `T` with `other.basis = self.basis · T`.
    pub fn transition(&self, other: &Lattice) -> Result<FieldMatrix> {
        self.inverse.mul(&other.basis)
    }

    /// Whether `other ⊂ self`.
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        Ok(self.transition(other)?.is_integral())
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> Result<bool> {
        other.contains(self)
    }

    /// Image under a linear map.
    pub fn act(&self, a: &FieldMatrix) -> Result<Lattice> {
        Lattice::new(a.mul(&self.basis)?)
    }

    fn check_dim(&self, other: &Lattice) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dim(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.contains(other).unwrap_or(false)
            && other.contains(self).unwrap_or(false)
    }
}

/// Columns separated by `;`, entries by `,`.
impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis.transpose())
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let columns: FieldMatrix = s.parse()?;
        Lattice::new(columns.transpose())
    }
}

/// Column reduction over `O`: each row is cleared against the remaining
/// generator with the largest `τ` there, so every multiplier lies in `O`.
fn reduce_generators(n: usize, mut gens: Vec<Vec<FieldElem>>) -> Vec<Vec<FieldElem>> {
    let mut basis = Vec::new();
    for row in 0..n {
        let best = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| !g[row].is_zero())
            .max_by(|(i, a), (j, b)| a[row].tau().cmp(&b[row].tau()).then(j.cmp(i)))
            .map(|(i, _)| i);
        let Some(p) = best else { continue };
        let pivot = gens.swap_remove(p);
        for g in &mut gens {
            if g[row].is_zero() {
                continue;
            }
            let f = g[row].div(&pivot[row]).expect("nonzero pivot");
            for (x, y) in g.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * y);
            }
        }
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
        basis.push(pivot);
    }
    basis
}

/// `O`-span of both lattices.
pub fn lattice_sum(l: &Lattice, m: &Lattice) -> Result<Lattice> {
    l.check_dim(m)?;
    let mut gens = l.basis.columns();
    gens.extend(m.basis.columns());
    Lattice::from_generators(l.dim(), &gens)
}

/// `x ⊙ L = t_x · L`.
pub fn lattice_scale(x: &TropScalar, l: &Lattice) -> Result<Lattice> {
    let x = x.finite().ok_or(Error::InfiniteScalar)?;
    let z = FieldElem::t_lambda(x);
    let zi = FieldElem::t_lambda(&-x);
    Ok(Lattice { basis: l.basis.scale(&z), inverse: l.inverse.scale(&zi) })
}

fn finite_coords(y: &TropVector) -> Result<Vec<Q>> {
    y.coords()
        .iter()
        .enumerate()
        .map(|(i, c)| c.finite().cloned().ok_or(Error::NonMaximalLattice(i)))
        .collect()
}

/// The chart `φ_E(y) = span_O(t_{y¹} e₁, …, t_{yⁿ} eₙ)`.
pub fn chart(e: &FieldMatrix, y: &TropVector) -> Result<Lattice> {
    if e.cols() != y.len() {
        return Err(Error::dim(e.cols(), y.len()));
    }
    let ys = finite_coords(y)?;
    let inverse = e.inverse()?;
    let mut basis = e.clone();
    let mut inv = inverse;
    for (i, yi) in ys.iter().enumerate() {
        basis.scale_column(i, &FieldElem::t_lambda(yi));
        for j in 0..inv.cols() {
            let v = inv.get(i, j).mul_t_lambda(&-yi);
            inv.set(i, j, v);
        }
    }
    Ok(Lattice { basis, inverse: inv })
}

/// Coordinates `x` with `φ_F(x) = φ_E(y)`, or `None` when `φ_E(y)` is not
/// in the image of `φ_F`. With `A = F⁻¹E`, `B = E⁻¹F`, `α = τ(A)` and
/// `β = τ(B)`, the chart is defined exactly on the inversion domain of
/// `β ⊙ α` and the answer there is `α(y)`.
pub fn chart_transition(e: &FieldMatrix, f: &FieldMatrix, y: &TropVector) -> Result<Option<TropVector>> {
    if e.rows() != f.rows() || e.cols() != f.cols() {
        return Err(Error::dim(e.rows(), f.rows()));
    }
    finite_coords(y)?;
    let a = f.inverse()?.mul(e)?;
    let b = e.inverse()?.mul(f)?;
    let alpha = a.tropicalize();
    let beta = b.tropicalize();
    let domain = inversion_domain(&beta, &alpha)?;
    if !domain.contains(y)? {
        return Ok(None);
    }
    Ok(Some(alpha.apply(y)?))
}

/// Basis `V` of `L` and scalars `a` such that `(aᵢ vᵢ)` is a basis of `M`.
#[derive(Clone, Debug)]
pub struct CommonBasis {
    pub basis: FieldMatrix,
    pub scalars: Vec<FieldElem>,
}

impl CommonBasis {
    /// `τ(aᵢ)` for each scalar.
    pub fn taus(&self) -> Vec<Q> {
        self.scalars
            .iter()
            .map(|a| a.tau().finite().cloned().expect("invertible transition"))
            .collect()
    }
}

/// Invariant-factor reduction of the transition matrix over `O`, pivoting
/// on a maximal-`τ` entry (lowest row, then lowest column, on ties).
pub fn common_basis(l: &Lattice, m: &Lattice) -> Result<CommonBasis> {
    l.check_dim(m)?;
    let n = l.dim();
    let mut t = l.transition(m)?;
    let mut v = l.basis.clone();
    for k in 0..n {
        let mut best: Option<(usize, usize, TropScalar)> = None;
        for i in k..n {
            for j in k..n {
                let tau = t.get(i, j).tau();
                if best.as_ref().is_none_or(|(_, _, b)| tau > *b) {
                    best = Some((i, j, tau));
                }
            }
        }
        let (pi, pj, _) = best.expect("nonempty block");
        t.swap_rows(k, pi);
        v.swap_columns(k, pi);
        t.swap_columns(k, pj);
        let pivot = t.get(k, k).clone();
        for i in k + 1..n {
            if t.get(i, k).is_zero() {
                continue;
            }
            let f = t.get(i, k).div(&pivot)?;
            // row_i -= f row_k on T is matched by col_k += f col_i on V
            t.add_row_multiple(i, k, &-&f);
            v.add_column_multiple(k, i, &f);
        }
        for j in k + 1..n {
            if t.get(k, j).is_zero() {
                continue;
            }
            let f = t.get(k, j).div(&pivot)?;
            t.add_column_multiple(j, k, &-&f);
        }
    }
    let scalars = (0..n).map(|i| t.get(i, i).clone()).collect();
    Ok(CommonBasis { basis: v, scalars })
}

/// `max τ(aᵢ) − min τ(aᵢ)` over the common-basis scalars.
pub fn building_dist(l: &Lattice, m: &Lattice) -> Result<Q> {
    let taus = common_basis(l, m)?.taus();
    let max = taus.iter().max().expect("positive dimension");
    let min = taus.iter().min().expect("positive dimension");
    Ok(max - min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn fm(s: &str) -> FieldMatrix {
        s.parse().unwrap()
    }

    fn z(s: &str) -> FieldElem {
        s.parse().unwrap()
    }

    fn diag(a: &str, b: &str) -> Lattice {
        Lattice::new(FieldMatrix::diagonal(&[z(a), z(b)])).unwrap()
    }

    #[test]
    fn membership() {
        let o2 = Lattice::standard(2);
        assert!(o2.member(&[z("1"), z("0")]).unwrap());
        assert!(o2.member(&[z("t"), z("1")]).unwrap());
        assert!(!o2.member(&[z("t^-1"), z("1")]).unwrap());
        let l = Lattice::new(fm("1,t^-1;1 + t,2")).unwrap();
        for col in l.basis().columns() {
            assert!(l.member(&col).unwrap());
            let tw: Vec<_> = col.iter().map(|x| x * &z("t")).collect();
            assert!(l.member(&tw).unwrap());
        }
    }

    #[test]
    fn singular_basis_rejected() {
        assert_eq!(Lattice::new(fm("1,t;1,t")).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn sums() {
        let o2 = Lattice::standard(2);
        assert_eq!(lattice_sum(&o2, &o2).unwrap(), o2);
        let big = diag("t^-1", "1");
        assert_eq!(lattice_sum(&o2, &big).unwrap(), big);
        let a = diag("t", "t^-2");
        let s = lattice_sum(&o2, &a).unwrap();
        assert_eq!(s, diag("1", "t^-2"));
        assert_eq!(lattice_sum(&a, &o2).unwrap(), s);
    }

    #[test]
    fn redundant_generators_reduce_to_a_basis() {
        let gens = vec![
            vec![z("1"), z("0")],
            vec![z("t"), z("t")],
            vec![z("0"), z("1")],
            vec![z("1 + t"), z("1")],
        ];
        let l = Lattice::from_generators(2, &gens).unwrap();
        assert_eq!(l.basis().cols(), 2);
        assert_eq!(l, Lattice::standard(2));
        assert!(Lattice::from_generators(2, &gens[..1]).is_err());
    }

    #[test]
    fn scaling() {
        let o2 = Lattice::standard(2);
        assert_eq!(lattice_scale(&TropScalar::one(), &o2).unwrap(), o2);
        assert_eq!(lattice_scale(&TropScalar::int(1), &o2).unwrap(), diag("t^-1", "t^-1"));
        let a = lattice_scale(&TropScalar::int(2), &lattice_scale(&TropScalar::int(-3), &o2).unwrap()).unwrap();
        assert_eq!(a, lattice_scale(&TropScalar::int(-1), &o2).unwrap());
        assert_eq!(lattice_scale(&TropScalar::NegInf, &o2).unwrap_err(), Error::InfiniteScalar);
    }

    #[test]
    fn charts() {
        let id = FieldMatrix::identity(2);
        assert_eq!(chart(&id, &TropVector::from_ints(&[0, 0])).unwrap(), Lattice::standard(2));
        assert_eq!(chart(&id, &TropVector::from_ints(&[1, -1])).unwrap(), diag("t^-1", "t"));
        let y: TropVector = "0,-inf".parse().unwrap();
        assert_eq!(chart(&id, &y).unwrap_err(), Error::NonMaximalLattice(1));
        let lo = chart(&id, &TropVector::from_ints(&[0, 1])).unwrap();
        let hi = chart(&id, &TropVector::from_ints(&[1, 1])).unwrap();
        assert!(hi.contains(&lo).unwrap());
        assert!(!lo.contains(&hi).unwrap());
    }

    #[test]
    fn transitions() {
        let id = FieldMatrix::identity(2);
        let y = TropVector::from_ints(&[2, -1]);
        assert_eq!(chart_transition(&id, &id, &y).unwrap(), Some(y.clone()));
        let swap = fm("0,1;1,0");
        assert_eq!(chart_transition(&id, &swap, &y).unwrap(), Some(TropVector::from_ints(&[-1, 2])));
        let u = fm("1,1;0,1");
        // α = τ(U⁻¹) = [[0,0],[-inf,0]] and β = τ(U) = [[0,0],[-inf,0]]
        let inside = TropVector::from_ints(&[3, 1]);
        let x = chart_transition(&id, &u, &inside).unwrap().unwrap();
        assert_eq!(x, inside);
        assert_eq!(chart(&u, &x).unwrap(), chart(&id, &inside).unwrap());
        let outside = TropVector::from_ints(&[0, 2]);
        assert_eq!(chart_transition(&id, &u, &outside).unwrap(), None);
    }

    #[test]
    fn common_bases_and_distance() {
        let o2 = Lattice::standard(2);
        let cb = common_basis(&o2, &o2).unwrap();
        assert!(cb.taus().iter().all(|t| *t == q(0)));
        let m = diag("t", "t^-1");
        let cb = common_basis(&o2, &m).unwrap();
        let mut taus = cb.taus();
        taus.sort();
        assert_eq!(taus, vec![q(-1), q(1)]);
        assert_eq!(building_dist(&o2, &o2).unwrap(), q(0));
        assert_eq!(building_dist(&o2, &m).unwrap(), q(2));
        let zm = lattice_scale(&TropScalar::int(5), &m).unwrap();
        assert_eq!(building_dist(&o2, &zm).unwrap(), q(2));
    }

    #[test]
    fn common_basis_properties() {
        let l = Lattice::new(fm("1,t;t^-1,1 + t^2")).unwrap();
        let m = Lattice::new(fm("t^2,1;1,t^-1 + 3")).unwrap();
        let cb = common_basis(&l, &m).unwrap();
        assert_eq!(Lattice::new(cb.basis.clone()).unwrap(), l);
        let mut scaled = cb.basis.clone();
        for (i, a) in cb.scalars.iter().enumerate() {
            scaled.scale_column(i, a);
        }
        assert_eq!(Lattice::new(scaled).unwrap(), m);
    }

    #[test]
    fn lattice_text_round_trip() {
        let l: Lattice = "1,0;t,t^-1".parse().unwrap();
        assert_eq!(l.basis().column(1), vec![z("t"), z("t^-1")]);
        assert_eq!(l.to_string().parse::<Lattice>().unwrap(), l);
    }
}
