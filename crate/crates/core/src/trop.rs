//! The max-plus semifield, free semimodules over it, tropical matrices and
//! tropical projective spaces.
//!
//! Scalars are exact: a [`TropScalar`] is either a finite rational or the
//! bottom element `-inf`, which is the additive neutral element `0_T`. The
//! multiplicative unit `1_T` is the rational `0`.
//!
//! The text grammar shared with the command line is:
//!
//! * scalars: `p/q`, integers, finite decimals, or `-inf`;
//! * vectors: comma separated scalars, e.g. `0,-inf,3/2`;
//! * matrices: row major, rows separated by `;`, e.g. `0,2;1,0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};

/// An element of `T = Q ∪ {-inf}`.
///
/// The derived order puts `NegInf` below every finite value, which is the
/// order of the semifield.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TropScalar {
    NegInf,
    Finite(Q),
}

impl TropScalar {
    /// `0_T = -inf`.
    pub fn zero() -> Self {
        TropScalar::NegInf
    }

    /// `1_T = 0`.
    pub fn one() -> Self {
        TropScalar::Finite(Q::zero())
    }

    pub fn int(n: i64) -> Self {
        TropScalar::Finite(crate::rational::q(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropScalar::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TropScalar::NegInf)
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            TropScalar::Finite(v) => Some(v),
            TropScalar::NegInf => None,
        }
    }

    /// `a ⊕ b = max(a, b)`.
    pub fn oplus(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `a ⊙ b = a + b`, absorbing at `-inf`.
    pub fn odot(&self, other: &Self) -> Self {
        match (self, other) {
            (TropScalar::Finite(a), TropScalar::Finite(b)) => TropScalar::Finite(a + b),
            _ => TropScalar::NegInf,
        }
    }

    /// Tropical inverse `a^{⊙-1} = -a`; `None` for `0_T`.
    pub fn inverse(&self) -> Option<Self> {
        self.finite().map(|v| TropScalar::Finite(-v))
    }

    /// `a ⊘ b` for a finite divisor.
    pub fn odiv(&self, divisor: &Q) -> Self {
        match self {
            TropScalar::Finite(a) => TropScalar::Finite(a - divisor),
            TropScalar::NegInf => TropScalar::NegInf,
        }
    }
}

impl From<Q> for TropScalar {
    fn from(v: Q) -> Self {
        TropScalar::Finite(v)
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::NegInf => f.write_str("-inf"),
            TropScalar::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl FromStr for TropScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "-inf" {
            Ok(TropScalar::NegInf)
        } else {
            parse_rational(t).map(TropScalar::Finite)
        }
    }
}

/// An element of the free semimodule `T^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropVector {
    coords: Vec<TropScalar>,
}

impl TropVector {
    pub fn new(coords: Vec<TropScalar>) -> Self {
        TropVector { coords }
    }

    pub fn from_finite(values: &[Q]) -> Self {
        TropVector::new(values.iter().cloned().map(TropScalar::Finite).collect())
    }

    pub fn from_ints(values: &[i64]) -> Self {
        TropVector::new(values.iter().map(|&v| TropScalar::int(v)).collect())
    }

    /// The zero vector (all coordinates `-inf`).
    pub fn zeros(n: usize) -> Self {
        TropVector::new(vec![TropScalar::NegInf; n])
    }

    /// Canonical basis vector `e_i` (zero based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = TropVector::zeros(n);
        v.coords[i] = TropScalar::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[TropScalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &TropScalar {
        &self.coords[i]
    }

    pub fn into_coords(self) -> Vec<TropScalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(TropScalar::is_zero)
    }

    /// All coordinates finite.
    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(TropScalar::is_finite)
    }

    /// Membership in `FT^n`: all coordinates finite, or the zero vector.
    pub fn in_finite_part(&self) -> bool {
        self.is_finite() || self.is_zero()
    }

    /// Mask of finite coordinates.
    pub fn support(&self) -> Vec<bool> {
        self.coords.iter().map(TropScalar::is_finite).collect()
    }

    /// The coordinatewise order `x ⪯ y`.
    pub fn precedes(&self, other: &Self) -> bool {
        self.len() == other.len() && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn oplus(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::dim(self.len(), other.len()));
        }
        Ok(TropVector::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a.oplus(b)).collect(),
        ))
    }

    /// `λ ⊙ x`.
    pub fn scale(&self, lambda: &TropScalar) -> Self {
        TropVector::new(self.coords.iter().map(|c| c.odot(lambda)).collect())
    }

    /// Largest finite coordinate.
    pub fn max_finite(&self) -> Option<&Q> {
        self.coords.iter().filter_map(TropScalar::finite).max()
    }
}

impl From<Vec<TropScalar>> for TropVector {
    fn from(coords: Vec<TropScalar>) -> Self {
        TropVector::new(coords)
    }
}

impl fmt::Display for TropVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TropVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<TropScalar>>>()?;
        Ok(TropVector::new(coords))
    }
}

/// A matrix over `T`, stored row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropScalar>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(rows * cols, entries.len()));
        }
        Ok(TropMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<TropScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::dim(c, row.len()));
            }
            entries.extend(row);
        }
        TropMatrix::new(r, c, entries)
    }

    /// Builds a matrix from integer entries; `None` stands for `-inf`.
    pub fn from_int_rows(rows: &[&[Option<i64>]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.map_or(TropScalar::NegInf, TropScalar::int))
                    .collect()
            })
            .collect();
        TropMatrix::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn from_columns(columns: &[TropVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, TropVector::len);
        let mut entries = vec![TropScalar::NegInf; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::dim(rows, col.len()));
            }
            for (i, v) in col.coords().iter().enumerate() {
                entries[i * cols + j] = v.clone();
            }
        }
        TropMatrix::new(rows, cols, entries)
    }

    /// `Id_T`: `1_T` on the diagonal and `0_T` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![TropScalar::NegInf; n * n];
        for i in 0..n {
            entries[i * n + i] = TropScalar::one();
        }
        TropMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TropScalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> TropVector {
        TropVector::new(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> TropVector {
        TropVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        TropMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// `(A ⊙ B)^i_j = ⊕_k A^i_k ⊙ B^k_j`.
    pub fn mul(&self, other: &TropMatrix) -> Result<TropMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(self.cols, other.rows));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TropScalar::NegInf;
                for k in 0..self.cols {
                    let term = self.get(i, k).odot(other.get(k, j));
                    if term > acc {
                        acc = term;
                    }
                }
                entries.push(acc);
            }
        }
        TropMatrix::new(self.rows, other.cols, entries)
    }

    /// The linear map `x ↦ A ⊙ x`.
    pub fn apply(&self, x: &TropVector) -> Result<TropVector> {
        if self.cols != x.len() {
            return Err(Error::dim(self.cols, x.len()));
        }
        let out = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).odot(x.get(j)))
                    .max()
                    .unwrap_or(TropScalar::NegInf)
            })
            .collect();
        Ok(TropVector::new(out))
    }

    /// `λ ⊙ A`.
    pub fn scale(&self, lambda: &TropScalar) -> Self {
        TropMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.odot(lambda)).collect(),
        }
    }

    /// A tropical linear map is onto iff every canonical basis vector of the
    /// codomain appears, up to a finite scalar, among its columns.
    pub fn is_surjective(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).any(|j| {
                self.get(i, j).is_finite()
                    && (0..self.rows).all(|k| k == i || self.get(k, j).is_zero())
            })
        })
    }

    /// Fails on the first column with no finite entry.
    pub fn check_columns(&self) -> Result<()> {
        match (0..self.cols).find(|&j| (0..self.rows).all(|i| self.get(i, j).is_zero())) {
            Some(j) => Err(Error::EmptyColumn(j)),
            None => Ok(()),
        }
    }

    /// Fails on the first row with no finite entry.
    pub fn check_rows(&self) -> Result<()> {
        match (0..self.rows).find(|&i| (0..self.cols).all(|j| self.get(i, j).is_zero())) {
            Some(i) => Err(Error::EmptyRow(i)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl FromStr for TropMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| r.parse::<TropVector>().map(TropVector::into_coords))
            .collect::<Result<Vec<_>>>()?;
        TropMatrix::from_rows(rows)
    }
}

/// A point of `TP^{n-1}`, stored through its canonical representative whose
/// largest finite coordinate is `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    rep: TropVector,
}

impl ProjPoint {
    pub fn new(x: &TropVector) -> Result<Self> {
        let max = x.max_finite().ok_or(Error::ZeroVector)?.clone();
        let rep = TropVector::new(x.coords().iter().map(|c| c.odiv(&max)).collect());
        Ok(ProjPoint { rep })
    }

    /// Canonical representative.
    pub fn rep(&self) -> &TropVector {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Projective dimension `n - 1`.
    pub fn dim(&self) -> usize {
        self.rep.len() - 1
    }

    /// Whether the point lies in `FTP^{n-1}`.
    pub fn is_finite(&self) -> bool {
        self.rep.is_finite()
    }

    /// For points of `TP^1`, the coordinate `x^1 - x^2` in `Q ∪ {±inf}`,
    /// encoded as `Less`/`Greater` for the two boundary points.
    pub fn tp1_coordinate(&self) -> Tp1Coord {
        debug_assert_eq!(self.len(), 2);
        match (self.rep.get(0), self.rep.get(1)) {
            (TropScalar::Finite(a), TropScalar::Finite(b)) => Tp1Coord::Finite(a - b),
            (TropScalar::NegInf, _) => Tp1Coord::MinusInfinity,
            (_, TropScalar::NegInf) => Tp1Coord::PlusInfinity,
        }
    }

    /// The point `[u : 0]` of `TP^1`.
    pub fn tp1(u: Q) -> Self {
        ProjPoint { rep: TropVector::new(vec![TropScalar::Finite(u), TropScalar::one()]) }
            .renormalized()
    }

    fn renormalized(self) -> Self {
        ProjPoint::new(&self.rep).expect("nonzero representative")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: TropVector = s.parse()?;
        ProjPoint::new(&v)
    }
}

/// The affine coordinate on `TP^1 ≅ Q ∪ {-inf, +inf}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tp1Coord {
    MinusInfinity,
    Finite(Q),
    PlusInfinity,
}

impl PartialOrd for Tp1Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tp1Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        use Tp1Coord::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (MinusInfinity, MinusInfinity) | (PlusInfinity, PlusInfinity) => Ordering::Equal,
            (MinusInfinity, _) | (_, PlusInfinity) => Ordering::Less,
            (_, MinusInfinity) | (PlusInfinity, _) => Ordering::Greater,
        }
    }
}

/// A projective map `TP^{n-1} → TP^{m-1}` induced by a matrix with no
/// all-`-inf` column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMap {
    matrix: TropMatrix,
}

impl ProjectiveMap {
    pub fn new(matrix: TropMatrix) -> Result<Self> {
        matrix.check_columns()?;
        Ok(ProjectiveMap { matrix })
    }

    pub fn matrix(&self) -> &TropMatrix {
        &self.matrix
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(&self.matrix.apply(p.rep())?)
    }
}

/// `π(A ⊙ rep(p))`.
pub fn proj_map(a: &TropMatrix, p: &ProjPoint) -> Result<ProjPoint> {
    ProjectiveMap::new(a.clone())?.apply(p)
}
