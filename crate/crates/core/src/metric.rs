//! The canonical Hilbert-type metric on tropical projective spaces, tropical
//! segments and their affine parametrization.
//!
//! On `TP^{n-1}` the distance between classes of `x̄` and `ȳ` is
//! `max_i(x̄^i - ȳ^i) + max_i(ȳ^i - x̄^i)`, computed over the common finite
//! support. Points with different `-inf` supports are at distance `+inf`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};
use crate::trop::{ProjPoint, Tp1Coord, TropMatrix, TropScalar, TropVector};

/// A value in `Q_{≥0} ∪ {+inf}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(Q),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Q::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Distance::Finite(v) => Some(v),
            Distance::Infinite => None,
        }
    }

    /// Saturating sum.
    pub fn add(&self, other: &Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }

    /// Multiplication by a nonnegative rational; `0 · inf = 0`.
    pub fn scale(&self, factor: &Q) -> Distance {
        match self {
            Distance::Finite(a) => Distance::Finite(a * factor),
            Distance::Infinite if factor.is_zero() => Distance::zero(),
            Distance::Infinite => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(v) => f.write_str(&format_rational(v)),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Distance::Infinite),
            t => parse_rational(t).map(Distance::Finite),
        }
    }
}

fn same_len(x: &ProjPoint, y: &ProjPoint) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::dim(x.len(), y.len()));
    }
    Ok(())
}

/// Distance on `TP^{n-1}`.
pub fn dist(x: &ProjPoint, y: &ProjPoint) -> Result<Distance> {
    same_len(x, y)?;
    if x.rep().support() != y.rep().support() {
        return Ok(Distance::Infinite);
    }
    let diffs: Vec<Q> = x
        .rep()
        .coords()
        .iter()
        .zip(y.rep().coords())
        .filter_map(|(a, b)| Some(a.finite()? - b.finite()?))
        .collect();
    let max = diffs.iter().max().expect("nonzero points");
    let min = diffs.iter().min().expect("nonzero points");
    Ok(Distance::Finite(max - min))
}

/// The Euclidean distance on `TP^1` in the coordinate `x^1 - x^2`.
pub fn dist_tp1(a: &ProjPoint, b: &ProjPoint) -> Result<Distance> {
    for p in [a, b] {
        if p.len() != 2 {
            return Err(Error::dim(2, p.len()));
        }
    }
    Ok(match (a.tp1_coordinate(), b.tp1_coordinate()) {
        (Tp1Coord::Finite(u), Tp1Coord::Finite(v)) => Distance::Finite((u - v).abs()),
        (u, v) if u == v => Distance::zero(),
        _ => Distance::Infinite,
    })
}

/// Whether `x` and `y` lie in the same finite-distance class.
pub fn same_class(x: &ProjPoint, y: &ProjPoint) -> Result<bool> {
    Ok(dist(x, y)?.is_finite())
}

/// Tropical cross-ratio of `b ⪯ c` in `TP^1`: the point
/// `[(c^1 - c^2) - (b^1 - b^2) : 0]`.
pub fn cross_ratio(b: &ProjPoint, c: &ProjPoint) -> Result<ProjPoint> {
    for p in [b, c] {
        if p.len() != 2 {
            return Err(Error::dim(2, p.len()));
        }
    }
    let (u, v) = (b.tp1_coordinate(), c.tp1_coordinate());
    if u > v {
        return Err(Error::NotOrdered(format!("[{b}] is above [{c}]")));
    }
    Ok(match (u, v) {
        (Tp1Coord::Finite(u), Tp1Coord::Finite(v)) => ProjPoint::tp1(v - u),
        (u, v) if u == v => ProjPoint::tp1(Q::zero()),
        _ => ProjPoint::new(&TropVector::new(vec![TropScalar::one(), TropScalar::NegInf]))?,
    })
}

/// `min_i (x^i - y^i)`: the largest `h` with `h ⊙ y ⪯ x`. Coordinates where
/// `y` is `-inf` impose nothing; a finite `y^i` against `x^i = -inf` gives
/// `-inf`.
fn threshold(x: &TropVector, y: &TropVector) -> TropScalar {
    x.coords()
        .iter()
        .zip(y.coords())
        .filter_map(|(a, b)| b.finite().map(|b| a.odiv(b)))
        .min()
        .expect("nonzero lift")
}

/// The tropical segment between two points, parametrized by `TP^1` through
/// the map with columns `(ȳ, x̄)`: `[h : k] ↦ max(ȳ + h, x̄ + k)`.
///
/// The parameter coordinate `u = h - k` maps to `x` for `u ≤ x₀` and to `y`
/// for `u ≥ y₀`; in between the map is injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    start: ProjPoint,
    end: ProjPoint,
    inner_start: ProjPoint,
    inner_end: ProjPoint,
    map: TropMatrix,
}

impl Segment {
    pub fn start(&self) -> &ProjPoint {
        &self.start
    }

    pub fn end(&self) -> &ProjPoint {
        &self.end
    }

    /// `(x₀, y₀)` in `TP^1`.
    pub fn inner_endpoints(&self) -> (&ProjPoint, &ProjPoint) {
        (&self.inner_start, &self.inner_end)
    }

    /// The lifting map `T^2 → T^n`.
    pub fn map(&self) -> &TropMatrix {
        &self.map
    }

    pub fn is_finite(&self) -> bool {
        self.inner_start.is_finite() && self.inner_end.is_finite()
    }

    /// Length measured between the inner endpoints.
    pub fn length(&self) -> Distance {
        dist_tp1(&self.inner_start, &self.inner_end).expect("TP^1 endpoints")
    }

    /// The parameter interval `[x₀, y₀]` as affine coordinates.
    fn bounds(&self) -> Result<(Q, Q)> {
        match (self.inner_start.tp1_coordinate(), self.inner_end.tp1_coordinate()) {
            (Tp1Coord::Finite(a), Tp1Coord::Finite(b)) => Ok((a, b)),
            _ => Err(Error::InfiniteSegment),
        }
    }

    /// Image of the parameter `[u : 0]`.
    pub fn point_at(&self, u: &Q) -> ProjPoint {
        let param = TropVector::new(vec![TropScalar::Finite(u.clone()), TropScalar::one()]);
        ProjPoint::new(&self.map.apply(&param).expect("2-column map")).expect("nonzero image")
    }
}

/// Builds the segment between `π(x̄)` and `π(ȳ)`.
pub fn segment(xbar: &TropVector, ybar: &TropVector) -> Result<Segment> {
    if xbar.len() != ybar.len() {
        return Err(Error::dim(xbar.len(), ybar.len()));
    }
    let start = ProjPoint::new(xbar)?;
    let end = ProjPoint::new(ybar)?;
    let map = TropMatrix::from_columns(&[ybar.clone(), xbar.clone()])?;
    let h = threshold(xbar, ybar);
    let k = threshold(ybar, xbar);
    let inner_start = ProjPoint::new(&TropVector::new(vec![h, TropScalar::one()]))?;
    let inner_end = ProjPoint::new(&TropVector::new(vec![TropScalar::one(), k]))?;
    Ok(Segment { start, end, inner_start, inner_end, map })
}

/// `C_{x,y}(t)`: the segment reparametrized affinely over `[0, 1]`.
pub fn geodesic_eval(s: &Segment, t: &Q) -> Result<ProjPoint> {
    if t < &Q::zero() || t > &Q::one() {
        return Err(Error::ParameterOutOfRange(format_rational(t)));
    }
    let (lo, hi) = s.bounds()?;
    if lo == hi {
        return Ok(s.start.clone());
    }
    if t.is_zero() {
        return Ok(s.start.clone());
    }
    if t.is_one() {
        return Ok(s.end.clone());
    }
    let u = &lo + t * (&hi - &lo);
    Ok(s.point_at(&u))
}

/// For each column `i` of `A`, the vector
/// `h_i = e_i ⊕ ⊕_{j≠i} a_j ⊙ e_j` with `a_j = min_k (A^k_i - A^k_j)`,
/// whose class is the extremal point of the fibre over `π(A e_i)`.
pub fn extremal_points(a: &TropMatrix) -> Result<Vec<TropVector>> {
    a.check_columns()?;
    let n = a.cols();
    Ok((0..n)
        .map(|i| {
            let ci = a.column(i);
            TropVector::new(
                (0..n)
                    .map(|j| {
                        if j == i {
                            TropScalar::one()
                        } else {
                            threshold(&ci, &a.column(j))
                        }
                    })
                    .collect(),
            )
        })
        .collect())
}
