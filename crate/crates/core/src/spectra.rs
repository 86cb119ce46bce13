//! Displacement, translation length and length spectra of linear maps
//! acting on the building.
//!
//! Eigenvalue tropicalizations come from the Newton polygon of the
//! characteristic polynomial. With points `(i, v(cᵢ))` for `Σ cᵢ λⁱ`, the
//! root valuations are the negated lower-hull slopes, so the root `τ`
//! values are the slopes themselves.

use std::fmt;

use crate::building::Lattice;
use crate::error::{Error, Result};
use crate::hahn::{FieldElem, FieldMatrix};
use crate::rational::Q;
use crate::trop::TropScalar;

/// Polynomial over the field, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPoly {
    coeffs: Vec<FieldElem>,
}

impl FieldPoly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        FieldPoly::new(vec![c])
    }

    /// `λ - c`.
    pub fn linear(c: &FieldElem) -> Self {
        FieldPoly::new(vec![-c, FieldElem::one()])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = FieldElem::zero();
        FieldPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> FieldPoly {
        FieldPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &FieldPoly) -> FieldPoly {
        if self.is_zero() || other.is_zero() {
            return FieldPoly::zero();
        }
        let mut out = vec![FieldElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        FieldPoly::new(out)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Companion matrix of a monic polynomial, whose characteristic
    /// polynomial is `self`.
    pub fn companion(&self) -> Result<FieldMatrix> {
        let d = self.degree().filter(|&d| d > 0).ok_or(Error::dim(1, 0))?;
        if !self.coeffs[d].is_one() {
            return Err(Error::Parse("companion matrix needs a monic polynomial".into()));
        }
        let mut m = FieldMatrix::zeros(d, d);
        for i in 1..d {
            m.set(i, i - 1, FieldElem::one());
        }
        for i in 0..d {
            m.set(i, d - 1, -&self.coeffs[i]);
        }
        Ok(m)
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Largest size for which the characteristic polynomial is expanded by
/// cofactors; larger matrices use Berkowitz's division-free recursion.
const COFACTOR_LIMIT: usize = 5;

/// `det(λI − A)`.
pub fn char_poly(a: &FieldMatrix) -> Result<FieldPoly> {
    if !a.is_square() {
        return Err(Error::dim(a.rows(), a.cols()));
    }
    if a.rows() <= COFACTOR_LIMIT {
        Ok(char_poly_cofactor(a))
    } else {
        Ok(char_poly_berkowitz(a))
    }
}

/// Expansion of `det(λI − A)` over subsets of columns.
pub fn char_poly_cofactor(a: &FieldMatrix) -> FieldPoly {
    let n = a.rows();
    let entry = |i: usize, j: usize| -> FieldPoly {
        let c = FieldPoly::constant(-a.get(i, j));
        if i == j {
            c.add(&FieldPoly::new(vec![FieldElem::zero(), FieldElem::one()]))
        } else {
            c
        }
    };
    let mut dp = vec![FieldPoly::zero(); 1 << n];
    dp[0] = FieldPoly::constant(FieldElem::one());
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let r = mask.count_ones() as usize;
        if r == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            let e = entry(r, c);
            if e.is_zero() {
                continue;
            }
            let mut term = dp[mask].mul(&e);
            if (mask >> c).count_ones() % 2 == 1 {
                term = term.neg();
            }
            let next = mask | (1 << c);
            dp[next] = dp[next].add(&term);
        }
    }
    dp.pop().unwrap()
}

/// Berkowitz's algorithm: `χ_{r+1} = T_r · χ_r`, where `T_r` is the
/// lower-triangular Toeplitz matrix with first column
/// `(1, −a_rr, −R C, −R M C, …, −R M^{r−1} C)`.
pub fn char_poly_berkowitz(a: &FieldMatrix) -> FieldPoly {
    let n = a.rows();
    if n == 0 {
        return FieldPoly::constant(FieldElem::one());
    }
    // coefficients highest degree first
    let mut v = vec![FieldElem::one(), -a.get(0, 0)];
    for r in 1..n {
        let row: Vec<FieldElem> = (0..r).map(|j| a.get(r, j).clone()).collect();
        let mut col: Vec<FieldElem> = (0..r).map(|i| a.get(i, r).clone()).collect();
        let mut t = vec![FieldElem::one(), -a.get(r, r)];
        for _ in 0..r {
            let dot = row.iter().zip(&col).fold(FieldElem::zero(), |acc, (x, y)| &acc + &(x * y));
            t.push(-&dot);
            col = (0..r)
                .map(|i| (0..r).fold(FieldElem::zero(), |acc, k| &acc + &(a.get(i, k) * &col[k])))
                .collect();
        }
        let mut next = vec![FieldElem::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                if !vj.is_zero() && !t[i - j].is_zero() {
                    *slot = &*slot + &(&t[i - j] * vj);
                }
            }
        }
        v = next;
    }
    v.reverse();
    FieldPoly::new(v)
}

/// Lower convex hull of the points `(i, v(cᵢ))` of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// `(i, v(cᵢ))`, with `None` standing for `+∞` at zero coefficients.
    pub points: Vec<(usize, Option<Q>)>,
    pub hull: Vec<(usize, Q)>,
    /// `(slope, multiplicity)` from left to right.
    pub slopes: Vec<(Q, usize)>,
}

impl NewtonPolygon {
    pub fn new(p: &FieldPoly) -> Self {
        let points: Vec<(usize, Option<Q>)> =
            p.coeffs().iter().enumerate().map(|(i, c)| (i, c.valuation().cloned())).collect();
        let finite: Vec<(usize, Q)> =
            points.iter().filter_map(|(i, v)| v.as_ref().map(|v| (*i, v.clone()))).collect();
        let mut hull: Vec<(usize, Q)> = Vec::new();
        for pt in finite {
            while hull.len() >= 2 {
                let (i1, v1) = &hull[hull.len() - 2];
                let (i2, v2) = &hull[hull.len() - 1];
                // drop the middle point unless it lies strictly below the chord
                let lhs = (v2 - v1) * Q::from_integer((pt.0 - i1).into());
                let rhs = (&pt.1 - v1) * Q::from_integer((i2 - i1).into());
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let slopes = hull
            .windows(2)
            .map(|w| {
                let width = w[1].0 - w[0].0;
                ((&w[1].1 - &w[0].1) / Q::from_integer(width.into()), width)
            })
            .collect();
        NewtonPolygon { points, hull, slopes }
    }

    /// Slopes repeated by multiplicity, ascending.
    pub fn slope_multiset(&self) -> Vec<Q> {
        self.slopes
            .iter()
            .flat_map(|(s, m)| std::iter::repeat_n(s.clone(), *m))
            .collect()
    }
}

/// The multiset `{τ(λᵢ)}` of eigenvalue tropicalizations, ascending.
pub fn eigenvalue_valuations(a: &FieldMatrix) -> Result<Vec<Q>> {
    let p = char_poly(a)?;
    if p.coeffs()[0].is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(NewtonPolygon::new(&p).slope_multiset())
}

/// `max τ(λᵢ) − min τ(λᵢ)`.
pub fn translation_length(a: &FieldMatrix) -> Result<Q> {
    let taus = eigenvalue_valuations(a)?;
    match (taus.first(), taus.last()) {
        (Some(lo), Some(hi)) => Ok(hi - lo),
        _ => Ok(Q::from_integer(0.into())),
    }
}

fn max_tau_finite(m: &FieldMatrix) -> Q {
    match m.max_tau() {
        TropScalar::Finite(v) => v,
        TropScalar::NegInf => unreachable!("invertible matrices have a nonzero entry"),
    }
}

/// `max τ(Ã) + max τ(Ã⁻¹)` with `Ã` the matrix of `A` in the basis of `L`.
pub fn displacement(a: &FieldMatrix, l: &Lattice) -> Result<Q> {
    let conj = l.basis_inverse().mul(a)?.mul(l.basis())?;
    let inv = conj.inverse()?;
    Ok(max_tau_finite(&conj) + max_tau_finite(&inv))
}

/// A finitely generated subgroup of `SL_n(F)`, given by named generators.
#[derive(Clone, Debug)]
pub struct Representation {
    names: Vec<String>,
    generators: Vec<FieldMatrix>,
    inverses: Vec<FieldMatrix>,
}

/// One letter of a word: generator index and whether it is inverted.
pub type Letter = (usize, bool);

impl Representation {
    pub fn new(generators: Vec<(String, FieldMatrix)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut mats = Vec::new();
        let mut inverses = Vec::new();
        let dim = generators.first().map(|(_, m)| m.rows());
        for (name, m) in generators {
            if name.is_empty() || name.contains(|c: char| c == '\'' || c.is_whitespace()) {
                return Err(Error::Parse(format!("invalid generator name `{name}`")));
            }
            if !m.is_square() || Some(m.rows()) != dim {
                return Err(Error::dim(dim.unwrap_or(0), m.rows()));
            }
            let det = m.det()?;
            if !det.is_one() {
                return Err(Error::NotSpecialLinear(format!("{det} for `{name}`")));
            }
            inverses.push(m.inverse()?);
            names.push(name);
            mats.push(m);
        }
        Ok(Representation { names, generators: mats, inverses })
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, FieldMatrix::rows)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, name: &str) -> Option<&FieldMatrix> {
        self.names.iter().position(|n| n == name).map(|i| &self.generators[i])
    }

    /// Splits a word into letters, matching the longest generator name at
    /// each position; a trailing `'` inverts a letter. Whitespace is ignored.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Letter>> {
        let chars: String = word.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = chars.as_str();
        let mut letters = Vec::new();
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            let Some((i, name)) = best else {
                return Err(Error::UnknownGenerator(rest.to_string()));
            };
            rest = &rest[name.len()..];
            let inverted = rest.starts_with('\'');
            if inverted {
                rest = &rest[1..];
            }
            letters.push((i, inverted));
        }
        Ok(letters)
    }

    pub fn evaluate(&self, letters: &[Letter]) -> Result<FieldMatrix> {
        let mut acc = FieldMatrix::identity(self.dim());
        for &(i, inv) in letters {
            let g = if inv { &self.inverses[i] } else { &self.generators[i] };
            acc = acc.mul(g)?;
        }
        Ok(acc)
    }

    pub fn evaluate_word(&self, word: &str) -> Result<FieldMatrix> {
        self.evaluate(&self.parse_word(word)?)
    }
}

/// Translation length of each word, in input order.
pub fn length_spectrum(rho: &Representation, words: &[&str]) -> Result<Vec<(String, Q)>> {
    words
        .iter()
        .map(|w| Ok((w.to_string(), translation_length(&rho.evaluate_word(w)?)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn fm(s: &str) -> FieldMatrix {
        s.parse().unwrap()
    }

    fn poly(cs: &[&str]) -> FieldPoly {
        FieldPoly::new(cs.iter().map(|c| c.parse().unwrap()).collect())
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(char_poly(&FieldMatrix::identity(2)).unwrap(), poly(&["1", "-2", "1"]));
        assert_eq!(char_poly(&fm("t^-1,0;0,t")).unwrap(), poly(&["1", "-t^-1 - t", "1"]));
        let p = poly(&["t", "1 + t^2", "-3", "1"]);
        assert_eq!(char_poly(&p.companion().unwrap()).unwrap(), p);
    }

    #[test]
    fn berkowitz_agrees_with_cofactors() {
        let ms = ["1,t,0;2,1,t^2;0,1 + t,3", "t^-1,1;1,0", "1,2,3,4;0,t,1,t^-1;5,0,1,1;1,1,1,t"];
        for m in ms {
            let m = fm(m);
            assert_eq!(char_poly_berkowitz(&m), char_poly_cofactor(&m));
        }
        let p = poly(&["1", "t", "0", "-t^-1", "2", "0", "1"]);
        assert_eq!(char_poly(&p.companion().unwrap()).unwrap(), p);
    }

    #[test]
    fn newton_polygon() {
        let np = NewtonPolygon::new(&poly(&["1", "-t^-1 - t", "1"]));
        assert_eq!(np.hull, vec![(0, q(0)), (1, q(-1)), (2, q(0))]);
        assert_eq!(np.slope_multiset(), vec![q(-1), q(1)]);
        let collinear = NewtonPolygon::new(&poly(&["t^2", "t", "1"]));
        assert_eq!(collinear.slopes, vec![(q(-1), 2)]);
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue_valuations(&fm("t^-1,0;0,t")).unwrap(), vec![q(-1), q(1)]);
        assert_eq!(eigenvalue_valuations(&FieldMatrix::identity(3)).unwrap(), vec![q(0); 3]);
        let tri = fm("1,5,t;0,t,1;0,0,t^2");
        assert_eq!(eigenvalue_valuations(&tri).unwrap(), vec![q(-2), q(-1), q(0)]);
        assert_eq!(eigenvalue_valuations(&fm("1,1;1,1")).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn lengths_and_displacement() {
        assert_eq!(translation_length(&FieldMatrix::identity(2)).unwrap(), q(0));
        let d = fm("t^-1,0;0,t");
        assert_eq!(translation_length(&d).unwrap(), q(2));
        let o2 = Lattice::standard(2);
        assert_eq!(displacement(&FieldMatrix::identity(2), &o2).unwrap(), q(0));
        assert_eq!(displacement(&d, &o2).unwrap(), q(2));
        assert_eq!(displacement(&fm("1,1;0,1"), &o2).unwrap(), q(0));
        assert_eq!(displacement(&fm("1,1;1,1"), &o2).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn sl2_trace_law_example() {
        let a = fm("t^-2,1;0,t^2");
        assert_eq!(translation_length(&a).unwrap(), q(4));
        let b = fm("1,t^-1;0,1");
        assert_eq!(translation_length(&b).unwrap(), q(0));
    }

    #[test]
    fn words_and_spectra() {
        let rho = Representation::new(vec![
            ("a".into(), fm("t^-1,0;0,t")),
            ("ab".into(), fm("1,1;0,1")),
            ("b".into(), fm("1,0;t,1")),
        ])
        .unwrap();
        assert_eq!(rho.parse_word("abb'a'").unwrap(), vec![(1, false), (2, true), (0, true)]);
        assert_eq!(rho.parse_word("").unwrap(), vec![]);
        assert_eq!(rho.parse_word("ac").unwrap_err(), Error::UnknownGenerator("c".into()));
        // greedy matching reads `bab'` as b·(ab)⁻¹, and `b'ab` as b⁻¹·ab
        let table = length_spectrum(&rho, &["", "a", "a'", "aa", "bab'", "b a b'", "bb'a"]).unwrap();
        let lens: Vec<Q> = table.into_iter().map(|(_, l)| l).collect();
        assert_eq!(lens, vec![q(0), q(2), q(2), q(4), q(0), q(0), q(2)]);
        let bad = Representation::new(vec![("d".into(), fm("t,0;0,1"))]);
        assert!(matches!(bad, Err(Error::NotSpecialLinear(_))));
    }
}
