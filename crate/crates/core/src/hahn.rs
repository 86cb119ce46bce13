//! Exact arithmetic in a valued field with rational value group.
//!
//! A [`Series`] is a finite sum `Σ c_k t^{e_k}` with rational coefficients
//! and rational exponents; a [`FieldElem`] is a reduced fraction of two
//! series. The valuation is the least exponent, and the tropicalization is
//! `τ(z) = -v(z)`, so `τ(t^e) = -e` and `τ(0) = -inf`.
//!
//! Series with exponents in `(1/N)Z` are Laurent polynomials in `s = t^{1/N}`,
//! which is how fractions are reduced: numerator and denominator are divided
//! by their polynomial gcd in `s`.
//!
//! Literal grammar: `3*t^2 + 1*t^5`, `t^-1`, `-1/2*t^(1/3)`, and fractions
//! `(1)/(1 + t)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};
use crate::trop::{TropMatrix, TropScalar, TropVector};

/// A finite generalized power series: terms `(exponent, coefficient)` with
/// strictly increasing exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Series {
    terms: Vec<(Q, Q)>,
}

impl Series {
    pub fn zero() -> Self {
        Series { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Series::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Series::monomial(c, Q::zero())
    }

    /// `c · t^e`.
    pub fn monomial(c: Q, e: Q) -> Self {
        if c.is_zero() {
            Series::zero()
        } else {
            Series { terms: vec![(e, c)] }
        }
    }

    /// The fixed element `t_λ = t^{-λ}` with `τ(t_λ) = λ`.
    pub fn t_lambda(lambda: &Q) -> Self {
        Series::monomial(Q::one(), -lambda)
    }

    /// Builds a series from arbitrary terms, merging equal exponents and
    /// dropping zeros.
    pub fn from_terms(mut terms: Vec<(Q, Q)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Series { terms: out }
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Least exponent; `None` for zero.
    pub fn valuation(&self) -> Option<&Q> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Coefficient of the least exponent.
    pub fn leading_coefficient(&self) -> Option<&Q> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn tau(&self) -> TropScalar {
        match self.valuation() {
            Some(v) => TropScalar::Finite(-v),
            None => TropScalar::NegInf,
        }
    }

    pub fn coefficient(&self, e: &Q) -> Q {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map_or_else(Q::zero, |(_, c)| c.clone())
    }

    /// Multiplies by `c · t^e`.
    pub fn mul_monomial(&self, c: &Q, e: &Q) -> Self {
        if c.is_zero() {
            return Series::zero();
        }
        Series { terms: self.terms.iter().map(|(x, d)| (x + e, d * c)).collect() }
    }

    fn merge(&self, other: &Series, negate_other: bool) -> Series {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Q| if negate_other { -c } else { c.clone() };
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                out.push((other.terms[j].0.clone(), sign(&other.terms[j].1)));
                j += 1;
            } else {
                let c = &self.terms[i].1 + sign(&other.terms[j].1);
                if !c.is_zero() {
                    out.push((self.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
        Series { terms: out }
    }

    /// Lcm of the exponent denominators.
    fn exponent_denominator(&self) -> BigInt {
        self.terms.iter().fold(BigInt::one(), |acc, (e, _)| acc.lcm(e.denom()))
    }

    /// Writes `self = t^{v} · P(t^{1/n})` and returns `P` densely, lowest
    /// degree first. `self` must be nonzero.
    fn to_poly(&self, n: &BigInt) -> Vec<Q> {
        let v = self.valuation().expect("nonzero series");
        let degree = |e: &Q| -> usize {
            let d = (e - v) * Q::from_integer(n.clone());
            debug_assert!(d.is_integer());
            d.to_integer().to_usize().expect("exponent span fits in memory")
        };
        let top = degree(&self.terms.last().unwrap().0);
        let mut p = vec![Q::zero(); top + 1];
        for (e, c) in &self.terms {
            p[degree(e)] = c.clone();
        }
        p
    }

    fn from_poly(p: &[Q], shift: &Q, n: &BigInt) -> Series {
        let n = Q::from_integer(n.clone());
        Series {
            terms: p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (shift + Q::from_integer(BigInt::from(k)) / &n, c.clone()))
                .collect(),
        }
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.merge(rhs, false)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.merge(rhs, true)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        if self.is_zero() || rhs.is_zero() {
            return Series::zero();
        }
        if rhs.is_monomial() {
            return self.mul_monomial(&rhs.terms[0].1, &rhs.terms[0].0);
        }
        if self.is_monomial() {
            return rhs.mul_monomial(&self.terms[0].1, &self.terms[0].0);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                terms.push((e1 + e2, c1 * c2));
            }
        }
        Series::from_terms(terms)
    }
}

// Dense polynomial helpers over Q, lowest degree first.

fn poly_trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Division with remainder; `b` must be nonzero.
fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![Q::zero()], r);
    }
    let mut quot = vec![Q::zero(); r.len() - db];
    for k in (0..quot.len()).rev() {
        let coef = &r[k + db] / &lead;
        if !coef.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &coef * bi;
            }
        }
        quot[k] = coef;
    }
    r.truncate(db.max(1));
    poly_trim(&mut r);
    (quot, r)
}

fn poly_is_zero(p: &[Q]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Primes for the modular coprimality test.
const GCD_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, m: u64) -> u64 {
    mod_pow(a, m - 2, m)
}

/// Image of a rational polynomial in `F_m[x]`; `None` if a denominator or
/// the leading coefficient vanishes mod `m`.
fn poly_mod(p: &[Q], m: u64) -> Option<Vec<u64>> {
    let big_m = BigInt::from(m);
    let red = |x: &BigInt| -> u64 { x.mod_floor(&big_m).to_u64().expect("reduced mod m") };
    let mut out = Vec::with_capacity(p.len());
    for c in p {
        let d = red(c.denom());
        if d == 0 {
            return None;
        }
        out.push(((red(c.numer()) as u128 * mod_inv(d, m) as u128) % m as u128) as u64);
    }
    if out.last().is_none_or(|&c| c == 0) {
        return None;
    }
    Some(out)
}

fn poly_gcd_degree_mod(a: &[u64], b: &[u64], m: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
    };
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let inv = mod_inv(*y.last().unwrap(), m);
        while x.len() >= y.len() && !(x.len() == 1 && x[0] == 0) {
            let coef = (*x.last().unwrap() as u128 * inv as u128 % m as u128) as u64;
            let shift = x.len() - y.len();
            for (i, yi) in y.iter().enumerate() {
                let sub = (coef as u128 * *yi as u128 % m as u128) as u64;
                x[shift + i] = (x[shift + i] + m - sub) % m;
            }
            x.pop();
            trim(&mut x);
            if x.is_empty() {
                x.push(0);
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() - 1
}

/// Whether the gcd is certainly constant: true when some prime keeps both
/// leading coefficients and yields a constant gcd mod that prime.
fn certainly_coprime(a: &[Q], b: &[Q]) -> bool {
    for &m in &GCD_PRIMES {
        if let (Some(x), Some(y)) = (poly_mod(a, m), poly_mod(b, m)) {
            return poly_gcd_degree_mod(&x, &y, m) == 0;
        }
    }
    false
}

/// Scales to integer coefficients with content 1.
fn primitive_part(p: &[Q]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    primitive_int(ints)
}

fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &lr * bi;
        }
        r.pop();
        while r.len() > 1 && r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.is_empty() {
            r.push(BigInt::zero());
        }
    }
    r
}

/// Monic gcd. Coprime inputs are detected modulo a prime; otherwise a
/// primitive remainder sequence over the integers is used.
fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    if poly_is_zero(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    if poly_is_zero(&x) || y.len() == 1 || x.len() == 1 || certainly_coprime(&x, &y) {
        if poly_is_zero(&x) {
            let lead = y.last().unwrap().clone();
            return y.iter().map(|c| c / &lead).collect();
        }
        return vec![Q::one()];
    }
    let mut u = primitive_part(&x);
    let mut v = primitive_part(&y);
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let r = primitive_int(pseudo_rem(&u, &v));
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        u = v;
        v = r;
    }
    let lead = Q::from_integer(v.last().unwrap().clone());
    v.into_iter().map(|c| Q::from_integer(c) / &lead).collect()
}

/// An element of the valued field, kept as a reduced fraction whose
/// denominator has valuation `0` and lowest-order coefficient `1`.
#[derive(Clone, Debug, Eq)]
pub struct FieldElem {
    num: Series,
    den: Series,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { num: Series::zero(), den: Series::one() }
    }

    pub fn one() -> Self {
        FieldElem { num: Series::one(), den: Series::one() }
    }

    pub fn from_series(s: Series) -> Self {
        FieldElem { num: s, den: Series::one() }
    }

    pub fn from_rational(c: Q) -> Self {
        FieldElem::from_series(Series::constant(c))
    }

    pub fn int(n: i64) -> Self {
        FieldElem::from_rational(crate::rational::q(n))
    }

    /// `c · t^e`.
    pub fn monomial(c: Q, e: Q) -> Self {
        FieldElem::from_series(Series::monomial(c, e))
    }

    /// `t_λ = t^{-λ}`.
    pub fn t_lambda(lambda: &Q) -> Self {
        FieldElem::from_series(Series::t_lambda(lambda))
    }

    /// `num / den` in canonical reduced form.
    pub fn fraction(num: Series, den: Series) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem::canonical(num, den))
    }

    pub fn numerator(&self) -> &Series {
        &self.num
    }

    pub fn denominator(&self) -> &Series {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn canonical(num: Series, den: Series) -> Self {
        if num.is_zero() {
            return FieldElem::zero();
        }
        let v = den.valuation().unwrap().clone();
        let c = den.leading_coefficient().unwrap().clone();
        let inv_c = c.recip();
        let neg_v = -v;
        let mut num = num.mul_monomial(&inv_c, &neg_v);
        let mut den = den.mul_monomial(&inv_c, &neg_v);
        if den.is_monomial() {
            return FieldElem { num, den };
        }
        let n = num.exponent_denominator().lcm(&den.exponent_denominator());
        let shift = num.valuation().unwrap().clone();
        let p = num.to_poly(&n);
        let d = den.to_poly(&n);
        let g = poly_gcd(&p, &d);
        if g.len() > 1 {
            // normalize the gcd to constant term 1 so the reduced
            // denominator keeps constant term 1
            let g0 = g[0].clone();
            let g: Vec<Q> = g.iter().map(|x| x / &g0).collect();
            let (pq, _) = poly_divrem(&p, &g);
            let (dq, _) = poly_divrem(&d, &g);
            num = Series::from_poly(&pq, &shift, &n);
            den = Series::from_poly(&dq, &Q::zero(), &n);
        }
        FieldElem { num, den }
    }

    /// For two canonical denominators `a, b` with a nontrivial common
    /// factor `g` (constant term 1), returns `(a / g, b / g)`.
    fn split_common(a: &Series, b: &Series) -> Option<(Series, Series)> {
        if a.is_one() || b.is_one() {
            return None;
        }
        let n = a.exponent_denominator().lcm(&b.exponent_denominator());
        let pa = a.to_poly(&n);
        let pb = b.to_poly(&n);
        let g = poly_gcd(&pa, &pb);
        if g.len() == 1 {
            return None;
        }
        let g0 = g[0].clone();
        let g: Vec<Q> = g.iter().map(|x| x / &g0).collect();
        let (qa, _) = poly_divrem(&pa, &g);
        let (qb, _) = poly_divrem(&pb, &g);
        Some((Series::from_poly(&qa, &Q::zero(), &n), Series::from_poly(&qb, &Q::zero(), &n)))
    }

    /// `τ(z) = τ(num) - τ(den)`; the canonical denominator has `τ = 0`.
    pub fn tau(&self) -> TropScalar {
        self.num.tau()
    }

    /// Valuation `v(z) = -τ(z)`; `None` for zero.
    pub fn valuation(&self) -> Option<&Q> {
        self.num.valuation()
    }

    /// Whether `τ(z) ≤ 0`, i.e. `z` lies in the valuation ring.
    pub fn in_valuation_ring(&self) -> bool {
        self.tau() <= TropScalar::one()
    }

    pub fn is_unit_of_ring(&self) -> bool {
        self.tau() == TropScalar::one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &FieldElem) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem::canonical(&self.num * &other.den, &self.den * &other.num))
    }

    /// Multiplies by `t_λ`.
    pub fn mul_t_lambda(&self, lambda: &Q) -> Self {
        FieldElem { num: self.num.mul_monomial(&Q::one(), &-lambda), den: self.den.clone() }
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElem::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        if self.den == rhs.den {
            if self.den.is_one() {
                return FieldElem::from_series(&self.num + &rhs.num);
            }
            return FieldElem::canonical(&self.num + &rhs.num, self.den.clone());
        }
        // over the lcm of the denominators
        let (da, db) = FieldElem::split_common(&self.den, &rhs.den)
            .unwrap_or_else(|| (self.den.clone(), rhs.den.clone()));
        FieldElem::canonical(&(&self.num * &db) + &(&rhs.num * &da), &self.den * &db)
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        if self.is_zero() || rhs.is_zero() {
            return FieldElem::zero();
        }
        let num = &self.num * &rhs.num;
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElem::from_series(num);
        }
        FieldElem::canonical(num, &self.den * &rhs.den)
    }
}

/// Element of the residue field `O/m = Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue(pub Q);

/// Tropicalization `τ: F → T`.
pub fn tau(z: &FieldElem) -> TropScalar {
    z.tau()
}

/// Projection `O → O/m`. The residue of the canonical fraction is the
/// constant coefficient of its numerator.
pub fn residue(z: &FieldElem) -> Result<Residue> {
    if !z.in_valuation_ring() {
        return Err(Error::NotInValuationRing(z.tau().to_string()));
    }
    Ok(Residue(z.num.coefficient(&Q::zero())))
}

/// Whether `τ(w₁ + w₂) = τ(w₁) ⊕ τ(w₂)`.
pub fn plus_tropicalizes(w1: &FieldElem, w2: &FieldElem) -> bool {
    (w1 + w2).tau() == w1.tau().oplus(&w2.tau())
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e.is_zero() {
                f.write_str(&format_rational(&mag))?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            if e.is_one() {
                f.write_str("t")?;
            } else {
                write!(f, "t^{}", format_rational(e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Recursive-descent parser for series and fraction literals.
struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in `{}`", self.pos, self.src.trim()))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn done(&self) -> bool {
        self.pos == self.chars.len()
    }

    /// Unsigned rational literal: digits with optional `.digits` and `/digits`.
    fn rational(&mut self) -> Result<Q> {
        let start = self.pos;
        let mut seen_slash = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == '.' {
                self.pos += 1;
            } else if c == '/' && !seen_slash && self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit) {
                seen_slash = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text)
    }

    fn exponent(&mut self) -> Result<Q> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let e = self.rational()?;
        if paren && !self.eat(')') {
            return Err(self.err("expected `)`"));
        }
        Ok(if neg { -e } else { e })
    }

    fn term(&mut self) -> Result<(Q, Q)> {
        let mut coef = Q::one();
        let mut saw_coef = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            coef = self.rational()?;
            saw_coef = true;
            if !self.eat('*') {
                return Ok((Q::zero(), coef));
            }
        }
        if !self.eat('t') {
            return Err(self.err(if saw_coef { "expected `t` after `*`" } else { "expected a term" }));
        }
        let e = if self.eat('^') { self.exponent()? } else { Q::one() };
        Ok((e, coef))
    }

    fn series(&mut self) -> Result<Series> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                false
            };
            let (e, c) = self.term()?;
            terms.push((e, if neg { -c } else { c }));
            first = false;
        }
        Ok(Series::from_terms(terms))
    }

    fn element(&mut self) -> Result<FieldElem> {
        if self.eat('(') {
            let num = self.series()?;
            if !self.eat(')') {
                return Err(self.err("expected `)`"));
            }
            if !self.eat('/') {
                return Ok(FieldElem::from_series(num));
            }
            if !self.eat('(') {
                return Err(self.err("expected `(` after `/`"));
            }
            let den = self.series()?;
            if !self.eat(')') {
                return Err(self.err("expected `)`"));
            }
            return FieldElem::fraction(num, den);
        }
        self.series().map(FieldElem::from_series)
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let out = p.series()?;
        if !p.done() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl FromStr for FieldElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let out = p.element()?;
        if !p.done() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

/// Dense matrix over the valued field, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

/// Largest size for which determinants use cofactor expansion over column
/// subsets instead of elimination.
const COFACTOR_LIMIT: usize = 6;

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(rows * cols, entries.len()));
        }
        Ok(FieldMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::dim(c, row.len()));
            }
            entries.extend(row);
        }
        FieldMatrix::new(r, c, entries)
    }

    pub fn from_columns(columns: Vec<Vec<FieldElem>>) -> Result<Self> {
        Ok(FieldMatrix::from_rows(columns)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, entries: vec![FieldElem::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FieldMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = FieldElem::one();
        }
        m
    }

    pub fn diagonal(diag: &[FieldElem]) -> Self {
        let n = diag.len();
        let mut m = FieldMatrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        FieldMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(self.cols, other.rows));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = FieldElem::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        FieldMatrix::new(self.rows, other.cols, entries)
    }

    pub fn apply(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if self.cols != v.len() {
            return Err(Error::dim(self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(FieldElem::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect())
    }

    pub fn scale(&self, z: &FieldElem) -> FieldMatrix {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * z).collect(),
        }
    }

    /// Multiplies column `j` by `z`.
    pub fn scale_column(&mut self, j: usize, z: &FieldElem) {
        for i in 0..self.rows {
            let v = self.get(i, j) * z;
            self.set(i, j, v);
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `col_dst += f · col_src`.
    pub fn add_column_multiple(&mut self, dst: usize, src: usize, f: &FieldElem) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst) + &(s * f);
                self.set(i, dst, v);
            }
        }
    }

    /// `row_dst += f · row_src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &FieldElem) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j) + &(s * f);
                self.set(dst, j, v);
            }
        }
    }

    fn square_dim(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::dim(self.rows, self.cols));
        }
        Ok(self.rows)
    }

    /// Determinant of the submatrix on the given rows and columns, by
    /// expansion over column subsets.
    fn subset_det(&self, rows: &[usize], cols: &[usize]) -> FieldElem {
        let k = rows.len();
        if k == 0 {
            return FieldElem::one();
        }
        // dp[mask] = det of rows[0..popcount(mask)] against the columns in mask
        let mut dp = vec![FieldElem::zero(); 1 << k];
        dp[0] = FieldElem::one();
        for mask in 0usize..(1 << k) {
            if dp[mask].is_zero() {
                continue;
            }
            let r = mask.count_ones() as usize;
            if r == k {
                continue;
            }
            for (c, &col) in cols.iter().enumerate().take(k) {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let a = self.get(rows[r], col);
                if a.is_zero() {
                    continue;
                }
                let mut term = &dp[mask] * a;
                // inversions against earlier rows that took a larger column
                if (mask >> c).count_ones() % 2 == 1 {
                    term = -&term;
                }
                let next = mask | (1 << c);
                dp[next] = &dp[next] + &term;
            }
        }
        dp[(1 << k) - 1].clone()
    }

    pub fn det(&self) -> Result<FieldElem> {
        let n = self.square_dim()?;
        if n <= COFACTOR_LIMIT {
            let idx: Vec<usize> = (0..n).collect();
            return Ok(self.subset_det(&idx, &idx));
        }
        let mut m = self.clone();
        let mut det = FieldElem::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(FieldElem::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = -&det;
            }
            let pivot = m.get(k, k).clone();
            det = &det * &pivot;
            for i in k + 1..n {
                let f = m.get(i, k).div(&pivot)?;
                m.add_row_multiple(i, k, &-&f);
            }
        }
        Ok(det)
    }

    /// Exact inverse: adjugate over the determinant for small sizes,
    /// Gauss-Jordan elimination otherwise.
    pub fn inverse(&self) -> Result<FieldMatrix> {
        let n = self.square_dim()?;
        if n < COFACTOR_LIMIT {
            let det = self.det()?;
            if det.is_zero() {
                return Err(Error::SingularMatrix);
            }
            let inv_det = det.inv()?;
            let mut out = FieldMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                    let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                    let mut c = self.subset_det(&rows, &cols);
                    if (i + j) % 2 == 1 {
                        c = -&c;
                    }
                    out.set(i, j, &c * &inv_det);
                }
            }
            return Ok(out);
        }
        let mut m = self.clone();
        let mut inv = FieldMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !m.get(i, k).is_zero()).ok_or(Error::SingularMatrix)?;
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pinv = m.get(k, k).inv()?;
            for j in 0..n {
                let a = m.get(k, j) * &pinv;
                m.set(k, j, a);
                let b = inv.get(k, j) * &pinv;
                inv.set(k, j, b);
            }
            for i in 0..n {
                if i != k && !m.get(i, k).is_zero() {
                    let f = -m.get(i, k);
                    m.add_row_multiple(i, k, &f);
                    inv.add_row_multiple(i, k, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self · c = w`.
    pub fn solve(&self, w: &[FieldElem]) -> Result<Vec<FieldElem>> {
        self.inverse()?.apply(w)
    }

    /// Entrywise `τ`.
    pub fn tropicalize(&self) -> TropMatrix {
        TropMatrix::new(self.rows, self.cols, self.entries.iter().map(FieldElem::tau).collect())
            .expect("same shape")
    }

    /// Largest `τ` over all entries.
    pub fn max_tau(&self) -> TropScalar {
        self.entries.iter().map(FieldElem::tau).max().unwrap_or(TropScalar::NegInf)
    }

    /// Whether every entry lies in the valuation ring.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(FieldElem::in_valuation_ring)
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Parses the shared row-major grammar with series-fraction entries.
impl FromStr for FieldMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| r.split(',').map(str::parse).collect::<Result<Vec<FieldElem>>>())
            .collect::<Result<Vec<_>>>()?;
        FieldMatrix::from_rows(rows)
    }
}

/// Entrywise tropicalization of a matrix.
pub fn tropicalize_matrix(a: &FieldMatrix) -> TropMatrix {
    a.tropicalize()
}

/// Entrywise tropicalization of a vector.
pub fn tropicalize_vector(v: &[FieldElem]) -> TropVector {
    TropVector::new(v.iter().map(FieldElem::tau).collect())
}

pub fn field_matrix_inverse(a: &FieldMatrix) -> Result<FieldMatrix> {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn s(src: &str) -> Series {
        src.parse().unwrap()
    }

    fn z(src: &str) -> FieldElem {
        src.parse().unwrap()
    }

    #[test]
    fn series_arithmetic() {
        let x = s("3*t^2 + t^5");
        assert_eq!(&Series::one() * &x, x);
        assert_eq!(&s("t + 2*t^3") + &s("-t"), s("2*t^3"));
        assert_eq!((&s("t + 2*t^3") + &s("-t")).tau(), TropScalar::int(-3));
        assert!((&x + &(-&x)).is_zero());
        assert_eq!(&s("1 + t") * &s("1 - t"), s("1 - t^2"));
        assert_eq!(x.tau(), TropScalar::int(-2));
        assert_eq!(Series::t_lambda(&q(3)).tau(), TropScalar::int(3));
    }

    #[test]
    fn literal_grammar() {
        assert_eq!(s("t^-1"), Series::monomial(q(1), q(-1)));
        assert_eq!(s("-1/2*t^(1/3)"), Series::monomial(qf(-1, 2), qf(1, 3)));
        assert_eq!(s("t^1/2"), Series::monomial(q(1), qf(1, 2)));
        assert_eq!(s("2 - t + 0*t^4"), Series::from_terms(vec![(q(0), q(2)), (q(1), q(-1))]));
        for bad in ["", "t^", "3*", "2t", "(1)/(0)", "1 + ", "x"] {
            assert!(bad.parse::<FieldElem>().is_err(), "{bad}");
        }
        for src in ["3*t^2 + t^5", "-t^-1/2 - 7/3", "(1)/(1 + t)", "(t^-1)/(2 + t)", "0"] {
            let e = z(src);
            assert_eq!(z(&e.to_string()), e, "{src} -> {e}");
        }
    }

    #[test]
    fn fractions_reduce() {
        let a = z("(1 - t^2)/(1 + t)");
        assert_eq!(a.to_string(), "1 - t");
        assert!(a.denominator().is_one());
        let b = z("(t)/(2*t + 2*t^2)");
        assert_eq!(b.to_string(), "(1/2)/(1 + t)");
        let c = z("(1 - t)/(1 - t^1/2)");
        assert_eq!(c, z("1 + t^1/2"));
    }

    #[test]
    fn field_division() {
        let a = z("3*t + t^3");
        assert!(a.div(&a).unwrap().is_one());
        let b = z("t").div(&z("1 + t")).unwrap();
        assert_eq!(b.tau(), TropScalar::int(-1));
        let c = FieldElem::one().div(&z("t^2")).unwrap();
        assert_eq!(c.tau(), TropScalar::int(2));
        assert_eq!(a.div(&FieldElem::zero()), Err(Error::DivisionByZero));
        let x = z("(1 + t)/(2 - t^3)");
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn tau_and_residue() {
        assert_eq!(tau(&FieldElem::zero()), TropScalar::NegInf);
        assert_eq!(tau(&z("3*t^2 + t^5")), TropScalar::int(-2));
        assert_eq!(residue(&z("5 + t")).unwrap(), Residue(q(5)));
        assert_eq!(residue(&z("t^3")).unwrap(), Residue(q(0)));
        assert_eq!(residue(&FieldElem::one()).unwrap(), Residue(q(1)));
        assert_eq!(residue(&z("(3 + t)/(2 + t)")).unwrap(), Residue(qf(3, 2)));
        assert!(matches!(residue(&z("t^-1")), Err(Error::NotInValuationRing(_))));
    }

    #[test]
    fn plus_tropicalization_cases() {
        assert!(plus_tropicalizes(&z("t"), &z("t^2")));
        assert!(!plus_tropicalizes(&z("t"), &z("-t")));
        assert!(plus_tropicalizes(&z("t"), &z("2*t")));
    }

    #[test]
    fn matrix_tropicalization() {
        assert_eq!(tropicalize_matrix(&FieldMatrix::identity(3)), TropMatrix::identity(3));
        let u: FieldMatrix = "1,1;0,1".parse().unwrap();
        assert_eq!(tropicalize_matrix(&u), "0,0;-inf,0".parse().unwrap());
        let d: FieldMatrix = "t^-1,0;0,t".parse().unwrap();
        assert_eq!(tropicalize_matrix(&d), "1,-inf;-inf,-1".parse().unwrap());
    }

    #[test]
    fn inverses_and_determinants() {
        let id = FieldMatrix::identity(3);
        assert_eq!(field_matrix_inverse(&id).unwrap(), id);
        let u: FieldMatrix = "1,1;0,1".parse().unwrap();
        assert_eq!(u.inverse().unwrap(), "1,-1;0,1".parse().unwrap());
        let d: FieldMatrix = "t,0;0,t^-1".parse().unwrap();
        let di = d.inverse().unwrap();
        assert_eq!(di, "t^-1,0;0,t".parse().unwrap());
        assert_eq!(d.mul(&di).unwrap(), FieldMatrix::identity(2));
        let sing: FieldMatrix = "1,t;1,t".parse().unwrap();
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
        let m: FieldMatrix = "1,t,0;2,1,t^2;0,1 + t,3".parse().unwrap();
        assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), FieldMatrix::identity(3));
        assert_eq!(m.det().unwrap(), z("3 - 6*t - t^2 - t^3"));
    }

    #[test]
    fn elimination_paths_agree_with_cofactors() {
        // 7x7 exercises elimination for both det and inverse
        let n = 7;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut r = Vec::new();
            for j in 0..n {
                let e = if i == j {
                    z("1 + t")
                } else if j == (i + 1) % n {
                    z("t^1/2")
                } else {
                    FieldElem::zero()
                };
                r.push(e);
            }
            rows.push(r);
        }
        let m = FieldMatrix::from_rows(rows).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FieldMatrix::identity(n));
        let idx: Vec<usize> = (0..n).collect();
        assert_eq!(m.det().unwrap(), m.subset_det(&idx, &idx));
    }
}
