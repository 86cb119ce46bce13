//! Seeded generators for the property suites and examples. Values are kept
//! small (half-integer exponents in `[-2, 2]`, integer coefficients in
//! `[-3, 3]`) so exact arithmetic stays fast.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::building::Lattice;
use crate::hahn::{FieldElem, FieldMatrix, Series};
use crate::rational::{q, qf, Q};
use crate::trop::{ProjPoint, TropMatrix, TropScalar, TropVector};

/// Uniform on `{k / den : lo·den ≤ k ≤ hi·den}`.
pub fn grid_rational<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Q {
    qf(rng.gen_range(lo * den..=hi * den), den)
}

pub fn trop_scalar<R: Rng + ?Sized>(rng: &mut R, p_neginf: f64) -> TropScalar {
    if rng.gen_bool(p_neginf) {
        TropScalar::NegInf
    } else {
        TropScalar::Finite(grid_rational(rng, -3, 3, 2))
    }
}

/// Random vector that is not the zero vector.
pub fn trop_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, p_neginf: f64) -> TropVector {
    loop {
        let v = TropVector::new((0..n).map(|_| trop_scalar(rng, p_neginf)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn finite_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TropVector {
    trop_vector(rng, n, 0.0)
}

pub fn finite_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProjPoint {
    ProjPoint::new(&finite_vector(rng, n)).expect("finite vector")
}

/// Random `m × n` matrix whose columns each have a finite entry.
pub fn trop_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, p_neginf: f64) -> TropMatrix {
    let cols: Vec<TropVector> = (0..n).map(|_| trop_vector(rng, m, p_neginf)).collect();
    TropMatrix::from_columns(&cols).expect("consistent shape")
}

/// Matrix with entries drawn from `values` (where `None` is `-inf`) and no
/// empty column.
pub fn trop_matrix_from<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, values: &[Option<Q>]) -> TropMatrix {
    let pick = |rng: &mut R| match values.choose(rng).expect("nonempty value set") {
        Some(v) => TropScalar::Finite(v.clone()),
        None => TropScalar::NegInf,
    };
    let cols: Vec<TropVector> = (0..n)
        .map(|_| loop {
            let c = TropVector::new((0..m).map(|_| pick(rng)).collect());
            if !c.is_zero() {
                break c;
            }
        })
        .collect();
    TropMatrix::from_columns(&cols).expect("consistent shape")
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let c = rng.gen_range(1..=3);
    q(if rng.gen_bool(0.5) { c } else { -c })
}

/// Series with `1..=max_terms` terms and exponents in `[lo, hi]` (halves).
pub fn series_in<R: Rng + ?Sized>(rng: &mut R, max_terms: usize, lo: i64, hi: i64) -> Series {
    let k = rng.gen_range(1..=max_terms);
    Series::from_terms((0..k).map(|_| (grid_rational(rng, lo, hi, 2), coefficient(rng))).collect())
}

pub fn series<R: Rng + ?Sized>(rng: &mut R, max_terms: usize) -> Series {
    series_in(rng, max_terms, -2, 2)
}

/// Nonzero field element; one in five is a proper fraction.
pub fn field_elem<R: Rng + ?Sized>(rng: &mut R, max_terms: usize) -> FieldElem {
    loop {
        let num = series(rng, max_terms);
        if num.is_zero() {
            continue;
        }
        if rng.gen_bool(0.2) {
            let den = series_in(rng, 2, 0, 2);
            if !den.is_zero() {
                return FieldElem::fraction(num, den).expect("nonzero denominator");
            }
        }
        return FieldElem::from_series(num);
    }
}

/// Element of the valuation ring, possibly zero.
pub fn integral_elem<R: Rng + ?Sized>(rng: &mut R) -> FieldElem {
    if rng.gen_bool(0.15) {
        return FieldElem::zero();
    }
    FieldElem::from_series(series_in(rng, 2, 0, 2))
}

/// Entries with at most `max_terms` terms, a fifth of them zero.
pub fn field_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, max_terms: usize) -> FieldMatrix {
    let entries = (0..n * n)
        .map(|_| if rng.gen_bool(0.2) { FieldElem::zero() } else { field_elem(rng, max_terms) })
        .collect();
    FieldMatrix::new(n, n, entries).expect("square shape")
}

/// Random invertible matrix with series entries of at most two terms.
pub fn gl_f<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FieldMatrix {
    loop {
        let entries = (0..n * n)
            .map(|_| if rng.gen_bool(0.2) { FieldElem::zero() } else { FieldElem::from_series(series(rng, 2)) })
            .collect();
        let m = FieldMatrix::new(n, n, entries).expect("square shape");
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// Random element of `GL_n(O)`: integral entries and a unit determinant.
pub fn gl_o<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FieldMatrix {
    loop {
        let entries = (0..n * n).map(|_| integral_elem(rng)).collect();
        let m = FieldMatrix::new(n, n, entries).expect("square shape");
        if m.det().expect("square").is_unit_of_ring() {
            return m;
        }
    }
}

pub fn lattice<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Lattice {
    Lattice::new(gl_f(rng, n)).expect("invertible basis")
}

/// Monomial `c · t^e` with `e` a half-integer in `[lo, hi]`.
pub fn monomial<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> FieldElem {
    FieldElem::monomial(coefficient(rng), grid_rational(rng, lo, hi, 2))
}

/// Random element of `SL_2(F)`: either a product of elementary and diagonal
/// factors, or `[[a, b], [c, (1 + bc)/a]]` for random `a, b, c`.
pub fn sl2<R: Rng + ?Sized>(rng: &mut R) -> FieldMatrix {
    if rng.gen_bool(0.5) {
        let mut m = FieldMatrix::identity(2);
        for _ in 0..rng.gen_range(1..=3) {
            let x = field_elem(rng, 2);
            let factor = match rng.gen_range(0..3) {
                0 => FieldMatrix::from_rows(vec![vec![FieldElem::one(), x], vec![FieldElem::zero(), FieldElem::one()]]),
                1 => FieldMatrix::from_rows(vec![vec![FieldElem::one(), FieldElem::zero()], vec![x, FieldElem::one()]]),
                _ => {
                    let d = monomial(rng, -2, 2);
                    let di = d.inv().expect("nonzero monomial");
                    FieldMatrix::from_rows(vec![vec![d, FieldElem::zero()], vec![FieldElem::zero(), di]])
                }
            };
            m = m.mul(&factor.expect("2x2")).expect("2x2");
        }
        m
    } else {
        let a = field_elem(rng, 2);
        let b = if rng.gen_bool(0.2) { FieldElem::zero() } else { field_elem(rng, 2) };
        let c = if rng.gen_bool(0.2) { FieldElem::zero() } else { field_elem(rng, 2) };
        let d = (&FieldElem::one() + &(&b * &c)).div(&a).expect("nonzero a");
        FieldMatrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2")
    }
}

/// Invertible upper or lower triangular matrix.
pub fn triangular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FieldMatrix {
    let upper = rng.gen_bool(0.5);
    let mut m = FieldMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j || ((i < j) == upper && rng.gen_bool(0.7)) {
                field_elem(rng, 2)
            } else {
                FieldElem::zero()
            };
            m.set(i, j, v);
        }
    }
    m
}

/// `A = P · diag(monomials) · P⁻¹` together with `P`.
pub fn monomially_diagonalizable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (FieldMatrix, FieldMatrix) {
    let p = gl_f(rng, n);
    let d: Vec<FieldElem> = (0..n).map(|_| monomial(rng, -2, 2)).collect();
    let a = p
        .mul(&FieldMatrix::diagonal(&d))
        .and_then(|pd| pd.mul(&p.inverse()?))
        .expect("invertible P");
    (a, p)
}

