//! Property tests for the valued field, lattices and spectra.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropbuild::building::{building_dist, chart, chart_transition, common_basis, lattice_scale, lattice_sum, Lattice};
use tropbuild::hahn::{plus_tropicalizes, FieldElem, FieldMatrix, Series};
use tropbuild::oracle::lattices_equal;
use tropbuild::random;
use tropbuild::rational::{q, qf};
use tropbuild::spectra::{char_poly, displacement, eigenvalue_valuations, translation_length, FieldPoly};
use tropbuild::trop::{TropScalar, TropVector};

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(((-6i64..=6), (-3i64..=3)), 1..=3)
        .prop_map(|terms| Series::from_terms(terms.into_iter().map(|(e, c)| (qf(e, 2), q(c))).collect()))
}

fn elem() -> impl Strategy<Value = FieldElem> {
    (series(), prop::option::weighted(0.3, series()))
        .prop_map(|(num, den)| match den {
            Some(d) if !d.is_zero() => FieldElem::fraction(num, d).unwrap(),
            _ => FieldElem::from_series(num),
        })
}

proptest! {
    #[test]
    fn literal_round_trip(z in elem()) {
        let text = z.to_string();
        prop_assert_eq!(text.parse::<FieldElem>().unwrap(), z);
    }

    #[test]
    fn tau_is_a_valuation(z in elem(), w in elem()) {
        prop_assert_eq!((&z * &w).tau(), z.tau().odot(&w.tau()));
        let sum = (&z + &w).tau();
        prop_assert!(sum <= z.tau().oplus(&w.tau()));
        if z.tau() != w.tau() {
            prop_assert!(plus_tropicalizes(&z, &w));
        }
    }

    #[test]
    fn field_operations(z in elem(), w in elem()) {
        prop_assert_eq!(&(&z + &w) - &w, z.clone());
        if !w.is_zero() {
            prop_assert_eq!((&z * &w).div(&w).unwrap(), z.clone());
        }
    }

    #[test]
    fn monomial_scaling(z in elem(), k in -4i64..=4) {
        let lambda = qf(k, 2);
        let scaled = z.mul_t_lambda(&lambda);
        prop_assert_eq!(scaled.tau(), z.tau().odot(&TropScalar::Finite(lambda)));
    }

    #[test]
    fn lattice_scaling_composes(seed in any::<u64>(), a in -4i64..=4, b in -4i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random::lattice(&mut rng, 2);
        let (x, y) = (TropScalar::Finite(qf(a, 2)), TropScalar::Finite(qf(b, 2)));
        let twice = lattice_scale(&x, &lattice_scale(&y, &l).unwrap()).unwrap();
        let once = lattice_scale(&x.odot(&y), &l).unwrap();
        prop_assert!(lattices_equal(&twice, &once).unwrap());
        prop_assert_eq!(building_dist(&l, &once).unwrap(), q(0));
    }

    #[test]
    fn lattice_text_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random::lattice(&mut rng, 2);
        prop_assert_eq!(l.to_string().parse::<Lattice>().unwrap(), l);
    }
}

fn elem_of(s: &str) -> FieldElem {
    s.parse().unwrap()
}

#[test]
fn lattice_membership_and_sums() {
    let std = Lattice::standard(2);
    assert!(std.member(&[elem_of("t"), FieldElem::one()]).unwrap());
    assert!(!std.member(&[elem_of("t^-1"), FieldElem::one()]).unwrap());
    let big: Lattice = "t^-1,0;0,1".parse().unwrap();
    assert_eq!(lattice_sum(&std, &big).unwrap(), big);
    assert_eq!(lattice_sum(&std, &std).unwrap(), std);
    let scaled = lattice_scale(&TropScalar::int(1), &std).unwrap();
    assert_eq!(scaled, "t^-1,0;0,t^-1".parse().unwrap());
}

#[test]
fn charts_and_transitions() {
    let id = FieldMatrix::identity(2);
    assert_eq!(chart(&id, &TropVector::from_ints(&[0, 0])).unwrap(), Lattice::standard(2));
    assert_eq!(chart(&id, &TropVector::from_ints(&[1, -1])).unwrap(), "t^-1,0;0,t".parse().unwrap());
    let swap: FieldMatrix = "0,1;1,0".parse().unwrap();
    let y = TropVector::from_ints(&[1, 2]);
    assert_eq!(chart_transition(&id, &swap, &y).unwrap(), Some(TropVector::from_ints(&[2, 1])));
    assert_eq!(chart_transition(&id, &id, &y).unwrap(), Some(y));
    let u: FieldMatrix = "1,1;0,1".parse().unwrap();
    assert_eq!(chart_transition(&id, &u, &TropVector::from_ints(&[1, 0])).unwrap(), Some(TropVector::from_ints(&[1, 0])));
    assert_eq!(chart_transition(&id, &u, &TropVector::from_ints(&[0, 1])).unwrap(), None);
}

#[test]
fn common_basis_of_diagonal_pair() {
    let m: Lattice = "t,0;0,t^-1".parse().unwrap();
    let cb = common_basis(&Lattice::standard(2), &m).unwrap();
    let mut taus: Vec<TropScalar> = cb.scalars.iter().map(FieldElem::tau).collect();
    taus.sort();
    assert_eq!(taus, vec![TropScalar::int(-1), TropScalar::int(1)]);
    assert_eq!(building_dist(&Lattice::standard(2), &m).unwrap(), q(2));
}

#[test]
fn spectra_examples() {
    let d: FieldMatrix = "t^-1,0;0,t".parse().unwrap();
    let expected = FieldPoly::new(vec![FieldElem::one(), -&elem_of("t + t^-1"), FieldElem::one()]);
    assert_eq!(char_poly(&d).unwrap(), expected);
    assert_eq!(eigenvalue_valuations(&d).unwrap(), vec![q(-1), q(1)]);
    assert_eq!(translation_length(&d).unwrap(), q(2));
    assert_eq!(displacement(&d, &Lattice::standard(2)).unwrap(), q(2));
    let u: FieldMatrix = "1,1;0,1".parse().unwrap();
    assert_eq!(displacement(&u, &Lattice::standard(2)).unwrap(), q(0));
    let tri: FieldMatrix = "1,1,1;0,t,1;0,0,t^2".parse().unwrap();
    assert_eq!(eigenvalue_valuations(&tri).unwrap(), vec![q(-2), q(-1), q(0)]);
    let companion = FieldPoly::new(vec![elem_of("3*t"), elem_of("t^-2"), FieldElem::int(-1), FieldElem::one()]);
    assert_eq!(char_poly(&companion.companion().unwrap()).unwrap(), companion);
}

#[test]
fn seeded_building_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let a = random::gl_f(&mut rng, 2);
        let l = random::lattice(&mut rng, 2);
        let m = random::lattice(&mut rng, 2);
        assert_eq!(building_dist(&l, &l.act(&a).unwrap()).unwrap(), displacement(&a, &l).unwrap());
        assert_eq!(
            building_dist(&l.act(&a).unwrap(), &m.act(&a).unwrap()).unwrap(),
            building_dist(&l, &m).unwrap()
        );
        assert!(translation_length(&a).unwrap() <= displacement(&a, &l).unwrap());
    }
}
