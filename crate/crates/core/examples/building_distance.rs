//! Common bases, the building metric and the displacement formula on
//! seeded random lattices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropbuild::building::{building_dist, common_basis, Lattice};
use tropbuild::random;
use tropbuild::spectra::displacement;

fn main() -> tropbuild::Result<()> {
    let m: Lattice = "t,0;0,t^-1".parse()?;
    let cb = common_basis(&Lattice::standard(2), &m)?;
    println!("common basis {} with scalars {:?}", cb.basis, cb.scalars.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("d(O^2, {m}) = {}", building_dist(&Lattice::standard(2), &m)?);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let a = random::gl_f(&mut rng, 3);
        let l = random::lattice(&mut rng, 3);
        let moved = l.act(&a)?;
        println!("A = {a}");
        println!("  d(L, A L) = {}, displacement = {}", building_dist(&l, &moved)?, displacement(&a, &l)?);
    }
    Ok(())
}
