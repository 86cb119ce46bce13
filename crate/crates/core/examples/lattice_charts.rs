//! Lattices over the valuation ring and the tropical charts between them.

use tropbuild::building::{chart, chart_transition, lattice_scale, lattice_sum, Lattice};
use tropbuild::hahn::FieldMatrix;
use tropbuild::trop::{TropScalar, TropVector};

fn main() -> tropbuild::Result<()> {
    let std = Lattice::standard(2);
    let wide: Lattice = "t^-1,0;0,1".parse()?;
    println!("O^2 + {wide} = {}", lattice_sum(&std, &wide)?);
    println!("1 . O^2 = {}", lattice_scale(&TropScalar::int(1), &std)?);

    let id = FieldMatrix::identity(2);
    let y = TropVector::from_ints(&[1, -1]);
    println!("chart(Id, {y}) = {}", chart(&id, &y)?);

    let u: FieldMatrix = "1,1;0,1".parse()?;
    for p in [[1, 0], [3, 1], [0, 1]] {
        let y = TropVector::from_ints(&p);
        match chart_transition(&id, &u, &y)? {
            Some(x) => println!("chart(Id, {y}) = chart(U, {x})"),
            None => println!("chart(Id, {y}) is not in the image of the chart of U"),
        }
    }
    Ok(())
}
