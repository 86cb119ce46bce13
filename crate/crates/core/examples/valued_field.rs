//! Exact arithmetic in the field of generalized power series with rational
//! exponents, and the tropicalization map.

use tropbuild::hahn::{plus_tropicalizes, residue, FieldElem, FieldMatrix};

fn main() -> tropbuild::Result<()> {
    let z: FieldElem = "3*t^2 + t^5".parse()?;
    let w: FieldElem = "(1 - t^2)/(1 + t)".parse()?;
    println!("z = {z}, tau(z) = {}", z.tau());
    println!("w = {w}");
    println!("z * w = {}", &z * &w);
    println!("1 / (1 + t) = {}", "1 + t".parse::<FieldElem>()?.inv()?);

    let u: FieldElem = "2 + t^(1/2)".parse()?;
    println!("residue of {u}: {}", residue(&u)?.0);

    // equal tau, leading terms cancel: tau(z + w) drops below the max
    let a: FieldElem = "t^-1 + 1".parse()?;
    let b: FieldElem = "-t^-1 + t".parse()?;
    println!("tau({a}) = {}, tau({b}) = {}", a.tau(), b.tau());
    println!("tau(sum) = {}, plus tropicalizes: {}", (&a + &b).tau(), plus_tropicalizes(&a, &b));

    let m: FieldMatrix = "1,t;t^-1,3".parse()?;
    println!("det {m} = {}", m.det()?);
    println!("tropicalization: {}", m.tropicalize());
    Ok(())
}
