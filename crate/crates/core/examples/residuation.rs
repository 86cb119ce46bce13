//! Greatest preimages, image membership and inversion domains.
//!
//! Run with `cargo run -p tropbuild --example residuation`.

use tropbuild::residuation::{in_image, inversion_domain, preimage_unique, pseudo_inverse};
use tropbuild::trop::{TropMatrix, TropVector};

fn main() -> tropbuild::Result<()> {
    let a: TropMatrix = "0,2;1,0".parse()?;
    let y: TropVector = "0,0".parse()?;

    let x = pseudo_inverse(&a, &y)?;
    println!("A = {a}, y = {y}");
    println!("greatest x with A x <= y: {x}");
    println!("A x = {}", a.apply(&x)?);

    match in_image(&a, &y)? {
        Some(eps) => println!("y is in the image, witness columns {:?}", eps.columns()),
        None => println!("y is not in the image"),
    }
    println!("preimage unique: {}", preimage_unique(&a, &y)?);

    let flat: TropMatrix = "0,0;0,0".parse()?;
    let off: TropVector = "0,1".parse()?;
    println!("(0,1) in the image of {flat}: {}", in_image(&flat, &off)?.is_some());

    // tropicalizations of [[1,1],[0,1]] and its inverse
    let alpha: TropMatrix = "0,0;-inf,0".parse()?;
    let beta = alpha.clone();
    let d = inversion_domain(&alpha, &beta)?;
    println!("domain gram matrix: {}", d.gram());
    for p in ["1,0", "0,1", "2,2"] {
        let x: TropVector = p.parse()?;
        println!("  {x} in domain: {}", d.contains(&x)?);
    }
    Ok(())
}
