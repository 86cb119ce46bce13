//! Distances, segments and geodesics in tropical projective space.

use tropbuild::metric::{cross_ratio, dist, extremal_points, geodesic_eval, segment};
use tropbuild::rational::qf;
use tropbuild::trop::{ProjPoint, TropMatrix};

fn main() -> tropbuild::Result<()> {
    let x: ProjPoint = "0,0,0".parse()?;
    let y: ProjPoint = "3,1,0".parse()?;
    println!("d({x}, {y}) = {}", dist(&x, &y)?);

    let s = segment(x.rep(), y.rep())?;
    let (x0, y0) = s.inner_endpoints();
    println!("segment map {} with inner endpoints {x0} and {y0}", s.map());
    println!("length {}", s.length());

    for k in 0..=4 {
        let t = qf(k, 4);
        let c = geodesic_eval(&s, &t)?;
        println!("  C({t}) = {c}   d(x, C) = {}", dist(&x, &c)?);
    }

    let edge: ProjPoint = "0,-inf".parse()?;
    let inner: ProjPoint = "0,0".parse()?;
    println!("d({edge}, {inner}) = {}", dist(&edge, &inner)?);

    let b: ProjPoint = "0,0".parse()?;
    let c: ProjPoint = "2,0".parse()?;
    println!("cross ratio of {b} and {c}: {}", cross_ratio(&b, &c)?);

    let a: TropMatrix = "0,1,-1;2,0,1;-1,3,0".parse()?;
    for (i, h) in extremal_points(&a)?.iter().enumerate() {
        println!("  h_{i} = {h}");
    }
    Ok(())
}
