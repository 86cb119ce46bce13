//! Translation lengths of words in a representation read from a generators
//! file, with the Newton polygons behind them.
//!
//! `cargo run -p tropbuild --example length_spectrum [generators] [words...]`

use std::env;
use std::fs;

use tropbuild::hahn::FieldMatrix;
use tropbuild::spectra::{char_poly, length_spectrum, NewtonPolygon, Representation};

const DEFAULT_GENERATORS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/sl2.gens");

fn load(path: &str) -> tropbuild::Result<Representation> {
    let text = fs::read_to_string(path).map_err(|e| tropbuild::Error::Parse(format!("{path}: {e}")))?;
    let mut gens = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (name, matrix) = line
            .split_once('=')
            .ok_or_else(|| tropbuild::Error::Parse(format!("expected `name = matrix`, got `{line}`")))?;
        gens.push((name.trim().to_string(), matrix.trim().parse::<FieldMatrix>()?));
    }
    Representation::new(gens)
}

fn main() -> tropbuild::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let path = args.first().map_or(DEFAULT_GENERATORS, String::as_str);
    let rho = load(path)?;
    let mut words: Vec<&str> = args.iter().skip(1).map(String::as_str).collect();
    if words.is_empty() {
        words = vec!["", "a", "b", "ab", "aab", "ab'", "bab'a'"];
    }

    for (word, len) in length_spectrum(&rho, &words)? {
        let shown = if word.is_empty() { "1" } else { word.as_str() };
        println!("{shown:>8}  l = {len}");
    }

    let g = rho.evaluate_word("ab")?;
    let p = char_poly(&g)?;
    let polygon = NewtonPolygon::new(&p);
    println!("char poly of ab: {p}");
    println!("eigenvalue tau values: {:?}", polygon.slope_multiset().iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
