//! Real classification of quadrics, and the regulus through three skew
//! lines.

use incidence_workbench::geometry::ProjLine;
use incidence_workbench::poly::MultiPoly;
use incidence_workbench::surfaces::{classify_quadric, regulus_through};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = [
        "x^2 + y^2 + z^2 - 1",
        "z - x*y",
        "y - x^2",
        "x^2 + y^2 - z^2",
        "x^2 + y^2 - z^2 - 1",
        "x^2 - y^2",
    ];
    for text in catalog {
        let q = classify_quadric(&text.parse::<MultiPoly>()?)?;
        println!(
            "{text:<22} {:?}, rank {}, signature {:?}",
            q.kind, q.rank, q.signature
        );
    }

    let ruling = |a: i64| ProjLine::from_ints(&[a, 0, 0], &[0, 1, a]);
    let (l0, l1, l2) = (ruling(0)?, ruling(1)?, ruling(3)?);
    println!(
        "regulus through x = a, z = a*y for a = 0, 1, 3: {}",
        regulus_through([&l0, &l1, &l2])?
    );
    Ok(())
}
