//! The flecnode polynomial and the ruledness test, on a quadric and on a
//! smooth cubic.

use incidence_workbench::flecnode::{
    cayley_salmon_test, flecnode_poly, lines_through_point_exist, RuledVerdict,
};
use incidence_workbench::geometry::AffPoint;
use incidence_workbench::poly::MultiPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["z - x*y", "x^2 + y^2 - z^2", "x^3 + y^3 + z^3 - 1"] {
        let f: MultiPoly = text.parse()?;
        let fl = flecnode_poly(&f)?;
        println!("{text}");
        for step in &fl.construction_log {
            println!(
                "  {:<30} degree {:>2}, {} terms",
                step.step, step.degree, step.terms
            );
        }
        match &cayley_salmon_test(&f, std::slice::from_ref(&f))?[0] {
            RuledVerdict::NotRuled {
                certificate,
                fl_value,
                ..
            } => {
                let p: Vec<String> = certificate.coords.iter().map(|c| c.to_string()).collect();
                println!("  not ruled: fl({}) = {fl_value}", p.join(", "));
            }
            RuledVerdict::RuledEvidence { fl_is_zero, .. } => {
                println!("  ruled (fl = 0: {fl_is_zero})")
            }
        }
    }

    // lines through a point of the saddle: exactly the two rulings
    let saddle: MultiPoly = "z - x*y".parse()?;
    let lines = lines_through_point_exist(&saddle, &AffPoint::from_ints(&[2, 3, 6]))?;
    println!(
        "lines through (2, 3, 6) on z = xy: {}",
        serde_json::to_string(&lines)?
    );
    Ok(())
}
