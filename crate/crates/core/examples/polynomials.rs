//! Exact multivariate polynomials: parsing, evaluation, derivatives,
//! square-free parts and resultants.

use incidence_workbench::poly::{rat, ratio, MultiPoly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f: MultiPoly = "z - x*y".parse()?;
    let p = [rat(2), ratio(3, 2), rat(3)];
    println!("f = {f}");
    println!("f(2, 3/2, 3) = {}", f.eval(&p)?);
    println!("df/dx = {}", f.partial_derivative("x")?);

    // Taylor expansion at p, one homogeneous piece per degree
    for (k, c) in f.taylor_components(&p)?.iter().enumerate() {
        println!("  degree {k}: {c}");
    }
    println!(
        "second directional form: {}",
        f.directional_derivative_form(2)?
    );

    let sq = &(&f * &f) * &"x + 1".parse::<MultiPoly>()?;
    println!(
        "square-free part of (z - xy)^2 (x + 1): {}",
        sq.square_free_part()?
    );

    let g: MultiPoly = "x^2 + y^2 - 1".parse()?;
    let h: MultiPoly = "x - y".parse()?;
    println!(
        "res_y(x^2 + y^2 - 1, x - y) = {}",
        g.sylvester_resultant(&h, "y")?
    );
    Ok(())
}
