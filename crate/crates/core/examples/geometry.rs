//! Lines in three-space: Plücker coordinates, line-plane intersections and
//! coplanarity.

use incidence_workbench::geometry::{
    klein_form, line_from_points, line_intersection, line_plane_intersection, lines_coplanar,
    span_2flat, AffPoint, HyperplaneH, ProjLine,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = line_from_points(
        &AffPoint::from_ints(&[0, 0, 0]),
        &AffPoint::from_ints(&[1, 2, 3]),
    )?;
    let pl = a.plucker().expect("three-space line");
    let shown: Vec<String> = pl.iter().map(|c| c.to_string()).collect();
    println!("Plücker coordinates: ({})", shown.join(", "));
    println!("Klein form: {}", klein_form(pl));

    let plane = HyperplaneH::from_ints(&[-2, 0, 0, 1])?; // z = 2
    let hit = line_plane_intersection(&a, &plane)?;
    println!(
        "meets z = 2 at {:?}",
        hit.to_affine()
            .map(|p| p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    );

    let b = ProjLine::from_ints(&[1, 2, 3], &[1, 0, 0])?;
    let c = ProjLine::from_ints(&[0, 1, 0], &[0, 0, 1])?;
    println!("a, b coplanar: {}", lines_coplanar(&a, &b)?);
    println!("a, c coplanar: {}", lines_coplanar(&a, &c)?);
    if let Some(p) = line_intersection(&a, &b) {
        println!(
            "a meets b at {:?}",
            p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        );
    }
    let flat = span_2flat(&a, &b)?;
    println!(
        "their plane contains both: {}",
        flat.contains_line(&a) && flat.contains_line(&b)
    );
    Ok(())
}
