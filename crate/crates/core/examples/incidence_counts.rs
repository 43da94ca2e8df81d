//! Counting on a generated configuration: incidences, rich points, the
//! largest coplanar family and both component assignments.

use incidence_workbench::incidence::{
    assign_components, count_incidences, derivative_chain_assign, max_coplanar_s,
    rich_point_counts, tag_conical, IncidenceTag,
};
use incidence_workbench::lab::{gen, Family, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = GeneratorSpec::new(Family::ProductSurface, 3);
    spec.n = Some(10);
    let cfg = gen(&spec)?;
    let surface = cfg.surface().expect("generated configs carry a surface");
    println!("surface {} of degree {}", surface.f(), surface.degree());
    println!(
        "m = {}, n = {}, I = {}",
        cfg.m(),
        cfg.n(),
        count_incidences(&cfg)
    );
    println!("points by number of lines: {:?}", rich_point_counts(&cfg));
    println!("s = {}", max_coplanar_s(&cfg));

    let conical = tag_conical(&cfg)
        .iter()
        .filter(|t| t.tag == IncidenceTag::Conical)
        .count();
    println!("conical incidences: {conical}");

    let a = assign_components(&cfg)?;
    println!(
        "lines per factor {:?}, cross incidences {} (at most {})",
        a.lines_per_component, a.cross_incidences, a.cross_bound
    );

    let chain = derivative_chain_assign(surface.f(), &cfg, "y")?;
    println!(
        "chain in y has {} members, {} violations",
        chain.chain.len(),
        chain.violations.len()
    );
    Ok(())
}
