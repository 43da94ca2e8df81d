//! Projecting the four-dimensional family to three-space and comparing the
//! counts before and after.

use incidence_workbench::incidence::{count_incidences, max_coplanar_s};
use incidence_workbench::lab::{gen, Family, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = gen(&GeneratorSpec::with_size(Family::Variety4dXyz, 3, 0))?;
    println!(
        "in R^4: m = {}, n = {}, I = {}, s = {}",
        cfg.m(),
        cfg.n(),
        count_incidences(&cfg),
        max_coplanar_s(&cfg)
    );
    for seed in 0..3 {
        let (low, info) = cfg.project(3, seed, 50)?;
        let w: Vec<String> = info.ws[0].iter().map(|c| c.to_string()).collect();
        println!(
            "seed {seed}: w = ({}), attempts {}, I = {}, s = {}",
            w.join(", "),
            info.attempts,
            count_incidences(&low),
            max_coplanar_s(&low)
        );
    }
    Ok(())
}
