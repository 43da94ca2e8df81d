//! The probe-line, pruning and rich-point checks on the catalog surfaces.

use incidence_workbench::incidence::{lemma_suite, LemmaOptions};
use incidence_workbench::lab::{gen, Family, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let families = [
        Family::ParabolicCylinder,
        Family::ConePythagorean,
        Family::ProductSurface,
        Family::RegulusGrid,
    ];
    for family in families {
        let cfg = gen(&GeneratorSpec::with_size(family, 12, 0))?;
        let r = lemma_suite(&cfg, &LemmaOptions::default())?;
        println!("{family}");
        match &r.generator_sums {
            Some(p) => println!(
                "  probes: {} ({} contained), max sum {} vs D = {}",
                p.probes, p.contained_probes, p.max_sum, p.degree
            ),
            None => println!("  probes: skipped, no closed-form generators"),
        }
        let l = &r.pruning;
        println!(
            "  pruning: {} of {} points kept, max degree {} vs {}",
            l.surviving_points,
            l.surviving_points + l.pruned_points,
            l.max_degree,
            l.bound
        );
        match &r.rich.excluded_because {
            Some(why) => println!("  2-rich: not applicable, {why}"),
            None => println!("  2-rich: {} <= {}", r.rich.count, r.rich.bound),
        }
        println!("  passed: {}", r.passed);
    }
    Ok(())
}
