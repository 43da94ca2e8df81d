//! A scaling table and a full experiment report.

use incidence_workbench::incidence::BoundName;
use incidence_workbench::lab::{
    default_constant, run_experiment, scaling_report, Check, Family, GeneratorSpec, RunOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = scaling_report(
        Family::RegulusGrid,
        &[4, 8, 16, 32],
        BoundName::Th13a,
        &default_constant(),
        0,
    )?;
    print!("{}", table.to_csv()?);
    println!(
        "trend {:?}, certified everywhere: {}",
        table.trend, table.all_hold
    );

    let spec = GeneratorSpec::with_size(Family::ConePythagorean, 8, 1);
    let opts = RunOptions {
        checks: vec![Check::Lemma, Check::Bounds, Check::Chain],
        bounds: vec![(BoundName::Th13a, default_constant())],
        ..Default::default()
    };
    let result = run_experiment(&spec, &opts);
    println!("{}", result.to_json());
    println!("passed: {} in {:?}", result.passed(), result.elapsed);
    Ok(())
}
