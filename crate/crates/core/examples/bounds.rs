//! Every bound at one parameter set. Values are exact rational intervals.

use incidence_workbench::incidence::{bound_eval, BoundName, BoundParams};
use incidence_workbench::poly::rat;
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BoundParams {
        m: Some(1000),
        n: Some(200),
        d: Some(3),
        s: Some(10),
        q: Some(5),
    };
    let c = rat(1);
    println!("{:<9} {:>16} {:>12}", "bound", "value", "rel. width");
    for name in BoundName::ALL {
        let v = bound_eval(name, &params, &c)?;
        let mid = v.midpoint_f64();
        let rel = v.width().to_f64().unwrap_or(f64::NAN) / mid;
        println!("{:<9} {:>16.3} {:>12.2e}", name.to_string(), mid, rel);
    }
    let v = bound_eval(BoundName::Th13a, &params, &c)?;
    println!(
        "TH13A at C = 1 is at least 2000: {:?}",
        v.compare_at_least(2000)
    );
    Ok(())
}
