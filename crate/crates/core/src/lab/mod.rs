//! Generated configurations, experiment runs and scaling tables.

mod families;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use families::pythagorean_directions;

use crate::flecnode::vanishes_on_line;
use crate::geometry::GeomError;
use crate::incidence::{
    count_incidences, derivative_chain_assign, lemma_suite, report, BoundName, BoundParams,
    ChainAssignment, Config, IncidenceError, IncidenceReport, LemmaOptions, LemmaReport,
};
use crate::poly::{rat, Rational};
use crate::surfaces::SurfaceError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("{family} needs size parameter `{name}`")]
    MissingSize { family: Family, name: &'static str },
    #[error("size `{what}` = {value} is invalid")]
    BadSize { what: &'static str, value: u64 },
    #[error("size `{what}` = {value} exceeds the limit {limit}")]
    SizeTooLarge {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("generated configuration fails its ground truth: {0}")]
    GroundTruth(String),
    #[error("a scaling report needs at least three sizes, got {0}")]
    TooFewSizes(usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    RegulusGrid,
    ParabolicCylinder,
    ConePythagorean,
    PlaneGridElekes,
    ProductSurface,
    #[serde(rename = "VARIETY_4D_XYZ")]
    Variety4dXyz,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::RegulusGrid,
        Family::ParabolicCylinder,
        Family::ConePythagorean,
        Family::PlaneGridElekes,
        Family::ProductSurface,
        Family::Variety4dXyz,
    ];

    fn tag(self) -> &'static str {
        match self {
            Family::RegulusGrid => "REGULUS_GRID",
            Family::ParabolicCylinder => "PARABOLIC_CYLINDER",
            Family::ConePythagorean => "CONE_PYTHAGOREAN",
            Family::PlaneGridElekes => "PLANE_GRID_ELEKES",
            Family::ProductSurface => "PRODUCT_SURFACE",
            Family::Variety4dXyz => "VARIETY_4D_XYZ",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Accepts `REGULUS_GRID` as well as `regulus-grid`.
impl FromStr for Family {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == norm)
            .ok_or_else(|| LabError::UnknownFamily(s.to_string()))
    }
}

/// A family with its size parameters. Which sizes are read depends on the
/// family: `g` for the grids, `n` lines and `m` sampled points for the
/// cylinder, cone and product, `a` and `b` for the planar grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorSpec {
            family,
            g: None,
            n: None,
            m: None,
            a: None,
            b: None,
            seed,
        }
    }

    /// The spec used for one row of a scaling table.
    pub fn with_size(family: Family, size: u64, seed: u64) -> Self {
        let mut s = GeneratorSpec::new(family, seed);
        match family {
            Family::RegulusGrid | Family::Variety4dXyz => s.g = Some(size),
            Family::ParabolicCylinder | Family::ConePythagorean | Family::ProductSurface => {
                s.n = Some(size)
            }
            Family::PlaneGridElekes => {
                s.a = Some(size);
                s.b = Some(size);
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub m: usize,
    pub n: usize,
    /// Known in closed form for every family except the product surface.
    #[serde(rename = "I", skip_serializing_if = "Option::is_none")]
    pub incidences: Option<u64>,
}

/// Builds the configuration and checks it against its ground truth: every
/// line lies on the surface, every point outside the planar grid lies on
/// some line, and the declared counts match.
pub fn gen(spec: &GeneratorSpec) -> Result<Config, LabError> {
    generate_checked(spec).map(|(c, _)| c)
}

pub fn generate_checked(spec: &GeneratorSpec) -> Result<(Config, GroundTruth), LabError> {
    let built = families::generate(spec)?;
    let (config, truth) = (built.config, built.truth);
    let surface = config.surface().expect("families carry a surface");
    if let Some(i) = config
        .lines()
        .iter()
        .position(|l| !vanishes_on_line(surface.f(), l))
    {
        return Err(LabError::GroundTruth(format!(
            "line {i} is not on the surface"
        )));
    }
    // the planar grid keeps its low corner points, which no line reaches
    let isolated_allowed = spec.family == Family::PlaneGridElekes;
    let lonely = config
        .points()
        .iter()
        .position(|p| !config.lines().iter().any(|l| l.contains(p)));
    if let Some(i) = lonely.filter(|_| !isolated_allowed) {
        return Err(LabError::GroundTruth(format!("point {i} is on no line")));
    }
    if config.m() != truth.m || config.n() != truth.n {
        return Err(LabError::GroundTruth("point or line count differs".into()));
    }
    if let Some(i) = truth.incidences {
        let got = count_incidences(&config);
        if got != i {
            return Err(LabError::GroundTruth(format!(
                "expected {i} incidences, counted {got}"
            )));
        }
    }
    Ok((config, truth))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Lemma,
    Bounds,
    Chain,
}

impl FromStr for Check {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lemma" | "lemmas" => Ok(Check::Lemma),
            "bounds" | "bound" => Ok(Check::Bounds),
            "chain" => Ok(Check::Chain),
            _ => Err(LabError::UnknownCheck(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub checks: Vec<Check>,
    pub bounds: Vec<(BoundName, Rational)>,
    pub q: Option<u64>,
    pub probes: usize,
    /// Variable for the derivative chain.
    pub chain_var: String,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            checks: vec![Check::Lemma, Check::Bounds],
            bounds: Vec::new(),
            q: None,
            probes: 100,
            chain_var: "x".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentResult {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spec: Option<GeneratorSpec>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ground_truth: Option<GroundTruth>,
    pub report: Option<IncidenceReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lemma: Option<LemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain: Option<ChainAssignment>,
    /// Checks that errored or failed, in the order they ran.
    pub failures: Vec<String>,
    /// Kept out of the JSON so that reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Generates the configuration for `spec` and runs the requested checks on
/// it. Failing checks are recorded in `failures`.
pub fn run_experiment(spec: &GeneratorSpec, opts: &RunOptions) -> ExperimentResult {
    let start = Instant::now();
    let mut result = match generate_checked(spec) {
        Ok((config, truth)) => {
            let mut r = run_config(&config, spec.seed, opts);
            r.ground_truth = Some(truth);
            r
        }
        Err(e) => ExperimentResult {
            spec: None,
            seed: spec.seed,
            ground_truth: None,
            report: None,
            lemma: None,
            chain: None,
            failures: vec![format!("gen: {e}")],
            elapsed: Duration::ZERO,
        },
    };
    result.spec = Some(spec.clone());
    result.elapsed = start.elapsed();
    result
}

/// Runs the requested checks on an existing configuration.
pub fn run_config(config: &Config, seed: u64, opts: &RunOptions) -> ExperimentResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let bounds: &[(BoundName, Rational)] = if opts.checks.contains(&Check::Bounds) {
        &opts.bounds
    } else {
        &[]
    };
    let extra = BoundParams {
        q: opts.q,
        ..Default::default()
    };
    let rep = match report(config, bounds, &extra) {
        Ok(r) => {
            for b in &r.bounds {
                match b.holds {
                    Some(false) => failures.push(format!(
                        "bounds: I exceeds {} at C = {}",
                        b.name, b.constant
                    )),
                    None => {
                        failures.push(format!("bounds: {} undecided at working precision", b.name))
                    }
                    Some(true) => {}
                }
            }
            Some(r)
        }
        Err(e) => {
            failures.push(format!("report: {e}"));
            None
        }
    };
    let lemma = if opts.checks.contains(&Check::Lemma) {
        let lopts = LemmaOptions {
            probes: opts.probes,
            seed,
        };
        match lemma_suite(config, &lopts) {
            Ok(l) => {
                if !l.passed {
                    failures.push("lemma: violations found".into());
                }
                Some(l)
            }
            Err(e) => {
                failures.push(format!("lemma: {e}"));
                None
            }
        }
    } else {
        None
    };
    let chain = if opts.checks.contains(&Check::Chain) {
        let f = config.surface().map(|s| s.f().clone());
        match f
            .ok_or(IncidenceError::NoSurface)
            .and_then(|f| derivative_chain_assign(&f, config, &opts.chain_var))
        {
            Ok(c) => {
                if !c.violations.is_empty() {
                    failures.push(format!("chain: {} violations", c.violations.len()));
                }
                Some(c)
            }
            Err(e) => {
                failures.push(format!("chain: {e}"));
                None
            }
        }
    } else {
        None
    };
    ExperimentResult {
        spec: None,
        seed,
        ground_truth: None,
        report: rep,
        lemma,
        chain,
        failures,
        elapsed: start.elapsed(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub family: Family,
    pub size: u64,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub s: usize,
    #[serde(rename = "I")]
    pub incidences: u64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trend {
    NonIncreasing,
    NonDecreasing,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub bound: BoundName,
    pub rows: Vec<ScaleRow>,
    pub trend: Trend,
    /// Whether `I ≤ bound` was certified on every row.
    pub all_hold: bool,
}

impl ScalingReport {
    pub fn to_csv(&self) -> Result<String, LabError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["family", "size", "m", "n", "D", "s", "I", "bound", "ratio"])
            .map_err(|e| LabError::Csv(e.to_string()))?;
        for r in &self.rows {
            w.write_record([
                r.family.to_string(),
                r.size.to_string(),
                r.m.to_string(),
                r.n.to_string(),
                r.d.to_string(),
                r.s.to_string(),
                r.incidences.to_string(),
                format!("{:.6}", r.bound),
                format!("{:.6}", r.ratio),
            ])
            .map_err(|e| LabError::Csv(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("ascii csv"))
    }
}

fn trend_of(ratios: &[f64]) -> Trend {
    if ratios.windows(2).all(|w| w[1] <= w[0]) {
        Trend::NonIncreasing
    } else if ratios.windows(2).all(|w| w[1] >= w[0]) {
        Trend::NonDecreasing
    } else {
        Trend::Mixed
    }
}

/// Counts and one bound per size. Sizes are independent and run on
/// separate threads; rows come back in the order of `sizes`.
pub fn scaling_report(
    family: Family,
    sizes: &[u64],
    bound: BoundName,
    c: &Rational,
    seed: u64,
) -> Result<ScalingReport, LabError> {
    if sizes.len() < 3 {
        return Err(LabError::TooFewSizes(sizes.len()));
    }
    let rows: Vec<Result<(ScaleRow, Option<bool>), LabError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = sizes
            .iter()
            .map(|&size| {
                scope.spawn(move || {
                    let config = gen(&GeneratorSpec::with_size(family, size, seed))?;
                    let rep = report(&config, &[(bound, c.clone())], &BoundParams::default())?;
                    let row = &rep.bounds[0];
                    Ok((
                        ScaleRow {
                            family,
                            size,
                            m: rep.m,
                            n: rep.n,
                            d: rep.degree.unwrap_or(0),
                            s: rep.s,
                            incidences: rep.incidences,
                            bound: row.value.midpoint_f64(),
                            ratio: row
                                .ratio
                                .as_ref()
                                .map(|r| r.midpoint_f64())
                                .unwrap_or(f64::INFINITY),
                        },
                        row.holds,
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scaling worker"))
            .collect()
    });
    let rows: Vec<(ScaleRow, Option<bool>)> = rows.into_iter().collect::<Result<_, _>>()?;
    let all_hold = rows.iter().all(|(_, h)| *h == Some(true));
    let rows: Vec<ScaleRow> = rows.into_iter().map(|(r, _)| r).collect();
    let trend = trend_of(&rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
    Ok(ScalingReport {
        bound,
        rows,
        trend,
        all_hold,
    })
}

/// Default constant for bound checks.
pub fn default_constant() -> Rational {
    rat(10)
}
