use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use incidence_workbench::flecnode::{cayley_salmon_test, flecnode_poly};
use incidence_workbench::incidence::{
    assign_components, derivative_chain_assign, max_coplanar_s, report, rich_points, BoundName,
    BoundParams, Config,
};
use incidence_workbench::json::rational_to_string;
use incidence_workbench::lab::{self, Check, Family, GeneratorSpec, RunOptions};
use incidence_workbench::poly::{parse_rational, MultiPoly, Rational};
use incidence_workbench::surfaces::classify_quadric;

#[derive(Parser)]
#[command(
    name = "incidence",
    version,
    about = "Exact point-line incidence workbench"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArg {
    /// Configuration JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Flecnode polynomial and per-factor ruledness verdicts.
    Flecnode {
        /// File holding the surface polynomial as text.
        #[arg(long)]
        surface: PathBuf,
        /// Files holding the factors; the surface itself when omitted.
        #[arg(long)]
        factor: Vec<PathBuf>,
    },
    /// Real classification of a quadric.
    Classify {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Incidence count, rich points and `s`.
    Count(ConfigArg),
    /// Points on at least `r` lines.
    Rich {
        #[command(flatten)]
        io: ConfigArg,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Largest number of lines in a common 2-flat.
    S(ConfigArg),
    /// First-containing-component assignment.
    Assign(ConfigArg),
    /// Derivative-chain assignment.
    Chain {
        #[command(flatten)]
        io: ConfigArg,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Evaluate bounds against the configuration.
    Bounds {
        #[command(flatten)]
        io: ConfigArg,
        /// Bound names, e.g. TH13A; repeat for several.
        #[arg(long = "name", required = true)]
        names: Vec<String>,
        #[arg(long = "C", default_value = "10")]
        c: String,
        #[arg(long)]
        q: Option<u64>,
        /// Degree to use when the configuration has no surface.
        #[arg(long = "D")]
        d: Option<u64>,
        /// Print CSV rows instead of the JSON report.
        #[arg(long)]
        csv: bool,
    },
    #[command(subcommand)]
    Lab(LabCmd),
}

#[derive(Subcommand)]
enum LabCmd {
    /// Generate a configuration.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run checks on a configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "lemma,bounds")]
        checks: Vec<String>,
        #[arg(long = "bound")]
        bounds: Vec<String>,
        #[arg(long = "C", default_value = "10")]
        c: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        probes: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bound ratios across sizes, as CSV.
    Scale {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<u64>,
        #[arg(long)]
        bound: String,
        #[arg(long = "C", default_value = "10")]
        c: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_poly(path: &Path) -> Result<MultiPoly> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.trim().parse()?)
}

fn read_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn emit_json(out: &Option<PathBuf>, v: &impl Serialize) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn constant(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

fn bound_list(names: &[String], c: &Rational) -> Result<Vec<(BoundName, Rational)>> {
    names
        .iter()
        .map(|n| Ok((n.parse::<BoundName>()?, c.clone())))
        .collect()
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Flecnode { surface, factor } => {
            let f = read_poly(&surface)?;
            let factors = if factor.is_empty() {
                vec![f.clone()]
            } else {
                factor.iter().map(|p| read_poly(p)).collect::<Result<_>>()?
            };
            let fl = flecnode_poly(&f)?;
            let verdicts = cayley_salmon_test(&f, &factors)?;
            emit_json(
                &None,
                &json!({ "fl": fl.fl.to_string(), "construction": fl, "verdicts": verdicts }),
            )?;
        }
        Cmd::Classify { surface } => {
            let f = read_poly(&surface)?;
            if f.total_degree() != 2 {
                bail!(
                    "classify handles quadrics only; got degree {}",
                    f.total_degree()
                );
            }
            emit_json(&None, &classify_quadric(&f)?)?;
        }
        Cmd::Count(io) => emit_json(
            &io.output,
            &report(&read_config(&io.config)?, &[], &BoundParams::default())?,
        )?,
        Cmd::Rich { io, r } => {
            if r < 2 {
                bail!("--r must be at least 2");
            }
            let rows: Vec<_> = rich_points(&read_config(&io.config)?, r)
                .into_iter()
                .map(|(p, d)| json!({ "point": p, "degree": d }))
                .collect();
            emit_json(&io.output, &rows)?;
        }
        Cmd::S(io) => emit_json(
            &io.output,
            &json!({ "s": max_coplanar_s(&read_config(&io.config)?) }),
        )?,
        Cmd::Assign(io) => {
            let a = assign_components(&read_config(&io.config)?)?;
            let ok = a.cross_incidences <= a.cross_bound;
            emit_json(&io.output, &a)?;
            return Ok(ok);
        }
        Cmd::Chain { io, var } => {
            let cfg = read_config(&io.config)?;
            let f = cfg
                .surface()
                .context("configuration has no surface")?
                .f()
                .clone();
            let c = derivative_chain_assign(&f, &cfg, &var)?;
            let ok = c.violations.is_empty();
            emit_json(&io.output, &c)?;
            return Ok(ok);
        }
        Cmd::Bounds {
            io,
            names,
            c,
            q,
            d,
            csv,
        } => {
            let cfg = read_config(&io.config)?;
            let bounds = bound_list(&names, &constant(&c)?)?;
            let extra = BoundParams {
                q,
                d,
                ..Default::default()
            };
            let rep = report(&cfg, &bounds, &extra)?;
            let ok = rep.bounds.iter().all(|b| b.holds == Some(true));
            if csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record([
                    "name", "C", "value_lo", "value_hi", "I", "ratio_hi", "holds",
                ])?;
                for b in &rep.bounds {
                    w.write_record([
                        b.name.to_string(),
                        rational_to_string(&b.constant),
                        rational_to_string(&b.value.lo),
                        rational_to_string(&b.value.hi),
                        rep.incidences.to_string(),
                        b.ratio
                            .as_ref()
                            .map(|r| format!("{:.6}", r.midpoint_f64()))
                            .unwrap_or_default(),
                        match b.holds {
                            Some(true) => "true",
                            Some(false) => "false",
                            None => "undecided",
                        }
                        .to_string(),
                    ])?;
                }
                emit(&io.output, String::from_utf8(w.into_inner()?)?.trim_end())?;
            } else {
                emit_json(&io.output, &rep)?;
            }
            return Ok(ok);
        }
        Cmd::Lab(cmd) => return run_lab(cmd),
    }
    Ok(true)
}

fn run_lab(cmd: LabCmd) -> Result<bool> {
    match cmd {
        LabCmd::Gen {
            family,
            g,
            n,
            m,
            a,
            b,
            seed,
            output,
        } => {
            let spec = GeneratorSpec {
                family: family.parse::<Family>()?,
                g,
                n,
                m,
                a,
                b,
                seed,
            };
            emit_json(&output, &lab::gen(&spec)?)?;
        }
        LabCmd::Run {
            config,
            checks,
            bounds,
            c,
            q,
            seed,
            probes,
            output,
        } => {
            let cfg = read_config(&config)?;
            let opts = RunOptions {
                checks: checks
                    .iter()
                    .map(|s| s.parse::<Check>())
                    .collect::<Result<_, _>>()?,
                bounds: bound_list(&bounds, &constant(&c)?)?,
                q,
                probes,
                ..Default::default()
            };
            let result = lab::run_config(&cfg, seed, &opts);
            eprintln!("elapsed: {:.3} s", result.elapsed.as_secs_f64());
            for f in &result.failures {
                eprintln!("failure: {f}");
            }
            emit(&output, &result.to_json())?;
            return Ok(result.passed());
        }
        LabCmd::Scale {
            family,
            sizes,
            bound,
            c,
            seed,
            output,
        } => {
            let rep = lab::scaling_report(
                family.parse()?,
                &sizes,
                bound.parse()?,
                &constant(&c)?,
                seed,
            )?;
            eprintln!(
                "trend: {:?}; bound certified on every row: {}",
                rep.trend, rep.all_hold
            );
            emit(&output, rep.to_csv()?.trim_end())?;
            return Ok(rep.all_hold);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
