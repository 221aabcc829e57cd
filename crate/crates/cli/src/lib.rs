//! The `polaris` command line. `run` does all the work and returns what `main` prints, so the
//! commands can be tested without spawning processes.

use clap::{Args, Parser, Subcommand};
use polaris_core::billiard::{morse_series, trajectory_table, unfold_enumerate, BilliardConfig};
use polaris_core::constructions::{
    bundle_lift, connected_sum_fixed_points, cover_expand, glue, quotient_descriptor, Cover, CutArc, QuotientDescriptor,
};
use polaris_core::coxeter::{develop, pi_consistency, section_invariants, DevelopOptions};
use polaris_core::groups::{Catalog, TorusHom};
use polaris_core::io::{load_catalog, read_json, to_json, write_json};
use polaris_core::polar_data::{validate, GammaSpec, PolarData};
use polaris_core::render::{render_billiard, render_data, render_development};
use polaris_core::torus_actions::{classify4, polar_data_from_sequence, validate_sequence, WeightSequence};
use polaris_core::{corpus, Error};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "polaris", version, about = "Polar action data: validation, invariants, constructions, billiards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CatalogArg {
    /// Group catalog JSON (default: $POLARIS_CATALOG, else the built-in catalog)
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DevelopArgs {
    /// Identification tolerance on matrix entries
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    /// Element budget for the development
    #[arg(long, default_value_t = 100_000)]
    max_elems: usize,
}

impl DevelopArgs {
    fn options(&self) -> DevelopOptions {
        DevelopOptions { max_elems: self.max_elems, tolerance: self.tolerance }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the compatibility conditions of a PolarData file
    Validate {
        file: PathBuf,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Curvature, area, Euler characteristic, genus and polar group consistency
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        develop: DevelopArgs,
    },
    /// Develop the reflection group of the chamber and dump it as a table
    Develop {
        file: PathBuf,
        #[command(flatten)]
        develop: DevelopArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a T² action on a simply connected 4-manifold from its slope sequence
    Classify {
        #[arg(long)]
        seq: PathBuf,
        /// Also write the polar data of the action
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Glue two chambers along cut arcs (JSON inline or as a file)
    Glue {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        arc_a: String,
        #[arg(long)]
        arc_b: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Connected sum at two fixed points
    ConnectSum {
        a: PathBuf,
        corner_a: String,
        b: PathBuf,
        corner_b: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Lift torus data to a principal T^r bundle
    Lift {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
        /// JSON object: vertex name -> homomorphism
        #[arg(long)]
        homs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Quotient by a group of chamber symmetries
    Quotient {
        file: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand a quotient descriptor back to its cover
    Cover {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Billiard trajectories from p to q with Morse indices
    Billiard {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        p: [f64; 2],
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        q: [f64; 2],
        #[arg(long)]
        lmax: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        codims: Vec<u32>,
        #[arg(long)]
        nu: Option<u32>,
        #[arg(long)]
        delta: Option<f64>,
        /// Print the Morse series summary after the table
        #[arg(long)]
        series: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// SVG of the chamber, or of its development when --radius is given
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Write the bundled example files into a directory
    Corpus { dir: PathBuf },
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Vec<f64> =
        parts.iter().map(|p| p.parse::<f64>().map_err(|e| format!("{p}: {e}"))).collect::<Result<_, _>>()?;
    match nums[..] {
        [x] => Ok([x, 0.0]),
        [x, y] => Ok([x, y]),
        _ => Err(format!("expected x or x,y, got `{s}`")),
    }
}

/// Exit code for a library error: unreadable input is a usage/IO error, the rest is bad data.
fn error_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::MalformedDescriptor(_) | Error::InvalidCatalog(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

fn fail(e: Error) -> CommandResult {
    CommandResult { code: error_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") }
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&Path>, mut report: String) -> polaris_core::Result<CommandResult> {
    match out {
        Some(path) => {
            write_json(path, value)?;
            writeln!(report, "wrote {}", path.display()).unwrap();
        }
        None => report.push_str(&to_json(value)),
    }
    Ok(CommandResult::ok(report))
}

fn arc(text: &str) -> polaris_core::Result<CutArc> {
    if text.trim_start().starts_with('{') {
        polaris_core::io::from_json(text)
    } else {
        read_json(Path::new(text))
    }
}

fn catalog(c: &CatalogArg) -> polaris_core::Result<Catalog> {
    load_catalog(c.catalog.as_deref())
}

pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CommandResult::ok(text)
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(fail)
}

fn dispatch(cmd: Command) -> polaris_core::Result<CommandResult> {
    match cmd {
        Command::Validate { file, catalog: c } => {
            let data: PolarData = read_json(&file)?;
            let report = validate(&data, &catalog(&c)?)?;
            let code = if report.is_valid() { EXIT_OK } else { EXIT_INVALID };
            Ok(CommandResult { code, stdout: format!("{report}\n"), stderr: String::new() })
        }
        Command::Invariants { file, develop: opts } => {
            let data: PolarData = read_json(&file)?;
            let inv = section_invariants(&data)?;
            let mut out = inv.to_string();
            let mut ok = inv.problems.is_empty();
            if data.chamber.dimension == 2 {
                let dev = develop(&data, &opts.options())?;
                let pc = pi_consistency(&data, &dev)?;
                ok &= pc.is_consistent();
                out.push_str(&pc.to_string());
            }
            Ok(CommandResult { code: if ok { EXIT_OK } else { EXIT_INVALID }, stdout: out, stderr: String::new() })
        }
        Command::Develop { file, develop: opts, out } => {
            let data: PolarData = read_json(&file)?;
            let dump = develop(&data, &opts.options())?.dump();
            match out {
                Some(path) => {
                    std::fs::write(&path, dump).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    Ok(CommandResult::ok(format!("wrote {}\n", path.display())))
                }
                None => Ok(CommandResult::ok(dump)),
            }
        }
        Command::Classify { seq, out } => {
            let seq: WeightSequence = read_json(&seq)?;
            let report = validate_sequence(&seq);
            if !report.is_valid() {
                return Ok(CommandResult { code: EXIT_INVALID, stdout: format!("{report}\n"), stderr: String::new() });
            }
            let text = classify4(&seq)?.to_string();
            match out {
                Some(path) => emit(&polar_data_from_sequence(&seq)?, Some(&path), text),
                None => Ok(CommandResult::ok(text)),
            }
        }
        Command::Glue { a, b, arc_a, arc_b, out, catalog: c } => {
            let (da, db): (PolarData, PolarData) = (read_json(&a)?, read_json(&b)?);
            let g = glue(&da, &arc(&arc_a)?, &db, &arc(&arc_b)?, &catalog(&c)?)?;
            emit(&g, out.as_deref(), String::new())
        }
        Command::ConnectSum { a, corner_a, b, corner_b, out, catalog: c } => {
            let (da, db): (PolarData, PolarData) = (read_json(&a)?, read_json(&b)?);
            let g = connected_sum_fixed_points(&da, &corner_a, &db, &corner_b, &catalog(&c)?)?;
            emit(&g, out.as_deref(), String::new())
        }
        Command::Lift { file, rank, homs, out, catalog: c } => {
            let data: PolarData = read_json(&file)?;
            let homs: BTreeMap<String, TorusHom> = read_json(&homs)?;
            let lift = bundle_lift(&data, rank, &homs, &catalog(&c)?)?;
            let mut report = String::new();
            for (v, free) in &lift.free {
                writeln!(report, "{v}: {}", if *free { "free" } else { "not free" }).unwrap();
            }
            emit(&lift.data, out.as_deref(), report)
        }
        Command::Quotient { file, gamma, out } => {
            let data: PolarData = read_json(&file)?;
            let gamma: GammaSpec = read_json(&gamma)?;
            emit(&quotient_descriptor(&data, &gamma)?, out.as_deref(), String::new())
        }
        Command::Cover { file, out } => {
            let q: QuotientDescriptor = read_json(&file)?;
            match cover_expand(&q)? {
                Cover::Coxeter(d) => emit(&d, out.as_deref(), String::new()),
                Cover::Exceptional(x) => emit(&x, out.as_deref(), "exceptional\n".into()),
            }
        }
        Command::Billiard { data, p, q, lmax, codims, nu, delta, series, svg } => {
            let d: PolarData = read_json(&data)?;
            let mut cfg = BilliardConfig::new(&d, p, q, lmax, codims)?;
            if let Some(nu) = nu {
                cfg = cfg.with_nu(nu);
            }
            if let Some(delta) = delta {
                cfg = cfg.with_delta(delta)?;
            }
            let e = unfold_enumerate(&cfg)?;
            let mut out = trajectory_table(&e, &cfg);
            if series {
                out.push_str(&morse_series(&e.trajectories, &cfg).to_string());
            }
            if let Some(path) = svg {
                let text = render_billiard(&cfg, &e.trajectories)?;
                std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let stderr = e.hint().map(|h| format!("{h}\n")).unwrap_or_default();
            Ok(CommandResult { code: EXIT_OK, stdout: out, stderr })
        }
        Command::Render { file, out, radius } => {
            let data: PolarData = read_json(&file)?;
            let svg = match radius {
                Some(r) => render_development(&data, r)?,
                None => render_data(&data)?,
            };
            std::fs::write(&out, svg).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            Ok(CommandResult::ok(format!("wrote {}\n", out.display())))
        }
        Command::Corpus { dir } => {
            std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            let mut report = String::new();
            for (name, text) in corpus::files()? {
                let path = dir.join(&name);
                std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                writeln!(report, "wrote {}", path.display()).unwrap();
            }
            Ok(CommandResult::ok(report))
        }
    }
}
