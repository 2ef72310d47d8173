//! `qflow` command-line surface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 evaluation error. Diagnostics go to standard error.

pub mod table;
pub mod verify;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circulation::{circulation, make_circle, Contour};
use crate::error::Error;
use crate::geometry::{Point2D, Vec2};
use crate::kinematics::{self, NodeThreshold, DEFAULT_RELATIVE_NODE_THRESHOLD};
use crate::numerics::{curl_fd, divergence_fd, FieldSample, Grid2D, GridKind, Tolerances, DEFAULT_STEP};
use crate::potentials::{BranchCut, ComplexPotentialSpec};
use crate::states::StateSpec;

use table::{FieldTable, TableError};
use verify::{RunError, Source, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qflow", version, about = "Hydrodynamic fields of closed-form quantum states")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a field on a grid and write a CSV or JSON table.
    Field {
        #[arg(value_enum)]
        which: FieldKind,
        #[command(flatten)]
        common: Common,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Circulation around a circle or a JSON contour, printed as JSON.
    Circulation {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_pair, default_value = "0,0")]
        center: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 256)]
        n_points: usize,
        /// JSON contour `{"points": [[x, y], ...], "tangents": [...]}`; overrides the circle.
        #[arg(long)]
        contour: Option<String>,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Steps for the vorticity convergence fit.
        #[arg(long, value_delimiter = ',', default_value = "1e-2,3e-3,1e-3,3e-4,1e-4")]
        h_list: Vec<f64>,
        /// Radii of the origin-centred circles used by the quantization suite.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        radii: Vec<f64>,
        #[command(flatten)]
        tol: TolOverrides,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Rho,
    Current,
    Velocity,
    Phi,
    Psi,
    #[value(name = "W", alias = "w")]
    W,
    Vorticity,
    Divergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// State as a JSON file path or inline JSON.
    #[arg(long, conflicts_with = "potential", required_unless_present = "potential")]
    state: Option<String>,
    /// Complex potential as a JSON file path or inline JSON.
    #[arg(long)]
    potential: Option<String>,
    /// `cartesian:x0,x1,y0,y1,nx,ny`, `annulus:r0,r1,nr,nphi`, or grid JSON.
    #[arg(long)]
    grid: Option<String>,
    /// Finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    h: f64,
    /// Branch-cut angle of the vortex potential.
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    cut_angle: f64,
    /// Node threshold relative to the peak sampled density.
    #[arg(long, default_value_t = DEFAULT_RELATIVE_NODE_THRESHOLD)]
    eps_rel: f64,
    /// Half-width of the strips excluded around nodal lines.
    #[arg(long, default_value_t = 1e-2)]
    node_width: f64,
    /// Radius of the disk excluded around a vortex core; 10·h by default.
    #[arg(long)]
    core_radius: Option<f64>,
    /// Keep node and core neighbourhoods in the grid.
    #[arg(long)]
    no_exclude: bool,
}

#[derive(Debug, Args)]
struct TolOverrides {
    #[arg(long)]
    tol_vorticity: Option<f64>,
    #[arg(long)]
    tol_continuity: Option<f64>,
    #[arg(long)]
    tol_cauchy_riemann: Option<f64>,
    #[arg(long)]
    tol_consistency: Option<f64>,
    #[arg(long)]
    tol_quantization: Option<f64>,
    #[arg(long)]
    tol_spread: Option<f64>,
    #[arg(long)]
    tol_complement: Option<f64>,
    #[arg(long)]
    min_order: Option<f64>,
}

impl TolOverrides {
    fn apply(&self, mut t: Tolerances) -> Tolerances {
        let pairs = [
            (self.tol_vorticity, &mut t.vorticity),
            (self.tol_continuity, &mut t.continuity),
            (self.tol_cauchy_riemann, &mut t.cauchy_riemann),
            (self.tol_consistency, &mut t.consistency),
            (self.tol_quantization, &mut t.quantization),
            (self.tol_spread, &mut t.stokes_spread),
            (self.tol_complement, &mut t.complement),
            (self.min_order, &mut t.min_order),
        ];
        for (over, slot) in pairs {
            if let Some(v) = over {
                *slot = v;
            }
        }
        t
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Eval(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Eval(_) => EXIT_EVAL,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn eval(e: impl std::fmt::Display) -> CliError {
    CliError::Eval(e.to_string())
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Usage(m) => CliError::Usage(m),
            RunError::Eval(e) => eval(e),
        }
    }
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn read_json_arg(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))
    }
}

fn parse_grid(spec: &str) -> Result<Grid2D, CliError> {
    if spec.trim_start().starts_with('{') || spec.ends_with(".json") {
        let grid: Grid2D = serde_json::from_str(&read_json_arg(spec)?).map_err(|e| usage(format!("grid: {e}")))?;
        grid.validate().map_err(usage)?;
        return Ok(grid);
    }
    let (kind, nums) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("grid spec {spec:?} needs a `cartesian:` or `annulus:` prefix")))?;
    let fields: Vec<&str> = nums.split(',').map(str::trim).collect();
    let float = |i: usize| -> Result<f64, CliError> {
        fields[i].parse().map_err(|_| usage(format!("grid: bad number {:?}", fields[i])))
    };
    let count = |i: usize| -> Result<usize, CliError> {
        fields[i].parse().map_err(|_| usage(format!("grid: bad count {:?}", fields[i])))
    };
    let kind = match (kind, fields.len()) {
        ("cartesian", 6) => GridKind::Cartesian {
            x0: float(0)?,
            x1: float(1)?,
            y0: float(2)?,
            y1: float(3)?,
            nx: count(4)?,
            ny: count(5)?,
        },
        ("annulus", 4) => GridKind::PolarAnnulus { r0: float(0)?, r1: float(1)?, nr: count(2)?, nphi: count(3)? },
        _ => return Err(usage(format!("unrecognised grid spec {spec:?}"))),
    };
    Grid2D::new(kind).map_err(usage)
}

struct Setup {
    source: Source,
    grid: Grid2D,
    cut: BranchCut,
    h: f64,
    core_radius: f64,
    eps_rel: f64,
}

impl Setup {
    fn from_common(c: &Common) -> Result<Self, CliError> {
        let source = match (&c.state, &c.potential) {
            (Some(s), None) => {
                Source::State(StateSpec::from_json(&read_json_arg(s)?).map_err(|e| usage(format!("state: {e}")))?)
            }
            (None, Some(p)) => Source::Potential(
                ComplexPotentialSpec::from_json(&read_json_arg(p)?).map_err(|e| usage(format!("potential: {e}")))?,
            ),
            _ => return Err(usage("give exactly one of --state or --potential")),
        };
        if !(c.h > 0.0 && c.h.is_finite()) {
            return Err(usage("--h must be positive"));
        }
        if !(c.eps_rel > 0.0) {
            return Err(usage("--eps-rel must be positive"));
        }
        let core_radius = c.core_radius.unwrap_or(10.0 * c.h);
        let cut = BranchCut::new(c.cut_angle).map_err(usage)?;

        let mut grid = match &c.grid {
            Some(g) => parse_grid(g)?,
            None => match &source {
                Source::State(s) => s.default_grid(),
                Source::Potential(_) => Grid2D::annulus(0.5, 2.0, 32, 32).expect("valid default grid"),
            },
        };
        if !c.no_exclude {
            let extra = match &source {
                Source::State(s) => s.node_exclusions(c.node_width, core_radius),
                Source::Potential(p) if p.circulation_quantum() != 0.0 => {
                    vec![crate::numerics::Exclusion::Disk { center: Point2D::ORIGIN, radius: core_radius }]
                }
                Source::Potential(_) => Vec::new(),
            };
            grid = grid.with_exclusions(extra);
        }
        Ok(Self { source, grid, cut, h: c.h, core_radius, eps_rel: c.eps_rel })
    }

    /// Node threshold from the peak density over `grid`; potentials have no
    /// density, so any positive value works.
    fn threshold(&self, grid: &Grid2D) -> Result<NodeThreshold, CliError> {
        match &self.source {
            Source::State(s) => NodeThreshold::relative_to_peak(s, grid, self.eps_rel).map_err(eval),
            Source::Potential(_) => Ok(NodeThreshold { epsilon_rho: f64::MIN_POSITIVE }),
        }
    }

    fn velocity(&self, p: Point2D, th: NodeThreshold) -> crate::Result<FieldSample<Vec2>> {
        self.source.flow(self.core_radius).velocity(p, th)
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qflow: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Field { which, common, out, format } => cmd_field(&Setup::from_common(&common)?, which, out, format),
        Command::Circulation { common, center, radius, n_points, contour } => {
            cmd_circulation(&Setup::from_common(&common)?, center, radius, n_points, contour)
        }
        Command::Verify { suite, common, h_list, radii, tol } => {
            let setup = Setup::from_common(&common)?;
            let cfg = VerifyConfig {
                threshold: setup.threshold(&setup.grid)?,
                grid: setup.grid.clone(),
                h: setup.h,
                h_list,
                radii,
                cut: setup.cut,
                core_radius: setup.core_radius,
                tolerances: tol.apply(Tolerances::default()),
            };
            if cfg.radii.len() < 2 || cfg.radii.iter().any(|r| !(*r > 0.0)) {
                return Err(usage("--radii needs at least two positive radii"));
            }
            let report = verify::run(suite, &setup.source, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(eval)?);
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

/// Errors that leave a single row undefined instead of failing the command.
fn undefined_here(e: &Error) -> bool {
    matches!(
        e,
        Error::StencilHitsNode { .. }
            | Error::SingularPoint { .. }
            | Error::OriginEvaluation
            | Error::StencilCrossesCut { .. }
    )
}

fn cmd_field(setup: &Setup, which: FieldKind, out: Option<PathBuf>, format: Format) -> Result<i32, CliError> {
    let state = setup.source.state();
    if matches!(which, FieldKind::Rho | FieldKind::Current) && state.is_none() {
        return Err(usage("rho and current need a state, not a bare potential"));
    }
    let th = setup.threshold(&setup.grid)?;
    let potential = setup.source.potential();
    let h = setup.h;

    let value_columns: &[&str] = match which {
        FieldKind::Rho => &["rho"],
        FieldKind::Current => &["jx", "jy"],
        FieldKind::Velocity => &["vx", "vy"],
        FieldKind::Phi => &["phi"],
        FieldKind::Psi => &["psi"],
        FieldKind::W => &["phi", "psi"],
        FieldKind::Vorticity => &["vorticity"],
        FieldKind::Divergence => &["divergence"],
    };
    let polar = matches!(setup.grid.kind, GridKind::PolarAnnulus { .. });
    let coord_columns: &[&str] = if polar { &["r", "phi"] } else { &["x", "y"] };
    // a W table on an annulus would otherwise carry two `phi` columns
    let coord_columns: &[&str] =
        if polar && matches!(which, FieldKind::Phi | FieldKind::W) { &["r", "theta"] } else { coord_columns };

    let evaluate = |p: Point2D| -> crate::Result<FieldSample<Vec<f64>>> {
        let regular = |v: Vec<f64>| Ok(FieldSample::Regular(v));
        match which {
            FieldKind::Rho => {
                let rho = kinematics::density(state.unwrap(), p)?;
                regular(vec![rho])
            }
            FieldKind::Current => {
                let j = kinematics::current(state.unwrap(), p)?;
                regular(vec![j.x, j.y])
            }
            FieldKind::Velocity => Ok(setup.velocity(p, th)?.map(|v| vec![v.x, v.y])),
            FieldKind::Phi => regular(vec![potential.eval_phi_psi(p, setup.cut)?.0]),
            FieldKind::Psi => regular(vec![potential.eval_phi_psi(p, setup.cut)?.1]),
            FieldKind::W => {
                let (phi, psi) = potential.eval_phi_psi(p, setup.cut)?;
                regular(vec![phi, psi])
            }
            FieldKind::Vorticity => Ok(curl_fd(|q| setup.velocity(q, th), p, h)?.map(|w| vec![w])),
            FieldKind::Divergence => Ok(divergence_fd(|q| setup.velocity(q, th), p, h)?.map(|d| vec![d])),
        }
    };

    let rows = crate::numerics::sample_grid(&setup.grid, evaluate);
    let mut table = FieldTable::new(coord_columns.iter().chain(value_columns).copied());
    for row in rows {
        let coords = match row.at.polar {
            Some((r, phi)) => [r, phi],
            None => [row.at.point.x, row.at.point.y],
        };
        let mut values: Vec<Option<f64>> = coords.iter().copied().map(Some).collect();
        let singular = match row.value {
            Ok(FieldSample::Regular(v)) => {
                values.extend(v.into_iter().map(Some));
                false
            }
            Ok(FieldSample::Singular) => true,
            Err(e) if undefined_here(&e) => true,
            Err(e) => {
                return Err(eval(format!("at ({}, {}): {e}", row.at.point.x, row.at.point.y)));
            }
        };
        values.resize(coord_columns.len() + value_columns.len(), None);
        table.push(values, singular);
    }

    let sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(File::create(path).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    let name = value_columns.join("+");
    let written = match format {
        Format::Csv => table.write_csv(&mut sink),
        Format::Json => table.write_json(&name, &mut sink),
    }
    .and_then(|()| sink.flush().map_err(TableError::from));
    match written {
        // a reader that stops early (`| head`) is not an error
        Err(e) if is_broken_pipe(&e) => Ok(EXIT_OK),
        Err(e) => Err(eval(e)),
        Ok(()) => Ok(EXIT_OK),
    }
}

fn is_broken_pipe(e: &TableError) -> bool {
    let io = match e {
        TableError::Io(e) => Some(e),
        TableError::Csv(e) => match e.kind() {
            csv::ErrorKind::Io(e) => Some(e),
            _ => None,
        },
        TableError::Malformed(_) => None,
    };
    io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn cmd_circulation(
    setup: &Setup,
    center: (f64, f64),
    radius: f64,
    n_points: usize,
    contour: Option<String>,
) -> Result<i32, CliError> {
    let contour: Contour = match contour {
        Some(arg) => serde_json::from_str(&read_json_arg(&arg)?).map_err(|e| usage(format!("contour: {e}")))?,
        None => make_circle(center.into(), radius, n_points).map_err(usage)?,
    };
    let th = match &setup.source {
        Source::State(s) => {
            let peak = contour
                .points()
                .iter()
                .map(|&p| kinematics::density(s, p))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(eval)?
                .into_iter()
                .fold(0.0, f64::max);
            NodeThreshold::new(setup.eps_rel * peak).map_err(|_| eval("density vanishes on the whole contour"))?
        }
        Source::Potential(_) => NodeThreshold { epsilon_rho: f64::MIN_POSITIVE },
    };
    let result = circulation(setup.source.flow(setup.core_radius.min(1e-8)), &contour, th).map_err(eval)?;
    let doc = serde_json::json!({
        "gamma": result.gamma,
        "winding": result.winding,
        "quantum": result.quantum,
        "quantum_residual": result.quantum_residual,
        "n_points": contour.len(),
    });
    println!("{}", serde_json::to_string_pretty(&doc).map_err(eval)?);
    Ok(EXIT_OK)
}
