//! Command-line front end emitting CSV/JSON datasets for the double-layer
//! transfer matrices, squeezing sweeps, resonance-curve branches, region
//! classification, and the two-delta comb.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dlayer::error::Error;
use dlayer::resonance::{omega_curve, residual, trace_curve_with_tol, BaseSet};
use dlayer::scattering::{
    double_layer_closed_form, double_layer_product, ode_matrix, transmission,
    DoubleLayerPotential, TransferMatrix,
};
use dlayer::seba::{bound_state_energy, transition_classify, two_delta_matrix, TwoDeltaModel};
use dlayer::squeeze::{
    classify_region, epsilon_sweep_with_tol, limit_interaction_with_tol, resonance_residual,
    SqueezeSpec, REGION_TOL,
};

const EXIT_USAGE: u8 = 2;
const EXIT_REGION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "dlayer",
    version,
    about = "Datasets for double-layer transfer matrices, squeezing limits, and resonance curves"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual gate for resonance decisions and traced points
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Transfer matrix of a finite profile by three independent routes
    Matrix(MatrixArgs),
    /// Squeezing sweep of the realized profile toward its limit interaction
    Sweep(SweepArgs),
    /// Points of one resonance-curve branch
    Trace(TraceArgs),
    /// Region tag and limit interaction of a power triple
    Classify(ClassifyArgs),
    /// Two-delta comb matrix entries against the gap width
    Seba(SebaArgs),
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, allow_hyphen_values = true)]
    h1: f64,
    #[arg(long)]
    l1: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, allow_hyphen_values = true)]
    h2: f64,
    #[arg(long)]
    l2: f64,
    #[arg(long, allow_hyphen_values = true)]
    energy: f64,
    /// Integration step for the differential-equation route (default: automatic)
    #[arg(long, allow_hyphen_values = true)]
    step: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1: f64,
    #[arg(long, allow_hyphen_values = true)]
    a2: f64,
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = 0.0)]
    c0: f64,
    #[arg(long, allow_hyphen_values = true)]
    energy: f64,
    /// Decade range "A:B" (eps = 10^-A .. 10^-B) or "B" for 1..B
    #[arg(long)]
    eps_decades: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceRegion {
    Omega,
    B0,
    B1,
    B2,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, value_enum)]
    region: TraceRegion,
    #[arg(long)]
    branch: usize,
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1_max: f64,
    #[arg(long)]
    npts: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = 0.0)]
    c0: f64,
}

#[derive(Args)]
struct SebaArgs {
    #[arg(long, allow_hyphen_values = true)]
    a1: f64,
    #[arg(long, allow_hyphen_values = true)]
    a2: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    vartheta: f64,
    /// Decade range "A:B" (r = 10^-A .. 10^-B) or "B" for 1..B
    #[arg(long)]
    r_decades: String,
}

#[derive(Clone, Debug)]
enum Cell {
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) => match serde_json::Number::from_f64(*x) {
                Some(n) => serde_json::Value::Number(n),
                None => serde_json::Value::String(fmt_float(*x)),
            },
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// 17 significant digits: lossless f64 round trip.
fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    footers: Vec<(&'static str, Cell)>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new(), footers: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn footer(&mut self, key: &'static str, value: Cell) {
        self.footers.push((key, value));
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for (key, value) in &self.footers {
            out.push_str(&format!("# {key},{}\n", value.csv()));
        }
        out
    }

    fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (i, col) in self.columns.iter().enumerate() {
            let arr: Vec<serde_json::Value> = self.rows.iter().map(|r| r[i].json()).collect();
            map.insert((*col).to_string(), serde_json::Value::Array(arr));
        }
        for (key, value) in &self.footers {
            map.insert((*key).to_string(), value.json());
        }
        let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("tables serialize");
        out.push('\n');
        out
    }
}

fn parse_decades(s: &str) -> Result<Vec<f64>, Error> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i32>()
            .map_err(|_| Error::InvalidParameter(format!("bad decade value {t:?}")))
    };
    let (from, to) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => (1, parse(s)?),
    };
    if from < 1 || to < from || to > 300 {
        return Err(Error::InvalidParameter(format!(
            "decade range {s:?} must satisfy 1 <= A <= B <= 300"
        )));
    }
    Ok((from..=to).map(|k| 10f64.powi(-k)).collect())
}

fn matrix_cells(m: &TransferMatrix) -> [Cell; 4] {
    [Cell::Float(m.lam11), Cell::Float(m.lam12), Cell::Float(m.lam21), Cell::Float(m.lam22)]
}

fn cmd_matrix(a: &MatrixArgs) -> Result<Table, Error> {
    if !a.energy.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    let pot = DoubleLayerPotential::new(a.h1, a.l1, a.r, a.h2, a.l2)?;
    let closed = double_layer_closed_form(&pot, a.energy);
    let product = double_layer_product(&pot, a.energy);
    let mut min_seg = pot.l1.min(pot.l2);
    if pot.r > 0.0 {
        min_seg = min_seg.min(pot.r);
    }
    let step = a.step.unwrap_or_else(|| (min_seg / 10.0).min(pot.total_length() / 2000.0));
    let ode = ode_matrix(&pot, a.energy, step)?;

    let mut table = Table::new(vec![
        "path",
        "lam11",
        "lam12",
        "lam21",
        "lam22",
        "det",
        "transmission",
        "reflection",
        "delta_vs_closed",
    ]);
    for (name, m) in [("closed_form", closed), ("slab_product", product), ("ode", ode)] {
        let (t_cell, r_cell) = if a.energy > 0.0 {
            match transmission(&m, a.energy, pot.total_length()) {
                Ok(s) => (Cell::Float(s.transmission), Cell::Float(s.reflection)),
                Err(_) => (Cell::Empty, Cell::Empty),
            }
        } else {
            (Cell::Empty, Cell::Empty)
        };
        let [m11, m12, m21, m22] = matrix_cells(&m);
        table.push(vec![
            Cell::Text(name.to_string()),
            m11,
            m12,
            m21,
            m22,
            Cell::Float(m.det()),
            t_cell,
            r_cell,
            Cell::Float(m.entrywise_distance(&closed)),
        ]);
    }
    table.footer("ode_step", Cell::Float(step));
    Ok(table)
}

fn cmd_sweep(a: &SweepArgs, tol: f64) -> Result<Table, Error> {
    let spec = SqueezeSpec::new(a.mu, a.nu, a.tau, a.eta, a.a1, a.a2, a.c, a.c0)?;
    let eps = parse_decades(&a.eps_decades)?;
    let report = epsilon_sweep_with_tol(&spec, a.energy, &eps, tol)?;
    let region = if (a.mu - 1.0).abs() <= REGION_TOL {
        "delta-profile".to_string()
    } else {
        classify_region(a.mu, a.nu, a.tau)?.to_string()
    };
    let kind = report.target.to_string();

    let mut table = Table::new(vec![
        "eps", "lam11", "lam12", "lam21", "lam22", "err", "region", "limit_kind",
    ]);
    for (i, m) in report.matrices.iter().enumerate() {
        let [m11, m12, m21, m22] = matrix_cells(m);
        table.push(vec![
            Cell::Float(report.eps_values[i]),
            m11,
            m12,
            m21,
            m22,
            Cell::Float(report.errors_per_eps[i]),
            Cell::Text(region.clone()),
            Cell::Text(kind.clone()),
        ]);
    }
    table.footer("fitted_order", Cell::Float(report.fitted_order));
    table.footer("diverged", Cell::Text(report.diverged.to_string()));
    Ok(table)
}

fn cmd_trace(a: &TraceArgs, tol: f64) -> Result<Table, Error> {
    let mut table = Table::new(vec![
        "region", "branch", "c", "eta", "a1", "a2", "residual", "note",
    ]);
    // (a1, rank, cells) so solved points, characteristic rows, and skips merge
    // in a deterministic order
    let mut keyed: Vec<(f64, u8, Vec<Cell>)> = Vec::new();
    let tag = |a1: f64, a2: Cell, res: Cell, note: &str| -> Vec<Cell> {
        vec![
            Cell::Text(region_name(a.region).to_string()),
            Cell::Float(a.branch as f64),
            Cell::Float(a.c),
            Cell::Float(a.eta),
            Cell::Float(a1),
            a2,
            res,
            if note.is_empty() { Cell::Empty } else { Cell::Text(note.to_string()) },
        ]
    };

    match a.region {
        TraceRegion::Omega => {
            if a.npts < 2 || !(a.a1_min < a.a1_max) {
                return Err(Error::InvalidParameter(
                    "trace needs npts >= 2 and a1-min < a1-max".into(),
                ));
            }
            if a.c < 0.0 || a.eta <= 0.0 {
                return Err(Error::InvalidParameter("trace needs c >= 0 and eta > 0".into()));
            }
            if a.branch > 1 || (a.branch == 1 && a.c == 0.0) {
                eprintln!(
                    "warning: the open base set has branches 0 and 1 (one line when c = 0); \
                     branch {} is empty",
                    a.branch
                );
                return Ok(table);
            }
            let asymptote = if a.c > 0.0 { Some(-1.0 / a.c) } else { None };
            for i in 0..a.npts {
                let a1 =
                    a.a1_min + (a.a1_max - a.a1_min) * i as f64 / (a.npts - 1) as f64;
                if let Some(asym) = asymptote {
                    let in_branch = if a.branch == 0 { a1 > asym } else { a1 < asym };
                    if !in_branch {
                        keyed.push((a1, 2, tag(a1, Cell::Empty, Cell::Empty, "outside branch domain")));
                        continue;
                    }
                }
                if a1 == 0.0 {
                    keyed.push((a1, 1, tag(a1, Cell::Float(0.0), Cell::Empty, "origin")));
                    continue;
                }
                let a2 = omega_curve(a1, a.eta, a.c)?;
                let res = residual(BaseSet::Omega, a1, a2, a.eta, a.c)?;
                if res.abs() <= tol {
                    keyed.push((a1, 0, tag(a1, Cell::Float(a2), Cell::Float(res), "")));
                } else {
                    keyed.push((a1, 2, tag(a1, Cell::Float(a2), Cell::Float(res), "residual above tol")));
                }
            }
            if let Some(asym) = asymptote {
                if asym >= a.a1_min && asym <= a.a1_max {
                    keyed.push((
                        asym,
                        1,
                        tag(asym, Cell::Empty, Cell::Empty, "asymptote a1 = -1/c; a2 -> -1/(eta c)"),
                    ));
                }
            }
        }
        TraceRegion::B0 | TraceRegion::B1 | TraceRegion::B2 => {
            let set = match a.region {
                TraceRegion::B0 => BaseSet::B0,
                TraceRegion::B1 => BaseSet::B1,
                _ => BaseSet::B2,
            };
            let curve = trace_curve_with_tol(
                set,
                a.branch,
                a.eta,
                a.c,
                (a.a1_min, a.a1_max),
                a.npts,
                tol,
            )?;
            if curve.points.is_empty() {
                eprintln!(
                    "warning: branch {} of {} has no solved points in [{}, {}]",
                    a.branch, set, a.a1_min, a.a1_max
                );
            }
            for p in &curve.points {
                keyed.push((p.a1, 0, tag(p.a1, Cell::Float(p.a2), Cell::Float(p.residual), "")));
            }
            for p in &curve.characteristic {
                let res = p.residual.map_or(Cell::Empty, Cell::Float);
                keyed.push((p.a1, 1, tag(p.a1, Cell::Float(p.a2), res, &p.label)));
            }
            for (a1, reason) in &curve.skipped {
                keyed.push((*a1, 2, tag(*a1, Cell::Empty, Cell::Empty, reason)));
            }
        }
    }

    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    for (_, _, row) in keyed {
        table.push(row);
    }
    Ok(table)
}

fn region_name(region: TraceRegion) -> &'static str {
    match region {
        TraceRegion::Omega => "Omega",
        TraceRegion::B0 => "B0",
        TraceRegion::B1 => "B1",
        TraceRegion::B2 => "B2",
    }
}

fn cmd_classify(a: &ClassifyArgs, tol: f64) -> Result<Table, Error> {
    let delta_regime = (a.mu - 1.0).abs() <= REGION_TOL;
    let region = if delta_regime {
        "delta-profile".to_string()
    } else {
        classify_region(a.mu, a.nu, a.tau)?.to_string()
    };

    let mut table = Table::new(vec![
        "mu", "nu", "tau", "region", "limit_kind", "theta", "alpha", "residual",
    ]);
    let (kind, theta, alpha, res) = match (a.a1, a.a2) {
        (Some(a1), Some(a2)) => {
            let spec = SqueezeSpec::new(a.mu, a.nu, a.tau, a.eta, a1, a2, a.c, a.c0)?;
            match limit_interaction_with_tol(&spec, tol) {
                Ok(li) => {
                    let res = resonance_residual(&spec)?.map_or(Cell::Empty, Cell::Float);
                    (
                        Cell::Text(li.to_string()),
                        li.theta().map_or(Cell::Empty, Cell::Float),
                        li.alpha().map_or(Cell::Empty, Cell::Float),
                        res,
                    )
                }
                Err(Error::UnsupportedRegion { .. }) => {
                    (Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty)
                }
                Err(e) => return Err(e),
            }
        }
        (None, None) => (Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty),
        _ => {
            return Err(Error::InvalidParameter(
                "provide both --a1 and --a2, or neither".into(),
            ))
        }
    };
    table.push(vec![
        Cell::Float(a.mu),
        Cell::Float(a.nu),
        Cell::Float(a.tau),
        Cell::Text(region),
        kind,
        theta,
        alpha,
        res,
    ]);
    Ok(table)
}

fn cmd_seba(a: &SebaArgs) -> Result<Table, Error> {
    let regime = transition_classify(a.vartheta)?;
    let radii = parse_decades(&a.r_decades)?;
    let mut table = Table::new(vec!["r", "lam11", "lam12", "lam21", "lam22", "det"]);
    for r in radii {
        let model = TwoDeltaModel::new(a.a1, a.a2, a.c, a.vartheta, r)?;
        let m = two_delta_matrix(&model);
        let [m11, m12, m21, m22] = matrix_cells(&m);
        table.push(vec![Cell::Float(r), m11, m12, m21, m22, Cell::Float(m.det())]);
    }
    table.footer("classification", Cell::Text(regime.to_string()));
    if a.vartheta == 0.5 && a.a1 + a.a2 == 0.0 {
        let alpha = a.c * a.a1 * a.a2;
        if alpha < 0.0 {
            table.footer("bound_state_energy", Cell::Float(bound_state_energy(alpha)?));
        }
    }
    Ok(table)
}

fn run(cli: &Cli) -> Result<(), Error> {
    if !cli.tol.is_finite() || cli.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("--tol {} must be > 0", cli.tol)));
    }
    let table = match &cli.command {
        Command::Matrix(a) => cmd_matrix(a)?,
        Command::Sweep(a) => cmd_sweep(a, cli.tol)?,
        Command::Trace(a) => cmd_trace(a, cli.tol)?,
        Command::Classify(a) => cmd_classify(a, cli.tol)?,
        Command::Seba(a) => cmd_seba(a)?,
    };
    let rendered = table.render(cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedRegion { .. } => EXIT_REGION,
        Error::NoConvergence { .. } | Error::NoSignChange { .. } | Error::NotUnimodular { .. } => {
            EXIT_NUMERICAL
        }
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
