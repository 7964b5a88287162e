use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use polylimit::developing::{assemble_connection, develop_boundary, CONVENTION};
use polylimit::experiments::{
    gb_check, gh_check, limit_c, polygon_limit, tits_tiling, GhCheckConfig, PolygonLimitConfig,
};
use polylimit::io;
use polylimit::polygon::projectivize;
use polylimit::reflection::{conic_fit, CoxeterData};
use polylimit::wang::{solve, RadialGrid, SolverConfig};
use polylimit::{CubicDifferential, Error};

/// Convex projective domains from cubic differentials and triangle groups.
#[derive(Parser, Debug)]
#[command(name = "polylimit", version)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "POLYLIMIT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Omit timestamps so that every artifact is byte-identical across runs.
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Solve the radial vortex equation for ψ = zⁿdz³ on B(0, r).
    WangSolve(WangArgs),
    /// Develop the circle of radius ρ and write its image.
    Develop(DevelopArgs),
    /// Developing images over several radii against the largest one.
    PolygonLimit(PolygonLimitArgs),
    /// Enumerate a triangle-group tiling of the Tits domain.
    TitsTile(TileArgs),
    /// Gauss–Bonnet on random disk patches of a tiling.
    GbCheck(GbArgs),
    /// Distances of normalized Tits domains to regular polygons.
    LimitC(LimitCArgs),
    /// Distance-matrix discrepancy between solutions at r and 2r.
    GhCheck(GhArgs),
}

#[derive(Args, Debug, Serialize)]
struct WangArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 512)]
    m: usize,
    /// Solve the ψ = 0 problem instead.
    #[arg(long)]
    zero_mode: bool,
}

#[derive(Args, Debug, Serialize)]
struct DevelopArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 720)]
    k: usize,
    #[arg(long, default_value_t = 2048)]
    m: usize,
}

#[derive(Args, Debug, Serialize)]
struct PolygonLimitArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    r_list: Vec<f64>,
    /// Radial nodes per unit length.
    #[arg(long, default_value_t = 256.0)]
    nodes_per_unit: f64,
    #[arg(long, default_value_t = 720)]
    samples: usize,
    /// Turn angle above which a boundary stretch counts as a vertex.
    #[arg(long, default_value_t = 10.0)]
    angle_deg: f64,
    /// Skip the two-grid extrapolation.
    #[arg(long)]
    no_extrapolate: bool,
}

#[derive(Args, Debug, Serialize)]
struct TileArgs {
    a: u32,
    b: u32,
    c: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, default_value_t = 8)]
    depth: usize,
}

#[derive(Args, Debug, Serialize)]
struct GbArgs {
    a: u32,
    b: u32,
    c: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 100)]
    patches: usize,
    /// Largest number of tiles per patch.
    #[arg(long, default_value_t = 40)]
    patch_size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct LimitCArgs {
    a: u32,
    b: u32,
    c: u32,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1,2,3,4",
        allow_negative_numbers = true
    )]
    s_list: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    depth: usize,
}

#[derive(Args, Debug, Serialize)]
struct GhArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    r_list: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0.05)]
    spacing: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

struct Output {
    dir: PathBuf,
    timestamp: Option<String>,
    written: Vec<String>,
}

impl Output {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), String> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| format!("writing {}: {e}", path.display()))?;
        self.written.push(path.display().to_string());
        Ok(())
    }

    fn write_json(&mut self, name: &str, v: &Value) -> Result<(), String> {
        self.write(
            name,
            &(serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"),
        )
    }
}

enum Failure {
    Usage(String),
    Numerical(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) => Failure::Usage(m),
            other => Failure::Numerical(
                json!({ "error": other.to_string(), "kind": format!("{other:?}") }),
            ),
        }
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Numerical(json!({ "error": e }))
    }
}

fn tag(x: f64) -> String {
    format!("{x}").replace('-', "m")
}

fn validate(cmd: &Command) -> Result<(), Failure> {
    let positive = |name: &str, x: f64| {
        if x > 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(Failure::Usage(format!("{name} must be positive, got {x}")))
        }
    };
    match cmd {
        Command::WangSolve(a) => positive("r", a.r),
        Command::Develop(a) => {
            positive("r", a.r)?;
            if !(a.rho > 0.0 && a.rho < a.r) {
                return Err(Failure::Usage(format!(
                    "rho must lie in (0, r), got {}",
                    a.rho
                )));
            }
            Ok(())
        }
        Command::PolygonLimit(a) => a.r_list.iter().try_for_each(|&r| positive("r", r)),
        Command::GhCheck(a) => a.r_list.iter().try_for_each(|&r| positive("r", r)),
        Command::TitsTile(_) | Command::GbCheck(_) | Command::LimitC(_) => Ok(()),
    }
}

fn run(cmd: &Command, out: &mut Output) -> Result<Value, Failure> {
    validate(cmd)?;
    let config = serde_json::to_value(cmd).expect("arguments serialize");
    let ts = out.timestamp.clone();
    let summary = match cmd {
        Command::WangSolve(a) => {
            let cd = if a.zero_mode {
                CubicDifferential::zero()
            } else {
                CubicDifferential::new(a.n)
            };
            let cf = solve(&cd, &RadialGrid::new(a.r, a.m)?, &SolverConfig::default())?;
            let stem = format!(
                "wang_n{}_r{}_m{}{}",
                a.n,
                tag(a.r),
                a.m,
                if a.zero_mode { "_zero" } else { "" }
            );
            out.write(&format!("{stem}.csv"), &io::solution_csv(&cf)?)?;
            let meta = io::solution_json(&cf);
            out.write_json(
                &format!("{stem}.json"),
                &json!({ "config": config, "solution": meta }),
            )?;
            meta
        }
        Command::Develop(a) => {
            let cf = solve(
                &CubicDifferential::new(a.n),
                &RadialGrid::new(a.r, a.m)?,
                &SolverConfig::default(),
            )?;
            let conn = assemble_connection(&cf)?;
            let lifts = develop_boundary(&conn, a.rho, a.k)?;
            let steps = conn.default_steps(Complex64::new(a.rho, 0.0));
            let domain = projectivize(&lifts)?;
            let stem = format!("develop_n{}_r{}_rho{}", a.n, tag(a.r), tag(a.rho));
            out.write(&format!("{stem}.csv"), &io::boundary_csv(&lifts)?)?;
            let meta = json!({
                "n": a.n, "r": a.r, "rho": a.rho, "k": a.k, "m": a.m,
                "steps": steps, "convention": CONVENTION,
                "hull_vertices": domain.hull_vertices().len(),
            });
            out.write_json(
                &format!("{stem}.json"),
                &json!({ "config": config, "boundary": meta }),
            )?;
            let title = format!("developing image n = {} rho = {}", a.n, a.rho);
            out.write(
                &format!("{stem}.svg"),
                &io::domains_svg(&[(&domain, "black")], &title, ts.as_deref()),
            )?;
            meta
        }
        Command::PolygonLimit(a) => {
            let mut cfg = PolygonLimitConfig::new(a.n, a.r_list.clone());
            cfg.nodes_per_unit = a.nodes_per_unit;
            cfg.samples = a.samples;
            cfg.angle_deg = a.angle_deg;
            cfg.extrapolate = !a.no_extrapolate;
            let res = polygon_limit(&cfg)?;
            let stem = format!("polygon_limit_n{}", a.n);
            out.write(&format!("{stem}.csv"), &io::rows_csv(&res.rows)?)?;
            const COLOURS: [&str; 6] = [
                "black", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            ];
            let order: Vec<usize> = (0..res.domains.len()).rev().collect();
            let layers: Vec<_> = order
                .iter()
                .map(|&i| (&res.domains[i], COLOURS[i % COLOURS.len()]))
                .collect();
            let title = format!("developing images n = {}", a.n);
            out.write(
                &format!("{stem}.svg"),
                &io::domains_svg(&layers, &title, ts.as_deref()),
            )?;
            json!({ "rows": res.rows })
        }
        Command::TitsTile(a) => {
            let data = CoxeterData::new(a.a, a.b, a.c, a.s)?;
            let (tiling, hull) = tits_tiling(&data, a.depth)?;
            let stem = format!("tits_{}_{}_{}_s{}_d{}", a.a, a.b, a.c, tag(a.s), a.depth);
            let mut v = io::tiling_json(&tiling, &hull)?;
            v["config"] = config;
            out.write_json(&format!("{stem}.json"), &v)?;
            out.write(
                &format!("{stem}.svg"),
                &io::tiling_svg(&tiling, &hull, ts.as_deref())?,
            )?;
            json!({
                "tiles": tiling.len(),
                "length_counts": tiling.length_counts(),
                "conic_fit": conic_fit(hull.hull_vertices())?,
            })
        }
        Command::GbCheck(a) => {
            let data = CoxeterData::new(a.a, a.b, a.c, a.s)?;
            let (tiling, _) = tits_tiling(&data, a.depth)?;
            let report = gb_check(&tiling, a.patches, a.patch_size, a.seed)?;
            let stem = format!("gb_{}_{}_{}_s{}_d{}", a.a, a.b, a.c, tag(a.s), a.depth);
            out.write_json(
                &format!("{stem}.json"),
                &json!({ "config": config, "report": report }),
            )?;
            let summary = json!({ "patches": report.patches.len(), "max_abs_residual": report.max_abs_residual });
            if report.max_abs_residual != 0 {
                return Err(Failure::Numerical(
                    json!({ "error": "nonzero Gauss–Bonnet residual", "summary": summary }),
                ));
            }
            summary
        }
        Command::LimitC(a) => {
            let rows = limit_c(a.a, a.b, a.c, &a.s_list, a.depth)?;
            let stem = format!("limit_c_{}_{}_{}_d{}", a.a, a.b, a.c, a.depth);
            out.write(&format!("{stem}.csv"), &io::rows_csv(&rows)?)?;
            json!({ "rows": rows })
        }
        Command::GhCheck(a) => {
            let mut cfg = GhCheckConfig::new(a.n, a.r_list.clone());
            cfg.points = a.points;
            cfg.spacing = a.spacing;
            cfg.seed = a.seed;
            let res = gh_check(&cfg)?;
            let stem = format!("gh_n{}", a.n);
            out.write(&format!("{stem}.csv"), &io::rows_csv(&res.rows)?)?;
            out.write(
                &format!("{stem}_distances.csv"),
                &io::distance_csv(&res.reference),
            )?;
            let v =
                json!({ "config": config, "rows": res.rows, "graph": res.reference.source.graph });
            out.write_json(&format!("{stem}.json"), &v)?;
            json!({ "rows": res.rows })
        }
    };
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = std::fs::create_dir_all(&cli.out_dir) {
        eprintln!(
            "{}",
            json!({ "error": format!("cannot create {}: {e}", cli.out_dir.display()) })
        );
        return ExitCode::from(1);
    }
    let timestamp = (!cli.reproducible).then(|| {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("unix time {secs}")
    });
    let mut out = Output {
        dir: Path::new(&cli.out_dir).to_path_buf(),
        timestamp,
        written: vec![],
    };
    match run(&cli.command, &mut out) {
        Ok(summary) => {
            println!("{}", json!({ "summary": summary, "files": out.written }));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(v)) => {
            eprintln!("{v}");
            ExitCode::from(1)
        }
    }
}
