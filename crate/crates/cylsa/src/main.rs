//! Command-line front end: single evaluations, figure-grade sweeps, and
//! verification runs against the oracles. Data goes to stdout; errors go to
//! stderr as one-line JSON records.
//!
//! Exit codes: 0 ok, 2 invalid scene, 3 verification failure, 4 oracle
//! failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cylsa::analytic::Breakdown;
use cylsa::analytic::omega_traced;
use cylsa::oracle::{
    mc_omega_case, quad_omega, sweep_rows, SweepParam, SweepRow, DEFAULT_PARTITIONS, RNG_ID,
};
use cylsa::{classify, CanonicalCase, CaseId, CylinderScene, Error};

#[derive(Parser)]
#[command(
    name = "cylsa",
    version,
    about = "Solid angle of a cylindrical detector at a point cosine source (orthogonal axes)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SceneArgs {
    /// Cylinder radius (> 0)
    #[arg(long)]
    r: f64,
    /// Perpendicular distance from source to cylinder axis (>= 0)
    #[arg(long)]
    d: f64,
    /// Axial coordinate of one end plane (z1 < z2), source frame
    #[arg(long, allow_hyphen_values = true)]
    z1: f64,
    /// Axial coordinate of the other end plane
    #[arg(long, allow_hyphen_values = true)]
    z2: f64,
    /// Tilt between the emission axis and the source-to-axis line
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Interpret --alpha (and sweep bounds over alpha) in degrees
    #[arg(long)]
    degrees: bool,
}

impl SceneArgs {
    /// Degrees/radians conversion happens exactly once, here.
    fn scene(&self) -> CylinderScene {
        let alpha = if self.degrees { self.alpha.to_radians() } else { self.alpha };
        CylinderScene { r: self.r, d: self.d, z1: self.z1, z2: self.z2, alpha }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMethod {
    Quad,
    Mc,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the emission fraction of one scene
    Compute {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Emit the intermediate terms of each closed-form evaluation
        #[arg(long)]
        trace: bool,
    },
    /// Classify a scene without evaluating it
    Case {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate over a parameter grid (figure-ready table)
    Sweep {
        #[command(flatten)]
        scene: SceneArgs,
        /// Parameter to vary: alpha | d | l1 | z2 (l1 moves the near end plane z1)
        #[arg(long)]
        param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Grid size (>= 2)
        #[arg(long)]
        steps: usize,
        /// Geometric instead of linear spacing (bounds must be positive)
        #[arg(long)]
        log: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the closed form against an oracle
    Verify {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum)]
        method: VerifyMethod,
        /// Monte Carlo sample count (>= 1e4)
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Monte Carlo base seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Quadrature absolute tolerance (also the pass threshold)
        #[arg(long = "abs-tol", default_value_t = 1e-9)]
        abs_tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// 12 significant digits, the CSV contract for computed values.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Optional cell at 12 significant digits; empty when absent.
fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

fn fail(err: &Error) -> ! {
    let record = json!({"error": {"code": err.code(), "message": err.to_string()}});
    eprintln!("{record}");
    let code = match err {
        Error::InvalidScene(_)
        | Error::SourceInsideDetector
        | Error::AdjacentCap
        | Error::Domain(_)
        | Error::SurfaceNotPresent { .. } => 2,
        Error::NumericalInconsistency { .. } | Error::NonConvergence { .. } => 4,
    };
    std::process::exit(code)
}

fn fail_usage(message: &str) -> ! {
    let record = json!({"error": {"code": "InvalidScene", "message": message}});
    eprintln!("{record}");
    std::process::exit(2)
}

fn case_json(c: &CanonicalCase) -> serde_json::Value {
    json!({
        "case": c.case_id.to_string(),
        "l1": c.l1,
        "l2": c.l2,
        "d": c.d,
        "r": c.r,
        "alpha_abs": c.alpha_abs,
        "phi0": c.phi0(),
        "alpha1": c.alpha1(),
        "alpha_c": c.alpha_c(),
        "cap_in_source_plane": c.touches_source_plane(),
    })
}

fn cmd_compute(scene: &CylinderScene, format: Format, trace: bool) {
    let case = classify(scene).unwrap_or_else(|e| fail(&e));
    let (sa, traces) = omega_traced(&case).unwrap_or_else(|e| fail(&e));
    let (cyl, circ) = match (case.case_id, sa.breakdown) {
        (_, Some(Breakdown { cyl, circ })) => (cyl, circ),
        (CaseId::I, _) => (sa.value, 0.0),
        (CaseId::III, _) => (0.0, sa.value),
        (CaseId::II, _) => unreachable!(),
    };
    match format {
        Format::Json => {
            let mut record = case_json(&case);
            let obj = record.as_object_mut().unwrap();
            obj.insert("omega".into(), json!(sa.value));
            obj.insert("omega_cyl".into(), json!(cyl));
            obj.insert("omega_circ".into(), json!(circ));
            if trace {
                obj.insert("trace".into(), serde_json::to_value(&traces).unwrap());
            }
            println!("{record}");
        }
        Format::Csv => {
            println!("case,l1,l2,phi0,alpha1,alpha_c,omega,omega_cyl,omega_circ");
            println!(
                "{},{},{},{},{},{},{},{},{}",
                case.case_id,
                case.l1,
                case.l2,
                sig12_opt(case.phi0()),
                sig12_opt(case.alpha1()),
                sig12_opt(case.alpha_c()),
                sig12(sa.value),
                sig12(cyl),
                sig12(circ),
            );
            if case.touches_source_plane() {
                println!("# note: end plane passes through the source (treated as case I with a vanishing half-length)");
            }
            if trace {
                for t in &traces {
                    println!("# trace {}: {}", t.label, serde_json::to_string(t).unwrap());
                }
            }
        }
    }
}

fn cmd_case(scene: &CylinderScene, format: Format) {
    let case = classify(scene).unwrap_or_else(|e| fail(&e));
    match format {
        Format::Json => println!("{}", case_json(&case)),
        Format::Csv => {
            println!("case,l1,l2,d,r,alpha_abs,phi0,alpha1,alpha_c,cap_in_source_plane");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                case.case_id,
                case.l1,
                case.l2,
                case.d,
                case.r,
                case.alpha_abs,
                sig12_opt(case.phi0()),
                sig12_opt(case.alpha1()),
                sig12_opt(case.alpha_c()),
                case.touches_source_plane(),
            );
        }
    }
}

fn grid(from: f64, to: f64, steps: usize, log: bool) -> Vec<f64> {
    if steps < 2 {
        fail_usage("sweep needs --steps >= 2");
    }
    if log && (from <= 0.0 || to <= 0.0) {
        fail_usage("--log requires positive --from and --to");
    }
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            if log {
                from * (to / from).powf(t)
            } else {
                from + (to - from) * t
            }
        })
        .collect()
}

fn sweep_row_csv(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        row.param_name,
        // Grid values echo at full round-trip precision so re-evaluating
        // them reproduces the omega column to its printed 12 digits.
        row.param_value,
        row.case.map(|c| c.to_string()).unwrap_or_default(),
        sig12_opt(row.omega),
        sig12_opt(row.omega_cyl),
        sig12_opt(row.omega_circ),
        row.error.unwrap_or_default(),
    )
}

fn cmd_sweep(
    args: &SceneArgs,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    log: bool,
    format: Format,
) {
    let scene = args.scene();
    // Sweep bounds over alpha honor --degrees like the scene flag does.
    let (from, to) = if args.degrees && param == SweepParam::Alpha {
        (from.to_radians(), to.to_radians())
    } else {
        (from, to)
    };
    let values = grid(from, to, steps, log);
    let rows = sweep_rows(&scene, param, &values, None);
    match format {
        Format::Json => println!("{}", serde_json::to_string(&rows).unwrap()),
        Format::Csv => {
            println!("param_name,param_value,case,omega,omega_cyl,omega_circ,error_flag");
            for row in &rows {
                println!("{}", sweep_row_csv(row));
            }
        }
    }
}

fn cmd_verify(
    scene: &CylinderScene,
    method: VerifyMethod,
    n: u64,
    seed: u64,
    abs_tol: f64,
    format: Format,
) {
    let case = classify(scene).unwrap_or_else(|e| fail(&e));
    let (sa, _) = omega_traced(&case).unwrap_or_else(|e| fail(&e));
    let (est, threshold, method_name) = match method {
        VerifyMethod::Quad => {
            let est = quad_omega(&case, abs_tol).unwrap_or_else(|e| fail(&e));
            (est, abs_tol, "quadrature")
        }
        VerifyMethod::Mc => {
            if n < 10_000 {
                fail_usage("Monte Carlo verification needs --n >= 10000");
            }
            let est = mc_omega_case(&case, n, seed);
            (est, 4.0 * est.uncertainty, "monte-carlo")
        }
    };
    let diff = (sa.value - est.value).abs();
    let pass = diff <= threshold;
    match format {
        Format::Json => {
            let mut record = json!({
                "method": method_name,
                "analytic": sa.value,
                "oracle": est.value,
                "uncertainty": est.uncertainty,
                "abs_diff": diff,
                "threshold": threshold,
                "pass": pass,
            });
            if method == VerifyMethod::Mc {
                let obj = record.as_object_mut().unwrap();
                obj.insert("n".into(), json!(est.n_samples));
                obj.insert("seed".into(), json!(est.seed));
                obj.insert("partitions".into(), json!(DEFAULT_PARTITIONS));
                obj.insert("rng".into(), json!(RNG_ID));
            }
            println!("{record}");
        }
        Format::Csv => {
            println!(
                "method,analytic,oracle,uncertainty,abs_diff,threshold,pass,n,seed,partitions,rng"
            );
            let (n_cell, seed_cell, parts_cell, rng_cell) = match method {
                VerifyMethod::Mc => (
                    est.n_samples.unwrap().to_string(),
                    est.seed.unwrap().to_string(),
                    DEFAULT_PARTITIONS.to_string(),
                    RNG_ID.to_string(),
                ),
                VerifyMethod::Quad => (String::new(), String::new(), String::new(), String::new()),
            };
            println!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                method_name,
                sig12(sa.value),
                sig12(est.value),
                sig12(est.uncertainty),
                sig12(diff),
                sig12(threshold),
                pass,
                n_cell,
                seed_cell,
                parts_cell,
                rng_cell,
            );
        }
    }
    if !pass {
        std::process::exit(3);
    }
}

fn main() {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Compute { scene, format, trace } => cmd_compute(&scene.scene(), format, trace),
        Cmd::Case { scene, format } => cmd_case(&scene.scene(), format),
        Cmd::Sweep { scene, param, from, to, steps, log, format } => {
            cmd_sweep(&scene, param, from, to, steps, log, format)
        }
        Cmd::Verify { scene, method, n, seed, abs_tol, format } => {
            cmd_verify(&scene.scene(), method, n, seed, abs_tol, format)
        }
    }
}
