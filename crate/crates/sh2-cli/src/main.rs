//! Command-line front end: stratum classification, extremal integration,
//! Maxwell analysis, g-scan tabulation, symmetry verification, and bracket
//! tables, with CSV/JSON plot-data emission.
//!
//! Exit codes: 0 success, 1 verification failed or I/O error, 2 input or
//! domain error, 3 numerical failure.

mod fieldexpr;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sh2::elliptic::Modulus;
use sh2::extremal::DEFAULT_EPS_ENERGY;
use sh2::extremal::{
    classify, energy, format_g17, integrate_extremal, to_pendulum, Covector, StepControl,
    Trajectory,
};
use sh2::maxwell::{
    first_maxwell_time, g_scan, numeric_maxwell_search, MaxwellVerdict, VerdictDiagnostics,
    DEFAULT_AXIS_TOL, DEFAULT_T_MAX, DEFAULT_T_MIN,
};
use sh2::symmetry::{
    bracket_table, flow_v1, frame_bracket_table, verify_symmetry, SampleSpec, SymmetryField,
};
use sh2::Stratum;

#[derive(Parser)]
#[command(
    name = "sh2",
    version,
    about = "Sub-Riemannian control on the special hyperbolic group SH(2)",
    after_help = "Exit codes: 0 success, 1 verification failed, 2 input/domain error, 3 numerical failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an initial covector by pendulum energy into C1..C5
    Classify(ClassifyArgs),
    /// Integrate the normal extremal from the identity and emit samples
    Integrate(IntegrateArgs),
    /// First Maxwell time: closed form merged with a numeric axis search
    Maxwell(MaxwellArgs),
    /// Tabulate g(k) = E(k) - k'^2 K(k) with a derivative check and root report
    Gscan(GscanArgs),
    /// Verify the infinitesimal-symmetry conditions for v1, v2, v3
    Verify(VerifyArgs),
    /// Verified bracket tables of the frame and symmetry algebras
    Brackets(BracketsArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CovectorSpec {
    /// Initial covector "h1,h2,h3"; h1^2+h2^2 is renormalized to 1 when
    /// within 1e-6 and rejected beyond that
    #[arg(long = "h", value_name = "H1,H2,H3")]
    h: Option<String>,

    /// Initial pendulum coordinates "gamma,c" (mapped onto the cylinder)
    #[arg(long, value_name = "GAMMA,C")]
    pendulum: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    covector: CovectorSpec,

    /// Stratum boundary tolerance on E = +/-1 and c = 0
    #[arg(long, default_value_t = DEFAULT_EPS_ENERGY)]
    eps: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    covector: CovectorSpec,

    /// Final time (t = 0 emits a single sample)
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    tmax: f64,

    /// Output sample spacing
    #[arg(long, default_value_t = 1e-2)]
    dt: f64,

    /// Integrator tolerance (absolute and relative)
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Append the flow-mapped columns xs,ys,zs at this flow parameter
    #[arg(long, value_name = "S")]
    symmetry: Option<f64>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args)]
struct MaxwellArgs {
    #[command(flatten)]
    covector: CovectorSpec,

    /// Horizon of the numeric axis search
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    tmax: f64,

    /// Lower time cutoff of the numeric axis search
    #[arg(long, default_value_t = DEFAULT_T_MIN)]
    tmin: f64,

    /// Axis tolerance of the numeric search
    #[arg(long, default_value_t = DEFAULT_AXIS_TOL)]
    tol: f64,

    /// Modulus for the rotating-stratum closed form 4 k K(k)
    #[arg(long, value_name = "K0")]
    k0: Option<f64>,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args)]
struct GscanArgs {
    /// Lower grid bound
    #[arg(long, default_value_t = 0.0)]
    kmin: f64,

    /// Upper grid bound (must stay below 1)
    #[arg(long, default_value_t = 0.99)]
    kmax: f64,

    /// Number of grid points
    #[arg(long, default_value_t = 100)]
    n: usize,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum DerivativeMode {
    /// Central finite differences (step 1e-6)
    Fd,
    /// Closed-form derivatives for the built-in fields
    Analytic,
}

#[derive(Args)]
struct VerifyArgs {
    /// Residual threshold for a field to pass
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,

    /// Number of sample points
    #[arg(long, default_value_t = 200)]
    samples: usize,

    /// Samples are drawn from [-BOX, BOX]^3
    #[arg(long = "box", default_value_t = 5.0, value_name = "BOX")]
    half_width: f64,

    /// RNG seed for the sample points
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Additional user field, e.g. "x*dx" or "-y*dx - x*dy - dz"
    #[arg(long, value_name = "EXPR")]
    field: Option<String>,

    /// Derivative mode for the residual evaluation
    #[arg(long, value_enum, default_value_t = DerivativeMode::Fd)]
    mode: DerivativeMode,

    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Args)]
struct BracketsArgs {
    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Debug)]
enum CliError {
    /// Input or domain error (exit 2).
    Input(String),
    /// Numerical failure (exit 3).
    Numeric(String),
    /// I/O failure (exit 1).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

impl From<sh2::Error> for CliError {
    fn from(e: sh2::Error) -> Self {
        match e {
            sh2::Error::Domain { .. }
            | sh2::Error::OffCylinder { .. }
            | sh2::Error::BasePointMismatch => CliError::Input(e.to_string()),
            sh2::Error::Integration { .. } | sh2::Error::NoConvergence(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Classify(args) => cmd_classify(args),
        Command::Integrate(args) => cmd_integrate(args),
        Command::Maxwell(args) => cmd_maxwell(args),
        Command::Gscan(args) => cmd_gscan(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Brackets(args) => cmd_brackets(args),
    }
}

fn parse_floats(text: &str, want: usize, flag: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != want {
        return Err(CliError::Input(format!(
            "{flag} needs {want} comma-separated values, got '{text}'"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("{flag}: bad number '{p}'")))
        })
        .collect()
}

fn covector_from_spec(spec: &CovectorSpec) -> Result<Covector, CliError> {
    if let Some(text) = &spec.h {
        let v = parse_floats(text, 3, "--h")?;
        let n2 = v[0] * v[0] + v[1] * v[1];
        if (n2 - 1.0).abs() > 1e-6 {
            return Err(CliError::Input(format!(
                "--h is off the cylinder: h1^2 + h2^2 = {n2} (must be within 1e-6 of 1)"
            )));
        }
        let scale = n2.sqrt().recip();
        Ok(Covector::new(v[0] * scale, v[1] * scale, v[2]))
    } else if let Some(text) = &spec.pendulum {
        let v = parse_floats(text, 2, "--pendulum")?;
        Ok(Covector::from_angle(v[0] / 2.0, v[1] / 2.0))
    } else {
        unreachable!("clap enforces exactly one covector spec")
    }
}

fn emit(out: &Option<String>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Io(format!("writing {path}: {e}")))
        }
    }
}

fn to_pretty_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8, CliError> {
    let h = covector_from_spec(&args.covector)?;
    let stratum = classify(&h, args.eps)?;
    let p = to_pendulum(&h)?;
    let e = energy(&h);
    let content = match args.format {
        Format::Json => to_pretty_json(&serde_json::json!({
            "input": {"h1": h.h1, "h2": h.h2, "h3": h.h3},
            "energy": e,
            "gamma": p.gamma,
            "c": p.c,
            "stratum": stratum.to_string(),
            "eps": args.eps,
        })),
        Format::Csv => format!(
            "energy,gamma,c,stratum\n{},{},{},{}\n",
            format_g17(e),
            format_g17(p.gamma),
            format_g17(p.c),
            stratum
        ),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn trajectory_csv(traj: &Trajectory, symmetry: Option<f64>) -> String {
    let Some(s) = symmetry else {
        return traj.to_csv();
    };
    let mut out = String::from("t,x,y,z,h1,h2,h3,xs,ys,zs\n");
    for sample in &traj.samples {
        let q = sample.state.q;
        let h = sample.state.h;
        let image = flow_v1(q, s);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            format_g17(sample.t),
            format_g17(q.x),
            format_g17(q.y),
            format_g17(q.z),
            format_g17(h.h1),
            format_g17(h.h2),
            format_g17(h.h3),
            format_g17(image.x),
            format_g17(image.y),
            format_g17(image.z),
        ));
    }
    out
}

fn trajectory_json(traj: &Trajectory, args: &IntegrateArgs) -> serde_json::Value {
    let samples: Vec<serde_json::Value> = traj
        .samples
        .iter()
        .map(|sample| {
            let q = sample.state.q;
            let h = sample.state.h;
            let mut row = serde_json::json!({
                "t": sample.t,
                "x": q.x, "y": q.y, "z": q.z,
                "h1": h.h1, "h2": h.h2, "h3": h.h3,
            });
            if let Some(s) = args.symmetry {
                let image = flow_v1(q, s);
                row["xs"] = image.x.into();
                row["ys"] = image.y.into();
                row["zs"] = image.z.into();
            }
            row
        })
        .collect();
    serde_json::json!({
        "config": {
            "t_max": args.tmax,
            "sample_dt": args.dt,
            "tol": args.tol,
            "symmetry": args.symmetry,
        },
        "samples": samples,
    })
}

fn cmd_integrate(args: IntegrateArgs) -> Result<u8, CliError> {
    let h0 = covector_from_spec(&args.covector)?;
    if !args.tmax.is_finite() || args.tmax < 0.0 {
        return Err(CliError::Input(format!(
            "--tmax must be >= 0, got {}",
            args.tmax
        )));
    }
    let ctrl = StepControl::adaptive(args.tol, args.tol).with_sample_dt(args.dt);
    let traj = integrate_extremal(&h0, args.tmax, &ctrl)?;
    let content = match args.format {
        Format::Csv => trajectory_csv(&traj, args.symmetry),
        Format::Json => to_pretty_json(&trajectory_json(&traj, &args)),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn cmd_maxwell(args: MaxwellArgs) -> Result<u8, CliError> {
    let h0 = covector_from_spec(&args.covector)?;
    let k0 = args.k0.map(Modulus::new).transpose()?;
    let numeric = numeric_maxwell_search(&h0, args.tmax, args.tmin, args.tol)?;
    let verdict = if numeric.stratum == Stratum::C5 {
        numeric
    } else {
        let closed = first_maxwell_time(&h0, k0)?;
        MaxwellVerdict {
            stratum: closed.stratum,
            first_time: closed.first_time,
            maxwell_points: numeric.maxwell_points,
            method: closed.method,
            diagnostics: VerdictDiagnostics {
                continuous_intersection: numeric.diagnostics.continuous_intersection,
                t_min: numeric.diagnostics.t_min,
                t_max: numeric.diagnostics.t_max,
                tol: numeric.diagnostics.tol,
                k0: closed.diagnostics.k0,
                lattice_times: closed.diagnostics.lattice_times,
            },
        }
    };
    let value = serde_json::to_value(&verdict)
        .map_err(|e| CliError::Io(format!("serializing verdict: {e}")))?;
    emit(&args.out, &to_pretty_json(&value))?;
    Ok(0)
}

fn cmd_gscan(args: GscanArgs) -> Result<u8, CliError> {
    let scan = g_scan(args.kmin, args.kmax, args.n)?;
    let content = match args.format {
        Format::Csv => {
            let r = &scan.report;
            let roots = if r.sign_changes.is_empty() {
                "none".to_string()
            } else {
                r.sign_changes
                    .iter()
                    .map(|x| format_g17(*x))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            format!(
                "# g scan: kmin={} kmax={} n={}\n\
                 # roots in ({},{}): {}; monotone_nondecreasing={}; boundary_root_at_zero={}; min g={} at k={}\n{}",
                format_g17(args.kmin),
                format_g17(args.kmax),
                args.n,
                format_g17(args.kmin),
                format_g17(args.kmax),
                roots,
                r.monotone_nondecreasing,
                r.boundary_root_at_zero,
                format_g17(r.min_g),
                format_g17(r.min_k),
                scan.to_csv(),
            )
        }
        Format::Json => {
            let value = serde_json::to_value(&scan)
                .map_err(|e| CliError::Io(format!("serializing scan: {e}")))?;
            to_pretty_json(&value)
        }
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let spec = SampleSpec {
        count: args.samples,
        half_width: args.half_width,
        seed: args.seed,
        threshold: args.threshold,
        force_finite_differences: args.mode == DerivativeMode::Fd,
    };
    let mut fields = vec![SymmetryField::V1, SymmetryField::V2, SymmetryField::V3];
    if let Some(expr) = &args.field {
        let parsed = fieldexpr::FieldExpr::parse(expr)
            .map_err(|e| CliError::Input(format!("--field: {e}")))?;
        fields.push(SymmetryField::Custom {
            name: expr.clone(),
            field: parsed.into_field(),
        });
    }
    let reports: Vec<_> = fields.iter().map(|v| verify_symmetry(v, &spec)).collect();
    let brackets = bracket_table();
    let brackets_pass = brackets.iter().all(|b| b.max_residual < args.threshold);
    let pass = reports.iter().all(|r| r.pass) && brackets_pass;
    let value = serde_json::json!({
        "config": {
            "threshold": args.threshold,
            "samples": args.samples,
            "box": args.half_width,
            "seed": args.seed,
            "mode": match args.mode { DerivativeMode::Fd => "fd", DerivativeMode::Analytic => "analytic" },
        },
        "fields": serde_json::to_value(&reports).expect("serializable reports"),
        "brackets": serde_json::to_value(&brackets).expect("serializable brackets"),
        "pass": pass,
    });
    emit(&args.out, &to_pretty_json(&value))?;
    Ok(if pass { 0 } else { 1 })
}

fn cmd_brackets(args: BracketsArgs) -> Result<u8, CliError> {
    let value = serde_json::json!({
        "frame": serde_json::to_value(frame_bracket_table()).expect("serializable table"),
        "symmetry": serde_json::to_value(bracket_table()).expect("serializable table"),
    });
    emit(&args.out, &to_pretty_json(&value))?;
    Ok(0)
}
