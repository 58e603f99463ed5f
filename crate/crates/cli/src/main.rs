//! Batch command-line frontend: conjugation, transform application, oracle
//! auditing, black-box reconstruction, and plot-data emission.
//!
//! Exit codes: 0 success, 1 check violations, 2 input or protocol errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use convex_order::fenchel::{conjugate_grid, conjugate_grid_brute, conjugate_pl, GridSpec};
use convex_order::grid::GridFunction1D;
use convex_order::io::{
    function_from_json, function_from_wire, function_to_json, function_to_wire,
    polyhedron_from_wire, polyhedron_to_wire, sorted_json, transform_from_json, transform_to_json,
    BatchTape, FunctionWire, PolyhedronWire,
};
use convex_order::random;
use convex_order::reconstruct::{
    identify_preserving, identify_reversing, recover_from_segments, recover_linear_subspaces,
    recover_mink_map, recover_seminorm_map, RecoverOptions,
};
use convex_order::verifier::run_suite;
use convex_order::{
    CanonicalTransform, MinkowskiGauge, Oracle, PLConvexFunction, Polyhedron, Seminorm, Subspace,
    TransformMode,
};

#[derive(Parser)]
#[command(
    name = "convex-order",
    version,
    about = "Convex-duality toolkit: conjugation, canonical transforms, black-box recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fenchel-conjugate a function file (writes `<stem>.star.json` by default)
    Conjugate {
        /// Input function JSON
        input: PathBuf,
        /// Output path
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a canonical transform to a function
    Apply {
        /// Transform JSON
        transform: PathBuf,
        /// Input function JSON
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Identify the canonical form of a black-box order transform on the
    /// convex cone
    Identify(IdentifyArgs),
    /// Recover the linear map behind a lattice / cone oracle
    Reconstruct(ReconstructArgs),
    /// Run a named property suite and write report.json
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample a function on a grid and write CSV for external plotting
    Plot {
        /// Input function JSON (dimension 1 or 2)
        input: PathBuf,
        /// Grid as a:b:N
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Timing comparisons
    Bench {
        #[command(subcommand)]
        which: BenchCommand,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Fast vs brute-force discrete Legendre transform
    Legendre {
        /// Input sample count
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        /// Output node count
        #[arg(long, default_value_t = 1024)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Preserving,
    Reversing,
}

#[derive(Args)]
struct IdentifyArgs {
    #[arg(long)]
    mode: ModeArg,
    /// Ambient dimension
    #[arg(long)]
    n: usize,
    /// `builtin:random` or `batch:<file>`
    #[arg(long)]
    oracle: String,
    #[arg(long, default_value_t = 3)]
    seed: u64,
    /// Sampled order pairs before the oracle is trusted
    #[arg(long, default_value_t = 100)]
    audit: usize,
    /// Random validation probes
    #[arg(long, default_value_t = 50)]
    validate: usize,
    /// Write the probe requests (without responses) for a black-box run
    #[arg(long)]
    emit_requests: Option<PathBuf>,
    /// Output transform JSON
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Subspace,
    Segments,
    Semn,
    Mink,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    lattice: LatticeArg,
    #[arg(long)]
    n: usize,
    /// `builtin:random` or `batch:<file>`
    #[arg(long)]
    oracle: String,
    #[arg(long, default_value_t = 3)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    audit: usize,
    #[arg(long, default_value_t = 50)]
    validate: usize,
    #[arg(long)]
    emit_requests: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Conjugate { input, output } => cmd_conjugate(&input, output),
        Command::Apply { transform, input, output } => cmd_apply(&transform, &input, output),
        Command::Identify(args) => cmd_identify(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Verify { suite, seed, output } => cmd_verify(&suite, seed, output),
        Command::Plot { input, grid, output } => cmd_plot(&input, &grid, output),
        Command::Bench { which } => match which {
            BenchCommand::Legendre { n, m } => cmd_bench_legendre(n, m),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn with_suffix(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    input.with_file_name(format!("{stem}.{suffix}"))
}

fn cmd_conjugate(input: &Path, output: Option<PathBuf>) -> Result<ExitCode> {
    // .csv inputs run the grid transform; everything else is function JSON
    if input.extension().and_then(|e| e.to_str()) == Some("csv") {
        let g = convex_order::io::grid_from_csv(&read(input)?)?;
        let gs = conjugate_grid(&g, None)?;
        let out = output.unwrap_or_else(|| with_suffix(input, "star.csv"));
        write_out(&out, &convex_order::io::grid_to_csv(&gs))?;
        println!("{}", json!({"wrote": out.display().to_string(), "nodes": gs.len()}));
        return Ok(ExitCode::SUCCESS);
    }
    let f = function_from_json(&read(input)?)?;
    let fs = conjugate_pl(&f)?;
    let out = output.unwrap_or_else(|| with_suffix(input, "star.json"));
    write_out(&out, &function_to_json(&fs))?;
    println!("{}", json!({"wrote": out.display().to_string(), "pieces": fs.pieces().len()}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_apply(transform: &Path, input: &Path, output: Option<PathBuf>) -> Result<ExitCode> {
    let t = transform_from_json(&read(transform)?)?;
    let f = function_from_json(&read(input)?)?;
    let g = t.apply(&f)?;
    let out = output.unwrap_or_else(|| with_suffix(input, "applied.json"));
    write_out(&out, &function_to_json(&g))?;
    println!("{}", json!({"wrote": out.display().to_string(), "pieces": g.pieces().len()}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_identify(args: IdentifyArgs) -> Result<ExitCode> {
    let n = args.n;
    if n == 0 {
        bail!("dimension must be >= 1");
    }
    let mode = match args.mode {
        ModeArg::Preserving => TransformMode::Preserving,
        ModeArg::Reversing => TransformMode::Reversing,
    };
    let opts = RecoverOptions { seed: args.seed, audit_pairs: args.audit, validate: args.validate };

    // request recording (for --emit-requests) rides along the oracle
    let recorder: Mutex<Vec<serde_json::Value>> = Mutex::new(Vec::new());
    let emitting = args.emit_requests.is_some();

    enum Source {
        Builtin(CanonicalTransform),
        Tape(BatchTape),
        /// A canonical member of the class, used only to walk the
        /// deterministic probe schedule for --emit-requests.
        Trace,
    }
    let source = if emitting {
        Source::Trace
    } else if args.oracle == "builtin:random" {
        let mut rng = random::rng(args.seed);
        Source::Builtin(random::transform(&mut rng, n, mode))
    } else if let Some(path) = args.oracle.strip_prefix("batch:") {
        Source::Tape(BatchTape::parse(&read(Path::new(path))?)?)
    } else {
        bail!("--oracle must be builtin:random or batch:<file>");
    };

    let oracle = Oracle::new(n, |f: &PLConvexFunction| {
        if emitting {
            recorder.lock().unwrap().push(serde_json::to_value(function_to_wire(f)).unwrap());
        }
        match &source {
            Source::Builtin(t) => t.apply(f),
            Source::Tape(tape) => {
                let req = serde_json::to_value(function_to_wire(f)).unwrap();
                let resp = tape.lookup(&req)?;
                let wire: FunctionWire = serde_json::from_value(resp.clone())
                    .map_err(|e| convex_order::Error::Parse(format!("batch response: {e}")))?;
                function_from_wire(&wire)
            }
            Source::Trace => match mode {
                TransformMode::Preserving => Ok(f.clone()),
                TransformMode::Reversing => conjugate_pl(f),
            },
        }
    });

    let identified = match mode {
        TransformMode::Preserving => identify_preserving(&oracle, &opts)?,
        TransformMode::Reversing => identify_reversing(&oracle, &opts)?,
    };

    if let Some(path) = &args.emit_requests {
        let lines: Vec<String> = recorder
            .lock()
            .unwrap()
            .iter()
            .map(|r| serde_json::to_string(&json!({ "request": r })).unwrap())
            .collect();
        write_out(path, &(lines.join("\n") + "\n"))?;
        println!(
            "{}",
            json!({"emitted_requests": lines.len(), "file": path.display().to_string()})
        );
        return Ok(ExitCode::SUCCESS);
    }

    let out = args.output.unwrap_or_else(|| PathBuf::from("transform.json"));
    write_out(&out, &transform_to_json(&identified.transform))?;

    let mut report = json!({
        "mode": match mode {
            TransformMode::Preserving => "preserving",
            TransformMode::Reversing => "reversing",
        },
        "n": n,
        "seed": args.seed,
        "residual": identified.residual,
        "wrote": out.display().to_string(),
    });
    if let Source::Builtin(generator) = &source {
        let t = &identified.transform;
        let param_err = (t.matrix() - generator.matrix())
            .amax()
            .max((t.shift() - generator.shift()).amax())
            .max((t.phi0() - generator.phi0()).amax())
            .max((t.alpha() - generator.alpha()).abs())
            .max((t.r0() - generator.r0()).abs());
        report["generator_parameter_error"] = json!(param_err);
    }
    let residuals_path = out.with_file_name(format!(
        "{}.residuals.json",
        out.file_stem().and_then(|s| s.to_str()).unwrap_or("transform")
    ));
    write_out(&residuals_path, &sorted_json(&report))?;
    println!("{}", sorted_json(&report));
    Ok(ExitCode::SUCCESS)
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<ExitCode> {
    let n = args.n;
    if n < 2 {
        bail!("reconstruction needs n >= 2");
    }
    let opts = RecoverOptions { seed: args.seed, audit_pairs: args.audit, validate: args.validate };
    let emitting = args.emit_requests.is_some();
    let recorder: Mutex<Vec<serde_json::Value>> = Mutex::new(Vec::new());

    enum Source {
        Builtin(nalgebra::DMatrix<f64>),
        Tape(BatchTape),
        Trace,
    }
    let source = if emitting {
        Source::Trace
    } else if args.oracle == "builtin:random" {
        let mut rng = random::rng(args.seed);
        Source::Builtin(random::invertible(&mut rng, n))
    } else if let Some(path) = args.oracle.strip_prefix("batch:") {
        Source::Tape(BatchTape::parse(&read(Path::new(path))?)?)
    } else {
        bail!("--oracle must be builtin:random or batch:<file>");
    };

    // every lattice variant exchanges polyhedron wires except the subspace
    // lattice, which exchanges spanning bases
    let tape_body =
        |tape: &BatchTape, p: &Polyhedron| -> convex_order::Result<Polyhedron> {
            let req = serde_json::to_value(polyhedron_to_wire(p)).unwrap();
            let resp = tape.lookup(&req)?;
            let wire: PolyhedronWire = serde_json::from_value(resp.clone())
                .map_err(|e| convex_order::Error::Parse(format!("batch response: {e}")))?;
            polyhedron_from_wire(&wire, n)
        };
    let record_body = |p: &Polyhedron| {
        if emitting {
            recorder.lock().unwrap().push(serde_json::to_value(polyhedron_to_wire(p)).unwrap());
        }
    };

    let (matrix, class, residual) = match args.lattice {
        LatticeArg::Subspace => {
            let oracle = Oracle::new(n, |s: &Subspace| {
                let wire: Vec<Vec<f64>> =
                    s.basis_vectors().iter().map(|v| v.iter().copied().collect()).collect();
                if emitting {
                    recorder.lock().unwrap().push(json!({ "basis": wire }));
                }
                match &source {
                    Source::Builtin(a) => s.linear_image(a),
                    Source::Trace => Ok(s.clone()),
                    Source::Tape(tape) => {
                        let resp = tape.lookup(&json!({ "basis": wire }))?;
                        let basis: Vec<Vec<f64>> = serde_json::from_value(resp["basis"].clone())
                            .map_err(|e| {
                                convex_order::Error::Parse(format!("batch response: {e}"))
                            })?;
                        let vecs: Vec<nalgebra::DVector<f64>> =
                            basis.iter().map(|v| nalgebra::DVector::from_row_slice(v)).collect();
                        Subspace::from_spanning(n, &vecs)
                    }
                }
            });
            let rec = recover_linear_subspaces(&oracle, &opts)?;
            (rec.matrix, "up-to-positive-scalar", rec.residual)
        }
        LatticeArg::Segments => {
            let oracle = Oracle::new(n, |p: &Polyhedron| {
                record_body(p);
                match &source {
                    Source::Builtin(a) => p.linear_image(a),
                    Source::Trace => Ok(p.clone()),
                    Source::Tape(tape) => tape_body(tape, p),
                }
            });
            let rec = recover_from_segments(&oracle, &opts)?;
            (rec.matrix, "up-to-sign", rec.residual)
        }
        LatticeArg::Semn => {
            let oracle = Oracle::new(n, |f: &Seminorm| {
                record_body(f.dual_body());
                let body = match &source {
                    Source::Builtin(a) => f.dual_body().linear_image(&a.transpose())?,
                    Source::Trace => f.dual_body().clone(),
                    Source::Tape(tape) => tape_body(tape, f.dual_body())?,
                };
                Seminorm::new(body)
            });
            let rec = recover_seminorm_map(&oracle, &opts)?;
            (rec.matrix, "up-to-sign", rec.residual)
        }
        LatticeArg::Mink => {
            let oracle = Oracle::new(n, |f: &MinkowskiGauge| {
                record_body(f.body());
                let body = match &source {
                    Source::Builtin(a) => {
                        let inv = a.clone().try_inverse().ok_or_else(|| {
                            convex_order::Error::Singular("builtin matrix".into())
                        })?;
                        f.body().linear_image(&inv)?
                    }
                    Source::Trace => f.body().clone(),
                    Source::Tape(tape) => tape_body(tape, f.body())?,
                };
                MinkowskiGauge::new(body)
            });
            let rec = recover_mink_map(&oracle, &opts)?;
            (rec.matrix, "exact", rec.residual)
        }
    };

    if let Some(path) = &args.emit_requests {
        let lines: Vec<String> = recorder
            .lock()
            .unwrap()
            .iter()
            .map(|r| serde_json::to_string(&json!({ "request": r })).unwrap())
            .collect();
        write_out(path, &(lines.join("\n") + "\n"))?;
        println!(
            "{}",
            json!({"emitted_requests": lines.len(), "file": path.display().to_string()})
        );
        return Ok(ExitCode::SUCCESS);
    }

    let rows: Vec<Vec<f64>> =
        (0..matrix.nrows()).map(|i| matrix.row(i).iter().copied().collect()).collect();
    let mut report = json!({
        "lattice": match args.lattice {
            LatticeArg::Subspace => "subspace",
            LatticeArg::Segments => "segments",
            LatticeArg::Semn => "semn",
            LatticeArg::Mink => "mink",
        },
        "n": n,
        "seed": args.seed,
        "matrix": rows,
        "scalar_class": class,
        "residual": residual,
    });
    if let Source::Builtin(a) = &source {
        let err = match args.lattice {
            LatticeArg::Subspace => {
                use convex_order::reconstruct::normalize_up_to_scalar;
                let na = normalize_up_to_scalar(a);
                (&matrix - &na).norm().min((&matrix + &na).norm())
            }
            LatticeArg::Mink => (&matrix - a).amax(),
            _ => (&matrix - a).amax().min((&matrix + a).amax()),
        };
        report["generator_error"] = json!(err);
    }
    let text = sorted_json(&report);
    if let Some(out) = &args.output {
        write_out(out, &text)?;
    }
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, seed: u64, output: Option<PathBuf>) -> Result<ExitCode> {
    let reports = run_suite(suite, seed).map_err(|e| anyhow!("{e}"))?;
    let total_violations: usize = reports.iter().map(|r| r.violations).sum();
    for r in &reports {
        println!(
            "check {}: {} (max_error {:.3e})",
            r.check,
            if r.violations == 0 { "ok" } else { "VIOLATIONS" },
            r.max_error
        );
    }
    let body = json!({
        "suite": suite,
        "seed": seed,
        "checks": reports,
        "total_violations": total_violations,
    });
    let out = output.unwrap_or_else(|| PathBuf::from("report.json"));
    write_out(&out, &sorted_json(&body))?;
    println!("report written to {}", out.display());
    Ok(if total_violations == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_plot(input: &Path, grid: &str, output: Option<PathBuf>) -> Result<ExitCode> {
    let f = function_from_json(&read(input)?)?;
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        bail!("--grid expects a:b:N");
    }
    let a: f64 = parts[0].parse().context("grid start")?;
    let b: f64 = parts[1].parse().context("grid end")?;
    let count: usize = parts[2].parse().context("grid count")?;
    if count < 2 || b <= a || !a.is_finite() || !b.is_finite() {
        bail!("--grid needs b > a and N >= 2");
    }
    let step = (b - a) / (count - 1) as f64;
    let fmt = |v: f64| if v.is_finite() { v.to_string() } else { "inf".to_string() };
    let mut csv = String::new();
    match f.dim() {
        1 => {
            csv.push_str("x,value\n");
            for i in 0..count {
                let x = a + step * i as f64;
                let v = f.eval(&nalgebra::DVector::from_row_slice(&[x]))?;
                csv.push_str(&format!("{},{}\n", x, fmt(v)));
            }
        }
        2 => {
            csv.push_str("x,y,value\n");
            for i in 0..count {
                for j in 0..count {
                    let x = a + step * i as f64;
                    let y = a + step * j as f64;
                    let v = f.eval(&nalgebra::DVector::from_row_slice(&[x, y]))?;
                    csv.push_str(&format!("{},{},{}\n", x, y, fmt(v)));
                }
            }
        }
        d => bail!("plot supports dimensions 1 and 2, got {d}"),
    }
    let out = output.unwrap_or_else(|| with_suffix(input, "samples.csv"));
    write_out(&out, &csv)?;
    println!("{}", json!({"wrote": out.display().to_string()}));
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench_legendre(n: usize, m: usize) -> Result<ExitCode> {
    if n < 2 || m < 2 {
        bail!("need n, m >= 2");
    }
    use rand::Rng;
    let mut rng = random::rng(1);
    let mut slopes: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-4.0..4.0)).collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = 10.0 / n as f64;
    let mut vals = vec![0.0f64];
    for s in &slopes {
        let last = *vals.last().unwrap();
        vals.push(last + h * s);
    }
    let g = GridFunction1D::new(-5.0, h, vals).map_err(|e| anyhow!("{e}"))?;
    let spec = GridSpec { y_min: -4.0, step: 8.0 / (m - 1) as f64, count: m };

    let t0 = Instant::now();
    let fast = conjugate_grid(&g, Some(spec)).map_err(|e| anyhow!("{e}"))?;
    let fast_s = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let brute = conjugate_grid_brute(&g, Some(spec)).map_err(|e| anyhow!("{e}"))?;
    let brute_s = t1.elapsed().as_secs_f64();
    let identical = fast
        .values()
        .iter()
        .zip(brute.values().iter())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    println!(
        "{}",
        sorted_json(&json!({
            "n": n,
            "m": m,
            "fast_seconds": fast_s,
            "brute_seconds": brute_s,
            "speedup": brute_s / fast_s.max(1e-12),
            "bit_identical": identical,
        }))
    );
    Ok(if identical { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
