//! `moebius-mipt`: scans, entropy experiments, trace-map orbits, and SU(2)
//! similarity reports for nonunitary Gaussian circuits.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod config;

use clap::{Args, Parser, Subcommand};
use config::{fmt_float, CircuitSpec, ConfigError};
use moebius_mipt::entanglement::{
    entropy_profile, evolve_vacuum, fit_log, fit_power, log_spaced_ells, EntropyProfile,
};
use moebius_mipt::scans;
use moebius_mipt::sequences::{derive_seed, SequenceKind};
use moebius_mipt::trace_maps::{
    fib_invariant, fib_step, tm_initial_pair, tm_region, tm_step, TraceTriple,
};
use moebius_mipt::{gates, MomentumGrid};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "moebius-mipt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Min-Lyapunov heatmap over a (T, λ) grid, with boundary overlays.
    PhaseDiagram(PhaseDiagramArgs),
    /// Entanglement-entropy profile S(ℓ) with log/power-law fits.
    Entropy(EntropyArgs),
    /// Trace-map orbit dump (Fibonacci 3D map or Thue–Morse 2D map).
    TraceOrbit(TraceOrbitArgs),
    /// SU(2) simultaneous-similarity reports for the block pair at (T, λ, k).
    Su2Check(Su2CheckArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat JSON config file; every key can be overridden by a flag.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Gate set: eq7, eq32, or eq34.
    #[arg(long = "gate-set")]
    gate_set: Option<String>,
    /// Sequence: floquet:<word>, fibonacci:<n>, thue-morse:<n>,
    /// bernoulli:<length>, multipolar:<order>:<blocks>.
    #[arg(long)]
    sequence: Option<String>,
    /// Gate time T (radians).
    #[arg(long = "T", allow_hyphen_values = true)]
    t: Option<f64>,
    /// Measurement strength λ.
    #[arg(long)]
    lambda: Option<f64>,
    /// Chain length (even).
    #[arg(long = "L")]
    l: Option<usize>,
    /// Steps: Floquet cycles, Fibonacci/Thue–Morse index, or random blocks.
    #[arg(long)]
    n: Option<usize>,
    /// Master seed for random sequences.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of circuit realizations to average over.
    #[arg(long)]
    realizations: Option<usize>,
    /// Output directory (created if missing).
    #[arg(long = "out-dir", default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (fallback: MOEBIUS_MIPT_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 0.02)]
    t_min: f64,
    #[arg(long, default_value_t = 1.55)]
    t_max: f64,
    #[arg(long, default_value_t = 32)]
    t_steps: usize,
    #[arg(long, default_value_t = 0.01)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 32)]
    lambda_steps: usize,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated subsystem sizes; default: 20 log-spaced in [2, L/3].
    #[arg(long = "ell-list")]
    ell_list: Option<String>,
    /// Fit to report: log, power, or none.
    #[arg(long, default_value = "log")]
    fit: String,
}

#[derive(Args)]
struct TraceOrbitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which map: fibonacci or thue-morse.
    #[arg(long, default_value = "fibonacci")]
    map: String,
    /// Momentum seeding the orbit from the block matrices at (T, λ, k).
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Explicit Fibonacci seed (overrides the (T, λ, k) seed): "x,y,z".
    #[arg(long, allow_hyphen_values = true)]
    triple: Option<String>,
    /// Number of map iterations.
    #[arg(long, default_value_t = 50)]
    steps: usize,
}

#[derive(Args)]
struct Su2CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated momenta at which to test the block pair.
    #[arg(long = "k-list", default_value = "0.5,1.0,1.5,2.0,2.5")]
    k_list: String,
}

enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<moebius_mipt::Error> for CliError {
    fn from(e: moebius_mipt::Error) -> Self {
        match e {
            moebius_mipt::Error::Domain(_) | moebius_mipt::Error::Dimension { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PhaseDiagram(args) => cmd_phase_diagram(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::TraceOrbit(args) => cmd_trace_orbit(args),
        Command::Su2Check(args) => cmd_su2_check(args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Numerical(msg)) | Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}

/// Resolve the effective spec: defaults ← config file ← flags (flags win),
/// validate it, and install the thread pool.
fn resolve(common: &CommonArgs) -> Result<CircuitSpec, CliError> {
    let mut spec = CircuitSpec::default();
    if let Some(path) = &common.config {
        spec.apply_file(path)?;
    }
    if let Some(v) = &common.gate_set {
        spec.gate_set = v.clone();
    }
    if let Some(v) = &common.sequence {
        spec.sequence = v.clone();
    }
    if let Some(v) = common.t {
        spec.t = v;
    }
    if let Some(v) = common.lambda {
        spec.lambda = v;
    }
    if let Some(v) = common.l {
        spec.l = v;
    }
    if let Some(v) = common.n {
        spec.n = v;
    }
    if let Some(v) = common.seed {
        spec.seed = v;
    }
    if let Some(v) = common.realizations {
        spec.realizations = v;
    }
    spec.validate()?;

    let threads = common.threads.or_else(|| {
        std::env::var("MOEBIUS_MIPT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // Ignore the error if a pool is already installed (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    std::fs::create_dir_all(&common.out_dir)?;
    Ok(spec)
}

fn write_metadata(
    dir: &Path,
    stem: &str,
    command: &str,
    spec: &CircuitSpec,
    started: Instant,
    extra: serde_json::Value,
) -> Result<(), CliError> {
    let meta = json!({
        "command": command,
        "circuit_spec": spec,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "results": extra,
    });
    std::fs::write(
        dir.join(format!("{stem}.meta.json")),
        serde_json::to_string_pretty(&meta).expect("metadata serializes"),
    )?;
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn cmd_phase_diagram(args: PhaseDiagramArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = resolve(&args.common)?;
    if args.t_steps < 1 || args.lambda_steps < 1 {
        return Err(CliError::Config(
            "fields t_steps/lambda_steps: must be >= 1".into(),
        ));
    }
    let gate_set = spec.gate_set()?;
    let kind = spec.sequence()?;
    let grid = MomentumGrid::new(spec.l)?;
    let ts = linspace(args.t_min, args.t_max, args.t_steps);
    let ls = linspace(args.lambda_min, args.lambda_max, args.lambda_steps);

    let diagram = scans::phase_diagram(gate_set, &kind, &ts, &ls, &grid, spec.n)?;

    let dir = &args.common.out_dir;
    let mut csv = String::from("T,lambda,min_lyapunov\n");
    for (i, &t) in diagram.t_values.iter().enumerate() {
        for (j, &lambda) in diagram.lambda_values.iter().enumerate() {
            let v = diagram.cells[i * diagram.lambda_values.len() + j];
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_float(t),
                fmt_float(lambda),
                fmt_float(v)
            ));
        }
    }
    std::fs::write(dir.join("phase_diagram.csv"), csv)?;

    // Boundary overlays: the closed-form Floquet boundary and, for Fibonacci
    // sequences, the quasiperiodic-invariant volume check.
    let fibonacci = matches!(kind, SequenceKind::Fibonacci(_));
    let mut boundary = if fibonacci {
        String::from("T,lambda_c,quasi_volume_at_lambda_c\n")
    } else {
        String::from("T,lambda_c\n")
    };
    for &t in &diagram.t_values {
        let lc = scans::floquet_boundary_lambda(t);
        let lc_str = lc.map(fmt_float).unwrap_or_else(|| "nan".into());
        if fibonacci {
            let q = lc
                .map(|l| scans::quasi_boundary_check(t, (l - 0.01).max(0.0), &grid))
                .unwrap_or(true);
            boundary.push_str(&format!("{},{},{}\n", fmt_float(t), lc_str, q));
        } else {
            boundary.push_str(&format!("{},{}\n", fmt_float(t), lc_str));
        }
    }
    std::fs::write(dir.join("boundary.csv"), boundary)?;

    write_metadata(
        dir,
        "phase_diagram",
        "phase-diagram",
        &spec,
        started,
        json!({
            "rows": diagram.t_values.len() * diagram.lambda_values.len(),
            "t_grid": [args.t_min, args.t_max, args.t_steps],
            "lambda_grid": [args.lambda_min, args.lambda_max, args.lambda_steps],
        }),
    )
}

fn parse_ell_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Config(format!("field ell_list: bad entry {tok:?}: {e}")))
        })
        .collect()
}

fn cmd_entropy(args: EntropyArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let mut spec = resolve(&args.common)?;
    let gate_set = spec.gate_set()?;
    let grid = MomentumGrid::new(spec.l)?;

    spec.ell_list = match &args.ell_list {
        Some(s) => parse_ell_list(s)?,
        None if spec.ell_list.is_empty() => log_spaced_ells(2, (spec.l / 3).max(10), 20),
        None => spec.ell_list.clone(),
    };
    spec.validate()?;
    let ells = spec.ell_list.clone();

    // Average over realizations (random kinds are reseeded per realization;
    // deterministic kinds are identical across realizations).
    let mut acc = vec![0.0f64; ells.len()];
    let mut acc_sq = vec![0.0f64; ells.len()];
    for r in 0..spec.realizations {
        let kind = reseed(&spec.sequence()?, derive_seed(spec.seed, r as u64));
        let word = kind.word(spec.n);
        let modes = evolve_vacuum(&grid, gate_set, &word, spec.t, spec.lambda)?;
        let profile = entropy_profile(&modes, &ells)?;
        for (i, (_, s)) in profile.points.iter().enumerate() {
            acc[i] += s;
            acc_sq[i] += s * s;
        }
    }
    let r = spec.realizations as f64;
    let mean: Vec<f64> = acc.iter().map(|s| s / r).collect();
    let stderr: Vec<f64> = acc_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| {
            if spec.realizations > 1 {
                ((sq / r - m * m).max(0.0) / (r - 1.0)).sqrt()
            } else {
                0.0
            }
        })
        .collect();

    let dir = &args.common.out_dir;
    let mut csv = String::from("ell,S,stderr\n");
    for ((&ell, m), e) in ells.iter().zip(&mean).zip(&stderr) {
        csv.push_str(&format!("{ell},{},{}\n", fmt_float(*m), fmt_float(*e)));
    }
    std::fs::write(dir.join("entropy_profile.csv"), csv)?;

    let profile = EntropyProfile {
        points: ells.iter().copied().zip(mean.iter().copied()).collect(),
    };
    let window = (
        *ells.first().expect("nonempty ell list"),
        *ells.last().expect("nonempty ell list"),
    );
    let fit_json = match args.fit.as_str() {
        "log" => {
            let fit = fit_log(&profile, window)?;
            json!({"kind": "log", "c_eff": fit.c_eff, "s0": fit.s0,
                   "residual": fit.residual, "c_eff_stderr": fit.c_eff_err})
        }
        "power" => {
            let fit = fit_power(&profile, window)?;
            json!({"kind": "power", "alpha": fit.alpha, "prefactor": fit.prefactor,
                   "residual": fit.residual, "alpha_stderr": fit.alpha_err})
        }
        "none" => json!({"kind": "none"}),
        other => {
            return Err(CliError::Config(format!(
                "field fit: unknown value {other:?} (expected log, power, or none)"
            )))
        }
    };
    std::fs::write(
        dir.join("entropy_fit.json"),
        serde_json::to_string_pretty(&fit_json).expect("fit serializes"),
    )?;

    write_metadata(dir, "entropy_profile", "entropy", &spec, started, fit_json)
}

fn reseed(kind: &SequenceKind, seed: u64) -> SequenceKind {
    match kind {
        SequenceKind::Bernoulli { length, .. } => SequenceKind::Bernoulli {
            length: *length,
            seed,
        },
        SequenceKind::Multipolar {
            order, num_blocks, ..
        } => SequenceKind::Multipolar {
            order: *order,
            num_blocks: *num_blocks,
            seed,
        },
        deterministic => deterministic.clone(),
    }
}

fn cmd_trace_orbit(args: TraceOrbitArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = resolve(&args.common)?;
    let dir = &args.common.out_dir;
    let threshold = moebius_mipt::trace_maps::ESCAPE_THRESHOLD;

    match args.map.as_str() {
        "fibonacci" => {
            let mut triple = match &args.triple {
                Some(s) => {
                    let parts: Vec<f64> = s
                        .split(',')
                        .map(|t| {
                            t.trim().parse().map_err(|e| {
                                CliError::Config(format!("field triple: bad entry {t:?}: {e}"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    if parts.len() != 3 {
                        return Err(CliError::Config(
                            "field triple: expected three comma-separated numbers".into(),
                        ));
                    }
                    TraceTriple::new(parts[0], parts[1], parts[2])
                }
                None => {
                    let m0 = gates::block_matrix(gates::BlockKind::U0, spec.t, spec.lambda, args.k)?;
                    let m1 = gates::block_matrix(gates::BlockKind::U1, spec.t, spec.lambda, args.k)?;
                    moebius_mipt::trace_maps::initial_triple(&m0, &m1)?
                }
            };
            let mut csv = String::from("step,x,y,z,invariant,escaped\n");
            let mut escaped = false;
            for step in 0..=args.steps {
                escaped = escaped || triple.max_abs() > threshold;
                csv.push_str(&format!(
                    "{step},{},{},{},{},{}\n",
                    fmt_float(triple.x),
                    fmt_float(triple.y),
                    fmt_float(triple.z),
                    fmt_float(fib_invariant(triple)),
                    escaped
                ));
                if escaped {
                    break;
                }
                triple = fib_step(triple);
            }
            std::fs::write(dir.join("orbit.csv"), csv)?;
        }
        "thue-morse" => {
            let mut pair = tm_initial_pair(spec.t, spec.lambda, args.k)?;
            let mut csv = String::from("step,p,q,region,escaped\n");
            let mut escaped = false;
            for step in 0..=args.steps {
                escaped = escaped || pair.p.abs().max(pair.q.abs()) > threshold;
                csv.push_str(&format!(
                    "{step},{},{},{:?},{}\n",
                    fmt_float(pair.p),
                    fmt_float(pair.q),
                    tm_region(pair),
                    escaped
                ));
                if escaped {
                    break;
                }
                pair = tm_step(pair);
            }
            std::fs::write(dir.join("orbit.csv"), csv)?;
        }
        other => {
            return Err(CliError::Config(format!(
                "field map: unknown value {other:?} (expected fibonacci or thue-morse)"
            )))
        }
    }

    write_metadata(
        dir,
        "orbit",
        "trace-orbit",
        &spec,
        started,
        json!({"map": args.map, "k": args.k, "steps": args.steps}),
    )
}

fn cmd_su2_check(args: Su2CheckArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = resolve(&args.common)?;
    let gate_set = spec.gate_set()?;
    let (block_a, block_b) = gate_set.letter_blocks();

    let ks: Vec<f64> = args
        .k_list
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("field k_list: bad entry {tok:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;

    let mut reports = Vec::new();
    for &k in &ks {
        let mp = gates::block_matrix(block_a, spec.t, spec.lambda, k)?;
        let mm = gates::block_matrix(block_b, spec.t, spec.lambda, k)?;
        let report = scans::su2_similarity(&mp, &mm);
        let identity_residual = scans::trace_identity_check(&mp, &mm).ok();
        reports.push(json!({
            "k": k,
            "conjugation_ok": report.conjugation_ok,
            "traces_real": report.traces_real,
            "combined_trace_ok": report.combined_trace_ok,
            "similarity_exists": report.s.is_some(),
            "unitarity_defect": if report.unitarity_defect.is_nan() {
                serde_json::Value::Null
            } else {
                json!(report.unitarity_defect)
            },
            "trace_identity_residual": identity_residual,
        }));
    }

    let dir = &args.common.out_dir;
    std::fs::write(
        dir.join("su2_report.json"),
        serde_json::to_string_pretty(&json!({"reports": reports})).expect("report serializes"),
    )?;
    write_metadata(
        dir,
        "su2_report",
        "su2-check",
        &spec,
        started,
        json!({"k_count": ks.len()}),
    )
}
