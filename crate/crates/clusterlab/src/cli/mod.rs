//! Command-line front end: spec parsing, sweep orchestration with a
//! point-level result cache, and CSV/JSON/SVG emission.
//!
//! Every solver in the crate is internally seeded, so identical command
//! lines produce byte-identical CSV and SVG artifacts; the `--seed` flag
//! is recorded in the run manifest for provenance but does not perturb
//! the numerics. Exit codes: 0 success, 1 invalid arguments, 2 internal
//! identity-check failure, 3 capacity exceeded.

pub mod cache;
pub mod records;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::ed;
use crate::entanglement;
use crate::error::{Error, Result};
use crate::fermion;
use crate::meanfield;
use crate::model::{build_hamiltonian, Boundary, ChainSpec};
use crate::{duality, symmetry};
use records::{write_csv, SweepRecord};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance on the duality residual above which `duality-check` reports
/// an identity failure (exit code 2).
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "clusterlab",
    version,
    about = "Numerical laboratory for a stabilizer chain with a competing \
             antiferromagnetic coupling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ground-state observable sweep over a coupling grid; emits CSV + SVG.
    Sweep(SweepArgs),
    /// Analytic quasiparticle dispersion at one coupling.
    Dispersion(DispersionArgs),
    /// Verifies the operator-identity form of the duality at one (N, λ).
    DualityCheck(DualityArgs),
    /// Symbolic algebra survey of the logical string operators.
    SymmetryCheck(SymmetryArgs),
    /// Geometric entanglement of one ground state.
    Entanglement(EntanglementArgs),
    /// Cluster susceptibility and the mean-field critical coupling.
    Meanfield(MeanfieldArgs),
    /// Runs the built-in invariant suite at small sizes.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Periodic,
    Open,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Boundary {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Open => Boundary::Open,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SectorArg {
    Periodic,
    Antiperiodic,
}

impl From<SectorArg> for fermion::MomentumSector {
    fn from(s: SectorArg) -> fermion::MomentumSector {
        match s {
            SectorArg::Periodic => fermion::MomentumSector::Periodic,
            SectorArg::Antiperiodic => fermion::MomentumSector::Antiperiodic,
        }
    }
}

/// Inclusive λ grid parsed from `start:stop:step`.
#[derive(Clone, Debug)]
struct LambdaGrid(Vec<f64>);

fn parse_lambda_grid(text: &str) -> std::result::Result<LambdaGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected start:stop:step, got {text:?} ({} fields)",
            parts.len()
        ));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| format!("unreadable number {p:?}")))
        .collect::<std::result::Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err("grid bounds must be finite".into());
    }
    if step <= 0.0 {
        return Err(format!("step must be positive, got {step}"));
    }
    if stop < start {
        return Err(format!("stop {stop} below start {start}"));
    }
    if start < 0.0 {
        return Err(format!("couplings must be nonnegative, got start {start}"));
    }
    // Inclusive endpoints within half a step.
    let mut grid = Vec::new();
    let mut i = 0usize;
    loop {
        let v = start + i as f64 * step;
        if v > stop + 0.5 * step {
            break;
        }
        grid.push(v.min(stop));
        i += 1;
        if i > 1_000_000 {
            return Err("grid has more than a million points".into());
        }
    }
    if grid.is_empty() {
        return Err("empty coupling grid".into());
    }
    Ok(LambdaGrid(grid))
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Chain sizes, comma separated (even, 4 ≤ N ≤ 16).
    #[arg(long = "n", value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Coupling grid start:stop:step (inclusive endpoints).
    #[arg(long, value_parser = parse_lambda_grid)]
    lambda: LambdaGrid,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    boundary: BoundaryArg,
    /// Output directory for sweep.csv, SVG plots, and manifest.json.
    #[arg(long)]
    out: PathBuf,
    /// Recorded in the manifest; numerics are internally seeded.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for grid points (default: machine parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct DispersionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = SectorArg::Antiperiodic)]
    sector: SectorArg,
    /// Write dispersion.json (+ manifest) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DualityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    /// Write duality.json (+ manifest) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SymmetryArgs {
    /// Operator lengths, comma separated; ≡ 2 (mod 6) selects the gapped
    /// family, multiples of 3 the contiguous one.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 14, 20, 26])]
    lengths: Vec<usize>,
    /// Write symmetry.json (+ manifest) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EntanglementArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    boundary: BoundaryArg,
    /// Write entanglement.json (+ manifest) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeanfieldArgs {
    /// Ring size for the one-dimensional cluster.
    #[arg(long, conflicts_with = "extents")]
    n: Option<usize>,
    /// Torus extents, comma separated (e.g. 3,3), for higher dimensions.
    #[arg(long, value_delimiter = ',')]
    extents: Option<Vec<usize>>,
    /// Write meanfield.json (+ manifest) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One run's provenance, written next to every emitted data file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: String,
    pub spec: Option<ChainSpec>,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    /// Conventions resolved at runtime that fix the numbers in the data.
    pub conventions: Vec<String>,
    /// Files this manifest covers, relative to its directory.
    pub outputs: Vec<String>,
}

fn conventions() -> Vec<String> {
    vec![
        format!("duality phase: {}", duality::PHASE_CONVENTION),
        format!("fermion sector: {}", fermion::SECTOR_CONVENTION),
        format!("logical operator tail: {}", symmetry::GAPPED_TAIL_CONVENTION),
        "degenerate ground states: even-parity symmetric representative".to_string(),
    ]
}

/// Entry point used by `main`; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                0
            } else {
                eprint!("{e}");
                1
            };
        }
    };
    let command_line = argv.join(" ");
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a, &command_line, started),
        Command::Dispersion(a) => cmd_dispersion(a, &command_line, started),
        Command::DualityCheck(a) => cmd_duality(a, &command_line, started),
        Command::SymmetryCheck(a) => cmd_symmetry(a, &command_line, started),
        Command::Entanglement(a) => cmd_entanglement(a, &command_line, started),
        Command::Meanfield(a) => cmd_meanfield(a, &command_line, started),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(..) => 3,
        Error::InvalidArgument(_)
        | Error::InvalidSpec(_)
        | Error::Unconstructible(_)
        | Error::LengthMismatch(..) => 1,
        Error::Solver(_) | Error::InvalidState(_) | Error::Io(_) => 2,
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidState(format!("serialization failed: {e}")))
}

/// Prints JSON to stdout, or writes it under `out` and records the file.
fn emit_json<T: Serialize>(
    value: &T,
    out: Option<&Path>,
    file: &str,
    outputs: &mut Vec<String>,
) -> Result<()> {
    let text = to_json(value)?;
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(file), text)?;
            outputs.push(file.to_string());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn write_manifest(
    dir: &Path,
    command_line: &str,
    spec: Option<ChainSpec>,
    seed: u64,
    started: Instant,
    outputs: Vec<String>,
) -> Result<()> {
    let manifest = RunManifest {
        command_line: command_line.to_string(),
        spec,
        seed,
        tool_version: TOOL_VERSION.to_string(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        conventions: conventions(),
        outputs,
    };
    std::fs::write(dir.join("manifest.json"), to_json(&manifest)?)?;
    Ok(())
}

/// Cached per-point payload of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PointData {
    energy: f64,
    gap: f64,
    string_order: f64,
    staggered_corr: f64,
    geo_ent: f64,
    degenerate: bool,
}

fn sweep_point(n: usize, lambda: f64, boundary: Boundary) -> Result<PointData> {
    let spec = ChainSpec::chain(n, lambda, boundary)?;
    let h = build_hamiltonian(&spec)?;
    let pair = ed::lowest_eigenpairs(&h, 2)?;
    let e0 = pair.energies[0];
    let gap = (pair.energies.get(1).copied().unwrap_or(e0) - e0).max(0.0);
    let (state, degenerate) = if gap <= ed::DEGENERACY_TOL {
        let multiplet = ed::ground_spectrum(&h, ed::DEGENERACY_TOL)?;
        ed::symmetric_member(n, &multiplet)?
    } else {
        (pair.vectors[0].clone(), false)
    };
    let ent = entanglement::geometric_entanglement(&state)?;
    Ok(PointData {
        energy: e0,
        gap,
        string_order: ed::string_order(&state)?,
        staggered_corr: ed::staggered_correlator(&state, n / 2)?,
        geo_ent: ent.epsilon,
        degenerate,
    })
}

fn point_with_cache(n: usize, lambda: f64, boundary: Boundary, dir: &Path) -> Result<PointData> {
    let key = cache::key(&[
        TOOL_VERSION,
        "sweep-point",
        &n.to_string(),
        &boundary.to_string(),
        &format!("{:016x}", lambda.to_bits()),
    ]);
    if let Some(text) = cache::load(dir, &key) {
        if let Ok(point) = serde_json::from_str::<PointData>(&text) {
            return Ok(point);
        }
    }
    let point = sweep_point(n, lambda, boundary)?;
    let payload = serde_json::to_string(&point)
        .map_err(|e| Error::InvalidState(format!("cache serialization failed: {e}")))?;
    cache::store(dir, &key, &payload)?;
    Ok(point)
}

fn cmd_sweep(args: &SweepArgs, command_line: &str, started: Instant) -> Result<i32> {
    let mut sizes = args.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    for &n in &sizes {
        if n % 2 != 0 || !(4..=16).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "sweep sizes must be even and between 4 and 16, got {n}"
            )));
        }
    }
    let boundary: Boundary = args.boundary.into();
    let grid = &args.lambda.0;
    std::fs::create_dir_all(&args.out)?;
    let cache_dir = cache::cache_dir();

    let tasks: Vec<(usize, f64)> = sizes
        .iter()
        .flat_map(|&n| grid.iter().map(move |&l| (n, l)))
        .collect();
    let jobs = args
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Solver(format!("worker pool construction failed: {e}")))?;
    let computed: Vec<Result<PointData>> = pool.install(|| {
        use rayon::prelude::*;
        tasks
            .par_iter()
            .map(|&(n, l)| point_with_cache(n, l, boundary, &cache_dir))
            .collect()
    });
    let mut flat = Vec::with_capacity(tasks.len());
    for r in computed {
        flat.push(r?);
    }

    let mut all_records: Vec<SweepRecord> = Vec::with_capacity(tasks.len());
    let mut cursor = 0usize;
    for &n in &sizes {
        let block = &flat[cursor..cursor + grid.len()];
        cursor += grid.len();
        for (i, (&lambda, point)) in grid.iter().zip(block).enumerate() {
            let deriv = if i == 0 || i + 1 == grid.len() {
                None
            } else {
                Some((block[i + 1].geo_ent - block[i - 1].geo_ent) / (grid[i + 1] - grid[i - 1]))
            };
            all_records.push(SweepRecord {
                lambda,
                n_sites: n,
                boundary,
                energy: point.energy,
                gap: point.gap,
                string_order: point.string_order,
                staggered_corr: point.staggered_corr,
                geo_ent: point.geo_ent,
                geo_ent_per_site: point.geo_ent / n as f64,
                geo_ent_deriv: deriv,
            });
        }
    }

    let mut outputs = vec!["sweep.csv".to_string()];
    std::fs::write(args.out.join("sweep.csv"), write_csv(&all_records)?)?;
    if all_records.len() >= 2 {
        let plot = svg::emit_svg(&all_records, "lambda", "geo_ent_per_site")?;
        std::fs::write(args.out.join("entanglement_per_site.svg"), plot)?;
        outputs.push("entanglement_per_site.svg".to_string());
    }
    if all_records
        .iter()
        .filter(|r| r.geo_ent_deriv.is_some())
        .count()
        >= 2
    {
        let plot = svg::emit_svg(&all_records, "lambda", "geo_ent_deriv")?;
        std::fs::write(args.out.join("entanglement_derivative.svg"), plot)?;
        outputs.push("entanglement_derivative.svg".to_string());
    }
    let template = ChainSpec::chain(sizes[0], grid[0], boundary)?;
    write_manifest(
        &args.out,
        command_line,
        Some(template),
        args.seed,
        started,
        outputs,
    )?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct DispersionOutput {
    lambda: f64,
    n_sites: usize,
    sector: fermion::MomentumSector,
    ground_energy: f64,
    modes: Vec<fermion::BogoliubovMode>,
}

fn cmd_dispersion(args: &DispersionArgs, command_line: &str, started: Instant) -> Result<i32> {
    let sector: fermion::MomentumSector = args.sector.into();
    let output = DispersionOutput {
        lambda: args.lambda,
        n_sites: args.n,
        sector,
        ground_energy: fermion::ground_energy_ff(args.lambda, args.n)?,
        modes: fermion::dispersion(args.lambda, args.n, sector)?,
    };
    let mut outputs = Vec::new();
    emit_json(&output, args.out.as_deref(), "dispersion.json", &mut outputs)?;
    if let Some(dir) = &args.out {
        let spec = ChainSpec::chain(args.n, args.lambda, Boundary::Periodic)?;
        write_manifest(dir, command_line, Some(spec), 0, started, outputs)?;
    }
    Ok(0)
}

fn cmd_duality(args: &DualityArgs, command_line: &str, started: Instant) -> Result<i32> {
    let residual = duality::verify_duality_identity(args.n, args.lambda)?;
    let mut outputs = Vec::new();
    emit_json(&residual, args.out.as_deref(), "duality.json", &mut outputs)?;
    if let Some(dir) = &args.out {
        let spec = ChainSpec::chain(args.n, args.lambda, Boundary::Periodic)?;
        write_manifest(dir, command_line, Some(spec), 0, started, outputs)?;
    }
    if residual.max_entry_deviation > IDENTITY_TOL {
        eprintln!(
            "duality identity failed: max entry deviation {} exceeds {IDENTITY_TOL}",
            residual.max_entry_deviation
        );
        return Ok(2);
    }
    Ok(0)
}

fn cmd_symmetry(args: &SymmetryArgs, command_line: &str, started: Instant) -> Result<i32> {
    let reports = symmetry::algebra_survey(&args.lengths)?;
    let mut outputs = Vec::new();
    emit_json(&reports, args.out.as_deref(), "symmetry.json", &mut outputs)?;
    if let Some(dir) = &args.out {
        write_manifest(dir, command_line, None, 0, started, outputs)?;
    }
    if reports.iter().any(|r| !r.squares_ok || !r.two_copy_algebra) {
        eprintln!("logical algebra check failed for at least one length; see report");
        return Ok(2);
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
struct EntanglementOutput {
    lambda: f64,
    n_sites: usize,
    boundary: Boundary,
    degenerate_ground: bool,
    result: entanglement::EntanglementResult,
}

fn cmd_entanglement(args: &EntanglementArgs, command_line: &str, started: Instant) -> Result<i32> {
    let spec = ChainSpec::chain(args.n, args.lambda, args.boundary.into())?;
    let (state, degenerate) = ed::symmetric_ground_state(&spec)?;
    let result = entanglement::geometric_entanglement(&state)?;
    let output = EntanglementOutput {
        lambda: args.lambda,
        n_sites: args.n,
        boundary: spec.boundary,
        degenerate_ground: degenerate,
        result,
    };
    let mut outputs = Vec::new();
    emit_json(
        &output,
        args.out.as_deref(),
        "entanglement.json",
        &mut outputs,
    )?;
    if let Some(dir) = &args.out {
        write_manifest(dir, command_line, Some(spec), 0, started, outputs)?;
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
struct MeanfieldOutput {
    susceptibility: meanfield::SusceptibilityResult,
    critical: meanfield::CriticalCouplingReport,
}

fn cmd_meanfield(args: &MeanfieldArgs, command_line: &str, started: Instant) -> Result<i32> {
    let lattice = match (&args.n, &args.extents) {
        (Some(n), None) => ChainSpec::chain(*n, 0.0, Boundary::Periodic)?,
        (None, Some(extents)) => ChainSpec::hypercubic(extents.clone(), 0.0)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "give either --n for a ring or --extents for a torus".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with forbids this"),
    };
    let output = MeanfieldOutput {
        susceptibility: meanfield::susceptibility(&lattice, 0)?,
        critical: meanfield::critical_coupling(lattice.dimension(), &lattice)?,
    };
    let mut outputs = Vec::new();
    emit_json(&output, args.out.as_deref(), "meanfield.json", &mut outputs)?;
    if let Some(dir) = &args.out {
        write_manifest(dir, command_line, Some(lattice), 0, started, outputs)?;
    }
    Ok(0)
}

fn cmd_selftest() -> Result<i32> {
    let checks: Vec<(&str, Box<dyn Fn() -> std::result::Result<(), String>>)> = vec![
        (
            "duality identities (N ∈ {4,6,8} × λ ∈ {0,0.5,1,2})",
            Box::new(|| {
                for n in [4usize, 6, 8] {
                    for lambda in [0.0, 0.5, 1.0, 2.0] {
                        let r = duality::verify_duality_identity(n, lambda)
                            .map_err(|e| e.to_string())?;
                        if r.max_entry_deviation > IDENTITY_TOL {
                            return Err(format!(
                                "residual {} at N={n}, λ={lambda}",
                                r.max_entry_deviation
                            ));
                        }
                    }
                }
                Ok(())
            }),
        ),
        (
            "self-duality fixed point (N=8, λ=1)",
            Box::new(|| {
                let r = duality::self_duality_check(1.0, 8).map_err(|e| e.to_string())?;
                if r.full_distance > IDENTITY_TOL || r.bulk_distance > IDENTITY_TOL {
                    return Err(format!(
                        "distances {} / {} at the fixed point",
                        r.full_distance, r.bulk_distance
                    ));
                }
                Ok(())
            }),
        ),
        (
            "ground energies vs free fermions (N ∈ {6,8,10})",
            Box::new(|| {
                for n in [6usize, 8, 10] {
                    for lambda in [0.0, 0.5, 1.0, 1.5, 2.0] {
                        let spec = ChainSpec::chain(n, lambda, Boundary::Periodic)
                            .map_err(|e| e.to_string())?;
                        let h = build_hamiltonian(&spec).map_err(|e| e.to_string())?;
                        let ed_energy = ed::lowest_eigenpairs(&h, 1)
                            .map_err(|e| e.to_string())?
                            .energies[0];
                        let ff_energy =
                            fermion::ground_energy_ff(lambda, n).map_err(|e| e.to_string())?;
                        if (ed_energy - ff_energy).abs() > 1e-10 {
                            return Err(format!(
                                "ED {ed_energy} vs fermion {ff_energy} at N={n}, λ={lambda}"
                            ));
                        }
                    }
                }
                Ok(())
            }),
        ),
        (
            "dispersion matches the quadratic-form spectrum (N=8)",
            Box::new(|| {
                for lambda in [0.5, 2.0] {
                    let sector = fermion::MomentumSector::Antiperiodic;
                    let mut analytic: Vec<f64> = fermion::dispersion(lambda, 8, sector)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(|m| m.energy)
                        .collect();
                    analytic.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let numeric = fermion::bdg_spectrum(lambda, 8, sector)
                        .map_err(|e| e.to_string())?;
                    for (a, b) in analytic.iter().zip(&numeric) {
                        if (a - b).abs() > 1e-10 {
                            return Err(format!("mode mismatch {a} vs {b} at λ={lambda}"));
                        }
                    }
                }
                Ok(())
            }),
        ),
        (
            "logical operator algebra (gapped 8,14; contiguous 9,15)",
            Box::new(|| {
                for report in
                    symmetry::algebra_survey(&[8, 14, 9, 15]).map_err(|e| e.to_string())?
                {
                    if !report.squares_ok || !report.two_copy_algebra {
                        return Err(format!("algebra failed at L={:?}", report.lengths_tested));
                    }
                }
                Ok(())
            }),
        ),
        (
            "mean-field sum rule and quadrature agreement (N=8 ring)",
            Box::new(|| {
                let ring =
                    ChainSpec::chain(8, 0.0, Boundary::Periodic).map_err(|e| e.to_string())?;
                let r = meanfield::susceptibility(&ring, 0).map_err(|e| e.to_string())?;
                if (r.sum_rule - 1.0).abs() > 1e-10 {
                    return Err(format!("sum rule {}", r.sum_rule));
                }
                if (r.chi - r.chi_quadrature).abs() > 1e-8 {
                    return Err(format!(
                        "spectral {} vs quadrature {}",
                        r.chi, r.chi_quadrature
                    ));
                }
                Ok(())
            }),
        ),
        (
            "entanglement benchmarks (cluster 4.0, dual ground state 1.0)",
            Box::new(|| {
                let spec =
                    ChainSpec::chain(8, 0.0, Boundary::Periodic).map_err(|e| e.to_string())?;
                let cluster =
                    crate::model::build_cluster_state(&spec).map_err(|e| e.to_string())?;
                let e_cluster = entanglement::geometric_entanglement(&cluster)
                    .map_err(|e| e.to_string())?
                    .epsilon;
                if (e_cluster - 4.0).abs() > 1e-6 {
                    return Err(format!("cluster ε {e_cluster}"));
                }
                let dual = duality::dual_of_cluster_state(8).map_err(|e| e.to_string())?;
                let e_dual = entanglement::geometric_entanglement(&dual)
                    .map_err(|e| e.to_string())?
                    .epsilon;
                if (e_dual - 1.0).abs() > 1e-6 {
                    return Err(format!("dual ground state ε {e_dual}"));
                }
                Ok(())
            }),
        ),
        (
            "string order is 1 on the cluster state (N=8)",
            Box::new(|| {
                let spec =
                    ChainSpec::chain(8, 0.0, Boundary::Periodic).map_err(|e| e.to_string())?;
                let cluster =
                    crate::model::build_cluster_state(&spec).map_err(|e| e.to_string())?;
                let so = ed::string_order(&cluster).map_err(|e| e.to_string())?;
                if (so - 1.0).abs() > 1e-10 {
                    return Err(format!("string order {so}"));
                }
                Ok(())
            }),
        ),
    ];

    let mut failures = 0usize;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("ok   {name}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(0)
    } else {
        println!("selftest: {failures} check(s) failed");
        Ok(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_grids_include_both_endpoints() {
        let g = parse_lambda_grid("0:2:0.5").unwrap().0;
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let g = parse_lambda_grid("0:0.1:0.03").unwrap().0;
        // 0.12 lies beyond stop + step/2, so the grid ends at 0.09.
        assert_eq!(g.len(), 4);
        assert!((g[3] - 0.09).abs() < 1e-15);
        let g = parse_lambda_grid("0:1:0.15").unwrap().0;
        // 1.05 lands within half a step of stop and is clamped onto it.
        assert_eq!(g.len(), 8);
        assert!((g[7] - 1.0).abs() < 1e-15);
        let single = parse_lambda_grid("0.7:0.7:0.1").unwrap().0;
        assert_eq!(single, vec![0.7]);
    }

    #[test]
    fn lambda_grid_rejects_malformed_ranges() {
        assert!(parse_lambda_grid("1:2").is_err());
        assert!(parse_lambda_grid("a:b:c").is_err());
        assert!(parse_lambda_grid("0:2:0").is_err());
        assert!(parse_lambda_grid("2:1:0.5").is_err());
        assert!(parse_lambda_grid("-1:1:0.5").is_err());
    }

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 1);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), 1);
        assert_eq!(exit_code(&Error::Capacity(20, 12)), 3);
        assert_eq!(exit_code(&Error::Solver("x".into())), 2);
    }

    #[test]
    fn unknown_flags_exit_one() {
        let code = run(vec![
            "clusterlab".into(),
            "sweep".into(),
            "--frobnicate".into(),
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(vec!["clusterlab".into(), "--help".into()]), 0);
    }

    #[test]
    fn sweep_validates_sizes_before_computing() {
        let dir = tempfile::tempdir().unwrap();
        let code = run(vec![
            "clusterlab".into(),
            "sweep".into(),
            "--n".into(),
            "7".into(),
            "--lambda".into(),
            "0:1:0.5".into(),
            "--out".into(),
            dir.path().display().to_string(),
        ]);
        assert_eq!(code, 1);
    }
}
