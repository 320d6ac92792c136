//! Command-line front end: every pipeline as a subcommand with text-file
//! I/O, deterministic reports, and a machine-readable `key=value` mode.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
//! 3 precondition failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exactgen::{gen_exact, gen_exact_degree0, gen_exact_symbolic, OrbitFunction};
use crate::field::{expansion_to_coeffs, CoefficientField, VectorField, COEFF_TOL};
use crate::graph::OrbitGraph;
use crate::hermite::HermiteExpansion;
use crate::multiindex::enumerate_orbits;
use crate::symmetry::verify_group_relations;
use crate::transport::{
    approximate_exact_sequence, default_schedule, unit_circle_roots, Stage, ROOT_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "fockforms",
    about = "Closed/exact function calculus on the lattice Fock space",
    version
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Report style: human tables or line-delimited key=value records.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub emit: Emit,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the degree-N orbits as cone points.
    Orbits(OrbitsArgs),
    /// Check closedness of coefficient data and/or a symbolic expansion.
    CheckClosed(CheckClosedArgs),
    /// Generate an exact function from an orbit function.
    GenExact(GenExactArgs),
    /// Unit-circle roots of the field's symbol.
    Roots(RootsArgs),
    /// Masked spectral solve and truncation schedule for T c = ξ̂.
    Approximate(ApproximateArgs),
    /// Build the orbit graph, optionally weight it and check cycle sums.
    Graph(GraphArgs),
    /// Run the cross-module invariant suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    /// Degree N of the orbits.
    #[arg(long)]
    pub degree: u32,
    /// Largest cone coordinate.
    #[arg(long)]
    pub bound: i64,
}

#[derive(Debug, Args)]
pub struct CheckClosedArgs {
    /// Built-in field name (Y0, X0, d0, d3-d0) or a field file path.
    #[arg(long)]
    pub field: String,
    /// Coefficient field file to check against the coefficient relations.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Hermite expansion file to check symbolically.
    #[arg(long)]
    pub expansion: Option<PathBuf>,
    /// Shift range for the symbolic scan.
    #[arg(long, default_value_t = 6)]
    pub window: i64,
    /// Absolute violation tolerance (default: 0 symbolic, 1e-9 coefficients).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenExactArgs {
    /// Built-in field name or field file path.
    #[arg(long)]
    pub field: String,
    /// Orbit function file.
    #[arg(long = "orbit-fn")]
    pub orbit_fn: PathBuf,
    /// Window request; expands automatically to fit the generated support.
    #[arg(long, default_value_t = 0)]
    pub window: i64,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    /// Built-in field name or field file path.
    #[arg(long)]
    pub field: String,
    /// Distance-to-circle and clustering tolerance.
    #[arg(long, default_value_t = ROOT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ApproximateArgs {
    /// Built-in field name or field file path.
    #[arg(long)]
    pub field: String,
    /// Coefficient field file with the closed function's data.
    #[arg(long)]
    pub coeffs: PathBuf,
    /// Schedule: `default` or comma-separated `n_mask:grid:truncate` triples.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Single-stage mask parameter (used when --schedule is absent).
    #[arg(long)]
    pub mask: Option<u32>,
    /// Single-stage grid size per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Single-stage truncation index i of the region P_i.
    #[arg(long)]
    pub truncate: Option<i64>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Degree N of the orbit graph.
    #[arg(long)]
    pub degree: u32,
    /// Largest cone coordinate of the vertex set.
    #[arg(long)]
    pub bound: i64,
    /// Coefficient field file supplying edge weights; enables the cycle check.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Absolute tolerance for floating-point suites.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

/// Dispatches a parsed configuration; returns the exit status and the
/// report. Reports are byte-identical across runs for identical inputs.
pub fn run(config: &RunConfig) -> (i32, String) {
    let machine = config.emit == Emit::Machine;
    let result = match &config.command {
        Command::Orbits(args) => run_orbits(args, machine),
        Command::CheckClosed(args) => run_check_closed(args, machine),
        Command::GenExact(args) => run_gen_exact(args, machine),
        Command::Roots(args) => run_roots(args, machine),
        Command::Approximate(args) => run_approximate(args, machine),
        Command::Graph(args) => run_graph(args, machine),
        Command::Validate(args) => run_validate(args, machine),
    };
    match result {
        Ok((code, report)) => (code, report),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

fn load_field(spec: &str) -> Result<VectorField> {
    if let Some(field) = VectorField::by_name(spec) {
        return Ok(field);
    }
    VectorField::parse(&std::fs::read_to_string(Path::new(spec))?)
}

fn run_orbits(args: &OrbitsArgs, machine: bool) -> Result<(i32, String)> {
    let orbits = enumerate_orbits(args.degree, args.bound);
    let mut out = String::new();
    if machine {
        writeln!(out, "degree={} bound={} count={}", args.degree, args.bound, orbits.len()).ok();
        for z in &orbits {
            writeln!(out, "orbit={z}").ok();
        }
    } else {
        writeln!(
            out,
            "{} orbits of degree {} with coordinates <= {}",
            orbits.len(),
            args.degree,
            args.bound
        )
        .ok();
        for z in &orbits {
            if args.degree == 0 {
                writeln!(out, "()").ok();
            } else {
                writeln!(out, "({z})").ok();
            }
        }
    }
    Ok((0, out))
}

fn run_check_closed(args: &CheckClosedArgs, machine: bool) -> Result<(i32, String)> {
    let field = load_field(&args.field)?;
    if args.coeffs.is_none() && args.expansion.is_none() {
        return Err(Error::Parse(
            "check-closed needs --coeffs and/or --expansion".into(),
        ));
    }
    let mut out = String::new();
    let mut failed = false;

    if let Some(path) = &args.expansion {
        let exp = HermiteExpansion::parse(&std::fs::read_to_string(path)?)?;
        let report = field.is_closed_symbolic(&exp, args.window, args.tol.unwrap_or(0.0));
        failed |= !report.closed;
        if machine {
            writeln!(out, "symbolic_closed={}", report.closed).ok();
            writeln!(out, "symbolic_range={}", report.range).ok();
            writeln!(out, "symbolic_violations={}", report.violations.len()).ok();
            for v in &report.violations {
                writeln!(out, "symbolic_violation n={} m={} max_abs_diff={}", v.n, v.m, v.max_abs_diff).ok();
            }
        } else {
            writeln!(
                out,
                "symbolic check (|m|,|n| <= {}): {}",
                report.range,
                if report.closed { "closed" } else { "NOT closed" }
            )
            .ok();
            for v in &report.violations {
                writeln!(out, "  violation at (n,m)=({},{}) |diff|={}", v.n, v.m, v.max_abs_diff)
                    .ok();
            }
        }
    }

    if let Some(path) = &args.coeffs {
        let coeffs = CoefficientField::parse(&std::fs::read_to_string(path)?)?;
        let report = field.is_closed_coeffs(&coeffs, args.tol.unwrap_or(COEFF_TOL));
        failed |= !report.closed;
        if machine {
            writeln!(out, "coeff_closed={}", report.closed).ok();
            writeln!(out, "coeff_window={}", report.window).ok();
            writeln!(out, "coeff_pairs_checked={}", report.pairs_checked).ok();
            writeln!(out, "coeff_pairs_skipped={}", report.pairs_skipped).ok();
            writeln!(out, "coeff_violations={}", report.violations.len()).ok();
            for v in &report.violations {
                writeln!(
                    out,
                    "coeff_violation n={} base={} lhs={} rhs={}",
                    v.n, v.base, v.lhs, v.rhs
                )
                .ok();
            }
        } else {
            writeln!(
                out,
                "coefficient check (window {}, {} conditions, {} skipped at the boundary): {}",
                report.window,
                report.pairs_checked,
                report.pairs_skipped,
                if report.closed { "closed" } else { "NOT closed" }
            )
            .ok();
            for v in &report.violations {
                writeln!(
                    out,
                    "  violation at n={} I=[{}]: lhs={} rhs={}",
                    v.n, v.base, v.lhs, v.rhs
                )
                .ok();
            }
        }
    }

    Ok((i32::from(failed), out))
}

fn run_gen_exact(args: &GenExactArgs, machine: bool) -> Result<(i32, String)> {
    let field = load_field(&args.field)?;
    let c = OrbitFunction::parse(&std::fs::read_to_string(&args.orbit_fn)?)?;
    if c.degree() == 0 {
        let scale: f64 = c.iter().map(|(_, v)| v).sum();
        let constant = scale * gen_exact_degree0(&field);
        let out = if machine {
            format!("degree=0 constant={constant}\n")
        } else {
            format!("exact degree-0 component: constant {constant}\n")
        };
        return Ok((0, out));
    }
    let xi = gen_exact(&field, &c, args.window)?;
    let mut out = xi.to_file_string();
    if machine {
        let symbolic = gen_exact_symbolic(&field, &c);
        let check = expansion_to_coeffs(&symbolic, c.degree(), xi.window())?;
        let agree = check == xi;
        writeln!(out, "terms={} symbolic_agreement={}", xi.len(), agree).ok();
    }
    Ok((0, out))
}

fn format_root(phase: f64) -> String {
    let re = phase.cos();
    let im = phase.sin();
    let trim = |v: f64| {
        let s = format!("{v:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    };
    if im.abs() < 5e-7 {
        trim(re)
    } else if im > 0.0 {
        format!("{}+{}i", trim(re), trim(im))
    } else {
        format!("{}-{}i", trim(re), trim(-im))
    }
}

fn run_roots(args: &RootsArgs, machine: bool) -> Result<(i32, String)> {
    let field = load_field(&args.field)?;
    let roots = unit_circle_roots(&field, args.tol);
    let mut out = String::new();
    if machine {
        writeln!(out, "roots={}", roots.len()).ok();
        for (phase, multiplicity) in &roots {
            writeln!(out, "root_phase={phase} multiplicity={multiplicity}").ok();
        }
    } else if roots.is_empty() {
        writeln!(out, "no unit-circle roots").ok();
    } else {
        for (phase, multiplicity) in &roots {
            writeln!(out, "{} (multiplicity {multiplicity})", format_root(*phase)).ok();
        }
    }
    Ok((0, out))
}

fn parse_schedule(text: &str, dim: usize) -> Result<Vec<Stage>> {
    if text == "default" {
        return Ok(default_schedule(dim));
    }
    let mut stages = Vec::new();
    for part in text.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let [n_mask, grid, truncation] = fields.as_slice() else {
            return Err(Error::Parse(format!(
                "expected n_mask:grid:truncate, got `{part}`"
            )));
        };
        stages.push(Stage {
            n_mask: n_mask
                .parse()
                .map_err(|e| Error::Parse(format!("bad mask `{n_mask}`: {e}")))?,
            grid: grid
                .parse()
                .map_err(|e| Error::Parse(format!("bad grid `{grid}`: {e}")))?,
            truncation: truncation
                .parse()
                .map_err(|e| Error::Parse(format!("bad truncation `{truncation}`: {e}")))?,
        });
    }
    if stages.is_empty() {
        return Err(Error::Parse("empty schedule".into()));
    }
    Ok(stages)
}

fn run_approximate(args: &ApproximateArgs, machine: bool) -> Result<(i32, String)> {
    let field = load_field(&args.field)?;
    let xi = CoefficientField::parse(&std::fs::read_to_string(&args.coeffs)?)?;
    let dim = xi.degree() as usize;
    let schedule = match &args.schedule {
        Some(text) => parse_schedule(text, dim)?,
        None if args.mask.is_some() || args.grid.is_some() || args.truncate.is_some() => {
            let base = default_schedule(dim)[0];
            vec![Stage {
                n_mask: args.mask.unwrap_or(base.n_mask),
                grid: args.grid.unwrap_or(base.grid),
                truncation: args.truncate.unwrap_or(base.truncation),
            }]
        }
        None => default_schedule(dim),
    };
    let results = approximate_exact_sequence(&field, &xi, &schedule)?;
    let mut out = String::new();
    if machine {
        for (i, r) in results.iter().enumerate() {
            writeln!(
                out,
                "stage={} n_mask={} grid={} truncate={} residual_l2={} mask_fraction={} spectral_residual={} invariance_defect={} support={}",
                i + 1,
                r.stage.n_mask,
                r.stage.grid,
                r.stage.truncation,
                r.residual_l2,
                r.diagnostics.mask_fraction,
                r.diagnostics.spectral_residual,
                r.diagnostics.invariance_defect,
                r.c.len()
            )
            .ok();
        }
    } else {
        writeln!(
            out,
            "{:>5} {:>7} {:>8} {:>9} {:>13} {:>14} {:>18} {:>18}",
            "stage", "n_mask", "grid", "truncate", "residual_l2", "mask_fraction", "spectral_residual", "invariance_defect"
        )
        .ok();
        for (i, r) in results.iter().enumerate() {
            writeln!(
                out,
                "{:>5} {:>7} {:>8} {:>9} {:>13.6e} {:>14.6e} {:>18.6e} {:>18.6e}",
                i + 1,
                r.stage.n_mask,
                r.stage.grid,
                r.stage.truncation,
                r.residual_l2,
                r.diagnostics.mask_fraction,
                r.diagnostics.spectral_residual,
                r.diagnostics.invariance_defect
            )
            .ok();
        }
    }
    Ok((0, out))
}

fn run_graph(args: &GraphArgs, machine: bool) -> Result<(i32, String)> {
    let graph = OrbitGraph::build(args.degree, args.bound);
    let mut exit = 0;
    let mut out = String::new();
    if let Some(path) = &args.coeffs {
        let coeffs = CoefficientField::parse(&std::fs::read_to_string(path)?)?;
        let weighted = graph.assign_weights(&coeffs)?;
        out.push_str(&weighted.dump());
        let report = weighted.cycle_check()?;
        writeln!(out, "component={}", weighted.component_count()).ok();
        writeln!(out, "cycles_checked={}", report.cycles_checked).ok();
        writeln!(out, "max_abs_cycle_sum={}", report.max_abs_cycle_sum).ok();
        writeln!(out, "cocycle={}", report.ok).ok();
        if let (false, Some(worst)) = (report.ok, &report.worst_cycle) {
            if machine {
                writeln!(out, "worst_cycle_sum={}", worst.sum).ok();
                writeln!(
                    out,
                    "worst_cycle_edges={}",
                    worst
                        .edge_ids
                        .iter()
                        .map(|id| id.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
                .ok();
            } else {
                writeln!(out, "worst cycle (sum {}):", worst.sum).ok();
                for &id in &worst.edge_ids {
                    let e = &weighted.edges()[id];
                    writeln!(
                        out,
                        "  {} -> {} weight {}",
                        weighted.vertices()[e.src],
                        weighted.vertices()[e.dst],
                        e.weight.unwrap_or(0.0)
                    )
                    .ok();
                }
            }
        }
        if !report.ok {
            exit = 1;
        }
    } else {
        out.push_str(&graph.dump());
        writeln!(out, "component={}", graph.component_count()).ok();
    }
    Ok((exit, out))
}

fn run_validate(args: &ValidateArgs, machine: bool) -> Result<(i32, String)> {
    let suites = validation_suites(args.tol);
    let mut out = String::new();
    let mut failed = false;
    for (name, ok, detail) in &suites {
        failed |= !ok;
        if machine {
            writeln!(out, "suite={name} status={} detail={detail}", if *ok { "ok" } else { "fail" }).ok();
        } else {
            writeln!(out, "[{}] {name}: {detail}", if *ok { "ok" } else { "FAIL" }).ok();
        }
    }
    Ok((i32::from(failed), out))
}

fn validation_suites(tol: f64) -> Vec<(&'static str, bool, String)> {
    use crate::multiindex::MultiIndex;
    use crate::symmetry::canonicalize;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut suites = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0C);

    // orbit bookkeeping: well-definedness and canonical agreement
    {
        let mut ok = true;
        for _ in 0..2000 {
            let pairs: Vec<(i64, u32)> = (0..rng.gen_range(0..4))
                .map(|_| (rng.gen_range(-6..=6), rng.gen_range(1..=2)))
                .collect();
            let index = MultiIndex::from_pairs(pairs);
            let cone = index.cone_point();
            ok &= cone.is_cone();
            ok &= canonicalize(&index.encode()) == cone;
            ok &= index.orbit().iter().all(|j| j.cone_point() == cone);
        }
        suites.push(("multiindex_orbits", ok, "2000 random multi-indices".into()));
    }

    // group relations and order
    {
        let ok = (2..=4).all(verify_group_relations);
        suites.push(("symmetry_relations", ok, "N=2..4 relations and coset order".into()));
    }

    // Hermite orthogonality
    {
        let mut max_dev = 0.0f64;
        let mut indices = vec![MultiIndex::zero()];
        for d in 1..=3u32 {
            for t in crate::multiindex::enumerate_sorted_tuples(d, 0, 1) {
                indices.push(MultiIndex::decode(&t));
            }
        }
        for a in &indices {
            for b in &indices {
                let ea = HermiteExpansion::from_terms([(a.clone(), 1.0)]);
                let eb = HermiteExpansion::from_terms([(b.clone(), 1.0)]);
                let expected = if a == b {
                    a.iter()
                        .map(|(_, c)| 1.0 / crate::hermite::factorial(c))
                        .product()
                } else {
                    0.0
                };
                max_dev = max_dev.max((crate::hermite::inner_product(&ea, &eb) - expected).abs());
            }
        }
        suites.push((
            "hermite_orthogonality",
            max_dev <= 1e-10,
            format!("max deviation {max_dev:.3e}"),
        ));
    }

    // closedness checks on the known example family
    {
        let x0 = VectorField::x0();
        let y0 = VectorField::y0();
        let mut ok = x0
            .is_closed_symbolic(&HermiteExpansion::x(0), 3, 0.0)
            .closed;
        ok &= x0
            .is_closed_symbolic(
                &(HermiteExpansion::x(2) + HermiteExpansion::x(-2)),
                4,
                0.0,
            )
            .closed;
        ok &= !y0.is_closed_symbolic(&HermiteExpansion::x(0), 3, 0.0).closed;
        for _ in 0..20 {
            let c = OrbitFunction::new(
                1,
                [(crate::multiindex::LatticePoint::new(vec![rng.gen_range(0..3)]), rng.gen_range(-2.0..2.0))],
            )
            .expect("cone key");
            let xi = gen_exact(&x0, &c, 2).expect("window expands");
            ok &= x0.is_closed_coeffs(&xi, tol).closed;
        }
        suites.push(("field_closedness", ok, "example family and 20 generated fields".into()));
    }

    // construction equivalence
    {
        let mut max_diff = 0.0f64;
        let fields = [VectorField::y0(), VectorField::x0(), VectorField::d3_minus_d0()];
        for trial in 0..20 {
            let field = &fields[trial % fields.len()];
            let degree = rng.gen_range(1..=2u32);
            let cones = enumerate_orbits(degree, 2);
            let c = OrbitFunction::new(
                degree,
                (0..2).map(|_| {
                    (
                        cones[rng.gen_range(0..cones.len())].clone(),
                        rng.gen_range(-2.0..2.0),
                    )
                }),
            )
            .expect("cone keys");
            let lattice = gen_exact(field, &c, 1).expect("window expands");
            let symbolic =
                expansion_to_coeffs(&gen_exact_symbolic(field, &c), degree, lattice.window())
                    .expect("fits window");
            for (z, v) in lattice.iter() {
                max_diff = max_diff.max((v - symbolic.value_at_point(z)).abs());
            }
            for (z, v) in symbolic.iter() {
                max_diff = max_diff.max((v - lattice.value_at_point(z)).abs());
            }
        }
        suites.push((
            "exactgen_equivalence",
            max_diff <= 1e-12,
            format!("max coefficient diff {max_diff:.3e}"),
        ));
    }

    // transport identities
    {
        let mut ok = true;
        for field in [VectorField::y0(), VectorField::x0()] {
            let c = crate::transport::LatticeFunction::new(
                1,
                (0..6).map(|_| {
                    (
                        crate::multiindex::LatticePoint::new(vec![rng.gen_range(-6..=6)]),
                        rng.gen_range(-2.0..2.0),
                    )
                }),
            )
            .expect("dim 1");
            ok &= crate::transport::dft_diagonalization_check(&field, &c, 64) <= 1e-10;
        }
        suites.push(("transport_symbol", ok, "DFT diagonalization at M=64".into()));
    }

    // graph cocycle condition
    {
        let y0 = VectorField::y0();
        let graph = OrbitGraph::build(1, 6);
        let mut ok = true;
        for _ in 0..10 {
            let c = OrbitFunction::new(
                1,
                [(crate::multiindex::LatticePoint::new(vec![rng.gen_range(0..3)]), rng.gen_range(-2.0..2.0))],
            )
            .expect("cone key");
            let xi = gen_exact(&y0, &c, 2).expect("window expands");
            ok &= graph
                .assign_weights(&xi)
                .expect("degree matches")
                .cycle_check()
                .expect("weighted")
                .ok;
        }
        let x0_coeffs = expansion_to_coeffs(&HermiteExpansion::x(0), 1, 8).expect("in window");
        ok &= !graph
            .assign_weights(&x0_coeffs)
            .expect("degree matches")
            .cycle_check()
            .expect("weighted")
            .ok;
        suites.push(("graph_cocycle", ok, "closed weights cancel, x_0 fails".into()));
    }

    suites
}
