//! `icoflux`: group tables, invariants, energies, branch reports, numeric
//! minima and `(a, d)` phase scans for the icosahedral capsid model.
//!
//! Exit status: 0 on success, 1 when a validation check fails, 2 on bad
//! flags or unreadable input.

mod params;
mod render;

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use icoflux_core::algebra::text::format_poly;
use icoflux_core::algebra::Rational;
use icoflux_core::bifurcation::{
    branch_solutions_exact, compare_with_branches, minimize_restarts, scan_phase_diagram, BranchReport,
    CriticalPoint, GridRange, MinimizeOptions, PhaseCell, ScanConfig,
};
use icoflux_core::energy::{hessian_spectrum_origin, CompiledEnergy, PARAM_NAMES};
use icoflux_core::group::{IcosahedralGroup, NFACES};
use icoflux_core::invariants::{invariant_basis, variable_names};
use icoflux_core::irreps::{check_block_diagonalization, reference_basis, reference_basis_inverse, validate_reference_basis, IrrepId};
use icoflux_core::linalg::Spectrum;
use icoflux_core::report::CheckResult;
use icoflux_core::selftest;

use params::ParamsFile;
use render::{num, nums, write_csv, write_json, Format};

#[derive(Parser, Debug)]
#[command(name = "icoflux", version, about = "Icosahedral Landau energy toolkit for capsid expansion")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The rotation group acting on the twelve faces.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Irreducible blocks of the face representation.
    #[command(subcommand)]
    Irreps(IrrepsCmd),
    /// Basis of the invariant polynomials of one irrep in one degree.
    Invariants {
        /// `1`..`5` or `rho1`..`rho5`.
        #[arg(long)]
        irrep: IrrepId,
        #[arg(long)]
        degree: u32,
    },
    /// Inspect the energy for one parameter set.
    Energy {
        #[command(flatten)]
        params: ParamsArg,
        /// Print the expanded polynomial in x1..x12.
        #[arg(long)]
        dump: bool,
        /// Evaluate at a point: twelve comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        at: Option<Vec<f64>>,
    },
    /// Closed-form branches with existence, admissibility and stability.
    Branches {
        #[command(flatten)]
        params: ParamsArg,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Distinct critical points reached from random starts.
    Minimize {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        /// Defaults to the params file's `seed`, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Starts are uniform in [-L, L]^12; default from the branch amplitudes.
        #[arg(long)]
        half_width: Option<f64>,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Region labels over an (a, d) grid.
    Scan {
        /// `start:stop:step`, inclusive; overrides `a_range` in the params file.
        #[arg(long, allow_hyphen_values = true)]
        a_range: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d_range: Option<String>,
        /// Base parameters; `a` and `d` may be omitted.
        #[arg(long)]
        params: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cross-check each cell with this many random starts.
        #[arg(long)]
        verify_restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Every built-in check, one line each.
    Selftest {
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// All 60 elements in cycle notation with their classes.
    Dump,
}

#[derive(Subcommand, Debug)]
enum IrrepsCmd {
    /// Check the stored change of basis against the face representation.
    Validate {
        /// Also print P and its inverse exactly.
        #[arg(long = "dump-P", alias = "dump-p")]
        dump_p: bool,
    },
}

#[derive(Args, Debug)]
struct ParamsArg {
    /// TOML file with a, b, c, d, c1..c5.
    #[arg(long)]
    params: PathBuf,
}

/// Failed checks; maps to exit status 1.
#[derive(Debug)]
struct ChecksFailed(Vec<String>);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "failed checks: {}", self.0.join("; "))
    }
}

impl std::error::Error for ChecksFailed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // help and version exit 0, usage errors 2
        Err(e) => e.exit(),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = configure_threads().and_then(|()| run(cli, &mut out));
    let flushed = out.flush();
    match result {
        Ok(()) => match flushed {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("icoflux: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("icoflux: {e:#}");
            if e.downcast_ref::<ChecksFailed>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// `ICOFLUX_THREADS` caps the worker pool.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("ICOFLUX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| anyhow!("ICOFLUX_THREADS={v:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let fmt = |default: Format, json: bool| if json { Format::Json } else { cli.format.unwrap_or(default) };
    match &cli.command {
        Command::Group(GroupCmd::Dump) => group_dump(out, fmt(Format::Text, false)),
        Command::Irreps(IrrepsCmd::Validate { dump_p }) => irreps_validate(out, fmt(Format::Text, false), *dump_p),
        Command::Invariants { irrep, degree } => invariants(out, fmt(Format::Text, false), *irrep, *degree),
        Command::Energy { params, dump, at } => energy(out, fmt(Format::Text, false), params, *dump, at.as_deref()),
        Command::Branches { params, json } => branches(out, fmt(Format::Text, *json), params),
        Command::Minimize { params, starts, seed, half_width, json } => {
            minimize(out, fmt(Format::Text, *json), params, *starts, *seed, *half_width)
        }
        Command::Scan { a_range, d_range, params, out: path, verify_restarts, seed } => {
            let format = fmt(Format::Csv, false);
            let cells = scan(a_range.as_deref(), d_range.as_deref(), params, *verify_restarts, *seed)?;
            match path {
                Some(p) => {
                    let file = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    let mut w = BufWriter::new(file);
                    write_cells(&mut w, format, &cells, verify_restarts.is_some())?;
                    w.flush()?;
                    writeln!(out, "wrote {} cells to {}", cells.len(), p.display())?;
                }
                None => write_cells(out, format, &cells, verify_restarts.is_some())?,
            }
            Ok(())
        }
        Command::Selftest { json } => checks(out, fmt(Format::Text, *json), &selftest::run_all()),
    }
}

fn load_exact(arg: &ParamsArg) -> Result<[Rational; 9]> {
    ParamsFile::load(&arg.params)?.exact(&[])
}

fn compile(exact: &[Rational; 9]) -> Result<CompiledEnergy> {
    Ok(CompiledEnergy::build_exact(exact.clone())?)
}

fn group_dump(out: &mut dyn Write, format: Format) -> Result<()> {
    let g = IcosahedralGroup::get();
    let rows: Vec<(usize, &str, u32, String)> = g
        .elements()
        .iter()
        .enumerate()
        .map(|(i, p)| (i + 1, g.class_of(i).label(), p.order(), p.to_string()))
        .collect();
    match format {
        Format::Text => {
            for (i, class, order, cycles) in &rows {
                writeln!(out, "{i:>2}  {class:<8} order {order}  {cycles}")?;
            }
        }
        Format::Csv => write_csv(
            out,
            &["index", "class", "order", "cycles"],
            rows.iter().map(|(i, c, o, cy)| vec![i.to_string(), c.to_string(), o.to_string(), cy.clone()]),
        )?,
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(i, c, o, cy)| serde_json::json!({"index": i, "class": c, "order": o, "cycles": cy}))
                .collect();
            write_json(out, &items)?;
        }
    }
    Ok(())
}

/// Prints the checks and fails if any did.
fn checks(out: &mut dyn Write, format: Format, results: &[CheckResult]) -> Result<()> {
    match format {
        Format::Text => {
            for c in results {
                writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            let failed = results.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {} failed", results.len(), failed)?;
        }
        Format::Csv => write_csv(
            out,
            &["name", "passed", "detail"],
            results.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]),
        )?,
        Format::Json => write_json(out, results)?,
    }
    let failed: Vec<String> = results.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(ChecksFailed(failed).into())
    }
}

fn irreps_validate(out: &mut dyn Write, format: Format, dump_p: bool) -> Result<()> {
    let mut results = validate_reference_basis();
    results.extend(check_block_diagonalization());
    if dump_p {
        match format {
            Format::Json => {
                let rows = |m: &icoflux_core::Q5Matrix| -> Vec<Vec<String>> {
                    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
                };
                let failed: Vec<String> = results.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
                write_json(
                    out,
                    &serde_json::json!({"checks": results, "P": rows(reference_basis()), "P_inverse": rows(reference_basis_inverse())}),
                )?;
                return if failed.is_empty() { Ok(()) } else { Err(ChecksFailed(failed).into()) };
            }
            _ => {
                writeln!(out, "P =\n{}", reference_basis())?;
                writeln!(out, "P^-1 =\n{}", reference_basis_inverse())?;
            }
        }
    }
    checks(out, format, &results)
}

fn invariants(out: &mut dyn Write, format: Format, irrep: IrrepId, degree: u32) -> Result<()> {
    if degree == 0 {
        bail!("degree must be at least 1");
    }
    let basis = invariant_basis(irrep, degree)?;
    let names = variable_names(irrep);
    let polys: Vec<String> = basis.polynomials.iter().map(|p| format_poly(p, names)).collect();
    match format {
        Format::Text => {
            writeln!(out, "{irrep} degree {degree}: dimension {}", basis.dim())?;
            for (j, p) in polys.iter().enumerate() {
                writeln!(out, "  [{}] {p}", j + 1)?;
            }
        }
        Format::Csv => write_csv(
            out,
            &["irrep", "degree", "index", "polynomial"],
            polys.iter().enumerate().map(|(j, p)| vec![irrep.to_string(), degree.to_string(), (j + 1).to_string(), p.clone()]),
        )?,
        Format::Json => write_json(
            out,
            &serde_json::json!({"irrep": irrep.to_string(), "degree": degree, "variables": names, "basis": polys}),
        )?,
    }
    Ok(())
}

fn energy(out: &mut dyn Write, format: Format, arg: &ParamsArg, dump: bool, at: Option<&[f64]>) -> Result<()> {
    let exact = load_exact(arg)?;
    let ce = compile(&exact)?;
    let face_names: Vec<String> = (1..=NFACES).map(|i| format!("x{i}")).collect();
    let face_refs: Vec<&str> = face_names.iter().map(String::as_str).collect();
    let symbolic = dump.then(|| format_poly(ce.symbolic(), &face_refs));
    let point = match at {
        Some(x) if x.len() != NFACES => bail!("--at needs {NFACES} values, got {}", x.len()),
        Some(x) => {
            let (e, g) = ce.energy_and_gradient(x);
            Some((x.to_vec(), e, g, Spectrum::of(&ce.hessian(x))))
        }
        None => None,
    };
    let origin = hessian_spectrum_origin(&ce);
    match format {
        Format::Text => {
            let ps: Vec<String> = PARAM_NAMES.iter().zip(&exact).map(|(n, v)| format!("{n}={v}")).collect();
            writeln!(out, "parameters: {}", ps.join(" "))?;
            writeln!(out, "origin hessian: {}", clusters(&origin))?;
            if let Some(s) = &symbolic {
                writeln!(out, "E = {s}")?;
            }
            if let Some((x, e, g, s)) = &point {
                writeln!(out, "at [{}]", nums(x))?;
                writeln!(out, "  energy {}", num(*e))?;
                writeln!(out, "  gradient [{}]", nums(g))?;
                writeln!(out, "  hessian {}", clusters(s))?;
            }
        }
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = PARAM_NAMES.iter().zip(&exact).map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
            if let Some(s) = &symbolic {
                rows.push(vec!["E".into(), s.clone()]);
            }
            if let Some((_, e, g, _)) = &point {
                rows.push(vec!["energy".into(), num(*e)]);
                rows.extend(g.iter().enumerate().map(|(i, v)| vec![format!("dE/dx{}", i + 1), num(*v)]));
            }
            write_csv(out, &["key", "value"], rows)?;
        }
        Format::Json => {
            let params: serde_json::Map<String, serde_json::Value> =
                PARAM_NAMES.iter().zip(&exact).map(|(n, v)| (n.to_string(), v.to_string().into())).collect();
            let mut doc = serde_json::json!({"params": params, "origin_spectrum": origin});
            if let Some(s) = symbolic {
                doc["energy_polynomial"] = s.into();
            }
            if let Some((x, e, g, s)) = point {
                doc["at"] = serde_json::json!({"x": x, "energy": e, "gradient": g, "spectrum": s});
            }
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

fn clusters(s: &Spectrum) -> String {
    s.clusters.iter().map(|c| format!("{} x{}", num(c.value), c.multiplicity)).collect::<Vec<_>>().join(", ")
}

fn branch_reports(exact: &[Rational; 9]) -> Result<Vec<BranchReport>> {
    let ce = compile(exact)?;
    Ok(branch_solutions_exact(ce.params(), exact))
}

fn branches(out: &mut dyn Write, format: Format, arg: &ParamsArg) -> Result<()> {
    let reports = branch_reports(&load_exact(arg)?)?;
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let amps = |r: &BranchReport| r.amplitudes.as_deref().map(nums).unwrap_or_default();
    match format {
        Format::Text => {
            for r in &reports {
                if !r.exists {
                    writeln!(out, "{:<12} absent", r.id.to_string())?;
                    continue;
                }
                let mut flags = vec![if r.admissible { "admissible" } else { "inadmissible" }];
                if r.boundary {
                    flags.push("boundary");
                }
                flags.push(if r.stable { "stable" } else { "unstable" });
                writeln!(
                    out,
                    "{:<12} energy {}  amplitudes ({})  orbit {}  {}",
                    r.id.to_string(),
                    opt(r.energy),
                    amps(r),
                    r.orbit_size,
                    flags.join(" ")
                )?;
            }
        }
        Format::Csv => write_csv(
            out,
            &["branch", "exists", "admissible", "boundary", "stable", "energy", "orbit_size", "amplitudes"],
            reports.iter().map(|r| {
                vec![
                    r.id.to_string(),
                    r.exists.to_string(),
                    r.admissible.to_string(),
                    r.boundary.to_string(),
                    r.stable.to_string(),
                    opt(r.energy),
                    r.orbit_size.to_string(),
                    amps(r),
                ]
            }),
        )?,
        Format::Json => write_json(out, &reports)?,
    }
    Ok(())
}

fn minimize(
    out: &mut dyn Write,
    format: Format,
    arg: &ParamsArg,
    starts: usize,
    seed: Option<u64>,
    half_width: Option<f64>,
) -> Result<()> {
    let file = ParamsFile::load(&arg.params)?;
    let exact = file.exact(&[])?;
    let ce = compile(&exact)?;
    let mut opts = MinimizeOptions::new(starts, seed.or(file.seed).unwrap_or(0));
    opts.half_width = half_width;
    let result = minimize_restarts(&ce, &opts)?;
    match format {
        Format::Text => {
            let reports = branch_solutions_exact(ce.params(), &exact);
            let cmp = compare_with_branches(&result, &reports, opts.dedup_tol);
            writeln!(
                out,
                "{} starts, seed {}, half-width {}: {} converged, {} dropped, {} distinct points",
                starts,
                opts.seed,
                num(result.half_width),
                result.converged,
                result.dropped,
                result.points.len()
            )?;
            for (i, p) in result.points.iter().enumerate() {
                writeln!(out, "{:>3}  {}", i + 1, point_line(p))?;
            }
            writeln!(
                out,
                "closed-form admissible minima {}, found {}, missing {}, unexpected {}",
                cmp.expected,
                cmp.found,
                cmp.missing.len(),
                cmp.unexpected.len()
            )?;
        }
        Format::Csv => {
            let mut header = vec!["energy", "isotropy", "stabilizer_order", "stable", "admissible", "boundary", "gradient_norm"];
            let names: Vec<String> = (1..=NFACES).map(|i| format!("x{i}")).collect();
            header.extend(names.iter().map(String::as_str));
            write_csv(
                out,
                &header,
                result.points.iter().map(|p| {
                    let mut row = vec![
                        num(p.energy),
                        p.isotropy.to_string(),
                        p.stabilizer_order.to_string(),
                        p.stable.to_string(),
                        p.admissible.to_string(),
                        p.boundary.to_string(),
                        num(p.gradient_norm),
                    ];
                    row.extend(p.coords.iter().map(|&v| num(v)));
                    row
                }),
            )?;
        }
        Format::Json => write_json(out, &result.points)?,
    }
    Ok(())
}

fn point_line(p: &CriticalPoint) -> String {
    let kind = match (p.stable, p.admissible) {
        (true, true) => "admissible minimum",
        (true, false) => "minimum, negative faces",
        (false, _) => "saddle",
    };
    format!("E {}  {} (orbit {})  {}  [{}]", num(p.energy), p.isotropy, p.orbit_size(), kind, nums(&p.coords))
}

fn scan(
    a_range: Option<&str>,
    d_range: Option<&str>,
    params: &Path,
    verify_restarts: Option<usize>,
    seed: Option<u64>,
) -> Result<Vec<PhaseCell>> {
    let file = ParamsFile::load(params)?;
    let zero = Rational::from_integer(0.into());
    let base = file.exact(&[("a", zero.clone()), ("d", zero)])?;
    let grid = |flag: Option<&str>, stored: &Option<String>, name: &str| -> Result<GridRange> {
        let src = flag.or(stored.as_deref()).ok_or_else(|| anyhow!("no {name} range: pass --{name}-range or set {name}_range"))?;
        src.parse().with_context(|| format!("--{name}-range"))
    };
    let config = ScanConfig {
        base,
        a: grid(a_range, &file.a_range, "a")?,
        d: grid(d_range, &file.d_range, "d")?,
        verify_restarts,
        seed: seed.or(file.seed).unwrap_or(0),
    };
    let cells = scan_phase_diagram(&config)?;
    if let Some(bad) = cells.iter().find(|c| c.oracle_agrees == Some(false)) {
        eprintln!("icoflux: numeric minima disagree with the closed form at a={}, d={}", num(bad.a), num(bad.d));
    }
    Ok(cells)
}

fn write_cells(out: &mut dyn Write, format: Format, cells: &[PhaseCell], numeric: bool) -> Result<()> {
    match format {
        Format::Json => write_json(out, cells),
        Format::Csv => {
            let mut header = vec!["a", "d", "region_label", "n_minima_closed_form"];
            if numeric {
                header.push("n_minima_numeric");
            }
            write_csv(
                out,
                &header,
                cells.iter().map(|c| {
                    let mut row = vec![num(c.a), num(c.d), c.label.clone(), c.n_minima_closed_form.to_string()];
                    if let Some(n) = c.n_minima_numeric {
                        row.push(n.to_string());
                    }
                    row
                }),
            )
        }
        Format::Text => {
            for c in cells {
                write!(out, "a={} d={}  {}  {} minima", num(c.a), num(c.d), c.label, c.n_minima_closed_form)?;
                if let Some(n) = c.n_minima_numeric {
                    write!(out, " (numeric {n})")?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn irrep_flag_accepts_both_spellings() {
        let cli = Cli::try_parse_from(["icoflux", "invariants", "--irrep", "rho5", "--degree", "4"]).unwrap();
        assert!(matches!(cli.command, Command::Invariants { irrep: IrrepId::Rho5, degree: 4 }));
        assert!(Cli::try_parse_from(["icoflux", "invariants", "--irrep", "6", "--degree", "4"]).is_err());
    }

    #[test]
    fn a_failed_check_is_reported_by_name() {
        let results = [CheckResult::pass("one", ""), CheckResult::fail("two", "off by one")];
        let mut buf = Vec::new();
        let err = checks(&mut buf, Format::Text, &results).unwrap_err();
        assert_eq!(err.downcast_ref::<ChecksFailed>().unwrap().0, vec!["two".to_string()]);
        assert!(String::from_utf8(buf).unwrap().contains("FAIL two: off by one"));
    }

    #[test]
    fn negative_ranges_parse_as_values() {
        let cli = Cli::try_parse_from(["icoflux", "scan", "--a-range", "-5:5:1", "--d-range", "-1:1:1", "--params", "p.toml"]).unwrap();
        let Command::Scan { a_range, .. } = cli.command else { panic!() };
        assert_eq!(a_range.as_deref(), Some("-5:5:1"));
    }
}
