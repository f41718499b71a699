use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ehcheck_core::checks::{verify_spec, Check, Tolerances};
use ehcheck_core::einstein_5d::{type1_obstruction_report, type2_uniqueness_report, UniquenessBranch};
use ehcheck_core::energy::{default_r_max, total_energy};
use ehcheck_core::families::{
    admissibility, bolt_root_residual, construct, smoothness_residual, Admissibility, FamilySpec,
};
use ehcheck_core::sweep::{map_ordered, run_sweep, Execution, SweepGrid, DEFAULT_MAX_SPECS};
use ehcheck_core::{Error, Family};

mod range;
mod report;

use range::{parse_floats, parse_ints, Floats, Ints};
use report::{ConfigEcho, Quantity, Report, Runtime, SpecResult, Summary, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "ehcheck", version, about = "Construct and verify Eguchi-Hanson type metrics with negative scalar curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form bolt radius r0 and constant A.
    Construct(Common),
    /// Full curvature, smoothness and oracle suite.
    Verify(Common),
    /// Grid scan, one row per (B, n, C).
    Scan(Common),
    /// Total energy from the extrapolated mass aspect.
    Energy(Common),
    /// Static five-dimensional extension with a chosen lapse.
    EinsteinCheck(EinsteinArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "type1", alias = "type-I", alias = "type-i")]
    TypeI,
    #[value(name = "type2", alias = "type-II", alias = "type-ii")]
    TypeII,
    #[value(name = "zero-scalar")]
    ZeroScalar,
    #[value(name = "classic-eh", alias = "eh")]
    ClassicEh,
    Hyperbolic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::TypeI => Family::TypeI,
            FamilyArg::TypeII => Family::TypeII,
            FamilyArg::ZeroScalar => Family::ZeroScalar,
            FamilyArg::ClassicEh => Family::ClassicEh,
            FamilyArg::Hyperbolic => Family::Hyperbolic,
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Curvature scale: value, list, or lo:hi:count.
    #[arg(long = "B", value_parser = parse_floats, default_value = "1")]
    b: Floats,
    /// Quotient order: value, list, or lo:hi.
    #[arg(long = "n", value_parser = parse_ints, default_value = "3")]
    n: Ints,
    /// Integration constant: value, list, or lo:hi:count.
    #[arg(long = "C", value_parser = parse_floats, default_value = "0", allow_hyphen_values = true)]
    c: Floats,
    /// Write the JSON report here (atomically).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV report here (atomically).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, value_parser = positive, default_value_t = Tolerances::default().residual)]
    tol_residual: f64,
    #[arg(long, value_parser = positive, default_value_t = Tolerances::default().derivative)]
    tol_derivative: f64,
    #[arg(long, value_parser = positive, default_value_t = Tolerances::default().energy)]
    tol_energy: f64,
    /// Outer radius of the energy extrapolation (default 1e6 r0).
    #[arg(long, value_parser = positive)]
    r_max: Option<f64>,
    /// Worker threads, 0 for one per core.
    #[arg(long, env = "EHCHECK_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SPECS)]
    max_specs: usize,
    #[arg(long, default_value_t = SCHEMA_VERSION, value_parser = clap::value_parser!(u32).range(1..=1))]
    schema_version: u32,
}

#[derive(Args)]
struct EinsteinArgs {
    #[command(flatten)]
    common: Common,
    /// Lapse coefficient c1.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c1: f64,
    /// Lapse coefficient c2.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c2: f64,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            residual: self.tol_residual,
            derivative: self.tol_derivative,
            energy: self.tol_energy,
            ..Tolerances::default()
        }
    }

    fn execution(&self) -> Execution {
        match self.workers {
            0 => Execution::default(),
            1 => Execution::Sequential,
            w => Execution::Parallel { workers: w },
        }
    }

    fn grid(&self) -> SweepGrid {
        SweepGrid {
            family: self.family.into(),
            b: self.b.0.clone(),
            n: self.n.0.clone(),
            c: self.c.0.clone(),
        }
    }
}

struct Ctx {
    family: Family,
    tol: Tolerances,
    r_max: Option<f64>,
    lapse: [f64; 2],
}

fn r0_formula(spec: &FamilySpec) -> &'static str {
    match (spec.family, spec.admissibility) {
        (Family::TypeI, _) => "r0^2 = (n - 2 + sqrt((n - 2)^2 - 12 B C)) / (6 B)",
        (Family::TypeII, Admissibility::CaseTrig) => {
            "r0^2 = t + (n^2 - 4)/(12 B), t the largest cosine root of the depressed bolt cubic"
        }
        (Family::TypeII, _) => "r0^2 = t + (n^2 - 4)/(12 B), t the Cardano root of the depressed bolt cubic",
        (Family::ZeroScalar, _) => "r0 = (B / (n - 1))^(1/4)",
        (Family::ClassicEh, _) => "r0 = B^(1/4)",
        (Family::Hyperbolic, _) => "no bolt",
    }
}

fn a_formula(family: Family) -> &'static str {
    match family {
        Family::TypeI => "A = (1 - 2n + sqrt((n - 2)^2 - 12 B C)) r0^4 / 3",
        Family::TypeII => "A = -r0^4 - sqrt(1 + B r0^2) C",
        Family::ZeroScalar => "A = -((n - 2)/2) sqrt(B / (n - 1))",
        Family::ClassicEh | Family::Hyperbolic => "A = 0",
    }
}

/// Constructs the spec and records r0, A and the bolt checks.
fn constructed(ctx: &Ctx, b: f64, n: u32, c: f64) -> (SpecResult, Option<FamilySpec>) {
    let mut res = SpecResult::new(b, n, c, admissibility(ctx.family, b, n, c).code());
    let spec = match construct(ctx.family, b, n, c) {
        Ok(s) => s,
        Err(e) => {
            res.fail(&e);
            return (res, None);
        }
    };
    res.admissibility = spec.admissibility.code();
    let mut r0 = Quantity::new(spec.r0, r0_formula(&spec));
    let mut a = Quantity::new(spec.a, a_formula(spec.family));
    if spec.family != Family::Hyperbolic {
        let root = bolt_root_residual(&spec);
        let smooth = smoothness_residual(&spec) / f64::from(spec.n);
        r0 = r0.checked(root, ctx.tol.residual);
        a = a.checked(smooth, ctx.tol.smoothness);
        res.push_checks([
            Check::at_most("bolt-root", root, ctx.tol.residual),
            Check::at_most("bolt-smoothness", smooth, ctx.tol.smoothness),
        ]);
    }
    res.quantities.insert("r0", r0);
    res.quantities.insert("A", a);
    res.quantities.insert("psi_period", Quantity::new(spec.psi_period, "4 pi / n"));
    (res, Some(spec))
}

fn cmd_construct(ctx: &Ctx, b: f64, n: u32, c: f64) -> SpecResult {
    constructed(ctx, b, n, c).0
}

fn cmd_verify(ctx: &Ctx, b: f64, n: u32, c: f64) -> SpecResult {
    let (mut res, spec) = constructed(ctx, b, n, c);
    if let Some(spec) = spec {
        res.checks.clear();
        match verify_spec(&spec, &ctx.tol) {
            Ok(checks) => res.push_checks(checks),
            Err(e) => res.fail(&e),
        }
    }
    res
}

fn cmd_energy(ctx: &Ctx, b: f64, n: u32, c: f64) -> SpecResult {
    let (mut res, spec) = constructed(ctx, b, n, c);
    let Some(spec) = spec else { return res };
    let r_max = ctx.r_max.unwrap_or_else(|| default_r_max(&spec));
    match total_energy(&spec, r_max, ctx.tol.energy) {
        Ok(rep) => {
            res.quantities.insert(
                "E_raw",
                Quantity::new(rep.raw_limit, "(1 / 4 Vol) lim of the mass-aspect slice integral, power-law extrapolation")
                    .checked(rep.relative_error, ctx.tol.energy),
            );
            res.quantities.insert("E_paper", Quantity::new(rep.closed_form, "A sqrt(B)"));
            if let Some(kappa) = rep.kappa {
                res.quantities.insert("kappa", Quantity::new(kappa, "E_raw / (A sqrt(B))"));
            }
            res.quantities.insert("volume", Quantity::new(rep.volume_factor, "Vol(S^3 / Z_n) = 2 pi^2 / n"));
            res.quantities.insert("r_max", Quantity::new(r_max, "outer extrapolation radius"));
            let mut checks = vec![Check::at_most("energy-extrapolation", rep.relative_error, ctx.tol.energy)];
            if spec.a < 0.0 {
                checks.push(Check {
                    name: "energy-sign",
                    value: rep.raw_limit,
                    tolerance: 0.0,
                    pass: rep.raw_limit < 0.0,
                });
            }
            res.push_checks(checks);
        }
        Err(e) => res.fail(&e),
    }
    res
}

fn cmd_einstein(ctx: &Ctx, b: f64, n: u32, c: f64) -> SpecResult {
    let [c1, c2] = ctx.lapse;
    let mut res = SpecResult::new(b, n, c, admissibility(ctx.family, b, n, c).code());
    let vacuum_tol = ctx.tol.curvature * b.max(1.0);
    let outcome = match ctx.family {
        Family::TypeI => type1_obstruction_report(b, n, c, c1, c2).map(|rep| {
            res.quantities.insert(
                "angular_balance_max",
                Quantity::new(rep.max_angular_balance(), "(f f') v' - (4C / r^4) v"),
            );
            res.quantities.insert(
                "radial_balance_max",
                Quantity::new(rep.max_radial_balance(), "f^2 v'' - (f^2 / r) v'"),
            );
            res.quantities.insert("required_R00", Quantity::new(rep.required_r00, "-(2/3) Lambda = 4B"));
            (rep.spec, rep.frame_mismatch, rep.einstein_residual, false)
        }),
        Family::TypeII => type2_uniqueness_report(b, n, c, c1, c2).map(|rep| {
            res.quantities.insert(
                "constraint_max",
                Quantity::new(rep.max_constraint(), "C (4 + 3 B r^2) c1 - 4 A c2"),
            );
            res.quantities.insert(
                "radial_balance_max",
                Quantity::new(rep.max_radial_balance(), "h^2 v'' - (h^2/r + f' h^2/f - h' h) v'"),
            );
            res.detail = Some(format!("branch: {}", match rep.branch {
                UniquenessBranch::HyperbolicLapse => "hyperbolic-lapse",
                UniquenessBranch::ConstantLapse => "constant-lapse",
                UniquenessBranch::Violated => "violated",
            }));
            (rep.spec, rep.frame_mismatch, rep.einstein_residual, c == 0.0 && c2 == 0.0 && c1 != 0.0)
        }),
        _ => unreachable!("family checked before dispatch"),
    };
    match outcome {
        Ok((spec, mismatch, residual, vacuum_expected)) => {
            res.admissibility = spec.admissibility.code();
            res.quantities.insert("r0", Quantity::new(spec.r0, r0_formula(&spec)));
            res.quantities.insert("A", Quantity::new(spec.a, a_formula(spec.family)));
            res.quantities.insert(
                "einstein_residual",
                Quantity::new(residual, "max |R~ab - (2/3) Lambda g~ab| with Lambda = -6B").checked(residual, vacuum_tol),
            );
            res.push_checks([
                Check::at_most("frame-balance", mismatch, ctx.tol.curvature),
                Check {
                    name: if vacuum_expected { "vacuum-extension" } else { "no-vacuum-extension" },
                    value: residual,
                    tolerance: vacuum_tol,
                    pass: (residual <= vacuum_tol) == vacuum_expected,
                },
            ]);
        }
        Err(e) => res.fail(&e),
    }
    res
}

fn run(cli: Cli) -> Result<Report> {
    let start = Instant::now();
    let (name, common, lapse) = match &cli.command {
        Command::Construct(c) => ("construct", c, None),
        Command::Verify(c) => ("verify", c, None),
        Command::Scan(c) => ("scan", c, None),
        Command::Energy(c) => ("energy", c, None),
        Command::EinsteinCheck(e) => ("einstein-check", &e.common, Some([e.c1, e.c2])),
    };
    let family: Family = common.family.into();
    if lapse.is_some() && !matches!(family, Family::TypeI | Family::TypeII) {
        bail!("einstein-check needs --family type1 or type2");
    }
    let ctx = Ctx {
        family,
        tol: common.tolerances(),
        r_max: common.r_max,
        lapse: lapse.unwrap_or([1.0, 0.0]),
    };
    let grid = common.grid();
    let exec = common.execution();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    if name == "scan" {
        rows = run_sweep(&grid, &ctx.tol, exec, common.max_specs)?;
    } else {
        if grid.len() > common.max_specs {
            return Err(Error::CapExceeded { size: grid.len(), cap: common.max_specs }.into());
        }
        let eval: fn(&Ctx, f64, u32, f64) -> SpecResult = match name {
            "construct" => cmd_construct,
            "verify" => cmd_verify,
            "energy" => cmd_energy,
            _ => cmd_einstein,
        };
        results = map_ordered(&grid.points(), exec, |&(b, n, c)| eval(&ctx, b, n, c));
    }
    let failed = if name == "scan" {
        rows.iter().filter(|r| r.is_failure()).count()
    } else {
        results.iter().filter(|r| !r.pass).count()
    };
    let specs = grid.len();
    Ok(Report {
        schema_version: common.schema_version,
        tool: "ehcheck",
        tool_version: env!("CARGO_PKG_VERSION"),
        config: ConfigEcho {
            command: name,
            family: family.name(),
            b: grid.b,
            n: grid.n,
            c: grid.c,
            tolerances: ctx.tol,
            r_max: ctx.r_max,
            lapse,
            max_specs: common.max_specs,
        },
        results,
        rows,
        summary: Summary { specs, passed: specs - failed, failed },
        runtime: Runtime {
            workers: common.workers,
            parallel: matches!(exec, Execution::Parallel { .. }),
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, csv) = match &cli.command {
        Command::Construct(c) | Command::Verify(c) | Command::Scan(c) | Command::Energy(c) => (c.json.clone(), c.csv.clone()),
        Command::EinsteinCheck(e) => (e.common.json.clone(), e.common.csv.clone()),
    };
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = (|| -> Result<()> {
        if let Some(path) = &json {
            report::write_json(&report, path)?;
        }
        if let Some(path) = &csv {
            report::write_csv(&report, path)?;
        }
        if json.is_none() && csv.is_none() {
            print!("{}", report::to_json(&report)?);
        }
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let s = &report.summary;
    eprintln!("{} specs, {} passed, {} failed", s.specs, s.passed, s.failed);
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
