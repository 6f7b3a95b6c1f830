use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use egue::closed_forms::SignConvention;
use egue::fock_sim::{fock_cap, run_ensemble, McRun};
use egue::scan::{FamilyRule, Quantity, ScanPlan};
use egue::verify::{run_verify, VerifyOptions};
use egue::{EnsembleSpec, Engine, Error, Partition, Statistics};
use serde_json::json;

#[derive(Parser)]
#[command(name = "egue", version, about = "Moments and cross-correlations of EGUE(2)-SU(r) ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Centroid and variance terms of one irrep block.
    Moments {
        #[command(flatten)]
        ens: Ensemble,
        /// U(Ω) irrep, e.g. 5,5,5
        #[arg(long, value_parser = parse_irrep)]
        irrep: Partition,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Σ₁₁ and Σ₂₂ between two irrep blocks.
    Covariance {
        #[command(flatten)]
        ens: Ensemble,
        #[arg(long, value_parser = parse_irrep)]
        irrep_a: Partition,
        #[arg(long, value_parser = parse_irrep)]
        irrep_b: Partition,
    },
    /// Widths or correlations over a range of particle numbers, as CSV.
    Scan {
        #[command(flatten)]
        ens: Ensemble,
        #[arg(long, value_parser = parse_quantity, default_value = "WIDTH")]
        quantity: Quantity,
        /// ONE, TWO, THREE or ALL
        #[arg(long, value_parser = parse_family, default_value = "THREE")]
        family: FamilyRule,
        #[arg(long, default_value_t = 3)]
        m_min: u32,
        #[arg(long, default_value_t = 15)]
        m_max: u32,
        /// Fixed partner irrep for SIGMA11/SIGMA22; without it the (m, m') grid is scanned.
        #[arg(long, value_parser = parse_irrep)]
        partner: Option<Partition>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo estimate in the boson Fock space.
    Simulate {
        #[command(flatten)]
        ens: Ensemble,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 500)]
        reals: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Only report these blocks (repeatable).
        #[arg(long = "target", value_parser = parse_irrep)]
        targets: Vec<Partition>,
        #[arg(long, default_value_t = 200)]
        bootstrap: usize,
        /// Directory receiving estimate.json and pairs.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check the generic engine against every closed form.
    Verify {
        /// Add a short Monte Carlo smoke test.
        #[arg(long)]
        mc: bool,
        #[arg(long, value_enum, default_value_t = Convention::PMagnitude)]
        sign_convention: Convention,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct Ensemble {
    #[arg(long, default_value_t = 6)]
    omega: usize,
    #[arg(long, default_value_t = 3)]
    r: u32,
    /// Coupling λ of the symmetric GUE block (variance λ²).
    #[arg(long, default_value_t = 1.0)]
    lambda_s: f64,
    /// Coupling λ of the antisymmetric GUE block (variance λ²).
    #[arg(long, default_value_t = 1.0)]
    lambda_a: f64,
    #[arg(long, value_parser = parse_statistics, default_value = "BOSON")]
    statistics: Statistics,
}

impl Ensemble {
    fn spec(&self) -> egue::Result<EnsembleSpec> {
        EnsembleSpec::new(
            self.omega,
            self.r,
            self.statistics,
            self.lambda_s * self.lambda_s,
            self.lambda_a * self.lambda_a,
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    PMagnitude,
    AsPrinted,
}

fn parse_irrep(s: &str) -> std::result::Result<Partition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_statistics(s: &str) -> std::result::Result<Statistics, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_quantity(s: &str) -> std::result::Result<Quantity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> std::result::Result<FamilyRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// CSV field for a float; ryu-style shortest round-trip representation.
fn num(x: f64) -> String {
    x.to_string()
}

fn cmd_moments(ens: &Ensemble, irrep: Partition, format: Format) -> Result<u8> {
    let spec = ens.spec()?;
    let state = spec.state(irrep)?;
    let report = Engine::new().report(&spec, &state)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => {
            writeln!(
                out,
                "omega,r,statistics,irrep,m,dim_u,p_sym,p_anti,q_sym_0,q_sym_1,q_sym_2,q_anti_0,q_anti_1,q_anti_2,r_0,r_1,h2,width"
            )?;
            let mut fields = vec![
                report.omega.to_string(),
                report.r.to_string(),
                report.statistics.to_string(),
                format!("\"{}\"", report.irrep),
                report.m.to_string(),
                report.dim_u.to_string(),
                num(report.p_sym),
                num(report.p_anti),
            ];
            fields.extend(report.q.sym.iter().chain(report.q.anti.iter()).map(|&x| num(x)));
            fields.extend(report.r_nu.iter().map(|&x| num(x)));
            fields.push(num(report.h2));
            fields.push(num(report.width));
            writeln!(out, "{}", fields.join(","))?;
        }
    }
    Ok(0)
}

fn cmd_covariance(ens: &Ensemble, a: Partition, b: Partition) -> Result<u8> {
    let spec = ens.spec()?;
    let (sa, sb) = (spec.state(a)?, spec.state(b)?);
    let engine = Engine::new();
    let h2a = engine.h2_average(&spec, &sa)?;
    let h2b = engine.h2_average(&spec, &sb)?;
    let s11 = engine.sigma11(&spec, &sa, &sb)?;
    let s22 = engine.sigma22(&spec, &sa, &sb);
    let (s22v, err) = match &s22 {
        Ok(v) => (Some(*v), None),
        Err(e) => (None, Some(e.clone())),
    };
    let record = json!({
        "omega": spec.omega,
        "r": spec.r,
        "statistics": spec.statistics,
        "irrep_a": sa.f,
        "irrep_b": sb.f,
        "h2_a": h2a,
        "h2_b": h2b,
        "sigma11": s11,
        "sqrt_sigma11": s11.sqrt(),
        "sigma22": s22v,
        "sqrt_sigma22": s22v.map(f64::sqrt),
        "error": err.as_ref().map(|e| e.to_string()),
    });
    println!("{}", serde_json::to_string_pretty(&record)?);
    match err {
        Some(e) => Err(e.into()),
        None => Ok(0),
    }
}

fn cmd_scan(plan: ScanPlan, csv: Option<PathBuf>) -> Result<u8> {
    let rows = plan.run()?;
    match csv {
        Some(path) => {
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            plan.write_csv(&rows, io::BufWriter::new(file))?;
        }
        None => plan.write_csv(&rows, io::stdout().lock())?,
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ens: &Ensemble,
    m: u32,
    reals: usize,
    seed: u64,
    targets: Vec<Partition>,
    bootstrap: usize,
    out: PathBuf,
) -> Result<u8> {
    let spec = ens.spec()?;
    let dim = egue::fock_sim::boson_fock_dim(spec.omega, spec.r as usize, m);
    if dim > fock_cap() {
        return Err(Error::ResourceLimit { dim, cap: fock_cap() }.into());
    }
    let targets = targets.into_iter().map(|f| spec.state(f)).collect::<egue::Result<Vec<_>>>()?;
    let mut run = McRun::new(spec.clone(), m, reals, seed).with_targets(targets);
    run.bootstrap = bootstrap;
    let est = run_ensemble(&run)?;
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join("estimate.json"), est.to_json() + "\n")?;
    let file = fs::File::create(out.join("pairs.csv"))?;
    est.write_csv(io::BufWriter::new(file))?;

    let engine = Engine::new();
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "irrep,block_dim,h2_mean,h2_se,h2_engine,z")?;
    for b in &est.blocks {
        let analytic = spec.state(b.irrep.clone()).and_then(|s| engine.h2_average(&spec, &s));
        let (want, z) = match analytic {
            Ok(w) => (num(w), num((b.h2_mean - w) / b.h2_se)),
            Err(_) => (String::new(), String::new()),
        };
        writeln!(
            stdout,
            "\"{}\",{},{},{},{},{}",
            b.irrep,
            b.block_dim,
            num(b.h2_mean),
            num(b.h2_se),
            want,
            z
        )?;
    }
    Ok(0)
}

fn cmd_verify(mc: bool, conv: Convention, format: ReportFormat) -> Result<u8> {
    let sign_convention = match conv {
        Convention::PMagnitude => SignConvention::PMagnitude,
        Convention::AsPrinted => SignConvention::AsPrinted,
    };
    let report = run_verify(&Engine::new(), VerifyOptions { monte_carlo: mc, sign_convention });
    match format {
        ReportFormat::Text => print!("{report}"),
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::TableCoverage { .. }) => 3,
        Some(Error::ResourceLimit { .. }) => 4,
        Some(Error::InvalidArgument(_)) | Some(Error::DegenerateEnsemble(_)) | Some(Error::SingularConfiguration(_)) => 2,
        _ => 1,
    }
}

fn report_error(err: &anyhow::Error) {
    if let Some(Error::TableCoverage { channel, shape, nu, irrep, left_rows, right_rows }) = err.downcast_ref::<Error>() {
        let desc = json!({
            "error": "table_coverage",
            "channel": channel,
            "shape": shape,
            "nu": nu,
            "irrep": irrep,
            "left_rows": left_rows,
            "right_rows": right_rows,
        });
        eprintln!("{desc}");
    }
    eprintln!("error: {err:#}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Moments { ens, irrep, format } => cmd_moments(&ens, irrep, format),
        Command::Covariance { ens, irrep_a, irrep_b } => cmd_covariance(&ens, irrep_a, irrep_b),
        Command::Scan { ens, quantity, family, m_min, m_max, partner, csv } => ens
            .spec()
            .map_err(anyhow::Error::from)
            .and_then(|spec| cmd_scan(ScanPlan { quantity, spec, m_min, m_max, family, partner }, csv)),
        Command::Simulate { ens, m, reals, seed, targets, bootstrap, out } => {
            cmd_simulate(&ens, m, reals, seed, targets, bootstrap, out)
        }
        Command::Verify { mc, sign_convention, format } => cmd_verify(mc, sign_convention, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e);
            ExitCode::from(exit_code(&e))
        }
    }
}
