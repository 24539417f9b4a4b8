use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use steklov_core::expansion::{dirichlet_solve, error_l2_boundary, robin_solve, DomainGrid};
use steklov_core::geometry::Domain;
use steklov_core::harness::{
    catalog, default_method, emit_plot, read_series, run_convergence_m, run_convergence_n,
    run_eigen_table, write_convergence_csv, write_eigen_csv, BoundaryCondition, ExperimentSpec,
    Norm,
};
use steklov_core::steklov::{solve, Method, SolveParams};
use steklov_core::{Complex64, Error, Result};

/// Steklov eigenpairs and truncated Steklov series on planar domains.
#[derive(Parser)]
#[command(name = "steklov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First Steklov eigenvalues as CSV.
    Eigen {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 30)]
        count: usize,
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one boundary value problem and report the boundary error.
    Solve {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        problem: Problem,
        /// Truncation order.
        #[arg(long = "M", default_value_t = 30)]
        m: usize,
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
        /// Interior points `x,y` to evaluate the solution at.
        #[arg(long = "at", value_parser = parse_point)]
        at: Vec<Complex64>,
    },
    /// Error against truncation order M, with a fitted log-log slope.
    ConvM {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        problem: Problem,
        /// Comma-separated truncation orders.
        #[arg(long = "M", value_delimiter = ',', default_value = "10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85,90,95,100")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
        /// Comma-separated norms: boundary, domain.
        #[arg(long, value_delimiter = ',', default_value = "boundary")]
        norms: Vec<Norm>,
        /// Polar grid for the domain norm as radial x angular.
        #[arg(long, default_value_t = 64)]
        radial: usize,
        #[arg(long, default_value_t = 512)]
        angular: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collocation error against node count N at fixed order.
    ConvN {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        data: String,
        /// Comma-separated node counts.
        #[arg(long = "N", value_delimiter = ',', default_value = "64,96,128,192,256,384,512")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, default_value_t = 2400)]
        reference: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log SVG plot of a convergence CSV.
    Plot {
        input: PathBuf,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    domain: Domain,
    /// conformal, weak-form, collocation or square-exact (per-domain default if omitted).
    #[arg(long)]
    method: Option<Method>,
}

impl Target {
    fn method(&self) -> Method {
        self.method.unwrap_or_else(|| default_method(self.domain))
    }
}

#[derive(Args)]
struct Problem {
    /// dirichlet or robin.
    #[arg(long, default_value = "dirichlet")]
    bc: String,
    /// Robin constant.
    #[arg(long, default_value_t = 1.5)]
    b: f64,
    /// exp-cos, abs, sqrt-abs, step, log-source or nonsmooth-harmonic.
    #[arg(long)]
    data: String,
}

impl Problem {
    fn spec(&self, target: &Target) -> Result<ExperimentSpec> {
        let condition = BoundaryCondition::parse(&self.bc, self.b)?;
        let mut spec = ExperimentSpec::new(target.domain, condition, &self.data);
        spec.method = target.method();
        Ok(spec)
    }
}

fn parse_point(s: &str) -> std::result::Result<Complex64, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok(Complex64::new(p(x)?, p(y)?))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eigen {
            target,
            count,
            nodes,
            out,
        } => {
            let rows = run_eigen_table(target.domain, target.method(), count, nodes)?;
            write_eigen_csv(&rows, output(&out)?)
        }
        Command::Solve {
            target,
            problem,
            m,
            nodes,
            at,
        } => {
            let spec = problem.spec(&target)?;
            spec.validate()?;
            let basis = Arc::new(solve(
                spec.domain,
                spec.method,
                &SolveParams::new(nodes, m + 1),
            )?);
            let data = catalog(&spec.data, basis.curve.as_ref())?;
            let solution = match spec.condition {
                BoundaryCondition::Dirichlet => dirichlet_solve(&data, &basis, m)?,
                BoundaryCondition::Robin { b } => {
                    robin_solve(&data.robin_data(b)?, &basis, m, b)?
                }
            };
            let mut out = io::stdout().lock();
            writeln!(out, "domain={} method={} condition={} data={} M={m} nodes={nodes}",
                spec.domain, spec.method, spec.condition, spec.data)?;
            if spec.condition == BoundaryCondition::Dirichlet || data.interior(0.0.into()).is_some() {
                writeln!(out, "error_l2_boundary={:.16e}", error_l2_boundary(&solution, &data)?)?;
            }
            let interior = solution.interior();
            for x in at {
                let v = interior.eval(x)?;
                match data.interior(x) {
                    Some(u) => writeln!(out, "u({}, {})={v:.16e} exact={u:.16e}", x.re, x.im)?,
                    None => writeln!(out, "u({}, {})={v:.16e}", x.re, x.im)?,
                }
            }
            Ok(())
        }
        Command::ConvM {
            target,
            problem,
            m,
            nodes,
            norms,
            radial,
            angular,
            out,
        } => {
            let mut spec = problem.spec(&target)?;
            spec.m_values = m;
            spec.nodes = nodes;
            spec.norms = norms;
            spec.domain_grid = DomainGrid { radial, angular };
            let report = run_convergence_m(&spec)?;
            write_convergence_csv(&report, output(&out)?)
        }
        Command::ConvN {
            domain,
            data,
            n,
            order,
            reference,
            out,
        } => {
            let mut spec = ExperimentSpec::new(domain, BoundaryCondition::Dirichlet, &data);
            spec.method = Method::Collocation;
            spec.n_values = n;
            spec.n_study_order = order;
            spec.reference_nodes = reference;
            let report = run_convergence_n(&spec)?;
            write_convergence_csv(&report, output(&out)?)
        }
        Command::Plot { input, out } => {
            let series = read_series(File::open(&input)?)?;
            let svg = emit_plot(&series)?;
            std::fs::write(out, svg).map_err(Error::from)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("steklov: {e}");
            ExitCode::FAILURE
        }
    }
}
