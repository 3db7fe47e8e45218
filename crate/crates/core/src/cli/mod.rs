//! Command-line experiment harness.

mod experiments;
mod report;

pub use experiments::*;
pub use report::{cluster, convergence_rate, fill_rates, format_rows, read_csv, read_rows, write_csv, write_rows, ExperimentRow};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assemble::BcMode;
use crate::error::{Error, Result};
use crate::refelem::ElementName;

#[derive(Parser, Debug)]
#[command(name = "serendip", version, about = "Trimmed serendipity and tensor-product element experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BcArg {
    Eliminate,
    Diag1,
}

impl From<BcArg> for BcMode {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Eliminate => BcMode::Eliminate,
            BcArg::Diag1 => BcMode::DiagOne,
        }
    }
}

#[derive(Args, Debug)]
pub struct Study {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Element name, e.g. SminusCurl, RTCE, S, Lagrange, SminusDiv, NCF.
    #[arg(long)]
    pub element: String,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Comma-separated mesh divisions per axis.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub bc_mode: Option<BcArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Timed runs per level after one warm-up.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// L² projection of a gradient field onto an H(curl) space.
    Project(Study),
    /// Primal Poisson problem with homogeneous Dirichlet conditions.
    Poisson(Study),
    /// Mixed Poisson problem with an H(div) element and its L² partner.
    MixedPoisson(Study),
    /// Maxwell cavity eigenvalues on the unit cube.
    MaxwellEig {
        #[arg(long, default_value = "SminusCurl")]
        element: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        levels: Vec<usize>,
        /// Target in units of π².
        #[arg(long, default_value_t = 3.0)]
        target: f64,
        #[arg(long, default_value_t = 15)]
        nev: usize,
        #[arg(long, default_value_t = crate::solve::DEFAULT_EIGEN_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "eliminate")]
        bc_mode: BcArg,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// Global DOF totals of both families.
    Dofs {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Form degree.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Print the reference basis of an element.
    ElementDump {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_levels(dim: usize) -> Vec<usize> {
    if dim == 2 {
        vec![4, 8, 16, 32, 64]
    } else {
        vec![2, 4, 8]
    }
}

fn run_study(s: &Study, which: &Command) -> Result<String> {
    let name: ElementName = s.element.parse().map_err(Error::at("argument parsing"))?;
    let levels = s.levels.clone().unwrap_or_else(|| default_levels(s.dim));
    let mut cfg = RunConfig {
        repeats: s.repeats,
        ..RunConfig::default()
    };
    if let Some(b) = s.bc_mode {
        cfg.bc_mode = b.into();
    }
    if let Some(t) = s.tol {
        cfg.tol = t;
    }
    let rows = match which {
        Command::Project(_) => run_projection(s.dim, name, s.order, &levels, &cfg)?,
        Command::Poisson(_) => run_primal_poisson(s.dim, name, s.order, &levels, &cfg)?,
        _ => run_mixed_poisson(s.dim, name, s.order, &levels, &cfg)?,
    };
    if let Some(p) = &s.out {
        write_csv(p, &rows).map_err(Error::at("writing output"))?;
    }
    Ok(format_rows(&rows))
}

/// Runs one parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        c @ (Command::Project(s) | Command::Poisson(s) | Command::MixedPoisson(s)) => run_study(s, c),
        Command::MaxwellEig {
            element,
            order,
            levels,
            target,
            nev,
            tol,
            bc_mode,
            repeats,
        } => {
            let name: ElementName = element.parse().map_err(Error::at("argument parsing"))?;
            let opts = MaxwellOptions {
                target: *target,
                nev: *nev,
                tol: *tol,
                bc_mode: (*bc_mode).into(),
                repeats: *repeats,
                warmup: true,
            };
            Ok(run_maxwell_eig(name, *order, levels, &opts)?.format())
        }
        Command::Dofs { dim, k, orders, n } => {
            let rows = report_dofs(*dim, *k, orders, *n)?;
            let mut s = format!("{dim}D {k}-forms on {n}^{dim} cells\n{:>3} {:>12} {:>12}\n", "r", "S-", "Q-");
            for r in rows {
                s += &format!("{:>3} {:>12} {:>12}\n", r.r, r.trimmed, r.tensor);
            }
            Ok(s)
        }
        Command::ElementDump {
            dim,
            element,
            order,
            out,
        } => {
            let name: ElementName = element.parse().map_err(Error::at("argument parsing"))?;
            let spec = name.resolve(*dim, *order).map_err(Error::at("element construction"))?;
            let e = spec.build().map_err(Error::at("element construction"))?;
            let text = element_dump(&e);
            if let Some(p) = out {
                std::fs::write(p, &text).map_err(|e| Error::at("writing output")(e.into()))?;
            }
            Ok(text)
        }
    }
}
