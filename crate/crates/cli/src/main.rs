use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elliptic_schubert::harness::config::parse_datum;
use elliptic_schubert::harness::{billey_terms, localize, pipe_dreams, poly, verify, Document, RunConfig, Suite};
use elliptic_schubert::{Error, Result};

/// Localized elliptic Schubert classes, Billey terms, pipe dreams and identity checks.
#[derive(Parser)]
#[command(name = "ellschub", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Localization table of the class of w.
    Localize {
        /// Element in one-line notation (e.g. 312) or a comma-separated word.
        #[arg(long)]
        w: String,
        #[command(flatten)]
        common: Common,
    },
    /// Subword terms of the Billey formula for b_{u,w}, u the product of --word.
    Billey {
        /// Comma-separated simple reflection indices.
        #[arg(long)]
        word: String,
        #[arg(long)]
        w: String,
        /// Only the term with this set of 1-based word positions.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// Generic pipe dreams of a permutation.
    Gpd {
        #[arg(long)]
        w: String,
        #[command(flatten)]
        common: Common,
    },
    /// Polynomial representative: the weight sum over pipe dreams.
    Poly {
        #[arg(long)]
        w: String,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a verification suite; exits 1 if any check fails.
    Verify {
        /// One of all, theta, twisted, billey, ybe, mirror, parabolic, gpd, poly, klimit, duality.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// A (= GL_n), SL, B or G.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Rank of the character lattice for type A, of the root system otherwise.
    #[arg(long, visible_alias = "n")]
    rank: Option<usize>,
    /// Block sizes of a parabolic subgroup, e.g. 2,1.
    #[arg(long, value_delimiter = ',')]
    parabolic: Option<Vec<usize>>,
    /// q-adic truncation order.
    #[arg(long)]
    trunc: Option<u32>,
    /// eval or symbolic.
    #[arg(long, default_value = "eval")]
    mode: String,
    /// Number of random evaluation points in eval mode.
    #[arg(long, default_value_t = 2)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// json, ascii or latex.
    #[arg(long, default_value = "json")]
    format: String,
    /// Slope s of the substitution lambda = s tau in the K-theory limit.
    #[arg(long)]
    slope: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self, timing: bool) -> Result<RunConfig> {
        let config = RunConfig {
            datum: parse_datum(self.ty.as_deref(), self.rank)?,
            trunc: self.trunc,
            mode: self.mode.parse()?,
            points: self.points,
            seed: self.seed,
            parabolic: self.parabolic.clone(),
            format: self.format.parse()?,
            slope: self.slope.clone(),
            timing,
        };
        config.validate()?;
        Ok(config)
    }

    fn emit(&self, config: &RunConfig, doc: &impl Document) -> Result<()> {
        let text = doc.render(config.format);
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Localize { w, common } => {
            let c = common.config(false)?;
            common.emit(&c, &localize(&c, &w)?)?;
        }
        Cmd::Billey { word, w, subset, common } => {
            let c = common.config(false)?;
            common.emit(&c, &billey_terms(&c, &word, &w, subset.as_deref())?)?;
        }
        Cmd::Gpd { w, common } => {
            let c = common.config(false)?;
            common.emit(&c, &pipe_dreams(&c, &w)?)?;
        }
        Cmd::Poly { w, common } => {
            let c = common.config(false)?;
            common.emit(&c, &poly(&c, &w)?)?;
        }
        Cmd::Verify { suite, timing, common } => {
            let c = common.config(timing)?;
            let report = verify(&c, suite.parse::<Suite>()?)?;
            common.emit(&c, &report)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: {} ({})", c.name, c.anchor, c.detail);
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
