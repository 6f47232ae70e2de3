//! `kuforge`: tables for `HZ` and `ku` of `BV₊` and the verification suites.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use table::Format;

#[derive(Parser, Debug)]
#[command(name = "kuforge", version, about = "Exact tables for HZ and ku of BV+, V = (Z/2)^r")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Rank r of V (default 2; `verify` runs every rank of a suite when omitted).
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Largest degree reported (default 16).
    #[arg(long, global = true, env = "KUFORGE_DEGREE_BOUND")]
    pub max_degree: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of S, Λ, K, L, L̃, 𝔎, 𝔏 evaluated on V.
    Dims {
        #[arg(long, value_enum, ignore_case = true)]
        functor: Functor,
    },
    /// The augmentation filtration of Z[V].
    Groupring,
    /// ku^*(BV+), with HZ^* and the Q₁-tables.
    KuCohom,
    /// ku_*(BV+), with HZ_*.
    KuHom,
    /// Local cohomology of a graded module over F₂[x₁..x_r].
    Localcoh {
        #[arg(long, value_enum, default_value_t = ModuleKind::Lfrak)]
        module: ModuleKind,
        /// Index i for the 𝔎 and 𝔏 modules.
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, value_enum, default_value_t = Route::Cech)]
        route: Route,
        /// Lowest internal degree (default: −max_degree).
        #[arg(long, allow_hyphen_values = true)]
        min_degree: Option<i64>,
    },
    /// Local cohomology spectral sequences for ku and HZ.
    Ss,
    /// Runs verification suites; exit status 1 if any check fails.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Functor {
    S,
    Lambda,
    K,
    L,
    Ltilde,
    Kfrak,
    Lfrak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    Free,
    Lfrak,
    Kfrak,
    /// Reduced HZ^*(BV+).
    Kmodule,
    /// HZ^*(BV+), integral in degree 0.
    Hz,
    /// v-torsion of ku^*(BV+).
    TorsKu,
    /// Q/v for the v-cotorsion Q of ku^*(BV+).
    QmodV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Cech,
    Duality,
}

/// Failure classes with their exit statuses.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Stabilization(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) | Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Stabilization(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Stabilization(m) | Failure::Other(m) => m,
        }
    }
}

impl From<kuforge::Error> for Failure {
    fn from(e: kuforge::Error) -> Self {
        match e {
            kuforge::Error::Stabilization { .. } => Failure::Stabilization(e.to_string()),
            kuforge::Error::Invalid(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match commands::run(&cli) {
        Ok((text, failure)) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            match failure {
                Some(f) => {
                    eprintln!("{}", f.message());
                    ExitCode::from(f.code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    use anyhow::Context as _;
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write as _;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let stab = kuforge::Error::Stabilization { degree: -3, cohom_degree: 2, max_k: 40 };
        assert_eq!(Failure::from(stab).code(), 3);
        assert_eq!(Failure::from(kuforge::Error::Invalid("x".into())).code(), 2);
        assert_eq!(Failure::from(kuforge::Error::Inconsistent("x".into())).code(), 1);
        assert_eq!(Failure::Verification(String::new()).code(), 1);
    }
}
