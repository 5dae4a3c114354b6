//! p4crit: scans, zero sets and figure data for the critical normal-matrix model.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 numerical breakdown.

mod commands;
mod config;
mod output;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "P4CRIT_OUT_DIR";

/// Precondition violation detected by the front end itself.
#[derive(Debug)]
pub struct BadInput(pub String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

/// At least one check in a verification run failed.
#[derive(Debug)]
pub struct VerificationFailed(pub Vec<String>);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0.join(", "))
    }
}

impl std::error::Error for VerificationFailed {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "p4crit", version, about = "Tau-function scans, orthogonal-polynomial zeros and curve data")]
struct Cli {
    /// TOML config: top-level out-dir/threads/format plus one table per subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: $P4CRIT_OUT_DIR, else ./out].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the fully resolved configuration to this TOML file.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// τ(s) on a uniform s-grid.
    Tau(commands::TauArgs),
    /// Zeros of πₖ with Γ₁, the corrected curve and distance statistics.
    Zeros(commands::ZerosArgs),
    /// Szegő curve, lemniscate boundary or a Γ_r contour.
    Curve(commands::CurveArgs),
    /// Self-check battery; exit 1 if anything fails.
    Verify(verify::VerifyArgs),
    /// H and Z/U estimates over a list of k.
    Extract(commands::ExtractArgs),
    /// Regenerate every figure dataset with pinned resolutions.
    SeedFigures(commands::SeedArgs),
}

/// Resolved settings shared by all subcommands.
pub struct Ctx {
    pub globals: config::Globals,
    pub out_dir: PathBuf,
    pub format: Format,
}

fn prepare<T>(cli_args: &T, name: &str, file: Option<&config::ConfigFile>) -> Result<T, BadInput>
where
    T: Serialize + serde::de::DeserializeOwned + Default + commands::Resolve,
{
    let mut a = config::merge(cli_args, file.and_then(|f| f.section(name)))?;
    a.resolve()?;
    Ok(a)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = cli.config.as_deref().map(config::ConfigFile::load).transpose()?;
    let fg = file.as_ref().map(|f| f.globals.clone()).unwrap_or_default();
    let globals = config::Globals {
        out_dir: cli.out_dir.or(fg.out_dir),
        threads: cli.threads.or(fg.threads),
        format: cli.format.or(fg.format),
    };
    if let Some(t) = globals.threads {
        if t == 0 {
            return Err(BadInput("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out_dir = globals
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Ctx { format: globals.format.unwrap_or_default(), globals, out_dir };

    macro_rules! dispatch {
        ($args:expr, $name:literal, $f:path) => {{
            let a = prepare(&$args, $name, file.as_ref())?;
            if let Some(p) = &cli.save_config {
                std::fs::write(p, config::to_toml(&ctx.globals, $name, &a)?)?;
            }
            $f(&ctx, &a)
        }};
    }
    match cli.command {
        Command::Tau(a) => dispatch!(a, "tau", commands::cmd_tau),
        Command::Zeros(a) => dispatch!(a, "zeros", commands::cmd_zeros),
        Command::Curve(a) => dispatch!(a, "curve", commands::cmd_curve),
        Command::Verify(a) => dispatch!(a, "verify", verify::cmd_verify),
        Command::Extract(a) => dispatch!(a, "extract", commands::cmd_extract),
        Command::SeedFigures(a) => dispatch!(a, "seed-figures", commands::cmd_seed),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<VerificationFailed>().is_some() {
        return 1;
    }
    if let Some(core) = e.downcast_ref::<painleve_core::Error>() {
        return if core.is_input() { 2 } else { 3 };
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if code == 3 {
                eprintln!("hint: numerical breakdown; raise --digits (extended precision) or lower k / n");
            }
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        let e: anyhow::Error = painleve_core::Error::InvalidInput("x".into()).into();
        assert_eq!(exit_code(&e), 2);
        let e: anyhow::Error = painleve_core::Error::Singular { step: 1, pivot: 0.0 }.into();
        assert_eq!(exit_code(&e), 3);
        let e: anyhow::Error = VerificationFailed(vec!["s0".into()]).into();
        assert_eq!(exit_code(&e), 1);
        let e: anyhow::Error = BadInput("y".into()).into();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn flags_override_config() {
        let file: toml::Value = toml::from_str("gamma = 0.3\nn = 40\nrefine = true").unwrap();
        let flags = commands::TauArgs { n: Some(50), ..Default::default() };
        let m = config::merge(&flags, Some(&file)).unwrap();
        assert_eq!((m.gamma, m.n, m.refine), (Some(0.3), Some(50), true));
        let bad: toml::Value = toml::from_str("gama = 0.3").unwrap();
        assert!(config::merge(&flags, Some(&bad)).is_err());
    }
}
