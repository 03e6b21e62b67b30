//! Scenario runner behind the `arena` binary.

pub mod config;
pub mod scenarios;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, Scenario, ScenarioConfig};
pub use scenarios::{run_scenario, Artifacts};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ARENA_OUT_DIR";

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const OTHER: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
    pub const BUDGET: u8 = 4;
    pub const PROTOCOL: u8 = 5;
}

/// Maps a failure to its exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return exit::USAGE;
    }
    match err.downcast_ref::<qverify_core::Error>() {
        Some(qverify_core::Error::Capacity { .. }) => exit::CAPACITY,
        Some(qverify_core::Error::BudgetExceeded { .. }) => exit::BUDGET,
        Some(qverify_core::Error::Protocol(_)) => exit::PROTOCOL,
        Some(qverify_core::Error::Parameter(_) | qverify_core::Error::Infeasible(_)) => exit::USAGE,
        _ => exit::OTHER,
    }
}

/// `--out`, then `$ARENA_OUT_DIR`, then `./arena-out`.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("arena-out"))
}

/// Writes every artifact into `dir`, creating it if needed. Returns the paths.
pub fn write_artifacts(dir: &Path, artifacts: &Artifacts) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .files
        .iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            Ok(path)
        })
        .collect()
}
