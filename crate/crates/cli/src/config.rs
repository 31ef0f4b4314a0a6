//! Settings resolved from flags, then `SOCIOS_*` variables, then the config
//! file, then built-in defaults.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::ArgMatches;
use serde::Deserialize;
use socios_core::adaptors::NetworkSettings;

use crate::Failure;

pub const DEFAULT_CONFIG_FILE: &str = "socios.toml";
pub const DEFAULT_GATEWAY: &str = "http://127.0.0.1:8480";
pub const DEFAULT_LISTEN: &str = "127.0.0.1:8480";
pub const DEFAULT_MOCK_HOST: &str = "127.0.0.1";
pub const DEFAULT_MOCK_PORT: u16 = 8481;
pub const DEFAULT_ALIAS: &str = "default";

/// Contents of the TOML config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileConfig {
    pub gateway: Option<String>,
    pub alias: Option<String>,
    pub token_file: Option<PathBuf>,
    pub raw: Option<bool>,
    pub listen: Option<String>,
    pub mock_host: Option<String>,
    pub mock_port: Option<u16>,
    pub seed: Option<u64>,
    /// Adaptor overrides for `serve`, keyed by network name.
    #[serde(default)]
    pub networks: HashMap<String, NetworkSettings>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))
    }

    /// The file named by `--config`/`SOCIOS_CONFIG`, which must exist, or
    /// `socios.toml` in the working directory if there is one.
    pub fn discover(matches: &ArgMatches) -> Result<Self, Failure> {
        match matches.get_one::<PathBuf>("config") {
            Some(path) => Self::load(path),
            None if Path::new(DEFAULT_CONFIG_FILE).is_file() => {
                Self::load(Path::new(DEFAULT_CONFIG_FILE))
            }
            None => Ok(Self::default()),
        }
    }
}

/// Effective settings for one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub gateway: String,
    pub alias: String,
    pub token_file: PathBuf,
    pub raw: bool,
    pub mock_host: String,
    pub mock_port: u16,
    pub file: FileConfig,
}

pub fn pick<T: Clone + Send + Sync + 'static>(
    matches: &ArgMatches,
    id: &str,
    file: Option<T>,
    default: T,
) -> T {
    matches
        .get_one::<T>(id)
        .cloned()
        .or(file)
        .unwrap_or(default)
}

pub fn default_token_file() -> PathBuf {
    let home = std::env::var_os("HOME")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    home.join(".socios").join("tokens.tsv")
}

impl Settings {
    pub fn resolve(matches: &ArgMatches) -> Result<Self, Failure> {
        let file = FileConfig::discover(matches)?;
        Ok(Self {
            gateway: pick(
                matches,
                "gateway",
                file.gateway.clone(),
                DEFAULT_GATEWAY.to_owned(),
            )
            .trim_end_matches('/')
            .to_owned(),
            alias: pick(
                matches,
                "alias",
                file.alias.clone(),
                DEFAULT_ALIAS.to_owned(),
            ),
            token_file: pick(
                matches,
                "token-file",
                file.token_file.clone(),
                default_token_file(),
            ),
            raw: matches.get_flag("raw") || file.raw.unwrap_or(false),
            mock_host: pick(
                matches,
                "mock-host",
                file.mock_host.clone(),
                DEFAULT_MOCK_HOST.to_owned(),
            ),
            mock_port: pick(matches, "mock-port", file.mock_port, DEFAULT_MOCK_PORT),
            file,
        })
    }

    /// Base URL of a mock network started by `serve` with the same
    /// settings.
    pub fn mock_url(&self, network: &str) -> Result<String, Failure> {
        let index = socios_mocknet::NETWORKS
            .iter()
            .position(|n| *n == network)
            .ok_or_else(|| Failure::Usage(format!("{network} is not a mock network")))?;
        Ok(format!(
            "http://{}:{}",
            self.mock_host,
            self.mock_port + index as u16
        ))
    }
}
