//! `serve`: the three mock networks and the gateway in one process.

use std::collections::{BTreeMap, HashMap};
use std::net::{Ipv4Addr, SocketAddr};
use std::sync::Arc;

use clap::{value_parser, Arg, ArgMatches, Command};
use socios_core::adaptors::{seeded_registry, NetworkSettings};
use socios_core::sdk::http::default_http_client;
use socios_core::service::CoreService;
use socios_mocknet::{fixture, Harness};

use crate::config::{pick, Settings, DEFAULT_LISTEN};
use crate::{Failure, EXIT_CLEAN};

pub fn command() -> Command {
    Command::new("serve")
        .about("Start the mock networks and the gateway, then print one JSON ready line")
        .args([
            Arg::new("listen")
                .long("listen")
                .env("SOCIOS_LISTEN")
                .value_name("ADDR")
                .help("gateway address; port 0 picks a free port [default: 127.0.0.1:8480]"),
            Arg::new("seed")
                .long("seed")
                .env("SOCIOS_SEED")
                .value_parser(value_parser!(u64))
                .help("fixture seed"),
        ])
}

/// Adaptor settings: the config file's overrides with every mock network's
/// endpoint pointed at the harness.
pub fn network_settings(
    configured: &HashMap<String, NetworkSettings>,
    harness: &Harness,
) -> HashMap<String, NetworkSettings> {
    let mut settings = configured.clone();
    for (name, own) in harness.settings() {
        settings.entry(name).or_default().endpoint = own.endpoint;
    }
    settings
}

pub fn run(matches: &ArgMatches, settings: &Settings) -> Result<i32, Failure> {
    let listen = pick(
        matches,
        "listen",
        settings.file.listen.clone(),
        DEFAULT_LISTEN.to_owned(),
    );
    let listen: SocketAddr = listen
        .parse()
        .map_err(|e| Failure::Usage(format!("--listen {listen:?}: {e}")))?;
    let host: Ipv4Addr = settings
        .mock_host
        .parse()
        .map_err(|e| Failure::Usage(format!("--mock-host {:?}: {e}", settings.mock_host)))?;
    let seed = pick(matches, "seed", settings.file.seed, fixture::DEFAULT_SEED);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Transport(e.to_string()))?;
    runtime.block_on(async {
        let harness = Harness::start_at(seed, host.octets(), settings.mock_port)
            .await
            .map_err(|e| Failure::Transport(format!("starting mock networks: {e}")))?;
        let registry = seeded_registry(
            &network_settings(&settings.file.networks, &harness),
            default_http_client(),
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        let core = CoreService::new(Arc::new(registry));
        let (addr, task) = socios_gateway::start(core, listen)
            .await
            .map_err(|e| Failure::Transport(format!("binding {listen}: {e}")))?;
        let networks: BTreeMap<&str, String> = harness
            .networks()
            .iter()
            .map(|n| (n.name(), n.url()))
            .collect();
        let ready = serde_json::json!({
            "status": "ready",
            "gateway": format!("http://{addr}"),
            "seed": seed,
            "networks": networks,
        });
        println!("{ready}");
        tokio::select! {
            _ = tokio::signal::ctrl_c() => {}
            _ = task => {}
        }
        Ok(EXIT_CLEAN)
    })
}
