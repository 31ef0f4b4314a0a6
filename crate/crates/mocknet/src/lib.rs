//! Three mock social networks with deliberately different native schemas.
//!
//! | network   | keys       | timestamps     | pages     | activities |
//! |-----------|------------|----------------|-----------|------------|
//! | chirper   | snake_case | epoch seconds  | no        | no         |
//! | picshare  | camelCase  | ISO-8601 UTC   | galleries | no         |
//! | streamhub | kebab-case | epoch millis   | channels  | yes        |
//!
//! Every backend logs each non-admin request, honors a [`FaultProfile`],
//! issues bearer tokens for its own users and accepts fixture mutations,
//! both in process and over `/_admin`.

pub mod chirper;
pub mod fixture;
pub mod mutation;
pub mod picshare;
pub mod server;
pub mod streamhub;

use std::collections::HashMap;
use std::net::SocketAddr;

use socios_core::adaptors::NetworkSettings;

pub use chirper::Chirper;
pub use mutation::{Mutation, MutationError, MutationOutcome};
pub use picshare::Picshare;
pub use server::{Backend, FaultProfile, LogEntry, MockControl, MockNetwork, TokenError};
pub use streamhub::Streamhub;

/// Names of the mock networks, in the order the harness starts them.
pub const NETWORKS: [&str; 3] = [Chirper::NAME, Picshare::NAME, Streamhub::NAME];

/// All three mock networks, running.
#[derive(Debug)]
pub struct Harness {
    pub chirper: MockNetwork<Chirper>,
    pub picshare: MockNetwork<Picshare>,
    pub streamhub: MockNetwork<Streamhub>,
}

impl Harness {
    /// Starts every network on a free loopback port.
    pub async fn start(seed: u64) -> std::io::Result<Self> {
        Ok(Self {
            chirper: MockNetwork::start_local(seed).await?,
            picshare: MockNetwork::start_local(seed).await?,
            streamhub: MockNetwork::start_local(seed).await?,
        })
    }

    /// Starts the networks on consecutive ports from `base_port`, or on free
    /// ports when it is 0.
    pub async fn start_at(seed: u64, host: [u8; 4], base_port: u16) -> std::io::Result<Self> {
        let addr = |offset: u16| {
            let port = if base_port == 0 {
                0
            } else {
                base_port + offset
            };
            SocketAddr::from((host, port))
        };
        Ok(Self {
            chirper: MockNetwork::start(seed, addr(0)).await?,
            picshare: MockNetwork::start(seed, addr(1)).await?,
            streamhub: MockNetwork::start(seed, addr(2)).await?,
        })
    }

    pub fn networks(&self) -> [&dyn MockControl; 3] {
        [&self.chirper, &self.picshare, &self.streamhub]
    }

    pub fn get(&self, name: &str) -> Option<&dyn MockControl> {
        self.networks().into_iter().find(|n| n.name() == name)
    }

    /// Adaptor settings pointing each mock network at this harness.
    pub fn settings(&self) -> HashMap<String, NetworkSettings> {
        self.networks()
            .iter()
            .map(|n| (n.name().to_owned(), NetworkSettings::endpoint(n.url())))
            .collect()
    }

    pub fn clear_logs(&self) {
        for network in self.networks() {
            network.clear_log();
        }
    }

    /// Requests received across all networks since the last clear.
    pub fn total_requests(&self) -> usize {
        self.networks().iter().map(|n| n.log().len()).sum()
    }
}
