//! `token` and `fixture`: local credentials and mock-network control.

use std::time::Duration;

use clap::{value_parser, Arg, ArgMatches, Command};
use serde::Serialize;
use socios_core::model::{SocialNetworkId, Timestamp};
use socios_core::sdk::AuthToken;
use socios_core::token_store::TokenStore;
use socios_mocknet::Mutation;

use crate::config::Settings;
use crate::{output, Failure, EXIT_CLEAN, EXIT_PARTIAL};

fn sn_arg() -> Arg {
    Arg::new("sn")
        .long("sn")
        .required(true)
        .help("social network name")
}

fn mock_url_arg() -> Arg {
    Arg::new("mock-url")
        .long("mock-url")
        .help("base URL of the mock network; default derived from --mock-host and --mock-port")
}

pub fn token_command() -> Command {
    Command::new("token")
        .about("Manage stored user tokens")
        .subcommand_required(true)
        .subcommand(
            Command::new("put")
                .about("Store a token for --alias")
                .args([
                    sn_arg(),
                    Arg::new("token").long("token").required(true),
                    Arg::new("subject")
                        .long("subject")
                        .required(true)
                        .help("native id of the user who granted the token"),
                    Arg::new("expires")
                        .long("expires")
                        .value_name("ISO-8601")
                        .help("expiry; default never"),
                ]),
        )
        .subcommand(
            Command::new("get")
                .about("Print the live token for --alias")
                .arg(sn_arg()),
        )
        .subcommand(
            Command::new("issue")
                .about("Have a mock network issue a token, then store it")
                .args([
                    sn_arg(),
                    Arg::new("subject").long("subject").required(true),
                    Arg::new("ttl")
                        .long("ttl")
                        .value_parser(value_parser!(u64))
                        .default_value("3600")
                        .help("lifetime in seconds"),
                    mock_url_arg(),
                ]),
        )
        .subcommand(Command::new("purge").about("Drop expired tokens"))
}

pub fn fixture_command() -> Command {
    Command::new("fixture")
        .about("Inspect or change a running mock network")
        .subcommand_required(true)
        .subcommand(
            Command::new("mutate")
                .about("Apply a mutation, e.g. '{\"kind\":\"deleteMediaItem\",\"id\":\"m1\"}'")
                .args([
                    sn_arg(),
                    Arg::new("mutation").required(true).value_name("JSON"),
                    mock_url_arg(),
                ]),
        )
        .subcommand(
            Command::new("log")
                .about("Print the request log")
                .args([sn_arg(), mock_url_arg()]),
        )
}

fn network(matches: &ArgMatches) -> Result<SocialNetworkId, Failure> {
    let name = matches.get_one::<String>("sn").expect("required");
    SocialNetworkId::new(name.as_str()).map_err(|e| Failure::Usage(e.to_string()))
}

fn store(settings: &Settings) -> Result<TokenStore, Failure> {
    if let Some(dir) = settings
        .token_file
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
    {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    TokenStore::open(&settings.token_file).map_err(|e| Failure::Usage(e.to_string()))
}

fn mock_url(
    matches: &ArgMatches,
    settings: &Settings,
    network: &SocialNetworkId,
) -> Result<String, Failure> {
    match matches.get_one::<String>("mock-url") {
        Some(url) => Ok(url.trim_end_matches('/').to_owned()),
        None => settings.mock_url(network.as_str()),
    }
}

fn print_json<T: Serialize>(value: &T, settings: &Settings) {
    output::emit(
        &serde_json::to_string(value).expect("plain data serializes"),
        settings.raw,
    );
}

/// A non-success admin answer: printed to stderr, exit 1.
async fn admin_outcome(response: reqwest::Response) -> Result<(i32, String), Failure> {
    let status = response.status();
    let body = response
        .text()
        .await
        .map_err(|e| Failure::Transport(e.to_string()))?;
    if status.is_success() {
        return Ok((EXIT_CLEAN, body));
    }
    eprintln!("socios: mock network answered {status}: {body}");
    Ok((EXIT_PARTIAL, body))
}

pub async fn token(matches: &ArgMatches, settings: &Settings) -> Result<i32, Failure> {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    match name {
        "put" => {
            let expires_at = match sub.get_one::<String>("expires") {
                Some(text) => {
                    Timestamp::parse_iso8601(text).map_err(|e| Failure::Usage(e.to_string()))?
                }
                None => Timestamp::MAX,
            };
            let token = AuthToken {
                token: sub.get_one::<String>("token").expect("required").clone(),
                network: network(sub)?,
                subject: sub.get_one::<String>("subject").expect("required").clone(),
                expires_at,
            };
            store(settings)?
                .put(&settings.alias, token.clone())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&token, settings);
            Ok(EXIT_CLEAN)
        }
        "get" => match store(settings)?.get(&settings.alias, &network(sub)?) {
            Some(token) => {
                print_json(&token, settings);
                Ok(EXIT_CLEAN)
            }
            None => {
                eprintln!(
                    "socios: no live token for {} on {}",
                    settings.alias,
                    network(sub)?
                );
                Ok(EXIT_PARTIAL)
            }
        },
        "issue" => {
            let network = network(sub)?;
            let url = format!("{}/_admin/tokens", mock_url(sub, settings, &network)?);
            let ttl = Duration::from_secs(*sub.get_one::<u64>("ttl").expect("defaulted"));
            let body = serde_json::json!({
                "subject": sub.get_one::<String>("subject").expect("required"),
                "ttlMs": ttl.as_millis() as u64,
            });
            let response = socios_core::sdk::http::default_http_client()
                .post(&url)
                .json(&body)
                .send()
                .await
                .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
            let (code, body) = admin_outcome(response).await?;
            if code != EXIT_CLEAN {
                return Ok(code);
            }
            let token: AuthToken = serde_json::from_str(&body)
                .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
            store(settings)?
                .put(&settings.alias, token.clone())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&token, settings);
            Ok(EXIT_CLEAN)
        }
        "purge" => {
            let removed = store(settings)?
                .purge_expired()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&serde_json::json!({ "removed": removed }), settings);
            Ok(EXIT_CLEAN)
        }
        other => unreachable!("unknown token subcommand {other}"),
    }
}

pub async fn fixture(matches: &ArgMatches, settings: &Settings) -> Result<i32, Failure> {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let network = network(sub)?;
    let base = mock_url(sub, settings, &network)?;
    let http = socios_core::sdk::http::default_http_client();
    let request = match name {
        "mutate" => {
            let text = sub.get_one::<String>("mutation").expect("required");
            let mutation: Mutation =
                serde_json::from_str(text).map_err(|e| Failure::Usage(format!("mutation: {e}")))?;
            http.post(format!("{base}/_admin/mutate")).json(&mutation)
        }
        "log" => http.get(format!("{base}/_admin/log")),
        other => unreachable!("unknown fixture subcommand {other}"),
    };
    let response = request
        .send()
        .await
        .map_err(|e| Failure::Transport(format!("{base}: {e}")))?;
    let (code, body) = admin_outcome(response).await?;
    if code == EXIT_CLEAN {
        output::emit(&body, settings.raw);
    }
    Ok(code)
}
