//! One subcommand per REST endpoint, generated from the gateway's endpoint
//! table so flags always match the query parameters.

use clap::{Arg, ArgAction, ArgMatches, Command};
use reqwest::header::AUTHORIZATION;
use socios_core::model::SocialNetworkId;
use socios_core::token_store::TokenStore;
use socios_gateway::call::{TOKEN_EXPIRES_HEADER, TOKEN_NETWORK_HEADER};
use socios_gateway::endpoint::{Endpoint, ParamKind, Verb};
use socios_gateway::query::{encode_component, encode_list, join};
use socios_gateway::ENDPOINTS;

use crate::config::Settings;
use crate::{output, Failure};

/// `getMediaItemsForUser` becomes `get-media-items-for-user`.
pub fn command_name(endpoint: &Endpoint) -> String {
    let mut name = String::with_capacity(endpoint.name.len() + 4);
    for c in endpoint.name.chars() {
        if c.is_ascii_uppercase() {
            name.push('-');
            name.push(c.to_ascii_lowercase());
        } else {
            name.push(c);
        }
    }
    name
}

pub fn find(command: &str) -> Option<&'static Endpoint> {
    ENDPOINTS.iter().find(|e| command_name(e) == command)
}

fn param_arg(param: &socios_gateway::endpoint::Param) -> Arg {
    let arg = Arg::new(param.name)
        .long(param.name)
        .help(param.help)
        .required(param.required);
    match param.kind {
        ParamKind::List => arg
            .action(ArgAction::Append)
            .num_args(1..)
            .value_name("ITEM"),
        ParamKind::Number => arg.allow_negative_numbers(true).value_name("NUMBER"),
        ParamKind::Timestamp => arg.value_name("ISO-8601"),
        ParamKind::Text => arg.value_name(param.name.to_uppercase()),
    }
}

pub fn commands() -> Vec<Command> {
    ENDPOINTS
        .iter()
        .map(|endpoint| {
            let verb = match endpoint.verb {
                Verb::Get => "GET",
                Verb::Post => "POST",
            };
            let mut command = Command::new(command_name(endpoint))
                .about(format!("{verb} {}", endpoint.path()))
                .args(endpoint.params.iter().map(param_arg));
            if endpoint.auth {
                command = command.args([
                    Arg::new("token")
                        .long("token")
                        .help("bearer token; default the stored token for --alias and --sn"),
                    Arg::new("token-network")
                        .long("token-network")
                        .requires("token")
                        .help("network the token was issued by, if not --sn"),
                    Arg::new("token-expires")
                        .long("token-expires")
                        .requires("token")
                        .value_name("ISO-8601")
                        .help("token expiry"),
                ]);
            }
            command
        })
        .collect()
}

struct Credential {
    token: String,
    network: Option<String>,
    expires: Option<String>,
    subject: Option<String>,
}

fn credential(matches: &ArgMatches, settings: &Settings) -> Result<Option<Credential>, Failure> {
    if let Some(token) = matches.get_one::<String>("token") {
        return Ok(Some(Credential {
            token: token.clone(),
            network: matches.get_one::<String>("token-network").cloned(),
            expires: matches.get_one::<String>("token-expires").cloned(),
            subject: None,
        }));
    }
    let Some(sn) = matches
        .get_one::<String>("sn")
        .and_then(|s| SocialNetworkId::new(s.as_str()).ok())
    else {
        return Ok(None);
    };
    let store =
        TokenStore::open(&settings.token_file).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(store.get(&settings.alias, &sn).map(|token| Credential {
        token: token.token,
        network: Some(token.network.to_string()),
        expires: Some(token.expires_at.to_iso8601()),
        subject: Some(token.subject),
    }))
}

/// The query string for `endpoint`, parameters in table order.
pub fn query(endpoint: &Endpoint, matches: &ArgMatches, subject: Option<&str>) -> String {
    let mut pairs = Vec::new();
    for param in endpoint.params {
        let value = match param.kind {
            ParamKind::List => matches
                .get_many::<String>(param.name)
                .map(|items| encode_list(&items.collect::<Vec<_>>())),
            _ if param.name == "subject" => matches
                .get_one::<String>("subject")
                .map(String::as_str)
                .or(subject)
                .map(encode_component),
            _ => matches
                .get_one::<String>(param.name)
                .map(|v| encode_component(v)),
        };
        if let Some(value) = value {
            pairs.push((param.name, value));
        }
    }
    join(&pairs)
}

pub async fn run(
    endpoint: &Endpoint,
    matches: &ArgMatches,
    settings: &Settings,
) -> Result<i32, Failure> {
    let credential = if endpoint.auth {
        credential(matches, settings)?
    } else {
        None
    };
    let query = query(
        endpoint,
        matches,
        credential.as_ref().and_then(|c| c.subject.as_deref()),
    );
    let mut url = format!("{}{}", settings.gateway, endpoint.path());
    if !query.is_empty() {
        url.push('?');
        url.push_str(&query);
    }
    let http = socios_core::sdk::http::default_http_client();
    let mut request = match endpoint.verb {
        Verb::Get => http.get(&url),
        Verb::Post => http.post(&url),
    };
    if let Some(credential) = credential {
        request = request.header(AUTHORIZATION, format!("Bearer {}", credential.token));
        if let Some(network) = credential.network {
            request = request.header(TOKEN_NETWORK_HEADER, network);
        }
        if let Some(expires) = credential.expires {
            request = request.header(TOKEN_EXPIRES_HEADER, expires);
        }
    }
    let response = request
        .send()
        .await
        .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
    let status = response.status();
    let body = response
        .text()
        .await
        .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
    output::emit(&body, settings.raw);
    if !status.is_success() {
        eprintln!("socios: gateway answered {status}");
        return Ok(crate::EXIT_FAILURE);
    }
    Ok(output::envelope_exit_code(&body))
}
