//! `socios`: command-line client for the gateway, and a launcher for the
//! demo stack.
//!
//! Exit codes: 0 when the gateway answered 200 with no errors in the
//! envelope, 1 when the envelope carries errors, 2 on usage or transport
//! failure.

mod admin;
pub mod config;
pub mod endpoints;
pub mod output;
pub mod serve;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

use crate::config::Settings;

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Transport(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(message) => write!(f, "usage: {message}"),
            Failure::Transport(message) => write!(f, "transport: {message}"),
        }
    }
}

fn global_args() -> [Arg; 7] {
    [
        Arg::new("config")
            .long("config")
            .env("SOCIOS_CONFIG")
            .value_parser(value_parser!(PathBuf))
            .global(true)
            .help("TOML config file [default: ./socios.toml if present]"),
        Arg::new("gateway")
            .long("gateway")
            .env("SOCIOS_GATEWAY")
            .value_name("URL")
            .global(true)
            .help("gateway base URL [default: http://127.0.0.1:8480]"),
        Arg::new("alias")
            .long("alias")
            .env("SOCIOS_ALIAS")
            .global(true)
            .help("local user whose stored tokens are used [default: default]"),
        Arg::new("token-file")
            .long("token-file")
            .env("SOCIOS_TOKEN_FILE")
            .value_parser(value_parser!(PathBuf))
            .global(true)
            .help("token store [default: ~/.socios/tokens.tsv]"),
        Arg::new("raw")
            .long("raw")
            .env("SOCIOS_RAW")
            .action(ArgAction::SetTrue)
            .global(true)
            .help("print response bodies exactly as received"),
        Arg::new("mock-host")
            .long("mock-host")
            .env("SOCIOS_MOCK_HOST")
            .global(true)
            .help("host of the mock networks [default: 127.0.0.1]"),
        Arg::new("mock-port")
            .long("mock-port")
            .env("SOCIOS_MOCK_PORT")
            .value_parser(value_parser!(u16))
            .global(true)
            .help("port of the first mock network; the others follow; 0 picks free ports [default: 8481]"),
    ]
}

pub fn app() -> Command {
    Command::new("socios")
        .about("Query many social networks through one gateway")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .args(global_args())
        .subcommands(endpoints::commands())
        .subcommand(Command::new("health").about("GET /health"))
        .subcommand(serve::command())
        .subcommand(admin::token_command())
        .subcommand(admin::fixture_command())
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match app().try_get_matches_from(args) {
        Ok(matches) => matches,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                EXIT_FAILURE
            } else {
                EXIT_CLEAN
            };
        }
    };
    match dispatch(&matches) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("socios: {failure}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(matches: &ArgMatches) -> Result<i32, Failure> {
    let settings = Settings::resolve(matches)?;
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    if name == "serve" {
        return serve::run(sub, &settings);
    }
    let runtime = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::Transport(e.to_string()))?;
    runtime.block_on(async {
        match name {
            "health" => health(&settings).await,
            "token" => admin::token(sub, &settings).await,
            "fixture" => admin::fixture(sub, &settings).await,
            command => {
                let endpoint =
                    endpoints::find(command).expect("clap only accepts known subcommands");
                endpoints::run(endpoint, sub, &settings).await
            }
        }
    })
}

async fn health(settings: &Settings) -> Result<i32, Failure> {
    let url = format!("{}/health", settings.gateway);
    let response = socios_core::sdk::http::default_http_client()
        .get(&url)
        .send()
        .await
        .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
    let status = response.status();
    let body = response
        .text()
        .await
        .map_err(|e| Failure::Transport(format!("{url}: {e}")))?;
    output::emit(&body, settings.raw);
    Ok(if status.is_success() {
        EXIT_CLEAN
    } else {
        EXIT_FAILURE
    })
}
