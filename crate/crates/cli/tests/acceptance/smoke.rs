//! `socios serve` plus a scripted run of every endpoint, over HTTP and
//! through the CLI, against the real binary.

use std::process::Stdio;
use std::time::{Duration, Instant};

use serde_json::Value;
use socios_core::sdk::AuthToken;
use socios_gateway::endpoint::{Endpoint, ParamKind};
use socios_gateway::query::RawParams;
use tokio::io::{AsyncBufReadExt, BufReader};
use tokio::process::{Child, Command};

use crate::common::{schema, Call, API, SCRIPT};
use crate::{ensure, Outcome};

const BUDGET: Duration = Duration::from_secs(30);
const BIN: &str = env!("CARGO_BIN_EXE_socios");

struct Cli {
    dir: tempfile::TempDir,
    gateway: String,
}

impl Cli {
    fn command(&self) -> Command {
        let mut command = Command::new(BIN);
        command
            .current_dir(self.dir.path())
            .env_clear()
            .env("HOME", self.dir.path())
            .args(["--gateway", &self.gateway, "--raw"])
            .stdin(Stdio::null());
        command
    }

    /// Exit code and stdout.
    async fn run(&self, args: &[String]) -> Result<(i32, String), String> {
        let output = self
            .command()
            .args(args)
            .output()
            .await
            .map_err(|e| e.to_string())?;
        let stdout = String::from_utf8(output.stdout).map_err(|e| e.to_string())?;
        if !output.status.success() {
            eprintln!(
                "socios {args:?}: {}",
                String::from_utf8_lossy(&output.stderr)
            );
        }
        Ok((output.status.code().unwrap_or(-1), stdout))
    }
}

/// The CLI arguments equivalent to a scripted call's query string.
fn cli_args(call: &Call) -> Vec<String> {
    let endpoint = Endpoint::by_name(call.endpoint).unwrap();
    let params = RawParams::parse(Some(call.query)).unwrap();
    let mut args = vec![socios_cli::endpoints::command_name(endpoint)];
    for param in endpoint.params {
        let values = match param.kind {
            ParamKind::List => params.list(param.name).unwrap(),
            _ => params.text(param.name).unwrap().map(|v| vec![v]),
        };
        if let Some(values) = values {
            args.push(format!("--{}", param.name));
            args.extend(values);
        }
    }
    args
}

async fn ready_line(child: &mut Child) -> Result<Value, String> {
    let stdout = child.stdout.take().unwrap();
    let mut line = String::new();
    tokio::time::timeout(
        Duration::from_secs(20),
        BufReader::new(stdout).read_line(&mut line),
    )
    .await
    .map_err(|_| "no ready line within 20s".to_owned())?
    .map_err(|e| e.to_string())?;
    serde_json::from_str(&line).map_err(|e| format!("ready line {line:?}: {e}"))
}

pub async fn run() -> Outcome {
    let started = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut child = Command::new(BIN)
        .args(["serve", "--listen", "127.0.0.1:0", "--mock-port", "0"])
        .current_dir(dir.path())
        .env_clear()
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .kill_on_drop(true)
        .spawn()
        .map_err(|e| format!("spawn {BIN}: {e}"))?;
    let outcome = scripted(&mut child, dir).await;
    child.kill().await.ok();
    let elapsed = started.elapsed();
    let detail = outcome?;
    ensure!(elapsed < BUDGET, "took {elapsed:?}");
    Ok(format!("{detail}, {:.1}s", elapsed.as_secs_f64()))
}

async fn scripted(child: &mut Child, dir: tempfile::TempDir) -> Result<String, String> {
    let ready = ready_line(child).await?;
    ensure!(ready["status"] == "ready", "ready line {ready}");
    let gateway = ready["gateway"]
        .as_str()
        .ok_or("ready line has no gateway")?
        .to_owned();
    let chirper = ready["networks"]["chirper"]
        .as_str()
        .ok_or("ready line has no chirper")?
        .to_owned();
    let cli = Cli { dir, gateway };
    let http = socios_core::sdk::http::default_http_client();

    let (code, health) = cli.run(&["health".to_owned()]).await?;
    ensure!(code == 0, "health exited {code}: {health}");

    let issue = [
        "token",
        "issue",
        "--sn",
        "chirper",
        "--subject",
        "u1",
        "--mock-url",
        &chirper,
    ]
    .map(String::from);
    let (code, issued) = cli.run(&issue).await?;
    ensure!(code == 0, "token issue exited {code}");
    let token: AuthToken =
        serde_json::from_str(&issued).map_err(|e| format!("issued token {issued:?}: {e}"))?;

    let mut identical = 0;
    for call in &SCRIPT {
        let url = format!("{}{API}/{}?{}", cli.gateway, call.endpoint, call.query);
        let mut request = if call.post {
            http.post(url)
        } else {
            http.get(url)
        };
        if call.auth {
            request = request.bearer_auth(&token.token);
        }
        let response = request.send().await.map_err(|e| e.to_string())?;
        let status = response.status();
        let body = response.text().await.map_err(|e| e.to_string())?;
        ensure!(status == 200, "{}: HTTP {status}: {body}", call.endpoint);
        let value: Value = serde_json::from_str(&body).map_err(|e| e.to_string())?;
        ensure!(
            schema(call.envelope).is_valid(&value),
            "{}: envelope does not match the schema",
            call.endpoint
        );
        ensure!(
            value["errors"].as_array().is_some_and(Vec::is_empty),
            "{}: {}",
            call.endpoint,
            value["errors"]
        );

        let args = cli_args(call);
        let (code, stdout) = cli.run(&args).await?;
        ensure!(code == 0, "socios {args:?} exited {code}");
        if call.post {
            // A second post creates a second item, so only the shape can match.
            let value: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
            ensure!(
                schema(call.envelope).is_valid(&value),
                "socios {args:?}: {stdout}"
            );
        } else {
            ensure!(
                stdout == format!("{body}\n"),
                "socios {args:?} printed something other than the body"
            );
            identical += 1;
        }
    }
    Ok(format!(
        "{} endpoints 200 and schema-valid over HTTP; {identical} CLI outputs byte-identical to the HTTP body",
        SCRIPT.len()
    ))
}
