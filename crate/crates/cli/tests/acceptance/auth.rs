//! Delegated-credential endpoints demand a live token issued by the same
//! network for the same user; nothing else needs one.

use std::time::Duration;

use serde_json::Value;
use socios_core::sdk::AuthToken;
use socios_gateway::call::{TOKEN_EXPIRES_HEADER, TOKEN_NETWORK_HEADER};

use crate::common::{errors, results, Stack, API, SCRIPT};
use crate::{ensure, Outcome};

const GATED: [(&str, &str); 3] = [
    ("myConnectedPersons", "chirper"),
    ("myConnectedPersons", "picshare"),
    ("postMessage", "chirper"),
];

struct Presented<'a> {
    token: &'a AuthToken,
    network_header: bool,
    expires_header: bool,
}

async fn call(
    stack: &Stack,
    name: &str,
    query: &str,
    token: Option<Presented<'_>>,
) -> Result<Value, String> {
    let url = format!("{}{API}/{name}?{query}", stack.base);
    let mut request = if name == "postMessage" {
        stack.http.post(url)
    } else {
        stack.http.get(url)
    };
    if let Some(p) = token {
        request = request.bearer_auth(&p.token.token);
        if p.network_header {
            request = request.header(TOKEN_NETWORK_HEADER, p.token.network.as_str());
        }
        if p.expires_header {
            request = request.header(TOKEN_EXPIRES_HEADER, p.token.expires_at.to_iso8601());
        }
    }
    let (status, body) = stack.send(request).await;
    ensure!(status == 200, "{name}?{query}: HTTP {status}: {body}");
    serde_json::from_str(&body).map_err(|e| e.to_string())
}

fn code(envelope: &Value) -> String {
    match errors(envelope).as_slice() {
        [] => "none".to_owned(),
        [one] => one["code"].as_str().unwrap_or("?").to_owned(),
        many => format!("{} errors", many.len()),
    }
}

pub async fn run() -> Outcome {
    let stack = Stack::start().await;
    let issue = |sn: &str, subject: &str, ttl: Duration| {
        stack
            .harness
            .get(sn)
            .unwrap()
            .issue_token(subject, ttl)
            .unwrap()
    };
    let mut checks = 0;

    for (name, sn) in GATED {
        let query = |user: &str| {
            let msg = if name == "postMessage" {
                "&msg=gate%20check"
            } else {
                ""
            };
            format!("id={user}&sn={sn}&subject=u1{msg}")
        };
        let other = if sn == "chirper" {
            "picshare"
        } else {
            "chirper"
        };
        let expired = issue(sn, "u1", Duration::from_millis(1));
        let foreign = issue(other, "u1", Duration::from_secs(600));
        let valid = issue(sn, "u1", Duration::from_secs(600));
        tokio::time::sleep(Duration::from_millis(50)).await;

        let with = |token, network_header, expires_header| {
            Some(Presented {
                token,
                network_header,
                expires_header,
            })
        };
        let cases: [(&str, String, Option<Presented>, &str); 7] = [
            ("no token", query("u1"), None, "AUTH_REQUIRED"),
            (
                "expired, declared",
                query("u1"),
                with(&expired, true, true),
                "AUTH_INVALID",
            ),
            (
                "expired, undeclared",
                query("u1"),
                with(&expired, false, false),
                "AUTH_INVALID",
            ),
            (
                "other network, declared",
                query("u1"),
                with(&foreign, true, true),
                "AUTH_INVALID",
            ),
            (
                "other network, undeclared",
                query("u1"),
                with(&foreign, false, false),
                "AUTH_INVALID",
            ),
            (
                "other user",
                query("u2"),
                with(&valid, true, true),
                "AUTH_INVALID",
            ),
            ("valid", query("u1"), with(&valid, true, true), "none"),
        ];
        for (label, query, token, wanted) in cases {
            stack.harness.clear_logs();
            let envelope = call(&stack, name, &query, token).await?;
            let got = code(&envelope);
            ensure!(
                got == wanted,
                "{name} on {sn}, {label}: got {got}, wanted {wanted}"
            );
            if label == "no token" {
                ensure!(
                    stack.harness.total_requests() == 0,
                    "{name} on {sn}: backend called without a token"
                );
            }
            checks += 1;
        }
    }

    let token = issue("chirper", "u1", Duration::from_secs(600));
    let presented = Presented {
        token: &token,
        network_header: true,
        expires_header: true,
    };
    let posted = call(
        &stack,
        "postMessage",
        "id=u1&sn=chirper&subject=u1&msg=round%20trip%20%C3%A9",
        Some(presented),
    )
    .await?;
    ensure!(errors(&posted).is_empty(), "postMessage: {posted}");
    let new_id = results(&posted)[0]["id"].clone();
    let feed = stack.api("getMediaItemsForUser", "id=u1&sn=chirper").await;
    ensure!(
        results(&feed)
            .iter()
            .any(|m| m["id"]["id"] == new_id && m["description"] == "round trip é"),
        "posted item {new_id} not in the author's feed"
    );

    let mut open = 0;
    for call in SCRIPT.iter().filter(|c| !c.auth) {
        let envelope = stack.api(call.endpoint, call.query).await;
        ensure!(
            errors(&envelope).is_empty(),
            "{} without a token: {}",
            call.endpoint,
            envelope["errors"]
        );
        open += 1;
    }
    Ok(format!(
        "{checks} gated calls gave the expected codes; post {new_id} visible in the feed; {open} open endpoints need no token"
    ))
}
