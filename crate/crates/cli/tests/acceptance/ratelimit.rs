//! A burst far above a network's declared rate is refused in the core; the
//! backend never sees more than the budget in any one-second window.

use std::time::Duration;

use futures::future::join_all;
use socios_core::model::SocialNetworkId;
use socios_core::sdk::RateLimit;

use crate::common::{errors, results, Stack};
use crate::{ensure, Outcome};

const BURST: usize = 20;
const PER_SECOND: u32 = 5;

pub async fn run() -> Outcome {
    let stack = Stack::start().await;
    stack
        .core
        .registry()
        .set_rate_limit(
            &SocialNetworkId::new("picshare").unwrap(),
            RateLimit::per_second(PER_SECOND),
        )
        .map_err(|e| e.to_string())?;
    stack.harness.clear_logs();

    let queries: Vec<String> = (1..=BURST)
        .map(|i| format!("id=u{i}&sn=picshare"))
        .collect();
    let envelopes = join_all(queries.iter().map(|q| stack.api("getPerson", q))).await;

    let (mut ok, mut limited) = (0, 0);
    for (envelope, query) in envelopes.iter().zip(&queries) {
        match (results(envelope).len(), errors(envelope).as_slice()) {
            (1, []) => ok += 1,
            (0, [error]) if error["code"] == "RATE_LIMITED" => limited += 1,
            _ => return Err(format!("getPerson?{query}: unexpected {envelope}")),
        }
    }
    ensure!(
        limited >= BURST - PER_SECOND as usize,
        "{limited} of {BURST} rate-limited"
    );

    let log = stack.harness.get("picshare").unwrap().log();
    let window = Duration::from_secs(1);
    let busiest = log
        .iter()
        .map(|first| {
            log.iter()
                .filter(|e| e.at >= first.at && e.at - first.at < window)
                .count()
        })
        .max()
        .unwrap_or(0);
    ensure!(
        busiest <= PER_SECOND as usize,
        "{busiest} backend requests within one second"
    );
    Ok(format!(
        "burst of {BURST} at {PER_SECOND}/s: {ok} served, {limited} RATE_LIMITED, at most {busiest} backend requests per second"
    ))
}
