//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any FAIL.

#[path = "../common/mod.rs"]
mod common;

mod auth;
mod capability;
mod isolation;
mod mapping;
mod partition;
mod ratelimit;
mod search;
mod smoke;
mod wire;

use std::future::Future;
use std::pin::Pin;
use std::time::Instant;

/// A criterion yields a one-line summary of what it checked, or why it
/// failed.
type Outcome = Result<String, String>;
type Criterion = fn() -> Pin<Box<dyn Future<Output = Outcome> + Send>>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}
pub(crate) use ensure;

const CRITERIA: [(&str, Criterion); 9] = [
    ("batch partition", || Box::pin(partition::run())),
    ("error isolation", || Box::pin(isolation::run())),
    ("search against brute force", || Box::pin(search::run())),
    ("capability gating", || Box::pin(capability::run())),
    ("user token gate", || Box::pin(auth::run())),
    ("rate limit", || Box::pin(ratelimit::run())),
    ("mapping round trip", || Box::pin(mapping::run())),
    ("wire fidelity", || Box::pin(wire::run())),
    ("cli smoke", || Box::pin(smoke::run())),
];

fn main() {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .expect("runtime");
    let mut failed = 0;
    for (index, (name, criterion)) in CRITERIA.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        // Spawned so a panic becomes a FAIL line instead of ending the run.
        let outcome = runtime.block_on(async { tokio::spawn(criterion()).await });
        let elapsed = started.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(Ok(detail)) => format!("PASS {} {name} ({elapsed:.1}s): {detail}", index + 1),
            Ok(Err(reason)) => {
                failed += 1;
                format!("FAIL {} {name} ({elapsed:.1}s): {reason}", index + 1)
            }
            Err(panic) => {
                failed += 1;
                format!(
                    "FAIL {} {name} ({elapsed:.1}s): panicked: {panic}",
                    index + 1
                )
            }
        };
        println!("{line}");
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
