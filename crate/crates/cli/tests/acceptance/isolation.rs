//! A failing network costs exactly its own results: everything else in the
//! response stays byte-for-byte what it was with all networks healthy.

use std::time::Duration;

use serde::Deserialize;
use serde_json::value::RawValue;
use serde_json::Value;
use socios_core::service::CoreConfig;
use socios_mocknet::FaultProfile;

use crate::common::Stack;
use crate::{ensure, Outcome};

const FAILING: &str = "picshare";
const DEADLINE: Duration = Duration::from_millis(400);

/// `(endpoint, query, picshare ids in the query)`; zero ids marks a search.
const QUERIES: [(&str, &str, usize); 6] = [
    (
        "getPerson",
        "id=u1,u2,u1,u2,u1,u2&sn=chirper,chirper,picshare,picshare,streamhub,streamhub",
        2,
    ),
    (
        "getMediaItem",
        "id=m1,m9,m1,m9,m1,m9&sn=chirper,chirper,picshare,picshare,streamhub,streamhub",
        2,
    ),
    (
        "getComment",
        "id=r1,c1,c2,r2&sn=chirper,picshare,picshare,streamhub",
        2,
    ),
    (
        "findMediaItems",
        "keywords=sunset,beach&sns=chirper,picshare,streamhub",
        0,
    ),
    (
        "findMediaItems",
        "keywords=coffee&lang=fr&sns=picshare,streamhub,chirper",
        0,
    ),
    (
        "findPersonsByKeyword",
        "keywords=an,el&sns=chirper,picshare,streamhub",
        0,
    ),
];

#[derive(Deserialize)]
struct Envelope<'a> {
    #[serde(borrow)]
    results: Vec<&'a RawValue>,
    errors: Vec<Value>,
}

/// Raw text of every result not from the failing network.
fn others(body: &str) -> Result<(Vec<String>, Vec<Value>), String> {
    let envelope: Envelope = serde_json::from_str(body).map_err(|e| format!("{e}: {body}"))?;
    let mut kept = Vec::new();
    for raw in envelope.results {
        let parsed: Value = serde_json::from_str(raw.get()).unwrap();
        if parsed["sn"] != FAILING {
            kept.push(raw.get().to_owned());
        }
    }
    Ok((kept, envelope.errors))
}

async fn bodies(stack: &Stack) -> Vec<String> {
    let mut out = Vec::new();
    for (name, query, _) in QUERIES {
        let (status, body) = stack.raw(name, query).await;
        assert_eq!(status, 200, "{name}?{query}: {body}");
        out.push(body);
    }
    out
}

pub async fn run() -> Outcome {
    let stack = Stack::start_with(CoreConfig {
        fanout_deadline: DEADLINE,
        ..CoreConfig::default()
    })
    .await;
    let picshare = stack.harness.get(FAILING).unwrap();

    let baseline = bodies(&stack).await;
    for (body, (name, _, _)) in baseline.iter().zip(QUERIES) {
        let (_, errors) = others(body)?;
        ensure!(errors.is_empty(), "baseline {name} has errors: {errors:?}");
    }

    let faults = [
        ("down", FaultProfile::down()),
        ("slow", FaultProfile::slow(DEADLINE * 3)),
        ("erroring", FaultProfile::failing(1.0)),
    ];
    let mut codes = Vec::new();
    for (label, fault) in faults {
        picshare.set_fault(fault).await.map_err(|e| e.to_string())?;
        let faulted = bodies(&stack).await;
        picshare
            .set_fault(FaultProfile::default())
            .await
            .map_err(|e| e.to_string())?;

        for ((before, after), (name, query, picshare_ids)) in
            baseline.iter().zip(&faulted).zip(QUERIES)
        {
            let (expected, _) = others(before)?;
            let (kept, errors) = others(after)?;
            ensure!(
                kept == expected,
                "{label}: {name}?{query}: other networks' results changed"
            );
            let wanted = picshare_ids.max(1);
            ensure!(
                errors.len() == wanted,
                "{label}: {name}?{query}: {} errors, wanted {wanted}: {errors:?}",
                errors.len()
            );
            for error in &errors {
                ensure!(
                    error["socialNetwork"] == FAILING,
                    "{label}: error names another network: {error}"
                );
                ensure!(
                    (picshare_ids == 0) == error.get("objectId").is_none(),
                    "{label}: {name}: objectId presence is wrong: {error}"
                );
            }
            codes.push(format!(
                "{label}={}",
                errors[0]["code"].as_str().unwrap_or("?")
            ));
        }
    }
    codes.dedup();
    Ok(format!(
        "{} queries x 3 faults on {FAILING}, other results byte-identical; codes {}",
        QUERIES.len(),
        codes.join(" ")
    ))
}
