//! Every fixture object, fetched natively and through the gateway, agrees
//! with the field table in docs/mapping.toml; no native field goes
//! unaccounted for and no canonical field appears from nowhere.

use std::collections::BTreeMap;

use chrono::DateTime;
use serde::Deserialize;
use serde_json::{json, Value};
use socios_core::model::{
    parse_canonical, Activity, Comment, MediaItem, Person, SocialNetworkId, Validate,
};
use socios_core::sdk::RateLimit;
use socios_gateway::query::{encode_component, encode_list, join};
use socios_mocknet::NETWORKS;

use crate::common::{errors, results, Stack};
use crate::{ensure, Outcome};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Kind {
    canonical: String,
    endpoint: Option<String>,
    collection: Option<String>,
    key: Option<String>,
    native: Option<String>,
    #[serde(default)]
    unmapped: Vec<String>,
    fields: Vec<Rule>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Rule {
    native: Option<String>,
    canonical: String,
    transform: String,
    value: Option<Value>,
}

type Mapping = BTreeMap<String, BTreeMap<String, Kind>>;

#[derive(Default)]
struct Stats {
    objects: usize,
    fields: BTreeMap<String, usize>,
}

/// The value at a dotted path; numeric segments index lists. Null counts
/// as absent.
fn at<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    let mut current = value;
    for segment in path.split('.') {
        current = match current {
            Value::Object(map) => map.get(segment)?,
            Value::Array(items) => items.get(segment.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    (!current.is_null()).then_some(current)
}

fn is_empty(value: Option<&Value>) -> bool {
    match value {
        None | Some(Value::Null) => true,
        Some(Value::Array(a)) => a.is_empty(),
        Some(Value::Object(o)) => o.is_empty(),
        _ => false,
    }
}

/// Leaf paths. Scalar lists are leaves; lists of objects are descended
/// with indices. With `skip_empty`, nulls and empty containers are left out.
fn leaves(value: &Value, prefix: &str, skip_empty: bool, out: &mut Vec<String>) {
    let child = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                leaves(v, &child(k), skip_empty, out);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, v) in items.iter().enumerate() {
                leaves(v, &child(&i.to_string()), skip_empty, out);
            }
        }
        v if skip_empty && is_empty(Some(v)) => {}
        _ => out.push(prefix.to_owned()),
    }
}

fn covers(rule: &str, leaf: &str) -> bool {
    leaf == rule
        || leaf
            .strip_prefix(rule)
            .is_some_and(|rest| rest.starts_with('.'))
}

/// JSON equality with numbers compared by value.
fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => match (x.as_i64(), y.as_i64()) {
            (Some(x), Some(y)) => x == y,
            _ => x.as_f64() == y.as_f64(),
        },
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(x, y)| same(x, y))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| same(v, w)))
        }
        _ => a == b,
    }
}

fn instant_ms(value: &Value) -> Option<i64> {
    DateTime::parse_from_rfc3339(value.as_str()?)
        .ok()
        .map(|t| t.timestamp_millis())
}

fn native_id(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn object_id(native: &Value, network: &str) -> Option<Value> {
    Some(json!({ "id": native_id(native)?, "socialNetwork": network }))
}

fn check(
    mapping: &Mapping,
    network: &str,
    kind_name: &str,
    native: &Value,
    canonical: &Value,
    context: &str,
    stats: &mut Stats,
) -> Result<(), String> {
    let kind = &mapping[network][kind_name];
    for rule in &kind.fields {
        let c = at(canonical, &rule.canonical);
        let n = rule.native.as_deref().and_then(|p| at(native, p));
        let here = format!("{context} {}", rule.canonical);
        *stats.fields.entry(rule.transform.clone()).or_default() += 1;
        if rule.transform == "const" {
            ensure!(
                c == rule.value.as_ref(),
                "{here}: {c:?}, wanted {:?}",
                rule.value
            );
            continue;
        }
        let Some(n) = n else {
            ensure!(
                is_empty(c),
                "{here}: {c:?} with no native {:?}",
                rule.native
            );
            continue;
        };
        let Some(c) = c else {
            return Err(format!("{here}: missing, native {:?} = {n}", rule.native));
        };
        let ok = match rule.transform.as_str() {
            "identity" => same(n, c),
            "epoch_seconds" => n.as_i64().map(|s| s * 1000) == instant_ms(c),
            "epoch_millis" => n.as_i64() == instant_ms(c),
            "iso8601" => instant_ms(n).is_some() && instant_ms(n) == instant_ms(c),
            "seconds_to_minutes" => n.as_i64().zip(c.as_i64()).is_some_and(|(s, m)| m * 60 == s),
            "object_id" => object_id(n, network).is_some_and(|o| same(&o, c)),
            "object_id_list" => n.as_array().zip(c.as_array()).is_some_and(|(ns, cs)| {
                ns.len() == cs.len()
                    && ns
                        .iter()
                        .zip(cs)
                        .all(|(n, c)| object_id(n, network).is_some_and(|o| same(&o, c)))
            }),
            each if each.starts_with("each:") => {
                let (_, nested) = each[5..].split_once('.').expect("each:<network>.<kind>");
                let (ns, cs) = (n.as_array(), c.as_array());
                let (Some(ns), Some(cs)) = (ns, cs) else {
                    return Err(format!("{here}: not lists"));
                };
                ensure!(
                    ns.len() == cs.len(),
                    "{here}: {} native items, {} canonical",
                    ns.len(),
                    cs.len()
                );
                for (i, (n, c)) in ns.iter().zip(cs).enumerate() {
                    check(
                        mapping,
                        network,
                        nested,
                        n,
                        c,
                        &format!("{here}.{i}"),
                        stats,
                    )?;
                }
                true
            }
            other => return Err(format!("{here}: unknown transform {other}")),
        };
        ensure!(
            ok,
            "{here}: native {n} does not map to {c} by {}",
            rule.transform
        );
    }

    let mut native_leaves = Vec::new();
    leaves(native, "", false, &mut native_leaves);
    for leaf in native_leaves {
        let covered = kind
            .fields
            .iter()
            .filter_map(|r| r.native.as_deref())
            .chain(kind.unmapped.iter().map(String::as_str))
            .any(|p| covers(p, &leaf));
        ensure!(
            covered,
            "{context}: native field {leaf} is neither mapped nor listed as unmapped"
        );
    }
    let mut canonical_leaves = Vec::new();
    leaves(canonical, "", true, &mut canonical_leaves);
    for leaf in canonical_leaves {
        ensure!(
            kind.fields.iter().any(|r| covers(&r.canonical, &leaf)),
            "{context}: canonical field {leaf} has no rule"
        );
    }
    Ok(())
}

fn validate(canonical_type: &str, object: &Value) -> Result<(), String> {
    let text = object.to_string();
    let report = match canonical_type {
        "Person" => parse_canonical::<Person>(&text).map(|o| o.validate()),
        "MediaItem" => parse_canonical::<MediaItem>(&text).map(|o| o.validate()),
        "Activity" => parse_canonical::<Activity>(&text).map(|o| o.validate()),
        "Comment" => parse_canonical::<Comment>(&text).map(|o| o.validate()),
        other => return Err(format!("unknown canonical type {other}")),
    }
    .map_err(|e| e.to_string())?;
    ensure!(report.is_valid(), "{report}");
    Ok(())
}

pub async fn run() -> Outcome {
    let mapping: Mapping = toml::from_str(include_str!("../../../../docs/mapping.toml"))
        .map_err(|e| format!("mapping.toml: {e}"))?;
    let stack = Stack::start().await;
    for network in NETWORKS {
        stack
            .core
            .registry()
            .set_rate_limit(
                &SocialNetworkId::new(network).unwrap(),
                RateLimit::per_second(1_000_000),
            )
            .map_err(|e| e.to_string())?;
    }
    ensure!(
        NETWORKS.iter().all(|n| mapping.contains_key(*n)),
        "mapping lacks a mock network: {:?}",
        mapping.keys().collect::<Vec<_>>()
    );

    let mut stats = Stats::default();
    for (network, kinds) in &mapping {
        let mock = stack
            .harness
            .get(network)
            .ok_or_else(|| format!("no mock network {network}"))?;
        let snapshot = mock.snapshot();
        for (kind_name, kind) in kinds {
            let (Some(endpoint), Some(collection), Some(key), Some(native_path)) =
                (&kind.endpoint, &kind.collection, &kind.key, &kind.native)
            else {
                continue;
            };
            let ids: Vec<String> = snapshot[collection.as_str()]
                .as_array()
                .ok_or_else(|| format!("{network} snapshot has no {collection}"))?
                .iter()
                .map(|o| native_id(&o[key.as_str()]).expect("snapshot id"))
                .collect();
            ensure!(!ids.is_empty(), "{network}.{kind_name}: no objects");
            let mut canonical: BTreeMap<String, Value> = BTreeMap::new();
            for chunk in ids.chunks(50) {
                let query = join(&[
                    ("id", encode_list(chunk)),
                    ("sn", encode_component(network)),
                ]);
                let envelope = stack.api(endpoint, &query).await;
                ensure!(
                    errors(&envelope).is_empty(),
                    "{endpoint} {network}: {}",
                    envelope["errors"]
                );
                for object in results(&envelope) {
                    canonical.insert(
                        object["id"]["id"].as_str().unwrap().to_owned(),
                        object.clone(),
                    );
                }
            }
            for id in &ids {
                let context = format!("{network}.{kind_name} {id}");
                let object = canonical
                    .get(id)
                    .ok_or_else(|| format!("{context}: not returned by {endpoint}"))?;
                let url = format!(
                    "{}{}",
                    mock.url(),
                    native_path.replace("{id}", &encode_component(id))
                );
                let response = stack
                    .http
                    .get(&url)
                    .send()
                    .await
                    .map_err(|e| format!("{url}: {e}"))?;
                ensure!(
                    response.status().is_success(),
                    "{url}: {}",
                    response.status()
                );
                let native: Value = response.json().await.map_err(|e| format!("{url}: {e}"))?;
                validate(&kind.canonical, object).map_err(|e| format!("{context}: {e}"))?;
                check(
                    &mapping, network, kind_name, &native, object, &context, &mut stats,
                )?;
                stats.objects += 1;
            }
        }
    }
    let rules: usize = stats.fields.values().sum();
    Ok(format!(
        "{} objects valid and mapped; {rules} field rules checked ({})",
        stats.objects,
        stats
            .fields
            .iter()
            .map(|(t, n)| format!("{t} {n}"))
            .collect::<Vec<_>>()
            .join(", ")
    ))
}
