//! Randomized filters through the gateway, checked against a brute-force
//! scan of every object fetched one by one.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use chrono::{DateTime, SecondsFormat};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use socios_core::model::SocialNetworkId;
use socios_core::sdk::RateLimit;
use socios_gateway::query::{encode_component, encode_list, join};
use socios_mocknet::{fixture, NETWORKS};

use crate::common::{errors, haversine_km, results, Stack};
use crate::{ensure, Outcome};

const CAP: usize = 100;
const MEDIA_CASES: usize = 120;
const PERSON_CASES: usize = 40;
const ACTIVITY_CASES: usize = 40;

/// Snapshot collection and key enumerating each kind, per network.
const MEDIA: [(&str, &str, &str); 3] = [
    ("chirper", "posts", "post_id"),
    ("picshare", "photos", "photoId"),
    ("streamhub", "videos", "video-id"),
];
const PERSONS: [(&str, &str, &str); 3] = [
    ("chirper", "users", "user_id"),
    ("picshare", "members", "memberId"),
    ("streamhub", "accounts", "account-id"),
];
const ACTIVITIES: [(&str, &str, &str); 1] = [("streamhub", "events", "event-id")];

const EXTRA_WORDS: &[&str] = &[
    "SUN",
    "ri",
    "an",
    "el",
    "ma",
    "o",
    "ALI",
    "bo",
    "Café",
    "STRASSE",
    "été",
    "uploaded",
    "liked",
    "shared",
    "zzqx",
    "night sky",
];

type Corpus = BTreeMap<String, Vec<Value>>;

async fn corpus(
    stack: &Stack,
    table: &[(&str, &str, &str)],
    endpoint: &str,
) -> Result<Corpus, String> {
    let mut out = Corpus::new();
    for (network, collection, key) in table {
        let snapshot = stack.harness.get(network).unwrap().snapshot();
        let ids: Vec<String> = snapshot[*collection]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| o[*key].as_str().unwrap().to_owned())
            .collect();
        let mut objects = Vec::new();
        for chunk in ids.chunks(50) {
            let query = join(&[
                ("id", encode_list(chunk)),
                ("sn", encode_component(network)),
            ]);
            let envelope = stack.api(endpoint, &query).await;
            ensure!(
                errors(&envelope).is_empty(),
                "{endpoint} {network}: {envelope}"
            );
            objects.extend(results(&envelope).iter().cloned());
        }
        ensure!(
            objects.len() == ids.len(),
            "{endpoint} {network}: fetched {} of {}",
            objects.len(),
            ids.len()
        );
        out.insert(network.to_string(), objects);
    }
    Ok(out)
}

fn text_has(object: &Value, field: &str, needles: &[String]) -> bool {
    object[field].as_str().is_some_and(|s| {
        let hay = s.to_lowercase();
        needles.iter().any(|n| hay.contains(n.as_str()))
    })
}

fn lower(keywords: &[String]) -> Vec<String> {
    keywords.iter().map(|k| k.to_lowercase()).collect()
}

fn millis(object: &Value, field: &str) -> Option<i64> {
    object[field].as_str().map(|s| {
        DateTime::parse_from_rfc3339(s)
            .expect("ISO instant")
            .timestamp_millis()
    })
}

fn iso(ms: i64) -> String {
    DateTime::from_timestamp_millis(ms)
        .unwrap()
        .to_rfc3339_opts(SecondsFormat::Millis, true)
}

#[derive(Debug, Default)]
struct MediaFilter {
    keywords: Vec<String>,
    from: Option<i64>,
    to: Option<i64>,
    country: Option<String>,
    area: Option<(f64, f64, f64)>,
    lang: Option<String>,
    lic: Option<String>,
}

impl MediaFilter {
    fn matches(&self, item: &Value) -> bool {
        let k = lower(&self.keywords);
        let tags = item["tags"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str);
        let keyword = text_has(item, "title", &k)
            || text_has(item, "description", &k)
            || tags
                .map(str::to_lowercase)
                .any(|t| k.iter().any(|n| t.contains(n.as_str())));
        let created = millis(item, "created");
        let from = self.from.is_none_or(|f| created.is_some_and(|c| c >= f));
        let to = self.to.is_none_or(|t| created.is_some_and(|c| c <= t));
        let location = &item["location"];
        let country = self
            .country
            .as_ref()
            .is_none_or(|c| location["country"] == c.as_str());
        let area = self.area.is_none_or(|(lat, lon, rad)| {
            match (
                location["latitude"].as_f64(),
                location["longitude"].as_f64(),
            ) {
                (Some(a), Some(b)) => haversine_km(lat, lon, a, b) <= rad,
                _ => false,
            }
        });
        let lang = self
            .lang
            .as_ref()
            .is_none_or(|l| item["language"] == l.as_str());
        let lic = self
            .lic
            .as_ref()
            .is_none_or(|l| item["license"]["licenseType"] == l.as_str());
        keyword && from && to && country && area && lang && lic
    }

    fn query(&self, sns: &[&str]) -> String {
        let mut pairs = vec![("keywords", encode_list(&self.keywords))];
        if let Some(from) = self.from {
            pairs.push(("from", encode_component(&iso(from))));
        }
        if let Some(to) = self.to {
            pairs.push(("to", encode_component(&iso(to))));
        }
        if let Some(country) = &self.country {
            pairs.push(("country", encode_component(country)));
        }
        if let Some((lat, lon, rad)) = self.area {
            pairs.push(("lat", lat.to_string()));
            pairs.push(("lon", lon.to_string()));
            pairs.push(("rad", rad.to_string()));
        }
        if let Some(lang) = &self.lang {
            pairs.push(("lang", encode_component(lang)));
        }
        if let Some(lic) = &self.lic {
            pairs.push(("lic", encode_component(lic)));
        }
        pairs.push(("sns", encode_list(sns)));
        join(&pairs)
    }
}

fn keywords(rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.6) {
                fixture::WORDS.choose(rng).unwrap().to_string()
            } else {
                EXTRA_WORDS.choose(rng).unwrap().to_string()
            }
        })
        .collect()
}

fn any_item<'a>(rng: &mut ChaCha8Rng, corpus: &'a Corpus) -> &'a Value {
    let all: Vec<&Value> = corpus.values().flatten().collect();
    all.choose(rng).unwrap()
}

fn media_filter(rng: &mut ChaCha8Rng, corpus: &Corpus) -> MediaFilter {
    let mut filter = MediaFilter {
        keywords: keywords(rng),
        ..MediaFilter::default()
    };
    let lo = (fixture::EPOCH_START_SECS - 30 * 86_400) * 1000;
    let hi = (fixture::EPOCH_END_SECS + 30 * 86_400) * 1000;
    let instant = |rng: &mut ChaCha8Rng| -> i64 {
        if rng.gen_bool(0.3) {
            // Exactly an existing timestamp, to probe inclusive bounds.
            if let Some(ms) = millis(any_item(rng, corpus), "created") {
                return ms;
            }
        }
        let secs = rng.gen_range(lo / 1000..hi / 1000) * 1000;
        if rng.gen_bool(0.3) {
            secs + rng.gen_range(1..1000)
        } else {
            secs
        }
    };
    if rng.gen_bool(0.4) {
        let (a, b) = (instant(rng), instant(rng));
        match rng.gen_range(0..3) {
            0 => filter.from = Some(a.min(b)),
            1 => filter.to = Some(a.max(b)),
            _ => (filter.from, filter.to) = (Some(a.min(b)), Some(a.max(b))),
        }
    }
    if rng.gen_bool(0.3) {
        let place = fixture::PLACES.choose(rng).unwrap();
        let (lat, lon) = (
            place.lat + rng.gen_range(-0.2..0.2),
            place.lon + rng.gen_range(-0.2..0.2),
        );
        let boundary = any_item(rng, corpus);
        let rad = match (
            boundary["location"]["latitude"].as_f64(),
            boundary["location"]["longitude"].as_f64(),
        ) {
            (Some(a), Some(b)) if rng.gen_bool(0.3) => haversine_km(lat, lon, a, b),
            _ => *[0.5, 2.0, 10.0, 30.0, 100.0, 400.0, 2000.0]
                .choose(rng)
                .unwrap(),
        };
        filter.area = Some((lat, lon, rad));
    }
    if rng.gen_bool(0.2) {
        filter.country = Some(fixture::PLACES.choose(rng).unwrap().country.to_owned());
    }
    if rng.gen_bool(0.3) {
        filter.lang = Some(fixture::LANGUAGES.choose(rng).unwrap().to_string());
    }
    if rng.gen_bool(0.3) {
        filter.lic = Some(fixture::LICENSES.choose(rng).unwrap().0.to_owned());
    }
    filter
}

fn random_sns<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> Vec<&'a str> {
    let mut sns = pool.to_vec();
    sns.shuffle(rng);
    sns.truncate(rng.gen_range(1..=pool.len()));
    sns
}

#[derive(Default)]
struct Tally {
    cases: usize,
    non_empty: usize,
    capped: usize,
}

/// Compares one gateway answer with the oracle's matches per network.
fn compare(
    label: &str,
    envelope: &Value,
    sns: &[&str],
    corpus: &Corpus,
    matches: impl Fn(&Value) -> bool,
    tally: &mut Tally,
) -> Result<(), String> {
    ensure!(
        errors(envelope).is_empty(),
        "{label}: errors {}",
        envelope["errors"]
    );
    tally.cases += 1;
    let mut got: BTreeMap<&str, BTreeMap<String, &Value>> = BTreeMap::new();
    for item in results(envelope) {
        let sn = item["sn"].as_str().unwrap();
        ensure!(sns.contains(&sn), "{label}: result from unrequested {sn}");
        let id = item["id"]["id"].as_str().unwrap().to_owned();
        ensure!(
            got.entry(sn)
                .or_default()
                .insert(id.clone(), item)
                .is_none(),
            "{label}: {id}@{sn} twice"
        );
    }
    let mut any = false;
    for sn in sns {
        let expected: BTreeMap<String, &Value> = corpus[*sn]
            .iter()
            .filter(|o| matches(o))
            .map(|o| (o["id"]["id"].as_str().unwrap().to_owned(), o))
            .collect();
        let returned = got.remove(sn).unwrap_or_default();
        any |= !expected.is_empty();
        for (id, item) in &returned {
            ensure!(
                expected.get(id) == Some(item),
                "{label}: {id}@{sn} returned but not a match (or differs from its fetched form)"
            );
        }
        if expected.len() > CAP {
            tally.capped += 1;
            ensure!(
                returned.len() == CAP,
                "{label}: {sn} has {} matches, gateway returned {}",
                expected.len(),
                returned.len()
            );
        } else {
            let missing: BTreeSet<_> = expected
                .keys()
                .filter(|id| !returned.contains_key(*id))
                .collect();
            ensure!(missing.is_empty(), "{label}: {sn} missing {missing:?}");
        }
    }
    tally.non_empty += usize::from(any);
    Ok(())
}

pub async fn run() -> Outcome {
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
    let media = corpus(&stack, &MEDIA, "getMediaItem").await?;
    let persons = corpus(&stack, &PERSONS, "getPerson").await?;
    let activities = corpus(&stack, &ACTIVITIES, "getActivity").await?;

    let mut rng = ChaCha8Rng::seed_from_u64(0xf17e);
    let started = Instant::now();
    let mut tally = Tally::default();

    for case in 0..MEDIA_CASES {
        let filter = media_filter(&mut rng, &media);
        let sns = random_sns(&mut rng, &NETWORKS);
        let query = filter.query(&sns);
        let envelope = stack.api("findMediaItems", &query).await;
        compare(
            &format!("media {case} {query}"),
            &envelope,
            &sns,
            &media,
            |o| filter.matches(o),
            &mut tally,
        )?;
    }
    for case in 0..PERSON_CASES {
        let words = keywords(&mut rng);
        let sns = random_sns(&mut rng, &NETWORKS);
        let query = join(&[
            ("keywords", encode_list(&words)),
            ("sns", encode_list(&sns)),
        ]);
        let envelope = stack.api("findPersonsByKeyword", &query).await;
        let k = lower(&words);
        let matches =
            |p: &Value| text_has(p, "username", &k) || text_has(&p["name"], "fullName", &k);
        compare(
            &format!("persons {case} {query}"),
            &envelope,
            &sns,
            &persons,
            matches,
            &mut tally,
        )?;
    }
    for case in 0..ACTIVITY_CASES {
        let words = keywords(&mut rng);
        let lang = rng
            .gen_bool(0.4)
            .then(|| fixture::LANGUAGES.choose(&mut rng).unwrap().to_string());
        let mut pairs = vec![("keywords", encode_list(&words))];
        if let Some(lang) = &lang {
            pairs.push(("lang", encode_component(lang)));
        }
        pairs.push(("sns", "streamhub".to_owned()));
        let query = join(&pairs);
        let envelope = stack.api("findActivities", &query).await;
        let k = lower(&words);
        let matches = |a: &Value| {
            let keyword = text_has(a, "title", &k) || text_has(a, "description", &k);
            let language = lang.as_ref().is_none_or(|l| {
                a["mediaItems"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .any(|m| m["language"] == l.as_str())
            });
            keyword && language
        };
        compare(
            &format!("activities {case} {query}"),
            &envelope,
            &["streamhub"],
            &activities,
            matches,
            &mut tally,
        )?;
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    ensure!(
        tally.non_empty * 2 > tally.cases,
        "only {} of {} filters matched anything",
        tally.non_empty,
        tally.cases
    );
    Ok(format!(
        "{} filters over {} objects, {} with matches, {} per-network caps hit, {:.1}s",
        tally.cases,
        media
            .values()
            .chain(persons.values())
            .chain(activities.values())
            .map(Vec::len)
            .sum::<usize>(),
        tally.non_empty,
        tally.capped,
        elapsed.as_secs_f64()
    ))
}
