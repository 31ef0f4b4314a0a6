//! Deterministic building blocks for fixture datasets.
//!
//! Every dataset is a pure function of `(GENERATOR_VERSION, seed, network)`.
//! Changing any pool below changes the datasets, so bump the version with it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GENERATOR_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 2014;

pub const PERSONS: usize = 50;
pub const MEDIA_ITEMS: usize = 200;
pub const ACTIVITIES: usize = 20;

/// Seeds a network's generator. The salt keeps networks independent of
/// each other under the same seed.
pub fn rng_for(seed: u64, network: &str) -> ChaCha8Rng {
    let salt = network.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ salt ^ u64::from(GENERATOR_VERSION).rotate_left(32))
}

pub const FIRST_NAMES: &[&str] = &[
    "Alice", "Bob", "Carol", "Dave", "Erin", "Frank", "Grace", "Heidi", "Ivan", "Judy", "Mallory",
    "Niaj", "Olivia", "Peggy", "Rupert", "Sybil", "Trent", "Victor", "Walter", "Zoë", "Åsa",
    "Élodie", "Dimitris", "Yuki", "Alicia",
];

pub const LAST_NAMES: &[&str] = &[
    "Martin",
    "Smith",
    "Papadopoulos",
    "Müller",
    "García",
    "Tanaka",
    "Dubois",
    "Rossi",
    "Nowak",
    "Jensen",
    "Ångström",
    "Okafor",
    "Silva",
    "Kowalski",
    "Leblanc",
];

pub const WORDS: &[&str] = &[
    "sunset", "beach", "mountain", "city", "night", "river", "forest", "snow", "coffee", "music",
    "travel", "friends", "food", "street", "portrait", "concert", "festival", "garden", "bridge",
    "harbor", "café", "straße", "Été", "skyline", "market", "museum", "rain", "sunrise", "desert",
    "island",
];

pub const LANGUAGES: &[&str] = &["en", "fr", "de", "el", "es", "ja"];

pub const LICENSES: &[(&str, &str, &str)] = &[
    (
        "cc-by",
        "Creative Commons Attribution",
        "https://creativecommons.org/licenses/by/4.0/",
    ),
    (
        "cc-by-sa",
        "Creative Commons Attribution-ShareAlike",
        "https://creativecommons.org/licenses/by-sa/4.0/",
    ),
    (
        "cc0",
        "Public Domain Dedication",
        "https://creativecommons.org/publicdomain/zero/1.0/",
    ),
    (
        "arr",
        "All rights reserved",
        "https://example.org/licenses/arr",
    ),
];

#[derive(Debug, Clone, Copy)]
pub struct Place {
    pub city: &'static str,
    pub country: &'static str,
    pub region: &'static str,
    pub postal_code: &'static str,
    pub lat: f64,
    pub lon: f64,
}

const fn place(
    city: &'static str,
    country: &'static str,
    region: &'static str,
    postal_code: &'static str,
    lat: f64,
    lon: f64,
) -> Place {
    Place {
        city,
        country,
        region,
        postal_code,
        lat,
        lon,
    }
}

/// Weighted toward the Paris area so radius searches there have both hits
/// and near misses.
pub const PLACES: &[Place] = &[
    place("Paris", "FR", "Île-de-France", "75001", 48.8566, 2.3522),
    place(
        "Saint-Denis",
        "FR",
        "Île-de-France",
        "93200",
        48.9362,
        2.3574,
    ),
    place(
        "Boulogne-Billancourt",
        "FR",
        "Île-de-France",
        "92100",
        48.8397,
        2.2399,
    ),
    place(
        "Versailles",
        "FR",
        "Île-de-France",
        "78000",
        48.8049,
        2.1204,
    ),
    place("Créteil", "FR", "Île-de-France", "94000", 48.7904, 2.4556),
    place("London", "GB", "England", "WC2N", 51.5074, -0.1278),
    place("Berlin", "DE", "Berlin", "10117", 52.5200, 13.4050),
    place("Athens", "GR", "Attica", "10552", 37.9838, 23.7275),
    place(
        "Thessaloniki",
        "GR",
        "Central Macedonia",
        "54624",
        40.6401,
        22.9444,
    ),
    place("New York", "US", "NY", "10007", 40.7128, -74.0060),
    place("Tokyo", "JP", "Tokyo", "100-0001", 35.6762, 139.6503),
    place("Madrid", "ES", "Madrid", "28013", 40.4168, -3.7038),
];

/// 2013-01-01T00:00:00Z.
pub const EPOCH_START_SECS: i64 = 1_356_998_400;
/// 2014-07-18T00:00:00Z.
pub const EPOCH_END_SECS: i64 = 1_405_641_600;

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    pool.choose(rng).expect("pools are nonempty")
}

pub fn instant_secs(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(EPOCH_START_SECS..EPOCH_END_SECS)
}

/// Up to about 0.06 degrees of jitter, rounded to 4 decimals.
pub fn jitter(rng: &mut ChaCha8Rng, value: f64) -> f64 {
    let delta: f64 = rng.gen_range(-0.06..0.06);
    ((value + delta) * 10_000.0).round() / 10_000.0
}

pub fn distinct_words(rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    WORDS
        .choose_multiple(rng, count)
        .map(|w| (*w).to_owned())
        .collect()
}

pub fn sentence(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut out = Vec::with_capacity(words);
    for _ in 0..words {
        out.push(*pick(rng, WORDS));
    }
    let mut text = out.join(" ");
    if let Some(first) = text.get(0..1) {
        let upper = first.to_uppercase();
        text.replace_range(0..1, &upper);
    }
    text
}

pub fn person_id(n: usize) -> String {
    format!("u{n}")
}

pub fn media_id(n: usize) -> String {
    format!("m{n}")
}

/// Random subset of other persons, excluding `me`.
pub fn others(rng: &mut ChaCha8Rng, me: usize, max: usize) -> Vec<String> {
    let count = rng.gen_range(0..=max);
    let mut pool: Vec<usize> = (1..=PERSONS).filter(|&n| n != me).collect();
    pool.shuffle(rng);
    pool.truncate(count);
    pool.sort_unstable();
    pool.into_iter().map(person_id).collect()
}

/// Persons `u{n}` with `n` numerically ascending, the order backends list
/// people in.
pub fn numeric_order(a: &str, b: &str) -> std::cmp::Ordering {
    let key = |s: &str| s.get(1..).and_then(|n| n.parse::<u64>().ok());
    key(a).cmp(&key(b)).then_with(|| a.cmp(b))
}
