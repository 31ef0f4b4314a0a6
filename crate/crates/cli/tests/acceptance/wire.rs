//! Canonical objects survive serialize/parse unchanged and match the
//! published schema, as do all gateway responses.

use std::time::Duration;

use proptest::collection::vec;
use proptest::option::of;
use proptest::prelude::*;
use proptest::string::string_regex;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;
use socios_core::model::{
    parse_canonical, serialize_canonical, Activity, Address, Canonical, Comment, Date, License,
    MediaItem, MediaType, Name, ObjectId, Person, SocialNetworkId, Timestamp, Validate,
};

use crate::common::{schema, Stack, API, SCRIPT};
use crate::{ensure, Outcome};

const CASES: u32 = 10_000;

fn text() -> BoxedStrategy<String> {
    string_regex("(?s).{0,12}").unwrap().boxed()
}

fn native_id() -> BoxedStrategy<String> {
    string_regex("(?s).{1,10}").unwrap().boxed()
}

fn network() -> impl Strategy<Value = SocialNetworkId> {
    prop_oneof![
        Just("chirper".to_owned()),
        string_regex("[a-z][a-z0-9_]{0,8}").unwrap()
    ]
    .prop_map(|name| SocialNetworkId::new(name).unwrap())
}

fn object_id(sn: &SocialNetworkId) -> impl Strategy<Value = ObjectId> {
    let sn = sn.clone();
    native_id().prop_map(move |id| ObjectId::new(id, sn.clone()))
}

fn timestamp() -> impl Strategy<Value = Timestamp> {
    (-62_135_596_800_000i64..=253_402_300_799_999)
        .prop_map(|ms| Timestamp::from_millis(ms).unwrap())
}

fn finite() -> impl Strategy<Value = f64> {
    use proptest::num::f64::{NEGATIVE, NORMAL, POSITIVE, SUBNORMAL, ZERO};
    POSITIVE | NEGATIVE | NORMAL | SUBNORMAL | ZERO
}

fn address() -> impl Strategy<Value = Address> {
    (
        (of(text()), of(text()), of(text()), of(text()), of(text())),
        of(-90.0..=90.0f64),
        of(-180.0..=180.0f64),
    )
        .prop_map(
            |(
                (country, extended_address, postal_code, region, street_address),
                latitude,
                longitude,
            )| Address {
                country,
                extended_address,
                latitude,
                longitude,
                postal_code,
                region,
                street_address,
            },
        )
}

fn name() -> impl Strategy<Value = Name> {
    (of(text()), of(text()), of(text()), of(text()))
        .prop_filter("a name has at least one part", |n| {
            n.0.is_some() || n.1.is_some() || n.2.is_some() || n.3.is_some()
        })
        .prop_map(|(first_name, last_name, additional_name, full_name)| Name {
            first_name,
            last_name,
            additional_name,
            full_name,
        })
}

fn person(sn: &SocialNetworkId) -> impl Strategy<Value = Person> {
    let strings = (
        of(text()),
        of(text()),
        of(text()),
        of(text()),
        of(text()),
        of(text()),
    );
    let parts = (
        vec(address(), 0..3),
        of((1i32..=9999, 1u32..=12, 1u32..=28)
            .prop_map(|(y, m, d)| Date::from_ymd(y, m, d).unwrap())),
        of(address()),
        of(name()),
        vec(text(), 0..3),
        of(timestamp()),
    );
    let numbers = (
        of(any::<i32>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
    );
    (object_id(sn), strings, parts, numbers).prop_map(
        |(
            id,
            (about_me, username, email, gender, profile_url, thumbnail_url),
            (addresses, birthday, current_location, name, photos, member_since),
            (utc_offset, num_friends, in_degree, out_degree),
        )| Person {
            about_me,
            addresses,
            birthday,
            current_location,
            username,
            email,
            gender,
            name,
            photos,
            profile_url,
            member_since,
            thumbnail_url,
            utc_offset,
            num_friends,
            in_degree,
            out_degree,
            ..Person::new(id)
        },
    )
}

fn comment(sn: &SocialNetworkId) -> impl Strategy<Value = Comment> {
    (
        object_id(sn),
        of(timestamp()),
        of(text()),
        of(object_id(sn)),
        of(text()),
        of(any::<u64>()),
    )
        .prop_map(
            |(id, created, description, user_id, username, num_positive_votes)| Comment {
                created,
                description,
                user_id,
                username,
                num_positive_votes,
                ..Comment::new(id)
            },
        )
}

fn media_item(sn: &SocialNetworkId) -> impl Strategy<Value = MediaItem> {
    let kind = prop_oneof![
        Just(MediaType::Text),
        Just(MediaType::Image),
        Just(MediaType::Video)
    ];
    let strings = (of(text()), of(text()), of(text()), of(text()), of(text()));
    let license = of(
        (of(text()), of(text()), of(text())).prop_map(|(license_type, name, url)| License {
            license_type,
            name,
            url,
        }),
    );
    let counts = (
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
        of(any::<u64>()),
    );
    let rest = (
        of(timestamp()),
        of(address()),
        license,
        of(finite()),
        vec(text(), 0..3),
        vec(object_id(sn), 0..3),
        of(object_id(sn)),
        vec(comment(sn), 0..3),
    );
    (object_id(sn), kind, strings, counts, rest).prop_map(
        |(
            id,
            media_type,
            (title, thumbnail_url, description, language, url),
            (
                duration,
                file_size,
                num_ratings,
                up,
                down,
                num_comments,
                num_views,
                reshares,
                favorites,
                _,
            ),
            (created, location, license, rating, tags, tagged_people, user_id, comments),
        )| MediaItem {
            created,
            title,
            thumbnail_url,
            description,
            duration,
            location,
            language,
            license,
            file_size,
            rating,
            num_ratings,
            num_positive_votes: up,
            num_negative_votes: down,
            num_comments,
            num_views,
            num_resharings: reshares,
            num_favorites: favorites,
            tags,
            tagged_people,
            url,
            user_id,
            comments,
            ..MediaItem::new(id, media_type)
        },
    )
}

fn activity(sn: &SocialNetworkId, depth: u32) -> BoxedStrategy<Activity> {
    let nested = if depth == 0 {
        Just(Vec::new()).boxed()
    } else {
        vec(activity(sn, depth - 1), 0..2).boxed()
    };
    (
        object_id(sn),
        (
            of(timestamp()),
            of(text()),
            of(text()),
            of(address()),
            of(object_id(sn)),
            of(text()),
        ),
        vec(media_item(sn), 0..2),
        vec(person(sn), 0..2),
        nested,
    )
        .prop_map(
            |(
                id,
                (created, title, description, location, actor_id, object_type),
                media_items,
                persons,
                activities,
            )| {
                Activity {
                    created,
                    title,
                    description,
                    location,
                    actor_id,
                    object_type,
                    media_items,
                    persons,
                    activities,
                    ..Activity::new(id)
                }
            },
        )
        .boxed()
}

#[derive(Debug, Clone)]
enum Object {
    Person(Person),
    MediaItem(MediaItem),
    Activity(Activity),
    Comment(Comment),
}

fn object() -> impl Strategy<Value = Object> {
    network().prop_flat_map(|sn| {
        prop_oneof![
            person(&sn).prop_map(Object::Person),
            media_item(&sn).prop_map(Object::MediaItem),
            activity(&sn, 2).prop_map(Object::Activity),
            comment(&sn).prop_map(Object::Comment),
        ]
    })
}

/// Serialized form, or why `object` does not round-trip.
fn round_trip<T: Canonical + Validate + PartialEq + std::fmt::Debug>(
    object: &T,
) -> Result<String, String> {
    let report = object.validate();
    ensure!(
        report.is_valid(),
        "generated {} is invalid: {report}",
        T::KIND
    );
    let text = serialize_canonical(object);
    let parsed: T = parse_canonical(&text).map_err(|e| format!("{e}: {text}"))?;
    ensure!(&parsed == object, "parse changed the object: {text}");
    let again = serialize_canonical(&parsed);
    ensure!(again == text, "serialization not stable:\n{text}\n{again}");
    Ok(text)
}

fn objects_round_trip() -> Result<usize, String> {
    let validators = [
        schema("Person"),
        schema("MediaItem"),
        schema("Activity"),
        schema("Comment"),
    ];
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&object(), |object| {
            let (text, validator) = match &object {
                Object::Person(o) => (round_trip(o), &validators[0]),
                Object::MediaItem(o) => (round_trip(o), &validators[1]),
                Object::Activity(o) => (round_trip(o), &validators[2]),
                Object::Comment(o) => (round_trip(o), &validators[3]),
            };
            let text = text.map_err(TestCaseError::fail)?;
            let value: Value = serde_json::from_str(&text).unwrap();
            if let Some(error) = validator.iter_errors(&value).next() {
                return Err(TestCaseError::fail(format!("schema: {error}: {text}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(CASES as usize)
}

async fn responses_match_schema() -> Result<usize, String> {
    let stack = Stack::start().await;
    let token = stack
        .harness
        .get("chirper")
        .unwrap()
        .issue_token("u1", Duration::from_secs(600))
        .unwrap();
    let mut checked = 0;
    for call in &SCRIPT {
        let url = format!("{}{API}/{}?{}", stack.base, call.endpoint, call.query);
        let mut request = if call.post {
            stack.http.post(url)
        } else {
            stack.http.get(url)
        };
        if call.auth {
            request = request.bearer_auth(&token.token);
        }
        let (status, body) = stack.send(request).await;
        ensure!(status == 200, "{}: HTTP {status}", call.endpoint);
        let value: Value = serde_json::from_str(&body).map_err(|e| e.to_string())?;
        let validator = schema(call.envelope);
        if let Some(error) = validator.iter_errors(&value).next() {
            return Err(format!("{}: {error}", call.endpoint));
        }
        checked += 1;
    }
    let errors = schema("HttpErrorBody");
    for (name, query) in [
        ("getPerson", "id=u1"),
        ("findMediaItems", "keywords=a&rad=x"),
        ("nope", ""),
    ] {
        let (status, body) = stack.raw(name, query).await;
        ensure!(status >= 400, "{name}?{query}: HTTP {status}");
        let value: Value =
            serde_json::from_str(&body).map_err(|e| format!("{name}: {e}: {body}"))?;
        ensure!(errors.is_valid(&value), "{name}?{query}: error body {body}");
        checked += 1;
    }
    Ok(checked)
}

pub async fn run() -> Outcome {
    // Nested strategies need more stack than a runtime thread has.
    let cases = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(objects_round_trip)
        .map_err(|e| e.to_string())?
        .join()
        .map_err(|_| "round-trip thread panicked".to_owned())??;
    let responses = responses_match_schema().await?;
    Ok(format!("{cases} generated objects round-trip and validate; {responses} gateway responses match the schema"))
}
