//! Canonical search semantics shared by every adaptor.
//!
//! Keywords are combined with OR and matched as case-insensitive substrings
//! after full Unicode lowercasing. Area clauses use the haversine distance on
//! a sphere of radius [`EARTH_RADIUS_KM`] and include the boundary.

use crate::model::{
    Activity, Address, AddressFilter, AreaFilter, MediaItem, MediaItemFilter, Person,
};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Per network, per request.
pub const SEARCH_RESULT_CAP: usize = 100;

pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let d_phi = (lat2 - lat1).to_radians();
    let d_lambda = (lon2 - lon1).to_radians();
    let a = (d_phi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (d_lambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

/// Lowercased keywords, ready for repeated matching.
#[derive(Debug, Clone)]
pub struct Keywords(Vec<String>);

impl Keywords {
    pub fn new<S: AsRef<str>>(keywords: &[S]) -> Self {
        Self(keywords.iter().map(|k| k.as_ref().to_lowercase()).collect())
    }

    /// True if any keyword occurs in any of the fields.
    pub fn any_in<'a>(&self, fields: impl IntoIterator<Item = &'a str>) -> bool {
        let fields: Vec<String> = fields.into_iter().map(str::to_lowercase).collect();
        self.0
            .iter()
            .any(|k| fields.iter().any(|f| f.contains(k.as_str())))
    }
}

pub fn person_matches(keywords: &Keywords, person: &Person) -> bool {
    let full_name = person.name.as_ref().and_then(|n| n.full_name.as_deref());
    keywords.any_in(person.username.as_deref().into_iter().chain(full_name))
}

pub fn area_contains(area: &AreaFilter, location: Option<&Address>) -> bool {
    match location.and_then(|l| l.latitude.zip(l.longitude)) {
        Some((lat, lon)) => haversine_km(area.latitude, area.longitude, lat, lon) <= area.radius,
        None => false,
    }
}

pub fn address_matches(filter: &AddressFilter, location: Option<&Address>) -> bool {
    if filter.is_empty() {
        return true;
    }
    let Some(location) = location else {
        return false;
    };
    let field =
        |wanted: &Option<String>, actual: &Option<String>| wanted.is_none() || wanted == actual;
    field(&filter.country, &location.country)
        && field(&filter.postal_code, &location.postal_code)
        && field(&filter.region, &location.region)
}

/// Every clause present in `filter` must hold. The `sns` list is not a
/// clause; it only selects which networks are asked.
pub fn media_item_matches(filter: &MediaItemFilter, item: &MediaItem) -> bool {
    if let Some(range) = &filter.created {
        if range.from.is_some() || range.to.is_some() {
            let Some(created) = item.created else {
                return false;
            };
            if range.from.is_some_and(|from| created < from)
                || range.to.is_some_and(|to| created > to)
            {
                return false;
            }
        }
    }
    if !filter.keywords.is_empty() {
        let text = item
            .title
            .as_deref()
            .into_iter()
            .chain(item.description.as_deref())
            .chain(item.tags.iter().map(String::as_str));
        if !Keywords::new(&filter.keywords).any_in(text) {
            return false;
        }
    }
    if let Some(location) = &filter.location {
        if let Some(area) = &location.area_filter {
            if !area_contains(area, item.location.as_ref()) {
                return false;
            }
        }
        if let Some(address) = &location.address_filter {
            if !address_matches(address, item.location.as_ref()) {
                return false;
            }
        }
    }
    if let Some(language) = &filter.language {
        if item.language.as_ref() != Some(language) {
            return false;
        }
    }
    if let Some(license_type) = &filter.license_type {
        if item.license.as_ref().and_then(|l| l.license_type.as_ref()) != Some(license_type) {
            return false;
        }
    }
    true
}

/// Activities carry no language of their own; the language clause holds when
/// any attached media item is in that language.
pub fn activity_matches(keywords: &Keywords, language: Option<&str>, activity: &Activity) -> bool {
    let text = activity
        .title
        .as_deref()
        .into_iter()
        .chain(activity.description.as_deref());
    if !keywords.any_in(text) {
        return false;
    }
    match language {
        Some(language) => activity
            .media_items
            .iter()
            .any(|item| item.language.as_deref() == Some(language)),
        None => true,
    }
}
