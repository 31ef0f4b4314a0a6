//! Invariant checks for canonical objects.
//!
//! Validation never fails: every broken invariant becomes a [`Violation`]
//! carrying the dotted field path it was found at.

use std::fmt;

use serde::Serialize;

use super::types::*;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.rule)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: &str, rule: impl Into<String>) {
        self.violations.push(Violation {
            path: path.to_owned(),
            rule: rule.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, violation) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{violation}")?;
        }
        Ok(())
    }
}

pub trait Validate {
    fn check(&self, path: &str, report: &mut ValidationReport);

    fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check("", &mut report);
        report
    }
}

fn join(base: &str, field: &str) -> String {
    if base.is_empty() {
        field.to_owned()
    } else {
        format!("{base}.{field}")
    }
}

fn index(base: &str, field: &str, i: usize) -> String {
    format!("{}[{i}]", join(base, field))
}

fn same_network(
    report: &mut ValidationReport,
    path: &str,
    found: &SocialNetworkId,
    owner: &SocialNetworkId,
) {
    if found != owner {
        report.push(
            path,
            format!("social network {found} does not match owning network {owner}"),
        );
    }
}

fn check_sn(report: &mut ValidationReport, base: &str, id: &ObjectId, sn: &SocialNetworkId) {
    if &id.social_network != sn {
        report.push(
            &join(base, "sn"),
            format!(
                "mismatch with id.socialNetwork ({} != {})",
                sn, id.social_network
            ),
        );
    }
}

fn check_id(report: &mut ValidationReport, path: &str, id: &ObjectId) {
    if id.id.is_empty() {
        report.push(&join(path, "id"), "must not be empty");
    }
}

impl Validate for ObjectId {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        check_id(report, path, self);
    }
}

impl Validate for Name {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if self.first_name.is_none()
            && self.last_name.is_none()
            && self.additional_name.is_none()
            && self.full_name.is_none()
        {
            report.push(path, "at least one name field must be present");
        }
    }
}

impl Validate for Address {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if let Some(lat) = self.latitude {
            if !(-90.0..=90.0).contains(&lat) {
                report.push(&join(path, "latitude"), "must be within [-90, 90]");
            }
        }
        if let Some(lon) = self.longitude {
            if !(-180.0..=180.0).contains(&lon) {
                report.push(&join(path, "longitude"), "must be within [-180, 180]");
            }
        }
    }
}

impl Validate for License {
    fn check(&self, _path: &str, _report: &mut ValidationReport) {}
}

impl Validate for Person {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        check_id(report, &join(path, "id"), &self.id);
        check_sn(report, path, &self.id, &self.sn);
        for (i, address) in self.addresses.iter().enumerate() {
            address.check(&index(path, "addresses", i), report);
        }
        if let Some(location) = &self.current_location {
            location.check(&join(path, "currentLocation"), report);
        }
        if let Some(name) = &self.name {
            name.check(&join(path, "name"), report);
        }
    }
}

impl Validate for MediaItem {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        check_id(report, &join(path, "id"), &self.id);
        check_sn(report, path, &self.id, &self.sn);
        if let Some(user) = &self.user_id {
            check_id(report, &join(path, "userId"), user);
            same_network(
                report,
                &join(path, "userId.socialNetwork"),
                &user.social_network,
                &self.sn,
            );
        }
        for (i, tagged) in self.tagged_people.iter().enumerate() {
            let at = index(path, "taggedPeople", i);
            check_id(report, &at, tagged);
            same_network(
                report,
                &join(&at, "socialNetwork"),
                &tagged.social_network,
                &self.sn,
            );
        }
        if let Some(location) = &self.location {
            location.check(&join(path, "location"), report);
        }
        if let Some(rating) = self.rating {
            if !rating.is_finite() {
                report.push(&join(path, "rating"), "must be a finite number");
            }
        }
        for (i, comment) in self.comments.iter().enumerate() {
            comment.check(&index(path, "comments", i), report);
        }
    }
}

impl Validate for Activity {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        check_id(report, &join(path, "id"), &self.id);
        check_sn(report, path, &self.id, &self.sn);
        if let Some(location) = &self.location {
            location.check(&join(path, "location"), report);
        }
        if let Some(actor) = &self.actor_id {
            check_id(report, &join(path, "actorId"), actor);
            same_network(
                report,
                &join(path, "actorId.socialNetwork"),
                &actor.social_network,
                &self.sn,
            );
        }
        for (i, item) in self.media_items.iter().enumerate() {
            let at = index(path, "mediaItems", i);
            same_network(report, &join(&at, "sn"), &item.sn, &self.sn);
            item.check(&at, report);
        }
        for (i, person) in self.persons.iter().enumerate() {
            let at = index(path, "persons", i);
            same_network(report, &join(&at, "sn"), &person.sn, &self.sn);
            person.check(&at, report);
        }
        for (i, nested) in self.activities.iter().enumerate() {
            let at = index(path, "activities", i);
            same_network(report, &join(&at, "sn"), &nested.sn, &self.sn);
            nested.check(&at, report);
        }
    }
}

impl Validate for Comment {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        check_id(report, &join(path, "id"), &self.id);
        check_sn(report, path, &self.id, &self.sn);
    }
}

impl Validate for DateTimeFilter {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if let (Some(from), Some(to)) = (self.from, self.to) {
            if from > to {
                report.push(
                    &join(path, "from"),
                    format!("from ({from}) is after to ({to})"),
                );
            }
        }
    }
}

impl Validate for AreaFilter {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if !(-90.0..=90.0).contains(&self.latitude) {
            report.push(&join(path, "latitude"), "must be within [-90, 90]");
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            report.push(&join(path, "longitude"), "must be within [-180, 180]");
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            report.push(
                &join(path, "radius"),
                "must be a positive number of kilometers",
            );
        }
    }
}

impl Validate for AddressFilter {
    fn check(&self, _path: &str, _report: &mut ValidationReport) {}
}

impl Validate for LocationFilter {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if self.address_filter.is_none() && self.area_filter.is_none() {
            report.push(path, "one of addressFilter or areaFilter must be present");
        }
        if let Some(area) = &self.area_filter {
            area.check(&join(path, "areaFilter"), report);
        }
    }
}

impl Validate for PersonFilter {
    fn check(&self, _path: &str, _report: &mut ValidationReport) {}
}

impl Validate for MediaItemFilter {
    fn check(&self, path: &str, report: &mut ValidationReport) {
        if let Some(created) = &self.created {
            created.check(&join(path, "created"), report);
        }
        if let Some(location) = &self.location {
            location.check(&join(path, "location"), report);
        }
    }
}

impl Validate for ActivityFilter {
    fn check(&self, _path: &str, _report: &mut ValidationReport) {}
}
