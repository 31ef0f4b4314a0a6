//! Decoding an endpoint's parameters into a core invocation, and running it.

use axum::http::{header, HeaderMap};
use socios_core::model::{
    serialize_canonical, ActivityFilter, AddressFilter, AreaFilter, Canonical, DateTimeFilter,
    LocationFilter, MediaItemFilter, ObjectId, PersonFilter, SocialNetworkId, Timestamp,
};
use socios_core::sdk::AuthToken;
use socios_core::service::{CoreService, FindPersons, RequestError, ResultEnvelope};

use crate::endpoint::{Endpoint, ParamKind};
use crate::error::HttpError;
use crate::query::RawParams;

/// Names the network a bearer token was issued by, when it differs from `sn`.
pub const TOKEN_NETWORK_HEADER: &str = "x-socios-token-network";
/// ISO-8601 expiry of the bearer token, letting the core reject it early.
pub const TOKEN_EXPIRES_HEADER: &str = "x-socios-token-expires";

/// A bearer token as presented over HTTP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bearer {
    pub token: String,
    pub network: Option<SocialNetworkId>,
    pub expires_at: Option<Timestamp>,
}

impl Bearer {
    pub fn from_headers(headers: &HeaderMap) -> Result<Option<Self>, HttpError> {
        let text = |name| {
            headers
                .get(name)
                .map(|v| {
                    v.to_str()
                        .map_err(|_| HttpError::bad(format!("{name} header is not ASCII")))
                })
                .transpose()
        };
        let Some(authorization) = text(header::AUTHORIZATION.as_str())? else {
            return Ok(None);
        };
        let token = match authorization.split_once(' ') {
            Some((scheme, token))
                if scheme.eq_ignore_ascii_case("bearer") && !token.trim().is_empty() =>
            {
                token.trim().to_owned()
            }
            _ => return Err(HttpError::bad("Authorization must be a Bearer token")),
        };
        let network = text(TOKEN_NETWORK_HEADER)?.map(network).transpose()?;
        let expires_at = text(TOKEN_EXPIRES_HEADER)?
            .map(|t| Timestamp::parse_iso8601(t).map_err(|e| HttpError::parse(e.to_string())))
            .transpose()?;
        Ok(Some(Self {
            token,
            network,
            expires_at,
        }))
    }

    /// The token as the core sees it. Unstated network and expiry default
    /// to the request's network and no expiry, leaving the final word to
    /// the backend.
    fn into_token(self, sn: &SocialNetworkId, subject: String) -> AuthToken {
        AuthToken {
            token: self.token,
            network: self.network.unwrap_or_else(|| sn.clone()),
            subject,
            expires_at: self.expires_at.unwrap_or(Timestamp::MAX),
        }
    }
}

/// One decoded request, ready for the core.
#[derive(Debug, Clone)]
pub enum Call {
    GetPersons(Vec<ObjectId>),
    ConnectedPersons(ObjectId),
    MyConnectedPersons(ObjectId, Option<AuthToken>),
    FindPersons(FindPersons),
    GetMediaItems(Vec<ObjectId>),
    GetMediaItemsForUser {
        person: Option<ObjectId>,
        username: Option<(String, SocialNetworkId)>,
    },
    GetMediaItemsForPage(ObjectId),
    FindMediaItems(MediaItemFilter),
    FindRelevantMediaItems(ObjectId),
    GetActivities(Vec<ObjectId>),
    GetActivitiesForUser(ObjectId),
    FindActivities(ActivityFilter),
    GetComments(Vec<ObjectId>),
    GetCommentsForMediaItem(ObjectId),
    GetCommentsForActivity(ObjectId),
    PostMessage(ObjectId, String, Option<AuthToken>),
}

fn network(name: &str) -> Result<SocialNetworkId, HttpError> {
    SocialNetworkId::new(name).map_err(|e| HttpError::bad(e.to_string()))
}

struct Reader<'a> {
    params: &'a RawParams,
}

impl Reader<'_> {
    fn optional(&self, name: &str) -> Result<Option<String>, HttpError> {
        self.params.text(name)
    }

    fn required(&self, name: &str) -> Result<String, HttpError> {
        match self.optional(name)? {
            Some(value) if !value.is_empty() => Ok(value),
            Some(_) => Err(HttpError::bad(format!("{name} must not be empty"))),
            None => Err(HttpError::bad(format!("missing required parameter {name}"))),
        }
    }

    fn sn(&self) -> Result<SocialNetworkId, HttpError> {
        network(&self.required("sn")?)
    }

    fn object(&self) -> Result<ObjectId, HttpError> {
        Ok(ObjectId::new(self.required("id")?, self.sn()?))
    }

    fn ids(&self) -> Result<Vec<ObjectId>, HttpError> {
        let ids = self
            .params
            .list("id")?
            .ok_or_else(|| HttpError::bad("missing required parameter id"))?;
        let sns = self
            .params
            .list("sn")?
            .ok_or_else(|| HttpError::bad("missing required parameter sn"))?;
        let sns = sns
            .iter()
            .map(|s| network(s))
            .collect::<Result<Vec<_>, _>>()?;
        match sns.len() {
            1 => Ok(ids
                .into_iter()
                .map(|id| ObjectId::new(id, sns[0].clone()))
                .collect()),
            n if n == ids.len() => Ok(ids
                .into_iter()
                .zip(sns)
                .map(|(id, sn)| ObjectId::new(id, sn))
                .collect()),
            n => Err(HttpError::bad(format!(
                "sn lists {n} networks for {} ids",
                ids.len()
            ))),
        }
    }

    fn keywords(&self) -> Result<Vec<String>, HttpError> {
        self.params
            .list("keywords")?
            .ok_or_else(|| HttpError::bad("missing required parameter keywords"))
    }

    fn sns(&self) -> Result<Vec<SocialNetworkId>, HttpError> {
        self.params
            .list("sns")?
            .unwrap_or_default()
            .iter()
            .map(|s| network(s))
            .collect()
    }

    fn number(&self, name: &str) -> Result<Option<f64>, HttpError> {
        self.optional(name)?
            .map(|v| match v.parse::<f64>() {
                Ok(n) if n.is_finite() => Ok(n),
                _ => Err(HttpError::parse(format!(
                    "{name}={v:?} is not a finite number"
                ))),
            })
            .transpose()
    }

    fn timestamp(&self, name: &str) -> Result<Option<Timestamp>, HttpError> {
        self.optional(name)?
            .map(|v| {
                Timestamp::parse_iso8601(&v).map_err(|e| HttpError::parse(format!("{name}: {e}")))
            })
            .transpose()
    }

    fn token(
        &self,
        bearer: Option<Bearer>,
        person: &ObjectId,
    ) -> Result<Option<AuthToken>, HttpError> {
        let Some(bearer) = bearer else {
            return Ok(None);
        };
        let subject = self.required("subject")?;
        Ok(Some(bearer.into_token(&person.social_network, subject)))
    }
}

/// Checks the parameter names and `format`, then decodes the values.
pub fn decode(
    endpoint: &Endpoint,
    params: &RawParams,
    bearer: Option<Bearer>,
) -> Result<Call, HttpError> {
    if let Some(unknown) = params.names().find(|n| endpoint.param(n).is_none()) {
        return Err(HttpError::bad(format!(
            "{} does not take parameter {unknown}",
            endpoint.name
        )));
    }
    if let Some(format) = params.text("format")? {
        if format != "json" {
            return Err(HttpError::bad(format!(
                "unsupported format {format:?}; only json is served"
            )));
        }
    }
    for param in endpoint
        .params
        .iter()
        .filter(|p| p.required && p.kind != ParamKind::List)
    {
        if params.text(param.name)?.is_none() {
            return Err(HttpError::bad(format!(
                "missing required parameter {}",
                param.name
            )));
        }
    }
    let r = Reader { params };
    let call = match endpoint.name {
        "getPerson" => Call::GetPersons(r.ids()?),
        "connectedPersons" => Call::ConnectedPersons(r.object()?),
        "myConnectedPersons" => {
            let person = r.object()?;
            let token = r.token(bearer, &person)?;
            Call::MyConnectedPersons(person, token)
        }
        "findPersonsByKeyword" => Call::FindPersons(FindPersons {
            person_filter: Some(PersonFilter {
                keywords: r.keywords()?,
                sns: r.sns()?,
            }),
            ..FindPersons::default()
        }),
        "findPersonsByUsername" => Call::FindPersons(FindPersons {
            username: Some((r.required("username")?, r.sn()?)),
            ..FindPersons::default()
        }),
        "findPersonsByMediaItem" => Call::FindPersons(FindPersons {
            media_item_id: Some(r.object()?),
            ..FindPersons::default()
        }),
        "findPersonsByActivity" => Call::FindPersons(FindPersons {
            activity_id: Some(r.object()?),
            ..FindPersons::default()
        }),
        "getMediaItem" => Call::GetMediaItems(r.ids()?),
        "getMediaItemsForUser" => {
            let sn = r.sn()?;
            let id = r.optional("id")?;
            let username = r.optional("username")?;
            match (id, username) {
                (Some(id), None) => Call::GetMediaItemsForUser {
                    person: Some(ObjectId::new(id, sn)),
                    username: None,
                },
                (None, Some(name)) => Call::GetMediaItemsForUser {
                    person: None,
                    username: Some((name, sn)),
                },
                _ => {
                    return Err(HttpError::bad(
                        "getMediaItemsForUser needs exactly one of id or username",
                    ))
                }
            }
        }
        "getMediaItemsForPage" => Call::GetMediaItemsForPage(r.object()?),
        "findMediaItems" => Call::FindMediaItems(media_item_filter(&r)?),
        "findRelevantMediaItems" => Call::FindRelevantMediaItems(r.object()?),
        "getActivity" => Call::GetActivities(r.ids()?),
        "getActivitiesForUser" => Call::GetActivitiesForUser(r.object()?),
        "findActivities" => Call::FindActivities(ActivityFilter {
            keywords: r.keywords()?,
            language: r.optional("lang")?,
            sns: r.sns()?,
        }),
        "getComment" => Call::GetComments(r.ids()?),
        "getCommentsForMediaItem" => Call::GetCommentsForMediaItem(r.object()?),
        "getCommentsForActivity" => Call::GetCommentsForActivity(r.object()?),
        "postMessage" => {
            let person = r.object()?;
            let text = r.required("msg")?;
            let token = r.token(bearer, &person)?;
            Call::PostMessage(person, text, token)
        }
        other => unreachable!("endpoint table and decoder disagree on {other}"),
    };
    Ok(call)
}

fn media_item_filter(r: &Reader<'_>) -> Result<MediaItemFilter, HttpError> {
    let (from, to) = (r.timestamp("from")?, r.timestamp("to")?);
    let area = match (r.number("lat")?, r.number("lon")?, r.number("rad")?) {
        (Some(latitude), Some(longitude), Some(radius)) => Some(AreaFilter {
            latitude,
            longitude,
            radius,
        }),
        (None, None, None) => None,
        _ => return Err(HttpError::bad("lat, lon and rad must be given together")),
    };
    let address = r.optional("country")?.map(|country| AddressFilter {
        country: Some(country),
        ..AddressFilter::default()
    });
    let location = (area.is_some() || address.is_some()).then_some(LocationFilter {
        address_filter: address,
        area_filter: area,
    });
    Ok(MediaItemFilter {
        created: (from.is_some() || to.is_some()).then_some(DateTimeFilter { from, to }),
        keywords: r.keywords()?,
        location,
        language: r.optional("lang")?,
        license_type: r.optional("lic")?,
        sns: r.sns()?,
    })
}

fn body<T: Canonical>(envelope: ResultEnvelope<T>) -> String {
    serialize_canonical(&envelope)
}

/// Runs the call and serializes the envelope exactly as the HTTP body.
pub async fn execute(core: &CoreService, call: Call) -> Result<String, RequestError> {
    Ok(match call {
        Call::GetPersons(ids) => body(core.get_persons(&ids).await?),
        Call::ConnectedPersons(id) => body(core.connected_persons(&id).await?),
        Call::MyConnectedPersons(id, token) => {
            body(core.my_connected_persons(&id, token.as_ref()).await?)
        }
        Call::FindPersons(request) => body(core.find_persons(request).await?),
        Call::GetMediaItems(ids) => body(core.get_media_items(&ids).await?),
        Call::GetMediaItemsForUser { person, username } => body(
            core.get_media_items_for_user(
                person.as_ref(),
                username.as_ref().map(|(n, sn)| (n.as_str(), sn)),
            )
            .await?,
        ),
        Call::GetMediaItemsForPage(id) => body(core.get_media_items_for_page(&id).await?),
        Call::FindMediaItems(filter) => body(core.find_media_items(&filter).await?),
        Call::FindRelevantMediaItems(id) => body(core.find_relevant_media_items(&id).await?),
        Call::GetActivities(ids) => body(core.get_activities(&ids).await?),
        Call::GetActivitiesForUser(id) => body(core.get_activities_for_user(&id).await?),
        Call::FindActivities(filter) => body(core.find_activities(&filter).await?),
        Call::GetComments(ids) => body(core.get_comments(&ids).await?),
        Call::GetCommentsForMediaItem(id) => body(core.get_comments_for_media_item(&id).await?),
        Call::GetCommentsForActivity(id) => body(core.get_comments_for_activity(&id).await?),
        Call::PostMessage(id, text, token) => {
            body(core.post_message(&id, &text, token.as_ref()).await?)
        }
    })
}
