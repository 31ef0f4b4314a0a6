use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::method::Method;
use super::ratelimit::RateLimit;

/// What a network supports, which calls need a user token, and how hard
/// the backend may be called.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdaptorCapability {
    pub supported_methods: BTreeSet<Method>,
    pub requires_auth: BTreeSet<Method>,
    pub rate_limit: RateLimit,
    /// Whether the network has a notion of activity at all.
    pub activities: bool,
    /// Longest text accepted by `postMessage`, in characters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_post_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CapabilityError {
    #[error("{0} requires auth but is not supported")]
    AuthOnUnsupported(Method),
    #[error("{0} is supported but not declared as requiring auth")]
    MissingAuth(Method),
    #[error("{0} declared on a network without activities")]
    ActivityWithoutSupport(Method),
}

impl AdaptorCapability {
    /// Builds a capability from the supported methods. Authentication is
    /// required for the delegated-credential methods among them.
    pub fn new(methods: impl IntoIterator<Item = Method>, rate_limit: RateLimit) -> Self {
        let supported_methods: BTreeSet<Method> = methods.into_iter().collect();
        let requires_auth = Method::AUTHENTICATED
            .into_iter()
            .filter(|m| supported_methods.contains(m))
            .collect();
        let activities = supported_methods.iter().any(|m| m.is_activity_family());
        Self {
            supported_methods,
            requires_auth,
            rate_limit,
            activities,
            max_post_length: None,
        }
    }

    /// Every method except those in `without`.
    pub fn all_except(without: &[Method], rate_limit: RateLimit) -> Self {
        Self::new(
            Method::ALL.into_iter().filter(|m| !without.contains(m)),
            rate_limit,
        )
    }

    pub fn with_max_post_length(mut self, max: usize) -> Self {
        self.max_post_length = Some(max);
        self
    }

    pub fn supports(&self, method: Method) -> bool {
        self.supported_methods.contains(&method)
    }

    pub fn needs_auth(&self, method: Method) -> bool {
        self.requires_auth.contains(&method)
    }

    pub fn check(&self) -> Result<(), CapabilityError> {
        if let Some(&m) = self
            .requires_auth
            .difference(&self.supported_methods)
            .next()
        {
            return Err(CapabilityError::AuthOnUnsupported(m));
        }
        for m in Method::AUTHENTICATED {
            if self.supports(m) && !self.needs_auth(m) {
                return Err(CapabilityError::MissingAuth(m));
            }
        }
        if !self.activities {
            if let Some(&m) = self
                .supported_methods
                .iter()
                .find(|m| m.is_activity_family())
            {
                return Err(CapabilityError::ActivityWithoutSupport(m));
            }
        }
        Ok(())
    }
}
