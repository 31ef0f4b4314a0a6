use std::sync::Arc;

use indexmap::IndexMap;
use parking_lot::RwLock;

use super::adaptor::{AdaptorContext, AdaptorFactory, NetworkConfig, SnsAdaptor};
use super::capability::{AdaptorCapability, CapabilityError};
use super::ratelimit::{CallBudget, RateLimit};
use crate::model::SocialNetworkId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("UNKNOWN_NETWORK: {0} is not a registered social network")]
    UnknownNetwork(String),
    #[error("DUPLICATE_NETWORK: {0} is already registered with a different adaptor")]
    DuplicateNetwork(SocialNetworkId),
    #[error("invalid capability for {network}: {source}")]
    InvalidCapability {
        network: SocialNetworkId,
        #[source]
        source: CapabilityError,
    },
}

struct Entry {
    factory: Arc<dyn AdaptorFactory>,
    context: AdaptorContext,
}

/// Known networks, in registration order, with the means to build an
/// adaptor for each.
#[derive(Default)]
pub struct AdaptorRegistry {
    entries: RwLock<IndexMap<SocialNetworkId, Entry>>,
}

impl AdaptorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `name`. Re-registering with the same factory replaces the
    /// capability and configuration; a different factory is refused.
    pub fn register(
        &self,
        name: SocialNetworkId,
        factory: Arc<dyn AdaptorFactory>,
        capability: AdaptorCapability,
        config: NetworkConfig,
    ) -> Result<(), RegistryError> {
        capability
            .check()
            .map_err(|source| RegistryError::InvalidCapability {
                network: name.clone(),
                source,
            })?;
        let mut entries = self.entries.write();
        if let Some(existing) = entries.get(&name) {
            if !std::ptr::addr_eq(Arc::as_ptr(&existing.factory), Arc::as_ptr(&factory)) {
                return Err(RegistryError::DuplicateNetwork(name));
            }
        }
        let budget = match entries.get(&name) {
            Some(existing) if existing.context.budget.limit() == capability.rate_limit => {
                existing.context.budget.clone()
            }
            _ => Arc::new(CallBudget::new(capability.rate_limit)),
        };
        let context = AdaptorContext {
            network: name.clone(),
            capability: Arc::new(capability),
            config: Arc::new(config),
            budget,
        };
        entries.insert(name, Entry { factory, context });
        Ok(())
    }

    /// Replaces the backend configuration of a registered network.
    pub fn configure(
        &self,
        name: &SocialNetworkId,
        config: NetworkConfig,
    ) -> Result<(), RegistryError> {
        let mut entries = self.entries.write();
        let entry = entries
            .get_mut(name)
            .ok_or_else(|| RegistryError::UnknownNetwork(name.to_string()))?;
        entry.context.config = Arc::new(config);
        Ok(())
    }

    /// Changes a registered network's call budget. The new budget starts
    /// empty.
    pub fn set_rate_limit(
        &self,
        name: &SocialNetworkId,
        rate_limit: RateLimit,
    ) -> Result<(), RegistryError> {
        let mut entries = self.entries.write();
        let entry = entries
            .get_mut(name)
            .ok_or_else(|| RegistryError::UnknownNetwork(name.to_string()))?;
        let mut capability = (*entry.context.capability).clone();
        capability.rate_limit = rate_limit;
        entry.context.capability = Arc::new(capability);
        entry.context.budget = Arc::new(CallBudget::new(rate_limit));
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<SocialNetworkId, RegistryError> {
        let entries = self.entries.read();
        entries
            .get_key_value(name)
            .map(|(key, _)| key.clone())
            .ok_or_else(|| RegistryError::UnknownNetwork(name.to_owned()))
    }

    pub fn contains(&self, name: &SocialNetworkId) -> bool {
        self.entries.read().contains_key(name)
    }

    pub fn capability_of(&self, name: &str) -> Result<Arc<AdaptorCapability>, RegistryError> {
        self.entries
            .read()
            .get(name)
            .map(|entry| entry.context.capability.clone())
            .ok_or_else(|| RegistryError::UnknownNetwork(name.to_owned()))
    }

    pub fn config_of(&self, name: &str) -> Result<Arc<NetworkConfig>, RegistryError> {
        self.entries
            .read()
            .get(name)
            .map(|entry| entry.context.config.clone())
            .ok_or_else(|| RegistryError::UnknownNetwork(name.to_owned()))
    }

    /// Registered networks in registration order.
    pub fn networks(&self) -> Vec<SocialNetworkId> {
        self.entries.read().keys().cloned().collect()
    }

    /// Builds a fresh adaptor for one invocation.
    pub fn instantiate(
        &self,
        name: &SocialNetworkId,
    ) -> Result<Box<dyn SnsAdaptor>, RegistryError> {
        let (factory, context) = {
            let entries = self.entries.read();
            let entry = entries
                .get(name)
                .ok_or_else(|| RegistryError::UnknownNetwork(name.to_string()))?;
            (entry.factory.clone(), entry.context.clone())
        };
        Ok(factory.create(context))
    }
}

impl std::fmt::Debug for AdaptorRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.entries.read().keys()).finish()
    }
}
