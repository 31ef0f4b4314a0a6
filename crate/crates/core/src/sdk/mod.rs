//! The contract between the core service and per-network adaptors.

mod adaptor;
mod capability;
pub mod http;
mod method;
mod ratelimit;
mod registry;

pub use adaptor::{
    AdaptorContext, AdaptorError, AdaptorFactory, AdaptorResult, AuthToken, ErrorCode,
    NetworkConfig, PersonQuery, SnsAdaptor, UserRef,
};
pub use capability::{AdaptorCapability, CapabilityError};
pub use method::{Method, UnknownMethod};
pub use ratelimit::{CallBudget, RateLimit};
pub use registry::{AdaptorRegistry, RegistryError};
