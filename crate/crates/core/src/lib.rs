pub mod adaptors;
pub mod model;
pub mod sdk;
pub mod search;
pub mod service;
pub mod token_store;
