//! Canonical object model shared by every network.

mod time;
mod types;
mod validate;
mod wire;

pub use time::{Date, Timestamp, TimestampError};
pub use types::*;
pub use validate::{Validate, ValidationReport, Violation};
pub use wire::{parse_canonical, serialize_canonical, Canonical, ParseError};
