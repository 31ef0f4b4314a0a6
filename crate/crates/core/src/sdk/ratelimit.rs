//! Per-network call budget.
//!
//! Admits at most `max_calls` backend calls in any interval of length
//! `per_window`, failing fast once the budget is spent. A plain token bucket
//! with capacity `max_calls` can admit up to twice that in one window (a full
//! burst followed by the refill), so the admitted calls are tracked in a
//! sliding log instead.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RateLimit {
    pub max_calls: u32,
    #[serde(with = "duration_millis")]
    pub per_window: Duration,
}

impl RateLimit {
    pub fn new(max_calls: u32, per_window: Duration) -> Self {
        Self {
            max_calls,
            per_window,
        }
    }

    pub fn per_second(max_calls: u32) -> Self {
        Self::new(max_calls, Duration::from_secs(1))
    }
}

mod duration_millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Duration, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(value.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Duration, D::Error> {
        u64::deserialize(deserializer).map(Duration::from_millis)
    }
}

#[derive(Debug)]
pub struct CallBudget {
    limit: RateLimit,
    admitted: Mutex<VecDeque<Instant>>,
}

impl CallBudget {
    pub fn new(limit: RateLimit) -> Self {
        Self {
            limit,
            admitted: Mutex::new(VecDeque::new()),
        }
    }

    pub fn limit(&self) -> RateLimit {
        self.limit
    }

    pub fn try_acquire(&self) -> bool {
        self.try_acquire_at(Instant::now())
    }

    pub fn try_acquire_at(&self, now: Instant) -> bool {
        let mut admitted = self.admitted.lock();
        while let Some(&oldest) = admitted.front() {
            if now.saturating_duration_since(oldest) >= self.limit.per_window {
                admitted.pop_front();
            } else {
                break;
            }
        }
        if admitted.len() < self.limit.max_calls as usize {
            admitted.push_back(now);
            true
        } else {
            false
        }
    }
}
