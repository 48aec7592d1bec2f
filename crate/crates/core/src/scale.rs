//! Desk-scale bounds. Setting `F1KIT_MAX_SCALE=<n>` raises every
//! size bound (such as `n` in `gl:n`) to at least `n`.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "F1KIT_MAX_SCALE";

pub fn bound(default: u64) -> u64 {
    std::env::var(ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .map_or(default, |v| v.max(default))
}

pub fn check(what: &str, value: u64, default: u64) -> Result<()> {
    let max = bound(default);
    if value > max {
        Err(Error::OutOfScale { what: what.to_string(), value, max })
    } else {
        Ok(())
    }
}
