//! Enumeration caps shared by every construction that materializes elements,
//! objects or arrows.

use std::sync::OnceLock;

pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// The element cap, overridable through the `TATE_ELEMENT_CAP` environment
/// variable (read once per process).
pub fn element_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("TATE_ELEMENT_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_ELEMENT_CAP)
    })
}
