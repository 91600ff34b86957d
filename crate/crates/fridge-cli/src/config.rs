//! Strict config ingestion: a flat JSON object with exactly the nine
//! parameter keys; unknown keys, missing keys, and invariant violations are
//! hard errors with the offending location.

use std::path::Path;

use fridge_core::FridgeParams;

use crate::Failure;

pub fn load_params(path: &Path) -> Result<FridgeParams, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}
