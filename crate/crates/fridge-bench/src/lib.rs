//! Shared fixtures for the criterion benches.

use fridge_core::FridgeParams;

/// The canonical cooling-regime configuration.
pub fn canonical() -> FridgeParams {
    FridgeParams::new(1.0, 2.0, 1e-3, [1e-4, 1e-4, 1e-4], 1.0, 2.0, 10.0).unwrap()
}

/// Canonical rates scaled by 100: same stationary state, fast relaxation.
pub fn fast() -> FridgeParams {
    FridgeParams::new(1.0, 2.0, 0.1, [0.01, 0.01, 0.01], 1.0, 2.0, 10.0).unwrap()
}
