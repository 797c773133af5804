//! Capacities of the lossy bosonic channel under an average-energy constraint.
//!
//! The crate computes the entanglement-assisted classical capacity of a
//! single lossy mode and of the broadband (many-mode) lossy channel, together
//! with lower bounds on the unassisted classical and quantum capacities.
//!
//! Units: ħ = 1 throughout; entropies are in bits. Broadband capacities are
//! reported relative to `T·R_C`, the capacity of the noiseless wideband
//! channel used for the same transmission time and input power.
//!
//! ```
//! use bosonic_capacity::{capacities, Efficiency, ToleranceConfig};
//!
//! let tol = ToleranceConfig::default();
//! let half = Efficiency::new(0.5).unwrap();
//! let c = capacities::c_of_eta(half, &tol).unwrap();
//! assert!((c - 1.0).abs() < 1e-6);
//! ```

pub mod allocator;
pub mod capacities;
mod error;
pub mod numerics;
pub mod single_mode;

pub use error::{Error, Result};
pub use numerics::ToleranceConfig;
pub use single_mode::{Efficiency, GaussianModeState};
