//! Joint radar-communications performance bounds.
//!
//! A receiver that both decodes a communications signal and estimates the
//! delay of a radar return in the same band is characterised by two rates:
//! the communications data rate and the *estimation rate*, the mutual
//! information rate between a fluctuating target delay and its estimate.
//!
//! The crate is split into:
//!
//! - [`scenario`]: physical parameters, unit conversion and the derived
//!   [`LinkBudget`](scenario::LinkBudget) every bound consumes.
//! - [`bounds`]: closed-form outer bounds, the successive interference
//!   cancellation (SIC) vertex, the interpolated inner bound and the
//!   multiple-access pentagon.
//! - [`waterfill`]: the two-subband water-filling inner bound and the upper
//!   convex hull of contributing inner bounds.
//! - [`mcsim`]: seeded Monte Carlo experiments that check the delay
//!   Cramér-Rao variance and the residual-interference approximation.
//!
//! The closed-form modules are generic over the scalar type ([`Real`]);
//! aliases for `f64` and `f32` are exported below. The Monte Carlo module
//! works in `f64` only.
//!
//! ```
//! use mudr_core::{bounds, Scenario64};
//!
//! let lb = Scenario64::table2().link_budget().unwrap();
//! let outer = bounds::comms_outer_rate(&lb);
//! let sic = bounds::sic_comms_rate(&lb);
//! assert!(sic < outer);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod bounds;
pub mod error;
pub mod mcsim;
pub mod num;
pub mod scenario;
pub mod waterfill;

pub use error::{Error, Result};
pub use num::Real;

pub type Scenario64 = scenario::Scenario<f64>;
pub type Scenario32 = scenario::Scenario<f32>;
pub type Target64 = scenario::Target<f64>;
pub type Target32 = scenario::Target<f32>;
pub type LinkBudget64 = scenario::LinkBudget<f64>;
pub type LinkBudget32 = scenario::LinkBudget<f32>;
pub type RatePoint64 = bounds::RatePoint<f64>;
pub type RatePoint32 = bounds::RatePoint<f32>;
pub type RateCurve64 = bounds::RateCurve<f64>;
pub type RateCurve32 = bounds::RateCurve<f32>;
pub type RateRegion64 = bounds::RateRegion<f64>;
pub type PentagonRegion64 = bounds::PentagonRegion<f64>;
pub type SubbandSplit64 = waterfill::SubbandSplit<f64>;
pub type SubbandSplit32 = waterfill::SubbandSplit<f32>;
pub type WaterfillPoint64 = waterfill::WaterfillPoint<f64>;
pub type WaterfillPoint32 = waterfill::WaterfillPoint<f32>;
