//! IEEE 802.11ax downlink TCP goodput and delay models.
//!
//! Three ways of serving DL TCP traffic to `S` stations are modelled:
//! a single-user TXOP with Reverse Direction acks, plain single-user EDCA
//! contention, and DL MU-MIMO/OFDMA with triggered UL MU acks.
//!
//! Time and rates are integers throughout. Derived quantities (goodput,
//! symbol counts in scalar form) are generic over [`Scalar`]; [`Exact`] is
//! the reference instantiation.

pub mod aggregation;
pub mod analytic;
pub mod edca_sim;
pub mod error;
pub mod phy_tables;
pub mod scalar;
pub mod sweep;

pub use analytic::{CycleBreakdown, Scenario, Strategy, TimingMode};
pub use error::{ModelError, Result};
pub use phy_tables::{Duration, Mode, PhyRate, SegmentProfile};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::Ratio<i128>;

pub type ExactPoint = sweep::GoodputPoint<Exact>;
pub type FloatPoint = sweep::GoodputPoint<f64>;
pub type ExactCurve = sweep::Curve<Exact>;
pub type FloatCurve = sweep::Curve<f64>;
