use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Ticks per microsecond. One tick is 10 ns.
pub const TICKS_PER_US: u64 = 100;

/// Non-negative time span counted in 0.01 µs ticks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Duration(u64);

impl Duration {
    pub const ZERO: Duration = Duration(0);

    pub const fn from_ticks(ticks: u64) -> Self {
        Duration(ticks)
    }

    pub const fn from_micros(us: u64) -> Self {
        Duration(us * TICKS_PER_US)
    }

    /// Tenths of a microsecond, the resolution the PHY tables are quoted in.
    pub const fn from_deci_micros(dus: u64) -> Self {
        Duration(dus * 10)
    }

    pub const fn ticks(self) -> u64 {
        self.0
    }

    pub fn as_micros_f64(self) -> f64 {
        self.0 as f64 / TICKS_PER_US as f64
    }

    pub fn as_millis_f64(self) -> f64 {
        self.0 as f64 / (TICKS_PER_US * 1000) as f64
    }

    pub fn micros<S: Scalar>(self) -> S {
        S::from_ratio(self.0 as i128, TICKS_PER_US as i128)
    }

    pub fn saturating_sub(self, other: Duration) -> Duration {
        Duration(self.0.saturating_sub(other.0))
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02} µs", self.0 / TICKS_PER_US, self.0 % TICKS_PER_US)
    }
}

impl Add for Duration {
    type Output = Duration;
    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0 + rhs.0)
    }
}

impl AddAssign for Duration {
    fn add_assign(&mut self, rhs: Duration) {
        self.0 += rhs.0;
    }
}

impl Sub for Duration {
    type Output = Duration;
    fn sub(self, rhs: Duration) -> Duration {
        Duration(
            self.0
                .checked_sub(rhs.0)
                .expect("negative duration"),
        )
    }
}

impl Mul<u64> for Duration {
    type Output = Duration;
    fn mul(self, rhs: u64) -> Duration {
        Duration(self.0 * rhs)
    }
}

impl Sum for Duration {
    fn sum<I: Iterator<Item = Duration>>(iter: I) -> Duration {
        Duration(iter.map(|d| d.0).sum())
    }
}

/// PHY rate in units of 0.1 Mbps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhyRate(u32);

impl PhyRate {
    pub const fn from_deci_mbps(v: u32) -> Self {
        PhyRate(v)
    }

    pub const fn from_mbps(v: u32) -> Self {
        PhyRate(v * 10)
    }

    pub const fn deci_mbps(self) -> u32 {
        self.0
    }

    pub fn as_mbps_f64(self) -> f64 {
        self.0 as f64 / 10.0
    }

    pub fn mbps<S: Scalar>(self) -> S {
        S::from_ratio(self.0 as i128, 10)
    }

    /// Bits carried by one symbol of length `tsym`, scaled by 1000.
    ///
    /// ticks * deci-Mbps = 10 ns * 100 kbit/s = 1/1000 bit, so the product is
    /// an exact integer count of milli-bits.
    pub const fn millibits_per_symbol(self, tsym: Duration) -> u64 {
        tsym.ticks() * self.0 as u64
    }
}

impl fmt::Display for PhyRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{} Mbps", self.0 / 10, self.0 % 10)
    }
}
