use thiserror::Error;

use crate::phy_tables::{Duration, Mode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("MCS unavailable: MCS {mcs} is not offered for {stations} stations in {mode} mode")]
    UnavailableMcs { mode: Mode, stations: u32, mcs: u8 },

    #[error("no PHY table row for {mode} mode, {stations} stations, MCS {mcs}")]
    UnknownCombination { mode: Mode, stations: u32, mcs: u8 },

    #[error("a single one-MSDU MPDU does not fit in the {limit} PPDU time limit")]
    ZeroCapacity { limit: Duration },

    #[error("{x} A-MPDUs is outside the feasible range [{lower}, {upper}] for {n} MSDUs")]
    InfeasibleX { n: u64, x: u64, lower: u64, upper: u64 },

    #[error("exhaustive search too large: {a_data}*{f_data}*{x} exceeds {guard}")]
    TooLarge {
        a_data: u64,
        f_data: u64,
        x: u64,
        guard: u64,
    },

    #[error("PPDU airtime {airtime} exceeds the {limit} PPDU time limit")]
    ExceedsPpduLimit { airtime: Duration, limit: Duration },

    #[error("no feasible operating point for this scenario")]
    EmptyCurve,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
