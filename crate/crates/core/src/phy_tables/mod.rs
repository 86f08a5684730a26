//! PHY rate tables, protocol constants and frame airtime arithmetic.
//!
//! All time is kept in integer 0.01 µs ticks and all rates in integer
//! 0.1 Mbps units, so every symbol count is an exact integer ceiling.

mod data;
mod units;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::scalar::Scalar;

pub use data::TABLE_VERSION;
pub use units::{Duration, PhyRate, TICKS_PER_US};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Su,
    Mu,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Su => "SU",
            Mode::Mu => "MU",
        })
    }
}

/// Station counts covered by the tables.
pub const STATION_COUNTS: [u32; 6] = [1, 4, 8, 16, 32, 64];

/// MAC/PHY protocol limits and timing constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProtocolConstants {
    pub max_mpdu_bytes: u64,
    pub max_ampdu_bytes: u64,
    pub max_ppdu_time: Duration,
    pub max_mpdus_per_ampdu: u64,
    /// SERVICE + TAIL bits added to every PSDU.
    pub service_tail_bits: u64,
    /// MAC header (28) + FCS (4) + MPDU delimiter (4).
    pub o_m_bytes: u64,
    /// HE control element appended to each MU DL MPDU.
    pub he_ie_bytes: u64,
    pub unicast_tf_mpdu_bytes: u64,
    /// Above this many MPDUs a unicast TF MPDU is cheaper than per-MPDU HE IEs.
    pub he_ie_mpdu_threshold: u64,
    pub back_bytes_64: u64,
    pub back_bytes_256: u64,
    pub cf_end_bytes: u64,
    pub mul_back_base_bytes: u64,
    pub mul_back_per_sta_bytes_256: u64,
    pub mul_back_per_sta_bytes_64: u64,
    pub tf_base_bytes: u64,
    pub tf_per_pair_bytes: u64,
    pub aifs_ap: Duration,
    pub aifs_sta: Duration,
    pub sifs: Duration,
    pub slot: Duration,
    pub cw_min: u32,
    pub bo_average: Duration,
    pub acks_per_mpdu: u64,
    pub back_window: u64,
    pub tsym_dl: Duration,
    pub tsym_ul_su: Duration,
    pub tsym_ul_mu: Duration,
    pub tsym_leg: Duration,
}

pub const PROTOCOL: ProtocolConstants = ProtocolConstants {
    max_mpdu_bytes: 11454,
    max_ampdu_bytes: 4_194_304,
    max_ppdu_time: Duration::from_micros(5484),
    max_mpdus_per_ampdu: 256,
    service_tail_bits: 22,
    o_m_bytes: 36,
    he_ie_bytes: 4,
    unicast_tf_mpdu_bytes: 72,
    he_ie_mpdu_threshold: 18,
    back_bytes_64: 30,
    back_bytes_256: 54,
    cf_end_bytes: 20,
    mul_back_base_bytes: 22,
    mul_back_per_sta_bytes_256: 36,
    mul_back_per_sta_bytes_64: 12,
    tf_base_bytes: 28,
    tf_per_pair_bytes: 5,
    aifs_ap: Duration::from_micros(43),
    aifs_sta: Duration::from_micros(52),
    sifs: Duration::from_micros(16),
    slot: Duration::from_micros(9),
    cw_min: 16,
    bo_average: Duration::from_deci_micros(675),
    acks_per_mpdu: 178,
    back_window: 256,
    tsym_dl: Duration::from_deci_micros(136),
    tsym_ul_su: Duration::from_deci_micros(136),
    tsym_ul_mu: Duration::from_deci_micros(144),
    tsym_leg: Duration::from_micros(4),
};

impl ProtocolConstants {
    /// Largest number of TCP acks one UL A-MPDU can carry (window x acks/MPDU).
    pub const fn n_max(&self) -> u64 {
        self.back_window * self.acks_per_mpdu
    }

    /// Mean of a uniform backoff over `[0, cw_min - 1]` slots.
    pub const fn mean_backoff(&self) -> Duration {
        Duration::from_ticks((self.cw_min as u64 - 1) * self.slot.ticks() / 2)
    }
}

/// One row of the PHY tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McsProfile {
    pub mcs: u8,
    pub mode: Mode,
    pub stations: u32,
    pub r_dl: PhyRate,
    pub r_ul: PhyRate,
    pub r_leg: PhyRate,
    pub pr_data_dl: Duration,
    pub pr_data_ul: Duration,
    pub pr_legacy: Duration,
    pub tsym_dl: Duration,
    pub tsym_ul: Duration,
    pub tsym_leg: Duration,
}

/// Returns the table row for `(mode, stations, mcs)`.
pub fn lookup_profile(mode: Mode, stations: u32, mcs: u8) -> Result<McsProfile> {
    let unknown = ModelError::UnknownCombination {
        mode,
        stations,
        mcs,
    };
    if mcs > 11 {
        return Err(unknown);
    }
    match mode {
        Mode::Su => {
            if !STATION_COUNTS.contains(&stations) {
                return Err(unknown);
            }
            let rate = PhyRate::from_deci_mbps(data::SU_RATES[mcs as usize]);
            Ok(McsProfile {
                mcs,
                mode,
                stations,
                r_dl: rate,
                r_ul: rate,
                r_leg: PhyRate::from_deci_mbps(data::SU_LEGACY_RATE),
                pr_data_dl: Duration::from_deci_micros(data::SU_PREAMBLE),
                pr_data_ul: Duration::from_deci_micros(data::SU_PREAMBLE),
                pr_legacy: Duration::from_deci_micros(data::LEGACY_PREAMBLE),
                tsym_dl: PROTOCOL.tsym_dl,
                tsym_ul: PROTOCOL.tsym_ul_su,
                tsym_leg: PROTOCOL.tsym_leg,
            })
        }
        Mode::Mu => {
            let idx = data::MU_STATIONS
                .iter()
                .position(|&s| s == stations)
                .ok_or(unknown)?;
            let row = data::MU_ROWS[idx][mcs as usize].ok_or(ModelError::UnavailableMcs {
                mode,
                stations,
                mcs,
            })?;
            Ok(McsProfile {
                mcs,
                mode,
                stations,
                r_dl: PhyRate::from_deci_mbps(row.r_dl),
                r_ul: PhyRate::from_deci_mbps(row.r_ul),
                r_leg: PhyRate::from_deci_mbps(row.r_leg),
                pr_data_dl: Duration::from_deci_micros(row.pr_dl),
                pr_data_ul: Duration::from_deci_micros(row.pr_ul),
                pr_legacy: Duration::from_deci_micros(data::LEGACY_PREAMBLE),
                tsym_dl: PROTOCOL.tsym_dl,
                tsym_ul: PROTOCOL.tsym_ul_mu,
                tsym_leg: PROTOCOL.tsym_leg,
            })
        }
    }
}

/// Every `(mode, stations, mcs)` cell of both tables, in table order.
/// Unavailable cells are included as errors.
pub fn all_table_cells() -> Vec<(Mode, u32, u8, Result<McsProfile>)> {
    let mut out = Vec::new();
    for mcs in 0..12u8 {
        out.push((Mode::Su, 1, mcs, lookup_profile(Mode::Su, 1, mcs)));
    }
    for &s in &data::MU_STATIONS {
        for mcs in 0..12u8 {
            out.push((Mode::Mu, s, mcs, lookup_profile(Mode::Mu, s, mcs)));
        }
    }
    out
}

/// Legacy basic-rate set, in Mbps.
pub const BASIC_RATES_MBPS: [u32; 7] = [6, 9, 12, 18, 24, 36, 48];

/// Largest basic rate not above `r_tcp`, never below 6 Mbps.
pub fn legacy_rate_for(r_tcp: PhyRate) -> PhyRate {
    let best = BASIC_RATES_MBPS
        .iter()
        .rev()
        .map(|&m| PhyRate::from_mbps(m))
        .find(|&b| b <= r_tcp)
        .unwrap_or(PhyRate::from_mbps(BASIC_RATES_MBPS[0]));
    best
}

/// Number of `tsym` symbols needed for `bits` at `rate`.
pub fn symbols_for_bits(bits: u64, rate: PhyRate, tsym: Duration) -> u64 {
    let per_symbol = rate.millibits_per_symbol(tsym);
    (bits * 1000).div_ceil(per_symbol)
}

/// Same as [`symbols_for_bits`] evaluated in an arbitrary scalar type.
pub fn symbols_for_bits_in<S: Scalar>(bits: u64, rate: PhyRate, tsym: Duration) -> S {
    let per_symbol = tsym.micros::<S>() * rate.mbps::<S>();
    (S::from_int(bits as i128) / per_symbol).ceil()
}

/// PSDU bits for a frame of `frame_bytes` including SERVICE and TAIL.
pub const fn psdu_bits(frame_bytes: u64) -> u64 {
    frame_bytes * 8 + PROTOCOL.service_tail_bits
}

/// Airtime of a frame body, excluding preamble: an integral number of symbols.
pub fn frame_airtime(frame_bytes: u64, rate: PhyRate, tsym: Duration) -> Duration {
    tsym * symbols_for_bits(psdu_bits(frame_bytes), rate, tsym)
}

/// Preamble plus frame airtime, rejected if it exceeds the PPDU time limit.
pub fn ppdu_airtime(
    preamble: Duration,
    frame_bytes: u64,
    rate: PhyRate,
    tsym: Duration,
) -> Result<Duration> {
    let airtime = preamble + frame_airtime(frame_bytes, rate, tsym);
    if airtime > PROTOCOL.max_ppdu_time {
        return Err(ModelError::ExceedsPpduLimit {
            airtime,
            limit: PROTOCOL.max_ppdu_time,
        });
    }
    Ok(airtime)
}

/// TCP segment sizing on the air.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegmentProfile {
    /// TCP payload bytes.
    pub l_data: u64,
    /// Data MSDU bytes with subheader, rounded to a multiple of 4.
    pub len_d: u64,
    /// Ack MSDU bytes with subheader, rounded to a multiple of 4.
    pub len_a: u64,
    /// Data MSDUs per full MPDU.
    pub msdus_per_mpdu: u64,
}

/// TCP + IP + LLC/SNAP headers.
const MSDU_HEADERS: u64 = 48;
const MSDU_SUBHEADER: u64 = 14;

impl SegmentProfile {
    pub const SIZES: [u64; 3] = [1460, 464, 208];

    pub fn for_payload(l_data: u64) -> Result<Self> {
        let msdus_per_mpdu = match l_data {
            1460 => 7,
            464 => 21,
            208 => 42,
            other => {
                return Err(ModelError::InvalidScenario(format!(
                    "unsupported TCP segment size {other} (expected 1460, 464 or 208)"
                )))
            }
        };
        Ok(SegmentProfile {
            l_data,
            len_d: (l_data + MSDU_HEADERS + MSDU_SUBHEADER).next_multiple_of(4),
            len_a: (MSDU_HEADERS + MSDU_SUBHEADER).next_multiple_of(4),
            msdus_per_mpdu,
        })
    }

    pub fn data_bits(&self) -> u64 {
        self.l_data * 8
    }
}
