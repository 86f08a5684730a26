#![allow(dead_code)]

use ax_goodput::aggregation::{AggregationLimits, PpduBudget};
use ax_goodput::phy_tables::{Duration, McsProfile, Mode, PhyRate, SegmentProfile, PROTOCOL};
use ax_goodput::{Scenario, Strategy};
use num_rational::Ratio;
use rand::Rng;

pub const GOLDEN_TABLES: &str = include_str!("../data/phy_tables.txt");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenRow {
    pub mode: Mode,
    pub stations: u32,
    pub mcs: u8,
    /// `(r_ul, pr_ul, r_dl, pr_dl, r_leg, pr_leg)` in 0.1 Mbps / 0.1 µs.
    pub values: Option<[u64; 6]>,
}

/// "1201.0" -> 12010
fn tenths(s: &str) -> u64 {
    let (int, frac) = s.split_once('.').unwrap_or((s, "0"));
    assert_eq!(frac.len(), 1, "one decimal expected in {s}");
    int.parse::<u64>().unwrap() * 10 + frac.parse::<u64>().unwrap()
}

pub fn golden_rows() -> Vec<GoldenRow> {
    GOLDEN_TABLES
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let mode = if f[0] == "SU" { Mode::Su } else { Mode::Mu };
            let values = (f[3] != "N/A").then(|| {
                let mut v = [0u64; 6];
                for (slot, s) in v.iter_mut().zip(&f[3..9]) {
                    *slot = tenths(s);
                }
                v
            });
            GoldenRow {
                mode,
                stations: f[1].parse().unwrap(),
                mcs: f[2].parse().unwrap(),
                values,
            }
        })
        .collect()
}

pub fn profile_values(p: &McsProfile) -> [u64; 6] {
    [
        p.r_ul.deci_mbps() as u64,
        p.pr_data_ul.ticks() / 10,
        p.r_dl.deci_mbps() as u64,
        p.pr_data_dl.ticks() / 10,
        p.r_leg.deci_mbps() as u64,
        p.pr_legacy.ticks() / 10,
    ]
}

/// PPDU airtime in µs from the symbol-count formula, in exact rationals.
pub fn hand_airtime_us(preamble_us: Ratio<i128>, bytes: u64, rate_mbps: Ratio<i128>, tsym_us: Ratio<i128>) -> Ratio<i128> {
    let bits = Ratio::from_integer((bytes * 8 + 22) as i128);
    preamble_us + tsym_us * (bits / (tsym_us * rate_mbps)).ceil()
}

pub fn us(d: Duration) -> Ratio<i128> {
    Ratio::new(d.ticks() as i128, 100)
}

pub fn mbps(r: PhyRate) -> Ratio<i128> {
    Ratio::new(r.deci_mbps() as i128, 10)
}

/// Largest ack count whose UL ack PPDU stays within the time and size
/// limits, by linear scan.
pub fn brute_force_ack_capacity(p: &McsProfile) -> u64 {
    let limit = us(PROTOCOL.max_ppdu_time);
    let mut best = 0;
    for k in 1..=PROTOCOL.n_max() {
        let bytes = 64 * k + 36 * k.div_ceil(178);
        let t = hand_airtime_us(us(p.pr_data_ul), bytes, mbps(p.r_ul), us(p.tsym_ul));
        if t <= limit && bytes <= PROTOCOL.max_ampdu_bytes {
            best = k;
        } else {
            break;
        }
    }
    best
}

/// A small synthetic aggregation instance, or `None` if it has no capacity.
pub fn random_small_limits(rng: &mut impl Rng) -> Option<AggregationLimits> {
    let budget = PpduBudget {
        msdu_bytes: rng.gen_range(1..=40),
        mpdu_overhead_bytes: rng.gen_range(0..=20),
        max_psdu_bytes: rng.gen_range(1..=400),
        max_mpdus: rng.gen_range(1..=8),
    };
    AggregationLimits::from_budget(budget, rng.gen_range(1..=7)).ok()
}

pub const MU_STATIONS: [u32; 5] = [4, 8, 16, 32, 64];
pub const ALL_STATIONS: [u32; 6] = [1, 4, 8, 16, 32, 64];

/// A random valid analytic scenario with N anywhere in `1..=cap`.
pub fn random_scenario(rng: &mut impl Rng) -> Scenario {
    loop {
        let strategy = if rng.gen_bool(0.5) { Strategy::SuRd } else { Strategy::Mu };
        let stations = match strategy {
            Strategy::Mu => MU_STATIONS[rng.gen_range(0..5)],
            _ => ALL_STATIONS[rng.gen_range(0..6)],
        };
        let mcs = rng.gen_range(0..12u8);
        let seg = SegmentProfile::SIZES[rng.gen_range(0..3)];
        let Ok(scn) = Scenario::new(strategy, stations, mcs, seg, 1) else {
            continue;
        };
        let scn = scn.with_delayed_acks(rng.gen_bool(0.5));
        let Ok(cap) = scn.n_cap() else { continue };
        if cap == 0 {
            continue;
        }
        // bias towards both ends of the range
        let n = match rng.gen_range(0..4) {
            0 => rng.gen_range(1..=cap.min(64)),
            1 => cap - rng.gen_range(0..cap.min(64)),
            _ => rng.gen_range(1..=cap),
        };
        return scn.with_n(n);
    }
}
