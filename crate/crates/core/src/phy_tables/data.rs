//! Embedded PHY rate and preamble tables (160 MHz, 4 spatial streams).
//!
//! Rates are in 0.1 Mbps, preambles in 0.1 µs.

/// Bumped whenever a table value changes; recorded in run manifests.
pub const TABLE_VERSION: &str = "ax-160mhz-4ss/1";

/// SU data rate per MCS, GI 0.8 µs. Preamble 64.8 µs; BAck at 48 Mbps legacy.
pub const SU_RATES: [u32; 12] = [
    2882, 5765, 8647, 11529, 17294, 23059, 25941, 28824, 34588, 38481, 43235, 48039,
];
pub const SU_PREAMBLE: u64 = 648;
pub const SU_LEGACY_RATE: u32 = 480;
pub const LEGACY_PREAMBLE: u64 = 200;

/// One MU row: UL rate per SS (GI 1.6), UL preamble, DL rate per SS (GI 0.8),
/// DL preamble, legacy TF / Multi-STA BAck rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuRow {
    pub r_ul: u32,
    pub pr_ul: u64,
    pub r_dl: u32,
    pub pr_dl: u64,
    pub r_leg: u32,
}

const fn row(r_ul: u32, r_dl: u32, pr_dl: u64, r_leg: u32) -> Option<MuRow> {
    Some(MuRow {
        r_ul,
        pr_ul: 648,
        r_dl,
        pr_dl,
        r_leg,
    })
}

pub const MU_STATIONS: [u32; 5] = [4, 8, 16, 32, 64];

pub const MU_ROWS: [[Option<MuRow>; 12]; 5] = [
    // 4 stations
    [
        row(681, 721, 728, 480),
        row(1361, 1441, 728, 480),
        row(2042, 2162, 688, 480),
        row(2722, 2882, 688, 480),
        row(4083, 4324, 688, 480),
        row(5444, 5765, 688, 480),
        row(6125, 6485, 688, 480),
        row(6806, 7206, 688, 480),
        row(8167, 8647, 688, 480),
        row(9074, 9607, 688, 480),
        row(10208, 10804, 688, 480),
        row(11342, 12010, 688, 480),
    ],
    // 8 stations
    [
        row(340, 360, 768, 360),
        row(681, 721, 768, 480),
        row(1021, 1081, 728, 480),
        row(1361, 1441, 728, 480),
        row(2042, 2162, 688, 480),
        row(2722, 2882, 688, 480),
        row(3063, 3243, 688, 480),
        row(3403, 3603, 688, 480),
        row(4083, 4324, 688, 480),
        row(4537, 4804, 688, 480),
        row(5104, 5404, 688, 480),
        row(5671, 6004, 688, 480),
    ],
    // 16 stations
    [
        row(163, 172, 848, 120),
        row(325, 344, 848, 120),
        row(488, 516, 768, 240),
        row(650, 688, 768, 480),
        row(975, 1032, 728, 480),
        row(1300, 1376, 728, 480),
        row(1463, 1549, 728, 480),
        row(1625, 1721, 728, 480),
        row(1950, 2065, 728, 480),
        row(2167, 2294, 728, 480),
        row(2438, 2581, 728, 480),
        row(2708, 2868, 728, 480),
    ],
    // 32 stations
    [
        row(81, 86, 1048, 60),
        row(163, 172, 1048, 120),
        row(244, 258, 848, 240),
        row(325, 344, 848, 240),
        row(488, 516, 808, 480),
        row(650, 688, 808, 480),
        row(731, 774, 808, 480),
        row(813, 860, 808, 480),
        row(975, 1032, 808, 480),
        row(1083, 1147, 808, 480),
        row(1219, 1290, 808, 480),
        row(1354, 1434, 808, 480),
    ],
    // 64 stations; MCS 10 and 11 are not available
    [
        row(35, 38, 1368, 60),
        row(71, 75, 1368, 60),
        row(106, 113, 1008, 90),
        row(142, 150, 1008, 120),
        row(213, 225, 888, 180),
        row(283, 300, 888, 240),
        row(319, 338, 888, 240),
        row(354, 375, 888, 240),
        row(425, 450, 888, 360),
        row(472, 500, 888, 360),
        None,
        None,
    ],
];
