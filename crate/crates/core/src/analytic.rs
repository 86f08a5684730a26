//! Closed-form TXOP timing and goodput for the Reverse Direction (SU) and
//! MU-MIMO/OFDMA scheduling strategies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aggregation::{
    compute_limits, optimal_schedule_costed, AggregationLimits, AmpduEntry, AmpduSchedule,
    Direction, PpduBudget,
};
use crate::error::{ModelError, Result};
use crate::phy_tables::{
    frame_airtime, lookup_profile, ppdu_airtime, Duration, McsProfile, Mode, SegmentProfile,
    PROTOCOL,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Strategy 1: SU TXOP with Reverse Direction for the acks.
    SuRd,
    /// Strategy 2: SU, AP and stations contend for every exchange.
    SuContention,
    /// Strategy 3: DL MU A-MPDUs, acks in a triggered UL MU exchange.
    Mu,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::SuRd, Strategy::SuContention, Strategy::Mu];

    pub fn mode(self) -> Mode {
        match self {
            Strategy::SuRd | Strategy::SuContention => Mode::Su,
            Strategy::Mu => Mode::Mu,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::SuRd => "su-rd",
            Strategy::SuContention => "su-contention",
            Strategy::Mu => "mu",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su-rd" | "1" => Ok(Strategy::SuRd),
            "su-contention" | "2" => Ok(Strategy::SuContention),
            "mu" | "3" => Ok(Strategy::Mu),
            other => Err(ModelError::Config(format!("unknown strategy '{other}'"))),
        }
    }
}

/// SIFS accounting of the MU ack cycle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingMode {
    /// Two SIFS in the MU ack cycle, as the closed form is written.
    #[default]
    Strict,
    /// One SIFS per gap of the TF / UL acks / Multi-STA BAck exchange.
    ThreeSifs,
}

impl TimingMode {
    fn mu_ack_sifs(self) -> u64 {
        match self {
            TimingMode::Strict => 2,
            TimingMode::ThreeSifs => 3,
        }
    }
}

/// One operating point: who transmits what, and how many segments per TXOP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub strategy: Strategy,
    pub stations: u32,
    pub mcs: u8,
    pub segment: SegmentProfile,
    pub delayed_acks: bool,
    /// TCP data segments per TXOP per station.
    pub n: u64,
    #[serde(default)]
    pub timing: TimingMode,
}

impl Scenario {
    pub fn new(strategy: Strategy, stations: u32, mcs: u8, l_data: u64, n: u64) -> Result<Self> {
        Ok(Scenario {
            strategy,
            stations,
            mcs,
            segment: SegmentProfile::for_payload(l_data)?,
            delayed_acks: false,
            n,
            timing: TimingMode::Strict,
        })
    }

    pub fn with_delayed_acks(mut self, on: bool) -> Self {
        self.delayed_acks = on;
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }

    pub fn with_timing(mut self, timing: TimingMode) -> Self {
        self.timing = timing;
        self
    }

    pub fn profile(&self) -> Result<McsProfile> {
        lookup_profile(self.strategy.mode(), self.stations, self.mcs)
    }

    /// TCP acks a station returns for `n` data segments.
    pub fn ack_count(&self) -> u64 {
        ack_count(self.n, self.delayed_acks)
    }

    /// Largest feasible `n` for this scenario.
    pub fn n_cap(&self) -> Result<u64> {
        let profile = self.profile()?;
        Ok(max_acks_ul(&profile, &self.segment, self.delayed_acks).data_segments)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(ModelError::InvalidScenario("n must be at least 1".into()));
        }
        self.profile()?;
        Ok(())
    }
}

pub fn ack_count(n: u64, delayed_acks: bool) -> u64 {
    if delayed_acks {
        n.div_ceil(2)
    } else {
        n
    }
}

/// Legacy BAck size for an A-MPDU of `mpdus` MPDUs (64- or 256-bit bitmap).
pub fn back_bytes(mpdus: u64) -> u64 {
    if mpdus <= 64 {
        PROTOCOL.back_bytes_64
    } else {
        PROTOCOL.back_bytes_256
    }
}

/// Legacy-rate BAck airtime (without preamble).
pub fn t_back_legacy(mpdus: u64, profile: &McsProfile) -> Duration {
    frame_airtime(back_bytes(mpdus), profile.r_leg, profile.tsym_leg)
}

pub fn t_cf_end(profile: &McsProfile) -> Duration {
    frame_airtime(PROTOCOL.cf_end_bytes, profile.r_leg, profile.tsym_leg)
}

/// Broadcast trigger frame bytes for `stations` stations.
pub fn tf_bytes(stations: u32) -> u64 {
    PROTOCOL.tf_base_bytes + (stations as u64 / 2) * PROTOCOL.tf_per_pair_bytes
}

pub fn t_tf(stations: u32, profile: &McsProfile) -> Duration {
    frame_airtime(tf_bytes(stations), profile.r_leg, profile.tsym_leg)
}

/// Multi-STA BAck bytes; `mpdus_acked` selects the 64- or 256-MPDU bitmap.
pub fn mul_back_bytes(stations: u32, mpdus_acked: u64) -> u64 {
    let per_sta = if mpdus_acked <= 64 {
        PROTOCOL.mul_back_per_sta_bytes_64
    } else {
        PROTOCOL.mul_back_per_sta_bytes_256
    };
    PROTOCOL.mul_back_base_bytes + stations as u64 * per_sta
}

pub fn t_mul_back(stations: u32, mpdus_acked: u64, profile: &McsProfile) -> Duration {
    frame_airtime(mul_back_bytes(stations, mpdus_acked), profile.r_leg, profile.tsym_leg)
}

/// MPDUs needed for `n_acks` ack MSDUs, packed as densely as possible.
pub fn ack_mpdus(n_acks: u64) -> u64 {
    n_acks.div_ceil(PROTOCOL.acks_per_mpdu)
}

pub fn ack_psdu_bytes(n_acks: u64, seg: &SegmentProfile) -> u64 {
    n_acks * seg.len_a + ack_mpdus(n_acks) * PROTOCOL.o_m_bytes
}

pub fn data_psdu_bytes_su(entry: AmpduEntry, seg: &SegmentProfile) -> u64 {
    entry.msdus * seg.len_d + entry.mpdus * PROTOCOL.o_m_bytes
}

/// MU data PSDU: per-MPDU HE control elements up to the threshold, a single
/// unicast trigger-frame MPDU beyond it.
pub fn data_psdu_bytes_mu(entry: AmpduEntry, seg: &SegmentProfile) -> u64 {
    let body = entry.msdus * seg.len_d;
    if entry.mpdus <= PROTOCOL.he_ie_mpdu_threshold {
        body + entry.mpdus * (PROTOCOL.o_m_bytes + PROTOCOL.he_ie_bytes)
    } else {
        body + entry.mpdus * PROTOCOL.o_m_bytes + PROTOCOL.unicast_tf_mpdu_bytes
    }
}

/// One DL A-MPDU followed by its BAck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DataCycle {
    pub mpdus: u64,
    pub msdus: u64,
    pub data_ppdu: Duration,
    pub back_ppdu: Duration,
    pub sifs: Duration,
    pub total: Duration,
}

impl DataCycle {
    fn new(entry: AmpduEntry, data_ppdu: Duration, back_ppdu: Duration) -> Self {
        let sifs = PROTOCOL.sifs * 2;
        DataCycle {
            mpdus: entry.mpdus,
            msdus: entry.msdus,
            data_ppdu,
            back_ppdu,
            sifs,
            total: data_ppdu + back_ppdu + sifs,
        }
    }
}

/// The UL ack exchange closing a TXOP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AckCycle {
    pub acks: u64,
    pub mpdus: u64,
    /// Broadcast TF with its legacy preamble; zero in SU.
    pub trigger_ppdu: Duration,
    pub ack_ppdu: Duration,
    pub back_ppdu: Duration,
    pub sifs: Duration,
    pub total: Duration,
}

/// SU data cycle: HE SU A-MPDU, then a legacy BAck.
pub fn t_data_cycle_su(
    mpdus: u64,
    msdus: u64,
    profile: &McsProfile,
    seg: &SegmentProfile,
) -> Result<DataCycle> {
    let entry = AmpduEntry { mpdus, msdus };
    let data_ppdu = ppdu_airtime(
        profile.pr_data_dl,
        data_psdu_bytes_su(entry, seg),
        profile.r_dl,
        profile.tsym_dl,
    )?;
    let back_ppdu = profile.pr_legacy + t_back_legacy(mpdus, profile);
    Ok(DataCycle::new(entry, data_ppdu, back_ppdu))
}

/// MU data cycle: HE MU A-MPDU per station, then per-station UL BAcks.
pub fn t_data_cycle_mu(
    mpdus: u64,
    msdus: u64,
    profile: &McsProfile,
    seg: &SegmentProfile,
) -> Result<DataCycle> {
    let entry = AmpduEntry { mpdus, msdus };
    let data_ppdu = ppdu_airtime(
        profile.pr_data_dl,
        data_psdu_bytes_mu(entry, seg),
        profile.r_dl,
        profile.tsym_dl,
    )?;
    let back_ppdu = ppdu_airtime(
        profile.pr_data_ul,
        back_bytes(mpdus),
        profile.r_ul,
        profile.tsym_ul,
    )?;
    Ok(DataCycle::new(entry, data_ppdu, back_ppdu))
}

fn check_ack_window(n_acks: u64) -> Result<()> {
    if n_acks == 0 || n_acks > PROTOCOL.n_max() {
        return Err(ModelError::InvalidScenario(format!(
            "{n_acks} acks outside 1..={}",
            PROTOCOL.n_max()
        )));
    }
    Ok(())
}

/// SU ack cycle: HE SU UL A-MPDU of acks, then a legacy BAck.
pub fn t_ack_cycle_su(n_acks: u64, profile: &McsProfile, seg: &SegmentProfile) -> Result<AckCycle> {
    check_ack_window(n_acks)?;
    let mpdus = ack_mpdus(n_acks);
    let ack_ppdu = ppdu_airtime(
        profile.pr_data_ul,
        ack_psdu_bytes(n_acks, seg),
        profile.r_ul,
        profile.tsym_ul,
    )?;
    let back_ppdu = profile.pr_legacy + t_back_legacy(mpdus, profile);
    let sifs = PROTOCOL.sifs * 2;
    Ok(AckCycle {
        acks: n_acks,
        mpdus,
        trigger_ppdu: Duration::ZERO,
        ack_ppdu,
        back_ppdu,
        sifs,
        total: ack_ppdu + back_ppdu + sifs,
    })
}

/// MU ack cycle: broadcast TF, parallel UL MU A-MPDUs of acks, Multi-STA BAck.
pub fn t_ack_cycle_mu(
    n_acks: u64,
    stations: u32,
    profile: &McsProfile,
    seg: &SegmentProfile,
    timing: TimingMode,
) -> Result<AckCycle> {
    check_ack_window(n_acks)?;
    let mpdus = ack_mpdus(n_acks);
    let trigger_ppdu = profile.pr_legacy + t_tf(stations, profile);
    let ack_ppdu = ppdu_airtime(
        profile.pr_data_ul,
        ack_psdu_bytes(n_acks, seg),
        profile.r_ul,
        profile.tsym_ul,
    )?;
    let back_ppdu = profile.pr_legacy + t_mul_back(stations, mpdus, profile);
    let sifs = PROTOCOL.sifs * timing.mu_ack_sifs();
    Ok(AckCycle {
        acks: n_acks,
        mpdus,
        trigger_ppdu,
        ack_ppdu,
        back_ppdu,
        sifs,
        total: trigger_ppdu + ack_ppdu + back_ppdu + sifs,
    })
}

/// Per-station UL ack capacity of one PPDU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AckCapacity {
    /// Acks one UL A-MPDU can carry (window- or time-limited).
    pub acks: u64,
    /// Data segments per TXOP those acks cover.
    pub data_segments: u64,
}

/// Largest ack count whose UL A-MPDU fits the PPDU limits, and the data
/// segment cap that follows from it.
pub fn max_acks_ul(profile: &McsProfile, seg: &SegmentProfile, delayed_acks: bool) -> AckCapacity {
    let budget = PpduBudget::for_profile(profile, Direction::Ul, seg.len_a, PROTOCOL.o_m_bytes);
    let fits = |k: u64| ack_psdu_bytes(k, seg) <= budget.max_psdu_bytes;
    // ack bytes grow monotonically in k
    let (mut lo, mut hi) = (0u64, PROTOCOL.n_max());
    if fits(hi) {
        lo = hi;
    }
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    AckCapacity {
        acks: lo,
        data_segments: if delayed_acks { 2 * lo } else { lo },
    }
}

/// Full itemization of one TXOP.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleBreakdown {
    pub strategy: Strategy,
    pub stations: u32,
    pub n: u64,
    /// TCP payload bits delivered per TXOP, all stations.
    pub data_bits: u64,
    /// AIFS plus the mean backoff.
    pub access_overhead: Duration,
    pub data_cycles: Vec<DataCycle>,
    pub ack_cycle: AckCycle,
    /// Legacy preamble plus CF-End; zero for MU.
    pub teardown: Duration,
    pub total: Duration,
    pub schedule: AmpduSchedule,
}

impl CycleBreakdown {
    /// Goodput in bits per second.
    pub fn goodput_bps<S: Scalar>(&self) -> S {
        goodput_bps(self.data_bits, self.total)
    }

    pub fn goodput_mbps<S: Scalar>(&self) -> S {
        goodput_mbps(self.data_bits, self.total)
    }

    pub fn data_time(&self) -> Duration {
        self.data_cycles.iter().map(|c| c.total).sum()
    }

    /// Every PPDU transmitted in the TXOP, preambles included.
    pub fn ppdu_airtimes(&self) -> Vec<Duration> {
        let mut out: Vec<Duration> = self
            .data_cycles
            .iter()
            .flat_map(|c| [c.data_ppdu, c.back_ppdu])
            .collect();
        if self.ack_cycle.trigger_ppdu > Duration::ZERO {
            out.push(self.ack_cycle.trigger_ppdu);
        }
        out.push(self.ack_cycle.ack_ppdu);
        out.push(self.ack_cycle.back_ppdu);
        if self.teardown > Duration::ZERO {
            out.push(self.teardown);
        }
        out
    }
}

/// `bits / time` in bits per second.
pub fn goodput_bps<S: Scalar>(bits: u64, time: Duration) -> S {
    S::from_ratio(
        bits as i128 * 100_000_000,
        time.ticks().max(1) as i128,
    )
}

/// `bits / time` in Mbps.
pub fn goodput_mbps<S: Scalar>(bits: u64, time: Duration) -> S {
    S::from_ratio(bits as i128 * 100, time.ticks().max(1) as i128)
}

fn schedule_cost<F>(schedule: &AmpduSchedule, cycle: F) -> Result<Duration>
where
    F: Fn(AmpduEntry) -> Result<DataCycle>,
{
    schedule
        .runs()
        .into_iter()
        .map(|(entry, count)| cycle(entry).map(|c| c.total * count))
        .sum()
}

fn expand_cycles<F>(schedule: &AmpduSchedule, cycle: F) -> Result<Vec<DataCycle>>
where
    F: Fn(AmpduEntry) -> Result<DataCycle>,
{
    let mut out = Vec::with_capacity(schedule.entries.len());
    for (entry, count) in schedule.runs() {
        let c = cycle(entry)?;
        out.extend(std::iter::repeat_n(c, count as usize));
    }
    Ok(out)
}

/// Aggregation limits of the DL data A-MPDUs for `scn`.
pub fn data_limits(scn: &Scenario, profile: &McsProfile) -> Result<AggregationLimits> {
    let extra = match scn.strategy.mode() {
        Mode::Su => 0,
        Mode::Mu => PROTOCOL.he_ie_bytes,
    };
    compute_limits(profile, &scn.segment, Direction::Dl, extra)
}

/// Minimum-time SU data schedule for `n` MSDUs, with its data cycles.
pub fn su_data_schedule(
    n: u64,
    profile: &McsProfile,
    seg: &SegmentProfile,
    limits: &AggregationLimits,
) -> Result<(AmpduSchedule, Vec<DataCycle>)> {
    let cycle = |e: AmpduEntry| t_data_cycle_su(e.mpdus, e.msdus, profile, seg);
    let (schedule, _) = optimal_schedule_costed(n, limits, |s| schedule_cost(s, cycle))?;
    let cycles = expand_cycles(&schedule, cycle)?;
    Ok((schedule, cycles))
}

fn mu_data_schedule(
    n: u64,
    profile: &McsProfile,
    seg: &SegmentProfile,
    limits: &AggregationLimits,
) -> Result<(AmpduSchedule, Vec<DataCycle>)> {
    let cycle = |e: AmpduEntry| t_data_cycle_mu(e.mpdus, e.msdus, profile, seg);
    let (schedule, _) = optimal_schedule_costed(n, limits, |s| schedule_cost(s, cycle))?;
    let cycles = expand_cycles(&schedule, cycle)?;
    Ok((schedule, cycles))
}

/// TXOP timing and goodput of the SU Reverse Direction strategy.
pub fn goodput_strategy1(scn: &Scenario) -> Result<CycleBreakdown> {
    if scn.strategy != Strategy::SuRd {
        return Err(ModelError::InvalidScenario(format!(
            "strategy {} is not su-rd",
            scn.strategy
        )));
    }
    scn.validate()?;
    let profile = scn.profile()?;
    let limits = data_limits(scn, &profile)?;
    let ack_cycle = t_ack_cycle_su(scn.ack_count(), &profile, &scn.segment)?;
    let (schedule, data_cycles) = su_data_schedule(scn.n, &profile, &scn.segment, &limits)?;

    let access_overhead = PROTOCOL.aifs_ap + PROTOCOL.bo_average;
    let teardown = profile.pr_legacy + t_cf_end(&profile);
    let data_time: Duration = data_cycles.iter().map(|c| c.total).sum();
    Ok(CycleBreakdown {
        strategy: scn.strategy,
        stations: scn.stations,
        n: scn.n,
        data_bits: scn.n * scn.segment.data_bits(),
        access_overhead,
        total: access_overhead + data_time + ack_cycle.total + teardown,
        data_cycles,
        ack_cycle,
        teardown,
        schedule,
    })
}

/// TXOP timing and goodput of the MU strategy; all stations in parallel.
pub fn goodput_strategy3(scn: &Scenario) -> Result<CycleBreakdown> {
    if scn.strategy != Strategy::Mu {
        return Err(ModelError::InvalidScenario(format!(
            "strategy {} is not mu",
            scn.strategy
        )));
    }
    scn.validate()?;
    let profile = scn.profile()?;
    let limits = data_limits(scn, &profile)?;
    let ack_cycle = t_ack_cycle_mu(
        scn.ack_count(),
        scn.stations,
        &profile,
        &scn.segment,
        scn.timing,
    )?;
    let (schedule, data_cycles) = mu_data_schedule(scn.n, &profile, &scn.segment, &limits)?;

    let access_overhead = PROTOCOL.aifs_ap + PROTOCOL.bo_average;
    let data_time: Duration = data_cycles.iter().map(|c| c.total).sum();
    Ok(CycleBreakdown {
        strategy: scn.strategy,
        stations: scn.stations,
        n: scn.n,
        data_bits: scn.n * scn.segment.data_bits() * scn.stations as u64,
        access_overhead,
        total: access_overhead + data_time + ack_cycle.total,
        data_cycles,
        ack_cycle,
        teardown: Duration::ZERO,
        schedule,
    })
}

/// Closed-form evaluation for the strategies that have one.
pub fn evaluate(scn: &Scenario) -> Result<CycleBreakdown> {
    match scn.strategy {
        Strategy::SuRd => goodput_strategy1(scn),
        Strategy::Mu => goodput_strategy3(scn),
        Strategy::SuContention => Err(ModelError::InvalidScenario(
            "su-contention has no closed form; use the simulator".into(),
        )),
    }
}
