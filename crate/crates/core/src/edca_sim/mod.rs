//! Discrete-event EDCA simulation.
//!
//! [`run_strategy2`] simulates SU contention: the AP and every station
//! holding TCP acks contend for the channel with AIFS + binary exponential
//! backoff. [`run_deterministic`] replays the TXOP structure of the other
//! two strategies with a fixed mean backoff and no collisions.

mod contention;
mod deterministic;

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{Scenario, Strategy};
use crate::error::{ModelError, Result};
use crate::phy_tables::{Duration, PROTOCOL};
use crate::scalar::Scalar;

pub use contention::{run_strategy2, run_strategy2_with};
pub use deterministic::run_deterministic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub warmup_cycles: u64,
    pub measured_cycles: u64,
    pub cw_min_ap: u32,
    pub cw_min_sta: u32,
    pub cw_max: u32,
    pub slot: Duration,
    pub aifs_ap: Duration,
    pub aifs_sta: Duration,
    /// Keep the per-transmission and per-cycle log.
    pub record_log: bool,
}

impl SimConfig {
    pub const DEFAULT_WARMUP: u64 = 100;
    pub const DEFAULT_MEASURED: u64 = 10_000;

    pub fn new(scenario: Scenario, seed: u64) -> Self {
        SimConfig {
            scenario,
            seed,
            warmup_cycles: Self::DEFAULT_WARMUP,
            measured_cycles: Self::DEFAULT_MEASURED,
            cw_min_ap: PROTOCOL.cw_min,
            cw_min_sta: PROTOCOL.cw_min,
            cw_max: 1024,
            slot: PROTOCOL.slot,
            aifs_ap: PROTOCOL.aifs_ap,
            aifs_sta: PROTOCOL.aifs_sta,
            record_log: false,
        }
    }

    pub fn with_cycles(mut self, warmup: u64, measured: u64) -> Self {
        self.warmup_cycles = warmup;
        self.measured_cycles = measured;
        self
    }

    pub fn with_log(mut self, on: bool) -> Self {
        self.record_log = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.measured_cycles == 0 {
            return Err(ModelError::Config("measured_cycles must be at least 1".into()));
        }
        for (name, cw_min) in [("cw_min_ap", self.cw_min_ap), ("cw_min_sta", self.cw_min_sta)] {
            let ok = cw_min > 0
                && self.cw_max >= cw_min
                && self.cw_max.is_multiple_of(cw_min)
                && (self.cw_max / cw_min).is_power_of_two();
            if !ok {
                return Err(ModelError::Config(format!(
                    "cw_max {} is not a power-of-two multiple of {name} {cw_min}",
                    self.cw_max
                )));
            }
        }
        if self.slot == Duration::ZERO {
            return Err(ModelError::Config("slot must be positive".into()));
        }
        self.scenario.validate()
    }
}

/// Something that contends for the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Contender {
    Ap,
    Station(usize),
}

/// Source of backoff draws; `draw` returns a slot count in `[0, cw)`.
pub trait BackoffSource {
    fn algorithm(&self) -> &str;
    fn draw(&mut self, who: Contender, cw: u32) -> u32;
}

/// Uniform draws from a seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct ChaChaBackoff {
    rng: ChaCha8Rng,
}

impl ChaChaBackoff {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        ChaChaBackoff {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BackoffSource for ChaChaBackoff {
    fn algorithm(&self) -> &str {
        Self::ALGORITHM
    }

    fn draw(&mut self, _who: Contender, cw: u32) -> u32 {
        self.rng.gen_range(0..cw)
    }
}

/// Fixed per-contender draws, falling back to a seeded stream once a
/// contender's script runs out. Scripted values are clamped to `cw - 1`.
#[derive(Debug, Clone)]
pub struct ScriptedBackoff {
    script: HashMap<Contender, VecDeque<u32>>,
    fallback: ChaChaBackoff,
}

impl ScriptedBackoff {
    pub fn new(seed: u64) -> Self {
        ScriptedBackoff {
            script: HashMap::new(),
            fallback: ChaChaBackoff::new(seed),
        }
    }

    pub fn push(mut self, who: Contender, draws: impl IntoIterator<Item = u32>) -> Self {
        self.script.entry(who).or_default().extend(draws);
        self
    }
}

impl BackoffSource for ScriptedBackoff {
    fn algorithm(&self) -> &str {
        "scripted"
    }

    fn draw(&mut self, who: Contender, cw: u32) -> u32 {
        match self.script.get_mut(&who).and_then(VecDeque::pop_front) {
            Some(v) => v.min(cw - 1),
            None => self.fallback.draw(who, cw),
        }
    }
}

/// Contention state of one station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StationState {
    pub pending_acks: u64,
    pub backoff_slots: u32,
    pub cw: u32,
    pub retry_count: u32,
    pub awaiting_data: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TxKind {
    /// The AP's N-segment burst to a station.
    DataBurst { station: usize },
    /// A station's UL ack A-MPDU with its BAck.
    Acks { station: usize },
    /// Two or more contenders expired in the same slot.
    Collision,
}

/// One channel occupancy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TxRecord {
    pub start: Duration,
    pub end: Duration,
    pub kind: TxKind,
    /// Each transmitter with its contention window after the outcome.
    pub participants: Vec<(Contender, u32)>,
}

impl TxRecord {
    pub fn success(&self) -> bool {
        !matches!(self.kind, TxKind::Collision)
    }
}

/// One served cycle: burst start to the end of the ack exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub cycle_index: u64,
    pub station: usize,
    pub start: Duration,
    pub end: Duration,
    pub data_segments: u64,
    pub collisions_in_cycle: u64,
}

impl CycleRecord {
    pub const CSV_HEADER: &'static str =
        "cycle_index,station,start_tick,end_tick,data_segments,collisions_in_cycle";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.cycle_index,
            self.station,
            self.start.ticks(),
            self.end.ticks(),
            self.data_segments,
            self.collisions_in_cycle
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SimLog {
    pub transmissions: Vec<TxRecord>,
    pub cycles: Vec<CycleRecord>,
}

/// Measured-window statistics of one station.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StationStats {
    pub served: u64,
    pub skipped: u64,
    pub data_bits: u64,
    pub collisions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimOutcome {
    pub strategy: Strategy,
    pub rng_algorithm: String,
    pub seed: u64,
    /// Cycles completed inside the measurement window.
    pub cycles: u64,
    /// Sum of the measured cycle lengths.
    pub total_cycle_time: Duration,
    /// Mean cycle length, rounded to the nearest tick.
    pub mean_cycle_length: Duration,
    pub data_bits: u64,
    /// Wall time of the measurement window.
    pub elapsed: Duration,
    pub collisions: u64,
    pub skipped_turns: u64,
    pub per_station: Vec<StationStats>,
}

impl SimOutcome {
    pub fn goodput_bps<S: Scalar>(&self) -> S {
        crate::analytic::goodput_bps(self.data_bits, self.elapsed)
    }

    pub fn goodput_mbps<S: Scalar>(&self) -> S {
        crate::analytic::goodput_mbps(self.data_bits, self.elapsed)
    }

    pub fn per_station_goodput_bps<S: Scalar>(&self) -> Vec<S> {
        self.per_station
            .iter()
            .map(|s| crate::analytic::goodput_bps(s.data_bits, self.elapsed))
            .collect()
    }

    /// Mean cycle length in µs, unrounded.
    pub fn mean_cycle_micros<S: Scalar>(&self) -> S {
        S::from_ratio(
            self.total_cycle_time.ticks() as i128,
            (self.cycles.max(1) * crate::phy_tables::TICKS_PER_US) as i128,
        )
    }
}

fn mean_duration(total: Duration, count: u64) -> Duration {
    let count = count.max(1);
    Duration::from_ticks((total.ticks() + count / 2) / count)
}
