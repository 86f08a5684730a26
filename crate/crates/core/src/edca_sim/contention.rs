//! SU contention: AP bursts and station ack transmissions compete under EDCA.

use crate::analytic::{data_limits, su_data_schedule, t_ack_cycle_su, Strategy};
use crate::error::{ModelError, Result};
use crate::phy_tables::Duration;

use super::{
    mean_duration, BackoffSource, ChaChaBackoff, Contender, CycleRecord, SimConfig, SimLog,
    SimOutcome, StationState, StationStats, TxKind, TxRecord,
};

/// Fixed airtimes of one scenario.
struct Airtimes {
    burst: Duration,
    /// First data PPDU of a burst: what is lost when the AP collides.
    first_data_ppdu: Duration,
    ack_exchange: Duration,
    ack_ppdu: Duration,
    acks: u64,
    bits_per_burst: u64,
}

struct ApState {
    backoff_slots: Option<u32>,
    cw: u32,
    retry_count: u32,
    next: usize,
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    src: &'a mut dyn BackoffSource,
    air: Airtimes,
    ap: ApState,
    stations: Vec<StationState>,
    burst_start: Vec<Option<(Duration, u64)>>,
    now: Duration,
    completions: u64,
    collisions_total: u64,
    // measurement window
    window_start: Option<Duration>,
    cycles: u64,
    total_cycle_time: Duration,
    data_bits: u64,
    collisions: u64,
    skipped_turns: u64,
    per_station: Vec<StationStats>,
    log: Option<SimLog>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SimConfig, src: &'a mut dyn BackoffSource, air: Airtimes) -> Self {
        let s = cfg.scenario.stations as usize;
        let mut ap = ApState {
            backoff_slots: None,
            cw: cfg.cw_min_ap,
            retry_count: 0,
            next: 0,
        };
        ap.backoff_slots = Some(src.draw(Contender::Ap, ap.cw));
        let idle = StationState {
            pending_acks: 0,
            backoff_slots: 0,
            cw: cfg.cw_min_sta,
            retry_count: 0,
            awaiting_data: true,
        };
        Engine {
            cfg,
            src,
            air,
            ap,
            stations: vec![idle; s],
            burst_start: vec![None; s],
            now: Duration::ZERO,
            completions: 0,
            collisions_total: 0,
            window_start: (cfg.warmup_cycles == 0).then_some(Duration::ZERO),
            cycles: 0,
            total_cycle_time: Duration::ZERO,
            data_bits: 0,
            collisions: 0,
            skipped_turns: 0,
            per_station: vec![StationStats::default(); s],
            log: cfg.record_log.then(SimLog::default),
        }
    }

    fn measuring(&self) -> bool {
        self.window_start.is_some()
    }

    fn any_ready(&self) -> bool {
        self.stations.iter().any(|s| s.awaiting_data)
    }

    fn contenders(&self) -> Vec<(Contender, Duration, u32)> {
        let mut out = Vec::with_capacity(self.stations.len() + 1);
        if let Some(slots) = self.ap.backoff_slots {
            out.push((Contender::Ap, self.cfg.aifs_ap, slots));
        }
        for (i, st) in self.stations.iter().enumerate() {
            if st.pending_acks > 0 {
                out.push((Contender::Station(i), self.cfg.aifs_sta, st.backoff_slots));
            }
        }
        out
    }

    fn set_slots(&mut self, who: Contender, slots: u32) {
        match who {
            Contender::Ap => self.ap.backoff_slots = Some(slots),
            Contender::Station(i) => self.stations[i].backoff_slots = slots,
        }
    }

    fn cw_of(&self, who: Contender) -> u32 {
        match who {
            Contender::Ap => self.ap.cw,
            Contender::Station(i) => self.stations[i].cw,
        }
    }

    /// One idle period followed by one channel occupancy.
    fn step(&mut self) {
        let contenders = self.contenders();
        debug_assert!(!contenders.is_empty(), "channel with nobody to contend");
        let slot = self.cfg.slot;
        let t_idle = self.now;
        let expiry = |aifs: Duration, slots: u32| t_idle + aifs + slot * slots as u64;
        let t_win = contenders
            .iter()
            .map(|&(_, aifs, slots)| expiry(aifs, slots))
            .min()
            .expect("at least one contender");

        let mut winners = Vec::new();
        for &(who, aifs, slots) in &contenders {
            if expiry(aifs, slots) == t_win {
                winners.push(who);
            } else {
                // freeze: keep only the slots not yet counted down
                let counting_from = t_idle + aifs;
                let elapsed = if t_win > counting_from {
                    ((t_win - counting_from).ticks() / slot.ticks()) as u32
                } else {
                    0
                };
                self.set_slots(who, slots - elapsed);
            }
        }

        if let [who] = winners[..] {
            match who {
                Contender::Ap => self.ap_success(t_win),
                Contender::Station(i) => self.station_success(i, t_win),
            }
        } else {
            self.collision(t_win, &winners);
        }
    }

    fn ap_success(&mut self, start: Duration) {
        let n = self.stations.len();
        let mut target = None;
        for k in 0..n {
            let i = (self.ap.next + k) % n;
            if self.stations[i].awaiting_data {
                target = Some(i);
                break;
            }
            if self.measuring() {
                self.skipped_turns += 1;
                self.per_station[i].skipped += 1;
            }
        }
        let i = target.expect("AP contends only with a ready station");
        self.ap.next = (i + 1) % n;

        let end = start + self.air.burst;
        self.burst_start[i] = Some((start, self.collisions_total));
        let cw_sta = self.cfg.cw_min_sta;
        let slots = self.src.draw(Contender::Station(i), cw_sta);
        self.stations[i] = StationState {
            pending_acks: self.air.acks,
            backoff_slots: slots,
            cw: cw_sta,
            retry_count: 0,
            awaiting_data: false,
        };
        if self.measuring() {
            self.per_station[i].served += 1;
        }

        self.ap.cw = self.cfg.cw_min_ap;
        self.ap.retry_count = 0;
        self.ap.backoff_slots = None;
        if self.any_ready() {
            self.ap.backoff_slots = Some(self.src.draw(Contender::Ap, self.ap.cw));
        }
        self.record(start, end, TxKind::DataBurst { station: i }, &[Contender::Ap]);
        self.now = end;
    }

    fn station_success(&mut self, i: usize, start: Duration) {
        let end = start + self.air.ack_exchange;
        let st = &mut self.stations[i];
        st.pending_acks = 0;
        st.cw = self.cfg.cw_min_sta;
        st.retry_count = 0;
        st.backoff_slots = 0;
        st.awaiting_data = true;
        if self.ap.backoff_slots.is_none() {
            self.ap.backoff_slots = Some(self.src.draw(Contender::Ap, self.ap.cw));
        }
        self.record(start, end, TxKind::Acks { station: i }, &[Contender::Station(i)]);
        self.now = end;

        let (burst_start, collisions_before) =
            self.burst_start[i].take().expect("acks follow a burst");
        let cycle = end - burst_start;
        self.completions += 1;
        if let Some(log) = &mut self.log {
            log.cycles.push(CycleRecord {
                cycle_index: self.completions - 1,
                station: i,
                start: burst_start,
                end,
                data_segments: self.cfg.scenario.n,
                collisions_in_cycle: self.collisions_total - collisions_before,
            });
        }
        if self.measuring() {
            self.cycles += 1;
            self.total_cycle_time += cycle;
            self.data_bits += self.air.bits_per_burst;
            self.per_station[i].data_bits += self.air.bits_per_burst;
        } else if self.completions == self.cfg.warmup_cycles {
            self.window_start = Some(end);
        }
    }

    fn collision(&mut self, start: Duration, winners: &[Contender]) {
        let mut busy = Duration::ZERO;
        for &who in winners {
            let frame = match who {
                Contender::Ap => self.air.first_data_ppdu,
                Contender::Station(_) => self.air.ack_ppdu,
            };
            busy = busy.max(frame);
            let cw_max = self.cfg.cw_max;
            let cw = (self.cw_of(who) * 2).min(cw_max);
            let slots = self.src.draw(who, cw);
            match who {
                Contender::Ap => {
                    self.ap.cw = cw;
                    self.ap.retry_count += 1;
                    self.ap.backoff_slots = Some(slots);
                }
                Contender::Station(i) => {
                    let st = &mut self.stations[i];
                    st.cw = cw;
                    st.retry_count += 1;
                    st.backoff_slots = slots;
                    if self.window_start.is_some() {
                        self.per_station[i].collisions += 1;
                    }
                }
            }
        }
        self.collisions_total += 1;
        if self.measuring() {
            self.collisions += 1;
        }
        let end = start + busy;
        self.record(start, end, TxKind::Collision, winners);
        self.now = end;
    }

    fn record(&mut self, start: Duration, end: Duration, kind: TxKind, who: &[Contender]) {
        if self.log.is_none() {
            return;
        }
        let participants = who.iter().map(|&c| (c, self.cw_of(c))).collect();
        if let Some(log) = &mut self.log {
            log.transmissions.push(TxRecord {
                start,
                end,
                kind,
                participants,
            });
        }
    }

    fn finish(self) -> (SimOutcome, Option<SimLog>) {
        let window_start = self.window_start.unwrap_or(self.now);
        let outcome = SimOutcome {
            strategy: Strategy::SuContention,
            rng_algorithm: self.src.algorithm().to_string(),
            seed: self.cfg.seed,
            cycles: self.cycles,
            total_cycle_time: self.total_cycle_time,
            mean_cycle_length: mean_duration(self.total_cycle_time, self.cycles),
            data_bits: self.data_bits,
            elapsed: self.now - window_start,
            collisions: self.collisions,
            skipped_turns: self.skipped_turns,
            per_station: self.per_station,
        };
        (outcome, self.log)
    }
}

fn airtimes(cfg: &SimConfig) -> Result<Airtimes> {
    let scn = &cfg.scenario;
    let profile = scn.profile()?;
    let limits = data_limits(scn, &profile)?;
    let (_, cycles) = su_data_schedule(scn.n, &profile, &scn.segment, &limits)?;
    let ack = t_ack_cycle_su(scn.ack_count(), &profile, &scn.segment)?;
    Ok(Airtimes {
        burst: cycles.iter().map(|c| c.total).sum(),
        first_data_ppdu: cycles[0].data_ppdu,
        ack_exchange: ack.total,
        ack_ppdu: ack.ack_ppdu,
        acks: scn.ack_count(),
        bits_per_burst: scn.n * scn.segment.data_bits(),
    })
}

/// Simulates SU contention with a seeded ChaCha8 backoff stream.
pub fn run_strategy2(cfg: &SimConfig) -> Result<SimOutcome> {
    let mut src = ChaChaBackoff::new(cfg.seed);
    run_strategy2_with(cfg, &mut src).map(|(outcome, _)| outcome)
}

/// Simulates SU contention with an explicit backoff source, returning the
/// log when `cfg.record_log` is set.
pub fn run_strategy2_with(
    cfg: &SimConfig,
    src: &mut dyn BackoffSource,
) -> Result<(SimOutcome, Option<SimLog>)> {
    if cfg.scenario.strategy != Strategy::SuContention {
        return Err(ModelError::Config(format!(
            "strategy {} is not su-contention",
            cfg.scenario.strategy
        )));
    }
    cfg.validate()?;
    let air = airtimes(cfg)?;
    let mut engine = Engine::new(cfg, src, air);
    let target = cfg.warmup_cycles + cfg.measured_cycles;
    while engine.completions < target {
        engine.step();
    }
    Ok(engine.finish())
}
