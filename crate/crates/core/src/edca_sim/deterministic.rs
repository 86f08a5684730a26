//! Collision-free replay of the SU-RD and MU TXOP structure.

use crate::analytic::{
    data_limits, su_data_schedule, t_ack_cycle_mu, t_ack_cycle_su, t_cf_end, t_data_cycle_mu,
    Strategy,
};
use crate::aggregation::optimal_schedule_costed;
use crate::error::{ModelError, Result};
use crate::phy_tables::{Duration, PROTOCOL};

use super::{mean_duration, SimConfig, SimOutcome, StationStats};

/// Channel occupancies of one TXOP, in order.
fn txop_timeline(cfg: &SimConfig) -> Result<Vec<Duration>> {
    let scn = &cfg.scenario;
    let profile = scn.profile()?;
    let limits = data_limits(scn, &profile)?;
    let sifs = PROTOCOL.sifs;
    let mut steps = vec![cfg.aifs_ap, PROTOCOL.bo_average];

    match scn.strategy {
        Strategy::SuRd => {
            let ack = t_ack_cycle_su(scn.ack_count(), &profile, &scn.segment)?;
            let (_, cycles) = su_data_schedule(scn.n, &profile, &scn.segment, &limits)?;
            for c in cycles {
                steps.extend([c.data_ppdu, sifs, c.back_ppdu, sifs]);
            }
            steps.extend([ack.ack_ppdu, sifs, ack.back_ppdu, sifs]);
            steps.push(profile.pr_legacy + t_cf_end(&profile));
        }
        Strategy::Mu => {
            let ack = t_ack_cycle_mu(
                scn.ack_count(),
                scn.stations,
                &profile,
                &scn.segment,
                scn.timing,
            )?;
            let cycle = |m: u64, k: u64| t_data_cycle_mu(m, k, &profile, &scn.segment);
            let (schedule, _) = optimal_schedule_costed(scn.n, &limits, |s| {
                s.entries
                    .iter()
                    .map(|e| cycle(e.mpdus, e.msdus).map(|c| c.total))
                    .sum()
            })?;
            for e in &schedule.entries {
                let c = cycle(e.mpdus, e.msdus)?;
                steps.extend([c.data_ppdu, sifs, c.back_ppdu, sifs]);
            }
            steps.extend([ack.trigger_ppdu, sifs, ack.ack_ppdu, sifs, ack.back_ppdu]);
            if ack.sifs > sifs * 2 {
                steps.push(ack.sifs - sifs * 2);
            }
        }
        Strategy::SuContention => unreachable!("checked by caller"),
    }
    Ok(steps)
}

/// Replays `measured_cycles` back-to-back TXOPs with the mean backoff and
/// no collisions.
pub fn run_deterministic(cfg: &SimConfig) -> Result<SimOutcome> {
    if cfg.scenario.strategy == Strategy::SuContention {
        return Err(ModelError::Config(
            "su-contention needs the contention simulator".into(),
        ));
    }
    cfg.validate()?;
    let steps = txop_timeline(cfg)?;

    let scn = &cfg.scenario;
    let stations = scn.stations as usize;
    let bits_per_station = scn.n * scn.segment.data_bits();
    let mut now = Duration::ZERO;
    let mut total_cycle_time = Duration::ZERO;
    let mut per_station = vec![StationStats::default(); stations];
    let mut data_bits = 0u64;
    for k in 0..cfg.measured_cycles {
        let start = now;
        for &d in &steps {
            now += d;
        }
        total_cycle_time += now - start;
        match scn.strategy {
            Strategy::Mu => {
                for s in per_station.iter_mut() {
                    s.served += 1;
                    s.data_bits += bits_per_station;
                }
                data_bits += bits_per_station * stations as u64;
            }
            _ => {
                // one station per TXOP, round-robin
                let i = (k % stations as u64) as usize;
                per_station[i].served += 1;
                per_station[i].data_bits += bits_per_station;
                data_bits += bits_per_station;
            }
        }
    }

    Ok(SimOutcome {
        strategy: scn.strategy,
        rng_algorithm: "none".into(),
        seed: cfg.seed,
        cycles: cfg.measured_cycles,
        total_cycle_time,
        mean_cycle_length: mean_duration(total_cycle_time, cfg.measured_cycles),
        data_bits,
        elapsed: now,
        collisions: 0,
        skipped_turns: 0,
        per_station,
    })
}
