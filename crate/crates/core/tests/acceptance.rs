//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ax-goodput --test acceptance -- --nocapture`
//! (the binary has its own harness, so output is always shown).

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration as Wall, Instant};

use ax_goodput::aggregation::oracle::{oracle_min_mpdus, EXHAUSTIVE_GUARD};
use ax_goodput::aggregation::schedule_alpha;
use ax_goodput::analytic::{evaluate, max_acks_ul, t_back_legacy, t_cf_end, t_mul_back};
use ax_goodput::edca_sim::{
    run_deterministic, run_strategy2_with, ChaChaBackoff, Contender, SimConfig, TxKind,
};
use ax_goodput::phy_tables::{all_table_cells, lookup_profile, Mode, PROTOCOL};
use ax_goodput::sweep::{build_curve, gain_between, Curve, SweepOptions};
use ax_goodput::{Exact, ExactCurve, Scalar, Scenario, Strategy};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Wall) -> Result<(), String> {
    let took = start.elapsed();
    check(took <= budget, || format!("took {took:?}, budget {budget:?}"))
}

fn table_fidelity() -> Outcome {
    let start = Instant::now();
    let golden = golden_rows();
    let cells = all_table_cells();
    check(golden.len() == cells.len(), || {
        format!("{} golden rows vs {} table cells", golden.len(), cells.len())
    })?;
    let mut compared = 0;
    for row in &golden {
        let got = lookup_profile(row.mode, row.stations, row.mcs);
        match (row.values, got) {
            (Some(expect), Ok(p)) => {
                check(profile_values(&p) == expect, || {
                    format!("{:?} S={} MCS{}: {:?} != {:?}", row.mode, row.stations, row.mcs, profile_values(&p), expect)
                })?;
                compared += 1;
            }
            (None, Err(_)) => compared += 1,
            (e, g) => return Err(format!("{:?} S={} MCS{}: {e:?} vs {g:?}", row.mode, row.stations, row.mcs)),
        }
    }
    within(start, Wall::from_secs(1))?;
    Ok(format!("{compared} rows round-trip exactly"))
}

fn frame_times() -> Outcome {
    let p = lookup_profile(Mode::Su, 1, 11).map_err(|e| e.to_string())?;
    let mu = lookup_profile(Mode::Mu, 4, 11).map_err(|e| e.to_string())?;
    let leg = |bytes: u64| hand_airtime_us(Ratio::from_integer(0), bytes, Ratio::from_integer(48), Ratio::from_integer(4));
    let cases = [
        ("CF-End", us(t_cf_end(&p)), leg(20), Ratio::from_integer(4)),
        ("BAck 54 B", us(t_back_legacy(65, &p)), leg(54), Ratio::from_integer(12)),
        ("Mul.BAck S=4", us(t_mul_back(4, 256, &mu)), leg(22 + 4 * 36), Ratio::from_integer(32)),
    ];
    for (name, got, hand, stated) in cases {
        check(got == hand && hand == stated, || format!("{name}: {got} / hand {hand} / stated {stated}"))?;
    }
    Ok("CF-End 4 µs, BAck 12 µs, Mul.BAck 32 µs".into())
}

fn packing_optimality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut instances = 0;
    while instances < 2000 {
        let Some(limits) = random_small_limits(&mut rng) else { continue };
        let (a, f) = (limits.a_data, limits.f_data);
        let n_max = (EXHAUSTIVE_GUARD / (a * f).max(1)).max(1) * limits.full_ampdu_msdus;
        let n = rand::Rng::gen_range(&mut rng, 1..=n_max.max(1));
        for x in limits.x_lower(n)..=limits.x_upper(n) {
            if a * f * x > EXHAUSTIVE_GUARD {
                continue;
            }
            let alpha = schedule_alpha(n, x, &limits).map_err(|e| e.to_string())?;
            check(alpha.is_valid(&limits) && alpha.n_total() == n && alpha.x() == x, || {
                format!("invalid α schedule {alpha:?} for n={n} x={x} {limits:?}")
            })?;
            let best = oracle_min_mpdus(n, x, &limits).map_err(|e| e.to_string())?;
            check(alpha.total_mpdus() == best, || {
                format!("n={n} x={x}: α uses {} MPDUs, oracle {best}; {limits:?}", alpha.total_mpdus())
            })?;
            instances += 1;
        }
    }
    within(start, Wall::from_secs(60))?;
    Ok(format!("{instances} instances, α == oracle"))
}

fn analytic_sim_equivalence() -> Outcome {
    let mut compared = 0;
    let mut skipped = Vec::new();
    for strategy in [Strategy::SuRd, Strategy::Mu] {
        for s in ALL_STATIONS {
            for mcs in [1u8, 5, 11] {
                let Ok(t) = Scenario::new(strategy, s, mcs, 1460, 1) else { continue };
                if t.profile().is_err() {
                    skipped.push(format!("{strategy} S={s} MCS{mcs}"));
                    continue;
                }
                let cap = t.n_cap().map_err(|e| e.to_string())?;
                for n in [1, 100, cap] {
                    if n > cap {
                        skipped.push(format!("{strategy} S={s} MCS{mcs} N={n}>cap {cap}"));
                        continue;
                    }
                    let scn = t.with_n(n);
                    let ana = evaluate(&scn).map_err(|e| e.to_string())?;
                    let sim = run_deterministic(&SimConfig::new(scn, 0).with_cycles(0, 3))
                        .map_err(|e| e.to_string())?;
                    check(
                        sim.goodput_bps::<Exact>() == ana.goodput_bps::<Exact>()
                            && sim.mean_cycle_length == ana.total,
                        || format!("{scn:?}: sim {} vs analytic {}", sim.mean_cycle_length, ana.total),
                    )?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} points exact; skipped {}", skipped.join(", ")))
}

fn curve(strategy: Strategy, s: u32, mcs: u8, seg: u64, da: bool) -> Result<ExactCurve, String> {
    let t = Scenario::new(strategy, s, mcs, seg, 1)
        .map_err(|e| e.to_string())?
        .with_delayed_acks(da);
    build_curve::<Exact>(&t, &SweepOptions::default()).map_err(|e| e.to_string())
}

fn mbps_of(g: Exact) -> f64 {
    g.to_f64() / 1e6
}

fn crossover(curves: &mut Vec<ExactCurve>) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for s in [4, 8] {
        let su = curve(Strategy::SuRd, s, 11, 1460, false)?;
        let mu = curve(Strategy::Mu, s, 11, 1460, false)?;
        let d_su = su.delay_to_fraction(95, 100).unwrap().system_delay;
        let d_mu = mu.delay_to_fraction(95, 100).unwrap().system_delay;
        check(d_mu < d_su, || format!("S={s}: MU reaches 95% at {d_mu}, SU-RD at {d_su}"))?;
        notes.push(format!("S={s} 95% delay MU {:.2} ms < SU {:.2} ms", d_mu.as_millis_f64(), d_su.as_millis_f64()));
        curves.extend([su, mu]);
    }
    for mcs in [1u8, 5, 9] {
        let su = curve(Strategy::SuRd, 64, mcs, 1460, false)?;
        let mu = curve(Strategy::Mu, 64, mcs, 1460, false)?;
        let (g_su, g_mu) = (su.max_goodput(), mu.max_goodput());
        check(g_su > g_mu, || {
            format!("S=64 MCS{mcs}: SU-RD max {:.2} Mbps <= MU max {:.2} Mbps", mbps_of(g_su), mbps_of(g_mu))
        })?;
        notes.push(format!("S=64 MCS{mcs} max SU {:.1} > MU {:.1} Mbps", mbps_of(g_su), mbps_of(g_mu)));
        curves.extend([su, mu]);
    }
    within(start, Wall::from_secs(300))?;
    Ok(notes.join("; "))
}

fn delayed_acks(curves: &mut Vec<ExactCurve>) -> Outcome {
    let mut notes = Vec::new();
    for (seg, lo, hi) in [(1460u64, None, Ratio::new(5, 100)), (208, Some(Ratio::new(10, 100)), Ratio::new(25, 100))] {
        let without = curve(Strategy::Mu, 4, 11, seg, false)?;
        let with = curve(Strategy::Mu, 4, 11, seg, true)?;
        let g = gain_between(&without, &with);
        let ok = g.gain < hi && lo.is_none_or(|lo| g.gain >= lo);
        check(ok, || format!("{seg} B: gain {:.2}%", g.gain.to_f64() * 100.0))?;
        notes.push(format!("{seg} B gain {:.2}%", g.gain.to_f64() * 100.0));
        curves.extend([without, with]);
    }
    Ok(notes.join("; "))
}

fn ack_capacity() -> Outcome {
    let p = lookup_profile(Mode::Mu, 64, 1).map_err(|e| e.to_string())?;
    let seg = ax_goodput::SegmentProfile::for_payload(1460).map_err(|e| e.to_string())?;
    let got = max_acks_ul(&p, &seg, false).acks;
    let scan = brute_force_ack_capacity(&p);
    check(got == scan && got.abs_diff(74) <= 1, || format!("capacity {got}, brute force {scan}"))?;
    Ok(format!("{got} acks (scan {scan})"))
}

fn curve_construction(curves: &[ExactCurve]) -> Outcome {
    for c in curves {
        let strictly = c.points.windows(2).all(|w| {
            w[0].cycle_length < w[1].cycle_length
                && w[0].goodput < w[1].goodput
                && w[0].system_delay < w[1].system_delay
        });
        check(strictly && !c.points.is_empty(), || format!("curve {:?} not strictly monotone", c.template))?;
    }
    let seg = ax_goodput::SegmentProfile::for_payload(464).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for (_, _, _, p) in all_table_cells() {
        let Ok(p) = p else { continue };
        let (off, on) = (max_acks_ul(&p, &seg, false), max_acks_ul(&p, &seg, true));
        check(on.data_segments == 2 * off.data_segments, || format!("{p:?}: cap {off:?} vs {on:?}"))?;
        cells += 1;
    }
    let find = |da: bool| -> Result<&Curve<Exact>, String> {
        curves
            .iter()
            .find(|c| c.template.delayed_acks == da && c.template.segment.l_data == 208)
            .ok_or_else(|| "208 B MU curves missing".to_string())
    };
    let (c_off, c_on) = (find(false)?, find(true)?);
    check(c_on.evaluated == 2 * c_off.evaluated, || format!("evaluated {} vs {}", c_on.evaluated, c_off.evaluated))?;
    Ok(format!("{} curves strictly monotone; cap doubles in {cells} cells", curves.len()))
}

fn simulator_properties() -> Outcome {
    let start = Instant::now();
    let scn = Scenario::new(Strategy::SuContention, 4, 11, 1460, 256).map_err(|e| e.to_string())?;
    let cfg = SimConfig::new(scn, 7).with_log(true);
    let run = || run_strategy2_with(&cfg, &mut ChaChaBackoff::new(cfg.seed)).map_err(|e| e.to_string());
    let (a, log_a) = run()?;
    let (b, log_b) = run()?;
    check(a == b && log_a == log_b, || "two runs with the same seed differ".into())?;
    let log = log_a.unwrap();
    check(a.cycles == cfg.measured_cycles, || format!("{} cycles measured", a.cycles))?;

    // CW law, replayed from the log
    let mut streak: HashMap<Contender, u32> = HashMap::new();
    let mut checked = 0;
    for tx in &log.transmissions {
        for &(who, cw) in &tx.participants {
            let c = streak.entry(who).or_insert(0);
            let cw_min = match who {
                Contender::Ap => cfg.cw_min_ap,
                Contender::Station(_) => cfg.cw_min_sta,
            };
            if tx.success() {
                *c = 0;
            } else {
                *c += 1;
            }
            let expect = (cw_min << (*c).min(20)).min(cfg.cw_max);
            check(cw == expect, || format!("{who:?} after {c} collisions has CW {cw}, expected {expect}"))?;
            checked += 1;
        }
    }

    // exclusivity and causality
    let mut last_burst_end: HashMap<usize, ax_goodput::Duration> = HashMap::new();
    for w in log.transmissions.windows(2) {
        check(w[1].start >= w[0].end, || format!("overlap: {:?} then {:?}", w[0], w[1]))?;
    }
    for tx in &log.transmissions {
        match tx.kind {
            TxKind::DataBurst { station } => {
                last_burst_end.insert(station, tx.end);
            }
            TxKind::Acks { station } => {
                let end = last_burst_end[&station];
                check(tx.start > end, || format!("station {station} acks at {} before burst end {end}", tx.start))?;
            }
            TxKind::Collision => {}
        }
    }

    // round-robin fairness with skips counted as turns
    let turns: Vec<u64> = a.per_station.iter().map(|s| s.served + s.skipped).collect();
    let spread = turns.iter().max().unwrap() - turns.iter().min().unwrap();
    check(spread <= 1, || format!("round-robin turns {turns:?}"))?;
    let sum: u64 = a.per_station.iter().map(|s| s.data_bits).sum();
    check(sum == a.data_bits, || "per-station bits do not sum to total".into())?;

    within(start, Wall::from_secs(30))?;
    Ok(format!(
        "{} cycles, {} collisions, {checked} CW checks, {:.2} Mbps",
        a.cycles,
        a.collisions,
        a.goodput_mbps::<f64>()
    ))
}

fn ppdu_ceiling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ppdus = 0usize;
    for _ in 0..10_000 {
        let scn = random_scenario(&mut rng);
        let b = evaluate(&scn).map_err(|e| format!("{scn:?}: {e}"))?;
        for t in b.ppdu_airtimes() {
            check(t <= PROTOCOL.max_ppdu_time, || format!("{scn:?}: PPDU of {t}"))?;
            ppdus += 1;
        }
    }
    Ok(format!("10000 scenarios, {ppdus} PPDUs within 5484 µs"))
}

fn main() -> ExitCode {
    let mut curves = Vec::new();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    };
    report(1, "table fidelity", table_fidelity());
    report(2, "frame times", frame_times());
    report(3, "packing optimality", packing_optimality());
    report(4, "analytic/simulator equivalence", analytic_sim_equivalence());
    report(5, "MU vs SU crossover", crossover(&mut curves));
    report(6, "delayed acks", delayed_acks(&mut curves));
    report(7, "UL ack capacity", ack_capacity());
    report(8, "curve construction", curve_construction(&curves));
    report(9, "simulator properties", simulator_properties());
    report(10, "PPDU ceiling", ppdu_ceiling());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
