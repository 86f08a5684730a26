use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use ax_goodput::analytic::{data_limits, evaluate, su_data_schedule, CycleBreakdown};
use ax_goodput::aggregation::AmpduSchedule;
use ax_goodput::edca_sim::{
    run_deterministic, run_strategy2_with, ChaChaBackoff, CycleRecord, SimConfig, SimOutcome,
};
use ax_goodput::phy_tables::{all_table_cells, Mode};
use ax_goodput::sweep::{build_curve, compare_curves, gain_between, round_centi, SimSweep, SweepOptions};
use ax_goodput::{Exact, ExactCurve, Scalar, Scenario, SegmentProfile, Strategy, TimingMode};
use serde::Serialize;

use crate::config::FileConfig;
use crate::output::{csv_bytes, json_bytes, manifest_path_for, OutputSet, RunManifest};
use crate::{Cli, Command, Figure, ScenarioArgs, SimArgs, StrategyArg, TableFormat, UsageError};

/// Default stride for simulated sweep points when none is given.
const CONTENTION_SWEEP_STRIDE: u64 = 512;
/// Default measured cycles per simulated sweep point.
const CONTENTION_SWEEP_CYCLES: u64 = 1000;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> anyhow::Result<T> {
    flag.or(file)
        .ok_or_else(|| usage(format!("missing --{name} (or `{}` in the config file)", name.replace('-', "_"))))
}

fn timing(strict: Option<bool>, file: &FileConfig) -> TimingMode {
    if strict.or(file.strict_paper_timing).unwrap_or(true) {
        TimingMode::Strict
    } else {
        TimingMode::ThreeSifs
    }
}

fn timing_name(t: TimingMode) -> &'static str {
    match t {
        TimingMode::Strict => "strict",
        TimingMode::ThreeSifs => "three-sifs",
    }
}

fn check_segment(seg: u64) -> anyhow::Result<()> {
    if SegmentProfile::SIZES.contains(&seg) {
        Ok(())
    } else {
        Err(usage(format!("--segment must be one of 1460, 464, 208 (got {seg})")))
    }
}

fn strategy_of(arg: Option<StrategyArg>, file: &FileConfig) -> anyhow::Result<Strategy> {
    match (arg, &file.strategy) {
        (Some(s), _) => Ok(s.into()),
        (None, Some(s)) => Ok(s.parse::<Strategy>()?),
        (None, None) => Err(usage("missing strategy (su-rd, su-contention or mu)")),
    }
}

fn resolve_scenario(
    strategy: Option<StrategyArg>,
    a: &ScenarioArgs,
    file: &FileConfig,
) -> anyhow::Result<Scenario> {
    let strategy = strategy_of(strategy, file)?;
    let stations = required(a.stations, file.stations, "stations")?;
    let mcs = required(a.mcs, file.mcs, "mcs")?;
    let segment = required(a.segment, file.segment, "segment")?;
    let n = required(a.n, file.n, "n")?;
    check_segment(segment)?;
    let scn = Scenario::new(strategy, stations, mcs, segment, n)?
        .with_delayed_acks(a.delayed_acks.or(file.delayed_acks).unwrap_or(false))
        .with_timing(timing(a.strict_paper_timing, file));
    scn.validate()?;
    Ok(scn)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Analyze {
            strategy,
            scenario,
            json,
            dump_schedule,
        } => analyze(resolve_scenario(strategy, &scenario, &file)?, json, dump_schedule),
        Command::Simulate {
            strategy,
            scenario,
            sim,
            validate_analytic,
            trace,
            json,
            dump_schedule,
        } => {
            let scn = resolve_scenario(strategy, &scenario, &file)?;
            let opts = SimulateOpts {
                seed: sim.seed.or(file.seed).unwrap_or(1),
                cycles: sim.cycles.or(file.cycles).unwrap_or(SimConfig::DEFAULT_MEASURED),
                warmup: sim.warmup.or(file.warmup).unwrap_or(SimConfig::DEFAULT_WARMUP),
                validate_analytic,
                trace,
                json,
                dump_schedule,
            };
            simulate(scn, opts)
        }
        Command::Sweep {
            strategies,
            paper_figure,
            stations,
            mcs,
            segment,
            delayed_acks,
            compare_delayed_acks,
            strict_paper_timing,
            stride,
            sim,
            out_dir,
        } => {
            let defs = match paper_figure {
                Some(fig) => preset(fig),
                None => custom_specs(
                    &strategies,
                    &stations,
                    &mcs,
                    &segment,
                    delayed_acks,
                    compare_delayed_acks,
                    &file,
                )?,
            };
            let opts = SweepRun {
                timing: timing(strict_paper_timing, &file),
                stride: stride.or(file.stride),
                sim,
                out_dir: out_dir
                    .or_else(|| file.out_dir.clone())
                    .unwrap_or_else(|| PathBuf::from("curves")),
            };
            sweep(defs, opts, &file)
        }
        Command::ExportTables { format, out } => export_tables(format, out),
    }
}

fn print_schedule(schedule: &AmpduSchedule) {
    println!(
        "schedule      {} A-MPDU(s), {} MPDU(s), {} MSDU(s)",
        schedule.x(),
        schedule.total_mpdus(),
        schedule.n_total()
    );
    for (i, e) in schedule.entries.iter().enumerate() {
        println!("  a-mpdu {:<5} {} MPDU(s), {} MSDU(s)", i + 1, e.mpdus, e.msdus);
    }
}

fn describe(scn: &Scenario) -> String {
    format!(
        "{}, {} station(s), MCS {}, {} B segments, N = {}, delayed acks {}, timing {}",
        scn.strategy,
        scn.stations,
        scn.mcs,
        scn.segment.l_data,
        scn.n,
        if scn.delayed_acks { "on" } else { "off" },
        timing_name(scn.timing)
    )
}

fn print_breakdown(b: &CycleBreakdown) {
    println!(
        "access        AIFS + mean backoff {:>30}",
        b.access_overhead.to_string()
    );
    let mut k = 0;
    for (entry, count) in b.schedule.runs() {
        let c = &b.data_cycles[k];
        k += count as usize;
        println!(
            "data {:>4}x    {} MPDU / {} MSDU: PPDU {} + BAck {} + SIFS {} = {} each",
            count, entry.mpdus, entry.msdus, c.data_ppdu, c.back_ppdu, c.sifs, c.total
        );
    }
    println!("data total    {:>49}", b.data_time().to_string());
    let a = &b.ack_cycle;
    if a.trigger_ppdu > ax_goodput::Duration::ZERO {
        println!(
            "acks          {} ack(s) in {} MPDU(s): TF {} + PPDU {} + Multi-STA BAck {} + SIFS {} = {}",
            a.acks, a.mpdus, a.trigger_ppdu, a.ack_ppdu, a.back_ppdu, a.sifs, a.total
        );
    } else {
        println!(
            "acks          {} ack(s) in {} MPDU(s): PPDU {} + BAck {} + SIFS {} = {}",
            a.acks, a.mpdus, a.ack_ppdu, a.back_ppdu, a.sifs, a.total
        );
    }
    if b.teardown > ax_goodput::Duration::ZERO {
        println!("teardown      CF-End {:>42}", b.teardown.to_string());
    }
    println!("total cycle   {:>49}", b.total.to_string());
    println!("data bits     {:>49}", b.data_bits);
    println!("goodput       {:>49}", format!("{:.2} Mbps", b.goodput_mbps::<f64>()));
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    scenario: &'a Scenario,
    breakdown: &'a CycleBreakdown,
    goodput_mbps: f64,
    cycle_length_us: f64,
}

fn analyze(scn: Scenario, json: Option<PathBuf>, dump_schedule: bool) -> anyhow::Result<()> {
    if scn.strategy == Strategy::SuContention {
        return Err(usage("su-contention has no closed form; use `simulate su-contention`"));
    }
    let b = evaluate(&scn)?;
    println!("scenario      {}", describe(&scn));
    if dump_schedule {
        print_schedule(&b.schedule);
    }
    print_breakdown(&b);
    if let Some(path) = json {
        let mut out = OutputSet::new(RunManifest::new(
            serde_json::to_value(scn)?,
            timing_name(scn.timing).into(),
        ));
        let doc = AnalyzeJson {
            scenario: &scn,
            breakdown: &b,
            goodput_mbps: round_centi(b.goodput_mbps::<f64>()),
            cycle_length_us: b.total.as_micros_f64(),
        };
        out.write(&path, &json_bytes(&doc)?)?;
        out.finish(&manifest_path_for(&path))?;
    }
    Ok(())
}

struct SimulateOpts {
    seed: u64,
    cycles: u64,
    warmup: u64,
    validate_analytic: bool,
    trace: Option<PathBuf>,
    json: Option<PathBuf>,
    dump_schedule: bool,
}

fn print_outcome(out: &SimOutcome, warmup: u64) {
    println!("rng           {} (seed {})", out.rng_algorithm, out.seed);
    println!("cycles        {} measured after {} warmup", out.cycles, warmup);
    println!("mean cycle    {}", out.mean_cycle_length);
    println!("elapsed       {}", out.elapsed);
    println!("goodput       {:.2} Mbps", out.goodput_mbps::<f64>());
    println!("collisions    {}", out.collisions);
    println!("skipped turns {}", out.skipped_turns);
    let per = out.per_station_goodput_bps::<f64>();
    for (i, (s, g)) in out.per_station.iter().zip(per).enumerate() {
        println!(
            "station {:<5} served {}, skipped {}, collisions {}, {:.2} Mbps",
            i,
            s.served,
            s.skipped,
            s.collisions,
            g / 1e6
        );
    }
}

fn simulate(scn: Scenario, opts: SimulateOpts) -> anyhow::Result<()> {
    let contention = scn.strategy == Strategy::SuContention;
    if contention && opts.validate_analytic {
        return Err(usage("--validate-analytic applies to su-rd and mu only"));
    }
    if !contention && opts.trace.is_some() {
        return Err(usage("--trace applies to su-contention only"));
    }
    let cfg = SimConfig::new(scn, opts.seed)
        .with_cycles(if contention { opts.warmup } else { 0 }, opts.cycles)
        .with_log(opts.trace.is_some());
    println!("scenario      {}", describe(&scn));
    if opts.dump_schedule {
        let p = scn.profile()?;
        let schedule = if contention {
            su_data_schedule(scn.n, &p, &scn.segment, &data_limits(&scn, &p)?)?.0
        } else {
            evaluate(&scn)?.schedule
        };
        print_schedule(&schedule);
    }

    let (outcome, log) = if contention {
        run_strategy2_with(&cfg, &mut ChaChaBackoff::new(opts.seed))?
    } else {
        (run_deterministic(&cfg)?, None)
    };
    print_outcome(&outcome, cfg.warmup_cycles);

    let mut out = OutputSet::new(RunManifest::new(
        serde_json::to_value(cfg)?,
        timing_name(scn.timing).into(),
    ));
    out.manifest_mut().seeds.push(opts.seed);
    out.manifest_mut().rng_algorithm = Some(outcome.rng_algorithm.clone());
    let mut first_output = None;
    if let (Some(path), Some(log)) = (&opts.trace, &log) {
        let mut text = String::from(CycleRecord::CSV_HEADER);
        text.push('\n');
        for c in &log.cycles {
            text.push_str(&c.csv_row());
            text.push('\n');
        }
        out.write(path, text.as_bytes())?;
        first_output.get_or_insert(path.clone());
    }
    if let Some(path) = &opts.json {
        out.write(path, &json_bytes(&outcome)?)?;
        first_output.get_or_insert(path.clone());
    }
    if let Some(first) = first_output {
        out.finish(&manifest_path_for(&first))?;
    }

    if opts.validate_analytic {
        let b = evaluate(&scn)?;
        let (sim_g, ana_g) = (outcome.goodput_bps::<Exact>(), b.goodput_bps::<Exact>());
        if sim_g == ana_g && outcome.mean_cycle_length == b.total {
            println!("MATCH");
        } else {
            return Err(anyhow::Error::new(crate::ValidationMismatch(format!(
                "simulated cycle {} / {:.6} Mbps vs analytic {} / {:.6} Mbps",
                outcome.mean_cycle_length,
                sim_g.to_f64() / 1e6,
                b.total,
                ana_g.to_f64() / 1e6
            ))));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
struct CurveDef {
    strategy: Strategy,
    stations: u32,
    mcs: u8,
    segment: u64,
    delayed_acks: bool,
}

impl CurveDef {
    fn label(&self) -> String {
        format!(
            "{}_s{}_mcs{}_{}b{}",
            self.strategy,
            self.stations,
            self.mcs,
            self.segment,
            if self.delayed_acks { "_da" } else { "" }
        )
    }
}

fn grid(
    strategies: &[Strategy],
    stations: &[u32],
    mcs: &[u8],
    segments: &[u64],
    das: &[bool],
) -> Vec<CurveDef> {
    let mut out = Vec::new();
    for &s in stations {
        for &m in mcs {
            for &seg in segments {
                for &da in das {
                    for &strategy in strategies {
                        out.push(CurveDef {
                            strategy,
                            stations: s,
                            mcs: m,
                            segment: seg,
                            delayed_acks: da,
                        });
                    }
                }
            }
        }
    }
    out
}

fn preset(fig: Figure) -> Vec<CurveDef> {
    let all = [Strategy::SuRd, Strategy::SuContention, Strategy::Mu];
    let single = |s: u32| grid(&all, &[s], &[5, 11], &[1460], &[false]);
    match fig {
        Figure::F1A => single(1),
        Figure::F1B => single(4),
        Figure::F1C => single(8),
        Figure::F1D => single(16),
        Figure::F1E => single(32),
        Figure::F1F => single(64),
        Figure::F2 => grid(&all, &[4, 8, 16, 32, 64], &[11], &[1460], &[false, true]),
        Figure::F3 => grid(&[Strategy::Mu], &[4, 8, 16], &[11], &[1460, 464, 208], &[false, true]),
    }
}

fn custom_specs(
    strategies: &[StrategyArg],
    stations: &[u32],
    mcs: &[u8],
    segment: &[u64],
    delayed_acks: Option<bool>,
    both: bool,
    file: &FileConfig,
) -> anyhow::Result<Vec<CurveDef>> {
    let strategies: Vec<Strategy> = if strategies.is_empty() {
        vec![strategy_of(None, file)?]
    } else {
        strategies.iter().map(|&s| s.into()).collect()
    };
    let pick = |flag: &[u64], file: Option<u64>, name: &str| -> anyhow::Result<Vec<u64>> {
        if !flag.is_empty() {
            Ok(flag.to_vec())
        } else {
            required(None, file, name).map(|v| vec![v])
        }
    };
    let stations: Vec<u32> = pick(
        &stations.iter().map(|&s| s as u64).collect::<Vec<_>>(),
        file.stations.map(u64::from),
        "stations",
    )?
    .into_iter()
    .map(|s| s as u32)
    .collect();
    let mcs: Vec<u8> = pick(
        &mcs.iter().map(|&m| m as u64).collect::<Vec<_>>(),
        file.mcs.map(u64::from),
        "mcs",
    )?
    .into_iter()
    .map(|m| m as u8)
    .collect();
    let segments = pick(segment, file.segment, "segment")?;
    for &s in &segments {
        check_segment(s)?;
    }
    let das = if both {
        vec![false, true]
    } else {
        vec![delayed_acks.or(file.delayed_acks).unwrap_or(false)]
    };
    Ok(grid(&strategies, &stations, &mcs, &segments, &das))
}

struct SweepRun {
    timing: TimingMode,
    stride: Option<u64>,
    sim: SimArgs,
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct CurveSummaryJson {
    name: String,
    max_goodput_mbps: f64,
    max_goodput_n: u64,
    delay_to_95_ms: f64,
    n_at_95: u64,
}

#[derive(Serialize)]
struct IntervalJson {
    from_ms: f64,
    to_ms: Option<f64>,
    leader: Option<String>,
}

#[derive(Serialize)]
struct PairJson {
    a: String,
    b: String,
    intervals: Vec<IntervalJson>,
}

#[derive(Serialize)]
struct GroupJson {
    stations: u32,
    mcs: u8,
    seg_bytes: u64,
    delayed_acks: bool,
    curves: Vec<CurveSummaryJson>,
    pairwise: Vec<PairJson>,
}

#[derive(Serialize)]
struct GainJson {
    strategy: Strategy,
    stations: u32,
    mcs: u8,
    seg_bytes: u64,
    max_without_mbps: f64,
    max_with_mbps: f64,
    gain_pct: f64,
    cap_without: u64,
    cap_with: u64,
}

#[derive(Serialize)]
struct ComparisonJson {
    groups: Vec<GroupJson>,
    delayed_ack_gains: Vec<GainJson>,
}

fn mbps(g: Exact) -> f64 {
    round_centi(g.to_f64() / 1e6)
}

/// (stations, mcs, segment, delayed acks)
type GroupKey = (u32, u8, u64, bool);

fn comparison(curves: &[(CurveDef, ExactCurve)]) -> ComparisonJson {
    let mut by_group: BTreeMap<GroupKey, Vec<(String, &ExactCurve)>> = BTreeMap::new();
    let mut by_da: BTreeMap<(String, u32, u8, u64), [Option<&ExactCurve>; 2]> = BTreeMap::new();
    for (def, c) in curves {
        by_group
            .entry((def.stations, def.mcs, def.segment, def.delayed_acks))
            .or_default()
            .push((def.strategy.to_string(), c));
        by_da
            .entry((def.strategy.to_string(), def.stations, def.mcs, def.segment))
            .or_default()[def.delayed_acks as usize] = Some(c);
    }

    let mut groups = Vec::new();
    for ((stations, mcs, seg, da), members) in &by_group {
        let named: Vec<(&str, &ExactCurve)> = members.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        let report = compare_curves(&named);
        groups.push(GroupJson {
            stations: *stations,
            mcs: *mcs,
            seg_bytes: *seg,
            delayed_acks: *da,
            curves: report
                .curves
                .into_iter()
                .map(|s| CurveSummaryJson {
                    name: s.name,
                    max_goodput_mbps: mbps(s.max_goodput),
                    max_goodput_n: s.max_goodput_n,
                    delay_to_95_ms: s.delay_to_95.as_millis_f64(),
                    n_at_95: s.n_at_95,
                })
                .collect(),
            pairwise: report
                .pairwise
                .into_iter()
                .map(|d| PairJson {
                    a: d.a,
                    b: d.b,
                    intervals: d
                        .intervals
                        .into_iter()
                        .map(|i| IntervalJson {
                            from_ms: i.from.as_millis_f64(),
                            to_ms: i.to.map(|t| t.as_millis_f64()),
                            leader: i.leader,
                        })
                        .collect(),
                })
                .collect(),
        });
    }

    let mut gains = Vec::new();
    for ((strategy, stations, mcs, seg), pair) in &by_da {
        if let [Some(without), Some(with)] = pair {
            let g = gain_between(without, with);
            gains.push(GainJson {
                strategy: strategy.parse().expect("round-trips"),
                stations: *stations,
                mcs: *mcs,
                seg_bytes: *seg,
                max_without_mbps: mbps(g.max_without),
                max_with_mbps: mbps(g.max_with),
                gain_pct: round_centi(g.gain.to_f64() * 100.0),
                cap_without: g.cap_without,
                cap_with: g.cap_with,
            });
        }
    }
    ComparisonJson {
        groups,
        delayed_ack_gains: gains,
    }
}

fn sweep(defs: Vec<CurveDef>, run: SweepRun, file: &FileConfig) -> anyhow::Result<()> {
    let seed = run.sim.seed.or(file.seed).unwrap_or(1);
    let sim = SimSweep {
        seed,
        warmup_cycles: run.sim.warmup.or(file.warmup).unwrap_or(SimConfig::DEFAULT_WARMUP),
        measured_cycles: run.sim.cycles.or(file.cycles).unwrap_or(CONTENTION_SWEEP_CYCLES),
    };
    let mut curves: Vec<(CurveDef, ExactCurve)> = Vec::new();
    for def in &defs {
        let template = Scenario::new(def.strategy, def.stations, def.mcs, def.segment, 1)?
            .with_delayed_acks(def.delayed_acks)
            .with_timing(run.timing);
        if let Err(e) = template.validate() {
            eprintln!("skipping {}: {e}", def.label());
            continue;
        }
        let stride = match (run.stride, def.strategy) {
            (Some(s), _) => s,
            (None, Strategy::SuContention) => CONTENTION_SWEEP_STRIDE,
            (None, _) => 1,
        };
        let opts = SweepOptions { stride, sim };
        let curve = build_curve::<Exact>(&template, &opts)
            .with_context(|| format!("sweeping {}", def.label()))?;
        curves.push((*def, curve));
    }
    if curves.is_empty() {
        return Err(ax_goodput::ModelError::EmptyCurve.into());
    }

    #[derive(Serialize)]
    struct SweepScenario<'a> {
        curves: &'a [CurveDef],
        stride: Option<u64>,
        sim: SimSweep,
    }
    let mut out = OutputSet::new(RunManifest::new(
        serde_json::to_value(SweepScenario {
            curves: &defs,
            stride: run.stride,
            sim,
        })?,
        timing_name(run.timing).into(),
    ));
    if defs.iter().any(|s| s.strategy == Strategy::SuContention) {
        out.manifest_mut().seeds.push(seed);
        out.manifest_mut().rng_algorithm = Some(ChaChaBackoff::ALGORITHM.into());
    }

    println!(
        "{:<32} {:>7} {:>16} {:>6} {:>16}",
        "curve", "points", "max goodput", "at N", "95% delay"
    );
    for (def, c) in &curves {
        let label = def.label();
        let rows = c.rows();
        out.write(&run.out_dir.join(format!("{label}.csv")), &csv_bytes(&rows)?)?;
        out.write(&run.out_dir.join(format!("{label}.json")), &json_bytes(&rows)?)?;
        let at95 = c.delay_to_fraction(95, 100);
        println!(
            "{:<32} {:>7} {:>16} {:>6} {:>16}",
            label,
            c.points.len(),
            format!("{:.2} Mbps", mbps(c.max_goodput())),
            c.max_point().map_or(0, |p| p.n),
            format!("{:.3} ms", at95.map_or(0.0, |p| p.system_delay.as_millis_f64()))
        );
    }
    let report = comparison(&curves);
    for g in &report.delayed_ack_gains {
        println!(
            "delayed-ack gain {} S={} MCS{} {} B: {:.2}% ({:.2} -> {:.2} Mbps)",
            g.strategy, g.stations, g.mcs, g.seg_bytes, g.gain_pct, g.max_without_mbps, g.max_with_mbps
        );
    }
    out.write(&run.out_dir.join("comparison.json"), &json_bytes(&report)?)?;
    let manifest = out.finish(&run.out_dir.join("manifest.json"))?;
    if let Some(m) = manifest {
        println!("wrote {} curve(s) and {}", curves.len(), m.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct TableRow {
    mode: Mode,
    stations: u32,
    mcs: u8,
    available: bool,
    r_ul_mbps: Option<f64>,
    pr_ul_us: Option<f64>,
    r_dl_mbps: Option<f64>,
    pr_dl_us: Option<f64>,
    r_leg_mbps: Option<f64>,
    pr_leg_us: Option<f64>,
    tsym_dl_us: Option<f64>,
    tsym_ul_us: Option<f64>,
}

fn export_tables(format: TableFormat, out: Option<PathBuf>) -> anyhow::Result<()> {
    let rows: Vec<TableRow> = all_table_cells()
        .into_iter()
        .map(|(mode, stations, mcs, p)| {
            let p = p.ok();
            TableRow {
                mode,
                stations,
                mcs,
                available: p.is_some(),
                r_ul_mbps: p.map(|p| p.r_ul.as_mbps_f64()),
                pr_ul_us: p.map(|p| p.pr_data_ul.as_micros_f64()),
                r_dl_mbps: p.map(|p| p.r_dl.as_mbps_f64()),
                pr_dl_us: p.map(|p| p.pr_data_dl.as_micros_f64()),
                r_leg_mbps: p.map(|p| p.r_leg.as_mbps_f64()),
                pr_leg_us: p.map(|p| p.pr_legacy.as_micros_f64()),
                tsym_dl_us: p.map(|p| p.tsym_dl.as_micros_f64()),
                tsym_ul_us: p.map(|p| p.tsym_ul.as_micros_f64()),
            }
        })
        .collect();
    let bytes = match format {
        TableFormat::Csv => csv_bytes(&rows)?,
        TableFormat::Json => json_bytes(&rows)?,
    };
    match out {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
        Some(path) => {
            let mut set = OutputSet::new(RunManifest::new(serde_json::Value::Null, "n/a".into()));
            set.write(&path, &bytes)?;
            set.finish(&manifest_path_for(Path::new(&path)))?;
        }
    }
    Ok(())
}
