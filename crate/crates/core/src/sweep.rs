//! Goodput-vs-delay curves over the per-TXOP segment count N.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{evaluate, Scenario, Strategy};
use crate::edca_sim::{run_strategy2, SimConfig};
use crate::error::{ModelError, Result};
use crate::phy_tables::{Duration, Mode};
use crate::scalar::Scalar;

/// One (N, cycle length, goodput) operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoodputPoint<S> {
    pub n: u64,
    pub cycle_length: Duration,
    /// Bits per second, all stations.
    pub goodput: S,
    /// `S * cycle_length` for SU strategies, `cycle_length` for MU.
    pub system_delay: Duration,
    pub delayed_acks: bool,
}

/// Simulator settings used for contention-based points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimSweep {
    pub seed: u64,
    pub warmup_cycles: u64,
    pub measured_cycles: u64,
}

impl Default for SimSweep {
    fn default() -> Self {
        SimSweep {
            seed: 1,
            warmup_cycles: SimConfig::DEFAULT_WARMUP,
            measured_cycles: SimConfig::DEFAULT_MEASURED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepOptions {
    /// Evaluate every `stride`-th N; 1 and the cap are always included.
    pub stride: u64,
    pub sim: SimSweep,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            stride: 1,
            sim: SimSweep::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve<S> {
    pub template: Scenario,
    /// How many N values were evaluated before filtering.
    pub evaluated: u64,
    pub points: Vec<GoodputPoint<S>>,
}

/// Relative goodput margin a simulated point must beat to survive dedup.
pub const STOCHASTIC_DEDUP_TOLERANCE: (i128, i128) = (1, 1000);

/// N values visited for `cap` and `stride`, ascending.
pub fn n_grid(cap: u64, stride: u64) -> Vec<u64> {
    if cap == 0 {
        return Vec::new();
    }
    let stride = stride.max(1);
    let mut ns: Vec<u64> = (1..=cap).step_by(stride as usize).collect();
    if ns.last() != Some(&cap) {
        ns.push(cap);
    }
    ns
}

pub fn system_delay(strategy: Strategy, stations: u32, cycle_length: Duration) -> Duration {
    match strategy.mode() {
        Mode::Su => cycle_length * stations as u64,
        Mode::Mu => cycle_length,
    }
}

/// Evaluates one N of `template`.
pub fn evaluate_point<S: Scalar>(
    template: &Scenario,
    n: u64,
    sim: &SimSweep,
) -> Result<GoodputPoint<S>> {
    let scn = template.with_n(n);
    let (cycle_length, goodput) = match scn.strategy {
        Strategy::SuContention => {
            let cfg = SimConfig::new(scn, sim.seed).with_cycles(sim.warmup_cycles, sim.measured_cycles);
            let out = run_strategy2(&cfg)?;
            (out.mean_cycle_length, out.goodput_bps::<S>())
        }
        _ => {
            let b = evaluate(&scn)?;
            (b.total, b.goodput_bps::<S>())
        }
    };
    Ok(GoodputPoint {
        n,
        cycle_length,
        goodput,
        system_delay: system_delay(scn.strategy, scn.stations, cycle_length),
        delayed_acks: scn.delayed_acks,
    })
}

/// Keeps, in order of cycle length, only points that raise the best goodput
/// seen so far.
pub fn dedup_points<S: Scalar>(mut points: Vec<GoodputPoint<S>>, stochastic: bool) -> Vec<GoodputPoint<S>> {
    points.sort_by(|a, b| {
        a.cycle_length
            .cmp(&b.cycle_length)
            .then(b.goodput.partial_cmp(&a.goodput).expect("goodput is not NaN"))
            .then(a.n.cmp(&b.n))
    });
    let margin = if stochastic {
        let (num, den) = STOCHASTIC_DEDUP_TOLERANCE;
        S::one() + S::from_ratio(num, den)
    } else {
        S::one()
    };
    let mut out: Vec<GoodputPoint<S>> = Vec::new();
    for p in points {
        let keep = match out.last() {
            None => true,
            Some(best) => p.cycle_length > best.cycle_length && p.goodput > best.goodput * margin,
        };
        if keep {
            out.push(p);
        }
    }
    out
}

/// Goodput-vs-delay curve of `template` over N = 1..cap.
pub fn build_curve<S: Scalar>(template: &Scenario, opts: &SweepOptions) -> Result<Curve<S>> {
    let cap = template.n_cap()?;
    let ns = n_grid(cap, opts.stride);
    if ns.is_empty() {
        return Err(ModelError::EmptyCurve);
    }
    let points = ns
        .par_iter()
        .map(|&n| evaluate_point::<S>(template, n, &opts.sim))
        .collect::<Result<Vec<_>>>()?;
    let evaluated = points.len() as u64;
    let points = dedup_points(points, template.strategy == Strategy::SuContention);
    Ok(Curve {
        template: *template,
        evaluated,
        points,
    })
}

impl<S: Scalar> Curve<S> {
    pub fn max_point(&self) -> Option<&GoodputPoint<S>> {
        // dedup leaves goodput increasing
        self.points.last()
    }

    pub fn max_goodput(&self) -> S {
        self.max_point().map_or(S::zero(), |p| p.goodput)
    }

    /// First point reaching `num/den` of the curve's maximum goodput.
    pub fn delay_to_fraction(&self, num: i128, den: i128) -> Option<&GoodputPoint<S>> {
        let target = self.max_goodput() * S::from_ratio(num, den);
        self.points.iter().find(|p| p.goodput >= target)
    }

    /// Best goodput available within `delay`; zero before the first point.
    pub fn goodput_at(&self, delay: Duration) -> S {
        let idx = self.points.partition_point(|p| p.system_delay <= delay);
        if idx == 0 {
            S::zero()
        } else {
            self.points[idx - 1].goodput
        }
    }

    pub fn rows(&self) -> Vec<CurveRow> {
        self.points
            .iter()
            .map(|p| CurveRow::new(&self.template, p))
            .collect()
    }
}

/// Flat, unit-suffixed record for CSV/JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub n: u64,
    pub cycle_length_us: f64,
    pub goodput_mbps: f64,
    pub system_delay_ms: f64,
    pub strategy: Strategy,
    pub s: u32,
    pub mcs: u8,
    pub seg_bytes: u64,
    pub delayed_acks: bool,
}

impl CurveRow {
    pub fn new<S: Scalar>(template: &Scenario, p: &GoodputPoint<S>) -> Self {
        CurveRow {
            n: p.n,
            cycle_length_us: p.cycle_length.as_micros_f64(),
            goodput_mbps: round_centi(p.goodput.to_f64() / 1e6),
            system_delay_ms: p.system_delay.as_millis_f64(),
            strategy: template.strategy,
            s: template.stations,
            mcs: template.mcs,
            seg_bytes: template.segment.l_data,
            delayed_acks: p.delayed_acks,
        }
    }
}

pub fn round_centi(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary<S> {
    pub name: String,
    pub max_goodput: S,
    pub max_goodput_n: u64,
    /// System delay at which the curve first reaches 95% of its maximum.
    pub delay_to_95: Duration,
    pub n_at_95: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceInterval {
    pub from: Duration,
    /// `None` extends to unbounded delay.
    pub to: Option<Duration>,
    /// Name of the higher curve, `None` on a tie.
    pub leader: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub a: String,
    pub b: String,
    pub intervals: Vec<DominanceInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport<S> {
    pub curves: Vec<CurveSummary<S>>,
    pub pairwise: Vec<Dominance>,
}

fn summarize<S: Scalar>(name: &str, curve: &Curve<S>) -> CurveSummary<S> {
    let max = curve.max_point();
    let at95 = curve.delay_to_fraction(95, 100);
    CurveSummary {
        name: name.to_string(),
        max_goodput: curve.max_goodput(),
        max_goodput_n: max.map_or(0, |p| p.n),
        delay_to_95: at95.map_or(Duration::ZERO, |p| p.system_delay),
        n_at_95: at95.map_or(0, |p| p.n),
    }
}

fn dominance<S: Scalar>(a: (&str, &Curve<S>), b: (&str, &Curve<S>)) -> Dominance {
    let mut breaks: Vec<Duration> = a
        .1
        .points
        .iter()
        .chain(&b.1.points)
        .map(|p| p.system_delay)
        .collect();
    breaks.sort();
    breaks.dedup();

    let mut intervals: Vec<DominanceInterval> = Vec::new();
    for (k, &from) in breaks.iter().enumerate() {
        let (ga, gb) = (a.1.goodput_at(from), b.1.goodput_at(from));
        let leader = if ga > gb {
            Some(a.0.to_string())
        } else if gb > ga {
            Some(b.0.to_string())
        } else {
            None
        };
        let to = breaks.get(k + 1).copied();
        match intervals.last_mut() {
            Some(last) if last.leader == leader => last.to = to,
            _ => intervals.push(DominanceInterval { from, to, leader }),
        }
    }
    Dominance {
        a: a.0.to_string(),
        b: b.0.to_string(),
        intervals,
    }
}

/// Maximum goodput, delay to 95% of it, and pairwise dominance intervals
/// over system delay.
pub fn compare_curves<S: Scalar>(curves: &[(&str, &Curve<S>)]) -> ComparisonReport<S> {
    let summaries = curves.iter().map(|&(n, c)| summarize(n, c)).collect();
    let mut pairwise = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            pairwise.push(dominance(curves[i], curves[j]));
        }
    }
    ComparisonReport {
        curves: summaries,
        pairwise,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedGain<S> {
    pub system_delay: Duration,
    pub gain: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayedAckGain<S> {
    pub max_without: S,
    pub max_with: S,
    /// `(max_with - max_without) / max_without`.
    pub gain: S,
    pub cap_without: u64,
    pub cap_with: u64,
    /// Relative gain at every delay of the curve without delayed acks.
    pub matched: Vec<MatchedGain<S>>,
}

/// Compares `template` with and without delayed acks.
pub fn delayed_ack_gain<S: Scalar>(template: &Scenario, opts: &SweepOptions) -> Result<DelayedAckGain<S>> {
    let without = build_curve::<S>(&template.with_delayed_acks(false), opts)?;
    let with = build_curve::<S>(&template.with_delayed_acks(true), opts)?;
    Ok(gain_between(&without, &with))
}

pub fn gain_between<S: Scalar>(without: &Curve<S>, with: &Curve<S>) -> DelayedAckGain<S> {
    let (max_without, max_with) = (without.max_goodput(), with.max_goodput());
    let matched = without
        .points
        .iter()
        .map(|p| MatchedGain {
            system_delay: p.system_delay,
            gain: (with.goodput_at(p.system_delay) - p.goodput) / p.goodput,
        })
        .collect();
    DelayedAckGain {
        max_without,
        max_with,
        gain: (max_with - max_without) / max_without,
        cap_without: without.template.n_cap().unwrap_or(0),
        cap_with: with.template.n_cap().unwrap_or(0),
        matched,
    }
}
