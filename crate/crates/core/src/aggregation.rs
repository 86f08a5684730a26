//! Two-level aggregation: packing N data MSDUs into MPDUs and A-MPDUs.
//!
//! An A-MPDU is constrained by the PPDU time limit, the A-MPDU byte limit
//! and the Block-Ack window. For a fixed PHY profile the first two are
//! both linear in (MPDU count, MSDU count), so they collapse into a single
//! PSDU byte budget ([`PpduBudget`]); everything else is derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::phy_tables::{Duration, McsProfile, SegmentProfile, PROTOCOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Dl,
    Ul,
}

/// Linear feasibility test for one A-MPDU.
///
/// An A-MPDU with `k` MPDUs holding `n` MSDUs fits iff `k <= max_mpdus`
/// and `n * msdu_bytes + k * mpdu_overhead_bytes <= max_psdu_bytes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpduBudget {
    pub msdu_bytes: u64,
    pub mpdu_overhead_bytes: u64,
    pub max_psdu_bytes: u64,
    pub max_mpdus: u64,
}

impl PpduBudget {
    /// Budget of a PPDU sent with `profile` in `direction`.
    pub fn for_profile(
        profile: &McsProfile,
        direction: Direction,
        msdu_bytes: u64,
        mpdu_overhead_bytes: u64,
    ) -> Self {
        let (rate, tsym, preamble) = match direction {
            Direction::Dl => (profile.r_dl, profile.tsym_dl, profile.pr_data_dl),
            Direction::Ul => (profile.r_ul, profile.tsym_ul, profile.pr_data_ul),
        };
        let symbols = PROTOCOL.max_ppdu_time.saturating_sub(preamble).ticks() / tsym.ticks();
        let capacity_millibits = symbols * rate.millibits_per_symbol(tsym);
        // bytes * 8 + 22 <= capacity / 1000, kept in integers
        let service = PROTOCOL.service_tail_bits * 1000;
        let time_bytes = capacity_millibits.saturating_sub(service) / 8000;
        PpduBudget {
            msdu_bytes,
            mpdu_overhead_bytes,
            max_psdu_bytes: time_bytes.min(PROTOCOL.max_ampdu_bytes),
            max_mpdus: PROTOCOL.max_mpdus_per_ampdu,
        }
    }

    pub fn psdu_bytes(&self, mpdus: u64, msdus: u64) -> u64 {
        msdus * self.msdu_bytes + mpdus * self.mpdu_overhead_bytes
    }

    pub fn fits(&self, mpdus: u64, msdus: u64) -> bool {
        mpdus <= self.max_mpdus && self.psdu_bytes(mpdus, msdus) <= self.max_psdu_bytes
    }

    /// Most MSDUs that fit in `mpdus` MPDUs, ignoring the per-MPDU cap.
    fn msdu_room(&self, mpdus: u64) -> Option<u64> {
        let used = mpdus * self.mpdu_overhead_bytes;
        (mpdus <= self.max_mpdus && used <= self.max_psdu_bytes)
            .then(|| (self.max_psdu_bytes - used) / self.msdu_bytes)
    }
}

/// Capacity figures of one A-MPDU for a given profile and segment size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationLimits {
    /// MSDUs per full MPDU.
    pub a_data: u64,
    /// Full MPDUs per A-MPDU.
    pub f_data: u64,
    /// MSDUs in a full A-MPDU (F-construction).
    pub full_ampdu_msdus: u64,
    /// Largest partial MPDU that still fits next to `f_data` full MPDUs.
    pub partial_top_up: u64,
    pub budget: PpduBudget,
}

impl AggregationLimits {
    /// Derives the limits from a budget and the per-MPDU MSDU cap.
    ///
    /// When a single MPDU of `max_msdus_per_mpdu` MSDUs does not fit in one
    /// PPDU, `a_data` shrinks to what does fit.
    pub fn from_budget(budget: PpduBudget, max_msdus_per_mpdu: u64) -> Result<Self> {
        let zero = ModelError::ZeroCapacity {
            limit: PROTOCOL.max_ppdu_time,
        };
        let single = budget.msdu_room(1).ok_or(zero.clone())?;
        let a_data = max_msdus_per_mpdu.min(single);
        if a_data == 0 {
            return Err(zero);
        }
        let full_mpdu_bytes = a_data * budget.msdu_bytes + budget.mpdu_overhead_bytes;
        let f_data = (budget.max_psdu_bytes / full_mpdu_bytes).min(budget.max_mpdus);
        debug_assert!(f_data >= 1);
        let partial_top_up = if f_data == budget.max_mpdus {
            0
        } else {
            budget
                .msdu_room(f_data + 1)
                .map(|room| room.saturating_sub(f_data * a_data).min(a_data - 1))
                .unwrap_or(0)
        };
        Ok(AggregationLimits {
            a_data,
            f_data,
            full_ampdu_msdus: a_data * f_data + partial_top_up,
            partial_top_up,
            budget,
        })
    }

    /// Fewest MPDUs that can hold `n` MSDUs.
    pub fn x_min(&self, n: u64) -> u64 {
        n.div_ceil(self.a_data)
    }

    /// Most A-MPDUs worth using: every MPDU full, A-MPDUs filled with full MPDUs.
    pub fn x_upper(&self, n: u64) -> u64 {
        self.x_min(n).div_ceil(self.f_data)
    }

    /// Fewest A-MPDUs that can hold `n` MSDUs.
    pub fn x_lower(&self, n: u64) -> u64 {
        n.div_ceil(self.full_ampdu_msdus)
    }
}

/// Derives the A-MPDU limits for data MSDUs of `seg` sent with `profile`.
///
/// `mu_per_mpdu_extra` is the extra per-MPDU overhead: 0 in SU, the 4-byte
/// HE control element in MU.
pub fn compute_limits(
    profile: &McsProfile,
    seg: &SegmentProfile,
    direction: Direction,
    mu_per_mpdu_extra: u64,
) -> Result<AggregationLimits> {
    let budget = PpduBudget::for_profile(
        profile,
        direction,
        seg.len_d,
        PROTOCOL.o_m_bytes + mu_per_mpdu_extra,
    );
    AggregationLimits::from_budget(budget, seg.msdus_per_mpdu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmpduEntry {
    pub mpdus: u64,
    pub msdus: u64,
}

/// Ordered A-MPDUs of one TXOP.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AmpduSchedule {
    pub entries: Vec<AmpduEntry>,
}

impl AmpduSchedule {
    pub fn n_total(&self) -> u64 {
        self.entries.iter().map(|e| e.msdus).sum()
    }

    pub fn x(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn total_mpdus(&self) -> u64 {
        self.entries.iter().map(|e| e.mpdus).sum()
    }

    /// Consecutive runs of identical entries as `(entry, count)`.
    pub fn runs(&self) -> Vec<(AmpduEntry, u64)> {
        let mut runs: Vec<(AmpduEntry, u64)> = Vec::new();
        for e in &self.entries {
            match runs.last_mut() {
                Some((last, count)) if last == e => *count += 1,
                _ => runs.push((*e, 1)),
            }
        }
        runs
    }

    /// Checks the structural invariants against `limits`.
    pub fn is_valid(&self, limits: &AggregationLimits) -> bool {
        self.entries.iter().all(|e| {
            e.mpdus >= 1
                && e.msdus >= e.mpdus
                && e.msdus <= e.mpdus * limits.a_data
                && limits.budget.fits(e.mpdus, e.msdus)
        })
    }
}

/// Scheduling α: the minimum-MPDU placement of `n` MSDUs into `x` A-MPDUs.
pub fn schedule_alpha(n: u64, x: u64, limits: &AggregationLimits) -> Result<AmpduSchedule> {
    if n == 0 {
        return Err(ModelError::InvalidScenario("no MSDUs to schedule".into()));
    }
    let (lower, upper) = (limits.x_lower(n), limits.x_upper(n));
    if x < lower || x > upper {
        return Err(ModelError::InfeasibleX { n, x, lower, upper });
    }
    let a = limits.a_data;
    let f = limits.f_data;
    let full = AmpduEntry {
        mpdus: f,
        msdus: f * a,
    };
    let mut entries = vec![full; x as usize];

    if x == upper {
        let rest = n - (x - 1) * f * a;
        entries[x as usize - 1] = AmpduEntry {
            mpdus: rest.div_ceil(a),
            msdus: rest,
        };
    } else {
        // x < x_upper implies x * f < ceil(n / a), hence x * f * a < n.
        let remaining = n - x * f * a;
        debug_assert!(remaining > 0 && limits.partial_top_up > 0);
        let top = limits.partial_top_up;
        let partials = remaining.div_ceil(top);
        for (i, entry) in entries.iter_mut().take(partials as usize).enumerate() {
            let size = if (i as u64) + 1 < partials {
                top
            } else {
                remaining - (partials - 1) * top
            };
            entry.mpdus += 1;
            entry.msdus += size;
        }
    }
    Ok(AmpduSchedule { entries })
}

/// Best schedule for `n` MSDUs under `cycle_cost`, with its cost.
///
/// Every A-MPDU count between `x_lower` and `x_upper` is tried with
/// scheduling α; ties go to the smaller count.
pub fn optimal_schedule_costed<F>(
    n: u64,
    limits: &AggregationLimits,
    mut cycle_cost: F,
) -> Result<(AmpduSchedule, Duration)>
where
    F: FnMut(&AmpduSchedule) -> Result<Duration>,
{
    if n == 0 {
        return Err(ModelError::InvalidScenario("no MSDUs to schedule".into()));
    }
    let mut best: Option<(AmpduSchedule, Duration)> = None;
    for x in limits.x_lower(n)..=limits.x_upper(n) {
        let schedule = schedule_alpha(n, x, limits)?;
        let cost = cycle_cost(&schedule)?;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((schedule, cost));
        }
    }
    Ok(best.expect("x_lower <= x_upper"))
}

pub fn optimal_schedule<F>(n: u64, limits: &AggregationLimits, cycle_cost: F) -> Result<AmpduSchedule>
where
    F: FnMut(&AmpduSchedule) -> Result<Duration>,
{
    optimal_schedule_costed(n, limits, cycle_cost).map(|(s, _)| s)
}

pub mod oracle {
    //! Exhaustive minimum-MPDU search, used to check scheduling α.

    use std::collections::HashMap;

    use super::AggregationLimits;
    use crate::error::{ModelError, Result};

    /// Upper bound on `a_data * f_data * x` for [`oracle_min_mpdus`].
    pub const EXHAUSTIVE_GUARD: u64 = 64;

    /// Fewest MPDUs over every placement of `n` MSDUs into exactly `x`
    /// non-empty A-MPDUs.
    ///
    /// Each A-MPDU is enumerated as every `(mpdus, msdus)` pair the budget
    /// admits with `mpdus <= msdus <= mpdus * a_data`; any such pair can be
    /// realised by some split of the MSDUs across its MPDUs.
    pub fn oracle_min_mpdus(n: u64, x: u64, limits: &AggregationLimits) -> Result<u64> {
        let (a, f) = (limits.a_data, limits.f_data);
        if a * f * x > EXHAUSTIVE_GUARD {
            return Err(ModelError::TooLarge {
                a_data: a,
                f_data: f,
                x,
                guard: EXHAUSTIVE_GUARD,
            });
        }
        let budget = limits.budget;
        let mut options = Vec::new();
        for mpdus in 1..=budget.max_mpdus.min(n) {
            for msdus in mpdus..=(mpdus * a).min(n) {
                if budget.fits(mpdus, msdus) {
                    options.push((mpdus, msdus));
                }
            }
        }
        let mut memo = HashMap::new();
        search(n, x, &options, &mut memo).ok_or(ModelError::InfeasibleX {
            n,
            x,
            lower: limits.x_lower(n),
            upper: limits.x_upper(n),
        })
    }

    fn search(
        n: u64,
        x: u64,
        options: &[(u64, u64)],
        memo: &mut HashMap<(u64, u64), Option<u64>>,
    ) -> Option<u64> {
        if x == 0 {
            return (n == 0).then_some(0);
        }
        if let Some(&hit) = memo.get(&(n, x)) {
            return hit;
        }
        let best = options
            .iter()
            .filter(|&&(_, msdus)| msdus <= n)
            .filter_map(|&(mpdus, msdus)| search(n - msdus, x - 1, options, memo).map(|r| r + mpdus))
            .min();
        memo.insert((n, x), best);
        best
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::oracle_min_mpdus;
    use super::*;
    use crate::phy_tables::{lookup_profile, Mode};

    /// a_data = 3, f_data = 2, partial_top_up = 2: three full MPDUs cost 93 > 85,
    /// two full plus a two-MSDU MPDU cost 83.
    fn synthetic() -> AggregationLimits {
        let budget = PpduBudget {
            msdu_bytes: 10,
            mpdu_overhead_bytes: 1,
            max_psdu_bytes: 85,
            max_mpdus: 256,
        };
        AggregationLimits::from_budget(budget, 3).unwrap()
    }

    #[test]
    fn synthetic_limits() {
        let l = synthetic();
        assert_eq!((l.a_data, l.f_data, l.partial_top_up, l.full_ampdu_msdus), (3, 2, 2, 8));
    }

    #[test]
    fn su_mcs11_limits_are_window_capped() {
        let p = lookup_profile(Mode::Su, 1, 11).unwrap();
        let seg = SegmentProfile::for_payload(1460).unwrap();
        let l = compute_limits(&p, &seg, Direction::Dl, 0).unwrap();
        assert_eq!((l.a_data, l.f_data, l.partial_top_up, l.full_ampdu_msdus), (7, 256, 0, 1792));
    }

    #[test]
    fn su_mcs1_limits_are_time_capped() {
        let p = lookup_profile(Mode::Su, 1, 1).unwrap();
        let seg = SegmentProfile::for_payload(1460).unwrap();
        let l = compute_limits(&p, &seg, Direction::Dl, 0).unwrap();
        assert_eq!((l.a_data, l.f_data, l.partial_top_up, l.full_ampdu_msdus), (7, 36, 3, 255));
    }

    #[test]
    fn low_rate_mu_shrinks_msdus_per_mpdu() {
        let p = lookup_profile(Mode::Mu, 64, 1).unwrap();
        let seg = SegmentProfile::for_payload(1460).unwrap();
        let l = compute_limits(&p, &seg, Direction::Dl, 4).unwrap();
        assert!(l.a_data < seg.msdus_per_mpdu);
        assert_eq!(l.f_data, 1);
        assert_eq!(l.partial_top_up, 0);
    }

    #[test]
    fn zero_capacity() {
        let budget = PpduBudget {
            msdu_bytes: 1524,
            mpdu_overhead_bytes: 40,
            max_psdu_bytes: 1500,
            max_mpdus: 256,
        };
        assert!(matches!(
            AggregationLimits::from_budget(budget, 7),
            Err(ModelError::ZeroCapacity { .. })
        ));
    }

    #[test]
    fn alpha_single_full_mpdu() {
        let p = lookup_profile(Mode::Su, 1, 11).unwrap();
        let seg = SegmentProfile::for_payload(1460).unwrap();
        let l = compute_limits(&p, &seg, Direction::Dl, 0).unwrap();
        let s = schedule_alpha(7, 1, &l).unwrap();
        assert_eq!(s.entries, vec![AmpduEntry { mpdus: 1, msdus: 7 }]);
    }

    #[test]
    fn alpha_synthetic_two_ampdus() {
        let l = synthetic();
        // x_lower = 2, x_upper = 3
        let s = schedule_alpha(14, 2, &l).unwrap();
        assert_eq!(
            s.entries,
            vec![AmpduEntry { mpdus: 3, msdus: 8 }, AmpduEntry { mpdus: 2, msdus: 6 }]
        );
        assert_eq!(s.total_mpdus(), 5);
        assert!(s.is_valid(&l));

        let up = schedule_alpha(14, 3, &l).unwrap();
        assert_eq!(up.total_mpdus(), 5);
        assert_eq!(up.n_total(), 14);
    }

    #[test]
    fn alpha_rejects_out_of_range() {
        let l = synthetic();
        assert!(matches!(schedule_alpha(14, 1, &l), Err(ModelError::InfeasibleX { .. })));
        assert!(matches!(schedule_alpha(14, 4, &l), Err(ModelError::InfeasibleX { .. })));
        assert!(schedule_alpha(0, 1, &l).is_err());
    }

    #[test]
    fn oracle_examples() {
        let l = synthetic();
        assert_eq!(oracle_min_mpdus(6, 1, &l).unwrap(), 2);
        assert_eq!(oracle_min_mpdus(7, 2, &l).unwrap(), 3);
        assert_eq!(oracle_min_mpdus(14, 2, &l).unwrap(), 5);
        assert!(matches!(oracle_min_mpdus(14, 11, &l), Err(ModelError::TooLarge { .. })));
        assert!(matches!(oracle_min_mpdus(17, 2, &l), Err(ModelError::InfeasibleX { .. })));
    }

    #[test]
    fn optimal_prefers_fewer_ampdus_on_ties() {
        let l = synthetic();
        let s = optimal_schedule(14, &l, |_| Ok(Duration::from_micros(1))).unwrap();
        assert_eq!(s.x(), 2);
        // a cost that charges only per MPDU still picks the smaller x
        let s = optimal_schedule(14, &l, |s| Ok(Duration::from_micros(s.total_mpdus()))).unwrap();
        assert_eq!(s.x(), 2);
        // charging per A-MPDU negatively favours more A-MPDUs
        let s = optimal_schedule(14, &l, |s| Ok(Duration::from_micros(10 - s.x()))).unwrap();
        assert_eq!(s.x(), 3);
    }

    #[test]
    fn optimal_single_full_ampdu() {
        let p = lookup_profile(Mode::Su, 1, 11).unwrap();
        let seg = SegmentProfile::for_payload(1460).unwrap();
        let l = compute_limits(&p, &seg, Direction::Dl, 0).unwrap();
        let s = optimal_schedule(1792, &l, |s| Ok(Duration::from_micros(s.x()))).unwrap();
        assert_eq!(s.entries, vec![AmpduEntry { mpdus: 256, msdus: 1792 }]);
        let s = optimal_schedule(7, &l, |s| Ok(Duration::from_micros(s.x()))).unwrap();
        assert_eq!(s.entries, vec![AmpduEntry { mpdus: 1, msdus: 7 }]);
    }

    #[test]
    fn runs_group_identical_entries() {
        let l = synthetic();
        let s = schedule_alpha(20, 3, &l).unwrap();
        let runs = s.runs();
        assert_eq!(runs.iter().map(|(_, c)| c).sum::<u64>(), s.x());
    }
}
