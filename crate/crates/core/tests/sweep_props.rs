use ax_goodput::analytic::{evaluate, Scenario, Strategy};
use ax_goodput::phy_tables::symbols_for_bits_in;
use ax_goodput::phy_tables::{lookup_profile, symbols_for_bits, Mode};
use ax_goodput::sweep::{
    build_curve, compare_curves, dedup_points, delayed_ack_gain, evaluate_point, n_grid, SimSweep,
    SweepOptions,
};
use ax_goodput::{Duration, Exact, Scalar};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;

fn template(strategy: Strategy, s: u32, mcs: u8, seg: u64) -> Scenario {
    Scenario::new(strategy, s, mcs, seg, 1).unwrap()
}

#[test]
fn su_rd_curve_rises_and_saturates() {
    let t = template(Strategy::SuRd, 1, 11, 1460);
    let c = build_curve::<Exact>(&t, &SweepOptions::default()).unwrap();
    assert_eq!(c.evaluated, 45_568);
    // N = 1..5 share one data symbol; the largest of them survives
    assert_eq!(c.points[0].n, 5);
    assert_eq!(c.points[0].cycle_length, evaluate(&t.with_n(1)).unwrap().total);
    assert!(c.points.windows(2).all(|w| w[0].goodput < w[1].goodput));
    // the last tenth of the delay range adds little
    let max = c.max_goodput().to_f64();
    let late = c.goodput_at(Duration::from_ticks(c.points.last().unwrap().system_delay.ticks() * 9 / 10)).to_f64();
    assert!(late > 0.95 * max);
}

#[test]
fn stored_points_reproduce_on_re_evaluation() {
    let t = template(Strategy::Mu, 8, 5, 464).with_delayed_acks(true);
    let opts = SweepOptions { stride: 97, ..Default::default() };
    let c = build_curve::<Exact>(&t, &opts).unwrap();
    for p in &c.points {
        let b = evaluate(&t.with_n(p.n)).unwrap();
        assert_eq!(p.goodput, b.goodput_bps::<Exact>());
        assert_eq!(p.cycle_length, b.total);
        assert_eq!(p.system_delay, b.total);
    }
}

#[test]
fn stride_keeps_endpoints() {
    let t = template(Strategy::SuRd, 4, 11, 1460);
    let opts = SweepOptions { stride: 64, ..Default::default() };
    let c = build_curve::<Exact>(&t, &opts).unwrap();
    assert_eq!(c.evaluated, n_grid(45_568, 64).len() as u64);
    assert_eq!(*n_grid(45_568, 64).last().unwrap(), 45_568);
}

#[test]
fn su_system_delay_is_s_times_cycle() {
    let t = template(Strategy::SuRd, 16, 7, 1460);
    let c = build_curve::<f64>(&t, &SweepOptions { stride: 500, ..Default::default() }).unwrap();
    for p in &c.points {
        assert_eq!(p.system_delay, p.cycle_length * 16);
    }
}

#[test]
fn contention_curve_uses_simulator() {
    let t = template(Strategy::SuContention, 4, 11, 1460);
    let opts = SweepOptions {
        stride: 9000,
        sim: SimSweep { seed: 3, warmup_cycles: 10, measured_cycles: 200 },
    };
    let c = build_curve::<f64>(&t, &opts).unwrap();
    assert!(!c.points.is_empty());
    assert!(c.points.windows(2).all(|w| w[0].goodput < w[1].goodput));
    let again = evaluate_point::<f64>(&t, c.points[0].n, &opts.sim).unwrap();
    assert_eq!(again, c.points[0]);
}

#[test]
fn delayed_ack_gain_report() {
    let t = template(Strategy::Mu, 4, 11, 208);
    let g = delayed_ack_gain::<Exact>(&t, &SweepOptions { stride: 16, ..Default::default() }).unwrap();
    assert_eq!(g.cap_with, 2 * g.cap_without);
    assert!(g.gain > Exact::from_ratio(10, 100));
    assert!(!g.matched.is_empty());
}

#[test]
fn comparison_report_names_both_curves() {
    let opts = SweepOptions { stride: 128, ..Default::default() };
    let su = build_curve::<Exact>(&template(Strategy::SuRd, 4, 11, 1460), &opts).unwrap();
    let mu = build_curve::<Exact>(&template(Strategy::Mu, 4, 11, 1460), &opts).unwrap();
    let r = compare_curves(&[("su-rd", &su), ("mu", &mu)]);
    assert_eq!(r.curves.len(), 2);
    assert_eq!(r.pairwise.len(), 1);
    let iv = &r.pairwise[0].intervals;
    assert!(iv.windows(2).all(|w| w[0].to == Some(w[1].from) && w[0].leader != w[1].leader));
    assert_eq!(iv.last().unwrap().to, None);
    // MU leads at the shortest delays
    assert_eq!(iv[0].leader.as_deref(), Some("mu"));
}

#[test]
fn float_and_exact_goodput_agree() {
    let scn = template(Strategy::Mu, 16, 9, 1460).with_n(300);
    let b = evaluate(&scn).unwrap();
    let exact = b.goodput_bps::<Exact>().to_f64();
    assert!((b.goodput_bps::<f64>() - exact).abs() / exact < 1e-12);
    assert!((b.goodput_bps::<f32>() as f64 - exact).abs() / exact < 1e-6);
}

#[test]
fn scalar_symbol_counts_agree_with_integer_path() {
    let p = lookup_profile(Mode::Su, 1, 11).unwrap();
    for bits in [1u64, 22, 65_333, 65_334, 1_000_000, 33_000_000] {
        let int = symbols_for_bits(bits, p.r_dl, p.tsym_dl);
        let exact: Exact = symbols_for_bits_in(bits, p.r_dl, p.tsym_dl);
        assert_eq!(exact, Exact::from_integer(int as i128));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn curve_is_order_independent(order in Just((1..=74u64).collect::<Vec<_>>()).prop_shuffle()) {
        let t = template(Strategy::Mu, 64, 1, 1460);
        let sim = SimSweep::default();
        let pts: Vec<_> = order.iter().map(|&n| evaluate_point::<Exact>(&t, n, &sim).unwrap()).collect();
        let sorted: Vec<_> = (1..=74).map(|n| evaluate_point::<Exact>(&t, n, &sim).unwrap()).collect();
        prop_assert_eq!(dedup_points(pts, false), dedup_points(sorted, false));
    }
}
