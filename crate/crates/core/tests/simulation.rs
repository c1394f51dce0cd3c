use proptest::prelude::*;

use sicrate::analysis;
use sicrate::channel::SymmetricChannel;
use sicrate::oracle;
use sicrate::sim::{self, SimConfig};

fn steady_config(sym: SymmetricChannel, period: f64, steps: usize, n_periods: usize) -> SimConfig {
    SimConfig {
        dt: period / steps as f64,
        n_periods,
        include_init: false,
        ..SimConfig::new(sym, period).unwrap()
    }
}

fn period_average(sym: SymmetricChannel, period: f64, steps: usize) -> f64 {
    let traj = sim::simulate(&steady_config(sym, period, steps, 1)).unwrap();
    oracle::time_average(&traj, 1).unwrap()
}

#[test]
fn period_average_does_not_depend_on_period() {
    let sym = SymmetricChannel::new(0.3, 0.7, 4.0).unwrap();
    let base = period_average(sym, 1.0, 1000);
    for period in [0.5, 2.0] {
        assert!((period_average(sym, period, 1000) - base).abs() < 1e-9);
    }
}

#[test]
fn discretization_error_shrinks_with_dt() {
    let sym = SymmetricChannel::new(0.25, 0.55, 6.0).unwrap();
    let exact = analysis::expected_rates(&sym).e_sum;
    let coarse = (period_average(sym, 1.0, 100) - exact).abs();
    let fine = (period_average(sym, 1.0, 10_000) - exact).abs();
    assert!(fine < coarse);
    assert!(fine < 1e-3);
}

#[test]
fn mirrored_channel_has_same_average() {
    let sym = SymmetricChannel::new(0.2, 0.65, 3.0).unwrap();
    let a = period_average(sym, 1.0, 1000);
    let b = period_average(sym.swapped(), 1.0, 1000);
    assert_eq!(a, b);
}

#[test]
fn init_phase_is_excluded_from_average() {
    let sym = SymmetricChannel::new(0.3, 0.7, 4.0).unwrap();
    let with_init = SimConfig {
        include_init: true,
        ..steady_config(sym, 1.0, 1000, 3)
    };
    let without = steady_config(sym, 1.0, 1000, 3);
    let a = oracle::time_average(&sim::simulate(&with_init).unwrap(), 3).unwrap();
    let b = oracle::time_average(&sim::simulate(&without).unwrap(), 3).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simulated_average_matches_closed_form(
        a in 0.01..0.99f64,
        b in 0.01..0.99f64,
        gamma in 0.1..20.0f64,
    ) {
        let sym = SymmetricChannel::new(a, b, gamma).unwrap();
        let cfg = steady_config(sym, 1.0, 1000, 1);
        let traj = sim::simulate(&cfg).unwrap();
        let average = oracle::time_average(&traj, 1).unwrap();
        let expected = analysis::expected_rates(&sym).e_sum;
        prop_assert!((average - expected).abs() <= 5.0 * cfg.dt * traj.landmarks().mv);
    }

    #[test]
    fn every_steady_sample_is_decodable(
        a in 0.01..0.99f64,
        b in 0.01..0.99f64,
        gamma in 0.1..20.0f64,
    ) {
        let sym = SymmetricChannel::new(a, b, gamma).unwrap();
        let traj = sim::simulate(&steady_config(sym, 1.0, 200, 2)).unwrap();
        for s in traj.steady() {
            prop_assert!(s.r1_decoded && s.r2_decoded);
            prop_assert!(s.throughput() <= sicrate::symmetric::optimum_sum_rate(&sym) + 1e-12);
        }
    }
}
