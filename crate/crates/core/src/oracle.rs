//! Brute-force references for the closed-form results: exhaustive grid
//! search over power allocations and numerical time-averaging of simulated
//! trajectories.
//!
//! The grid objective is built from the public capacity functions only and
//! never looks at the candidate sets used by [`crate::centralized`].

use std::f64::consts::LN_2;

use crate::centralized::{Allocation, Strategy};
use crate::channel::{self, ChannelGains, User};
use crate::error::{Error, Result};
use crate::sim::Trajectory;

pub const DEFAULT_GRID_POINTS: usize = 201;
pub const MIN_GRID_POINTS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    n_points: usize,
}

impl GridSpec {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(Error::Precondition(format!(
                "grid needs at least {MIN_GRID_POINTS} points per axis, got {n_points}"
            )));
        }
        Ok(Self { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Grid spacing on the axis `[0, max]`.
    pub fn spacing(&self, max: f64) -> f64 {
        max / (self.n_points - 1) as f64
    }

    /// Axis points from 0 to `max`, both ends exact. A zero-length axis has
    /// a single point.
    pub fn axis(&self, max: f64) -> Vec<f64> {
        if max == 0.0 {
            return vec![0.0];
        }
        let last = self.n_points - 1;
        (0..=last)
            .map(|j| {
                if j == last {
                    max
                } else {
                    j as f64 * max / last as f64
                }
            })
            .collect()
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_points: DEFAULT_GRID_POINTS,
        }
    }
}

/// Largest rates the strategy admits at `(gamma1, gamma2)`.
fn objective(gains: &ChannelGains, strategy: Strategy, gamma1: f64, gamma2: f64) -> (f64, f64) {
    let plain =
        |tx, rx| channel::capacity_with_interference(gains, tx, rx, gamma1, gamma2).unwrap();
    let clean = |u, g| channel::capacity_sic(gains, u, g).unwrap();
    let rate = |u: User, g: f64| {
        // intended receiver: interference-free if it cancels the other user
        let own = if strategy.cancels_at(u) {
            clean(u, g)
        } else {
            plain(u, u)
        };
        // the other receiver must decode this signal before cancelling it
        if strategy.cancels_at(u.other()) {
            own.min(plain(u, u.other()))
        } else {
            own
        }
    };
    (rate(User::One, gamma1), rate(User::Two, gamma2))
}

/// Best allocation on the grid for one strategy. Ties go to the smallest
/// `(gamma1, gamma2)` in lexicographic order.
pub fn grid_optimize(gains: &ChannelGains, strategy: Strategy, spec: GridSpec) -> Allocation {
    let xs = spec.axis(gains.gamma1_max());
    let ys = spec.axis(gains.gamma2_max());
    let mut best: Option<Allocation> = None;
    for &g1 in &xs {
        for &g2 in &ys {
            let (r1, r2) = objective(gains, strategy, g1, g2);
            let sum_rate = r1 + r2;
            if best.is_none_or(|b| sum_rate > b.sum_rate) {
                best = Some(Allocation {
                    strategy,
                    gamma1: g1,
                    gamma2: g2,
                    r1,
                    r2,
                    sum_rate,
                });
            }
        }
    }
    best.expect("grid has at least one point")
}

/// Best grid allocation over all strategies, ties resolved in the order of
/// [`Strategy::ALL`].
pub fn grid_optimize_global(gains: &ChannelGains, spec: GridSpec) -> Allocation {
    Strategy::ALL
        .into_iter()
        .map(|s| grid_optimize(gains, s, spec))
        .reduce(|best, a| if a.sum_rate > best.sum_rate { a } else { best })
        .unwrap()
}

/// Worst-case loss from restricting the optimum to the grid.
///
/// Each capacity term changes by at most `g / ln 2` per unit of SNR of the
/// user behind gain `g`, and the optimum lies within half a spacing of some
/// grid point on each axis.
pub fn lipschitz_tolerance(gains: &ChannelGains, spec: GridSpec) -> f64 {
    let h1 = spec.spacing(gains.gamma1_max());
    let h2 = spec.spacing(gains.gamma2_max());
    let l1 = gains.g11().max(gains.g12());
    let l2 = gains.g21().max(gains.g22());
    // two rate terms, half a spacing each
    (l1 * h1 + l2 * h2) / LN_2
}

/// Trapezoidal average of a periodic signal over `window` whole periods,
/// sampled `steps_per_period` times per period starting at a period
/// boundary.
pub fn periodic_average(values: &[f64], steps_per_period: usize, window: usize) -> Result<f64> {
    if window == 0 || steps_per_period == 0 {
        return Err(Error::Precondition(
            "window and steps per period must be positive".into(),
        ));
    }
    let needed = window * steps_per_period + 1;
    if values.len() < needed {
        return Err(Error::Precondition(format!(
            "averaging {window} periods needs {needed} samples, have {}",
            values.len()
        )));
    }
    let per_period: Vec<f64> = (0..window)
        .map(|p| {
            let seg = &values[p * steps_per_period..=(p + 1) * steps_per_period];
            let area: f64 = seg.windows(2).map(|w| (w[0] + w[1]) / 2.0).sum();
            area / steps_per_period as f64
        })
        .collect();
    Ok(per_period.iter().sum::<f64>() / window as f64)
}

/// Time-average of the decoded sum throughput over the first `window`
/// steady-state periods.
pub fn time_average(traj: &Trajectory, window: usize) -> Result<f64> {
    let values: Vec<f64> = traj.steady().iter().map(|s| s.throughput()).collect();
    periodic_average(&values, traj.steps_per_period(), window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centralized;
    use crate::channel::SymmetricChannel;
    use crate::sim::{self, SimConfig};

    fn example_gains() -> ChannelGains {
        SymmetricChannel::new(0.3, 0.7, 4.0).unwrap().to_gains()
    }

    #[test]
    fn spec_bounds() {
        assert!(GridSpec::new(10).is_err());
        assert_eq!(GridSpec::new(11).unwrap().n_points(), 11);
        assert_eq!(GridSpec::default().n_points(), 201);
        let ax = GridSpec::default().axis(7.3);
        assert_eq!(ax.len(), 201);
        assert_eq!((ax[0], ax[200]), (0.0, 7.3));
    }

    #[test]
    fn no_sic_corner_is_exact() {
        let g = example_gains();
        let a = grid_optimize(&g, Strategy::NoSic, GridSpec::default());
        let b = centralized::solve_no_sic(&g);
        assert!((a.sum_rate - b.sum_rate).abs() < 1e-9);
        assert_eq!((a.gamma1, a.gamma2), (4.0, 4.0));
    }

    #[test]
    fn full_sic_interior_within_tolerance() {
        let g = ChannelGains::new(1.0, 1.5, 1.2, 1.0, 4.0, 4.0).unwrap();
        let spec = GridSpec::default();
        let a = grid_optimize(&g, Strategy::FullSic, spec);
        let b = centralized::solve_full_sic(&g);
        let tol = lipschitz_tolerance(&g, spec);
        assert!(b.sum_rate >= a.sum_rate - 1e-12);
        assert!(b.sum_rate - a.sum_rate <= tol.min(0.02));
    }

    #[test]
    fn zero_power_single_point() {
        let g = ChannelGains::new(1.0, 0.5, 0.5, 1.0, 0.0, 0.0).unwrap();
        for s in Strategy::ALL {
            let a = grid_optimize(&g, s, GridSpec::default());
            assert_eq!(a.sum_rate, 0.0);
        }
    }

    #[test]
    fn grid_results_are_feasible() {
        let g = ChannelGains::new(0.8, 1.3, 0.4, 1.1, 6.0, 3.0).unwrap();
        for s in Strategy::ALL {
            let a = grid_optimize(&g, s, GridSpec::new(51).unwrap());
            assert!(a.is_feasible(&g, 1e-12));
        }
    }

    #[test]
    fn deterministic() {
        let g = ChannelGains::new(0.8, 1.3, 0.4, 1.1, 6.0, 3.0).unwrap();
        let spec = GridSpec::new(41).unwrap();
        assert_eq!(
            grid_optimize_global(&g, spec),
            grid_optimize_global(&g, spec)
        );
    }

    #[test]
    fn constant_signal_average() {
        let v = vec![2.5; 101];
        assert_eq!(periodic_average(&v, 10, 10).unwrap(), 2.5);
        assert!(periodic_average(&v, 10, 11).is_err());
        assert!(periodic_average(&v, 10, 0).is_err());
    }

    #[test]
    fn example_time_average() {
        let sym = SymmetricChannel::new(0.3, 0.7, 4.0).unwrap();
        let cfg = SimConfig {
            include_init: false,
            ..SimConfig::new(sym, 1.0).unwrap()
        };
        let traj = sim::simulate(&cfg).unwrap();
        let five = time_average(&traj, 5).unwrap();
        assert!((five - 2.476).abs() < 5e-3);
        let one = time_average(&traj, 1).unwrap();
        let ten = time_average(&traj, 10).unwrap();
        assert!((one - ten).abs() < 1e-12);
        assert!(time_average(&traj, 11).is_err());
    }
}
