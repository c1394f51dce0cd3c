//! Seeded randomized checks of the closed-form results against the brute-force
//! oracles and of the structural properties of the optimum.
//!
//! Every suite draws from its own ChaCha stream of the same seed, so adding
//! or resizing one suite leaves the instances of the others unchanged.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis;
use crate::centralized::{self, Strategy, FEASIBILITY_TOL};
use crate::channel::{self, ChannelGains, SymmetricChannel};
use crate::oracle::{self, GridSpec};
use crate::sim::{self, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances per suite.
    pub instances: usize,
    /// Multiplies every numeric tolerance; 1 in normal use.
    pub tolerance_scale: f64,
    pub grid: GridSpec,
}

impl VerifyConfig {
    pub fn new(seed: u64, instances: usize) -> Self {
        Self {
            seed,
            instances,
            tolerance_scale: 1.0,
            grid: GridSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Description of the first failing instance, if any.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.total)?;
        if let Some(msg) = &self.first_failure {
            write!(f, " (first failure: {msg})")?;
        }
        Ok(())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_suite(
    name: &'static str,
    n: usize,
    mut check: impl FnMut(usize) -> Result<(), String>,
) -> SuiteReport {
    let mut passed = 0;
    let mut first_failure = None;
    for i in 0..n {
        match check(i) {
            Ok(()) => passed += 1,
            Err(msg) => {
                first_failure.get_or_insert(msg);
            }
        }
    }
    SuiteReport {
        name,
        passed,
        total: n,
        first_failure,
    }
}

/// Gains with `g11 > g12` and `g22 > g21`.
pub fn random_dominant_gains(rng: &mut impl Rng, max_snr: f64) -> ChannelGains {
    let g11 = rng.gen_range(0.2..2.0);
    let g22 = rng.gen_range(0.2..2.0);
    let g12 = g11 * rng.gen_range(0.05..0.95);
    let g21 = g22 * rng.gen_range(0.05..0.95);
    ChannelGains::new(
        g11,
        g12,
        g21,
        g22,
        rng.gen_range(0.0..=max_snr),
        rng.gen_range(0.0..=max_snr),
    )
    .expect("sampled gains are valid")
}

/// Gains with no ordering imposed between direct and cross links.
pub fn random_gains(rng: &mut impl Rng, max_snr: f64) -> ChannelGains {
    let mut g = || rng.gen_range(0.05..2.0);
    let (g11, g12, g21, g22) = (g(), g(), g(), g());
    ChannelGains::new(
        g11,
        g12,
        g21,
        g22,
        rng.gen_range(0.0..=max_snr),
        rng.gen_range(0.0..=max_snr),
    )
    .expect("sampled gains are valid")
}

/// Margins with `mu >= epsilon`.
pub fn random_ordered_symmetric(rng: &mut impl Rng, gamma: f64) -> SymmetricChannel {
    let a: f64 = rng.gen_range(0.01..0.99);
    let b: f64 = rng.gen_range(0.01..0.99);
    SymmetricChannel::new(a.min(b), a.max(b), gamma).expect("sampled margins are valid")
}

/// Global closed-form optimum against the global grid optimum, on half
/// dominant-link and half unrestricted instances with peak SNR up to 10.
pub fn oracle_equivalence(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 1);
    run_suite("oracle equivalence", cfg.instances, |i| {
        let gains = if i % 2 == 0 {
            random_dominant_gains(&mut rng, 10.0)
        } else {
            random_gains(&mut rng, 10.0)
        };
        let solved = centralized::solve_global(&gains);
        let grid = oracle::grid_optimize_global(&gains, cfg.grid);
        let tol = oracle::lipschitz_tolerance(&gains, cfg.grid) * cfg.tolerance_scale;
        if !solved.is_feasible(&gains, FEASIBILITY_TOL) {
            return Err(format!("infeasible allocation {solved:?} for {gains:?}"));
        }
        if solved.sum_rate < grid.sum_rate - tol || grid.sum_rate < solved.sum_rate - tol {
            return Err(format!(
                "closed form {} vs grid {} (tolerance {tol}) for {gains:?}",
                solved.sum_rate, grid.sum_rate
            ));
        }
        Ok(())
    })
}

/// Closed-form expected sum-rate against the simulated one-period average,
/// `T = 1`, `dt = 1e-3`, peak SNR in `[0.1, 20]`.
pub fn closed_form_vs_simulation(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 2);
    run_suite("closed form vs simulation", cfg.instances, |_| {
        let gamma = rng.gen_range(0.1..=20.0);
        let sym = random_ordered_symmetric(&mut rng, gamma);
        let sim_cfg = SimConfig {
            n_periods: 1,
            include_init: false,
            ..SimConfig::new(sym, 1.0).map_err(|e| e.to_string())?
        };
        let traj = sim::simulate(&sim_cfg).map_err(|e| e.to_string())?;
        let average = oracle::time_average(&traj, 1).map_err(|e| e.to_string())?;
        let expected = analysis::expected_rates(&sym).e_sum;
        let tol = 5.0 * sim_cfg.dt * traj.landmarks().mv * cfg.tolerance_scale;
        if (expected - average).abs() > tol {
            return Err(format!(
                "closed form {expected} vs simulated {average} (tolerance {tol}) for {sym:?}"
            ));
        }
        Ok(())
    })
}

/// Dominant intended links: No-SIC is at least as good as Full-SIC and the
/// optimum uses both peak powers.
pub fn no_sic_dominance_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 3);
    run_suite(
        "no-SIC dominance under dominant links",
        cfg.instances,
        |_| {
            let gains = random_dominant_gains(&mut rng, 10.0);
            match centralized::check_proposition1(&gains) {
                Ok(true) => Ok(()),
                Ok(false) => Err(format!("violated for {gains:?}")),
                Err(e) => Err(e.to_string()),
            }
        },
    )
}

/// Dominant links at peak SNR far below both low-SNR thresholds: No-SIC is
/// the global optimum.
pub fn low_snr_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = rng_for(cfg.seed, 4);
    run_suite("no-SIC optimal at low SNR", cfg.instances, |_| {
        let base = random_dominant_gains(&mut rng, 1.0);
        let (t2, t1) = centralized::low_snr_thresholds(&base);
        let cap = 0.01 * t1.min(t2);
        let gains = ChannelGains::new(
            base.g11(),
            base.g12(),
            base.g21(),
            base.g22(),
            rng.gen_range(0.0..=cap),
            rng.gen_range(0.0..=cap),
        )
        .map_err(|e| e.to_string())?;
        let (below2, below1) = centralized::check_proposition2_conditions(
            &gains,
            gains.gamma1_max(),
            gains.gamma2_max(),
        );
        if !(below1 && below2) {
            return Err(format!("thresholds not met for {gains:?}"));
        }
        let best = centralized::solve_global(&gains);
        if best.strategy != Strategy::NoSic {
            return Err(format!("optimum is {} for {gains:?}", best.strategy));
        }
        Ok(())
    })
}

/// Relative gap between single-transmitter operation and the Partial-SIC
/// optimum, measured with the cancelling receiver on the side that the
/// optimum actually uses.
pub fn oriented_gap_omega(sym: &SymmetricChannel) -> f64 {
    // the gap is stated for receiver 2 cancelling, optimal when epsilon >= mu
    if sym.mu() > sym.epsilon() {
        centralized::single_tx_gap_omega(&sym.swapped())
    } else {
        centralized::single_tx_gap_omega(sym)
    }
}

/// At very high SNR a single interference-free user is nearly optimal:
/// `optimum <= phi(gamma) (1 + 5 Omega)`.
pub fn high_snr_suite(cfg: &VerifyConfig) -> SuiteReport {
    const GAMMA: f64 = 1e6;
    let mut rng = rng_for(cfg.seed, 5);
    run_suite(
        "single user quasi-optimal at high SNR",
        cfg.instances,
        |_| {
            let e = rng.gen_range(0.01..0.99);
            let m = rng.gen_range(0.01..0.99);
            let sym = SymmetricChannel::new(e, m, GAMMA).map_err(|e| e.to_string())?;
            let best = centralized::solve_global(&sym.to_gains()).sum_rate;
            let single = channel::phi(GAMMA).map_err(|e| e.to_string())?;
            let bound = single * (1.0 + 5.0 * oriented_gap_omega(&sym));
            if best > bound {
                return Err(format!("optimum {best} above {bound} for {sym:?}"));
            }
            Ok(())
        },
    )
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        oracle_equivalence(cfg),
        closed_form_vs_simulation(cfg),
        no_sic_dominance_suite(cfg),
        low_snr_suite(cfg),
        high_snr_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(instances: usize) -> VerifyConfig {
        VerifyConfig {
            grid: GridSpec::new(41).unwrap(),
            ..VerifyConfig::new(7, instances)
        }
    }

    #[test]
    fn suites_pass() {
        for report in run_all(&small(20)) {
            assert!(report.ok(), "{report}");
            assert_eq!(report.total, 20);
        }
    }

    #[test]
    fn empty_run_is_vacuous() {
        for report in run_all(&small(0)) {
            assert!(report.ok());
            assert_eq!(report.total, 0);
        }
    }

    #[test]
    fn corrupted_tolerance_fails() {
        let cfg = VerifyConfig {
            tolerance_scale: -1.0,
            ..small(10)
        };
        assert!(!oracle_equivalence(&cfg).ok());
        assert!(!closed_form_vs_simulation(&cfg).ok());
    }

    #[test]
    fn reproducible() {
        assert_eq!(run_all(&small(5)), run_all(&small(5)));
    }

    #[test]
    fn sampled_instances_respect_ranges() {
        let mut rng = rng_for(1, 0);
        for _ in 0..200 {
            let g = random_dominant_gains(&mut rng, 10.0);
            assert!(g.dominant_intended_links());
            assert!(g.gamma1_max() <= 10.0 && g.gamma2_max() <= 10.0);
            let s = random_ordered_symmetric(&mut rng, 3.0);
            assert!(s.mu() >= s.epsilon());
        }
    }

    #[test]
    fn omega_orientation() {
        let s = SymmetricChannel::new(0.1, 0.9, 1e6).unwrap();
        assert_eq!(oriented_gap_omega(&s), oriented_gap_omega(&s.swapped()));
        assert!(oriented_gap_omega(&s) < 0.05);
    }
}
