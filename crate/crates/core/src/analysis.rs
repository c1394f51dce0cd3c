//! Closed-form performance of the rate-oscillation algorithm and of the two
//! reference schemes, plus the parameter sweeps behind the efficiency plots.
//!
//! The expected rates are stated for the labeling `mu >= epsilon`, where
//! transmitter 1 is the greedy side. Other inputs are evaluated on the
//! swapped channel and the per-user results swapped back.

use crate::centralized::Strategy;
use crate::channel::SymmetricChannel;
use crate::error::{self, Error, Result};
use crate::symmetric::{self, Landmarks};

/// Ratios may exceed 1 by this much at exact ties.
pub const EFFICIENCY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedRates {
    pub e_r1: f64,
    pub e_r2: f64,
    pub e_sum: f64,
    /// End of the cancellation window as a fraction of the period.
    pub t_prime: f64,
    /// Ramp-to-`ws` jump as a fraction of the period.
    pub t_double_prime: f64,
}

/// One point of an efficiency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub epsilon: f64,
    pub mu: f64,
    pub gamma: f64,
    pub r_opt: f64,
    pub e_osc: f64,
    pub e_greedy: f64,
    pub e_orth: f64,
    pub rho_osc: f64,
    pub rho_greedy: f64,
    pub rho_orth: f64,
    pub region: Strategy,
}

/// Time within a period after which receiver 1 can no longer cancel:
/// `T op2 / ws2`.
pub fn t_prime(sym: &SymmetricChannel, period: f64) -> f64 {
    let lm = Landmarks::new(sym);
    period * lm.op2 / lm.ws2
}

/// Time within a period at which the sawtooth ramp jumps to `ws2`:
/// `T th / ws2`.
pub fn t_double_prime(sym: &SymmetricChannel, period: f64) -> f64 {
    let lm = Landmarks::new(sym);
    period * lm.th / lm.ws2
}

pub fn expected_rates(sym: &SymmetricChannel) -> ExpectedRates {
    if sym.mu() < sym.epsilon() {
        let r = expected_rates(&sym.swapped());
        return ExpectedRates {
            e_r1: r.e_r2,
            e_r2: r.e_r1,
            ..r
        };
    }
    let lm = Landmarks::new(sym);
    let t1 = lm.op2 / lm.ws2;
    let t2 = lm.th / lm.ws2;
    let e_r1 = t1 * (lm.mv - lm.ws1) + lm.ws1;
    let e_r2 = lm.th * lm.th / (2.0 * lm.ws2) + lm.ws2 - lm.th;
    ExpectedRates {
        e_r1,
        e_r2,
        e_sum: e_r1 + e_r2,
        t_prime: t1,
        t_double_prime: t2,
    }
}

pub fn efficiency_osc(sym: &SymmetricChannel) -> f64 {
    expected_rates(sym).e_sum / symmetric::optimum_sum_rate(sym)
}

/// Both users at peak power, each treating the other as noise.
pub fn benchmark_greedy(sym: &SymmetricChannel) -> f64 {
    symmetric::sum_rate_no_sic(sym)
}

/// Users alternate in halves of the time, each interference-free.
pub fn benchmark_orthogonal(sym: &SymmetricChannel) -> f64 {
    Landmarks::new(sym).mv
}

pub fn comparison_row(sym: &SymmetricChannel) -> ComparisonRow {
    let r_opt = symmetric::optimum_sum_rate(sym);
    let e_osc = expected_rates(sym).e_sum;
    let e_greedy = benchmark_greedy(sym);
    let e_orth = benchmark_orthogonal(sym);
    ComparisonRow {
        epsilon: sym.epsilon(),
        mu: sym.mu(),
        gamma: sym.gamma(),
        r_opt,
        e_osc,
        e_greedy,
        e_orth,
        rho_osc: e_osc / r_opt,
        rho_greedy: e_greedy / r_opt,
        rho_orth: e_orth / r_opt,
        region: symmetric::classify_region(sym),
    }
}

/// Interior grid points `step, 2 step, ...` strictly inside `(0, 1)`.
pub fn grid_axis(step: f64) -> Result<Vec<f64>> {
    let step = error::positive("grid step", step)?;
    if step >= 0.5 {
        return Err(Error::Precondition(format!(
            "grid step must be below 0.5, got {step}"
        )));
    }
    // divide instead of multiply when the step splits the unit interval, so
    // that 0.07 comes out as 0.07
    let n = (1.0 / step).round();
    let exact = (n * step - 1.0).abs() < 1e-12;
    let point = |i: usize| {
        if exact {
            i as f64 / n
        } else {
            i as f64 * step
        }
    };
    Ok((1..).map(point).take_while(|&x| x < 1.0 - 1e-12).collect())
}

/// Efficiency table over the `(epsilon, mu)` grid, or along `epsilon` at a
/// fixed `mu`. Rows are ordered by `epsilon`, then `mu`.
pub fn sweep(gamma: f64, step: f64, mu_fixed: Option<f64>) -> Result<Vec<ComparisonRow>> {
    let gamma = error::positive("gamma", gamma)?;
    let axis = grid_axis(step)?;
    let mus = match mu_fixed {
        Some(mu) => vec![error::open_unit("mu", mu)?],
        None => axis.clone(),
    };
    let mut rows = Vec::with_capacity(axis.len() * mus.len());
    for &epsilon in &axis {
        for &mu in &mus {
            rows.push(comparison_row(&SymmetricChannel::new(epsilon, mu, gamma)?));
        }
    }
    Ok(rows)
}
