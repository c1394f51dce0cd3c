//! Closed forms for the normalized symmetric channel.
//!
//! On this channel the global optimum is the largest of three sum-rates:
//!
//! | closed form        | operating point                      | [`Strategy`]   |
//! |--------------------|--------------------------------------|----------------|
//! | [`sum_rate_no_sic`]     | both at `ws`                    | `NoSic`        |
//! | [`sum_rate_partial_i`]  | T2 at `mv`, T1 at `op1`, R2 cancels | `PartialSicR2` |
//! | [`sum_rate_partial_ii`] | T1 at `mv`, T2 at `op2`, R1 cancels | `PartialSicR1` |
//!
//! The two Partial-SIC forms trade places when `epsilon` and `mu` are
//! exchanged; for `mu >= epsilon` the second one is the larger.

use crate::centralized::Strategy;
use crate::channel::{log2_1p, SymmetricChannel, User};
use crate::error::{self, Error, Result};

/// Reference rates of the decentralized algorithm, all at peak power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmarks {
    /// Interference-free rate, `phi(gamma)`.
    pub mv: f64,
    /// Rate of T1 decodable at R1 with T2 as noise.
    pub ws1: f64,
    /// Rate of T2 decodable at R2 with T1 as noise.
    pub ws2: f64,
    /// Rate of T1 that R2 can decode and cancel.
    pub op1: f64,
    /// Rate of T2 that R1 can decode and cancel.
    pub op2: f64,
    /// Cancellation ceiling, independent of the margins.
    pub th: f64,
}

impl Landmarks {
    pub fn new(sym: &SymmetricChannel) -> Self {
        let (e, m, g) = (sym.epsilon(), sym.mu(), sym.gamma());
        Self {
            mv: log2_1p(g),
            ws1: log2_1p(g / ((1.0 - e) * g + 1.0)),
            ws2: log2_1p(g / ((1.0 - m) * g + 1.0)),
            op1: log2_1p((1.0 - m) * g / (g + 1.0)),
            op2: log2_1p((1.0 - e) * g / (g + 1.0)),
            th: log2_1p(g / (g + 1.0)),
        }
    }

    /// Rate of `user` decodable at its own receiver without cancellation.
    pub fn ws(&self, user: User) -> f64 {
        match user {
            User::One => self.ws1,
            User::Two => self.ws2,
        }
    }

    /// Rate of `user` that the other receiver can cancel.
    pub fn op(&self, user: User) -> f64 {
        match user {
            User::One => self.op1,
            User::Two => self.op2,
        }
    }
}

pub fn landmarks(sym: &SymmetricChannel) -> Landmarks {
    Landmarks::new(sym)
}

pub fn sum_rate_no_sic(sym: &SymmetricChannel) -> f64 {
    let l = Landmarks::new(sym);
    l.ws1 + l.ws2
}

/// Receiver 2 cancels.
pub fn sum_rate_partial_i(sym: &SymmetricChannel) -> f64 {
    let l = Landmarks::new(sym);
    l.op1 + l.mv
}

/// Receiver 1 cancels.
pub fn sum_rate_partial_ii(sym: &SymmetricChannel) -> f64 {
    let l = Landmarks::new(sym);
    l.mv + l.op2
}

/// Largest of the three closed-form sum-rates.
pub fn optimum_sum_rate(sym: &SymmetricChannel) -> f64 {
    sum_rate_no_sic(sym)
        .max(sum_rate_partial_i(sym))
        .max(sum_rate_partial_ii(sym))
}

/// `mu` at which No-SIC and Partial-SIC with receiver 1 cancelling give the
/// same sum-rate: `mu = 1 - epsilon / ((1 - epsilon) gamma)`.
///
/// Above the diagonal (`epsilon <= q(gamma)`) this is the boundary between
/// the No-SIC and Partial-SIC regions. A solution in `(0, 1)` exists only for
/// `epsilon < gamma / (1 + gamma)`.
pub fn switching_curve_mu(epsilon: f64, gamma: f64) -> Result<f64> {
    let epsilon = error::open_unit("epsilon", epsilon)?;
    let gamma = error::positive("gamma", gamma)?;
    let mu = 1.0 - epsilon / ((1.0 - epsilon) * gamma);
    if mu > 0.0 {
        Ok(mu)
    } else {
        Err(Error::Precondition(format!(
            "no switching point for epsilon = {epsilon} at gamma = {gamma}; \
             requires epsilon < gamma / (1 + gamma)"
        )))
    }
}

/// `mu` at which No-SIC and Partial-SIC with receiver 2 cancelling give the
/// same sum-rate: `mu = gamma (1 - epsilon) / ((1 - epsilon) gamma + 1)`.
///
/// This is the mirror image of [`switching_curve_mu`] across the diagonal
/// and the region boundary below it (`epsilon >= q(gamma)`).
pub fn switching_curve_mu_partial_i(epsilon: f64, gamma: f64) -> Result<f64> {
    let epsilon = error::open_unit("epsilon", epsilon)?;
    let gamma = error::positive("gamma", gamma)?;
    let a = (1.0 - epsilon) * gamma;
    Ok(a / (a + 1.0))
}

/// The No-SIC / Partial-SIC boundary over the whole `(epsilon, mu)` square.
/// Continuous, decreasing from 1 to 0, through `(q, q)`.
pub fn region_boundary_mu(epsilon: f64, gamma: f64) -> Result<f64> {
    if epsilon <= diagonal_intersection_q(gamma)? {
        switching_curve_mu(epsilon, gamma)
    } else {
        switching_curve_mu_partial_i(epsilon, gamma)
    }
}

/// Margin `q` where the region boundary meets `epsilon = mu`:
/// `(1 + 2 gamma - sqrt(1 + 4 gamma)) / (2 gamma)`, evaluated without
/// cancellation as `2 gamma / (1 + 2 gamma + sqrt(1 + 4 gamma))`.
pub fn diagonal_intersection_q(gamma: f64) -> Result<f64> {
    let gamma = error::positive("gamma", gamma)?;
    Ok(2.0 * gamma / (1.0 + 2.0 * gamma + (1.0 + 4.0 * gamma).sqrt()))
}

/// Optimal architecture from the three closed forms. Ties resolve in the
/// order No-SIC, Partial-SIC (R1), Partial-SIC (R2).
pub fn classify_region(sym: &SymmetricChannel) -> Strategy {
    let candidates = [
        (Strategy::NoSic, sum_rate_no_sic(sym)),
        (Strategy::PartialSicR1, sum_rate_partial_ii(sym)),
        (Strategy::PartialSicR2, sum_rate_partial_i(sym)),
    ];
    candidates
        .into_iter()
        .reduce(|best, c| if c.1 > best.1 { c } else { best })
        .unwrap()
        .0
}
