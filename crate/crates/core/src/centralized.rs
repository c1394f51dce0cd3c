//! Centralized sum-rate maximization over the four decoding architectures.
//!
//! Each sub-problem is solved by evaluating its objective on a finite set of
//! candidate power allocations that is known to contain the optimum. No
//! descent method is involved.
//!
//! | Strategy       | R1 cancels | R2 cancels |
//! |----------------|------------|------------|
//! | `NoSic`        | no         | no         |
//! | `PartialSicR1` | yes        | no         |
//! | `PartialSicR2` | no         | yes        |
//! | `FullSic`      | yes        | yes        |

use std::fmt;

use crate::channel::{self, ChannelGains, SymmetricChannel, User};
use crate::error::{Error, Result};

/// Slack allowed when re-checking rate constraints after the fact.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    NoSic,
    /// Receiver 1 decodes and cancels the signal of transmitter 2.
    PartialSicR1,
    /// Receiver 2 decodes and cancels the signal of transmitter 1.
    PartialSicR2,
    FullSic,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::NoSic,
        Strategy::PartialSicR2,
        Strategy::PartialSicR1,
        Strategy::FullSic,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Strategy::NoSic => "No-SIC",
            Strategy::PartialSicR1 => "Partial-SIC (R1 cancels)",
            Strategy::PartialSicR2 => "Partial-SIC (R2 cancels)",
            Strategy::FullSic => "Full-SIC",
        }
    }

    /// Whether receiver `rx` performs interference cancellation.
    pub fn cancels_at(self, rx: User) -> bool {
        match self {
            Strategy::NoSic => false,
            Strategy::PartialSicR1 => rx == User::One,
            Strategy::PartialSicR2 => rx == User::Two,
            Strategy::FullSic => true,
        }
    }

    /// The label after exchanging user indices.
    pub fn swapped(self) -> Self {
        match self {
            Strategy::PartialSicR1 => Strategy::PartialSicR2,
            Strategy::PartialSicR2 => Strategy::PartialSicR1,
            s => s,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::NoSic => "NoSic",
            Strategy::PartialSicR1 => "PartialSicR1",
            Strategy::PartialSicR2 => "PartialSicR2",
            Strategy::FullSic => "FullSic",
        };
        f.write_str(s)
    }
}

/// A joint rate and power allocation under one decoding architecture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub strategy: Strategy,
    pub gamma1: f64,
    pub gamma2: f64,
    pub r1: f64,
    pub r2: f64,
    pub sum_rate: f64,
}

impl Allocation {
    /// Rates set to the largest values the strategy's constraints admit at
    /// the given SNRs. Callers guarantee feasible SNRs.
    pub(crate) fn at(gains: &ChannelGains, strategy: Strategy, gamma1: f64, gamma2: f64) -> Self {
        let (r1, r2) = rate_bounds(gains, strategy, gamma1, gamma2);
        Self {
            strategy,
            gamma1,
            gamma2,
            r1,
            r2,
            sum_rate: r1 + r2,
        }
    }

    /// Same operating point with user labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            strategy: self.strategy.swapped(),
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            r1: self.r2,
            r2: self.r1,
            sum_rate: self.r2 + self.r1,
        }
    }

    /// Re-checks power limits and the strategy's rate constraints through
    /// the public capacity functions.
    pub fn is_feasible(&self, gains: &ChannelGains, tol: f64) -> bool {
        if gains.check_snr(User::One, self.gamma1).is_err()
            || gains.check_snr(User::Two, self.gamma2).is_err()
        {
            return false;
        }
        if self.r1 < 0.0 || self.r2 < 0.0 || self.sum_rate != self.r1 + self.r2 {
            return false;
        }
        let (g1, g2) = (self.gamma1, self.gamma2);
        let plain = |tx, rx| channel::capacity_with_interference(gains, tx, rx, g1, g2).unwrap();
        let clean = |u: User| {
            let g = if u == User::One { g1 } else { g2 };
            channel::capacity_sic(gains, u, g).unwrap()
        };
        let rate = |u: User| if u == User::One { self.r1 } else { self.r2 };

        [User::One, User::Two].into_iter().all(|u| {
            let own_rx = u;
            let other_rx = u.other();
            // decodable at the intended receiver, possibly after cancellation
            let own_cap = if self.strategy.cancels_at(own_rx) {
                clean(u)
            } else {
                plain(u, own_rx)
            };
            // decodable at the other receiver whenever that receiver cancels it
            let cancel_cap = if self.strategy.cancels_at(other_rx) {
                plain(u, other_rx)
            } else {
                f64::INFINITY
            };
            rate(u) <= own_cap + tol && rate(u) <= cancel_cap + tol
        })
    }
}

fn rate_bounds(gains: &ChannelGains, strategy: Strategy, gamma1: f64, gamma2: f64) -> (f64, f64) {
    let c = |tx, rx| gains.rate_with_interference(tx, rx, gamma1, gamma2);
    let sic1 = gains.rate_interference_free(User::One, gamma1);
    let sic2 = gains.rate_interference_free(User::Two, gamma2);
    match strategy {
        Strategy::NoSic => (c(User::One, User::One), c(User::Two, User::Two)),
        Strategy::PartialSicR2 => (c(User::One, User::Two).min(c(User::One, User::One)), sic2),
        Strategy::PartialSicR1 => (sic1, c(User::Two, User::One).min(c(User::Two, User::Two))),
        Strategy::FullSic => (
            c(User::One, User::Two).min(sic1),
            c(User::Two, User::One).min(sic2),
        ),
    }
}

/// A ratio that may have a vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    PosInfinity,
    NegInfinity,
    /// Both numerator and denominator vanish.
    Indeterminate,
}

impl Threshold {
    fn ratio(num: f64, den: f64) -> Self {
        if den != 0.0 {
            Threshold::Finite(num / den)
        } else if num > 0.0 {
            Threshold::PosInfinity
        } else if num < 0.0 {
            Threshold::NegInfinity
        } else {
            Threshold::Indeterminate
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Threshold::Finite(v) => v,
            Threshold::PosInfinity => f64::INFINITY,
            Threshold::NegInfinity => f64::NEG_INFINITY,
            Threshold::Indeterminate => f64::NAN,
        }
    }

    /// The finite value if it lies strictly inside `(0, upper)`.
    fn interior(self, upper: f64) -> Option<f64> {
        match self {
            Threshold::Finite(v) if v > 0.0 && v < upper => Some(v),
            _ => None,
        }
    }
}

/// SNR of transmitter 2 at which the two decodability constraints on
/// transmitter 1 cross when receiver 2 cancels:
/// `(g11 - g12) / (g12 g21 - g11 g22)`.
pub fn threshold_kt(gains: &ChannelGains) -> Threshold {
    let num = gains.g11() - gains.g12();
    let den = gains.g12() * gains.g21() - gains.g11() * gains.g22();
    Threshold::ratio(num, den)
}

/// `(k1, k2)`: the SNRs at which each min-constraint of the Full-SIC
/// problem switches branch.
pub fn full_sic_thresholds(gains: &ChannelGains) -> (f64, f64) {
    let scale = gains.g11() * gains.g22();
    (
        (gains.g21() - gains.g22()) / scale,
        (gains.g12() - gains.g11()) / scale,
    )
}

fn best_of(
    gains: &ChannelGains,
    strategy: Strategy,
    candidates: impl IntoIterator<Item = (f64, f64)>,
) -> Allocation {
    candidates
        .into_iter()
        .map(|(g1, g2)| Allocation::at(gains, strategy, g1, g2))
        .reduce(|best, a| if a.sum_rate > best.sum_rate { a } else { best })
        .expect("candidate set is never empty")
}

/// Both users treat interference as noise. The optimum sits at a corner of
/// the power box.
pub fn solve_no_sic(gains: &ChannelGains) -> Allocation {
    let (m1, m2) = (gains.gamma1_max(), gains.gamma2_max());
    best_of(
        gains,
        Strategy::NoSic,
        [(m1, m2), (m1, 0.0), (0.0, m2), (0.0, 0.0)],
    )
}

/// Exactly one receiver cancels the other user's signal.
///
/// With receiver 2 cancelling, transmitter 1 always uses full power and the
/// candidates for transmitter 2 are `0`, `gamma2_max`, and the crossing
/// point `k_t` when it lies strictly inside the range.
pub fn solve_partial_sic(gains: &ChannelGains, canceller: User) -> Allocation {
    match canceller {
        User::Two => {
            let (m1, m2) = (gains.gamma1_max(), gains.gamma2_max());
            let crossing = threshold_kt(gains).interior(m2).map(|kt| (m1, kt));
            best_of(
                gains,
                Strategy::PartialSicR2,
                [(m1, m2), (m1, 0.0)].into_iter().chain(crossing),
            )
        }
        User::One => solve_partial_sic(&gains.swapped(), User::Two).swapped(),
    }
}

/// Both receivers cancel. Candidates are the 3x3 product of
/// `{0, k1, gamma1_max}` and `{0, k2, gamma2_max}`, keeping an interior
/// threshold only when it is strictly inside its range.
pub fn solve_full_sic(gains: &ChannelGains) -> Allocation {
    let (m1, m2) = (gains.gamma1_max(), gains.gamma2_max());
    let (k1, k2) = full_sic_thresholds(gains);
    let axis = |m: f64, k: f64| {
        let mut v = vec![m];
        if k > 0.0 && k < m {
            v.push(k);
        }
        v.push(0.0);
        v
    };
    let (a1, a2) = (axis(m1, k1), axis(m2, k2));
    let candidates = a1.iter().flat_map(|&g1| a2.iter().map(move |&g2| (g1, g2)));
    best_of(gains, Strategy::FullSic, candidates)
}

/// Best allocation across all architectures. Ties resolve in the order
/// No-SIC, Partial-SIC (R2), Partial-SIC (R1), Full-SIC.
pub fn solve_global(gains: &ChannelGains) -> Allocation {
    solve_all(gains)
        .into_iter()
        .reduce(|best, a| if a.sum_rate > best.sum_rate { a } else { best })
        .unwrap()
}

/// Per-architecture optima in tie-break order.
pub fn solve_all(gains: &ChannelGains) -> [Allocation; 4] {
    [
        solve_no_sic(gains),
        solve_partial_sic(gains, User::Two),
        solve_partial_sic(gains, User::One),
        solve_full_sic(gains),
    ]
}

/// With dominant intended links, No-SIC never loses to Full-SIC and the
/// global optimum runs both transmitters at peak power.
pub fn check_proposition1(gains: &ChannelGains) -> Result<bool> {
    if !gains.dominant_intended_links() {
        return Err(Error::Precondition(
            "dominant intended links (g11 > g12, g22 > g21) required".into(),
        ));
    }
    let no_sic = solve_no_sic(gains);
    let full = solve_full_sic(gains);
    let global = solve_global(gains);
    Ok(no_sic.sum_rate >= full.sum_rate - FEASIBILITY_TOL
        && global.gamma1 == gains.gamma1_max()
        && global.gamma2 == gains.gamma2_max())
}

/// Low-SNR conditions under which No-SIC beats, respectively, Partial-SIC
/// with receiver 2 cancelling and Partial-SIC with receiver 1 cancelling.
pub fn check_proposition2_conditions(
    gains: &ChannelGains,
    gamma1: f64,
    gamma2: f64,
) -> (bool, bool) {
    let (t2, t1) = low_snr_thresholds(gains);
    (gamma2 < t2, gamma1 < t1)
}

/// `((g11 - g12) / (g21 g12), (g22 - g21) / (g12 g21))`.
pub fn low_snr_thresholds(gains: &ChannelGains) -> (f64, f64) {
    let cross = gains.g21() * gains.g12();
    (
        (gains.g11() - gains.g12()) / cross,
        (gains.g22() - gains.g21()) / cross,
    )
}

/// Relative gap `Omega` between single-transmitter operation and the
/// Partial-SIC optimum with receiver 2 cancelling, on the symmetric channel.
pub fn single_tx_gap_omega(sym: &SymmetricChannel) -> f64 {
    let g = sym.to_gains();
    let gamma = sym.gamma();
    let (g12, g22) = (g.g12(), g.g22());
    let num = channel::log2_1p(g12 / g22);
    let den = channel::log2_1p(g12 * gamma / (g22 * gamma + 1.0)) + channel::log2_1p(g22 * gamma);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(e: f64, m: f64, g: f64) -> ChannelGains {
        SymmetricChannel::new(e, m, g).unwrap().to_gains()
    }

    #[test]
    fn kt_values() {
        let g = ChannelGains::new(1.0, 0.3, 0.7, 1.0, 4.0, 4.0).unwrap();
        let kt = threshold_kt(&g).value();
        assert!((kt - 0.7 / (0.21 - 1.0)).abs() < 1e-15);
        assert!((kt + 0.886_08).abs() < 1e-4);

        let g = ChannelGains::new(0.5, 0.5, 0.7, 1.0, 4.0, 4.0).unwrap();
        assert_eq!(threshold_kt(&g), Threshold::Finite(0.0));

        // g12 g21 = g11 g22 = 1
        let g = ChannelGains::new(1.0, 2.0, 0.5, 1.0, 4.0, 4.0).unwrap();
        assert_eq!(threshold_kt(&g), Threshold::NegInfinity);
        let g = ChannelGains::new(2.0, 1.0, 2.0, 1.0, 4.0, 4.0).unwrap();
        assert_eq!(threshold_kt(&g), Threshold::PosInfinity);
        let g = ChannelGains::new(1.0, 1.0, 1.0, 1.0, 4.0, 4.0).unwrap();
        assert_eq!(threshold_kt(&g), Threshold::Indeterminate);
        assert!(threshold_kt(&g).value().is_nan());
    }

    #[test]
    fn no_sic_example() {
        let g = sym(0.3, 0.7, 4.0);
        let a = solve_no_sic(&g);
        assert_eq!(a.strategy, Strategy::NoSic);
        assert_eq!((a.gamma1, a.gamma2), (4.0, 4.0));
        // log2(1 + 4/3.8) + log2(1 + 4/2.2)
        assert!((a.sum_rate - 2.532_239_397_168_240_6).abs() < 1e-12);
        assert!((a.sum_rate - 2.5321).abs() < 1e-3);
    }

    #[test]
    fn silent_channel() {
        let g = ChannelGains::new(1.0, 0.3, 0.7, 1.0, 0.0, 0.0).unwrap();
        for a in solve_all(&g) {
            assert_eq!(a.sum_rate, 0.0);
            assert!(a.is_feasible(&g, FEASIBILITY_TOL));
        }
    }

    #[test]
    fn partial_sic_example() {
        let g = sym(0.3, 0.7, 4.0);
        let a = solve_partial_sic(&g, User::One);
        assert_eq!(a.strategy, Strategy::PartialSicR1);
        // log2(5) + log2(1.56)
        assert!((a.sum_rate - (2.321_928_094_887_362 + 0.641_546_029_087_523_6)).abs() < 1e-12);
        assert!(a.is_feasible(&g, FEASIBILITY_TOL));
        let b = solve_partial_sic(&g, User::Two);
        assert_eq!(b.strategy, Strategy::PartialSicR2);
        assert!(b.sum_rate < a.sum_rate);
    }

    #[test]
    fn partial_sic_silent_interferer() {
        let g = ChannelGains::new(1.0, 0.4, 0.7, 1.0, 3.0, 0.0).unwrap();
        let a = solve_partial_sic(&g, User::Two);
        assert_eq!(a.r2, 0.0);
        // decodable at both receivers: limited by the weaker gain
        assert!((a.sum_rate - channel::log2_1p(0.4 * 3.0)).abs() < 1e-15);
    }

    #[test]
    fn partial_sic_uses_crossing_candidate() {
        // strong cross links: g12 g21 > g11 g22 and 0 < k_t < gamma2_max
        let g = ChannelGains::new(1.0, 0.5, 2.9, 0.4, 9.0, 6.0).unwrap();
        let kt = threshold_kt(&g).value();
        assert!(kt > 0.0 && kt < 6.0, "kt = {kt}");
        let a = solve_partial_sic(&g, User::Two);
        assert!((a.gamma2 - kt).abs() < 1e-15);
        let corners =
            [0.0, 6.0].map(|g2| Allocation::at(&g, Strategy::PartialSicR2, 9.0, g2).sum_rate);
        assert!(a.sum_rate > corners[0].max(corners[1]));
    }

    #[test]
    fn full_sic_interior_candidates() {
        let g = ChannelGains::new(1.0, 1.5, 1.2, 1.0, 4.0, 4.0).unwrap();
        let (k1, k2) = full_sic_thresholds(&g);
        assert!((k1 - 0.2).abs() < 1e-15);
        assert!((k2 - 0.5).abs() < 1e-15);
        let a = solve_full_sic(&g);
        assert_eq!(a.strategy, Strategy::FullSic);
        assert!(a.is_feasible(&g, FEASIBILITY_TOL));
        // every candidate is dominated by the returned one
        for g1 in [0.0, k1, 4.0] {
            for g2 in [0.0, k2, 4.0] {
                assert!(Allocation::at(&g, Strategy::FullSic, g1, g2).sum_rate <= a.sum_rate);
            }
        }
    }

    #[test]
    fn global_examples() {
        let a = solve_global(&sym(0.3, 0.7, 4.0));
        assert_eq!(a.strategy, Strategy::PartialSicR1);
        assert!((a.sum_rate - 2.9634).abs() < 1e-3);

        // both margins above q(4) ~ 0.6096: weak interference
        let a = solve_global(&sym(0.8, 0.8, 4.0));
        assert_eq!(a.strategy, Strategy::NoSic);

        // both margins below q(4): strong interference, cancellation pays
        let a = solve_global(&sym(0.05, 0.05, 4.0));
        assert_eq!(a.strategy, Strategy::PartialSicR2);
        assert!(a.sum_rate > solve_no_sic(&sym(0.05, 0.05, 4.0)).sum_rate);

        let g = ChannelGains::new(1.3, 0.4, 0.7, 1.0, 5.0, 0.0).unwrap();
        let a = solve_global(&g);
        assert!((a.sum_rate - channel::log2_1p(1.3 * 5.0)).abs() < 1e-15);
    }

    #[test]
    fn global_is_max_of_subsolvers() {
        let g = ChannelGains::new(0.8, 1.1, 0.3, 0.9, 2.0, 7.0).unwrap();
        let best = solve_all(&g)
            .iter()
            .map(|a| a.sum_rate)
            .fold(f64::MIN, f64::max);
        assert_eq!(solve_global(&g).sum_rate, best);
    }

    #[test]
    fn no_sic_dominance_examples() {
        assert!(check_proposition1(&sym(0.3, 0.7, 4.0)).unwrap());
        assert!(check_proposition1(&sym(0.9, 0.01, 100.0)).unwrap());
        let g = ChannelGains::new(1.0, 1.5, 1.2, 1.0, 4.0, 4.0).unwrap();
        assert!(matches!(
            check_proposition1(&g),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn low_snr_examples() {
        let g = sym(0.5, 0.5, 0.01);
        assert_eq!(check_proposition2_conditions(&g, 0.01, 0.01), (true, true));
        let ns = solve_no_sic(&g).sum_rate;
        assert!(ns > solve_partial_sic(&g, User::One).sum_rate);
        assert!(ns > solve_partial_sic(&g, User::Two).sum_rate);

        assert_eq!(
            check_proposition2_conditions(&sym(0.2, 0.9, 1.0), 0.0, 0.0),
            (true, true)
        );

        // second threshold: 0.7 / (0.3 * 0.7) = 3.33 < 4
        let (_, second) = check_proposition2_conditions(&sym(0.3, 0.7, 4.0), 4.0, 4.0);
        assert!(!second);
    }

    #[test]
    fn omega_examples() {
        let s = SymmetricChannel::new(0.3, 0.7, 4.0).unwrap();
        let o = single_tx_gap_omega(&s);
        // log2(1.3) / (log2(1.24) + log2(5))
        assert!((o - 0.143_797).abs() < 1e-6, "omega = {o}");
        let s = SymmetricChannel::new(0.3, 0.7, 1e6).unwrap();
        assert!(single_tx_gap_omega(&s) < 0.02);
        let s = SymmetricChannel::new(0.3, 1.0 - 1e-12, 4.0).unwrap();
        assert!(single_tx_gap_omega(&s) < 1e-10);
    }

    #[test]
    fn strategy_labels() {
        assert_eq!(Strategy::PartialSicR1.to_string(), "PartialSicR1");
        assert_eq!(Strategy::PartialSicR1.swapped(), Strategy::PartialSicR2);
        assert!(Strategy::FullSic.cancels_at(User::One));
        assert!(!Strategy::PartialSicR2.cancels_at(User::One));
    }
}
