//! Link-level primitives for the two-user Gaussian interference channel.
//!
//! Gains are indexed `g_{tx,rx}`: `g12` is the power gain from transmitter 1
//! to receiver 2 and `g21` the gain from transmitter 2 to receiver 1. Every
//! SNR is a transmit power already normalized by the noise variance, so the
//! noise floor never appears as a separate parameter.

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{self, Error, Result};

/// One of the two transmitter/receiver pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum User {
    One,
    Two,
}

impl User {
    pub fn other(self) -> Self {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            User::One => 1,
            User::Two => 2,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// `log2(1 + x)`: the AWGN rate at effective SINR `x`.
pub fn phi(x: f64) -> Result<f64> {
    error::non_negative("phi argument", x).map(log2_1p)
}

#[inline]
pub(crate) fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// A receiver can decode a signal whose rate does not exceed the capacity of
/// its link. Equality counts as decodable.
#[inline]
pub fn can_decode(rate: f64, capacity: f64) -> bool {
    rate <= capacity
}

/// Path gains and peak SNRs of a general two-user instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    g11: f64,
    g12: f64,
    g21: f64,
    g22: f64,
    gamma1_max: f64,
    gamma2_max: f64,
}

impl ChannelGains {
    /// Gains must be strictly positive. A zero peak SNR is accepted and
    /// models a silent transmitter.
    pub fn new(
        g11: f64,
        g12: f64,
        g21: f64,
        g22: f64,
        gamma1_max: f64,
        gamma2_max: f64,
    ) -> Result<Self> {
        Ok(Self {
            g11: error::positive("g11", g11)?,
            g12: error::positive("g12", g12)?,
            g21: error::positive("g21", g21)?,
            g22: error::positive("g22", g22)?,
            gamma1_max: error::non_negative("gamma1_max", gamma1_max)?,
            gamma2_max: error::non_negative("gamma2_max", gamma2_max)?,
        })
    }

    pub fn g11(&self) -> f64 {
        self.g11
    }

    pub fn g12(&self) -> f64 {
        self.g12
    }

    pub fn g21(&self) -> f64 {
        self.g21
    }

    pub fn g22(&self) -> f64 {
        self.g22
    }

    pub fn gamma1_max(&self) -> f64 {
        self.gamma1_max
    }

    pub fn gamma2_max(&self) -> f64 {
        self.gamma2_max
    }

    /// Power gain from transmitter `tx` to receiver `rx`.
    pub fn gain(&self, tx: User, rx: User) -> f64 {
        match (tx, rx) {
            (User::One, User::One) => self.g11,
            (User::One, User::Two) => self.g12,
            (User::Two, User::One) => self.g21,
            (User::Two, User::Two) => self.g22,
        }
    }

    pub fn gamma_max(&self, user: User) -> f64 {
        match user {
            User::One => self.gamma1_max,
            User::Two => self.gamma2_max,
        }
    }

    /// Each transmitter's intended link is stronger than the link it
    /// interferes on: `g11 > g12` and `g22 > g21`.
    pub fn dominant_intended_links(&self) -> bool {
        self.g11 > self.g12 && self.g22 > self.g21
    }

    /// The same channel with the user labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            g11: self.g22,
            g12: self.g21,
            g21: self.g12,
            g22: self.g11,
            gamma1_max: self.gamma2_max,
            gamma2_max: self.gamma1_max,
        }
    }

    pub fn check_snr(&self, user: User, gamma: f64) -> Result<()> {
        let max = self.gamma_max(user);
        if gamma.is_finite() && (0.0..=max).contains(&gamma) {
            Ok(())
        } else {
            Err(Error::SnrOutOfRange {
                user,
                value: gamma,
                max,
            })
        }
    }

    /// Rate of `tx` at receiver `rx` with the other signal treated as noise.
    /// Callers guarantee both SNRs are feasible.
    #[inline]
    pub(crate) fn rate_with_interference(
        &self,
        tx: User,
        rx: User,
        gamma1: f64,
        gamma2: f64,
    ) -> f64 {
        let (own, other) = match tx {
            User::One => (gamma1, gamma2),
            User::Two => (gamma2, gamma1),
        };
        let signal = self.gain(tx, rx) * own;
        let interference = self.gain(tx.other(), rx) * other;
        log2_1p(signal / (interference + 1.0))
    }

    #[inline]
    pub(crate) fn rate_interference_free(&self, user: User, gamma: f64) -> f64 {
        log2_1p(self.gain(user, user) * gamma)
    }
}

/// Capacity at receiver `rx` for the signal of transmitter `tx`, treating
/// the other transmitter as noise.
pub fn capacity_with_interference(
    gains: &ChannelGains,
    tx: User,
    rx: User,
    gamma1: f64,
    gamma2: f64,
) -> Result<f64> {
    gains.check_snr(User::One, gamma1)?;
    gains.check_snr(User::Two, gamma2)?;
    Ok(gains.rate_with_interference(tx, rx, gamma1, gamma2))
}

/// Capacity of the intended link of `user` once the interference has been
/// decoded and removed.
pub fn capacity_sic(gains: &ChannelGains, user: User, gamma: f64) -> Result<f64> {
    gains.check_snr(user, gamma)?;
    Ok(gains.rate_interference_free(user, gamma))
}

/// The normalized symmetric channel: unit direct gains, cross gains
/// `g21 = 1 - epsilon` and `g12 = 1 - mu`, and a common peak SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricChannel {
    epsilon: f64,
    mu: f64,
    gamma: f64,
}

impl SymmetricChannel {
    pub fn new(epsilon: f64, mu: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            epsilon: error::open_unit("epsilon", epsilon)?,
            mu: error::open_unit("mu", mu)?,
            gamma: error::positive("gamma", gamma)?,
        })
    }

    /// Recovers the margins from a general instance with unit direct gains
    /// and equal peak SNRs.
    pub fn from_gains(gains: &ChannelGains) -> Result<Self> {
        if gains.g11 != 1.0 || gains.g22 != 1.0 {
            return Err(Error::Precondition(
                "symmetric channel needs g11 = g22 = 1".into(),
            ));
        }
        if gains.gamma1_max != gains.gamma2_max {
            return Err(Error::Precondition(
                "symmetric channel needs equal peak SNRs".into(),
            ));
        }
        Self::new(1.0 - gains.g21, 1.0 - gains.g12, gains.gamma1_max)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Exchanges the user labels, i.e. swaps `epsilon` and `mu`.
    pub fn swapped(&self) -> Self {
        Self {
            epsilon: self.mu,
            mu: self.epsilon,
            gamma: self.gamma,
        }
    }

    pub fn to_gains(&self) -> ChannelGains {
        ChannelGains {
            g11: 1.0,
            g12: 1.0 - self.mu,
            g21: 1.0 - self.epsilon,
            g22: 1.0,
            gamma1_max: self.gamma,
            gamma2_max: self.gamma,
        }
    }
}
