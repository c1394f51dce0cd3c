//! Time-stepped simulation of the decentralized rate-oscillation algorithm
//! on the symmetric channel.
//!
//! Both transmitters always use peak power; only rates change. During the
//! initialization period both rates descend from `mv` at slope `mv / T`.
//! The first receiver able to cancel the other signal lets its transmitter
//! jump back to `mv`; that transmitter becomes the greedy side and the other
//! one the sawtooth side. In steady state the sawtooth user ramps its rate
//! from 0 at speed `ws / T`, jumps to `ws` once the ramp passes `th`, and
//! resets at every period boundary. The greedy user sends `mv` whenever its
//! receiver can cancel the sawtooth signal and `ws` otherwise.
//!
//! Samples are indexed by integer step so that steady-state samples one
//! period apart are bit-identical.

use std::fmt;

use crate::channel::{self, can_decode, SymmetricChannel, User};
use crate::error::{self, Error, Result};
use crate::symmetric::Landmarks;

pub const DEFAULT_STEPS_PER_PERIOD: usize = 1000;
pub const DEFAULT_PERIODS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub sym: SymmetricChannel,
    /// Sawtooth period `T` in seconds.
    pub period: f64,
    /// Time step in seconds; must divide the period.
    pub dt: f64,
    /// Number of steady-state periods.
    pub n_periods: usize,
    pub include_init: bool,
}

impl SimConfig {
    /// Defaults: `dt = T / 1000`, ten periods, initialization included.
    pub fn new(sym: SymmetricChannel, period: f64) -> Result<Self> {
        let period = error::positive("period", period)?;
        let cfg = Self {
            sym,
            period,
            dt: period / DEFAULT_STEPS_PER_PERIOD as f64,
            n_periods: DEFAULT_PERIODS,
            include_init: true,
        };
        cfg.steps_per_period()?;
        Ok(cfg)
    }

    /// Validates the configuration and returns `T / dt`.
    pub fn steps_per_period(&self) -> Result<usize> {
        let period = error::positive("period", self.period)?;
        let dt = error::positive("dt", self.dt)?;
        if dt > period / 100.0 * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "dt = {dt} exceeds period / 100 = {}",
                period / 100.0
            )));
        }
        if self.n_periods == 0 {
            return Err(Error::Precondition("n_periods must be at least 1".into()));
        }
        let steps = (period / dt).round();
        if (steps * dt - period).abs() > 1e-9 * period {
            return Err(Error::Precondition(format!(
                "dt = {dt} does not divide the period {period}"
            )));
        }
        Ok(steps as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Init,
    Steady,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Init => "Init",
            Phase::Steady => "Steady",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub r1: f64,
    pub r2: f64,
    pub r1_decoded: bool,
    pub r2_decoded: bool,
    /// Receiver 1 can decode (and remove) the signal of transmitter 2.
    pub sic_at_r1: bool,
    /// Receiver 2 can decode (and remove) the signal of transmitter 1.
    pub sic_at_r2: bool,
    pub phase: Phase,
}

impl Sample {
    /// Sum of the rates that reach their receiver.
    pub fn throughput(&self) -> f64 {
        let r1 = if self.r1_decoded { self.r1 } else { 0.0 };
        let r2 = if self.r2_decoded { self.r2 } else { 0.0 };
        r1 + r2
    }

    pub fn rate(&self, user: User) -> f64 {
        match user {
            User::One => self.r1,
            User::Two => self.r2,
        }
    }

    pub fn decoded(&self, user: User) -> bool {
        match user {
            User::One => self.r1_decoded,
            User::Two => self.r2_decoded,
        }
    }

    /// Whether receiver `rx` can cancel the other user's signal.
    pub fn sic_at(&self, rx: User) -> bool {
        match rx {
            User::One => self.sic_at_r1,
            User::Two => self.sic_at_r2,
        }
    }

    fn swapped(self) -> Self {
        Self {
            r1: self.r2,
            r2: self.r1,
            r1_decoded: self.r2_decoded,
            r2_decoded: self.r1_decoded,
            sic_at_r1: self.sic_at_r2,
            sic_at_r2: self.sic_at_r1,
            ..self
        }
    }
}

/// Which transmitter plays the greedy role in steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roles {
    pub greedy: User,
}

impl Roles {
    /// The side whose receiver sees the weaker interference gets to cancel:
    /// transmitter 1 when `mu >= epsilon`.
    pub fn for_channel(sym: &SymmetricChannel) -> Self {
        let greedy = if sym.mu() >= sym.epsilon() {
            User::One
        } else {
            User::Two
        };
        Self { greedy }
    }

    pub fn sawtooth(&self) -> User {
        self.greedy.other()
    }
}

/// Decodability at both receivers with both transmitters at peak power.
#[derive(Debug, Clone, Copy)]
struct Receivers {
    clean: [f64; 2],
    with_noise: [f64; 2],
    cancellable: [f64; 2],
}

impl Receivers {
    fn new(sym: &SymmetricChannel) -> Self {
        let gains = sym.to_gains();
        let g = sym.gamma();
        let plain = |tx, rx| channel::capacity_with_interference(&gains, tx, rx, g, g).unwrap();
        let clean = |u| channel::capacity_sic(&gains, u, g).unwrap();
        Self {
            clean: [clean(User::One), clean(User::Two)],
            with_noise: [plain(User::One, User::One), plain(User::Two, User::Two)],
            // signal of user i as seen by the other receiver
            cancellable: [plain(User::One, User::Two), plain(User::Two, User::One)],
        }
    }

    fn sample(&self, t: f64, r1: f64, r2: f64, phase: Phase) -> Sample {
        let sic_at_r1 = can_decode(r2, self.cancellable[1]);
        let sic_at_r2 = can_decode(r1, self.cancellable[0]);
        let cap = |i: usize, sic: bool| {
            if sic {
                self.clean[i]
            } else {
                self.with_noise[i]
            }
        };
        Sample {
            t,
            r1,
            r2,
            r1_decoded: can_decode(r1, cap(0, sic_at_r1)),
            r2_decoded: can_decode(r2, cap(1, sic_at_r2)),
            sic_at_r1,
            sic_at_r2,
            phase,
        }
    }
}

fn sawtooth_at_phase(tau: f64, lm: &Landmarks, period: f64) -> f64 {
    let ramp = lm.ws2 / period * tau;
    if ramp <= lm.th {
        ramp
    } else {
        lm.ws2
    }
}

/// Rate of the sawtooth transmitter (transmitter 2) at time `t`.
pub fn sawtooth_r2(t: f64, sym: &SymmetricChannel, period: f64) -> f64 {
    sawtooth_at_phase(t.rem_euclid(period), &Landmarks::new(sym), period)
}

/// Ramp speed of the sawtooth transmitter, `ws2 / T`.
pub fn sawtooth_speed(sym: &SymmetricChannel, period: f64) -> f64 {
    Landmarks::new(sym).ws2 / period
}

/// Rate of the greedy transmitter (transmitter 1) given the current rate of
/// the sawtooth transmitter.
pub fn greedy_r1(r2_now: f64, sym: &SymmetricChannel) -> f64 {
    let lm = Landmarks::new(sym);
    if can_decode(r2_now, lm.op2) {
        lm.mv
    } else {
        lm.ws1
    }
}

/// Simulates the initialization period `[0, T)` and returns its samples and
/// the role assignment.
pub fn run_init_phase(cfg: &SimConfig) -> Result<(Vec<Sample>, Roles)> {
    let steps = cfg.steps_per_period()?;
    let rx = Receivers::new(&cfg.sym);
    let lm = Landmarks::new(&cfg.sym);
    let slope = lm.mv / cfg.period;
    let mut switched: Option<User> = None;
    let mut samples = Vec::with_capacity(steps);

    for k in 0..steps {
        let t = k as f64 * cfg.dt;
        let descent = (lm.mv - slope * t).max(0.0);
        if switched.is_none() {
            // transmitter 1 wins a simultaneous arrival
            if can_decode(descent, rx.cancellable[1]) {
                switched = Some(User::One);
            } else if can_decode(descent, rx.cancellable[0]) {
                switched = Some(User::Two);
            }
        }
        let rate = |u| if switched == Some(u) { lm.mv } else { descent };
        samples.push(rx.sample(t, rate(User::One), rate(User::Two), Phase::Init));
    }

    // both rates reach zero at t = T, where either side could cancel
    let roles = switched
        .map(|greedy| Roles { greedy })
        .unwrap_or_else(|| Roles::for_channel(&cfg.sym));
    Ok((samples, roles))
}

/// Simulates `n_periods` steady-state periods, `n_periods * T / dt + 1`
/// samples, starting at `T` when the initialization period precedes them.
pub fn run_steady_state(cfg: &SimConfig, roles: Roles) -> Result<Vec<Sample>> {
    let steps = cfg.steps_per_period()?;
    let swap = roles.greedy == User::Two;
    let oriented = if swap { cfg.sym.swapped() } else { cfg.sym };
    let rx = Receivers::new(&oriented);
    let lm = Landmarks::new(&oriented);
    let offset = if cfg.include_init { steps } else { 0 };
    let total = steps * cfg.n_periods;

    let samples = (0..=total)
        .map(|k| {
            let t = (offset + k) as f64 * cfg.dt;
            let tau = (k % steps) as f64 * cfg.dt;
            let r2 = sawtooth_at_phase(tau, &lm, cfg.period);
            let r1 = if can_decode(r2, lm.op2) {
                lm.mv
            } else {
                lm.ws1
            };
            let s = rx.sample(t, r1, r2, Phase::Steady);
            if swap {
                s.swapped()
            } else {
                s
            }
        })
        .collect();
    Ok(samples)
}

/// Runs both phases. Identical configurations give bit-identical output.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    let steps = cfg.steps_per_period()?;
    let (mut samples, roles) = if cfg.include_init {
        run_init_phase(cfg)?
    } else {
        (Vec::new(), Roles::for_channel(&cfg.sym))
    };
    samples.extend(run_steady_state(cfg, roles)?);
    let landmarks = Landmarks::new(&cfg.sym);
    Ok(Trajectory {
        samples,
        roles,
        period: cfg.period,
        dt: cfg.dt,
        steps_per_period: steps,
        sawtooth_speed: landmarks.ws(roles.sawtooth()) / cfg.period,
        landmarks,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<Sample>,
    roles: Roles,
    period: f64,
    dt: f64,
    steps_per_period: usize,
    sawtooth_speed: f64,
    landmarks: Landmarks,
}

/// Times of the notable transitions of a run, interpolated between the
/// bracketing samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EventTimes {
    /// The sawtooth user's receiver first decodes its signal.
    pub first_decode_sawtooth: Option<f64>,
    /// The greedy user's receiver first decodes its signal.
    pub first_decode_greedy: Option<f64>,
    /// The greedy user's receiver first can cancel; it returns to `mv`.
    pub greedy_switch: Option<f64>,
    /// First steady-state loss of cancellation at the greedy receiver.
    pub sic_loss: Option<f64>,
    /// First steady-state jump of the sawtooth ramp to `ws`.
    pub ramp_jump: Option<f64>,
}

/// Zero of `f` on the segment between two samples, assuming linearity.
fn crossing(a: &Sample, b: &Sample, f: impl Fn(&Sample) -> f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    if fa == fb {
        b.t
    } else {
        a.t + fa / (fa - fb) * (b.t - a.t)
    }
}

impl Trajectory {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Samples of the steady-state phase.
    pub fn steady(&self) -> &[Sample] {
        let first = self
            .samples
            .iter()
            .position(|s| s.phase == Phase::Steady)
            .unwrap_or(self.samples.len());
        &self.samples[first..]
    }

    pub fn roles(&self) -> Roles {
        self.roles
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period
    }

    pub fn sawtooth_speed(&self) -> f64 {
        self.sawtooth_speed
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.landmarks
    }

    /// Number of complete steady-state periods.
    pub fn steady_periods(&self) -> usize {
        self.steady().len().saturating_sub(1) / self.steps_per_period
    }

    pub fn events(&self) -> EventTimes {
        let greedy = self.roles.greedy;
        let saw = self.roles.sawtooth();
        let lm = &self.landmarks;
        let s = &self.samples;
        let is_init = |k: usize| s[k].phase == Phase::Init;

        let first_decode = |u: User| {
            let k = (0..s.len())
                .take_while(|&k| is_init(k))
                .find(|&k| s[k].decoded(u))?;
            if k == 0 {
                return Some(s[0].t);
            }
            let cap = if s[k].sic_at(u) { lm.mv } else { lm.ws(u) };
            Some(crossing(&s[k - 1], &s[k], |x| x.rate(u) - cap))
        };

        let greedy_switch = (1..s.len())
            .take_while(|&k| is_init(k))
            .find(|&k| s[k].sic_at(greedy) && !s[k - 1].sic_at(greedy))
            .map(|k| crossing(&s[k - 1], &s[k], |x| x.rate(saw) - lm.op(saw)));

        let steady_pairs = || (1..s.len()).filter(|&k| !is_init(k - 1));
        let sic_loss = steady_pairs()
            .find(|&k| s[k - 1].sic_at(greedy) && !s[k].sic_at(greedy))
            .map(|k| crossing(&s[k - 1], &s[k], |x| x.rate(saw) - lm.op(saw)));
        let ramp_jump = steady_pairs()
            .find(|&k| s[k - 1].rate(saw) <= lm.th && s[k].rate(saw) > lm.th)
            .map(|k| s[k - 1].t + (lm.th - s[k - 1].rate(saw)) / self.sawtooth_speed);

        EventTimes {
            first_decode_sawtooth: first_decode(saw),
            first_decode_greedy: first_decode(greedy),
            greedy_switch,
            sic_loss,
            ramp_jump,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SymmetricChannel {
        SymmetricChannel::new(0.3, 0.7, 4.0).unwrap()
    }

    fn cfg(sym: SymmetricChannel, n_periods: usize, include_init: bool) -> SimConfig {
        SimConfig {
            n_periods,
            include_init,
            ..SimConfig::new(sym, 1.0).unwrap()
        }
    }

    #[test]
    fn sawtooth_values() {
        let s = example();
        // v = ws2 = 1.494764691749578
        assert!((sawtooth_r2(0.3, &s, 1.0) - 0.3 * 1.494_764_691_749_578).abs() < 1e-12);
        assert!((sawtooth_r2(0.3, &s, 1.0) - 0.4484).abs() < 1e-3);
        assert_eq!(sawtooth_r2(0.0, &s, 1.0), 0.0);
        assert_eq!(sawtooth_r2(2.0, &s, 1.0), 0.0);
        assert!((sawtooth_r2(0.7, &s, 1.0) - 1.4946).abs() < 1e-3);
        assert!((sawtooth_speed(&s, 2.0) - 1.494_764_691_749_578 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn greedy_values() {
        let s = example();
        assert!((greedy_r1(0.5, &s) - 2.3219).abs() < 1e-4);
        assert_eq!(greedy_r1(0.0, &s), Landmarks::new(&s).mv);
        assert!((greedy_r1(1.0, &s) - 1.0375).abs() < 1e-4);
        let op2 = Landmarks::new(&s).op2;
        assert_eq!(greedy_r1(op2, &s), Landmarks::new(&s).mv);
    }

    #[test]
    fn config_validation() {
        let s = example();
        let good = SimConfig::new(s, 1.0).unwrap();
        assert_eq!(good.steps_per_period().unwrap(), 1000);
        assert!(SimConfig { dt: 0.02, ..good }.steps_per_period().is_err());
        assert!(SimConfig { dt: 0.01, ..good }.steps_per_period().is_ok());
        assert!(SimConfig { dt: 0.003, ..good }.steps_per_period().is_err());
        assert!(SimConfig {
            n_periods: 0,
            ..good
        }
        .steps_per_period()
        .is_err());
        assert!(SimConfig::new(s, 0.0).is_err());
    }

    #[test]
    fn init_phase_timeline() {
        let (samples, roles) = run_init_phase(&cfg(example(), 1, true)).unwrap();
        assert_eq!(roles.greedy, User::One);
        assert_eq!(samples.len(), 1000);
        let lm = Landmarks::new(&example());
        // T1 is back at mv from the first sample where r2 <= op2
        let k = samples
            .iter()
            .position(|s| s.r1 == lm.mv && s.t > 0.0)
            .unwrap();
        let expected = 1.0 - lm.op2 / lm.mv;
        assert!((samples[k].t - expected).abs() <= 1e-3 + 1e-12);
        assert!(samples[k].sic_at_r1);
        assert!(samples.iter().all(|s| !s.sic_at_r2));
    }

    #[test]
    fn init_tie_goes_to_t1() {
        let s = SymmetricChannel::new(0.4, 0.4, 3.0).unwrap();
        let (_, roles) = run_init_phase(&cfg(s, 1, true)).unwrap();
        assert_eq!(roles.greedy, User::One);
        let s = SymmetricChannel::new(0.6, 0.4, 3.0).unwrap();
        let (_, roles) = run_init_phase(&cfg(s, 1, true)).unwrap();
        assert_eq!(roles.greedy, User::Two);
        assert_eq!(roles, Roles::for_channel(&s));
    }

    #[test]
    fn example_events() {
        let traj = simulate(&cfg(example(), 2, true)).unwrap();
        let ev = traj.events();
        let lm = traj.landmarks();
        let close = |a: Option<f64>, b: f64, tol: f64| (a.unwrap() - b).abs() <= tol;
        assert!(close(ev.first_decode_sawtooth, 1.0 - lm.ws2 / lm.mv, 1e-9));
        assert!(close(ev.first_decode_greedy, 1.0 - lm.ws1 / lm.mv, 1e-9));
        assert!(close(ev.greedy_switch, 1.0 - lm.op2 / lm.mv, 1e-9));
        assert!(close(ev.sic_loss, 1.0 + lm.op2 / lm.ws2, 1e-9));
        assert!(close(ev.ramp_jump, 1.0 + lm.th / lm.ws2, 1e-9));
        assert!(close(ev.first_decode_sawtooth, 0.36, 0.01));
        assert!(close(ev.first_decode_greedy, 0.55, 0.01));
        assert!(close(ev.greedy_switch, 0.7237, 1e-3));
        assert!(close(ev.ramp_jump, 1.567, 1e-3));
    }

    #[test]
    fn sample_counts_without_init() {
        let traj = simulate(&cfg(example(), 3, false)).unwrap();
        assert_eq!(traj.samples().len(), 3001);
        assert!(traj.samples().iter().all(|s| s.phase == Phase::Steady));
        assert_eq!(traj.steady_periods(), 3);
    }

    #[test]
    fn uniform_time_grid() {
        let traj = simulate(&cfg(example(), 2, true)).unwrap();
        for w in traj.samples().windows(2) {
            assert!(w[1].t > w[0].t);
            assert!((w[1].t - w[0].t - 1e-3).abs() < 1e-12);
        }
        assert_eq!(traj.steady()[0].t, 1.0);
    }

    #[test]
    fn deterministic() {
        let c = cfg(example(), 2, true);
        assert_eq!(simulate(&c).unwrap(), simulate(&c).unwrap());
    }

    #[test]
    fn swapped_roles_mirror_the_run() {
        let a = simulate(&cfg(example(), 2, false)).unwrap();
        let b = simulate(&cfg(example().swapped(), 2, false)).unwrap();
        assert_eq!(b.roles().greedy, User::Two);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert_eq!(x.r1, y.r2);
            assert_eq!(x.r2, y.r1);
            assert_eq!(x.sic_at_r1, y.sic_at_r2);
        }
        let (ea, eb) = (a.events(), b.events());
        assert_eq!(ea.sic_loss, eb.sic_loss);
        assert_eq!(ea.ramp_jump, eb.ramp_jump);
    }

    #[test]
    fn steady_state_invariants() {
        for (e, m, g) in [
            (0.3, 0.7, 4.0),
            (0.05, 0.9, 0.5),
            (0.5, 0.51, 15.0),
            (0.2, 0.2, 2.0),
        ] {
            let sym = SymmetricChannel::new(e, m, g).unwrap();
            let traj = simulate(&cfg(sym, 3, true)).unwrap();
            let lm = traj.landmarks();
            let steady = traj.steady();
            let n = traj.steps_per_period();
            let opt = crate::symmetric::optimum_sum_rate(&sym);
            for (k, s) in steady.iter().enumerate() {
                assert!(s.r1 == lm.mv || s.r1 == lm.ws1);
                assert!((0.0..=lm.ws2).contains(&s.r2));
                assert!(s.r1_decoded && s.r2_decoded);
                assert!(!s.sic_at_r2);
                if s.sic_at_r1 {
                    assert!(s.r2 <= lm.op2);
                } else {
                    assert!(s.r1 <= lm.ws1);
                }
                assert!(s.throughput() <= opt);
                if k + n < steady.len() {
                    assert_eq!((s.r1, s.r2), (steady[k + n].r1, steady[k + n].r2));
                }
            }
        }
    }

    #[test]
    fn sic_window_matches_t_prime() {
        let sym = example();
        let traj = simulate(&cfg(sym, 1, false)).unwrap();
        let period = &traj.steady()[..traj.steps_per_period()];
        let frac = period.iter().filter(|s| s.sic_at_r1).count() as f64 / period.len() as f64;
        let lm = traj.landmarks();
        assert!((frac - lm.op2 / lm.ws2).abs() <= 2e-3);
    }

    #[test]
    fn init_throughput_zero_while_undecodable() {
        let traj = simulate(&cfg(example(), 1, true)).unwrap();
        let first = &traj.samples()[0];
        assert!(!first.r1_decoded && !first.r2_decoded);
        assert_eq!(first.throughput(), 0.0);
    }
}
