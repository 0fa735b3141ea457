//! Deterministic compartmental SIR model and its closed-form benchmarks.
//!
//! The model runs in daily steps on absolute counts. Infections computed on a
//! day use only that day's starting state, matching the synchronous update of
//! the agent-based engine. Two hazard forms are supported: the classical
//! bilinear force of infection and a per-contact binomial hazard that treats
//! each of an agent's expected contacts as an independent transmission trial.

use thiserror::Error;

/// Force-of-infection functional form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HazardForm {
    /// Daily infection probability β · I/N, capped at 1.
    Linear { beta: f64 },
    /// Daily infection probability 1 - (1 - π · I/N)^c.
    ContactBinomial { pi: f64, c: f64 },
}

/// Parameters of a compartmental run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirParams {
    pub hazard: HazardForm,
    /// ρ, per-day recovery probability.
    pub rho: f64,
    /// Population size; fractional values are allowed.
    pub n: f64,
}

impl SirParams {
    pub fn linear(beta: f64, rho: f64, n: f64) -> Self {
        Self { hazard: HazardForm::Linear { beta }, rho, n }
    }

    pub fn contact_binomial(pi: f64, c: f64, rho: f64, n: f64) -> Self {
        Self { hazard: HazardForm::ContactBinomial { pi, c }, rho, n }
    }

    /// Linear hazard with β = π · c, the small-π limit of the binomial form.
    pub fn linear_from_contacts(pi: f64, c: f64, rho: f64, n: f64) -> Self {
        Self::linear(pi * c, rho, n)
    }

    /// Transmission rate β; for the binomial hazard this is the first-order
    /// coefficient π · c.
    pub fn beta(&self) -> f64 {
        match self.hazard {
            HazardForm::Linear { beta } => beta,
            HazardForm::ContactBinomial { pi, c } => pi * c,
        }
    }

    pub fn r0(&self) -> f64 {
        self.beta() / self.rho
    }
}

/// Contact reduction in response to prevalence.
///
/// Agents keep full contact rates while the infected share stays at or below
/// `threshold`; above it, contacts scale by (threshold / share)^(1 - elasticity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehavioralParams {
    pub threshold: f64,
    pub elasticity: f64,
}

impl Default for BehavioralParams {
    fn default() -> Self {
        Self { threshold: 0.01, elasticity: 0.88 }
    }
}

/// Fraction of normal contacts maintained at a given infected share.
pub fn alpha_response(infected_fraction: f64, params: &BehavioralParams) -> f64 {
    if infected_fraction <= params.threshold {
        1.0
    } else {
        (params.threshold / infected_fraction).powf(1.0 - params.elasticity)
    }
}

/// Compartmental analogue of removing a population share from circulation.
///
/// From `start_day` on, contacts scale by (1 - share)²: both the chance that
/// a susceptible circulates and the chance its contact does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirLockdown {
    pub share: f64,
    pub start_day: u32,
}

/// End-of-day compartment counts; `s + i + r` reproduces the population
/// bitwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirState {
    pub day: u32,
    pub s: f64,
    pub i: f64,
    pub r: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SirError {
    #[error("population must be positive and finite, got {0}")]
    BadPopulation(f64),
    #[error("initial infected {i0} must lie in [0, {n}]")]
    BadInitialInfected { i0: f64, n: f64 },
    #[error("{name} = {value} is not a valid rate")]
    BadRate { name: &'static str, value: f64 },
    #[error("peak formula requires a basic reproduction number >= 1, got {0}")]
    PeakBelowThreshold(f64),
}

fn check_rate(name: &'static str, value: f64, max: f64) -> Result<(), SirError> {
    if !(0.0..=max).contains(&value) {
        return Err(SirError::BadRate { name, value });
    }
    Ok(())
}

fn validate(params: &SirParams, i0: f64) -> Result<(), SirError> {
    if !(params.n.is_finite() && params.n > 0.0) {
        return Err(SirError::BadPopulation(params.n));
    }
    if !(0.0..=params.n).contains(&i0) {
        return Err(SirError::BadInitialInfected { i0, n: params.n });
    }
    check_rate("rho", params.rho, 1.0)?;
    match params.hazard {
        HazardForm::Linear { beta } => check_rate("beta", beta, f64::MAX)?,
        HazardForm::ContactBinomial { pi, c } => {
            check_rate("pi", pi, 1.0)?;
            check_rate("c", c, f64::MAX)?;
        }
    }
    Ok(())
}

/// Probability that a susceptible agent gets infected during one day of `c`
/// independent contacts when a share `infected_fraction` of the population is
/// infectious.
pub fn infection_probability(pi: f64, c: f64, infected_fraction: f64) -> f64 {
    let escape_per_contact = (1.0 - pi * infected_fraction).clamp(0.0, 1.0);
    1.0 - escape_per_contact.powf(c)
}

fn daily_hazard(hazard: HazardForm, infected_fraction: f64, contact_scale: f64) -> f64 {
    match hazard {
        HazardForm::Linear { beta } => (beta * contact_scale * infected_fraction).min(1.0),
        HazardForm::ContactBinomial { pi, c } => {
            infection_probability(pi, c * contact_scale, infected_fraction)
        }
    }
}

/// Rebalances the recovered count so that `fl(fl(s + i) + r)` equals `n`
/// exactly. After `n - (s + i)` the residual error is below one ulp of `n`,
/// and because either `s + i` or `r` is at least `n / 2`, stepping `r` by
/// ulps closes the gap within a few iterations.
fn balance_recovered(s: f64, i: f64, n: f64) -> f64 {
    let q = s + i;
    let mut r = (n - q).max(0.0);
    for _ in 0..8 {
        let sum = q + r;
        if sum == n {
            break;
        }
        r = if sum > n { r.next_down().max(0.0) } else { r.next_up() };
    }
    r
}

/// Runs the daily SIR recursion without any behavioral or policy response.
///
/// The returned series starts with the day-0 state and ends either at
/// `horizon` or on the first day the infected count reaches exactly zero.
pub fn simulate_sir(params: &SirParams, i0: f64, horizon: u32) -> Result<Vec<SirState>, SirError> {
    simulate_sir_with_policy(params, i0, horizon, None, None)
}

/// Daily SIR recursion with optional endogenous contact reduction and an
/// optional lockdown. Both act by scaling contacts: the behavioral response
/// multiplies them by α(I/N), the lockdown by (1 - share)² from its start
/// day. New infections on a day are drawn from that day's starting state.
pub fn simulate_sir_with_policy(
    params: &SirParams,
    i0: f64,
    horizon: u32,
    behavior: Option<&BehavioralParams>,
    lockdown: Option<&SirLockdown>,
) -> Result<Vec<SirState>, SirError> {
    validate(params, i0)?;
    if let Some(ld) = lockdown {
        check_rate("lockdown share", ld.share, 1.0)?;
    }
    let n = params.n;
    let mut s = n - i0;
    let mut i = i0;
    let mut out = Vec::with_capacity(horizon as usize + 1);
    out.push(SirState { day: 0, s, i, r: balance_recovered(s, i, n) });
    for day in 1..=horizon {
        if i == 0.0 {
            break;
        }
        let infected_fraction = i / n;
        let mut contact_scale = match behavior {
            Some(b) => alpha_response(infected_fraction, b),
            None => 1.0,
        };
        if let Some(ld) = lockdown {
            // The state at `day - 1` describes conditions during that day.
            if day - 1 >= ld.start_day {
                contact_scale *= (1.0 - ld.share) * (1.0 - ld.share);
            }
        }
        let new_infections = s * daily_hazard(params.hazard, infected_fraction, contact_scale);
        let recoveries = params.rho * i;
        s -= new_infections;
        i = (i + new_infections) - recoveries;
        out.push(SirState { day, s, i, r: balance_recovered(s, i, n) });
    }
    Ok(out)
}

/// Epidemic final size: the positive root of z = 1 - exp(-r0 · z).
///
/// Returns 0 for r0 <= 1 (and for non-finite input), where only the trivial
/// root exists. The root is bracketed on [1e-12, 1 - 1e-12] and bisected to
/// an interval width of 1e-12.
pub fn final_size(r0: f64) -> f64 {
    if !(r0 > 1.0) || !r0.is_finite() {
        return 0.0;
    }
    let f = |z: f64| 1.0 - (-r0 * z).exp() - z;
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-12;
    // f is positive just above the trivial root at 0 and negative at 1.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Peak infected share 1 - (1 + ln r0) / r0 of the continuous-time model.
pub fn peak_fraction(r0: f64) -> Result<f64, SirError> {
    if !(r0 >= 1.0) {
        return Err(SirError::PeakBelowThreshold(r0));
    }
    Ok(1.0 - (1.0 + r0.ln()) / r0)
}
