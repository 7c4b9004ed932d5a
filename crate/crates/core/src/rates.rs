//! Communication and secret-key rates for the encoding schemes.

use rand::Rng;
use rayon::prelude::*;

use crate::codec::{capacity_per_symbol, entropy_bits};
use crate::discrimination::{
    distribution_channel, distribution_rate_no_key, helstrom_measurement_probs, helstrom_perr_pure,
    vertical_angle_perr_bound, PureStatePair,
};
use crate::homodyne::{closed_form_perr_weighted, default_beta, optimal_cutoff, outcome_law};
use crate::rng;
use crate::thermal::{RadialLaw, RadialSupport};
use crate::{Error, Result};

/// Tolerance for the agreement of the two key-rate expressions.
pub const KEY_FORM_TOL: f64 = 1e-12;

/// Negative values this small are rounding and only logged at debug level.
const ROUNDING_FLOOR: f64 = 1e-12;

fn clamp_logged(value: f64, what: &str, probs: &ChannelProbs) -> f64 {
    if value >= 0.0 {
        return value;
    }
    if value < -ROUNDING_FLOOR {
        log::warn!("negative {what} {value:e} clamped to 0 for {probs:?}");
    } else {
        log::debug!("negative {what} {value:e} clamped to 0 for {probs:?}");
    }
    0.0
}

pub const DEFAULT_PAIRS: usize = 256;

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("{p} is outside [0, 1]")));
    }
    Ok(entropy_bits(p))
}

/// `1 − h(p_err)`: capacity of a binary symmetric channel.
pub fn rate_from_perr(p_err: f64) -> f64 {
    1.0 - entropy_bits(p_err)
}

/// Transition probabilities of a binary channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelProbs {
    p00: f64,
    p01: f64,
    f: f64,
}

impl ChannelProbs {
    /// `p00 = P(decide 0 | sent 0)`, `p01 = P(decide 0 | sent 1)`, `f` the
    /// prior of bit 1.
    pub fn new(p00: f64, p01: f64, f: f64) -> Result<Self> {
        for (name, v) in [("p00", p00), ("p01", p01), ("f", f)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, format!("{v} is outside [0, 1]")));
            }
        }
        Ok(ChannelProbs { p00, p01, f })
    }

    /// For probabilities that are correct up to rounding; they are clamped.
    pub(crate) fn new_unchecked(p00: f64, p01: f64, f: f64) -> Self {
        ChannelProbs {
            p00: p00.clamp(0.0, 1.0),
            p01: p01.clamp(0.0, 1.0),
            f: f.clamp(0.0, 1.0),
        }
    }

    pub fn p00(&self) -> f64 {
        self.p00
    }

    pub fn p01(&self) -> f64 {
        self.p01
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    /// Probability of a wrong decision.
    pub fn p_err(&self) -> f64 {
        (1.0 - self.f) * (1.0 - self.p00) + self.f * self.p01
    }
}

/// Probability that the receiver decides 0.
pub fn mixture_q(probs: &ChannelProbs) -> f64 {
    (1.0 - probs.f) * probs.p00 + probs.f * probs.p01
}

fn conditional_entropy(probs: &ChannelProbs) -> f64 {
    probs.f * entropy_bits(probs.p01) + (1.0 - probs.f) * entropy_bits(probs.p00)
}

fn raw_rate(probs: &ChannelProbs) -> f64 {
    entropy_bits(mixture_q(probs)) - conditional_entropy(probs)
}

/// Mutual information `h(q) − [f·h(p01) + (1−f)·h(p00)]`, floored at 0.
pub fn rate_general(probs: &ChannelProbs) -> f64 {
    clamp_logged(raw_rate(probs), "rate", probs)
}

/// `h(f) − h(q) + f·h(p01) + (1−f)·h(p00)`, floored at 0.
pub fn key_rate_distribution(probs: &ChannelProbs) -> f64 {
    let k = entropy_bits(probs.f) - entropy_bits(mixture_q(probs)) + conditional_entropy(probs);
    clamp_logged(k, "key rate", probs)
}

/// `h(f) − R`, with `R` from [`rate_general`].
pub fn key_rate_complement(probs: &ChannelProbs) -> f64 {
    clamp_logged(
        entropy_bits(probs.f) - rate_general(probs),
        "key rate",
        probs,
    )
}

/// Key rate after checking that both expressions agree.
pub fn key_rate(probs: &ChannelProbs) -> f64 {
    let a = key_rate_distribution(probs);
    let b = key_rate_complement(probs);
    debug_assert!(
        (a - b).abs() <= KEY_FORM_TOL,
        "key forms disagree: {a} vs {b}"
    );
    a
}

/// Extra key, in bits, for choosing one of `M` pairs: `log₂(f(1−f)M²)`.
pub fn pairwise_key_overhead(f: f64, m: u64) -> Result<f64> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::invalid("f", format!("{f} is outside (0, 1)")));
    }
    if m < 2 {
        return Err(Error::invalid("M", format!("{m} is below 2")));
    }
    Ok((f * (1.0 - f) * (m as f64).powi(2)).log2())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub p_err: f64,
    pub rate: f64,
    pub key_rate: f64,
    /// `rate / key_rate`; `+∞` when no key is used and the rate is
    /// positive, 0 when both vanish.
    pub ratio: f64,
}

impl RateReport {
    pub fn new(p_err: f64, rate: f64, key_rate: f64) -> Self {
        RateReport {
            p_err,
            rate,
            key_rate,
            ratio: ratio(rate, key_rate),
        }
    }

    pub fn from_channel(probs: &ChannelProbs) -> Self {
        Self::new(probs.p_err(), rate_general(probs), key_rate(probs))
    }
}

fn ratio(rate: f64, key_rate: f64) -> f64 {
    if key_rate > 0.0 {
        rate / key_rate
    } else if rate > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Constant-weight Fock encoding at capacity, no key.
    FockCapacity,
    /// Median split of the radial law, no key, photon counting.
    DistributionNoKey,
    /// Split at an arbitrary prior with the key from the mutual information
    /// deficit.
    DistributionKeyed,
    /// Keyed phase-flip encoding, from the error-probability bound.
    VerticalAngle,
    /// Pairs drawn from the split laws, read out by homodyne detection.
    PairwiseHomodyne,
    /// Pairs drawn from the split laws, Helstrom measurement.
    PairwiseHelstrom,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::FockCapacity,
        Scheme::DistributionNoKey,
        Scheme::DistributionKeyed,
        Scheme::VerticalAngle,
        Scheme::PairwiseHomodyne,
        Scheme::PairwiseHelstrom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::FockCapacity => "fock",
            Scheme::DistributionNoKey => "distribution",
            Scheme::DistributionKeyed => "distribution_keyed",
            Scheme::VerticalAngle => "vertical_angle",
            Scheme::PairwiseHomodyne => "homodyne",
            Scheme::PairwiseHelstrom => "helstrom",
        }
    }

    /// Whether the prior `f` changes the result.
    pub fn uses_prior(&self) -> bool {
        matches!(
            self,
            Scheme::DistributionKeyed | Scheme::PairwiseHomodyne | Scheme::PairwiseHelstrom
        )
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| Error::invalid("scheme", format!("unknown scheme {s:?}")))
    }
}

/// Prior of bit 1 at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prior {
    Fixed(f64),
    /// `f = n̄/(n̄+1)`, the non-vacuum fraction of the thermal state, which
    /// makes `h(f)` equal the Fock capacity.
    ThermalMatched,
}

impl Prior {
    pub fn at(&self, n_bar: f64) -> f64 {
        match *self {
            Prior::Fixed(f) => f,
            Prior::ThermalMatched => n_bar / (n_bar + 1.0),
        }
    }
}

/// Settings shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// `None` uses [`default_beta`] per `n̄`.
    pub beta: Option<f64>,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            beta: None,
            pairs: DEFAULT_PAIRS,
            seed: 0,
        }
    }
}

/// Uniform pairs for the pairwise schemes. Mapping them through the
/// quantile functions keeps draws common across priors and schemes.
pub fn pair_uniforms(cfg: &SweepConfig, index: u64) -> Vec<(f64, f64)> {
    let mut rng = rng::stream(cfg.seed, index);
    (0..cfg.pairs)
        .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
        .collect()
}

fn check_prior(f: f64) -> Result<()> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::invalid("f", format!("{f} is outside (0, 1)")));
    }
    Ok(())
}

fn average(reports: &[RateReport]) -> RateReport {
    let n = reports.len() as f64;
    let p_err = reports.iter().map(|r| r.p_err).sum::<f64>() / n;
    let rate = reports.iter().map(|r| r.rate).sum::<f64>() / n;
    let key_rate = reports.iter().map(|r| r.key_rate).sum::<f64>() / n;
    RateReport::new(p_err, rate, key_rate)
}

fn pairwise(
    scheme: Scheme,
    n_bar: f64,
    f: f64,
    beta: f64,
    uniforms: &[(f64, f64)],
) -> Result<RateReport> {
    if uniforms.is_empty() {
        return Err(Error::Empty("pair draws"));
    }
    let law0 = RadialLaw::new(n_bar, RadialSupport::Left(f))?;
    let law1 = RadialLaw::new(n_bar, RadialSupport::RightFlipped(f))?;
    let reports = uniforms
        .iter()
        .map(|&(u0, u1)| {
            let (r0, r1) = (law0.quantile(u0), law1.quantile(u1));
            if scheme == Scheme::PairwiseHelstrom {
                let pair = PureStatePair::from_signed(r0, r1, f)?;
                let probs = helstrom_measurement_probs(&pair);
                let p_err = helstrom_perr_pure(&pair);
                Ok(RateReport::new(
                    p_err,
                    rate_general(&probs),
                    key_rate(&probs),
                ))
            } else {
                if r0 == r1 {
                    // Only at n̄ = 0: both amplitudes vanish.
                    let probs = ChannelProbs::new_unchecked(1.0, 1.0, f);
                    return Ok(RateReport::from_channel(&probs));
                }
                let m_c = optimal_cutoff(r0, r1, beta, f);
                let probs = ChannelProbs::new_unchecked(
                    outcome_law(r0, beta).sf(m_c),
                    outcome_law(r1, beta).sf(m_c),
                    f,
                );
                let p_err = closed_form_perr_weighted(r0, r1, beta, m_c, f);
                Ok(RateReport::new(
                    p_err,
                    rate_general(&probs),
                    key_rate(&probs),
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(average(&reports))
}

/// One scheme at one `(n̄, f)`. `uniforms` feeds the pairwise schemes and
/// is ignored by the others.
pub fn evaluate(
    scheme: Scheme,
    n_bar: f64,
    f: f64,
    beta: f64,
    uniforms: &[(f64, f64)],
) -> Result<RateReport> {
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(Error::invalid(
            "n_bar",
            format!("{n_bar} is not a finite value ≥ 0"),
        ));
    }
    match scheme {
        Scheme::FockCapacity => Ok(RateReport::new(0.0, capacity_per_symbol(n_bar), 0.0)),
        Scheme::DistributionNoKey => distribution_rate_no_key(n_bar),
        Scheme::DistributionKeyed => {
            check_prior(f)?;
            Ok(RateReport::from_channel(&distribution_channel(n_bar, f)?))
        }
        Scheme::VerticalAngle => {
            let p_err = vertical_angle_perr_bound(n_bar);
            let rate = rate_from_perr(p_err);
            Ok(RateReport::new(p_err, rate, 1.0 - rate))
        }
        Scheme::PairwiseHomodyne | Scheme::PairwiseHelstrom => {
            check_prior(f)?;
            pairwise(scheme, n_bar, f, beta, uniforms)
        }
    }
}

/// Reports for one scheme over an `n̄` grid, in grid order. Grid point `i`
/// draws its pairs from stream `i`.
pub fn scheme_sweep(
    scheme: Scheme,
    n_bar_grid: &[f64],
    prior: Prior,
    cfg: &SweepConfig,
) -> Result<Vec<RateReport>> {
    if n_bar_grid.is_empty() {
        return Err(Error::Empty("n̄ grid"));
    }
    n_bar_grid
        .par_iter()
        .enumerate()
        .map(|(i, &n_bar)| {
            let beta = cfg.beta.unwrap_or_else(|| default_beta(n_bar));
            let uniforms = if matches!(scheme, Scheme::PairwiseHomodyne | Scheme::PairwiseHelstrom)
            {
                pair_uniforms(cfg, i as u64)
            } else {
                Vec::new()
            };
            evaluate(scheme, n_bar, prior.at(n_bar), beta, &uniforms)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Rate,
    RatePerKey,
}

fn score(objective: Objective, report: &RateReport) -> (f64, f64) {
    match objective {
        Objective::Rate => (report.rate, report.ratio),
        Objective::RatePerKey => (report.ratio, report.rate),
    }
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Prior of bit 1 maximising the objective, from a grid over
/// `[0.01, 0.99]` refined by golden-section search. The pair draws are
/// fixed (stream `index`) so every candidate sees the same pairs.
pub fn optimize_f(
    scheme: Scheme,
    n_bar: f64,
    objective: Objective,
    cfg: &SweepConfig,
    index: u64,
) -> Result<(f64, RateReport)> {
    if !scheme.uses_prior() {
        return Err(Error::invalid(
            "scheme",
            format!("{} does not depend on f", scheme.name()),
        ));
    }
    let beta = cfg.beta.unwrap_or_else(|| default_beta(n_bar));
    let uniforms = pair_uniforms(cfg, index);
    let eval = |f: f64| evaluate(scheme, n_bar, f, beta, &uniforms);
    let grid: Vec<f64> = (1..=99).map(|i| i as f64 / 100.0).collect();
    let reports = grid
        .par_iter()
        .map(|&f| eval(f))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate() {
        if better(score(objective, r), score(objective, &reports[best])) {
            best = i;
        }
    }
    let (mut f_best, mut r_best) = (grid[best], reports[best]);
    if !score(objective, &r_best).0.is_finite() {
        return Ok((f_best, r_best));
    }
    let golden = 0.618_033_988_749_894_8;
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];
    let mut x1 = b - golden * (b - a);
    let mut x2 = a + golden * (b - a);
    let (mut r1, mut r2) = (eval(x1)?, eval(x2)?);
    while b - a > 1e-6 {
        if !better(score(objective, &r2), score(objective, &r1)) {
            b = x2;
            x2 = x1;
            r2 = r1;
            x1 = b - golden * (b - a);
            r1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            r1 = r2;
            x2 = a + golden * (b - a);
            r2 = eval(x2)?;
        }
    }
    for (f, r) in [(x1, r1), (x2, r2)] {
        if better(score(objective, &r), score(objective, &r_best)) {
            f_best = f;
            r_best = r;
        }
    }
    Ok((f_best, r_best))
}
