//! Gaussian model of balanced homodyne detection.
//!
//! A coherent state with real (signed) amplitude `r` mixed with a local
//! oscillator of amplitude `β` gives a photocount difference
//! `m ~ Normal(2βr, β² + r²)`. Bit 0 is decided iff `m ≥ m_c`.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::function::erf::{erf, erfc};

use crate::codec::binomial;
use crate::rates::ChannelProbs;
use crate::rng;
use crate::thermal::{RadialLaw, RadialSupport};
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 100_000;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// `100·√max(n̄, 1)`: large enough that the strong-oscillator approximation
/// error sits far below Monte-Carlo noise.
pub fn default_beta(n_bar: f64) -> f64 {
    100.0 * n_bar.max(1.0).sqrt()
}

/// Local-oscillator amplitude and decision cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneModel {
    beta: f64,
    m_c: f64,
}

impl HomodyneModel {
    pub fn new(beta: f64, m_c: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(HomodyneModel { beta, m_c })
    }

    /// Cutoff given in the normalised units `r_c = −m_c / (2β√n̄)`.
    pub fn from_r_c(beta: f64, n_bar: f64, r_c: f64) -> Result<Self> {
        Self::new(beta, m_c_from_r_c(beta, n_bar, r_c))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m_c(&self) -> f64 {
        self.m_c
    }

    pub fn r_c(&self, n_bar: f64) -> f64 {
        -self.m_c / (2.0 * self.beta * n_bar.sqrt())
    }
}

pub fn m_c_from_r_c(beta: f64, n_bar: f64, r_c: f64) -> f64 {
    -2.0 * beta * n_bar.sqrt() * r_c
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(
            "beta",
            format!("{beta} must be a finite value > 0"),
        ));
    }
    Ok(())
}

/// Sample count and seed for a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    samples: usize,
    seed: u64,
}

impl SimConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::invalid("samples", "need at least one sample"));
        }
        Ok(SimConfig { samples, seed })
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianOutcome {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianOutcome {
    /// `P(m < x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mean) / self.variance.sqrt())
    }

    /// `P(m ≥ x)`.
    pub fn sf(&self, x: f64) -> f64 {
        normal_cdf(-(x - self.mean) / self.variance.sqrt())
    }
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Outcome distribution for a single coherent amplitude `r` (signed).
pub fn outcome_law(r: f64, beta: f64) -> GaussianOutcome {
    GaussianOutcome {
        mean: 2.0 * beta * r,
        variance: beta * beta + r * r,
    }
}

/// Radial moments of a law and the resulting homodyne mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub mean_r: f64,
    pub mean_r2: f64,
    pub var_r: f64,
    pub mean_m: f64,
    pub var_m: f64,
}

/// Mean and variance of `m` when `r` is drawn from `law`:
/// `E m = 2β r̄` and `Var m = 4β²Δr² + β² + r²̄`.
pub fn ensemble_stats(law: &RadialLaw, beta: f64) -> Result<EnsembleStats> {
    check_beta(beta)?;
    let scale = law.n_bar().max(1e-300);
    let mean_r = law.expect(|r| r, 1e-14 * scale.sqrt())?;
    let mean_r2 = law.expect(|r| r * r, 1e-14 * scale)?;
    let var_r = mean_r2 - mean_r * mean_r;
    Ok(EnsembleStats {
        mean_r,
        mean_r2,
        var_r,
        mean_m: 2.0 * beta * mean_r,
        var_m: 4.0 * beta * beta * var_r + beta * beta + mean_r2,
    })
}

/// Equal-prior error probability for the pair `r₀ > r₁`:
/// `¼(2 + erf((m_c−2βr₀)/√(2(β²+r₀²))) − erf((m_c−2βr₁)/√(2(β²+r₁²))))`.
pub fn closed_form_perr_pair(r0: f64, r1: f64, beta: f64, m_c: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(r0 > r1) {
        return Err(Error::invalid(
            "r0",
            format!("need r0 > r1, got {r0} ≤ {r1}"),
        ));
    }
    let a0 = (m_c - 2.0 * beta * r0) / (2.0 * (beta * beta + r0 * r0)).sqrt();
    let a1 = (m_c - 2.0 * beta * r1) / (2.0 * (beta * beta + r1 * r1)).sqrt();
    Ok((0.25 * (2.0 + erf(a0) - erf(a1))).clamp(0.0, 0.5))
}

/// Cutoff minimising the weighted risk when both outcome variances are
/// approximated by `β²`:
/// `β(r₀+r₁) − β ln(1/f − 1) / (2(r₀−r₁))`.
///
/// `f` is the prior of bit 1, so a rarer bit 1 moves the cutoff towards the
/// bit-1 mean.
pub fn weighted_cutoff(r0: f64, r1: f64, beta: f64, f: f64) -> Result<f64> {
    check_beta(beta)?;
    if r0 == r1 {
        return Err(Error::invalid(
            "r0",
            "r0 and r1 coincide; no cutoff separates them",
        ));
    }
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::invalid("f", format!("{f} is outside (0, 1)")));
    }
    Ok(beta * (r0 + r1) - beta * (1.0 / f - 1.0).ln() / (2.0 * (r0 - r1)))
}

/// `(1−f)·P(m < m_c | r₀) + f·P(m ≥ m_c | r₁)`.
pub fn closed_form_perr_weighted(r0: f64, r1: f64, beta: f64, m_c: f64, f: f64) -> f64 {
    let a0 = (m_c - 2.0 * beta * r0) / (2.0 * (beta * beta + r0 * r0)).sqrt();
    let a1 = (m_c - 2.0 * beta * r1) / (2.0 * (beta * beta + r1 * r1)).sqrt();
    0.5 * ((1.0 - f) * (1.0 + erf(a0)) + f * (1.0 - erf(a1)))
}

/// Golden-section minimiser on a bracket from a coarse grid.
fn minimise<F: Fn(f64) -> f64>(risk: F, lo: f64, hi: f64, points: usize, tol: f64) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let best = (0..points)
        .map(|i| (i, risk(lo + step * i as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut a = lo + step * best.saturating_sub(1) as f64;
    let mut b = lo + step * (best + 1).min(points - 1) as f64;
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (risk(x1), risk(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = risk(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = risk(x2);
        }
    }
    let mid = 0.5 * (a + b);
    let grid_best = lo + step * best as f64;
    if risk(grid_best) < risk(mid) {
        grid_best
    } else {
        mid
    }
}

/// Cutoff minimising [`closed_form_perr_weighted`] numerically.
pub fn optimal_cutoff(r0: f64, r1: f64, beta: f64, f: f64) -> f64 {
    let s0 = (beta * beta + r0 * r0).sqrt();
    let s1 = (beta * beta + r1 * r1).sqrt();
    let (mu0, mu1) = (2.0 * beta * r0, 2.0 * beta * r1);
    let lo = mu0.min(mu1) - 12.0 * s0.max(s1);
    let hi = mu0.max(mu1) + 12.0 * s0.max(s1);
    // 1e-6 in units of the normalised radius.
    let tol = 1e-6 * 2.0 * beta;
    minimise(
        |m| closed_form_perr_weighted(r0, r1, beta, m, f),
        lo,
        hi,
        481,
        tol,
    )
}

/// Channel of a threshold homodyne receiver at the optimal cutoff.
pub fn pair_channel(r0: f64, r1: f64, beta: f64, f: f64) -> ChannelProbs {
    let m_c = optimal_cutoff(r0, r1, beta, f);
    let p00 = outcome_law(r0, beta).sf(m_c);
    let p01 = outcome_law(r1, beta).sf(m_c);
    ChannelProbs::new_unchecked(p00, p01, f)
}

/// Coefficients (by power of `r`) of the polynomial `F_k(r)` with
/// `⟨r|(a + a†)^k|r⟩ = F_k(r)`.
pub fn f_polynomial(k: u32) -> Vec<f64> {
    let mut coeffs = vec![0.0; k as usize + 1];
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let kf = fact(k);
    if k % 2 == 0 {
        let half = k / 2;
        for j in 0..=half {
            let c = kf * 2f64.powf(3.0 * j as f64 - half as f64) / (fact(2 * j) * fact(half - j));
            coeffs[2 * j as usize] = c;
        }
    } else {
        let half = (k - 1) / 2;
        for j in 0..=half {
            let exp = 3.0 * j as f64 - (k as f64 - 3.0) / 2.0;
            let c = kf * 2f64.powf(exp) / (fact(2 * j + 1) * fact(half - j));
            coeffs[2 * j as usize + 1] = c;
        }
    }
    coeffs
}

fn eval_poly(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

fn moment_tolerance(law: &RadialLaw, beta: f64, k: u32) -> f64 {
    let reach = 2.0 * beta * (3.0 * law.n_bar().sqrt() + 1.0) + beta;
    1e-13 * reach.powi(k as i32)
}

/// `E(m^k) ≈ β^k·E[F_k(r)]` over the radial law, the leading order in `β`.
pub fn moment_m(k: u32, law: &RadialLaw, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if k == 0 {
        return Err(Error::invalid("k", "moment order must be at least 1"));
    }
    let poly = f_polynomial(k);
    let tol = moment_tolerance(law, 1.0, k);
    Ok(beta.powi(k as i32) * law.expect(|r| eval_poly(&poly, r), tol)?)
}

/// Raw moment `E X^k` of `Normal(mean, var)`.
pub fn gaussian_raw_moment(k: u32, mean: f64, var: f64) -> f64 {
    let mut total = 0.0;
    let mut double_fact = 1.0; // (j−1)!! for even j
    for j in (0..=k).step_by(2) {
        if j >= 2 {
            double_fact *= (j - 1) as f64;
        }
        let c = binomial(k as u64, j as u64)
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::INFINITY);
        total += c * mean.powi((k - j) as i32) * var.powi(j as i32 / 2) * double_fact;
    }
    total
}

/// `E(m^k)` under the full Gaussian model, integrated over the radial law.
pub fn model_moment_m(k: u32, law: &RadialLaw, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let tol = moment_tolerance(law, beta, k);
    law.expect(
        |r| {
            let o = outcome_law(r, beta);
            gaussian_raw_moment(k, o.mean, o.variance)
        },
        tol,
    )
}

/// Central moment `Σ C(n,k)(−1)^{n−k} E[X^k] (E X)^{n−k}` from raw moments
/// `raw[k] = E[X^k]` (with `raw[0] = 1`).
pub fn central_moment(n: usize, raw: &[f64]) -> f64 {
    let mean = raw[1];
    (0..=n)
        .map(|k| {
            let c = binomial(n as u64, k as u64)
                .to_string()
                .parse::<f64>()
                .unwrap_or(f64::INFINITY);
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            sign * c * raw[k] * mean.powi((n - k) as i32)
        })
        .sum()
}

/// Generalised Markov bound on the equal-prior error probability for the
/// median split with bit 1 reflected:
/// `½[M_n(m₁)/(m_c − m̄₁)^n + M_n(m₀)/(m_c − m̄₀)^n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovBound {
    pub bound: f64,
    pub mean_m0: f64,
    pub mean_m1: f64,
}

pub fn markov_bound_perr(n_order: u32, n_bar: f64, beta: f64, m_c: f64) -> Result<MarkovBound> {
    check_beta(beta)?;
    if n_order == 0 || n_order % 2 != 0 {
        return Err(Error::invalid(
            "n",
            format!("{n_order} is not a positive even order"),
        ));
    }
    let law0 = RadialLaw::new(n_bar, RadialSupport::Left(0.5))?;
    let law1 = RadialLaw::new(n_bar, RadialSupport::RightFlipped(0.5))?;
    let raw = |law: &RadialLaw| -> Result<Vec<f64>> {
        let mut v = vec![1.0];
        for k in 1..=n_order {
            v.push(model_moment_m(k, law, beta)?);
        }
        Ok(v)
    };
    let raw0 = raw(&law0)?;
    let raw1 = raw(&law1)?;
    let (mean0, mean1) = (raw0[1], raw1[1]);
    if !(m_c > mean1 && m_c < mean0) {
        return Err(Error::invalid(
            "m_c",
            format!("{m_c} is not strictly between the means {mean1} and {mean0}"),
        ));
    }
    let n = n_order as usize;
    let term = |raw: &[f64], mean: f64| central_moment(n, raw) / (m_c - mean).powi(n_order as i32);
    Ok(MarkovBound {
        bound: 0.5 * (term(&raw1, mean1) + term(&raw0, mean0)),
        mean_m0: mean0,
        mean_m1: mean1,
    })
}

/// One cell of the error-probability surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub n_bar: f64,
    pub r_c: f64,
    pub p_err: f64,
    pub std_err: f64,
}

fn draw_bit_radius<R: Rng + ?Sized>(
    laws: &(RadialLaw, RadialLaw),
    f: f64,
    rng: &mut R,
) -> (bool, f64) {
    let one = rng.random::<f64>() < f;
    let r = if one {
        laws.1.sample(rng)
    } else {
        laws.0.sample(rng)
    };
    (one, r)
}

fn binomial_estimate(errors: usize, samples: usize) -> (f64, f64) {
    let p = errors as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

/// Empirical error probability over a grid of `(n̄, r_c)`, row-major in
/// `n̄`.
///
/// Bits are drawn with prior `f`, radii from the matching conditional law
/// (bit 1 reflected), and `m` from the Gaussian outcome law. Row `i` uses
/// random stream `i` and shares its draws across every `r_c`, so the shape
/// of a row is not blurred by independent noise per cell and the table does
/// not depend on the thread count. `beta = None` uses [`default_beta`] per
/// `n̄`.
pub fn simulate_perr_surface(
    n_bar_grid: &[f64],
    r_c_grid: &[f64],
    beta: Option<f64>,
    f: f64,
    cfg: &SimConfig,
) -> Result<Vec<SurfacePoint>> {
    if n_bar_grid.is_empty() {
        return Err(Error::Empty("n̄ grid"));
    }
    if r_c_grid.is_empty() {
        return Err(Error::Empty("r_c grid"));
    }
    if let Some(b) = beta {
        check_beta(b)?;
    }
    let laws = n_bar_grid
        .iter()
        .map(|&n| {
            Ok((
                RadialLaw::new(n, RadialSupport::Left(f))?,
                RadialLaw::new(n, RadialSupport::RightFlipped(f))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<SurfacePoint>> = (0..n_bar_grid.len())
        .into_par_iter()
        .map(|i| {
            let n_bar = n_bar_grid[i];
            let beta = beta.unwrap_or_else(|| default_beta(n_bar));
            let cutoffs: Vec<f64> = r_c_grid
                .iter()
                .map(|&r_c| m_c_from_r_c(beta, n_bar, r_c))
                .collect();
            let mut errors = vec![0usize; cutoffs.len()];
            let mut rng = rng::stream(cfg.seed, i as u64);
            for _ in 0..cfg.samples {
                let (one, r) = draw_bit_radius(&laws[i], f, &mut rng);
                let z: f64 = rng.sample(StandardNormal);
                let m = 2.0 * beta * r + (beta * beta + r * r).sqrt() * z;
                for (e, &m_c) in errors.iter_mut().zip(&cutoffs) {
                    if one == (m >= m_c) {
                        *e += 1;
                    }
                }
            }
            r_c_grid
                .iter()
                .zip(errors)
                .map(|(&r_c, e)| {
                    let (p_err, std_err) = binomial_estimate(e, cfg.samples);
                    SurfacePoint {
                        n_bar,
                        r_c,
                        p_err,
                        std_err,
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Expected error probability of the surface model at one point, integrated
/// over the radial laws.
pub fn ensemble_perr(n_bar: f64, r_c: f64, beta: f64, f: f64) -> Result<f64> {
    check_beta(beta)?;
    let m_c = m_c_from_r_c(beta, n_bar, r_c);
    let law0 = RadialLaw::new(n_bar, RadialSupport::Left(f))?;
    let law1 = RadialLaw::new(n_bar, RadialSupport::RightFlipped(f))?;
    let miss0 = law0.expect(|r| outcome_law(r, beta).cdf(m_c), 1e-13)?;
    let miss1 = law1.expect(|r| outcome_law(r, beta).sf(m_c), 1e-13)?;
    Ok((1.0 - f) * miss0 + f * miss1)
}

/// Empirical error probability for a fixed pair of amplitudes.
pub fn simulate_pair_perr(
    r0: f64,
    r1: f64,
    beta: f64,
    m_c: f64,
    f: f64,
    cfg: &SimConfig,
) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let chunks = 64usize;
    let per = cfg.samples.div_ceil(chunks);
    let errors: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = per.min(cfg.samples.saturating_sub(c * per));
            let mut rng = rng::stream(cfg.seed, c as u64);
            let mut errors = 0usize;
            for _ in 0..n {
                let one = rng.random::<f64>() < f;
                let r = if one { r1 } else { r0 };
                let z: f64 = rng.sample(StandardNormal);
                let m = 2.0 * beta * r + (beta * beta + r * r).sqrt() * z;
                if one == (m >= m_c) {
                    errors += 1;
                }
            }
            errors
        })
        .sum();
    Ok(binomial_estimate(errors, cfg.samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_law_examples() {
        let o = outcome_law(0.0, 3.0);
        assert_eq!((o.mean, o.variance), (0.0, 9.0));
        let o = outcome_law(1.0, 10.0);
        assert_eq!((o.mean, o.variance), (20.0, 101.0));
    }

    #[test]
    fn pair_perr_limits() {
        let p = closed_form_perr_pair(1.0, -1.0, 10.0, -1e6).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(closed_form_perr_pair(1.0, 1.0, 10.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_pair_matches_gaussian_overlap() {
        let (r, beta) = (0.7, 1e4);
        let p = closed_form_perr_pair(r, -r, beta, 0.0).unwrap();
        // Both errors equal Φ(−2βr/√(β²+r²)).
        let expected = 0.5 * erfc(2.0 * beta * r / (beta * beta + r * r).sqrt() / SQRT_2);
        assert!((p - expected).abs() < 1e-15);
    }

    #[test]
    fn weighted_reduces_to_pair() {
        let (r0, r1, beta) = (0.6, -1.3, 20.0);
        for m_c in [-30.0, -14.0, 0.0, 5.0] {
            let a = closed_form_perr_weighted(r0, r1, beta, m_c, 0.5);
            let b = closed_form_perr_pair(r0, r1, beta, m_c).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        // f → 0 and cutoff → −∞: always decide 0, never wrong.
        assert!(closed_form_perr_weighted(r0, r1, beta, -1e9, 1e-300) < 1e-200);
    }

    #[test]
    fn weighted_cutoff_examples() {
        let (r0, r1, beta) = (0.9, -1.4, 30.0);
        assert!((weighted_cutoff(r0, r1, beta, 0.5).unwrap() - beta * (r0 + r1)).abs() < 1e-12);
        let shift = weighted_cutoff(1.0, -1.0, 10.0, 0.25).unwrap();
        assert!((shift + 10.0 * 3f64.ln() / 4.0).abs() < 1e-12);
        assert!(weighted_cutoff(1.0, 1.0, 10.0, 0.3).is_err());
    }

    #[test]
    fn f_polynomial_low_orders() {
        assert_eq!(f_polynomial(1), vec![0.0, 2.0]);
        assert_eq!(f_polynomial(2), vec![1.0, 0.0, 4.0]);
        assert_eq!(f_polynomial(3), vec![0.0, 6.0, 0.0, 8.0]);
        assert_eq!(f_polynomial(4), vec![3.0, 0.0, 24.0, 0.0, 16.0]);
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_raw_moment(1, 2.0, 5.0), 2.0);
        assert_eq!(gaussian_raw_moment(2, 2.0, 5.0), 9.0);
        assert_eq!(gaussian_raw_moment(4, 0.0, 2.0), 12.0);
        let raw = [1.0, 2.0, 9.0, 2.0f64.powi(3) + 3.0 * 2.0 * 5.0];
        assert!((central_moment(2, &raw) - 5.0).abs() < 1e-12);
        assert!(central_moment(3, &raw).abs() < 1e-12);
    }

    #[test]
    fn markov_rejects_bad_inputs() {
        assert!(markov_bound_perr(3, 1.0, 100.0, 0.0).is_err());
        let mid = markov_bound_perr(2, 1.0, 100.0, -70.0).unwrap();
        assert!(markov_bound_perr(2, 1.0, 100.0, mid.mean_m0 + 1.0).is_err());
        assert!(markov_bound_perr(2, 1.0, 100.0, mid.mean_m1 - 1.0).is_err());
    }

    #[test]
    fn markov_order_two_is_chebyshev() {
        let (n_bar, beta) = (1.0, 100.0);
        let b = markov_bound_perr(2, n_bar, beta, -70.0).unwrap();
        let s0 = ensemble_stats(
            &RadialLaw::new(n_bar, RadialSupport::Left(0.5)).unwrap(),
            beta,
        )
        .unwrap();
        let s1 = ensemble_stats(
            &RadialLaw::new(n_bar, RadialSupport::RightFlipped(0.5)).unwrap(),
            beta,
        )
        .unwrap();
        let cheb =
            0.5 * (s0.var_m / (-70.0 - s0.mean_m).powi(2) + s1.var_m / (-70.0 - s1.mean_m).powi(2));
        assert!((b.bound - cheb).abs() < 1e-9 * cheb);
    }

    #[test]
    fn odd_moment_vanishes_for_symmetric_law() {
        // Mixing the left law with its reflection: odd moments cancel.
        let law = RadialLaw::new(1.3, RadialSupport::Full).unwrap();
        let m3 = moment_m(3, &law, 2.0).unwrap();
        // Reflected copy: F_3 is odd, so E over −r is −m3.
        let reflected = law
            .expect(|r| eval_poly(&f_polynomial(3), -r), 1e-12)
            .unwrap()
            * 8.0;
        assert!((m3 + reflected).abs() < 1e-9);
    }

    #[test]
    fn surface_is_deterministic() {
        let cfg = SimConfig::new(2000, 17).unwrap();
        let a = simulate_perr_surface(&[1.0, 2.0], &[0.3, 0.4], None, 0.5, &cfg).unwrap();
        let b = simulate_perr_surface(&[1.0, 2.0], &[0.3, 0.4], None, 0.5, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(simulate_perr_surface(&[], &[0.3], None, 0.5, &cfg).is_err());
    }

    #[test]
    fn optimal_cutoff_near_midpoint_for_equal_priors() {
        let (r0, r1, beta) = (0.5, -1.2, 100.0);
        let m = optimal_cutoff(r0, r1, beta, 0.5);
        // Unequal variances shift the optimum slightly off β(r₀+r₁).
        assert!((m - beta * (r0 + r1)).abs() < 0.5, "{m}");
    }
}
