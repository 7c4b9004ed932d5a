//! Thermal and coherent states in a truncated Fock basis.
//!
//! Everything here is diagonal in the photon-number basis, except the
//! discretized-circle check which builds the full matrix at small cutoff.
//! The mean photon number `n_bar` is the only channel parameter.

use std::f64::consts::{LN_2, TAU};

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::quadrature;
use crate::rng;
use crate::{Error, Result};

/// Largest probability mass allowed beyond a Fock cutoff.
pub const TAIL_EPS: f64 = 1e-12;

/// Accumulated rounding tolerated when a truncated distribution sums past 1.
const ROUNDING_SLACK: f64 = 1e-13;

const QUAD_TOL: f64 = 1e-12;

/// Smallest cutoff whose thermal tail `(n̄/(n̄+1))^cutoff` is below `eps`.
pub fn thermal_cutoff(n_bar: f64, eps: f64) -> usize {
    if n_bar <= 0.0 {
        return 1;
    }
    let ratio = n_bar / (n_bar + 1.0);
    let n = (eps.ln() / ratio.ln()).ceil();
    (n.max(1.0) as usize).max(1)
}

/// Smallest cutoff whose Poisson(`lambda`) tail mass is below `eps`.
pub fn poisson_cutoff(lambda: f64, eps: f64) -> usize {
    if lambda <= 0.0 {
        return 1;
    }
    let mut cdf = 0.0;
    let mut n = 0usize;
    loop {
        cdf += poisson_pmf(lambda, n);
        n += 1;
        if n as f64 > lambda && 1.0 - cdf < eps {
            return n;
        }
    }
}

fn poisson_pmf(lambda: f64, n: usize) -> f64 {
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    (-lambda + nf * lambda.ln() - ln_gamma(nf + 1.0)).exp()
}

/// Poisson probabilities `0..cutoff`; no normalisation check.
pub(crate) fn poisson_row(lambda: f64, cutoff: usize) -> Vec<f64> {
    let mut row = vec![0.0; cutoff];
    if cutoff == 0 {
        return row;
    }
    if lambda == 0.0 {
        row[0] = 1.0;
        return row;
    }
    if lambda < 500.0 {
        let mut p = (-lambda).exp();
        for (n, slot) in row.iter_mut().enumerate() {
            if n > 0 {
                p *= lambda / n as f64;
            }
            *slot = p;
        }
    } else {
        for (n, slot) in row.iter_mut().enumerate() {
            *slot = poisson_pmf(lambda, n);
        }
    }
    row
}

/// Mean photon number of a thermal mode and the Fock truncation used for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalModel {
    n_bar: f64,
    cutoff: usize,
}

impl ThermalModel {
    /// Model with the smallest cutoff meeting [`TAIL_EPS`].
    pub fn new(n_bar: f64) -> Result<Self> {
        check_n_bar(n_bar)?;
        Ok(ThermalModel {
            n_bar,
            cutoff: thermal_cutoff(n_bar, TAIL_EPS),
        })
    }

    /// Model with an explicit cutoff. Too small a cutoff is reported when
    /// the distribution is built.
    pub fn with_cutoff(n_bar: f64, cutoff: usize) -> Result<Self> {
        check_n_bar(n_bar)?;
        if cutoff == 0 {
            return Err(Error::invalid("cutoff", "must be at least 1"));
        }
        Ok(ThermalModel { n_bar, cutoff })
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `n̄ / (n̄ + 1)`, the geometric ratio of the Fock weights.
    pub fn ratio(&self) -> f64 {
        self.n_bar / (self.n_bar + 1.0)
    }
}

fn check_n_bar(n_bar: f64) -> Result<()> {
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(Error::invalid(
            "n_bar",
            format!("{n_bar} is not a finite value ≥ 0"),
        ));
    }
    Ok(())
}

fn check_fraction(f: f64) -> Result<()> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::invalid("f", format!("{f} is outside (0, 1)")));
    }
    Ok(())
}

/// Probability vector over Fock numbers `0..cutoff` of a state diagonal in
/// the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDiagonalState {
    probs: Vec<f64>,
}

impl NumberDiagonalState {
    /// Validates non-negativity and that the missing tail is within
    /// [`TAIL_EPS`].
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("probability vector"));
        }
        if let Some(bad) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::invalid(
                "probs",
                format!("entry {bad} is not a probability"),
            ));
        }
        let tail = 1.0 - probs.iter().sum::<f64>();
        if tail > TAIL_EPS || tail < -ROUNDING_SLACK {
            return Err(Error::Truncation {
                cutoff: probs.len(),
                tail,
                eps: TAIL_EPS,
            });
        }
        Ok(NumberDiagonalState { probs })
    }

    /// The vacuum `|0⟩` at the given cutoff.
    pub fn vacuum(cutoff: usize) -> Self {
        let mut probs = vec![0.0; cutoff.max(1)];
        probs[0] = 1.0;
        NumberDiagonalState { probs }
    }

    /// The Fock state `|n⟩`; `cutoff` must exceed `n`.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::invalid(
                "n",
                format!("{n} is not below cutoff {cutoff}"),
            ));
        }
        let mut probs = vec![0.0; cutoff];
        probs[n] = 1.0;
        Ok(NumberDiagonalState { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cutoff(&self) -> usize {
        self.probs.len()
    }

    /// `1 − Σ p_n`.
    pub fn tail_mass(&self) -> f64 {
        1.0 - self.probs.iter().sum::<f64>()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Same state with zeros appended up to `cutoff`. Never shrinks.
    pub fn padded(&self, cutoff: usize) -> Self {
        let mut probs = self.probs.clone();
        if cutoff > probs.len() {
            probs.resize(cutoff, 0.0);
        }
        NumberDiagonalState { probs }
    }

    /// Entrywise convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, w: f64, other: &Self) -> Result<Self> {
        same_cutoff(self, other)?;
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| w * a + (1.0 - w) * b)
            .collect();
        Ok(NumberDiagonalState { probs })
    }
}

fn same_cutoff(p: &NumberDiagonalState, q: &NumberDiagonalState) -> Result<()> {
    if p.cutoff() != q.cutoff() {
        return Err(Error::CutoffMismatch(p.cutoff(), q.cutoff()));
    }
    Ok(())
}

/// Coherent amplitude `α = r·e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude {
    r: f64,
    theta: f64,
}

impl CoherentAmplitude {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid(
                "r",
                format!("{r} is not a finite value ≥ 0"),
            ));
        }
        Ok(CoherentAmplitude {
            r,
            theta: theta.rem_euclid(TAU),
        })
    }

    /// Real amplitude on the θ = 0 axis; negative values get phase π.
    pub fn from_signed(x: f64) -> Result<Self> {
        if x < 0.0 {
            Self::new(-x, std::f64::consts::PI)
        } else {
            Self::new(x, 0.0)
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Which part of the Rayleigh radial density a law covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialSupport {
    /// The whole density on `[0, ∞)`.
    Full,
    /// `[0, r_f)`, carrying mass `1 − f`.
    Left(f64),
    /// `[r_f, ∞)`, carrying mass `f`.
    Right(f64),
    /// The `Right(f)` law reflected to `(−∞, −r_f]`.
    RightFlipped(f64),
}

/// Rayleigh density `p(r) = (2/n̄)·r·e^{−r²/n̄}`, possibly conditioned on one
/// side of the split radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLaw {
    n_bar: f64,
    support: RadialSupport,
}

impl RadialLaw {
    pub fn new(n_bar: f64, support: RadialSupport) -> Result<Self> {
        check_n_bar(n_bar)?;
        match support {
            RadialSupport::Full => {}
            RadialSupport::Left(f) | RadialSupport::Right(f) | RadialSupport::RightFlipped(f) => {
                check_fraction(f)?
            }
        }
        Ok(RadialLaw { n_bar, support })
    }

    pub fn full(n_bar: f64) -> Result<Self> {
        Self::new(n_bar, RadialSupport::Full)
    }

    /// Conditional law of bit `bit` for a split with right-tail mass `f`.
    /// Bit 1 is reflected when `flipped` is set.
    pub fn for_bit(n_bar: f64, f: f64, bit: u8, flipped: bool) -> Result<Self> {
        let support = match (bit, flipped) {
            (0, _) => RadialSupport::Left(f),
            (1, false) => RadialSupport::Right(f),
            (1, true) => RadialSupport::RightFlipped(f),
            _ => return Err(Error::invalid("bit", format!("{bit} is not 0 or 1"))),
        };
        Self::new(n_bar, support)
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn support(&self) -> RadialSupport {
        self.support
    }

    /// Unconditional Rayleigh mass of the covered region.
    pub fn mass(&self) -> f64 {
        match self.support {
            RadialSupport::Full => 1.0,
            RadialSupport::Left(f) => 1.0 - f,
            RadialSupport::Right(f) | RadialSupport::RightFlipped(f) => f,
        }
    }

    fn split(&self) -> f64 {
        match self.support {
            RadialSupport::Full => 0.0,
            RadialSupport::Left(f) | RadialSupport::Right(f) | RadialSupport::RightFlipped(f) => {
                // f was validated at construction.
                (self.n_bar * (1.0 / f).ln()).sqrt()
            }
        }
    }

    /// Signed bounds of the support.
    pub fn bounds(&self) -> (f64, f64) {
        let rf = self.split();
        match self.support {
            RadialSupport::Full => (0.0, f64::INFINITY),
            RadialSupport::Left(_) => (0.0, rf),
            RadialSupport::Right(_) => (rf, f64::INFINITY),
            RadialSupport::RightFlipped(_) => (f64::NEG_INFINITY, -rf),
        }
    }

    /// Conditional density at signed radius `r`.
    pub fn density(&self, r: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if self.n_bar == 0.0 || r < lo || r > hi {
            return 0.0;
        }
        let a = r.abs();
        2.0 / self.n_bar * a * (-a * a / self.n_bar).exp() / self.mass()
    }

    /// Inverse conditional CDF. For the reflected law `u` runs from the
    /// split radius outwards.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.n_bar;
        // Rayleigh survival S(r) = e^{−r²/n̄}; solve S(r) = s.
        let from_survival = |s: f64| (-n * s.ln()).max(0.0).sqrt();
        match self.support {
            RadialSupport::Full => from_survival(1.0 - u),
            RadialSupport::Left(f) => from_survival(1.0 - u * (1.0 - f)),
            RadialSupport::Right(f) => from_survival(f * (1.0 - u)),
            RadialSupport::RightFlipped(f) => -from_survival(f * (1.0 - u)),
        }
    }

    /// Draws one radius by inverse-CDF transform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }

    /// `E[g(r)]` under the conditional law, by quadrature in `t = |r|/√n̄`.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G, abs_tol: f64) -> Result<f64> {
        if self.n_bar == 0.0 {
            return Ok(g(0.0));
        }
        let scale = self.n_bar.sqrt();
        let sign = if matches!(self.support, RadialSupport::RightFlipped(_)) {
            -1.0
        } else {
            1.0
        };
        let tf = self.split() / scale;
        let weight = |t: f64| 2.0 * t * (-t * t).exp() / self.mass();
        let integrand = |t: f64| weight(t) * g(sign * scale * t);
        match self.support {
            RadialSupport::Left(_) => quadrature::integrate(integrand, 0.0, tf, abs_tol),
            // 2t·e^{−t²} is below 1e-30 past t = 9.
            _ => quadrature::integrate(integrand, tf, tf.max(0.0) + 9.0, abs_tol),
        }
    }
}

/// Geometric Fock weights of the thermal state.
pub fn thermal_fock_distribution(model: &ThermalModel) -> Result<NumberDiagonalState> {
    let probs = thermal_row(model.n_bar, model.cutoff);
    NumberDiagonalState::from_probs(probs)
}

fn thermal_row(n_bar: f64, cutoff: usize) -> Vec<f64> {
    let ratio = n_bar / (n_bar + 1.0);
    let mut p = 1.0 / (n_bar + 1.0);
    (0..cutoff)
        .map(|_| {
            let v = p;
            p *= ratio;
            v
        })
        .collect()
}

/// Median of the Rayleigh radial law, `√(n̄ ln 2)`.
pub fn rayleigh_median(n_bar: f64) -> f64 {
    (n_bar * LN_2).sqrt()
}

/// Radius `r_f = √(n̄ ln(1/f))` with Rayleigh mass `f` beyond it.
pub fn split_radius(n_bar: f64, f: f64) -> Result<f64> {
    check_n_bar(n_bar)?;
    check_fraction(f)?;
    Ok((n_bar * (1.0 / f).ln()).sqrt())
}

pub fn sample_radius<R: Rng + ?Sized>(law: &RadialLaw, rng: &mut R) -> f64 {
    law.sample(rng)
}

/// Photon statistics of `|r⟩`: Poisson with mean `r²`.
pub fn coherent_fock_distribution(r: f64, cutoff: usize) -> Result<NumberDiagonalState> {
    if !(r.is_finite()) {
        return Err(Error::invalid("r", "must be finite"));
    }
    NumberDiagonalState::from_probs(poisson_row(r * r, cutoff))
}

/// Uniform mixture of phase-randomised coherent states with the given radii.
pub fn phase_averaged_mixture(radii: &[f64], cutoff: usize) -> Result<NumberDiagonalState> {
    NumberDiagonalState::from_probs(mixture_row(radii, cutoff)?)
}

fn mixture_row(radii: &[f64], cutoff: usize) -> Result<Vec<f64>> {
    if radii.is_empty() {
        return Err(Error::Empty("radii"));
    }
    let mut acc = vec![0.0; cutoff];
    for r in radii {
        for (a, p) in acc.iter_mut().zip(poisson_row(r * r, cutoff)) {
            *a += p;
        }
    }
    let m = radii.len() as f64;
    acc.iter_mut().for_each(|a| *a /= m);
    Ok(acc)
}

/// Density matrix `(1/ML) Σ_{j,k} |r_j e^{2πik/L}⟩⟨·|` truncated to `cutoff`.
pub fn discretized_circle_matrix(
    radii: &[f64],
    phases: usize,
    cutoff: usize,
) -> Result<DMatrix<Complex64>> {
    if radii.is_empty() {
        return Err(Error::Empty("radii"));
    }
    if phases == 0 {
        return Err(Error::invalid("L", "need at least one phase"));
    }
    let ln_fact: Vec<f64> = (0..cutoff).map(|n| ln_gamma(n as f64 + 1.0)).collect();
    let mut rho = DMatrix::<Complex64>::zeros(cutoff, cutoff);
    for &r in radii {
        let r = r.abs();
        for k in 0..phases {
            let theta = TAU * k as f64 / phases as f64;
            let ket: Vec<Complex64> = (0..cutoff)
                .map(|n| {
                    let mag = if r == 0.0 {
                        if n == 0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        (-r * r / 2.0 + n as f64 * r.ln() - 0.5 * ln_fact[n]).exp()
                    };
                    Complex64::from_polar(mag, theta * n as f64)
                })
                .collect();
            for i in 0..cutoff {
                for j in 0..cutoff {
                    rho[(i, j)] += ket[i] * ket[j].conj();
                }
            }
        }
    }
    let norm = (radii.len() * phases) as f64;
    Ok(rho.map(|z| z / norm))
}

/// Diagonal of [`discretized_circle_matrix`].
pub fn discretized_circle_state(
    radii: &[f64],
    phases: usize,
    cutoff: usize,
) -> Result<NumberDiagonalState> {
    let rho = discretized_circle_matrix(radii, phases, cutoff)?;
    NumberDiagonalState::from_probs((0..cutoff).map(|n| rho[(n, n)].re).collect())
}

/// Cutoff at which both split components of `(n̄, f)` meet [`TAIL_EPS`],
/// with half the budget left for quadrature error.
pub fn component_cutoff(n_bar: f64, f: f64) -> usize {
    thermal_cutoff(n_bar, 0.5 * TAIL_EPS * f.min(1.0 - f))
}

/// Fock weights of the phase-averaged coherent mixture over one side of the
/// split radius: `∫ p(r | bit)·Poisson_n(r²) dr`, evaluated by quadrature.
pub fn split_component_state(
    n_bar: f64,
    f: f64,
    bit: u8,
    cutoff: usize,
) -> Result<NumberDiagonalState> {
    let law = RadialLaw::for_bit(n_bar, f, bit, false)?;
    if n_bar == 0.0 {
        return Ok(NumberDiagonalState::vacuum(cutoff));
    }
    let tf = (1.0 / f).ln().sqrt();
    let mass = law.mass();
    let c = 1.0 + n_bar;
    // Per-entry errors add up over the cutoff; keep their sum well inside
    // the tail budget.
    let tol = QUAD_TOL.min(0.01 * TAIL_EPS * mass / cutoff as f64);
    let probs = (0..cutoff)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let ln_fact = ln_gamma(nf + 1.0);
            // 2t·e^{−t²}·Poisson_n(n̄t²) with r = √n̄·t.
            let integrand = |t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                let log_poisson_part = if n == 0 {
                    0.0
                } else {
                    nf * (n_bar * t * t).ln() - ln_fact
                };
                2.0 * t * (-c * t * t + log_poisson_part).exp()
            };
            let value = if bit == 0 {
                quadrature::integrate(integrand, 0.0, tf, tol)?
            } else {
                let peak = ((nf + 0.5) / c).sqrt();
                let hi = tf.max(peak) + 9.0 / c.sqrt();
                quadrature::integrate(integrand, tf, hi, tol)?
            };
            Ok(value / mass)
        })
        .collect::<Result<Vec<f64>>>()?;
    NumberDiagonalState::from_probs(probs)
}

/// `(Σ √(p_n q_n))²`, the fidelity of two commuting states.
pub fn fidelity_diagonal(p: &NumberDiagonalState, q: &NumberDiagonalState) -> Result<f64> {
    same_cutoff(p, q)?;
    let s: f64 = p
        .probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(s * s)
}

/// `½ Σ |p_n − q_n|`.
pub fn trace_distance_diagonal(p: &NumberDiagonalState, q: &NumberDiagonalState) -> Result<f64> {
    same_cutoff(p, q)?;
    Ok(0.5
        * p.probs
            .iter()
            .zip(&q.probs)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Monte-Carlo estimate of `√F` between the thermal state and a mixture of
/// `M` phase-randomised coherent states with Rayleigh radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEstimate {
    pub mean_sqrt_fidelity: f64,
    pub std_err: f64,
    pub ensembles: usize,
}

pub fn mc_fidelity_bound(
    n_bar: f64,
    m: usize,
    ensembles: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    check_n_bar(n_bar)?;
    if m == 0 {
        return Err(Error::invalid("M", "need at least one radius per ensemble"));
    }
    if ensembles == 0 {
        return Err(Error::invalid("ensembles", "need at least one ensemble"));
    }
    let law = RadialLaw::full(n_bar)?;
    let base_cutoff = thermal_cutoff(n_bar, TAIL_EPS);
    let values = (0..ensembles)
        .into_par_iter()
        .map(|e| {
            let mut rng = rng::stream(seed, e as u64);
            let radii: Vec<f64> = (0..m).map(|_| law.sample(&mut rng)).collect();
            let max_lambda = radii.iter().map(|r| r * r).fold(0.0, f64::max);
            let cutoff = base_cutoff.max(poisson_cutoff(max_lambda, TAIL_EPS));
            let mixture = mixture_row(&radii, cutoff)?;
            let thermal = thermal_row(n_bar, cutoff);
            Ok(mixture
                .iter()
                .zip(&thermal)
                .map(|(a, b)| (a * b).sqrt())
                .sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    debug!("mc_fidelity_bound n_bar={n_bar} M={m}: mean √F = {mean}");
    Ok(FidelityEstimate {
        mean_sqrt_fidelity: mean,
        std_err: (var / k).sqrt(),
        ensembles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_thermal() {
        let s = thermal_fock_distribution(&ThermalModel::new(0.0).unwrap()).unwrap();
        assert_eq!(s.probs(), &[1.0]);
    }

    #[test]
    fn thermal_at_one_photon_halves() {
        let s = thermal_fock_distribution(&ThermalModel::new(1.0).unwrap()).unwrap();
        for (n, p) in s.probs().iter().enumerate() {
            assert!(close(*p, 0.5f64.powi(n as i32 + 1), 1e-16));
        }
    }

    #[test]
    fn thermal_tail_meets_tolerance() {
        let model = ThermalModel::new(5.0).unwrap();
        let s = thermal_fock_distribution(&model).unwrap();
        // Geometric tail beyond the cutoff is ratio^cutoff.
        let tail = (5.0f64 / 6.0).powi(model.cutoff() as i32);
        assert!(tail < TAIL_EPS);
        assert!(s.probs().iter().sum::<f64>() >= 1.0 - 1e-12);
        // One fewer entry would not do.
        assert!((5.0f64 / 6.0).powi(model.cutoff() as i32 - 1) >= TAIL_EPS);
    }

    #[test]
    fn short_cutoff_is_a_truncation_error() {
        let model = ThermalModel::with_cutoff(5.0, 10).unwrap();
        assert!(matches!(
            thermal_fock_distribution(&model),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn negative_n_bar_rejected() {
        assert!(ThermalModel::new(-0.1).is_err());
    }

    #[test]
    fn median_and_split_radius() {
        assert_eq!(rayleigh_median(0.0), 0.0);
        assert!(close(rayleigh_median(4.0), 2.0 * LN_2.sqrt(), 1e-15));
        assert!(close(
            split_radius(3.0, 0.5).unwrap(),
            rayleigh_median(3.0),
            1e-15
        ));
        assert!(close(
            split_radius(1.0, 0.25).unwrap(),
            4f64.ln().sqrt(),
            1e-15
        ));
        assert!(split_radius(1.0, 1.0 - 1e-15).unwrap() < 1e-7);
        assert!(split_radius(1.0, 0.0).is_err());
        assert!(split_radius(1.0, 1.0).is_err());
    }

    #[test]
    fn samples_respect_supports() {
        let mut rng = rng::stream(11, 0);
        let rh = rayleigh_median(1.0);
        let left = RadialLaw::new(1.0, RadialSupport::Left(0.5)).unwrap();
        let flipped = RadialLaw::new(1.0, RadialSupport::RightFlipped(0.5)).unwrap();
        for _ in 0..10_000 {
            let a = left.sample(&mut rng);
            assert!((0.0..rh).contains(&a));
            let b = flipped.sample(&mut rng);
            assert!(b <= -rh + 1e-15);
        }
    }

    #[test]
    fn coherent_statistics_are_poisson() {
        let vac = coherent_fock_distribution(0.0, 4).unwrap();
        assert_eq!(vac.probs(), &[1.0, 0.0, 0.0, 0.0]);
        let s = coherent_fock_distribution(1.0, 30).unwrap();
        let mut fact = 1.0;
        for (n, p) in s.probs().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!(close(*p, (-1f64).exp() / fact, 1e-16));
        }
        let n_bar: f64 = 2.5;
        let s = coherent_fock_distribution(n_bar.sqrt(), poisson_cutoff(n_bar, TAIL_EPS)).unwrap();
        assert!(close(s.mean_photon_number(), n_bar, 1e-10));
    }

    #[test]
    fn coherent_truncation_detected() {
        assert!(coherent_fock_distribution(3.0, 5).is_err());
    }

    #[test]
    fn mixture_edge_cases() {
        assert_eq!(
            phase_averaged_mixture(&[0.0], 3).unwrap().probs(),
            &[1.0, 0.0, 0.0]
        );
        assert!(phase_averaged_mixture(&[], 3).is_err());
        let a = phase_averaged_mixture(&[1.2, 1.2], 40).unwrap();
        let b = phase_averaged_mixture(&[1.2], 40).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            assert!(close(*x, *y, 1e-16));
        }
    }

    #[test]
    fn discretized_single_phase_is_plain_coherent() {
        let d = discretized_circle_state(&[0.7], 1, 25).unwrap();
        let c = coherent_fock_distribution(0.7, 25).unwrap();
        for (x, y) in d.probs().iter().zip(c.probs()) {
            assert!(close(*x, *y, 1e-15));
        }
    }

    #[test]
    fn fidelity_and_trace_distance_basics() {
        let t = thermal_fock_distribution(&ThermalModel::new(1.0).unwrap()).unwrap();
        let vac = NumberDiagonalState::vacuum(t.cutoff());
        assert!(close(fidelity_diagonal(&t, &t).unwrap(), 1.0, 1e-11));
        assert!(close(fidelity_diagonal(&vac, &t).unwrap(), 0.5, 1e-15));
        assert_eq!(
            fidelity_diagonal(&vac, &t).unwrap(),
            fidelity_diagonal(&t, &vac).unwrap()
        );
        assert_eq!(trace_distance_diagonal(&t, &t).unwrap(), 0.0);
        let one = NumberDiagonalState::fock(1, 2).unwrap();
        assert_eq!(
            trace_distance_diagonal(&NumberDiagonalState::vacuum(2), &one).unwrap(),
            1.0
        );
        assert!(matches!(
            fidelity_diagonal(&vac, &one),
            Err(Error::CutoffMismatch(_, _))
        ));
    }

    #[test]
    fn zero_photons_give_unit_fidelity() {
        let est = mc_fidelity_bound(0.0, 20, 10, 3).unwrap();
        assert_eq!(est.mean_sqrt_fidelity, 1.0);
        assert_eq!(est.std_err, 0.0);
    }

    #[test]
    fn mc_fidelity_is_seed_deterministic() {
        let a = mc_fidelity_bound(1.0, 10, 50, 9).unwrap();
        let b = mc_fidelity_bound(1.0, 10, 50, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn split_components_recompose_thermal() {
        for &(n_bar, f) in &[(1.0, 0.5), (0.3, 0.2), (4.0, 0.7)] {
            let cutoff = component_cutoff(n_bar, f);
            let s0 = split_component_state(n_bar, f, 0, cutoff).unwrap();
            let s1 = split_component_state(n_bar, f, 1, cutoff).unwrap();
            let mix = s0.mix(1.0 - f, &s1).unwrap();
            let th = thermal_fock_distribution(&ThermalModel::with_cutoff(n_bar, cutoff).unwrap())
                .unwrap();
            for (a, b) in mix.probs().iter().zip(th.probs()) {
                assert!(close(*a, *b, 1e-9), "n̄={n_bar} f={f}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn law_expectations_normalise() {
        for support in [
            RadialSupport::Full,
            RadialSupport::Left(0.3),
            RadialSupport::Right(0.3),
            RadialSupport::RightFlipped(0.3),
        ] {
            let law = RadialLaw::new(2.0, support).unwrap();
            let total = law.expect(|_| 1.0, 1e-13).unwrap();
            assert!(close(total, 1.0, 1e-11), "{support:?}: {total}");
        }
    }
}
