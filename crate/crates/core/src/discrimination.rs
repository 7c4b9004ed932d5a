//! How well the bit-0 and bit-1 ensembles can be told apart.

use statrs::function::gamma::ln_gamma;

use crate::rates::{rate_from_perr, ChannelProbs, RateReport};
use crate::thermal::{
    component_cutoff, split_component_state, trace_distance_diagonal, CoherentAmplitude,
    NumberDiagonalState,
};
use crate::{Error, Result};

/// Below this `1 − η²` the two pure states are treated as identical.
const DEGENERATE_GAP: f64 = 1e-300;

/// Two pure coherent states with prior `f` on the second one (bit 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStatePair {
    pub alpha0: CoherentAmplitude,
    pub alpha1: CoherentAmplitude,
    prior_f: f64,
}

impl PureStatePair {
    pub fn new(alpha0: CoherentAmplitude, alpha1: CoherentAmplitude, prior_f: f64) -> Result<Self> {
        if !(prior_f > 0.0 && prior_f < 1.0) {
            return Err(Error::invalid("f", format!("{prior_f} is outside (0, 1)")));
        }
        Ok(PureStatePair {
            alpha0,
            alpha1,
            prior_f,
        })
    }

    /// Pair of real amplitudes on the θ = 0 axis (bit 1 usually negative).
    pub fn from_signed(r0: f64, r1: f64, prior_f: f64) -> Result<Self> {
        Self::new(
            CoherentAmplitude::from_signed(r0)?,
            CoherentAmplitude::from_signed(r1)?,
            prior_f,
        )
    }

    pub fn prior_f(&self) -> f64 {
        self.prior_f
    }

    /// `|⟨α₀|α₁⟩|`; a global phase makes the overlap real and non-negative.
    pub fn eta(&self) -> f64 {
        coherent_overlap(&self.alpha0, &self.alpha1)
    }
}

/// `|⟨α₀|α₁⟩| = e^{−|α₀−α₁|²/2}`.
pub fn coherent_overlap(a0: &CoherentAmplitude, a1: &CoherentAmplitude) -> f64 {
    (-(a0.to_complex() - a1.to_complex()).norm_sqr() / 2.0).exp()
}

/// Error-probability bound for the vertical-angle scheme,
/// `½(1 − √(1 − 2^{−n̄}))`.
pub fn vertical_angle_perr_bound(n_bar: f64) -> f64 {
    0.5 * (1.0 - (1.0 - (-n_bar).exp2()).sqrt())
}

/// The operator `(1−f)|α₀⟩⟨α₀| − f|α₁⟩⟨α₁|` in the orthonormal basis
/// `{|α₀⟩, |α₀^⊥⟩}`, with `|α₁⟩ = η|α₀⟩ + √(1−η²)|α₀^⊥⟩`.
#[derive(Debug, Clone, Copy)]
struct HelstromOperator {
    a: f64,
    b: f64,
    d: f64,
    eta: f64,
    s: f64,
}

impl HelstromOperator {
    fn new(pair: &PureStatePair) -> Self {
        let f = pair.prior_f;
        let eta = pair.eta();
        let s = (1.0 - eta * eta).max(0.0).sqrt();
        HelstromOperator {
            a: (1.0 - f) - f * eta * eta,
            b: -f * eta * s,
            d: -f * s * s,
            eta,
            s,
        }
    }

    fn eigenvalues(&self) -> (f64, f64) {
        let half_trace = 0.5 * (self.a + self.d);
        let radius = (0.25 * (self.a - self.d).powi(2) + self.b * self.b).sqrt();
        (half_trace + radius, half_trace - radius)
    }

    /// Unit eigenvector of the positive eigenvalue.
    fn positive_eigenvector(&self) -> (f64, f64) {
        let (lp, _) = self.eigenvalues();
        // Two algebraically equivalent candidates; keep the better conditioned one.
        let v1 = (self.b, lp - self.a);
        let v2 = (lp - self.d, self.b);
        let n1 = v1.0.hypot(v1.1);
        let n2 = v2.0.hypot(v2.1);
        if n1 >= n2 {
            (v1.0 / n1, v1.1 / n1)
        } else {
            (v2.0 / n2, v2.1 / n2)
        }
    }
}

/// Minimum error probability for telling two pure coherent states apart,
/// `½(1 − Σ|λ_i|)` over the eigenvalues of the Helstrom operator.
pub fn helstrom_perr_pure(pair: &PureStatePair) -> f64 {
    let f = pair.prior_f;
    let op = HelstromOperator::new(pair);
    if op.s * op.s <= DEGENERATE_GAP {
        return f.min(1.0 - f);
    }
    let (lp, lm) = op.eigenvalues();
    let p = 0.5 * (1.0 - (lp.abs() + lm.abs()));
    p.clamp(0.0, f.min(1.0 - f))
}

/// Probabilities of deciding 0 under the Helstrom measurement, given that 0
/// (`p00`) or 1 (`p01`) was sent.
///
/// Identical states fall back to guessing the likelier prior.
pub fn helstrom_measurement_probs(pair: &PureStatePair) -> ChannelProbs {
    let f = pair.prior_f;
    let op = HelstromOperator::new(pair);
    let (p00, p01) = if op.s * op.s <= DEGENERATE_GAP {
        if f <= 0.5 {
            (1.0, 1.0)
        } else {
            (0.0, 0.0)
        }
    } else {
        let (v0, v1) = op.positive_eigenvector();
        let p00 = v0 * v0;
        let overlap = op.eta * v0 + op.s * v1;
        (p00, overlap * overlap)
    };
    ChannelProbs::new_unchecked(p00, p01, f)
}

/// Poisson law with mean `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonLaw {
    lambda: f64,
}

impl PoissonLaw {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(
                "lambda",
                format!("{lambda} is not a finite value ≥ 0"),
            ));
        }
        Ok(PoissonLaw { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn cdf(&self, n: usize) -> f64 {
        poisson_cdf(self, n)
    }

    /// Smallest `n` with `cdf(n) ≥ ½`.
    pub fn median_index(&self) -> usize {
        let mut acc = 0.0;
        let mut n = 0;
        loop {
            acc += self.pmf(n);
            if acc >= 0.5 {
                return n;
            }
            n += 1;
        }
    }

    fn pmf(&self, n: usize) -> f64 {
        if self.lambda == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        let k = n as f64;
        (-self.lambda + k * self.lambda.ln() - ln_gamma(k + 1.0)).exp()
    }
}

/// `Σ_{k≤n} e^{−λ} λ^k / k!`.
pub fn poisson_cdf(law: &PoissonLaw, n: usize) -> f64 {
    let s: f64 = (0..=n).map(|k| law.pmf(k)).sum();
    s.min(1.0)
}

fn split_pair(
    n_bar: f64,
    f: f64,
    cutoff: Option<usize>,
) -> Result<(NumberDiagonalState, NumberDiagonalState)> {
    let cutoff = cutoff.unwrap_or_else(|| component_cutoff(n_bar, f));
    Ok((
        split_component_state(n_bar, f, 0, cutoff)?,
        split_component_state(n_bar, f, 1, cutoff)?,
    ))
}

/// Trace distance between the two phase-averaged split components, summed
/// directly in the Fock basis. `None` picks a cutoff meeting the tail
/// tolerance.
pub fn distribution_trace_distance_direct(
    n_bar: f64,
    f: f64,
    cutoff: Option<usize>,
) -> Result<f64> {
    let (s0, s1) = split_pair(n_bar, f, cutoff)?;
    trace_distance_diagonal(&s0, &s1)
}

/// Evaluation of the Poisson-CDF closed form for the `f = ½` split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTrace {
    pub value: f64,
    /// Smallest `n` with `Q_n ≥ ½`.
    pub median_index: usize,
}

/// `2(1 + (2Q_N − 1)(n̄/(n̄+1))^{N+1} − Q̃_N)` with `Q` the Poisson CDF at
/// `λ = (n̄+1) ln 2`, `Q̃` at `λ = n̄ ln 2`, `N` the median index of `Q`.
///
/// Kept verbatim for comparison with the direct sum; it is not a reliable
/// trace distance on its own.
pub fn distribution_trace_distance_closed(n_bar: f64) -> Result<ClosedFormTrace> {
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(Error::invalid(
            "n_bar",
            format!("{n_bar} is not a finite value ≥ 0"),
        ));
    }
    let q = PoissonLaw::new((n_bar + 1.0) * std::f64::consts::LN_2)?;
    let q_tilde = PoissonLaw::new(n_bar * std::f64::consts::LN_2)?;
    let n_half = q.median_index();
    let ratio = n_bar / (n_bar + 1.0);
    let value = 2.0
        * (1.0 + (2.0 * q.cdf(n_half) - 1.0) * ratio.powi(n_half as i32 + 1) - q_tilde.cdf(n_half));
    Ok(ClosedFormTrace {
        value,
        median_index: n_half,
    })
}

/// Rate of the keyless distribution scheme with the median split, treating
/// the channel as binary symmetric with `p_err = ½(1 − T)`.
pub fn distribution_rate_no_key(n_bar: f64) -> Result<RateReport> {
    let t = distribution_trace_distance_direct(n_bar, 0.5, None)?;
    let p_err = 0.5 * (1.0 - t);
    let rate = rate_from_perr(p_err);
    Ok(RateReport::new(p_err, rate, 0.0))
}

/// Channel seen by a photon counter that decides 0 wherever the weighted
/// bit-0 component dominates. Optimal because both components are diagonal.
pub fn distribution_channel(n_bar: f64, f: f64) -> Result<ChannelProbs> {
    let (s0, s1) = split_pair(n_bar, f, None)?;
    let (mut p00, mut p01) = (0.0, 0.0);
    for (a, b) in s0.probs().iter().zip(s1.probs()) {
        if (1.0 - f) * a >= f * b {
            p00 += a;
            p01 += b;
        }
    }
    ChannelProbs::new(p00.min(1.0), p01.min(1.0), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::rayleigh_median;

    #[test]
    fn overlap_examples() {
        let a = CoherentAmplitude::new(0.8, 0.3).unwrap();
        assert!((coherent_overlap(&a, &a) - 1.0).abs() < 1e-15);
        let n_bar = 1.7;
        let zero = CoherentAmplitude::new(0.0, 0.0).unwrap();
        let far = CoherentAmplitude::from_signed(-rayleigh_median(n_bar)).unwrap();
        assert!((coherent_overlap(&zero, &far) - (-n_bar / 2.0).exp2()).abs() < 1e-15);
        let r = 0.6;
        let p = CoherentAmplitude::new(r, 1.0).unwrap();
        let q = CoherentAmplitude::new(r, 1.0 + std::f64::consts::PI).unwrap();
        assert!((coherent_overlap(&p, &q) - (-2.0 * r * r).exp()).abs() < 1e-15);
    }

    #[test]
    fn vertical_angle_limits() {
        assert_eq!(vertical_angle_perr_bound(0.0), 0.5);
        assert!(vertical_angle_perr_bound(80.0) < 1e-20);
        let expected = 0.5 * (1.0 - 0.5f64.sqrt());
        assert!((vertical_angle_perr_bound(1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn helstrom_limits() {
        // Far apart: essentially orthogonal.
        let pair = PureStatePair::from_signed(20.0, -20.0, 0.5).unwrap();
        assert_eq!(helstrom_perr_pure(&pair), 0.0);
        for f in [0.2, 0.5, 0.8] {
            let same = PureStatePair::from_signed(0.4, 0.4, f).unwrap();
            assert!((helstrom_perr_pure(&same) - f64::min(f, 1.0 - f)).abs() < 1e-15);
        }
        let pair = PureStatePair::from_signed(0.3, -0.5, 0.5).unwrap();
        let eta = pair.eta();
        let expected = 0.5 * (1.0 - (1.0 - eta * eta).sqrt());
        assert!((helstrom_perr_pure(&pair) - expected).abs() < 1e-15);
    }

    #[test]
    fn helstrom_probs_orthogonal_case() {
        let pair = PureStatePair::from_signed(20.0, -20.0, 0.3).unwrap();
        let p = helstrom_measurement_probs(&pair);
        assert!((p.p00() - 1.0).abs() < 1e-15 && p.p01().abs() < 1e-15);
    }

    #[test]
    fn helstrom_probs_recombine() {
        for &(r0, r1, f) in &[
            (0.0, -0.83, 0.5),
            (0.4, -1.1, 0.3),
            (0.1, -0.2, 0.8),
            (1.0, 0.9, 0.45),
        ] {
            let pair = PureStatePair::from_signed(r0, r1, f).unwrap();
            let p = helstrom_measurement_probs(&pair);
            let recombined = (1.0 - f) * (1.0 - p.p00()) + f * p.p01();
            assert!((recombined - helstrom_perr_pure(&pair)).abs() < 1e-12);
        }
    }

    #[test]
    fn helstrom_swap_symmetry() {
        let a = PureStatePair::from_signed(0.4, -1.1, 0.3).unwrap();
        let b = PureStatePair::new(a.alpha1, a.alpha0, 0.7).unwrap();
        let pa = helstrom_measurement_probs(&a);
        let pb = helstrom_measurement_probs(&b);
        // Deciding 0 in `a` is deciding 1 in `b`.
        assert!((pa.p00() - (1.0 - pb.p01())).abs() < 1e-12);
        assert!((pa.p01() - (1.0 - pb.p00())).abs() < 1e-12);
        assert!((helstrom_perr_pure(&a) - helstrom_perr_pure(&b)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_helstrom_guesses_prior() {
        let p = helstrom_measurement_probs(&PureStatePair::from_signed(0.5, 0.5, 0.3).unwrap());
        assert_eq!((p.p00(), p.p01()), (1.0, 1.0));
        let p = helstrom_measurement_probs(&PureStatePair::from_signed(0.5, 0.5, 0.7).unwrap());
        assert_eq!((p.p00(), p.p01()), (0.0, 0.0));
    }

    #[test]
    fn poisson_cdf_examples() {
        let law = PoissonLaw::new(2.0 * std::f64::consts::LN_2).unwrap();
        let l = law.lambda();
        assert!((law.cdf(1) - (-l).exp() * (1.0 + l)).abs() < 1e-15);
        assert!((law.cdf(200) - 1.0).abs() < 1e-15);
        let zero = PoissonLaw::new(0.0).unwrap();
        assert_eq!(zero.cdf(0), 1.0);
        assert_eq!(zero.cdf(7), 1.0);
        assert!(PoissonLaw::new(-1.0).is_err());
    }

    #[test]
    fn poisson_cdf_monotone_and_median_defined() {
        for i in 1..=100 {
            let n_bar = i as f64;
            let law = PoissonLaw::new((n_bar + 1.0) * std::f64::consts::LN_2).unwrap();
            let mut prev = 0.0;
            for n in 0..(4 * i + 20) {
                let c = law.cdf(n);
                assert!(c >= prev);
                prev = c;
            }
            let m = law.median_index();
            assert!(law.cdf(m) >= 0.5);
            assert!(m == 0 || law.cdf(m - 1) < 0.5);
        }
    }

    #[test]
    fn trace_distance_limits() {
        let small = distribution_trace_distance_direct(0.01, 0.5, None).unwrap();
        assert!(small < 0.05, "{small}");
        let big = distribution_trace_distance_direct(20.0, 0.5, None).unwrap();
        assert!(big > 0.8 && big <= 1.0, "{big}");
    }

    #[test]
    fn rate_no_key_endpoints() {
        let r = distribution_rate_no_key(0.0).unwrap();
        assert_eq!(r.p_err, 0.5);
        assert_eq!(r.rate, 0.0);
    }
}
