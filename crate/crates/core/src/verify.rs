//! Self-checks run by `qsteg verify`. Each suite compares library results
//! against an independent computation or a known bound.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;

use crate::codec::{
    binomial, rank, stocking_closed, stocking_sum, unrank, BitString, ConstantWeightCode,
};
use crate::discrimination::{
    distribution_trace_distance_closed, distribution_trace_distance_direct, helstrom_perr_pure,
    vertical_angle_perr_bound, PureStatePair,
};
use crate::homodyne::{
    default_beta, m_c_from_r_c, markov_bound_perr, simulate_perr_surface, SimConfig,
};
use crate::thermal::{mc_fidelity_bound, rayleigh_median};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Codec,
    Fidelity,
    TraceDistance,
    Markov,
    Helstrom,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Codec,
        Suite::Fidelity,
        Suite::TraceDistance,
        Suite::Markov,
        Suite::Helstrom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Codec => "codec",
            Suite::Fidelity => "fidelity",
            Suite::TraceDistance => "trace_distance",
            Suite::Markov => "markov",
            Suite::Helstrom => "helstrom",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::invalid("suite", format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub pass: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} measured={:.12e}", self.name, self.measured)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Samples per grid point for Monte-Carlo checks.
    pub samples: usize,
    /// Ensembles per point for the fidelity check.
    pub ensembles: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 100_000,
            ensembles: 2000,
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Codec => codec_checks()?,
        Suite::Fidelity => fidelity_checks(cfg)?,
        Suite::TraceDistance => trace_distance_checks()?,
        Suite::Markov => markov_checks(cfg)?,
        Suite::Helstrom => helstrom_checks()?,
    };
    Ok(SuiteReport { suite, checks })
}

fn check(name: impl Into<String>, measured: f64, pass: bool) -> Check {
    Check {
        name: name.into(),
        measured,
        pass,
    }
}

/// All strings of the given shape in increasing numeric order, by brute
/// force over every integer below `2^length`.
pub fn sorted_codewords(length: usize, weight: usize) -> Vec<BitString> {
    (0u64..1 << length)
        .filter(|v| v.count_ones() as usize == weight)
        .map(|v| BitString::new((0..length).rev().map(|i| v >> i & 1 == 1).collect()))
        .collect()
}

fn codec_checks() -> Result<Vec<Check>> {
    let code = ConstantWeightCode::new(8, 5)?;
    let word = unrank(&BigUint::from(41u32), &code)?;
    let mut checks = vec![check(
        "unrank(41) of N=8 weight 3 is 10001100",
        word.value().to_string().parse().unwrap_or(f64::NAN),
        word.to_string() == "10001100",
    )];
    let all = sorted_codewords(8, 3);
    let mut mismatches = 0usize;
    for (i, s) in all.iter().enumerate() {
        let r = BigUint::from(i + 1);
        if unrank(&r, &code)? != *s || rank(s, &code)? != r {
            mismatches += 1;
        }
    }
    checks.push(check(
        "bijection with sorted enumeration of 56 strings",
        mismatches as f64,
        all.len() == 56 && mismatches == 0,
    ));
    let mut bad = 0usize;
    for n in 0..=64u64 {
        for k in 1..=64u64 {
            if stocking_sum(n, k) != stocking_closed(n, k) {
                bad += 1;
            }
        }
    }
    checks.push(check(
        "stocking identity for n, k ≤ 64",
        bad as f64,
        bad == 0,
    ));
    checks.push(check(
        "C(64, 32) exact",
        0.0,
        binomial(64, 32) == BigUint::from(1_832_624_140_942_590_534u64),
    ));
    Ok(checks)
}

fn fidelity_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, n_bar) in [0.5, 1.0, 5.0].into_iter().enumerate() {
        for (j, m) in [10usize, 50, 200].into_iter().enumerate() {
            let seed = cfg.seed.wrapping_add((3 * i + j) as u64);
            let est = mc_fidelity_bound(n_bar, m, cfg.ensembles, seed)?;
            let bound = 1.0 - n_bar / (2.0 * m as f64);
            let upper = est.mean_sqrt_fidelity + 3.0 * est.std_err;
            checks.push(check(
                format!("mean sqrt fidelity n̄={n_bar} M={m} vs {bound:.6}"),
                est.mean_sqrt_fidelity,
                upper >= bound,
            ));
        }
    }
    Ok(checks)
}

/// `n̄` grid for the trace-distance checks.
pub const TRACE_GRID: [f64; 10] = [0.05, 0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 15.0, 20.0];

/// Threshold for the trace distance at the top of [`TRACE_GRID`].
pub const TRACE_AT_TWENTY: f64 = 0.8;

fn trace_distance_checks() -> Result<Vec<Check>> {
    let values = TRACE_GRID
        .iter()
        .map(|&n| distribution_trace_distance_direct(n, 0.5, None))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    let in_range = values.iter().all(|t| (0.0..=1.0).contains(t));
    checks.push(check("trace distance within [0, 1]", values[0], in_range));
    let monotone = values.windows(2).all(|w| w[1] > w[0]);
    checks.push(check(
        "trace distance increasing in n̄",
        values[values.len() - 1],
        monotone,
    ));
    let last = values[values.len() - 1];
    checks.push(check(
        format!("trace distance at n̄=20 ≥ {TRACE_AT_TWENTY}"),
        last,
        last >= TRACE_AT_TWENTY,
    ));
    for (&n, &t) in TRACE_GRID.iter().zip(&values) {
        let closed = distribution_trace_distance_closed(n)?;
        checks.push(check(
            format!("closed/direct ratio at n̄={n} (reported)"),
            closed.value / t,
            true,
        ));
    }
    Ok(checks)
}

/// Normalised cutoff at which the Markov bound is compared.
pub const MARKOV_R_C: f64 = 0.45;

fn markov_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let grid = [0.5, 1.0, 2.0, 5.0];
    let sim = SimConfig::new(cfg.samples, cfg.seed)?;
    let surface = simulate_perr_surface(&grid, &[MARKOV_R_C], None, 0.5, &sim)?;
    let mut checks = Vec::new();
    for point in &surface {
        let beta = default_beta(point.n_bar);
        let m_c = m_c_from_r_c(beta, point.n_bar, MARKOV_R_C);
        for order in [2u32, 4] {
            let bound = markov_bound_perr(order, point.n_bar, beta, m_c)?;
            checks.push(check(
                format!(
                    "order-{order} bound ≥ simulated p_err={:.5} at n̄={}",
                    point.p_err, point.n_bar
                ),
                bound.bound,
                bound.bound >= point.p_err - 3.0 * point.std_err,
            ));
        }
    }
    Ok(checks)
}

/// Fock-basis amplitudes of the coherent state with real amplitude `x`.
fn coherent_vector(x: f64, cutoff: usize) -> DVector<f64> {
    let mut v = DVector::zeros(cutoff + 1);
    let mut c = (-x * x / 2.0).exp();
    for n in 0..=cutoff {
        if n > 0 {
            c *= x / (n as f64).sqrt();
        }
        v[n] = c;
    }
    v
}

/// Helstrom error from the trace norm (sum of singular values) of the
/// truncated Fock-basis operator
/// `(1−f)|x₀⟩⟨x₀| − f|x₁⟩⟨x₁|`.
pub fn helstrom_perr_fock(x0: f64, x1: f64, f: f64, cutoff: usize) -> f64 {
    let a = coherent_vector(x0, cutoff);
    let b = coherent_vector(x1, cutoff);
    let op: DMatrix<f64> = (1.0 - f) * &a * a.transpose() - f * &b * b.transpose();
    let norm: f64 = op.singular_values().sum();
    0.5 * (1.0 - norm)
}

fn helstrom_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n_bar in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let pair = PureStatePair::from_signed(0.0, -rayleigh_median(n_bar), 0.5)?;
        let got = helstrom_perr_pure(&pair);
        let want = vertical_angle_perr_bound(n_bar);
        checks.push(check(
            format!("vertical-angle error at n̄={n_bar}"),
            (got - want).abs(),
            (got - want).abs() <= 1e-12,
        ));
    }
    for (x0, x1, f) in [
        (0.5, -1.2, 0.5),
        (1.0, -0.3, 0.2),
        (0.2, -2.0, 0.7),
        (1.5, 0.4, 0.35),
    ] {
        let got = helstrom_perr_pure(&PureStatePair::from_signed(x0, x1, f)?);
        let oracle = helstrom_perr_fock(x0, x1, f, 60);
        checks.push(check(
            format!("two-level vs Fock-basis trace norm at ({x0}, {x1}, f={f})"),
            (got - oracle).abs(),
            (got - oracle).abs() <= 1e-10,
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn sorted_codewords_small() {
        let words: Vec<String> = sorted_codewords(3, 2)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["011", "101", "110"]);
    }

    #[test]
    fn fock_oracle_orthogonal_limit() {
        // Far-apart states are nearly orthogonal.
        assert!(helstrom_perr_fock(3.0, -3.0, 0.5, 80) < 1e-8);
        assert!((helstrom_perr_fock(0.0, 0.0, 0.3, 10) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn codec_suite_passes() {
        assert!(run(Suite::Codec, &VerifyConfig::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn helstrom_suite_passes() {
        assert!(run(Suite::Helstrom, &VerifyConfig::default())
            .unwrap()
            .passed());
    }
}
