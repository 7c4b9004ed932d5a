//! Enumerative coding between arbitrary messages and constant-weight
//! strings whose 0/1 balance matches thermal photon statistics.
//!
//! A codeword of length `N` holds `n_z` zeros (vacuum symbols) and
//! `N − n_z` ones (symbols with at least one photon). Codewords are indexed
//! 1-based in increasing numeric order, most significant bit first.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::{Error, Result};

/// `C(n, k)` in arbitrary precision; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // Each partial product is itself a binomial, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Left-hand side of the Christmas Stocking identity, `Σ_{i<k} C(n+i, i)`.
pub fn stocking_sum(n: u64, k: u64) -> BigUint {
    (0..k).map(|i| binomial(n + i, i)).sum()
}

/// Right-hand side, `C(n+k, k−1)`.
pub fn stocking_closed(n: u64, k: u64) -> BigUint {
    if k == 0 {
        return BigUint::zero();
    }
    binomial(n + k, k - 1)
}

/// Binary entropy in bits; inputs are clamped to `[0, 1]`.
pub(crate) fn entropy_bits(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Bits per channel use of the Fock encoding, `h(1/(n̄+1))`.
pub fn capacity_per_symbol(n_bar: f64) -> f64 {
    entropy_bits(1.0 / (n_bar + 1.0))
}

/// A string of channel symbols, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitString(vec![false; len])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Numeric value with the first bit most significant.
    pub fn value(&self) -> BigUint {
        self.0.iter().fold(BigUint::zero(), |acc, &b| {
            (acc << 1u32) + if b { BigUint::one() } else { BigUint::zero() }
        })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(
                    "bit string",
                    format!("unexpected character {other:?}"),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

/// Message value together with its declared bit length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageWord {
    value: BigUint,
    bit_length: usize,
}

impl MessageWord {
    pub fn new(value: BigUint, bit_length: usize) -> Result<Self> {
        if value.bits() as usize > bit_length {
            return Err(Error::invalid(
                "message",
                format!("{value} does not fit in {bit_length} bits"),
            ));
        }
        Ok(MessageWord { value, bit_length })
    }

    /// Parses `0b…` binary (bit length = digit count) or decimal (bit length
    /// = significant bits, at least one).
    pub fn parse(literal: &str) -> Result<Self> {
        let literal = literal.trim();
        if let Some(digits) = literal.strip_prefix("0b") {
            let bits: BitString = digits.parse()?;
            if bits.is_empty() {
                return Err(Error::Empty("binary literal"));
            }
            return Self::new(bits.value(), bits.len());
        }
        let value = BigUint::from_str(literal)
            .map_err(|e| Error::invalid("message", format!("{literal:?}: {e}")))?;
        let bit_length = (value.bits() as usize).max(1);
        Self::new(value, bit_length)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bit_length(&self) -> usize {
        self.bit_length
    }
}

/// Length and zero count of the constant-weight code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantWeightCode {
    length: usize,
    zeros: usize,
}

/// `round(N / (n̄+1))` with ties going down.
fn zeros_for(length: usize, n_bar: f64) -> usize {
    let x = length as f64 / (n_bar + 1.0);
    let r = (x - 0.5).ceil().max(0.0) as usize;
    r.min(length)
}

impl ConstantWeightCode {
    pub fn new(length: usize, zeros: usize) -> Result<Self> {
        if zeros > length {
            return Err(Error::invalid(
                "zeros",
                format!("{zeros} exceeds code length {length}"),
            ));
        }
        Ok(ConstantWeightCode { length, zeros })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn zeros(&self) -> usize {
        self.zeros
    }

    pub fn weight(&self) -> usize {
        self.length - self.zeros
    }

    /// Length-`N` code with the zero count matching the thermal vacuum
    /// fraction `1/(n̄+1)`.
    pub fn thermal(length: usize, n_bar: f64) -> Result<Self> {
        if !(n_bar >= 0.0 && n_bar.is_finite()) {
            return Err(Error::invalid(
                "n_bar",
                format!("{n_bar} is not a finite value ≥ 0"),
            ));
        }
        Self::new(length, zeros_for(length, n_bar))
    }

    /// Number of codewords, `C(N, n_z)`.
    pub fn size(&self) -> BigUint {
        binomial(self.length as u64, self.zeros as u64)
    }

    /// Smallest code whose thermal zero count gives at least `needed`
    /// codewords.
    pub fn smallest_holding(n_bar: f64, needed: &BigUint) -> Result<Self> {
        if !(n_bar > 0.0 && n_bar.is_finite()) {
            return Err(Error::invalid(
                "n_bar",
                format!("{n_bar}: the Fock encoding carries no information unless n̄ > 0"),
            ));
        }
        let mut length = 1usize;
        loop {
            let code = ConstantWeightCode::new(length, zeros_for(length, n_bar))?;
            if &code.size() >= needed {
                return Ok(code);
            }
            length += 1;
        }
    }

    /// Code able to carry every message of `message_bits` bits.
    pub fn for_message_bits(n_bar: f64, message_bits: usize) -> Result<Self> {
        if message_bits == 0 {
            return Err(Error::invalid("message_bits", "must be at least 1"));
        }
        Self::smallest_holding(n_bar, &(BigUint::one() << message_bits))
    }

    /// Code sized against a single 1-based rank, as in the hand-worked
    /// Pascal-triangle construction.
    pub fn for_rank(n_bar: f64, rank: &BigUint) -> Result<Self> {
        Self::smallest_holding(n_bar, rank)
    }

    /// Code matching an existing codeword's shape.
    pub fn of(codeword: &BitString) -> Self {
        ConstantWeightCode {
            length: codeword.len(),
            zeros: codeword.len() - codeword.weight(),
        }
    }

    fn check_shape(&self, s: &BitString) -> Result<()> {
        if s.len() != self.length || s.weight() != self.weight() {
            return Err(Error::WrongShape {
                len: s.len(),
                weight: s.weight(),
                expected_len: self.length,
                expected_weight: self.weight(),
            });
        }
        Ok(())
    }
}

/// See [`ConstantWeightCode::for_message_bits`].
pub fn code_for(n_bar: f64, message_bits: usize) -> Result<ConstantWeightCode> {
    ConstantWeightCode::for_message_bits(n_bar, message_bits)
}

/// The `rank`-th smallest codeword (1-based).
///
/// Walks down Pascal's triangle from `C(N, weight)`: at each position the
/// `C(remaining − 1, ones)` strings with a 0 there are the smaller ones, so
/// either the rank falls among them or it skips past them and the bit is 1.
/// The counts are updated by exact ratios, so only one full binomial is
/// evaluated.
pub fn unrank(rank: &BigUint, code: &ConstantWeightCode) -> Result<BitString> {
    let total = code.size();
    if rank.is_zero() || rank > &total {
        return Err(Error::RankOutOfRange {
            rank: rank.to_string(),
            max: total.to_string(),
        });
    }
    let mut rank = rank.clone();
    let mut ones = code.weight() as u64;
    // count = C(remaining, ones)
    let mut count = total;
    let mut bits = Vec::with_capacity(code.length);
    for remaining in (1..=code.length as u64).rev() {
        if ones == 0 {
            bits.push(false);
            continue;
        }
        // C(remaining − 1, ones) = C(remaining, ones)·(remaining − ones)/remaining
        let with_zero = &count * (remaining - ones) / remaining;
        if rank <= with_zero {
            bits.push(false);
            count = with_zero;
        } else {
            bits.push(true);
            rank -= &with_zero;
            // C(remaining − 1, ones − 1) = C(remaining, ones)·ones/remaining
            count = &count * ones / remaining;
            ones -= 1;
        }
    }
    Ok(BitString(bits))
}

/// Inverse of [`unrank`].
pub fn rank(s: &BitString, code: &ConstantWeightCode) -> Result<BigUint> {
    code.check_shape(s)?;
    let mut rank = BigUint::one();
    let mut ones = code.weight() as u64;
    let mut count = code.size();
    for (i, &b) in s.bits().iter().enumerate() {
        let remaining = (code.length - i) as u64;
        if ones == 0 {
            break;
        }
        let with_zero = &count * (remaining - ones) / remaining;
        if b {
            rank += &with_zero;
            count = &count * ones / remaining;
            ones -= 1;
        } else {
            count = with_zero;
        }
    }
    Ok(rank)
}

/// Codeword for a message; value `v` maps to rank `v + 1`.
pub fn encode_message(msg: &MessageWord, code: &ConstantWeightCode) -> Result<BitString> {
    let needed = msg.value() + 1u32;
    let capacity = code.size();
    if needed > capacity {
        return Err(Error::MessageTooLarge {
            needed: needed.to_string(),
            capacity: capacity.to_string(),
        });
    }
    unrank(&needed, code)
}

/// Recovers the message value from a codeword.
pub fn decode_message(
    s: &BitString,
    code: &ConstantWeightCode,
    bit_length: usize,
) -> Result<MessageWord> {
    let r = rank(s, code)?;
    MessageWord::new(r - 1u32, bit_length)
}

/// Elementwise XOR; applying the same key twice restores the input.
pub fn scramble(s: &BitString, key: &BitString) -> Result<BitString> {
    if s.len() != key.len() {
        return Err(Error::LengthMismatch(s.len(), key.len()));
    }
    Ok(BitString(
        s.bits()
            .iter()
            .zip(key.bits())
            .map(|(a, b)| a ^ b)
            .collect(),
    ))
}

/// Photon number sent for a 1 symbol: thermal weights restricted to n ≥ 1,
/// i.e. `n − 1 ~ Geometric(1/(n̄+1))`.
pub fn sample_nonvacuum<R: Rng + ?Sized>(n_bar: f64, rng: &mut R) -> u64 {
    let ratio = n_bar / (n_bar + 1.0);
    if ratio <= 0.0 {
        return 1;
    }
    let u: f64 = rng.random();
    // P(n − 1 ≥ k) = ratio^k
    let k = ((1.0 - u).ln() / ratio.ln()).floor();
    1 + k.to_u64().unwrap_or(u64::MAX - 1)
}

/// Fock occupation numbers realising a codeword: 0 for each 0 symbol and a
/// thermal non-vacuum draw for each 1.
pub fn fock_symbols<R: Rng + ?Sized>(codeword: &BitString, n_bar: f64, rng: &mut R) -> Vec<u64> {
    codeword
        .bits()
        .iter()
        .map(|&b| if b { sample_nonvacuum(n_bar, rng) } else { 0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(8, 3), big(56));
        assert_eq!(binomial(7, 5), big(21));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(binomial(64, 32), big(1_832_624_140_942_590_534));
    }

    #[test]
    fn capacity_examples() {
        assert!((capacity_per_symbol(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(capacity_per_symbol(0.0), 0.0);
        let p: f64 = 1.0 / 1.56;
        let h = -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
        assert!((capacity_per_symbol(0.56) - h).abs() < 1e-15);
    }

    #[test]
    fn worked_example_unranks() {
        let code = ConstantWeightCode::new(8, 5).unwrap();
        assert_eq!(unrank(&big(41), &code).unwrap().to_string(), "10001100");
        assert_eq!(unrank(&big(41), &code).unwrap().value(), big(140));
        assert_eq!(unrank(&big(1), &code).unwrap().to_string(), "00000111");
        assert_eq!(unrank(&big(56), &code).unwrap().to_string(), "11100000");
        assert!(unrank(&big(0), &code).is_err());
        assert!(unrank(&big(57), &code).is_err());
    }

    #[test]
    fn worked_example_ranks() {
        let code = ConstantWeightCode::new(8, 5).unwrap();
        assert_eq!(rank(&"10001100".parse().unwrap(), &code).unwrap(), big(41));
        assert_eq!(rank(&"00000111".parse().unwrap(), &code).unwrap(), big(1));
        assert!(matches!(
            rank(&"10001110".parse().unwrap(), &code),
            Err(Error::WrongShape { .. })
        ));
        assert!(rank(&"1000110".parse().unwrap(), &code).is_err());
    }

    #[test]
    fn sizing_rules() {
        // Sized to every 6-bit message: C(8,3) = 56 < 64 is not enough.
        let code = code_for(0.56, 6).unwrap();
        assert_eq!((code.length(), code.zeros()), (9, 6));
        // Sized to the single rank 41, as in the hand construction.
        let code = ConstantWeightCode::for_rank(0.56, &big(41)).unwrap();
        assert_eq!((code.length(), code.zeros()), (8, 5));
        let code = code_for(1.0, 1).unwrap();
        assert_eq!((code.length(), code.zeros()), (2, 1));
        assert!(code_for(0.0, 3).is_err());
        assert!(code_for(1.0, 0).is_err());
    }

    #[test]
    fn zero_count_rounds_ties_down() {
        assert_eq!(zeros_for(8, 0.56), 5);
        // 3 / 2 = 1.5 → 1
        assert_eq!(zeros_for(3, 1.0), 1);
        assert_eq!(zeros_for(5, 1.0), 2);
    }

    #[test]
    fn message_offsets() {
        let code = ConstantWeightCode::new(8, 5).unwrap();
        let zero = MessageWord::parse("0").unwrap();
        assert_eq!(
            encode_message(&zero, &code).unwrap().to_string(),
            "00000111"
        );
        let forty = MessageWord::parse("40").unwrap();
        assert_eq!(
            encode_message(&forty, &code).unwrap().to_string(),
            "10001100"
        );
        let too_big = MessageWord::parse("56").unwrap();
        assert!(matches!(
            encode_message(&too_big, &code),
            Err(Error::MessageTooLarge { .. })
        ));
    }

    #[test]
    fn message_literals() {
        let m = MessageWord::parse("0b101001").unwrap();
        assert_eq!((m.value().clone(), m.bit_length()), (big(41), 6));
        let m = MessageWord::parse("0b000001").unwrap();
        assert_eq!(m.bit_length(), 6);
        let m = MessageWord::parse("41").unwrap();
        assert_eq!(m.bit_length(), 6);
        assert!(MessageWord::parse("0b").is_err());
        assert!(MessageWord::parse("4x").is_err());
        assert!(MessageWord::new(big(8), 3).is_err());
    }

    #[test]
    fn all_six_bit_messages_round_trip() {
        let code = code_for(0.56, 6).unwrap();
        for v in 0u64..64 {
            let msg = MessageWord::new(big(v), 6).unwrap();
            let cw = encode_message(&msg, &code).unwrap();
            assert_eq!(cw.weight(), code.weight());
            assert_eq!(decode_message(&cw, &code, 6).unwrap(), msg);
        }
    }

    #[test]
    fn scrambler() {
        let s: BitString = "111".parse().unwrap();
        let k: BitString = "101".parse().unwrap();
        assert_eq!(scramble(&s, &k).unwrap().to_string(), "010");
        assert_eq!(scramble(&s, &BitString::zeros(3)).unwrap(), s);
        assert_eq!(scramble(&scramble(&s, &k).unwrap(), &k).unwrap(), s);
        assert!(matches!(
            scramble(&s, &BitString::zeros(2)),
            Err(Error::LengthMismatch(3, 2))
        ));
    }

    #[test]
    fn fock_symbols_follow_the_codeword() {
        let mut rng = crate::rng::stream(5, 0);
        let cw: BitString = "10001100".parse().unwrap();
        let occ = fock_symbols(&cw, 0.56, &mut rng);
        for (b, n) in cw.bits().iter().zip(&occ) {
            assert_eq!(*b, *n > 0);
        }
    }

    #[test]
    fn nonvacuum_draws_are_thermal_conditioned() {
        // Mean of n given n ≥ 1 is n̄ + 1.
        let mut rng = crate::rng::stream(6, 0);
        let n_bar = 0.8;
        let k = 200_000;
        let mean = (0..k)
            .map(|_| sample_nonvacuum(n_bar, &mut rng) as f64)
            .sum::<f64>()
            / k as f64;
        // sd of n given n ≥ 1 is √(n̄(n̄+1)).
        let se = (n_bar * (n_bar + 1.0) / k as f64).sqrt();
        assert!((mean - (n_bar + 1.0)).abs() < 4.0 * se, "{mean}");
    }
}
