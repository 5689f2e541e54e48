//! Gödel numbering and the β-function.
//!
//! A string `s` over an alphabet whose symbols carry codes `1..=|A|` is
//! numbered as `∏ p_i^code(s_i)` over the first `|s|` primes; the empty
//! string is `1`. Decoding factors the number back and rejects anything that
//! is not exactly such a product.

mod beta;

pub use beta::{beta, beta_enumerate_consistent, beta_fit, BetaError, BetaParams, MAX_FIT_SPAN};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// An arbitrary-precision natural used as a Gödel number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelNumber(pub BigUint);

impl GodelNumber {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for GodelNumber {
    fn from(v: u64) -> Self {
        GodelNumber(BigUint::from(v))
    }
}

impl From<BigUint> for GodelNumber {
    fn from(v: BigUint) -> Self {
        GodelNumber(v)
    }
}

impl fmt::Display for GodelNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for GodelNumber {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(GodelNumber)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("symbol {symbol:?} at position {position} is not registered")]
    UnregisteredSymbol { symbol: char, position: usize },
    #[error("symbol {0:?} registered twice")]
    DuplicateSymbol(char),
    #[error("alphabet is empty")]
    EmptyAlphabet,
}

/// Ordered set of characters; the i-th character has code `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(chars: &str) -> Result<Self, CodecError> {
        let mut out: Vec<char> = Vec::new();
        for c in chars.chars() {
            if out.contains(&c) {
                return Err(CodecError::DuplicateSymbol(c));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(CodecError::EmptyAlphabet);
        }
        Ok(Alphabet { chars: out })
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn code(&self, c: char) -> Option<u32> {
        self.chars.iter().position(|&x| x == c).map(|i| i as u32 + 1)
    }

    pub fn symbol(&self, code: u32) -> Option<char> {
        (code as usize).checked_sub(1).and_then(|i| self.chars.get(i)).copied()
    }

    pub fn as_string(&self) -> String {
        self.chars.iter().collect()
    }
}

/// Ascending primes 2, 3, 5, … by trial division.
#[derive(Debug, Clone, Default)]
pub struct Primes {
    found: Vec<u64>,
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut candidate = match self.found.last() {
            None => 2,
            Some(2) => 3,
            Some(&p) => p + 2,
        };
        while !self.found.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            candidate += 2;
        }
        self.found.push(candidate);
        Some(candidate)
    }
}

/// `∏ p_i^codes[i]` over the first `codes.len()` primes.
pub fn encode_codes(codes: &[u32]) -> GodelNumber {
    let mut g = BigUint::one();
    for (p, &e) in Primes::default().zip(codes) {
        g *= num_traits::pow(BigUint::from(p), e as usize);
    }
    GodelNumber(g)
}

/// Inverse of [`encode_codes`] restricted to codes in `1..=max_code`.
/// Returns `None` when the prime support is not a contiguous run from 2 or
/// an exponent is out of range.
pub fn decode_codes(g: &GodelNumber, max_code: u32) -> Option<Vec<u32>> {
    if g.0.is_zero() {
        return None;
    }
    let mut rest = g.0.clone();
    let mut codes = Vec::new();
    for p in Primes::default() {
        if rest.is_one() {
            return Some(codes);
        }
        let p = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
            if e > max_code {
                return None;
            }
        }
        if e == 0 {
            return None;
        }
        codes.push(e);
    }
    unreachable!("prime iterator is infinite")
}

pub fn encode_string(alphabet: &Alphabet, s: &str) -> Result<GodelNumber, CodecError> {
    let codes = s
        .chars()
        .enumerate()
        .map(|(position, symbol)| alphabet.code(symbol).ok_or(CodecError::UnregisteredSymbol { symbol, position }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(encode_codes(&codes))
}

/// `None` means `g` is not the number of any string over `alphabet`.
pub fn decode_string(alphabet: &Alphabet, g: &GodelNumber) -> Option<String> {
    decode_codes(g, alphabet.len() as u32)?.into_iter().map(|c| alphabet.symbol(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn abcd() -> Alphabet {
        Alphabet::new("abcd").unwrap()
    }

    #[test]
    fn first_primes() {
        let p: Vec<u64> = Primes::default().take(10).collect();
        assert_eq!(p, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn encode_examples() {
        let a = abcd();
        assert_eq!(encode_string(&a, "").unwrap(), GodelNumber::from(1));
        assert_eq!(encode_string(&a, "a").unwrap(), GodelNumber::from(2));
        // codes (2, 1)
        assert_eq!(encode_string(&a, "ba").unwrap(), GodelNumber::from(12));
        assert_eq!(
            encode_string(&a, "abx"),
            Err(CodecError::UnregisteredSymbol { symbol: 'x', position: 2 })
        );
    }

    #[test]
    fn decode_examples() {
        let a = abcd();
        assert_eq!(decode_string(&a, &GodelNumber::from(1)).as_deref(), Some(""));
        assert_eq!(decode_string(&a, &GodelNumber::from(12)).as_deref(), Some("ba"));
        assert_eq!(decode_string(&a, &GodelNumber::from(5)), None);
        assert_eq!(decode_string(&a, &GodelNumber::from(0)), None);
        // 2^5 exceeds the largest code
        assert_eq!(decode_string(&a, &GodelNumber::from(32)), None);
        // 2 * 5: gap at 3
        assert_eq!(decode_string(&a, &GodelNumber::from(10)), None);
    }

    #[test]
    fn duplicate_alphabet_symbol() {
        assert_eq!(Alphabet::new("aba"), Err(CodecError::DuplicateSymbol('a')));
    }

    #[test]
    fn exhaustive_roundtrip_short_strings() {
        let a = abcd();
        let mut seen = std::collections::HashSet::new();
        let mut words = vec![String::new()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for w in &words {
                let g = encode_string(&a, w).unwrap();
                assert_eq!(decode_string(&a, &g).as_ref(), Some(w));
                assert!(seen.insert(g));
                for c in "abcd".chars() {
                    let mut w = w.clone();
                    w.push(c);
                    next.push(w);
                }
            }
            words = next;
        }
    }

    proptest! {
        #[test]
        fn roundtrip_up_to_twelve(s in "[abcd]{0,12}") {
            let a = abcd();
            let g = encode_string(&a, &s).unwrap();
            prop_assert_eq!(decode_string(&a, &g), Some(s));
        }

        #[test]
        fn injective(s in "[abcd]{0,8}", t in "[abcd]{0,8}") {
            let a = abcd();
            prop_assert_eq!(s == t, encode_string(&a, &s).unwrap() == encode_string(&a, &t).unwrap());
        }
    }
}
