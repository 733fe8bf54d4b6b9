//! Catalan and generalized Catalan numbers, and the ballot sequences they count.
//!
//! A ballot sequence of multiplicity `a` over the alphabet `1..=m` is a word of
//! length `a * m` in which each symbol occurs `a` times and, in every prefix,
//! no symbol occurs more often than a smaller one. For `m = 2` these are Dyck
//! paths and are counted by the Catalan numbers.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CombinatoricsError;

/// Exact, arbitrary-precision nonnegative count.
pub type Count = BigUint;

/// `n!` as a [`Count`].
pub fn factorial(n: u64) -> Count {
    (2..=n).fold(Count::one(), |acc, k| acc * k)
}

/// The `a`-th Catalan number `(2a)! / (a! (a+1)!)`.
pub fn catalan(a: u32) -> Count {
    let a = u64::from(a);
    let num = factorial(2 * a);
    let den = factorial(a) * factorial(a + 1);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// Number of ballot sequences with `a` copies of each of `m` symbols:
/// `(a m)! * prod_{i=0}^{m-1} i! / (a+i)!`.
///
/// With `m = r + 1` this is the number of `g^r_{r(a+1)}` on a general curve of
/// genus `a(r+1)`. Equals [`catalan`] for `m = 2`.
pub fn generalized_catalan(a: u32, m: u32) -> Count {
    let (a, m) = (u64::from(a), u64::from(m));
    let mut num = factorial(a * m);
    let mut den = Count::one();
    for i in 0..m {
        num *= factorial(i);
        den *= factorial(a + i);
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "generalized Catalan product is not integral");
    q
}

/// An admissible word: `a` copies of each symbol in `1..=m`, ballot condition
/// on every prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BallotSequence {
    symbols: Vec<u8>,
    a: u32,
    m: u32,
}

impl BallotSequence {
    pub fn new(symbols: Vec<u8>, a: u32, m: u32) -> Result<Self, CombinatoricsError> {
        if m < 2 || m > u32::from(u8::MAX) {
            return Err(CombinatoricsError::AlphabetSize(m));
        }
        if a == 0 {
            return Err(CombinatoricsError::ZeroMultiplicity);
        }
        if !is_admissible(&symbols, a, m) {
            return Err(CombinatoricsError::NotAdmissible {
                symbols: symbols.clone(),
                a,
                m,
            });
        }
        Ok(Self { symbols, a, m })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn multiplicity(&self) -> u32 {
        self.a
    }

    pub fn alphabet_size(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for BallotSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.m > 9 { "," } else { "" };
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// True iff `symbols` has exactly `a` copies of each of `1..=m` and satisfies
/// the ballot condition on every prefix.
pub fn is_admissible(symbols: &[u8], a: u32, m: u32) -> bool {
    if m < 2 || symbols.len() as u64 != u64::from(a) * u64::from(m) {
        return false;
    }
    let mut counts = vec![0u32; m as usize + 1];
    for &s in symbols {
        let s = u32::from(s);
        if s == 0 || s > m {
            return false;
        }
        counts[s as usize] += 1;
        // Only the incremented symbol can break the prefix condition.
        if s > 1 && counts[s as usize] > counts[s as usize - 1] {
            return false;
        }
    }
    counts[1..].iter().all(|&c| c == a)
}

/// Lexicographically ordered stream of all ballot sequences for `(a, m)`.
///
/// Panics if `m < 2`, `m > 255` or `a == 0`.
pub fn enumerate_ballot(a: u32, m: u32) -> BallotIter {
    assert!((2..=255).contains(&m), "alphabet size must be in 2..=255");
    assert!(a >= 1, "multiplicity must be positive");
    BallotIter {
        a,
        m,
        current: None,
        counts: vec![0; m as usize + 1],
        started: false,
    }
}

/// Iterator returned by [`enumerate_ballot`].
#[derive(Debug, Clone)]
pub struct BallotIter {
    a: u32,
    m: u32,
    current: Option<Vec<u8>>,
    // symbol counts of `current`, indexed by symbol
    counts: Vec<u32>,
    started: bool,
}

impl BallotIter {
    fn can_place(&self, s: u32) -> bool {
        let c = self.counts[s as usize];
        c < self.a && (s == 1 || self.counts[s as usize - 1] > c)
    }

    /// Fills `word` greedily with the smallest admissible symbol until full.
    fn complete(&mut self, word: &mut Vec<u8>) {
        let len = (self.a * self.m) as usize;
        while word.len() < len {
            let s = (1..=self.m)
                .find(|&s| self.can_place(s))
                .expect("an admissible prefix always extends");
            self.counts[s as usize] += 1;
            word.push(s as u8);
        }
    }

    fn advance(&mut self, mut word: Vec<u8>) -> Option<Vec<u8>> {
        while let Some(last) = word.pop() {
            self.counts[last as usize] -= 1;
            if let Some(s) = ((u32::from(last) + 1)..=self.m).find(|&s| self.can_place(s)) {
                self.counts[s as usize] += 1;
                word.push(s as u8);
                self.complete(&mut word);
                return Some(word);
            }
        }
        None
    }
}

impl Iterator for BallotIter {
    type Item = BallotSequence;

    fn next(&mut self) -> Option<BallotSequence> {
        let next = if !self.started {
            self.started = true;
            let mut word = Vec::with_capacity((self.a * self.m) as usize);
            self.complete(&mut word);
            Some(word)
        } else {
            let word = self.current.take()?;
            self.advance(word)
        };
        self.current = next.clone();
        next.map(|symbols| BallotSequence {
            symbols,
            a: self.a,
            m: self.m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Brute force: every distinct arrangement of the multiset, filtered.
    fn brute_force(a: u32, m: u32) -> Vec<Vec<u8>> {
        fn rec(a: u32, m: u32, counts: &mut Vec<u32>, word: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if word.len() as u32 == a * m {
                out.push(word.clone());
                return;
            }
            for s in 1..=m {
                if counts[s as usize] < a {
                    counts[s as usize] += 1;
                    word.push(s as u8);
                    rec(a, m, counts, word, out);
                    word.pop();
                    counts[s as usize] -= 1;
                }
            }
        }
        let mut all = Vec::new();
        rec(
            a,
            m,
            &mut vec![0; m as usize + 1],
            &mut Vec::new(),
            &mut all,
        );
        all.into_iter().filter(|w| is_admissible(w, a, m)).collect()
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), Count::from(1u32));
        assert_eq!(catalan(2), Count::from(2u32));
        assert_eq!(catalan(5), Count::from(42u32));
        assert_eq!(enumerate_ballot(5, 2).count(), 42);
    }

    #[test]
    fn generalized_catalan_values() {
        assert_eq!(generalized_catalan(2, 2), Count::from(2u32));
        assert_eq!(generalized_catalan(1, 3), Count::from(1u32));
        assert_eq!(brute_force(2, 3).len(), 5);
        assert_eq!(generalized_catalan(2, 3), Count::from(5u32));
    }

    #[test]
    fn small_enumerations() {
        let seqs: Vec<Vec<u8>> = enumerate_ballot(1, 2)
            .map(|s| s.symbols().to_vec())
            .collect();
        assert_eq!(seqs, vec![vec![1, 2]]);
        let seqs: Vec<Vec<u8>> = enumerate_ballot(2, 2)
            .map(|s| s.symbols().to_vec())
            .collect();
        assert_eq!(seqs, vec![vec![1, 1, 2, 2], vec![1, 2, 1, 2]]);
        assert_eq!(enumerate_ballot(2, 3).count(), 5);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&[1, 2, 1, 2], 2, 2));
        assert!(!is_admissible(&[2, 1, 1, 2], 2, 2));
        assert!(!is_admissible(&[1, 1, 2, 2, 2, 1], 3, 2));
        // wrong multiplicities or symbols out of range
        assert!(!is_admissible(&[1, 1, 1, 2], 2, 2));
        assert!(!is_admissible(&[1, 2, 3], 1, 2));
        assert!(!is_admissible(&[1, 0], 1, 2));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (a, m) in [(1, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (1, 5)] {
            let fast: Vec<Vec<u8>> = enumerate_ballot(a, m)
                .map(|s| s.symbols().to_vec())
                .collect();
            let slow = brute_force(a, m);
            assert_eq!(fast, slow, "a={a} m={m}");
        }
    }

    #[test]
    fn catalan_recursion() {
        for a in 0..=12u32 {
            let sum: Count = (0..=a).map(|k| catalan(k) * catalan(a - k)).sum();
            assert_eq!(catalan(a + 1), sum, "a={a}");
        }
    }

    #[test]
    fn specialization_to_catalan() {
        for a in 1..=12 {
            assert_eq!(generalized_catalan(a, 2), catalan(a));
        }
    }

    #[test]
    fn stream_is_strictly_increasing_and_admissible() {
        for (a, m) in [(6, 2), (3, 3), (2, 5)] {
            let all: Vec<BallotSequence> = enumerate_ballot(a, m).collect();
            assert!(all.windows(2).all(|w| w[0].symbols() < w[1].symbols()));
            assert!(all.iter().all(|s| is_admissible(s.symbols(), a, m)));
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn enumeration_formula_agreement() {
        for m in 2..=6u32 {
            for a in 1..=(18 / m) {
                assert_eq!(
                    Count::from(enumerate_ballot(a, m).count()),
                    generalized_catalan(a, m),
                    "a={a} m={m}"
                );
            }
        }
    }

    #[test]
    fn constructor_validates() {
        assert!(BallotSequence::new(vec![1, 2, 1, 2], 2, 2).is_ok());
        assert!(BallotSequence::new(vec![2, 1], 1, 2).is_err());
        assert!(BallotSequence::new(vec![1], 1, 1).is_err());
    }
}
