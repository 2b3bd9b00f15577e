//! Exact partition counts.
//!
//! `p(n)` comes from Euler's pentagonal-number recurrence
//!
//! ```text
//! p(n) = sum_{k>=1} (-1)^(k+1) [ p(n - k(3k-1)/2) + p(n - k(3k+1)/2) ]
//! ```
//!
//! evaluated over a process-wide memo that only ever grows. A second entry
//! point runs the same recurrence over residues, which is what the
//! congruence checkers use once arguments get large.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision non-negative count. Serialized as a decimal string.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountValue(BigUint);

impl CountValue {
    pub fn zero() -> Self {
        CountValue(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// Least non-negative residue modulo `m` (`m > 0`).
    pub fn rem_u64(&self, m: u64) -> u64 {
        assert!(m > 0, "modulus must be positive");
        (&self.0 % m).to_u64().expect("residue fits in u64")
    }

    pub fn is_divisible_by(&self, m: u64) -> bool {
        self.rem_u64(m) == 0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for CountValue {
    fn from(v: u64) -> Self {
        CountValue(BigUint::from(v))
    }
}

impl From<BigUint> for CountValue {
    fn from(v: BigUint) -> Self {
        CountValue(v)
    }
}

impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for CountValue {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(CountValue)
    }
}

impl<'a> AddAssign<&'a CountValue> for CountValue {
    fn add_assign(&mut self, rhs: &'a CountValue) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<u64> for CountValue {
    fn add_assign(&mut self, rhs: u64) {
        self.0 += rhs;
    }
}

impl<'a> Add<&'a CountValue> for &'a CountValue {
    type Output = CountValue;

    fn add(self, rhs: &'a CountValue) -> CountValue {
        CountValue(&self.0 + &rhs.0)
    }
}

impl<'a> Sum<&'a CountValue> for CountValue {
    fn sum<I: Iterator<Item = &'a CountValue>>(iter: I) -> Self {
        let mut acc = CountValue::zero();
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl PartialEq<u64> for CountValue {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Serialize for CountValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for CountValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generalized pentagonal offsets `(k(3k-1)/2, k(3k+1)/2)` for `k = 1, 2, ...`
/// while the smaller one is at most `n`.
pub(crate) fn pentagonal_pairs(n: usize) -> impl Iterator<Item = (usize, usize, bool)> {
    (1usize..)
        .map(|k| (k * (3 * k - 1) / 2, k * (3 * k + 1) / 2, k % 2 == 1))
        .take_while(move |&(g, _, _)| g <= n)
}

static MEMO: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

fn extend_memo(memo: &mut Vec<BigUint>, n: usize) {
    if memo.is_empty() {
        memo.push(BigUint::from(1u32));
    }
    while memo.len() <= n {
        let m = memo.len();
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for (g1, g2, positive) in pentagonal_pairs(m) {
            let acc = if positive { &mut plus } else { &mut minus };
            *acc += &memo[m - g1];
            if g2 <= m {
                *acc += &memo[m - g2];
            }
        }
        memo.push(plus - minus);
    }
}

/// `p(n)`, exactly.
pub fn partition_count(n: usize) -> CountValue {
    if let Some(v) = MEMO.read().expect("memo lock").get(n) {
        return CountValue(v.clone());
    }
    let mut memo = MEMO.write().expect("memo lock");
    extend_memo(&mut memo, n);
    CountValue(memo[n].clone())
}

/// `p(0), ..., p(n)`.
pub fn partition_counts(n: usize) -> Vec<CountValue> {
    {
        let memo = MEMO.read().expect("memo lock");
        if memo.len() > n {
            return memo[..=n].iter().cloned().map(CountValue).collect();
        }
    }
    let mut memo = MEMO.write().expect("memo lock");
    extend_memo(&mut memo, n);
    memo[..=n].iter().cloned().map(CountValue).collect()
}

/// Residues `p(0) mod m, ..., p(n) mod m`.
///
/// Same recurrence as [`partition_count`], reduced at every step, so the
/// cost no longer depends on the size of `p(n)`.
pub fn partition_counts_mod(n: usize, modulus: u64) -> Vec<u64> {
    assert!(modulus > 0, "modulus must be positive");
    let mut table = ResidueTable::new(modulus);
    table.extend_to(n);
    table.values
}

/// Incrementally extendable table of `p(n) mod m`.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    modulus: u64,
    values: Vec<u64>,
}

impl ResidueTable {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        ResidueTable {
            modulus,
            values: vec![1 % modulus],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Largest `n` currently held.
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn extend_to(&mut self, n: usize) {
        let m = self.modulus as u128;
        self.values.reserve(n.saturating_sub(self.max_n()));
        while self.values.len() <= n {
            let idx = self.values.len();
            // Accumulate as u128 and reduce once per entry.
            let mut plus: u128 = 0;
            let mut minus: u128 = 0;
            for (g1, g2, positive) in pentagonal_pairs(idx) {
                let mut term = self.values[idx - g1] as u128;
                if g2 <= idx {
                    term += self.values[idx - g2] as u128;
                }
                if positive {
                    plus += term;
                } else {
                    minus += term;
                }
            }
            let (plus, minus) = (plus % m, minus % m);
            let r = if plus >= minus {
                plus - minus
            } else {
                plus + m - minus
            };
            self.values.push(r as u64);
        }
    }

    /// `p(n) mod m`, extending the table if needed.
    pub fn get(&mut self, n: usize) -> u64 {
        self.extend_to(n);
        self.values[n]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// Bit length of `p(n)`; used to size fixed-width kernels.
pub(crate) fn partition_count_bits(n: usize) -> u64 {
    partition_count(n).0.bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: count partitions of n with parts <= k by direct recursion.
    fn brute(n: usize, k: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=k.min(n)).map(|part| brute(n - part, part)).sum()
    }

    #[test]
    fn small_values() {
        assert_eq!(partition_count(0), 1);
        assert_eq!(partition_count(4), 5);
        assert_eq!(partition_count(7), 15);
        assert_eq!(partition_count(8), 22);
        for n in 0..=30 {
            assert_eq!(partition_count(n), brute(n, n), "n = {n}");
        }
    }

    #[test]
    fn overflows_u64() {
        // p(100) is the classic MacMahon value.
        assert_eq!(partition_count(100).to_string(), "190569292");
        assert_eq!(partition_count(200).to_string(), "3972999029388");
        assert!(partition_count(450).to_u64().is_none());
    }

    #[test]
    fn residues_agree_with_exact() {
        let exact = partition_counts(600);
        for m in [2u64, 5, 7, 11, 25, 1925, 1 << 40] {
            let res = partition_counts_mod(600, m);
            for (n, (e, r)) in exact.iter().zip(&res).enumerate() {
                assert_eq!(e.rem_u64(m), *r, "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn residue_table_modulus_one() {
        assert!(partition_counts_mod(10, 1).iter().all(|&r| r == 0));
    }

    #[test]
    fn count_value_serde_is_decimal_string() {
        let v = partition_count(8);
        assert_eq!(v.to_string(), "22");
        assert_eq!("22".parse::<CountValue>().unwrap(), v);
    }
}
