//! Partitions and the rank and crank statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-increasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    n: usize,
}

impl Partition {
    /// Validates `parts` and caches their sum.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(
                "parts must be non-increasing".into(),
            ));
        }
        let n = parts.iter().map(|&p| p as usize).sum();
        Ok(Partition { parts, n })
    }

    pub fn empty() -> Self {
        Partition {
            parts: Vec::new(),
            n: 0,
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The number being partitioned.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest_part(&self) -> Option<u32> {
        self.parts.first().copied()
    }

    pub fn rank(&self) -> Result<i64> {
        rank_of(&self.parts)
    }

    pub fn crank(&self) -> Result<i64> {
        crank_of(&self.parts)
    }

    /// The conjugate partition (rows and columns of the Ferrers diagram swapped).
    pub fn conjugate(&self) -> Partition {
        let largest = self.largest_part().unwrap_or(0);
        let parts = (1..=largest)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count() as u32)
            .collect();
        Partition { parts, n: self.n }
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("()");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Largest part minus number of parts. Parts are assumed non-increasing.
pub fn rank_of(parts: &[u32]) -> Result<i64> {
    match parts.first() {
        None => Err(Error::EmptyPartition),
        Some(&largest) => Ok(largest as i64 - parts.len() as i64),
    }
}

/// Andrews–Garvan crank: the largest part when there are no 1s, otherwise
/// (parts strictly larger than the number of 1s) minus (number of 1s).
pub fn crank_of(parts: &[u32]) -> Result<i64> {
    let Some(&largest) = parts.first() else {
        return Err(Error::EmptyPartition);
    };
    // Parts are non-increasing, so the 1s form a suffix.
    let ones = parts.iter().rev().take_while(|&&p| p == 1).count();
    if ones == 0 {
        return Ok(largest as i64);
    }
    let larger = parts.iter().take_while(|&&p| p as usize > ones).count();
    Ok(larger as i64 - ones as i64)
}

pub fn rank(p: &Partition) -> Result<i64> {
    p.rank()
}

pub fn crank(p: &Partition) -> Result<i64> {
    p.crank()
}

/// `a ≡ b (mod n)`.
pub fn congruent(a: i64, b: i64, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let diff = a as i128 - b as i128;
    Ok(diff.rem_euclid(n as i128) == 0)
}

/// Partitions of `n` in reverse-lexicographic order, starting from `[n]`
/// and ending at `[1, 1, ..., 1]`.
pub fn enumerate_partitions(n: usize) -> Partitions {
    Partitions::new(n)
}

/// Iterator over the partitions of a fixed `n`. See [`enumerate_partitions`].
#[derive(Debug, Clone)]
pub struct Partitions {
    n: usize,
    parts: Vec<u32>,
    started: bool,
    done: bool,
}

impl Partitions {
    fn new(n: usize) -> Self {
        Partitions {
            n,
            parts: Vec::with_capacity(n),
            started: false,
            done: false,
        }
    }

    /// Advances to the next partition and returns it as a slice, without
    /// allocating. Used by the table builders.
    pub fn next_slice(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.n > 0 {
                self.parts.push(self.n as u32);
            }
            return Some(&self.parts);
        }
        // Drop the trailing 1s, then decrement the rightmost part > 1 and
        // refill greedily with copies of the decremented value.
        let mut rest = 0usize;
        while let Some(&1) = self.parts.last() {
            self.parts.pop();
            rest += 1;
        }
        let Some(last) = self.parts.last_mut() else {
            self.done = true;
            return None;
        };
        *last -= 1;
        let v = *last as usize;
        rest += 1;
        while rest > 0 {
            let take = v.min(rest);
            self.parts.push(take as u32);
            rest -= take;
        }
        Some(&self.parts)
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let n = self.n;
        self.next_slice().map(|parts| Partition {
            parts: parts.to_vec(),
            n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::partition_count;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(p(&[3, 2, 2, 1]).n(), 8);
    }

    #[test]
    fn enumeration_of_small_n() {
        let zero: Vec<_> = enumerate_partitions(0).collect();
        assert_eq!(zero, vec![Partition::empty()]);

        let four: Vec<Vec<u32>> = enumerate_partitions(4).map(Vec::from).collect();
        assert_eq!(
            four,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(enumerate_partitions(7).count(), 15);
        assert_eq!(enumerate_partitions(1).count(), 1);
    }

    #[test]
    fn enumeration_is_strictly_decreasing_and_valid() {
        for n in 0..=25 {
            let all: Vec<_> = enumerate_partitions(n).collect();
            for w in all.windows(2) {
                assert!(w[0] > w[1], "{} then {}", w[0], w[1]);
            }
            for part in &all {
                assert_eq!(part.n(), n);
                assert!(Partition::new(part.parts().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn enumeration_matches_recurrence() {
        for n in 0..=60 {
            let mut it = enumerate_partitions(n);
            let mut count = 0u64;
            while it.next_slice().is_some() {
                count += 1;
            }
            assert_eq!(partition_count(n), count, "n = {n}");
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(p(&[3, 2, 2, 1]).rank(), Ok(-1));
        assert_eq!(p(&[5, 1, 1]).rank(), Ok(2));
        for n in 1..10 {
            assert_eq!(p(&[n]).rank(), Ok(n as i64 - 1));
        }
        assert_eq!(Partition::empty().rank(), Err(Error::EmptyPartition));
    }

    #[test]
    fn crank_examples() {
        assert_eq!(p(&[4, 2, 1]).crank(), Ok(1));
        assert_eq!(p(&[4, 3, 2]).crank(), Ok(4));
        assert_eq!(p(&[1, 1, 1, 1]).crank(), Ok(-4));
        assert_eq!(p(&[1]).crank(), Ok(-1));
        assert_eq!(Partition::empty().crank(), Err(Error::EmptyPartition));
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(congruent(8649, 3462, 1729), Ok(true));
        assert_eq!(congruent(5, 3, 2), Ok(true));
        assert_eq!(congruent(5, 4, 2), Ok(false));
        assert_eq!(congruent(-3, 2, 5), Ok(true));
        assert_eq!(congruent(1, 1, 0), Err(Error::ZeroModulus));
        assert_eq!(congruent(i64::MIN, i64::MAX, 1), Ok(true));
    }

    #[test]
    fn conjugate_negates_rank() {
        for n in 1..=20 {
            for part in enumerate_partitions(n) {
                let c = part.conjugate();
                assert_eq!(c.n(), n);
                assert_eq!(c.rank().unwrap(), -part.rank().unwrap());
                assert_eq!(c.conjugate(), part);
            }
        }
    }

    proptest! {
        #[test]
        fn congruent_reflexive_symmetric(a in any::<i64>(), b in any::<i64>(), n in 1u64..10_000) {
            prop_assert!(congruent(a, a, n).unwrap());
            prop_assert_eq!(congruent(a, b, n).unwrap(), congruent(b, a, n).unwrap());
        }
    }
}
