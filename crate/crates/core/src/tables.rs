//! Rank and crank histograms `N(m, n)`, `M(m, n)`, their residue-class
//! aggregates, and verifiers for the classical congruences.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::theta;
use crate::count::{partition_counts_mod, CountValue};
use crate::error::{Error, Result};
use crate::partition::{crank_of, enumerate_partitions, rank_of};
use crate::qseries::crank_half_rows;
use crate::report::{CongruenceReport, Instance, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatKind {
    Rank,
    Crank,
}

impl StatKind {
    pub fn name(self) -> &'static str {
        match self {
            StatKind::Rank => "rank",
            StatKind::Crank => "crank",
        }
    }

    fn of(self, parts: &[u32]) -> i64 {
        match self {
            StatKind::Rank => rank_of(parts),
            StatKind::Crank => crank_of(parts),
        }
        .expect("only non-empty partitions are scored")
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumeration,
    Series,
}

/// Histogram of a partition statistic for every `n <= max_n`.
///
/// Row `n` covers `m` in `-n ..= n`. Row 0 is all zeros: neither statistic
/// is defined on the empty partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatTable {
    kind: StatKind,
    rows: Vec<Vec<CountValue>>,
}

impl StatTable {
    /// Builds a table from sparse rows, e.g. when loading a cache.
    pub fn from_rows(kind: StatKind, rows: Vec<BTreeMap<i64, CountValue>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Parameter("a table needs at least row 0".into()));
        }
        let dense = rows
            .into_iter()
            .enumerate()
            .map(|(n, sparse)| {
                let mut row = vec![CountValue::zero(); 2 * n + 1];
                for (m, c) in sparse {
                    if m.unsigned_abs() as usize > n {
                        return Err(Error::Parameter(format!(
                            "statistic {m} out of range for n = {n}"
                        )));
                    }
                    row[(m + n as i64) as usize] = c;
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StatTable { kind, rows: dense })
    }

    pub fn kind(&self) -> StatKind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// Number of partitions of `n` with statistic `m`.
    pub fn count(&self, n: usize, m: i64) -> Option<&CountValue> {
        let row = self.rows.get(n)?;
        if m.unsigned_abs() as usize > n {
            return None;
        }
        Some(&row[(m + n as i64) as usize])
    }

    /// Nonzero `(m, count)` entries of row `n`, increasing in `m`.
    pub fn row(&self, n: usize) -> impl Iterator<Item = (i64, &CountValue)> + '_ {
        let offset = n as i64;
        self.rows[n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (i as i64 - offset, c))
    }

    pub fn row_map(&self, n: usize) -> BTreeMap<i64, CountValue> {
        self.row(n).map(|(m, c)| (m, c.clone())).collect()
    }

    pub fn row_sum(&self, n: usize) -> CountValue {
        self.rows[n].iter().sum()
    }

    /// The prefix of this table up to `max_n`.
    pub fn truncated(&self, max_n: usize) -> Result<StatTable> {
        if max_n > self.max_n() {
            return Err(Error::TableTooSmall {
                needed: max_n,
                have: self.max_n(),
            });
        }
        Ok(StatTable {
            kind: self.kind,
            rows: self.rows[..=max_n].to_vec(),
        })
    }

    fn require(&self, kind: StatKind, needed: usize) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongTableKind {
                expected: kind.name(),
                got: self.kind.name(),
            });
        }
        if needed > self.max_n() {
            return Err(Error::TableTooSmall {
                needed,
                have: self.max_n(),
            });
        }
        Ok(())
    }
}

/// Builds a rank or crank table up to `max_n`.
///
/// The series method is available for cranks only. Rows 0 and 1 always
/// carry the combinatorial values (`{}` and `{-1: 1}` for cranks); from
/// row 2 on both methods agree.
pub fn build_stat_table(kind: StatKind, max_n: usize, method: Method) -> Result<StatTable> {
    match (kind, method) {
        (StatKind::Rank, Method::Series) => Err(Error::MethodUnavailable),
        (_, Method::Enumeration) => Ok(build_by_enumeration(kind, max_n)),
        (StatKind::Crank, Method::Series) => Ok(build_crank_by_series(max_n)),
    }
}

fn build_by_enumeration(kind: StatKind, max_n: usize) -> StatTable {
    let rows = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut counts = vec![0u64; 2 * n + 1];
            if n > 0 {
                let mut it = enumerate_partitions(n);
                while let Some(parts) = it.next_slice() {
                    counts[(kind.of(parts) + n as i64) as usize] += 1;
                }
            }
            counts.into_iter().map(CountValue::from).collect()
        })
        .collect();
    StatTable { kind, rows }
}

fn build_crank_by_series(max_n: usize) -> StatTable {
    let half = crank_half_rows(max_n);
    let mut rows: Vec<Vec<CountValue>> = Vec::with_capacity(max_n + 1);
    for (n, h) in half.into_iter().enumerate() {
        if n < 2 {
            let mut row = vec![CountValue::zero(); 2 * n + 1];
            if n == 1 {
                row[0] = CountValue::from(1);
            }
            rows.push(row);
            continue;
        }
        let h: Vec<CountValue> = h
            .into_iter()
            .map(|c| {
                debug_assert!(!c.is_negative());
                CountValue::from(c.into_parts().1)
            })
            .collect();
        let mut row: Vec<CountValue> = h[1..].iter().rev().cloned().collect();
        row.extend(h);
        rows.push(row);
    }
    StatTable {
        kind: StatKind::Crank,
        rows,
    }
}

/// Counts of partitions of `n` whose statistic lies in each residue class
/// mod `q`, indexed by least non-negative residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVector {
    pub q: u64,
    pub n: usize,
    pub counts: Vec<CountValue>,
}

impl ClassVector {
    pub fn all_equal(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    pub fn total(&self) -> CountValue {
        self.counts.iter().sum()
    }

    /// `counts[m] == counts[q - m]` for `1 <= m < q`.
    pub fn is_symmetric(&self) -> bool {
        let q = self.counts.len();
        (1..q).all(|m| self.counts[m] == self.counts[q - m])
    }
}

pub fn class_counts(table: &StatTable, n: usize, q: u64) -> Result<ClassVector> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > table.max_n() {
        return Err(Error::OutOfRange {
            n,
            max_n: table.max_n(),
        });
    }
    let mut counts = vec![CountValue::zero(); q as usize];
    for (m, c) in table.row(n) {
        counts[m.rem_euclid(q as i64) as usize] += c;
    }
    Ok(ClassVector { q, n, counts })
}

/// The four classical families `(A, B, modulus)`: `modulus | p(A n + B)`.
const RAMANUJAN_FAMILIES: [(usize, usize, u64); 4] =
    [(5, 4, 5), (7, 5, 7), (11, 6, 11), (25, 24, 25)];

/// Checks `5 | p(5n+4)`, `7 | p(7n+5)`, `11 | p(11n+6)` and `25 | p(25n+24)`
/// for every `n <= n_max`.
pub fn verify_ramanujan(n_max: usize) -> CongruenceReport {
    // lcm(5, 7, 11, 25)
    const MODULUS: u64 = 1925;
    let residues = partition_counts_mod(25 * n_max + 24, MODULUS);
    let mut report = CongruenceReport::new(
        "ramanujan",
        format!("p(5n+4) = 0 mod 5, p(7n+5) = 0 mod 7, p(11n+6) = 0 mod 11, p(25n+24) = 0 mod 25 for n <= {n_max}"),
    );
    for (a, b, modulus) in RAMANUJAN_FAMILIES {
        for n in 0..=n_max {
            let arg = a * n + b;
            let r = residues[arg] % modulus;
            let verdict = if r == 0 {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            report.push(
                Instance::new(verdict)
                    .param("family", format!("p({a}n+{b}) mod {modulus}"))
                    .param("n", n)
                    .param("argument", arg)
                    .detail(format!("p({arg}) = {r} mod {modulus}")),
            );
        }
    }
    report
}

/// Checks `l | p(l n - theta_l)` for `1 <= n <= n_max`.
///
/// Failures are reported as data for primes other than 5, 7 and 11, where no
/// such congruence is expected.
pub fn verify_theta_form(l: i64, n_max: usize) -> Result<CongruenceReport> {
    let t = theta(l)?;
    if l < 5 {
        return Err(Error::InvalidPrime(l));
    }
    let (l_u, t_u) = (l as usize, t as usize);
    let residues = partition_counts_mod(l_u * n_max, l as u64);
    let mut report = CongruenceReport::new(
        "theta",
        format!("p({l}n - {t}) = 0 mod {l} for 1 <= n <= {n_max}"),
    )
    .expecting_failures(![5, 7, 11].contains(&l));
    for n in 1..=n_max {
        let arg = l_u * n - t_u;
        let r = residues[arg];
        let verdict = if r == 0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        report.push(
            Instance::new(verdict)
                .param("l", l)
                .param("theta", t)
                .param("n", n)
                .param("argument", arg)
                .detail(format!("p({arg}) = {r} mod {l}")),
        );
    }
    Ok(report)
}

fn equal_class_instance(table: &StatTable, n: usize, q: u64, k: usize) -> Result<Instance> {
    let cv = class_counts(table, n, q)?;
    let verdict = if cv.all_equal() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let listing: Vec<String> = cv.counts.iter().map(ToString::to_string).collect();
    Ok(Instance::new(verdict)
        .param("k", k)
        .param("n", n)
        .param("q", q)
        .detail(format!("classes [{}]", listing.join(", "))))
}

/// Rank classes mod 5 of `5k+4` and mod 7 of `7k+5` are all equal, for `k <= k_max`.
pub fn verify_dyson_rank(table: &StatTable, k_max: usize) -> Result<CongruenceReport> {
    table.require(StatKind::Rank, 7 * k_max + 5)?;
    let mut report = CongruenceReport::new(
        "dyson-rank",
        format!("N(m,5,5k+4) equal for all m and N(m,7,7k+5) equal for all m, k <= {k_max}"),
    );
    for k in 0..=k_max {
        report.push(equal_class_instance(table, 5 * k + 4, 5, k)?);
        report.push(equal_class_instance(table, 7 * k + 5, 7, k)?);
    }
    Ok(report)
}

/// Crank classes mod 11 of `11k+6` are all equal, for `k <= k_max`.
pub fn verify_dyson_crank_guess(table: &StatTable, k_max: usize) -> Result<CongruenceReport> {
    table.require(StatKind::Crank, 11 * k_max + 6)?;
    let mut report = CongruenceReport::new(
        "dyson-crank",
        format!("M(m,11,11k+6) equal for all m, k <= {k_max}"),
    );
    for k in 0..=k_max {
        report.push(equal_class_instance(table, 11 * k + 6, 11, k)?);
    }
    Ok(report)
}

/// Residues of class counts: `M(m, q, n) mod r` for every `n` in the table.
/// Shared by the progression scanner.
pub(crate) fn class_residue_sweep(table: &StatTable, q: u64, r: u64) -> Vec<Vec<u64>> {
    let modulus = BigUint::from(r);
    (0..=table.max_n())
        .into_par_iter()
        .map(|n| {
            let mut acc = vec![BigUint::default(); q as usize];
            for (m, c) in table.row(n) {
                acc[m.rem_euclid(q as i64) as usize] += c.as_biguint();
            }
            acc.iter()
                .map(|v| {
                    let rem = v % &modulus;
                    rem.iter_u64_digits().next().unwrap_or(0)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::partition_count;

    fn map(entries: &[(i64, u64)]) -> BTreeMap<i64, CountValue> {
        entries
            .iter()
            .map(|&(m, c)| (m, CountValue::from(c)))
            .collect()
    }

    #[test]
    fn row_four() {
        let rank = build_stat_table(StatKind::Rank, 6, Method::Enumeration).unwrap();
        assert_eq!(
            rank.row_map(4),
            map(&[(-3, 1), (-1, 1), (0, 1), (1, 1), (3, 1)])
        );
        let crank = build_stat_table(StatKind::Crank, 6, Method::Enumeration).unwrap();
        assert_eq!(
            crank.row_map(4),
            map(&[(-4, 1), (-2, 1), (0, 1), (2, 1), (4, 1)])
        );
        assert_eq!(crank.row_map(1), map(&[(-1, 1)]));
        assert!(crank.row_map(0).is_empty());
        for n in 2..=6 {
            assert_eq!(rank.row_sum(n), partition_count(n));
            assert_eq!(crank.row_sum(n), partition_count(n));
        }
        assert_eq!(rank.row_sum(1), 1);
    }

    #[test]
    fn rank_series_is_rejected() {
        assert_eq!(
            build_stat_table(StatKind::Rank, 5, Method::Series),
            Err(Error::MethodUnavailable)
        );
    }

    #[test]
    fn methods_agree_on_cranks() {
        let a = build_stat_table(StatKind::Crank, 40, Method::Enumeration).unwrap();
        let b = build_stat_table(StatKind::Crank, 40, Method::Series).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn class_count_examples() {
        let rank = build_stat_table(StatKind::Rank, 10, Method::Enumeration).unwrap();
        let cv = class_counts(&rank, 4, 5).unwrap();
        assert_eq!(cv.counts, vec![CountValue::from(1); 5]);
        for n in 0..=10 {
            let one = class_counts(&rank, n, 1).unwrap();
            assert_eq!(one.counts.len(), 1);
            if n >= 1 {
                assert_eq!(one.counts[0], partition_count(n));
            }
        }
        let crank = build_stat_table(StatKind::Crank, 10, Method::Series).unwrap();
        let cv = class_counts(&crank, 6, 11).unwrap();
        assert_eq!(cv.counts, vec![CountValue::from(1); 11]);
        assert!(cv.is_symmetric());
        assert_eq!(
            class_counts(&crank, 11, 3),
            Err(Error::OutOfRange { n: 11, max_n: 10 })
        );
        assert_eq!(class_counts(&crank, 3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn ramanujan_small() {
        let r = verify_ramanujan(40);
        assert_eq!(r.summary().fails, 0);
        assert_eq!(r.summary().holds, 4 * 41);
        let p24 = r
            .instances()
            .iter()
            .find(|i| i.params["argument"] == "24")
            .unwrap();
        assert_eq!(p24.verdict, Verdict::Holds);
    }

    #[test]
    fn theta_families() {
        let r5 = verify_theta_form(5, 200).unwrap();
        assert_eq!(r5.summary().fails, 0);
        assert!(!r5.failures_expected());
        let r11 = verify_theta_form(11, 3).unwrap();
        assert_eq!(r11.instances()[0].params["argument"], "6");
        assert_eq!(r11.instances()[0].verdict, Verdict::Holds);

        let r13 = verify_theta_form(13, 5).unwrap();
        assert!(r13.failures_expected());
        assert_eq!(r13.instances()[0].params["argument"], "6");
        assert_eq!(r13.instances()[0].verdict, Verdict::Fails);
        assert_eq!(r13.unexpected_failures(), 0);

        assert_eq!(
            verify_theta_form(9, 5).unwrap_err(),
            Error::NotCoprimeToSix(9)
        );
        assert_eq!(verify_theta_form(1, 5).unwrap_err(), Error::InvalidPrime(1));
    }

    #[test]
    fn theta_reproduces_ramanujan_families() {
        for (l, b) in [(5usize, 4usize), (7, 5), (11, 6)] {
            let r = verify_theta_form(l as i64, 30).unwrap();
            for (idx, inst) in r.instances().iter().enumerate() {
                // p(l(n+1) - theta) = p(l n + b)
                assert_eq!(inst.params["argument"], (l * idx + b).to_string());
            }
        }
    }

    #[test]
    fn dyson_small_sweeps() {
        let rank = build_stat_table(StatKind::Rank, 19, Method::Enumeration).unwrap();
        let r = verify_dyson_rank(&rank, 2).unwrap();
        assert_eq!(r.summary().fails, 0);
        assert_eq!(r.summary().total, 6);
        assert!(matches!(
            verify_dyson_rank(&rank, 3),
            Err(Error::TableTooSmall {
                needed: 26,
                have: 19
            })
        ));

        let crank = build_stat_table(StatKind::Crank, 60, Method::Series).unwrap();
        assert_eq!(
            verify_dyson_crank_guess(&crank, 4).unwrap().summary().fails,
            0
        );
        assert!(matches!(
            verify_dyson_rank(&crank, 1),
            Err(Error::WrongTableKind { .. })
        ));
    }

    #[test]
    fn rank_classes_mod_11_are_not_all_equal() {
        // The rank does not split p(11k+6) evenly mod 11; this is what
        // motivates the crank.
        let rank = build_stat_table(StatKind::Rank, 17, Method::Enumeration).unwrap();
        assert!(!class_counts(&rank, 17, 11).unwrap().all_equal());
    }

    #[test]
    fn from_rows_validation() {
        assert!(StatTable::from_rows(StatKind::Rank, vec![]).is_err());
        assert!(
            StatTable::from_rows(StatKind::Rank, vec![BTreeMap::new(), map(&[(2, 1)])]).is_err()
        );
        let t =
            StatTable::from_rows(StatKind::Rank, vec![BTreeMap::new(), map(&[(0, 1)])]).unwrap();
        assert_eq!(t.count(1, 0), Some(&CountValue::from(1)));
        assert_eq!(t.count(1, 3), None);
        assert_eq!(t.truncated(0).unwrap().max_n(), 0);
        assert!(t.truncated(2).is_err());
    }
}
