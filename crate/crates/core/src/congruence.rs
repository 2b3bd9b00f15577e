//! Number-theoretic helpers (theta, Legendre symbol, `S_l`) and bounded,
//! empirical checkers for the Ono, Ahlgren–Ono and Mahlburg congruence
//! families.
//!
//! None of these checks prove anything about infinitely many primes or
//! progressions; they decide individual instances exactly.

use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::count::ResidueTable;
use crate::error::{Error, Result};
use crate::report::{CongruenceReport, Instance, Verdict};
use crate::tables::{class_counts, class_residue_sweep, StatKind, StatTable};

/// Default ceiling on `n` for `p(n)` residue computations.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// `(l^2 - 1) / 24`, defined when `gcd(l, 6) = 1`.
pub fn theta(l: i64) -> Result<i64> {
    if l % 2 == 0 || l % 3 == 0 {
        return Err(Error::NotCoprimeToSix(l));
    }
    let sq = (l as i128) * (l as i128) - 1;
    Ok((sq / 24) as i64)
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a / l)` by Euler's criterion.
pub fn legendre(a: i64, l: i64) -> Result<i8> {
    if l < 3 || l % 2 == 0 || !is_prime(l as u64) {
        return Err(Error::NotOddPrime(l));
    }
    let residue = a.rem_euclid(l) as u64;
    Ok(match mod_pow(residue, (l as u64 - 1) / 2, l as u64) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

fn require_prime_at_least_5(l: i64) -> Result<u64> {
    if l < 5 || !is_prime(l as u64) {
        return Err(Error::InvalidPrime(l));
    }
    Ok(l as u64)
}

/// The residue set `S_l` together with `theta_l` and `x_l = (-6 / l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlSet {
    pub l: u64,
    pub theta: i64,
    pub x: i8,
    pub members: Vec<u64>,
}

impl SlSet {
    pub fn contains(&self, y: u64) -> bool {
        self.members.binary_search(&y).is_ok()
    }
}

/// `S_l = { y in 0..l : ((y + theta_l) / l) is 0 or -x_l }`.
pub fn compute_sl(l: i64) -> Result<SlSet> {
    let lu = require_prime_at_least_5(l)?;
    let t = theta(l)?;
    let x = legendre(-6, l)?;
    let members = (0..lu)
        .filter(|&y| {
            let s = legendre(y as i64 + t, l).expect("l validated");
            s == 0 || s == -x
        })
        .collect();
    Ok(SlSet {
        l: lu,
        theta: t,
        x,
        members,
    })
}

/// Supplies `p(n) mod M` for `n` up to a budget, caching one residue table
/// per modulus.
#[derive(Debug, Clone)]
pub struct PartitionOracle {
    budget: u64,
    tables: HashMap<u64, ResidueTable>,
}

impl Default for PartitionOracle {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

impl PartitionOracle {
    pub fn new(budget: u64) -> Self {
        PartitionOracle {
            budget,
            tables: HashMap::new(),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// `p(n) mod modulus`, or `None` when `n` exceeds the budget.
    pub fn residue(&mut self, n: u128, modulus: u64) -> Option<u64> {
        if n > self.budget as u128 {
            return None;
        }
        let table = self
            .tables
            .entry(modulus)
            .or_insert_with(|| ResidueTable::new(modulus));
        Some(table.get(n as usize))
    }
}

/// Outcome of one instance check: the verdict, and when the gates pass the
/// `p` argument and its residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceCheck {
    pub verdict: Verdict,
    pub argument: Option<u128>,
    pub residue: Option<u64>,
}

impl InstanceCheck {
    fn not_applicable() -> Self {
        InstanceCheck {
            verdict: Verdict::NotApplicable,
            argument: None,
            residue: None,
        }
    }

    /// `numerator_mod_24` gates integrality even when the numerator itself
    /// overflows, in which case it is far beyond any budget.
    fn decide(
        oracle: &mut PartitionOracle,
        numerator: Option<u128>,
        numerator_mod_24: u64,
        modulus: u64,
    ) -> Self {
        if numerator_mod_24 != 0 {
            return Self::not_applicable();
        }
        let Some(numerator) = numerator else {
            return InstanceCheck {
                verdict: Verdict::OutOfBudget,
                argument: None,
                residue: None,
            };
        };
        let arg = numerator / 24;
        match oracle.residue(arg, modulus) {
            None => InstanceCheck {
                verdict: Verdict::OutOfBudget,
                argument: Some(arg),
                residue: None,
            },
            Some(r) => InstanceCheck {
                verdict: if r == 0 {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                },
                argument: Some(arg),
                residue: Some(r),
            },
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Parameter(format!("{base}^{exp} overflows")))
}

/// One instance of `p((l^k m^3 n + 1) / 24) = 0 mod l`.
///
/// Not applicable unless `gcd(n, m) = 1` and `24 | l^k m^3 n + 1`.
pub fn check_ono_instance(
    l: i64,
    k: u32,
    m: u64,
    n: u64,
    oracle: &mut PartitionOracle,
) -> Result<InstanceCheck> {
    let lu = require_prime_at_least_5(l)?;
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if !is_prime(m) {
        return Err(Error::NotPrime {
            what: "m",
            value: m,
        });
    }
    if n.gcd(&m) != 1 {
        return Ok(InstanceCheck::not_applicable());
    }
    let numerator = (lu as u128)
        .checked_pow(k)
        .and_then(|lk| lk.checked_mul((m as u128).checked_pow(3)?))
        .and_then(|v| v.checked_mul(n as u128))
        .and_then(|v| v.checked_add(1));
    let mod_24 = (mod_pow(lu, k as u64, 24) * mod_pow(m, 3, 24) % 24 * (n % 24) + 1) % 24;
    Ok(InstanceCheck::decide(oracle, numerator, mod_24, lu))
}

/// One instance of `p((I^3 n + 1) / 24) = 0 mod l^k`.
///
/// Not applicable unless `y` is in `S_l`, `I = -1 mod 24l`,
/// `n = 1 - 24y mod 24l`, `gcd(I, n) = 1` and `24 | I^3 n + 1`.
pub fn check_ahlgren_ono_instance(
    l: i64,
    k: u32,
    prime_i: u64,
    y: u64,
    n: u64,
    oracle: &mut PartitionOracle,
) -> Result<InstanceCheck> {
    let lu = require_prime_at_least_5(l)?;
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if !is_prime(prime_i) {
        return Err(Error::NotPrime {
            what: "I",
            value: prime_i,
        });
    }
    let modulus = checked_pow(lu, k)?;
    let sl = compute_sl(l)?;
    if !sl.contains(y) {
        return Ok(InstanceCheck::not_applicable());
    }
    let step = 24 * lu as i128;
    if (prime_i as i128 + 1).rem_euclid(step) != 0 {
        return Ok(InstanceCheck::not_applicable());
    }
    if (n as i128 - (1 - 24 * y as i128)).rem_euclid(step) != 0 {
        return Ok(InstanceCheck::not_applicable());
    }
    if prime_i.gcd(&n) != 1 {
        return Ok(InstanceCheck::not_applicable());
    }
    let numerator = (prime_i as u128)
        .checked_pow(3)
        .and_then(|c| c.checked_mul(n as u128))
        .and_then(|v| v.checked_add(1));
    let mod_24 = (mod_pow(prime_i, 3, 24) * (n % 24) + 1) % 24;
    Ok(InstanceCheck::decide(oracle, numerator, mod_24, modulus))
}

fn instance_from(check: InstanceCheck, modulus: u64) -> Instance {
    let mut inst = Instance::new(check.verdict);
    if let Some(arg) = check.argument {
        inst = inst.param("argument", arg);
        inst = match check.residue {
            Some(r) => inst.detail(format!("p({arg}) = {r} mod {modulus}")),
            None => inst.detail(format!("p({arg}) is beyond the budget")),
        };
    }
    inst
}

/// Ono instances for a fixed prime `m` and `0 <= n <= n_max`.
///
/// The theorem only covers a positive proportion of primes `m`, so a
/// failure for a particular `m` is data, not a counterexample.
pub fn sweep_ono(
    l: i64,
    k: u32,
    m: u64,
    n_max: u64,
    oracle: &mut PartitionOracle,
) -> Result<CongruenceReport> {
    let mut report = CongruenceReport::new(
        "ono",
        format!("p(({l}^{k} {m}^3 n + 1)/24) = 0 mod {l} for 0 <= n <= {n_max}, gcd(n, {m}) = 1 (bounded, empirical)"),
    )
    .expecting_failures(true);
    for n in 0..=n_max {
        let check = check_ono_instance(l, k, m, n, oracle)?;
        report.push(
            instance_from(check, l as u64)
                .param("l", l)
                .param("k", k)
                .param("m", m)
                .param("n", n),
        );
    }
    Ok(report)
}

/// Ahlgren–Ono instances for a fixed prime `I`: every residue `y` (or just
/// the one given) and every `1 <= n <= n_max` in the class `1 - 24y mod 24l`.
pub fn sweep_ahlgren_ono(
    l: i64,
    k: u32,
    prime_i: u64,
    y: Option<u64>,
    n_max: u64,
    oracle: &mut PartitionOracle,
) -> Result<CongruenceReport> {
    let lu = require_prime_at_least_5(l)?;
    let modulus = checked_pow(lu, k.max(1))?;
    let mut report = CongruenceReport::new(
        "ahlgren-ono",
        format!("p(({prime_i}^3 n + 1)/24) = 0 mod {l}^{k} for n = 1 - 24y mod {}, y in S_{l}, n <= {n_max} (bounded, empirical)", 24 * lu),
    )
    .expecting_failures(true);
    let step = 24 * lu;
    let ys: Vec<u64> = match y {
        Some(y) => vec![y],
        None => (0..lu).collect(),
    };
    for y in ys {
        let first = (1i128 - 24 * y as i128).rem_euclid(step as i128) as u64;
        let first = if first == 0 { step } else { first };
        let mut n = first;
        while n <= n_max {
            let check = check_ahlgren_ono_instance(l, k, prime_i, y, n, oracle)?;
            report.push(
                instance_from(check, modulus)
                    .param("l", l)
                    .param("k", k)
                    .param("I", prime_i)
                    .param("y", y)
                    .param("n", n),
            );
            n += step;
        }
    }
    Ok(report)
}

/// A candidate progression `A k + B` for which
/// `M(m, l^j, A k + B) = 0 mod l^i` for every residue `m` and `k <= k_checked`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProgressionWitness {
    pub a: u64,
    pub b: u64,
    pub l: u64,
    pub i: u32,
    pub j: u32,
    pub k_checked: u64,
    pub verdict: Verdict,
}

impl ProgressionWitness {
    pub fn new(a: u64, b: u64, l: u64, i: u32, j: u32, k_checked: u64) -> Self {
        ProgressionWitness {
            a,
            b,
            l,
            i,
            j,
            k_checked,
            verdict: Verdict::NotApplicable,
        }
    }

    fn moduli(&self) -> Result<(u64, u64)> {
        if self.a == 0 || self.b >= self.a {
            return Err(Error::Parameter(format!(
                "progression needs A >= 1 and 0 <= B < A (A = {}, B = {})",
                self.a, self.b
            )));
        }
        require_prime_at_least_5(self.l as i64)?;
        if self.j == 0 {
            return Err(Error::Parameter("j must be positive".into()));
        }
        Ok((checked_pow(self.l, self.j)?, checked_pow(self.l, self.i)?))
    }
}

/// Decides a witness directly from class counts of the crank table.
pub fn verify_progression(w: &ProgressionWitness, table: &StatTable) -> Result<ProgressionWitness> {
    if table.kind() != StatKind::Crank {
        return Err(Error::WrongTableKind {
            expected: "crank",
            got: table.kind().name(),
        });
    }
    let (q, r) = w.moduli()?;
    let last =
        w.a.checked_mul(w.k_checked)
            .and_then(|v| v.checked_add(w.b))
            .ok_or_else(|| Error::Parameter("A k + B overflows".into()))?;
    if last > table.max_n() as u64 {
        return Err(Error::TableTooSmall {
            needed: last as usize,
            have: table.max_n(),
        });
    }
    let holds = (0..=w.k_checked).try_fold(true, |acc, k| -> Result<bool> {
        if !acc {
            return Ok(false);
        }
        let cv = class_counts(table, (w.a * k + w.b) as usize, q)?;
        Ok(cv.counts.iter().all(|c| c.is_divisible_by(r)))
    })?;
    Ok(ProgressionWitness {
        verdict: if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        ..*w
    })
}

/// Parameters for [`scan_progressions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanParams {
    pub l: u64,
    pub i: u32,
    pub j: u32,
    pub a_max: u64,
    /// Minimum number of progression terms (`k = 0, 1, ...`) inside the table.
    pub k_min: u64,
}

struct ScanGrid {
    /// `good[n]`: every class count of row `n` is divisible by `l^i`.
    good: Vec<bool>,
}

impl ScanGrid {
    fn new(params: &ScanParams, table: &StatTable) -> Result<Self> {
        if table.kind() != StatKind::Crank {
            return Err(Error::WrongTableKind {
                expected: "crank",
                got: table.kind().name(),
            });
        }
        let probe = ProgressionWitness::new(1, 0, params.l, params.i, params.j, 0);
        let (q, r) = probe.moduli()?;
        let good = class_residue_sweep(table, q, r)
            .into_iter()
            .map(|row| row.iter().all(|&v| v == 0))
            .collect();
        Ok(ScanGrid { good })
    }

    fn witnesses_for(&self, params: &ScanParams, a: u64) -> Vec<ProgressionWitness> {
        let max_n = (self.good.len() - 1) as u64;
        (0..a)
            .filter_map(|b| {
                if b > max_n {
                    return None;
                }
                let k_last = (max_n - b) / a;
                if k_last + 1 < params.k_min.max(1) {
                    return None;
                }
                let holds = (0..=k_last).all(|k| self.good[(a * k + b) as usize]);
                holds.then(|| ProgressionWitness {
                    verdict: Verdict::Holds,
                    ..ProgressionWitness::new(a, b, params.l, params.i, params.j, k_last)
                })
            })
            .collect()
    }
}

/// Every `(A <= a_max, B < A)` whose progression satisfies the divisibility
/// condition at every term inside the table, provided the table holds at
/// least `k_min` terms. Output is in lexicographic `(A, B)` order.
pub fn scan_progressions(
    params: &ScanParams,
    table: &StatTable,
) -> Result<Vec<ProgressionWitness>> {
    let grid = ScanGrid::new(params, table)?;
    Ok((1..=params.a_max)
        .flat_map(|a| grid.witnesses_for(params, a))
        .collect())
}

/// Parallel form of [`scan_progressions`]; identical output.
pub fn scan_progressions_par(
    params: &ScanParams,
    table: &StatTable,
) -> Result<Vec<ProgressionWitness>> {
    let grid = ScanGrid::new(params, table)?;
    let chunks: Vec<Vec<ProgressionWitness>> = (1..=params.a_max)
        .into_par_iter()
        .map(|a| grid.witnesses_for(params, a))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::partition_count;
    use crate::tables::{build_stat_table, Method};
    use proptest::prelude::*;

    #[test]
    fn theta_values() {
        assert_eq!(theta(5), Ok(1));
        assert_eq!(theta(7), Ok(2));
        assert_eq!(theta(11), Ok(5));
        assert_eq!(theta(13), Ok(7));
        assert_eq!(theta(6), Err(Error::NotCoprimeToSix(6)));
        assert_eq!(theta(9), Err(Error::NotCoprimeToSix(9)));
        // l - theta_l gives the base cases 4, 5, 6.
        assert_eq!([5, 7, 11].map(|l| l - theta(l).unwrap()), [4, 5, 6]);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(4_611_686_018_427_387_847));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 7), Ok(0));
        assert_eq!(legendre(4, 5), Ok(1));
        assert_eq!(legendre(2, 5), Ok(-1));
        assert_eq!(legendre(-1, 5), Ok(1));
        assert_eq!(legendre(-1, 7), Ok(-1));
        assert_eq!(legendre(3, 2), Err(Error::NotOddPrime(2)));
        assert_eq!(legendre(3, 9), Err(Error::NotOddPrime(9)));
        assert_eq!(legendre(3, -7), Err(Error::NotOddPrime(-7)));
    }

    // Independent oracle: squares mod l by direct enumeration.
    fn legendre_by_squares(a: i64, l: i64) -> i8 {
        let r = a.rem_euclid(l);
        if r == 0 {
            0
        } else if (1..l).any(|x| x * x % l == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for l in [3i64, 5, 7, 11, 13, 97] {
            for a in -50..50 {
                assert_eq!(legendre(a, l).unwrap(), legendre_by_squares(a, l));
            }
        }
    }

    #[test]
    fn sl_sets() {
        let s5 = compute_sl(5).unwrap();
        assert_eq!((s5.x, s5.theta), (1, 1));
        assert_eq!(s5.members, vec![1, 2, 4]);
        let s7 = compute_sl(7).unwrap();
        assert_eq!(s7.members.len(), 4);
        for l in (5..=97).filter(|&l| is_prime(l as u64)) {
            let s = compute_sl(l).unwrap();
            assert_eq!(s.members.len() as i64, (l + 1) / 2, "l = {l}");
            // Oracle sweep built from the square-enumeration symbol.
            let oracle: Vec<u64> = (0..l)
                .filter(|&y| {
                    let v = legendre_by_squares(y + s.theta, l);
                    v == 0 || v == -legendre_by_squares(-6, l)
                })
                .map(|y| y as u64)
                .collect();
            assert_eq!(s.members, oracle);
        }
        assert_eq!(compute_sl(3), Err(Error::InvalidPrime(3)));
        assert_eq!(compute_sl(25), Err(Error::InvalidPrime(25)));
    }

    #[test]
    fn ono_gates() {
        let mut oracle = PartitionOracle::new(10_000);
        // 24 does not divide 5 * 7^3 * 1 + 1 = 1716.
        let c = check_ono_instance(5, 1, 7, 1, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        // gcd(n, m) = m.
        let c = check_ono_instance(5, 1, 7, 14, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        let c = check_ono_instance(5, 1, 7, 0, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        // 5 * 343 * 13 + 1 = 22296 = 24 * 929.
        let c = check_ono_instance(5, 1, 7, 13, &mut oracle).unwrap();
        assert_eq!(c.argument, Some(929));
        let direct = partition_count(929).rem_u64(5);
        assert_eq!(c.residue, Some(direct));
        assert_eq!(c.verdict == Verdict::Holds, direct == 0);

        assert!(check_ono_instance(4, 1, 7, 13, &mut oracle).is_err());
        assert!(check_ono_instance(5, 0, 7, 13, &mut oracle).is_err());
        assert!(check_ono_instance(5, 1, 9, 13, &mut oracle).is_err());
    }

    #[test]
    fn ono_budget() {
        let mut oracle = PartitionOracle::new(100);
        let c = check_ono_instance(5, 1, 7, 13, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::OutOfBudget);
        assert_eq!(c.argument, Some(929));
        // 5^61 overflows u128; 5^61 = 5 mod 24 keeps the instance applicable.
        let c = check_ono_instance(5, 61, 7, 13, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::OutOfBudget);
        assert_eq!(c.argument, None);
        let c = check_ono_instance(5, 60, 7, 13, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn ahlgren_ono_gates() {
        let mut oracle = PartitionOracle::new(1000);
        // y = 0 is not in S_5.
        let c = check_ahlgren_ono_instance(5, 1, 239, 0, 1, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        // 241 is prime but not -1 mod 120.
        let c = check_ahlgren_ono_instance(5, 1, 241, 4, 25, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        // n in the wrong class.
        let c = check_ahlgren_ono_instance(5, 1, 239, 4, 26, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        // All gates pass: (239^3 * 25 + 1) / 24 = 14220749.
        let c = check_ahlgren_ono_instance(5, 1, 239, 4, 25, &mut oracle).unwrap();
        assert_eq!(c.verdict, Verdict::OutOfBudget);
        assert_eq!(c.argument, Some(14_220_749));

        assert!(check_ahlgren_ono_instance(5, 1, 119, 4, 25, &mut oracle).is_err());
        assert!(check_ahlgren_ono_instance(5, 1, 239, 4, 0, &mut oracle).is_err());
    }

    #[test]
    fn progression_checks() {
        let table = build_stat_table(StatKind::Crank, 300, Method::Series).unwrap();
        // 25k + 24: p is divisible by 25 and the five crank classes mod 5 are equal.
        let w = ProgressionWitness::new(25, 24, 5, 1, 1, 11);
        assert_eq!(
            verify_progression(&w, &table).unwrap().verdict,
            Verdict::Holds
        );
        // 5k + 4 at k = 0: classes are all 1.
        let w = ProgressionWitness::new(5, 4, 5, 1, 1, 0);
        assert_eq!(
            verify_progression(&w, &table).unwrap().verdict,
            Verdict::Fails
        );
        let w = ProgressionWitness::new(25, 24, 5, 1, 1, 12);
        assert!(matches!(
            verify_progression(&w, &table),
            Err(Error::TableTooSmall {
                needed: 324,
                have: 300
            })
        ));
        let bad = ProgressionWitness::new(5, 5, 5, 1, 1, 1);
        assert!(verify_progression(&bad, &table).is_err());
    }

    #[test]
    fn scanner_trivial_modulus_and_coverage() {
        let table = build_stat_table(StatKind::Crank, 60, Method::Series).unwrap();
        let params = ScanParams {
            l: 5,
            i: 0,
            j: 1,
            a_max: 6,
            k_min: 1,
        };
        let all = scan_progressions(&params, &table).unwrap();
        assert_eq!(all.len(), (1..=6).sum::<u64>() as usize);
        // With k_min above what the table allows, nothing is emitted.
        let params = ScanParams {
            k_min: 100,
            ..params
        };
        assert!(scan_progressions(&params, &table).unwrap().is_empty());
    }

    #[test]
    fn scanner_witnesses_reverify() {
        let table = build_stat_table(StatKind::Crank, 400, Method::Series).unwrap();
        let params = ScanParams {
            l: 5,
            i: 1,
            j: 1,
            a_max: 50,
            k_min: 5,
        };
        let found = scan_progressions(&params, &table).unwrap();
        assert!(found.iter().any(|w| (w.a, w.b) == (25, 24)));
        for w in &found {
            assert_eq!(
                verify_progression(w, &table).unwrap().verdict,
                Verdict::Holds
            );
        }
        assert!(found
            .windows(2)
            .all(|p| (p[0].a, p[0].b) < (p[1].a, p[1].b)));
        assert_eq!(scan_progressions_par(&params, &table).unwrap(), found);
    }

    proptest! {
        #[test]
        fn legendre_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, idx in 0usize..8) {
            let l = [5i64, 7, 11, 13, 17, 19, 23, 97][idx];
            prop_assert_eq!(
                legendre(a, l).unwrap() * legendre(b, l).unwrap(),
                legendre(a * b, l).unwrap()
            );
            if a.rem_euclid(l) != 0 {
                prop_assert_eq!(legendre(a * a, l).unwrap(), 1);
            }
        }
    }
}
