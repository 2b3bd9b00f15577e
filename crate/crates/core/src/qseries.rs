//! Truncated formal power series in `q`, and the two-variable crank series.
//!
//! Univariate series keep exact [`BigInt`] coefficients `c_0 ..= c_N`.
//!
//! The crank product
//!
//! ```text
//! prod_{k>=1} (1 - q^k) / ((1 - z q^k)(1 - z^-1 q^k))
//! ```
//!
//! is expanded factor by factor. Every step is an integer addition or
//! subtraction, so the expansion is a ring homomorphism image of the exact
//! one: the kernel runs it independently modulo `2^64` and modulo a few
//! 62-bit primes, then lifts each coefficient back to `Z` by CRT. The number
//! of channels is chosen from the bit length of `p(N)`, which bounds every
//! coefficient of rows `n >= 2` (rows 0 and 1 hold only `0`, `±1`).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::count::partition_count_bits;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(precision: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); precision + 1],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds `c_0 + c_1 q + ...`, padding with zeros or truncating to `precision`.
    pub fn from_coeffs<T: Into<BigInt>>(
        coeffs: impl IntoIterator<Item = T>,
        precision: usize,
    ) -> Self {
        let mut out: Vec<BigInt> = coeffs
            .into_iter()
            .take(precision + 1)
            .map(Into::into)
            .collect();
        out.resize(precision + 1, BigInt::zero());
        TruncatedSeries { coeffs: out }
    }

    /// Highest retained exponent.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Cauchy product truncated at the common precision.
    pub fn multiply(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        let n = self.precision();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplicative inverse, for series with constant term `±1`.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let c0 = &self.coeffs[0];
        let unit = if c0.is_one() {
            1
        } else if *c0 == BigInt::from(-1) {
            -1
        } else {
            return Err(Error::NonUnitConstant);
        };
        let n = self.precision();
        let mut inv: Vec<BigInt> = Vec::with_capacity(n + 1);
        inv.push(BigInt::from(unit));
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &inv[k - i];
                }
            }
            // c0 * inv_k = -acc and c0^{-1} = c0.
            inv.push(-acc * unit);
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    /// Coefficients replaced by least non-negative residues mod `m`.
    pub fn reduce_mod(&self, m: u64) -> Result<TruncatedSeries> {
        let modulus = check_reduction_modulus(m)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(&modulus)).collect(),
        })
    }

    /// In-place multiplication by `1 / (1 - q^k)`.
    fn divide_by_one_minus_qk(&mut self, k: usize) {
        for n in k..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            hi[0] += &lo[n - k];
        }
    }

    /// In-place multiplication by `(1 - q^k)`.
    fn multiply_by_one_minus_qk(&mut self, k: usize) {
        for n in (k..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            hi[0] -= &lo[n - k];
        }
    }
}

fn check_reduction_modulus(m: u64) -> Result<BigInt> {
    if m < 2 {
        return Err(Error::ModulusTooSmall(m));
    }
    Ok(BigInt::from(m))
}

pub fn series_multiply(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.multiply(b)
}

pub fn series_invert(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.invert()
}

/// `prod_{k=1..N} (1 - q^k)^-1`, whose coefficients are `p(0), ..., p(N)`.
pub fn euler_partition_series(precision: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(precision);
    for k in 1..=precision {
        s.divide_by_one_minus_qk(k);
    }
    s
}

/// `prod_{k=1..N} (1 - q^k)`, truncated at `q^N`.
pub fn euler_function_series(precision: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(precision);
    for k in 1..=precision {
        s.multiply_by_one_minus_qk(k);
    }
    s
}

/// Rows of Laurent polynomials in `z`, one per power of `q`.
///
/// Row `n` stores the coefficients of `z^-n ..= z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    rows: Vec<Vec<BigInt>>,
}

impl BivariateSeries {
    /// Builds a series from explicit rows. Row `n` must have length `2n + 1`.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Parameter("a series needs at least row 0".into()));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != 2 * n + 1 {
                return Err(Error::Parameter(format!(
                    "row {n} has {} entries, expected {}",
                    row.len(),
                    2 * n + 1
                )));
            }
        }
        Ok(BivariateSeries { rows })
    }

    pub fn precision(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficient of `z^m q^n`; zero outside `|m| <= n`.
    pub fn coeff(&self, n: usize, m: i64) -> BigInt {
        if m.unsigned_abs() as usize > n {
            return BigInt::zero();
        }
        self.rows[n][(m + n as i64) as usize].clone()
    }

    /// Nonzero `(m, coefficient)` pairs of row `n`, in increasing `m`.
    pub fn row(&self, n: usize) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        let offset = n as i64;
        self.rows[n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (i as i64 - offset, c))
    }

    /// Row `n` evaluated at `z = 1`.
    pub fn row_sum(&self, n: usize) -> BigInt {
        self.rows[n].iter().sum()
    }

    pub fn reduce_mod(&self, m: u64) -> Result<BivariateSeries> {
        let modulus = check_reduction_modulus(m)?;
        Ok(BivariateSeries {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|c| c.mod_floor(&modulus)).collect())
                .collect(),
        })
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }
}

/// Truncation at `q^N` of the Andrews–Garvan crank product.
///
/// For `n >= 2` the coefficient of `z^m q^n` is the number of partitions
/// of `n` with crank `m`. Rows 0 and 1 are the product's own coefficients,
/// `{0: 1}` and `{-1: 1, 0: -1, 1: 1}`.
pub fn crank_generating_series(precision: usize) -> BivariateSeries {
    let half = crank_half_rows(precision);
    let rows = half
        .into_iter()
        .map(|h| {
            let mut row: Vec<BigInt> = h[1..].iter().rev().cloned().collect();
            row.extend(h);
            row
        })
        .collect();
    BivariateSeries { rows }
}

/// Rows of the crank product restricted to `m >= 0`; the product is
/// invariant under `z -> 1/z`.
pub(crate) fn crank_half_rows(precision: usize) -> Vec<Vec<BigInt>> {
    let bits = partition_count_bits(precision.max(1)) + 2;
    let mut channels: Vec<Box<dyn Fn() -> Vec<u64>>> = Vec::new();
    channels.push(Box::new(move || {
        expand_crank_product(&Wrapping64, precision)
    }));
    let mut capacity = 64u64;
    for &p in CRT_PRIMES {
        if capacity >= bits {
            break;
        }
        channels.push(Box::new(move || {
            expand_crank_product(&PrimeField(p), precision)
        }));
        capacity += 61;
    }
    assert!(
        capacity >= bits,
        "precision {precision} needs more CRT channels than are configured"
    );
    let residues: Vec<Vec<u64>> = channels.iter().map(|run| run()).collect();
    let lift = CrtLift::new(residues.len());
    (0..=precision)
        .map(|n| {
            let start = row_offset(n);
            (start..start + n + 1)
                .map(|idx| lift.lift(residues.iter().map(|r| r[idx])))
                .collect()
        })
        .collect()
}

/// Pairwise coprime moduli used next to `2^64`. Each is `2^62 - d`.
const CRT_PRIMES: &[u64] = &[
    (1 << 62) - 57,
    (1 << 62) - 87,
    (1 << 62) - 117,
    (1 << 62) - 143,
    (1 << 62) - 153,
    (1 << 62) - 167,
    (1 << 62) - 171,
    (1 << 62) - 195,
    (1 << 62) - 203,
    (1 << 62) - 273,
];

trait Ring {
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
}

struct Wrapping64;

impl Ring for Wrapping64 {
    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        a.wrapping_add(b)
    }
    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        a.wrapping_sub(b)
    }
}

/// Residues mod an odd modulus below `2^63`, kept in `[0, p)`.
struct PrimeField(u64);

impl Ring for PrimeField {
    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        s.min(s.wrapping_sub(self.0))
    }
    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        let d = a.wrapping_sub(b);
        d.min(d.wrapping_add(self.0))
    }
}

#[inline]
fn row_offset(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Expands the crank product in the ring `R`, storing row `n` (entries
/// `m = 0..=n`) at `row_offset(n)` of a flat buffer.
fn expand_crank_product<R: Ring>(ring: &R, precision: usize) -> Vec<u64> {
    let mut buf = vec![0u64; row_offset(precision + 1)];
    buf[0] = 1;
    for k in 1..=precision {
        // Divide by 1 - (z + 1/z) q^k + q^{2k}:
        //   B[n] = A[n] + (z + 1/z) B[n-k] - B[n-2k], ascending n.
        for n in k..=precision {
            let (before, rest) = buf.split_at_mut(row_offset(n));
            let row = &mut rest[..n + 1];
            let src_len = n - k + 1;
            let src = &before[row_offset(n - k)..row_offset(n - k) + src_len];
            // (z + 1/z) on a symmetric row: new[m] = r[m-1] + r[m+1], r[-1] = r[1].
            let at = |m: usize| if m < src_len { src[m] } else { 0 };
            row[0] = ring.add(row[0], ring.add(at(1), at(1)));
            for m in 1..=src_len {
                let shifted = ring.add(src[m - 1], at(m + 1));
                row[m] = ring.add(row[m], shifted);
            }
            if n >= 2 * k {
                let len2 = n - 2 * k + 1;
                let src2 = &before[row_offset(n - 2 * k)..row_offset(n - 2 * k) + len2];
                for (dst, &s) in row.iter_mut().zip(src2) {
                    *dst = ring.sub(*dst, s);
                }
            }
        }
        // Multiply by 1 - q^k, descending n.
        for n in (k..=precision).rev() {
            let (before, rest) = buf.split_at_mut(row_offset(n));
            let len = n - k + 1;
            let src = &before[row_offset(n - k)..row_offset(n - k) + len];
            for (dst, &s) in rest[..len].iter_mut().zip(src) {
                *dst = ring.sub(*dst, s);
            }
        }
    }
    buf
}

/// Garner-style reconstruction from residues mod `2^64, p_1, p_2, ...` to
/// the symmetric range around zero.
struct CrtLift {
    primes: Vec<u64>,
    /// `prefix[i]` = product of the moduli before channel `i + 1`.
    prefix: Vec<BigUint>,
    /// Inverse of `prefix[i] mod p_i` modulo `p_i`.
    inverses: Vec<u64>,
    modulus: BigUint,
    half: BigUint,
}

impl CrtLift {
    fn new(channels: usize) -> Self {
        let primes: Vec<u64> = CRT_PRIMES[..channels - 1].to_vec();
        let mut prefix = Vec::with_capacity(primes.len());
        let mut inverses = Vec::with_capacity(primes.len());
        let mut modulus = BigUint::one() << 64u32;
        for &p in &primes {
            let m_mod_p = (&modulus % p).to_u64().unwrap();
            inverses.push(mod_inverse(m_mod_p, p));
            prefix.push(modulus.clone());
            modulus *= p;
        }
        let half = &modulus >> 1u32;
        CrtLift {
            primes,
            prefix,
            inverses,
            modulus,
            half,
        }
    }

    fn lift(&self, mut residues: impl Iterator<Item = u64>) -> BigInt {
        let r0 = residues.next().expect("at least one channel");
        if self.primes.is_empty() {
            return BigInt::from(r0 as i64);
        }
        let mut x = BigUint::from(r0);
        for (i, r) in residues.enumerate() {
            let p = self.primes[i];
            let x_mod_p = (&x % p).to_u64().unwrap();
            let diff = (r as u128 + p as u128 - x_mod_p as u128) % p as u128;
            let t = (diff * self.inverses[i] as u128 % p as u128) as u64;
            if t != 0 {
                x += &self.prefix[i] * t;
            }
        }
        if x > self.half {
            -BigInt::from_biguint(Sign::Plus, &self.modulus - x)
        } else {
            BigInt::from_biguint(Sign::Plus, x)
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    assert!(e.gcd.is_one(), "CRT moduli must be coprime");
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Exact `BigInt` expansion of the crank product, one factor at a time.
/// Cubic in `N` with big-integer work per step; used to cross-check the
/// residue kernel.
#[cfg(test)]
pub(crate) fn crank_series_exact(precision: usize) -> BivariateSeries {
    // Full rows indexed by m + n; rows padded to the maximal width.
    let width = 2 * precision + 1;
    let mid = precision as i64;
    let mut rows = vec![vec![BigInt::zero(); width]; precision + 1];
    rows[0][precision] = BigInt::one();
    let idx = |m: i64| (m + mid) as usize;
    for k in 1..=precision {
        // 1 / (1 - z q^k): B[n] += z B[n-k], ascending.
        for shift in [1i64, -1] {
            for n in k..=precision {
                let (lo, hi) = rows.split_at_mut(n);
                let src = &lo[n - k];
                for m in -(mid)..=mid {
                    let from = m - shift;
                    if from.abs() <= mid && !src[idx(from)].is_zero() {
                        hi[0][idx(m)] += &src[idx(from)];
                    }
                }
            }
        }
        for n in (k..=precision).rev() {
            let (lo, hi) = rows.split_at_mut(n);
            for (dst, s) in hi[0].iter_mut().zip(&lo[n - k]) {
                *dst -= s;
            }
        }
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(n, row)| row[precision - n..=precision + n].to_vec())
        .collect();
    BivariateSeries { rows }
}

impl BivariateSeries {
    /// True when every row is invariant under `m -> -m`.
    pub fn is_symmetric(&self) -> bool {
        self.rows.iter().all(|row| row.iter().eq(row.iter().rev()))
    }

    /// True when no row holds a negative coefficient from `from_n` on.
    pub fn is_nonnegative_from(&self, from_n: usize) -> bool {
        self.rows
            .iter()
            .skip(from_n)
            .all(|row| row.iter().all(|c| !c.is_negative()))
    }
}
