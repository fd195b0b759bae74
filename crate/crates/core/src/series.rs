//! Exact Bernoulli numbers, the Schwinger perturbation coefficients and truncated
//! evaluation of (possibly divergent) power series.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::error::{BorelError, Result};

/// Relative width inside which two term magnitudes count as tied.
const TIE_RTOL: f64 = 1e-12;

/// Hard cap on the number of terms scanned by [`optimal_truncation`].
const SCAN_CAP: usize = 10_000;

fn even_bernoulli_table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Binomial coefficients `C(n, 0..=n)` as big integers.
fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigInt::from(n + 1 - k) / BigInt::from(k);
        row.push(c.clone());
    }
    row
}

/// Exact `B_{2m}` from the recurrence `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
///
/// Only even indices are stored; `B_1 = -1/2` enters explicitly and the remaining odd
/// Bernoulli numbers vanish. Results are memoised behind a mutex, so repeated calls are
/// cheap and the function is safe to call from several threads.
pub fn bernoulli_even(m: usize) -> BigRational {
    let mut table = even_bernoulli_table().lock().expect("bernoulli table poisoned");
    while table.len() <= m {
        let idx = 2 * table.len();
        let row = binomial_row(idx + 1);
        let b1 = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let mut acc = BigRational::from_integer(row[0].clone()) * &table[0]
            + BigRational::from_integer(row[1].clone()) * b1;
        for j in 1..table.len() {
            acc += BigRational::from_integer(row[2 * j].clone()) * &table[j];
        }
        let next = -acc / BigRational::from_integer(BigInt::from(idx + 1));
        table.push(next);
    }
    table[m].clone()
}

/// Partial zeta-sum approximation `2 (-1)^{m+1} (2m)! / (2pi)^{2m} * sum_{j<=terms} j^{-2m}`.
///
/// The sum runs from the smallest term upwards. Its truncation error is
/// `~ terms^{1-2m} / (2m-1)` relative to `zeta(2m)`.
pub fn bernoulli_zeta(m: usize, terms: usize) -> Result<f64> {
    if m == 0 || terms == 0 {
        return Err(BorelError::Domain(format!(
            "bernoulli_zeta needs m >= 1 and terms >= 1 (got m = {m}, terms = {terms})"
        )));
    }
    let zeta: f64 = (1..=terms).rev().map(|j| (j as f64).powi(-(2 * m as i32))).sum();
    Ok(zeta_prefactor(m) * zeta)
}

/// [`bernoulli_zeta`] plus the midpoint-integral tail `int_{N+1/2}^inf x^{-2m} dx`.
///
/// The tail estimate is independent of the Bernoulli recurrence; it leaves a residual of
/// order `m N^{-2m-1} / 12`, which makes the zeta route usable as a 1e-12 cross-check
/// even for `m = 1`.
pub fn bernoulli_zeta_tail_corrected(m: usize, terms: usize) -> Result<f64> {
    if m == 0 || terms == 0 {
        return Err(BorelError::Domain(format!(
            "bernoulli_zeta_tail_corrected needs m >= 1 and terms >= 1 (got m = {m}, terms = {terms})"
        )));
    }
    let s = 2 * m as i32;
    let partial: f64 = (1..=terms).rev().map(|j| (j as f64).powi(-s)).sum();
    let tail = (terms as f64 + 0.5).powi(1 - s) / f64::from(s - 1);
    Ok(zeta_prefactor(m) * (partial + tail))
}

fn zeta_prefactor(m: usize) -> f64 {
    let sign = if m % 2 == 1 { 2.0 } else { -2.0 };
    // (2m)!/(2pi)^{2m} as a running product keeps intermediate values in range.
    (1..=2 * m).fold(sign, |acc, j| acc * j as f64 / (2.0 * PI))
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Rational part of `a_n`: `a_n = q_n * pi^{n-2}` with
/// `q_n = -(-1)^n 16^n B_{2n} (2n-3)! / (8 (2n)!)`.
pub fn coeff_a_rational(n: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(BorelError::Domain(format!("a_n is defined for n >= 2 (got n = {n})")));
    }
    let sign = if n % 2 == 0 { -1 } else { 1 };
    let num = BigInt::from(sign) * BigInt::from(16).pow(n as u32) * factorial_big(2 * n - 3);
    let den = BigInt::from(8) * factorial_big(2 * n);
    Ok(BigRational::new(num, den) * bernoulli_even(n))
}

fn coeff_a_cache() -> &'static Mutex<Vec<f64>> {
    static CACHE: OnceLock<Mutex<Vec<f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Perturbation coefficient `a_n = -(-1)^n / (8 pi^2) (16 pi)^n B_{2n} (2n-3)! / (2n)!`.
///
/// Positive for every `n >= 2`; grows like `(2n)!`, so the `f64` value overflows past
/// `n ~ 90`.
pub fn coeff_a(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(BorelError::Domain(format!("a_n is defined for n >= 2 (got n = {n})")));
    }
    {
        let cache = coeff_a_cache().lock().expect("coefficient cache poisoned");
        if let Some(v) = cache.get(n - 2) {
            return Ok(*v);
        }
    }
    let mut fresh = Vec::new();
    let start = coeff_a_cache().lock().expect("coefficient cache poisoned").len() + 2;
    for k in start..=n {
        let q = coeff_a_rational(k)?.to_f64().unwrap_or(f64::INFINITY);
        fresh.push(q * PI.powi(k as i32 - 2));
    }
    let mut cache = coeff_a_cache().lock().expect("coefficient cache poisoned");
    // Another thread may have filled the same slots; values are identical either way.
    if cache.len() + 2 == start {
        cache.extend(fresh);
    }
    Ok(cache[n - 2])
}

/// Exact coefficient of `x^{2n}` in `x cot x`: `(-1)^n 2^{2n} B_{2n} / (2n)!`.
pub fn xcotx_coeff_exact(n: usize) -> BigRational {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let num = BigInt::from(sign) * BigInt::from(4).pow(n as u32);
    BigRational::new(num, factorial_big(2 * n)) * bernoulli_even(n)
}

/// Coefficient of `x^{2n}` in `x cot x` as a float.
pub fn xcotx_coeff(n: usize) -> f64 {
    xcotx_coeff_exact(n).to_f64().unwrap_or(0.0)
}

/// Coefficient stream of a formal power series `sum_{n >= n0} c_n x^{step n + offset}`.
///
/// `coeff` must be pure; the Schwinger and Euler constructors are backed by memoised or
/// closed-form coefficients.
#[derive(Clone)]
pub struct FormalSeries<T> {
    coeff: Arc<dyn Fn(usize) -> T + Send + Sync>,
    pub n0: usize,
    pub variable_power_step: u32,
    pub power_offset: i32,
    pub label: String,
}

impl<T> fmt::Debug for FormalSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalSeries")
            .field("label", &self.label)
            .field("n0", &self.n0)
            .field("variable_power_step", &self.variable_power_step)
            .field("power_offset", &self.power_offset)
            .finish()
    }
}

impl<T: Float> FormalSeries<T> {
    pub fn new<F>(label: impl Into<String>, n0: usize, step: u32, offset: i32, coeff: F) -> Self
    where
        F: Fn(usize) -> T + Send + Sync + 'static,
    {
        Self {
            coeff: Arc::new(coeff),
            n0,
            variable_power_step: step,
            power_offset: offset,
            label: label.into(),
        }
    }

    /// `sum n! z^n`, whose Borel transform is `1/(1-t)`.
    pub fn euler() -> Self {
        Self::new("euler", 0, 1, 0, |n| {
            (1..=n).fold(T::one(), |acc, k| acc * T::from(k).unwrap())
        })
    }

    /// `sum_{n>=2} a_n alpha^n` with the coefficients of [`coeff_a`].
    pub fn schwinger() -> Self {
        Self::new("schwinger", 2, 1, 0, |n| {
            T::from(coeff_a(n).expect("n >= 2 by construction")).unwrap()
        })
    }

    pub fn coeff(&self, n: usize) -> T {
        (self.coeff)(n)
    }

    pub fn power(&self, n: usize) -> i32 {
        self.variable_power_step as i32 * n as i32 + self.power_offset
    }

    pub fn term(&self, n: usize, x: T) -> T {
        let c = self.coeff(n);
        if c.is_zero() {
            return T::zero();
        }
        c * x.powi(self.power(n))
    }

    /// Sum of all terms with index strictly below `cutoff`.
    pub fn partial_below(&self, x: T, cutoff: usize) -> T {
        (self.n0..cutoff).fold(T::zero(), |acc, n| acc + self.term(n, x))
    }
}

/// Sum of the first `n_terms` terms of `s` at `x`.
pub fn eval_truncated<T: Float>(s: &FormalSeries<T>, x: T, n_terms: usize) -> T {
    (s.n0..s.n0 + n_terms).fold(T::zero(), |acc, n| acc + s.term(n, x))
}

/// Superasymptotic truncation point.
///
/// Scans `|c_n x^{power(n)}|` from `n0`, stops at the first strict increase that follows a
/// decrease, and returns one past the index of the smallest term (ties go to the smaller
/// index). The partial sum over indices `< N*` therefore ends with the smallest term.
/// If the terms grow from the very first index, `n0` is returned.
pub fn optimal_truncation<T: Float>(s: &FormalSeries<T>, x: T) -> Result<usize> {
    if x.is_zero() {
        return Err(BorelError::Domain("optimal truncation needs x != 0".into()));
    }
    let tie = T::from(TIE_RTOL).unwrap();
    let mut prev = s.term(s.n0, x).abs();
    let mut best = (s.n0, prev);
    let mut decreased = false;
    for n in s.n0 + 1..s.n0 + SCAN_CAP {
        let cur = s.term(n, x).abs();
        if !cur.is_finite() {
            break;
        }
        let scale = cur.max(prev);
        if cur > prev + tie * scale {
            if !decreased {
                return Ok(s.n0);
            }
            break;
        }
        if cur < prev - tie * scale {
            decreased = true;
        }
        if cur < best.1 - tie * best.1.max(cur) {
            best = (n, cur);
        }
        prev = cur;
    }
    Ok(best.0 + 1)
}

/// Converts an exact rational to any float type.
pub fn rational_to_float<T: Float>(q: &BigRational) -> T {
    if q.is_zero() {
        return T::zero();
    }
    T::from(q.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan)
}
