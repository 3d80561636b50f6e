//! Combinatorial and polynomial ingredients of the hydrogenic basis.

use crate::error::{Error, Result};

/// Largest supported Laguerre degree.
pub const MAX_DEGREE: u32 = 20;
/// Largest supported Laguerre upper index.
pub const MAX_UPPER: u32 = 41;

/// Indices `(n, k)` of the associated Laguerre polynomial `L_n^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolynomialIndex {
    pub n: u32,
    pub k: u32,
}

impl PolynomialIndex {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n > MAX_DEGREE || k > MAX_UPPER {
            return Err(Error::LaguerreIndex { n, k });
        }
        Ok(Self { n, k })
    }
}

/// Exact binomial coefficient `C(n, k)` in integer arithmetic.
///
/// Overflows for results beyond `u64`; every call site stays well inside
/// the supported Laguerre range.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for j in 1..=k {
        // c * (n - k + j) is always divisible by j at this point
        c = c * (n - k + j) / j;
    }
    c
}

/// Associated Laguerre polynomial `L_n^k(x)`.
///
/// Uses the upward three-term recurrence in `n`, which stays accurate where
/// the explicit sum suffers cancellation (large `x`). Exact at `x = 0`.
pub fn laguerre(idx: PolynomialIndex, x: f64) -> f64 {
    if x == 0.0 {
        return binomial((idx.n + idx.k) as u64, idx.n as u64) as f64;
    }
    if idx.n == 0 {
        return 1.0;
    }
    let k = idx.k as f64;
    let mut prev = 1.0;
    let mut cur = 1.0 + k - x;
    for j in 1..idx.n {
        let j = j as f64;
        let next = ((2.0 * j + k + 1.0 - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^k(x)` from the explicit sum `Σ_m Γ(n+k+1)(-x)^m / [Γ(m+k+1)(n-m)! m!]`.
///
/// Each term is carried forward from the previous one with the rational factor
/// `-x (n-m) / ((m+k+1)(m+1))`, starting from the exact integer `C(n+k, n)`,
/// so no Γ value is ever formed. Loses relative accuracy to cancellation when
/// `x` is large compared with `n + k`.
pub fn laguerre_series(idx: PolynomialIndex, x: f64) -> f64 {
    let n = idx.n as u64;
    let k = idx.k as u64;
    let mut term = binomial(n + k, n) as f64;
    if x == 0.0 {
        return term;
    }
    let mut sum = term;
    for m in 0..n {
        let ratio = -x * (n - m) as f64 / (((m + k + 1) * (m + 1)) as f64);
        term *= ratio;
        sum += term;
    }
    sum
}

/// `L_n^k(x)` with index validation folded in.
pub fn laguerre_checked(n: u32, k: u32, x: f64) -> Result<f64> {
    Ok(laguerre(PolynomialIndex::new(n, k)?, x))
}

/// First derivative `d/dx L_n^k(x) = -L_{n-1}^{k+1}(x)`.
pub fn laguerre_derivative(idx: PolynomialIndex, x: f64) -> f64 {
    if idx.n == 0 {
        return 0.0;
    }
    -laguerre(
        PolynomialIndex {
            n: idx.n - 1,
            k: idx.k + 1,
        },
        x,
    )
}

/// Second derivative `L_{n-2}^{k+2}(x)`.
pub fn laguerre_second_derivative(idx: PolynomialIndex, x: f64) -> f64 {
    if idx.n < 2 {
        return 0.0;
    }
    laguerre(
        PolynomialIndex {
            n: idx.n - 2,
            k: idx.k + 2,
        },
        x,
    )
}

const STIRLING_CUTOFF: u64 = 256;

/// `ln(n!)`.
pub fn log_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= STIRLING_CUTOFF {
        return (2..=n).map(|j| (j as f64).ln()).sum();
    }
    // Stirling series for ln Γ(n+1); the truncation error is below 1e-16 here.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}
