//! Special functions backing the closed forms: Laguerre polynomials L_m(x),
//! associated Laguerre L_n^(k)(x), raw moments of the Poisson distribution,
//! and exact-in-f64 factorials.
//!
//! All polynomial evaluation goes through the standard three-term recurrences,
//! which are stable on the ranges used here (orders ≤ ~20, |x| ≤ a few tens).
//! The closed-form normalization of an m-photon-added coherent state is
//! `m!·L_m(−|α|²)`, which is why negative arguments (where every recurrence
//! term is positive) are the common case in this crate.

use crate::{Error, Result};

/// Largest photon-addition order the closed forms are exercised at.
pub const MAX_ADDITIONS: u32 = 16;

/// Highest Poisson raw moment with a hardcoded Touchard polynomial.
pub const MAX_POISSON_MOMENT: u32 = 6;

/// Photon-addition order `m`, capped at [`MAX_ADDITIONS`] on construction.
///
/// The cap is practical, not physical: it keeps every Laguerre order used by
/// the moment formulas (`m + 2` at most) in a regime the recurrence has been
/// validated on, and keeps `b†^m` ladder applications well inside the default
/// Fock cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct PolynomialOrder(u32);

impl PolynomialOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m > MAX_ADDITIONS {
            return Err(Error::domain(format!(
                "photon-addition order m = {m} exceeds the supported maximum {MAX_ADDITIONS}"
            )));
        }
        Ok(PolynomialOrder(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for PolynomialOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Laguerre polynomial L_m(x) by the three-term recurrence
/// `(k+1)·L_{k+1}(x) = (2k+1−x)·L_k(x) − k·L_{k−1}(x)`, seeds L_0 = 1,
/// L_1 = 1 − x.
pub fn laguerre(m: PolynomialOrder, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("laguerre: non-finite argument {x}")));
    }
    Ok(laguerre_raw(m.get(), x))
}

/// Unchecked Laguerre recurrence; internal callers need orders up to
/// `MAX_ADDITIONS + 2` for the second-moment formulas.
pub(crate) fn laguerre_raw(order: u32, x: f64) -> f64 {
    laguerre_assoc(order, 0, x)
}

/// Associated Laguerre polynomial L_n^(k)(x) via
/// `(n+1)·L_{n+1}^k = (2n+1+k−x)·L_n^k − (n+k)·L_{n−1}^k`.
pub fn laguerre_assoc(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    let mut prev = 1.0; // L_0^k
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x; // L_1^k
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// One column of the associated-Laguerre table: `L_0^k(x) .. L_{n_max}^k(x)`.
///
/// The displacement-operator matrix elements consume whole columns, so this
/// avoids re-running the recurrence per entry.
pub(crate) fn laguerre_assoc_column(k: u32, x: f64, n_max: usize) -> Vec<f64> {
    let kf = f64::from(k);
    let mut col = Vec::with_capacity(n_max + 1);
    col.push(1.0);
    if n_max == 0 {
        return col;
    }
    col.push(1.0 + kf - x);
    for j in 1..n_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * col[j] - (jf + kf) * col[j - 1]) / (jf + 1.0);
        col.push(next);
    }
    col
}

/// Raw moment ⟨n^j⟩ of a Poisson distribution with mean `x`, via the Touchard
/// polynomials (coefficients are Stirling numbers of the second kind).
///
/// Only j ≤ 6 is provided: assembling a photon-added variance needs moments of
/// `(n+m)`-shifted products no deeper than third order for m ≤ 4, so six
/// leaves margin for the cross-check tests.
pub fn poisson_moment(j: u32, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!(
            "poisson_moment: mean must be finite and ≥ 0, got {x}"
        )));
    }
    // Stirling-set numbers S(j, i), i = 1..=j.
    let coeffs: &[f64] = match j {
        0 => return Ok(1.0),
        1 => &[1.0],
        2 => &[1.0, 1.0],
        3 => &[1.0, 3.0, 1.0],
        4 => &[1.0, 7.0, 6.0, 1.0],
        5 => &[1.0, 15.0, 25.0, 10.0, 1.0],
        6 => &[1.0, 31.0, 90.0, 65.0, 15.0, 1.0],
        _ => {
            return Err(Error::domain(format!(
                "poisson_moment: order {j} exceeds the supported maximum {MAX_POISSON_MOMENT}"
            )))
        }
    };
    // Horner in x: sum_i S(j,i) x^i.
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    Ok(acc * x)
}

/// n! as f64; exact for n ≤ 22, correctly-rounded products beyond. Callers cap
/// `n` well below 170 (the f64 overflow point) via the Fock-cutoff limits.
pub fn factorial(n: u32) -> f64 {
    assert!(n <= 170, "factorial({n}) overflows f64");
    let mut acc = 1.0;
    for k in 2..=n {
        acc *= f64::from(k);
    }
    acc
}

/// Binomial coefficient C(n, k) as f64.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}
