//! Laguerre and two-variable Hermite polynomials.
//!
//! Laguerre polynomials are evaluated by the three-term recurrence. The
//! two-variable Hermite polynomials use their finite explicit sum
//!
//! ```text
//! H_{m,n}(x, y) = sum_{l=0}^{min(m,n)} (-1)^l m! n! x^{m-l} y^{n-l} / (l! (m-l)! (n-l)!)
//! ```
//!
//! with factorials read from a cached table.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest argument held in the factorial table.
pub const MAX_FACTORIAL: usize = 64;

/// Largest order accepted by [`hermite2`].
pub const MAX_HERMITE_ORDER: usize = 32;

fn factorial_table() -> &'static [f64; MAX_FACTORIAL + 1] {
    static TABLE: OnceLock<[f64; MAX_FACTORIAL + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_FACTORIAL + 1];
        for k in 1..=MAX_FACTORIAL {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

/// `n!` as a float, for `n <= MAX_FACTORIAL`.
pub fn factorial(n: usize) -> Result<f64> {
    factorial_table()
        .get(n)
        .copied()
        .ok_or(Error::OrderTooLarge {
            order: n,
            max: MAX_FACTORIAL,
        })
}

/// Laguerre polynomial `L_n(x)`.
///
/// Uses `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}` starting from `L_0 = 1`,
/// `L_1 = 1 - x`.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Two-variable Hermite polynomial `H_{m,n}(x, y)`.
pub fn hermite2(m: usize, n: usize, x: Complex64, y: Complex64) -> Result<Complex64> {
    let order = m.max(n);
    if order > MAX_HERMITE_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_HERMITE_ORDER,
        });
    }
    let f = factorial_table();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=m.min(n) {
        let coeff = f[m] * f[n] / (f[l] * f[m - l] * f[n - l]);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        sum += x.powu((m - l) as u32) * y.powu((n - l) as u32) * (sign * coeff);
    }
    Ok(sum)
}

/// `(-1)^n / n! * H_{n,n}(x, y)`, which equals `L_n(x y)`.
pub fn laguerre_from_hermite(n: usize, x: Complex64, y: Complex64) -> Result<Complex64> {
    let h = hermite2(n, n, x, y)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(h * (sign / factorial(n)?))
}
