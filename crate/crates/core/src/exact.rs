//! Exact correlator by the Wick determinant and by the Cauchy sine product.
//!
//! With `A_i = a⁺_i + a_i` and `B_i = a⁺_i - a_i` the Jordan-Wigner string
//! turns `G(x)` into a Pfaffian that collapses to an `x × x` Toeplitz
//! determinant of the contractions `<B_i A_j>`. Because `G₀` vanishes at even
//! distances the determinant factorizes into `R_N`, an `N × N` Cauchy
//! determinant with a closed product form:
//!
//! ```text
//! G(2N)   =  ½ R_N²
//! G(2N+1) = -½ R_N R_{N+1},   R_0 = 1
//! R_N     = (2/π)^N ∏_{k=1}^{N-1} [sin²(2πk/L) / (sin(π(2k+1)/L) sin(π(2k-1)/L))]^{N-k}
//! ```

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::greens::{contraction, sin_pi_ratio, Lattice};
use crate::sum::NeumaierSum;

/// Largest matrix dimension the dense determinant routes accept.
pub const DET_GUARD: usize = 4096;

/// `ln(2/π)` split into a leading double and its residual.
const LN_2_OVER_PI: (f64, f64) = (-0.4515827052894549, 1.2924516975755169e-17);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Det,
    Product,
    Ed,
    AsymLeading,
    AsymSub,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Det => "det",
            Route::Product => "product",
            Route::Ed => "ed",
            Route::AsymLeading => "asym",
            Route::AsymSub => "asym2",
        }
    }

    pub fn from_name(name: &str) -> Option<Route> {
        Some(match name.trim() {
            "det" => Route::Det,
            "product" => Route::Product,
            "ed" => Route::Ed,
            "asym" => Route::AsymLeading,
            "asym2" => Route::AsymSub,
            _ => return None,
        })
    }

    /// Routes that are exact (as opposed to asymptotic predictions).
    pub fn is_exact(self) -> bool {
        matches!(self, Route::Det | Route::Product | Route::Ed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorSample {
    pub x: usize,
    pub value: f64,
    pub route: Route,
}

/// A real number carried as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProduct {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogProduct {
    pub const ONE: LogProduct = LogProduct { log_abs: 0.0, sign: 1 };

    pub fn positive(log_abs: f64) -> Self {
        LogProduct { log_abs, sign: 1 }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn ln(self) -> f64 {
        debug_assert!(self.sign > 0);
        self.log_abs
    }
}

impl std::ops::Mul for LogProduct {
    type Output = LogProduct;

    fn mul(self, rhs: LogProduct) -> LogProduct {
        LogProduct {
            log_abs: self.log_abs + rhs.log_abs,
            sign: self.sign * rhs.sign,
        }
    }
}

fn check_dense_size(n: usize, what: &str) -> Result<()> {
    if n > DET_GUARD {
        return Err(Error::Size(format!(
            "{what}: dimension {n} exceeds the dense guard {DET_GUARD}"
        )));
    }
    Ok(())
}

/// Dense determinant by LU factorization with partial pivoting.
fn dense_det(n: usize, entry: impl Fn(usize, usize) -> f64) -> f64 {
    DMatrix::from_fn(n, n, |i, j| entry(i + 1, j + 1)).lu().determinant()
}

/// `G(x)` from the `x × x` Wick determinant of contractions.
///
/// The Toeplitz matrix has entries `<B_i A_{j+1}> = 2G₀(i-j-1)` (zero on the
/// `i = j + 1` diagonal); the Pfaffian ordering contributes `(-1)^x / 2`.
pub fn correlator_det(x: usize, lattice: Lattice) -> Result<f64> {
    lattice.check_distance(x)?;
    check_dense_size(x, "correlator_det")?;
    let det = dense_det(x, |i, j| contraction(i as i64 - j as i64 - 1, lattice));
    let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * 0.5 * det)
}

/// `R_N` as the dense determinant of `2(-1)^{i-j} G₀(2i-2j-1)`.
///
/// Independent of the closed-form product; used as its oracle.
pub fn r_det(n: usize, lattice: Lattice) -> Result<f64> {
    if n == 0 {
        return Err(domain("R_N needs N >= 1"));
    }
    check_dense_size(n, "r_det")?;
    if let Some(len) = lattice.len() {
        // Every G₀ argument must lie in (-L, L).
        if 2 * n > len {
            return Err(domain(format!("r_det: N = {n} needs 2N <= L = {len}")));
        }
    }
    Ok(dense_det(n, |i, j| {
        let d = i as i64 - j as i64;
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        sign * contraction(2 * d - 1, lattice)
    }))
}

/// `ln[sin²a / (sin(a+h) sin(a-h))]` with `a = 2πk/L`, `h = π/L`, written as
/// `-ln(1 - (sin h / sin a)²)` so no cancellation occurs at large `L`.
#[inline]
fn sine_factor_log(k: usize, len: Option<usize>) -> f64 {
    let ratio = match len {
        Some(l) => {
            let l = l as i64;
            sin_pi_ratio(1, l) / sin_pi_ratio(2 * k as i64, l)
        }
        None => 0.5 / k as f64,
    };
    -(-ratio * ratio).ln_1p()
}

/// `ln R_N` with no admissibility checks; `len = None` is the infinite chain.
pub(crate) fn log_r_sine(n: usize, len: Option<usize>) -> f64 {
    let nf = n as f64;
    let mut acc = NeumaierSum::new();
    for k in (1..n).rev() {
        acc.add((n - k) as f64 * sine_factor_log(k, len));
    }
    match len {
        None => {
            // n · ln(2/π) with the rounding error of the product recovered by fma.
            let head = nf * LN_2_OVER_PI.0;
            acc.add(head);
            acc.add(nf.mul_add(LN_2_OVER_PI.0, -head));
            acc.add(nf * LN_2_OVER_PI.1);
        }
        Some(len) => {
            // On the ring the prefactor is 2G₀(1) = 2/(L sin(π/L)) per factor.
            let lf = len as f64;
            acc.add(nf * LN_2);
            acc.add(-nf * (lf * sin_pi_ratio(1, len as i64)).ln());
        }
    }
    acc.total()
}

/// `R_N` from the closed-form sine product, accumulated in log space.
///
/// On a ring the range guard is `2N <= L - 1`.
pub fn r_value(n: usize, lattice: Lattice) -> Result<LogProduct> {
    if n == 0 {
        return Err(domain("R_N needs N >= 1"));
    }
    if let Some(len) = lattice.len() {
        if 2 * n > len - 1 {
            return Err(domain(format!(
                "r_value: N = {n} outside the product range 2N <= L - 1 for L = {len}"
            )));
        }
    }
    Ok(LogProduct::positive(log_r_sine(n, lattice.len())))
}

fn r_or_one(n: usize, lattice: Lattice) -> Result<LogProduct> {
    if n == 0 {
        Ok(LogProduct::ONE)
    } else {
        r_value(n, lattice)
    }
}

/// `G(x)` from the sine product only; errors where the product range guard
/// does not cover `x`.
pub fn correlator_product(x: usize, lattice: Lattice) -> Result<f64> {
    lattice.check_distance(x)?;
    let half = LogProduct { log_abs: -LN_2, sign: 1 };
    let n = x / 2;
    let p = if x % 2 == 0 {
        let r = r_value(n, lattice)?;
        r * r * half
    } else {
        let neg = LogProduct { log_abs: 0.0, sign: -1 };
        r_or_one(n, lattice)? * r_value(n + 1, lattice)? * half * neg
    };
    Ok(p.value())
}

/// `G(x)` assembled from `R_N`, falling back to the determinant where the
/// product range guard fails (only `x = L - 1` on a ring).
pub fn correlator(x: usize, lattice: Lattice) -> Result<CorrelatorSample> {
    lattice.check_distance(x)?;
    match correlator_product(x, lattice) {
        Ok(value) => Ok(CorrelatorSample { x, value, route: Route::Product }),
        Err(Error::Domain(_)) => Ok(CorrelatorSample {
            x,
            value: correlator_det(x, lattice)?,
            route: Route::Det,
        }),
        Err(e) => Err(e),
    }
}
