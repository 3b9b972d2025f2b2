//! Large-`N` constants of `R_N` on the infinite chain.
//!
//! `ln R_N = -¼ ln N + ln B - 1/(64N²) + O(N⁻⁴)` and the correlator amplitude
//! follows from `C₀/√π = B²/√2`. `ln B` is obtained by four independent
//! routes:
//!
//! * the polygamma rewriting of `ln R_N` (its `N`-independent first term),
//! * the integral `¼ ∫₀^∞ (dt/t)(e^{-4t} - sech²t)`,
//! * the Γ-function product, Richardson-extrapolated in `N`,
//! * the sine product itself, Richardson-extrapolated in `N`.
//!
//! The Glaisher constant is computed from an independently differentiated
//! `ζ'(-1)` and checked against `ln B = (ln 2)/12 + 3ζ'(-1)`.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::asymptotics::{asym_infinite, AsymptoticParams};
use crate::error::{domain, Result};
use crate::exact::{correlator_product, r_value};
use crate::greens::Lattice;
use crate::quadrature::integrate;
use crate::special::{ln_gamma, ln_gamma_ratio, polygamma, zeta};
use crate::sum::NeumaierSum;

/// Truncation threshold for the `p` series.
pub const P_SERIES_FLOOR: f64 = 1e-18;
const P_MAX: u32 = 33;

/// Splitting point between the Taylor-expanded and the quadrature part of
/// the integral.
const SERIES_EDGE: f64 = 1e-3;
const TAIL_CUTOFF: f64 = 40.0;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `Σ_{p≥1} (1/p) 4^{-p} ψ^{(order(p))}(z) / order(p)!`, truncated once a
/// term drops below the floor.
fn p_series(z: f64, order: impl Fn(u32) -> u32) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    let mut quarter_pow = 1.0;
    for p in 1..=P_MAX {
        quarter_pow *= 0.25;
        let m = order(p);
        let term = quarter_pow / f64::from(p) * polygamma(m, z)? / factorial(m);
        acc.add(term);
        if term.abs() < P_SERIES_FLOOR {
            break;
        }
    }
    Ok(acc.total())
}

/// The three pieces of the polygamma form of `ln R_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTerms {
    /// `Σ_p (1/p) 4^{-p} ψ^{(2p-2)}(1)/(2p-2)!`, independent of `N`.
    pub first: f64,
    /// `-N Σ_p (1/p) 4^{-p} ψ^{(2p-1)}(N)/(2p-1)!`
    pub second: f64,
    /// `-Σ_p (1/p) 4^{-p} ψ^{(2p-2)}(N)/(2p-2)!`
    pub third: f64,
}

impl SeriesTerms {
    pub fn total(&self) -> f64 {
        self.first + self.second + self.third
    }
}

/// The `N`-independent first term, evaluated once.
pub fn series_first_term() -> f64 {
    static FIRST: OnceLock<f64> = OnceLock::new();
    *FIRST.get_or_init(|| p_series(1.0, |p| 2 * p - 2).expect("ψ at z = 1 is in range"))
}

pub fn log_r_series_terms(n: usize) -> Result<SeriesTerms> {
    if n < 2 {
        return Err(domain(format!("log_r_series needs N >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(SeriesTerms {
        first: series_first_term(),
        second: -nf * p_series(nf, |p| 2 * p - 1)?,
        third: -p_series(nf, |p| 2 * p - 2)?,
    })
}

/// `ln R_N` on the infinite chain from the polygamma series.
pub fn log_r_series(n: usize) -> Result<f64> {
    Ok(log_r_series_terms(n)?.total())
}

/// `Σ_p (1/p) 4^{-p} ψ^{(2p-1)}(1)/(2p-1)!`, which equals `-ln(2/π)` and
/// cancels the `(2/π)^N` prefactor.
pub fn cancellation_sum() -> Result<f64> {
    p_series(1.0, |p| 2 * p - 1)
}

/// `ln B` from the polygamma series: the first term minus the `¼` left over
/// from the large-`N` expansion of the other two.
pub fn ln_b_series() -> f64 {
    series_first_term() - 0.25
}

/// Amplitude `C₀` of `C₀ (-1)^x / (L sin(πx/L))^{1/2}`.
pub fn c0() -> f64 {
    PI.sqrt() * (2.0 * ln_b_series()).exp() / 2f64.sqrt()
}

/// Two printed closed forms of the first term, next to the direct value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstTermForms {
    pub direct: f64,
    /// `-γ/4 + Σ_{p≥2} (1/p) 4^{-p} ψ^{(2p-2)}(1)/(2p-2)!`
    pub psi_form: f64,
    /// `-γ/2 + Σ_{p≥2} (1/p) 4^{-p} ζ(2p-1)`
    pub zeta_form: f64,
}

pub fn first_term_forms() -> Result<FirstTermForms> {
    let gamma = -polygamma(0, 1.0)?;
    let mut psi_rest = NeumaierSum::new();
    let mut zeta_rest = NeumaierSum::new();
    let mut quarter_pow = 0.25;
    for p in 2..=P_MAX {
        quarter_pow *= 0.25;
        let w = quarter_pow / f64::from(p);
        let m = 2 * p - 2;
        psi_rest.add(w * polygamma(m, 1.0)? / factorial(m));
        let z = crate::special::hurwitz_zeta(f64::from(2 * p - 1), 1.0)?;
        zeta_rest.add(w * z);
        if w < P_SERIES_FLOOR {
            break;
        }
    }
    Ok(FirstTermForms {
        direct: series_first_term(),
        psi_form: -0.25 * gamma + psi_rest.total(),
        zeta_form: -0.5 * gamma + zeta_rest.total(),
    })
}

/// `(e^{-4t} - sech² t) / t`, continuous at `t = 0` with value `-4`.
pub fn integrand(t: f64) -> f64 {
    if t == 0.0 {
        return -4.0;
    }
    let sech = 1.0 / t.cosh();
    ((-4.0 * t).exp() - sech * sech) / t
}

/// Antiderivative of the Taylor expansion of [`integrand`], through `t⁸`.
fn integrand_series_primitive(t: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        -4.0,
        9.0 / 2.0,
        -32.0 / 9.0,
        5.0 / 2.0,
        -128.0 / 75.0,
        91.0 / 90.0,
        -1024.0 / 2205.0,
        5.0 / 28.0,
    ];
    COEFFS.iter().rev().fold(0.0, |acc, c| acc * t + c) * t
}

/// `∫₀^∞ (dt/t)(e^{-4t} - sech² t)`.
pub fn lukyanov_integral() -> Result<f64> {
    let head = integrand_series_primitive(SERIES_EDGE);
    let mid = integrate(integrand, SERIES_EDGE, 1.0, 1e-15, 1e-15, 200)?;
    let tail = integrate(integrand, 1.0, TAIL_CUTOFF, 1e-15, 1e-15, 400)?;
    Ok(head + mid.value + tail.value)
}

/// `ln R_N` from `R_N = ∏_{k=1}^N Γ(k)² / (Γ(k+½) Γ(k-½))`.
///
/// Each factor is `ln[Γ(k)/Γ(k-½)] - ln[Γ(k+½)/Γ(k)]`, taken from the
/// log-gamma ratio kernel.
pub fn log_r_gamma_product(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("log_r_gamma_product needs N >= 1"));
    }
    let mut acc = NeumaierSum::new();
    for k in 1..=n {
        let k = k as f64;
        acc.add(ln_gamma_ratio(k - 0.5, 0.5)? - ln_gamma_ratio(k, 0.5)?);
    }
    Ok(acc.total())
}

/// `ln G(n + 1) = Σ_{k=1}^{n} ln Γ(k)`.
pub fn ln_barnes_integer(n: usize) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for k in 1..=n {
        acc.add(ln_gamma(k as f64)?);
    }
    Ok(acc.total())
}

/// `ln G(n + ½) - ln G(½) = Σ_{j=0}^{n-1} ln Γ(j + ½)`.
pub fn ln_barnes_half_relative(n: usize) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for j in 0..n {
        acc.add(ln_gamma(j as f64 + 0.5)?);
    }
    Ok(acc.total())
}

fn barnes_core(n: usize) -> Result<f64> {
    Ok(2.0 * ln_barnes_integer(n)?
        - ln_barnes_half_relative(n)?
        - ln_barnes_half_relative(n + 1)?)
}

/// Log of the constant prefactor of `G(N+1)² / (G(N+½) G(N+3/2))`, solved
/// from the `N = 1` identity against the Γ product.
///
/// With the half-integer values built upward from `G(½)`, the `G(½)`
/// dependence cancels and the prefactor comes out as `½ ln π`.
pub fn barnes_prefactor() -> Result<f64> {
    static PREFACTOR: OnceLock<f64> = OnceLock::new();
    if let Some(v) = PREFACTOR.get() {
        return Ok(*v);
    }
    let v = log_r_gamma_product(1)? - barnes_core(1)?;
    Ok(*PREFACTOR.get_or_init(|| v))
}

/// `ln R_N` through Barnes G values at integer and half-integer points.
///
/// The cumulative sums grow like `N² ln N`, so this route loses absolute
/// precision quadratically and is meant for `N` up to a few hundred.
pub fn log_r_barnes(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("log_r_barnes needs N >= 1"));
    }
    Ok(barnes_prefactor()? + barnes_core(n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Glaisher {
    pub a: f64,
    pub zeta_prime_minus1: f64,
}

/// `ζ'(-1)` by Richardson-extrapolated central differences of the
/// reflection-formula zeta.
pub fn zeta_prime_minus1() -> Result<f64> {
    const LEVELS: usize = 7;
    let mut h = 0.25;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(LEVELS);
    for i in 0..LEVELS {
        let d = (zeta(-1.0 + h)? - zeta(-1.0 - h)?) / (2.0 * h);
        let mut row = vec![d];
        let mut factor = 1.0;
        for j in 1..=i {
            factor *= 4.0;
            let prev = &table[i - 1];
            row.push(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0));
        }
        table.push(row);
        h *= 0.5;
    }
    Ok(table[LEVELS - 1][LEVELS - 1])
}

/// Glaisher's constant `A = exp(1/12 - ζ'(-1))`.
pub fn glaisher() -> Result<Glaisher> {
    let zp = zeta_prime_minus1()?;
    Ok(Glaisher {
        a: (1.0 / 12.0 - zp).exp(),
        zeta_prime_minus1: zp,
    })
}

/// `lim (f(N))` for `f(N) = c + a/N² + O(N⁻⁴)` from `f(N)` and `f(N/2)`.
fn richardson_pair(f: impl Fn(usize) -> Result<f64>, n: usize) -> Result<f64> {
    let full = f(n)?;
    let half = f(n / 2)?;
    let ratio = (n as f64 / (n / 2) as f64).powi(2);
    Ok((ratio * full - half) / (ratio - 1.0))
}

/// Polynomial extrapolation to `h = 0` of samples `(h_i, v_i)` (Neville).
pub fn extrapolate_to_zero(samples: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let h: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// `(ln R_N + ¼ ln N - ln B)·N²` at each `N` of the product route, and its
/// extrapolation in `1/N²`.
pub fn inverse_square_coefficient(ns: &[usize]) -> Result<(Vec<f64>, f64)> {
    let ln_b = ln_b_series();
    let raw = ns
        .iter()
        .map(|&n| {
            let nf = n as f64;
            Ok((r_value(n, Lattice::Infinite)?.ln() + 0.25 * nf.ln() - ln_b) * nf * nf)
        })
        .collect::<Result<Vec<f64>>>()?;
    let samples: Vec<(f64, f64)> = ns
        .iter()
        .zip(&raw)
        .map(|(&n, &v)| (1.0 / (n as f64).powi(2), v))
        .collect();
    Ok((raw, extrapolate_to_zero(&samples)))
}

/// Least-squares coefficient `c` of `G(x) - leading(x) ≈ c · x^{-5/2}` over
/// even `x ∈ [x_min, x_max]`, with `G` the exact infinite-chain correlator.
pub fn fit_subleading(x_min: usize, x_max: usize) -> Result<f64> {
    let params = AsymptoticParams::xx();
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    let start = x_min + x_min % 2;
    for x in (start..=x_max).step_by(2) {
        let exact = correlator_product(x, Lattice::Infinite)?;
        let (leading, _) = asym_infinite(x, &params)?;
        let basis = (x as f64).powf(-2.5);
        num.add((exact - leading) * basis);
        den.add(basis * basis);
    }
    Ok(num.total() / den.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "lnB_series")]
    pub ln_b_series: f64,
    #[serde(rename = "lnB_integral")]
    pub ln_b_integral: f64,
    #[serde(rename = "lnB_gammaProduct")]
    pub ln_b_gamma_product: f64,
    #[serde(rename = "lnB_fit")]
    pub ln_b_fit: f64,
    #[serde(rename = "glaisherA")]
    pub glaisher_a: f64,
    #[serde(rename = "zetaPrimeMinus1")]
    pub zeta_prime_minus1: f64,
    /// `2^{1/12} e^{1/4} A^{-3}`
    #[serde(rename = "bFromGlaisher")]
    pub b_from_glaisher: f64,
    pub c0: f64,
    /// `C₀ / 2√π`
    #[serde(rename = "amplitudeHalf")]
    pub amplitude_half: f64,
    #[serde(rename = "lukyanovIntegral")]
    pub lukyanov_integral: f64,
    #[serde(rename = "subCoeffFitted")]
    pub sub_coeff_fitted: f64,
    #[serde(rename = "pairwiseMaxDev")]
    pub pairwise_max_dev: f64,
}

pub const MIN_FIT_SIZE: usize = 1000;
pub const SUBLEADING_FIT_START: usize = 20;

pub fn amplitude_report(n_fit: usize, x_fit_max: usize) -> Result<ConstantsReport> {
    if n_fit < MIN_FIT_SIZE || x_fit_max < MIN_FIT_SIZE {
        return Err(domain(format!(
            "fit sizes must be at least {MIN_FIT_SIZE} (n_fit = {n_fit}, x_fit_max = {x_fit_max})"
        )));
    }
    let ln_b_series = ln_b_series();
    let lukyanov = lukyanov_integral()?;
    let ln_b_integral = 0.25 * lukyanov;
    let with_log = |v: f64, n: usize| v + 0.25 * (n as f64).ln();
    let ln_b_gamma_product =
        richardson_pair(|n| Ok(with_log(log_r_gamma_product(n)?, n)), n_fit)?;
    let ln_b_fit = richardson_pair(
        |n| Ok(with_log(r_value(n, Lattice::Infinite)?.ln(), n)),
        n_fit,
    )?;
    let g = glaisher()?;
    let c0 = PI.sqrt() * (2.0 * ln_b_series).exp() / 2f64.sqrt();
    let routes = [ln_b_series, ln_b_integral, ln_b_gamma_product, ln_b_fit];
    let pairwise_max_dev = routes
        .iter()
        .flat_map(|a| routes.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(ConstantsReport {
        ln_b_series,
        ln_b_integral,
        ln_b_gamma_product,
        ln_b_fit,
        glaisher_a: g.a,
        zeta_prime_minus1: g.zeta_prime_minus1,
        b_from_glaisher: (LN_2 / 12.0 + 0.25).exp() * g.a.powi(-3),
        c0,
        amplitude_half: c0 / (2.0 * PI.sqrt()),
        lukyanov_integral: lukyanov,
        sub_coeff_fitted: fit_subleading(SUBLEADING_FIT_START, x_fit_max)?,
        pairwise_max_dev,
    })
}
