//! Special-function kernel: Bernoulli numbers, polygamma, Hurwitz and
//! Riemann zeta, log-gamma.
//!
//! Everything here follows one pattern: step upward with the functional
//! recurrence until the argument is large, then sum the Bernoulli
//! (Euler-Maclaurin / Stirling) asymptotic series there.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::sum::NeumaierSum;

/// Number of even Bernoulli numbers kept (`B_0, B_2, ..., B_{2(K-1)}`).
const BERNOULLI_COUNT: usize = 61;
/// Highest polygamma order accepted.
pub const MAX_POLYGAMMA_ORDER: u32 = 64;
/// Base switchover point from recurrence to asymptotic series.
pub const Z_CUT: f64 = 16.0;

struct BernoulliTable {
    /// `B_{2k}`
    b2k: Vec<f64>,
    /// `B_{2k} / (2k)!`
    b2k_over_fact: Vec<f64>,
}

fn bernoulli_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0, exact rationals.
        let top = 2 * (BERNOULLI_COUNT - 1);
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::one());
        for m in 1..=top {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let mut fact = BigInt::one();
        let mut b2k = Vec::with_capacity(BERNOULLI_COUNT);
        let mut b2k_over_fact = Vec::with_capacity(BERNOULLI_COUNT);
        for (n, bn) in b.iter().enumerate() {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            if n % 2 == 0 {
                b2k.push(bn.to_f64().expect("finite"));
                let scaled = bn / BigRational::from_integer(fact.clone());
                b2k_over_fact.push(scaled.to_f64().expect("finite"));
            }
        }
        BernoulliTable { b2k, b2k_over_fact }
    })
}

/// Even-index Bernoulli number `B_{2k}`, `k < 61`.
pub fn bernoulli_2k(k: usize) -> f64 {
    bernoulli_table().b2k[k]
}

/// Euler-Maclaurin tail of the Hurwitz zeta function at `w`:
/// `w^{1-s}/(s-1) + w^{-s}/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} w^{-s-2k+1}`,
/// returned as the bracket multiplying `w^{-s}`.
fn hurwitz_tail_scaled(s: f64, w: f64) -> f64 {
    let table = bernoulli_table();
    let mut acc = NeumaierSum::new();
    acc.add(w / (s - 1.0));
    acc.add(0.5);
    // rising = (s)_{2k-1} w^{1-2k}
    let mut rising = s / w;
    let mut prev = f64::INFINITY;
    for k in 1..BERNOULLI_COUNT {
        let term = table.b2k_over_fact[k] * rising;
        if term.abs() > prev {
            break;
        }
        acc.add(term);
        if term.abs() <= 1e-18 * acc.total().abs() {
            break;
        }
        prev = term.abs();
        let j = 2.0 * k as f64;
        rising *= (s + j - 1.0) * (s + j) / (w * w);
    }
    acc.total()
}

fn hurwitz_with_cut(s: f64, z: f64, cut: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    let mut w = z;
    while w < cut {
        acc.add(w.powf(-s));
        w += 1.0;
    }
    acc.add(w.powf(-s) * hurwitz_tail_scaled(s, w));
    acc.total()
}

fn cut_for(s: f64) -> f64 {
    Z_CUT + s.max(0.0)
}

/// Hurwitz zeta `ζ(s, z) = Σ_{k≥0} (z+k)^{-s}` for `s > 1`, `z > 0`.
pub fn hurwitz_zeta(s: f64, z: f64) -> Result<f64> {
    if !(s > 1.0) || !(z > 0.0) {
        return Err(domain(format!("hurwitz_zeta needs s > 1 and z > 0 (got s={s}, z={z})")));
    }
    Ok(hurwitz_with_cut(s, z, cut_for(s)))
}

/// Riemann zeta at odd integers `3 <= s <= 81`.
pub fn zeta_odd(s: u32) -> Result<f64> {
    if s % 2 == 0 || !(3..=81).contains(&s) {
        return Err(domain(format!("zeta_odd needs an odd integer in [3, 81], got {s}")));
    }
    hurwitz_zeta(s as f64, 1.0)
}

/// Riemann zeta on the real line, `s != 1`.
///
/// Negative arguments go through the reflection formula
/// `ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)`.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 || s.is_nan() {
        return Err(domain("zeta has a pole at s = 1"));
    }
    if s > 1.0 {
        return Ok(hurwitz_with_cut(s, 1.0, cut_for(s)));
    }
    if s >= 0.0 {
        // Euler-Maclaurin stays valid below s = 1.
        return Ok(hurwitz_with_cut(s, 1.0, Z_CUT + 8.0));
    }
    let one_minus = 1.0 - s;
    let gamma = ln_gamma(one_minus)?.exp();
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma * zeta(one_minus)?)
}

/// Polygamma `ψ^{(m)}(z)` for `z > 0`, `m <= 64`.
///
/// The recurrence `ψ^{(m)}(z) = ψ^{(m)}(z+1) - (-1)^m m!/z^{m+1}` lifts `z`
/// to `16 + m`, where the differentiated Bernoulli series of `ψ` converges
/// to full precision.
pub fn polygamma(m: u32, z: f64) -> Result<f64> {
    polygamma_with_cut(m, z, Z_CUT + m as f64)
}

/// [`polygamma`] with an explicit recurrence cut, for self-consistency checks.
pub fn polygamma_with_cut(m: u32, z: f64, cut: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("polygamma needs z > 0, got {z}")));
    }
    if m > MAX_POLYGAMMA_ORDER {
        return Err(domain(format!(
            "polygamma order {m} above {MAX_POLYGAMMA_ORDER}"
        )));
    }
    if m == 0 {
        return Ok(digamma_with_cut(z, cut));
    }
    let s = (m + 1) as f64;
    let fact: f64 = (1..=m).map(f64::from).product();
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * fact * hurwitz_with_cut(s, z, cut))
}

fn digamma_with_cut(z: f64, cut: f64) -> f64 {
    let table = bernoulli_table();
    let mut acc = NeumaierSum::new();
    let mut w = z;
    while w < cut {
        acc.add(-1.0 / w);
        w += 1.0;
    }
    acc.add(w.ln());
    acc.add(-0.5 / w);
    let inv2 = 1.0 / (w * w);
    let mut pow = inv2;
    let mut prev = f64::INFINITY;
    for k in 1..BERNOULLI_COUNT {
        let term = table.b2k[k] / (2.0 * k as f64) * pow;
        if term.abs() > prev || term.abs() < 1e-20 {
            break;
        }
        acc.add(-term);
        prev = term.abs();
        pow *= inv2;
    }
    acc.total()
}

/// Stirling correction `φ(w) = lnΓ(w) - (w-½)ln w + w - ½ln 2π`.
fn stirling_correction(w: f64) -> f64 {
    let table = bernoulli_table();
    let inv2 = 1.0 / (w * w);
    let mut pow = 1.0 / w;
    let mut acc = 0.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..BERNOULLI_COUNT {
        let kk = 2.0 * k as f64;
        let term = table.b2k[k] / (kk * (kk - 1.0)) * pow;
        if term.abs() > prev || term.abs() < 1e-20 * acc.abs().max(1e-300) {
            break;
        }
        acc += term;
        prev = term.abs();
        pow *= inv2;
    }
    acc
}

/// `ln Γ(z)` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("ln_gamma needs z > 0, got {z}")));
    }
    let mut acc = NeumaierSum::new();
    let mut w = z;
    while w < Z_CUT {
        acc.add(-w.ln());
        w += 1.0;
    }
    acc.add((w - 0.5) * w.ln());
    acc.add(-w);
    acc.add(0.5 * (2.0 * PI).ln());
    acc.add(stirling_correction(w));
    Ok(acc.total())
}

/// `ln Γ(z + a) - ln Γ(z)` without forming either log-gamma value, so the
/// difference keeps full relative precision at large `z`.
pub fn ln_gamma_ratio(z: f64, a: f64) -> Result<f64> {
    if !(z > 0.0) || !(z + a > 0.0) {
        return Err(domain(format!("ln_gamma_ratio needs z > 0 and z + a > 0 (got {z}, {a})")));
    }
    let mut acc = NeumaierSum::new();
    let mut w = z;
    while w.min(w + a) < Z_CUT {
        acc.add(-(a / w).ln_1p());
        w += 1.0;
    }
    acc.add((w - 0.5) * (a / w).ln_1p());
    acc.add(a * (w + a).ln());
    acc.add(-a);
    acc.add(stirling_correction(w + a) - stirling_correction(w));
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_2k(0), 1.0);
        assert_eq!(bernoulli_2k(1), 1.0 / 6.0);
        assert_eq!(bernoulli_2k(2), -1.0 / 30.0);
        assert_eq!(bernoulli_2k(6), -691.0 / 2730.0);
        assert_eq!(bernoulli_2k(7), 7.0 / 6.0);
        // |B_{2k}| = 2 (2k)! ζ(2k) / (2π)^{2k}
        let k = 30;
        let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
        let approx = 2.0 * fact / (2.0 * PI).powi(2 * k as i32);
        assert!(rel(bernoulli_2k(k).abs(), approx) < 1e-14);
    }

    #[test]
    fn polygamma_examples() {
        assert!((polygamma(0, 1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        assert!(rel(polygamma(1, 1.0).unwrap(), PI * PI / 6.0) < 1e-15);
        assert!((polygamma(0, 2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        assert!(polygamma(0, 0.0).is_err());
        assert!(polygamma(0, -1.0).is_err());
        assert!(polygamma(MAX_POLYGAMMA_ORDER + 1, 1.0).is_err());
    }

    #[test]
    fn polygamma_at_one_is_zeta() {
        // ψ^{(n)}(1) = (-1)^{n+1} n! ζ(n+1)
        for n in 2u32..=40 {
            let fact: f64 = (1..=n).map(f64::from).product();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            // Partial sum plus the Euler-Maclaurin remainder at k = 200.
            let s = n as i32 + 1;
            let kmax = 200.0f64;
            let partial: f64 = (1..200).rev().map(|k| (k as f64).powi(-s)).sum();
            let tail = kmax.powi(1 - s) / (s - 1) as f64
                + 0.5 * kmax.powi(-s)
                + s as f64 / 12.0 * kmax.powi(-s - 1);
            let v = polygamma(n, 1.0).unwrap();
            assert!(rel(v, sign * fact * (partial + tail)) < 1e-14, "n={n}");
        }
    }

    #[test]
    fn polygamma_dual_path() {
        for m in [0u32, 1, 2, 5, 13, 40, 59, 64] {
            for z in [0.25, 1.0, 3.5, 17.0, 1e3, 1e4] {
                let a = polygamma(m, z).unwrap();
                let b = polygamma_with_cut(m, z, Z_CUT + m as f64 + 8.0).unwrap();
                assert!(rel(a, b) <= 1e-12 || (a - b).abs() < 1e-300, "m={m} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn polygamma_recurrence() {
        for m in [0u32, 1, 3, 8] {
            for z in [0.5, 2.25, 40.0] {
                let fact: f64 = (1..=m).map(f64::from).product();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = polygamma(m, z + 1.0).unwrap();
                let step = sign * fact / z.powi(m as i32 + 1);
                let rhs = polygamma(m, z).unwrap() + step;
                let scale = lhs.abs().max(step.abs()).max(1.0);
                assert!((lhs - rhs).abs() <= 1e-13 * scale, "m={m} z={z}");
            }
        }
    }

    #[test]
    fn polygamma_finite_difference() {
        for z in [1.5, 10.0, 100.0] {
            let mut last = f64::INFINITY;
            for h in [1e-2, 5e-3] {
                let fd = (polygamma(0, z + h).unwrap() - polygamma(0, z - h).unwrap()) / (2.0 * h);
                let err = (fd - polygamma(1, z).unwrap()).abs();
                let bound = h * h * polygamma(3, z).unwrap().abs() / 6.0 * 1.01 + 1e-12;
                assert!(err <= bound, "z={z} h={h}: {err} > {bound}");
                assert!(err < last);
                last = err;
            }
        }
    }

    #[test]
    fn zeta_odd_values() {
        // Brute-force oracle with a rigorous integral tail bound.
        let k_max = 100_000usize;
        let partial: f64 = (1..=k_max).rev().map(|k| (k as f64).powi(-3)).sum();
        let tail_lo = 1.0 / (2.0 * ((k_max + 1) as f64).powi(2));
        let tail_hi = 1.0 / (2.0 * (k_max as f64).powi(2));
        let z3 = zeta_odd(3).unwrap();
        assert!(z3 >= partial + tail_lo - 1e-15 && z3 <= partial + tail_hi + 1e-15);
        assert!((z3 - 1.2020569).abs() < 1e-7);
        let mut prev = z3;
        for s in (5..=81).step_by(2) {
            let v = zeta_odd(s).unwrap();
            // Past s ≈ 53 the value is 1 to double precision.
            assert!(v <= prev && v >= 1.0, "s={s}");
            if s < 50 {
                assert!(v < prev && v > 1.0, "s={s}");
            }
            if s >= 11 {
                // 59^{-10}/10 is already below 1e-18.
                let brute: f64 = (1..60).rev().map(|k| (k as f64).powi(-(s as i32))).sum();
                assert!((v - brute).abs() <= 1e-15, "s={s}");
            }
            prev = v;
        }
        assert_eq!(zeta_odd(81).unwrap(), 1.0);
        for bad in [1, 2, 4, 83] {
            assert!(zeta_odd(bad).is_err());
        }
        let from_psi = -polygamma(2, 1.0).unwrap() / 2.0;
        assert!(rel(from_psi, z3) < 1e-15);
    }

    #[test]
    fn zeta_reals() {
        assert!(rel(zeta(2.0).unwrap(), PI * PI / 6.0) < 1e-15);
        assert!(rel(zeta(4.0).unwrap(), PI.powi(4) / 90.0) < 1e-15);
        assert!((zeta(0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta(-2.0).unwrap()).abs() < 1e-15);
        assert!((zeta(-3.0).unwrap() - 1.0 / 120.0).abs() < 1e-15);
        // ζ(1/2) = -1.4603545088095868...
        assert!((zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-14);
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 4e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 4e-15);
        assert!((ln_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 4e-15);
        let ln_fact_20: f64 = (1..20).map(|k| (k as f64).ln()).sum();
        assert!(rel(ln_gamma(20.0).unwrap(), ln_fact_20) < 1e-15);
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn ln_gamma_ratio_matches_difference() {
        for z in [0.5, 1.0, 3.0, 15.5, 16.0, 250.0] {
            for a in [0.5, -0.25, 1.0, 2.5] {
                let direct = ln_gamma(z + a).unwrap() - ln_gamma(z).unwrap();
                let r = ln_gamma_ratio(z, a).unwrap();
                assert!((r - direct).abs() < 1e-13 * direct.abs().max(1.0), "z={z} a={a}");
            }
        }
        // Γ(k+1/2)/Γ(k) ~ √k (1 - 1/(8k) + ...)
        let k = 1e8;
        let r = ln_gamma_ratio(k, 0.5).unwrap();
        assert!((r - (0.5 * k.ln() - 1.0 / (8.0 * k))).abs() < 1e-14);
        assert!(ln_gamma_ratio(1.0, -1.0).is_err());
    }
}
