//! Luttinger-liquid predictions: zero-mode energies, the finite-ring
//! functional form `C₀ (-1)^x / (L sin(πx/L))^α` and the two-term
//! infinite-chain asymptotics.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};

/// Fermi momentum at half filling.
pub const FERMI_MOMENTUM: f64 = PI / 2.0;

/// Exponent, amplitude and coefficient of the `x^(-α-2)` correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub alpha: f64,
    pub c0: f64,
    pub sub_coeff: f64,
}

impl AsymptoticParams {
    pub fn new(alpha: f64, c0: f64, sub_coeff: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(c0 > 0.0) {
            return Err(domain(format!(
                "asymptotic parameters need alpha > 0 and c0 > 0 (got {alpha}, {c0})"
            )));
        }
        Ok(AsymptoticParams { alpha, c0, sub_coeff })
    }

    /// The XX point: `α = 1/2`, `C₀` from the amplitude constants and the
    /// correction coefficient `-(1/8) C₀/√π`.
    pub fn xx() -> Self {
        let c0 = crate::constants::c0();
        AsymptoticParams {
            alpha: 0.5,
            c0,
            sub_coeff: -0.125 * c0 / PI.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LuttingerParams {
    pub lambda: f64,
    pub u: f64,
    pub xi: f64,
    /// Anisotropy angle, present when `ξ ∈ (0, 2)` maps onto `η ∈ (0, π)`.
    pub eta: Option<f64>,
    /// `Δ = cos η`.
    pub delta: Option<f64>,
}

impl LuttingerParams {
    /// Critical exponent `α = ξ/2` of `σ⁺σ⁻`.
    pub fn alpha(&self) -> f64 {
        0.5 * self.xi
    }
}

pub fn luttinger_from_lambda(lambda: f64) -> Result<LuttingerParams> {
    if !(lambda.abs() < 1.0) {
        return Err(domain(format!("coupling λ = {lambda} outside the gapless range |λ| < 1")));
    }
    let u = (1.0 - lambda * lambda).sqrt();
    let xi = ((1.0 + lambda) / (1.0 - lambda)).sqrt();
    let eta = PI * (1.0 - 0.5 * xi);
    let (eta, delta) = if eta > 0.0 && eta < PI {
        (Some(eta), Some(eta.cos()))
    } else {
        (None, None)
    };
    Ok(LuttingerParams { lambda, u, xi, eta, delta })
}

/// Parameters of the XXZ chain with `Δ = cos η`, via `ξ = 2(π - η)/π`.
pub fn luttinger_from_eta(eta: f64) -> Result<LuttingerParams> {
    if !(eta > 0.0 && eta < PI) {
        return Err(domain(format!("anisotropy angle η = {eta} outside (0, π)")));
    }
    let xi = 2.0 * (PI - eta) / PI;
    let xi2 = xi * xi;
    let lambda = (xi2 - 1.0) / (xi2 + 1.0);
    Ok(LuttingerParams {
        lambda,
        u: (1.0 - lambda * lambda).sqrt(),
        xi,
        eta: Some(eta),
        delta: Some(eta.cos()),
    })
}

/// Zero-mode energy `(π/2L) u [ξ ΔN² + ΔQ²/ξ]`.
pub fn finite_size_energy(dn: i64, dq: i64, params: &LuttingerParams, len: f64) -> Result<f64> {
    if !(len > 0.0) {
        return Err(domain(format!("chain length must be positive, got {len}")));
    }
    let (dn, dq) = (dn as f64, dq as f64);
    Ok(PI / (2.0 * len) * params.u * (params.xi * dn * dn + dq * dq / params.xi))
}

fn stagger(x: usize) -> f64 {
    if x % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `C₀ (-1)^x (L sin(πx/L))^(-α)` on a ring of length `len`.
pub fn asym_finite(x: usize, len: usize, params: &AsymptoticParams) -> Result<f64> {
    if x == 0 || x >= len {
        return Err(domain(format!("distance {x} outside [1, L - 1] for L = {len}")));
    }
    let chord = len as f64 * crate::greens::sin_pi_ratio(x as i64, len as i64);
    Ok(params.c0 * stagger(x) * chord.powf(-params.alpha))
}

/// Leading and two-term infinite-chain forms:
/// `(C₀/π^α)(-1)^x x^(-α)` and that plus `sub_coeff · x^(-α-2)`.
pub fn asym_infinite(x: usize, params: &AsymptoticParams) -> Result<(f64, f64)> {
    if x == 0 {
        return Err(domain("distance must be at least 1"));
    }
    let xf = x as f64;
    let leading = params.c0 / PI.powf(params.alpha) * stagger(x) * xf.powf(-params.alpha);
    let two_term = leading + params.sub_coeff * xf.powf(-params.alpha - 2.0);
    Ok((leading, two_term))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        let p = luttinger_from_lambda(0.0).unwrap();
        assert_eq!((p.u, p.xi), (1.0, 1.0));
        assert!((p.eta.unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(p.delta.unwrap().abs() < 1e-15);
        assert_eq!(p.alpha(), 0.5);

        let p = luttinger_from_lambda(0.6).unwrap();
        assert!((p.u - 0.8).abs() < 1e-15);
        assert!((p.xi - 2.0).abs() < 1e-15);

        assert!(luttinger_from_lambda(1.0).is_err());
        assert!(luttinger_from_lambda(-1.5).is_err());
        assert!(luttinger_from_lambda(f64::NAN).is_err());
    }

    #[test]
    fn eta_examples() {
        let p = luttinger_from_eta(PI / 2.0).unwrap();
        assert!((p.xi - 1.0).abs() < 1e-15);
        assert!((p.alpha() - 0.5).abs() < 1e-15);
        assert!(p.lambda.abs() < 1e-15);
        for eta in [0.3, 1.0, 2.0, 3.0] {
            let p = luttinger_from_eta(eta).unwrap();
            let q = luttinger_from_lambda(p.lambda).unwrap();
            assert!((q.xi - p.xi).abs() < 1e-12);
            assert!((q.eta.unwrap() - eta).abs() < 1e-12);
        }
        assert!(luttinger_from_eta(0.0).is_err());
        assert!(luttinger_from_eta(PI).is_err());
    }

    #[test]
    fn dual_coupling() {
        for lambda in [-0.9, -0.3, 0.1, 0.5, 0.95] {
            let a = luttinger_from_lambda(lambda).unwrap();
            let b = luttinger_from_lambda(-lambda).unwrap();
            assert!((a.xi * b.xi - 1.0).abs() < 1e-14);
            assert_eq!(a.u, b.u);
        }
    }

    #[test]
    fn energy_examples() {
        let free = luttinger_from_lambda(0.0).unwrap();
        assert_eq!(finite_size_energy(0, 0, &free, 50.0).unwrap(), 0.0);
        let e = finite_size_energy(1, 0, &free, 50.0).unwrap();
        assert!((e - PI / 100.0).abs() < 1e-16);
        let p = luttinger_from_lambda(0.6).unwrap();
        let e = finite_size_energy(0, 2, &p, 100.0).unwrap();
        assert!((e - PI / 125.0).abs() < 1e-15);
        assert!(finite_size_energy(1, 1, &p, 0.0).is_err());
    }

    #[test]
    fn energy_is_even() {
        let p = luttinger_from_lambda(-0.4).unwrap();
        for dn in -3..=3 {
            for dq in -3..=3 {
                let a = finite_size_energy(dn, dq, &p, 64.0).unwrap();
                assert_eq!(a, finite_size_energy(-dn, -dq, &p, 64.0).unwrap());
                assert_eq!(a, finite_size_energy(-dn, dq, &p, 64.0).unwrap());
            }
        }
    }

    #[test]
    fn finite_form_at_half_ring() {
        let p = AsymptoticParams::new(0.5, 0.52, 0.0).unwrap();
        for len in [10usize, 1026] {
            let v = asym_finite(len / 2, len, &p).unwrap();
            let expect = 0.52 * stagger(len / 2) / (len as f64).sqrt();
            assert!((v - expect).abs() < 1e-15);
        }
        assert!(asym_finite(0, 10, &p).is_err());
        assert!(asym_finite(10, 10, &p).is_err());
    }

    #[test]
    fn finite_form_tends_to_infinite_form() {
        let p = AsymptoticParams::xx();
        for x in [1usize, 2, 17, 100] {
            let f = asym_finite(x, 1_000_000, &p).unwrap();
            let (lead, _) = asym_infinite(x, &p).unwrap();
            assert!(((f - lead) / lead).abs() <= 1e-6, "x={x}");
        }
    }

    #[test]
    fn infinite_examples() {
        let p = AsymptoticParams::xx();
        let amp = p.c0 / PI.sqrt();
        assert!((amp - 2.0 * 0.147088).abs() < 1e-6);
        let (lead, _) = asym_infinite(100, &p).unwrap();
        assert!((lead - 0.0294177).abs() < 1e-7);
        let (lead1, two1) = asym_infinite(1, &p).unwrap();
        assert!(lead1 < 0.0);
        assert!((two1 + 0.330949).abs() < 1e-6);
        assert!((two1 + 1.0 / PI).abs() < 0.013);
        assert!(asym_infinite(2, &p).unwrap().0 > 0.0);
        assert!(asym_infinite(0, &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(AsymptoticParams::new(0.0, 1.0, 0.0).is_err());
        assert!(AsymptoticParams::new(0.5, -1.0, 0.0).is_err());
    }
}
