//! Reference densities and distribution functions for spacings and ratios.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::quadrature::integrate_adaptive;

/// Reference laws for spacing and spacing-ratio statistics.
///
/// `GoeRatioK1` and `PoissonRatioK2` share one closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceLaw {
    PoissonSpacing,
    WignerSpacing,
    Brody(f64),
    PoissonRatioK1,
    GoeRatioK1,
    PoissonRatioK2,
    GoeRatioK2,
}

impl ReferenceLaw {
    pub fn name(&self) -> &'static str {
        match self {
            ReferenceLaw::PoissonSpacing => "poisson_spacing",
            ReferenceLaw::WignerSpacing => "wigner_spacing",
            ReferenceLaw::Brody(_) => "brody_spacing",
            ReferenceLaw::PoissonRatioK1 => "poisson_ratio_k1",
            ReferenceLaw::GoeRatioK1 => "goe_ratio_k1",
            ReferenceLaw::PoissonRatioK2 => "poisson_ratio_k2",
            ReferenceLaw::GoeRatioK2 => "goe_ratio_k2",
        }
    }

    /// Human-readable density, as emitted in report metadata.
    pub fn formula(&self) -> &'static str {
        match self {
            ReferenceLaw::PoissonSpacing => "exp(-s)",
            ReferenceLaw::WignerSpacing => "(pi/2) s exp(-pi s^2/4)",
            ReferenceLaw::Brody(_) => "nu (q+1) s^q exp(-nu s^(q+1)), nu = Gamma((q+2)/(q+1))^(q+1)",
            ReferenceLaw::PoissonRatioK1 => "1/(1+r)^2",
            ReferenceLaw::GoeRatioK1 | ReferenceLaw::PoissonRatioK2 => "27/8 (r+r^2)/(1+r+r^2)^(5/2)",
            ReferenceLaw::GoeRatioK2 => "(1/Z) (r+r^2)^4/(1+r+r^2)^7, 1/Z = 729 sqrt(3)/(4 pi)",
        }
    }
}

/// Exact normalization of `(r+r²)⁴/(1+r+r²)⁷` on `(0, ∞)`; ≈ 100.48.
pub fn goe_k2_normalization() -> f64 {
    729.0 * 3f64.sqrt() / (4.0 * PI)
}

/// `ν(q) = Γ((q+2)/(q+1))^{q+1}`, making the Brody mean spacing 1.
pub fn brody_nu(q: f64) -> f64 {
    gamma((q + 2.0) / (q + 1.0)).powf(q + 1.0)
}

fn check_q(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(invalid(format!("Brody q must be in [0, 1], got {q}")))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("argument must be finite and >= 0, got {x}")))
    }
}

fn goe_k1(r: f64) -> f64 {
    27.0 / 8.0 * (r + r * r) / (1.0 + r + r * r).powf(2.5)
}

fn goe_k2(r: f64) -> f64 {
    goe_k2_normalization() * (r + r * r).powi(4) / (1.0 + r + r * r).powi(7)
}

/// Probability density of `law` at `x >= 0`.
pub fn pdf_reference(x: f64, law: ReferenceLaw) -> Result<f64> {
    check_x(x)?;
    Ok(match law {
        ReferenceLaw::PoissonSpacing => (-x).exp(),
        ReferenceLaw::WignerSpacing => PI / 2.0 * x * (-PI * x * x / 4.0).exp(),
        ReferenceLaw::Brody(q) => {
            check_q(q)?;
            let nu = brody_nu(q);
            nu * (q + 1.0) * x.powf(q) * (-nu * x.powf(q + 1.0)).exp()
        }
        ReferenceLaw::PoissonRatioK1 => 1.0 / ((1.0 + x) * (1.0 + x)),
        ReferenceLaw::GoeRatioK1 | ReferenceLaw::PoissonRatioK2 => goe_k1(x),
        ReferenceLaw::GoeRatioK2 => goe_k2(x),
    })
}

/// `∫₀^r` of the GOE k=1 density, in closed form.
fn goe_k1_cdf(r: f64) -> f64 {
    let w = 1.0 + r + r * r;
    (0.5 * r.powi(3) + 0.75 * r * r - 0.75 * r - 0.5) / w.powf(1.5) + 0.5
}

/// The k=2 density is invariant under `r → 1/r` with its Jacobian, so
/// `F(r) = 1 − F(1/r)` and only `[0, 1]` needs quadrature.
fn goe_k2_cdf(r: f64) -> Result<f64> {
    if r > 1.0 {
        return Ok(1.0 - goe_k2_cdf(1.0 / r)?);
    }
    integrate_adaptive(goe_k2, 0.0, r, 1e-13)
}

/// Cumulative distribution of `law` at `x >= 0`.
pub fn cdf_reference(x: f64, law: ReferenceLaw) -> Result<f64> {
    check_x(x)?;
    Ok(match law {
        ReferenceLaw::PoissonSpacing => 1.0 - (-x).exp(),
        ReferenceLaw::WignerSpacing => 1.0 - (-PI * x * x / 4.0).exp(),
        ReferenceLaw::Brody(q) => {
            check_q(q)?;
            1.0 - (-brody_nu(q) * x.powf(q + 1.0)).exp()
        }
        ReferenceLaw::PoissonRatioK1 => x / (1.0 + x),
        ReferenceLaw::GoeRatioK1 | ReferenceLaw::PoissonRatioK2 => goe_k1_cdf(x),
        ReferenceLaw::GoeRatioK2 => goe_k2_cdf(x)?,
    })
}

/// Inverse of the Brody distribution function.
pub fn brody_quantile(u: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if !(0.0..1.0).contains(&u) {
        return Err(invalid(format!("probability must be in [0, 1), got {u}")));
    }
    Ok((-(1.0 - u).ln() / brody_nu(q)).powf(1.0 / (q + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_to_infinity;

    const ALL: [ReferenceLaw; 9] = [
        ReferenceLaw::PoissonSpacing,
        ReferenceLaw::WignerSpacing,
        ReferenceLaw::Brody(0.0),
        ReferenceLaw::Brody(0.174),
        ReferenceLaw::Brody(1.0),
        ReferenceLaw::PoissonRatioK1,
        ReferenceLaw::GoeRatioK1,
        ReferenceLaw::PoissonRatioK2,
        ReferenceLaw::GoeRatioK2,
    ];

    #[test]
    fn point_values() {
        assert_eq!(pdf_reference(1.0, ReferenceLaw::PoissonRatioK1).unwrap(), 0.25);
        let b0 = pdf_reference(1.0, ReferenceLaw::Brody(0.0)).unwrap();
        assert!((b0 - (-1f64).exp()).abs() < 1e-15);
        assert!(pdf_reference(1.0, ReferenceLaw::Brody(1.5)).is_err());
        assert!(pdf_reference(-1.0, ReferenceLaw::PoissonSpacing).is_err());
    }

    #[test]
    fn brody_endpoints_match_poisson_and_wigner() {
        assert!((brody_nu(0.0) - 1.0).abs() < 1e-14);
        assert!((brody_nu(1.0) - PI / 4.0).abs() < 1e-14);
        for s in [0.1, 0.7, 1.3, 3.0] {
            let w = pdf_reference(s, ReferenceLaw::WignerSpacing).unwrap();
            let b = pdf_reference(s, ReferenceLaw::Brody(1.0)).unwrap();
            assert!((w - b).abs() < 1e-13);
        }
    }

    #[test]
    fn densities_are_normalized() {
        for law in ALL {
            let total = integrate_to_infinity(|x| pdf_reference(x, law).unwrap(), 0.0, 1e-11).unwrap();
            assert!((total - 1.0).abs() < 1e-6, "{law:?}: {total}");
        }
    }

    #[test]
    fn cdfs_match_integrated_densities() {
        for law in ALL {
            for x in [0.05, 0.5, 1.0, 2.0, 7.5] {
                let num = integrate_adaptive(|t| pdf_reference(t, law).unwrap(), 0.0, x, 1e-13).unwrap();
                let cdf = cdf_reference(x, law).unwrap();
                assert!((num - cdf).abs() < 1e-9, "{law:?} at {x}: {num} vs {cdf}");
            }
        }
    }

    #[test]
    fn rounded_k2_constant_is_slightly_off() {
        let raw = integrate_to_infinity(|r| goe_k2(r) / goe_k2_normalization(), 0.0, 1e-14).unwrap();
        assert!((100.5 * raw - 1.0).abs() > 1e-4);
        assert!((goe_k2_normalization() * raw - 1.0).abs() < 1e-10);
    }

    #[test]
    fn brody_quantile_inverts_cdf() {
        for q in [0.0, 0.3, 1.0] {
            for u in [0.01, 0.5, 0.99] {
                let s = brody_quantile(u, q).unwrap();
                assert!((cdf_reference(s, ReferenceLaw::Brody(q)).unwrap() - u).abs() < 1e-13);
            }
        }
    }
}
