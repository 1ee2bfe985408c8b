//! Exact scattered field of a centred sphere of radius ε under radial data.
//!
//! Only the monopole is excited, so the scattered field is the outgoing wave
//! `f(t − r)/r` that cancels the incident trace on `r = ε`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::incident::{incident_laplace, incident_time, ShellPulse};

#[derive(Debug, Clone, PartialEq)]
pub struct SphereScenario {
    epsilon: f64,
    pulse: ShellPulse,
}

impl SphereScenario {
    pub fn new(epsilon: f64, pulse: ShellPulse) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < pulse.r0()) {
            return Err(Error::Config(format!(
                "sphere radius {epsilon} must lie in (0, r0 = {})",
                pulse.r0()
            )));
        }
        if pulse.center() != [0.0; 3] {
            return Err(Error::Config(
                "the sphere oracle needs data centred on the sphere".into(),
            ));
        }
        Ok(Self { epsilon, pulse })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn pulse(&self) -> &ShellPulse {
        &self.pulse
    }
}

/// `u_sc(t, r) = −(ε/r) u^inc(t − (r − ε), ε)` for `r ≥ ε`.
pub fn sphere_scattered_time(scn: &SphereScenario, t: f64, r: f64) -> f64 {
    assert!(r >= scn.epsilon, "observation radius {r} inside the sphere");
    let eps = scn.epsilon;
    -(eps / r) * incident_time(&scn.pulse, t - (r - eps), eps)
}

/// `û_sc(s, r) = −(ε/r) e^{−s(r−ε)} û^inc(s, ε)` for `r ≥ ε`.
pub fn sphere_scattered_frequency(scn: &SphereScenario, s: Complex64, r: f64) -> Complex64 {
    assert!(r >= scn.epsilon, "observation radius {r} inside the sphere");
    let eps = scn.epsilon;
    -(eps / r) * (-s * (r - eps)).exp() * incident_laplace(&scn.pulse, s, eps)
}

/// Eigenvalue of the single-layer operator on constants over the sphere of
/// radius ε: `(1 − e^{−2sε}) / (2s)`, equal to ε at `s = 0`.
pub fn sphere_single_layer_eigenvalue(s: Complex64, epsilon: f64) -> Complex64 {
    let z = 2.0 * s * epsilon;
    if z.norm() < 1e-6 {
        epsilon * (1.0 - z / 2.0 + z * z / 6.0)
    } else {
        (1.0 - (-z).exp()) / (2.0 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    fn scenario(eps: f64) -> SphereScenario {
        SphereScenario::new(eps, ShellPulse::default()).unwrap()
    }

    #[test]
    fn boundary_condition_holds_exactly() {
        let scn = scenario(0.1);
        for &t in &[1.5, 2.2, 2.7, 3.05] {
            assert_eq!(sphere_scattered_time(&scn, t, 0.1), -incident_time(scn.pulse(), t, 0.1));
        }
    }

    #[test]
    fn causal_and_extinct() {
        let scn = scenario(0.16);
        let r = 2.5;
        let first = (r - 0.16) + (2.0 - 0.16);
        let last = (r - 0.16) + (3.0 + 0.16);
        assert_eq!(sphere_scattered_time(&scn, 0.999 * first, r), 0.0);
        assert_eq!(sphere_scattered_time(&scn, last + 1e-12, r), 0.0);
        assert!(sphere_scattered_time(&scn, 0.5 * (first + last), r).abs() > 0.0);
    }

    #[test]
    fn laplace_transform_of_time_domain_agrees() {
        let scn = scenario(0.1);
        let (s, r) = (Complex64::new(1.0, 0.0), 2.5);
        // Support of u_sc(·, r) is [(r − ε) + r₀ − ε, (r − ε) + R₀ + ε].
        let (a, b) = (2.4 + 1.9, 2.4 + 3.1);
        let rule = gauss_legendre(32);
        let panels = 16;
        let h = (b - a) / panels as f64;
        let mut oracle = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let t = lo + 0.5 * h * (x + 1.0);
                oracle += (-s * t).exp() * sphere_scattered_time(&scn, t, r) * (0.5 * h * w);
            }
        }
        let got = sphere_scattered_frequency(&scn, s, r);
        assert!((got - oracle).norm() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn static_formula() {
        let scn = scenario(0.2);
        let got = sphere_scattered_frequency(&scn, Complex64::new(0.0, 0.0), 2.5);
        let exact = -(0.2 / 2.5) * incident_laplace(scn.pulse(), Complex64::new(0.0, 0.0), 0.2);
        assert!((got - exact).norm() < 1e-15);
    }

    #[test]
    fn wave_equation_residual_vanishes() {
        // (r u)_tt − (r u)_rr = 0 for radial solutions.
        let scn = scenario(0.1);
        let h = 1e-3;
        let ru = |t: f64, r: f64| r * sphere_scattered_time(&scn, t, r);
        for &(t, r) in &[(4.8, 2.3), (5.1, 2.6), (5.4, 2.9)] {
            let utt = (ru(t + h, r) - 2.0 * ru(t, r) + ru(t - h, r)) / (h * h);
            let urr = (ru(t, r + h) - 2.0 * ru(t, r) + ru(t, r - h)) / (h * h);
            assert!((utt - urr).abs() < 1e-4 * utt.abs().max(1.0), "{utt} vs {urr}");
        }
    }

    #[test]
    fn eigenvalue_small_argument_branch() {
        let s = Complex64::new(0.0, 1e-8);
        let direct = (1.0 - (-2.0 * s * 0.3).exp()) / (2.0 * s);
        assert!((sphere_single_layer_eigenvalue(s, 0.3) - direct).norm() < 1e-9);
        assert_eq!(
            sphere_single_layer_eigenvalue(Complex64::new(0.0, 0.0), 0.3),
            Complex64::new(0.3, 0.0)
        );
    }

    #[test]
    fn rejects_off_centre_or_large_spheres() {
        assert!(SphereScenario::new(2.5, ShellPulse::default()).is_err());
        assert!(SphereScenario::new(0.1, ShellPulse::default().with_center([0.1, 0.0, 0.0])).is_err());
    }
}
