//! Free-space field radiated by radial initial data on a spherical shell.
//!
//! The data are `u₀ = 0`, `v₀(x) = ψ(|x − c|)` with the polynomial bump
//! `ψ(ρ) = A ((ρ − r₀)(R₀ − ρ) / w²)^{k+1}`, `w = (R₀ − r₀)/2`, so `max ψ = A`.
//! Every time-domain quantity is an exact polynomial evaluation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::bem::BoundaryDensity;
use crate::error::{Error, Result};
use crate::geometry::{distance, Point, SurfaceGrid};
use crate::quadrature::{gauss_legendre, Rule};

const PANEL_ORDER: usize = 16;
const TAYLOR_SWITCH: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ShellPulse {
    r0: f64,
    outer: f64,
    k_reg: u32,
    amplitude: f64,
    center: Point,
    /// ∫_{r₀}^{ρ} σψ(σ) dσ as a polynomial in `y = (ρ − (r₀ + R₀)/2) / w`.
    h_integral: Vec<f64>,
}

impl Default for ShellPulse {
    fn default() -> Self {
        Self::new(2.0, 3.0, 7, 1.0).expect("default pulse is valid")
    }
}

impl ShellPulse {
    pub fn new(r0: f64, outer: f64, k_reg: u32, amplitude: f64) -> Result<Self> {
        if !(r0 > 1.0) || !(outer > r0) || !outer.is_finite() {
            return Err(Error::Config(format!(
                "pulse shell must satisfy R0 > r0 > 1, got r0 = {r0}, R0 = {outer}"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::Config(format!("pulse amplitude {amplitude} is not finite")));
        }
        let mid = 0.5 * (r0 + outer);
        let w = 0.5 * (outer - r0);
        // ψ = A (1 − y²)^{k+1} = A Σ_j C(k+1, j) (−y²)^j
        let n = k_reg as usize + 1;
        let mut psi = vec![0.0; 2 * n + 1];
        let mut binom = 1.0;
        for j in 0..=n {
            psi[2 * j] = amplitude * binom * if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        // dρ = w dy, ρ = mid + w y
        let h: Vec<f64> = poly_mul_linear(&psi, mid / w).iter().map(|c| c * w * w).collect();
        let mut h_integral = poly_integral(&h);
        let offset = poly_eval(&h_integral, -1.0);
        h_integral[0] -= offset;
        Ok(Self {
            r0,
            outer,
            k_reg,
            amplitude,
            center: [0.0; 3],
            h_integral,
        })
    }

    pub fn with_center(mut self, center: Point) -> Self {
        self.center = center;
        self
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn k_reg(&self) -> u32 {
        self.k_reg
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn center(&self) -> Point {
        self.center
    }

    fn mid(&self) -> f64 {
        0.5 * (self.r0 + self.outer)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.outer - self.r0)
    }

    /// The radial profile ψ(ρ).
    pub fn psi(&self, rho: f64) -> f64 {
        self.psi_derivative(0, rho)
    }

    /// `ψ^{(j)}(ρ)` by the Leibniz rule on the factored form, accurate up to
    /// the shell edges.
    pub fn psi_derivative(&self, order: usize, rho: f64) -> f64 {
        if rho <= self.r0 || rho >= self.outer {
            return 0.0;
        }
        let n = self.k_reg as usize + 1;
        let (a, b) = (rho - self.r0, self.outer - rho);
        // d^i/dρ^i x^n = n!/(n−i)! x^{n−i}
        let falling = |i: usize| (0..i).map(|q| (n - q) as f64).product::<f64>();
        let mut sum = 0.0;
        let mut binom = 1.0;
        for i in 0..=order {
            let i2 = order - i;
            if i <= n && i2 <= n {
                let sign = if i2.is_multiple_of(2) { 1.0 } else { -1.0 };
                sum += binom * falling(i) * a.powi((n - i) as i32) * sign * falling(i2) * b.powi((n - i2) as i32);
            }
            binom = binom * (order - i) as f64 / (i + 1) as f64;
        }
        self.amplitude * sum / self.half_width().powi(2 * n as i32)
    }

    /// `∫_0^{|ρ|} σψ(σ) dσ`, the even antiderivative of the odd extension of ρψ.
    fn radial_antiderivative(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        if rho <= self.r0 {
            0.0
        } else if rho >= self.outer {
            poly_eval(&self.h_integral, 1.0)
        } else {
            poly_eval(&self.h_integral, (rho - self.mid()) / self.half_width())
        }
    }

    /// Odd extension of ρψ(|ρ|) (`order` 0) or its second derivative (`order` 2).
    fn odd_profile(&self, rho: f64, order: usize) -> f64 {
        let a = rho.abs();
        let v = match order {
            0 => a * self.psi(a),
            2 => 2.0 * self.psi_derivative(1, a) + a * self.psi_derivative(2, a),
            _ => unreachable!("only h and h'' are needed"),
        };
        if rho < 0.0 {
            -v
        } else {
            v
        }
    }
}

/// Free-space field `u^inc(t, r)` at distance `r` from the data centre.
pub fn incident_time(pulse: &ShellPulse, t: f64, r: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let r = r.abs();
    if r < 1e-4 {
        // (H(t+r) − H(t−r)) / 2r = h(t) + r² h''(t)/6 + O(r⁴)
        return pulse.odd_profile(t, 0) + r * r * pulse.odd_profile(t, 2) / 6.0;
    }
    (pulse.radial_antiderivative(r + t) - pulse.radial_antiderivative(r - t)) / (2.0 * r)
}

fn panel_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// `sinh(z)/z`, by series near zero.
pub(crate) fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < TAYLOR_SWITCH {
        let z2 = z * z;
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..6 {
            term *= z2 / ((2 * k) * (2 * k + 1)) as f64;
            sum += term;
        }
        sum
    } else {
        z.sinh() / z
    }
}

fn sinhc_derivative(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        let z2 = z * z;
        z * (1.0 / 3.0 + z2 * (1.0 / 30.0 + z2 * (1.0 / 840.0 + z2 / 45360.0)))
    } else {
        (z * z.cosh() - z.sinh()) / (z * z)
    }
}

/// `e^{−s max(r,ρ)} sinh(s min(r,ρ)) / (s r)`, the radial free resolvent kernel.
fn radial_kernel(s: Complex64, r: f64, rho: f64) -> Complex64 {
    let (lo, hi) = if r <= rho { (r, rho) } else { (rho, r) };
    if r == 0.0 {
        return (-s * rho).exp();
    }
    let z = s * lo;
    if z.norm() < TAYLOR_SWITCH {
        (-s * hi).exp() * (lo / r) * sinhc(z)
    } else {
        ((-s * (hi - lo)).exp() - (-s * (hi + lo)).exp()) / (2.0 * s * r)
    }
}

fn radial_kernel_dr(s: Complex64, r: f64, rho: f64) -> Complex64 {
    if r <= rho {
        (-s * rho).exp() * s * sinhc_derivative(s * r)
    } else {
        let inner = rho * sinhc(s * rho);
        inner * (-s * r).exp() * (-s / r - 1.0 / (r * r))
    }
}

fn integrate_shell(pulse: &ShellPulse, s: Complex64, r: f64, kernel: impl Fn(f64) -> Complex64) -> Complex64 {
    let rule = panel_rule();
    let mut breaks = vec![pulse.r0];
    if r > pulse.r0 && r < pulse.outer {
        breaks.push(r);
    }
    breaks.push(pulse.outer);
    let mut total = Complex64::new(0.0, 0.0);
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let panels = 1 + (s.norm() * (b - a) / 2.0).ceil() as usize;
        let hp = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + hp * p as f64;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let rho = lo + 0.5 * hp * (x + 1.0);
                total += kernel(rho) * (0.5 * hp * w * rho * pulse.psi(rho));
            }
        }
    }
    total
}

/// Laplace-domain incident field `û^inc(s, r) = (R₀(s) v₀)(x)`, `|x − c| = r`.
pub fn incident_laplace(pulse: &ShellPulse, s: Complex64, r: f64) -> Complex64 {
    let r = r.abs();
    integrate_shell(pulse, s, r, |rho| radial_kernel(s, r, rho))
}

/// `∂_r û^inc(s, r)`.
pub fn incident_laplace_dr(pulse: &ShellPulse, s: Complex64, r: f64) -> Complex64 {
    let r = r.abs();
    integrate_shell(pulse, s, r, |rho| radial_kernel_dr(s, r, rho))
}

/// Dirichlet trace of `û^inc(s, ·)` on the grid nodes.
pub fn incident_trace(pulse: &ShellPulse, s: Complex64, grid: &SurfaceGrid) -> Result<BoundaryDensity> {
    let values = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let d = distance(x, &pulse.center);
            if d >= pulse.r0 {
                Err(Error::Config(format!(
                    "grid node {i} at distance {d:.4} from the data centre lies in the source shell"
                )))
            } else {
                Ok(incident_laplace(pulse, s, d))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryDensity::new(values))
}

/// `(sup |û^inc|, sup |∇û^inc|)` over the ball `B_ε(0)`, by dense sampling.
pub fn incident_gradient_bound(pulse: &ShellPulse, s: Complex64, epsilon: f64) -> (f64, f64) {
    const N_RADII: usize = 24;
    let dirs: Vec<Point> = (-1i32..=1)
        .flat_map(|a| (-1i32..=1).flat_map(move |b| (-1i32..=1).map(move |c| [a as f64, b as f64, c as f64])))
        .filter(|d| d.iter().any(|&v| v != 0.0))
        .map(|d| {
            let n = crate::geometry::norm(&d);
            [d[0] / n, d[1] / n, d[2] / n]
        })
        .collect();
    let mut sup_value: f64 = 0.0;
    let mut sup_grad: f64 = 0.0;
    for k in 0..=N_RADII {
        let rho = epsilon * k as f64 / N_RADII as f64;
        for d in &dirs {
            let x = [rho * d[0], rho * d[1], rho * d[2]];
            let r = distance(&x, &pulse.center);
            sup_value = sup_value.max(incident_laplace(pulse, s, r).norm());
            sup_grad = sup_grad.max(incident_laplace_dr(pulse, s, r).norm());
        }
    }
    (sup_value, sup_grad)
}

/// Radial surrogate of the data energy `E₀^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySeminorm {
    pub k_reg: u32,
    pub value: f64,
}

/// `½ Σ_{j ≤ k} ∫ |ψ^{(j)}(ρ)|² 4πρ² dρ`.
pub fn energy_seminorm(pulse: &ShellPulse) -> EnergySeminorm {
    let rule = crate::quadrature::gauss_legendre_on(64, pulse.r0, pulse.outer);
    let mut value = 0.0;
    for j in 0..=pulse.k_reg as usize {
        value += rule.integrate(|rho| {
            let v = pulse.psi_derivative(j, rho);
            v * v * 4.0 * PI * rho * rho
        });
    }
    EnergySeminorm {
        k_reg: pulse.k_reg,
        value: 0.5 * value,
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn poly_integral(c: &[f64]) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(c.iter().enumerate().map(|(i, &a)| a / (i + 1) as f64))
        .collect()
}

/// `(x + shift) · p(x)`.
fn poly_mul_linear(c: &[f64], shift: f64) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (i, &a) in c.iter().enumerate() {
        out[i] += shift * a;
        out[i + 1] += a;
    }
    out
}
