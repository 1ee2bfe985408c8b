use std::f64::consts::PI;

use super::{add, dot, norm, scale, Point};
use crate::error::{Error, Result};

/// One real spherical-harmonic term `coeff · Y_lm(ŝ)`.
///
/// Real orthonormal harmonics: `Y_l0 = N_l0 P_l`, `Y_lm = √2 N_lm P_l^m cos mφ`
/// for `m > 0` and `√2 N_l|m| P_l^|m| sin |m|φ` for `m < 0`, no Condon–Shortley phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub degree: usize,
    pub order: i32,
    pub coeff: f64,
}

impl HarmonicTerm {
    pub fn new(degree: usize, order: i32, coeff: f64) -> Self {
        Self { degree, order, coeff }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadialFunction {
    Constant(f64),
    Harmonics { base: f64, terms: Vec<HarmonicTerm> },
}

/// Star-shaped surface `{ center + r(ŝ) ŝ : ŝ ∈ S² }` at unit scale.
#[derive(Debug, Clone, PartialEq)]
pub struct StarShape {
    center: Point,
    radial: RadialFunction,
}

/// Geometry of the unit-scale surface above one direction.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceSample {
    pub radius: f64,
    pub point: Point,
    pub normal: Point,
    /// Area element relative to the solid angle, `dΓ = jacobian · dŝ`.
    pub jacobian: f64,
}

const CHECK_THETA: usize = 48;
const CHECK_PHI: usize = 96;

impl StarShape {
    pub fn sphere(radius: f64) -> Result<Self> {
        Self::new([0.0; 3], RadialFunction::Constant(radius))
    }

    pub fn unit_sphere() -> Self {
        Self::sphere(1.0).expect("unit sphere is valid")
    }

    pub fn harmonics(base: f64, terms: Vec<HarmonicTerm>) -> Result<Self> {
        Self::new([0.0; 3], RadialFunction::Harmonics { base, terms })
    }

    /// The shipped non-spherical test body: `r = 0.75 + Σ small terms` with
    /// odd and even harmonics, `0.5 ≤ r ≤ 1`.
    pub fn bumpy() -> Self {
        Self::harmonics(
            0.75,
            vec![
                HarmonicTerm::new(1, 0, 0.15),
                HarmonicTerm::new(2, 0, 0.10),
                HarmonicTerm::new(2, 1, 0.06),
                HarmonicTerm::new(3, -2, 0.05),
            ],
        )
        .expect("bumpy shape is valid")
    }

    pub fn new(center: Point, radial: RadialFunction) -> Result<Self> {
        let shape = Self { center, radial };
        shape.validate()?;
        Ok(shape)
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radial(&self) -> &RadialFunction {
        &self.radial
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.radial, RadialFunction::Constant(_))
    }

    /// Highest harmonic degree in the radial function.
    pub fn degree(&self) -> usize {
        match &self.radial {
            RadialFunction::Constant(_) => 0,
            RadialFunction::Harmonics { terms, .. } => terms.iter().map(|t| t.degree).max().unwrap_or(0),
        }
    }

    fn validate(&self) -> Result<()> {
        if let RadialFunction::Harmonics { terms, .. } = &self.radial {
            for t in terms {
                if t.order.unsigned_abs() as usize > t.degree {
                    return Err(Error::InvalidShape(format!(
                        "harmonic order {} exceeds degree {}",
                        t.order, t.degree
                    )));
                }
            }
        }
        let mut max_extent: f64 = 0.0;
        let mut min_radius = f64::INFINITY;
        for i in 0..=CHECK_THETA {
            let theta = PI * i as f64 / CHECK_THETA as f64;
            for k in 0..CHECK_PHI {
                let phi = 2.0 * PI * k as f64 / CHECK_PHI as f64;
                let s = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                let r = self.radius(&s);
                if !r.is_finite() || r <= 0.0 {
                    return Err(Error::InvalidShape(format!(
                        "non-positive radial function {r} in direction {s:?}"
                    )));
                }
                min_radius = min_radius.min(r);
                max_extent = max_extent.max(norm(&add(&self.center, &scale(r, &s))));
            }
        }
        if max_extent > 1.0 + 1e-12 {
            return Err(Error::InvalidShape(format!(
                "surface leaves the unit ball (max |x| = {max_extent})"
            )));
        }
        // The contraction is taken about the origin, which must lie inside.
        let c = norm(&self.center);
        if c > 0.0 {
            let toward_origin = scale(-1.0 / c, &self.center);
            if self.radius(&toward_origin) <= c {
                return Err(Error::InvalidShape("origin lies outside the obstacle".into()));
            }
        }
        debug_assert!(min_radius > 0.0);
        Ok(())
    }

    pub fn radius(&self, s: &Point) -> f64 {
        self.radius_and_gradient(s).0
    }

    /// `r(ŝ)` and its surface gradient on S² (a tangent vector at ŝ).
    pub fn radius_and_gradient(&self, s: &Point) -> (f64, Point) {
        match &self.radial {
            RadialFunction::Constant(r) => (*r, [0.0; 3]),
            RadialFunction::Harmonics { base, terms } => {
                let cos_t = s[2];
                let sin_t = s[0].hypot(s[1]);
                let phi = s[1].atan2(s[0]);
                let mut r = *base;
                let mut d_theta = 0.0;
                let mut d_phi_sin = 0.0;
                for t in terms {
                    let (y, yt, yp) = real_harmonic(t.degree, t.order, cos_t, sin_t, phi);
                    r += t.coeff * y;
                    d_theta += t.coeff * yt;
                    d_phi_sin += t.coeff * yp;
                }
                let (sp, cp) = phi.sin_cos();
                let e_theta = [cos_t * cp, cos_t * sp, -sin_t];
                let e_phi = [-sp, cp, 0.0];
                let grad = [
                    d_theta * e_theta[0] + d_phi_sin * e_phi[0],
                    d_theta * e_theta[1] + d_phi_sin * e_phi[1],
                    d_theta * e_theta[2] + d_phi_sin * e_phi[2],
                ];
                (r, grad)
            }
        }
    }

    pub fn sample(&self, s: &Point) -> SurfaceSample {
        let (r, g) = self.radius_and_gradient(s);
        let g2 = dot(&g, &g);
        let stretch = (r * r + g2).sqrt();
        let normal = [
            (r * s[0] - g[0]) / stretch,
            (r * s[1] - g[1]) / stretch,
            (r * s[2] - g[2]) / stretch,
        ];
        // Renormalise to absorb rounding in the tangential projection.
        let n = norm(&normal);
        SurfaceSample {
            radius: r,
            point: add(&self.center, &scale(r, s)),
            normal: scale(1.0 / n, &normal),
            jacobian: r * stretch,
        }
    }
}

/// Value, θ-derivative and `(1/sin θ) ∂_φ` of a real orthonormal harmonic.
fn real_harmonic(l: usize, m: i32, cos_t: f64, sin_t: f64, phi: f64) -> (f64, f64, f64) {
    let k = m.unsigned_abs() as usize;
    let lf = l as f64;
    if k == 0 {
        let p0 = legendre_column(0, l, cos_t, seed(0, sin_t, 0));
        let value = p0[l];
        let d_theta = if l == 0 {
            0.0
        } else {
            let p1 = legendre_column(1, l, cos_t, seed(1, sin_t, 1));
            -(lf * (lf + 1.0)).sqrt() * p1[l - 1]
        };
        return (value, d_theta, 0.0);
    }
    // Column of P̃_j^k for j = k..=l and of P̃_j^k / sin θ.
    let p = legendre_column(k, l, cos_t, seed(k, sin_t, k));
    let q = legendre_column(k, l, cos_t, seed(k, sin_t, k - 1));
    let kf = k as f64;
    let value_p = p[l - k];
    let q_l = q[l - k];
    let q_lm1 = if l > k { q[l - k - 1] } else { 0.0 };
    let dp_theta = lf * cos_t * q_l - ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf - kf) * (lf + kf)).sqrt() * q_lm1;
    let (sm, cm) = (kf * phi).sin_cos();
    let root2 = std::f64::consts::SQRT_2;
    if m > 0 {
        (root2 * value_p * cm, root2 * dp_theta * cm, -root2 * kf * q_l * sm)
    } else {
        (root2 * value_p * sm, root2 * dp_theta * sm, root2 * kf * q_l * cm)
    }
}

/// `N_kk P_k^k` with the `sin^k θ` factor replaced by `sin^power θ`.
fn seed(k: usize, sin_t: f64, power: usize) -> f64 {
    let mut v = (0.25 / PI).sqrt();
    for j in 1..=k {
        let jf = j as f64;
        v *= ((2.0 * jf + 1.0) / (2.0 * jf)).sqrt();
    }
    v * sin_t.powi(power as i32)
}

/// Normalised associated Legendre values `P̃_j^k(x)` for `j = k..=lmax`, given `P̃_k^k`.
fn legendre_column(k: usize, lmax: usize, x: f64, start: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lmax + 1 - k.min(lmax + 1));
    if k > lmax {
        return out;
    }
    let kf = k as f64;
    out.push(start);
    if lmax > k {
        out.push((2.0 * kf + 3.0).sqrt() * x * start);
    }
    for j in (k + 2)..=lmax {
        let jf = j as f64;
        let a = ((4.0 * jf * jf - 1.0) / (jf * jf - kf * kf)).sqrt();
        let b = (((jf - 1.0) * (jf - 1.0) - kf * kf) / (4.0 * (jf - 1.0) * (jf - 1.0) - 1.0)).sqrt();
        let n = out.len();
        out.push(a * (x * out[n - 1] - b * out[n - 2]));
    }
    out
}
