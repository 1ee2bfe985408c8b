use super::{norm, Point};

/// Smooth radial cutoff `χ_a(x) = χ(|x| / a)`: one on `|x| < a`, zero on `|x| ≥ 2a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFunction {
    a: f64,
}

impl CutoffFunction {
    pub fn new(a: f64) -> Self {
        assert!(a > 0.0, "cutoff scale must be positive");
        Self { a }
    }

    pub fn scale(&self) -> f64 {
        self.a
    }

    pub fn evaluate(&self, x: &Point) -> f64 {
        Self::profile(norm(x) / self.a)
    }

    /// Evaluate at a radius rather than a point.
    pub fn at_radius(&self, r: f64) -> f64 {
        Self::profile(r / self.a)
    }

    /// The fixed profile χ as a function of `|x|`.
    pub fn profile(u: f64) -> f64 {
        if u < 1.0 {
            1.0
        } else if u >= 2.0 {
            0.0
        } else {
            let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
            let up = f(2.0 - u);
            up / (up + f(u - 1.0))
        }
    }
}
