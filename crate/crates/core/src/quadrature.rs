//! One-dimensional Gauss–Legendre rules and Legendre function recurrences.

use std::f64::consts::PI;

/// Nodes and weights of a quadrature rule on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on the three-term recurrence, seeded with the
/// Tricomi approximation; accurate to a few ulps for `n` up to several hundred.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Rule {
        nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
        weights: base.weights.iter().map(|&w| half * w).collect(),
    }
}

/// Composite rule: `panels` equal panels of `order`-point Gauss–Legendre.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> Rule {
    let base = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    Rule { nodes, weights }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fills `out[l] = P_l(t)` for `l = 0..out.len()`.
pub fn legendre_values(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = t;
    }
    for l in 2..out.len() {
        let lf = l as f64;
        out[l] = ((2.0 * lf - 1.0) * t * out[l - 1] - (lf - 1.0) * out[l - 2]) / lf;
    }
}

/// `Σ_l coeffs[l] P_l(t)` by Clenshaw summation.
pub fn legendre_series(t: f64, coeffs: &[f64]) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for l in (0..coeffs.len()).rev() {
        let lf = l as f64;
        let alpha = (2.0 * lf + 1.0) / (lf + 1.0) * t;
        let beta = -(lf + 1.0) / (lf + 2.0);
        let b0 = coeffs[l] + alpha * b1 + beta * b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

/// Index of `(l, m)` in a triangular table with `0 <= m <= l`.
#[inline]
pub fn lm_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormal associated Legendre functions without Condon–Shortley phase.
///
/// Writes `N_lm P_l^m(cos θ)` into `out[lm_index(l, m)]` for `0 <= m <= l <= lmax`,
/// where `N_lm² = (2l+1)/(4π) · (l-m)!/(l+m)!`, so that
/// `N_lm P_l^m(cos θ) e^{imφ}` is an orthonormal spherical harmonic.
pub fn normalized_assoc_legendre(cos_theta: f64, sin_theta: f64, lmax: usize, out: &mut [f64]) {
    debug_assert!(out.len() > lm_index(lmax, lmax));
    let x = cos_theta;
    let mut pmm = (0.25 / PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_theta;
        }
        out[lm_index(m, m)] = pmm;
        if m == lmax {
            break;
        }
        let mf = m as f64;
        let mut p_prev = pmm;
        let mut p_cur = (2.0 * mf + 3.0).sqrt() * x * pmm;
        out[lm_index(m + 1, m)] = p_cur;
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let p_next = a * (x * p_cur - b * p_prev);
            out[lm_index(l, m)] = p_next;
            p_prev = p_cur;
            p_cur = p_next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 8, 16, 33] {
            let rule = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn nodes_are_ascending_and_symmetric() {
        let rule = gauss_legendre(9);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..9 {
            assert!((rule.nodes[i] + rule.nodes[8 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn composite_rule_matches_interval_length() {
        let rule = composite_gauss_legendre(0.0, 40.0, 50, 8);
        assert_eq!(rule.len(), 400);
        assert!((rule.weights.iter().sum::<f64>() - 40.0).abs() < 1e-12);
        assert!((rule.integrate(|x| (0.3 * x).cos()) - (12.0f64).sin() / 0.3).abs() < 1e-12);
    }

    #[test]
    fn clenshaw_matches_recurrence() {
        let coeffs: Vec<f64> = (0..12).map(|l| 1.0 / (l as f64 + 1.0)).collect();
        let mut p = vec![0.0; 12];
        for &t in &[-1.0, -0.3, 0.0, 0.77, 1.0] {
            legendre_values(t, &mut p);
            let direct: f64 = p.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
            assert!((legendre_series(t, &coeffs) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn associated_legendre_satisfies_addition_theorem() {
        // Σ_m |Y_lm|² = (2l+1)/(4π) for every direction.
        let lmax = 10;
        let mut p = vec![0.0; lm_index(lmax, lmax) + 1];
        for &theta in &[0.0, 0.4, 1.3, 2.9] {
            let (s, c) = f64::sin_cos(theta);
            normalized_assoc_legendre(c, s, lmax, &mut p);
            for l in 0..=lmax {
                let mut sum = p[lm_index(l, 0)].powi(2);
                for m in 1..=l {
                    sum += 2.0 * p[lm_index(l, m)].powi(2);
                }
                assert!((sum - (2 * l + 1) as f64 / (4.0 * PI)).abs() < 1e-12);
            }
        }
    }
}
