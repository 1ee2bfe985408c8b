//! Nyström discretisation of `φ ↦ ∫_Γ e^{−s|x−y|} / (4π|x−y|) φ(y) dΓ_y`.
//!
//! The kernel is split as
//! `e^{−sR}/(4πR) = (1/4π)(1/R + s²R/2 + s⁴R³/24) + k_s(R)`,
//! where `k_s` is continuous with bounded fifth derivatives and is summed with
//! plain product weights. The three frequency-independent pieces are
//! integrated once per grid: with `R̃ = √(r_i r_j)|ŝ_i − ŝ_j|` each power of
//! `R̃` is a zonal kernel on S² whose action on spherical harmonics is exact
//! (Funk–Hecke), and the remainders `R − R̃`, `R³ − R̃³` are bounded. The
//! remainder `1/R − 1/R̃` is bounded but direction-dependent at the diagonal;
//! it is integrated on a geodesic polar patch around each node, with a smooth
//! partition of unity handing off to product weights away from it.
//!
//! Densities are resolved by hyperinterpolation up to degree
//! `L = min(n_θ − 1, (n_φ − 1)/2)`; this spans fewer functions than there are
//! nodes, so each zonal operator acts on the complement by its eigenvalue at
//! degree `L + 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, sub, tangent_frame, CutoffFunction, Point, SurfaceGrid};
use crate::quadrature::{gauss_legendre_on, legendre_values, lm_index, normalized_assoc_legendre};

const POLAR_RADIAL: usize = 8;
const POLAR_ANGULAR: usize = 16;
const FOUR_PI: f64 = 4.0 * PI;

/// Frequency-independent part of the single-layer operator on one grid.
///
/// All stored matrices are at unit scale and column-major; assembly at scale
/// ε multiplies them by the appropriate power of ε.
#[derive(Debug, Clone)]
pub struct SingleLayerOperator {
    grid: SurfaceGrid,
    /// Surface points `center + r(ŝ) ŝ` at unit scale.
    points: Vec<Point>,
    /// Unit-scale area weights.
    weights: Vec<f64>,
    inv_r: Vec<f64>,
    lin_r: Vec<f64>,
    cub_r: Vec<f64>,
}

/// Single-layer Nyström matrix at one complex frequency.
#[derive(Debug, Clone)]
pub struct SingleLayerMatrix {
    pub(crate) s: Complex64,
    pub(crate) epsilon: f64,
    pub(crate) matrix: DenseMatrix,
}

impl SingleLayerMatrix {
    pub fn frequency(&self) -> Complex64 {
        self.s
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn dense(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.matvec(x)
    }
}

/// `λ^p_l = 2π ∫_{-1}^{1} (2 − 2t)^{p/2} P_l(t) dt`: the Funk–Hecke
/// eigenvalues of `|ŝ − ŝ'|^p`.
pub fn funk_hecke_eigenvalues(p: i32, lmax: usize) -> Vec<f64> {
    // t = 1 − 2u² turns the integrand into a polynomial in u.
    let rule = gauss_legendre_on(lmax + (p.max(0) as usize) / 2 + 3, 0.0, 1.0);
    let mut out = vec![0.0; lmax + 1];
    let mut pl = vec![0.0; lmax + 1];
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        legendre_values(1.0 - 2.0 * u * u, &mut pl);
        let f = (2.0 * u).powi(p) * 4.0 * u * w;
        for (o, &v) in out.iter_mut().zip(&pl) {
            *o += 2.0 * PI * f * v;
        }
    }
    out
}

/// `k_s(R)`: the single-layer kernel minus its `1/R`, `R` and `R³` terms.
#[inline]
pub(crate) fn smooth_kernel(s: Complex64, r: f64) -> Complex64 {
    let z = s * r;
    if z.norm() < 1.0 {
        // s Σ_{n ≥ 1, n ≠ 2, 4} (−1)^n z^{n−1} / n!
        let mut sum = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for n in 1..=18u32 {
            fact *= n as f64;
            if n != 2 && n != 4 {
                let term = power / fact;
                sum += if n % 2 == 1 { -term } else { term };
            }
            power *= z;
        }
        s * sum / FOUR_PI
    } else {
        let z2 = z * z;
        ((-z).exp() - 1.0 - z2 * 0.5 - z2 * z2 / 24.0) / (FOUR_PI * r)
    }
}

/// The full single-layer kernel `e^{−sR}/(4πR)`.
#[inline]
pub fn helmholtz_kernel(s: Complex64, r: f64) -> Complex64 {
    (-s * r).exp() / (FOUR_PI * r)
}

/// Partition-of-unity scale on S² for a given polar resolution.
fn patch_radius(n_theta: usize) -> f64 {
    (6.0 * PI / n_theta as f64).min(2.5)
}

fn hyperinterpolation_degree(grid: &SurfaceGrid) -> usize {
    (grid.n_theta - 1).min((grid.n_phi - 1) / 2)
}

impl SingleLayerOperator {
    pub fn new(grid: &SurfaceGrid) -> Result<Self> {
        let n = grid.len();
        let center = grid.shape.center();
        let points: Vec<Point> = grid
            .directions
            .iter()
            .zip(&grid.radii)
            .map(|(d, &r)| [center[0] + r * d[0], center[1] + r * d[1], center[2] + r * d[2]])
            .collect();
        let weights: Vec<f64> = grid
            .angular_weights
            .iter()
            .zip(&grid.jacobians)
            .map(|(a, j)| a * j)
            .collect();
        let lmax = hyperinterpolation_degree(grid);
        let lam1 = funk_hecke_eigenvalues(1, lmax + 1);
        let lam3 = funk_hecke_eigenvalues(3, lmax + 1);
        // Grid functions outside the degree-lmax span are mapped with the
        // first unresolved eigenvalue, keeping each zonal operator invertible.
        let mu0 = 1.0 / (2 * lmax + 3) as f64;
        let mu1 = lam1[lmax + 1] / FOUR_PI;
        let mu3 = lam3[lmax + 1] / FOUR_PI;
        let cp: Vec<f64> = (0..=lmax).map(|l| (2 * l + 1) as f64 / FOUR_PI).collect();
        let c0 = vec![1.0 / FOUR_PI; lmax + 1];
        let c1: Vec<f64> = (0..=lmax)
            .map(|l| lam1[l] * (2 * l + 1) as f64 / (FOUR_PI * FOUR_PI))
            .collect();
        let c3: Vec<f64> = (0..=lmax)
            .map(|l| lam3[l] * (2 * l + 1) as f64 / (FOUR_PI * FOUR_PI))
            .collect();
        let smooth_shape = grid.shape.is_sphere();
        let cutoff = CutoffFunction::new(0.5 * patch_radius(grid.n_theta));

        let mut inv_r = vec![0.0; n * n];
        let mut lin_r = vec![0.0; n * n];
        let mut cub_r = vec![0.0; n * n];
        let degenerate = std::sync::Mutex::new(None);
        inv_r
            .par_chunks_mut(n)
            .zip(lin_r.par_chunks_mut(n))
            .zip(cub_r.par_chunks_mut(n))
            .enumerate()
            .for_each(|(j, ((col0, col1), col3))| {
                let mut pl = vec![0.0; lmax + 1];
                let sj = &grid.directions[j];
                let rj = grid.radii[j];
                let wj = weights[j];
                let jj = grid.jacobians[j];
                for i in 0..n {
                    let si = &grid.directions[i];
                    let ri = grid.radii[i];
                    let t = dot(si, sj).clamp(-1.0, 1.0);
                    legendre_values(t, &mut pl);
                    let (mut s0, mut s1, mut s3, mut sp) = (0.0, 0.0, 0.0, 0.0);
                    for l in 0..=lmax {
                        s0 += c0[l] * pl[l];
                        s1 += c1[l] * pl[l];
                        s3 += c3[l] * pl[l];
                        sp += cp[l] * pl[l];
                    }
                    // (I − P) applied to J φ, with P the hyperinterpolation projector.
                    let rest = if i == j { jj } else { 0.0 } - wj * sp;
                    let g = (ri * rj).sqrt();
                    col0[i] = (wj * s0 + mu0 * rest) / g;
                    col1[i] = (wj * s1 + mu1 * rest) * g;
                    col3[i] = (wj * s3 + mu3 * rest) * g * g * g;
                    if i == j {
                        continue;
                    }
                    let r = norm(&sub(&points[i], &points[j]));
                    let d = norm(&sub(si, sj));
                    if r <= 1e-14 || d <= 1e-14 {
                        degenerate.lock().unwrap().get_or_insert((i.min(j), i.max(j)));
                        continue;
                    }
                    let rt = g * d;
                    col1[i] += wj * (r - rt) / FOUR_PI;
                    col3[i] += wj * (r * r * r - rt * rt * rt) / FOUR_PI;
                    if !smooth_shape {
                        let rho = t.acos();
                        col0[i] += wj * (1.0 / r - 1.0 / rt) / FOUR_PI * (1.0 - cutoff.at_radius(rho));
                    }
                }
            });
        if let Some((i, j)) = degenerate.into_inner().unwrap() {
            return Err(Error::DegenerateGrid(i, j));
        }
        let mut op = Self {
            grid: grid.clone(),
            points,
            weights,
            inv_r,
            lin_r,
            cub_r,
        };
        if !smooth_shape {
            op.add_polar_correction(lmax, &cutoff);
        }
        Ok(op)
    }

    /// Near part of `∫ (1/R − 1/R̃)/(4π) φ dΓ` on geodesic polar patches.
    ///
    /// The density at patch nodes is the degree-`lmax` hyperinterpolant of its
    /// grid values, applied through the separable transform
    /// `E_lm = Σ_q c_q P̃_l^m(x_q) e^{imφ_q}`, `D_m(p) = Σ_l P̃_l^m(x_p) E_lm`.
    fn add_polar_correction(&mut self, lmax: usize, cutoff: &CutoffFunction) {
        let grid = &self.grid;
        let n = grid.len();
        let (n_theta, n_phi) = (grid.n_theta, grid.n_phi);
        let n_lm = lm_index(lmax, lmax) + 1;
        let ring_plm: Vec<Vec<f64>> = grid
            .cos_theta
            .iter()
            .map(|&x| {
                let mut out = vec![0.0; n_lm];
                normalized_assoc_legendre(x, (1.0 - x * x).max(0.0).sqrt(), lmax, &mut out);
                out
            })
            .collect();
        let dphi = 2.0 * PI / n_phi as f64;
        // twiddle[k][m] = e^{−imφ_k}
        let twiddle: Vec<Vec<Complex64>> = (0..n_phi)
            .map(|k| {
                (0..=lmax)
                    .map(|m| Complex64::from_polar(1.0, -(m as f64) * dphi * k as f64))
                    .collect()
            })
            .collect();
        let radial = gauss_legendre_on(POLAR_RADIAL, 0.0, patch_radius(n_theta));
        let dalpha = 2.0 * PI / POLAR_ANGULAR as f64;
        let shape = grid.shape.clone();

        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let si = grid.directions[i];
                let ri = grid.radii[i];
                let (e1, e2) = tangent_frame(&si);
                let mut e_lm = vec![Complex64::new(0.0, 0.0); n_lm];
                let mut plm = vec![0.0; n_lm];
                for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
                    let (sr, cr) = rho.sin_cos();
                    let eta = cutoff.at_radius(rho);
                    for k in 0..POLAR_ANGULAR {
                        let alpha = dalpha * (k as f64 + 0.5);
                        let (sa, ca) = alpha.sin_cos();
                        let sq = [
                            cr * si[0] + sr * (ca * e1[0] + sa * e2[0]),
                            cr * si[1] + sr * (ca * e1[1] + sa * e2[1]),
                            cr * si[2] + sr * (ca * e1[2] + sa * e2[2]),
                        ];
                        let smp = shape.sample(&sq);
                        let r = norm(&sub(&smp.point, &self.points[i]));
                        let rt = (ri * smp.radius).sqrt() * 2.0 * (0.5 * rho).sin();
                        let c = wr * sr * dalpha * eta * smp.jacobian * (1.0 / r - 1.0 / rt) / FOUR_PI;
                        let x = sq[2].clamp(-1.0, 1.0);
                        let st = (sq[0] * sq[0] + sq[1] * sq[1]).sqrt();
                        let phi = sq[1].atan2(sq[0]);
                        normalized_assoc_legendre(x, st, lmax, &mut plm);
                        for m in 0..=lmax {
                            let e = Complex64::from_polar(c, m as f64 * phi);
                            for l in m..=lmax {
                                e_lm[lm_index(l, m)] += e * plm[lm_index(l, m)];
                            }
                        }
                    }
                }
                let mut row = vec![0.0; n];
                let mut d_m = vec![Complex64::new(0.0, 0.0); lmax + 1];
                for p in 0..n_theta {
                    let pl = &ring_plm[p];
                    for (m, dm) in d_m.iter_mut().enumerate() {
                        *dm = (m..=lmax).map(|l| e_lm[lm_index(l, m)] * pl[lm_index(l, m)]).sum();
                    }
                    for k in 0..n_phi {
                        let j = p * n_phi + k;
                        let tw = &twiddle[k];
                        let mut v = d_m[0].re;
                        for m in 1..=lmax {
                            v += 2.0 * (tw[m] * d_m[m]).re;
                        }
                        row[j] = grid.angular_weights[j] * v;
                    }
                }
                row
            })
            .collect();
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                self.inv_r[j * n + i] += v;
            }
        }
    }

    pub fn grid(&self) -> &SurfaceGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// The Nyström matrix at frequency `s` on the grid's own scale.
    pub fn assemble(&self, s: Complex64) -> SingleLayerMatrix {
        let n = self.len();
        let eps = self.grid.epsilon;
        let a0 = eps;
        let a1 = s * s * (0.5 * eps.powi(3));
        let a3 = s * s * s * s * (eps.powi(5) / 24.0);
        let mut matrix = DenseMatrix::zeros(n);
        matrix.columns_mut().enumerate().par_bridge().for_each(|(j, col)| {
            let wj = eps * eps * self.weights[j];
            let pj = &self.points[j];
            for (i, out) in col.iter_mut().enumerate() {
                let idx = j * n + i;
                let smooth = if i == j {
                    -s / FOUR_PI
                } else {
                    smooth_kernel(s, eps * norm(&sub(&self.points[i], pj)))
                };
                *out = a1 * self.lin_r[idx] + a3 * self.cub_r[idx] + a0 * self.inv_r[idx] + smooth * wj;
            }
        });
        SingleLayerMatrix {
            s,
            epsilon: eps,
            matrix,
        }
    }

    /// The static matrix entries `(𝕊₀)_{ij}` at the grid's scale.
    pub fn static_entry(&self, i: usize, j: usize) -> f64 {
        self.grid.epsilon * self.inv_r[j * self.len() + i]
    }
}

/// Assemble the Nyström single-layer matrix at frequency `s`.
pub fn assemble_single_layer(grid: &SurfaceGrid, s: Complex64) -> Result<SingleLayerMatrix> {
    Ok(SingleLayerOperator::new(grid)?.assemble(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_surface_grid, direction, StarShape};
    use crate::quadrature::legendre_series;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn funk_hecke_of_inverse_distance() {
        // 1/|ŝ − ŝ'| has eigenvalues 4π/(2l+1).
        let lam = funk_hecke_eigenvalues(-1, 12);
        for (l, v) in lam.iter().enumerate() {
            assert!((v - FOUR_PI / (2 * l + 1) as f64).abs() < 1e-12, "l={l}");
        }
    }

    #[test]
    fn funk_hecke_of_distance_matches_quadrature() {
        let lam = funk_hecke_eigenvalues(1, 6);
        let rule = gauss_legendre_on(400, -1.0, 1.0);
        for l in 0..=6 {
            let direct = rule.integrate(|t| {
                let mut v = vec![0.0; 7];
                legendre_values(t, &mut v);
                2.0 * PI * (2.0 - 2.0 * t).sqrt() * v[l]
            });
            assert!((lam[l] - direct).abs() < 1e-6, "l={l}");
        }
    }

    #[test]
    fn smooth_kernel_branches_agree() {
        for &s in &[c(0.0, 3.0), c(2.0, 1.0), c(0.7, -0.2)] {
            for &r in &[0.999 / s.norm(), 1.001 / s.norm()] {
                let z = s * r;
                let direct = ((-z).exp() - 1.0 - z * z * 0.5 - z * z * z * z / 24.0) / (FOUR_PI * r);
                assert!((smooth_kernel(s, r) - direct).norm() < 1e-12 * direct.norm().max(1.0));
            }
        }
        assert!((smooth_kernel(c(0.0, 2.0), 1e-12) - c(0.0, -2.0) / FOUR_PI).norm() < 1e-12);
    }

    #[test]
    fn sphere_static_row_sums_are_one() {
        let grid = build_surface_grid(&StarShape::unit_sphere(), 1.0, 12, 24).unwrap();
        let m = assemble_single_layer(&grid, c(0.0, 0.0)).unwrap();
        let ones = vec![c(1.0, 0.0); grid.len()];
        for v in m.apply(&ones) {
            assert!((v - 1.0).norm() < 1e-12, "{v}");
        }
    }

    #[test]
    fn sphere_row_sums_match_the_l0_eigenvalue() {
        // On a sphere of radius ε the constant is an eigenfunction: S(s)1 = (1 − e^{−2sε}) / (2s).
        let eps = 0.3;
        let grid = build_surface_grid(&StarShape::unit_sphere(), eps, 16, 32).unwrap();
        let op = SingleLayerOperator::new(&grid).unwrap();
        for &(s, tol) in &[(c(1.0, 0.0), 1e-10), (c(0.0, 4.0), 1e-9), (c(0.0, 20.0), 2e-5)] {
            let m = op.assemble(s);
            let expected = (1.0 - (-2.0 * s * eps).exp()) / (2.0 * s);
            let got = m.apply(&vec![c(1.0, 0.0); grid.len()]);
            for v in got {
                assert!(
                    (v - expected).norm() < tol * expected.norm(),
                    "s={s}: {v} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn conjugate_frequencies_give_conjugate_matrices() {
        let grid = build_surface_grid(&StarShape::bumpy(), 0.2, 8, 16).unwrap();
        let op = SingleLayerOperator::new(&grid).unwrap();
        let a = op.assemble(c(0.0, 5.0));
        let b = op.assemble(c(0.0, -5.0));
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                assert!((a.entry(i, j) - b.entry(i, j).conj()).norm() <= 1e-15 * a.entry(i, j).norm());
            }
        }
    }

    #[test]
    fn separable_transform_matches_addition_theorem() {
        let grid = build_surface_grid(&StarShape::unit_sphere(), 1.0, 7, 14).unwrap();
        let lmax = hyperinterpolation_degree(&grid);
        let n_lm = lm_index(lmax, lmax) + 1;
        let targets = [direction(0.3, 1.1), direction(-0.8, 4.0), direction(0.95, 2.5)];
        let weights = [0.7, -1.3, 0.4];
        // Direct: Σ_q c_q a_j Σ_l (2l+1)/(4π) P_l(ŝ_q·ŝ_j).
        let coeffs: Vec<f64> = (0..=lmax).map(|l| (2 * l + 1) as f64 / FOUR_PI).collect();
        let mut e_lm = vec![c(0.0, 0.0); n_lm];
        let mut plm = vec![0.0; n_lm];
        for (sq, &cq) in targets.iter().zip(&weights) {
            let x = sq[2];
            normalized_assoc_legendre(x, (1.0 - x * x).sqrt(), lmax, &mut plm);
            let phi = sq[1].atan2(sq[0]);
            for m in 0..=lmax {
                for l in m..=lmax {
                    e_lm[lm_index(l, m)] += Complex64::from_polar(cq, m as f64 * phi) * plm[lm_index(l, m)];
                }
            }
        }
        for j in 0..grid.len() {
            let sj = grid.directions[j];
            let direct: f64 = targets
                .iter()
                .zip(&weights)
                .map(|(sq, &cq)| cq * grid.angular_weights[j] * legendre_series(dot(sq, &sj), &coeffs))
                .sum();
            let x = sj[2];
            normalized_assoc_legendre(x, (1.0 - x * x).sqrt(), lmax, &mut plm);
            let phi = sj[1].atan2(sj[0]);
            let mut v = 0.0;
            for m in 0..=lmax {
                let dm: Complex64 = (m..=lmax).map(|l| e_lm[lm_index(l, m)] * plm[lm_index(l, m)]).sum();
                let f = if m == 0 { 1.0 } else { 2.0 };
                v += f * (Complex64::from_polar(1.0, -(m as f64) * phi) * dm).re;
            }
            v *= grid.angular_weights[j];
            assert!((v - direct).abs() < 1e-12, "j={j}: {v} vs {direct}");
        }
    }

    #[test]
    fn static_operator_is_nearly_self_adjoint() {
        // ⟨f, 𝕊₀ g⟩ = ⟨𝕊₀ f, g⟩ in L²(Γ), up to the correction's quadrature error.
        let grid = build_surface_grid(&StarShape::bumpy(), 1.0, 12, 24).unwrap();
        let op = SingleLayerOperator::new(&grid).unwrap();
        let n = grid.len();
        let f: Vec<f64> = grid.nodes().iter().map(|x| 1.0 + x[0] - 0.5 * x[2] * x[2]).collect();
        let g: Vec<f64> = grid.nodes().iter().map(|x| (2.0 * x[1]).cos() + x[2]).collect();
        let form = |a: &[f64], b: &[f64]| -> f64 {
            (0..n)
                .map(|i| grid.weights()[i] * a[i] * (0..n).map(|j| op.static_entry(i, j) * b[j]).sum::<f64>())
                .sum()
        };
        let (fg, gf) = (form(&f, &g), form(&g, &f));
        assert!((fg - gf).abs() < 1e-5 * fg.abs(), "{fg} vs {gf}");
    }

    #[test]
    fn zero_distance_between_nodes_is_rejected() {
        let grid = build_surface_grid(&StarShape::unit_sphere(), 1.0, 4, 4).unwrap();
        let mut broken = grid.clone();
        broken.directions[1] = broken.directions[0];
        assert!(matches!(
            SingleLayerOperator::new(&broken),
            Err(Error::DegenerateGrid(0, 1))
        ));
    }
}
