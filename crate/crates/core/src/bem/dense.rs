//! Dense complex LU through the system LAPACK.

use std::os::raw::{c_char, c_int};

use lapack_sys::{__BindgenComplex, zgecon_, zgetrf_, zgetrs_, zlange_};
use num_complex::Complex64;

#[link(name = "openblas")]
extern "C" {}

/// Square column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_column_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "column-major data has the wrong length");
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.n + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.n + i] = v;
    }

    pub fn columns_mut(&mut self) -> std::slice::ChunksMut<'_, Complex64> {
        self.data.chunks_mut(self.n.max(1))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (col, &xj) in self.data.chunks(self.n.max(1)).zip(x) {
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (yi, &a) in y.iter_mut().zip(col) {
                *yi += a * xj;
            }
        }
        y
    }

    pub fn norm_one(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// LU factors with partial pivoting and a 1-norm condition estimate.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<c_int>,
    condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularFactor {
    /// Zero-based index of the vanishing pivot.
    pub pivot: usize,
}

fn as_lapack(p: *const Complex64) -> *const __BindgenComplex<f64> {
    p.cast()
}

fn as_lapack_mut(p: *mut Complex64) -> *mut __BindgenComplex<f64> {
    p.cast()
}

impl LuFactors {
    pub fn new(matrix: &DenseMatrix) -> std::result::Result<Self, SingularFactor> {
        let n = matrix.n;
        let mut lu = matrix.data.clone();
        let mut pivots = vec![0 as c_int; n];
        if n == 0 {
            return Ok(Self {
                n,
                lu,
                pivots,
                condition: 1.0,
            });
        }
        let ni = n as c_int;
        let norm_char = b'1' as c_char;
        let mut info: c_int = 0;
        let mut rwork = vec![0.0f64; 2 * n];
        // SAFETY: all buffers hold n×n or n entries as LAPACK requires;
        // Complex64 is repr(C) with the same layout as the binding's complex.
        let anorm = unsafe { zlange_(&norm_char, &ni, &ni, as_lapack(lu.as_ptr()), &ni, rwork.as_mut_ptr()) };
        unsafe {
            zgetrf_(
                &ni,
                &ni,
                as_lapack_mut(lu.as_mut_ptr()),
                &ni,
                pivots.as_mut_ptr(),
                &mut info,
            )
        };
        if info > 0 {
            return Err(SingularFactor {
                pivot: info as usize - 1,
            });
        }
        assert_eq!(info, 0, "zgetrf rejected its arguments");
        let mut rcond = 0.0f64;
        let mut work = vec![Complex64::new(0.0, 0.0); 2 * n];
        unsafe {
            zgecon_(
                &norm_char,
                &ni,
                as_lapack(lu.as_ptr()),
                &ni,
                &anorm,
                &mut rcond,
                as_lapack_mut(work.as_mut_ptr()),
                rwork.as_mut_ptr(),
                &mut info,
            )
        };
        let condition = if rcond > 0.0 { 1.0 / rcond } else { f64::INFINITY };
        Ok(Self {
            n,
            lu,
            pivots,
            condition,
        })
    }

    /// Estimated `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(rhs.len(), self.n);
        let mut x = rhs.to_vec();
        if self.n == 0 {
            return x;
        }
        let ni = self.n as c_int;
        let one: c_int = 1;
        let trans = b'N' as c_char;
        let mut info: c_int = 0;
        // SAFETY: factors and pivots come from zgetrf on an n×n matrix.
        unsafe {
            zgetrs_(
                &trans,
                &ni,
                &one,
                as_lapack(self.lu.as_ptr()),
                &ni,
                self.pivots.as_ptr(),
                as_lapack_mut(x.as_mut_ptr()),
                &ni,
                &mut info,
            )
        };
        assert_eq!(info, 0, "zgetrs rejected its arguments");
        x
    }
}
