//! Small complex-matrix arithmetic for MIMO link processing.
//!
//! Channel and precoder matrices never exceed 4x4 here, so matrices are
//! stored inline in a fixed-capacity array. Everything is stack-allocated
//! and `Copy`, which keeps the per-TTI link-adaptation loop free of heap
//! traffic.

use num_complex::Complex64;

/// Largest supported matrix dimension (4 antenna ports).
pub const MAX_DIM: usize = 4;

/// A dense row-major complex matrix with dimensions up to 4x4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&rows) && (1..=MAX_DIM).contains(&cols));
        CMat {
            rows,
            cols,
            data: [Complex64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * MAX_DIM + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix by evaluating `f(row, col)` for every entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * MAX_DIM + j] = f(i, j);
            }
        }
        m
    }

    /// Build from nested row slices (test convenience).
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * MAX_DIM + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * MAX_DIM + j] = v;
    }

    /// C = self * rhs.
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix multiply");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.data[i * MAX_DIM + k] * rhs.data[k * MAX_DIM + j];
                }
                out.data[i * MAX_DIM + j] = acc;
            }
        }
        out
    }

    /// C = self^H * rhs, without materializing the conjugate transpose.
    pub fn herm_mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch in herm_mul");
        let mut out = CMat::zeros(self.cols, rhs.cols);
        for i in 0..self.cols {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.rows {
                    acc += self.data[k * MAX_DIM + i].conj() * rhs.data[k * MAX_DIM + j];
                }
                out.data[i * MAX_DIM + j] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    /// Gram matrix self^H * self.
    pub fn gram(&self) -> CMat {
        self.herm_mul(self)
    }

    pub fn scaled(&self, s: f64) -> CMat {
        let mut out = *self;
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= *b;
        }
        out
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self.at(i, j).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Cholesky factor L of a Hermitian positive-definite matrix,
    /// self = L L^H with L lower triangular. Returns `None` when the
    /// matrix is not positive definite.
    pub fn cholesky(&self) -> Option<CMat> {
        assert_eq!(self.rows, self.cols, "Cholesky requires a square matrix");
        let n = self.rows;
        let mut l = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = self.at(i, j);
                for k in 0..j {
                    acc -= l.at(i, k) * l.at(j, k).conj();
                }
                if i == j {
                    let d = acc.re;
                    if d <= 0.0 || acc.im.abs() > 1e-12 * d.max(1.0) {
                        return None;
                    }
                    l.set(i, i, Complex64::new(d.sqrt(), 0.0));
                } else {
                    l.set(i, j, acc / l.at(j, j));
                }
            }
        }
        Some(l)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Returns `None` for singular input. Callers in the SINR path always
    /// pass I + positive-semidefinite, which is safely invertible.
    pub fn invert(&self) -> Option<CMat> {
        assert_eq!(self.rows, self.cols, "inverse requires a square matrix");
        let n = self.rows;
        let mut a = *self;
        let mut inv = CMat::identity(n);

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a.at(col, col).norm_sqr();
            for r in (col + 1)..n {
                let mag = a.at(r, col).norm_sqr();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag < 1e-300 {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.at(col, j);
                    a.set(col, j, a.at(pivot_row, j));
                    a.set(pivot_row, j, tmp);
                    let tmp = inv.at(col, j);
                    inv.set(col, j, inv.at(pivot_row, j));
                    inv.set(pivot_row, j, tmp);
                }
            }
            let pivot_inv = Complex64::new(1.0, 0.0) / a.at(col, col);
            for j in 0..n {
                a.set(col, j, a.at(col, j) * pivot_inv);
                inv.set(col, j, inv.at(col, j) * pivot_inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.at(r, col);
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let va = a.at(r, j) - factor * a.at(col, j);
                    a.set(r, j, va);
                    let vi = inv.at(r, j) - factor * inv.at(col, j);
                    inv.set(r, j, vi);
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_multiply_is_noop() {
        let a = CMat::from_rows(&[&[c(1.0, 2.0), c(3.0, -1.0)], &[c(0.5, 0.0), c(-2.0, 4.0)]]);
        let prod = a.mul(&CMat::identity(2));
        assert!(prod.sub(&a).frob_norm() < 1e-15);
    }

    #[test]
    fn hermitian_transposes_and_conjugates() {
        let a = CMat::from_rows(&[&[c(1.0, 2.0), c(3.0, 4.0)], &[c(5.0, 6.0), c(7.0, 8.0)]]);
        let h = a.hermitian();
        assert_eq!(h.at(0, 1), c(5.0, -6.0));
        assert_eq!(h.at(1, 0), c(3.0, -4.0));
    }

    #[test]
    fn herm_mul_matches_explicit_hermitian() {
        let a = CMat::from_rows(&[&[c(1.0, 1.0), c(2.0, -1.0)], &[c(0.0, 1.0), c(1.0, 1.0)]]);
        let b = CMat::from_rows(&[&[c(0.5, 0.0), c(1.0, 2.0)], &[c(-1.0, 0.0), c(0.0, 3.0)]]);
        let fast = a.herm_mul(&b);
        let slow = a.hermitian().mul(&b);
        assert!(fast.sub(&slow).frob_norm() < 1e-14);
    }

    #[test]
    fn inverse_of_known_real_matrix() {
        let a = CMat::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(3.0, 0.0), c(4.0, 0.0)]]);
        let inv = a.invert().unwrap();
        assert!((inv.at(0, 0).re + 2.0).abs() < 1e-12);
        assert!((inv.at(0, 1).re - 1.0).abs() < 1e-12);
        assert!((inv.at(1, 0).re - 1.5).abs() < 1e-12);
        assert!((inv.at(1, 1).re + 0.5).abs() < 1e-12);
    }

    #[test]
    fn inverse_times_original_is_identity() {
        let a = CMat::from_rows(&[
            &[c(2.0, 1.0), c(0.3, -0.7), c(0.0, 0.5), c(1.0, 0.0)],
            &[c(-1.0, 0.2), c(3.0, 0.0), c(0.4, 0.4), c(0.0, -1.0)],
            &[c(0.1, 0.1), c(0.0, 2.0), c(1.5, -0.5), c(0.7, 0.0)],
            &[c(1.0, -1.0), c(0.2, 0.0), c(0.0, 0.0), c(2.5, 1.5)],
        ]);
        let inv = a.invert().unwrap();
        let prod = a.mul(&inv);
        assert!(prod.sub(&CMat::identity(4)).frob_norm() < 1e-10);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = CMat::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(a.invert().is_none());
    }

    #[test]
    fn cholesky_reconstructs_hermitian_pd() {
        let a = CMat::from_rows(&[
            &[c(4.0, 0.0), c(1.0, -0.5), c(0.2, 0.1)],
            &[c(1.0, 0.5), c(3.0, 0.0), c(0.4, -0.2)],
            &[c(0.2, -0.1), c(0.4, 0.2), c(2.0, 0.0)],
        ]);
        let l = a.cholesky().unwrap();
        let back = l.mul(&l.hermitian());
        assert!(back.sub(&a).frob_norm() < 1e-12);
        // Lower triangular.
        assert_eq!(l.at(0, 1), c(0.0, 0.0));
        assert_eq!(l.at(0, 2), c(0.0, 0.0));
        assert_eq!(l.at(1, 2), c(0.0, 0.0));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMat::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(2.0, 0.0), c(1.0, 0.0)]]);
        assert!(a.cholesky().is_none());
    }
}
