//! Dense complex matrix kernel for small dimensions (2x2 through 8x8):
//! arithmetic, Kronecker product, partial trace, and a cyclic-Jacobi
//! Hermitian eigensolver.

use num_complex::Complex;
use thiserror::Error;

use crate::{real, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |M - M'| = {deviation:e} exceeds tol {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

/// Which subsystem of a two-qubit state to keep under the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a square matrix from row-major real/imaginary pairs.
    pub fn from_parts(n: usize, entries: &[(f64, f64)]) -> Self {
        assert_eq!(entries.len(), n * n);
        Self::from_fn(n, n, |i, j| {
            let (re, im) = entries[i * n + j];
            Complex::new(real(re), real(im))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * factor)
    }

    pub fn scale_re(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square());
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            t = t + self[(i, i)];
        }
        t
    }

    /// Largest elementwise modulus of the difference `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m = m.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for v in &self.data {
            m = m.max(v.norm());
        }
        m
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Hermitian within `tol`, unit trace within `tol`, eigenvalues >= -tol.
    pub fn is_density(&self, tol: T) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let one = Complex::new(T::one(), T::zero());
        if (self.trace() - one).norm() > tol {
            return false;
        }
        match hermitian_eigen(self, tol) {
            Ok(eig) => eig.eigenvalues.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_parts(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
}

pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_parts(2, &[(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)])
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_parts(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)])
}

pub fn paulis<T: Real>() -> [ComplexMatrix<T>; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Kronecker product; block (i, j) of the result is `a[i,j] * b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Partial trace of a 4x4 two-qubit operator, keeping the chosen subsystem.
pub fn partial_trace<T: Real>(
    rho: &ComplexMatrix<T>,
    keep: Subsystem,
) -> Result<ComplexMatrix<T>, LinalgError> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(LinalgError::DimensionMismatch {
            context: format!("partial_trace expects 4x4, got {}x{}", rho.rows(), rho.cols()),
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex::new(T::zero(), T::zero());
            for k in 0..2 {
                s = s + match keep {
                    Subsystem::A => rho[(2 * i + k, 2 * j + k)],
                    Subsystem::B => rho[(2 * k + i, 2 * k + j)],
                };
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// `Tr[a b]` without forming the product matrix.
pub fn trace_product<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<Complex<T>, LinalgError> {
    if a.cols() != b.rows() || a.rows() != b.cols() {
        return Err(LinalgError::DimensionMismatch {
            context: format!(
                "trace_product needs a {}x{} against {}x{} with a square product",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ),
        });
    }
    let mut t = Complex::new(T::zero(), T::zero());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            t = t + a[(i, j)] * b[(j, i)];
        }
    }
    Ok(t)
}

/// Eigenvalues (ascending) with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

const MAX_SWEEPS: usize = 60;

/// Cyclic Jacobi diagonalization of a Hermitian matrix (dim <= 8).
///
/// Each pivot (p, q) is reduced to the real symmetric case by factoring out
/// the phase of `a_pq`, then rotated away with the classic Jacobi angle.
/// Pivots are visited in a fixed order, so the result is deterministic.
pub fn hermitian_eigen<T: Real>(
    h: &ComplexMatrix<T>,
    tol: T,
) -> Result<EigenDecomposition<T>, LinalgError> {
    if !h.is_square() || h.rows() > 8 {
        return Err(LinalgError::DimensionMismatch {
            context: format!("hermitian_eigen expects square dim <= 8, got {}x{}", h.rows(), h.cols()),
        });
    }
    let deviation = h.max_abs_diff(&h.dagger());
    if deviation > tol {
        return Err(LinalgError::NotHermitian {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let n = h.rows();
    // Work on the exactly-Hermitian part so rounding in the input cannot
    // leak through the rotations.
    let mut a = h.add(&h.dagger()).scale_re(real(0.5));
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.max_abs().max(T::one());
    let stop = scale * T::epsilon() * real((n * n) as f64);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gn = g.norm();
                if gn <= scale * T::epsilon() {
                    continue;
                }
                let phase = g / Complex::new(gn, T::zero());
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (gn + gn);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // Unitary R = D * J with D = diag(1, conj(phase)) on (p, q):
                // R_pp = c, R_pq = s, R_qp = -conj(phase) s, R_qq = conj(phase) c.
                let rpp = Complex::new(c, T::zero());
                let rpq = Complex::new(s, T::zero());
                let rqp = -phase.conj() * s;
                let rqq = phase.conj() * c;

                // A <- R' A R, applied as column then row updates.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * rpp + aiq * rqp;
                    a[(i, q)] = aip * rpq + aiq * rqq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = rpp.conj() * apj + rqp.conj() * aqj;
                    a[(q, j)] = rpq.conj() * apj + rqq.conj() * aqj;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * rpp + viq * rqp;
                    v[(i, q)] = vip * rpq + viq * rqq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > stop {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let mut s = T::zero();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

impl<T: Real> EigenDecomposition<T> {
    /// `V diag(lambda) V'`, for reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let mut lam = ComplexMatrix::zeros(n, n);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            lam[(i, i)] = Complex::new(l, T::zero());
        }
        self.eigenvectors
            .matmul(&lam)
            .matmul(&self.eigenvectors.dagger())
    }
}
