//! Shannon and von Neumann entropies (base 2), conditional entropies with
//! quantum memory, and the dephased post-measurement state.

use thiserror::Error;

use crate::linalg::{hermitian_eigen, kron, ComplexMatrix, Subsystem};
use crate::measure::{projector, BlochDirection};
use crate::states::TwoQubitState;
use crate::{real, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("probability {value} outside [0, 1] beyond the 1e-9 clamp")]
    ParameterOutOfRange { value: f64 },
    #[error("matrix is not a density matrix: {context}")]
    NotDensity { context: String },
}

/// An entropy in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue<T: Real> {
    pub bits: T,
}

impl<T: Real> EntropyValue<T> {
    pub fn new(bits: T) -> Self {
        Self { bits }
    }
}

impl<T: Real> std::ops::Add for EntropyValue<T> {
    type Output = EntropyValue<T>;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.bits + rhs.bits)
    }
}

fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Binary Shannon entropy `-p log2 p - (1-p) log2(1-p)`.
///
/// Inputs within `1e-9` of the ends are clamped; anything further out is an
/// error.
pub fn binary_entropy<T: Real>(p: T) -> Result<EntropyValue<T>, EntropyError> {
    let clamp = real::<T>(1e-9);
    if p < -clamp || p > T::one() + clamp {
        return Err(EntropyError::ParameterOutOfRange {
            value: num_traits::ToPrimitive::to_f64(&p).unwrap_or(f64::NAN),
        });
    }
    let p = p.max(T::zero()).min(T::one());
    Ok(EntropyValue::new(-xlog2x(p) - xlog2x(T::one() - p)))
}

/// Von Neumann entropy `-Tr[rho log2 rho]` via the eigenvalue spectrum.
///
/// Eigenvalues in `[-1e-9, 0)` are treated as rounding and clamped to zero;
/// anything more negative is a genuine unphysicality and is rejected.
pub fn von_neumann<T: Real>(rho: &ComplexMatrix<T>) -> Result<EntropyValue<T>, EntropyError> {
    let tol = real::<T>(1e-9);
    let eig = hermitian_eigen(rho, tol).map_err(|e| EntropyError::NotDensity {
        context: e.to_string(),
    })?;
    let one = num_complex::Complex::new(T::one(), T::zero());
    if (rho.trace() - one).norm() > tol {
        return Err(EntropyError::NotDensity {
            context: format!("trace {} is not 1", rho.trace().re),
        });
    }
    let mut bits = T::zero();
    for &lam in &eig.eigenvalues {
        if lam < -tol {
            return Err(EntropyError::NotDensity {
                context: format!("negative eigenvalue {lam}"),
            });
        }
        bits = bits - xlog2x(lam.max(T::zero()).min(T::one()));
    }
    Ok(EntropyValue::new(bits))
}

/// Conditional entropy `S(A|B) = S(rho_AB) - S(rho_B)`.
pub fn cond_entropy_ab<T: Real>(rho: &TwoQubitState<T>) -> Result<EntropyValue<T>, EntropyError> {
    let joint = von_neumann(rho.matrix())?;
    let marginal = von_neumann(&rho.marginal(Subsystem::B))?;
    Ok(EntropyValue::new(joint.bits - marginal.bits))
}

/// Dephases Alice's qubit along `n`:
/// `sum_j (P_j x I) rho (P_j x I)`.
pub fn post_measurement<T: Real>(rho: &TwoQubitState<T>, n: &BlochDirection<T>) -> TwoQubitState<T> {
    let i2 = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(4, 4);
    for outcome in 0..2u8 {
        let pj = kron(&projector(n, outcome), &i2);
        out = out.add(&pj.matmul(rho.matrix()).matmul(&pj));
    }
    TwoQubitState::new(out, format!("{}|dephased", rho.label()))
        .expect("dephasing preserves the density property")
}

/// `S(R|B)`: conditional entropy of the dephased state, the uncertainty of
/// the measurement along `n` given the quantum memory.
pub fn measured_cond_entropy<T: Real>(
    rho: &TwoQubitState<T>,
    n: &BlochDirection<T>,
) -> Result<EntropyValue<T>, EntropyError> {
    cond_entropy_ab(&post_measurement(rho, n))
}
