//! Projective spin measurements parametrized on the Bloch sphere:
//! projectors, joint outcome probabilities, discordance probabilities,
//! and the complementarity factor of a measurement pair.

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{kron, trace_product, ComplexMatrix};
use crate::states::TwoQubitState;
use crate::{real, Real};

/// Default angular exclusion radius realizing the `S != R` constraint.
pub const DEFAULT_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("direction angles out of range: {context}")]
    InvalidAngles { context: String },
    #[error("incompatible pair: directions are parallel or antiparallel within {eps:e} rad (separation {separation:e} rad)")]
    IncompatiblePair { separation: f64, eps: f64 },
}

/// Unit direction on the Bloch sphere, `theta` in `[0, pi]`, `phi` in `[0, 2pi)`.
///
/// The poles are canonicalized to `phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDirection<T: Real> {
    theta: T,
    phi: T,
}

impl<T: Real> BlochDirection<T> {
    pub fn new(theta: T, phi: T) -> Result<Self, MeasureError> {
        let pi = real::<T>(std::f64::consts::PI);
        let two_pi = pi + pi;
        if !(theta >= T::zero() && theta <= pi) || !(phi >= T::zero() && phi < two_pi) {
            return Err(MeasureError::InvalidAngles {
                context: format!("theta={theta} must be in [0, pi], phi={phi} in [0, 2pi)"),
            });
        }
        Ok(Self::canonical(theta, phi))
    }

    /// Accepts any finite angles, reflecting `theta` into `[0, pi]` and
    /// wrapping `phi` into `[0, 2pi)`.
    pub fn wrapped(mut theta: T, mut phi: T) -> Self {
        let pi = real::<T>(std::f64::consts::PI);
        let two_pi = pi + pi;
        theta = theta % two_pi;
        if theta < T::zero() {
            theta = theta + two_pi;
        }
        if theta > pi {
            theta = two_pi - theta;
            phi = phi + pi;
        }
        phi = phi % two_pi;
        if phi < T::zero() {
            phi = phi + two_pi;
        }
        Self::canonical(theta, phi)
    }

    fn canonical(theta: T, phi: T) -> Self {
        let pi = real::<T>(std::f64::consts::PI);
        if theta == T::zero() || theta == pi {
            Self { theta, phi: T::zero() }
        } else {
            Self { theta, phi }
        }
    }

    pub fn x_axis() -> Self {
        Self::canonical(real(std::f64::consts::FRAC_PI_2), T::zero())
    }

    pub fn y_axis() -> Self {
        Self::canonical(real(std::f64::consts::FRAC_PI_2), real(std::f64::consts::FRAC_PI_2))
    }

    pub fn z_axis() -> Self {
        Self::canonical(T::zero(), T::zero())
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// Cartesian unit vector `(sin t cos p, sin t sin p, cos t)`.
    pub fn unit_vector(&self) -> [T; 3] {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        [st * cp, st * sp, ct]
    }

    pub fn dot(&self, other: &Self) -> T {
        let a = self.unit_vector();
        let b = other.unit_vector();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// Angle between the two directions, in `[0, pi]`.
    pub fn angle_to(&self, other: &Self) -> T {
        self.dot(other).max(-T::one()).min(T::one()).acos()
    }

    /// Angular distance to the closer of `other` and its antipode.
    pub fn axis_distance(&self, other: &Self) -> T {
        let a = self.angle_to(other);
        let pi = real::<T>(std::f64::consts::PI);
        a.min(pi - a)
    }
}

/// A pair of non-parallel measurement directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPair<T: Real> {
    pub r: BlochDirection<T>,
    pub s: BlochDirection<T>,
}

impl<T: Real> MeasurementPair<T> {
    /// Rejects pairs whose directions are parallel or antiparallel within
    /// `eps` radians.
    pub fn new(r: BlochDirection<T>, s: BlochDirection<T>, eps: T) -> Result<Self, MeasureError> {
        let separation = r.axis_distance(&s);
        if separation < eps {
            return Err(MeasureError::IncompatiblePair {
                separation: num_traits::ToPrimitive::to_f64(&separation).unwrap_or(f64::NAN),
                eps: num_traits::ToPrimitive::to_f64(&eps).unwrap_or(f64::NAN),
            });
        }
        Ok(Self { r, s })
    }
}

/// Rank-1 projector `(I + (-1)^outcome n.sigma) / 2`.
pub fn projector<T: Real>(n: &BlochDirection<T>, outcome: u8) -> ComplexMatrix<T> {
    debug_assert!(outcome < 2);
    let [nx, ny, nz] = n.unit_vector();
    let sign = if outcome == 0 { T::one() } else { -T::one() };
    let half = real::<T>(0.5);
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = Complex::new((T::one() + sign * nz) * half, T::zero());
    m[(1, 1)] = Complex::new((T::one() - sign * nz) * half, T::zero());
    m[(0, 1)] = Complex::new(sign * nx * half, -sign * ny * half);
    m[(1, 0)] = Complex::new(sign * nx * half, sign * ny * half);
    m
}

/// `Tr[(A^a x B^b) rho]` for spin projectors along `n_a` and `n_b`.
pub fn joint_probability<T: Real>(
    rho: &TwoQubitState<T>,
    n_a: &BlochDirection<T>,
    a: u8,
    n_b: &BlochDirection<T>,
    b: u8,
) -> T {
    let op = kron(&projector(n_a, a), &projector(n_b, b));
    trace_product(&op, rho.matrix()).expect("4x4 against 4x4").re
}

/// Probability that both parties measure along `n` and obtain different
/// outcomes, evaluated through the joint-probability trace formula.
pub fn discord_probability<T: Real>(rho: &TwoQubitState<T>, n: &BlochDirection<T>) -> T {
    joint_probability(rho, n, 0, n, 1) + joint_probability(rho, n, 1, n, 0)
}

/// Same quantity through the correlation-matrix quadratic form
/// `(1 - n.T_sym.n) / 2`; the fast path used by the sphere optimizer.
pub fn discord_probability_quadratic<T: Real>(t_sym: &[[T; 3]; 3], n: &BlochDirection<T>) -> T {
    let v = n.unit_vector();
    let mut q = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            q = q + v[i] * t_sym[i][j] * v[j];
        }
    }
    (T::one() - q) * real(0.5)
}

/// Complementarity factor `c = (1 + |r.s|) / 2` of two spin observables.
pub fn complementarity<T: Real>(r: &BlochDirection<T>, s: &BlochDirection<T>) -> T {
    (T::one() + r.dot(s).abs()) * real(0.5)
}
