//! Two-qubit state constructors: Bell states, Bell-diagonal mixtures,
//! maximally-mixed-marginal states, Werner states, and seeded random
//! density matrices, plus the Bloch/correlation representation.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::linalg::{kron, partial_trace, paulis, trace_product, ComplexMatrix, Subsystem};
use crate::{real, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("parameter out of range: {context}")]
    ParameterOutOfRange { context: String },
    #[error("unphysical parameters: eigenvalue {value:e} of the Bell-basis spectrum is negative ({which})")]
    UnphysicalParameters { which: String, value: f64 },
    #[error("state spec parse error: {context}")]
    ParseError { context: String },
}

/// Which Bell state to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Validated 4x4 two-qubit density matrix with a construction label.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState<T: Real> {
    matrix: ComplexMatrix<T>,
    label: String,
}

/// Pauli correlation matrix `t[i][j] = Tr[rho (sigma_i x sigma_j)]` and the
/// local Bloch vectors of both qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationData<T: Real> {
    pub t: [[T; 3]; 3],
    pub bloch_a: [T; 3],
    pub bloch_b: [T; 3],
}

impl<T: Real> TwoQubitState<T> {
    /// Wraps a raw matrix, enforcing the density-matrix invariants.
    pub fn new(matrix: ComplexMatrix<T>, label: impl Into<String>) -> Result<Self, StateError> {
        let label = label.into();
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(StateError::ParameterOutOfRange {
                context: format!("state '{label}' is not 4x4"),
            });
        }
        if !matrix.is_density(real(1e-9)) {
            return Err(StateError::ParameterOutOfRange {
                context: format!("state '{label}' is not a density matrix"),
            });
        }
        Ok(Self { matrix, label })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix<T> {
        partial_trace(&self.matrix, keep).expect("state matrix is 4x4")
    }
}

fn ket_density<T: Real>(amps: [Complex<T>; 4]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(4, 4, |i, j| amps[i] * amps[j].conj())
}

pub fn bell<T: Real>(kind: BellKind) -> TwoQubitState<T> {
    let h = real::<T>(0.5).sqrt();
    let z = Complex::new(T::zero(), T::zero());
    let p = Complex::new(h, T::zero());
    let m = Complex::new(-h, T::zero());
    let (amps, label) = match kind {
        BellKind::PhiPlus => ([p, z, z, p], "bell:phi+"),
        BellKind::PhiMinus => ([p, z, z, m], "bell:phi-"),
        BellKind::PsiPlus => ([z, p, p, z], "bell:psi+"),
        BellKind::PsiMinus => ([z, p, m, z], "bell:psi-"),
    };
    TwoQubitState::new(ket_density(amps), label).expect("Bell states are valid densities")
}

/// `p |phi+><phi+| + (1-p) |psi-><psi-|`.
pub fn bell_diagonal_mix<T: Real>(p: T) -> Result<TwoQubitState<T>, StateError> {
    if p < T::zero() || p > T::one() {
        return Err(StateError::ParameterOutOfRange {
            context: format!("belldiag mixing parameter p={p} outside [0, 1]"),
        });
    }
    let phi = bell::<T>(BellKind::PhiPlus);
    let psi = bell::<T>(BellKind::PsiMinus);
    let m = phi
        .matrix()
        .scale_re(p)
        .add(&psi.matrix().scale_re(T::one() - p));
    TwoQubitState::new(m, format!("belldiag:p={p}"))
}

/// Maximally-mixed-marginals state `(I + sum_i c_i sigma_i x sigma_i) / 4`.
///
/// Physicality is checked against the Bell-basis spectrum
/// `{(1-c1-c2-c3)/4, (1-c1+c2+c3)/4, (1+c1-c2+c3)/4, (1+c1+c2-c3)/4}`.
pub fn mmm<T: Real>(c1: T, c2: T, c3: T) -> Result<TwoQubitState<T>, StateError> {
    let quarter = real::<T>(0.25);
    let spectrum = [
        ("(1-c1-c2-c3)/4", (T::one() - c1 - c2 - c3) * quarter),
        ("(1-c1+c2+c3)/4", (T::one() - c1 + c2 + c3) * quarter),
        ("(1+c1-c2+c3)/4", (T::one() + c1 - c2 + c3) * quarter),
        ("(1+c1+c2-c3)/4", (T::one() + c1 + c2 - c3) * quarter),
    ];
    let tol = real::<T>(1e-12);
    for (which, value) in spectrum {
        if value < -tol {
            return Err(StateError::UnphysicalParameters {
                which: which.to_string(),
                value: num_traits::ToPrimitive::to_f64(&value).unwrap_or(f64::NAN),
            });
        }
    }
    let mut m = ComplexMatrix::identity(4);
    for (ci, sigma) in [c1, c2, c3].into_iter().zip(paulis::<T>()) {
        m = m.add(&kron(&sigma, &sigma).scale_re(ci));
    }
    TwoQubitState::new(m.scale_re(quarter), format!("mmm:c1={c1},c2={c2},c3={c3}"))
}

/// Werner state `(1-p)/4 I + p |psi-><psi-|`.
pub fn werner<T: Real>(p: T) -> Result<TwoQubitState<T>, StateError> {
    if p < T::zero() || p > T::one() {
        return Err(StateError::ParameterOutOfRange {
            context: format!("werner parameter p={p} outside [0, 1]"),
        });
    }
    let iso = ComplexMatrix::identity(4).scale_re((T::one() - p) * real(0.25));
    let singlet = bell::<T>(BellKind::PsiMinus).matrix().scale_re(p);
    TwoQubitState::new(iso.add(&singlet), format!("werner:p={p}"))
}

/// Random density matrix `G G' / Tr[G G']` with `G` a 4x4 matrix of standard
/// complex normal entries drawn from ChaCha8 seeded with `seed`.
pub fn random_density<T: Real>(seed: u64) -> TwoQubitState<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::<T>::from_fn(4, 4, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex::new(real(re), real(im))
    });
    let gg = g.matmul(&g.dagger());
    let rho = gg.scale_re(T::one() / gg.trace().re);
    TwoQubitState::new(rho, format!("random:seed={seed}"))
        .expect("G G'/Tr is a valid density matrix")
}

/// Pauli correlation matrix and Bloch vectors of a state.
pub fn correlation_data<T: Real>(rho: &TwoQubitState<T>) -> CorrelationData<T> {
    let sigmas = paulis::<T>();
    let i2 = ComplexMatrix::<T>::identity(2);
    let mut t = [[T::zero(); 3]; 3];
    let mut bloch_a = [T::zero(); 3];
    let mut bloch_b = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = trace_product(&kron(&sigmas[i], &sigmas[j]), rho.matrix())
                .expect("4x4 against 4x4")
                .re;
        }
        bloch_a[i] = trace_product(&kron(&sigmas[i], &i2), rho.matrix())
            .expect("4x4 against 4x4")
            .re;
        bloch_b[i] = trace_product(&kron(&i2, &sigmas[i]), rho.matrix())
            .expect("4x4 against 4x4")
            .re;
    }
    CorrelationData { t, bloch_a, bloch_b }
}

impl<T: Real> CorrelationData<T> {
    /// Symmetrized correlation matrix `(t + t^T) / 2`.
    pub fn t_sym(&self) -> [[T; 3]; 3] {
        let half = real::<T>(0.5);
        std::array::from_fn(|i| std::array::from_fn(|j| (self.t[i][j] + self.t[j][i]) * half))
    }
}

/// Parses the CLI state-specification grammar:
/// `bell:phi+|phi-|psi+|psi-`, `belldiag:p=<real>`,
/// `mmm:c1=<real>,c2=<real>,c3=<real>`, `werner:p=<real>`, `random:seed=<uint>`.
pub fn parse_state_spec<T: Real>(spec: &str) -> Result<TwoQubitState<T>, StateError> {
    let (family, rest) = spec.split_once(':').ok_or_else(|| StateError::ParseError {
        context: format!("missing ':' in state spec '{spec}'"),
    })?;
    match family {
        "bell" => {
            let kind = match rest {
                "phi+" => BellKind::PhiPlus,
                "phi-" => BellKind::PhiMinus,
                "psi+" => BellKind::PsiPlus,
                "psi-" => BellKind::PsiMinus,
                other => {
                    return Err(StateError::ParseError {
                        context: format!("unknown Bell state '{other}'"),
                    })
                }
            };
            Ok(bell(kind))
        }
        "belldiag" => {
            let p = parse_named_real(rest, "p")?;
            bell_diagonal_mix(real(p))
        }
        "mmm" => {
            let mut c = [0.0f64; 3];
            let fields: Vec<&str> = rest.split(',').collect();
            if fields.len() != 3 {
                return Err(StateError::ParseError {
                    context: format!("mmm expects c1=..,c2=..,c3=.., got '{rest}'"),
                });
            }
            for (k, field) in fields.iter().enumerate() {
                c[k] = parse_named_real(field, &format!("c{}", k + 1))?;
            }
            mmm(real(c[0]), real(c[1]), real(c[2]))
        }
        "werner" => {
            let p = parse_named_real(rest, "p")?;
            werner(real(p))
        }
        "random" => {
            let seed = parse_named(rest, "seed")?;
            let seed: u64 = seed.parse().map_err(|_| StateError::ParseError {
                context: format!("invalid seed '{seed}'"),
            })?;
            Ok(random_density(seed))
        }
        other => Err(StateError::ParseError {
            context: format!("unknown state family '{other}'"),
        }),
    }
}

fn parse_named<'a>(field: &'a str, name: &str) -> Result<&'a str, StateError> {
    let (key, value) = field.split_once('=').ok_or_else(|| StateError::ParseError {
        context: format!("expected '{name}=<value>', got '{field}'"),
    })?;
    if key != name {
        return Err(StateError::ParseError {
            context: format!("expected parameter '{name}', got '{key}'"),
        });
    }
    Ok(value)
}

fn parse_named_real(field: &str, name: &str) -> Result<f64, StateError> {
    let value = parse_named(field, name)?;
    value.parse::<f64>().map_err(|_| StateError::ParseError {
        context: format!("invalid number '{value}' for parameter '{name}'"),
    })
}
