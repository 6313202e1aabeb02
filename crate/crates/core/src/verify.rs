//! Seeded property suites over random states and settings, used by the
//! `verify` CLI command. Every suite re-derives its inputs from the given
//! seed, so a reported failure is reproducible from the seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{berta_rhs, extremal_discord_with_grid, fine_grained_bound_with_grid, pair_uncertainty};

/// Coarser scan grid for the repeated property trials; the pattern-search
/// refinement still converges to the same sub-1e-7 angular resolution.
const VERIFY_GRID: (usize, usize) = (31, 60);
use crate::entropy::{binary_entropy, cond_entropy_ab, measured_cond_entropy, von_neumann};
use crate::linalg::{
    hermitian_eigen, kron, partial_trace, trace_product, ComplexMatrix, Subsystem,
};
use crate::measure::{
    complementarity, discord_probability, discord_probability_quadratic, joint_probability,
    BlochDirection, MeasurementPair, DEFAULT_EXCLUSION,
};
use crate::states::{correlation_data, mmm, random_density, TwoQubitState};
use num_complex::Complex;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Seed and values of the first violating trial, if any.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(msg) => {
                self.failed += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(msg);
                }
            }
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng) -> BlochDirection<f64> {
    let theta = (1.0f64 - 2.0 * rng.gen::<f64>()).acos();
    let phi = rng.gen::<f64>() * 2.0 * PI;
    BlochDirection::new(theta, phi).expect("sampled angles are in range")
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
    let g = ComplexMatrix::from_fn(4, 4, |_, _| {
        Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    g.add(&g.dagger()).scale_re(0.5)
}

/// Runs every suite for `trials` iterations derived from `seed`.
pub fn run_all(trials: usize, seed: u64) -> Vec<SuiteResult> {
    vec![
        eigen_suite(trials, seed),
        linalg_suite(trials, seed),
        state_suite(trials, seed),
        measurement_suite(trials, seed),
        entropy_suite(trials, seed),
        bound_suite(trials, seed),
        optimizer_suite(trials, seed),
    ]
}

fn eigen_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("eigen-reconstruction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let h = random_hermitian(&mut rng);
        out.record(match hermitian_eigen(&h, 1e-12) {
            Ok(eig) => {
                let residual = h.max_abs_diff(&eig.reconstruct());
                let gram = eig.eigenvectors.dagger().matmul(&eig.eigenvectors);
                let ortho = gram.max_abs_diff(&ComplexMatrix::identity(4));
                if residual <= 1e-10 && ortho <= 1e-10 {
                    Ok(())
                } else {
                    Err(format!(
                        "seed {seed} trial {trial}: residual {residual:e}, orthonormality {ortho:e}"
                    ))
                }
            }
            Err(e) => Err(format!("seed {seed} trial {trial}: {e}")),
        });
    }
    out
}

fn linalg_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("linalg-identities");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for trial in 0..trials {
        let a = random_hermitian(&mut rng);
        let b = random_hermitian(&mut rng);
        let cyc = (trace_product(&a, &b).unwrap() - trace_product(&b, &a).unwrap()).norm();
        let ra = partial_trace(&a, Subsystem::A).unwrap();
        let kr = kron(&ra, &ComplexMatrix::identity(2));
        let tr_ok = (kr.trace().re - 2.0 * a.trace().re).abs();
        out.record(if cyc <= 1e-12 && tr_ok <= 1e-12 {
            Ok(())
        } else {
            Err(format!("seed {seed} trial {trial}: cyclicity {cyc:e}, kron trace {tr_ok:e}"))
        });
    }
    out
}

fn state_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("state-validity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    for trial in 0..trials {
        let state_seed: u64 = rng.gen();
        let rho = random_density::<f64>(state_seed);
        let eig = hermitian_eigen(rho.matrix(), 1e-9).unwrap();
        let min_eig = eig.eigenvalues[0];
        let tr = (rho.matrix().trace().re - 1.0).abs();
        out.record(if min_eig >= -1e-12 && tr <= 1e-12 {
            Ok(())
        } else {
            Err(format!(
                "seed {seed} trial {trial} (state seed {state_seed}): min eigenvalue {min_eig:e}, trace error {tr:e}"
            ))
        });
    }
    out
}

fn measurement_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("measurement-distribution");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    for trial in 0..trials {
        let state_seed: u64 = rng.gen();
        let rho = random_density::<f64>(state_seed);
        let na = random_direction(&mut rng);
        let nb = random_direction(&mut rng);
        let mut sum = 0.0;
        let mut min_p = f64::INFINITY;
        for a in 0..2u8 {
            for b in 0..2u8 {
                let p = joint_probability(&rho, &na, a, &nb, b);
                sum += p;
                min_p = min_p.min(p);
            }
        }
        let t_sym = correlation_data(&rho).t_sym();
        let quad_gap =
            (discord_probability(&rho, &na) - discord_probability_quadratic(&t_sym, &na)).abs();
        let c = complementarity(&na, &nb);
        out.record(
            if min_p >= -1e-12 && (sum - 1.0).abs() <= 1e-12 && quad_gap <= 1e-10 && (0.5..=1.0).contains(&c) {
                Ok(())
            } else {
                Err(format!(
                    "seed {seed} trial {trial} (state seed {state_seed}): min p {min_p:e}, sum {sum}, quadratic gap {quad_gap:e}, c {c}"
                ))
            },
        );
    }
    out
}

fn entropy_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("fano-chain");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    for trial in 0..trials {
        let state_seed: u64 = rng.gen();
        let rho = random_density::<f64>(state_seed);
        let r = random_direction(&mut rng);
        let s = random_direction(&mut rng);
        let h_r = binary_entropy(discord_probability(&rho, &r)).unwrap().bits;
        let h_s = binary_entropy(discord_probability(&rho, &s)).unwrap().bits;
        let s_r = measured_cond_entropy(&rho, &r).unwrap().bits;
        let s_s = measured_cond_entropy(&rho, &s).unwrap().bits;
        let deph = crate::entropy::post_measurement(&rho, &r);
        let s_before = von_neumann(rho.matrix()).unwrap().bits;
        let s_after = von_neumann(deph.matrix()).unwrap().bits;
        out.record(
            if h_r + h_s >= s_r + s_s - 1e-9 && s_r >= -1e-9 && s_s >= -1e-9 && s_after >= s_before - 1e-9 {
                Ok(())
            } else {
                Err(format!(
                    "seed {seed} trial {trial} (state seed {state_seed}): H {h_r}+{h_s} vs S {s_r}+{s_s}, dephasing {s_before}->{s_after}"
                ))
            },
        );
    }
    out
}

fn bound_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("uncertainty-bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
    for trial in 0..trials {
        let state_seed: u64 = rng.gen();
        let rho = random_density::<f64>(state_seed);
        let r = random_direction(&mut rng);
        let s = random_direction(&mut rng);
        let Ok(pair) = MeasurementPair::new(r, s, DEFAULT_EXCLUSION) else {
            out.record(Ok(()));
            continue;
        };
        let lhs = pair_uncertainty(&rho, &pair).unwrap().bits;
        let rhs = berta_rhs(&rho, &r, &s).unwrap();
        let s_r = measured_cond_entropy(&rho, &r).unwrap().bits;
        let s_s = measured_cond_entropy(&rho, &s).unwrap().bits;
        let memory_rhs = (1.0 / complementarity(&r, &s)).log2()
            + cond_entropy_ab(&rho).unwrap().bits;
        let report =
            fine_grained_bound_with_grid(&rho, &r, DEFAULT_EXCLUSION, VERIFY_GRID).unwrap();
        out.record(
            if lhs >= rhs - 1e-9
                && s_r + s_s >= memory_rhs - 1e-9
                && report.fg_bound.bits >= report.berta_rhs_at_argmin - 1e-9
                && report.fg_bound.bits <= lhs + 1e-8
            {
                Ok(())
            } else {
                Err(format!(
                    "seed {seed} trial {trial} (state seed {state_seed}): lhs {lhs}, rhs {rhs}, fg {} vs berta-at-argmin {}",
                    report.fg_bound.bits, report.berta_rhs_at_argmin
                ))
            },
        );
    }
    out
}

fn optimizer_suite(trials: usize, seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("optimizer-eigen-oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(6));
    let mut trial = 0;
    while trial < trials {
        let c1 = rng.gen::<f64>() * 2.0 - 1.0;
        let c2 = rng.gen::<f64>() * 2.0 - 1.0;
        let c3 = rng.gen::<f64>() * 2.0 - 1.0;
        let Ok(rho) = mmm::<f64>(c1, c2, c3) else { continue };
        trial += 1;
        let want = (1.0 - extremal_correlation_eigenvalue(&rho)) / 2.0;
        let (_, got) = extremal_discord_with_grid(&rho, None, 0.0, VERIFY_GRID).unwrap();
        out.record(if (got - want).abs() <= 1e-6 {
            Ok(())
        } else {
            Err(format!(
                "seed {seed} c=({c1},{c2},{c3}): optimizer p {got} vs eigen oracle {want}"
            ))
        });
    }
    out
}

/// Eigenvalue of the symmetrized correlation matrix with the largest
/// magnitude, resolved toward the more negative one on ties so the
/// corresponding discordance probability is the larger of the two.
pub fn extremal_correlation_eigenvalue(rho: &TwoQubitState<f64>) -> f64 {
    let t = correlation_data(rho).t_sym();
    let m = ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(t[i][j], 0.0));
    let eig = hermitian_eigen(&m, 1e-12).unwrap();
    let lo = eig.eigenvalues[0];
    let hi = eig.eigenvalues[2];
    if hi.abs() > lo.abs() + 1e-15 {
        hi
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_correct_implementation() {
        for suite in run_all(25, 0) {
            assert_eq!(
                suite.failed, 0,
                "suite {} failed: {:?}",
                suite.name, suite.first_failure
            );
            assert_eq!(suite.passed, 25);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_all(10, 7);
        let b = run_all(10, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.passed, y.passed);
            assert_eq!(x.failed, y.failed);
        }
    }

    /// Sensitivity check: a sign flip on one entropy term must be caught by
    /// the Fano-chain comparison the suite performs.
    #[test]
    fn tampered_entropy_sign_is_detected() {
        let rho = random_density::<f64>(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_direction(&mut rng);
        let s = random_direction(&mut rng);
        let h_r = binary_entropy(discord_probability(&rho, &r)).unwrap().bits;
        let h_s = binary_entropy(discord_probability(&rho, &s)).unwrap().bits;
        let s_r = measured_cond_entropy(&rho, &r).unwrap().bits;
        let s_s = measured_cond_entropy(&rho, &s).unwrap().bits;
        assert!(h_r + h_s >= s_r + s_s - 1e-9);
        let tampered = -(h_r + h_s);
        assert!(tampered < s_r + s_s - 1e-9, "sign flip must violate the chain");
    }
}
