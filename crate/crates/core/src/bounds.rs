//! Entropic uncertainty bounds: both sides of the memory-assisted relation,
//! the fine-grained bound obtained by extremizing the discordance
//! probability over the Bloch sphere, CHSH-type game values, and the
//! derived key-rate bounds.

use thiserror::Error;

use crate::entropy::{binary_entropy, cond_entropy_ab, EntropyError, EntropyValue};
use crate::measure::{
    complementarity, discord_probability, discord_probability_quadratic, joint_probability,
    BlochDirection, MeasureError, MeasurementPair,
};
use crate::states::{correlation_data, TwoQubitState};
use crate::{real, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("empty search space: exclusion radius {eps:e} rad covers the sphere")]
    EmptySearchSpace { eps: f64 },
    #[error("invalid game spec: {context}")]
    InvalidSpec { context: String },
}

/// Default (theta, phi) grid resolution of the sphere optimizer.
pub const DEFAULT_GRID: (usize, usize) = (121, 240);

/// Angular step below which the pattern-search refinement stops.
const REFINE_STEP: f64 = 1e-7;
/// Objective differences below this count as ties.
const TIE_TOL: f64 = 1e-12;

/// Everything computed for one state / measurement configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T: Real> {
    /// The fixed (or jointly optimized) first measurement direction.
    pub r: BlochDirection<T>,
    /// Minimizing second direction.
    pub argmin_s: BlochDirection<T>,
    pub h_r: EntropyValue<T>,
    pub h_s_min: EntropyValue<T>,
    /// `h_r + h_s_min`, the fine-grained lower bound.
    pub fg_bound: EntropyValue<T>,
    pub p_d_r: T,
    /// Extremized discordance probability at `argmin_s`.
    pub p_extremal: T,
    /// `log2(1/c) + S(A|B)` evaluated at `(r, argmin_s)`.
    pub berta_rhs_at_argmin: T,
}

/// `H(p_d^R) + H(p_d^S)` for an explicit measurement pair.
pub fn pair_uncertainty<T: Real>(
    rho: &TwoQubitState<T>,
    pair: &MeasurementPair<T>,
) -> Result<EntropyValue<T>, BoundsError> {
    let h_r = binary_entropy(clamp_probability(discord_probability(rho, &pair.r)))?;
    let h_s = binary_entropy(clamp_probability(discord_probability(rho, &pair.s)))?;
    Ok(h_r + h_s)
}

/// `log2(1/c) + S(A|B)`, the memory-assisted lower bound at fixed settings.
pub fn berta_rhs<T: Real>(
    rho: &TwoQubitState<T>,
    r: &BlochDirection<T>,
    s: &BlochDirection<T>,
) -> Result<T, BoundsError> {
    let c = complementarity(r, s);
    Ok((T::one() / c).log2() + cond_entropy_ab(rho)?.bits)
}

fn clamp_probability<T: Real>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}

// ---------------------------------------------------------------------------
// Deterministic sphere search: coarse grid, then shrinking pattern search.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Candidate<T: Real> {
    dir: BlochDirection<T>,
    key: T,
    p: T,
}

/// Ordering used by grid scan and refinement: smaller objective first; on
/// ties prefer the larger extremal probability, then the smaller theta, then
/// the smaller phi. The probability preference resolves the two-sided
/// degeneracy of the binary entropy (H(p) = H(1-p)) toward p = 1.
fn better<T: Real>(new: &Candidate<T>, cur: &Candidate<T>) -> bool {
    let tie = real::<T>(TIE_TOL);
    if new.key < cur.key - tie {
        return true;
    }
    if new.key > cur.key + tie {
        return false;
    }
    if new.p > cur.p + tie {
        return true;
    }
    if new.p < cur.p - tie {
        return false;
    }
    if new.dir.theta() < cur.dir.theta() {
        return true;
    }
    if new.dir.theta() > cur.dir.theta() {
        return false;
    }
    new.dir.phi() < cur.dir.phi()
}

fn sphere_minimize<T: Real>(
    objective: impl Fn(&BlochDirection<T>) -> (T, T),
    exclude: Option<&BlochDirection<T>>,
    eps: T,
    grid: (usize, usize),
) -> Result<Candidate<T>, BoundsError> {
    if exclude.is_some() && eps >= real(std::f64::consts::FRAC_PI_2) {
        return Err(BoundsError::EmptySearchSpace {
            eps: num_traits::ToPrimitive::to_f64(&eps).unwrap_or(f64::NAN),
        });
    }
    let allowed = |d: &BlochDirection<T>| match exclude {
        Some(e) => d.axis_distance(e) >= eps,
        None => true,
    };
    let evaluate = |d: BlochDirection<T>| {
        let (key, p) = objective(&d);
        Candidate { dir: d, key, p }
    };

    let (n_theta, n_phi) = grid;
    let pi = real::<T>(std::f64::consts::PI);
    let theta_step = pi / real((n_theta - 1) as f64);
    let phi_step = (pi + pi) / real(n_phi as f64);

    let mut best: Option<Candidate<T>> = None;
    for i in 0..n_theta {
        let theta = if i == n_theta - 1 { pi } else { theta_step * real(i as f64) };
        for j in 0..n_phi {
            let dir = BlochDirection::wrapped(theta, phi_step * real(j as f64));
            if !allowed(&dir) {
                continue;
            }
            let cand = evaluate(dir);
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    }
    let mut best = best.ok_or(BoundsError::EmptySearchSpace {
        eps: num_traits::ToPrimitive::to_f64(&eps).unwrap_or(f64::NAN),
    })?;

    let mut step = theta_step.max(phi_step);
    let stop = real::<T>(REFINE_STEP);
    let mut iterations = 0usize;
    while step >= stop && iterations < 20_000 {
        iterations += 1;
        let here = best.dir;
        let neighbors = [
            BlochDirection::wrapped(here.theta() - step, here.phi()),
            BlochDirection::wrapped(here.theta() + step, here.phi()),
            BlochDirection::wrapped(here.theta(), here.phi() - step),
            BlochDirection::wrapped(here.theta(), here.phi() + step),
        ];
        let mut moved = false;
        for dir in neighbors {
            if !allowed(&dir) {
                continue;
            }
            let cand = evaluate(dir);
            if better(&cand, &best) {
                best = cand;
                moved = true;
            }
        }
        if !moved {
            step = step * real(0.5);
        }
    }
    Ok(best)
}

/// Finds the direction minimizing `H(p_d)` over the sphere, optionally
/// excluding an angular cap of radius `eps` around an axis.
///
/// Returns the minimizing direction together with the extremized discordance
/// probability at that direction.
pub fn extremal_discord<T: Real>(
    rho: &TwoQubitState<T>,
    exclude: Option<&BlochDirection<T>>,
    eps: T,
) -> Result<(BlochDirection<T>, T), BoundsError> {
    extremal_discord_with_grid(rho, exclude, eps, DEFAULT_GRID)
}

pub fn extremal_discord_with_grid<T: Real>(
    rho: &TwoQubitState<T>,
    exclude: Option<&BlochDirection<T>>,
    eps: T,
    grid: (usize, usize),
) -> Result<(BlochDirection<T>, T), BoundsError> {
    let t_sym = correlation_data(rho).t_sym();
    let objective = |d: &BlochDirection<T>| {
        let p = clamp_probability(discord_probability_quadratic(&t_sym, d));
        let h = binary_entropy(p).expect("clamped probability").bits;
        (h, p)
    };
    let best = sphere_minimize(objective, exclude, eps, grid)?;
    Ok((best.dir, best.p))
}

/// The fine-grained bound at fixed first direction `r`:
/// `H(p_d^r) + min_S H(p_d^S)` with the minimum excluding a cap of radius
/// `eps` around `r`.
pub fn fine_grained_bound<T: Real>(
    rho: &TwoQubitState<T>,
    r: &BlochDirection<T>,
    eps: T,
) -> Result<BoundReport<T>, BoundsError> {
    fine_grained_bound_with_grid(rho, r, eps, DEFAULT_GRID)
}

pub fn fine_grained_bound_with_grid<T: Real>(
    rho: &TwoQubitState<T>,
    r: &BlochDirection<T>,
    eps: T,
    grid: (usize, usize),
) -> Result<BoundReport<T>, BoundsError> {
    let p_d_r = clamp_probability(discord_probability(rho, r));
    let h_r = binary_entropy(p_d_r)?;
    let (argmin_s, p_extremal) = extremal_discord_with_grid(rho, Some(r), eps, grid)?;
    let h_s_min = binary_entropy(p_extremal)?;
    let berta = berta_rhs(rho, r, &argmin_s)?;
    Ok(BoundReport {
        r: *r,
        argmin_s,
        h_r,
        h_s_min,
        fg_bound: h_r + h_s_min,
        p_d_r,
        p_extremal,
        berta_rhs_at_argmin: berta,
    })
}

/// Minimizes `H(p_d^R) + H(p_d^S)` over both directions.
///
/// The two terms share the same objective surface, so the joint minimum is
/// the global extremal direction paired with the best direction outside the
/// exclusion cap around it.
pub fn joint_fine_grained<T: Real>(
    rho: &TwoQubitState<T>,
    eps: T,
) -> Result<BoundReport<T>, BoundsError> {
    joint_fine_grained_with_grid(rho, eps, DEFAULT_GRID)
}

pub fn joint_fine_grained_with_grid<T: Real>(
    rho: &TwoQubitState<T>,
    eps: T,
    grid: (usize, usize),
) -> Result<BoundReport<T>, BoundsError> {
    let (r, p_d_r) = extremal_discord_with_grid(rho, None, eps, grid)?;
    let h_r = binary_entropy(p_d_r)?;
    let (argmin_s, p_extremal) = extremal_discord_with_grid(rho, Some(&r), eps, grid)?;
    let h_s_min = binary_entropy(p_extremal)?;
    let berta = berta_rhs(rho, &r, &argmin_s)?;
    Ok(BoundReport {
        r,
        argmin_s,
        h_r,
        h_s_min,
        fg_bound: h_r + h_s_min,
        p_d_r,
        p_extremal,
        berta_rhs_at_argmin: berta,
    })
}

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

/// Winning predicate of the bipartite game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinningRule {
    /// Win iff `a xor b = t_A . t_B` (indices of the chosen settings).
    Chsh,
    /// Win iff `a xor b = 1`, regardless of the settings.
    Anticorrelate,
}

impl WinningRule {
    fn wins(&self, a: u8, b: u8, t_a: usize, t_b: usize) -> bool {
        match self {
            WinningRule::Chsh => ((a + b) % 2) as usize == (t_a * t_b) % 2,
            WinningRule::Anticorrelate => (a + b) % 2 == 1,
        }
    }
}

/// Measurement-setting sets, priors over setting pairs, and the winning rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec<T: Real> {
    pub alice_settings: Vec<BlochDirection<T>>,
    pub bob_settings: Vec<BlochDirection<T>>,
    /// `priors[t_a][t_b]`, nonnegative and summing to 1.
    pub priors: Vec<Vec<T>>,
    pub winning: WinningRule,
}

impl<T: Real> GameSpec<T> {
    pub fn new(
        alice_settings: Vec<BlochDirection<T>>,
        bob_settings: Vec<BlochDirection<T>>,
        priors: Vec<Vec<T>>,
        winning: WinningRule,
    ) -> Result<Self, BoundsError> {
        if alice_settings.is_empty() || bob_settings.is_empty() {
            return Err(BoundsError::InvalidSpec {
                context: "setting lists must be nonempty".into(),
            });
        }
        if winning == WinningRule::Chsh
            && (alice_settings.len() != 2 || bob_settings.len() != 2)
        {
            return Err(BoundsError::InvalidSpec {
                context: "the CHSH rule needs exactly two settings per side".into(),
            });
        }
        if priors.len() != alice_settings.len()
            || priors.iter().any(|row| row.len() != bob_settings.len())
        {
            return Err(BoundsError::InvalidSpec {
                context: "priors shape must match the setting lists".into(),
            });
        }
        let mut sum = T::zero();
        for row in &priors {
            for &p in row {
                if p < T::zero() {
                    return Err(BoundsError::InvalidSpec {
                        context: format!("negative prior {p}"),
                    });
                }
                sum = sum + p;
            }
        }
        if (sum - T::one()).abs() > real(1e-12) {
            return Err(BoundsError::InvalidSpec {
                context: format!("priors sum to {sum}, not 1"),
            });
        }
        Ok(Self {
            alice_settings,
            bob_settings,
            priors,
            winning,
        })
    }

    /// Uniform priors over all setting pairs.
    pub fn uniform(
        alice_settings: Vec<BlochDirection<T>>,
        bob_settings: Vec<BlochDirection<T>>,
        winning: WinningRule,
    ) -> Result<Self, BoundsError> {
        let w = T::one() / real((alice_settings.len() * bob_settings.len()) as f64);
        let priors = vec![vec![w; bob_settings.len()]; alice_settings.len()];
        Self::new(alice_settings, bob_settings, priors, winning)
    }
}

/// Winning probability of the game on the given state.
pub fn game_value<T: Real>(rho: &TwoQubitState<T>, spec: &GameSpec<T>) -> T {
    let mut value = T::zero();
    for (t_a, n_a) in spec.alice_settings.iter().enumerate() {
        for (t_b, n_b) in spec.bob_settings.iter().enumerate() {
            let prior = spec.priors[t_a][t_b];
            if prior == T::zero() {
                continue;
            }
            let mut win = T::zero();
            for a in 0..2u8 {
                for b in 0..2u8 {
                    if spec.winning.wins(a, b, t_a, t_b) {
                        win = win + joint_probability(rho, n_a, a, n_b, b);
                    }
                }
            }
            value = value + prior * win;
        }
    }
    value
}

/// Maximizes the winning probability over the measurement settings for the
/// fixed input state, with uniform priors.
///
/// For the CHSH rule this runs a deterministic see-saw: each side's optimal
/// settings given the other's have a closed form through the correlation
/// matrix, and the iteration starts from the three coordinate axis pairs.
pub fn game_max<T: Real>(
    rho: &TwoQubitState<T>,
    winning: WinningRule,
) -> Result<(GameSpec<T>, T), BoundsError> {
    match winning {
        WinningRule::Anticorrelate => {
            let corr = correlation_data(rho);
            let t_sym = corr.t_sym();
            let objective = |d: &BlochDirection<T>| {
                let p = clamp_probability(discord_probability_quadratic(&t_sym, d));
                (-p, p)
            };
            let best = sphere_minimize(objective, None, T::zero(), DEFAULT_GRID)?;
            let spec = GameSpec::uniform(vec![best.dir], vec![best.dir], winning)?;
            let value = game_value(rho, &spec);
            Ok((spec, value))
        }
        WinningRule::Chsh => {
            let t = correlation_data(rho).t;
            let axes = [
                BlochDirection::z_axis(),
                BlochDirection::x_axis(),
                BlochDirection::y_axis(),
            ];
            let inits = [(0usize, 1usize), (0, 2), (1, 2)];
            let mut best: Option<(GameSpec<T>, T)> = None;
            for (i, j) in inits {
                let spec = chsh_seesaw(&t, axes[i], axes[j])?;
                let value = game_value(rho, &spec);
                if best.as_ref().is_none_or(|(_, v)| value > *v) {
                    best = Some((spec, value));
                }
            }
            Ok(best.expect("at least one init"))
        }
    }
}

fn mat_vec<T: Real>(t: &[[T; 3]; 3], v: [T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] = out[i] + t[i][j] * v[j];
        }
    }
    out
}

fn mat_vec_t<T: Real>(t: &[[T; 3]; 3], v: [T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] = out[i] + t[j][i] * v[j];
        }
    }
    out
}

fn vec_norm<T: Real>(v: [T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn vec_to_dir<T: Real>(v: [T; 3], fallback: BlochDirection<T>) -> BlochDirection<T> {
    let n = vec_norm(v);
    if n <= real(1e-14) {
        return fallback;
    }
    let theta = (v[2] / n).max(-T::one()).min(T::one()).acos();
    let phi = v[1].atan2(v[0]);
    BlochDirection::wrapped(theta, phi)
}

fn chsh_seesaw<T: Real>(
    t: &[[T; 3]; 3],
    b0: BlochDirection<T>,
    b1: BlochDirection<T>,
) -> Result<GameSpec<T>, BoundsError> {
    let correlator = |a: &BlochDirection<T>, b: &BlochDirection<T>| {
        let av = a.unit_vector();
        let tb = mat_vec(t, b.unit_vector());
        av[0] * tb[0] + av[1] * tb[1] + av[2] * tb[2]
    };
    let chsh = |a0: &BlochDirection<T>, a1: &BlochDirection<T>, b0: &BlochDirection<T>, b1: &BlochDirection<T>| {
        correlator(a0, b0) + correlator(a0, b1) + correlator(a1, b0) - correlator(a1, b1)
    };

    let (mut b0, mut b1) = (b0, b1);
    let mut a0 = BlochDirection::z_axis();
    let mut a1 = BlochDirection::x_axis();
    let mut last = -real::<T>(10.0);
    for _ in 0..200 {
        let (b0v, b1v) = (b0.unit_vector(), b1.unit_vector());
        let sum = [b0v[0] + b1v[0], b0v[1] + b1v[1], b0v[2] + b1v[2]];
        let diff = [b0v[0] - b1v[0], b0v[1] - b1v[1], b0v[2] - b1v[2]];
        a0 = vec_to_dir(mat_vec(t, sum), a0);
        a1 = vec_to_dir(mat_vec(t, diff), a1);

        let (a0v, a1v) = (a0.unit_vector(), a1.unit_vector());
        let sum = [a0v[0] + a1v[0], a0v[1] + a1v[1], a0v[2] + a1v[2]];
        let diff = [a0v[0] - a1v[0], a0v[1] - a1v[1], a0v[2] - a1v[2]];
        b0 = vec_to_dir(mat_vec_t(t, sum), b0);
        b1 = vec_to_dir(mat_vec_t(t, diff), b1);

        let value = chsh(&a0, &a1, &b0, &b1);
        if (value - last).abs() < real(1e-14) {
            break;
        }
        last = value;
    }
    GameSpec::uniform(vec![a0, a1], vec![b0, b1], WinningRule::Chsh)
}

// ---------------------------------------------------------------------------
// Key rates
// ---------------------------------------------------------------------------

/// `log2(1/c) - S(R|B) - S(S|B)`.
pub fn key_rate_berta<T: Real>(
    rho: &TwoQubitState<T>,
    pair: &MeasurementPair<T>,
) -> Result<T, BoundsError> {
    let c = complementarity(&pair.r, &pair.s);
    let s_r = crate::entropy::measured_cond_entropy(rho, &pair.r)?;
    let s_s = crate::entropy::measured_cond_entropy(rho, &pair.s)?;
    Ok((T::one() / c).log2() - s_r.bits - s_s.bits)
}

/// `log2(1/c) - [H(p_d^R) + min_S H(p_d^S)]`, the fine-grained key-rate
/// bound. Both entropies are subtracted; the first is evaluated at the
/// pair's own first direction and the second is extremized over the sphere.
pub fn key_rate_fine_grained<T: Real>(
    rho: &TwoQubitState<T>,
    pair: &MeasurementPair<T>,
    eps: T,
) -> Result<T, BoundsError> {
    let c = complementarity(&pair.r, &pair.s);
    let fg = fine_grained_bound(rho, &pair.r, eps)?;
    Ok((T::one() / c).log2() - fg.fg_bound.bits)
}
