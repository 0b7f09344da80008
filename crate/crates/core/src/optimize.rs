//! Multi-start, derivative-free minimization over pure quantum states.
//!
//! Unit vectors of a `m`-dimensional (sub)space are parameterized by a real
//! vector `x ∈ ℝ^{2m−1}` kept on the unit sphere: `x_0` is the real first
//! coefficient (the global phase is fixed that way) and the remaining pairs
//! are the real and imaginary parts of the other coefficients. Each start runs
//! a compass search with pattern moves; the step halves whenever no
//! coordinate move improves and the search stops once it falls below
//! `step_tolerance`.
//!
//! Entropy objectives have unbounded gradients at the simplex boundary, which
//! is where their minima tend to sit, so no derivatives are used.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::entropy_nats;
use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, HermitianObservable};
use crate::scalar::{Cplx, Real};
use crate::state::{sequential_weights_pure, PureState};

/// Largest Hilbert-space dimension accepted by the optimizer paths.
pub const MAX_OPTIMIZER_DIM: usize = 8;

const INITIAL_STEP: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_iterations: usize,
    pub value_tolerance: f64,
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iterations: 2000,
            value_tolerance: 1e-8,
            step_tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.starts >= 1
            && self.max_iterations >= 1
            && self.value_tolerance > 0.0
            && self.step_tolerance > 0.0
            && self.step_tolerance < INITIAL_STEP;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid optimizer config {self:?}")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizerResult<T> {
    /// Smallest value over all starts.
    pub value: T,
    /// State reached by `best_start`.
    pub minimizer: PureState<T>,
    pub starts_converged: usize,
    pub per_start_values: Vec<T>,
    /// Lowest start index whose value is within `value_tolerance` of `value`.
    pub best_start: usize,
}

struct LocalOutcome<T> {
    value: T,
    params: Vec<T>,
    converged: bool,
}

/// Minimizes `objective` over all unit vectors of `ℂ^dim`.
pub fn minimize_over_pure_states<T, F>(objective: F, dim: usize, config: &OptimizerConfig) -> Result<OptimizerResult<T>>
where
    T: Real,
    F: Fn(&PureState<T>) -> T + Sync,
{
    if dim == 0 || dim > MAX_OPTIMIZER_DIM {
        return Err(Error::DimensionOutOfRange(dim, 1, MAX_OPTIMIZER_DIM));
    }
    let basis: Vec<Vec<Cplx<T>>> = (0..dim)
        .map(|k| PureState::<T>::basis(dim, k).map(|s| s.amplitudes().to_vec()))
        .collect::<Result<_>>()?;
    minimize_in_subspace(objective, &basis, config)
}

/// Minimizes `objective` over unit vectors in the span of an orthonormal
/// `basis`.
pub fn minimize_in_subspace<T, F>(objective: F, basis: &[Vec<Cplx<T>>], config: &OptimizerConfig) -> Result<OptimizerResult<T>>
where
    T: Real,
    F: Fn(&PureState<T>) -> T + Sync,
{
    config.validate()?;
    let Some(first) = basis.first() else {
        return Err(Error::InvalidArgument("empty subspace basis".into()));
    };
    let dim = first.len();
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(dim, basis.iter().map(Vec::len).find(|&l| l != dim).unwrap()));
    }
    if basis.len() > dim {
        return Err(Error::InvalidArgument("basis has more vectors than the space dimension".into()));
    }

    let to_state = |x: &[T]| -> PureState<T> {
        let mut amps = vec![Cplx::new(T::zero(), T::zero()); dim];
        for (k, v) in basis.iter().enumerate() {
            let coeff = if k == 0 {
                Cplx::new(x[0], T::zero())
            } else {
                Cplx::new(x[2 * k - 1], x[2 * k])
            };
            for (slot, &vk) in amps.iter_mut().zip(v) {
                *slot += vk * coeff;
            }
        }
        PureState::from_unit_unchecked(amps)
    };
    let evaluate = |x: &[T]| -> Result<T> {
        let v = objective(&to_state(x));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective)
        }
    };

    if basis.len() == 1 {
        let x = [T::one()];
        let value = evaluate(&x)?;
        return Ok(OptimizerResult {
            value,
            minimizer: to_state(&x),
            starts_converged: 1,
            per_start_values: vec![value],
            best_start: 0,
        });
    }

    let n_params = 2 * basis.len() - 1;
    let outcomes: Vec<LocalOutcome<T>> = (0..config.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(k as u64));
            let start: Vec<T> = (0..n_params)
                .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
                .collect();
            compass_search(&evaluate, start, config)
        })
        .collect::<Result<_>>()?;

    let starts_converged = outcomes.iter().filter(|o| o.converged).count();
    if starts_converged == 0 {
        return Err(Error::OptimizerFailure);
    }
    let per_start_values: Vec<T> = outcomes.iter().map(|o| o.value).collect();
    let value = per_start_values.iter().copied().fold(T::infinity(), T::min);
    let tol = T::lit(config.value_tolerance);
    let best_start = per_start_values
        .iter()
        .position(|&v| v <= value + tol)
        .expect("minimum is attained");
    Ok(OptimizerResult {
        value,
        minimizer: to_state(&outcomes[best_start].params),
        starts_converged,
        per_start_values,
        best_start,
    })
}

fn normalize<T: Real>(x: &mut [T]) -> bool {
    let n = x.iter().map(|&v| v * v).sum::<T>().sqrt();
    if n <= T::epsilon() || !n.is_finite() {
        return false;
    }
    for v in x.iter_mut() {
        *v /= n;
    }
    true
}

fn compass_search<T: Real>(
    evaluate: &(impl Fn(&[T]) -> Result<T> + Sync),
    mut x: Vec<T>,
    config: &OptimizerConfig,
) -> Result<LocalOutcome<T>> {
    if !normalize(&mut x) {
        x.iter_mut().for_each(|v| *v = T::zero());
        x[0] = T::one();
    }
    let mut f = evaluate(&x)?;
    let max_step = T::lit(INITIAL_STEP);
    let min_step = T::lit(config.step_tolerance).max(T::epsilon());
    let mut step = max_step;
    let mut converged = false;
    let mut trial = x.clone();
    // A move must gain at least `value_tolerance` per unit step, so gains
    // from renormalization side effects cannot stall the step schedule.
    let min_rate = T::lit(config.value_tolerance);
    let better = |ft: T, f: T, step: T| ft < f - min_rate * step - T::epsilon() * (T::one() + f.abs());

    for _ in 0..config.max_iterations {
        let base = x.clone();
        let mut improved = false;
        for d in 0..x.len() {
            for sign in [T::one(), -T::one()] {
                trial.copy_from_slice(&x);
                trial[d] += sign * step;
                if !normalize(&mut trial) {
                    continue;
                }
                let ft = evaluate(&trial)?;
                if better(ft, f, step) {
                    x.copy_from_slice(&trial);
                    f = ft;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            // Pattern move along the net displacement of this sweep.
            for ((t, &xi), &bi) in trial.iter_mut().zip(&x).zip(&base) {
                *t = xi + xi - bi;
            }
            if normalize(&mut trial) {
                let ft = evaluate(&trial)?;
                if better(ft, f, step) {
                    x.copy_from_slice(&trial);
                    f = ft;
                }
            }
        } else {
            step *= T::lit(0.5);
            if step < min_step {
                converged = true;
                break;
            }
        }
    }
    Ok(LocalOutcome {
        value: f,
        params: x,
        converged,
    })
}

fn check_optimizer_dims(dims: &[usize]) -> Result<usize> {
    let dim = ensure_same_dim(dims)?;
    if dim > MAX_OPTIMIZER_DIM {
        return Err(Error::DimensionOutOfRange(dim, 1, MAX_OPTIMIZER_DIM));
    }
    Ok(dim)
}

/// Sum of marginal entropies of a row-major table with the given shape.
fn marginal_entropy_sum<T: Real>(weights: &[T], shape: &[usize]) -> T {
    let mut total = T::zero();
    let mut stride = weights.len();
    for &width in shape {
        stride /= width;
        let mut marginal = vec![T::zero(); width];
        for (flat, &w) in weights.iter().enumerate() {
            marginal[(flat / stride) % width] += w;
        }
        total += entropy_nats(&marginal);
    }
    total
}

/// Numerical optimum for distinct measurements: `inf_ψ S^ψ(A) + S^ψ(B)`.
///
/// Restricting to pure states loses nothing: the objective is concave in
/// `ρ`, so its infimum over the convex set of states sits at an extreme
/// point.
pub fn lambda_d_numeric<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    config: &OptimizerConfig,
) -> Result<OptimizerResult<T>> {
    let dim = check_optimizer_dims(&[a.dim(), b.dim()])?;
    minimize_over_pure_states(
        |psi: &PureState<T>| {
            entropy_nats(&a.outcome_weights(psi.amplitudes())) + entropy_nats(&b.outcome_weights(psi.amplitudes()))
        },
        dim,
        config,
    )
}

/// Numerical optimum for successive measurement of A then B.
pub fn lambda_s_numeric<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    config: &OptimizerConfig,
) -> Result<OptimizerResult<T>> {
    let dim = check_optimizer_dims(&[a.dim(), b.dim()])?;
    let shape = [a.num_outcomes(), b.num_outcomes()];
    minimize_over_pure_states(
        |psi: &PureState<T>| marginal_entropy_sum(&sequential_weights_pure(psi.amplitudes(), &[a, b]), &shape),
        dim,
        config,
    )
}

/// Numerical optimum for successive measurement of A, B, C.
pub fn lambda_s3_numeric<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
    config: &OptimizerConfig,
) -> Result<OptimizerResult<T>> {
    let dim = check_optimizer_dims(&[a.dim(), b.dim(), c.dim()])?;
    let shape = [a.num_outcomes(), b.num_outcomes(), c.num_outcomes()];
    minimize_over_pure_states(
        |psi: &PureState<T>| marginal_entropy_sum(&sequential_weights_pure(psi.amplitudes(), &[a, b, c]), &shape),
        dim,
        config,
    )
}
