//! Shannon entropies of distinct and sequential measurement statistics and
//! the variance-form uncertainty relations.
//!
//! All entropies are computed in nats. [`LogBase`] converts reports to other
//! units (bits with base 2).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, ComplexMatrix, HermitianObservable};
use crate::scalar::{norm_sqr, Real};
use crate::state::{luders_map, wigner_joint_2, wigner_joint_3, DensityOperator};

/// Weights below this contribute nothing to an entropy (`0·log 0 = 0`).
const NEGLIGIBLE_WEIGHT: f64 = 1e-15;

/// Negative roundoff down to this value is clipped to zero.
const CLIP_NEGATIVE: f64 = 1e-12;

/// Largest tolerated deviation of a total probability from one.
const TOTAL_TOLERANCE: f64 = 1e-9;

/// Logarithm base for reporting entropies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogBase<T>(T);

impl<T: Real> LogBase<T> {
    pub fn new(base: T) -> Result<Self> {
        if base.is_finite() && base > T::one() {
            Ok(Self(base))
        } else {
            Err(Error::InvalidLogBase(base.as_f64()))
        }
    }

    pub fn natural() -> Self {
        Self(T::E())
    }

    pub fn bits() -> Self {
        Self(T::lit(2.0))
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Converts a quantity measured in nats.
    pub fn from_nats(self, nats: T) -> T {
        nats / self.0.ln()
    }
}

impl<T: Real> Default for LogBase<T> {
    fn default() -> Self {
        Self::natural()
    }
}

/// Clips roundoff negatives and renormalizes. Totals further than `1e-9`
/// from one, or genuinely negative entries, are errors.
pub fn clean_probabilities<T: Real>(mut raw: Vec<T>) -> Result<Vec<T>> {
    let clip = T::tolerance(CLIP_NEGATIVE);
    for p in raw.iter_mut() {
        if !p.is_finite() {
            return Err(Error::InvalidDistribution("non-finite weight".into()));
        }
        if *p < -clip {
            return Err(Error::InvalidDistribution(format!("negative weight {p}")));
        }
        if *p < T::zero() {
            *p = T::zero();
        }
    }
    let total: T = raw.iter().copied().sum();
    if (total - T::one()).abs() > T::tolerance(TOTAL_TOLERANCE) {
        return Err(Error::InvalidDistribution(format!("total {total} differs from 1")));
    }
    for p in raw.iter_mut() {
        *p /= total;
    }
    Ok(raw)
}

/// Finite distribution `{p_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution<T> {
    weights: Vec<T>,
}

impl<T: Real> ProbabilityDistribution<T> {
    /// Strict constructor: weights in `[0, 1]` summing to one within `1e-9`.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if weights
            .iter()
            .any(|&p| !p.is_finite() || p < T::zero() || p > T::one())
        {
            return Err(Error::InvalidDistribution("weight outside [0, 1]".into()));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::tolerance(TOTAL_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!("total {total} differs from 1")));
        }
        Ok(Self { weights })
    }

    /// Lenient constructor applying [`clean_probabilities`].
    pub fn from_raw(raw: Vec<T>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        Ok(Self {
            weights: clean_probabilities(raw)?,
        })
    }

    pub(crate) fn from_normalized_unchecked(weights: Vec<T>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn entropy(&self, base: LogBase<T>) -> T {
        base.from_nats(entropy_nats(&self.weights))
    }
}

/// `−Σ p log p` in nats; negligible weights are skipped.
pub fn entropy_nats<T: Real>(weights: &[T]) -> T {
    let floor = T::lit(NEGLIGIBLE_WEIGHT);
    -weights
        .iter()
        .filter(|&&p| p > floor)
        .map(|&p| p * p.ln())
        .sum::<T>()
}

/// Shannon entropy in the requested base.
pub fn shannon_entropy<T: Real>(p: &ProbabilityDistribution<T>, base: LogBase<T>) -> T {
    p.entropy(base)
}

/// Entropy of `A`'s outcome distribution `Tr[ρ P^A(a_i)]`, in nats.
pub fn entropy_distinct<T: Real>(rho: &DensityOperator<T>, a: &HermitianObservable<T>) -> Result<T> {
    Ok(entropy_nats(rho.outcome_distribution(a)?.weights()))
}

/// Entropies of a sequential measurement. Pair and triple entries are only
/// present for three-observable chains.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport<T> {
    pub s_a: T,
    pub s_b: T,
    pub s_c: Option<T>,
    /// Joint entropy of the (A, B) outcomes.
    pub s_ab: T,
    /// Joint entropy of the (B, C) outcomes.
    pub s_bc: Option<T>,
    /// Joint entropy of the full outcome tuple.
    pub s_joint: T,
    pub log_base: T,
}

impl<T: Real> EntropyReport<T> {
    /// Rescales every entropy; the report must currently be in nats.
    pub fn in_base(&self, base: LogBase<T>) -> Self {
        let f = |x: T| base.from_nats(x);
        Self {
            s_a: f(self.s_a),
            s_b: f(self.s_b),
            s_c: self.s_c.map(f),
            s_ab: f(self.s_ab),
            s_bc: self.s_bc.map(f),
            s_joint: f(self.s_joint),
            log_base: base.value(),
        }
    }

    pub fn marginal_sum(&self) -> T {
        self.s_a + self.s_b + self.s_c.unwrap_or_else(T::zero)
    }

    /// `Σ marginal entropies − joint entropy` (sub-additivity slack).
    pub fn subadditivity_slack(&self) -> T {
        self.marginal_sum() - self.s_joint
    }

    /// `S(A,B) + S(B,C) − S(A,B,C) − S(B)`; `None` for two observables.
    pub fn strong_subadditivity_slack(&self) -> Option<T> {
        self.s_bc.map(|bc| self.s_ab + bc - self.s_joint - self.s_b)
    }
}

/// Entropies for the ordered pair (A then B).
pub fn entropies_sequential<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
) -> Result<EntropyReport<T>> {
    let joint = wigner_joint_2(rho, a, b)?;
    let s_ab = entropy_nats(joint.table());
    Ok(EntropyReport {
        s_a: entropy_nats(joint.marginal(0).weights()),
        s_b: entropy_nats(joint.marginal(1).weights()),
        s_c: None,
        s_ab,
        s_bc: None,
        s_joint: s_ab,
        log_base: T::E(),
    })
}

/// Entropies for the ordered triple (A then B then C).
pub fn entropies_sequential_3<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
) -> Result<EntropyReport<T>> {
    let joint = wigner_joint_3(rho, a, b, c)?;
    Ok(EntropyReport {
        s_a: entropy_nats(joint.marginal(0).weights()),
        s_b: entropy_nats(joint.marginal(1).weights()),
        s_c: Some(entropy_nats(joint.marginal(2).weights())),
        s_ab: entropy_nats(joint.marginalize(&[0, 1]).table()),
        s_bc: Some(entropy_nats(joint.marginalize(&[1, 2]).table())),
        s_joint: entropy_nats(joint.table()),
        log_base: T::E(),
    })
}

/// Variances for distinct and for sequential measurement of A then B.
#[derive(Clone, Debug)]
pub struct VarianceReport<T> {
    pub var_a: T,
    pub var_b: T,
    /// `¼|Tr(ρ[A, B])|²`.
    pub robertson_rhs: T,
    /// Variance of the A outcomes in the sequential experiment.
    pub var_a_sequential: T,
    /// Variance of the B outcomes after an intervening A measurement.
    pub var_b_sequential: T,
    /// `|Tr[ρ A C(B)] − Tr[ρA] Tr[ρ C(B)]|²`.
    pub successive_rhs: T,
    /// `C(B) = Σ_i P^A(a_i) B P^A(a_i)`.
    pub c_of_b: ComplexMatrix<T>,
}

impl<T: Real> VarianceReport<T> {
    pub fn robertson_slack(&self) -> T {
        self.var_a * self.var_b - self.robertson_rhs
    }

    pub fn successive_slack(&self) -> T {
        self.var_a_sequential * self.var_b_sequential - self.successive_rhs
    }
}

/// `Σ_i P^A(a_i) B P^A(a_i)`.
pub fn pinched_operator<T: Real>(a: &HermitianObservable<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.projectors()
        .iter()
        .fold(ComplexMatrix::zeros(b.dim()), |acc, p| &acc + &p.sandwich(b))
}

fn variance_of<T: Real>(values: &[T], weights: &[T]) -> T {
    let mean: T = values.iter().zip(weights).map(|(&v, &w)| v * w).sum();
    let second: T = values.iter().zip(weights).map(|(&v, &w)| v * v * w).sum();
    (second - mean * mean).max(T::zero())
}

pub fn variance_relations<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
) -> Result<VarianceReport<T>> {
    ensure_same_dim(&[rho.dim(), a.dim(), b.dim()])?;
    let am = a.matrix();
    let bm = b.matrix();
    let mean_a = rho.expectation(am).re;
    let mean_b = rho.expectation(bm).re;
    let var_a = (rho.expectation(&(am * am)).re - mean_a * mean_a).max(T::zero());
    let var_b = (rho.expectation(&(bm * bm)).re - mean_b * mean_b).max(T::zero());
    let robertson_rhs = norm_sqr(rho.expectation(&am.commutator(bm))) / T::lit(4.0);

    let joint = wigner_joint_2(rho, a, b)?;
    let var_a_sequential = variance_of(a.eigenvalues(), joint.marginal(0).weights());
    let var_b_sequential = variance_of(b.eigenvalues(), joint.marginal(1).weights());

    let c_of_b = pinched_operator(a, bm);
    let cov = rho.expectation(&(am * &c_of_b)) - rho.expectation(am) * rho.expectation(&c_of_b);
    Ok(VarianceReport {
        var_a,
        var_b,
        robertson_rhs,
        var_a_sequential,
        var_b_sequential,
        successive_rhs: norm_sqr(cov),
        c_of_b,
    })
}

/// `S^{ℰ(ρ)}(B)`: distinct-measurement entropy of `B` in the collapsed state.
pub fn entropy_after_collapse<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
) -> Result<T> {
    entropy_distinct(&luders_map(rho, a)?, b)
}
