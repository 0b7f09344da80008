//! Closed-form entropic uncertainty bounds.
//!
//! Distinct-measurement lower bounds (Deutsch, Partovi, Maassen–Uffink,
//! Krishna–Parthasarathy) and the optimal bounds for successive measurement
//! of two and three observables. Every value is in nats.

use serde::Serialize;

use crate::entropy::{entropy_nats, LogBase};
use crate::error::Result;
use crate::linalg::{ensure_same_dim, inner, operator_norm, ComplexMatrix, HermitianObservable};
use crate::optimize::{minimize_in_subspace, OptimizerConfig};
use crate::scalar::{norm_sqr, Real};
use crate::state::PureState;

/// Subspace starts per dimension of a degenerate eigenspace.
const STARTS_PER_SUBSPACE_DIM: usize = 8;

/// Squared overlaps `|⟨a_i|b_j⟩|²` between two nondegenerate eigenbases.
pub fn overlap_matrix<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<Vec<Vec<T>>> {
    ensure_same_dim(&[a.dim(), b.dim()])?;
    let ea = a.eigenbasis()?;
    let eb = b.eigenbasis()?;
    Ok(ea
        .iter()
        .map(|ai| eb.iter().map(|bj| norm_sqr(inner(ai, bj))).collect())
        .collect())
}

fn max_entry<T: Real>(m: &[Vec<T>]) -> T {
    m.iter().flatten().copied().fold(T::zero(), T::max)
}

fn clamp_unit<T: Real>(x: T) -> T {
    x.min(T::one()).max(T::zero())
}

/// `2·log[2 / (1 + max |⟨a_i|b_j⟩|)]`, for nondegenerate spectra.
pub fn deutsch_bound<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<T> {
    let c = clamp_unit(max_entry(&overlap_matrix(a, b)?).sqrt());
    let two = T::lit(2.0);
    Ok((two * (two / (T::one() + c)).ln()).max(T::zero()))
}

/// `2·log[2 / max ‖P^A(a_i) + P^B(b_j)‖]`.
pub fn partovi_bound<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<T> {
    ensure_same_dim(&[a.dim(), b.dim()])?;
    let mut worst = T::zero();
    for p in a.projectors() {
        for q in b.projectors() {
            worst = worst.max(operator_norm(&(p + q))?);
        }
    }
    let two = T::lit(2.0);
    Ok((two * (two / worst.min(two)).ln()).max(T::zero()))
}

/// `log[1 / max |⟨a_i|b_j⟩|²]`, for nondegenerate spectra.
pub fn maassen_uffink_bound<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<T> {
    let c2 = clamp_unit(max_entry(&overlap_matrix(a, b)?));
    Ok((-c2.ln()).max(T::zero()))
}

/// `log[1 / max ‖P^A(a_i) P^B(b_j)‖²]`, valid for any pair.
pub fn krishna_parthasarathy_bound<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<T> {
    ensure_same_dim(&[a.dim(), b.dim()])?;
    let mut worst = T::zero();
    for p in a.projectors() {
        for q in b.projectors() {
            let n = operator_norm(&(p * q))?;
            worst = worst.max(n * n);
        }
    }
    Ok((-clamp_unit(worst).ln()).max(T::zero()))
}

/// The three sides of the projector norm relation
/// `‖PQ‖² = ‖PQP‖ ≤ ¼‖P + Q‖²`.
pub fn projector_norm_relation<T: Real>(p: &ComplexMatrix<T>, q: &ComplexMatrix<T>) -> Result<(T, T, T)> {
    let pq = operator_norm(&(p * q))?;
    let pqp = operator_norm(&p.sandwich(q))?;
    let sum = operator_norm(&(p + q))?;
    Ok((pq * pq, pqp, sum * sum / T::lit(4.0)))
}

/// `⟨ψ|P^B(b_j)|ψ⟩` over the outcomes of `B`.
fn b_weights<T: Real>(b: &HermitianObservable<T>, psi: &PureState<T>) -> Vec<T> {
    b.outcome_weights(psi.amplitudes())
}

/// Optimal bound for successive measurement of A then B, with the default
/// optimizer configuration for degenerate eigenspaces of A.
pub fn lambda_s_two<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<T> {
    lambda_s_two_with(a, b, &OptimizerConfig::default())
}

/// Optimal bound for successive measurement of A then B:
/// the smallest entropy of `B` over eigenstates of `A`.
///
/// One-dimensional eigenspaces are evaluated directly. Degenerate
/// eigenspaces are searched with [`minimize_in_subspace`] using
/// `8 × (eigenspace dimension)` starts.
pub fn lambda_s_two_with<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    config: &OptimizerConfig,
) -> Result<T> {
    ensure_same_dim(&[a.dim(), b.dim()])?;
    let mut best = T::infinity();
    for (i, group) in a.decomposition().eigenvectors().iter().enumerate() {
        let value = if group.len() == 1 {
            entropy_nats(&b.outcome_weights(&group[0]))
        } else {
            let cfg = config
                .clone()
                .with_starts(STARTS_PER_SUBSPACE_DIM * group.len())
                .with_seed(config.seed.wrapping_add((i as u64) << 32));
            minimize_in_subspace(|psi: &PureState<T>| entropy_nats(&b_weights(b, psi)), group, &cfg)?.value
        };
        best = best.min(value);
    }
    Ok(best.max(T::zero()))
}

/// `U_jk = |⟨b_j|c_k⟩|²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionMatrix<T> {
    entries: Vec<Vec<T>>,
}

impl<T: Real> TransitionMatrix<T> {
    pub fn new(b: &HermitianObservable<T>, c: &HermitianObservable<T>) -> Result<Self> {
        Ok(Self {
            entries: overlap_matrix(b, c)?,
        })
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.entries.iter().map(|r| r.iter().copied().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.entries.len())
            .map(|k| self.entries.iter().map(|r| r[k]).sum())
            .collect()
    }

    pub fn is_doubly_stochastic(&self, tol: T) -> bool {
        let one = T::one();
        self.entries.iter().flatten().all(|&u| u >= -tol)
            && self.row_sums().iter().chain(&self.column_sums()).all(|&s| (s - one).abs() <= tol)
    }

    /// Row vector times matrix: `Σ_j p_j U_jk`.
    pub fn push_forward(&self, p: &[T]) -> Vec<T> {
        let n = self.entries.len();
        (0..n)
            .map(|k| p.iter().zip(&self.entries).map(|(&pj, row)| pj * row[k]).sum())
            .collect()
    }
}

/// The optimal three-observable bound in its two readings.
#[derive(Clone, Debug, Serialize)]
pub struct TripleBound<T> {
    /// Sum of the two infima taken separately over the initial eigenstate.
    pub as_printed: T,
    /// Infimum of the summed terms over a common initial eigenstate.
    pub joint: T,
    /// First infimum: the two-observable bound for (A, B).
    pub first_stage: T,
    /// Second infimum alone: the optimal bound on the C entropy.
    pub second_stage: T,
    pub transition: TransitionMatrix<T>,
}

fn stage_terms<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
) -> Result<(Vec<T>, Vec<T>, TransitionMatrix<T>)> {
    ensure_same_dim(&[a.dim(), b.dim(), c.dim()])?;
    let ab = overlap_matrix(a, b)?;
    let transition = TransitionMatrix::new(b, c)?;
    let first: Vec<T> = ab.iter().map(|row| entropy_nats(row)).collect();
    let second: Vec<T> = ab.iter().map(|row| entropy_nats(&transition.push_forward(row))).collect();
    Ok((first, second, transition))
}

fn min_of<T: Real>(v: &[T]) -> T {
    v.iter().copied().fold(T::infinity(), T::min)
}

pub fn lambda_s_three<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
) -> Result<TripleBound<T>> {
    let (first, second, transition) = stage_terms(a, b, c)?;
    let first_stage = min_of(&first);
    let second_stage = min_of(&second);
    let joint = first
        .iter()
        .zip(&second)
        .map(|(&x, &y)| x + y)
        .fold(T::infinity(), T::min);
    Ok(TripleBound {
        as_printed: first_stage + second_stage,
        joint,
        first_stage,
        second_stage,
        transition,
    })
}

/// True iff every squared overlap is within `tol` of `1/n`.
pub fn is_complementary<T: Real>(a: &HermitianObservable<T>, b: &HermitianObservable<T>, tol: T) -> Result<bool> {
    let ov = overlap_matrix(a, b)?;
    let target = T::one() / T::lit(a.dim() as f64);
    Ok(ov.iter().flatten().all(|&u| (u - target).abs() <= tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StageComparison<T> {
    /// Optimal bound on the C entropy after measuring A then B.
    pub second_stage: T,
    /// Optimal bound on the B entropy after measuring A.
    pub first_stage: T,
    pub dominates: bool,
}

/// Checks that the bound on the third outcome is at least the bound on the
/// second. Holds because `U_jk` is doubly stochastic and doubly stochastic
/// maps never decrease entropy.
pub fn second_stage_dominates<T: Real>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
) -> Result<StageComparison<T>> {
    let (first, second, _) = stage_terms(a, b, c)?;
    let first_stage = min_of(&first);
    let second_stage = min_of(&second);
    Ok(StageComparison {
        second_stage,
        first_stage,
        dominates: second_stage >= first_stage - T::tolerance(1e-9),
    })
}

/// Analytic bounds for one ordered pair. Deutsch and Maassen–Uffink are
/// `None` when either spectrum is degenerate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub deutsch: Option<T>,
    pub partovi: T,
    pub maassen_uffink: Option<T>,
    pub krishna_parthasarathy: T,
    pub lambda_s: T,
    pub log_base: T,
}

impl<T: Real> BoundReport<T> {
    pub fn compute(a: &HermitianObservable<T>, b: &HermitianObservable<T>, config: &OptimizerConfig) -> Result<Self> {
        let nondegenerate = a.is_nondegenerate() && b.is_nondegenerate();
        Ok(Self {
            deutsch: if nondegenerate { Some(deutsch_bound(a, b)?) } else { None },
            partovi: partovi_bound(a, b)?,
            maassen_uffink: if nondegenerate { Some(maassen_uffink_bound(a, b)?) } else { None },
            krishna_parthasarathy: krishna_parthasarathy_bound(a, b)?,
            lambda_s: lambda_s_two_with(a, b, config)?,
            log_base: T::E(),
        })
    }

    /// Rescales a report currently in nats.
    pub fn in_base(&self, base: LogBase<T>) -> Self {
        let f = |x: T| base.from_nats(x);
        Self {
            deutsch: self.deutsch.map(f),
            partovi: f(self.partovi),
            maassen_uffink: self.maassen_uffink.map(f),
            krishna_parthasarathy: f(self.krishna_parthasarathy),
            lambda_s: f(self.lambda_s),
            log_base: base.value(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::Cplx;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn spin(theta_deg: f64) -> HermitianObservable<f64> {
        let t = theta_deg.to_radians();
        HermitianObservable::new(ComplexMatrix::from_real(2, &[t.cos(), t.sin(), t.sin(), -t.cos()])).unwrap()
    }
    fn sz() -> HermitianObservable<f64> {
        spin(0.0)
    }

    fn fourier_pair(n: usize) -> (HermitianObservable<f64>, HermitianObservable<f64>) {
        let eig: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let comp: Vec<Vec<Cplx<f64>>> = (0..n)
            .map(|k| (0..n).map(|j| Cplx::new(if j == k { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let s = 1.0 / (n as f64).sqrt();
        let four: Vec<Vec<Cplx<f64>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| Cplx::from_polar(s, 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64))
                    .collect()
            })
            .collect();
        (
            HermitianObservable::from_eigenbasis(&eig, &comp).unwrap(),
            HermitianObservable::from_eigenbasis(&eig, &four).unwrap(),
        )
    }

    #[test]
    fn reference_qubit_values() {
        let (z, x) = (sz(), spin(90.0));
        assert!((deutsch_bound(&z, &x).unwrap() - 0.317).abs() < 5e-4);
        assert!((deutsch_bound(&z, &spin(60.0)).unwrap() - 0.139).abs() < 5e-4);
        assert!((partovi_bound(&z, &x).unwrap() - 0.317).abs() < 5e-4);
        assert!((partovi_bound(&z, &spin(60.0)).unwrap() - 0.139).abs() < 5e-4);
        assert_abs_diff_eq!(maassen_uffink_bound(&z, &x).unwrap(), LN_2, epsilon = 1e-14);
        assert_abs_diff_eq!(krishna_parthasarathy_bound(&z, &x).unwrap(), LN_2, epsilon = 1e-14);
        assert_abs_diff_eq!(lambda_s_two(&z, &x).unwrap(), LN_2, epsilon = 1e-14);
        assert!((lambda_s_two(&z, &spin(30.0)).unwrap() - 0.246).abs() < 5e-4);
    }

    #[test]
    fn identical_observables_give_zero() {
        let a = crate::state::random_observable::<f64>(4, 3).unwrap();
        assert_abs_diff_eq!(deutsch_bound(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(maassen_uffink_bound(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_s_two(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_observable_gives_zero() {
        let id = HermitianObservable::new(ComplexMatrix::<f64>::identity(2)).unwrap();
        assert_abs_diff_eq!(partovi_bound(&id, &spin(37.0)).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(krishna_parthasarathy_bound(&id, &spin(37.0)).unwrap(), 0.0, epsilon = 1e-14);
        // The whole space is one eigenspace, which contains B eigenstates.
        assert!(lambda_s_two(&id, &spin(37.0)).unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_inputs_rejected_by_nondegenerate_bounds() {
        let id = HermitianObservable::new(ComplexMatrix::<f64>::identity(2)).unwrap();
        assert!(matches!(deutsch_bound(&id, &sz()), Err(Error::Degenerate(_))));
        assert!(maassen_uffink_bound(&sz(), &id).is_err());
        assert!(lambda_s_three(&id, &sz(), &sz()).is_err());
        assert!(is_complementary(&id, &sz(), 1e-9).is_err());
    }

    #[test]
    fn fourier_bases_are_complementary() {
        let (a, b) = fourier_pair(4);
        assert!(is_complementary(&a, &b, 1e-12).unwrap());
        assert_abs_diff_eq!(maassen_uffink_bound(&a, &b).unwrap(), 4f64.ln(), epsilon = 1e-12);
        assert!(is_complementary(&sz(), &spin(90.0), 1e-12).unwrap());
        assert!(!is_complementary(&sz(), &sz(), 1e-12).unwrap());
    }

    #[test]
    fn kp_dominates_partovi_on_random_pairs() {
        for seed in 0..200u64 {
            let dim = 2 + (seed % 5) as usize;
            let a = crate::state::random_degenerate_observable::<f64>(dim, seed).unwrap();
            let b = crate::state::random_observable::<f64>(dim, seed + 1000).unwrap();
            let kp = krishna_parthasarathy_bound(&a, &b).unwrap();
            let pa = partovi_bound(&a, &b).unwrap();
            assert!(kp >= pa - 1e-9, "seed {seed}: {kp} < {pa}");
        }
    }

    #[test]
    fn triple_reductions() {
        let a = sz();
        let b = spin(50.0);
        let c = spin(110.0);
        let t = lambda_s_three(&a, &a, &c).unwrap();
        let two = lambda_s_two(&a, &c).unwrap();
        assert_abs_diff_eq!(t.as_printed, two, epsilon = 1e-14);
        assert_abs_diff_eq!(t.joint, two, epsilon = 1e-14);

        let t = lambda_s_three(&a, &b, &b).unwrap();
        let two = lambda_s_two(&a, &b).unwrap();
        assert_abs_diff_eq!(t.as_printed, 2.0 * two, epsilon = 1e-14);
        assert_abs_diff_eq!(t.joint, 2.0 * two, epsilon = 1e-14);

        let t = lambda_s_three(&sz(), &spin(90.0), &sz()).unwrap();
        assert_abs_diff_eq!(t.as_printed, 2.0 * LN_2, epsilon = 1e-14);
        assert_abs_diff_eq!(t.joint, 2.0 * LN_2, epsilon = 1e-14);
        assert!(t.transition.is_doubly_stochastic(1e-12));
    }

    #[test]
    fn second_stage_examples() {
        let b = spin(90.0);
        let cmp = second_stage_dominates(&sz(), &b, &b).unwrap();
        assert_abs_diff_eq!(cmp.second_stage, cmp.first_stage, epsilon = 1e-14);
        assert!(cmp.dominates);
        for seed in 0..20 {
            let c = crate::state::random_observable::<f64>(2, seed).unwrap();
            assert!(second_stage_dominates(&sz(), &b, &c).unwrap().dominates);
        }
    }

    #[test]
    fn report_in_bits() {
        let r = BoundReport::compute(&sz(), &spin(90.0), &OptimizerConfig::default()).unwrap();
        let bits = r.in_base(LogBase::bits());
        assert_abs_diff_eq!(bits.lambda_s, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(bits.maassen_uffink.unwrap(), 1.0, epsilon = 1e-14);
    }
}
