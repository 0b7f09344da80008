//! Quantum states, the Lüders collapse map and sequential (Wigner) joint
//! probabilities for chains of projective measurements.

use num_traits::Zero;
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::entropy::{clean_probabilities, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::linalg::{eigh, ensure_same_dim, inner, vector_norm, ComplexMatrix, HermitianObservable, MAX_DIM};
use crate::scalar::{norm_sqr, Cplx, Real};

/// Smallest dimension accepted by the random ensemble generators.
pub const MIN_RANDOM_DIM: usize = 2;

/// Unit vector in `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Cplx<T>>,
}

impl<T: Real> PureState<T> {
    /// Accepts amplitudes whose norm is 1 within `1e-10`.
    pub fn new(amplitudes: Vec<Cplx<T>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = vector_norm(&amplitudes);
        if !norm.is_finite() || (norm - T::one()).abs() > T::tolerance(1e-10) {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(mut amplitudes: Vec<Cplx<T>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = vector_norm(&amplitudes);
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm <= T::min_positive_value().sqrt() {
            return Err(Error::ZeroVector);
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::InvalidArgument(format!("basis index {k} >= {dim}")));
        }
        let mut v = vec![Cplx::zero(); dim];
        v[k] = Cplx::new(T::one(), T::zero());
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_unit_unchecked(amplitudes: Vec<Cplx<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn density(&self) -> DensityOperator<T> {
        DensityOperator {
            matrix: ComplexMatrix::outer(&self.amplitudes),
        }
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        norm_sqr(inner(&self.amplitudes, &other.amplitudes))
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        check_dim(matrix.dim())?;
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        if !matrix.is_hermitian(T::tolerance(1e-8)) {
            return Err(Error::NotHermitian(matrix.hermiticity_defect().as_f64()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tolerance(1e-10) || tr.im.abs() > T::tolerance(1e-10) {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let min = eigh(&matrix)?.eigenvalues[0];
        if min < -T::tolerance(1e-10) {
            return Err(Error::NotPositive(min.as_f64()));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: ComplexMatrix::identity(dim).scale(T::one() / T::lit(dim as f64)),
        })
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(weights: &[T]) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal(weights))
    }

    /// Convex combination `Σ w_k |ψ_k⟩⟨ψ_k|`; weights are normalized.
    pub fn mixture(components: &[(T, PureState<T>)]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("empty mixture".into()));
        }
        let dim = ensure_same_dim(&components.iter().map(|(_, s)| s.dim()).collect::<Vec<_>>())?;
        let total: T = components.iter().map(|(w, _)| *w).sum();
        if components.iter().any(|(w, _)| *w < T::zero()) || total <= T::zero() {
            return Err(Error::InvalidArgument("mixture weights must be nonnegative".into()));
        }
        let m = components
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, (w, s)| {
                &acc + &ComplexMatrix::outer(s.amplitudes()).scale(*w / total)
            });
        Ok(Self { matrix: m })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Tr[ρ M]`.
    pub fn expectation(&self, m: &ComplexMatrix<T>) -> Cplx<T> {
        (&self.matrix * m).trace()
    }

    /// `Tr[ρ P]` for a projector `P`, as a real number.
    pub fn probability(&self, projector: &ComplexMatrix<T>) -> T {
        self.expectation(projector).re
    }

    /// Outcome probabilities `Tr[ρ P(a_i)]`, after probability hygiene.
    pub fn outcome_distribution(
        &self,
        obs: &HermitianObservable<T>,
    ) -> Result<ProbabilityDistribution<T>> {
        ensure_same_dim(&[self.dim(), obs.dim()])?;
        let raw = obs.projectors().iter().map(|p| self.probability(p)).collect();
        ProbabilityDistribution::from_raw(raw)
    }

    /// Largest entry of `[ρ, M]`.
    pub fn commutator_defect(&self, m: &ComplexMatrix<T>) -> T {
        self.matrix.commutator(m).max_abs()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(dim, 1, MAX_DIM))
    }
}

/// Non-selective Lüders map `ρ ↦ Σ_i P(a_i) ρ P(a_i)`.
pub fn luders_map<T: Real>(
    rho: &DensityOperator<T>,
    obs: &HermitianObservable<T>,
) -> Result<DensityOperator<T>> {
    ensure_same_dim(&[rho.dim(), obs.dim()])?;
    let dim = rho.dim();
    let m = obs
        .projectors()
        .iter()
        .fold(ComplexMatrix::zeros(dim), |acc, p| &acc + &p.sandwich(rho.matrix()));
    Ok(DensityOperator::from_matrix_unchecked(m.hermitian_part()))
}

/// Nonnegative table over 2 or 3 ordered measurement outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution<T> {
    axes: Vec<Vec<T>>,
    table: Vec<T>,
}

impl<T: Real> JointDistribution<T> {
    /// Applies probability hygiene to a row-major table over `axes`.
    pub fn from_raw(axes: Vec<Vec<T>>, raw: Vec<T>) -> Result<Self> {
        let expected: usize = axes.iter().map(Vec::len).product();
        if axes.is_empty() || raw.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "table of {} cells does not match axes of size {expected}",
                raw.len()
            )));
        }
        Ok(Self {
            axes,
            table: clean_probabilities(raw)?,
        })
    }

    /// Outcome labels (distinct eigenvalues) per axis.
    pub fn axes(&self) -> &[Vec<T>] {
        &self.axes
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    /// Row-major cell values.
    pub fn table(&self) -> &[T] {
        &self.table
    }

    pub fn total(&self) -> T {
        self.table.iter().copied().sum()
    }

    pub fn get(&self, index: &[usize]) -> T {
        self.table[self.flat_index(index)]
    }

    fn flat_index(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.rank());
        index
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, ax)| {
                assert!(i < ax.len());
                acc * ax.len() + i
            })
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        for (slot, ax) in idx.iter_mut().zip(&self.axes).rev() {
            *slot = flat % ax.len();
            flat /= ax.len();
        }
        idx
    }

    /// Sums out every axis not listed in `keep` (which must be increasing).
    pub fn marginalize(&self, keep: &[usize]) -> JointDistribution<T> {
        assert!(keep.windows(2).all(|w| w[0] < w[1]) && keep.iter().all(|&k| k < self.rank()));
        let axes: Vec<Vec<T>> = keep.iter().map(|&k| self.axes[k].clone()).collect();
        let mut out = JointDistribution {
            table: vec![T::zero(); axes.iter().map(Vec::len).product()],
            axes,
        };
        for (flat, &p) in self.table.iter().enumerate() {
            let full = self.unflatten(flat);
            let sub: Vec<usize> = keep.iter().map(|&k| full[k]).collect();
            let j = out.flat_index(&sub);
            out.table[j] += p;
        }
        out
    }

    /// One-axis marginal.
    pub fn marginal(&self, axis: usize) -> ProbabilityDistribution<T> {
        ProbabilityDistribution::from_normalized_unchecked(self.marginalize(&[axis]).table)
    }
}

/// Wigner joint probability for an ordered chain of measurements:
/// `Tr[P_k ⋯ P_1 ρ P_1 ⋯ P_k]` for every outcome tuple.
pub fn wigner_joint<T: Real>(
    rho: &DensityOperator<T>,
    chain: &[&HermitianObservable<T>],
) -> Result<JointDistribution<T>> {
    if chain.is_empty() {
        return Err(Error::ChainLength { min: 1, max: usize::MAX, got: 0 });
    }
    let mut dims = vec![rho.dim()];
    dims.extend(chain.iter().map(|o| o.dim()));
    ensure_same_dim(&dims)?;

    fn descend<T: Real>(sigma: &ComplexMatrix<T>, chain: &[&HermitianObservable<T>], out: &mut Vec<T>) {
        match chain.split_first() {
            None => out.push(sigma.trace().re),
            Some((obs, rest)) => {
                for p in obs.projectors() {
                    descend(&p.sandwich(sigma), rest, out);
                }
            }
        }
    }

    let mut raw = Vec::new();
    descend(rho.matrix(), chain, &mut raw);
    let axes = chain.iter().map(|o| o.eigenvalues().to_vec()).collect();
    JointDistribution::from_raw(axes, raw)
}

pub fn wigner_joint_2<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
) -> Result<JointDistribution<T>> {
    wigner_joint(rho, &[a, b])
}

pub fn wigner_joint_3<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    c: &HermitianObservable<T>,
) -> Result<JointDistribution<T>> {
    wigner_joint(rho, &[a, b, c])
}

/// Raw sequential weights `‖P_k ⋯ P_1 ψ‖²` for a pure state, computed on
/// vectors. No hygiene is applied; this is the hot path of the optimizer.
pub fn sequential_weights_pure<T: Real>(
    psi: &[Cplx<T>],
    chain: &[&HermitianObservable<T>],
) -> Vec<T> {
    fn descend<T: Real>(phi: &[Cplx<T>], chain: &[&HermitianObservable<T>], out: &mut Vec<T>) {
        match chain.split_first() {
            None => out.push(phi.iter().map(|&z| norm_sqr(z)).sum()),
            Some((obs, rest)) => {
                for group in obs.decomposition().eigenvectors() {
                    let mut projected = vec![Cplx::zero(); phi.len()];
                    for v in group {
                        let c = inner(v, phi);
                        for (slot, &vk) in projected.iter_mut().zip(v.iter()) {
                            *slot += vk * c;
                        }
                    }
                    descend(&projected, rest, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    descend(psi, chain, &mut out);
    out
}

/// One-axis marginals of a joint distribution, in measurement order.
pub fn sequential_marginals<T: Real>(joint: &JointDistribution<T>) -> Vec<ProbabilityDistribution<T>> {
    (0..joint.rank()).map(|k| joint.marginal(k)).collect()
}

/// `max_j |Tr[ℰ(ρ)P^B(b_j)] − Tr[ρP^B(b_j)]|` where `ℰ` is the Lüders map of `A`.
pub fn interference_gap<T: Real>(
    rho: &DensityOperator<T>,
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
) -> Result<T> {
    ensure_same_dim(&[rho.dim(), a.dim(), b.dim()])?;
    let collapsed = luders_map(rho, a)?;
    Ok(b.projectors()
        .iter()
        .map(|p| (collapsed.probability(p) - rho.probability(p)).abs())
        .fold(T::zero(), |x, y| x.max(y)))
}

/// Outcome counts from repeated sampling of a measurement chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCounts {
    shape: Vec<usize>,
    counts: Vec<u64>,
    samples: u64,
    seed: u64,
}

impl SampleCounts {
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Row-major counts, same layout as [`JointDistribution::table`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.samples as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Counts summed over every axis except `axis`.
    pub fn marginal_counts(&self, axis: usize) -> Vec<u64> {
        let mut out = vec![0; self.shape[axis]];
        let stride: usize = self.shape[axis + 1..].iter().product();
        for (flat, &c) in self.counts.iter().enumerate() {
            out[(flat / stride) % self.shape[axis]] += c;
        }
        out
    }
}

/// Collapse tree: conditional outcome probabilities at each prefix.
struct CollapseNode {
    sampler: Option<WeightedIndex<f64>>,
    children: Vec<Option<CollapseNode>>,
}

impl CollapseNode {
    fn build<T: Real>(sigma: &ComplexMatrix<T>, chain: &[&HermitianObservable<T>]) -> Result<Self> {
        let Some((obs, rest)) = chain.split_first() else {
            return Ok(Self { sampler: None, children: Vec::new() });
        };
        let floor = T::tolerance(1e-14);
        let branches: Vec<(T, ComplexMatrix<T>)> = obs
            .projectors()
            .iter()
            .map(|p| {
                let s = p.sandwich(sigma);
                let w = s.trace().re;
                (if w > floor { w } else { T::zero() }, s)
            })
            .collect();
        let total: T = branches.iter().map(|(w, _)| *w).sum();
        if total <= T::zero() {
            return Err(Error::InvalidDistribution("collapse branch has zero total weight".into()));
        }
        let weights: Vec<f64> = branches.iter().map(|(w, _)| (*w / total).as_f64()).collect();
        let sampler = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let children = branches
            .into_iter()
            .map(|(w, s)| {
                if w.is_zero() {
                    Ok(None)
                } else {
                    Self::build(&s.scale(T::one() / w), rest).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { sampler: Some(sampler), children })
    }
}

/// Samples `n` outcome tuples by repeated collapse: draw an outcome with
/// probability `Tr[σP]`, replace `σ` by `PσP / Tr[PσP]`, continue down the
/// chain. The collapse tree is built once; each sample walks it with a
/// ChaCha8 generator seeded from `seed`.
pub fn sample_sequence<T: Real>(
    rho: &DensityOperator<T>,
    chain: &[&HermitianObservable<T>],
    n: u64,
    seed: u64,
) -> Result<SampleCounts> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    if chain.is_empty() {
        return Err(Error::ChainLength { min: 1, max: usize::MAX, got: 0 });
    }
    let mut dims = vec![rho.dim()];
    dims.extend(chain.iter().map(|o| o.dim()));
    ensure_same_dim(&dims)?;

    let root = CollapseNode::build(rho.matrix(), chain)?;
    let shape: Vec<usize> = chain.iter().map(|o| o.num_outcomes()).collect();
    let mut counts = vec![0u64; shape.iter().product()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let mut node = &root;
        let mut flat = 0usize;
        for &width in &shape {
            let sampler = node.sampler.as_ref().expect("interior node");
            let k = sampler.sample(&mut rng);
            flat = flat * width + k;
            node = node.children[k].as_ref().expect("sampled branch has positive weight");
        }
        counts[flat] += 1;
    }
    Ok(SampleCounts { shape, counts, samples: n, seed })
}

fn check_random_dim(dim: usize) -> Result<()> {
    if (MIN_RANDOM_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(dim, MIN_RANDOM_DIM, MAX_DIM))
    }
}

fn normal_vector<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Cplx<T>> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Cplx::new(T::lit(re), T::lit(im))
        })
        .collect()
}

/// Haar-random pure state from a normalized complex Gaussian vector.
pub fn random_pure_state<T: Real>(dim: usize, seed: u64) -> Result<PureState<T>> {
    check_random_dim(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PureState::normalized(normal_vector(&mut rng, dim))
}

/// Random pure state as a density operator.
pub fn random_state<T: Real>(dim: usize, seed: u64) -> Result<DensityOperator<T>> {
    Ok(random_pure_state(dim, seed)?.density())
}

/// Mixture of `rank` random pure states with uniform-random weights.
pub fn random_mixed_state<T: Real>(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator<T>> {
    check_random_dim(dim)?;
    if rank == 0 {
        return Err(Error::InvalidArgument("mixture rank must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comps: Vec<(T, PureState<T>)> = (0..rank)
        .map(|_| {
            let w: f64 = rng.random::<f64>() + 1e-3;
            PureState::normalized(normal_vector(&mut rng, dim)).map(|s| (T::lit(w), s))
        })
        .collect::<Result<_>>()?;
    DensityOperator::mixture(&comps)
}

/// `(G + G†)/2` with i.i.d. complex standard-normal `G`.
pub fn random_hermitian<T: Real>(dim: usize, seed: u64) -> Result<ComplexMatrix<T>> {
    check_random_dim(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Cplx::new(T::lit(re), T::lit(im))
    });
    Ok(g.hermitian_part())
}

pub fn random_observable<T: Real>(dim: usize, seed: u64) -> Result<HermitianObservable<T>> {
    HermitianObservable::new(random_hermitian(dim, seed)?)
}

/// Random orthonormal basis: the eigenvectors of a random Hermitian matrix.
pub fn random_basis<T: Real>(dim: usize, seed: u64) -> Result<Vec<Vec<Cplx<T>>>> {
    Ok(eigh(&random_hermitian::<T>(dim, seed)?)?.eigenvectors)
}

/// Observable with a random eigenbasis and small-integer eigenvalues, so
/// that degenerate eigenspaces are common for `dim ≥ 3`.
pub fn random_degenerate_observable<T: Real>(dim: usize, seed: u64) -> Result<HermitianObservable<T>> {
    let basis = random_basis::<T>(dim, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let levels = dim.div_ceil(2).max(2) as u32;
    let eig: Vec<T> = (0..dim)
        .map(|_| T::lit(rng.random_range(0..levels) as f64))
        .collect();
    HermitianObservable::from_eigenbasis(&eig, &basis)
}
