//! Dense complex matrices, Hermitian eigendecomposition and spectral
//! resolution into orthogonal eigenprojectors.
//!
//! Matrices here are small (dimension 2 to 16), so everything is stored
//! row-major in a flat `Vec` and the eigensolver is a cyclic complex Jacobi
//! iteration. Jacobi is slower than tridiagonal QR for big matrices but it is
//! simple, fully generic over the scalar type, and delivers eigenvectors that
//! are orthonormal to working precision.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, Cplx, Real};

/// Largest dimension accepted by the exact routines.
pub const MAX_DIM: usize = 16;

const MAX_SWEEPS: usize = 64;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Cplx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Cplx::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows; fails unless the rows form a non-empty
    /// square array of finite values.
    pub fn from_rows(rows: Vec<Vec<Cplx<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::NotSquare);
        }
        let data: Vec<_> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Real matrix from a row-major slice of length `dim²`.
    pub fn from_real(dim: usize, entries: &[T]) -> Self {
        assert_eq!(entries.len(), dim * dim, "expected {} entries", dim * dim);
        Self {
            dim,
            data: entries.iter().map(|&x| Cplx::new(x, T::zero())).collect(),
        }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Cplx::new(d, T::zero());
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Cplx<T>]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Cplx<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Cplx::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Cplx<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `M v`.
    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Cplx::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `⟨v|M|v⟩`.
    pub fn quadratic_form(&self, v: &[Cplx<T>]) -> Cplx<T> {
        inner(v, &self.apply(v))
    }

    /// `self · other · self†`, the conjugation used by every collapse map.
    pub fn sandwich(&self, other: &Self) -> Self {
        &(self * other) * &self.adjoint()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&z| norm_sqr(z)).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Largest entry of `|M − M†|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `tol` relative to the largest entry (floored at 1).
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol * self.max_abs().max(T::one())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cplx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.check_same_dim(rhs);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.check_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.check_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner<T: Real>(u: &[Cplx<T>], v: &[Cplx<T>]) -> Cplx<T> {
    u.iter()
        .zip(v)
        .fold(Cplx::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn vector_norm<T: Real>(v: &[Cplx<T>]) -> T {
    v.iter().map(|&z| norm_sqr(z)).sum::<T>().sqrt()
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigh<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<Vec<Cplx<T>>>,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian to within `1e-8` of its largest entry; only
/// its Hermitian part is diagonalized.
pub fn eigh<T: Real>(h: &ComplexMatrix<T>) -> Result<Eigh<T>> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    if !h.is_hermitian(T::tolerance(1e-8)) {
        return Err(Error::NotHermitian(h.hermiticity_defect().as_f64()));
    }
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * scale * T::lit(n as f64);

    let mut converged = scale.is_zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<_> = (0..n).map(|i| v[(i, k)]).collect();
            fix_phase(&mut col);
            col
        })
        .collect();
    Ok(Eigh {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            s += norm_sqr(a[(p, q)]);
        }
    }
    (s + s).sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`. The unitary is a phase on `q`
/// (making the pivot real) followed by a real Givens rotation.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = T::lit(2.0);
    let tau = (aqq - app) / (two * mag);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let phase = (apq / mag).conj();
    let zero = T::zero();
    let vpp = Cplx::new(c, zero);
    let vpq = Cplx::new(s, zero);
    let vqp = phase * (-s);
    let vqq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = Cplx::zero();
    a[(q, p)] = Cplx::zero();
    a[(p, p)] = Cplx::new(a[(p, p)].re, zero);
    a[(q, q)] = Cplx::new(a[(q, q)].re, zero);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

/// Rotates the global phase so the largest component is real and positive.
fn fix_phase<T: Real>(v: &mut [Cplx<T>]) {
    let pivot = v
        .iter()
        .copied()
        .fold(Cplx::zero(), |best: Cplx<T>, z| {
            if z.norm() > best.norm() * T::lit(1.0 + 1e-12) {
                z
            } else {
                best
            }
        });
    let mag = pivot.norm();
    if mag.is_zero() {
        return;
    }
    let rot = (pivot / mag).conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
}

/// Distinct eigenvalues with their orthogonal eigenprojectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    projectors: Vec<ComplexMatrix<T>>,
    multiplicities: Vec<usize>,
    eigenvectors: Vec<Vec<Vec<Cplx<T>>>>,
}

impl<T: Real> SpectralDecomposition<T> {
    /// Strictly increasing distinct eigenvalues.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix<T>] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Orthonormal basis of each eigenspace.
    pub fn eigenvectors(&self) -> &[Vec<Vec<Cplx<T>>>] {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    /// `Σ a_i P_i`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let dim = self.projectors[0].dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(dim), |acc, (&a, p)| &acc + &p.scale(a))
    }
}

/// Default clustering tolerance: `1e-8 · max(spread, 1)`.
pub fn default_cluster_tol<T: Real>(sorted_eigenvalues: &[T]) -> T {
    let spread = match (sorted_eigenvalues.first(), sorted_eigenvalues.last()) {
        (Some(&lo), Some(&hi)) => hi - lo,
        _ => T::zero(),
    };
    T::tolerance(1e-8) * spread.max(T::one())
}

/// Groups eigenvalues whose consecutive gaps are at most `cluster_tol` into
/// one distinct eigenvalue (the cluster mean) with a summed projector.
pub fn spectral_resolution<T: Real>(
    h: &ComplexMatrix<T>,
    cluster_tol: Option<T>,
) -> Result<SpectralDecomposition<T>> {
    let Eigh {
        eigenvalues,
        eigenvectors,
    } = eigh(h)?;
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&eigenvalues));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..eigenvalues.len() {
        match groups.last_mut() {
            Some(g) if eigenvalues[k] - eigenvalues[*g.last().unwrap()] <= tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let dim = h.dim();
    let mut out = SpectralDecomposition {
        eigenvalues: Vec::with_capacity(groups.len()),
        projectors: Vec::with_capacity(groups.len()),
        multiplicities: Vec::with_capacity(groups.len()),
        eigenvectors: Vec::with_capacity(groups.len()),
    };
    for g in groups {
        let mean = g.iter().map(|&k| eigenvalues[k]).sum::<T>() / T::lit(g.len() as f64);
        let vecs: Vec<_> = g.iter().map(|&k| eigenvectors[k].clone()).collect();
        let proj = vecs
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, v| &acc + &ComplexMatrix::outer(v));
        out.eigenvalues.push(mean);
        out.projectors.push(proj);
        out.multiplicities.push(g.len());
        out.eigenvectors.push(vecs);
    }
    Ok(out)
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.is_hermitian(T::epsilon() * T::lit(16.0)) {
        let e = eigh(m)?;
        return Ok(e
            .eigenvalues
            .iter()
            .fold(T::zero(), |acc, &x| acc.max(x.abs())));
    }
    let gram = &m.adjoint() * m;
    let e = eigh(&gram.hermitian_part())?;
    let top = e.eigenvalues.last().copied().unwrap_or_else(T::zero);
    Ok(top.max(T::zero()).sqrt())
}

/// A Hermitian matrix together with its spectral resolution.
#[derive(Clone, Debug)]
pub struct HermitianObservable<T> {
    matrix: ComplexMatrix<T>,
    decomposition: SpectralDecomposition<T>,
}

impl<T: Real> HermitianObservable<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_cluster_tol(matrix, None)
    }

    pub fn with_cluster_tol(matrix: ComplexMatrix<T>, cluster_tol: Option<T>) -> Result<Self> {
        let dim = matrix.dim();
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::DimensionOutOfRange(dim, 1, MAX_DIM));
        }
        let decomposition = spectral_resolution(&matrix, cluster_tol)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
            decomposition,
        })
    }

    /// `Σ_k λ_k |v_k⟩⟨v_k|` for an orthonormal basis `v_k`.
    pub fn from_eigenbasis(eigenvalues: &[T], basis: &[Vec<Cplx<T>>]) -> Result<Self> {
        if eigenvalues.len() != basis.len() || basis.is_empty() {
            return Err(Error::InvalidArgument(
                "one eigenvalue per basis vector required".into(),
            ));
        }
        let dim = basis[0].len();
        if basis.iter().any(|v| v.len() != dim) || basis.len() != dim {
            return Err(Error::NotSquare);
        }
        let m = eigenvalues
            .iter()
            .zip(basis)
            .fold(ComplexMatrix::zeros(dim), |acc, (&l, v)| {
                &acc + &ComplexMatrix::outer(v).scale(l)
            });
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn decomposition(&self) -> &SpectralDecomposition<T> {
        &self.decomposition
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Number of distinct outcomes.
    pub fn num_outcomes(&self) -> usize {
        self.decomposition.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        self.decomposition.eigenvalues()
    }

    pub fn projectors(&self) -> &[ComplexMatrix<T>] {
        self.decomposition.projectors()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.decomposition.is_nondegenerate()
    }

    /// The eigenbasis `|a_i⟩`, one vector per distinct eigenvalue. Only
    /// defined for nondegenerate spectra.
    pub fn eigenbasis(&self) -> Result<Vec<&[Cplx<T>]>> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate("an eigenbasis indexed by outcome needs a nondegenerate spectrum"));
        }
        Ok(self
            .decomposition
            .eigenvectors()
            .iter()
            .map(|g| g[0].as_slice())
            .collect())
    }

    /// `⟨ψ|P_i|ψ⟩` for every outcome, computed from the eigenvectors.
    pub fn outcome_weights(&self, psi: &[Cplx<T>]) -> Vec<T> {
        self.decomposition
            .eigenvectors()
            .iter()
            .map(|g| g.iter().map(|v| norm_sqr(inner(v, psi))).sum())
            .collect()
    }
}

/// Fails with [`Error::DimensionMismatch`] unless all dimensions agree.
pub(crate) fn ensure_same_dim(dims: &[usize]) -> Result<usize> {
    let first = dims[0];
    match dims.iter().find(|&&d| d != first) {
        Some(&d) => Err(Error::DimensionMismatch(first, d)),
        None => Ok(first),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix<f64> {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn diagonal_eigh_sorts_ascending() {
        let e = eigh(&ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
        assert_abs_diff_eq!(e.eigenvectors[0][1].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvectors[1][0].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_eigh() {
        let e = eigh(&ComplexMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        assert_abs_diff_eq!(inner(&e.eigenvectors[0], &e.eigenvectors[1]).norm(), 0.0);
    }

    #[test]
    fn spin_overlap_at_sixty_degrees() {
        let t = 60f64.to_radians();
        let n = ComplexMatrix::from_real(2, &[t.cos(), t.sin(), t.sin(), -t.cos()]);
        let en = eigh(&n).unwrap();
        let ez = eigh(&ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap();
        // |+z⟩ vs |+n⟩ are the last vectors of each ascending list.
        let ov = inner(&ez.eigenvectors[1], &en.eigenvectors[1]).norm_sqr();
        assert_abs_diff_eq!(ov, 0.75, epsilon = 1e-14);
    }

    #[test]
    fn complex_hermitian_residual() {
        let h = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let e = eigh(&h).unwrap();
        for (l, v) in e.eigenvalues.iter().zip(&e.eigenvectors) {
            let hv = h.apply(v);
            let r: f64 = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * l).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-13, "residual {r}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(spectral_resolution(&m, None), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn exact_degeneracy_clusters() {
        let d = spectral_resolution(&ComplexMatrix::diagonal(&[1.0, 1.0, 2.0]), Some(1e-8)).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 2.0]);
        assert_eq!(d.multiplicities(), &[2, 1]);
    }

    #[test]
    fn near_degeneracy_clusters() {
        let d = spectral_resolution(&ComplexMatrix::diagonal(&[1.0, 1.0 + 1e-12, 2.0]), Some(1e-8))
            .unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.multiplicities(), &[2, 1]);
    }

    #[test]
    fn sigma_z_projectors() {
        let d = spectral_resolution(&ComplexMatrix::diagonal(&[1.0, -1.0]), None).unwrap();
        assert_eq!(d.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(d.projectors()[0], ComplexMatrix::diagonal(&[0.0, 1.0]));
        assert_eq!(d.projectors()[1], ComplexMatrix::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn operator_norm_examples() {
        assert_abs_diff_eq!(operator_norm(&ComplexMatrix::<f64>::identity(5)).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(operator_norm(&ComplexMatrix::diagonal(&[3.0, -4.0])).unwrap(), 4.0, epsilon = 1e-14);
        let pz = ComplexMatrix::diagonal(&[1.0, 0.0]);
        let px = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]);
        // Eigenvalues of the projector sum are 1 ± |⟨a|b⟩| with |⟨a|b⟩| = 1/√2.
        assert_abs_diff_eq!(
            operator_norm(&(&pz + &px)).unwrap(),
            1.0 + 0.5f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn operator_norm_non_hermitian() {
        // Singular values of [[0, 2], [0, 0]] are 2 and 0.
        let m = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.0, 0.0]);
        assert_abs_diff_eq!(operator_norm(&m).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn single_precision_eigh() {
        let m: ComplexMatrix<f32> = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let e = eigh(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-6);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn observable_from_eigenbasis_round_trips() {
        let obs = HermitianObservable::new(sigma_x()).unwrap();
        let basis: Vec<Vec<_>> = obs.eigenbasis().unwrap().iter().map(|v| v.to_vec()).collect();
        let again = HermitianObservable::from_eigenbasis(obs.eigenvalues(), &basis).unwrap();
        assert!((&again.matrix().clone() - &sigma_x()).max_abs() < 1e-14);
    }

    #[test]
    fn degenerate_observable_has_no_eigenbasis() {
        let obs = HermitianObservable::new(ComplexMatrix::<f64>::identity(2)).unwrap();
        assert!(obs.eigenbasis().is_err());
        assert_eq!(obs.num_outcomes(), 1);
    }
}
