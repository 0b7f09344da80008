//! Closed-form bounds for two spin-½ components `σ·n₁`, `σ·n₂` at relative
//! angle `θ`, and the optimal distinct-measurement curve with its three
//! regimes.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianObservable};
use crate::optimize::{lambda_d_numeric, OptimizerConfig};
use crate::scalar::{Cplx, Real};
use crate::state::PureState;

/// Optimizer starts used in the middle regime.
pub const MIDDLE_REGIME_STARTS: usize = 32;

/// Tabulated curve values at θ = 0°, 10°, …, 90° (natural log, 3 decimals):
/// `[θ°, Λ_S, Λ_D, Λ_D2, Λ_D1]`.
pub const REFERENCE_TABLE: [[f64; 5]; 10] = [
    [0.0, 0.000, 0.000, 0.000, 0.000],
    [10.0, 0.045, 0.028, 0.008, 0.004],
    [20.0, 0.135, 0.089, 0.031, 0.015],
    [30.0, 0.246, 0.173, 0.069, 0.034],
    [40.0, 0.361, 0.271, 0.124, 0.061],
    [50.0, 0.469, 0.378, 0.197, 0.096],
    [60.0, 0.562, 0.492, 0.288, 0.139],
    [70.0, 0.633, 0.604, 0.399, 0.190],
    [80.0, 0.678, 0.673, 0.533, 0.249],
    [90.0, 0.693, 0.693, 0.693, 0.317],
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitVector3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> UnitVector3<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - T::one()).abs() > T::tolerance(1e-12) {
            return Err(Error::InvalidArgument(format!("|n|² = {n2}, expected 1")));
        }
        Ok(Self { x, y, z })
    }

    /// Direction at polar angle `theta` and azimuth `phi` (radians).
    pub fn from_angles(theta: T, phi: T) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    fn combine(&self, other: &Self, sign: T) -> Option<Self> {
        let (x, y, z) = (self.x + sign * other.x, self.y + sign * other.y, self.z + sign * other.z);
        let n = (x * x + y * y + z * z).sqrt();
        (n > T::tolerance(1e-12)).then(|| Self { x: x / n, y: y / n, z: z / n })
    }
}

fn pauli_matrix<T: Real>(n: &UnitVector3<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => Cplx::new(n.z, T::zero()),
        (1, 1) => Cplx::new(-n.z, T::zero()),
        (0, 1) => Cplx::new(n.x, -n.y),
        _ => Cplx::new(n.x, n.y),
    })
}

/// `σ·n`.
pub fn spin_observable<T: Real>(n: &UnitVector3<T>) -> Result<HermitianObservable<T>> {
    UnitVector3::new(n.x, n.y, n.z)?;
    HermitianObservable::new(pauli_matrix(n))
}

/// `(σ_z, σ·n)` with `n` in the x–z plane at angle `theta` from z.
pub fn spin_pair<T: Real>(theta: T) -> Result<(HermitianObservable<T>, HermitianObservable<T>)> {
    let zero = T::zero();
    Ok((
        spin_observable(&UnitVector3::from_angles(zero, zero))?,
        spin_observable(&UnitVector3::from_angles(theta, zero))?,
    ))
}

/// Eigenstates of `σ·m`, ascending eigenvalue; `None` when `m` vanishes.
fn axis_eigenstates<T: Real>(m: Option<UnitVector3<T>>) -> Result<Option<[PureState<T>; 2]>> {
    let Some(m) = m else { return Ok(None) };
    let obs = spin_observable(&m)?;
    let basis = obs.eigenbasis()?;
    Ok(Some([
        PureState::new(basis[0].to_vec())?,
        PureState::new(basis[1].to_vec())?,
    ]))
}

/// Eigenstates of `σ·(n₁ + n₂)` for the pair returned by [`spin_pair`].
pub fn sum_axis_eigenstates<T: Real>(theta: T) -> Result<Option<[PureState<T>; 2]>> {
    let zero = T::zero();
    let n1 = UnitVector3::from_angles(zero, zero);
    let n2 = UnitVector3::from_angles(theta, zero);
    axis_eigenstates(n1.combine(&n2, T::one()))
}

/// Eigenstates of `σ·(n₁ − n₂)` for the pair returned by [`spin_pair`].
pub fn difference_axis_eigenstates<T: Real>(theta: T) -> Result<Option<[PureState<T>; 2]>> {
    let zero = T::zero();
    let n1 = UnitVector3::from_angles(zero, zero);
    let n2 = UnitVector3::from_angles(theta, zero);
    axis_eigenstates(n1.combine(&n2, -T::one()))
}

/// `−p log p − (1−p) log(1−p)` in nats.
pub fn binary_entropy<T: Real>(p: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.ln() } else { T::zero() };
    term(p) + term(T::one() - p)
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    let slack = T::tolerance(1e-12);
    if theta.is_finite() && theta >= -slack && theta <= T::PI() + slack {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("angle {theta} outside [0, π]")))
    }
}

fn half_cos2<T: Real>(theta: T) -> T {
    let c = (theta / T::lit(2.0)).cos();
    c * c
}

/// Optimal successive-measurement bound: the entropy of `σ·n₂` in an
/// eigenstate of `σ·n₁`.
pub fn lambda_s_theta<T: Real>(theta: T) -> T {
    binary_entropy(half_cos2(theta))
}

/// Deutsch bound for the spin pair.
pub fn deutsch_theta<T: Real>(theta: T) -> T {
    let half = theta / T::lit(2.0);
    let m = half.cos().abs().max(half.sin().abs()).min(T::one());
    let two = T::lit(2.0);
    two * (two / (T::one() + m)).ln()
}

/// Maassen–Uffink bound for the spin pair.
pub fn mu_theta<T: Real>(theta: T) -> T {
    let c2 = half_cos2(theta);
    let m = c2.max(T::one() - c2).min(T::one());
    -m.ln()
}

/// Left side of the boundary equation `cos(θ/2)·log[(1+cos θ/2)/(1−cos θ/2)]`.
pub fn boundary_lhs<T: Real>(theta: T) -> T {
    let c = (theta / T::lit(2.0)).cos();
    c * ((T::one() + c) / (T::one() - c)).ln()
}

/// Boundary angle of the low regime: the root of `boundary_lhs(θ) = 2`.
///
/// The left side decreases monotonically from +∞ at 0 to 0 at π, so plain
/// bisection on a fixed bracket converges to machine precision.
pub fn theta_star<T: Real>() -> T {
    let two = T::lit(2.0);
    let f = |t: T| boundary_lhs(t) - two;
    let mut lo = T::PI() / T::lit(8.0);
    let mut hi = T::PI();
    debug_assert!(f(lo) > T::zero() && f(hi) < T::zero());
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Closed form valid for `θ ≤ θ*`, attained in eigenstates of `σ·(n₁+n₂)`.
pub fn low_regime_value<T: Real>(theta: T) -> T {
    let q = (theta / T::lit(4.0)).cos();
    T::lit(2.0) * binary_entropy(q * q)
}

/// Closed form valid for `θ ≥ π − θ*`, attained in eigenstates of `σ·(n₁−n₂)`.
pub fn high_regime_value<T: Real>(theta: T) -> T {
    let quarter = T::FRAC_PI_4();
    let t4 = theta / T::lit(4.0);
    let c1 = (quarter + t4).cos();
    let c2 = (quarter - t4).cos();
    binary_entropy(c1 * c1) + binary_entropy(c2 * c2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Low,
    MiddleNumeric,
    High,
}

impl Regime {
    pub fn of<T: Real>(theta: T) -> Self {
        let star = theta_star::<T>();
        if theta <= star {
            Regime::Low
        } else if theta >= T::PI() - star {
            Regime::High
        } else {
            Regime::MiddleNumeric
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::MiddleNumeric => "middle-numeric",
            Regime::High => "high",
        }
    }
}

/// Optimal distinct-measurement bound for the spin pair. The middle regime
/// has no closed form and is computed with [`lambda_d_numeric`] using
/// [`MIDDLE_REGIME_STARTS`] starts.
pub fn sanchez_ruiz_theta<T: Real>(theta: T, config: &OptimizerConfig) -> Result<(T, Regime)> {
    check_theta(theta)?;
    let regime = Regime::of(theta);
    let value = match regime {
        Regime::Low => low_regime_value(theta),
        Regime::High => high_regime_value(theta),
        Regime::MiddleNumeric => middle_regime_value(theta, config)?,
    };
    Ok((value, regime))
}

fn middle_regime_value<T: Real>(theta: T, config: &OptimizerConfig) -> Result<T> {
    let (a, b) = spin_pair(theta)?;
    Ok(lambda_d_numeric(&a, &b, &config.clone().with_starts(MIDDLE_REGIME_STARTS))?.value)
}

/// All four curves at one angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaCurvePoint<T> {
    /// Radians.
    pub theta: T,
    pub lambda_s: T,
    pub lambda_d: T,
    pub lambda_d2: T,
    pub lambda_d1: T,
    pub regime: Regime,
}

impl<T: Real> ThetaCurvePoint<T> {
    pub fn theta_degrees(&self) -> T {
        self.theta.to_degrees()
    }

    /// Smallest gap in `Λ_S ≥ Λ_D ≥ Λ_D2 ≥ 2·Λ_D1`.
    pub fn chain_slack(&self) -> T {
        let gaps = [
            self.lambda_s - self.lambda_d,
            self.lambda_d - self.lambda_d2,
            self.lambda_d2 - T::lit(2.0) * self.lambda_d1,
        ];
        gaps.into_iter().fold(T::infinity(), T::min)
    }

    pub fn chain_holds(&self, slack: T) -> bool {
        self.chain_slack() >= -slack
    }
}

/// Evaluates the curves with middle-regime values cached per angle.
pub struct ThetaCurve<T> {
    config: OptimizerConfig,
    cache: Mutex<HashMap<u64, T>>,
}

impl<T: Real> ThetaCurve<T> {
    pub fn new(config: OptimizerConfig) -> Self {
        Self {
            config,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn lambda_d(&self, theta: T) -> Result<(T, Regime)> {
        check_theta(theta)?;
        let regime = Regime::of(theta);
        if regime != Regime::MiddleNumeric {
            return sanchez_ruiz_theta(theta, &self.config);
        }
        let key = theta.as_f64().to_bits();
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return Ok((v, regime));
        }
        let v = middle_regime_value(theta, &self.config)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok((v, regime))
    }

    pub fn point(&self, theta: T) -> Result<ThetaCurvePoint<T>> {
        let (lambda_d, regime) = self.lambda_d(theta)?;
        Ok(ThetaCurvePoint {
            theta,
            lambda_s: lambda_s_theta(theta),
            lambda_d,
            lambda_d2: mu_theta(theta),
            lambda_d1: deutsch_theta(theta),
            regime,
        })
    }

    /// `steps` equally spaced angles from `min_deg` to `max_deg` inclusive.
    pub fn sweep_degrees(&self, min_deg: T, max_deg: T, steps: usize) -> Result<Vec<ThetaCurvePoint<T>>> {
        let grid = degree_grid(min_deg, max_deg, steps)?;
        grid.into_par_iter().map(|d| self.point(d.to_radians())).collect()
    }
}

/// Monotone grid of `steps` angles in degrees within `[0, 180]`.
pub fn degree_grid<T: Real>(min_deg: T, max_deg: T, steps: usize) -> Result<Vec<T>> {
    let max_angle = T::lit(180.0);
    let valid = steps >= 1
        && min_deg.is_finite()
        && max_deg.is_finite()
        && min_deg >= T::zero()
        && max_deg <= max_angle
        && min_deg <= max_deg;
    if !valid {
        return Err(Error::InvalidArgument(format!(
            "invalid sweep {min_deg}..{max_deg} with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![min_deg]);
    }
    let span = max_deg - min_deg;
    let last = T::lit((steps - 1) as f64);
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                max_deg
            } else {
                min_deg + span * T::lit(k as f64) / last
            }
        })
        .collect())
}

/// Rows for θ = 0°, 10°, …, 90°.
pub fn table1<T: Real>(config: &OptimizerConfig) -> Result<Vec<ThetaCurvePoint<T>>> {
    ThetaCurve::new(config.clone()).sweep_degrees(T::zero(), T::lit(90.0), 10)
}
