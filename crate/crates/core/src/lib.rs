//! Entropic uncertainty for pairs and chains of projective measurements.
//!
//! Two settings are covered. For *distinct* measurements, each observable is
//! measured on a fresh copy of the state and the relevant quantity is the sum
//! of marginal Shannon entropies. For *successive* measurements, the
//! observables are measured one after another on the same system, giving a
//! joint distribution `Tr[P_B P_A ρ P_A P_B]` whose entropy is bounded below
//! more tightly.
//!
//! All numeric types are generic over [`Real`] (implemented for `f32` and
//! `f64`); the aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use entropic_core::{spin, OptimizerConfig};
//!
//! let theta = 60f64.to_radians();
//! let (a, b) = spin::spin_pair(theta).unwrap();
//! let lambda_s = entropic_core::bounds::lambda_s_two(&a, &b).unwrap();
//! assert!((lambda_s - 0.562).abs() < 5e-4);
//! let (lambda_d, _) = spin::sanchez_ruiz_theta(theta, &OptimizerConfig::default()).unwrap();
//! assert!(lambda_d < lambda_s);
//! ```

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod scalar;
pub mod spin;
pub mod state;

pub use bounds::{BoundReport, StageComparison, TransitionMatrix, TripleBound};
pub use entropy::{EntropyReport, LogBase, ProbabilityDistribution, VarianceReport};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianObservable, SpectralDecomposition};
pub use optimize::{OptimizerConfig, OptimizerResult};
pub use scalar::{Cplx, Real};
pub use spin::{Regime, ThetaCurve, ThetaCurvePoint, UnitVector3};
pub use state::{DensityOperator, JointDistribution, PureState, SampleCounts};

pub type C64 = Cplx<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Observable = HermitianObservable<f64>;
pub type Spectrum = SpectralDecomposition<f64>;
pub type State = PureState<f64>;
pub type Density = DensityOperator<f64>;
pub type Joint = JointDistribution<f64>;
pub type Distribution = ProbabilityDistribution<f64>;
pub type Entropies = EntropyReport<f64>;
pub type Variances = VarianceReport<f64>;
pub type Bounds = BoundReport<f64>;
pub type Triple = TripleBound<f64>;
pub type Transition = TransitionMatrix<f64>;
pub type CurvePoint = ThetaCurvePoint<f64>;
pub type Curve = ThetaCurve<f64>;
pub type Direction = UnitVector3<f64>;
