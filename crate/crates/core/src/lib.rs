pub mod fan;
pub mod fixtures;
pub mod grassmann;
pub mod intlin;
pub mod modp;
pub mod presentation;
pub mod projective;
pub mod qmatrix;
pub mod scalars;
pub mod torus;
pub mod verify;

pub use scalars::{Coefficient, Deformation, Numeric, PhaseExp, PhaseScalar, ScalarError, Symbolic, ThetaSpec};

pub type Rational = num_rational::Ratio<i64>;
pub type Phase = PhaseScalar<Rational>;
pub type Complex64 = num_complex::Complex<f64>;
pub type SymbolicQ = Symbolic<Rational>;
pub type NumericQ = Numeric<f64>;
