//! Exact computations for the scalar ODE `v' = Σ a_i(x) v^(i+1)` with
//! piecewise-constant coefficients: noncommutative path signatures, the
//! D/L operator algebra, first-return maps and center generators.
//!
//! Every coefficient is a Gaussian rational, so all identities are checked
//! by exact equality.

pub mod error;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod operator;
pub mod paths;
pub mod poly;
pub mod return_map;
pub mod scalar;
pub mod series;
pub mod structure;
pub mod word;

pub use error::{Error, Result};
pub use lie::LieSeries;
pub use operator::{DLPoly, DLSeries};
pub use paths::{MomentFactor, MomentSpec, PathSpec, Segment};
pub use return_map::ReturnSeries;
pub use scalar::Scalar;
pub use series::FreeSeries;
pub use structure::DiagonalLieVector;
pub use word::Word;
