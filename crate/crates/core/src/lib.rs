//! Conditionally free probability on truncated moment data.
//!
//! The crate covers the combinatorics of non-crossing partitions with their
//! inner/outer block statistics, exact moment–cumulant transforms for the
//! free, c-free and boolean cases, c-free convolution of measure pairs (with
//! an independent evaluator of the c-free product state used as an oracle),
//! formal power series transforms, and the closed-form c-free Gaussian and
//! Poisson limit laws.

pub mod convolution;
pub mod cumulants;
pub mod error;
pub mod limit_laws;
pub mod partitions;
pub mod product_state;
pub mod quad;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use rational::Rational;

pub use convolution::{cfree_convolve, scaled_power, Dilation, Scaled, ScalingSpec};
pub use cumulants::{CFreeCumulantSequence, FreeCumulantSequence, MeasurePair, MomentSequence};
pub use limit_laws::{Atom, ClosedFormMeasure, Family, OrthoPolySeq};
pub use partitions::{CatalanPath, Partition};
pub use product_state::{StateFamily, Word};
pub use series::{CauchyEvaluator, CfLevel, PairSeries, TruncatedSeries};
