//! Scalar abstraction for the real-valued computations (betweenness,
//! density, similarity scores, reliability coefficients).
//!
//! Graph structure is integral throughout; only the derived measures are
//! generic. Concrete aliases live at the crate root (`Real` = f64).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive};

pub trait Scalar: Float + FromPrimitive + Sum + AddAssign + Debug + Display + Copy {
    /// Lossless-enough conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Sum + AddAssign + Debug + Display + Copy {}
