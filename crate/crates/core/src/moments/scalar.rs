use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

use crate::numeric::CompensatedSum;

/// Number type the recursions run in: `f64` for large tables, [`BigRational`]
/// for exact small-n checks.
pub trait Scalar:
    Clone + Num + FromPrimitive + ToPrimitive + PartialOrd + Debug + Send + Sync
{
    type Sum: RunningSum<Self>;

    fn from_count(x: usize) -> Self {
        Self::from_usize(x).expect("count fits the scalar type")
    }

    fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Accumulator for long sums (compensated for floats, exact otherwise).
pub trait RunningSum<T>: Default + Clone {
    fn add(&mut self, x: &T);
    fn value(&self) -> T;
}

impl RunningSum<f64> for CompensatedSum {
    fn add(&mut self, x: &f64) {
        CompensatedSum::add(self, *x)
    }

    fn value(&self) -> f64 {
        CompensatedSum::value(self)
    }
}

impl Scalar for f64 {
    type Sum = CompensatedSum;

    fn pow(&self, e: usize) -> Self {
        self.powi(e as i32)
    }
}

#[derive(Debug, Clone)]
pub struct ExactSum(BigRational);

impl Default for ExactSum {
    fn default() -> Self {
        Self(BigRational::zero())
    }
}

impl RunningSum<BigRational> for ExactSum {
    fn add(&mut self, x: &BigRational) {
        self.0 += x;
    }

    fn value(&self) -> BigRational {
        self.0.clone()
    }
}

impl Scalar for BigRational {
    type Sum = ExactSum;
}
