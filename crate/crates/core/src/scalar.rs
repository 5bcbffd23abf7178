//! Scalar abstraction so the signal pipeline runs in either f32 or f64.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar usable throughout the pipeline.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum<Self>
    + rustfft::FftNum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;
    /// Draw from N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Draw uniformly from [0, 1).
    fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn uniform_01<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}

/// Sample mean of a slice.
pub fn mean<F: Real>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    xs.iter().copied().sum::<F>() / F::of(xs.len() as f64)
}

/// Sample (n-1) standard deviation.
pub fn sample_std<F: Real>(xs: &[F]) -> F {
    if xs.len() < 2 {
        return F::zero();
    }
    let m = mean(xs);
    let ss: F = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    (ss / F::of((xs.len() - 1) as f64)).sqrt()
}

/// Population standard deviation.
pub fn population_std<F: Real>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    let m = mean(xs);
    let ss: F = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    (ss / F::of(xs.len() as f64)).sqrt()
}
