//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All linear algebra, optimizers and measures are written against [`Real`],
//! which is implemented for `f32` and `f64`. Complex entries are
//! `num_complex::Complex<T>` for the same `T`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C<T> = Complex<T>;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self;

    /// Clamps a requested tolerance to something this precision can resolve.
    fn tol(x: f64) -> Self {
        let t = Self::lit(x);
        let floor = Self::epsilon() * Self::lit(64.0);
        if t < floor {
            floor
        } else {
            t
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

#[inline]
pub(crate) fn cz<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> C<T> {
    C::new(phase.cos(), phase.sin())
}

pub(crate) fn random_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    C::new(T::sample_normal(rng), T::sample_normal(rng))
}
