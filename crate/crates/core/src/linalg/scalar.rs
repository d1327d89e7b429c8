use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// The ground field of a vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(format!("unknown field `{other}` (expected real or complex)")),
        }
    }
}

/// Entries of vectors and matrices: either `f64` or `Complex64`.
///
/// Everything in the crate is written once against this trait so that the
/// real quotient by `{±1}` and the complex quotient by the unit circle share
/// one code path.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(re: f64) -> Self;
    /// `re + i·im`; `None` for the real field when `im != 0`.
    fn from_parts(re: f64, im: f64) -> Option<Self>;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn abs_sq(self) -> f64;

    fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }

    fn scale(self, factor: f64) -> Self {
        self * Self::from_real(factor)
    }

    /// `self / |self|`, or one when `self` is zero.
    fn unit_phase(self) -> Self {
        let r = self.abs();
        if r == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / r)
        }
    }

    fn is_finite(self) -> bool;

    /// Standard Gaussian draw; complex draws use independent real and
    /// imaginary parts.
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// A draw of modulus one: a random sign, or a uniform point on the circle.
    fn sample_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(re: f64) -> Self {
        re
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn sample_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(re: f64) -> Self {
        Complex64::new(re, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex64::new(re, im))
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn scale(self, factor: f64) -> Self {
        Complex64::new(self.re * factor, self.im * factor)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
    fn sample_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(1.0, theta)
    }
}

/// Inner product, conjugate-linear in the second argument.
pub fn inner<T: Scalar>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(T::zero(), |acc, (&a, &b)| acc + a * b.conj())
}

pub fn norm<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.abs_sq()).sum::<f64>().sqrt()
}

pub fn sub<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

pub fn add<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a + b).collect()
}

pub fn scaled<T: Scalar>(x: &[T], c: T) -> Vec<T> {
    x.iter().map(|&a| a * c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conjugation_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = Complex64::sample_gaussian(&mut rng);
            assert_eq!(z.conj().conj(), z);
            let zz = z * z.conj();
            assert!(zz.im.abs() < 1e-15);
            assert!((zz.re - z.abs_sq()).abs() < 1e-12);
            assert!(zz.re >= 0.0);
        }
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let c = Complex64::new(0.0, 1.0);
        let y = scaled(&x, c);
        // <x, i x> = -i <x, x>
        let ip = inner(&x, &y);
        assert!((ip - Complex64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn unimodular_draws_have_modulus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert!((Complex64::sample_unimodular(&mut rng).abs() - 1.0).abs() < 1e-15);
            assert_eq!(f64::sample_unimodular(&mut rng).abs(), 1.0);
        }
    }

    #[test]
    fn field_parses() {
        assert_eq!("Real".parse::<Field>().unwrap(), Field::Real);
        assert_eq!("complex".parse::<Field>().unwrap(), Field::Complex);
        assert!("quaternion".parse::<Field>().is_err());
    }
}
