//! Scalar fields supported by the solver.
//!
//! Real and complex, single and double precision. Every numeric routine in
//! the crate is generic over [`Scalar`]; the associated [`Scalar::Real`]
//! type carries magnitudes, tolerances and norms.

use core::fmt::Debug;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::Float;

pub type C32 = Complex<f32>;
pub type C64 = Complex<f64>;

/// Storage tag for the scalar field of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real32,
    Real64,
    Complex64,
    Complex128,
}

impl Field {
    /// Wire tag used by the binary dump format.
    pub fn tag(self) -> u8 {
        match self {
            Field::Real32 => 1,
            Field::Real64 => 2,
            Field::Complex64 => 3,
            Field::Complex128 => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Field> {
        match tag {
            1 => Some(Field::Real32),
            2 => Some(Field::Real64),
            3 => Some(Field::Complex64),
            4 => Some(Field::Complex128),
            _ => None,
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Field::Complex64 | Field::Complex128)
    }

    /// Bytes per stored scalar.
    pub fn scalar_bytes(self) -> usize {
        match self {
            Field::Real32 => 4,
            Field::Real64 | Field::Complex64 => 8,
            Field::Complex128 => 16,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Real32 => "real32",
            Field::Real64 => "real64",
            Field::Complex64 => "complex64",
            Field::Complex128 => "complex128",
        }
    }
}

/// A field element the kernels can operate on.
///
/// `Wide` is the double-precision counterpart of the same field; problem
/// generators evaluate entries in `Wide` and demote them on assembly.
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
    + DivAssign
    + Sum
{
    type Real: RealScalar;
    type Wide: Scalar;

    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(re: Self::Real) -> Self;
    fn from_f64(re: f64) -> Self;
    fn real(self) -> Self::Real;
    fn imag(self) -> Self::Real;
    fn conj(self) -> Self;
    /// Modulus.
    fn modulus(self) -> Self::Real;
    /// Squared modulus; avoids the square root when only ordering matters.
    fn modulus_sqr(self) -> Self::Real;
    fn all_finite(self) -> bool;
    fn to_wide(self) -> Self::Wide;
    fn from_wide(w: Self::Wide) -> Self;
    /// Real and imaginary parts as doubles.
    fn to_parts(self) -> (f64, f64);
    /// Builds a value from double-precision parts; the imaginary part is
    /// dropped for real fields.
    fn from_parts(re: f64, im: f64) -> Self;

    fn scale(self, s: Self::Real) -> Self {
        self * Self::from_real(s)
    }
}

/// Real scalars: also the magnitude type of every field.
pub trait RealScalar: Scalar<Real = Self> + Float + PartialOrd {
    fn to_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty, $field:expr) => {
        impl Scalar for $t {
            type Real = $t;
            type Wide = f64;
            const FIELD: Field = $field;

            #[inline(always)]
            fn zero() -> Self {
                0.0
            }
            #[inline(always)]
            fn one() -> Self {
                1.0
            }
            #[inline(always)]
            fn from_real(re: Self::Real) -> Self {
                re
            }
            #[inline(always)]
            fn from_f64(re: f64) -> Self {
                re as $t
            }
            #[inline(always)]
            fn real(self) -> Self::Real {
                self
            }
            #[inline(always)]
            fn imag(self) -> Self::Real {
                0.0
            }
            #[inline(always)]
            fn conj(self) -> Self {
                self
            }
            #[inline(always)]
            fn modulus(self) -> Self::Real {
                Float::abs(self)
            }
            #[inline(always)]
            fn modulus_sqr(self) -> Self::Real {
                self * self
            }
            #[inline(always)]
            fn all_finite(self) -> bool {
                Float::is_finite(self)
            }
            #[inline(always)]
            fn to_wide(self) -> f64 {
                self as f64
            }
            #[inline(always)]
            fn from_wide(w: f64) -> Self {
                w as $t
            }
            #[inline(always)]
            fn to_parts(self) -> (f64, f64) {
                (self as f64, 0.0)
            }
            #[inline(always)]
            fn from_parts(re: f64, _im: f64) -> Self {
                re as $t
            }
        }

        impl RealScalar for $t {
            #[inline(always)]
            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32, Field::Real32);
impl_real!(f64, Field::Real64);

macro_rules! impl_complex {
    ($r:ty, $field:expr) => {
        impl Scalar for Complex<$r> {
            type Real = $r;
            type Wide = C64;
            const FIELD: Field = $field;

            #[inline(always)]
            fn zero() -> Self {
                Complex::new(0.0, 0.0)
            }
            #[inline(always)]
            fn one() -> Self {
                Complex::new(1.0, 0.0)
            }
            #[inline(always)]
            fn from_real(re: Self::Real) -> Self {
                Complex::new(re, 0.0)
            }
            #[inline(always)]
            fn from_f64(re: f64) -> Self {
                Complex::new(re as $r, 0.0)
            }
            #[inline(always)]
            fn real(self) -> Self::Real {
                self.re
            }
            #[inline(always)]
            fn imag(self) -> Self::Real {
                self.im
            }
            #[inline(always)]
            fn conj(self) -> Self {
                Complex::new(self.re, -self.im)
            }
            #[inline(always)]
            fn modulus(self) -> Self::Real {
                Float::hypot(self.re, self.im)
            }
            #[inline(always)]
            fn modulus_sqr(self) -> Self::Real {
                self.re * self.re + self.im * self.im
            }
            #[inline(always)]
            fn all_finite(self) -> bool {
                Float::is_finite(self.re) && Float::is_finite(self.im)
            }
            #[inline(always)]
            fn to_wide(self) -> C64 {
                Complex::new(self.re as f64, self.im as f64)
            }
            #[inline(always)]
            fn from_wide(w: C64) -> Self {
                Complex::new(w.re as $r, w.im as $r)
            }
            #[inline(always)]
            fn to_parts(self) -> (f64, f64) {
                (self.re as f64, self.im as f64)
            }
            #[inline(always)]
            fn from_parts(re: f64, im: f64) -> Self {
                Complex::new(re as $r, im as $r)
            }
        }
    };
}

impl_complex!(f32, Field::Complex64);
impl_complex!(f64, Field::Complex128);
