//! Scaled floating-point values for recurrence evaluation.
//!
//! The degree-n polynomials here grow like ((x²+1)/4)^(n/2), which leaves
//! `f64` range near n ≈ 600 for moderate x and far earlier for large x. All
//! recurrence evaluations therefore carry values as mantissa × 2^exp2 with
//! the exponent in an `i64`: [`PolyValue`] for real quantities and
//! [`CPolyValue`] for complex ones. Mantissas are kept in [1/2, 2) (norm, in
//! the complex case); zero is canonical with exp2 = 0.

use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Exponent gap beyond which the smaller addend cannot affect the sum.
const ALIGN_GUARD: i64 = 128;

/// Chunk size for applying large power-of-two rescalings without over- or
/// underflowing the intermediate factor.
const CHUNK: i64 = 512;

#[inline]
fn scale_by_exp2<T: Real>(mut v: T, mut k: i64) -> T {
    while k != 0 {
        let step = k.clamp(-CHUNK, CHUNK);
        v = v * T::of(2.0).powi(step as i32);
        k -= step;
    }
    v
}

/// Real value m·2^e with |m| ∈ [1/2, 2) or m = 0 (then e = 0).
#[derive(Clone, Copy, Debug)]
pub struct PolyValue<T> {
    m: T,
    e: i64,
}

impl<T: Real> PolyValue<T> {
    /// Wraps a finite value, normalizing the mantissa.
    #[must_use]
    pub fn new(v: T) -> Self {
        Self { m: v, e: 0 }.normalized()
    }

    /// Wraps m·2^k, normalizing the mantissa.
    #[must_use]
    pub fn with_exp2(m: T, k: i64) -> Self {
        Self { m, e: k }.normalized()
    }

    #[must_use]
    pub fn zero() -> Self {
        Self { m: T::zero(), e: 0 }
    }

    #[must_use]
    pub fn one() -> Self {
        Self { m: T::one(), e: 0 }
    }

    /// Mantissa component.
    #[must_use]
    pub fn mantissa(&self) -> T {
        self.m
    }

    /// Power-of-two exponent component.
    #[must_use]
    pub fn exp2(&self) -> i64 {
        self.e
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Collapses to a plain scalar; overflows to ±inf (underflows to 0) when
    /// the exponent leaves the scalar's range.
    #[must_use]
    pub fn value(&self) -> T {
        scale_by_exp2(self.m, self.e)
    }

    /// log2 of |self|, or None for zero. Exact up to mantissa rounding.
    #[must_use]
    pub fn log2_abs(&self) -> Option<T> {
        if self.is_zero() {
            None
        } else {
            Some(self.m.abs().log2() + T::of(self.e as f64))
        }
    }

    /// Sign of the value: -1, 0, or +1.
    #[must_use]
    pub fn signum(&self) -> i8 {
        if self.m.is_zero() {
            0
        } else if self.m > T::zero() {
            1
        } else {
            -1
        }
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            return Self::zero();
        }
        let a = self.m.abs();
        let half = T::of(0.5);
        let two = T::of(2.0);
        if a >= half && a < two {
            return self;
        }
        let k = a
            .log2()
            .floor()
            .to_i64()
            .expect("finite mantissa exponent");
        self.m = scale_by_exp2(self.m, -k);
        self.e += k;
        // log2/floor rounding can land one bin off; nudge.
        while self.m.abs() >= two {
            self.m = self.m * half;
            self.e += 1;
        }
        while self.m.abs() < half {
            self.m = self.m * two;
            self.e -= 1;
        }
        self
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        Self {
            m: -self.m,
            e: if self.m.is_zero() { 0 } else { self.e },
        }
    }

    #[must_use]
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m * rhs.m,
            e: self.e + rhs.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn mul_scalar(&self, s: T) -> Self {
        if self.is_zero() || s.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m * s,
            e: self.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn div(&self, rhs: &Self) -> Self {
        debug_assert!(!rhs.is_zero(), "scaled division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m / rhs.m,
            e: self.e - rhs.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= rhs.e {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let diff = hi.e - lo.e;
        if diff > ALIGN_GUARD {
            return *hi;
        }
        Self {
            m: hi.m + scale_by_exp2(lo.m, -diff),
            e: hi.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Integer power by repeated squaring.
    #[must_use]
    pub fn powi(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Promotes to a complex scaled value.
    #[must_use]
    pub fn to_complex(&self) -> CPolyValue<T> {
        CPolyValue {
            m: Complex::new(self.m, T::zero()),
            e: self.e,
        }
    }
}

/// Complex value m·2^e with |m| ∈ [1/2, 2) or m = 0 (then e = 0).
#[derive(Clone, Copy, Debug)]
pub struct CPolyValue<T> {
    m: Complex<T>,
    e: i64,
}

impl<T: Real> CPolyValue<T> {
    #[must_use]
    pub fn new(v: Complex<T>) -> Self {
        Self { m: v, e: 0 }.normalized()
    }

    #[must_use]
    pub fn zero() -> Self {
        Self {
            m: Complex::zero(),
            e: 0,
        }
    }

    #[must_use]
    pub fn one() -> Self {
        Self {
            m: Complex::new(T::one(), T::zero()),
            e: 0,
        }
    }

    #[must_use]
    pub fn mantissa(&self) -> Complex<T> {
        self.m
    }

    #[must_use]
    pub fn exp2(&self) -> i64 {
        self.e
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    #[must_use]
    pub fn value(&self) -> Complex<T> {
        Complex::new(scale_by_exp2(self.m.re, self.e), scale_by_exp2(self.m.im, self.e))
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            return Self::zero();
        }
        let a = self.m.norm();
        let half = T::of(0.5);
        let two = T::of(2.0);
        if a >= half && a < two {
            return self;
        }
        let k = a
            .log2()
            .floor()
            .to_i64()
            .expect("finite mantissa exponent");
        self.m = Complex::new(scale_by_exp2(self.m.re, -k), scale_by_exp2(self.m.im, -k));
        self.e += k;
        while self.m.norm() >= two {
            self.m = self.m.scale(half);
            self.e += 1;
        }
        while self.m.norm() < half {
            self.m = self.m.scale(two);
            self.e -= 1;
        }
        self
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            m: -self.m,
            e: self.e,
        }
    }

    #[must_use]
    pub fn conj(&self) -> Self {
        Self {
            m: self.m.conj(),
            e: self.e,
        }
    }

    #[must_use]
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m * rhs.m,
            e: self.e + rhs.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn mul_c(&self, s: Complex<T>) -> Self {
        if self.is_zero() || s.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m * s,
            e: self.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn mul_scalar(&self, s: T) -> Self {
        self.mul_c(Complex::new(s, T::zero()))
    }

    #[must_use]
    pub fn div(&self, rhs: &Self) -> Self {
        debug_assert!(!rhs.is_zero(), "scaled division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m / rhs.m,
            e: self.e - rhs.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return *rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= rhs.e {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let diff = hi.e - lo.e;
        if diff > ALIGN_GUARD {
            return *hi;
        }
        let shifted = Complex::new(scale_by_exp2(lo.m.re, -diff), scale_by_exp2(lo.m.im, -diff));
        Self {
            m: hi.m + shifted,
            e: hi.e,
        }
        .normalized()
    }

    #[must_use]
    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    #[must_use]
    pub fn powi(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_invariant_holds() {
        for v in [3.0e300_f64, -7.25e-300, 1.0, -0.5, 1.9999, 123456.789] {
            let p = PolyValue::new(v);
            let a = p.mantissa().abs();
            assert!((0.5..2.0).contains(&a), "mantissa {a} out of range for {v}");
            assert!((p.value() - v).abs() <= 1e-15 * v.abs());
        }
        let z = PolyValue::<f64>::new(0.0);
        assert!(z.is_zero());
        assert_eq!(z.exp2(), 0);
    }

    #[test]
    fn arithmetic_matches_plain_f64_in_range() {
        let a = PolyValue::new(3.5_f64);
        let b = PolyValue::new(-1.25_f64);
        assert_eq!(a.mul(&b).value(), 3.5 * -1.25);
        assert_eq!(a.add(&b).value(), 3.5 - 1.25);
        assert_eq!(a.sub(&b).value(), 3.5 + 1.25);
        assert_eq!(a.div(&b).value(), 3.5 / -1.25);
        assert_eq!(a.powi(3).value(), 3.5_f64.powi(3));
    }

    #[test]
    fn survives_far_beyond_f64_range() {
        // (2^1000)^3 = 2^3000, far outside f64.
        let big = PolyValue::new(2.0_f64).powi(1000).powi(3);
        assert_eq!(big.exp2(), 3000);
        assert_eq!(big.mantissa(), 1.0);
        let ratio = big.div(&big);
        assert_eq!(ratio.value(), 1.0);
    }

    #[test]
    fn aligned_addition_drops_negligible_addend() {
        let big = PolyValue::new(1.0_f64).powi(1); // 2^0
        let tiny = PolyValue { m: 1.0, e: -400 };
        assert_eq!(big.add(&tiny).value(), 1.0);
    }

    #[test]
    fn complex_norm_stays_normalized() {
        let v = CPolyValue::new(Complex::new(3.0e200_f64, -4.0e200));
        let n = v.mantissa().norm();
        assert!((0.5..2.0).contains(&n));
        let w = v.mul(&v).mul(&v); // norm 1.25e602, exponent territory
        let n3 = w.mantissa().norm();
        assert!((0.5..2.0).contains(&n3));
        let back = w.div(&v).div(&v);
        let rel = (back.value() - v.value()).norm() / v.value().norm();
        assert!(rel < 1e-14);
    }

    #[test]
    fn f32_instantiation_works() {
        let a = PolyValue::new(6.5_f32);
        let b = PolyValue::new(0.125_f32);
        assert_eq!(a.mul(&b).value(), 6.5f32 * 0.125);
    }
}
