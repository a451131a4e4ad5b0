//! Compensated double-double arithmetic for the few places where plain
//! evaluation loses the answer: Sturm counts and Wronskian accumulation at
//! collapsed leading coefficients, and the shifted pencil solves that
//! polish eigenpairs there. Values are unevaluated hi + lo sums with
//! non-overlapping mantissas; only the operations those call sites need.

use crate::scalar::Real;
use num_complex::Complex;

pub(crate) fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let t = s - a;
    let e = (a - (s - t)) + (b - t);
    (s, e)
}

pub(crate) fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Double-double value (hi + lo, non-overlapping).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd<T> {
    pub(crate) hi: T,
    pub(crate) lo: T,
}

impl<T: Real> Dd<T> {
    pub(crate) fn renorm(hi: T, lo: T) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub(crate) fn from_t(v: T) -> Self {
        Dd { hi: v, lo: T::zero() }
    }

    /// a − b, error-free.
    pub(crate) fn diff(a: T, b: T) -> Self {
        let (s, e) = two_sum(a, -b);
        Dd { hi: s, lo: e }
    }

    /// a · b, error-free.
    pub(crate) fn prod(a: T, b: T) -> Self {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    pub(crate) fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::renorm(s, e + self.lo + o.lo)
    }

    pub(crate) fn sub(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, -o.hi);
        Dd::renorm(s, e + self.lo - o.lo)
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub(crate) fn mul_t(self, v: T) -> Self {
        let (p, e) = two_prod(self.hi, v);
        Dd::renorm(p, e + self.lo * v)
    }

    /// Multiplication by an exact power of two.
    pub(crate) fn scale2(self, s: T) -> Self {
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub(crate) fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_t(q1));
        Dd::renorm(q1, (r.hi + r.lo) / o.hi)
    }

    pub(crate) fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub(crate) fn collapse(self) -> T {
        self.hi + self.lo
    }

    pub(crate) fn signum_i(self) -> i8 {
        let v = if self.hi == T::zero() {
            self.lo
        } else {
            self.hi
        };
        if v > T::zero() {
            1
        } else if v < T::zero() {
            -1
        } else {
            0
        }
    }
}

/// Complex double-double, just enough for a pivoted tridiagonal solve.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cdd<T> {
    pub(crate) re: Dd<T>,
    pub(crate) im: Dd<T>,
}

impl<T: Real> Cdd<T> {
    pub(crate) fn zero() -> Self {
        Cdd {
            re: Dd::from_t(T::zero()),
            im: Dd::from_t(T::zero()),
        }
    }

    pub(crate) fn add(self, o: Self) -> Self {
        Cdd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub(crate) fn sub(self, o: Self) -> Self {
        Cdd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub(crate) fn mul_t(self, v: T) -> Self {
        Cdd {
            re: self.re.mul_t(v),
            im: self.im.mul_t(v),
        }
    }

    /// Multiplication by an exact power of two.
    pub(crate) fn scale2(self, s: T) -> Self {
        Cdd {
            re: self.re.scale2(s),
            im: self.im.scale2(s),
        }
    }

    /// |self|² as a double-double.
    pub(crate) fn norm_sqr_dd(self) -> Dd<T> {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub(crate) fn div(self, o: Self) -> Self {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(Cdd {
            re: o.re,
            im: o.im.neg(),
        });
        Cdd {
            re: num.re.div(den),
            im: num.im.div(den),
        }
    }

    pub(crate) fn neg(self) -> Self {
        Cdd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Squared magnitude of the leading parts; pivot choice only.
    pub(crate) fn mag_hi(self) -> T {
        self.re.hi * self.re.hi + self.im.hi * self.im.hi
    }

    pub(crate) fn is_zero(self) -> bool {
        self.re.hi == T::zero()
            && self.re.lo == T::zero()
            && self.im.hi == T::zero()
            && self.im.lo == T::zero()
    }

    pub(crate) fn to_c(self) -> Complex<T> {
        Complex::new(self.re.collapse(), self.im.collapse())
    }
}
