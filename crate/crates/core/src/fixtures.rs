//! Built-in coefficient families with closed-form data: sequences, polynomial
//! closed forms, Verblunsky coefficients, and the associated densities on the
//! circle and the real line. Every other module's tests use these as ground
//! truth.

use crate::error::{Error, Result};
use crate::recurrence::CoefficientData;
use crate::scalar::Real;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

/// The four built-in families.
///
/// - `Ex1`: c ≡ 0 with d = {1/2, 1/4, 1/4, …}; uniform circle measure.
/// - `Ex2`: size-κ point mass at ζ = i added to the uniform measure, with
///   the s-rotated coefficient tables (period-4 case split).
/// - `Ex3`: c ≡ 0, d ≡ 1/4 at s = 0; circle weight sin²(θ/2)/π.
/// - `Ex4`: two-parameter weight e^{(π−θ)η}[sin²(θ/2)]^{λ+1}; reduces to
///   `Ex3` at λ = η = 0. No s-family data is available for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleSpec<T> {
    Ex1,
    Ex2 { kappa: T, s: T },
    Ex3 { s: T },
    Ex4 { lambda: T, eta: T, s: Option<T> },
}

impl<T: Real> ExampleSpec<T> {
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            ExampleSpec::Ex1 => "ex1",
            ExampleSpec::Ex2 { .. } => "ex2",
            ExampleSpec::Ex3 { .. } => "ex3",
            ExampleSpec::Ex4 { .. } => "ex4",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ExampleSpec::Ex1 | ExampleSpec::Ex3 { .. } => Ok(()),
            ExampleSpec::Ex2 { kappa, .. } => {
                if kappa <= T::zero() || kappa >= T::one() {
                    return Err(Error::ParameterOutOfDomain {
                        name: "kappa",
                        value: kappa.to_f64().unwrap_or(f64::NAN),
                        domain: "(0, 1)",
                    });
                }
                Ok(())
            }
            ExampleSpec::Ex4 { lambda, .. } => {
                if lambda <= -T::one() {
                    return Err(Error::ParameterOutOfDomain {
                        name: "lambda",
                        value: lambda.to_f64().unwrap_or(f64::NAN),
                        domain: "(-1, inf)",
                    });
                }
                Ok(())
            }
        }
    }
}

fn unsupported(example: &'static str, what: &'static str) -> Error {
    Error::UnsupportedExample { example, what }
}

/// Rising factorial (z)_n = z(z+1)⋯(z+n−1).
#[must_use]
pub fn pochhammer<T: Real>(z: Complex<T>, n: usize) -> Complex<T> {
    let mut p = Complex::one();
    for j in 0..n {
        p = p * (z + Complex::new(T::of(j as f64), T::zero()));
    }
    p
}

fn pochhammer_real<T: Real>(a: T, n: usize) -> T {
    let mut p = T::one();
    for j in 0..n {
        p = p * (a + T::of(j as f64));
    }
    p
}

/// Terminating Gauss sum Σ_{k=0..n} ((−n)_k (a2)_k / ((c)_k k!)) w^k by
/// forward term recurrence.
pub fn eval_2f1_poly<T: Real>(
    n: usize,
    a2: Complex<T>,
    c: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    let mut sum = Complex::<T>::one();
    let mut term = Complex::<T>::one();
    for k in 0..n {
        let kf = T::of(k as f64);
        let denom = c + Complex::new(kf, T::zero());
        if denom.norm() < T::of(1e-300) {
            return Err(Error::PoleInC { k });
        }
        let minus_n = Complex::new(kf - T::of(n as f64), T::zero());
        let rising = a2 + Complex::new(kf, T::zero());
        term = term * minus_n * rising * w / (denom.scale(kf + T::one()));
        sum = sum + term;
    }
    Ok(sum)
}

const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn ln_gamma_f64(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * pi).sin();
        return Complex64::new(pi, 0.0).ln() - s.ln() - ln_gamma_f64(Complex64::one() - z);
    }
    let z = z - Complex64::one();
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        x += Complex64::new(coef, 0.0) / (z + Complex64::new(i as f64, 0.0));
    }
    let t = z + Complex64::new(7.5, 0.0);
    Complex64::new(0.5 * (2.0 * pi).ln(), 0.0) + (z + Complex64::new(0.5, 0.0)) * t.ln() - t
        + x.ln()
}

/// Principal branch of log Γ(z).
#[must_use]
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let zf = Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    );
    let r = ln_gamma_f64(zf);
    Complex::new(T::of(r.re), T::of(r.im))
}

// Period-4 coefficient tables for Ex2, transcribed term by term; w(j) stands
// for 1 + jκ. Valid for n ≥ 2.
fn ex2_c<T: Real>(n: usize, kappa: T, s: T) -> T {
    debug_assert!(n >= 2);
    let m4 = ((n - 2) / 4 * 4) as i64; // 4m
    let r = (n - 2) % 4;
    let one = T::one();
    let two = T::of(2.0);
    let four = T::of(4.0);
    let w = |j: i64| one + T::of(j as f64) * kappa;
    let om = one - kappa;
    let om2 = om * om;
    let s2 = four * s * s;
    let sk = four * s * kappa * om;
    let (pre, num, den) = match r {
        0 => (
            -kappa / w(m4),
            om2 * w(m4 + 1) + sk - s2 * w(m4 - 1),
            om2 * w(m4 + 1) + s2 * w(m4 - 1),
        ),
        1 => (
            -four * s * kappa / w(m4 + 1),
            om * w(m4 + 1) + two * s * kappa,
            om2 * w(m4 + 1) + sk + s2 * w(m4 + 1),
        ),
        2 => (
            kappa / w(m4 + 2),
            om2 * w(m4 + 1) + sk - s2 * w(m4 + 3),
            om2 * w(m4 + 1) + s2 * w(m4 + 3),
        ),
        _ => (
            -two * kappa * om / w(m4 + 3),
            om * kappa - two * s * w(m4 + 3),
            om2 * w(m4 + 3) - sk + s2 * w(m4 + 3),
        ),
    };
    pre * num / den
}

fn ex2_ell<T: Real>(n: usize, kappa: T, s: T) -> T {
    debug_assert!(n >= 2);
    let m4 = ((n - 2) / 4 * 4) as i64;
    let r = (n - 2) % 4;
    let one = T::one();
    let two = T::of(2.0);
    let four = T::of(4.0);
    let w = |j: i64| one + T::of(j as f64) * kappa;
    let om = one - kappa;
    let om2 = om * om;
    let s2 = four * s * s;
    let sk = four * s * kappa * om;
    let k2 = kappa * kappa;
    let (front, num, den) = match r {
        0 => (
            w(m4 - 1) / (two * w(m4) * w(m4)),
            om2 * w(m4 + 1) * w(m4 + 1) + sk * w(m4 + 1) + s2 * (k2 + w(m4) * w(m4)),
            om2 * w(m4 + 1) + s2 * w(m4 - 1),
        ),
        1 => (
            w(m4) / (two * w(m4 + 1) * w(m4 + 1)),
            om2 * w(m4 + 1) * w(m4 + 1) + sk * w(m4 + 1) + s2 * (k2 + w(m4 + 2) * w(m4 + 2)),
            om2 * w(m4 + 1) + sk + s2 * w(m4 + 1),
        ),
        2 => (
            w(m4 + 1) / (two * w(m4 + 2) * w(m4 + 2)),
            om2 * (k2 + w(m4 + 2) * w(m4 + 2)) - sk * w(m4 + 3) + s2 * w(m4 + 3) * w(m4 + 3),
            om2 * w(m4 + 1) + s2 * w(m4 + 3),
        ),
        _ => (
            w(m4 + 2) / (two * w(m4 + 3) * w(m4 + 3)),
            om2 * (k2 + w(m4 + 4) * w(m4 + 4)) - sk * w(m4 + 3) + s2 * w(m4 + 3) * w(m4 + 3),
            om2 * w(m4 + 3) - sk + s2 * w(m4 + 3),
        ),
    };
    front * num / den
}

// Ex3 s-rotated coefficients. The c_n denominator follows from the closed
// tau/alpha data: 1 + (n-1)n^2(n+1)s^2.
fn ex3_c<T: Real>(n: usize, s: T) -> T {
    let nf = T::of(n as f64);
    let denom = T::one() + (nf - T::one()) * nf * nf * (nf + T::one()) * s * s;
    -T::of(2.0) * nf * s / denom
}

fn ex3_ell<T: Real>(j: usize, s: T) -> T {
    // ell_j for j >= 2, i.e. the display's n = j - 1.
    let n = j - 1;
    let nf = T::of(n as f64);
    let np1 = T::of((n + 1) as f64);
    let np2 = T::of((n + 2) as f64);
    let num = T::one() + np1 * np1 * np2 * np2 * s * s;
    let den = T::one() + nf * np1 * np1 * np2 * s * s;
    nf / (T::of(2.0) * np1) * num / den
}

/// The (c, d) data of a family up to degree `n` (c_1..c_n, d_2..d_n).
pub fn example_sequences<T: Real>(ex: &ExampleSpec<T>, n: usize) -> Result<CoefficientData<T>> {
    ex.validate()?;
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    match *ex {
        ExampleSpec::Ex1 => {
            let c = vec![T::zero(); n];
            let mut d = vec![T::of(0.25); n - 1];
            d[0] = T::of(0.5);
            CoefficientData::new(c, d)
        }
        ExampleSpec::Ex2 { kappa, s } => {
            let mut c = vec![kappa - T::of(2.0) * s];
            let mut ell = vec![T::zero()];
            for j in 2..=n {
                c.push(ex2_c(j, kappa, s));
                ell.push(ex2_ell(j, kappa, s));
            }
            let d = (1..n)
                .map(|j| (T::one() - ell[j - 1]) * ell[j])
                .collect::<Vec<_>>();
            CoefficientData::new(c, d)
        }
        ExampleSpec::Ex3 { s } => {
            let c = (1..=n).map(|j| ex3_c(j, s)).collect::<Vec<_>>();
            let mut ell = vec![T::zero()];
            for j in 2..=n {
                ell.push(ex3_ell(j, s));
            }
            let d = (1..n)
                .map(|j| (T::one() - ell[j - 1]) * ell[j])
                .collect::<Vec<_>>();
            CoefficientData::new(c, d)
        }
        ExampleSpec::Ex4 { lambda, eta, s } => {
            if s.is_some() {
                return Err(unsupported("ex4", "s-rotated sequences"));
            }
            let c = (1..=n)
                .map(|j| eta / (lambda + T::of(j as f64)))
                .collect::<Vec<_>>();
            let d = (1..n)
                .map(|j| {
                    let jf = T::of(j as f64);
                    T::of(0.25) * jf * (T::of(2.0) * lambda + jf + T::one())
                        / ((lambda + jf) * (lambda + jf + T::one()))
                })
                .collect::<Vec<_>>();
            CoefficientData::new(c, d)
        }
    }
}

fn zeta_of<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::one()) / Complex::new(x, -T::one())
}

/// Closed-form P_n(x). Real-valued for real x up to rounding.
pub fn closed_form_p<T: Real>(ex: &ExampleSpec<T>, n: usize, x: T) -> Result<Complex<T>> {
    ex.validate()?;
    let half = T::of(0.5);
    let lo = Complex::new(x * half, -half); // (x - i)/2
    let hi = Complex::new(x * half, half); // (x + i)/2
    match *ex {
        ExampleSpec::Ex1 => {
            if n == 0 {
                return Ok(Complex::one());
            }
            Ok(lo.powu(n as u32) + hi.powu(n as u32))
        }
        ExampleSpec::Ex3 { s } => {
            if s != T::zero() {
                return Err(unsupported("ex3", "closed-form P at s != 0"));
            }
            let i = Complex::new(T::zero(), T::one());
            Ok(i * (lo.powu((n + 1) as u32) - hi.powu((n + 1) as u32)))
        }
        ExampleSpec::Ex4 { lambda, eta, s } => {
            if s.is_some() {
                return Err(unsupported("ex4", "closed-form P at s != 0"));
            }
            if n == 0 {
                return Ok(Complex::one());
            }
            let b = Complex::new(lambda, eta);
            let two_lam = Complex::new(T::of(2.0) * lambda + T::of(2.0), T::zero());
            let ratio = pochhammer_real(T::of(2.0) * lambda + T::of(2.0), n)
                / pochhammer_real(lambda + T::one(), n);
            let w = Complex::new(T::zero(), -T::of(2.0)) / Complex::new(x, -T::one());
            let f = eval_2f1_poly(n, b + Complex::one(), two_lam, w)?;
            Ok(lo.powu(n as u32) * f.scale(ratio))
        }
        ExampleSpec::Ex2 { .. } => Err(unsupported("ex2", "closed-form P")),
    }
}

/// Closed-form R_n(z).
pub fn closed_form_r<T: Real>(ex: &ExampleSpec<T>, n: usize, z: Complex<T>) -> Result<Complex<T>> {
    ex.validate()?;
    match *ex {
        ExampleSpec::Ex1 => {
            if n == 0 {
                return Ok(Complex::one());
            }
            Ok(z.powu(n as u32) + Complex::one())
        }
        ExampleSpec::Ex3 { s } => {
            if s != T::zero() {
                return Err(unsupported("ex3", "closed-form R at s != 0"));
            }
            let mut sum = Complex::<T>::one();
            let mut p = Complex::<T>::one();
            for _ in 0..n {
                p = p * z;
                sum = sum + p;
            }
            Ok(sum)
        }
        ExampleSpec::Ex4 { lambda, eta, s } => {
            if s.is_some() {
                return Err(unsupported("ex4", "closed-form R at s != 0"));
            }
            let b = Complex::new(lambda, eta);
            let two_lam = Complex::new(T::of(2.0) * lambda + T::of(2.0), T::zero());
            let ratio = pochhammer_real(T::of(2.0) * lambda + T::of(2.0), n)
                / pochhammer_real(lambda + T::one(), n);
            let f = eval_2f1_poly(n, b + Complex::one(), two_lam, Complex::<T>::one() - z)?;
            Ok(f.scale(ratio))
        }
        ExampleSpec::Ex2 { .. } => Err(unsupported("ex2", "closed-form R")),
    }
}

/// Closed-form monic circle polynomial Φ_n(z).
pub fn closed_form_phi<T: Real>(
    ex: &ExampleSpec<T>,
    n: usize,
    z: Complex<T>,
) -> Result<Complex<T>> {
    ex.validate()?;
    match *ex {
        ExampleSpec::Ex1 => Ok(z.powu(n as u32)),
        ExampleSpec::Ex3 { s } => {
            if s != T::zero() {
                return Err(unsupported("ex3", "closed-form Phi at s != 0"));
            }
            // (1/(n+1)) sum_{j=0..n} (j+1) z^j
            let mut sum = Complex::<T>::zero();
            let mut p = Complex::<T>::one();
            for j in 0..=n {
                sum = sum + p.scale(T::of((j + 1) as f64));
                p = p * z;
            }
            Ok(sum.scale(T::one() / T::of((n + 1) as f64)))
        }
        ExampleSpec::Ex4 { lambda, eta, s } => {
            if s.is_some() {
                return Err(unsupported("ex4", "closed-form Phi at s != 0"));
            }
            let b = Complex::new(lambda, eta);
            let c_param = Complex::new(T::of(2.0) * lambda + T::of(3.0), T::zero());
            let num = pochhammer(c_param, n);
            let den = pochhammer(b + Complex::new(T::of(2.0), T::zero()), n);
            let f = eval_2f1_poly(
                n,
                b + Complex::new(T::of(2.0), T::zero()),
                c_param,
                Complex::<T>::one() - z,
            )?;
            Ok(num * f / den)
        }
        ExampleSpec::Ex2 { .. } => Err(unsupported("ex2", "closed-form Phi")),
    }
}

/// Closed-form Verblunsky coefficient α_k (0-based).
pub fn closed_form_alpha<T: Real>(ex: &ExampleSpec<T>, k: usize) -> Result<Complex<T>> {
    ex.validate()?;
    match *ex {
        ExampleSpec::Ex1 => Ok(Complex::zero()),
        ExampleSpec::Ex3 { .. } => Ok(Complex::new(-T::one() / T::of((k + 2) as f64), T::zero())),
        ExampleSpec::Ex4 { lambda, eta, .. } => {
            let b = Complex::new(lambda, eta);
            let num = pochhammer(b + Complex::one(), k + 1);
            let den = pochhammer(b.conj() + Complex::new(T::of(2.0), T::zero()), k + 1);
            Ok(-num / den)
        }
        ExampleSpec::Ex2 { .. } => Err(unsupported("ex2", "closed-form alpha")),
    }
}

/// Closed-form û_n(x), n ≥ 1.
pub fn closed_form_u_hat<T: Real>(ex: &ExampleSpec<T>, n: usize, x: T) -> Result<Complex<T>> {
    ex.validate()?;
    if n == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: usize::MAX,
        });
    }
    let zeta = zeta_of(x);
    let sign = if n % 2 == 0 { T::one() } else { -T::one() };
    match *ex {
        ExampleSpec::Ex1 => {
            let v = zeta.powu(n as u32) - zeta.powu((n - 1) as u32);
            Ok(v.scale(sign * T::of(0.5)))
        }
        ExampleSpec::Ex3 { s } => {
            if s != T::zero() {
                return Err(unsupported("ex3", "closed-form u-hat at s != 0"));
            }
            let nf = T::of(n as f64);
            let ratio = T::of((n + 1) as f64) / nf;
            let ell = nf / (T::of(2.0) * T::of((n + 1) as f64));
            let bracket = Complex::new(T::one() - ratio, T::zero()) - zeta.powu((n + 1) as u32)
                + zeta.powu(n as u32).scale(ratio);
            let front = Complex::new(T::zero(), T::one()) * Complex::new(x, -T::one());
            Ok(front * bracket.scale(sign * ell.sqrt() * T::of(0.5)))
        }
        ExampleSpec::Ex2 { .. } => Err(unsupported("ex2", "closed-form u-hat")),
        ExampleSpec::Ex4 { .. } => Err(unsupported("ex4", "closed-form u-hat")),
    }
}

/// The rotation seed I = ⨍ ζ/(ζ−1) dμ(ζ), where displayed.
pub fn i_value<T: Real>(ex: &ExampleSpec<T>) -> Result<Complex<T>> {
    ex.validate()?;
    match *ex {
        ExampleSpec::Ex1 | ExampleSpec::Ex3 { .. } => Ok(Complex::new(T::of(0.5), T::zero())),
        ExampleSpec::Ex2 { kappa, .. } => Ok(Complex::new(T::of(0.5), -kappa * T::of(0.5))),
        ExampleSpec::Ex4 { .. } => Err(unsupported("ex4", "principal value seed")),
    }
}

/// Absolutely continuous part w(θ) of the circle measure μ, θ ∈ (0, 2π).
pub fn circle_density<T: Real>(ex: &ExampleSpec<T>, theta: T) -> Result<T> {
    ex.validate()?;
    let two_pi = T::of(2.0 * std::f64::consts::PI);
    let pi = T::of(std::f64::consts::PI);
    match *ex {
        ExampleSpec::Ex1 => Ok(T::one() / two_pi),
        ExampleSpec::Ex2 { kappa, .. } => Ok((T::one() - kappa) / two_pi),
        ExampleSpec::Ex3 { .. } => {
            let s = (theta * T::of(0.5)).sin();
            Ok(s * s / pi)
        }
        ExampleSpec::Ex4 { lambda, eta, .. } => {
            let b2 = Complex::new(lambda + T::of(2.0), eta);
            let log_norm = T::of(2.0) * ln_gamma(b2).re
                - ln_gamma(Complex::new(T::of(2.0) * lambda + T::of(3.0), T::zero())).re;
            let norm = (T::of(2.0) * lambda + T::of(2.0)).exp2() * log_norm.exp() / two_pi;
            let s2 = {
                let s = (theta * T::of(0.5)).sin();
                s * s
            };
            Ok(norm * ((pi - theta) * eta).exp() * s2.powf(lambda + T::one()))
        }
    }
}

/// Point masses (θ_j, mass_j) of μ.
#[must_use]
pub fn circle_point_masses<T: Real>(ex: &ExampleSpec<T>) -> Vec<(T, T)> {
    match *ex {
        ExampleSpec::Ex2 { kappa, .. } => {
            vec![(T::of(0.5 * std::f64::consts::PI), kappa)]
        }
        _ => Vec::new(),
    }
}

/// Density of the ν measure (the |ζ−1|²-renormalized companion of μ).
pub fn nu_density<T: Real>(ex: &ExampleSpec<T>, theta: T) -> Result<T> {
    ex.validate()?;
    let two_pi = T::of(2.0 * std::f64::consts::PI);
    let pi = T::of(std::f64::consts::PI);
    match *ex {
        ExampleSpec::Ex3 { .. } => Ok(T::one() / two_pi),
        ExampleSpec::Ex4 { lambda, eta, .. } => {
            if lambda <= T::of(-0.5) {
                return Err(Error::ParameterOutOfDomain {
                    name: "lambda",
                    value: lambda.to_f64().unwrap_or(f64::NAN),
                    domain: "(-1/2, inf) for the nu measure",
                });
            }
            let b1 = Complex::new(lambda + T::one(), eta);
            let log_norm = T::of(2.0) * ln_gamma(b1).re
                - ln_gamma(Complex::new(T::of(2.0) * lambda + T::one(), T::zero())).re;
            let norm = (T::of(2.0) * lambda).exp2() * log_norm.exp() / two_pi;
            let s2 = {
                let s = (theta * T::of(0.5)).sin();
                s * s
            };
            Ok(norm * ((pi - theta) * eta).exp() * s2.powf(lambda))
        }
        _ => Err(unsupported(ex.name(), "nu density")),
    }
}

/// Density of the second-kind real-line measure ψ, where displayed.
pub fn psi_density<T: Real>(ex: &ExampleSpec<T>, x: T) -> Result<T> {
    ex.validate()?;
    let pi = T::of(std::f64::consts::PI);
    let q = x * x + T::one();
    match *ex {
        ExampleSpec::Ex1 => Ok(T::one() / (pi * q)),
        ExampleSpec::Ex2 { kappa, .. } => Ok((T::one() - kappa) / (pi * q)),
        ExampleSpec::Ex3 { .. } => Ok(T::of(2.0) / (pi * q * q)),
        ExampleSpec::Ex4 { .. } => Err(unsupported("ex4", "psi density")),
    }
}

/// Point masses (x_j, mass_j) of ψ.
#[must_use]
pub fn psi_point_masses<T: Real>(ex: &ExampleSpec<T>) -> Vec<(T, T)> {
    match *ex {
        ExampleSpec::Ex2 { kappa, .. } => vec![(T::one(), kappa)],
        _ => Vec::new(),
    }
}

/// The principal value ⨍ x dψ(x), where displayed.
pub fn psi_x_moment<T: Real>(ex: &ExampleSpec<T>) -> Result<T> {
    ex.validate()?;
    match *ex {
        ExampleSpec::Ex1 | ExampleSpec::Ex3 { .. } => Ok(T::zero()),
        ExampleSpec::Ex2 { kappa, .. } => Ok(kappa),
        ExampleSpec::Ex4 { .. } => Err(unsupported("ex4", "psi first moment")),
    }
}

/// Density of the first-kind real-line measure φ (pushforward of ν);
/// arccot is taken in (0, π) so the weight is continuous.
pub fn phi_density<T: Real>(ex: &ExampleSpec<T>, x: T) -> Result<T> {
    ex.validate()?;
    let pi = T::of(std::f64::consts::PI);
    match *ex {
        ExampleSpec::Ex3 { .. } => Ok(T::one() / (pi * (x * x + T::one()))),
        ExampleSpec::Ex4 { lambda, eta, .. } => {
            if lambda <= T::of(-0.5) {
                return Err(Error::ParameterOutOfDomain {
                    name: "lambda",
                    value: lambda.to_f64().unwrap_or(f64::NAN),
                    domain: "(-1/2, inf) for the phi measure",
                });
            }
            let b1 = Complex::new(lambda + T::one(), eta);
            let log_norm = T::of(2.0) * ln_gamma(b1).re
                - ln_gamma(Complex::new(T::of(2.0) * lambda + T::one(), T::zero())).re;
            let norm = (T::of(2.0) * lambda + T::one()).exp2() * log_norm.exp()
                / (T::of(2.0) * pi);
            let arccot = T::of(0.5) * pi - x.atan();
            let q = x * x + T::one();
            Ok(norm * ((pi - T::of(2.0) * arccot) * eta).exp() * q.powf(-lambda - T::one()))
        }
        _ => Err(unsupported(ex.name(), "phi density")),
    }
}

/// Machine-readable fixture table: coefficient data plus closed-form
/// Verblunsky coefficients when the family has them.
pub fn export_json<T: Real>(ex: &ExampleSpec<T>, n: usize) -> Result<String> {
    let cd = example_sequences(ex, n)?;
    let f = |v: &T| v.to_f64().unwrap_or(f64::NAN);
    let c: Vec<f64> = cd.c_slice().iter().map(f).collect();
    let d: Vec<f64> = cd.d_slice().iter().map(f).collect();
    let ell: Vec<f64> = cd.ell_slice().iter().map(f).collect();
    let mut doc = serde_json::json!({
        "example": ex.name(),
        "n": n,
        "c": c,
        "d": d,
        "ell": ell,
    });
    if !matches!(ex, ExampleSpec::Ex2 { .. }) {
        let mut alpha_re = Vec::with_capacity(n);
        let mut alpha_im = Vec::with_capacity(n);
        for k in 0..n {
            let a = closed_form_alpha(ex, k)?;
            alpha_re.push(a.re.to_f64().unwrap_or(f64::NAN));
            alpha_im.push(a.im.to_f64().unwrap_or(f64::NAN));
        }
        doc["alpha_re"] = serde_json::json!(alpha_re);
        doc["alpha_im"] = serde_json::json!(alpha_im);
    }
    serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{integrate, pv_symmetric};
    use crate::recurrence::{eval_p, eval_phi, eval_r, eval_u_hat};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn terminating_gauss_sum_basics() {
        let a2 = Complex64::new(1.3, -0.4);
        let c = Complex64::new(2.2, 0.9);
        let w = Complex64::new(0.7, 0.1);
        assert_eq!(eval_2f1_poly(0, a2, c, w).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(
            eval_2f1_poly(4, a2, c, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let two_term = eval_2f1_poly(1, a2, c, w).unwrap();
        assert!((two_term - (Complex64::new(1.0, 0.0) - a2 * w / c)).norm() < 1e-15);
        let err = eval_2f1_poly(4, a2, Complex64::new(-2.0, 0.0), w).unwrap_err();
        assert!(matches!(err, Error::PoleInC { k: 2 }));
    }

    #[test]
    fn pochhammer_values() {
        let z = Complex64::new(3.0, 0.0);
        assert_eq!(pochhammer(z, 0), Complex64::new(1.0, 0.0));
        assert_eq!(pochhammer(z, 3), Complex64::new(60.0, 0.0)); // 3*4*5
    }

    #[test]
    fn log_gamma_reference_values() {
        // Gamma(5) = 24
        let g5 = ln_gamma(Complex64::new(5.0, 0.0)).re.exp();
        assert!((g5 - 24.0).abs() < 1e-12);
        // |Gamma(1+i)|^2 = pi / sinh(pi)
        let lg = ln_gamma(Complex64::new(1.0, 1.0));
        let norm_sq = (2.0 * lg.re).exp();
        assert!((norm_sq - PI / PI.sinh()).abs() < 1e-13);
        // reflection branch: Gamma(0.3) * Gamma(0.7) = pi / sin(0.3 pi)
        let prod = (ln_gamma(Complex64::new(0.3, 0.0)).re + ln_gamma(Complex64::new(0.7, 0.0)).re)
            .exp();
        assert!((prod - PI / (0.3 * PI).sin()).abs() < 1e-12);
    }

    #[test]
    fn sequence_anchors() {
        let cd = example_sequences(&ExampleSpec::Ex3 { s: 0.0_f64 }, 5).unwrap();
        assert!(cd.c_slice().iter().all(|&c| c == 0.0));
        assert!(cd.d_slice().iter().all(|&d| d == 0.25));

        let cd = example_sequences(
            &ExampleSpec::Ex4 {
                lambda: 1.0_f64,
                eta: 2.0,
                s: None,
            },
            4,
        )
        .unwrap();
        assert!((cd.c(1) - 1.0).abs() < 1e-15);
        assert!((cd.d(2) - 1.0 / 6.0).abs() < 1e-15);
        // minimal parameters against the displayed n/(2(lambda+n+1))
        for j in 2..=4usize {
            let n = (j - 1) as f64;
            assert!((cd.ell(j) - n / (2.0 * (1.0 + n + 1.0))).abs() < 1e-14);
        }

        let cd = example_sequences(&ExampleSpec::Ex2 { kappa: 0.5_f64, s: 0.0 }, 4).unwrap();
        assert!((cd.c(1) - 0.5).abs() < 1e-15);
        assert!((cd.c(2) + 0.5).abs() < 1e-15);
        assert!((cd.ell(2) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn point_mass_tables_simplify_at_s_zero() {
        // Hand-simplified s = 0 forms at m = 0, 1 catch transcription slips.
        let kappa = 0.37_f64;
        let w = |j: f64| 1.0 + j * kappa;
        let ex = ExampleSpec::Ex2 { kappa, s: 0.0 };
        let cd = example_sequences(&ex, 10).unwrap();
        for m in 0..2usize {
            let m4 = (4 * m) as f64;
            let base = 4 * m;
            assert!((cd.c(base + 2) + kappa / w(m4)).abs() < 1e-14);
            assert!(cd.c(base + 3).abs() < 1e-16);
            assert!((cd.c(base + 4) - kappa / w(m4 + 2.0)).abs() < 1e-14);
            assert!(
                (cd.c(base + 5) + 2.0 * kappa * kappa / (w(m4 + 3.0) * w(m4 + 3.0))).abs() < 1e-14
            );
            assert!(
                (cd.ell(base + 2) - w(m4 - 1.0) * w(m4 + 1.0) / (2.0 * w(m4) * w(m4))).abs()
                    < 1e-14
            );
            assert!((cd.ell(base + 3) - w(m4) / (2.0 * w(m4 + 1.0))).abs() < 1e-14);
            let w2 = w(m4 + 2.0);
            assert!(
                (cd.ell(base + 4) - (kappa * kappa + w2 * w2) / (2.0 * w2 * w2)).abs() < 1e-14
            );
            let w3 = w(m4 + 3.0);
            let w4 = w(m4 + 4.0);
            assert!(
                (cd.ell(base + 5) - w2 * (kappa * kappa + w4 * w4) / (2.0 * w3 * w3 * w3)).abs()
                    < 1e-14
            );
        }
    }

    #[test]
    fn rotated_quarter_chain_identities() {
        // 1 - ell_{n+1}(s) has its own display; check against ours.
        let s = 0.45_f64;
        let ex = ExampleSpec::Ex3 { s };
        let cd = example_sequences(&ex, 12).unwrap();
        for j in 2..=12usize {
            let n = (j - 1) as f64;
            let expect = (n + 2.0) / (2.0 * (n + 1.0)) * (1.0 + n * n * (n + 1.0) * (n + 1.0) * s * s)
                / (1.0 + n * (n + 1.0) * (n + 1.0) * (n + 2.0) * s * s);
            assert!((1.0 - cd.ell(j) - expect).abs() < 1e-14, "j={j}");
        }
        // s = 0 recovers the quarter chain.
        let cd0 = example_sequences(&ExampleSpec::Ex3 { s: 0.0_f64 }, 6).unwrap();
        assert!(cd0.d_slice().iter().all(|&d| (d - 0.25).abs() < 1e-16));
    }

    #[test]
    fn domain_violations_rejected() {
        assert!(matches!(
            example_sequences(&ExampleSpec::Ex2 { kappa: 0.0, s: 0.0 }, 4).unwrap_err(),
            Error::ParameterOutOfDomain { name: "kappa", .. }
        ));
        assert!(matches!(
            example_sequences(
                &ExampleSpec::Ex4 {
                    lambda: -1.0,
                    eta: 0.0,
                    s: None
                },
                4
            )
            .unwrap_err(),
            Error::ParameterOutOfDomain { name: "lambda", .. }
        ));
        assert!(matches!(
            example_sequences(
                &ExampleSpec::Ex4 {
                    lambda: 1.0,
                    eta: 0.0,
                    s: Some(0.3)
                },
                4
            )
            .unwrap_err(),
            Error::UnsupportedExample { .. }
        ));
    }

    #[test]
    fn closed_p_anchors_and_engine_agreement() {
        let p = closed_form_p(&ExampleSpec::Ex1, 2, 0.0_f64).unwrap();
        assert!((p.re + 0.5).abs() < 1e-15 && p.im.abs() < 1e-15);
        let p = closed_form_p(&ExampleSpec::Ex3 { s: 0.0 }, 1, 0.0_f64).unwrap();
        assert!(p.norm() < 1e-15);
        let p = closed_form_p(
            &ExampleSpec::Ex4 {
                lambda: 1.0,
                eta: 0.0,
                s: None,
            },
            1,
            3.0_f64,
        )
        .unwrap();
        assert!((p.re - 3.0).abs() < 1e-13 && p.im.abs() < 1e-13);
        assert!(matches!(
            closed_form_p(&ExampleSpec::Ex2 { kappa: 0.5, s: 0.0 }, 2, 0.0_f64).unwrap_err(),
            Error::UnsupportedExample { .. }
        ));

        let cases: [ExampleSpec<f64>; 4] = [
            ExampleSpec::Ex1,
            ExampleSpec::Ex3 { s: 0.0 },
            ExampleSpec::Ex4 {
                lambda: 1.0,
                eta: 1.0,
                s: None,
            },
            ExampleSpec::Ex4 {
                lambda: 0.4,
                eta: -0.8,
                s: None,
            },
        ];
        for ex in &cases {
            let cd = example_sequences(ex, 14).unwrap();
            for n in 0..=12usize {
                for &x in &[0.0, 0.7, -2.3, 11.0] {
                    let closed = closed_form_p(ex, n, x).unwrap();
                    let engine = eval_p(&cd, n, x).unwrap().value();
                    let scale = 1.0_f64.max(engine.abs());
                    assert!(
                        (closed.re - engine).abs() < 1e-10 * scale,
                        "{} n={n} x={x}: {} vs {engine}",
                        ex.name(),
                        closed.re
                    );
                    assert!(closed.im.abs() < 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn closed_r_and_phi_match_engine() {
        let cases: [ExampleSpec<f64>; 3] = [
            ExampleSpec::Ex1,
            ExampleSpec::Ex3 { s: 0.0 },
            ExampleSpec::Ex4 {
                lambda: 0.7,
                eta: 0.9,
                s: None,
            },
        ];
        let points = [
            Complex64::new(0.3, 0.8),
            Complex64::new(-0.9, 0.1),
            Complex64::new(1.0, 0.0),
        ];
        for ex in &cases {
            let cd = example_sequences(ex, 14).unwrap();
            for n in 0..=10usize {
                for &z in &points {
                    let closed = closed_form_r(ex, n, z).unwrap();
                    let engine = eval_r(&cd, n, z).unwrap().value();
                    let scale = 1.0_f64.max(engine.norm());
                    assert!(
                        (closed - engine).norm() < 1e-10 * scale,
                        "{} R n={n} z={z}",
                        ex.name()
                    );
                    let closed = closed_form_phi(ex, n, z).unwrap();
                    let engine = eval_phi(&cd, n + 1, z).unwrap();
                    let scale = 1.0_f64.max(engine.norm());
                    assert!(
                        (closed - engine).norm() < 1e-10 * scale,
                        "{} Phi n={n} z={z}",
                        ex.name()
                    );
                }
            }
        }
    }

    #[test]
    fn u_hat_closed_forms_match_engine() {
        for (ex, nmax) in [
            (ExampleSpec::Ex1, 8usize),
            (ExampleSpec::Ex3 { s: 0.0 }, 8),
        ] {
            let cd = example_sequences(&ex, 12).unwrap();
            for n in 1..=nmax {
                for &x in &[0.4, -1.7, 5.0] {
                    let closed = closed_form_u_hat(&ex, n, x).unwrap();
                    let engine = eval_u_hat(&cd, n, x).unwrap();
                    assert!(
                        (closed - engine).norm() < 1e-12,
                        "{} n={n} x={x}: {closed} vs {engine}",
                        ex.name()
                    );
                }
            }
        }
    }

    #[test]
    fn quarter_chain_alpha_is_gamma_family_limit() {
        // Ex4 at lambda = eta = 0 must reproduce the Ex3 coefficients.
        let flat = ExampleSpec::Ex4 {
            lambda: 0.0_f64,
            eta: 0.0,
            s: None,
        };
        for k in 0..10usize {
            let a = closed_form_alpha(&flat, k).unwrap();
            let b = closed_form_alpha(&ExampleSpec::Ex3 { s: 0.0 }, k).unwrap();
            assert!((a - b).norm() < 1e-15, "k={k}");
        }
        let cd4 = example_sequences(&flat, 8).unwrap();
        let cd3 = example_sequences(&ExampleSpec::Ex3 { s: 0.0 }, 8).unwrap();
        for j in 2..=8 {
            assert!((cd4.d(j) - cd3.d(j)).abs() < 1e-15);
        }
    }

    #[test]
    fn densities_normalize() {
        let cases: [ExampleSpec<f64>; 4] = [
            ExampleSpec::Ex1,
            ExampleSpec::Ex2 { kappa: 0.3, s: 0.0 },
            ExampleSpec::Ex3 { s: 0.0 },
            ExampleSpec::Ex4 {
                lambda: 1.0,
                eta: 1.0,
                s: None,
            },
        ];
        for ex in &cases {
            let total = integrate(|t| circle_density(ex, t).unwrap(), 0.0, 2.0 * PI, 1e-10)
                .unwrap()
                + circle_point_masses(ex).iter().map(|&(_, m)| m).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-8, "{}: {total}", ex.name());
        }
        // psi measures
        for ex in [
            ExampleSpec::Ex1,
            ExampleSpec::Ex2 {
                kappa: 0.4_f64,
                s: 0.1,
            },
            ExampleSpec::Ex3 { s: 0.0 },
        ] {
            let total = pv_symmetric(|x| psi_density(&ex, x).unwrap(), 1e-10).unwrap()
                + psi_point_masses(&ex).iter().map(|&(_, m)| m).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-8, "{} psi: {total}", ex.name());
        }
        // phi and nu measures
        for ex in [
            ExampleSpec::Ex3 { s: 0.0_f64 },
            ExampleSpec::Ex4 {
                lambda: 1.0,
                eta: 1.0,
                s: None,
            },
            ExampleSpec::Ex4 {
                lambda: 0.25,
                eta: -0.6,
                s: None,
            },
        ] {
            let total = pv_symmetric(|x| phi_density(&ex, x).unwrap(), 1e-10).unwrap();
            assert!((total - 1.0).abs() < 1e-8, "{} phi: {total}", ex.name());
            let total = integrate(|t| nu_density(&ex, t).unwrap(), 0.0, 2.0 * PI, 1e-10).unwrap();
            assert!((total - 1.0).abs() < 1e-8, "{} nu: {total}", ex.name());
        }
        // the gamma-family weight at lambda = eta = 0 is the quarter-chain one
        let flat = ExampleSpec::Ex4 {
            lambda: 0.0_f64,
            eta: 0.0,
            s: None,
        };
        for &t in &[0.5, 2.0, 4.4] {
            let a = circle_density(&flat, t).unwrap();
            let b = circle_density(&ExampleSpec::Ex3 { s: 0.0 }, t).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
        for &x in &[0.0, 1.3, -2.0] {
            let a = phi_density(&flat, x).unwrap();
            assert!((a - 1.0 / (PI * (x * x + 1.0))).abs() < 1e-13);
        }
    }

    #[test]
    fn export_json_round_trips() {
        let ex = ExampleSpec::Ex4 {
            lambda: 1.0,
            eta: 1.0,
            s: None,
        };
        let doc = export_json(&ex, 6).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(parsed["example"], "ex4");
        assert_eq!(parsed["c"].as_array().unwrap().len(), 6);
        assert_eq!(parsed["d"].as_array().unwrap().len(), 5);
        assert_eq!(parsed["alpha_re"].as_array().unwrap().len(), 6);
        let c1 = parsed["c"][0].as_f64().unwrap();
        assert!((c1 - 0.5).abs() < 1e-15);
        // kappa family exports without closed-form alpha
        let doc = export_json(&ExampleSpec::Ex2 { kappa: 0.5, s: 0.0 }, 4).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert!(parsed.get("alpha_re").is_none());
    }
}
