//! The three-term recurrence and its derived polynomial families.
//!
//! Everything is driven by real coefficient pairs ({c_n}, {d_{n+1}}) with
//! {d_{n+1}} a positive chain sequence, through the recurrence
//!
//! ```text
//! P_{n+1}(x) = (x − c_{n+1}) P_n(x) − d_{n+1} (x² + 1) P_{n−1}(x),
//! P_0(x) = 1,   P_1(x) = x − c_1.
//! ```
//!
//! Alongside P this module evaluates the derivative recurrence, the
//! Wronskian-type form 𝒢_n = P_n′P_{n−1} − P_{n−1}′P_n, the two-point kernel,
//! the normalized eigenvector entries u_k and û_k, and the circle images
//! R_k(z) = 2^k P_k(x)/(x−i)^k under z = (x+i)/(x−i), together with the
//! deflated monic circle polynomials Φ_{k−1} = R̂_k/((z−1)·lead).
//!
//! Values are carried as scaled mantissa/exponent pairs ([`PolyValue`],
//! [`CPolyValue`]) so degrees up to 10^4 at |x| up to 10^8 stay representable.

use crate::dd::Dd;
use crate::chain::ChainSequence;
use crate::error::{Error, Result};
use crate::scaled::{CPolyValue, PolyValue};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Largest index for which dense coefficient forms are maintained; pointwise
/// recurrences remain available beyond it.
pub const COEFF_CAP: usize = 512;

/// Relative bound on the synthetic-division remainder of R̂_k at z = 1.
const DEFLATION_TOL: f64 = 1e-10;

/// Validated recurrence data: c_1..c_N, chain d_2..d_M and its minimal
/// parameters ℓ_1..ℓ_{M+1}.
#[derive(Debug, Clone)]
pub struct CoefficientData<T> {
    c: Vec<T>,
    chain: ChainSequence<T>,
    ell: Vec<T>,
    sqrt_d: Vec<T>,
}

impl<T: Real> CoefficientData<T> {
    /// Builds from `c` (slot k = c_{k+1}) and `d` (slot k = d_{k+2}),
    /// validating the chain-sequence property.
    pub fn new(c: Vec<T>, d: Vec<T>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::DimensionTooSmall { n: 0 });
        }
        let chain = ChainSequence::new(d)?;
        let ell = chain.minimal_params(chain.len() + 1)?;
        let sqrt_d = chain.as_slice().iter().map(|v| v.sqrt()).collect();
        Ok(Self {
            c,
            chain,
            ell,
            sqrt_d,
        })
    }

    /// Largest degree n for which P_n is computable (c_1..c_n, d_2..d_n).
    #[must_use]
    pub fn max_degree(&self) -> usize {
        self.c.len().min(self.chain.len() + 1)
    }

    /// c_k, subscript k ≥ 1.
    #[must_use]
    pub fn c(&self, k: usize) -> T {
        self.c[k - 1]
    }

    /// d_j, subscript j ≥ 2.
    #[must_use]
    pub fn d(&self, j: usize) -> T {
        self.chain.d(j)
    }

    /// √d_j, subscript j ≥ 2.
    #[must_use]
    pub fn sqrt_d(&self, j: usize) -> T {
        self.sqrt_d[j - 2]
    }

    /// Minimal parameter ℓ_j, subscript j ≥ 1 (ℓ_1 = 0).
    #[must_use]
    pub fn ell(&self, j: usize) -> T {
        self.ell[j - 1]
    }

    #[must_use]
    pub fn c_slice(&self) -> &[T] {
        &self.c
    }

    #[must_use]
    pub fn d_slice(&self) -> &[T] {
        self.chain.as_slice()
    }

    #[must_use]
    pub fn ell_slice(&self) -> &[T] {
        &self.ell
    }

    #[must_use]
    pub fn chain(&self) -> &ChainSequence<T> {
        &self.chain
    }

    pub(crate) fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            Err(Error::DegreeOutOfRange {
                requested: n,
                available: self.max_degree(),
            })
        } else {
            Ok(())
        }
    }
}

/// Dense polynomial with complex coefficients, ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly<T> {
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> ComplexPoly<T> {
    #[must_use]
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    #[must_use]
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc
    }
}

/// P_n(x) as a scaled value.
pub fn eval_p<T: Real>(cd: &CoefficientData<T>, n: usize, x: T) -> Result<PolyValue<T>> {
    cd.check_degree(n)?;
    Ok(p_pair(cd, n, x).1)
}

/// (P_{n−1}(x), P_n(x)) without derivative bookkeeping.
fn p_pair<T: Real>(cd: &CoefficientData<T>, n: usize, x: T) -> (PolyValue<T>, PolyValue<T>) {
    let mut prev = PolyValue::one(); // P_0
    if n == 0 {
        return (PolyValue::zero(), prev);
    }
    let mut cur = PolyValue::new(x - cd.c(1)); // P_1
    let x2p1 = x * x + T::one();
    for k in 1..n {
        let a = cur.mul_scalar(x - cd.c(k + 1));
        let b = prev.mul_scalar(cd.d(k + 1) * x2p1);
        let next = a.sub(&b);
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// (P_n(x), P_n′(x)) via the differentiated recurrence.
pub fn eval_p_deriv<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
    x: T,
) -> Result<(PolyValue<T>, PolyValue<T>)> {
    cd.check_degree(n)?;
    let states = p_deriv_states(cd, n, x);
    Ok((states.1, states.3))
}

/// (P_{n−1}, P_n, P_{n−1}′, P_n′).
fn p_deriv_states<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
    x: T,
) -> (PolyValue<T>, PolyValue<T>, PolyValue<T>, PolyValue<T>) {
    let mut p_prev = PolyValue::one();
    let mut dp_prev = PolyValue::zero();
    if n == 0 {
        return (PolyValue::zero(), p_prev, PolyValue::zero(), dp_prev);
    }
    let mut p_cur = PolyValue::new(x - cd.c(1));
    let mut dp_cur = PolyValue::one();
    let x2p1 = x * x + T::one();
    let two_x = x + x;
    for k in 1..n {
        let xc = x - cd.c(k + 1);
        let dk = cd.d(k + 1);
        let p_next = p_cur.mul_scalar(xc).sub(&p_prev.mul_scalar(dk * x2p1));
        let dp_next = p_cur
            .add(&dp_cur.mul_scalar(xc))
            .sub(&p_prev.mul_scalar(dk * two_x).add(&dp_prev.mul_scalar(dk * x2p1)));
        p_prev = p_cur;
        p_cur = p_next;
        dp_prev = dp_cur;
        dp_cur = dp_next;
    }
    (p_prev, p_cur, dp_prev, dp_cur)
}

/// Leading coefficient of P_n: Π_{j=1..n} (1 − ℓ_j).
pub fn leading_coeff<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<T> {
    cd.check_degree(n)?;
    let mut p = T::one();
    for j in 1..=n {
        p = p * (T::one() - cd.ell(j));
    }
    Ok(p)
}

/// 𝒢_n(x) = P_n′(x) P_{n−1}(x) − P_{n−1}′(x) P_n(x); strictly positive on
/// the real line for valid data.
///
/// Runs the closed one-step update
/// 𝒢_{k+1} = d_{k+1}(x²+1)𝒢_k + P_k² − 2x d_{k+1} P_k P_{k−1}
/// in compensated double-double with joint power-of-two rescaling (𝒢 scales
/// like P²): the differentiated four-state recurrence cancels by factors
/// beyond 1e13 on crowded-zero data, which would poison quadrature weights.
pub fn wronskian_g<T: Real>(cd: &CoefficientData<T>, n: usize, x: T) -> Result<PolyValue<T>> {
    if n == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    cd.check_degree(n)?;
    let quad = Dd::prod(x, x).add(Dd::from_t(T::one()));
    // rescale window an eighth of the exponent range: w tracks P², so its
    // mantissa must survive the square of the P window plus growth headroom
    let eighth = (T::max_value().log2().to_f64().unwrap_or(1024.0) / 8.0).floor() as i32;
    let big = T::of(2.0).powi(2 * eighth);
    let small = T::of(2.0).powi(-2 * eighth);
    let mut p_prev = Dd::from_t(T::one());
    let mut p_cur = Dd::diff(x, cd.c(1));
    let mut w = Dd::from_t(T::one());
    let mut e: i64 = 0; // true P = p·2^e, true 𝒢 = w·2^{2e}
    for j in 2..=n {
        let dj = cd.d(j);
        let p_next = Dd::diff(x, cd.c(j))
            .mul(p_cur)
            .sub(quad.mul_t(dj).mul(p_prev));
        w = quad
            .mul_t(dj)
            .mul(w)
            .add(p_cur.mul(p_cur))
            .sub(p_cur.mul(p_prev).mul_t(x + x).mul_t(dj));
        p_prev = p_cur;
        p_cur = p_next;
        let m = p_prev.hi.abs().max(p_cur.hi.abs());
        if m > big {
            p_prev = p_prev.scale2(small);
            p_cur = p_cur.scale2(small);
            w = w.scale2(small).scale2(small);
            e += 2 * eighth as i64;
        } else if m > T::zero() && m < small {
            p_prev = p_prev.scale2(big);
            p_cur = p_cur.scale2(big);
            w = w.scale2(big).scale2(big);
            e -= 2 * eighth as i64;
        }
    }
    Ok(PolyValue::with_exp2(w.collapse(), 2 * e))
}

/// One pass of the joint (P, P′, 𝒢) chain at a double-double abscissa.
/// Returns (P_n, P_n′, 𝒢_n, e) with P, P′ true values × 2^e and 𝒢 × 2^{2e}.
fn dd_wronskian_states<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
    x: Dd<T>,
) -> (Dd<T>, Dd<T>, Dd<T>, i64) {
    let quad = x.mul(x).add(Dd::from_t(T::one()));
    let two_x = x.scale2(T::of(2.0));
    let eighth = (T::max_value().log2().to_f64().unwrap_or(1024.0) / 8.0).floor() as i32;
    let big = T::of(2.0).powi(2 * eighth);
    let small = T::of(2.0).powi(-2 * eighth);
    let mut p_prev = Dd::from_t(T::one());
    let mut p_cur = x.sub(Dd::from_t(cd.c(1)));
    let mut dp_prev = Dd::from_t(T::zero());
    let mut dp_cur = Dd::from_t(T::one());
    let mut w = Dd::from_t(T::one());
    let mut e: i64 = 0;
    for j in 2..=n {
        let dj = cd.d(j);
        let xc = x.sub(Dd::from_t(cd.c(j)));
        let p_next = xc.mul(p_cur).sub(quad.mul_t(dj).mul(p_prev));
        let dp_next = p_cur
            .add(xc.mul(dp_cur))
            .sub(two_x.mul(p_prev).mul_t(dj))
            .sub(quad.mul(dp_prev).mul_t(dj));
        w = quad
            .mul_t(dj)
            .mul(w)
            .add(p_cur.mul(p_cur))
            .sub(p_cur.mul(p_prev).mul(two_x).mul_t(dj));
        p_prev = p_cur;
        p_cur = p_next;
        dp_prev = dp_cur;
        dp_cur = dp_next;
        let m = p_prev.hi.abs().max(p_cur.hi.abs());
        if m > big {
            p_prev = p_prev.scale2(small);
            p_cur = p_cur.scale2(small);
            dp_prev = dp_prev.scale2(small);
            dp_cur = dp_cur.scale2(small);
            w = w.scale2(small).scale2(small);
            e += 2 * eighth as i64;
        } else if m > T::zero() && m < small {
            p_prev = p_prev.scale2(big);
            p_cur = p_cur.scale2(big);
            dp_prev = dp_prev.scale2(big);
            dp_cur = dp_cur.scale2(big);
            w = w.scale2(big).scale2(big);
            e -= 2 * eighth as i64;
        }
    }
    (p_cur, dp_cur, w, e)
}

/// 𝒢_n and x²+1 evaluated at the zero of P_n obtained by polishing x0 with
/// double-double Newton steps. The weight formula needs 𝒢 at the zero
/// itself: P_{n−1} can pass through zero within an ulp of x0 (interlacing
/// puts no floor on that gap), and there the formula's value moves by
/// roughly 1/gap per unit of abscissa error, far too fast for an f64 node.
pub(crate) fn wronskian_g_polished<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
    x0: T,
) -> Result<(PolyValue<T>, T)> {
    if n == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    cd.check_degree(n)?;
    let mut x = Dd::from_t(x0);
    for _ in 0..2 {
        let (p, dp, _, _) = dd_wronskian_states(cd, n, x);
        if dp.hi == T::zero() || !dp.hi.is_finite() {
            break;
        }
        let next = x.sub(p.div(dp));
        if !next.hi.is_finite() {
            break;
        }
        x = next;
    }
    let (_, _, w, e) = dd_wronskian_states(cd, n, x);
    let x2p1 = x.mul(x).add(Dd::from_t(T::one())).collapse();
    Ok((PolyValue::with_exp2(w.collapse(), 2 * e), x2p1))
}

/// Two-point kernel G_n(x, y) = (P_n(x)P_{n−1}(y) − P_{n−1}(x)P_n(y))/(x − y).
pub fn kernel_g<T: Real>(cd: &CoefficientData<T>, n: usize, x: T, y: T) -> Result<PolyValue<T>> {
    cd.check_degree(n)?;
    let scale = x.abs().max(y.abs()).max(T::one());
    let sep = (x - y).abs();
    if sep < T::of(1e-13) * scale {
        return Err(Error::CoincidentPoints {
            separation: sep.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (px_prev, px_cur) = p_pair(cd, n, x);
    let (py_prev, py_cur) = p_pair(cd, n, y);
    let num = px_cur.mul(&py_prev).sub(&px_prev.mul(&py_cur));
    Ok(num.div(&PolyValue::new(x - y)))
}

/// u_k(x) = (−1)^k P_k(x) / ((x − i)^k Π_{j=1..k} √d_{j+1}).
///
/// Requires coefficient data through degree k+1 (the normalization uses
/// d_{k+1}).
pub fn eval_u<T: Real>(cd: &CoefficientData<T>, k: usize, x: T) -> Result<CPolyValue<T>> {
    cd.check_degree(k + 1)?;
    if k == 0 {
        return Ok(CPolyValue::one());
    }
    let p = eval_p(cd, k, x)?.to_complex();
    let xi = CPolyValue::new(Complex::new(x, -T::one())); // x − i
    let mut denom = xi.powi(k as u64);
    let mut root_prod = PolyValue::one();
    for j in 1..=k {
        root_prod = root_prod.mul_scalar(cd.sqrt_d(j + 1));
    }
    denom = denom.mul(&root_prod.to_complex());
    let mut out = p.div(&denom);
    if k % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// The vector (u_0(x), …, u_{m−1}(x)) as plain complex numbers.
pub fn u_vector<T: Real>(cd: &CoefficientData<T>, m: usize, x: T) -> Result<Vec<Complex<T>>> {
    (0..m).map(|k| Ok(eval_u(cd, k, x)?.value())).collect()
}

/// û_k(x) = √ℓ_{k+1} u_k(x) + √(1 − ℓ_k) u_{k−1}(x), k ≥ 1.
pub fn eval_u_hat<T: Real>(cd: &CoefficientData<T>, k: usize, x: T) -> Result<Complex<T>> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    let uk = eval_u(cd, k, x)?.value();
    let ukm1 = eval_u(cd, k - 1, x)?.value();
    let a = cd.ell(k + 1).sqrt();
    let b = (T::one() - cd.ell(k)).sqrt();
    Ok(uk * a + ukm1 * b)
}

/// Same û_k through its closed P-form
/// (−1)^k √ℓ_{k+1} [P_k − (1 − ℓ_k)(x − i)P_{k−1}] / ((x − i)^k Π √d_{j+1});
/// exposed so tests can pin the equivalence of the two expressions.
pub fn eval_u_hat_p_form<T: Real>(cd: &CoefficientData<T>, k: usize, x: T) -> Result<Complex<T>> {
    cd.check_degree(k + 1)?;
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    let (p_prev, p_cur) = p_pair(cd, k, x);
    let xi = Complex::new(x, -T::one()); // x − i
    let corr = p_prev
        .to_complex()
        .mul_c(xi)
        .mul_scalar(T::one() - cd.ell(k));
    let num = p_cur.to_complex().sub(&corr).mul_scalar(cd.ell(k + 1).sqrt());
    let mut denom = CPolyValue::new(xi).powi(k as u64);
    let mut root_prod = PolyValue::one();
    for j in 1..=k {
        root_prod = root_prod.mul_scalar(cd.sqrt_d(j + 1));
    }
    denom = denom.mul(&root_prod.to_complex());
    let mut out = num.div(&denom);
    if k % 2 == 1 {
        out = out.neg();
    }
    Ok(out.value())
}

/// R_k(z) by the circle recurrence
/// R_{k+1} = [(1 + ic_{k+1})z + (1 − ic_{k+1})] R_k − 4 d_{k+1} z R_{k−1}.
pub fn eval_r<T: Real>(cd: &CoefficientData<T>, k: usize, z: Complex<T>) -> Result<CPolyValue<T>> {
    cd.check_degree(k)?;
    let mut prev = CPolyValue::one();
    if k == 0 {
        return Ok(prev);
    }
    let i = Complex::new(T::zero(), T::one());
    let lin = |c: T| (Complex::new(T::one(), T::zero()) + i * c) * z + (Complex::new(T::one(), T::zero()) - i * c);
    let mut cur = CPolyValue::new(lin(cd.c(1)));
    for j in 1..k {
        let a = cur.mul_c(lin(cd.c(j + 1)));
        let b = prev.mul_c(z).mul_scalar(T::of(4.0) * cd.d(j + 1));
        let next = a.sub(&b);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// R̂_k(z) = R_k(z) − 2(1 − ℓ_k) R_{k−1}(z); vanishes at z = 1.
pub fn eval_r_hat<T: Real>(
    cd: &CoefficientData<T>,
    k: usize,
    z: Complex<T>,
) -> Result<CPolyValue<T>> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    let rk = eval_r(cd, k, z)?;
    let rkm1 = eval_r(cd, k - 1, z)?;
    let two = T::of(2.0);
    Ok(rk.sub(&rkm1.mul_scalar(two * (T::one() - cd.ell(k)))))
}

/// Coefficients of R_k, ascending. Maintained only through degree
/// [`COEFF_CAP`]; the leading coefficient is Π_{j=1..k}(1 + ic_j).
pub fn r_coeffs<T: Real>(cd: &CoefficientData<T>, k: usize) -> Result<ComplexPoly<T>> {
    let norm = r_coeffs_normalized(cd, k)?;
    let mut lead = Complex::new(T::one(), T::zero());
    for j in 1..=k {
        lead = lead * Complex::new(T::one(), cd.c(j));
    }
    Ok(ComplexPoly {
        coeffs: norm.coeffs.into_iter().map(|a| a * lead).collect(),
    })
}

/// Monic normalization R_k / Π_{j=1..k}(1 + ic_j), kept well scaled for
/// every admissible coefficient range.
fn r_coeffs_normalized<T: Real>(cd: &CoefficientData<T>, k: usize) -> Result<ComplexPoly<T>> {
    cd.check_degree(k)?;
    if k > COEFF_CAP {
        return Err(Error::DegreeOutOfRange {
            requested: k,
            available: COEFF_CAP,
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let moebius = |c: T| (one - Complex::new(T::zero(), c)) / (one + Complex::new(T::zero(), c));
    let mut prev = vec![one]; // r̃_0
    if k == 0 {
        return Ok(ComplexPoly { coeffs: prev });
    }
    let mut cur = vec![moebius(cd.c(1)), one]; // r̃_1 = z + m_1
    for j in 1..k {
        let m = moebius(cd.c(j + 1));
        // 4 d_{j+1} / ((1 + ic_j)(1 + ic_{j+1}))
        let denom = (one + Complex::new(T::zero(), cd.c(j)))
            * (one + Complex::new(T::zero(), cd.c(j + 1)));
        let gamma = Complex::new(T::of(4.0) * cd.d(j + 1), T::zero()) / denom;
        let mut next = vec![Complex::<T>::zero(); cur.len() + 1];
        for (idx, a) in cur.iter().enumerate() {
            next[idx + 1] = next[idx + 1] + *a; // z · r̃_j
            next[idx] = next[idx] + *a * m; // m · r̃_j
        }
        for (idx, a) in prev.iter().enumerate() {
            next[idx + 1] = next[idx + 1] - *a * gamma; // −γ z r̃_{j−1}
        }
        prev = cur;
        cur = next;
    }
    Ok(ComplexPoly { coeffs: cur })
}

/// Coefficients of R̂_k / Π_{j=1..k}(1 + ic_j) (leading coefficient 1).
fn r_hat_coeffs_normalized<T: Real>(cd: &CoefficientData<T>, k: usize) -> Result<ComplexPoly<T>> {
    let rk = r_coeffs_normalized(cd, k)?;
    let rkm1 = r_coeffs_normalized(cd, k - 1)?;
    let one = Complex::new(T::one(), T::zero());
    let factor = Complex::new(T::of(2.0) * (T::one() - cd.ell(k)), T::zero())
        / (one + Complex::new(T::zero(), cd.c(k)));
    let mut coeffs = rk.coeffs;
    for (idx, a) in rkm1.coeffs.iter().enumerate() {
        coeffs[idx] = coeffs[idx] - *a * factor;
    }
    Ok(ComplexPoly { coeffs })
}

/// Coefficients of R̂_k, ascending.
pub fn r_hat_coeffs<T: Real>(cd: &CoefficientData<T>, k: usize) -> Result<ComplexPoly<T>> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    let norm = r_hat_coeffs_normalized(cd, k)?;
    let mut lead = Complex::new(T::one(), T::zero());
    for j in 1..=k {
        lead = lead * Complex::new(T::one(), cd.c(j));
    }
    Ok(ComplexPoly {
        coeffs: norm.coeffs.into_iter().map(|a| a * lead).collect(),
    })
}

/// Divides by (z − 1) with remainder; coefficients ascending.
pub(crate) fn deflate_at_one<T: Real>(poly: &ComplexPoly<T>) -> Result<ComplexPoly<T>> {
    let a = &poly.coeffs;
    let m = a.len() - 1;
    let mut q = vec![Complex::<T>::zero(); m];
    let mut carry = a[m];
    for j in (1..=m).rev() {
        q[j - 1] = carry;
        carry = a[j - 1] + carry;
    }
    let scale = a
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), T::max)
        .max(T::one());
    let bound = T::of(DEFLATION_TOL) * scale;
    if carry.norm() > bound {
        return Err(Error::DeflationResidual {
            remainder: carry.norm().to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ComplexPoly { coeffs: q })
}

/// Coefficients of the monic circle polynomial
/// Φ_{k−1} = R̂_k / ((z − 1) Π_{j=1..k}(1 + ic_j)), degree k − 1,
/// obtained by exact synthetic division at the root z = 1.
pub fn phi_coeffs<T: Real>(cd: &CoefficientData<T>, k: usize) -> Result<ComplexPoly<T>> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            requested: 0,
            available: cd.max_degree(),
        });
    }
    let norm = r_hat_coeffs_normalized(cd, k)?;
    deflate_at_one(&norm)
}

/// Φ_{k−1}(z). Away from z = 1 this is the pointwise ratio
/// R̂_k / ((z − 1) Π(1 + ic_j)), which tracks the recurrence's own
/// conditioning; the coefficient form (exact synthetic division of the
/// removed root, degree capped by [`COEFF_CAP`]) takes over near z = 1,
/// where the ratio would divide a rounded near-zero.
pub fn eval_phi<T: Real>(cd: &CoefficientData<T>, k: usize, z: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let sep = (z - one).norm();
    if sep >= T::of(1e-6) {
        let rhat = eval_r_hat(cd, k, z)?;
        let mut lead = CPolyValue::one();
        for j in 1..=k {
            lead = lead.mul_c(one + Complex::new(T::zero(), cd.c(j)));
        }
        let denom = lead.mul_c(z - one);
        return Ok(rhat.div(&denom).value());
    }
    if k <= COEFF_CAP {
        return Ok(phi_coeffs(cd, k)?.eval(z));
    }
    Err(Error::CoincidentPoints {
        separation: sep.to_f64().unwrap_or(f64::NAN),
    })
}
