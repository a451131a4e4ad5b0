//! Discrete measures on the unit circle built from the pencil spectrum:
//! quadrature nodes/weights, moments, and the discrete-orthogonality
//! verifications tying the real-line and circle pictures together.
//!
//! For the size-n pencil with zeros x_1 > … > x_n, the circle nodes are
//! ζ_r = (x_r + i)/(x_r − i) and the weights come in two normalizations:
//! λ_r (Wronskian form) and the probability weights
//! λ̂_r = ¼(1 + c_1²)|ζ_r − 1|² λ_r with Σ λ̂_r = 1.

use crate::chain::ChainParams;
use crate::error::{Error, Result};
use crate::pencil::{solve, Pencil};
use crate::recurrence::{eval_phi, eval_r, eval_r_hat, eval_u_hat, wronskian_g_polished, CoefficientData};
use crate::scaled::PolyValue;
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Spectral quadrature data on the circle.
#[derive(Debug, Clone)]
pub struct CircleQuadrature<T> {
    pub n: usize,
    /// Real-line nodes (zeros of P_n), descending.
    pub x: Vec<T>,
    /// Circle nodes ζ_r = (x_r + i)/(x_r − i), renormalized to |ζ| = 1.
    pub zeta: Vec<Complex<T>>,
    /// Wronskian-form weights λ_r > 0.
    pub lambda: Vec<T>,
    /// Probability weights λ̂_r, Σ λ̂_r = 1.
    pub lambda_hat: Vec<T>,
}

/// One discrete moment of the node measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMoment<T> {
    pub value: Complex<T>,
    /// True when |k| < n, where the discrete and underlying measures agree.
    pub measure_exact: bool,
}

/// Maximum deviations of a verification battery, split by matrix position
/// and already scaled relative to the diagonal norms.
#[derive(Debug, Clone, Copy)]
pub struct DeviationReport<T> {
    pub max_diagonal: T,
    pub max_off_diagonal: T,
}

impl<T: Real> DeviationReport<T> {
    #[must_use]
    pub fn max(&self) -> T {
        self.max_diagonal.max(self.max_off_diagonal)
    }
}

/// λ_r = (x_r² + 1)^{n−1} d_2⋯d_n / 𝒢_n(x_r): the weight expression that
/// needs only the recurrence, independent of the eigenvector route. 𝒢 is
/// taken at the polished zero, not at x as given; see
/// [`crate::recurrence::wronskian_g_polished`].
fn wronskian_weight<T: Real>(cd: &CoefficientData<T>, n: usize, x: T) -> Result<T> {
    let (g, x2p1) = wronskian_g_polished(cd, n, x)?;
    let mut num = PolyValue::new(x2p1).powi((n - 1) as u64);
    for j in 2..=n {
        num = num.mul_scalar(cd.d(j));
    }
    Ok(num.div(&g).value())
}

/// Builds the n-node circle quadrature: nodes from the pencil solve,
/// weights from the Wronskian formula (the eigenvector weights in
/// [`solve`]'s output remain available as an independent cross-check).
pub fn quadrature<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<CircleQuadrature<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let sol = solve(cd, n)?;
    let x = sol.nodes;
    let c1 = cd.c(1);
    let quarter_weight = T::of(0.25) * (T::one() + c1 * c1);
    let mut zeta = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    let mut lambda_hat = Vec::with_capacity(n);
    for &xr in &x {
        let z = Complex::new(xr, T::one()) / Complex::new(xr, -T::one());
        let z = z / z.norm(); // pin |ζ| = 1 exactly enough for moment powers
        let lam = wronskian_weight(cd, n, xr)?;
        let hat = quarter_weight * (z - Complex::new(T::one(), T::zero())).norm_sqr() * lam;
        zeta.push(z);
        lambda.push(lam);
        lambda_hat.push(hat);
    }
    Ok(CircleQuadrature {
        n,
        x,
        zeta,
        lambda,
        lambda_hat,
    })
}

/// λ_r = 1/(u_rᴴ B u_r) from normalized eigenvectors (leading component 1):
/// the eigenvector route to the weights, used as an oracle against the
/// Wronskian route.
#[must_use]
pub fn weights_from_vectors<T: Real>(p: &Pencil<T>, vectors: &[Vec<Complex<T>>]) -> Vec<T> {
    vectors
        .iter()
        .map(|u| T::one() / crate::pencil::b_quadform(p, u))
        .collect()
}

/// k-th moment Σ_r λ̂_r ζ_r^k of the discrete measure. Exact for the
/// underlying measure when |k| < n; computed (and flagged) otherwise.
#[must_use]
pub fn discrete_moment<T: Real>(q: &CircleQuadrature<T>, k: i64) -> DiscreteMoment<T> {
    let power = |z: &Complex<T>| -> Complex<T> {
        let p = z.powu(k.unsigned_abs() as u32);
        if k < 0 {
            p.conj()
        } else {
            p
        }
    };
    let value = q
        .zeta
        .iter()
        .zip(&q.lambda_hat)
        .fold(Complex::zero(), |s: Complex<T>, (z, w)| s + power(z).scale(*w));
    DiscreteMoment {
        value,
        measure_exact: (k.unsigned_abs() as usize) < q.n,
    }
}

/// Both sides of the weight-sum identity:
/// Σ_r λ_r = 1 + Σ_{k=2..n} Π_{j=2..k} ℓ_j/(1 − ℓ_j).
#[must_use]
pub fn weight_sum_identity<T: Real>(cd: &CoefficientData<T>, q: &CircleQuadrature<T>) -> (T, T) {
    let lhs = q.lambda.iter().fold(T::zero(), |s, w| s + *w);
    let mut rhs = T::one();
    let mut prod = T::one();
    for k in 2..=q.n {
        prod = prod * cd.ell(k) / (T::one() - cd.ell(k));
        rhs = rhs + prod;
    }
    (lhs, rhs)
}

fn require_degree<T: Real>(cd: &CoefficientData<T>, needed: usize) -> Result<()> {
    if cd.max_degree() < needed {
        return Err(Error::DegreeOutOfRange {
            requested: needed,
            available: cd.max_degree(),
        });
    }
    Ok(())
}

/// Checks Σ_r λ_r conj(R̂_m(ζ_r)) R̂_k(ζ_r) = δ_{mk} 2^{2k} Π_{j=1..k}
/// d_{j+1} / ℓ_{k+1} over 1 ≤ m, k ≤ n. Deviations are relative to the
/// geometric mean of the diagonal norms involved.
pub fn verify_discrete_orthogonality<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
) -> Result<DeviationReport<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    require_degree(cd, n + 1)?;
    let q = quadrature(cd, n)?;
    // R̂ values at the nodes.
    let mut vals = vec![vec![Complex::<T>::zero(); n]; n + 1];
    for (r, z) in q.zeta.iter().enumerate() {
        for k in 1..=n {
            vals[k][r] = eval_r_hat(cd, k, *z)?.value();
        }
    }
    let norm = |k: usize| -> T {
        let mut p = T::one();
        for j in 1..=k {
            p = p * cd.d(j + 1);
        }
        let four = T::of(4.0);
        p * four.powi(k as i32) / cd.ell(k + 1)
    };
    let mut report = DeviationReport {
        max_diagonal: T::zero(),
        max_off_diagonal: T::zero(),
    };
    for m in 1..=n {
        for k in 1..=n {
            let mut s = Complex::<T>::zero();
            for r in 0..n {
                s = s + (vals[m][r].conj() * vals[k][r]).scale(q.lambda[r]);
            }
            let scale = (norm(m) * norm(k)).sqrt();
            if m == k {
                let dev = (s.re - norm(k)).abs().max(s.im.abs()) / scale;
                report.max_diagonal = report.max_diagonal.max(dev);
            } else {
                report.max_off_diagonal = report.max_off_diagonal.max(s.norm() / scale);
            }
        }
    }
    Ok(report)
}

/// Checks Σ_r λ̂_r conj(Φ_m(ζ_r)) Φ_k(ζ_r) = δ_{mk} (1 + c_1²) 2^{2k}
/// Π_{j=1..k+1} d_{j+1} / (ℓ_{k+2} Π_{j=1..k+1}(1 + c_j²)) over
/// 0 ≤ m, k ≤ n − 1.
pub fn verify_phi_orthogonality<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
) -> Result<DeviationReport<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    require_degree(cd, n + 1)?;
    let q = quadrature(cd, n)?;
    let mut vals = vec![vec![Complex::<T>::zero(); n]; n];
    for (r, z) in q.zeta.iter().enumerate() {
        for k in 0..n {
            // Φ_k is carried by the deflated index k+1.
            vals[k][r] = eval_phi(cd, k + 1, *z)?;
        }
    }
    let c1 = cd.c(1);
    let norm = |k: usize| -> T {
        let mut p = (T::one() + c1 * c1) * T::of(4.0).powi(k as i32);
        for j in 1..=k + 1 {
            let cj = cd.c(j);
            p = p * cd.d(j + 1) / (T::one() + cj * cj);
        }
        p / cd.ell(k + 2)
    };
    let mut report = DeviationReport {
        max_diagonal: T::zero(),
        max_off_diagonal: T::zero(),
    };
    for m in 0..n {
        for k in 0..n {
            let mut s = Complex::<T>::zero();
            for r in 0..n {
                s = s + (vals[m][r].conj() * vals[k][r]).scale(q.lambda_hat[r]);
            }
            let scale = (norm(m) * norm(k)).sqrt();
            if m == k {
                let dev = (s.re - norm(k)).abs().max(s.im.abs()) / scale;
                report.max_diagonal = report.max_diagonal.max(dev);
            } else {
                report.max_off_diagonal = report.max_off_diagonal.max(s.norm() / scale);
            }
        }
    }
    Ok(report)
}

/// Checks Σ_r λ_r conj(û_m(x_r)) û_k(x_r) = δ_{mk} over 1 ≤ m, k ≤ n: the
/// unitarity of the weighted node-value matrix.
pub fn verify_u_hat_orthonormality<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
) -> Result<DeviationReport<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    require_degree(cd, n + 1)?;
    let q = quadrature(cd, n)?;
    let mut vals = vec![vec![Complex::<T>::zero(); n]; n + 1];
    for (r, xr) in q.x.iter().enumerate() {
        for k in 1..=n {
            vals[k][r] = eval_u_hat(cd, k, *xr)?;
        }
    }
    let mut report = DeviationReport {
        max_diagonal: T::zero(),
        max_off_diagonal: T::zero(),
    };
    for m in 1..=n {
        for k in 1..=n {
            let mut s = Complex::<T>::zero();
            for r in 0..n {
                s = s + (vals[m][r].conj() * vals[k][r]).scale(q.lambda[r]);
            }
            if m == k {
                let dev = (s.re - T::one()).abs().max(s.im.abs());
                report.max_diagonal = report.max_diagonal.max(dev);
            } else {
                report.max_off_diagonal = report.max_off_diagonal.max(s.norm());
            }
        }
    }
    Ok(report)
}

/// b_k = −1/(2^k Π_{j=1..k}(1 − ℓ_j)) for k = 1..n: the coefficients that
/// telescope {R̂_k} back to the constant 1 (see
/// [`verify_combination_reconstruction`]).
pub fn combination_coefficients<T: Real>(params: &ChainParams<T>, n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if params.ell.len() < n {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            available: params.ell.len(),
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut denom = T::one();
    for k in 1..=n {
        denom = denom * T::of(2.0) * (T::one() - params.ell[k - 1]);
        out.push(-T::one() / denom);
    }
    Ok(out)
}

/// Residual of the reconstruction identity
/// 1 = Σ_{k=1..n−1} b_k R̂_k(z) − 2 b_n (1 − ℓ_n) R_{n−1}(z) at the point z.
pub fn verify_combination_reconstruction<T: Real>(
    cd: &CoefficientData<T>,
    n: usize,
    z: Complex<T>,
) -> Result<T> {
    let params = ChainParams {
        ell: cd.ell_slice().to_vec(),
        maximal: None,
        classification: None,
    };
    let b = combination_coefficients(&params, n)?;
    let mut acc = Complex::<T>::zero();
    for k in 1..n {
        acc = acc + eval_r_hat(cd, k, z)?.value().scale(b[k - 1]);
    }
    let tail = eval_r(cd, n - 1, z)?
        .value()
        .scale(T::of(2.0) * b[n - 1] * (T::one() - cd.ell(n)));
    acc = acc - tail;
    Ok((acc - Complex::new(T::one(), T::zero())).norm())
}
