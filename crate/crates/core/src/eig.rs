//! Dense Hermitian eigensolver: cyclic Jacobi with complex plane rotations.
//!
//! Sizes in this crate stay small (a few dozen rows), where Jacobi is both
//! simple and exceptionally accurate: eigenvalues converge to a few ulps and
//! eigenvectors stay orthonormal to machine precision by construction.
//!
//! For a pivot pair (p, q) the 2×2 block [[α, β], [β̄, γ]] is phased real by
//! D = diag(1, e^{−iφ}) with φ = arg β, then annihilated by the classical
//! rotation with t² + 2τt − 1 = 0, τ = (γ − α)/(2|β|), taking the smaller
//! root so the rotation angle stays below π/4.

use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Row-major dense complex matrix.
pub type CMatrix<T> = Vec<Vec<Complex<T>>>;

/// Maximum cyclic sweeps before declaring failure; Jacobi on well-formed
/// Hermitian input converges quadratically and never gets near this.
const MAX_SWEEPS: usize = 60;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Eigenvalues, ascending.
    pub values: Vec<T>,
    /// `vectors[r]` is the unit eigenvector for `values[r]`.
    pub vectors: Vec<Vec<Complex<T>>>,
    /// Sweeps actually used.
    pub sweeps: usize,
    /// Final off-diagonal Frobenius norm.
    pub off_norm: T,
}

fn off_diag_norm<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.len();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn frobenius<T: Real>(a: &CMatrix<T>) -> T {
    let mut s = T::zero();
    for row in a {
        for v in row {
            s = s + v.norm_sqr();
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix (the strict lower triangle
/// is trusted to mirror the upper one).
pub fn eigen_hermitian<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0 });
    }
    let mut m: CMatrix<T> = a.clone();
    let mut v: CMatrix<T> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex::new(T::one(), T::zero())
                    } else {
                        Complex::zero()
                    }
                })
                .collect()
        })
        .collect();

    let fro = frobenius(&m);
    let tol = fro * T::epsilon() * T::of_usize(n).sqrt();
    let mut sweeps = 0;
    let mut off = off_diag_norm(&m);
    while off > tol && !off.is_zero() {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_norm: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diag_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i][i]
            .re
            .partial_cmp(&m[j][j].re)
            .expect("eigenvalues are finite")
    });
    let values = order.iter().map(|&i| m[i][i].re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
        off_norm: off,
    })
}

/// One Jacobi rotation annihilating the (p, q) entry; updates `m` by the
/// unitary congruence and accumulates it into `v`.
fn rotate<T: Real>(m: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let beta = m[p][q];
    let b = beta.norm();
    if b.is_zero() {
        return;
    }
    let alpha = m[p][p].re;
    let gamma = m[q][q].re;
    let phase = beta / b; // e^{iφ}
    let tau = (gamma - alpha) / (b + b);
    let t = if tau.is_zero() {
        T::one()
    } else {
        let sign = if tau > T::zero() { T::one() } else { -T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let sigma = t * c;
    // Unitary columns: U[:,p] = (c, −σ e^{−iφ}), U[:,q] = (σ, c e^{−iφ}).
    let s_conj = phase.conj().scale(sigma); // σ e^{−iφ} = conj(s)
    let cq = phase.conj().scale(c); // c e^{−iφ}

    let n = m.len();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k][p];
        let akq = m[k][q];
        m[k][p] = akp.scale(c) - s_conj * akq;
        m[k][q] = akp.scale(sigma) + cq * akq;
        m[p][k] = m[k][p].conj();
        m[q][k] = m[k][q].conj();
    }
    m[p][p] = Complex::new(alpha - t * b, T::zero());
    m[q][q] = Complex::new(gamma + t * b, T::zero());
    m[p][q] = Complex::zero();
    m[q][p] = Complex::zero();

    for k in 0..n {
        let vkp = v[k][p];
        let vkq = v[k][q];
        v[k][p] = vkp.scale(c) - s_conj * vkq;
        v[k][q] = vkp.scale(sigma) + cq * vkq;
    }
}
