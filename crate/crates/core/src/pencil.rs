//! The tridiagonal matrix pencil whose generalized eigenvalues are the zeros
//! of P_n.
//!
//! A is Hermitian tridiagonal with diagonal c_1..c_n and off-diagonal
//! i√d_{k+1} above, −i√d_{k+1} below; B is real symmetric positive definite
//! tridiagonal with unit diagonal and off-diagonal √d_{k+1}. Then
//! det(A − xB) = (−1)^n P_n(x), so Au = xBu picks out the zeros, and the
//! eigenvector for zero x_r is proportional to (u_0(x_r), …, u_{n−1}(x_r)).
//!
//! [`solve`] factorizes B = LLᵀ (L lower bidiagonal), diagonalizes the dense
//! Hermitian congruence C = L⁻¹AL⁻ᵀ by Jacobi rotations, and maps
//! eigenvectors back through L⁻ᵀ. [`zeros_by_bisection`] is a fully
//! independent path: Sturm-count bisection on the scaled recurrence,
//! sharing no linear algebra with [`solve`].

use crate::dd::{two_prod, Cdd, Dd};
use crate::eig::{eigen_hermitian, CMatrix};
use crate::error::{Error, Result};
use crate::recurrence::CoefficientData;
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;

/// Relative gap below which the computed spectrum is reported degenerate.
const SEPARATION_TOL: f64 = 1e-12;

/// Tridiagonal pencil data; `off[k]` = √d_{k+2} is shared by A (with factor
/// ±i) and B.
#[derive(Debug, Clone)]
pub struct Pencil<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> Pencil<T> {
    #[must_use]
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Dense Hermitian A.
    #[must_use]
    pub fn a_dense(&self) -> CMatrix<T> {
        let n = self.n();
        let mut a = vec![vec![Complex::<T>::zero(); n]; n];
        for k in 0..n {
            a[k][k] = Complex::new(self.diag[k], T::zero());
            if k + 1 < n {
                a[k][k + 1] = Complex::new(T::zero(), self.off[k]);
                a[k + 1][k] = Complex::new(T::zero(), -self.off[k]);
            }
        }
        a
    }

    /// Dense real B.
    #[must_use]
    pub fn b_dense(&self) -> Vec<Vec<T>> {
        let n = self.n();
        let mut b = vec![vec![T::zero(); n]; n];
        for k in 0..n {
            b[k][k] = T::one();
            if k + 1 < n {
                b[k][k + 1] = self.off[k];
                b[k + 1][k] = self.off[k];
            }
        }
        b
    }

    /// y = A u.
    #[must_use]
    pub fn a_apply(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n();
        let i = Complex::new(T::zero(), T::one());
        (0..n)
            .map(|k| {
                let mut y = u[k].scale(self.diag[k]);
                if k + 1 < n {
                    y = y + i * u[k + 1].scale(self.off[k]);
                }
                if k > 0 {
                    y = y - i * u[k - 1].scale(self.off[k - 1]);
                }
                y
            })
            .collect()
    }

    /// y = B u.
    #[must_use]
    pub fn b_apply(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n();
        (0..n)
            .map(|k| {
                let mut y = u[k];
                if k + 1 < n {
                    y = y + u[k + 1].scale(self.off[k]);
                }
                if k > 0 {
                    y = y + u[k - 1].scale(self.off[k - 1]);
                }
                y
            })
            .collect()
    }
}

/// Assembles the n×n pencil for the first n recurrence coefficients.
pub fn build_pencil<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<Pencil<T>> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0 });
    }
    if n > cd.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            available: cd.max_degree(),
        });
    }
    let diag = (1..=n).map(|k| cd.c(k)).collect();
    let off = (2..=n).map(|j| cd.sqrt_d(j)).collect();
    Ok(Pencil { diag, off })
}

/// Lower bidiagonal Cholesky factor of B: B = LLᵀ.
#[derive(Debug, Clone)]
pub struct BidiagCholesky<T> {
    /// L_{k,k}; equals √(1 − ℓ_k) for the minimal parameters ℓ.
    pub diag: Vec<T>,
    /// L_{k+1,k}; equals √ℓ_{k+1}.
    pub sub: Vec<T>,
}

impl<T: Real> BidiagCholesky<T> {
    /// Solves L y = b.
    #[must_use]
    pub fn forward_solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = b.len();
        let mut y = vec![Complex::<T>::zero(); n];
        y[0] = b[0] / self.diag[0];
        for k in 1..n {
            y[k] = (b[k] - y[k - 1].scale(self.sub[k - 1])) / self.diag[k];
        }
        y
    }

    /// Solves Lᵀ x = y.
    #[must_use]
    pub fn backward_solve(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = y.len();
        let mut x = vec![Complex::<T>::zero(); n];
        x[n - 1] = y[n - 1] / self.diag[n - 1];
        for k in (0..n - 1).rev() {
            x[k] = (y[k] - x[k + 1].scale(self.sub[k])) / self.diag[k];
        }
        x
    }
}

/// Cholesky factorization of the pencil's B, with an LLᵀ reconstruction
/// check at 1e-14 (or a few ulps for narrower scalars).
pub fn cholesky<T: Real>(p: &Pencil<T>) -> Result<BidiagCholesky<T>> {
    let n = p.n();
    let mut diag = Vec::with_capacity(n);
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    diag.push(T::one());
    for k in 0..n - 1 {
        let m = p.off[k] / diag[k];
        let arg = T::one() - m * m;
        if arg <= T::zero() {
            return Err(Error::NotPositiveDefinite { index: k + 2 });
        }
        sub.push(m);
        diag.push(arg.sqrt());
    }
    let tol = T::of(1e-14).max(T::epsilon() * T::of(4.0));
    for k in 0..n {
        let mut recon = diag[k] * diag[k];
        if k > 0 {
            recon = recon + sub[k - 1] * sub[k - 1];
        }
        if (recon - T::one()).abs() > tol {
            return Err(Error::VerificationFailed(format!(
                "Cholesky reconstruction drifted on diagonal entry {}",
                k + 1
            )));
        }
        if k + 1 < n && (diag[k] * sub[k] - p.off[k]).abs() > tol {
            return Err(Error::VerificationFailed(format!(
                "Cholesky reconstruction drifted on off-diagonal entry {}",
                k + 1
            )));
        }
    }
    Ok(BidiagCholesky { diag, sub })
}

/// Real symmetric 2n×2n embedding of the pencil: M = [[Re A, −Im A],
/// [Im A, Re A]] paired with diag(B, B). Each pencil eigenvalue appears
/// twice, and embedded eigenvectors map back via [`map_back`].
pub fn realify<T: Real>(p: &Pencil<T>) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let n = p.n();
    let a = p.a_dense();
    let b = p.b_dense();
    let mut m = vec![vec![T::zero(); 2 * n]; 2 * n];
    let mut b2 = vec![vec![T::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = a[i][j].re;
            m[i][j + n] = -a[i][j].im;
            m[i + n][j] = a[i][j].im;
            m[i + n][j + n] = a[i][j].re;
            b2[i][j] = b[i][j];
            b2[i + n][j + n] = b[i][j];
        }
    }
    (m, b2)
}

/// Reassembles a complex eigenvector from an embedded real one:
/// u = w[0..n] + i·w[n..2n].
#[must_use]
pub fn map_back<T: Real>(w: &[T]) -> Vec<Complex<T>> {
    let n = w.len() / 2;
    (0..n).map(|k| Complex::new(w[k], w[k + n])).collect()
}

/// Quadrature-ready spectral data for the size-n pencil.
#[derive(Debug, Clone)]
pub struct PencilSolution<T> {
    /// Zeros of P_n, descending.
    pub nodes: Vec<T>,
    /// λ_r = 1/(u(x_r)ᴴ B u(x_r)), aligned with `nodes`.
    pub weights: Vec<T>,
    /// Eigenvectors normalized to leading component 1, aligned with `nodes`.
    pub vectors: Vec<Vec<Complex<T>>>,
    /// max_r ‖A u_r − x_r B u_r‖_∞ / (1 + |x_r|).
    pub residual: T,
}

fn check_separation<T: Real>(ascending: &[T]) -> Result<()> {
    if ascending.len() < 2 {
        return Ok(());
    }
    let spread = *ascending.last().unwrap() - ascending[0];
    let threshold = T::of(SEPARATION_TOL) * spread;
    for w in ascending.windows(2) {
        let gap = w[1] - w[0];
        if gap < threshold {
            return Err(Error::DegenerateSpectrum {
                gap: gap.to_f64().unwrap_or(f64::NAN),
                threshold: threshold.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

/// Solves (A − λB)y = rhs by tridiagonal LU with partial pivoting.
/// Returns `None` on an exactly singular pivot.
fn shift_solve<T: Real>(p: &Pencil<T>, lam: T, rhs: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let n = p.diag.len();
    let mut d: Vec<Complex<T>> = p
        .diag
        .iter()
        .map(|&c| Complex::new(c - lam, T::zero()))
        .collect();
    let mut du: Vec<Complex<T>> = p.off.iter().map(|&s| Complex::new(-lam * s, s)).collect();
    let dl: Vec<Complex<T>> = p.off.iter().map(|&s| Complex::new(-lam * s, -s)).collect();
    let mut du2 = vec![Complex::<T>::zero(); n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if dl[i].norm_sqr() > d[i].norm_sqr() {
            // Swap rows i and i+1 so the multiplier stays ≤ 1; the swap
            // fills one entry of the second superdiagonal.
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let t = d[i + 1];
            d[i + 1] = du[i] - f * t;
            du[i] = t;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            b.swap(i, i + 1);
            let bi = b[i];
            b[i + 1] = b[i + 1] - f * bi;
        } else {
            if d[i] == Complex::zero() {
                return None;
            }
            let f = dl[i] / d[i];
            d[i + 1] = d[i + 1] - f * du[i];
            let bi = b[i];
            b[i + 1] = b[i + 1] - f * bi;
        }
    }
    let mut x = vec![Complex::<T>::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s = s - du[i] * x[i + 1];
        }
        if i + 2 < n {
            s = s - du2[i] * x[i + 2];
        }
        if d[i] == Complex::zero() {
            return None;
        }
        x[i] = s / d[i];
    }
    Some(x)
}

/// vᴴBv for the pencil's own B (unit diagonal, off-diagonal √d), summed in
/// double-double: the form collapses to eps-level values on vectors near
/// B's null direction, exactly the ones a leading-coefficient collapse
/// produces, and the parts stay O(1). Going through the Cholesky factor
/// instead would dodge the cancellation but evaluate a slightly different
/// matrix; its rounded entries perturb the form by eps·‖v‖², which is a
/// huge relative error right where it matters.
pub(crate) fn b_quadform<T: Real>(p: &Pencil<T>, v: &[Complex<T>]) -> T {
    let n = v.len();
    let mut acc = Dd::from_t(T::zero());
    for k in 0..n {
        acc = acc.add(Dd::prod(v[k].re, v[k].re));
        acc = acc.add(Dd::prod(v[k].im, v[k].im));
        if k + 1 < n {
            // 2·s_k·Re(v̄_k v_{k+1})
            let cross = Dd::prod(v[k].re, v[k + 1].re).add(Dd::prod(v[k].im, v[k + 1].im));
            acc = acc.add(cross.mul_t(p.off[k]).scale2(T::of(2.0)));
        }
    }
    acc.hi + acc.lo
}

/// Rayleigh-quotient / inverse-iteration polish of one eigenpair on the
/// original pencil, returning the eigenvalue, eigenvector, and quadrature
/// weight λ_r = |v_1|²/(vᴴBv). The Cholesky congruence loses absolute
/// accuracy like eps·‖L⁻¹AL⁻ᵀ‖ once B is badly conditioned, which happens
/// whenever a leading-coefficient collapse pushes a zero far out; shifted
/// solves against (A, B) restore it. Any singular or non-finite step keeps
/// the last good iterate.
fn refine_pair<T: Real>(
    cd: &CoefficientData<T>,
    p: &Pencil<T>,
    lam0: T,
    v0: Vec<Complex<T>>,
) -> (T, Vec<Complex<T>>, T) {
    let rayleigh = |u: &[Complex<T>]| -> Option<T> {
        let au = p.a_apply(u);
        let mut num = T::zero();
        for k in 0..u.len() {
            num += (u[k].conj() * au[k]).re;
        }
        let lam = num / b_quadform(p, u);
        lam.is_finite().then_some(lam)
    };
    let mut lam = rayleigh(&v0).unwrap_or(lam0);
    let mut v = v0;
    for _ in 0..2 {
        let bv = p.b_apply(&v);
        let Some(y) = shift_solve(p, lam, &bv) else {
            break;
        };
        let scale = y.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        if !scale.is_finite() || scale <= T::zero() {
            break;
        }
        let y: Vec<Complex<T>> = y.iter().map(|z| z.unscale(scale)).collect();
        let Some(next) = rayleigh(&y) else {
            break;
        };
        lam = next;
        v = y;
    }
    // Two more steps through the compensated solve, the second chained on
    // the double-double iterate without an f64 round trip. The Rayleigh
    // quotient is quadratically blind to the iterate's residual angle φ,
    // but the weight denominator vᴴBv is not: near B's null direction it
    // shifts by φ²·‖v‖², which swamps its tiny value and spoils the ninth
    // digit of the weight, and collapsing the first solve's output to f64
    // leaves φ that large. The chained step drives φ to the double-double
    // floor, and the weight is taken from that iterate before any
    // rounding.
    let mut weight = v[0].norm_sqr() / b_quadform(p, &v);
    let first = lu_solve_cdd(p, lam, b_apply_dd(p, &v)).and_then(|y| normalize_cdd(&y));
    if let Some(y1) = first {
        let v1: Vec<Complex<T>> = y1.iter().map(|z| z.to_c()).collect();
        if let Some(next) = rayleigh(&v1) {
            lam = next;
            v = v1;
            weight = v[0].norm_sqr() / b_quadform(p, &v);
            let chained = lu_solve_cdd(p, lam, b_apply_cdd(p, &y1)).and_then(|y| normalize_cdd(&y));
            if let Some(y2) = chained {
                let v2: Vec<Complex<T>> = y2.iter().map(|z| z.to_c()).collect();
                if let Some(next) = rayleigh(&v2) {
                    let w = y2[0].norm_sqr_dd().div(b_quadform_cdd(p, &y2)).collapse();
                    if w.is_finite() && w > T::zero() {
                        lam = next;
                        v = v2;
                        weight = w;
                    }
                }
            }
        }
    }
    // The pencil stores fl(√d), so it represents d only to a rounding;
    // zeros pushed out by a leading-coefficient collapse feel that last
    // ulp. First-order correction with the exact residue e = √d − off:
    // δλ = vᴴ(δA − λ δB)v / vᴴBv, where δA, δB carry e on the
    // off-diagonals.
    let n = v.len();
    let mut da = T::zero();
    let mut db = T::zero();
    for k in 0..n.saturating_sub(1) {
        let s = p.off[k];
        let (pp, pe) = two_prod(s, s);
        let e = ((cd.d(k + 2) - pp) - pe) / (s + s);
        let cross = v[k].conj() * v[k + 1];
        da -= (e + e) * cross.im;
        db += (e + e) * cross.re;
    }
    let corr = (da - lam * db) / b_quadform(p, &v);
    if corr.is_finite() {
        lam += corr;
    }
    (lam, v, weight)
}

/// Solves the generalized eigenproblem Au = xBu for the size-n pencil:
/// Cholesky congruence to a dense Hermitian matrix, Jacobi diagonalization,
/// back-substitution, and a per-pair polish on the original pencil. Nodes
/// come out descending with their quadrature weights and normalized
/// eigenvectors.
pub fn solve<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<PencilSolution<T>> {
    let p = build_pencil(cd, n)?;
    let l = cholesky(&p)?;
    let a = p.a_dense();

    // X = L⁻¹ A, column by column.
    let mut x = vec![vec![Complex::<T>::zero(); n]; n];
    for j in 0..n {
        let col: Vec<Complex<T>> = (0..n).map(|i| a[i][j]).collect();
        let y = l.forward_solve(&col);
        for i in 0..n {
            x[i][j] = y[i];
        }
    }
    // C = X L⁻ᵀ = (L⁻¹ Xᴴ)ᴴ.
    let mut c = vec![vec![Complex::<T>::zero(); n]; n];
    for j in 0..n {
        let col: Vec<Complex<T>> = (0..n).map(|i| x[j][i].conj()).collect();
        let y = l.forward_solve(&col);
        for i in 0..n {
            c[j][i] = y[i].conj();
        }
    }
    // Symmetrize away the last rounding asymmetry.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (c[i][j] + c[j][i].conj()).scale(T::of(0.5));
            c[i][j] = avg;
            c[j][i] = avg.conj();
        }
        c[i][i] = Complex::new(c[i][i].re, T::zero());
    }

    let eig = eigen_hermitian(&c)?;
    check_separation(&eig.values)?;

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residual = T::zero();
    for (lam, w) in eig.values.iter().zip(&eig.vectors).rev() {
        let v = l.backward_solve(w);
        // λ_r = |v_1|²/(vᴴBv) is scale-invariant, so the polish can
        // renormalize freely.
        let (lam, v, weight) = refine_pair(cd, &p, *lam, v);
        let u: Vec<Complex<T>> = v.iter().map(|z| z / v[0]).collect();
        let au = p.a_apply(&u);
        let bu = p.b_apply(&u);
        for k in 0..n {
            let r = (au[k] - bu[k].scale(lam)).norm() / (T::one() + lam.abs());
            residual = residual.max(r);
        }
        nodes.push(lam);
        weights.push(weight);
        vectors.push(u);
    }
    let ascending: Vec<T> = nodes.iter().rev().copied().collect();
    check_separation(&ascending)?;
    Ok(PencilSolution {
        nodes,
        weights,
        vectors,
        residual,
    })
}

/// Zeros of P_n, descending, found without any matrix algebra. Since the
/// P_{k−1} coefficient d_{k+1}(x²+1) never vanishes on the real line, the
/// sequence P_0(x), ..., P_n(x) is a Sturm chain: its sign changes count
/// the zeros of P_n above x. Bisection on that count pins each zero and
/// stays reliable even where zeros of consecutive degrees nearly
/// coincide, which defeats plain sign bracketing.
pub fn zeros_by_bisection<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0 });
    }
    if n > cd.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            available: cd.max_degree(),
        });
    }
    let count_above = |x: T| zero_count_above(cd, n, x).expect("degree checked");
    let mut hi = T::one() + cd.c(1).abs();
    let mut expanded = false;
    for _ in 0..300 {
        if count_above(hi) == 0 {
            expanded = true;
            break;
        }
        hi = hi + hi;
    }
    if !expanded {
        return Err(Error::BracketFailure { index: 1, degree: n });
    }
    let mut lo = -(T::one() + cd.c(1).abs());
    expanded = false;
    for _ in 0..300 {
        if count_above(lo) == n {
            expanded = true;
            break;
        }
        lo = lo + lo;
    }
    if !expanded {
        return Err(Error::BracketFailure { index: n, degree: n });
    }
    let half = T::of(0.5);
    let mut zeros = Vec::with_capacity(n);
    let mut upper = hi;
    for r in 1..=n {
        // invariant: count_above(a) >= r, count_above(b) < r
        let mut a = lo;
        let mut b = upper;
        for _ in 0..300 {
            // a couple of ulps; the splittability guard is the real floor
            let tol = T::of(4e-16) * T::one().max(a.abs()).max(b.abs());
            if b - a <= tol {
                break;
            }
            let mid = (a + b) * half;
            if mid <= a || mid >= b {
                break; // interval no longer splittable in this precision
            }
            if count_above(mid) >= r {
                a = mid;
            } else {
                b = mid;
            }
        }
        zeros.push((a + b) * half);
        upper = b;
    }
    Ok(zeros)
}

/// B·v assembled in double-double from an f64 vector; near B's null
/// direction the plain product cancels to noise.
fn b_apply_dd<T: Real>(p: &Pencil<T>, v: &[Complex<T>]) -> Vec<Cdd<T>> {
    let n = v.len();
    (0..n)
        .map(|k| {
            let mut re = Dd::from_t(v[k].re);
            let mut im = Dd::from_t(v[k].im);
            if k + 1 < n {
                re = re.add(Dd::prod(p.off[k], v[k + 1].re));
                im = im.add(Dd::prod(p.off[k], v[k + 1].im));
            }
            if k > 0 {
                re = re.add(Dd::prod(p.off[k - 1], v[k - 1].re));
                im = im.add(Dd::prod(p.off[k - 1], v[k - 1].im));
            }
            Cdd { re, im }
        })
        .collect()
}

/// B·y for a double-double vector, fully in double-double.
fn b_apply_cdd<T: Real>(p: &Pencil<T>, y: &[Cdd<T>]) -> Vec<Cdd<T>> {
    let n = y.len();
    (0..n)
        .map(|k| {
            let mut z = y[k];
            if k + 1 < n {
                z = z.add(y[k + 1].mul_t(p.off[k]));
            }
            if k > 0 {
                z = z.add(y[k - 1].mul_t(p.off[k - 1]));
            }
            z
        })
        .collect()
}

/// yᴴBy for a double-double vector; see [`b_quadform`] for why the form
/// must be summed without intermediate rounding.
fn b_quadform_cdd<T: Real>(p: &Pencil<T>, y: &[Cdd<T>]) -> Dd<T> {
    let n = y.len();
    let mut acc = Dd::from_t(T::zero());
    for k in 0..n {
        acc = acc.add(y[k].norm_sqr_dd());
        if k + 1 < n {
            // 2·s_k·Re(ȳ_k y_{k+1})
            let cross = y[k].re.mul(y[k + 1].re).add(y[k].im.mul(y[k + 1].im));
            acc = acc.add(cross.mul_t(p.off[k]).scale2(T::of(2.0)));
        }
    }
    acc
}

/// The compensated twin of [`shift_solve`]: tridiagonal LU of A − λB with
/// entries, elimination, and back substitution in double-double, solving
/// against a double-double rhs. A plain solve's backward error acts on the
/// eigenvalue like an eps-sized pencil perturbation amplified by
/// ‖v‖²/vᴴBv, which a collapse instance inflates past any useful
/// tolerance.
fn lu_solve_cdd<T: Real>(p: &Pencil<T>, lam: T, rhs: Vec<Cdd<T>>) -> Option<Vec<Cdd<T>>> {
    let n = p.diag.len();
    let zero = Dd::from_t(T::zero());
    let mut d: Vec<Cdd<T>> = (0..n)
        .map(|k| Cdd {
            re: Dd::diff(p.diag[k], lam),
            im: zero,
        })
        .collect();
    let mut du: Vec<Cdd<T>> = (0..n.saturating_sub(1))
        .map(|k| Cdd {
            re: Dd::prod(-lam, p.off[k]),
            im: Dd::from_t(p.off[k]),
        })
        .collect();
    let dl: Vec<Cdd<T>> = (0..n.saturating_sub(1))
        .map(|k| Cdd {
            re: Dd::prod(-lam, p.off[k]),
            im: Dd::from_t(-p.off[k]),
        })
        .collect();
    let mut du2 = vec![Cdd::zero(); n.saturating_sub(2)];
    let mut b = rhs;
    for i in 0..n.saturating_sub(1) {
        if dl[i].mag_hi() > d[i].mag_hi() {
            let f = d[i].div(dl[i]);
            d[i] = dl[i];
            let t = d[i + 1];
            d[i + 1] = du[i].sub(f.mul(t));
            du[i] = t;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] = f.mul(du[i + 1]).neg();
            }
            b.swap(i, i + 1);
            let bi = b[i];
            b[i + 1] = b[i + 1].sub(f.mul(bi));
        } else {
            if d[i].is_zero() {
                return None;
            }
            let f = dl[i].div(d[i]);
            d[i + 1] = d[i + 1].sub(f.mul(du[i]));
            let bi = b[i];
            b[i + 1] = b[i + 1].sub(f.mul(bi));
        }
    }
    let mut x = vec![Cdd::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s = s.sub(du[i].mul(x[i + 1]));
        }
        if i + 2 < n {
            s = s.sub(du2[i].mul(x[i + 2]));
        }
        if d[i].is_zero() {
            return None;
        }
        x[i] = s.div(d[i]);
    }
    Some(x)
}

/// Rescales a double-double iterate to unit max magnitude by an exact
/// power of two, so nothing overflows when solves are chained. `None` if
/// the vector is zero or non-finite.
fn normalize_cdd<T: Real>(y: &[Cdd<T>]) -> Option<Vec<Cdd<T>>> {
    let mag = y.iter().fold(T::zero(), |m, z| m.max(z.mag_hi()));
    if !mag.is_finite() || mag <= T::zero() {
        return None;
    }
    let ex = mag.log2().ceil().to_f64().unwrap_or(0.0) as i32;
    let down = T::of(2.0).powi(-ex);
    Some(y.iter().map(|z| z.scale2(down)).collect())
}

/// Number of zeros of P_k above x, counted exactly from the sign changes
/// of the Sturm chain P_0(x), ..., P_k(x). The chain runs in compensated
/// double-double arithmetic: a leading-coefficient collapse can push a
/// zero out to where plain evaluation blurs its position by eps·x², and
/// the counts must stay trustworthy there.
pub fn zero_count_above<T: Real>(cd: &CoefficientData<T>, k: usize, x: T) -> Result<usize> {
    if k == 0 {
        return Err(Error::DimensionTooSmall { n: 0 });
    }
    if k > cd.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: k,
            available: cd.max_degree(),
        });
    }
    let quad = {
        let (p, e) = two_prod(x, x);
        Dd::renorm(p, e + T::one())
    };
    // rescale window: exact powers of two, safely inside T's exponent range
    let quarter = (T::max_value().log2().to_f64().unwrap_or(1024.0) / 4.0).floor() as i32;
    let big = T::of(2.0).powi(2 * quarter);
    let small = T::of(2.0).powi(-2 * quarter);
    let mut changes = 0usize;
    let mut last_sign = 1i8; // P_0 = 1
    let mut prev = Dd::from_t(T::one());
    let mut cur = Dd::diff(x, cd.c(1));
    for j in 1..=k {
        if j > 1 {
            let next = Dd::diff(x, cd.c(j))
                .mul(cur)
                .sub(quad.mul_t(cd.d(j)).mul(prev));
            prev = cur;
            cur = next;
            let m = prev.hi.abs().max(cur.hi.abs());
            if m > big {
                prev = prev.scale2(small);
                cur = cur.scale2(small);
            } else if m > T::zero() && m < small {
                prev = prev.scale2(big);
                cur = cur.scale2(big);
            }
        }
        // zero entries are skipped: they sit between opposite signs
        let s = cur.signum_i();
        if s != 0 {
            if s != last_sign {
                changes += 1;
            }
            last_sign = s;
        }
    }
    Ok(changes)
}

/// Definiteness classes detectable from the recurrence data alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCondition {
    /// Every zero of P_n is positive.
    AllPositive,
    /// Every zero of P_n is negative.
    AllNegative,
    /// The Gershgorin-style test is silent.
    Indeterminate,
}

/// Diagonal-dominance test on the pencil: if every Gershgorin interval of
/// A − 0·B lies strictly right (left) of the origin relative to B's row
/// sums, all zeros are positive (negative).
pub fn sign_condition_check<T: Real>(cd: &CoefficientData<T>, n: usize) -> Result<SignCondition> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n: 0 });
    }
    if n > cd.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            available: cd.max_degree(),
        });
    }
    let radius = |k: usize| -> T {
        // Row k of the off-diagonal magnitudes, subscripts 1..=n.
        let mut r = T::zero();
        if k >= 2 {
            r = r + cd.sqrt_d(k);
        }
        if k + 1 <= n {
            r = r + cd.sqrt_d(k + 1);
        }
        r
    };
    let positive = (1..=n).all(|k| cd.c(k) > radius(k));
    if positive {
        return Ok(SignCondition::AllPositive);
    }
    let negative = (1..=n).all(|k| cd.c(k) < -radius(k));
    if negative {
        return Ok(SignCondition::AllNegative);
    }
    Ok(SignCondition::Indeterminate)
}
