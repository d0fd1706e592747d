//! Dense complex 2x2 and 4x4 matrices plus the small Hermitian eigen and
//! singular-value machinery the rest of the crate builds on.
//!
//! Two-particle operators use the fixed basis order
//! `0 = |a1 b1>`, `1 = |a1 b2>`, `2 = |a2 b1>`, `3 = |a2 b2>`, i.e. the
//! Kronecker order of `A (x) B` with the first factor as the slow index.

#![allow(clippy::needless_range_loop)]

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Max allowed `|h - h^dagger|` entry for inputs to the Hermitian eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are rounding and get clamped to zero.
pub const PSD_TOL: f64 = 1e-9;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the matrix Frobenius norm.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
const SVD_MAX_SWEEPS: usize = 100;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const ZERO: C64 = c(0.0, 0.0);
const ONE: C64 = c(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl CMat2 {
    pub const fn new(rows: [[C64; 2]; 2]) -> Self {
        CMat2(rows)
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        CMat2(rows.map(|r| r.map(|x| c(x, 0.0))))
    }

    pub fn identity() -> Self {
        CMat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn scale(&self, k: C64) -> Self {
        CMat2(self.0.map(|r| r.map(|x| x * k)))
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn sigma_x() -> Self {
        CMat2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn sigma_y() -> Self {
        CMat2([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]])
    }

    pub fn sigma_z() -> Self {
        CMat2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[C64; 4]; 4]);

impl Default for CMat4 {
    fn default() -> Self {
        CMat4::zero()
    }
}

impl CMat4 {
    pub const fn new(rows: [[C64; 4]; 4]) -> Self {
        CMat4(rows)
    }

    pub fn zero() -> Self {
        CMat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag_real([1.0; 4])
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        CMat4(rows.map(|r| r.map(|x| c(x, 0.0))))
    }

    pub fn diag_real(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = c(x, 0.0);
        }
        m
    }

    /// `|u><v|`
    pub fn outer(u: &[C64; 4], v: &[C64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = u[i] * v[j].conj();
            }
        }
        m
    }

    /// Matrix unit `|i><j|`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zero();
        m.0[i][j] = ONE;
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[j][i] = self.0[i][j].conj();
            }
        }
        m
    }

    /// Entry-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        CMat4(self.0.map(|r| r.map(|x| x.conj())))
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        CMat4(self.0.map(|r| r.map(|x| x * k)))
    }

    pub fn scale_real(&self, k: f64) -> Self {
        CMat4(self.0.map(|r| r.map(|x| x * k)))
    }

    pub fn mul_vec(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat4) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    s += self.0[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Max entry of `|m - m^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(m + m^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// `m^dagger m`
    pub fn gram(&self) -> Self {
        self.adjoint() * *self
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(mut self, rhs: CMat4) -> CMat4 {
        self += rhs;
        self
    }
}

impl AddAssign for CMat4 {
    fn add_assign(&mut self, rhs: CMat4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(mut self, rhs: CMat4) -> CMat4 {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Neg for CMat4 {
    type Output = CMat4;
    fn neg(self) -> CMat4 {
        self.scale_real(-1.0)
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        mat_mul(&self, &rhs)
    }
}

impl std::iter::Sum for CMat4 {
    fn sum<I: Iterator<Item = CMat4>>(iter: I) -> CMat4 {
        iter.fold(CMat4::zero(), |acc, m| acc + m)
    }
}

pub fn mat_mul(lhs: &CMat4, rhs: &CMat4) -> CMat4 {
    let mut out = CMat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = ZERO;
            for k in 0..4 {
                s += lhs.0[i][k] * rhs.0[k][j];
            }
            out.0[i][j] = s;
        }
    }
    out
}

pub fn adjoint(m: &CMat4) -> CMat4 {
    m.adjoint()
}

/// Kronecker product `a (x) b` in the crate's basis order.
pub fn tensor2x2(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = CMat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// `sigma_y (x) sigma_y`, the spin-flip operator.
pub fn spin_flip() -> CMat4 {
    tensor2x2(&CMat2::sigma_y(), &CMat2::sigma_y())
}

/// Eigen-decomposition of a Hermitian 4x4 matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen {
    /// Descending.
    pub values: [f64; 4],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMat4,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> [C64; 4] {
        [0, 1, 2, 3].map(|i| self.vectors.0[i][k])
    }
}

/// Cyclic complex Jacobi on a matrix already known to be Hermitian.
fn jacobi_eigh(h: &CMat4) -> HermitianEigen {
    let mut a = h.hermitian_part();
    let mut v = CMat4::identity();
    let norm = a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() <= JACOBI_REL_TOL * norm {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                // Phase-rotate the pair so the coupling is real, then apply a
                // real Jacobi rotation: J = diag(1, e^{-i phi}) * G(c, s).
                let phase_conj = (apq / g).conj();
                let theta = (a.0[q][q].re - a.0[p][p].re) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                let mut j = CMat4::identity();
                j.0[p][p] = c(cs, 0.0);
                j.0[p][q] = c(sn, 0.0);
                j.0[q][p] = phase_conj * -sn;
                j.0[q][q] = phase_conj * cs;

                a = j.adjoint() * a * j;
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                for i in 0..4 {
                    a.0[i][i].im = 0.0;
                }
                v = v * j;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| a.0[y][y].re.total_cmp(&a.0[x][x].re));
    let mut values = [0.0; 4];
    let mut vectors = CMat4::zero();
    for (k, &src) in order.iter().enumerate() {
        values[k] = a.0[src][src].re;
        for i in 0..4 {
            vectors.0[i][k] = v.0[i][src];
        }
    }
    HermitianEigen { values, vectors }
}

fn check_hermitian(h: &CMat4, tol: f64) -> Result<()> {
    let deviation = h.hermitian_deviation();
    // NaN deviations fail the comparison and are rejected too.
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotHermitian { deviation })
    }
}

/// Full eigen-decomposition; eigenvalues descending.
pub fn eigh4(h: &CMat4) -> Result<HermitianEigen> {
    check_hermitian(h, HERMITIAN_TOL)?;
    Ok(jacobi_eigh(h))
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn eig_hermitian4(h: &CMat4) -> Result<[f64; 4]> {
    eigh4(h).map(|e| e.values)
}

/// Hermitian PSD square root. Eigenvalues in `[-PSD_TOL, 0)` are clamped.
pub fn psd_sqrt(h: &CMat4) -> Result<CMat4> {
    check_hermitian(h, PSD_TOL)?;
    let eig = jacobi_eigh(h);
    let min = eig.values[3];
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let mut out = CMat4::zero();
    for k in 0..4 {
        let lam = eig.values[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        let u = eig.vector(k);
        out += CMat4::outer(&u, &u).scale_real(lam.sqrt());
    }
    Ok(out)
}

/// Singular values of an arbitrary complex 4x4 matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are orthogonalised pairwise and the
/// singular values are the final column norms. Small singular values come out
/// with absolute error ~ eps * sigma_max, which squaring via `m^dagger m`
/// would destroy.
pub fn singular_values4(m: &CMat4) -> [f64; 4] {
    let mut cols: [[C64; 4]; 4] = [0, 1, 2, 3].map(|j| [0, 1, 2, 3].map(|i| m.0[i][j]));

    for _ in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..3 {
            for j in (i + 1)..4 {
                let alpha: f64 = cols[i].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|x| x.norm_sqr()).sum();
                let gamma: C64 = (0..4).map(|k| cols[i][k].conj() * cols[j][k]).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                for k in 0..4 {
                    let xi = cols[i][k];
                    let xj = cols[j][k] * phase_conj;
                    cols[i][k] = xi * cs - xj * sn;
                    cols[j][k] = xi * sn + xj * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv = cols.map(|col| col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt());
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
