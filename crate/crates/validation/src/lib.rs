//! Reference computations used to check `entangle_core`.
//!
//! Nothing here calls the core's eigen or singular-value solvers or its Kraus
//! constructors. Matrices are plain `[[Complex64; 4]; 4]`, channels are built
//! from explicit entries, spectra come from the characteristic polynomial and
//! extrema from ternary search.

#![allow(clippy::needless_range_loop)]

use entangle_core::{ChannelKind, Locality, PureState4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

pub type C = Complex64;
pub type Mat = [[C; 4]; 4];
type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

pub fn zero() -> Mat {
    [[ZERO; 4]; 4]
}

pub fn identity() -> Mat {
    let mut m = zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &Mat, k: C) -> Mat {
    a.map(|row| row.map(|x| x * k))
}

pub fn dagger(a: &Mat) -> Mat {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn conj(a: &Mat) -> Mat {
    a.map(|row| row.map(|x| x.conj()))
}

pub fn trace(a: &Mat) -> C {
    (0..4).map(|i| a[i][i]).sum()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat {
    let mut out = zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn r2(m: [[f64; 2]; 2]) -> Mat2 {
    m.map(|row| row.map(|x| C::new(x, 0.0)))
}

pub fn sigma_y() -> Mat2 {
    [[ZERO, C::new(0.0, -1.0)], [C::new(0.0, 1.0), ZERO]]
}

/// `|psi><psi|`
pub fn projector(psi: &[C; 4]) -> Mat {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = psi[i] * psi[j].conj();
        }
    }
    out
}

pub fn pure_density(s: &PureState4) -> Mat {
    projector(&s.amplitudes())
}

/// `R = rho (sy x sy) rho* (sy x sy)` from explicit Pauli matrices.
pub fn r_matrix(rho: &Mat) -> Mat {
    let yy = kron(&sigma_y(), &sigma_y());
    mul(&mul(&mul(rho, &yy), &conj(rho)), &yy)
}

/// Coefficients `c0..c4` (monic, `c4 = 1`) of `det(x I - A)` by the
/// Faddeev-LeVerrier recursion.
pub fn charpoly(a: &Mat) -> [C; 5] {
    let mut c = [ZERO; 5];
    c[4] = ONE;
    let mut m = zero();
    for k in 1..=4 {
        m = add(&mul(a, &m), &scale(&identity(), c[5 - k]));
        c[4 - k] = -trace(&mul(a, &m)) / k as f64;
    }
    c
}

fn horner(c: &[C; 5], x: C) -> C {
    c.iter().rev().fold(ZERO, |acc, &k| acc * x + k)
}

fn horner_deriv(c: &[C; 5], x: C) -> C {
    (1..5).rev().fold(ZERO, |acc, k| acc * x + c[k] * k as f64)
}

/// Roots of a monic quartic by Durand-Kerner iteration, then Newton polish.
pub fn quartic_roots(c: &[C; 5]) -> [C; 4] {
    let radius = 1.0 + c[..4].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z = [ZERO; 4];
    for (k, zk) in z.iter_mut().enumerate() {
        *zk = seed.powu(k as u32) * (0.5 * radius);
    }
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..4 {
            let denom: C = (0..4).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            if denom.norm() == 0.0 {
                z[i] += C::new(1e-8, 1e-8);
                continue;
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-16 * radius {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let d = horner_deriv(c, *zi);
            if d.norm() > 1e-300 {
                let step = horner(c, *zi) / d;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z
}

/// Eigenvalues of a general 4x4 matrix from its characteristic polynomial.
pub fn eigenvalues(a: &Mat) -> [C; 4] {
    quartic_roots(&charpoly(a))
}

/// Real parts of the eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(a: &Mat) -> [f64; 4] {
    let mut v = eigenvalues(a).map(|z| z.re);
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// Wootters concurrence from the characteristic-polynomial spectrum of `R`.
/// Near-zero eigenvalues carry ~1e-16 absolute error, so the result is only
/// good to ~1e-8.
pub fn wootters(rho: &Mat) -> f64 {
    let mut l = eigenvalues(&r_matrix(rho)).map(|z| z.re.max(0.0));
    l.sort_by(|x, y| y.total_cmp(x));
    (l[0].sqrt() - l[1].sqrt() - l[2].sqrt() - l[3].sqrt()).max(0.0)
}

/// `sum M rho M^dagger`
pub fn evolve(rho: &Mat, kraus: &[Mat]) -> Mat {
    kraus.iter().fold(zero(), |acc, m| add(&acc, &mul(&mul(m, rho), &dagger(m))))
}

fn unit(i: usize, j: usize) -> Mat {
    let mut m = zero();
    m[i][j] = ONE;
    m
}

/// Kraus operators written out entry by entry.
pub fn kraus(kind: ChannelKind, loc: Locality, p: f64) -> Vec<Mat> {
    let sp = C::new(p.sqrt(), 0.0);
    let sq = (1.0 - p).sqrt();
    match (kind, loc) {
        (ChannelKind::AmplitudeDamping, Locality::Intraparticle) => {
            let mut m0 = zero();
            m0[0][0] = ONE;
            for i in 1..4 {
                m0[i][i] = C::new(sq, 0.0);
            }
            let mut v = vec![m0];
            v.extend((1..4).map(|i| scale(&unit(0, i), sp)));
            v
        }
        (ChannelKind::PhaseDamping, Locality::Intraparticle) => {
            let mut v = vec![scale(&identity(), C::new(sq, 0.0))];
            v.extend((0..4).map(|i| scale(&unit(i, i), sp)));
            v
        }
        (ChannelKind::Depolarizing, Locality::Intraparticle) => {
            let mut v = Vec::new();
            for m in 0..4 {
                for n in 0..4 {
                    let mut u = zero();
                    for j in 0..4 {
                        let phase = 2.0 * std::f64::consts::PI * (j * m) as f64 / 4.0;
                        u[j][(j + n) % 4] = C::from_polar(1.0, phase);
                    }
                    let w = if m == 0 && n == 0 { (1.0 - 15.0 * p / 16.0).sqrt() } else { p.sqrt() / 4.0 };
                    v.push(scale(&u, C::new(w, 0.0)));
                }
            }
            v
        }
        (kind, Locality::Interparticle) => {
            let local: Vec<Mat2> = match kind {
                ChannelKind::AmplitudeDamping => {
                    vec![r2([[1.0, 0.0], [0.0, sq]]), r2([[0.0, p.sqrt()], [0.0, 0.0]])]
                }
                ChannelKind::PhaseDamping => vec![
                    r2([[sq, 0.0], [0.0, sq]]),
                    r2([[p.sqrt(), 0.0], [0.0, 0.0]]),
                    r2([[0.0, 0.0], [0.0, p.sqrt()]]),
                ],
                ChannelKind::Depolarizing => {
                    let w = (p / 3.0).sqrt();
                    let y = sigma_y();
                    vec![
                        r2([[sq, 0.0], [0.0, sq]]),
                        r2([[0.0, w], [w, 0.0]]),
                        [[y[0][0] * w, y[0][1] * w], [y[1][0] * w, y[1][1] * w]],
                        r2([[w, 0.0], [0.0, -w]]),
                    ]
                }
            };
            local.iter().flat_map(|a| local.iter().map(move |b| kron(a, b))).collect()
        }
    }
}

/// Output density matrix via the reference Kraus sets.
pub fn evolve_state(s: &PureState4, kind: ChannelKind, loc: Locality, p: f64) -> Mat {
    evolve(&pure_density(s), &kraus(kind, loc, p))
}

/// Bisection for the crossing of `f` below `threshold` on `[lo, hi]`, given
/// `f(lo) >= threshold > f(hi)`.
pub fn bisect_below<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, threshold: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ternary search for the minimum of a unimodal `f` on `[lo, hi]`.
pub fn ternary_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

pub fn ternary_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = ternary_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// First interior grid minimum and the next grid maximum of `f` sampled at
/// `n` points on `[0, 1]`, each refined by ternary search on the neighbouring
/// cells. `None` when the samples have no interior minimum.
pub fn dense_extrema<F: FnMut(f64) -> f64>(mut f: F, n: usize) -> Option<((f64, f64), (f64, f64))> {
    let ps: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let cs: Vec<f64> = ps.iter().map(|&p| f(p)).collect();
    let i_min = (0..n - 1).find(|&i| (i == 0 || cs[i] < cs[i - 1]) && cs[i] < cs[i + 1])?;
    let i_max = (i_min + 1..n - 1).find(|&j| cs[j] > cs[j - 1] && cs[j] >= cs[j + 1])?;
    let lo = |i: usize| ps[i.saturating_sub(1)];
    let min = ternary_min(&mut f, lo(i_min), ps[i_min + 1], 1e-12);
    let max = ternary_max(&mut f, lo(i_max), ps[i_max + 1], 1e-12);
    Some((min, max))
}

/// The bracket term written as `[P + (1 - P)|a|^2]`, with the same first two
/// terms as the other form; kept only to show it does not reproduce the
/// concurrence.
pub fn s_alternate(s: &PureState4, p: f64) -> f64 {
    let q = 1.0 - p;
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    let cross = a * d * b.conj() * c.conj() + b * c * a.conj() * d.conj();
    4.0 * b.norm_sqr() * c.norm_sqr() * q * q - 4.0 * q.powf(1.5) * cross.re
        + 2.0 * d.norm_sqr() * q * (p + q * a.norm_sqr())
}

/// `2 P (1 - P) (1 - |a|^2) |d|^2`
pub fn t_term(s: &PureState4, p: f64) -> f64 {
    2.0 * p * (1.0 - p) * (1.0 - s.a().norm_sqr()) * s.d().norm_sqr()
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Eight standard normals as four complex amplitudes, normalized.
pub fn random_complex_state(rng: &mut ChaCha20Rng) -> PureState4 {
    let mut z = [ZERO; 4];
    for x in &mut z {
        *x = C::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    }
    PureState4::from_cartesian(z[0], z[1], z[2], z[3], true).expect("nonzero Gaussian vector")
}

/// Four standard normals, normalized; signs included.
pub fn random_real_state(rng: &mut ChaCha20Rng) -> PureState4 {
    let mut z = [ZERO; 4];
    for x in &mut z {
        *x = C::new(StandardNormal.sample(rng), 0.0);
    }
    PureState4::from_cartesian(z[0], z[1], z[2], z[3], true).expect("nonzero Gaussian vector")
}

/// A random product `(x0|0> + x1|1>) (x) (y0|0> + y1|1>)`.
pub fn random_product_state(rng: &mut ChaCha20Rng) -> PureState4 {
    let mut q = || C::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let (x0, x1, y0, y1) = (q(), q(), q(), q());
    PureState4::from_cartesian(x0 * y0, x0 * y1, x1 * y0, x1 * y1, true).expect("nonzero product")
}

pub fn random_p(rng: &mut ChaCha20Rng) -> f64 {
    Uniform::new_inclusive(0.0, 1.0).expect("valid range").sample(rng)
}

/// `n` evenly spaced points on `[0, 1]`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { 1.0 } else { i as f64 / (n - 1) as f64 }).collect()
}
