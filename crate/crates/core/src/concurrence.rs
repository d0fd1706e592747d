//! Wootters concurrence: the numeric route through the spectrum of
//! `R = rho (sy x sy) rho* (sy x sy)` and the closed forms for each channel.
//!
//! The spectrum of `R` equals the spectrum of the Hermitian PSD matrix
//! `sqrt(rho) rho~ sqrt(rho)` with `rho~ = U rho* U`, `U = sy x sy`. That
//! matrix factors as `A A^dagger` with `A = sqrt(rho) U conj(sqrt(rho))`, so
//! `sqrt(lambda_i)` are the singular values of `A`. They are computed directly
//! rather than as square roots of eigenvalues: an output of rank two has two
//! exactly-zero eigenvalues whose rounding noise (~1e-17) would otherwise turn
//! into ~3e-9 after the square root.

use serde::{Deserialize, Serialize};

use crate::channels::{apply_channel, build_channel, check_p, ChannelKind, ChannelSpec, Locality};
use crate::error::{Error, Result};
use crate::matrix::{psd_sqrt, singular_values4, spin_flip, CMat4, PSD_TOL};
use crate::state::{DensityMatrix4, PolarParams, PureState4};

/// Eigenvalues of `R`, descending and non-negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RSpectrum {
    lambdas: [f64; 4],
}

impl RSpectrum {
    /// Sorts descending and clamps values in `[-PSD_TOL, 0)` to zero.
    pub fn from_values(mut lambdas: [f64; 4]) -> Result<Self> {
        lambdas.sort_by(|x, y| y.total_cmp(x));
        if lambdas[3] < -PSD_TOL || lambdas.iter().any(|x| x.is_nan()) {
            return Err(Error::NotPsd { min_eigenvalue: lambdas[3] });
        }
        Ok(RSpectrum { lambdas: lambdas.map(|x| x.max(0.0)) })
    }

    pub fn values(&self) -> [f64; 4] {
        self.lambdas
    }

    /// `max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))`, capped at 1.
    pub fn concurrence(&self) -> f64 {
        let s = self.lambdas.map(f64::sqrt);
        (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
    }
}

/// `R = rho (sy x sy) rho* (sy x sy)`; not Hermitian in general.
pub fn r_matrix(rho: &DensityMatrix4) -> CMat4 {
    let u = spin_flip();
    let r = rho.matrix();
    *r * u * r.conj() * u
}

pub fn r_spectrum(rho: &DensityMatrix4) -> Result<RSpectrum> {
    let root = psd_sqrt(rho.matrix())?;
    let a = root * spin_flip() * root.conj();
    RSpectrum::from_values(singular_values4(&a).map(|s| s * s))
}

pub fn concurrence_numeric(rho: &DensityMatrix4) -> f64 {
    r_spectrum(rho).expect("validated density matrices have a PSD square root").concurrence()
}

/// Numeric concurrence of `s` after the channel described by `spec`.
pub fn concurrence_after(s: &PureState4, spec: &ChannelSpec) -> Result<f64> {
    let out = apply_channel(&s.density(), &build_channel(spec)?)?;
    Ok(concurrence_numeric(&out))
}

/// `2|ad - bc|`
pub fn pure_concurrence(s: &PureState4) -> f64 {
    (2.0 * s.det_term().norm()).min(1.0)
}

/// Intraparticle amplitude damping: `C = 2 |bc sqrt(1-P) - ad| sqrt(1-P)`.
pub fn concurrence_ad_intra(s: &PureState4, p: f64) -> Result<f64> {
    check_p(p)?;
    let rq = (1.0 - p).sqrt();
    Ok((2.0 * (s.b() * s.c() * rq - s.a() * s.d()).norm() * rq).min(1.0))
}

/// The two terms with `C^2 = S - T` for intraparticle amplitude damping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ADIntraParts {
    pub s: f64,
    pub t: f64,
}

impl ADIntraParts {
    pub fn concurrence(&self) -> f64 {
        (self.s - self.t).max(0.0).sqrt()
    }
}

/// ```text
/// S = 4|b|^2|c|^2 (1-P)^2 - 4 (1-P)^{3/2} [a d b* c* + b c a* d*]
///     + 2|d|^2 (1-P) [P + (2-P)|a|^2]
/// T = 2 P (1-P) (1-|a|^2) |d|^2
/// ```
pub fn ad_intra_parts(s: &PureState4, p: f64) -> Result<ADIntraParts> {
    check_p(p)?;
    let q = 1.0 - p;
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    let cross = a * d * b.conj() * c.conj() + b * c * a.conj() * d.conj();
    let a2 = a.norm_sqr();
    let d2 = d.norm_sqr();
    let big_s =
        4.0 * b.norm_sqr() * c.norm_sqr() * q * q - 4.0 * q.powf(1.5) * cross.re + 2.0 * d2 * q * (p + (2.0 - p) * a2);
    let big_t = 2.0 * p * q * (1.0 - a2) * d2;
    Ok(ADIntraParts { s: big_s, t: big_t })
}

/// Polar form:
/// `C = 2 [|b|^2|c|^2(1-P) + |a|^2|d|^2 - 2|a||b||c||d| sqrt(1-P) cos(dtheta)]^{1/2} sqrt(1-P)`.
pub fn concurrence_ad_intra_polar(params: &PolarParams, p: f64) -> Result<f64> {
    check_p(p)?;
    let q = 1.0 - p;
    let bc = params.mag_b * params.mag_c;
    let ad = params.mag_a * params.mag_d;
    let inner = bc * bc * q + ad * ad - 2.0 * ad * bc * q.sqrt() * params.delta_theta().cos();
    Ok((2.0 * inner.max(0.0).sqrt() * q.sqrt()).min(1.0))
}

/// `V1 = |b||c| sqrt(1-P) e^{i(theta_b + theta_c)}` and
/// `V2 = |a||d| e^{i(theta_a + theta_d)}`; the concurrence is
/// `2 sqrt(1-P) |V1 - V2|`.
pub fn ad_intra_vectors(params: &PolarParams, p: f64) -> Result<(num_complex::Complex64, num_complex::Complex64)> {
    check_p(p)?;
    let v1 = num_complex::Complex64::from_polar(
        params.mag_b * params.mag_c * (1.0 - p).sqrt(),
        params.theta_b + params.theta_c,
    );
    let v2 = num_complex::Complex64::from_polar(params.mag_a * params.mag_d, params.theta_a + params.theta_d);
    Ok((v1, v2))
}

/// Interparticle amplitude damping on real amplitudes:
/// `C = max[0, sqrt(alpha + beta) - sqrt(alpha - beta) - 2 d^2 P (1-P)]` with
/// `alpha = 2(ad-bc)^2(1-P)^2 + d^4 P^2 (1-P)^2` and
/// `beta = 2(ad-bc)^2(1-P)^2 sqrt(1 + d^4 P^2 / (ad-bc)^2)`.
///
/// `beta` is evaluated as `2(1-P)^2 sqrt(X (X + d^4 P^2))`, `X = (ad-bc)^2`, and
/// `alpha - beta` through `alpha^2 - beta^2 = d^8 P^4 (1-P)^4`, which avoids
/// both the division and the cancellation.
pub fn concurrence_ad_inter(s: &PureState4, p: f64) -> Result<f64> {
    check_p(p)?;
    let [a, b, c, d] = s.real_amplitudes().ok_or(Error::ComplexStateUnsupported)?;
    let q = 1.0 - p;
    let x = (a * d - b * c).powi(2);
    let dd = d.powi(4) * p * p;
    let alpha = 2.0 * x * q * q + dd * q * q;
    let beta = 2.0 * q * q * (x * (x + dd)).sqrt();
    let sum = alpha + beta;
    let diff = if sum > 0.0 { (dd * q * q).powi(2) / sum } else { 0.0 };
    Ok((sum.sqrt() - diff.sqrt() - 2.0 * d * d * p * q).clamp(0.0, 1.0))
}

/// Eigenvalues of `R` after intraparticle phase damping, in closed form.
///
/// Real amplitudes use `l1,2 = [alpha +- |ad-bc|(2-P) sqrt(beta)] / 2`,
/// `l3 = a^2 d^2 P^2`, `l4 = b^2 c^2 P^2`; complex amplitudes use
/// `l1,2 = [alpha' +- sqrt(alpha'^2 - 4 beta'')] / 2` with
/// `alpha' = |ad-bc|^2 (2-P)^2 + 2 Re(ad (bc)*) P (4-3P)` and
/// `beta'' = |a|^2|b|^2|c|^2|d|^2 P^2 (4-3P)^2`. In both cases `l2` is taken
/// from the exact product `l1 l2`.
pub fn pd_intra_spectrum(s: &PureState4, p: f64) -> Result<RSpectrum> {
    check_p(p)?;
    let w = p * (4.0 - 3.0 * p);
    let (l1, l2, l3, l4) = match s.real_amplitudes() {
        Some([a, b, c, d]) => {
            let x = (a * d - b * c).powi(2) * (2.0 - p).powi(2);
            let y = a * b * c * d * w;
            let alpha = x + 2.0 * y;
            let beta = (x + 4.0 * y).max(0.0);
            let l1 = 0.5 * (alpha + x.sqrt() * beta.sqrt());
            let l2 = if l1 > 0.0 { y * y / l1 } else { 0.0 };
            (l1, l2, (a * d * p).powi(2), (b * c * p).powi(2))
        }
        None => {
            let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
            let ad = a * d;
            let bc = b * c;
            let alpha = (ad - bc).norm_sqr() * (2.0 - p).powi(2) + 2.0 * (ad * bc.conj()).re * w;
            let beta2 = ad.norm_sqr() * bc.norm_sqr() * w * w;
            let disc = (alpha * alpha - 4.0 * beta2).max(0.0);
            let l1 = 0.5 * (alpha + disc.sqrt());
            let l2 = if l1 > 0.0 { beta2 / l1 } else { 0.0 };
            (l1, l2, ad.norm_sqr() * p * p, bc.norm_sqr() * p * p)
        }
    };
    RSpectrum::from_values([l1, l2, l3, l4])
}

pub fn concurrence_pd_intra(s: &PureState4, p: f64) -> Result<f64> {
    pd_intra_spectrum(s, p).map(|r| r.concurrence())
}

/// Eigenvalues of `R` after intraparticle depolarizing noise:
/// `l1,2 = alpha +- beta`, `l3 = l4 = P^2/16` with
/// `alpha = 2|ad-bc|^2(1-P)^2 + (P/4)(1 - 3P/4)` and
/// `beta = 2|ad-bc|(1-P) sqrt(|ad-bc|^2(1-P)^2 + (P/4)(1 - 3P/4))`.
/// For real amplitudes `|ad-bc|` is the plain absolute value; `l2` comes from
/// `l1 l2 = ((P/4)(1 - 3P/4))^2`.
pub fn dp_intra_spectrum(s: &PureState4, p: f64) -> Result<RSpectrum> {
    check_p(p)?;
    let m = match s.real_amplitudes() {
        Some([a, b, c, d]) => (a * d - b * c).abs(),
        None => s.det_term().norm(),
    };
    let q = 1.0 - p;
    let g = 0.25 * p * (1.0 - 0.75 * p);
    let alpha = 2.0 * m * m * q * q + g;
    let beta = 2.0 * m * q * (m * m * q * q + g).sqrt();
    let l1 = alpha + beta;
    let l2 = if l1 > 0.0 { g * g / l1 } else { 0.0 };
    let l34 = p * p / 16.0;
    RSpectrum::from_values([l1, l2, l34, l34])
}

pub fn concurrence_dp_intra(s: &PureState4, p: f64) -> Result<f64> {
    dp_intra_spectrum(s, p).map(|r| r.concurrence())
}

/// Closed-form concurrence when one exists for this channel and state:
/// AD/PD/DP intraparticle for any state, AD interparticle for real states.
/// `Ok(None)` otherwise.
pub fn closed_form_concurrence(s: &PureState4, spec: &ChannelSpec) -> Result<Option<f64>> {
    use ChannelKind::*;
    use Locality::*;
    match (spec.kind, spec.locality) {
        (AmplitudeDamping, Intraparticle) => concurrence_ad_intra(s, spec.p).map(Some),
        (PhaseDamping, Intraparticle) => concurrence_pd_intra(s, spec.p).map(Some),
        (Depolarizing, Intraparticle) => concurrence_dp_intra(s, spec.p).map(Some),
        (AmplitudeDamping, Interparticle) => match concurrence_ad_inter(s, spec.p) {
            Ok(v) => Ok(Some(v)),
            Err(Error::ComplexStateUnsupported) => Ok(None),
            Err(e) => Err(e),
        },
        (PhaseDamping | Depolarizing, Interparticle) => {
            check_p(spec.p)?;
            Ok(None)
        }
    }
}
