//! Two-qubit pure input states, their polar parameterisation, and validated
//! density matrices.
//!
//! A state is `a|a1b1> + b|a1b2> + c|a2b1> + d|a2b2>`; amplitudes are kept in
//! that order.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{DensityViolation, Error, Result};
use crate::matrix::{c, eig_hermitian4, CMat4, C64, HERMITIAN_TOL, PSD_TOL};

/// Allowed `|sum |x|^2 - 1|` for a state that claims to be normalized.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed `|tr(rho) - 1|` for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Imaginary parts below this count as zero when deciding whether a state is real.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState4 {
    amps: [C64; 4],
}

/// Magnitudes and phases (radians) of the four amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarParams {
    pub mag_a: f64,
    pub mag_b: f64,
    pub mag_c: f64,
    pub mag_d: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub theta_c: f64,
    pub theta_d: f64,
}

impl PolarParams {
    pub fn new(mags: [f64; 4], thetas: [f64; 4]) -> Self {
        PolarParams {
            mag_a: mags[0],
            mag_b: mags[1],
            mag_c: mags[2],
            mag_d: mags[3],
            theta_a: thetas[0],
            theta_b: thetas[1],
            theta_c: thetas[2],
            theta_d: thetas[3],
        }
    }

    /// Same as [`PolarParams::new`] with angles given in degrees.
    pub fn from_degrees(mags: [f64; 4], degrees: [f64; 4]) -> Self {
        Self::new(mags, degrees.map(f64::to_radians))
    }

    pub fn mags(&self) -> [f64; 4] {
        [self.mag_a, self.mag_b, self.mag_c, self.mag_d]
    }

    pub fn thetas(&self) -> [f64; 4] {
        [self.theta_a, self.theta_b, self.theta_c, self.theta_d]
    }

    pub fn delta_theta(&self) -> f64 {
        reduce_angle(self.theta_b + self.theta_c - self.theta_a - self.theta_d)
    }
}

/// Wraps an angle into `(-pi, pi]`.
///
/// This is a subset of `(-2pi, 2pi]` and, unlike a 4pi-wide window, is
/// invariant under a global phase of the state.
fn reduce_angle(x: f64) -> f64 {
    let mut r = x.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Phase in `[0, 2pi)`; zero amplitudes have phase 0.
fn phase_of(z: C64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        z.arg().rem_euclid(TAU)
    }
}

impl PureState4 {
    pub fn from_cartesian(a: C64, b: C64, c_: C64, d: C64, normalize: bool) -> Result<Self> {
        let amps = [a, b, c_, d];
        if amps.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::InvalidParams("non-finite amplitude".into()));
        }
        let n2: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
        if n2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        if normalize {
            let n = n2.sqrt();
            return Ok(PureState4 { amps: amps.map(|x| x / n) });
        }
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(PureState4 { amps })
    }

    /// Real amplitudes, no renormalisation.
    pub fn from_real(a: f64, b: f64, c_: f64, d: f64) -> Result<Self> {
        Self::from_cartesian(c(a, 0.0), c(b, 0.0), c(c_, 0.0), c(d, 0.0), false)
    }

    pub fn from_polar(p: &PolarParams) -> Result<Self> {
        let mags = p.mags();
        if mags.iter().any(|&m| !m.is_finite() || m < 0.0) {
            return Err(Error::InvalidParams(format!("magnitudes must be finite and >= 0: {mags:?}")));
        }
        let n2: f64 = mags.iter().map(|m| m * m).sum();
        if n2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        let thetas = p.thetas();
        let amps = [0, 1, 2, 3].map(|k| C64::from_polar(mags[k], thetas[k]));
        Ok(PureState4 { amps })
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amps
    }

    pub fn a(&self) -> C64 {
        self.amps[0]
    }
    pub fn b(&self) -> C64 {
        self.amps[1]
    }
    pub fn c(&self) -> C64 {
        self.amps[2]
    }
    pub fn d(&self) -> C64 {
        self.amps[3]
    }

    pub fn magnitudes(&self) -> [f64; 4] {
        self.amps.map(|x| x.norm())
    }

    pub fn to_polar(&self) -> PolarParams {
        PolarParams::new(self.magnitudes(), self.amps.map(phase_of))
    }

    /// `theta_b + theta_c - theta_a - theta_d`, wrapped to `(-pi, pi]`.
    pub fn delta_theta(&self) -> f64 {
        self.to_polar().delta_theta()
    }

    /// False when `|a||d| = 0` or `|b||c| = 0`: one side of the phase
    /// difference then has no meaning.
    pub fn delta_theta_defined(&self) -> bool {
        let [ma, mb, mc, md] = self.magnitudes();
        ma * md > 0.0 && mb * mc > 0.0
    }

    /// `ad - bc`; the pure-state concurrence is `2|ad - bc|`.
    pub fn det_term(&self) -> C64 {
        self.a() * self.d() - self.b() * self.c()
    }

    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|x| x.im.abs() <= REAL_TOL)
    }

    /// Real parts when every imaginary part is negligible.
    pub fn real_amplitudes(&self) -> Option<[f64; 4]> {
        self.is_real().then(|| self.amps.map(|x| x.re))
    }

    pub fn with_global_phase(&self, phi: f64) -> Self {
        let k = C64::from_polar(1.0, phi);
        PureState4 { amps: self.amps.map(|x| x * k) }
    }

    pub fn density(&self) -> DensityMatrix4 {
        DensityMatrix4 { m: CMat4::outer(&self.amps, &self.amps) }
    }
}

pub fn state_from_cartesian(a: C64, b: C64, c_: C64, d: C64, normalize: bool) -> Result<PureState4> {
    PureState4::from_cartesian(a, b, c_, d, normalize)
}

pub fn state_from_polar(p: &PolarParams) -> Result<PureState4> {
    PureState4::from_polar(p)
}

pub fn delta_theta(s: &PureState4) -> f64 {
    s.delta_theta()
}

pub fn density_from_pure(s: &PureState4) -> DensityMatrix4 {
    s.density()
}

/// Parses the textual state forms accepted by the CLI:
///
/// * `a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im`
/// * `polar:|a|,theta_a,|b|,theta_b,|c|,theta_c,|d|,theta_d` (angles in degrees)
///
/// Unparseable text gives [`Error::Parse`]; a well-formed but invalid state
/// gives the validation error.
pub fn parse_state(text: &str, normalize: bool) -> Result<PureState4> {
    let text = text.trim();
    let (polar, body) = match text.strip_prefix("polar:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let nums = body
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad number {t:?} in state: {e}"))))
        .collect::<Result<Vec<f64>>>()?;
    if nums.len() != 8 {
        return Err(Error::Parse(format!("state needs 8 numbers, got {}", nums.len())));
    }
    if nums.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse("state contains non-finite numbers".into()));
    }
    if polar {
        let mags = [nums[0], nums[2], nums[4], nums[6]];
        let degs = [nums[1], nums[3], nums[5], nums[7]];
        if normalize {
            let n = mags.iter().map(|m| m * m).sum::<f64>().sqrt();
            if n == 0.0 {
                return Err(Error::ZeroVector);
            }
            return PureState4::from_polar(&PolarParams::from_degrees(mags.map(|m| m / n), degs));
        }
        PureState4::from_polar(&PolarParams::from_degrees(mags, degs))
    } else {
        PureState4::from_cartesian(
            c(nums[0], nums[1]),
            c(nums[2], nums[3]),
            c(nums[4], nums[5]),
            c(nums[6], nums[7]),
            normalize,
        )
    }
}

/// A 4x4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4 {
    m: CMat4,
}

impl DensityMatrix4 {
    pub fn matrix(&self) -> &CMat4 {
        &self.m
    }

    pub fn into_matrix(self) -> CMat4 {
        self.m
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix4 { m: CMat4::identity().scale_real(0.25) }
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        // Hermitian by construction.
        eig_hermitian4(&self.m.hermitian_part()).expect("density matrix is Hermitian")
    }
}

pub fn validate_density(m: &CMat4) -> Result<DensityMatrix4> {
    if !m.is_finite() {
        return Err(Error::InvalidParams("density matrix has non-finite entries".into()));
    }
    let mut violations = Vec::new();
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        violations.push(DensityViolation::NotHermitian { deviation });
    }
    let tr = m.trace();
    if (tr - 1.0).norm() > TRACE_TOL {
        violations.push(DensityViolation::TraceNotOne { trace: tr.re });
    }
    let min = eig_hermitian4(&m.hermitian_part())?[3];
    if min < -PSD_TOL {
        violations.push(DensityViolation::NotPsd { min_eigenvalue: min });
    }
    if violations.is_empty() {
        Ok(DensityMatrix4 { m: *m })
    } else {
        Err(Error::InvalidDensity(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(a: f64, b: f64, c_: f64, d: f64) -> PureState4 {
        PureState4::from_real(a, b, c_, d).unwrap()
    }

    #[test]
    fn basis_state_is_valid() {
        let s = real(1.0, 0.0, 0.0, 0.0);
        assert_eq!(s.a(), c(1.0, 0.0));
    }

    #[test]
    fn opt_in_normalization() {
        let one = c(1.0, 0.0);
        let s = PureState4::from_cartesian(one, one, one, one, true).unwrap();
        for x in s.amplitudes() {
            assert!((x - c(0.5, 0.0)).norm() < 1e-15);
        }
        let err = PureState4::from_cartesian(one, one, one, one, false).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn zero_vector_rejected() {
        let z = c(0.0, 0.0);
        assert_eq!(PureState4::from_cartesian(z, z, z, z, true), Err(Error::ZeroVector));
    }

    #[test]
    fn blue_state_magnitudes() {
        // 0.71 = 1 - 0.09 - 0.04 - 0.16
        assert!(PureState4::from_real(0.3, 0.71f64.sqrt(), 0.2, 0.4).is_ok());
        // The six-digit rounding is 3.8e-8 off and needs explicit normalisation.
        assert!(PureState4::from_real(0.3, 0.842615, 0.2, 0.4).is_err());
        let s = PureState4::from_cartesian(c(0.3, 0.0), c(0.842615, 0.0), c(0.2, 0.0), c(0.4, 0.0), true);
        assert!(s.is_ok());
    }

    #[test]
    fn polar_real_state() {
        let s = PureState4::from_polar(&PolarParams::new([0.5; 4], [0.0; 4])).unwrap();
        assert!(s.is_real());
        for x in s.amplitudes() {
            assert!((x - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn red_state_delta_theta() {
        let p = PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], [0.0, 0.0, 0.0, 5.7]);
        let s = PureState4::from_polar(&p).unwrap();
        assert!((s.delta_theta() + 0.099_483_767).abs() < 1e-8);
        assert!((s.delta_theta() + 5.7f64.to_radians()).abs() < 1e-14);
    }

    #[test]
    fn polar_rejects_unnormalized() {
        let p = PolarParams::from_degrees([0.3, 0.84, 0.2, 0.4], [0.0, 0.0, 0.0, 5.7]);
        assert!(matches!(PureState4::from_polar(&p), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn delta_theta_cases() {
        assert_eq!(real(0.5, 0.5, 0.5, 0.5).delta_theta(), 0.0);
        let p = PolarParams::from_degrees([0.5; 4], [10.0; 4]);
        assert!(PureState4::from_polar(&p).unwrap().delta_theta().abs() < 1e-14);
    }

    #[test]
    fn opposite_phase_shift_keeps_delta_theta() {
        let p = PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], [0.0, 20.0, 35.0, 5.7]);
        let mut q = p;
        q.theta_a += 0.4;
        q.theta_d -= 0.4;
        let s = PureState4::from_polar(&p).unwrap();
        let t = PureState4::from_polar(&q).unwrap();
        assert!((s.delta_theta() - t.delta_theta()).abs() < 1e-12);
    }

    #[test]
    fn delta_theta_flags_zero_products() {
        assert!(!real(0.0, 0.6, 0.0, 0.8).delta_theta_defined());
        assert!(!real(0.6, 0.0, 0.0, 0.8).delta_theta_defined());
        assert!(real(0.5, 0.5, 0.5, 0.5).delta_theta_defined());
    }

    #[test]
    fn density_cases() {
        let rho = real(1.0, 0.0, 0.0, 0.0).density();
        assert_eq!(*rho.matrix(), CMat4::diag_real([1.0, 0.0, 0.0, 0.0]));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = real(h, 0.0, 0.0, h).density();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((bell.matrix().get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((bell.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((bell.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_cases() {
        assert!(validate_density(&CMat4::identity().scale_real(0.25)).is_ok());

        // Trace of diag(2, -1, 0, 0) is 1, so only positivity fails.
        match validate_density(&CMat4::diag_real([2.0, -1.0, 0.0, 0.0])) {
            Err(Error::InvalidDensity(v)) => {
                assert_eq!(v.len(), 1);
                assert!(matches!(v[0], DensityViolation::NotPsd { .. }));
            }
            other => panic!("{other:?}"),
        }
        match validate_density(&CMat4::diag_real([2.0, -0.5, 0.0, 0.0])) {
            Err(Error::InvalidDensity(v)) => {
                assert!(v.iter().any(|x| matches!(x, DensityViolation::TraceNotOne { .. })));
                assert!(v.iter().any(|x| matches!(x, DensityViolation::NotPsd { .. })));
            }
            other => panic!("{other:?}"),
        }
        let mut m = CMat4::identity().scale_real(0.25);
        m.0[0][1] = c(0.1, 0.0);
        match validate_density(&m) {
            Err(Error::InvalidDensity(v)) => {
                assert!(matches!(v[0], DensityViolation::NotHermitian { .. }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_forms() {
        let s = parse_state("0.5,0,0.5,0,0.5,0,0.5,0", false).unwrap();
        assert!(s.is_real());
        let p = parse_state("polar:0.3,0,0.8426149773176358,0,0.2,0,0.4,5.7", false).unwrap();
        assert!((p.delta_theta() + 5.7f64.to_radians()).abs() < 1e-12);
        let n = parse_state("polar:0.3,0,0.84,0,0.2,0,0.4,5.7", true).unwrap();
        assert!((n.magnitudes().iter().map(|m| m * m).sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(matches!(parse_state("1,2,3", false), Err(Error::Parse(_))));
        assert!(matches!(parse_state("a,0,0,0,0,0,0,0", false), Err(Error::Parse(_))));
        assert!(matches!(parse_state("1,0,1,0,0,0,0,0", false), Err(Error::NotNormalized { .. })));
    }
}
