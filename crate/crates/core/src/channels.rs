//! Kraus sets for amplitude damping, phase damping and depolarizing noise,
//! acting either on the whole four-level particle (intraparticle) or locally
//! and identically on each qubit (interparticle).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, tensor2x2, CMat2, CMat4, C64};
use crate::state::{validate_density, DensityMatrix4};

/// Max entry of `|sum M^dagger M - I|` accepted for a Kraus set.
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] =
        [ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping, ChannelKind::Depolarizing];

    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "ad",
            ChannelKind::PhaseDamping => "pd",
            ChannelKind::Depolarizing => "dp",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ad" => Ok(ChannelKind::AmplitudeDamping),
            "pd" => Ok(ChannelKind::PhaseDamping),
            "dp" => Ok(ChannelKind::Depolarizing),
            other => Err(Error::Parse(format!("unknown channel {other:?} (expected ad|pd|dp)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Locality {
    Intraparticle,
    Interparticle,
}

impl Locality {
    pub const ALL: [Locality; 2] = [Locality::Intraparticle, Locality::Interparticle];

    pub fn as_str(self) -> &'static str {
        match self {
            Locality::Intraparticle => "intra",
            Locality::Interparticle => "inter",
        }
    }
}

impl fmt::Display for Locality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Locality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intra" => Ok(Locality::Intraparticle),
            "inter" => Ok(Locality::Interparticle),
            other => Err(Error::Parse(format!("unknown locality {other:?} (expected intra|inter)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub locality: Locality,
    pub p: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, locality: Locality, p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(ChannelSpec { kind, locality, p })
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange { name: "P", value: p })
    }
}

/// An ordered Kraus set satisfying completeness.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMat4>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMat4>) -> Result<Self> {
        let deviation = completeness_deviation(&ops);
        if deviation <= COMPLETENESS_TOL {
            Ok(KrausSet { ops })
        } else {
            Err(Error::IncompleteKraus { deviation })
        }
    }

    pub fn ops(&self) -> &[CMat4] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn completeness_deviation(&self) -> f64 {
        completeness_deviation(&self.ops)
    }
}

fn completeness_deviation(ops: &[CMat4]) -> f64 {
    let sum: CMat4 = ops.iter().map(CMat4::gram).sum();
    let d = sum.max_abs_diff(&CMat4::identity());
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Amplitude damping of all three excited levels into `|0> = |a1b1>`.
///
/// Order: `M0 = |0><0| + sqrt(1-P) sum_{j>0} |j><j|`, then `M_i = sqrt(P)|0><i|`
/// for `i = 1, 2, 3`.
pub fn kraus_ad_intra(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let q = (1.0 - p).sqrt();
    let mut ops = vec![CMat4::diag_real([1.0, q, q, q])];
    for i in 1..4 {
        ops.push(CMat4::unit(0, i).scale_real(p.sqrt()));
    }
    KrausSet::new(ops)
}

/// Order: `M0 = sqrt(1-P) I`, then `M_{i+1} = sqrt(P)|i><i|` for `i = 0..3`.
pub fn kraus_pd_intra(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let mut ops = vec![CMat4::identity().scale_real((1.0 - p).sqrt())];
    for i in 0..4 {
        ops.push(CMat4::unit(i, i).scale_real(p.sqrt()));
    }
    KrausSet::new(ops)
}

/// Clock-and-shift operator `U_mn = sum_j e^{2 pi i j m / 4} |j><j+n mod 4|`.
pub fn weyl_operator(m: usize, n: usize) -> Result<CMat4> {
    if m > 3 || n > 3 {
        return Err(Error::IndexOutOfRange { m, n });
    }
    // Powers of i, exact.
    const I_POW: [C64; 4] = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
    let mut u = CMat4::zero();
    for j in 0..4 {
        u.0[j][(j + n) % 4] = I_POW[(j * m) % 4];
    }
    Ok(u)
}

/// Order: `M00 = sqrt(1 - 15P/16) U00` first, then `sqrt(P)/4 U_ij` for the
/// remaining 15 `(i, j)` in row-major order.
pub fn kraus_dp_intra(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let mut ops = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let w = if i == 0 && j == 0 { (1.0 - 15.0 * p / 16.0).sqrt() } else { p.sqrt() / 4.0 };
            ops.push(weyl_operator(i, j)?.scale_real(w));
        }
    }
    KrausSet::new(ops)
}

/// All `A_i (x) A_j` in row-major `(i, j)` order.
fn local_product(local: &[CMat2]) -> Result<KrausSet> {
    let ops = local.iter().flat_map(|a| local.iter().map(move |b| tensor2x2(a, b))).collect();
    KrausSet::new(ops)
}

/// Local amplitude damping `M0 = diag(1, sqrt(1-P))`, `M1 = sqrt(P)|0><1|` on
/// each qubit. Order `(0,0), (0,1), (1,0), (1,1)`.
pub fn kraus_ad_inter(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let m0 = CMat2::from_real([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]);
    let m1 = CMat2::from_real([[0.0, p.sqrt()], [0.0, 0.0]]);
    local_product(&[m0, m1])
}

/// Local `{sqrt(1-P) I, sqrt(P)|0><0|, sqrt(P)|1><1|}`; 9 products.
pub fn kraus_pd_inter(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let local = [
        CMat2::identity().scale_real((1.0 - p).sqrt()),
        CMat2::from_real([[p.sqrt(), 0.0], [0.0, 0.0]]),
        CMat2::from_real([[0.0, 0.0], [0.0, p.sqrt()]]),
    ];
    local_product(&local)
}

/// Local `{sqrt(1-P) I, sqrt(P/3) sx, sqrt(P/3) sy, sqrt(P/3) sz}`; 16 products.
pub fn kraus_dp_inter(p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let w = (p / 3.0).sqrt();
    let local = [
        CMat2::identity().scale_real((1.0 - p).sqrt()),
        CMat2::sigma_x().scale_real(w),
        CMat2::sigma_y().scale_real(w),
        CMat2::sigma_z().scale_real(w),
    ];
    local_product(&local)
}

pub fn build_channel(spec: &ChannelSpec) -> Result<KrausSet> {
    use ChannelKind::*;
    use Locality::*;
    match (spec.kind, spec.locality) {
        (AmplitudeDamping, Intraparticle) => kraus_ad_intra(spec.p),
        (PhaseDamping, Intraparticle) => kraus_pd_intra(spec.p),
        (Depolarizing, Intraparticle) => kraus_dp_intra(spec.p),
        (AmplitudeDamping, Interparticle) => kraus_ad_inter(spec.p),
        (PhaseDamping, Interparticle) => kraus_pd_inter(spec.p),
        (Depolarizing, Interparticle) => kraus_dp_inter(spec.p),
    }
}

/// `rho -> sum_i M_i rho M_i^dagger`, re-validated.
pub fn apply_channel(rho: &DensityMatrix4, k: &KrausSet) -> Result<DensityMatrix4> {
    let r = rho.matrix();
    let out: CMat4 = k.ops().iter().map(|m| *m * *r * m.adjoint()).sum();
    validate_density(&out.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState4;

    fn assert_close(a: &CMat4, b: &CMat4, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d < tol, "max diff {d:e}\n{a:?}\n{b:?}");
    }

    fn real_state() -> PureState4 {
        PureState4::from_real(0.6, 0.4, 0.5, 0.23f64.sqrt()).unwrap()
    }

    #[test]
    fn parse_selectors() {
        assert_eq!("ad".parse::<ChannelKind>().unwrap(), ChannelKind::AmplitudeDamping);
        assert_eq!("pd".parse::<ChannelKind>().unwrap(), ChannelKind::PhaseDamping);
        assert_eq!("dp".parse::<ChannelKind>().unwrap(), ChannelKind::Depolarizing);
        assert_eq!("inter".parse::<Locality>().unwrap(), Locality::Interparticle);
        assert!("xx".parse::<ChannelKind>().is_err());
        assert!("both".parse::<Locality>().is_err());
    }

    #[test]
    fn out_of_range_parameter() {
        for f in [kraus_ad_intra, kraus_pd_intra, kraus_dp_intra, kraus_ad_inter, kraus_pd_inter, kraus_dp_inter] {
            assert!(matches!(f(1.5), Err(Error::ParamOutOfRange { .. })));
            assert!(matches!(f(-0.1), Err(Error::ParamOutOfRange { .. })));
            assert!(matches!(f(f64::NAN), Err(Error::ParamOutOfRange { .. })));
        }
        assert!(ChannelSpec::new(ChannelKind::Depolarizing, Locality::Intraparticle, 2.0).is_err());
    }

    #[test]
    fn incomplete_set_rejected() {
        let err = KrausSet::new(vec![CMat4::identity().scale_real(0.5)]).unwrap_err();
        assert!(matches!(err, Error::IncompleteKraus { .. }));
    }

    #[test]
    fn ad_intra_endpoints() {
        let k0 = kraus_ad_intra(0.0).unwrap();
        assert_eq!(k0.len(), 4);
        assert_eq!(k0.ops()[0], CMat4::identity());
        assert!(k0.ops()[1..].iter().all(|m| m.max_abs() == 0.0));

        let k1 = kraus_ad_intra(1.0).unwrap();
        assert_eq!(k1.ops()[0], CMat4::diag_real([1.0, 0.0, 0.0, 0.0]));
        for i in 1..4 {
            assert_eq!(k1.ops()[i], CMat4::unit(0, i));
        }
    }

    #[test]
    fn pd_intra_endpoints_and_real_output() {
        let k0 = kraus_pd_intra(0.0).unwrap();
        assert_eq!(k0.len(), 5);
        assert_eq!(k0.ops()[0], CMat4::identity());

        let s = real_state();
        let out = apply_channel(&s.density(), &kraus_pd_intra(1.0).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(out.matrix().get(i, j).norm() < 1e-15);
                }
            }
        }

        let p = 0.37;
        let out = apply_channel(&s.density(), &kraus_pd_intra(p).unwrap()).unwrap();
        let v = s.real_amplitudes().unwrap();
        let mut expected = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let scale = if i == j { 1.0 } else { 1.0 - p };
                expected.0[i][j] = c(v[i] * v[j] * scale, 0.0);
            }
        }
        assert_close(out.matrix(), &expected, 1e-15);
    }

    #[test]
    fn weyl_basics() {
        assert_eq!(weyl_operator(0, 0).unwrap(), CMat4::identity());
        let shift = CMat4::unit(0, 1) + CMat4::unit(1, 2) + CMat4::unit(2, 3) + CMat4::unit(3, 0);
        assert_eq!(weyl_operator(0, 1).unwrap(), shift);
        assert!(matches!(weyl_operator(4, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(weyl_operator(0, 7), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn weyl_operators_are_unitary_and_orthogonal() {
        let all: Vec<_> = (0..16).map(|k| weyl_operator(k / 4, k % 4).unwrap()).collect();
        for (x, u) in all.iter().enumerate() {
            assert_close(&(u.adjoint() * *u), &CMat4::identity(), 1e-15);
            for (y, v) in all.iter().enumerate() {
                let ip = (u.adjoint() * *v).trace();
                let expected = if x == y { 4.0 } else { 0.0 };
                assert!((ip - c(expected, 0.0)).norm() < 1e-14, "({x},{y}) -> {ip}");
            }
        }
    }

    #[test]
    fn dp_intra_cases() {
        let k0 = kraus_dp_intra(0.0).unwrap();
        assert_eq!(k0.len(), 16);
        assert_eq!(k0.ops()[0], CMat4::identity());
        assert!(k0.ops()[1..].iter().all(|m| m.max_abs() == 0.0));

        let s = real_state();
        let out = apply_channel(&s.density(), &kraus_dp_intra(1.0).unwrap()).unwrap();
        assert_close(out.matrix(), &CMat4::identity().scale_real(0.25), 1e-15);

        let p = 0.42;
        let out = apply_channel(&s.density(), &kraus_dp_intra(p).unwrap()).unwrap();
        let a = s.a().re;
        assert!((out.matrix().get(0, 0).re - (a * a * (1.0 - p) + p / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn ad_inter_cases() {
        let k0 = kraus_ad_inter(0.0).unwrap();
        assert_eq!(k0.len(), 4);
        assert_eq!(k0.ops()[0], CMat4::identity());

        let s = real_state();
        let out = apply_channel(&s.density(), &kraus_ad_inter(1.0).unwrap()).unwrap();
        assert_close(out.matrix(), &CMat4::diag_real([1.0, 0.0, 0.0, 0.0]), 1e-15);

        // Same local operator on both sides.
        let k = kraus_ad_inter(0.3).unwrap();
        let m0 = CMat2::from_real([[1.0, 0.0], [0.0, 0.7f64.sqrt()]]);
        assert_close(&k.ops()[0], &tensor2x2(&m0, &m0), 1e-16);
    }

    #[test]
    fn pd_inter_matches_closed_output() {
        let k = kraus_pd_inter(0.0).unwrap();
        assert_eq!(k.len(), 9);
        let s = real_state();
        assert_close(apply_channel(&s.density(), &k).unwrap().matrix(), s.density().matrix(), 1e-15);

        let p = 0.28;
        let out = apply_channel(&s.density(), &kraus_pd_inter(p).unwrap()).unwrap();
        let [a, b, _c, d] = s.real_amplitudes().unwrap();
        assert!((out.matrix().get(0, 3).re - a * d * (1.0 - p).powi(2)).abs() < 1e-15);
        assert!((out.matrix().get(0, 1).re - a * b * (1.0 - p)).abs() < 1e-15);
    }

    #[test]
    fn dp_inter_cases() {
        let k = kraus_dp_inter(0.0).unwrap();
        assert_eq!(k.len(), 16);
        let s = real_state();
        assert_close(apply_channel(&s.density(), &k).unwrap().matrix(), s.density().matrix(), 1e-15);

        let mixed = DensityMatrix4::maximally_mixed();
        let out = apply_channel(&mixed, &kraus_dp_inter(0.61).unwrap()).unwrap();
        assert_close(out.matrix(), mixed.matrix(), 1e-15);

        assert!(kraus_dp_inter(0.37).unwrap().completeness_deviation() < 1e-12);
    }

    #[test]
    fn completeness_on_parameter_grid() {
        for kind in ChannelKind::ALL {
            for loc in Locality::ALL {
                for i in 0..=10 {
                    let spec = ChannelSpec::new(kind, loc, i as f64 / 10.0).unwrap();
                    let k = build_channel(&spec).unwrap();
                    assert!(k.completeness_deviation() < 1e-12, "{kind} {loc} {}", spec.p);
                }
            }
        }
    }

    #[test]
    fn dispatch_sizes() {
        let size = |kind, loc, p| build_channel(&ChannelSpec::new(kind, loc, p).unwrap()).unwrap().len();
        assert_eq!(size(ChannelKind::AmplitudeDamping, Locality::Intraparticle, 0.3), 4);
        assert_eq!(size(ChannelKind::Depolarizing, Locality::Intraparticle, 0.5), 16);
        assert_eq!(size(ChannelKind::PhaseDamping, Locality::Interparticle, 0.2), 9);
    }

    #[test]
    fn apply_examples() {
        let s = real_state();
        let id = KrausSet::new(vec![CMat4::identity()]).unwrap();
        assert_close(apply_channel(&s.density(), &id).unwrap().matrix(), s.density().matrix(), 1e-16);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState4::from_real(h, 0.0, 0.0, h).unwrap();
        let out = apply_channel(&bell.density(), &kraus_ad_intra(1.0).unwrap()).unwrap();
        assert_close(out.matrix(), &CMat4::diag_real([1.0, 0.0, 0.0, 0.0]), 1e-15);

        let p = 0.55;
        let out = apply_channel(&s.density(), &kraus_ad_intra(p).unwrap()).unwrap();
        let a2 = s.a().norm_sqr();
        assert!((out.matrix().get(0, 0).re - (p + (1.0 - p) * a2)).abs() < 1e-15);
    }
}
