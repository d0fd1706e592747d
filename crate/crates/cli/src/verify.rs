//! Seeded cross-check of every closed form against the numeric path, plus the
//! structural channel invariants.

use std::fmt::Write as _;

use entangle_core::{
    apply_channel, build_channel, closed_form_concurrence, concurrence_numeric, ChannelKind, ChannelSpec, Locality,
    PureState4, Result, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub const AD_INTRA_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const COMPLETENESS_LIMIT: f64 = 1e-12;
pub const TRACE_LIMIT: f64 = 1e-12;
pub const PSD_LIMIT: f64 = -1e-9;
pub const RANK2_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Amplitudes {
    Real,
    Complex,
}

impl Amplitudes {
    fn as_str(self) -> &'static str {
        match self {
            Amplitudes::Real => "real",
            Amplitudes::Complex => "complex",
        }
    }
}

/// One (channel, locality, amplitude type) combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Group {
    pub kind: ChannelKind,
    pub locality: Locality,
    pub amplitudes: Amplitudes,
}

impl Group {
    fn label(&self) -> String {
        format!("{} {} {}", self.kind, self.locality, self.amplitudes.as_str())
    }

    /// Tolerance for the closed form, if this group has one.
    pub fn closed_form_tol(&self) -> Option<f64> {
        use ChannelKind::*;
        use Locality::*;
        match (self.kind, self.locality, self.amplitudes) {
            (AmplitudeDamping, Intraparticle, _) => Some(AD_INTRA_TOL),
            (AmplitudeDamping, Interparticle, Amplitudes::Real) => Some(CLOSED_FORM_TOL),
            (PhaseDamping | Depolarizing, Intraparticle, _) => Some(CLOSED_FORM_TOL),
            _ => None,
        }
    }
}

/// Every group, in report order, restricted by the optional filters.
pub fn groups(kind: Option<ChannelKind>, locality: Option<Locality>) -> Vec<Group> {
    use Amplitudes::*;
    use ChannelKind::*;
    use Locality::*;
    let all = [
        (AmplitudeDamping, Intraparticle, Complex),
        (AmplitudeDamping, Interparticle, Real),
        (AmplitudeDamping, Interparticle, Complex),
        (PhaseDamping, Intraparticle, Complex),
        (PhaseDamping, Intraparticle, Real),
        (PhaseDamping, Interparticle, Complex),
        (Depolarizing, Intraparticle, Complex),
        (Depolarizing, Intraparticle, Real),
        (Depolarizing, Interparticle, Complex),
    ];
    all.into_iter()
        .filter(|(k, l, _)| kind.is_none_or(|x| x == *k) && locality.is_none_or(|x| x == *l))
        .map(|(kind, locality, amplitudes)| Group { kind, locality, amplitudes })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub what: String,
    pub state: PureState4,
    pub p: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupReport {
    pub group: Group,
    pub max_deviation: Option<f64>,
    pub max_completeness: f64,
    pub max_trace: f64,
    pub min_eigenvalue: f64,
    /// AD-intra only: largest error of `1/2 +- sqrt(1/4 - P(1-P)(1-|a|^2)^2)`.
    pub rank2_deviation: Option<f64>,
    pub violations: Vec<Violation>,
}

impl GroupReport {
    fn new(group: Group) -> Self {
        GroupReport {
            group,
            max_deviation: group.closed_form_tol().map(|_| 0.0),
            max_completeness: 0.0,
            max_trace: 0.0,
            min_eigenvalue: f64::INFINITY,
            rank2_deviation: (group.kind == ChannelKind::AmplitudeDamping && group.locality == Locality::Intraparticle)
                .then_some(0.0),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub groups: Vec<GroupReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(GroupReport::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "verify seed={} trials={}", self.seed, self.trials).unwrap();
        for g in &self.groups {
            let mut line = format!("{:<18}", g.group.label());
            match (g.max_deviation, g.group.closed_form_tol()) {
                (Some(d), Some(tol)) => write!(line, " max|analytic-numeric|={d:.3e} (tol {tol:.0e})").unwrap(),
                _ => write!(line, " structural only").unwrap(),
            }
            write!(
                line,
                " completeness={:.3e} trace={:.3e} min_eig={:.3e}",
                g.max_completeness, g.max_trace, g.min_eigenvalue
            )
            .unwrap();
            if let Some(r) = g.rank2_deviation {
                write!(line, " rank2={r:.3e}").unwrap();
            }
            line.push_str(if g.passed() { " ok" } else { " FAIL" });
            writeln!(out, "{line}").unwrap();
        }
        for g in &self.groups {
            for v in &g.violations {
                let amps = v.state.amplitudes();
                writeln!(
                    out,
                    "violation [{}] {}: value={:?} P={:?} state=[{}]",
                    g.group.label(),
                    v.what,
                    v.value,
                    v.p,
                    amps.iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect::<Vec<_>>().join(", ")
                )
                .unwrap();
            }
        }
        let failed = self.groups.iter().filter(|g| !g.passed()).count();
        if failed == 0 {
            writeln!(out, "all {} groups within tolerance", self.groups.len()).unwrap();
        } else {
            writeln!(out, "{failed} of {} groups violated tolerances", self.groups.len()).unwrap();
        }
        out
    }
}

fn random_state(rng: &mut ChaCha20Rng, amps: Amplitudes) -> Result<PureState4> {
    let mut z = [C64::new(0.0, 0.0); 4];
    for x in &mut z {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = match amps {
            Amplitudes::Complex => rng.sample(StandardNormal),
            Amplitudes::Real => 0.0,
        };
        *x = C64::new(re, im);
    }
    PureState4::from_cartesian(z[0], z[1], z[2], z[3], true)
}

fn check_one(report: &mut GroupReport, s: &PureState4, p: f64) -> Result<()> {
    let group = report.group;
    let spec = ChannelSpec::new(group.kind, group.locality, p)?;
    let kraus = build_channel(&spec)?;
    let out = apply_channel(&s.density(), &kraus)?;
    let mut flag = |what: &str, value: f64| {
        report.violations.push(Violation { what: what.to_string(), state: *s, p, value });
    };

    let completeness = kraus.completeness_deviation();
    let trace = (out.matrix().trace() - C64::new(1.0, 0.0)).norm();
    let eig = out.eigenvalues();
    let min_eig = eig[3];
    if completeness > COMPLETENESS_LIMIT {
        flag("completeness", completeness);
    }
    if trace > TRACE_LIMIT {
        flag("trace", trace);
    }
    if min_eig < PSD_LIMIT {
        flag("min eigenvalue", min_eig);
    }

    let mut deviation = None;
    if let Some(tol) = group.closed_form_tol() {
        let numeric = concurrence_numeric(&out);
        if let Some(analytic) = closed_form_concurrence(s, &spec)? {
            let d = (analytic - numeric).abs();
            if d.is_nan() || d > tol {
                flag("|analytic - numeric|", d);
            }
            deviation = Some(d);
        }
    }

    let mut rank2 = None;
    if report.rank2_deviation.is_some() {
        let w = 1.0 - s.a().norm_sqr();
        let r = (0.25 - p * (1.0 - p) * w * w).max(0.0).sqrt();
        let d = [(eig[0] - (0.5 + r)).abs(), (eig[1] - (0.5 - r)).abs(), eig[2].abs(), eig[3].abs()]
            .into_iter()
            .fold(0.0, f64::max);
        if d.is_nan() || d > RANK2_TOL {
            flag("rank-2 spectrum", d);
        }
        rank2 = Some(d);
    }

    report.max_completeness = report.max_completeness.max(completeness);
    report.max_trace = report.max_trace.max(trace);
    report.min_eigenvalue = report.min_eigenvalue.min(min_eig);
    if let (Some(m), Some(d)) = (report.max_deviation.as_mut(), deviation) {
        *m = m.max(d);
    }
    if let (Some(m), Some(d)) = (report.rank2_deviation.as_mut(), rank2) {
        *m = m.max(d);
    }
    Ok(())
}

/// Draws, per trial and per group in order, one state and one `P` from a
/// ChaCha20 stream keyed by `seed`.
pub fn run(seed: u64, trials: usize, kind: Option<ChannelKind>, locality: Option<Locality>) -> Result<VerifyReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut reports: Vec<GroupReport> = groups(kind, locality).into_iter().map(GroupReport::new).collect();
    for _ in 0..trials {
        for report in &mut reports {
            let s = random_state(&mut rng, report.group.amplitudes)?;
            let p: f64 = rng.random_range(0.0..=1.0);
            check_one(report, &s, p)?;
        }
    }
    Ok(VerifyReport { seed, trials, groups: reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_filters() {
        assert_eq!(groups(None, None).len(), 9);
        assert_eq!(groups(Some(ChannelKind::AmplitudeDamping), None).len(), 3);
        assert_eq!(groups(Some(ChannelKind::PhaseDamping), Some(Locality::Intraparticle)).len(), 2);
        assert_eq!(groups(None, Some(Locality::Interparticle)).len(), 4);
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let a = run(7, 50, None, None).unwrap();
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a, run(7, 50, None, None).unwrap());
        assert_ne!(a.render(), run(8, 50, None, None).unwrap().render());
    }
}
