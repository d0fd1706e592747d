//! Sudden death, revival extrema, the `C~` contrast, the non-Markovian
//! damping parameter, parameter sweeps and trajectory classification.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{ChannelKind, ChannelSpec, Locality};
use crate::concurrence::{closed_form_concurrence, concurrence_ad_inter, concurrence_after};
use crate::error::{Error, Result};
use crate::state::PureState4;

/// Below this a concurrence counts as zero.
pub const ZERO_TOL: f64 = 1e-9;
/// Above this a concurrence counts as present (hysteresis against `ZERO_TOL`).
pub const RISE_TOL: f64 = 1e-7;
/// Slack allowed per grid step when testing for monotone decay.
pub const MONOTONE_SLACK: f64 = 1e-9;
/// Smallest grid `classify_trajectory` accepts.
pub const MIN_CLASSIFY_POINTS: usize = 64;
/// `|delta_theta|` below this is treated as zero.
pub const PHASE_ZERO_TOL: f64 = 1e-9;
/// Golden-section termination width in `P`.
pub const REFINE_TOL: f64 = 1e-10;
/// Grid used by `analyze` to classify and to search extrema numerically.
pub const ANALYSIS_STEPS: usize = 1001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrajectoryClass {
    MonotonicDecay,
    ESDThenRevival,
    CreationThenDecay,
    ESDNoRevival,
    IdenticallyZero,
}

impl TrajectoryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrajectoryClass::MonotonicDecay => "MonotonicDecay",
            TrajectoryClass::ESDThenRevival => "ESDThenRevival",
            TrajectoryClass::CreationThenDecay => "CreationThenDecay",
            TrajectoryClass::ESDNoRevival => "ESDNoRevival",
            TrajectoryClass::IdenticallyZero => "IdenticallyZero",
        }
    }
}

impl fmt::Display for TrajectoryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalReport {
    pub esd_p: Option<f64>,
    pub p_minus: Option<f64>,
    pub c_minus: Option<f64>,
    pub p_plus: Option<f64>,
    pub c_plus: Option<f64>,
    pub c_tilde: Option<f64>,
    pub classification: TrajectoryClass,
    pub delta_theta_defined: bool,
    /// Radians, `None` when undefined.
    pub delta_theta: Option<f64>,
}

/// A local extremum `(P, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub p: f64,
    pub c: f64,
}

/// Minimum followed by the revival maximum; either may fall outside `[0, 1]`
/// and is then absent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RevivalExtrema {
    pub minus: Option<Extremum>,
    pub plus: Option<Extremum>,
}

impl RevivalExtrema {
    pub fn c_tilde(&self) -> Option<f64> {
        let (lo, hi) = (self.minus?.c, self.plus?.c);
        let sum = hi + lo;
        (sum > 0.0).then(|| ((hi - lo) / sum).clamp(0.0, 1.0))
    }
}

/// AD-intra sudden death `P = 1 - (|a||d| / |b||c|)^2`, defined only for
/// `delta_theta = 0` and `0 < |a||d| <= |b||c|`.
pub fn esd_ad_intra(s: &PureState4) -> Option<f64> {
    let [ma, mb, mc, md] = s.magnitudes();
    let (ad, bc) = (ma * md, mb * mc);
    if ad <= 0.0 || bc <= 0.0 || ad > bc || s.delta_theta().abs() > PHASE_ZERO_TOL {
        return None;
    }
    Some((1.0 - (ad / bc).powi(2)).max(0.0))
}

/// `3 cos(dt) + sqrt(9 cos^2(dt) - 8)` and `3 cos(dt) - sqrt(...)`, or `None`
/// outside `cos(dt) >= 2 sqrt(2) / 3`.
fn extremum_roots(delta_theta: f64) -> Option<(f64, f64)> {
    let cos = delta_theta.cos();
    let disc = 9.0 * cos * cos - 8.0;
    if cos <= 0.0 || disc < -1e-12 {
        return None;
    }
    let root = disc.max(0.0).sqrt();
    Some((3.0 * cos + root, 3.0 * cos - root))
}

/// `k sqrt(1 - k^2/16)`
fn extremum_shape(k: f64) -> f64 {
    k * (1.0 - k * k / 16.0).max(0.0).sqrt()
}

/// Stationary points of the AD-intra concurrence:
/// `P-+ = 1 - (|a|^2|d|^2 / 16|b|^2|c|^2) [3 cos(dt) +- sqrt(9 cos^2(dt) - 8)]^2`
/// and `C = (|a|^2|d|^2 / (2 sqrt(3) |b||c|)) k sqrt(1 - k^2/16)`.
pub fn revival_extrema_ad_intra(s: &PureState4) -> Option<RevivalExtrema> {
    let [ma, mb, mc, md] = s.magnitudes();
    let (ad, bc) = (ma * md, mb * mc);
    if ad <= 0.0 || bc <= 0.0 {
        return None;
    }
    let (k_minus, k_plus) = extremum_roots(s.delta_theta())?;
    let ratio = (ad / bc).powi(2) / 16.0;
    let scale = ad * ad / (2.0 * 3f64.sqrt() * bc);
    let point = |k: f64| {
        let p = 1.0 - ratio * k * k;
        (-1e-12..=1.0 + 1e-12).contains(&p).then(|| Extremum { p: p.clamp(0.0, 1.0), c: scale * extremum_shape(k) })
    };
    Some(RevivalExtrema { minus: point(k_minus), plus: point(k_plus) })
}

/// `(C+ - C-) / (C+ + C-)` for `s`, when both extrema exist.
pub fn c_tilde(s: &PureState4) -> Option<f64> {
    revival_extrema_ad_intra(s)?.c_tilde()
}

/// The contrast as a function of the phase difference alone (radians).
pub fn c_tilde_for_delta_theta(delta_theta: f64) -> Option<f64> {
    let (k_minus, k_plus) = extremum_roots(delta_theta)?;
    let (lo, hi) = (extremum_shape(k_minus), extremum_shape(k_plus));
    Some(if hi + lo > 0.0 { ((hi - lo) / (hi + lo)).clamp(0.0, 1.0) } else { 0.0 })
}

/// PD-intra sudden death for real amplitudes. With products of equal sign
/// this is `(ad - bc)/ad` when `|ad| > |bc|` and `(bc - ad)/bc` when
/// `|bc| > |ad|`; opposite signs go through [`esd_pd_intra_general`].
/// `None` when either product vanishes (asymptotic decay) or `ad = bc`.
pub fn esd_pd_intra(s: &PureState4) -> Result<Option<f64>> {
    let [a, b, c, d] = s.real_amplitudes().ok_or(Error::ComplexStateUnsupported)?;
    let (ad, bc) = (a * d, b * c);
    if ad == 0.0 || bc == 0.0 || ad == bc {
        return Ok(None);
    }
    if ad * bc < 0.0 {
        return Ok(esd_pd_intra_general(s));
    }
    Ok(Some(if ad.abs() > bc.abs() { (ad - bc) / ad } else { (bc - ad) / bc }))
}

/// PD-intra sudden death for any phases. The concurrence vanishes where
/// `sqrt(l1) - sqrt(l2) = sqrt(l3) + sqrt(l4)`, which reduces to
/// `m (1 - 2 cos(phi)) P^2 - (s^2 - 4 m cos(phi)) P + |ad - bc|^2 = 0` with
/// `m = |ad||bc|`, `s = |ad| + |bc|` and `phi` the phase of `ad (bc)*`. The
/// left side is positive at 0 and equals `-m` at 1, so there is exactly one
/// root in `(0, 1)` whenever `m > 0`.
pub fn esd_pd_intra_general(s: &PureState4) -> Option<f64> {
    let (ad, bc) = (s.a() * s.d(), s.b() * s.c());
    let m = ad.norm() * bc.norm();
    let u = (ad - bc).norm_sqr();
    if m == 0.0 || u == 0.0 {
        return None;
    }
    let cos = ((ad * bc.conj()).re / m).clamp(-1.0, 1.0);
    let sum = ad.norm() + bc.norm();
    let qa = m * (1.0 - 2.0 * cos);
    let qb = sum * sum - 4.0 * m * cos;
    // Roots of qa P^2 - qb P + u with qb >= 0, in cancellation-free form.
    let q = 0.5 * (qb + (qb * qb - 4.0 * qa * u).max(0.0).sqrt());
    let small = u / q;
    let candidate = if (0.0..=1.0).contains(&small) { small } else { q / qa };
    (candidate > 0.0 && candidate < 1.0).then_some(candidate)
}

/// DP-intra sudden death `4|ad - bc| / (1 + 4|ad - bc|)`; `None` for
/// product states.
pub fn esd_dp_intra(s: &PureState4) -> Option<f64> {
    let m = s.det_term().norm();
    (m > 0.0).then(|| 4.0 * m / (1.0 + 4.0 * m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonMarkovParams {
    pub big_gamma: f64,
    pub small_gamma: f64,
    pub t: f64,
}

impl NonMarkovParams {
    pub fn new(big_gamma: f64, small_gamma: f64, t: f64) -> Result<Self> {
        let params = NonMarkovParams { big_gamma, small_gamma, t };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if !(self.big_gamma.is_finite() && self.big_gamma > 0.0) {
            return Err(Error::InvalidParams(format!("Gamma must be positive, got {}", self.big_gamma)));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidParams(format!("t must be non-negative, got {}", self.t)));
        }
        if self.d_squared().is_nan() || self.d_squared() <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need 2 gamma Gamma > Gamma^2 (gamma = {}, Gamma = {})",
                self.small_gamma, self.big_gamma
            )));
        }
        Ok(())
    }

    fn d_squared(&self) -> f64 {
        2.0 * self.small_gamma * self.big_gamma - self.big_gamma * self.big_gamma
    }

    /// `d = sqrt(2 gamma Gamma - Gamma^2)`
    pub fn d(&self) -> f64 {
        self.d_squared().sqrt()
    }
}

/// `P(t) = e^{-Gamma t} (cos(dt/2) + (Gamma/d) sin(dt/2))^2`. Note `P(0) = 1`.
pub fn nonmarkov_p(params: &NonMarkovParams) -> Result<f64> {
    params.validate()?;
    let (g, t, d) = (params.big_gamma, params.t, params.d());
    let half = 0.5 * d * t;
    let p = (-g * t).exp() * (half.cos() + g / d * half.sin()).powi(2);
    Ok(p.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonMarkovPoint {
    pub t: f64,
    pub p: f64,
    pub c: f64,
}

/// Interparticle AD concurrence of `s` along `P(t)`, evaluated numerically.
pub fn nonmarkov_trace(s: &PureState4, big_gamma: f64, small_gamma: f64, times: &[f64]) -> Result<Vec<NonMarkovPoint>> {
    times
        .par_iter()
        .map(|&t| {
            let p = nonmarkov_p(&NonMarkovParams::new(big_gamma, small_gamma, t)?)?;
            let spec = ChannelSpec::new(ChannelKind::AmplitudeDamping, Locality::Interparticle, p)?;
            Ok(NonMarkovPoint { t, p, c: concurrence_after(s, &spec)? })
        })
        .collect()
}

/// `steps` evenly spaced points from `p_min` to `p_max`, both included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
}

impl PGrid {
    pub fn new(p_min: f64, p_max: f64, steps: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min >= p_max {
            return Err(Error::InvalidGrid(format!("need 0 <= p_min < p_max <= 1, got [{p_min}, {p_max}]")));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 steps, got {steps}")));
        }
        Ok(PGrid { p_min, p_max, steps })
    }

    pub fn unit(steps: usize) -> Result<Self> {
        PGrid::new(0.0, 1.0, steps)
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSeries {
    pub state: PureState4,
    pub kind: ChannelKind,
    pub locality: Locality,
    pub p_values: Vec<f64>,
    pub c_numeric: Vec<f64>,
    pub c_analytic: Vec<Option<f64>>,
}

impl SweepSeries {
    pub fn len(&self) -> usize {
        self.p_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_values.is_empty()
    }

    /// Numeric concurrence at an arbitrary `P`, off the grid.
    pub fn evaluate(&self, p: f64) -> Result<f64> {
        concurrence_after(&self.state, &ChannelSpec::new(self.kind, self.locality, p)?)
    }

    /// Largest `|analytic - numeric|` over points with a closed form.
    pub fn max_deviation(&self) -> Option<f64> {
        self.c_numeric.iter().zip(&self.c_analytic).filter_map(|(n, a)| a.map(|a| (a - n).abs())).reduce(f64::max)
    }
}

pub fn sweep(s: &PureState4, kind: ChannelKind, loc: Locality, grid: &PGrid) -> Result<SweepSeries> {
    sweep_points(s, kind, loc, grid.points())
}

/// Sweep over explicit points; they must lie in `[0, 1]`, increase strictly
/// and number at least two.
pub fn sweep_points(s: &PureState4, kind: ChannelKind, loc: Locality, p_values: Vec<f64>) -> Result<SweepSeries> {
    if p_values.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", p_values.len())));
    }
    if p_values.windows(2).any(|w| w[0] >= w[1]) || p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidGrid("points must increase strictly within [0, 1]".into()));
    }
    let rows: Vec<(f64, Option<f64>)> = p_values
        .par_iter()
        .map(|&p| {
            let spec = ChannelSpec::new(kind, loc, p)?;
            Ok((concurrence_after(s, &spec)?, closed_form_concurrence(s, &spec)?))
        })
        .collect::<Result<_>>()?;
    let (c_numeric, c_analytic) = rows.into_iter().unzip();
    Ok(SweepSeries { state: *s, kind, locality: loc, p_values, c_numeric, c_analytic })
}

/// Minimizes `f` on `[lo, hi]` by golden-section search.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes `f` on `[lo, hi]` by golden-section search.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// Bisects for the first `P` in `[lo, hi]` where the numeric concurrence
/// drops below `threshold`, given it is above at `lo` and below at `hi`.
pub fn bisect_zero<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, threshold: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Start of the first zero run with `P < 1`, located on the grid or by
/// refining an interior local minimum.
fn first_zero(series: &SweepSeries) -> Result<Option<(usize, f64)>> {
    let (p, c) = (&series.p_values, &series.c_numeric);
    let n = c.len();
    for i in 1..n {
        if c[i] < ZERO_TOL {
            return Ok((p[i] < 1.0 - 1e-12).then_some((i, p[i])));
        }
        if i + 1 < n && c[i] <= c[i - 1] && c[i] <= c[i + 1] {
            let mut err = None;
            let (pm, cm) = golden_min(
                |x| {
                    series.evaluate(x).unwrap_or_else(|e| {
                        err = Some(e);
                        f64::INFINITY
                    })
                },
                p[i - 1],
                p[i + 1],
                REFINE_TOL,
            );
            if let Some(e) = err {
                return Err(e);
            }
            if cm < ZERO_TOL {
                return Ok(Some((i, pm)));
            }
        }
    }
    Ok(None)
}

pub fn classify_trajectory(series: &SweepSeries) -> Result<TrajectoryClass> {
    let n = series.len();
    if n < MIN_CLASSIFY_POINTS {
        return Err(Error::GridTooCoarse { points: n, required: MIN_CLASSIFY_POINTS });
    }
    let c = &series.c_numeric;
    let max = c.iter().copied().fold(0.0, f64::max);
    if max < ZERO_TOL {
        return Ok(TrajectoryClass::IdenticallyZero);
    }
    if c[0] < ZERO_TOL {
        return Ok(if max > RISE_TOL { TrajectoryClass::CreationThenDecay } else { TrajectoryClass::IdenticallyZero });
    }
    if let Some((i, p_zero)) = first_zero(series)? {
        let revives = series.p_values[i..].iter().zip(&c[i..]).any(|(&p, &v)| p > p_zero && v > RISE_TOL);
        return Ok(if revives { TrajectoryClass::ESDThenRevival } else { TrajectoryClass::ESDNoRevival });
    }
    if c.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK) {
        return Ok(TrajectoryClass::MonotonicDecay);
    }
    match c.iter().find(|&&v| (v - c[0]).abs() > RISE_TOL) {
        Some(&v) if v > c[0] => Ok(TrajectoryClass::CreationThenDecay),
        _ => Ok(TrajectoryClass::ESDThenRevival),
    }
}

/// The same input under the intraparticle and interparticle version of one
/// channel, on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct IntraInterPair {
    pub intra: SweepSeries,
    pub inter: SweepSeries,
}

impl IntraInterPair {
    /// `max(C_inter - C_intra)` over the grid; non-positive when the
    /// intraparticle concurrence dominates everywhere.
    pub fn max_inter_excess(&self) -> f64 {
        self.intra.c_numeric.iter().zip(&self.inter.c_numeric).map(|(a, b)| b - a).fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn compare_intra_inter(s: &PureState4, kind: ChannelKind, grid: &PGrid) -> Result<IntraInterPair> {
    Ok(IntraInterPair {
        intra: sweep(s, kind, Locality::Intraparticle, grid)?,
        inter: sweep(s, kind, Locality::Interparticle, grid)?,
    })
}

/// Numeric sudden-death point: the first grid zero (with `P < 1`) refined by
/// bisection, or the refined minimum for a single-point zero.
pub fn esd_numeric(series: &SweepSeries) -> Result<Option<f64>> {
    let Some((i, p_zero)) = first_zero(series)? else {
        return Ok(None);
    };
    if series.c_numeric[i] >= ZERO_TOL {
        return Ok(Some(p_zero));
    }
    let mut err = None;
    let p = bisect_zero(
        |x| {
            series.evaluate(x).unwrap_or_else(|e| {
                err = Some(e);
                0.0
            })
        },
        series.p_values[i - 1],
        series.p_values[i],
        1e-12,
        1e-13,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(Some(p)),
    }
}

/// First interior local minimum followed by a higher local maximum, both
/// refined by golden-section search on the numeric concurrence.
pub fn revival_extrema_numeric(series: &SweepSeries) -> Result<Option<RevivalExtrema>> {
    let (p, c) = (&series.p_values, &series.c_numeric);
    let n = c.len();
    let Some(i) = (1..n - 1).find(|&i| c[i] < c[i - 1] && c[i] <= c[i + 1]) else {
        return Ok(None);
    };
    let Some(j) = (i + 1..n - 1).find(|&j| c[j] > c[j - 1] && c[j] >= c[j + 1]) else {
        return Ok(None);
    };
    let mut err = None;
    let mut eval = |x: f64| {
        series.evaluate(x).unwrap_or_else(|e| {
            err = Some(e);
            0.0
        })
    };
    let (pm, cm) = golden_min(&mut eval, p[i - 1], p[i + 1], REFINE_TOL);
    let (pp, cp) = golden_max(&mut eval, p[j - 1], p[j + 1], REFINE_TOL);
    if let Some(e) = err {
        return Err(e);
    }
    Ok((cp > cm + RISE_TOL)
        .then_some(RevivalExtrema { minus: Some(Extremum { p: pm, c: cm }), plus: Some(Extremum { p: pp, c: cp }) }))
}

/// Sudden death, extrema, contrast and classification for one state and
/// channel, on an `ANALYSIS_STEPS` grid over `[0, 1]`.
pub fn analyze(s: &PureState4, kind: ChannelKind, loc: Locality) -> Result<RevivalReport> {
    let series = sweep(s, kind, loc, &PGrid::unit(ANALYSIS_STEPS)?)?;
    let classification = classify_trajectory(&series)?;
    let esd_p = match (kind, loc) {
        (ChannelKind::AmplitudeDamping, Locality::Intraparticle) => esd_ad_intra(s),
        (ChannelKind::Depolarizing, Locality::Intraparticle) => esd_dp_intra(s),
        (ChannelKind::PhaseDamping, Locality::Intraparticle) => esd_pd_intra_general(s),
        _ => esd_numeric(&series)?,
    };
    let extrema = match (kind, loc) {
        (ChannelKind::AmplitudeDamping, Locality::Intraparticle) => revival_extrema_ad_intra(s),
        _ => revival_extrema_numeric(&series)?,
    };
    let minus = extrema.and_then(|e| e.minus);
    let plus = extrema.and_then(|e| e.plus);
    let defined = s.delta_theta_defined();
    Ok(RevivalReport {
        esd_p,
        p_minus: minus.map(|e| e.p),
        c_minus: minus.map(|e| e.c),
        p_plus: plus.map(|e| e.p),
        c_plus: plus.map(|e| e.c),
        c_tilde: extrema.and_then(|e| e.c_tilde()),
        classification,
        delta_theta_defined: defined,
        delta_theta: defined.then(|| s.delta_theta()),
    })
}

/// Closed-form AD-inter concurrence along a grid; `None` for complex states.
pub fn ad_inter_closed_form_series(s: &PureState4, grid: &PGrid) -> Option<Vec<f64>> {
    grid.points().into_iter().map(|p| concurrence_ad_inter(s, p).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PolarParams;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn blue() -> PureState4 {
        PureState4::from_real(0.3, 0.71f64.sqrt(), 0.2, 0.4).unwrap()
    }

    fn green() -> PureState4 {
        PureState4::from_real(0.4, 0.8, 0.2, 0.4).unwrap()
    }

    fn yellow() -> PureState4 {
        PureState4::from_real(0.44, 0.6064f64.sqrt(), 0.2, 0.4).unwrap()
    }

    fn bell() -> PureState4 {
        PureState4::from_real(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2).unwrap()
    }

    fn family(d: f64) -> PureState4 {
        let b = (1.0 - 0.125 - d * d).sqrt();
        PureState4::from_real(0.25, b, 0.25, d).unwrap()
    }

    #[test]
    fn esd_ad_intra_cases() {
        let p = esd_ad_intra(&blue()).unwrap();
        assert!((p - (1.0 - 0.0144 / 0.0284)).abs() < 1e-12);
        assert!((p - 0.492958).abs() < 1e-6);
        assert_eq!(esd_ad_intra(&yellow()), None);
        let red =
            PureState4::from_polar(&PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], [0.0, 0.0, 0.0, 5.7]))
                .unwrap();
        assert_eq!(esd_ad_intra(&red), None);
    }

    #[test]
    fn extrema_green_state() {
        let e = revival_extrema_ad_intra(&green()).unwrap();
        let minus = e.minus.unwrap();
        let plus = e.plus.unwrap();
        assert!(minus.p.abs() < 1e-12 && minus.c == 0.0);
        assert!((plus.p - 0.75).abs() < 1e-12);
        assert!((plus.c - 0.08).abs() < 1e-12);
        assert!((e.c_tilde().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extrema_outside_admissible_phase() {
        let s =
            PureState4::from_polar(&PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], [0.0, 25.0, 0.0, 0.0]))
                .unwrap();
        assert!(revival_extrema_ad_intra(&s).is_none());
        assert!(c_tilde(&s).is_none());
    }

    #[test]
    fn c_tilde_curve_endpoints() {
        assert!((c_tilde_for_delta_theta(0.0).unwrap() - 1.0).abs() < 1e-12);
        let edge = (2.0 * 2f64.sqrt() / 3.0).acos();
        assert!(c_tilde_for_delta_theta(edge).unwrap().abs() < 1e-6);
        assert!(c_tilde_for_delta_theta(25f64.to_radians()).is_none());
    }

    #[test]
    fn c_tilde_depends_only_on_phase() {
        let dt = [0.0, 0.0, 0.0, 10.0];
        let s1 = PureState4::from_polar(&PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], dt)).unwrap();
        let s2 = PureState4::from_polar(&PolarParams::from_degrees([0.2, 0.6, 0.5, 0.35f64.sqrt()], dt)).unwrap();
        let (x, y) = (c_tilde(&s1).unwrap(), c_tilde(&s2).unwrap());
        assert!((x - y).abs() < 1e-10);
        assert!((x - c_tilde_for_delta_theta(-10f64.to_radians()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn esd_pd_cases() {
        let s = PureState4::from_real(0.6, 0.4, 0.5, 0.23f64.sqrt()).unwrap();
        let p = esd_pd_intra(&s).unwrap().unwrap();
        let ad = 0.6 * 0.23f64.sqrt();
        assert!((p - (ad - 0.2) / ad).abs() < 1e-15);
        assert!((p - 0.30495).abs() < 1e-5);
        let b0 = PureState4::from_real(0.6, 0.0, 0.64f64.sqrt(), 0.0).unwrap();
        assert_eq!(esd_pd_intra(&b0).unwrap(), None);
        assert_eq!(esd_pd_intra(&bell()).unwrap(), None);
        let cplx = s.with_global_phase(0.4);
        assert_eq!(esd_pd_intra(&cplx), Err(Error::ComplexStateUnsupported));
    }

    #[test]
    fn esd_dp_cases() {
        assert!((esd_dp_intra(&bell()).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let prod = PureState4::from_real(0.48, 0.36, 0.64, 0.48).unwrap();
        assert!(esd_dp_intra(&prod).is_none_or(|p| p < 1e-14));
    }

    #[test]
    fn nonmarkov_cases() {
        let at = |t| nonmarkov_p(&NonMarkovParams { big_gamma: 1.0, small_gamma: 1.0, t }).unwrap();
        assert_eq!(at(0.0), 1.0);
        assert!(at(60.0) < 1e-20);
        for t in [0.3f64, 1.0, 2.5, 4.0, 7.0] {
            let expected = (-t).exp() * ((t / 2.0).cos() + (t / 2.0).sin()).powi(2);
            assert!((at(t) - expected).abs() < 1e-15);
        }
        assert!(NonMarkovParams::new(1.0, 0.5, 1.0).is_err());
        assert!(nonmarkov_p(&NonMarkovParams { big_gamma: 2.0, small_gamma: 0.9, t: 1.0 }).is_err());
    }

    #[test]
    fn grid_points() {
        let g = PGrid::new(0.0, 1.0, 1001).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 1001);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[1000], 1.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(PGrid::new(0.5, 0.5, 10).is_err());
        assert!(PGrid::new(0.0, 1.0, 1).is_err());
        assert!(PGrid::new(-0.1, 1.0, 10).is_err());
    }

    #[test]
    fn classification_examples() {
        let grid = PGrid::unit(1001).unwrap();
        let class = |s: &PureState4, k, l| classify_trajectory(&sweep(s, k, l, &grid).unwrap()).unwrap();
        use ChannelKind::*;
        use Locality::*;
        assert_eq!(class(&blue(), AmplitudeDamping, Intraparticle), TrajectoryClass::ESDThenRevival);
        assert_eq!(class(&green(), AmplitudeDamping, Intraparticle), TrajectoryClass::CreationThenDecay);
        assert_eq!(class(&yellow(), AmplitudeDamping, Intraparticle), TrajectoryClass::CreationThenDecay);
        assert_eq!(class(&bell(), Depolarizing, Interparticle), TrajectoryClass::ESDNoRevival);
        assert_eq!(class(&bell(), Depolarizing, Intraparticle), TrajectoryClass::ESDNoRevival);
        assert_eq!(class(&family(0.0), AmplitudeDamping, Interparticle), TrajectoryClass::MonotonicDecay);
        assert_eq!(class(&family(0.4), AmplitudeDamping, Interparticle), TrajectoryClass::ESDNoRevival);
        let prod = PureState4::from_real(0.48, 0.36, 0.64, 0.48).unwrap();
        assert_eq!(class(&prod, PhaseDamping, Interparticle), TrajectoryClass::IdenticallyZero);
    }

    #[test]
    fn classification_needs_enough_points() {
        let s =
            sweep(&bell(), ChannelKind::AmplitudeDamping, Locality::Intraparticle, &PGrid::unit(10).unwrap()).unwrap();
        assert_eq!(classify_trajectory(&s), Err(Error::GridTooCoarse { points: 10, required: 64 }));
    }

    #[test]
    fn sweep_is_ordered_and_filled() {
        let s =
            sweep(&blue(), ChannelKind::AmplitudeDamping, Locality::Intraparticle, &PGrid::unit(101).unwrap()).unwrap();
        assert_eq!(s.len(), 101);
        assert!(s.c_analytic.iter().all(Option::is_some));
        assert!(s.max_deviation().unwrap() < 1e-10);
        assert!((s.c_numeric[0] - 2.0 * (0.71f64.sqrt() * 0.2 - 0.12)).abs() < 1e-12);
        assert!(s.c_numeric[100] < 1e-12);
        let pd = sweep(&blue(), ChannelKind::PhaseDamping, Locality::Interparticle, &PGrid::unit(5).unwrap()).unwrap();
        assert!(pd.c_analytic.iter().all(Option::is_none));
    }

    #[test]
    fn sweep_points_validation() {
        let k = ChannelKind::Depolarizing;
        let l = Locality::Intraparticle;
        assert!(sweep_points(&bell(), k, l, vec![0.0]).is_err());
        assert!(sweep_points(&bell(), k, l, vec![0.2, 0.1]).is_err());
        assert!(sweep_points(&bell(), k, l, vec![0.0, 1.5]).is_err());
    }

    #[test]
    fn intra_dominates_inter_ad() {
        let pair =
            compare_intra_inter(&family(0.4), ChannelKind::AmplitudeDamping, &PGrid::unit(1001).unwrap()).unwrap();
        assert!(pair.max_inter_excess() <= 1e-9);
        assert_eq!(pair.intra.p_values, pair.inter.p_values);
    }

    #[test]
    fn analyze_reports() {
        let g = analyze(&green(), ChannelKind::AmplitudeDamping, Locality::Intraparticle).unwrap();
        assert_eq!(g.classification, TrajectoryClass::CreationThenDecay);
        assert!((g.p_plus.unwrap() - 0.75).abs() < 1e-12);
        assert!((g.c_plus.unwrap() - 0.08).abs() < 1e-12);

        let b = analyze(&bell(), ChannelKind::Depolarizing, Locality::Intraparticle).unwrap();
        assert!((b.esd_p.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(b.p_minus.is_none());

        let red =
            PureState4::from_polar(&PolarParams::from_degrees([0.3, 0.71f64.sqrt(), 0.2, 0.4], [0.0, 0.0, 0.0, 5.7]))
                .unwrap();
        let r = analyze(&red, ChannelKind::AmplitudeDamping, Locality::Intraparticle).unwrap();
        assert!(r.c_minus.unwrap() > 1e-4);
        assert!(r.c_minus.unwrap() < r.c_plus.unwrap());
        assert_ne!(r.classification, TrajectoryClass::MonotonicDecay);
        assert!(r.esd_p.is_none());
    }

    #[test]
    fn esd_numeric_matches_closed_forms() {
        let grid = PGrid::unit(1001).unwrap();
        let s = sweep(&bell(), ChannelKind::Depolarizing, Locality::Intraparticle, &grid).unwrap();
        assert!((esd_numeric(&s).unwrap().unwrap() - 2.0 / 3.0).abs() < 1e-9);
        let s = sweep(&blue(), ChannelKind::AmplitudeDamping, Locality::Intraparticle, &grid).unwrap();
        assert!((esd_numeric(&s).unwrap().unwrap() - esd_ad_intra(&blue()).unwrap()).abs() < 1e-6);
    }
}
