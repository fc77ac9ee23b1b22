//! Parameter sweeps, curve landmarks, and the photon-number inversion that
//! maps a target total ⟨n̂⟩ onto the required field amplitude.
//!
//! A sweep walks one or two axes over an input template and evaluates the
//! sensitivity at every node, through either the closed forms or the
//! brute-force oracle. Rows never abort the whole run: a node whose point
//! evaluation fails (cutoff too small, target below the reachable floor)
//! is carried as a failed row, and a vanishing signal slope is carried as a
//! divergent-but-valid row.
//!
//! Landmark extraction refines what a plotted curve would show: crossings of
//! a target level by bisection and the global minimum by golden-section
//! search, both seeded from a 400-point prescan so off-grid structure is not
//! missed.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{self, InputConfig, ModeA, MomentSet, VariancePath};
use crate::fock;
use crate::specfun::PolynomialOrder;
use crate::{Error, Result};

/// Number of evaluation points the landmark prescan uses, independent of the
/// axis's own point count.
pub const PRESCAN_POINTS: usize = 400;

/// Location tolerance for refined crossings and minima.
pub const LANDMARK_TOL: f64 = 1e-6;

/// Quantity a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisVar {
    /// Interferometer phase φ.
    Phi,
    /// |α_a|² of a coherent mode A (real amplitude).
    AlphaASquared,
    /// |α_b|² of the photon-added mode (real amplitude).
    AlphaBSquared,
    /// Total input ⟨n̂⟩; solved for |α_b|² with mode A held fixed.
    NTotal,
}

impl AxisVar {
    pub fn name(self) -> &'static str {
        match self {
            AxisVar::Phi => "phi",
            AxisVar::AlphaASquared => "alpha_a_sq",
            AxisVar::AlphaBSquared => "alpha_b_sq",
            AxisVar::NTotal => "n_total",
        }
    }
}

/// One linear sweep axis, endpoints inclusive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Axis {
    pub var: AxisVar,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(var: AxisVar, start: f64, stop: f64, points: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() || start >= stop {
            return Err(Error::domain(format!(
                "axis {}: need finite start < stop, got [{start}, {stop}]",
                var.name()
            )));
        }
        if points < 2 {
            return Err(Error::domain("axis needs at least 2 points"));
        }
        Ok(Axis {
            var,
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }

    fn value_at_fraction(&self, t: f64) -> f64 {
        self.start + t * (self.stop - self.start)
    }
}

/// Which evaluation road the sweep should take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathSelect {
    /// Closed forms where they exist, oracle otherwise.
    #[default]
    Auto,
    Analytic,
    Oracle,
}

/// Road actually taken (recorded per table and per CSV row).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    Analytic,
    Oracle,
}

impl EvalPath {
    pub fn name(self) -> &'static str {
        match self {
            EvalPath::Analytic => "analytic",
            EvalPath::Oracle => "oracle",
        }
    }
}

/// Full description of a sweep: the input template, the fixed phase, one or
/// two axes, the evaluation road, the variance route, and the Fock cutoff
/// for oracle rows.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: InputConfig,
    pub phi: f64,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub path: PathSelect,
    pub variance: VariancePath,
    pub n_max: usize,
}

impl SweepSpec {
    /// Resolves the effective evaluation road, rejecting impossible requests:
    /// a coherent mode A with two or more added photons has no closed form,
    /// so `PathSelect::Analytic` is a domain error there and `Auto` switches
    /// to the oracle.
    pub fn effective_path(&self) -> Result<EvalPath> {
        if let Some(a2) = &self.axis2 {
            if a2.var == self.axis1.var {
                return Err(Error::domain("sweep axes must vary different quantities"));
            }
        }
        let coherent_a = matches!(self.base.mode_a, ModeA::Coherent(_))
            || self.axis1.var == AxisVar::AlphaASquared
            || self.axis2.is_some_and(|a| a.var == AxisVar::AlphaASquared);
        let needs_oracle = coherent_a && self.base.additions.get() >= 2;
        match self.path {
            PathSelect::Auto => Ok(if needs_oracle {
                EvalPath::Oracle
            } else {
                EvalPath::Analytic
            }),
            PathSelect::Analytic => {
                if needs_oracle {
                    Err(Error::NoClosedForm {
                        m: self.base.additions.get(),
                    })
                } else {
                    Ok(EvalPath::Analytic)
                }
            }
            PathSelect::Oracle => Ok(EvalPath::Oracle),
        }
    }

    /// Applies axis assignments to the template. Non-photon-number axes go
    /// first so an `NTotal` assignment sees the final mode-A energy.
    fn resolve(&self, v1: f64, v2: Option<f64>) -> Result<(InputConfig, f64)> {
        let mut config = self.base;
        let mut phi = self.phi;
        let mut assignments: Vec<(AxisVar, f64)> = vec![(self.axis1.var, v1)];
        if let (Some(axis), Some(v)) = (&self.axis2, v2) {
            assignments.push((axis.var, v));
        }
        assignments.sort_by_key(|&(var, _)| matches!(var, AxisVar::NTotal));
        for (var, v) in assignments {
            match var {
                AxisVar::Phi => phi = v,
                AxisVar::AlphaASquared => {
                    if v < 0.0 {
                        return Err(Error::domain(format!("|α_a|² = {v} must be ≥ 0")));
                    }
                    config.mode_a = ModeA::Coherent(Complex64::new(v.sqrt(), 0.0));
                }
                AxisVar::AlphaBSquared => {
                    if v < 0.0 {
                        return Err(Error::domain(format!("|α_b|² = {v} must be ≥ 0")));
                    }
                    config.alpha_b = Complex64::new(v.sqrt(), 0.0);
                }
                AxisVar::NTotal => {
                    let n_a = config.alpha_a().norm_sqr();
                    let x = invert_nb(v - n_a, config.additions)?;
                    config.alpha_b = Complex64::new(x.sqrt(), 0.0);
                }
            }
        }
        Ok((config, phi))
    }

    fn evaluate(&self, path: EvalPath, v1: f64, v2: Option<f64>) -> SweepRow {
        let (config, phi) = match self.resolve(v1, v2) {
            Ok(r) => r,
            Err(e) => {
                return SweepRow {
                    v1,
                    v2,
                    moments: None,
                    path,
                    failure: Some(e.to_string()),
                }
            }
        };
        let outcome = match path {
            EvalPath::Analytic => analytic::moments_with(&config, phi, self.variance),
            EvalPath::Oracle => {
                fock::delta_phi_numeric(&config, phi, fock::DEFAULT_FD_STEP, self.n_max)
            }
        };
        match outcome {
            Ok(ms) => SweepRow {
                v1,
                v2,
                moments: Some(ms),
                path,
                failure: None,
            },
            Err(e) => SweepRow {
                v1,
                v2,
                moments: None,
                path,
                failure: Some(e.to_string()),
            },
        }
    }
}

/// One evaluated sweep node. `moments` is present unless the node failed;
/// a divergent operating point is a *successful* row whose `MomentSet`
/// reports infinite Δφ.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub v1: f64,
    pub v2: Option<f64>,
    pub moments: Option<MomentSet>,
    pub path: EvalPath,
    pub failure: Option<String>,
}

impl SweepRow {
    pub fn status_name(&self) -> &'static str {
        if self.failure.is_some() {
            "failed"
        } else if self.moments.is_some_and(|m| m.is_divergent()) {
            "divergent"
        } else {
            "ok"
        }
    }
}

/// Evaluated sweep: rows in axis order (axis 1 outer, axis 2 inner).
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub path: EvalPath,
    pub rows: Vec<SweepRow>,
}

/// Runs a sweep in parallel; row order is fixed by the axes, not by the
/// thread schedule.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let path = spec.effective_path()?;
    let v1s = spec.axis1.values();
    let nodes: Vec<(f64, Option<f64>)> = match &spec.axis2 {
        Some(axis2) => {
            let v2s = axis2.values();
            v1s.iter()
                .flat_map(|&v1| v2s.iter().map(move |&v2| (v1, Some(v2))))
                .collect()
        }
        None => v1s.into_iter().map(|v1| (v1, None)).collect(),
    };
    let rows: Vec<SweepRow> = nodes
        .par_iter()
        .map(|&(v1, v2)| spec.evaluate(path, v1, v2))
        .collect();
    Ok(SweepTable {
        axis1: spec.axis1,
        axis2: spec.axis2,
        path,
        rows,
    })
}

/// Solves `⟨n̂⟩ = target` for `x = |α|²` of a photon-added state with `m`
/// additions, by bisection on the strictly increasing mean.
///
/// The reachable floor is `⟨n̂⟩(x = 0) = m`; targets below it are a domain
/// error, the floor itself maps to `x = 0`. Converges to `1e-10` in the mean.
pub fn invert_nb(target: f64, m: PolynomialOrder) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::domain("invert_nb: target must be finite"));
    }
    let floor = m.get() as f64;
    if target < floor - 1e-12 {
        return Err(Error::domain(format!(
            "invert_nb: target ⟨n̂⟩ = {target} below the m = {} floor of {floor}",
            m.get()
        )));
    }
    if target <= floor {
        return Ok(0.0);
    }
    let mean_at = |x: f64| analytic::pacs_mean(Complex64::new(x.sqrt(), 0.0), m);
    let mut hi = (target - floor).max(1.0);
    for _ in 0..200 {
        if mean_at(hi) >= target {
            break;
        }
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let val = mean_at(mid);
        if (val - target).abs() <= 1e-10 {
            return Ok(mid);
        }
        if val < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A refined intersection of the sensitivity curve with a target level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Crossing {
    pub location: f64,
    pub value: f64,
}

/// Outcome of the minimum search.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimumFinding {
    Found {
        location: f64,
        value: f64,
    },
    /// All prescan values coincide to 1e-12: no meaningful minimum.
    Flat,
}

/// Landmarks of a single-axis sensitivity curve.
#[derive(Debug, Clone, Serialize)]
pub struct CrossingReport {
    pub target: f64,
    pub crossings: Vec<Crossing>,
    pub minimum: MinimumFinding,
}

/// Scans a single-axis sweep for crossings of `target` and for the global
/// minimum of `S`. Failed or divergent nodes are skipped; refinement uses
/// fresh off-grid evaluations of the same spec.
pub fn find_landmarks(spec: &SweepSpec, target: f64) -> Result<CrossingReport> {
    if spec.axis2.is_some() {
        return Err(Error::domain("landmark search needs a single-axis sweep"));
    }
    let path = spec.effective_path()?;
    let eval = |v: f64| -> Option<f64> {
        let row = spec.evaluate(path, v, None);
        row.moments
            .filter(|m| !m.is_divergent() && m.s_sql.is_finite())
            .map(|m| m.s_sql)
    };

    let samples: Vec<(f64, Option<f64>)> = (0..PRESCAN_POINTS)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / (PRESCAN_POINTS - 1) as f64;
            let v = spec.axis1.value_at_fraction(t);
            (v, eval(v))
        })
        .collect();

    let mut crossings = Vec::new();
    for pair in samples.windows(2) {
        let ((x0, s0), (x1, s1)) = (pair[0], pair[1]);
        let (Some(s0), Some(s1)) = (s0, s1) else {
            continue;
        };
        if (s0 - target) * (s1 - target) < 0.0 {
            let (mut lo, mut hi, mut f_lo) = (x0, x1, s0 - target);
            for _ in 0..80 {
                if hi - lo <= LANDMARK_TOL {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let Some(s_mid) = eval(mid) else { break };
                if f_lo * (s_mid - target) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = s_mid - target;
                }
            }
            let location = 0.5 * (lo + hi);
            let value = eval(location).unwrap_or(target);
            crossings.push(Crossing { location, value });
        }
    }

    let valid: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|&(x, s)| s.map(|v| (x, v)))
        .collect();
    if valid.is_empty() {
        return Err(Error::domain(
            "landmark search: no valid points on the axis",
        ));
    }
    let (min_pair, max_val) = valid.iter().fold(
        ((valid[0].0, valid[0].1), f64::NEG_INFINITY),
        |((bx, bv), mx), &(x, v)| {
            if v < bv {
                ((x, v), mx.max(v))
            } else {
                ((bx, bv), mx.max(v))
            }
        },
    );
    let minimum = if (max_val - min_pair.1).abs() <= 1e-12 * max_val.abs().max(1.0) {
        MinimumFinding::Flat
    } else {
        // Bracket with prescan neighbours when interior; keep the boundary
        // sample otherwise.
        let idx = valid
            .iter()
            .position(|&(x, _)| x == min_pair.0)
            .expect("minimum location comes from the samples");
        if idx == 0 || idx == valid.len() - 1 {
            MinimumFinding::Found {
                location: min_pair.0,
                value: min_pair.1,
            }
        } else {
            let (mut a, mut b) = (valid[idx - 1].0, valid[idx + 1].0);
            let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
            let f = |v: f64| eval(v).unwrap_or(f64::INFINITY);
            let mut c = b - inv_phi * (b - a);
            let mut d = a + inv_phi * (b - a);
            let (mut fc, mut fd) = (f(c), f(d));
            while b - a > LANDMARK_TOL {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = f(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = f(d);
                }
            }
            let location = 0.5 * (a + b);
            MinimumFinding::Found {
                location,
                value: f(location),
            }
        }
    };

    Ok(CrossingReport {
        target,
        crossings,
        minimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn m(v: u32) -> PolynomialOrder {
        PolynomialOrder::new(v).unwrap()
    }

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn single_axis_spec(base: InputConfig, phi: f64, axis: Axis) -> SweepSpec {
        SweepSpec {
            base,
            phi,
            axis1: axis,
            axis2: None,
            path: PathSelect::Auto,
            variance: VariancePath::default(),
            n_max: 60,
        }
    }

    #[test]
    fn invert_nb_quadratic_roots() {
        // m = 1: ⟨n̂⟩ = (1+3x+x²)/(1+x); targets 1.78 and 2.95 give the
        // quadratic roots below.
        let x1 = invert_nb(1.78, m(1)).unwrap();
        assert!((x1 - 0.463_359_1).abs() < 1e-6, "got {x1}");
        let x2 = invert_nb(2.95, m(1)).unwrap();
        assert!((x2 - 1.371_648_0).abs() < 1e-6, "got {x2}");
        for (x, t) in [(x1, 1.78), (x2, 2.95)] {
            let back = analytic::pacs_mean(re(x.sqrt()), m(1));
            assert!((back - t).abs() < 1e-9);
        }
    }

    #[test]
    fn invert_nb_floor_behaviour() {
        assert_eq!(invert_nb(3.0, m(3)).unwrap(), 0.0);
        assert!(invert_nb(2.9, m(3)).is_err());
        assert_eq!(invert_nb(0.0, m(0)).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// invert_nb is the right inverse of the mean map.
        #[test]
        fn invert_roundtrip(x in 0.0f64..8.0, mm in 0u32..=5) {
            let target = analytic::pacs_mean(re(x.sqrt()), m(mm));
            let got = invert_nb(target, m(mm)).unwrap();
            prop_assert!((got - x).abs() < 1e-8 * (1.0 + x), "x = {x}, got {got}");
        }
    }

    #[test]
    fn vacuum_family_never_beats_shot_noise() {
        // Phase sweep for each addition count: every valid row has S ≥ 1.
        for mm in 1..=5 {
            let base = InputConfig::vacuum_pacs(re(1.5), m(mm)).unwrap();
            let axis = Axis::new(AxisVar::Phi, 0.02, PI - 0.02, 120).unwrap();
            let table = run_sweep(&single_axis_spec(base, 0.0, axis)).unwrap();
            assert_eq!(table.path, EvalPath::Analytic);
            for row in &table.rows {
                let ms = row.moments.expect("vacuum family rows all evaluate");
                if !ms.is_divergent() {
                    assert!(ms.s_sql >= 1.0 - 1e-9, "m = {mm}, φ = {}", row.v1);
                }
            }
        }
    }

    #[test]
    fn total_photon_axis_resolves_through_inversion() {
        // n_total axis at fixed coherent |α_a|² = 2.25: the resolved row at
        // ⟨n̂⟩ = 4.5 must match a direct evaluation with the inverted x_b.
        let base = InputConfig::coherent_pacs(re(1.5), re(1.0), m(1)).unwrap();
        let axis = Axis::new(AxisVar::NTotal, 3.5, 5.5, 3).unwrap();
        let table = run_sweep(&single_axis_spec(base, 0.0, axis)).unwrap();
        let mid = &table.rows[1];
        assert_eq!(mid.v1, 4.5);
        let x = invert_nb(4.5 - 2.25, m(1)).unwrap();
        let direct = analytic::coherent_spacs_moments(0.0, re(1.5), re(x.sqrt())).unwrap();
        let got = mid.moments.unwrap();
        assert!((got.s_sql - direct.s_sql).abs() < 1e-12);
        assert!((got.n_total - 4.5).abs() < 1e-9);
    }

    #[test]
    fn rows_below_the_floor_fail_without_aborting() {
        let base = InputConfig::coherent_pacs(re(1.5), re(1.0), m(1)).unwrap();
        // n_total = 3.0 needs n_b = 0.75 < floor 1 → that row fails; the
        // rest of the sweep still evaluates.
        let axis = Axis::new(AxisVar::NTotal, 3.0, 5.0, 5).unwrap();
        let table = run_sweep(&single_axis_spec(base, 0.0, axis)).unwrap();
        assert_eq!(table.rows[0].status_name(), "failed");
        assert!(table.rows[0].failure.as_deref().unwrap().contains("floor"));
        assert!(table.rows[1..].iter().all(|r| r.failure.is_none()));
    }

    #[test]
    fn analytic_request_without_closed_form_is_rejected() {
        let base = InputConfig::coherent_pacs(re(1.5), re(1.0), m(2)).unwrap();
        let axis = Axis::new(AxisVar::Phi, -0.5, 0.5, 11).unwrap();
        let mut spec = single_axis_spec(base, 0.0, axis);
        spec.path = PathSelect::Analytic;
        assert!(matches!(
            run_sweep(&spec),
            Err(Error::NoClosedForm { m: 2 })
        ));
        spec.path = PathSelect::Auto;
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.path, EvalPath::Oracle);
    }

    #[test]
    fn two_axis_sweep_has_a_sub_shot_noise_region() {
        let base = InputConfig::coherent_pacs(re(1.0), re(1.0), m(1)).unwrap();
        let spec = SweepSpec {
            base,
            phi: 0.0,
            axis1: Axis::new(AxisVar::AlphaASquared, 0.5, 6.0, 12).unwrap(),
            axis2: Some(Axis::new(AxisVar::AlphaBSquared, 0.5, 6.0, 12).unwrap()),
            path: PathSelect::Auto,
            variance: VariancePath::default(),
            n_max: 60,
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 144);
        assert!(table.rows.iter().all(|r| r.failure.is_none()));
        let best = table
            .rows
            .iter()
            .filter_map(|r| r.moments)
            .filter(|ms| !ms.is_divergent())
            .map(|ms| ms.s_sql)
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1.0, "best S = {best}");
    }

    #[test]
    fn duplicate_axes_rejected() {
        let base = InputConfig::vacuum_pacs(re(1.0), m(1)).unwrap();
        let spec = SweepSpec {
            base,
            phi: 0.0,
            axis1: Axis::new(AxisVar::Phi, 0.1, 1.0, 4).unwrap(),
            axis2: Some(Axis::new(AxisVar::Phi, 0.1, 1.0, 4).unwrap()),
            path: PathSelect::Auto,
            variance: VariancePath::default(),
            n_max: 60,
        };
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn coherent_pair_minimum_sits_at_balance() {
        // m = 0, |α_a|² = 2.25, S(φ=0) over total ⟨n̂⟩: tangent minimum of 1
        // at ⟨n̂⟩ = 4.5, no transversal crossings of the S = 1 level.
        let base = InputConfig::coherent_pacs(re(1.5), re(1.0), m(0)).unwrap();
        let axis = Axis::new(AxisVar::NTotal, 2.5, 10.0, 200).unwrap();
        let report = find_landmarks(&single_axis_spec(base, 0.0, axis), 1.0).unwrap();
        assert!(report.crossings.is_empty());
        match report.minimum {
            MinimumFinding::Found { location, value } => {
                assert!((location - 4.5).abs() < 1e-3, "location {location}");
                assert!((value - 1.0).abs() < 1e-9, "value {value}");
            }
            MinimumFinding::Flat => panic!("expected a minimum"),
        }
    }

    #[test]
    fn single_addition_landmarks() {
        // m = 1, |α_a|² = 2.25, φ = 0: S dives below 1 just above ⟨n̂⟩ ≈ 4,
        // bottoms out near (5.2, 0.898), and recrosses near 8.1.
        let base = InputConfig::coherent_pacs(re(1.5), re(1.0), m(1)).unwrap();
        let axis = Axis::new(AxisVar::NTotal, 3.3, 10.0, 400).unwrap();
        let report = find_landmarks(&single_axis_spec(base, 0.0, axis), 1.0).unwrap();
        assert_eq!(
            report.crossings.len(),
            2,
            "crossings: {:?}",
            report.crossings
        );
        assert!((report.crossings[0].location - 4.03).abs() < 0.12);
        assert!((report.crossings[1].location - 8.1).abs() < 0.2);
        match report.minimum {
            MinimumFinding::Found { location, value } => {
                assert!((location - 5.2).abs() < 0.3, "location {location}");
                assert!((value - 0.898).abs() < 0.005, "value {value}");
            }
            MinimumFinding::Flat => panic!("expected a minimum"),
        }
    }

    #[test]
    fn flat_curve_is_reported_flat() {
        // Vacuum ⊗ photon-added at φ = π/2 sits at S ≡ 1 for every |α_b|².
        let base = InputConfig::vacuum_pacs(re(1.0), m(1)).unwrap();
        let axis = Axis::new(AxisVar::AlphaBSquared, 0.2, 4.0, 50).unwrap();
        let report = find_landmarks(&single_axis_spec(base, FRAC_PI_2, axis), 1.0).unwrap();
        assert!(matches!(report.minimum, MinimumFinding::Flat));
    }

    #[test]
    fn sweep_rows_identical_across_pool_sizes() {
        let base = InputConfig::coherent_pacs(re(1.17), re(1.5), m(1)).unwrap();
        let axis = Axis::new(AxisVar::Phi, -0.6, 0.6, 61).unwrap();
        let spec = single_axis_spec(base, 0.0, axis);
        let run_in = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("local pool")
                .install(|| run_sweep(&spec).unwrap())
        };
        let one = run_in(1);
        let four = run_in(4);
        for (a, b) in one.rows.iter().zip(&four.rows) {
            assert_eq!(a.v1.to_bits(), b.v1.to_bits());
            let (ma, mb) = (a.moments.unwrap(), b.moments.unwrap());
            assert_eq!(ma.mean_nd.to_bits(), mb.mean_nd.to_bits());
            assert_eq!(ma.var_nd.to_bits(), mb.var_nd.to_bits());
            assert_eq!(ma.slope.to_bits(), mb.slope.to_bits());
        }
    }
}
