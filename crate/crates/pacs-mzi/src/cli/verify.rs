//! The verification suite: eight checks covering the toolkit's headline
//! claims, each printed as one PASS/FAIL line, plus `verify_report.json`
//! and the measured-discrepancy write-up `DISCREPANCIES.md`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    self, printed_form_discrepancies, Discrepancy, InputConfig, MomentSet, VariancePath,
};
use crate::fock::{self, delta_phi_numeric, DensityMatrix, FockVector, Mode, DEFAULT_FD_STEP};
use crate::specfun::PolynomialOrder;
use crate::sweep::{
    find_landmarks, run_sweep, Axis, AxisVar, MinimumFinding, PathSelect, SweepSpec,
};
use crate::wigner::{
    coherent_wigner, gaussian_laguerre_output_surface, output_mode_wigner, output_wigner_product,
    pacs_wigner_grid, spacs_wigner, two_mode_wigner_point, wigner_of_state, GridSpec,
};
use crate::{Error, Result};

use super::io::{self, RunManifest};
use super::VerifyCmd;

// Pass thresholds, one named constant per claim.

/// |S_SQL − 1| at the φ = π/2 shot-noise anchor, both evaluation paths.
const SQL_POINT_TOL: f64 = 1e-6;
/// Allowed dip below 1 anywhere on the vacuum ⊗ photon-added φ-grid.
const SQL_FLOOR_TOL: f64 = 1e-9;
/// Absolute closed-form vs oracle gap in mean, variance, and slope.
const ORACLE_ABS_TOL: f64 = 1e-8;
/// Landmark windows for the φ = 0 sub-shot-noise curve at |α_a| = 1.5, one
/// added photon: (expected, half-width) in the total-⟨n̂⟩ coordinate.
const FIRST_CROSSING: (f64, f64) = (4.03, 0.1);
const MINIMUM_LOCATION: (f64, f64) = (5.2, 0.3);
const MINIMUM_VALUE: (f64, f64) = (0.90, 0.01);
const SECOND_CROSSING: (f64, f64) = (8.1, 0.2);
/// Corroborating point values on the same curve.
const CURVE_SPOT_TOL: f64 = 1e-3;
/// Agreement of the two evaluation paths in S_SQL on curve nodes.
const PATHS_S_TOL: f64 = 1e-6;
/// Balanced / unbalanced coherent-pair closed form.
const COHERENT_TOL: f64 = 1e-9;
/// Coherent pair, oracle side.
const COHERENT_ORACLE_TOL: f64 = 1e-6;
/// Wigner value of the one-photon state at the origin.
const FOCK1_TOL: f64 = 1e-6;
/// Wigner grid normalization.
const GRID_NORM_TOL: f64 = 5e-3;
/// Most negative value tolerated on a coherent-state grid.
const COHERENT_MIN_FLOOR: f64 = -1e-8;
/// Relative error of the analytic slope against central differences.
const SLOPE_REL_TOL: f64 = 1e-6;
/// The ratio-form variance must disagree with the oracle by at least this
/// factor at the reference point for the defect to count as detected.
const RATIO_DEFECT_FACTOR: f64 = 5.0;

/// One verification check: stable id, pass/fail, and the measured numbers
/// that justify the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub number: u32,
    pub id: &'static str,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    version: String,
    n_max: usize,
    variance_path: &'static str,
    all_passed: bool,
    checks: Vec<CheckOutcome>,
    discrepancies: Vec<Discrepancy>,
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn order(m: u32) -> PolynomialOrder {
    PolynomialOrder::new(m).expect("orders used by verify are small")
}

fn variance_name(path: VariancePath) -> &'static str {
    match path {
        VariancePath::FactorialMoment => "factorial_moment",
        VariancePath::RatioForm => "ratio_form",
    }
}

/// Builds the heaviest states the suite will need so an undersized cutoff
/// fails here, once, before any output file exists.
fn preflight(n_max: usize) -> Result<()> {
    fock::pacs_state(re(2.0), order(5), n_max)?;
    let cfg = InputConfig::coherent_pacs(re(2.0), re(2.0), order(1))?;
    fock::build_input_state(&cfg, n_max)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// check 1: vacuum ⊗ photon-added input sits exactly on the shot-noise line

fn check_sql_baseline(n_max: usize, variance: VariancePath) -> Result<(bool, String)> {
    let amplitudes = [0.1, 0.5, 1.5, 2.0];
    let mut worst_analytic = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for m in 1..=5u32 {
        for &a in &amplitudes {
            let cfg = InputConfig::vacuum_pacs(re(a), order(m))?;
            let s_an = analytic::moments_with(&cfg, PI / 2.0, variance)?.s_sql;
            let s_or = delta_phi_numeric(&cfg, PI / 2.0, DEFAULT_FD_STEP, n_max)?.s_sql;
            worst_analytic = worst_analytic.max((s_an - 1.0).abs());
            worst_oracle = worst_oracle.max((s_or - 1.0).abs());
        }
    }

    // 200 interior phases φ = kπ/201; the curve may approach 1 but not cross.
    let mut worst_dip = 0.0f64;
    for m in 1..=5u32 {
        for &a in &amplitudes {
            let cfg = InputConfig::vacuum_pacs(re(a), order(m))?;
            for k in 1..=200 {
                let phi = k as f64 * PI / 201.0;
                let s = analytic::moments_with(&cfg, phi, variance)?.s_sql;
                worst_dip = worst_dip.max(1.0 - s);
            }
        }
    }

    let passed = worst_analytic <= SQL_POINT_TOL
        && worst_oracle <= SQL_POINT_TOL
        && worst_dip <= SQL_FLOOR_TOL;
    let details = format!(
        "worst |S−1| at φ=π/2: {worst_analytic:.3e} analytic, {worst_oracle:.3e} oracle \
         (tol {SQL_POINT_TOL:.0e}); worst dip below 1 on the φ-grid: {worst_dip:.3e} \
         (tol {SQL_FLOOR_TOL:.0e})"
    );
    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 2 / check 7 shared grid: coherent ⊗ one-addition closed forms vs the
// brute-force road on 10 × 10 amplitudes × 20 phases

struct GridPoint {
    config: InputConfig,
    phi: f64,
    analytic: MomentSet,
    oracle: MomentSet,
}

fn criterion_grid(n_max: usize, variance: VariancePath) -> Result<Vec<GridPoint>> {
    let amps: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
    let phis: Vec<f64> = (1..=20).map(|k| k as f64 * PI / 21.0).collect();
    let mut nodes = Vec::with_capacity(amps.len() * amps.len() * phis.len());
    for &aa in &amps {
        for &ab in &amps {
            for &phi in &phis {
                nodes.push((aa, ab, phi));
            }
        }
    }
    nodes
        .par_iter()
        .map(|&(aa, ab, phi)| {
            let config = InputConfig::coherent_pacs(re(aa), re(ab), order(1))?;
            let analytic = analytic::moments_with(&config, phi, variance)?;
            let oracle = delta_phi_numeric(&config, phi, DEFAULT_FD_STEP, n_max)?;
            Ok(GridPoint {
                config,
                phi,
                analytic,
                oracle,
            })
        })
        .collect()
}

fn check_closed_form_vs_oracle(grid: &[GridPoint]) -> (bool, String) {
    let mut worst_mean = 0.0f64;
    let mut worst_var = 0.0f64;
    let mut worst_slope = 0.0f64;
    for p in grid {
        worst_mean = worst_mean.max((p.analytic.mean_nd - p.oracle.mean_nd).abs());
        worst_var = worst_var.max((p.analytic.var_nd - p.oracle.var_nd).abs());
        worst_slope = worst_slope.max((p.analytic.slope - p.oracle.slope).abs());
    }
    let passed = worst_mean <= ORACLE_ABS_TOL
        && worst_var <= ORACLE_ABS_TOL
        && worst_slope <= ORACLE_ABS_TOL;
    let details = format!(
        "{} grid points; worst |Δmean| {worst_mean:.3e}, |Δvar| {worst_var:.3e}, \
         |Δslope| {worst_slope:.3e} (tol {ORACLE_ABS_TOL:.0e})",
        grid.len()
    );
    (passed, details)
}

// ---------------------------------------------------------------------------
// check 3: the sub-shot-noise window of the φ = 0 curve at |α_a| = 1.5

fn landmark_spec(n_max: usize, variance: VariancePath) -> Result<SweepSpec> {
    Ok(SweepSpec {
        base: InputConfig::coherent_pacs(re(1.5), re(1.0), order(1))?,
        phi: 0.0,
        axis1: Axis::new(AxisVar::NTotal, 3.3, 10.0, 400)?,
        axis2: None,
        path: PathSelect::Auto,
        variance,
        n_max,
    })
}

fn within(value: f64, (center, half_width): (f64, f64)) -> bool {
    (value - center).abs() <= half_width
}

fn check_sub_sql_landmarks(n_max: usize, variance: VariancePath) -> Result<(bool, String)> {
    let spec = landmark_spec(n_max, variance)?;
    let report = find_landmarks(&spec, 1.0)?;

    let mut details = String::new();
    let mut passed = true;

    match report.crossings.as_slice() {
        [first, second] => {
            passed &= within(first.location, FIRST_CROSSING);
            passed &= within(second.location, SECOND_CROSSING);
            write!(
                details,
                "crossings at ⟨n⟩ = {:.4} and {:.4} (expected {} ± {}, {} ± {})",
                first.location,
                second.location,
                FIRST_CROSSING.0,
                FIRST_CROSSING.1,
                SECOND_CROSSING.0,
                SECOND_CROSSING.1
            )
            .unwrap();
        }
        other => {
            passed = false;
            write!(details, "expected 2 crossings, found {}", other.len()).unwrap();
        }
    }
    match report.minimum {
        MinimumFinding::Found { location, value } => {
            passed &= within(location, MINIMUM_LOCATION) && within(value, MINIMUM_VALUE);
            write!(
                details,
                "; minimum S = {:.4} at ⟨n⟩ = {:.4} (expected {} ± {} at {} ± {})",
                value,
                location,
                MINIMUM_VALUE.0,
                MINIMUM_VALUE.1,
                MINIMUM_LOCATION.0,
                MINIMUM_LOCATION.1
            )
            .unwrap();
        }
        MinimumFinding::Flat => {
            passed = false;
            details.push_str("; curve reported flat — no minimum");
        }
    }

    // Corroborating spot values on the same curve, plus path agreement.
    let spot = |n_total: f64| -> Result<(f64, f64)> {
        let x_b = crate::sweep::invert_nb(n_total - 2.25, order(1))?;
        let cfg = InputConfig::coherent_pacs(re(1.5), re(x_b.sqrt()), order(1))?;
        let s_an = analytic::moments_with(&cfg, 0.0, variance)?.s_sql;
        let s_or = delta_phi_numeric(&cfg, 0.0, DEFAULT_FD_STEP, n_max)?.s_sql;
        Ok((s_an, s_or))
    };
    let (s403, s403_or) = spot(4.03)?;
    let (s52, s52_or) = spot(5.2)?;
    passed &= (s403 - 0.9997).abs() <= CURVE_SPOT_TOL;
    passed &= (s52 - 0.897).abs() <= CURVE_SPOT_TOL;
    let path_gap = (s403 - s403_or).abs().max((s52 - s52_or).abs());
    passed &= path_gap <= PATHS_S_TOL;
    write!(
        details,
        "; S(4.03) = {s403:.5}, S(5.2) = {s52:.5} (expected 0.9997, 0.897 ± {CURVE_SPOT_TOL:.0e}); \
         analytic-vs-oracle S gap {path_gap:.2e} (tol {PATHS_S_TOL:.0e})"
    )
    .unwrap();

    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 4: the ratio-form variance defect is present, measured, and breaks
// the landmark check when switched on

fn check_discrepancy_detection(n_max: usize) -> Result<(bool, String)> {
    let mut passed = true;
    let mut details = String::new();

    // Reference point: |α_b| = 1.5, one addition.
    let alpha = re(1.5);
    let ratio_var = analytic::pacs_variance_ratio_form(alpha, order(1));
    let oracle_var = fock::pacs_state(alpha, order(1), n_max)?.var_n();
    let factor = ratio_var / oracle_var;
    passed &= factor > RATIO_DEFECT_FACTOR;
    write!(
        details,
        "ratio form {ratio_var:.6} vs oracle {oracle_var:.7} — factor {factor:.2} \
         (must exceed {RATIO_DEFECT_FACTOR})"
    )
    .unwrap();

    // Zero-addition limit: x² + 3x instead of the coherent value x.
    let x = 2.25f64;
    let ratio_m0 = analytic::pacs_variance_ratio_form(re(x.sqrt()), order(0));
    let coherent = analytic::pacs_variance(re(x.sqrt()), order(0));
    passed &= (ratio_m0 - (x * x + 3.0 * x)).abs() <= 1e-12;
    passed &= (ratio_m0 - coherent).abs() > 1.0;
    write!(
        details,
        "; zero-addition limit at x = {x}: {ratio_m0} vs coherent {coherent}"
    )
    .unwrap();

    // The cached cross-check must have flagged exactly this form.
    let flagged = printed_form_discrepancies()
        .iter()
        .find(|d| d.id == "ratio-form-variance");
    match flagged {
        Some(d) if d.worst_abs_deviation > RATIO_DEFECT_FACTOR => {
            write!(
                details,
                "; cross-check entry '{}' worst deviation {:.3}",
                d.id, d.worst_abs_deviation
            )
            .unwrap();
        }
        Some(d) => {
            passed = false;
            write!(
                details,
                "; cross-check entry present but deviation only {:.3}",
                d.worst_abs_deviation
            )
            .unwrap();
        }
        None => {
            passed = false;
            details.push_str("; cross-check produced no ratio-form-variance entry");
        }
    }

    // Switching the defective form in must erase the sub-shot-noise window.
    let spec = landmark_spec(n_max, VariancePath::RatioForm)?;
    let broken = find_landmarks(&spec, 1.0)?;
    let min_value = match broken.minimum {
        MinimumFinding::Found { value, .. } => value,
        MinimumFinding::Flat => f64::INFINITY,
    };
    let breaks = broken.crossings.is_empty() && min_value > 1.1;
    passed &= breaks;
    write!(
        details,
        "; with the ratio form the curve has {} crossings and minimum {min_value:.3} \
         (breakage requires none and > 1.1)",
        broken.crossings.len()
    )
    .unwrap();

    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 5: coherent-pair baseline, balanced and unbalanced

fn check_two_coherent_baseline(n_max: usize) -> Result<(bool, String)> {
    let mut worst_closed = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for &aa in &[0.8, 1.5] {
        for &ab in &[0.4, 1.1, 1.5, 2.0] {
            let cfg = InputConfig::coherent_pacs(re(aa), re(ab), order(0))?;
            let expected = (aa * aa + ab * ab) / (2.0 * aa * ab);
            let s_an = analytic::moments(&cfg, 0.0)?.s_sql;
            let s_or = delta_phi_numeric(&cfg, 0.0, DEFAULT_FD_STEP, n_max)?.s_sql;
            worst_closed = worst_closed.max((s_an - expected).abs());
            worst_oracle = worst_oracle.max((s_or - expected).abs());
        }
    }
    let balanced = analytic::moments(
        &InputConfig::coherent_pacs(re(1.5), re(1.5), order(0))?,
        0.0,
    )?
    .s_sql;

    // The zero-addition total-⟨n̂⟩ curve touches 1 tangentially at balance
    // (n_b = n_a = 2.25, total 4.5): a minimum exactly on the line and no
    // transversal crossing.
    let spec = SweepSpec {
        base: InputConfig::coherent_pacs(re(1.5), re(1.0), order(0))?,
        phi: 0.0,
        axis1: Axis::new(AxisVar::NTotal, 2.3, 10.0, 400)?,
        axis2: None,
        path: PathSelect::Auto,
        variance: VariancePath::FactorialMoment,
        n_max,
    };
    let report = find_landmarks(&spec, 1.0)?;
    let tangent_ok = match report.minimum {
        MinimumFinding::Found { location, value } => {
            (location - 4.5).abs() <= 1e-4 && (value - 1.0).abs() <= COHERENT_TOL
        }
        MinimumFinding::Flat => false,
    };

    let passed = (balanced - 1.0).abs() <= COHERENT_TOL
        && worst_closed <= COHERENT_TOL
        && worst_oracle <= COHERENT_ORACLE_TOL
        && tangent_ok
        && report.crossings.is_empty();
    let details = format!(
        "balanced |S−1| = {:.2e} (tol {COHERENT_TOL:.0e}); unbalanced worst gap to \
         (n_a+n_b)/2√(n_a n_b): {worst_closed:.2e} closed form, {worst_oracle:.2e} oracle; \
         tangent minimum at total ⟨n⟩ = 4.5: {}, crossings: {}",
        (balanced - 1.0).abs(),
        tangent_ok,
        report.crossings.len()
    );
    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 6: Wigner sanity — one-photon depth, normalization, coherent
// positivity, and the negativity ordering of the output port

fn check_wigner(n_max: usize) -> Result<(bool, String)> {
    let mut passed = true;
    let mut details = String::new();
    let mut worst_norm = 0.0f64;
    let track_norm = |grid: &crate::wigner::WignerGrid| (grid.quadrature() - 1.0).abs();

    // One-photon state on an origin-centred odd grid: the centre node is the
    // exact minimum −2/π.
    let fock1 = DensityMatrix::from_pure(&FockVector::fock(1, 12)?)?;
    let spec = GridSpec::symmetric(4.0, 129)?;
    let grid = wigner_of_state(&fock1, &spec)?;
    let center = grid.value_at(64, 64);
    let fock_gap = (center - (-2.0 / PI)).abs();
    passed &= fock_gap <= FOCK1_TOL;
    worst_norm = worst_norm.max(track_norm(&grid));
    write!(
        details,
        "one-photon W(0) = {center:.8} vs −2/π (gap {fock_gap:.2e}, tol {FOCK1_TOL:.0e})"
    )
    .unwrap();

    // Coherent grid: positive everywhere (up to quadrature noise).
    let coh = DensityMatrix::from_pure(&fock::coherent_state(re(1.17), 40)?)?;
    let coh_grid = wigner_of_state(&coh, &GridSpec::around(re(1.17), 161)?)?;
    worst_norm = worst_norm.max(track_norm(&coh_grid));
    passed &= coh_grid.min_value() >= COHERENT_MIN_FLOOR;
    write!(
        details,
        "; coherent grid min {:.2e} (floor {COHERENT_MIN_FLOOR:.0e})",
        coh_grid.min_value()
    )
    .unwrap();

    // Photon-added input state grid.
    let (spacs_grid, spacs_report) = pacs_wigner_grid(re(1.5), order(1), None, 40)?;
    worst_norm = worst_norm.max(track_norm(&spacs_grid));
    passed &= spacs_report.nonclassical;

    // Output-port negativity shrinks between φ = 0 and φ = 5.03.
    let cfg = InputConfig::coherent_pacs(re(1.17), re(1.5), order(1))?;
    let (grid0, report0) = output_mode_wigner(&cfg, 0.0, Mode::B, None, n_max)?;
    let (grid503, report503) = output_mode_wigner(&cfg, 5.03, Mode::B, None, n_max)?;
    worst_norm = worst_norm.max(track_norm(&grid0));
    worst_norm = worst_norm.max(track_norm(&grid503));
    passed &= report0.negative_volume > report503.negative_volume;
    write!(
        details,
        "; photon-added input nonclassical: {}; output negative volume {:.4} at φ=0 \
         vs {:.4} at φ=5.03 (must decrease)",
        spacs_report.nonclassical, report0.negative_volume, report503.negative_volume
    )
    .unwrap();

    passed &= worst_norm <= GRID_NORM_TOL;
    write!(
        details,
        "; worst grid-normalization gap {worst_norm:.2e} (tol {GRID_NORM_TOL:.0e})"
    )
    .unwrap();

    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 7: the analytic slope is the derivative of the analytic mean

fn check_derivative_consistency(
    grid: &[GridPoint],
    variance: VariancePath,
) -> Result<(bool, String)> {
    let h = DEFAULT_FD_STEP;
    let mut worst_rel = 0.0f64;
    for p in grid {
        let plus = analytic::moments_with(&p.config, p.phi + h, variance)?.mean_nd;
        let minus = analytic::moments_with(&p.config, p.phi - h, variance)?.mean_nd;
        let fd = (plus - minus) / (2.0 * h);
        let rel = (p.analytic.slope - fd).abs() / p.analytic.slope.abs().max(f64::MIN_POSITIVE);
        worst_rel = worst_rel.max(rel);
    }
    let passed = worst_rel <= SLOPE_REL_TOL;
    let details = format!(
        "central differences (h = {h:.0e}) on {} grid points; worst relative slope error \
         {worst_rel:.3e} (tol {SLOPE_REL_TOL:.0e})",
        grid.len()
    );
    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// check 8: determinism — repeated runs and thread-count independence

fn check_determinism(n_max: usize, variance: VariancePath) -> Result<(bool, String)> {
    let spec = landmark_spec(n_max, variance)?;
    let csv_a = io::curve_csv(&run_sweep(&spec)?);
    let csv_b = io::curve_csv(&run_sweep(&spec)?);
    let rerun_identical = csv_a == csv_b;

    let pool = |threads: usize| -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain(format!("thread pool construction failed: {e}")))
    };
    let csv_1 = pool(1)?.install(|| run_sweep(&spec).map(|t| io::curve_csv(&t)))?;
    let csv_4 = pool(4)?.install(|| run_sweep(&spec).map(|t| io::curve_csv(&t)))?;
    let pool_identical = csv_1 == csv_a && csv_4 == csv_a;

    // Same question for a rendered grid, compared bit for bit.
    let rho = DensityMatrix::from_pure(&fock::pacs_state(re(1.5), order(1), 40)?)?;
    let gspec = GridSpec::symmetric(4.0, 97)?;
    let bits = |g: &crate::wigner::WignerGrid| -> Vec<u64> {
        g.values().iter().map(|v| v.to_bits()).collect()
    };
    let w_1 = pool(1)?.install(|| wigner_of_state(&rho, &gspec))?;
    let w_4 = pool(4)?.install(|| wigner_of_state(&rho, &gspec))?;
    let wigner_identical = bits(&w_1) == bits(&w_4);

    let passed = rerun_identical && pool_identical && wigner_identical;
    let details = format!(
        "repeated sweep CSV identical: {rerun_identical}; 1-thread vs 4-thread sweep CSV \
         identical: {pool_identical}; Wigner grid bitwise identical across pools: \
         {wigner_identical}"
    );
    Ok((passed, details))
}

// ---------------------------------------------------------------------------
// DISCREPANCIES.md: measured numbers for every printed-form defect

struct SurfaceMeasurements {
    m0_worst_gap: f64,
    m1_integral: f64,
    product_integral: f64,
    brute_force_worst_gap: f64,
}

/// Deterministic low-discrepancy points in a centred square, for sampling
/// comparisons without a seeded RNG.
fn lattice_points(count: usize, half_span: f64, offset: usize) -> Vec<Complex64> {
    // Kronecker sequence driven by the plastic-number constants.
    const A1: f64 = 0.754_877_666_246_692_8;
    const A2: f64 = 0.569_840_290_998_053_2;
    (0..count)
        .map(|i| {
            let k = (i + offset + 1) as f64;
            let fx = (k * A1).fract();
            let fp = (k * A2).fract();
            Complex64::new((2.0 * fx - 1.0) * half_span, (2.0 * fp - 1.0) * half_span)
        })
        .collect()
}

fn surface_measurements(n_max: usize) -> Result<SurfaceMeasurements> {
    let phi = 2.0;
    let alpha_a = re(1.17);
    let alpha_b = re(1.5);

    // Zero-addition exactness against the product of coherent functions.
    let w_a0 = coherent_wigner(alpha_a);
    let w_b0 = coherent_wigner(alpha_b);
    let mut m0_worst_gap = 0.0f64;
    let z1s = lattice_points(25, 3.0, 0);
    let z2s = lattice_points(25, 3.0, 25);
    for (&z1, &z2) in z1s.iter().zip(&z2s) {
        let surface = gaussian_laguerre_output_surface(phi, alpha_a, alpha_b, order(0), z1, z2);
        let product = output_wigner_product(phi, &w_a0, &w_b0, z1, z2);
        m0_worst_gap = m0_worst_gap.max((surface - product).abs());
    }

    // One-addition z₁-plane integral at the surface's own centroid, where a
    // true phase-space distribution would integrate to the other port's
    // positive marginal value.
    let a = (phi / 2.0).cos();
    let b = (phi / 2.0).sin();
    let c1 = a * alpha_b - b * alpha_a;
    let c2 = a * alpha_a + b * alpha_b;
    let spec = GridSpec::new(c1.re - 6.0, c1.re + 6.0, c1.im - 6.0, c1.im + 6.0, 241)?;
    let m1 = order(1);
    let surface_grid = crate::wigner::WignerGrid::render(&spec, |z1| {
        gaussian_laguerre_output_surface(phi, alpha_a, alpha_b, m1, z1, c2)
    });
    let m1_integral = surface_grid.quadrature();
    let w_a = coherent_wigner(alpha_a);
    let w_b = spacs_wigner(alpha_b);
    let product_grid = crate::wigner::WignerGrid::render(&spec, |z1| {
        output_wigner_product(phi, &w_a, &w_b, z1, c2)
    });
    let product_integral = product_grid.quadrature();

    // The product form against brute-force evaluation of the full two-mode
    // output state.
    let cfg = InputConfig::coherent_pacs(alpha_a, alpha_b, m1)?;
    let input = fock::build_input_state(&cfg, n_max.min(40))?;
    let out = fock::apply_mzi(&input, phi)?;
    let zes = lattice_points(25, 2.5, 50);
    let zfs = lattice_points(25, 2.5, 75);
    let brute_force_worst_gap = zes
        .par_iter()
        .zip(zfs.par_iter())
        .map(|(&ze, &zf)| {
            let brute = two_mode_wigner_point(&out, ze, zf);
            let product = output_wigner_product(phi, &w_a, &w_b, zf, ze);
            (brute - product).abs()
        })
        .reduce(|| 0.0, f64::max);

    Ok(SurfaceMeasurements {
        m0_worst_gap,
        m1_integral,
        product_integral,
        brute_force_worst_gap,
    })
}

fn discrepancies_markdown(
    discrepancies: &[Discrepancy],
    surface: &SurfaceMeasurements,
    sql_details: &str,
) -> String {
    let mut md = String::new();
    md.push_str("# Measured discrepancies\n\n");
    md.push_str(
        "Closed forms are cross-checked against independent routes (factorial-moment \
         algebra, the truncated-Fock oracle, brute-force phase-space evaluation). \
         Everything that disagrees is recorded here with live-measured numbers from \
         this verify run; everything not listed agreed within tolerance.\n\n",
    );

    md.push_str("## Ratio-form number variance\n\n");
    md.push_str(
        "The compact ratio form for the photon-added mode's number variance,\n\n\
         ```text\n\
         (m+1)(2m+2+x)·L_{m+1}(−x)/L_m(−x) − 2(m+1)²,   x = |α_b|²\n\
         ```\n\n\
         disagrees with the factorial-moment route and the oracle whenever m ≥ 1 \
         and x > 0, and its zero-addition limit is x² + 3x instead of the coherent \
         value x. The factorial-moment route is therefore the default everywhere; \
         the ratio form stays available behind `--paper-verbatim-variance` so the \
         damage is reproducible:\n\n",
    );
    for d in discrepancies {
        md.push_str(&format!(
            "- cross-check `{}`: {} (worst absolute deviation {:.6})\n",
            d.id, d.summary, d.worst_abs_deviation
        ));
        for line in &d.details {
            md.push_str(&format!("  - {line}\n"));
        }
    }
    md.push_str(
        "\nSwitching the ratio form in erases the sub-shot-noise window of the \
         φ = 0 sensitivity curve (see the `variance_discrepancy_detection` check in \
         `verify_report.json` for the measured landmark breakage).\n\n",
    );

    md.push_str("## Gaussian–Laguerre output surface\n\n");
    md.push_str(&format!(
        "The closed-form two-mode output surface\n\n\
         ```text\n\
         4(−1)^m/(π²·L_m(−x_b)) · exp(−2|z₁−c₁|² − 2|z₂−c₂|²) · L_m(2|z₁−c₁|²)\n\
         ```\n\n\
         is exact for zero additions (worst gap to the coherent product form \
         {:.3e} on a 25-point sample) but is not a Wigner function for m ≥ 1: \
         since ∫₀^∞ e^(−t)·L_m(t) dt = 0 for m ≥ 1, its z₁-plane integral vanishes \
         identically. Measured at one addition, z₂ pinned to the transformed \
         centroid: surface integral {:.3e} versus {:.6} for the correct product \
         form on the same grid. A parity-type kernel would need the Laguerre \
         argument 4|z₁−c₁|², not 2|z₁−c₁|². All rendered output panels therefore \
         use the mode-map product form, which matches brute-force displaced-parity \
         evaluation of the full two-mode output state to {:.3e} on a 25-point \
         low-discrepancy sample.\n\n",
        surface.m0_worst_gap,
        surface.m1_integral,
        surface.product_integral,
        surface.brute_force_worst_gap
    ));

    md.push_str("## Shot-noise normalization\n\n");
    md.push_str(&format!(
        "Not a defect, but a convention that numbers here depend on: \
         Δφ_SQL = 1/√⟨n̂_total⟩ with the *input* state's total mean photon number. \
         Under this convention the vacuum ⊗ photon-added configuration sits exactly \
         on the shot-noise line at φ = π/2 — measured: {sql_details}. Normalizing \
         by a per-port or post-loss photon number instead would rescale every \
         sensitivity curve.\n"
    ));
    md
}

// ---------------------------------------------------------------------------

fn outcome(number: u32, id: &'static str, result: (bool, String)) -> CheckOutcome {
    let (passed, details) = result;
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("check {number} ({id}): {verdict} — {details}");
    CheckOutcome {
        number,
        id,
        passed,
        details,
    }
}

/// Runs the whole suite. `Ok(true)` means every check passed; `Ok(false)`
/// means the suite ran but at least one check failed (exit code 1); `Err`
/// means the suite could not run at all (for instance an undersized cutoff,
/// exit code 3).
pub fn run_verify(cmd: &VerifyCmd) -> Result<bool> {
    let n_max = cmd.nmax;
    let variance = if cmd.paper_verbatim_variance {
        VariancePath::RatioForm
    } else {
        VariancePath::FactorialMoment
    };
    preflight(n_max)?;

    let dir = Path::new(&cmd.out);
    io::ensure_dir(dir)?;
    let mut manifest = RunManifest::new("verify");
    manifest
        .param("n_max", n_max)
        .param("variance_path", variance_name(variance))
        .tolerance("sql_point", SQL_POINT_TOL)
        .tolerance("sql_floor", SQL_FLOOR_TOL)
        .tolerance("oracle_abs", ORACLE_ABS_TOL)
        .tolerance("coherent_closed_form", COHERENT_TOL)
        .tolerance("fock1_center", FOCK1_TOL)
        .tolerance("grid_normalization", GRID_NORM_TOL)
        .tolerance("slope_relative", SLOPE_REL_TOL);

    let mut checks = Vec::with_capacity(8);

    let c1 = check_sql_baseline(n_max, variance)?;
    let sql_details = c1.1.clone();
    checks.push(outcome(1, "sql_baseline", c1));

    let grid = criterion_grid(n_max, variance)?;
    checks.push(outcome(
        2,
        "closed_form_vs_oracle",
        check_closed_form_vs_oracle(&grid),
    ));
    checks.push(outcome(
        3,
        "sub_sql_landmarks",
        check_sub_sql_landmarks(n_max, variance)?,
    ));
    checks.push(outcome(
        4,
        "variance_discrepancy_detection",
        check_discrepancy_detection(n_max)?,
    ));
    checks.push(outcome(
        5,
        "two_coherent_baseline",
        check_two_coherent_baseline(n_max)?,
    ));
    checks.push(outcome(6, "wigner_checks", check_wigner(n_max)?));
    checks.push(outcome(
        7,
        "derivative_consistency",
        check_derivative_consistency(&grid, variance)?,
    ));
    checks.push(outcome(
        8,
        "determinism",
        check_determinism(n_max, variance)?,
    ));

    let discrepancies = printed_form_discrepancies().to_vec();
    let surface = surface_measurements(n_max)?;
    let all_passed = checks.iter().all(|c| c.passed);

    let report = VerifyReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        n_max,
        variance_path: variance_name(variance),
        all_passed,
        checks,
        discrepancies: discrepancies.clone(),
    };
    manifest.write_output_json(dir, "verify_report.json", &report)?;
    let md = discrepancies_markdown(&discrepancies, &surface, &sql_details);
    manifest.write_output(dir, "DISCREPANCIES.md", &md)?;
    manifest.finish(dir)?;

    let n_passed = report.checks.iter().filter(|c| c.passed).count();
    if all_passed {
        println!(
            "verify: {n_passed}/{} checks passed; report written to {}",
            report.checks.len(),
            dir.join("verify_report.json").display()
        );
    } else {
        let first = report
            .checks
            .iter()
            .find(|c| !c.passed)
            .expect("at least one failed");
        println!(
            "verify: {n_passed}/{} checks passed — first failure: {} (see {})",
            report.checks.len(),
            first.id,
            dir.join("verify_report.json").display()
        );
    }
    Ok(all_passed)
}
