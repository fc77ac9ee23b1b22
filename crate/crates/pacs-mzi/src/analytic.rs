//! Closed-form photon statistics and phase sensitivity.
//!
//! Every quantity here follows from Laguerre-polynomial identities for
//! photon-added coherent states and elementary mode algebra for the
//! interferometer observable `n̂_d(φ) = cos φ·û + sin φ·ŵ`:
//!
//! * mean:  `⟨n̂_d⟩ = ⟨û⟩ cos φ + ⟨ŵ⟩ sin φ`
//! * slope: `∂_φ⟨n̂_d⟩ = −⟨û⟩ sin φ + ⟨ŵ⟩ cos φ`
//! * variance: `Var û·cos²φ + Var ŵ·sin²φ + ⟨ΔûΔŵ+ΔŵΔû⟩·sin φ cos φ`
//!
//! and the estimator error is `Δφ = √Var(n̂_d)/|∂_φ⟨n̂_d⟩|`, reported against
//! the shot-noise limit as `S = Δφ·√⟨n̂_tot⟩` (see [`s_sql`]).
//!
//! Two variance routes exist for the photon-added mode. The primary one goes
//! through factorial moments and is exact for every number of additions. The
//! secondary, ratio-form route ([`pacs_variance_ratio_form`]) reproduces a
//! published shape that is kept verbatim for comparison: it disagrees with
//! the factorial route (and with the brute-force oracle) for one or more
//! additions at nonzero field, and even its zero-addition limit gives
//! `x² + 3x` instead of the Poisson value `x`. The `verify` command measures
//! and reports that gap; see DISCREPANCIES.md in any verify output.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::specfun::{laguerre_raw, PolynomialOrder};
use crate::{Error, Result};

/// Slope magnitudes below this are treated as a vanishing signal: the error
/// propagation `√Var/|slope|` is reported as divergent rather than as a
/// meaninglessly huge number dominated by float noise.
pub const DIVERGENT_SLOPE_TOL: f64 = 1e-12;

/// Variance values more negative than this indicate a real bug rather than
/// float cancellation and are rejected; anything in `(−1e-12, 0)` clamps to 0.
pub const VAR_CLAMP_TOL: f64 = 1e-12;

/// What happened to the error propagation at an operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityStatus {
    Ok,
    /// |∂_φ⟨n̂_d⟩| below [`DIVERGENT_SLOPE_TOL`]: Δφ and S are +∞
    /// (serialized as null in JSON, left empty in CSV).
    Divergent,
}

/// Complete description of one operating point: moments of the measured
/// observable, the slope, and the derived sensitivity figures.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentSet {
    /// ⟨n̂_d(φ)⟩
    pub mean_nd: f64,
    /// Var n̂_d(φ)
    pub var_nd: f64,
    /// ∂_φ⟨n̂_d⟩
    pub slope: f64,
    /// ⟨n̂_tot⟩ of the input
    pub n_total: f64,
    /// √Var/|slope|; +∞ when divergent
    pub delta_phi: f64,
    /// Δφ·√⟨n̂_tot⟩; +∞ when divergent
    pub s_sql: f64,
    pub status: SensitivityStatus,
}

impl MomentSet {
    /// Assembles the derived figures from raw moments, enforcing the variance
    /// clamp, the divergence threshold and a positive total photon number.
    pub fn from_parts(mean_nd: f64, var_nd: f64, slope: f64, n_total: f64) -> Result<Self> {
        if var_nd < -VAR_CLAMP_TOL {
            return Err(Error::domain(format!(
                "variance {var_nd:e} below the clamp tolerance −{VAR_CLAMP_TOL:e}"
            )));
        }
        if n_total.is_nan() || n_total <= 0.0 {
            return Err(Error::domain(format!(
                "total photon number must be positive, got {n_total}"
            )));
        }
        let var_nd = var_nd.max(0.0);
        if slope.abs() < DIVERGENT_SLOPE_TOL {
            return Ok(MomentSet {
                mean_nd,
                var_nd,
                slope,
                n_total,
                delta_phi: f64::INFINITY,
                s_sql: f64::INFINITY,
                status: SensitivityStatus::Divergent,
            });
        }
        let delta_phi = var_nd.sqrt() / slope.abs();
        Ok(MomentSet {
            mean_nd,
            var_nd,
            slope,
            n_total,
            delta_phi,
            s_sql: delta_phi * n_total.sqrt(),
            status: SensitivityStatus::Ok,
        })
    }

    pub fn is_divergent(&self) -> bool {
        self.status == SensitivityStatus::Divergent
    }
}

/// Phase error divided by the shot-noise limit `1/√⟨n̂_tot⟩`.
///
/// The normalization uses the square root of the mean photon number: that is
/// the convention under which the vacuum ⊗ photon-added benchmark sits exactly
/// at `S = 1` at the half-turn operating point. (Normalizing by `1/⟨n̂_tot⟩`
/// instead would break that anchor; see DISCREPANCIES.md from `verify`.)
pub fn s_sql(delta_phi: f64, n_total: f64) -> Result<f64> {
    if !n_total.is_finite() || n_total <= 0.0 {
        return Err(Error::domain(format!(
            "s_sql: total photon number must be positive and finite, got {n_total}"
        )));
    }
    Ok(delta_phi * n_total.sqrt())
}

/// State of the non-added input arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeA {
    Vacuum,
    Coherent(Complex64),
}

/// Input specification: mode A (vacuum or coherent) ⊗ photon-added coherent
/// state on mode B with `additions` added photons.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InputConfig {
    pub mode_a: ModeA,
    pub alpha_b: Complex64,
    pub additions: PolynomialOrder,
}

impl InputConfig {
    pub fn vacuum_pacs(alpha_b: Complex64, additions: PolynomialOrder) -> Result<Self> {
        if !alpha_b.re.is_finite() || !alpha_b.im.is_finite() {
            return Err(Error::domain("alpha_b must be finite"));
        }
        Ok(InputConfig {
            mode_a: ModeA::Vacuum,
            alpha_b,
            additions,
        })
    }

    pub fn coherent_pacs(
        alpha_a: Complex64,
        alpha_b: Complex64,
        additions: PolynomialOrder,
    ) -> Result<Self> {
        if !alpha_a.re.is_finite()
            || !alpha_a.im.is_finite()
            || !alpha_b.re.is_finite()
            || !alpha_b.im.is_finite()
        {
            return Err(Error::domain("input amplitudes must be finite"));
        }
        Ok(InputConfig {
            mode_a: ModeA::Coherent(alpha_a),
            alpha_b,
            additions,
        })
    }

    /// Amplitude of mode A (zero for vacuum).
    pub fn alpha_a(&self) -> Complex64 {
        match self.mode_a {
            ModeA::Vacuum => Complex64::ZERO,
            ModeA::Coherent(a) => a,
        }
    }

    /// ⟨n̂_tot⟩ of the input.
    pub fn total_mean_n(&self) -> f64 {
        self.alpha_a().norm_sqr() + pacs_mean(self.alpha_b, self.additions)
    }
}

/// Mean photon number of a photon-added coherent state:
/// `(m+1)·L_{m+1}(−x)/L_m(−x) − 1` with `x = |α|²`.
pub fn pacs_mean(alpha: Complex64, m: PolynomialOrder) -> f64 {
    let x = alpha.norm_sqr();
    let mm = m.get();
    (mm as f64 + 1.0) * laguerre_raw(mm + 1, -x) / laguerre_raw(mm, -x) - 1.0
}

/// Photon-number variance through factorial moments. The second moment uses
/// `(n+m)²·(n+m)!/n! = (n+m+2)!/n! − 3(n+m+1)!/n! + (n+m)!/n!`, which sums
/// to Laguerre ratios term by term, so
/// `⟨n̂²⟩ = [(m+2)(m+1)L_{m+2}(−x) − 3(m+1)L_{m+1}(−x) + L_m(−x)]/L_m(−x)`.
/// Exact for every m; reduces to the Poisson variance `x` at m = 0.
pub fn pacs_variance(alpha: Complex64, m: PolynomialOrder) -> f64 {
    let x = alpha.norm_sqr();
    let mm = m.get();
    let l0 = laguerre_raw(mm, -x);
    let l1 = laguerre_raw(mm + 1, -x);
    let l2 = laguerre_raw(mm + 2, -x);
    let mf = mm as f64;
    let second = ((mf + 2.0) * (mf + 1.0) * l2 - 3.0 * (mf + 1.0) * l1 + l0) / l0;
    let mean = (mf + 1.0) * l1 / l0 - 1.0;
    second - mean * mean
}

/// Ratio-form variance `(m+1)(2m+2+x)·L_{m+1}(−x)/L_m(−x) − 2(m+1)²`,
/// kept verbatim as published.
///
/// This expression is *not* the photon-number variance away from `x = 0`:
/// at m = 1, x = 2.25 it gives ≈ 22.89 where the true value is ≈ 2.46, and
/// its m = 0 limit is `x² + 3x` rather than `x`. It is exposed only behind
/// the verbatim-variance switch so its downstream effect on sensitivity
/// curves can be demonstrated; see [`VariancePath`] and DISCREPANCIES.md.
pub fn pacs_variance_ratio_form(alpha: Complex64, m: PolynomialOrder) -> f64 {
    let x = alpha.norm_sqr();
    let mm = m.get();
    let mf = mm as f64;
    let ratio = laguerre_raw(mm + 1, -x) / laguerre_raw(mm, -x);
    (mf + 1.0) * (2.0 * mf + 2.0 + x) * ratio - 2.0 * (mf + 1.0) * (mf + 1.0)
}

/// Which closed form supplies the photon-added mode's number variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariancePath {
    /// Factorial-moment route (exact; the default).
    #[default]
    FactorialMoment,
    /// Published ratio form, reproduced verbatim including its defect.
    RatioForm,
}

fn pacs_variance_with(alpha: Complex64, m: PolynomialOrder, path: VariancePath) -> f64 {
    match path {
        VariancePath::FactorialMoment => pacs_variance(alpha, m),
        VariancePath::RatioForm => pacs_variance_ratio_form(alpha, m),
    }
}

/// `⟨â⟩*⟨b̂⟩` for coherent ⊗ single-addition input:
/// `α_a* α_b (2+x)/(1+x)` with `x = |α_b|²`.
pub fn cross_expectation(alpha_a: Complex64, alpha_b: Complex64) -> Complex64 {
    let x = alpha_b.norm_sqr();
    alpha_a.conj() * alpha_b * ((2.0 + x) / (1.0 + x))
}

/// Moments of `n̂_d(φ)` assembled from the û/ŵ statistics of the input.
fn assemble(
    phi: f64,
    u_mean: f64,
    w_mean: f64,
    u_var: f64,
    w_var: f64,
    cov_sym: f64,
    n_total: f64,
) -> Result<MomentSet> {
    let (s, c) = phi.sin_cos();
    let mean = u_mean * c + w_mean * s;
    let slope = -u_mean * s + w_mean * c;
    let var = u_var * c * c + w_var * s * s + cov_sym * s * c;
    MomentSet::from_parts(mean, var, slope, n_total)
}

/// Vacuum ⊗ photon-added input (any number of additions):
/// `⟨û⟩ = −n̄_b`, `⟨ŵ⟩ = 0`, `Var û = Var n̂_b`, `Var ŵ = n̄_b`, zero
/// covariance. The resulting `S(φ) = √(1 + (Var n̂_b/n̄_b)·cot²φ) ≥ 1`
/// touches the shot-noise limit exactly at φ = π/2.
pub fn vacuum_pacs_moments(phi: f64, alpha_b: Complex64, m: PolynomialOrder) -> Result<MomentSet> {
    vacuum_pacs_moments_with(phi, alpha_b, m, VariancePath::default())
}

pub fn vacuum_pacs_moments_with(
    phi: f64,
    alpha_b: Complex64,
    m: PolynomialOrder,
    path: VariancePath,
) -> Result<MomentSet> {
    let n_b = pacs_mean(alpha_b, m);
    let v_b = pacs_variance_with(alpha_b, m, path);
    assemble(phi, -n_b, 0.0, v_b, n_b, 0.0, n_b)
}

/// Coherent ⊗ single-addition input. All five û/ŵ statistics in closed form
/// (x = |α_b|², n_a = |α_a|²):
///
/// * `⟨û⟩ = n_a − (1+3x+x²)/(1+x)`
/// * `⟨ŵ⟩ = 2 Re{α_a* α_b}·(2+x)/(1+x)`
/// * `Var û = n_a + x(2+2x+x²)/(1+x)²`
/// * `Var ŵ = n_a + (1+2n_a)(1+3x+x²)/(1+x) + 2 Re{α_a*² α_b²}(3+x)/(1+x) − ⟨ŵ⟩²`
/// * `⟨ΔûΔŵ+ΔŵΔû⟩ = 4 Re{α_a* α_b}·x/(1+x)²`
///
/// On first use the whole set is cross-checked against the brute-force
/// oracle on a small grid; any term drifting beyond 1e-8 would be recorded
/// by [`printed_form_discrepancies`] (none is — the check documents that).
pub fn coherent_spacs_moments(
    phi: f64,
    alpha_a: Complex64,
    alpha_b: Complex64,
) -> Result<MomentSet> {
    coherent_spacs_moments_with(phi, alpha_a, alpha_b, VariancePath::default())
}

pub fn coherent_spacs_moments_with(
    phi: f64,
    alpha_a: Complex64,
    alpha_b: Complex64,
    path: VariancePath,
) -> Result<MomentSet> {
    let one = PolynomialOrder::new(1).expect("1 is a valid order");
    let x = alpha_b.norm_sqr();
    let n_a = alpha_a.norm_sqr();
    let n_b = pacs_mean(alpha_b, one); // (1+3x+x²)/(1+x)
    let cross2 = 2.0 * (alpha_a.conj() * alpha_b).re;

    let u_mean = n_a - n_b;
    let w_mean = cross2 * (2.0 + x) / (1.0 + x);

    let u_var = n_a + pacs_variance_with(alpha_b, one, path);
    let sq_term = 2.0 * (alpha_a.conj().powi(2) * alpha_b.powi(2)).re * (3.0 + x) / (1.0 + x);
    let w_var = n_a + (1.0 + 2.0 * n_a) * n_b + sq_term - w_mean * w_mean;
    let cov_sym = 2.0 * cross2 * x / ((1.0 + x) * (1.0 + x));

    assemble(phi, u_mean, w_mean, u_var, w_var, cov_sym, n_a + n_b)
}

/// Coherent ⊗ coherent input (the zero-addition limit): Poisson statistics in
/// both arms, `Var û = Var ŵ = n_a + n_b + (interference term)`, zero
/// covariance. At φ = 0 the sensitivity is `S = (n_a+n_b)/(2√(n_a n_b))`,
/// equal to 1 exactly at balance.
pub fn coherent_coherent_moments(
    phi: f64,
    alpha_a: Complex64,
    alpha_b: Complex64,
) -> Result<MomentSet> {
    let n_a = alpha_a.norm_sqr();
    let n_b = alpha_b.norm_sqr();
    let w_mean = 2.0 * (alpha_a.conj() * alpha_b).re;
    let u_var = n_a + n_b;
    let w_var = n_a + n_b + 2.0 * (alpha_a.conj().powi(2) * alpha_b.powi(2)).re + 2.0 * n_a * n_b
        - w_mean * w_mean;
    assemble(phi, n_a - n_b, w_mean, u_var, w_var, 0.0, n_a + n_b)
}

/// Closed-form moments for a configuration, when a closed form exists:
///
/// * vacuum ⊗ m additions — any m;
/// * coherent ⊗ 0 additions — coherent pair;
/// * coherent ⊗ 1 addition — the full interference forms.
///
/// Coherent ⊗ m ≥ 2 has no closed form here and returns
/// [`Error::NoClosedForm`]; use the brute-force road
/// ([`crate::fock::delta_phi_numeric`]) for those points.
pub fn moments(config: &InputConfig, phi: f64) -> Result<MomentSet> {
    moments_with(config, phi, VariancePath::default())
}

pub fn moments_with(config: &InputConfig, phi: f64, path: VariancePath) -> Result<MomentSet> {
    match (config.mode_a, config.additions.get()) {
        (ModeA::Vacuum, _) => vacuum_pacs_moments_with(phi, config.alpha_b, config.additions, path),
        (ModeA::Coherent(aa), 0) => coherent_coherent_moments(phi, aa, config.alpha_b),
        (ModeA::Coherent(aa), 1) => coherent_spacs_moments_with(phi, aa, config.alpha_b, path),
        (ModeA::Coherent(_), m) => Err(Error::NoClosedForm { m }),
    }
}

/// A measured deviation between a printed closed form and an independent
/// route to the same quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    /// Stable identifier, e.g. `ratio-form-variance`.
    pub id: String,
    /// One-line statement of what disagrees with what.
    pub summary: String,
    /// Largest absolute deviation observed.
    pub worst_abs_deviation: f64,
    /// Sample points / notes backing the number above.
    pub details: Vec<String>,
}

static PRINTED_FORM_CHECK: OnceLock<Vec<Discrepancy>> = OnceLock::new();

/// Cross-checks the closed forms above against the brute-force oracle and
/// reports what disagrees. Runs once per process (3×3×3 grid over
/// `α_a, α_b ∈ {0.5, 1.0, 1.5}`, `φ ∈ {0.4, 1.2, 2.1}`, cutoff 40) and
/// caches the outcome.
///
/// Two families are checked:
/// * the interference forms in [`coherent_spacs_moments`] term by term
///   (means, variances, covariance) — these agree to well under 1e-8 and
///   produce *no* entry;
/// * the ratio-form variance — it disagrees both with the oracle and with
///   its own zero-addition limit, and is reported under
///   `ratio-form-variance`.
pub fn printed_form_discrepancies() -> &'static [Discrepancy] {
    PRINTED_FORM_CHECK.get_or_init(|| {
        let mut found = Vec::new();
        let n_max = 40;
        let grid = [0.5, 1.0, 1.5];
        let phis = [0.4, 1.2, 2.1];

        // Interference closed forms vs oracle quadrature statistics.
        let mut worst_terms = 0.0f64;
        let mut term_details = Vec::new();
        let one = PolynomialOrder::new(1).expect("valid order");
        for &aa in &grid {
            for &ab in &grid {
                let alpha_a = Complex64::new(aa, 0.0);
                let alpha_b = Complex64::new(ab, 0.0);
                let config =
                    InputConfig::coherent_pacs(alpha_a, alpha_b, one).expect("finite amplitudes");
                let state = match crate::fock::build_input_state(&config, n_max) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let stats = match crate::fock::quadrature_stats(&state) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                let x = alpha_b.norm_sqr();
                let n_a = alpha_a.norm_sqr();
                let n_b = pacs_mean(alpha_b, one);
                let w_mean = 2.0 * (alpha_a.conj() * alpha_b).re * (2.0 + x) / (1.0 + x);
                let u_var = n_a + pacs_variance(alpha_b, one);
                let sq =
                    2.0 * (alpha_a.conj().powi(2) * alpha_b.powi(2)).re * (3.0 + x) / (1.0 + x);
                let w_var = n_a + (1.0 + 2.0 * n_a) * n_b + sq - w_mean * w_mean;
                let cov = 4.0 * (alpha_a.conj() * alpha_b).re * x / ((1.0 + x) * (1.0 + x));
                let gaps = [
                    ((n_a - n_b) - stats.u_mean).abs(),
                    (w_mean - stats.w_mean).abs(),
                    (u_var - stats.u_var).abs(),
                    (w_var - stats.w_var).abs(),
                    (cov - stats.cov_sym).abs(),
                ];
                for (name, gap) in ["u_mean", "w_mean", "u_var", "w_var", "cov_sym"]
                    .iter()
                    .zip(gaps)
                {
                    if gap > worst_terms {
                        worst_terms = gap;
                    }
                    if gap > 1e-8 {
                        term_details.push(format!("{name} off by {gap:.3e} at α_a={aa}, α_b={ab}"));
                    }
                }
                // Assembled moments across phases, for completeness.
                for &phi in &phis {
                    let cf = match coherent_spacs_moments(phi, alpha_a, alpha_b) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let oracle = match crate::fock::moments(&state, phi) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let gap = (cf.mean_nd - oracle.mean)
                        .abs()
                        .max((cf.var_nd - oracle.var).abs());
                    if gap > worst_terms {
                        worst_terms = gap;
                    }
                    if gap > 1e-8 {
                        term_details.push(format!(
                            "moments off by {gap:.3e} at α_a={aa}, α_b={ab}, φ={phi}"
                        ));
                    }
                }
            }
        }
        if !term_details.is_empty() {
            found.push(Discrepancy {
                id: "interference-closed-forms".to_string(),
                summary: "closed-form û/ŵ statistics deviate from the oracle".to_string(),
                worst_abs_deviation: worst_terms,
                details: term_details,
            });
        }

        // Ratio-form variance vs both the factorial route and the oracle.
        let mut worst_ratio = 0.0f64;
        let mut ratio_details = Vec::new();
        let one = PolynomialOrder::new(1).expect("valid order");
        for &ab in &grid {
            let alpha_b = Complex64::new(ab, 0.0);
            let ratio = pacs_variance_ratio_form(alpha_b, one);
            let exact = pacs_variance(alpha_b, one);
            let pacs = match crate::fock::pacs_state(alpha_b, one, n_max) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let oracle = pacs.var_n();
            let gap = (ratio - exact).abs().max((ratio - oracle).abs());
            if gap > worst_ratio {
                worst_ratio = gap;
            }
            ratio_details.push(format!(
                "m=1, x={:.4}: ratio form {ratio:.6} vs factorial {exact:.6} vs oracle {oracle:.6}",
                ab * ab
            ));
        }
        // Its own zero-addition limit: should be the Poisson variance x.
        let zero = PolynomialOrder::new(0).expect("valid order");
        let x0 = 2.25f64;
        let ratio_m0 = pacs_variance_ratio_form(Complex64::new(x0.sqrt(), 0.0), zero);
        let m0_gap = (ratio_m0 - x0).abs();
        if m0_gap > worst_ratio {
            worst_ratio = m0_gap;
        }
        ratio_details.push(format!(
            "m=0, x={x0}: ratio form gives {ratio_m0:.6} (x²+3x), Poisson value is {x0}"
        ));
        if worst_ratio > 1e-8 {
            found.push(Discrepancy {
                id: "ratio-form-variance".to_string(),
                summary: "ratio-form number variance disagrees with the factorial route, \
                          the oracle, and its own zero-addition limit"
                    .to_string(),
                worst_abs_deviation: worst_ratio,
                details: ratio_details,
            });
        }

        found
    })
}
