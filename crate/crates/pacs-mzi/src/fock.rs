//! Brute-force oracle on a truncated Fock space.
//!
//! States live on the number basis `|0⟩..|n_max⟩` (default cutoff 60, which
//! holds every norm deficit in this crate's parameter ranges far below the
//! `1e-12` construction tolerance). Nothing here knows any closed form: means,
//! variances and slopes come from sparse operator applications, so this module
//! is the independent road the `analytic` formulas are checked against.
//!
//! Two pictures of the interferometer are provided and must agree:
//!
//! * Heisenberg — [`nd_operator`] builds `n̂_d(φ) = cos φ·û + sin φ·ŵ` with
//!   `û = â†â − b̂†b̂`, `ŵ = â†b̂ + b̂†â`, applied to the *input* state;
//! * Schrödinger — [`apply_mzi`] maps the state through the mode transform
//!   `ê = A â + B b̂`, `f̂ = −B â + A b̂` (A = cos φ/2, B = sin φ/2); slot A of
//!   the output carries port `ê`, slot B carries port `f̂`, and the intensity
//!   difference is then `⟨n̂_A − n̂_B⟩`.

use num_complex::Complex64;

use crate::analytic::{InputConfig, ModeA, MomentSet};
use crate::specfun::{factorial, laguerre_raw, PolynomialOrder};
use crate::{Error, Result};

/// Default Fock cutoff.
pub const DEFAULT_N_MAX: usize = 60;

/// Largest supported cutoff: keeps `(2·n_max)!` representable in f64 inside
/// the beam-splitter expansion.
pub const MAX_N_MAX: usize = 84;

/// Norm deficit tolerated when *constructing* a state.
pub const TRUNCATION_TOL: f64 = 1e-12;

/// Norm deficit tolerated when *evaluating* expectations (construction plus
/// accumulated leakage from the mode transform).
pub const NORM_TOL: f64 = 1e-9;

/// Default central-difference step for the numeric slope.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

fn check_n_max(n_max: usize) -> Result<()> {
    if (1..=MAX_N_MAX).contains(&n_max) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "n_max = {n_max} outside supported range 1..={MAX_N_MAX}"
        )))
    }
}

/// Single-mode state as amplitudes on `|0⟩..|n_max⟩`, unit-normalized, with
/// the probability mass lost to the cutoff recorded as `norm_deficit`.
#[derive(Debug, Clone)]
pub struct FockVector {
    amps: Vec<Complex64>,
    deficit: f64,
}

impl FockVector {
    fn from_raw(mut amps: Vec<Complex64>, deficit: f64, context: &'static str) -> Result<Self> {
        let n_max = amps.len() - 1;
        if deficit > TRUNCATION_TOL {
            return Err(Error::Truncation {
                context,
                deficit,
                limit: TRUNCATION_TOL,
                n_max,
            });
        }
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut amps {
            *c /= norm;
        }
        Ok(FockVector {
            amps,
            deficit: deficit.max(0.0),
        })
    }

    pub fn vacuum(n_max: usize) -> Result<Self> {
        Self::fock(0, n_max)
    }

    /// Number state `|n⟩`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        check_n_max(n_max)?;
        if n > n_max {
            return Err(Error::domain(format!(
                "fock: n = {n} exceeds n_max = {n_max}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; n_max + 1];
        amps[n] = Complex64::ONE;
        Ok(FockVector { amps, deficit: 0.0 })
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_deficit(&self) -> f64 {
        self.deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨n̂⟩
    pub fn mean_n(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// ⟨n̂²⟩
    pub fn mean_n_sq(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| (n as f64).powi(2) * c.norm_sqr())
            .sum()
    }

    /// Var(n̂)
    pub fn var_n(&self) -> f64 {
        (self.mean_n_sq() - self.mean_n().powi(2)).max(0.0)
    }

    /// ⟨b̂⟩ = Σ_n √(n+1) c_n* c_{n+1}
    pub fn exp_lower(&self) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for n in 0..self.n_max() {
            acc += self.amps[n].conj() * self.amps[n + 1] * ((n + 1) as f64).sqrt();
        }
        acc
    }

    /// ⟨b̂²⟩
    pub fn exp_lower_sq(&self) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for n in 0..self.n_max().saturating_sub(1) {
            let w = (((n + 1) * (n + 2)) as f64).sqrt();
            acc += self.amps[n].conj() * self.amps[n + 2] * w;
        }
        acc
    }

    /// ⟨b̂ n̂⟩ (lowering after the number operator)
    pub fn exp_lower_n(&self) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for n in 0..self.n_max() {
            let w = ((n + 1) as f64).sqrt() * (n + 1) as f64;
            acc += self.amps[n].conj() * self.amps[n + 1] * w;
        }
        acc
    }
}

/// Coherent state `|α⟩` with `c_n = e^{−|α|²/2} αⁿ/√(n!)`, built iteratively.
///
/// Rejects `|α|² > 0.4·n_max` outright and any construction whose truncated
/// tail exceeds [`TRUNCATION_TOL`]; the error carries the achieved deficit.
pub fn coherent_state(alpha: Complex64, n_max: usize) -> Result<FockVector> {
    check_n_max(n_max)?;
    let x = alpha.norm_sqr();
    let budget = 0.4 * n_max as f64;
    if x > budget {
        return Err(Error::Truncation {
            context: "coherent_state: |α|² over the cutoff budget 0.4·n_max",
            deficit: x,
            limit: budget,
            n_max,
        });
    }
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new((-0.5 * x).exp(), 0.0);
    amps.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    FockVector::from_raw(amps, 1.0 - captured, "coherent_state norm deficit")
}

/// Photon-added coherent state `b̂†^m|α⟩ / √(m!·L_m(−|α|²))`.
///
/// The raising ladder is applied on the truncated vector and the resulting
/// pre-normalization squared norm is checked against the closed-form
/// `m!·L_m(−|α|²)` to a relative `1e-10`; a larger gap means the cutoff
/// clipped the added-photon tail and is reported as a truncation error.
pub fn pacs_state(alpha: Complex64, m: PolynomialOrder, n_max: usize) -> Result<FockVector> {
    check_n_max(n_max)?;
    let x = alpha.norm_sqr();
    let m_int = m.get() as usize;
    let budget = 0.4 * n_max as f64;
    if x + m_int as f64 > budget {
        return Err(Error::Truncation {
            context: "pacs_state: |α|² + m over the cutoff budget 0.4·n_max",
            deficit: x + m_int as f64,
            limit: budget,
            n_max,
        });
    }
    let coh = coherent_state(alpha, n_max)?;
    let mut amps = coh.amps;
    for _ in 0..m_int {
        // (b̂† ψ)_n = √n ψ_{n−1}; the top component falls off the cutoff.
        for n in (1..amps.len()).rev() {
            amps[n] = amps[n - 1] * (n as f64).sqrt();
        }
        amps[0] = Complex64::ZERO;
    }
    let pre_norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let expected = factorial(m.get()) * laguerre_raw(m.get(), -x);
    let rel_gap = (pre_norm_sq / expected - 1.0).abs();
    if rel_gap > 1e-10 {
        return Err(Error::Truncation {
            context: "pacs_state: ladder norm differs from m!·L_m(−|α|²)",
            deficit: rel_gap,
            limit: 1e-10,
            n_max,
        });
    }
    FockVector::from_raw(amps, coh.deficit + rel_gap, "pacs_state norm deficit")
}

/// Tensor slot of a [`TwoModeState`]. After [`apply_mzi`], slot A carries
/// output port `ê` and slot B carries port `f̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Two-mode pure state as a row-major `(n_max+1)²` amplitude block;
/// `amp(j, k)` is the coefficient of `|j⟩_A ⊗ |k⟩_B`.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    amps: Vec<Complex64>,
    n_max: usize,
    deficit: f64,
}

impl TwoModeState {
    pub fn product(a: &FockVector, b: &FockVector) -> Result<Self> {
        if a.n_max() != b.n_max() {
            return Err(Error::domain(format!(
                "product: mismatched cutoffs {} vs {}",
                a.n_max(),
                b.n_max()
            )));
        }
        let n_max = a.n_max();
        let dim = n_max + 1;
        let mut amps = vec![Complex64::ZERO; dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                amps[j * dim + k] = a.amps[j] * b.amps[k];
            }
        }
        Ok(TwoModeState {
            amps,
            n_max,
            deficit: a.deficit + b.deficit,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn amp(&self, j: usize, k: usize) -> Complex64 {
        self.amps[j * self.dim() + k]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_deficit(&self) -> f64 {
        self.deficit
    }

    /// ⟨n̂⟩ of one slot.
    pub fn mean_n(&self, which: Mode) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for j in 0..dim {
            for k in 0..dim {
                let n = match which {
                    Mode::A => j,
                    Mode::B => k,
                } as f64;
                acc += n * self.amps[j * dim + k].norm_sqr();
            }
        }
        acc
    }

    /// Total mean photon number ⟨n̂_A + n̂_B⟩.
    pub fn total_mean_n(&self) -> f64 {
        self.mean_n(Mode::A) + self.mean_n(Mode::B)
    }

    fn check_norm(&self) -> Result<()> {
        let deficit = (1.0 - self.norm_sqr()).max(self.deficit);
        if deficit > NORM_TOL {
            return Err(Error::Truncation {
                context: "two-mode state norm deficit",
                deficit,
                limit: NORM_TOL,
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &TwoModeState) -> f64 {
        let dot: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        dot.norm_sqr()
    }
}

/// Sparse Hermitian operator on the two-mode truncated space, stored as
/// coordinate triplets over flattened indices `j·(n_max+1)+k`.
#[derive(Debug, Clone)]
pub struct TwoModeOperator {
    n_max: usize,
    entries: Vec<(u32, u32, f64)>,
    hermitian: bool,
}

impl TwoModeOperator {
    fn idx(n_max: usize, j: usize, k: usize) -> u32 {
        (j * (n_max + 1) + k) as u32
    }

    /// û = â†â − b̂†b̂ (diagonal).
    pub fn number_difference(n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut entries = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for k in 0..dim {
                let v = j as f64 - k as f64;
                if v != 0.0 {
                    let i = Self::idx(n_max, j, k);
                    entries.push((i, i, v));
                }
            }
        }
        TwoModeOperator {
            n_max,
            entries,
            hermitian: true,
        }
    }

    /// ŵ = â†b̂ + b̂†â.
    pub fn cross_mode(n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut entries = Vec::new();
        for j in 0..dim {
            for k in 0..dim {
                let col = Self::idx(n_max, j, k);
                // â†b̂ |j,k⟩ = √((j+1)k) |j+1, k−1⟩
                if j + 1 < dim && k >= 1 {
                    let v = (((j + 1) * k) as f64).sqrt();
                    entries.push((Self::idx(n_max, j + 1, k - 1), col, v));
                }
                // b̂†â |j,k⟩ = √(j(k+1)) |j−1, k+1⟩
                if j >= 1 && k + 1 < dim {
                    let v = ((j * (k + 1)) as f64).sqrt();
                    entries.push((Self::idx(n_max, j - 1, k + 1), col, v));
                }
            }
        }
        TwoModeOperator {
            n_max,
            entries,
            hermitian: true,
        }
    }

    /// Total photon number n̂_A + n̂_B (diagonal); û and ŵ both commute with it.
    pub fn total_number(n_max: usize) -> Self {
        let dim = n_max + 1;
        let mut entries = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for k in 0..dim {
                let v = (j + k) as f64;
                if v != 0.0 {
                    let i = Self::idx(n_max, j, k);
                    entries.push((i, i, v));
                }
            }
        }
        TwoModeOperator {
            n_max,
            entries,
            hermitian: true,
        }
    }

    /// Scaled sum `ca·self + cb·other`, dropping exactly-zero coefficients.
    fn combine(ca: f64, a: &Self, cb: f64, b: &Self) -> Self {
        assert_eq!(a.n_max, b.n_max);
        let mut entries = Vec::new();
        if ca != 0.0 {
            entries.extend(a.entries.iter().map(|&(r, c, v)| (r, c, ca * v)));
        }
        if cb != 0.0 {
            entries.extend(b.entries.iter().map(|&(r, c, v)| (r, c, cb * v)));
        }
        TwoModeOperator {
            n_max: a.n_max,
            entries,
            hermitian: a.hermitian && b.hermitian,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Sorted, duplicate-merged triplets; the canonical form used by equality
    /// checks in tests.
    pub fn canonical_entries(&self) -> Vec<(u32, u32, f64)> {
        let mut entries = self.entries.clone();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != 0.0);
        merged
    }

    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; amps.len()];
        for &(r, c, v) in &self.entries {
            out[r as usize] += amps[c as usize] * v;
        }
        out
    }

    /// ⟨ψ|Ô|ψ⟩ (real part; exact for Hermitian Ô).
    pub fn expectation(&self, state: &TwoModeState) -> f64 {
        let y = self.apply(&state.amps);
        dot(&state.amps, &y).re
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The measured observable `n̂_d(φ) = cos φ·û + sin φ·ŵ`.
pub fn nd_operator(phi: f64, n_max: usize) -> TwoModeOperator {
    TwoModeOperator::combine(
        phi.cos(),
        &TwoModeOperator::number_difference(n_max),
        phi.sin(),
        &TwoModeOperator::cross_mode(n_max),
    )
}

/// First and second moments of the intensity difference on a state.
#[derive(Debug, Clone, Copy)]
pub struct NdMoments {
    pub mean: f64,
    pub var: f64,
}

/// ⟨n̂_d(φ)⟩ and Var(n̂_d(φ)) by direct operator application.
pub fn moments(state: &TwoModeState, phi: f64) -> Result<NdMoments> {
    state.check_norm()?;
    let op = nd_operator(phi, state.n_max);
    let y = op.apply(&state.amps);
    let mean = dot(&state.amps, &y).re;
    let second = dot(&y, &y).re; // ⟨Ô²⟩ = ‖Ôψ‖² for Hermitian Ô
    Ok(NdMoments {
        mean,
        var: (second - mean * mean).max(0.0),
    })
}

/// Oracle expectations of û and ŵ on a state: means, variances and the
/// symmetrized covariance `⟨ΔûΔŵ + ΔŵΔû⟩`. These are the per-term quantities
/// the closed-form variance pieces are validated against.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureStats {
    pub u_mean: f64,
    pub u_var: f64,
    pub w_mean: f64,
    pub w_var: f64,
    pub cov_sym: f64,
}

pub fn quadrature_stats(state: &TwoModeState) -> Result<QuadratureStats> {
    state.check_norm()?;
    let yu = TwoModeOperator::number_difference(state.n_max).apply(&state.amps);
    let yw = TwoModeOperator::cross_mode(state.n_max).apply(&state.amps);
    let u_mean = dot(&state.amps, &yu).re;
    let w_mean = dot(&state.amps, &yw).re;
    let u_var = (dot(&yu, &yu).re - u_mean * u_mean).max(0.0);
    let w_var = (dot(&yw, &yw).re - w_mean * w_mean).max(0.0);
    // ⟨ûŵ + ŵû⟩ = 2·Re⟨ûψ|ŵψ⟩ for Hermitian û, ŵ.
    let cov_sym = 2.0 * dot(&yu, &yw).re - 2.0 * u_mean * w_mean;
    Ok(QuadratureStats {
        u_mean,
        u_var,
        w_mean,
        w_var,
        cov_sym,
    })
}

/// Var(n̂_d) assembled from [`QuadratureStats`]:
/// `cos²φ·Var û + sin²φ·Var ŵ + sin φ cos φ·⟨ΔûΔŵ+ΔŵΔû⟩`.
pub fn assemble_variance(stats: &QuadratureStats, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    c * c * stats.u_var + s * s * stats.w_var + s * c * stats.cov_sym
}

/// Builds the two-mode input state described by a config.
pub fn build_input_state(config: &InputConfig, n_max: usize) -> Result<TwoModeState> {
    let a = match config.mode_a {
        ModeA::Vacuum => FockVector::vacuum(n_max)?,
        ModeA::Coherent(alpha) => coherent_state(alpha, n_max)?,
    };
    let b = pacs_state(config.alpha_b, config.additions, n_max)?;
    TwoModeState::product(&a, &b)
}

/// Full numeric sensitivity at one operating point: variance from the
/// operator, slope from central differences `[⟨n̂_d⟩(φ+h) − ⟨n̂_d⟩(φ−h)]/2h`.
///
/// `h` must lie in `[1e-8, 1e-3]`; the default [`DEFAULT_FD_STEP`] balances
/// truncation against cancellation for the trigonometric mean.
pub fn delta_phi_numeric(
    config: &InputConfig,
    phi: f64,
    h: f64,
    n_max: usize,
) -> Result<MomentSet> {
    if !(1e-8..=1e-3).contains(&h) {
        return Err(Error::domain(format!(
            "delta_phi_numeric: step h = {h:e} outside [1e-8, 1e-3]"
        )));
    }
    let state = build_input_state(config, n_max)?;
    let at = moments(&state, phi)?;
    let plus = moments(&state, phi + h)?;
    let minus = moments(&state, phi - h)?;
    let slope = (plus.mean - minus.mean) / (2.0 * h);
    MomentSet::from_parts(at.mean, at.var, slope, state.total_mean_n())
}

/// Schrödinger-picture pass through the interferometer: each basis ket
/// `|j,k⟩` maps to `(A â† − B b̂†)^j (B â† + A b̂†)^k |0,0⟩ / √(j!k!)`,
/// expanded binomially. Population leaking past the cutoff (total ket order
/// above `n_max` in one slot) is added to the norm deficit and must stay
/// below [`NORM_TOL`].
pub fn apply_mzi(state: &TwoModeState, phi: f64) -> Result<TwoModeState> {
    let n_max = state.n_max;
    let dim = n_max + 1;
    let a = (phi / 2.0).cos();
    let b = (phi / 2.0).sin();

    // Power and factorial tables for the binomial expansion.
    let sqrt_fact: Vec<f64> = (0..=2 * n_max as u32)
        .map(|n| factorial(n).sqrt())
        .collect();
    let mut pow_a = vec![1.0; dim];
    let mut pow_b = vec![1.0; dim];
    let mut pow_nb = vec![1.0; dim]; // (−B)^i
    for i in 1..dim {
        pow_a[i] = pow_a[i - 1] * a;
        pow_b[i] = pow_b[i - 1] * b;
        pow_nb[i] = pow_nb[i - 1] * (-b);
    }
    let mut pascal = vec![vec![0.0; dim]; dim];
    for (n, row) in pascal.iter_mut().enumerate() {
        row[0] = 1.0;
        for k in 1..=n {
            row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
        }
    }

    let mut out = vec![Complex64::ZERO; dim * dim];
    for j in 0..dim {
        for k in 0..dim {
            let c = state.amps[j * dim + k];
            if c == Complex64::ZERO {
                continue;
            }
            let scale = c / (sqrt_fact[j] * sqrt_fact[k]);
            for p in 0..=j {
                let wj = pascal[j][p] * pow_a[p] * pow_nb[j - p];
                for q in 0..=k {
                    let n1 = p + q;
                    let n2 = j + k - n1;
                    if n1 >= dim || n2 >= dim {
                        continue; // leaks past the cutoff; tracked via the norm
                    }
                    let wk = pascal[k][q] * pow_b[q] * pow_a[k - q];
                    out[n1 * dim + n2] += scale * wj * wk * sqrt_fact[n1] * sqrt_fact[n2];
                }
            }
        }
    }

    let out_norm = out.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let leakage = (state.norm_sqr() - out_norm).max(0.0);
    let deficit = state.deficit + leakage;
    if deficit > NORM_TOL {
        return Err(Error::Truncation {
            context: "apply_mzi: leakage past the cutoff",
            deficit,
            limit: NORM_TOL,
            n_max,
        });
    }
    Ok(TwoModeState {
        amps: out,
        n_max,
        deficit,
    })
}

/// Single-mode density matrix, validated on construction: Hermitian to
/// `1e-12`, unit trace to [`NORM_TOL`], eigenvalues ≥ −1e-10.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(elems: Vec<Complex64>, dim: usize) -> Result<Self> {
        if elems.len() != dim * dim || dim == 0 {
            return Err(Error::domain("density matrix: shape mismatch"));
        }
        let rho = DensityMatrix { dim, elems };
        for i in 0..dim {
            for j in i..dim {
                let gap = (rho.element(i, j) - rho.element(j, i).conj()).norm();
                if gap > 1e-12 {
                    return Err(Error::domain(format!(
                        "density matrix: non-Hermitian by {gap:.2e} at ({i},{j})"
                    )));
                }
            }
        }
        let trace_gap = (rho.trace() - 1.0).abs();
        if trace_gap > NORM_TOL {
            return Err(Error::Truncation {
                context: "density matrix trace gap",
                deficit: trace_gap,
                limit: NORM_TOL,
                n_max: dim - 1,
            });
        }
        let lambda_min = rho.min_eigenvalue();
        if lambda_min < -1e-10 {
            return Err(Error::domain(format!(
                "density matrix: negative eigenvalue {lambda_min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Pure-state projector |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &FockVector) -> Result<Self> {
        let dim = psi.n_max() + 1;
        let mut elems = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                elems[i * dim + j] = psi.amps[i] * psi.amps[j].conj();
            }
        }
        Self::new(elems, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.elems[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.element(i, i).re).sum()
    }

    /// Tr ρ² — 1 for pure states, < 1 for mixed.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self.element(i, j) * self.element(j, i)).re;
            }
        }
        acc
    }

    /// ⟨n̂⟩ = Σ n ρ_nn
    pub fn mean_n(&self) -> f64 {
        (0..self.dim)
            .map(|n| n as f64 * self.element(n, n).re)
            .sum()
    }

    /// Diagonal probability mass at and above a row index.
    pub fn tail_mass(&self, from: usize) -> f64 {
        (from..self.dim).map(|n| self.element(n, n).re).sum()
    }

    /// Smallest eigenvalue, via the real symmetric embedding
    /// `[[Re ρ, −Im ρ], [Im ρ, Re ρ]]` whose spectrum is ρ's doubled.
    fn min_eigenvalue(&self) -> f64 {
        let n = self.dim;
        let mut m = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let e = self.element(i, j);
                m[(i, j)] = e.re;
                m[(i + n, j + n)] = e.re;
                m[(i, j + n)] = -e.im;
                m[(i + n, j)] = e.im;
            }
        }
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }
}

/// Partial trace of a two-mode pure state onto one slot.
pub fn reduce_mode(state: &TwoModeState, which: Mode) -> Result<DensityMatrix> {
    state.check_norm()?;
    let dim = state.dim();
    let mut elems = vec![Complex64::ZERO; dim * dim];
    match which {
        Mode::A => {
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = Complex64::ZERO;
                    for k in 0..dim {
                        acc += state.amp(i, k) * state.amp(j, k).conj();
                    }
                    elems[i * dim + j] = acc;
                }
            }
        }
        Mode::B => {
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = Complex64::ZERO;
                    for k in 0..dim {
                        acc += state.amp(k, i) * state.amp(k, j).conj();
                    }
                    elems[i * dim + j] = acc;
                }
            }
        }
    }
    DensityMatrix::new(elems, dim)
}

/// Matrix elements `⟨j|D(β)|n⟩` of the displacement operator on the truncated
/// basis, row-major `(n_max+1)²`:
///
/// * j ≥ n: `√(n!/j!) β^{j−n} e^{−|β|²/2} L_n^{(j−n)}(|β|²)`
/// * j < n: `√(j!/n!) (−β*)^{n−j} e^{−|β|²/2} L_j^{(n−j)}(|β|²)`
pub fn displacement_matrix(beta: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; (n_max + 1) * (n_max + 1)];
    displacement_matrix_into(beta, n_max, &mut out);
    out
}

/// In-place variant for hot loops (Wigner grids reuse one buffer per row).
pub fn displacement_matrix_into(beta: Complex64, n_max: usize, out: &mut [Complex64]) {
    let dim = n_max + 1;
    assert_eq!(out.len(), dim * dim);
    let y = beta.norm_sqr();
    let gauss = (-0.5 * y).exp();
    for d in 0..=n_max as u32 {
        let col = crate::specfun::laguerre_assoc_column(d, y, n_max - d as usize);
        let pow_beta = beta.powu(d);
        let pow_nbc = (-beta.conj()).powu(d);
        for (i, &lag) in col.iter().enumerate() {
            let j = i + d as usize;
            let ratio = (factorial(i as u32) / factorial(j as u32)).sqrt();
            let common = ratio * gauss * lag;
            out[j * dim + i] = pow_beta * common;
            out[i * dim + j] = pow_nbc * common;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SensitivityStatus;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn m(v: u32) -> PolynomialOrder {
        PolynomialOrder::new(v).unwrap()
    }

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let v = coherent_state(Complex64::ZERO, 20).unwrap();
        assert_eq!(v.amplitudes()[0], Complex64::ONE);
        assert!(v.amplitudes()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coherent_moments_match_poisson() {
        let v = coherent_state(re(1.5), 60).unwrap();
        assert!((v.mean_n() - 2.25).abs() < 1e-12);
        assert!((v.var_n() - 2.25).abs() < 1e-12);
        assert!(v.norm_deficit() <= TRUNCATION_TOL);
    }

    #[test]
    fn coherent_rejects_oversized_amplitude() {
        // |α|² = 25 > 0.4·60
        let err = coherent_state(re(5.0), 60).unwrap_err();
        assert!(err.is_truncation());
    }

    #[test]
    fn pacs_zero_amplitude_is_fock_state() {
        let v = pacs_state(Complex64::ZERO, m(1), 30).unwrap();
        assert!((v.amplitudes()[1].norm() - 1.0).abs() < 1e-14);
        let v4 = pacs_state(Complex64::ZERO, m(4), 30).unwrap();
        assert!((v4.amplitudes()[4].norm() - 1.0).abs() < 1e-14);
        assert_eq!(v4.mean_n(), 4.0);
        assert_eq!(v4.var_n(), 0.0);
    }

    #[test]
    fn single_photon_added_moments() {
        // Independent derivation for m = 1, x = |α|² = 2.25:
        // ⟨n̂⟩ = E[(n+1)²]/E[n+1] over Poisson(x) = 12.8125/3.25,
        // ⟨n̂²⟩ = E[(n+1)³]/E[n+1] = 58.515625/3.25.
        let v = pacs_state(re(1.5), m(1), 60).unwrap();
        assert!((v.mean_n() - 3.942_307_692_307_692).abs() < 1e-9);
        assert!((v.var_n() - 2.463_017_751_479_29).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Pre-normalization squared norm of b̂†^m|α⟩ equals m!·L_m(−|α|²).
        /// (pacs_state enforces it to 1e-10; this drives the range.)
        #[test]
        fn pacs_ladder_norm_matches_laguerre(mm in 0u32..=5, mag in 0.0f64..2.0, ph in 0.0f64..std::f64::consts::TAU) {
            let alpha = Complex64::from_polar(mag, ph);
            prop_assert!(pacs_state(alpha, m(mm), 60).is_ok());
        }

        /// Photon statistics are phase-covariant: only |α| matters.
        #[test]
        fn pacs_statistics_phase_invariant(mag in 0.1f64..2.0, ph in 0.0f64..std::f64::consts::TAU) {
            let v0 = pacs_state(re(mag), m(1), 60).unwrap();
            let v1 = pacs_state(Complex64::from_polar(mag, ph), m(1), 60).unwrap();
            prop_assert!((v0.mean_n() - v1.mean_n()).abs() < 1e-10);
            prop_assert!((v0.var_n() - v1.var_n()).abs() < 1e-10);
        }
    }

    #[test]
    fn nd_operator_at_zero_phase_is_number_difference() {
        let nd = nd_operator(0.0, 8);
        let u = TwoModeOperator::number_difference(8);
        assert_eq!(nd.canonical_entries(), u.canonical_entries());
    }

    #[test]
    fn nd_operator_at_quarter_turn_is_cross_mode() {
        // cos(π/2) in f64 is ~6e-17, not exactly zero, so compare entrywise.
        let nd = nd_operator(FRAC_PI_2, 8);
        let w = TwoModeOperator::cross_mode(8);
        let lhs = nd.canonical_entries();
        let rhs = w.canonical_entries();
        let mut map = std::collections::BTreeMap::new();
        for (r, c, v) in lhs {
            map.insert((r, c), v);
        }
        for (r, c, v) in rhs {
            let got = map.remove(&(r, c)).unwrap_or(0.0);
            assert!((got - v).abs() < 1e-13, "entry ({r},{c})");
        }
        for (_, v) in map {
            assert!(v.abs() < 1e-13);
        }
    }

    #[test]
    fn operators_commute_with_total_photon_number() {
        let n_max = 10;
        let n_op = TwoModeOperator::total_number(n_max);
        let dim = (n_max + 1) * (n_max + 1);
        // Deterministic pseudo-random test vector.
        let v: Vec<Complex64> = (0..dim)
            .map(|i| {
                Complex64::new(
                    ((i * 37 + 11) % 101) as f64 / 101.0,
                    ((i * 53 + 7) % 89) as f64 / 89.0,
                )
            })
            .collect();
        for op in [
            TwoModeOperator::number_difference(n_max),
            TwoModeOperator::cross_mode(n_max),
        ] {
            let on = op.apply(&n_op.apply(&v));
            let no = n_op.apply(&op.apply(&v));
            // Skip the top total-order shell, where the truncated ŵ clips.
            for j in 0..=n_max {
                for k in 0..=n_max {
                    if j + k >= n_max {
                        continue;
                    }
                    let i = j * (n_max + 1) + k;
                    assert!((on[i] - no[i]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cross_mode_expectation_on_coherent_pair() {
        let a = coherent_state(re(1.5), 40).unwrap();
        let b = coherent_state(re(1.0), 40).unwrap();
        let state = TwoModeState::product(&a, &b).unwrap();
        let got = moments(&state, FRAC_PI_2).unwrap();
        // ⟨n̂_d(π/2)⟩ = 2 Re{α_a* α_b} = 3, plus a ~1e-16·cos(π/2) û leak.
        assert!((got.mean - 3.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_pacs_mean_at_zero_phase() {
        let config = InputConfig::vacuum_pacs(re(1.5), m(1)).unwrap();
        let state = build_input_state(&config, 60).unwrap();
        let got = moments(&state, 0.0).unwrap();
        assert!((got.mean - (-3.942_307_692_307_692)).abs() < 1e-9);
    }

    #[test]
    fn coherent_pacs_variance_at_zero_phase() {
        // Var(û) = |α_a|² + Var(n̂_b) = 2.25 + 2.463017751479…
        let config = InputConfig::coherent_pacs(re(1.5), re(1.5), m(1)).unwrap();
        let state = build_input_state(&config, 60).unwrap();
        let got = moments(&state, 0.0).unwrap();
        assert!((got.var - 4.713_017_751_479_29).abs() < 1e-9);
    }

    #[test]
    fn moments_match_quadrature_assembly_on_phase_grid() {
        // Var from moments() vs the three-term assembly, 50 phases, 1e-10.
        let config = InputConfig::coherent_pacs(re(1.3), re(0.9), m(1)).unwrap();
        let state = build_input_state(&config, 60).unwrap();
        let stats = quadrature_stats(&state).unwrap();
        for i in 0..50 {
            let phi = -PI + 2.0 * PI * (i as f64 + 0.5) / 50.0;
            let direct = moments(&state, phi).unwrap();
            let mean_structural = stats.u_mean * phi.cos() + stats.w_mean * phi.sin();
            assert!((direct.mean - mean_structural).abs() < 1e-10);
            assert!((direct.var - assemble_variance(&stats, phi)).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_matches_single_mode_contractions() {
        // ⟨n̂_d⟩ = (⟨n̂_a⟩−⟨n̂_b⟩)cos φ + 2Re⟨â†⟩⟨b̂⟩ sin φ on product states.
        let a = coherent_state(Complex64::new(0.8, 0.4), 50).unwrap();
        let b = pacs_state(Complex64::new(1.1, -0.2), m(2), 50).unwrap();
        let state = TwoModeState::product(&a, &b).unwrap();
        for i in 0..25 {
            let phi = 0.13 + i as f64 * 0.24;
            let direct = moments(&state, phi).unwrap();
            let structural = (a.mean_n() - b.mean_n()) * phi.cos()
                + 2.0 * (a.exp_lower().conj() * b.exp_lower()).re * phi.sin();
            assert!((direct.mean - structural).abs() < 1e-10);
        }
    }

    #[test]
    fn spacs_single_mode_contractions_match_closed_forms() {
        // ⟨b̂⟩ = α(2+x)/(1+x), ⟨b̂²⟩ = α²(3+x)/(1+x), ⟨b̂n̂⟩ = α(x+4) (derived
        // by normal-ordering through b̂†…b̂ sandwiches over Poisson moments).
        let alpha = Complex64::new(1.2, 0.5);
        let x = alpha.norm_sqr();
        let v = pacs_state(alpha, m(1), 60).unwrap();
        let b_exp = alpha * (2.0 + x) / (1.0 + x);
        let b2_exp = alpha * alpha * (3.0 + x) / (1.0 + x);
        let bn_exp = alpha * (x + 4.0);
        assert!((v.exp_lower() - b_exp).norm() < 1e-10);
        assert!((v.exp_lower_sq() - b2_exp).norm() < 1e-10);
        assert!((v.exp_lower_n() - bn_exp).norm() < 1e-10);
    }

    #[test]
    fn delta_phi_vacuum_pacs_reaches_shot_noise_at_quarter_turn() {
        let config = InputConfig::vacuum_pacs(re(1.5), m(1)).unwrap();
        let ms = delta_phi_numeric(&config, FRAC_PI_2, DEFAULT_FD_STEP, 60).unwrap();
        assert_eq!(ms.status, SensitivityStatus::Ok);
        assert!((ms.s_sql - 1.0).abs() < 1e-6);
    }

    #[test]
    fn delta_phi_balanced_coherent_reaches_shot_noise_at_zero() {
        let config = InputConfig::coherent_pacs(re(1.5), re(1.5), m(0)).unwrap();
        let ms = delta_phi_numeric(&config, 0.0, DEFAULT_FD_STEP, 60).unwrap();
        assert!((ms.s_sql - 1.0).abs() < 1e-6);
    }

    #[test]
    fn delta_phi_sub_shot_noise_operating_point() {
        let config = InputConfig::coherent_pacs(re(1.5), re(1.1713), m(1)).unwrap();
        let ms = delta_phi_numeric(&config, 0.0, DEFAULT_FD_STEP, 60).unwrap();
        assert!((ms.s_sql - 0.90).abs() < 0.01, "s = {}", ms.s_sql);
    }

    #[test]
    fn delta_phi_flags_divergent_slope() {
        // vacuum ⊗ PACS at φ = 0: slope = n̄_b·sin φ = 0.
        let config = InputConfig::vacuum_pacs(re(1.5), m(1)).unwrap();
        let ms = delta_phi_numeric(&config, 0.0, DEFAULT_FD_STEP, 60).unwrap();
        assert_eq!(ms.status, SensitivityStatus::Divergent);
        assert!(ms.delta_phi.is_infinite());
    }

    #[test]
    fn delta_phi_rejects_bad_step() {
        let config = InputConfig::vacuum_pacs(re(1.0), m(1)).unwrap();
        assert!(delta_phi_numeric(&config, 1.0, 1e-9, 40).is_err());
        assert!(delta_phi_numeric(&config, 1.0, 1e-2, 40).is_err());
    }

    #[test]
    fn mzi_maps_coherent_pair_to_coherent_pair() {
        let (aa, ab) = (Complex64::new(1.1, 0.3), Complex64::new(0.7, -0.5));
        let phi = 1.3;
        let a = coherent_state(aa, 50).unwrap();
        let b = coherent_state(ab, 50).unwrap();
        let input = TwoModeState::product(&a, &b).unwrap();
        let out = apply_mzi(&input, phi).unwrap();

        let (ca, cb) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let ea = coherent_state(aa * ca + ab * cb, 50).unwrap();
        let fb = coherent_state(-aa * cb + ab * ca, 50).unwrap();
        let expected = TwoModeState::product(&ea, &fb).unwrap();
        assert!(out.fidelity(&expected) >= 1.0 - 1e-10);
    }

    #[test]
    fn mzi_conserves_photon_number_and_norm() {
        let config = InputConfig::coherent_pacs(re(1.17), re(1.5), m(1)).unwrap();
        let input = build_input_state(&config, 60).unwrap();
        for phi in [0.0, 0.7, 2.515, 5.03] {
            let out = apply_mzi(&input, phi).unwrap();
            assert!((out.norm_sqr() - input.norm_sqr()).abs() < 1e-10);
            assert!((out.total_mean_n() - input.total_mean_n()).abs() < 1e-9);
        }
    }

    #[test]
    fn schroedinger_picture_matches_heisenberg_moments() {
        let config = InputConfig::coherent_pacs(re(1.17), re(1.5), m(1)).unwrap();
        let input = build_input_state(&config, 60).unwrap();
        for phi in [0.0, 0.4, 1.1, 2.0, 3.3, 5.03] {
            let heis = moments(&input, phi).unwrap();
            let out = apply_mzi(&input, phi).unwrap();
            let schro = out.mean_n(Mode::A) - out.mean_n(Mode::B);
            assert!((heis.mean - schro).abs() < 1e-9, "phi = {phi}");
        }
    }

    #[test]
    fn mzi_at_zero_phase_is_identity_on_slots() {
        let config = InputConfig::coherent_pacs(re(0.9), re(1.2), m(1)).unwrap();
        let input = build_input_state(&config, 40).unwrap();
        let out = apply_mzi(&input, 0.0).unwrap();
        assert!(out.fidelity(&input) >= 1.0 - 1e-12);
    }

    #[test]
    fn reduce_mode_of_product_state_is_pure() {
        let a = coherent_state(re(1.0), 40).unwrap();
        let b = pacs_state(re(1.5), m(1), 40).unwrap();
        let state = TwoModeState::product(&a, &b).unwrap();
        let rho_b = reduce_mode(&state, Mode::B).unwrap();
        assert!((rho_b.purity() - 1.0).abs() < 1e-10);
        assert!((rho_b.mean_n() - b.mean_n()).abs() < 1e-10);
    }

    #[test]
    fn reduce_mode_after_mixing_loses_purity() {
        let config = InputConfig::coherent_pacs(re(1.17), re(1.5), m(1)).unwrap();
        let input = build_input_state(&config, 60).unwrap();
        let out = apply_mzi(&input, 5.03).unwrap();
        let rho = reduce_mode(&out, Mode::B).unwrap();
        assert!(rho.purity() < 0.999);
        assert!((rho.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // Non-Hermitian.
        let mut elems = vec![Complex64::ZERO; 4];
        elems[1] = Complex64::new(0.5, 0.0);
        elems[0] = Complex64::ONE;
        assert!(DensityMatrix::new(elems, 2).is_err());
        // Wrong trace.
        let elems = vec![
            Complex64::new(0.7, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(0.7, 0.0),
        ];
        assert!(DensityMatrix::new(elems, 2).is_err());
        // Negative eigenvalue: diag(1.5, −0.5).
        let elems = vec![
            Complex64::new(1.5, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-0.5, 0.0),
        ];
        assert!(DensityMatrix::new(elems, 2).is_err());
    }

    #[test]
    fn displacement_first_column_is_coherent_state() {
        let beta = Complex64::new(0.9, -0.4);
        let n_max = 40;
        let d = displacement_matrix(beta, n_max);
        let coh = coherent_state(beta, n_max).unwrap();
        for j in 0..=n_max {
            assert!((d[j * (n_max + 1)] - coh.amplitudes()[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn displacement_columns_orthonormal_away_from_cutoff() {
        let beta = Complex64::new(0.8, 0.5);
        let n_max = 40;
        let dim = n_max + 1;
        let d = displacement_matrix(beta, n_max);
        for n in 0..10 {
            for np in 0..10 {
                let mut acc = Complex64::ZERO;
                for j in 0..dim {
                    acc += d[j * dim + n].conj() * d[j * dim + np];
                }
                let expect = if n == np { 1.0 } else { 0.0 };
                assert!((acc - expect).norm() < 1e-10, "({n},{np})");
            }
        }
    }
}
