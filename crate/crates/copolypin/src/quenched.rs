//! Exact finite-volume partition sums and quenched estimation.
//!
//! The constrained partition sum decomposes over renewal epochs, so
//! `Z_k = sum_{j<k} Z_j * w(j, k]` with one excursion weight per gap. The
//! weight splits into two exponential channels (the excursion above or
//! below the interface), which lets the quadratic-time recursion run in a
//! scaled linear domain: each channel keeps `Z_j` divided by a running
//! power of `e` chosen so that entries never overflow, and only the final
//! per-site combination returns to logs. This is algebraically identical
//! to a running-max log-sum-exp over the incoming terms, but costs one
//! multiply-add per term instead of an `exp`.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::annealed;
use crate::disorder::{self, DisorderLaw, DisorderSample};
use crate::excursion::ExcursionLaw;
use crate::model::{HamiltonianMode, ModelParams};
use crate::numeric::{ln_half_one_plus_exp, logaddexp, CompensatedSum};
use crate::rng::stream_rng;

/// Failures of the quenched estimators.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum QuenchedError {
    /// The excursion law puts no mass on any gap up to the sample length,
    /// so no admissible path exists.
    #[error("excursion law has no mass on any gap up to {n}")]
    UnsupportedGap {
        /// Sample length that could not be reached.
        n: usize,
    },
    /// Exhaustive enumeration is exponential in the sample length.
    #[error("enumeration is limited to n <= {max}, got {n}")]
    TooLarge {
        /// Requested length.
        n: usize,
        /// Enumeration limit.
        max: usize,
    },
    /// The localization bisection found the system delocalized already at
    /// the smallest probed bias.
    #[error("delocalized at the smallest probed bias; no bisection bracket")]
    NoBracket,
}

const ENUM_MAX: usize = 22;

/// Rescale a linear channel once its leading exponent outruns the stored
/// scale by this much; entries further than ~745 below the scale underflow
/// to zero, which is harmless because their relative contribution is below
/// `e^{-700}` of the dominant one.
const RESCALE_SHIFT: f64 = 600.0;

/// Log partition-sum table for one disorder sample.
///
/// `logz()[k]` is the log of the constrained sum over paths returning to
/// the interface exactly at time `k`; `logz()[0] = 0`. The table owns
/// copies of everything needed to resample paths from it.
#[derive(Clone, Debug)]
pub struct LogPartitionTable {
    logz: Vec<f64>,
    mode: HamiltonianMode,
    params: ModelParams,
    sample: DisorderSample,
    rho_tab: Vec<f64>,
}

impl LogPartitionTable {
    /// Log partition sums by endpoint, `0..=n`.
    pub fn logz(&self) -> &[f64] {
        &self.logz
    }

    /// Sample length.
    pub fn n(&self) -> usize {
        self.logz.len() - 1
    }

    /// Hamiltonian mode the table was built in.
    pub fn mode(&self) -> HamiltonianMode {
        self.mode
    }

    /// Model parameters the table was built with.
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Disorder sample the table was built from.
    pub fn sample(&self) -> &DisorderSample {
        &self.sample
    }

    /// `log Z_n`, the value at the constrained endpoint.
    pub fn log_partition(&self) -> f64 {
        *self.logz.last().expect("table is never empty")
    }
}

/// Sampled return structure of one path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSample {
    /// Strictly increasing return times, ending at `n`.
    pub return_times: Vec<usize>,
    /// Per-excursion sign: `+1` above the interface, `-1` below.
    pub excursion_signs: Vec<i8>,
    /// Number of returns (length of `return_times`).
    pub m_n: usize,
}

/// Replica estimate of the quenched excess free energy.
#[derive(Clone, Debug)]
pub struct QuenchedEstimate {
    /// Volumes at which the running estimate was recorded.
    pub n_grid: Vec<usize>,
    /// Replica mean of `(1/m) log Z_m` per grid volume.
    pub means: Vec<f64>,
    /// Jackknife standard error per grid volume.
    pub stderrs: Vec<f64>,
    /// Estimate at the largest volume.
    pub estimate: f64,
    /// Standard error at the largest volume.
    pub stderr: f64,
    /// Intercept of a least-squares fit of the means against `1/m`,
    /// reported alongside the raw estimate, never in place of it.
    pub extrapolated: f64,
    /// Number of disorder replicas.
    pub replicas: usize,
    /// Base seed (replica `r` uses stream `r`).
    pub seed: u64,
}

/// Quenched-measure return-count statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnStatistics {
    /// Mean number of returns `E[M_n]`.
    pub mean: f64,
    /// Variance of the number of returns.
    pub variance: f64,
}

/// Result of a pseudo-critical bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PseudoCritical {
    /// The transition was bracketed; `estimate` is the bracket midpoint and
    /// `ci` the final bracket, an estimator resolution, not a rigorous
    /// confidence interval.
    Bracketed {
        /// Bracket midpoint.
        estimate: f64,
        /// Final bisection bracket.
        ci: (f64, f64),
    },
    /// Localized at every probed bias; the critical value, if finite,
    /// exceeds the probe ceiling.
    Unbounded {
        /// Largest bias probed.
        probed_up_to: f64,
    },
}

struct DpOutput {
    logz: Vec<f64>,
    moments: Option<(Vec<f64>, Vec<f64>)>,
}

/// Core renewal recursion over two exponential channels.
///
/// `z[k] = (1/2) e^{bar[k]} sum_{j<k} z[j] rho(k-j)
///         (e^{phi[k]-phi[j]} + e^{psi[k]-psi[j]})`.
///
/// Channel entries are stored as `z[j] e^{-phi[j] - ca}` (and likewise for
/// `psi`, `cb`), with `ca`, `cb` the running maxima of the corresponding
/// exponents. When `with_moments` is set the recursion also carries the
/// first two moments of the return count under the normalized measure;
/// normalized moments stay O(n), so they need no rescaling of their own.
fn dp_engine(rho_tab: &[f64], phi: &[f64], psi: &[f64], bar: &[f64], with_moments: bool) -> DpOutput {
    let n = rho_tab.len() - 1;
    debug_assert!(phi.len() == n + 1 && psi.len() == n + 1 && bar.len() == n + 1);
    let mut logz = vec![0.0; n + 1];
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    let mut ca = -phi[0];
    let mut cb = -psi[0];
    a.push(1.0f64);
    b.push(1.0f64);
    let mut m1 = if with_moments { vec![0.0; n + 1] } else { Vec::new() };
    let mut m2 = if with_moments { vec![0.0; n + 1] } else { Vec::new() };

    for k in 1..=n {
        let mut sa = 0.0;
        let mut sb = 0.0;
        let (mut t1a, mut t1b, mut t2a, mut t2b) = (0.0, 0.0, 0.0, 0.0);
        if with_moments {
            for j in 0..k {
                let r = rho_tab[k - j];
                if r == 0.0 {
                    continue;
                }
                let (wa, wb) = (a[j] * r, b[j] * r);
                sa += wa;
                sb += wb;
                let g1 = m1[j] + 1.0;
                let g2 = m2[j] + 2.0 * m1[j] + 1.0;
                t1a += wa * g1;
                t1b += wb * g1;
                t2a += wa * g2;
                t2b += wb * g2;
            }
        } else {
            for j in 0..k {
                let r = rho_tab[k - j];
                if r == 0.0 {
                    continue;
                }
                sa += a[j] * r;
                sb += b[j] * r;
            }
        }
        let la = phi[k] + ca + sa.ln();
        let lb = psi[k] + cb + sb.ln();
        logz[k] = -std::f64::consts::LN_2 + bar[k] + logaddexp(la, lb);
        if with_moments {
            let top = la.max(lb);
            if top == f64::NEG_INFINITY {
                m1[k] = 0.0;
                m2[k] = 0.0;
            } else {
                let (wa, wb) = ((la - top).exp(), (lb - top).exp());
                let r1a = if sa > 0.0 { t1a / sa } else { 0.0 };
                let r1b = if sb > 0.0 { t1b / sb } else { 0.0 };
                let r2a = if sa > 0.0 { t2a / sa } else { 0.0 };
                let r2b = if sb > 0.0 { t2b / sb } else { 0.0 };
                let norm = wa + wb;
                m1[k] = (wa * r1a + wb * r1b) / norm;
                m2[k] = (wa * r2a + wb * r2b) / norm;
            }
        }
        let ea = logz[k] - phi[k];
        if ea - ca > RESCALE_SHIFT {
            let damp = (ca - ea).exp();
            for x in &mut a {
                *x *= damp;
            }
            ca = ea;
        }
        a.push((ea - ca).exp());
        let eb = logz[k] - psi[k];
        if eb - cb > RESCALE_SHIFT {
            let damp = (cb - eb).exp();
            for x in &mut b {
                *x *= damp;
            }
            cb = eb;
        }
        b.push((eb - cb).exp());
    }
    DpOutput { logz, moments: if with_moments { Some((m1, m2)) } else { None } }
}

/// Interface potentials for a disorder sample: the prefix energies
/// `t[i] = beta_hat * sum_{j<=i} (hat_j + h_hat)` and the per-site pinning
/// terms `bar[k] = beta_bar * bar_k - h_bar`.
fn potentials(params: &ModelParams, sample: &DisorderSample) -> (Vec<f64>, Vec<f64>) {
    let n = sample.len();
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    let mut acc = 0.0;
    for &w in &sample.hat {
        acc += params.beta_hat * (w + params.h_hat);
        t.push(acc);
    }
    let mut bar = Vec::with_capacity(n + 1);
    bar.push(0.0);
    for &w in &sample.bar {
        bar.push(params.beta_bar * w - params.h_bar);
    }
    (t, bar)
}

fn mode_potentials(mode: HamiltonianMode, t: &[f64]) -> (Vec<f64>, Vec<f64>) {
    match mode {
        // Excess: excursion weight (1/2)(1 + e^{-2(t_k - t_j)}).
        HamiltonianMode::Excess => (vec![0.0; t.len()], t.iter().map(|&x| -2.0 * x).collect()),
        // Full: (1/2)(e^{t_k - t_j} + e^{-(t_k - t_j)}).
        HamiltonianMode::Full => (t.to_vec(), t.iter().map(|&x| -x).collect()),
    }
}

fn rho_table_checked(rho: &ExcursionLaw, n: usize) -> Result<Vec<f64>, QuenchedError> {
    let tab = rho.prob_table(n);
    if tab[1..].iter().all(|&p| p == 0.0) {
        return Err(QuenchedError::UnsupportedGap { n });
    }
    Ok(tab)
}

/// Exact log partition sums for one disorder sample, by renewal dynamic
/// programming in `O(n^2)` time and `O(n)` memory.
pub fn dp_log_partition(
    params: &ModelParams,
    rho: &ExcursionLaw,
    sample: &DisorderSample,
    mode: HamiltonianMode,
) -> Result<LogPartitionTable, QuenchedError> {
    let n = sample.len();
    assert!(n >= 1, "sample must be nonempty");
    let rho_tab = rho_table_checked(rho, n)?;
    let (t, bar) = potentials(params, sample);
    let (phi, psi) = mode_potentials(mode, &t);
    let out = dp_engine(&rho_tab, &phi, &psi, &bar, false);
    Ok(LogPartitionTable {
        logz: out.logz,
        mode,
        params: *params,
        sample: sample.clone(),
        rho_tab,
    })
}

/// Exact log of the finite-volume annealed partition sums `log E[Z_k]`,
/// computed by the same recursion with each excursion weight replaced by
/// its disorder average `rho(d) (1 + e^{d * tilt})/2 * e^{M_bar - h_bar}`.
pub fn annealed_finite_volume(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    n: usize,
) -> Result<Vec<f64>, QuenchedError> {
    assert!(n >= 1);
    let rho_tab = rho_table_checked(rho, n)?;
    let delta = annealed::annealed_tilt(params.beta_hat, params.h_hat, law_hat);
    let phi = vec![0.0; n + 1];
    let psi: Vec<f64> = (0..=n).map(|i| i as f64 * delta).collect();
    let site = law_bar.log_mgf(-params.beta_bar) - params.h_bar;
    let mut bar = vec![site; n + 1];
    bar[0] = 0.0;
    Ok(dp_engine(&rho_tab, &phi, &psi, &bar, false).logz)
}

/// Exhaustive sum over all renewal decompositions, for cross-checking the
/// dynamic program at small volumes. Exact up to compensated-summation
/// roundoff; exponential in `n`.
pub fn enumerate_oracle(
    params: &ModelParams,
    rho: &ExcursionLaw,
    sample: &DisorderSample,
    mode: HamiltonianMode,
) -> Result<f64, QuenchedError> {
    let n = sample.len();
    if n > ENUM_MAX {
        return Err(QuenchedError::TooLarge { n, max: ENUM_MAX });
    }
    let rho_tab = rho_table_checked(rho, n)?;
    let (t, bar) = potentials(params, sample);
    let mut total = CompensatedSum::default();
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut weight = 1.0f64;
        let mut prev = 0usize;
        for k in 1..=n {
            if k < n && mask & (1 << (k - 1)) == 0 {
                continue;
            }
            let r = rho_tab[k - prev];
            if r == 0.0 {
                weight = 0.0;
                break;
            }
            let dt = t[k] - t[prev];
            let mut w = r * 0.5 * (1.0 + (-2.0 * dt).exp()) * bar[k].exp();
            if mode == HamiltonianMode::Full {
                w *= dt.exp();
            }
            weight *= w;
            prev = k;
        }
        if weight > 0.0 {
            total.add(weight);
        }
    }
    Ok(total.value().ln())
}

fn volume_grid(n: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut m = 256usize;
    while m < n {
        grid.push(m);
        m *= 2;
    }
    grid.push(n);
    grid
}

fn jackknife_stderr(values: &[f64]) -> f64 {
    if values.iter().all(|&x| x == values[0]) {
        return 0.0;
    }
    let r = values.len() as f64;
    let total: f64 = values.iter().sum();
    let mean = total / r;
    let var: f64 = values
        .iter()
        .map(|&x| {
            let loo = (total - x) / (r - 1.0);
            (loo - mean) * (loo - mean)
        })
        .sum();
    ((r - 1.0) / r * var).sqrt()
}

/// Replica estimate of the quenched excess free energy
/// `(1/n) E[log Z_n^{excess}]`, with a volume grid for finite-size
/// diagnostics. Replica `r` draws its disorder from `(seed, stream = r)`,
/// so results are reproducible and independent of scheduling.
pub fn estimate_g_que(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<QuenchedEstimate, QuenchedError> {
    assert!(replicas >= 2, "need at least two replicas for an error bar");
    rho_table_checked(rho, n)?;
    let grid = volume_grid(n);
    let per_replica: Vec<Vec<f64>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let sample = disorder::sample(law_hat, law_bar, n, seed, r as u64);
            let table = dp_log_partition(params, rho, &sample, HamiltonianMode::Excess)
                .expect("gap support checked above");
            grid.iter().map(|&m| table.logz()[m] / m as f64).collect()
        })
        .collect();
    let mut means = Vec::with_capacity(grid.len());
    let mut stderrs = Vec::with_capacity(grid.len());
    for gi in 0..grid.len() {
        let col: Vec<f64> = per_replica.iter().map(|row| row[gi]).collect();
        means.push(col.iter().sum::<f64>() / replicas as f64);
        stderrs.push(jackknife_stderr(&col));
    }
    let estimate = *means.last().expect("grid nonempty");
    let stderr = *stderrs.last().expect("grid nonempty");
    let extrapolated = if grid.len() >= 2 {
        // Ordinary least squares of the means against 1/m; the intercept
        // is the infinite-volume extrapolation under a C/n correction.
        let xs: Vec<f64> = grid.iter().map(|&m| 1.0 / m as f64).collect();
        let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
        let ybar = means.iter().sum::<f64>() / means.len() as f64;
        let sxy: f64 = xs.iter().zip(&means).map(|(&x, &y)| (x - xbar) * (y - ybar)).sum();
        let sxx: f64 = xs.iter().map(|&x| (x - xbar) * (x - xbar)).sum();
        ybar - sxy / sxx * xbar
    } else {
        estimate
    };
    Ok(QuenchedEstimate {
        n_grid: grid,
        means,
        stderrs,
        estimate,
        stderr,
        extrapolated,
        replicas,
        seed,
    })
}

/// Exact mean and variance of the return count `M_n` under the quenched
/// path measure, carried through the renewal recursion alongside the
/// partition sums.
pub fn return_statistics(
    params: &ModelParams,
    rho: &ExcursionLaw,
    sample: &DisorderSample,
) -> Result<ReturnStatistics, QuenchedError> {
    let n = sample.len();
    assert!(n >= 1);
    let rho_tab = rho_table_checked(rho, n)?;
    let (t, bar) = potentials(params, sample);
    let (phi, psi) = mode_potentials(HamiltonianMode::Excess, &t);
    let out = dp_engine(&rho_tab, &phi, &psi, &bar, true);
    if !out.logz[n].is_finite() {
        return Err(QuenchedError::UnsupportedGap { n });
    }
    let (m1, m2) = out.moments.expect("moments requested");
    let mean = m1[n];
    let variance = (m2[n] - mean * mean).max(0.0);
    Ok(ReturnStatistics { mean, variance })
}

/// Stream index reserved for path sampling, separate from the disorder
/// streams used by [`disorder::sample`].
const PATH_STREAM: u64 = 0x7061_7468;

/// Draw one path (return times and excursion signs) from the quenched
/// polymer measure encoded by a completed table, by backward sampling.
pub fn sample_path(table: &LogPartitionTable, seed: u64) -> Result<PathSample, QuenchedError> {
    let n = table.n();
    if !table.logz[n].is_finite() {
        return Err(QuenchedError::UnsupportedGap { n });
    }
    let mut rng = stream_rng(seed, PATH_STREAM);
    let (t, _) = potentials(&table.params, &table.sample);
    let ln_rho: Vec<f64> = table.rho_tab.iter().map(|&p| p.ln()).collect();
    // Log-weight of the excursion (j, k], up to factors constant in j.
    let arm = |j: usize, k: usize| -> f64 {
        let dt = t[k] - t[j];
        let shape = match table.mode {
            HamiltonianMode::Excess => ln_half_one_plus_exp(-2.0 * dt),
            HamiltonianMode::Full => ln_half_one_plus_exp(-2.0 * dt) + dt,
        };
        table.logz[j] + ln_rho[k - j] + shape
    };
    let mut times_rev = Vec::new();
    let mut signs_rev = Vec::new();
    let mut k = n;
    while k > 0 {
        let mut top = f64::NEG_INFINITY;
        for j in 0..k {
            top = top.max(arm(j, k));
        }
        debug_assert!(top.is_finite(), "reachable endpoint must have a parent");
        let mut total = 0.0;
        for j in 0..k {
            total += (arm(j, k) - top).exp();
        }
        let mut target = rng.random::<f64>() * total;
        let mut chosen = 0usize;
        for j in 0..k {
            let w = (arm(j, k) - top).exp();
            if target < w || j == k - 1 {
                // The j == k-1 arm of the guard absorbs roundoff; z[k-1]
                // may itself be zero there, so walk back to a positive arm.
                if w > 0.0 {
                    chosen = j;
                    break;
                }
            }
            target -= w;
            if w > 0.0 {
                chosen = j;
            }
        }
        let dt = t[k] - t[chosen];
        // Sign weights (above, below) proportional to (1, e^{-2 dt}).
        let p_below = 1.0 / (1.0 + (2.0 * dt).exp());
        let sign = if rng.random::<f64>() < p_below { -1 } else { 1 };
        times_rev.push(k);
        signs_rev.push(sign);
        k = chosen;
    }
    times_rev.reverse();
    signs_rev.reverse();
    let m_n = times_rev.len();
    Ok(PathSample { return_times: times_rev, excursion_signs: signs_rev, m_n })
}

/// Localization decision used by the pseudo-critical bisections: the
/// replica estimate must clear both an absolute floor and three standard
/// errors.
const LOCALIZATION_FLOOR: f64 = 1e-4;

fn is_localized(
    params: &ModelParams,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<bool, QuenchedError> {
    let est = estimate_g_que(params, rho, law_hat, law_bar, n, replicas, seed)?;
    Ok(est.estimate > LOCALIZATION_FLOOR.max(3.0 * est.stderr))
}

/// Bisection resolution for pseudo-critical estimates.
const BIAS_RESOLUTION: f64 = 0.01;

fn bisect_localized<F>(mut localized: F, mut lo: f64, mut hi: f64) -> Result<(f64, (f64, f64)), QuenchedError>
where
    F: FnMut(f64) -> Result<bool, QuenchedError>,
{
    while hi - lo > BIAS_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if localized(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), (lo, hi)))
}

/// Pseudo-critical solvent bias: the smallest `h_hat` at which the replica
/// estimate stops clearing the localization threshold, located by
/// bisection (the free energy is non-increasing in `h_hat`). A finite-size
/// estimator with a systematic bias toward declaring delocalization early;
/// never a rigorous critical point.
pub fn pseudo_critical_hhat(
    beta_hat: f64,
    beta_bar: f64,
    h_bar: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<PseudoCritical, QuenchedError> {
    assert!(beta_hat > 0.0, "copolymer coupling must be positive");
    const H_LO: f64 = 0.01;
    const H_CAP: f64 = 20.0;
    let check = |h_hat: f64| {
        let p = ModelParams { beta_hat, h_hat, beta_bar, h_bar };
        is_localized(&p, rho, law_hat, law_bar, n, replicas, seed)
    };
    if !check(H_LO)? {
        return Err(QuenchedError::NoBracket);
    }
    let mut hi = 1.0;
    let mut lo = H_LO;
    while check(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi >= H_CAP {
            if check(H_CAP)? {
                return Ok(PseudoCritical::Unbounded { probed_up_to: H_CAP });
            }
            hi = H_CAP;
            break;
        }
    }
    let (estimate, ci) = bisect_localized(check, lo, hi)?;
    Ok(PseudoCritical::Bracketed { estimate, ci })
}

/// Pseudo-critical pinning bias of the pure pinning model
/// (`beta_hat = h_hat = 0`), bisected in `h_bar` between two units below
/// and half a unit above the annealed critical bias.
pub fn pseudo_critical_hbar(
    beta_bar: f64,
    rho: &ExcursionLaw,
    law_bar: &DisorderLaw,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<PseudoCritical, QuenchedError> {
    let hc_ann = annealed::hc_ann_pinning(beta_bar, law_bar);
    let law_hat = DisorderLaw::pm_one();
    let check = |h_bar: f64| {
        let p = ModelParams { beta_hat: 0.0, h_hat: 0.0, beta_bar, h_bar };
        is_localized(&p, rho, &law_hat, law_bar, n, replicas, seed)
    };
    let lo = hc_ann - 2.0;
    let hi = hc_ann + 0.5;
    if !check(lo)? {
        return Err(QuenchedError::NoBracket);
    }
    if check(hi)? {
        // The quenched bias never exceeds the annealed one; treat this as
        // estimator noise and report the ceiling.
        return Ok(PseudoCritical::Unbounded { probed_up_to: hi });
    }
    let (estimate, ci) = bisect_localized(check, lo, hi)?;
    Ok(PseudoCritical::Bracketed { estimate, ci })
}
