//! Finite-alphabet word measures and the variational side of the model.
//!
//! A word is one excursion read as data: a length `m` together with the
//! `m` disorder letters it covers. The annealed free energy is the value
//! of a Gibbs variational problem over word measures, and the quenched
//! rate function is bounded below by adding an entropy penalty on the
//! letter statistics seen from a uniformly random position. Everything in
//! this module is an exact finite sum over lengths and letter tuples, with
//! certified series for the infinite length tails.

use rand::Rng;
use rand_distr::Gamma;
use thiserror::Error;

use crate::annealed;
use crate::disorder::DisorderLaw;
use crate::excursion::ExcursionLaw;
use crate::model::ModelParams;
use crate::numeric::{ln_half_one_plus_exp, ExtReal};
use crate::rng::stream_rng;

/// Exact tuple enumeration is capped at this many states per length.
pub const TUPLE_CAP: u128 = 10_000_000;

const PERTURB_STREAM: u64 = 0x7065_7274;

/// Failures of the variational evaluators.
#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum VariationalError {
    /// Letter alphabets must be finite-discrete.
    #[error("disorder law must have finite support")]
    NonFiniteAlphabet,
    /// An exact tuple sum would exceed the enumeration cap.
    #[error("tuple enumeration needs {size} states, cap is {cap}")]
    ComplexityCap {
        /// Requested number of states.
        size: u128,
        /// Enumeration cap.
        cap: u128,
    },
    /// The requested gap is below the annealed excess free energy, where
    /// the maximizer does not normalize.
    #[error("gap {g} is below the annealed excess free energy {g_ann}")]
    Domain {
        /// Requested gap.
        g: f64,
        /// Annealed excess free energy.
        g_ann: f64,
    },
    /// The pinning reward sits outside the strip where the certificate
    /// applies.
    #[error("pinning reward {h_bar} is outside the strip ({lo}, {hi}]")]
    OutsideStrip {
        /// Requested reward.
        h_bar: f64,
        /// Open lower end of the strip.
        lo: f64,
        /// Closed upper end of the strip.
        hi: f64,
    },
    /// The certificate evaluated to a numerically meaningless margin.
    #[error("certificate margin {delta} is not informative")]
    DegenerateCertificate {
        /// Computed margin.
        delta: f64,
    },
    /// No admissible word length carries mass.
    #[error("no length in 1..={max_len} carries excursion mass")]
    EmptySupport {
        /// Length cap that was searched.
        max_len: usize,
    },
}

/// Letter content of a word measure.
///
/// Product bodies factorize over positions given the length. Tabulated
/// bodies carry an explicit joint law over solvent-letter tuples per
/// length (the bar letters stay per-position and independent of the
/// solvent ones), which is exactly the structure of the Gibbs maximizer.
#[derive(Clone, Debug, PartialEq)]
enum Body {
    /// `letters[m-1][k]` is the joint `(hat, bar)` law of position `k`
    /// for length `m`, row-major over `(hat_atom, bar_atom)`.
    Product(Vec<Vec<Vec<f64>>>),
    Tabulated {
        /// `hat_tuples[m-1][t]`: probability of the `t`-th solvent tuple
        /// (lexicographic, first coordinate most significant).
        hat_tuples: Vec<Vec<f64>>,
        /// `bar_letters[m-1][k]`: law of the `k`-th pinning letter.
        bar_letters: Vec<Vec<Vec<f64>>>,
    },
}

/// A probability measure on words over finite disorder alphabets.
#[derive(Clone, Debug, PartialEq)]
pub struct WordMeasure {
    hat_atoms: Vec<f64>,
    bar_atoms: Vec<f64>,
    /// Length law on `1..=max_len`, indexed by `m - 1`.
    r: Vec<f64>,
    body: Body,
}

/// A joint law on one `(hat, bar)` letter pair.
#[derive(Clone, Debug, PartialEq)]
pub struct JointLetterLaw {
    /// Solvent letter atoms.
    pub hat_atoms: Vec<f64>,
    /// Pinning letter atoms.
    pub bar_atoms: Vec<f64>,
    /// `weights[i * bar_atoms.len() + j]` for atoms `(hat[i], bar[j])`.
    pub weights: Vec<f64>,
}

impl JointLetterLaw {
    /// Relative entropy against the product of the two disorder laws;
    /// `PosInf` if this law charges an atom pair the product does not.
    pub fn relative_entropy(&self, law_hat: &DisorderLaw, law_bar: &DisorderLaw) -> ExtReal {
        let (_, hat_w) = finite(law_hat).expect("alphabet checked at construction");
        let (_, bar_w) = finite(law_bar).expect("alphabet checked at construction");
        let nb = self.bar_atoms.len();
        let mut total = 0.0;
        for (idx, &p) in self.weights.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let q = hat_w[idx / nb] * bar_w[idx % nb];
            if q == 0.0 {
                return ExtReal::PosInf;
            }
            total += p * (p / q).ln();
        }
        ExtReal::Finite(total)
    }
}

fn finite(law: &DisorderLaw) -> Result<(&[f64], &[f64]), VariationalError> {
    law.finite_support().ok_or(VariationalError::NonFiniteAlphabet)
}

fn normalized(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|&w| w / total).collect()
}

/// Number of solvent tuples of length `m`, checked against the cap.
fn tuple_count(n_hat: usize, m: usize) -> Result<usize, VariationalError> {
    let size = (n_hat as u128).pow(m as u32);
    if size > TUPLE_CAP {
        return Err(VariationalError::ComplexityCap { size, cap: TUPLE_CAP });
    }
    Ok(size as usize)
}

/// Per-coordinate strides for lexicographic tuple indices of length `m`.
fn strides(n_hat: usize, m: usize) -> Vec<usize> {
    (0..m).map(|k| n_hat.pow((m - 1 - k) as u32)).collect()
}

impl WordMeasure {
    /// Build a product-form measure from a length law and per-position
    /// joint letter weights (`letters[m-1][k]`, row-major over the atom
    /// pairs of the two laws). All weight vectors are renormalized.
    pub fn product(
        law_hat: &DisorderLaw,
        law_bar: &DisorderLaw,
        r: &[f64],
        letters: Vec<Vec<Vec<f64>>>,
    ) -> Result<WordMeasure, VariationalError> {
        let (hat_atoms, _) = finite(law_hat)?;
        let (bar_atoms, _) = finite(law_bar)?;
        let pair_count = hat_atoms.len() * bar_atoms.len();
        assert!(!r.is_empty() && r.len() == letters.len(), "one letter row per length");
        assert!(
            r.iter().all(|&x| x.is_finite() && x >= 0.0) && r.iter().sum::<f64>() > 0.0,
            "length weights must be nonnegative with positive mass"
        );
        for (m, row) in letters.iter().enumerate() {
            assert!(row.len() == m + 1, "length {} needs {} positions", m + 1, m + 1);
            for law in row {
                assert!(law.len() == pair_count, "letter law over all atom pairs");
                assert!(law.iter().all(|&x| x.is_finite() && x >= 0.0));
                assert!(law.iter().sum::<f64>() > 0.0);
            }
        }
        Ok(WordMeasure {
            hat_atoms: hat_atoms.to_vec(),
            bar_atoms: bar_atoms.to_vec(),
            r: normalized(r),
            body: Body::Product(
                letters.into_iter().map(|row| row.into_iter().map(|l| normalized(&l)).collect()).collect(),
            ),
        })
    }

    /// Length law, indexed by `m - 1`.
    pub fn length_law(&self) -> &[f64] {
        &self.r
    }

    /// Largest representable word length.
    pub fn max_len(&self) -> usize {
        self.r.len()
    }

    /// Mean word length.
    pub fn mean_len(&self) -> f64 {
        self.r.iter().enumerate().map(|(i, &p)| (i + 1) as f64 * p).sum()
    }

    /// Joint `(hat, bar)` law of position `k` (0-based) within words of
    /// length `m`, conditional on that length.
    pub fn position_marginal(&self, m: usize, k: usize) -> JointLetterLaw {
        assert!(m >= 1 && m <= self.max_len() && k < m);
        let (nh, nb) = (self.hat_atoms.len(), self.bar_atoms.len());
        let weights = match &self.body {
            Body::Product(letters) => letters[m - 1][k].clone(),
            Body::Tabulated { hat_tuples, bar_letters } => {
                let stride = strides(nh, m)[k];
                let mut hat_marg = vec![0.0; nh];
                for (t, &p) in hat_tuples[m - 1].iter().enumerate() {
                    hat_marg[(t / stride) % nh] += p;
                }
                let mut joint = vec![0.0; nh * nb];
                for i in 0..nh {
                    for j in 0..nb {
                        joint[i * nb + j] = hat_marg[i] * bar_letters[m - 1][k][j];
                    }
                }
                joint
            }
        };
        JointLetterLaw {
            hat_atoms: self.hat_atoms.clone(),
            bar_atoms: self.bar_atoms.clone(),
            weights,
        }
    }

    /// A noisy copy: every probability vector is resampled from a
    /// Dirichlet distribution centered on itself with the given
    /// concentration, preserving supports. Larger concentrations mean
    /// smaller perturbations.
    pub fn perturbed(&self, concentration: f64, seed: u64) -> WordMeasure {
        assert!(concentration > 0.0);
        let mut rng = stream_rng(seed, PERTURB_STREAM);
        let mut resample = |weights: &mut Vec<f64>| {
            for w in weights.iter_mut() {
                if *w > 0.0 {
                    let gamma = Gamma::new(concentration * *w, 1.0).expect("positive shape");
                    *w = rng.sample(gamma);
                }
            }
            *weights = normalized(weights);
        };
        let mut out = self.clone();
        resample(&mut out.r);
        match &mut out.body {
            Body::Product(letters) => {
                for row in letters {
                    for law in row {
                        resample(law);
                    }
                }
            }
            Body::Tabulated { hat_tuples, bar_letters } => {
                for table in hat_tuples {
                    resample(table);
                }
                for row in bar_letters {
                    for law in row {
                        resample(law);
                    }
                }
            }
        }
        out
    }

    /// Probability of each solvent tuple of length `m`, conditional on
    /// that length.
    fn hat_tuple_law(&self, m: usize) -> Result<Vec<f64>, VariationalError> {
        let nh = self.hat_atoms.len();
        match &self.body {
            Body::Tabulated { hat_tuples, .. } => Ok(hat_tuples[m - 1].clone()),
            Body::Product(letters) => {
                let size = tuple_count(nh, m)?;
                let stride = strides(nh, m);
                let nb = self.bar_atoms.len();
                // Per-position solvent marginals.
                let margs: Vec<Vec<f64>> = (0..m)
                    .map(|k| {
                        (0..nh)
                            .map(|i| letters[m - 1][k][i * nb..(i + 1) * nb].iter().sum())
                            .collect()
                    })
                    .collect();
                Ok((0..size)
                    .map(|t| (0..m).map(|k| margs[k][(t / stride[k]) % nh]).product())
                    .collect())
            }
        }
    }
}

/// The reference word measure: excursion lengths up to `max_len`
/// (renormalized) with independent reference letters at every position.
pub fn word_reference(
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    max_len: usize,
) -> Result<WordMeasure, VariationalError> {
    let (hat_atoms, hat_w) = finite(law_hat)?;
    let (bar_atoms, bar_w) = finite(law_bar)?;
    let r: Vec<f64> = (1..=max_len).map(|m| rho.prob(m as u64)).collect();
    if r.iter().sum::<f64>() <= 0.0 {
        return Err(VariationalError::EmptySupport { max_len });
    }
    let mut pair = vec![0.0; hat_atoms.len() * bar_atoms.len()];
    for (i, &hw) in hat_w.iter().enumerate() {
        for (j, &bw) in bar_w.iter().enumerate() {
            pair[i * bar_atoms.len() + j] = hw * bw;
        }
    }
    let letters = (1..=max_len).map(|m| vec![pair.clone(); m]).collect();
    WordMeasure::product(law_hat, law_bar, &r, letters)
}

/// Mean of the first pinning letter, the linear pinning part of the
/// variational functional.
pub fn phi_pin(q: &WordMeasure) -> f64 {
    let nb = q.bar_atoms.len();
    q.r.iter()
        .enumerate()
        .filter(|&(_, &rm)| rm > 0.0)
        .map(|(mi, &rm)| {
            let first = q.position_marginal(mi + 1, 0);
            let mean: f64 = first
                .weights
                .iter()
                .enumerate()
                .map(|(idx, &w)| w * q.bar_atoms[idx % nb])
                .sum();
            rm * mean
        })
        .sum()
}

/// Expected log copolymer weight of the first word,
/// `E_q[log((1 + e^{-2 beta_hat (m h_hat + sum of solvent letters)})/2)]`,
/// as an exact sum over lengths and solvent tuples.
pub fn phi_cop(q: &WordMeasure, beta_hat: f64, h_hat: f64) -> Result<f64, VariationalError> {
    let nh = q.hat_atoms.len();
    let mut total = 0.0;
    for (mi, &rm) in q.r.iter().enumerate() {
        if rm == 0.0 {
            continue;
        }
        let m = mi + 1;
        let tuples = q.hat_tuple_law(m)?;
        let stride = strides(nh, m);
        let mut term = 0.0;
        for (t, &p) in tuples.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let sum: f64 = (0..m).map(|k| q.hat_atoms[(t / stride[k]) % nh]).sum();
            term += p * ln_half_one_plus_exp(-2.0 * beta_hat * (m as f64 * h_hat + sum));
        }
        total += rm * term;
    }
    Ok(total)
}

/// Relative entropy of a word measure against the reference measure built
/// from `rho` and independent reference letters. `PosInf` on any support
/// violation.
pub fn relative_entropy_word(
    q: &WordMeasure,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
) -> ExtReal {
    let (_, hat_w) = finite(law_hat).expect("alphabet checked at construction");
    let (_, bar_w) = finite(law_bar).expect("alphabet checked at construction");
    let (nh, nb) = (q.hat_atoms.len(), q.bar_atoms.len());
    let mut total = 0.0;
    for (mi, &rm) in q.r.iter().enumerate() {
        if rm == 0.0 {
            continue;
        }
        let m = mi + 1;
        let len_ref = rho.prob(m as u64);
        if len_ref == 0.0 {
            return ExtReal::PosInf;
        }
        total += rm * (rm / len_ref).ln();
        match &q.body {
            Body::Product(letters) => {
                for law in &letters[mi] {
                    for (idx, &p) in law.iter().enumerate() {
                        if p == 0.0 {
                            continue;
                        }
                        let w = hat_w[idx / nb] * bar_w[idx % nb];
                        if w == 0.0 {
                            return ExtReal::PosInf;
                        }
                        total += rm * p * (p / w).ln();
                    }
                }
            }
            Body::Tabulated { hat_tuples, bar_letters } => {
                let stride = strides(nh, m);
                for (t, &p) in hat_tuples[mi].iter().enumerate() {
                    if p == 0.0 {
                        continue;
                    }
                    let w: f64 = (0..m).map(|k| hat_w[(t / stride[k]) % nh]).product();
                    if w == 0.0 {
                        return ExtReal::PosInf;
                    }
                    total += rm * p * (p / w).ln();
                }
                for law in &bar_letters[mi] {
                    for (j, &p) in law.iter().enumerate() {
                        if p == 0.0 {
                            continue;
                        }
                        if bar_w[j] == 0.0 {
                            return ExtReal::PosInf;
                        }
                        total += rm * p * (p / bar_w[j]).ln();
                    }
                }
            }
        }
    }
    ExtReal::Finite(total)
}

/// The annealed variational functional
/// `beta_bar * phi_pin(q) + phi_cop(q) - g * mean_len(q) - entropy(q)`.
/// Its supremum over word measures is the annealed rate function;
/// measures with infinite entropy score negative infinity.
pub fn annealed_functional(
    q: &WordMeasure,
    params: &ModelParams,
    g: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
) -> Result<f64, VariationalError> {
    let ExtReal::Finite(entropy) = relative_entropy_word(q, rho, law_hat, law_bar) else {
        return Ok(f64::NEG_INFINITY);
    };
    Ok(params.beta_bar * phi_pin(q) + phi_cop(q, params.beta_hat, params.h_hat)?
        - g * q.mean_len()
        - entropy)
}

/// Solvent letter law tilted by `e^{-2 beta_hat * atom}`, normalized.
fn tilted_hat(law_hat: &DisorderLaw, beta_hat: f64) -> Result<Vec<f64>, VariationalError> {
    let (atoms, w) = finite(law_hat)?;
    Ok(normalized(
        &atoms.iter().zip(w).map(|(&a, &p)| p * (-2.0 * beta_hat * a).exp()).collect::<Vec<_>>(),
    ))
}

/// Pinning letter law tilted by `e^{beta_bar * atom}`, normalized.
fn tilted_bar(law_bar: &DisorderLaw, beta_bar: f64) -> Result<Vec<f64>, VariationalError> {
    let (atoms, w) = finite(law_bar)?;
    Ok(normalized(
        &atoms.iter().zip(w).map(|(&a, &p)| p * (beta_bar * a).exp()).collect::<Vec<_>>(),
    ))
}

/// The unique maximizer of the annealed functional at gap `g`, truncated
/// to lengths at most `max_len` and renormalized. Returns the measure and
/// the length-law mass removed by the cap.
///
/// Against the reference, the maximizer has density proportional to
/// `e^{-g m} (1 + e^{-2 beta_hat (m h_hat + sum hat)}) e^{beta_bar bar_1} / 2`,
/// so its solvent tuples are exchangeable but not independent; they are
/// stored as explicit per-length tables.
pub fn maximizer_q(
    params: &ModelParams,
    g: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    max_len: usize,
) -> Result<(WordMeasure, f64), VariationalError> {
    let (hat_atoms, hat_w) = finite(law_hat)?;
    let (bar_atoms, bar_w) = finite(law_bar)?;
    let g_ann = annealed::g_hat_ann(params.beta_hat, params.h_hat, law_hat);
    if g < g_ann {
        return Err(VariationalError::Domain { g, g_ann });
    }
    tuple_count(hat_atoms.len(), max_len)?;
    let delta = annealed::annealed_tilt(params.beta_hat, params.h_hat, law_hat);
    // Length weights against the full normalizer, so the removed tail
    // mass is reported exactly (up to the certified series tolerance).
    let tol = 1e-12;
    let n_g = rho.grand_sum(g, tol).expect_finite("g at or above the annealed excess");
    let n_gd = rho.grand_sum(g - delta, tol).expect_finite("tilted sum at nonnegative argument");
    let two_d = n_g + n_gd;
    let r_full: Vec<f64> = (1..=max_len)
        .map(|m| {
            let m_f = m as f64;
            rho.prob(m as u64) * (-g * m_f).exp() * (1.0 + (m_f * delta).exp()) / two_d
        })
        .collect();
    let kept: f64 = r_full.iter().sum();
    if kept <= 0.0 {
        return Err(VariationalError::EmptySupport { max_len });
    }
    let bar_tilted = tilted_bar(law_bar, params.beta_bar)?;
    let nh = hat_atoms.len();
    let mut hat_tuples = Vec::with_capacity(max_len);
    let mut bar_letters = Vec::with_capacity(max_len);
    for m in 1..=max_len {
        let size = tuple_count(nh, m)?;
        let stride = strides(nh, m);
        let mut table = vec![0.0; size];
        for (t, slot) in table.iter_mut().enumerate() {
            let mut base = 1.0;
            let mut sum = 0.0;
            for &s in &stride {
                let i = (t / s) % nh;
                base *= hat_w[i];
                sum += hat_atoms[i];
            }
            *slot = base
                * (1.0 + (-2.0 * params.beta_hat * (m as f64 * params.h_hat + sum)).exp());
        }
        hat_tuples.push(normalized(&table));
        let mut row = vec![bar_tilted.clone()];
        row.extend(std::iter::repeat_n(bar_w.to_vec(), m - 1));
        bar_letters.push(row);
    }
    let measure = WordMeasure {
        hat_atoms: hat_atoms.to_vec(),
        bar_atoms: bar_atoms.to_vec(),
        r: normalized(&r_full),
        body: Body::Tabulated { hat_tuples, bar_letters },
    };
    Ok((measure, 1.0 - kept))
}

/// A word measure with lengths lumped at a truncation level: words longer
/// than `tr` keep only their first `tr` letters. Only the data needed by
/// the origin-randomized letter statistics is retained: the truncated
/// length law and per-position letter marginals.
#[derive(Clone, Debug)]
pub struct TruncatedWordMeasure {
    tr: usize,
    /// Truncated length law on `1..=tr`; the top entry carries all the
    /// mass from lengths `>= tr`.
    r_tr: Vec<f64>,
    /// `marginals[m-1][k]`: position-`k` letter law of the length-`m`
    /// class (for `m = tr`, mixed over all original lengths `>= tr`).
    marginals: Vec<Vec<JointLetterLaw>>,
    mean_len: f64,
}

impl TruncatedWordMeasure {
    /// Truncation level.
    pub fn tr(&self) -> usize {
        self.tr
    }

    /// Truncated length law, indexed by `m - 1`.
    pub fn length_law(&self) -> &[f64] {
        &self.r_tr
    }

    /// Mean truncated word length.
    pub fn mean_len(&self) -> f64 {
        self.mean_len
    }
}

/// Truncate a word measure at level `tr <= max_len`.
pub fn truncate(q: &WordMeasure, tr: usize) -> TruncatedWordMeasure {
    assert!(tr >= 1 && tr <= q.max_len());
    let mut r_tr: Vec<f64> = q.r[..tr - 1].to_vec();
    let lump: f64 = q.r[tr - 1..].iter().sum();
    r_tr.push(lump);
    let mut marginals = Vec::with_capacity(tr);
    for m in 1..tr {
        marginals.push((0..m).map(|k| q.position_marginal(m, k)).collect());
    }
    let pair_count = q.hat_atoms.len() * q.bar_atoms.len();
    let mut top: Vec<JointLetterLaw> = (0..tr)
        .map(|_| JointLetterLaw {
            hat_atoms: q.hat_atoms.clone(),
            bar_atoms: q.bar_atoms.clone(),
            weights: vec![0.0; pair_count],
        })
        .collect();
    if lump > 0.0 {
        for n in tr..=q.max_len() {
            if q.r[n - 1] == 0.0 {
                continue;
            }
            let share = q.r[n - 1] / lump;
            for (k, law) in top.iter_mut().enumerate() {
                let marg = q.position_marginal(n, k);
                for (w, &m) in law.weights.iter_mut().zip(&marg.weights) {
                    *w += share * m;
                }
            }
        }
    }
    marginals.push(top);
    let mean_len =
        r_tr.iter().enumerate().map(|(i, &p)| (i + 1) as f64 * p).sum();
    TruncatedWordMeasure { tr, r_tr, marginals, mean_len }
}

/// Joint law of the letter pair covering a uniformly random position of
/// the concatenated word sequence: the length-biased mixture
/// `(1/mean_len) sum_m r_tr(m) sum_{k<m} (position-k marginal)`.
pub fn psi_first_letter_marginal(q_tr: &TruncatedWordMeasure) -> JointLetterLaw {
    let first = &q_tr.marginals[0][0];
    let mut weights = vec![0.0; first.weights.len()];
    for (mi, &rm) in q_tr.r_tr.iter().enumerate() {
        if rm == 0.0 {
            continue;
        }
        for law in &q_tr.marginals[mi] {
            for (w, &p) in weights.iter_mut().zip(&law.weights) {
                *w += rm * p;
            }
        }
    }
    for w in &mut weights {
        *w /= q_tr.mean_len;
    }
    JointLetterLaw {
        hat_atoms: first.hat_atoms.clone(),
        bar_atoms: first.bar_atoms.clone(),
        weights,
    }
}

/// Closed-form origin-randomized letter marginal of the untruncated
/// maximizer family, together with the truncated mean length.
///
/// For the maximizer, every position of a length-`n` word has solvent law
/// `(mu_hat + e^{n delta} tilted) / (1 + e^{n delta})`, the first pinning
/// letter is tilted and the rest are reference. Splitting the length sums
/// at `tr` gives a four-term mixture whose tail coefficients are grand
/// sums of the excursion law, evaluated with certified series.
pub fn maximizer_psi_closed_form(
    params: &ModelParams,
    g: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tr: usize,
    tol: f64,
) -> Result<(JointLetterLaw, f64), VariationalError> {
    assert!(tr >= 1);
    let (hat_atoms, hat_w) = finite(law_hat)?;
    let (bar_atoms, bar_w) = finite(law_bar)?;
    let g_ann = annealed::g_hat_ann(params.beta_hat, params.h_hat, law_hat);
    if g < g_ann {
        return Err(VariationalError::Domain { g, g_ann });
    }
    let delta = annealed::annealed_tilt(params.beta_hat, params.h_hat, law_hat);
    let n_g = rho.grand_sum(g, tol).expect_finite("g at or above the annealed excess");
    let n_gd = rho.grand_sum(g - delta, tol).expect_finite("tilted sum converges");
    let (mut h0, mut h1, mut hd0, mut hd1) = (0.0, 0.0, 0.0, 0.0);
    for m in 1..tr {
        let m_f = m as f64;
        let base = rho.prob(m as u64) * (-g * m_f).exp();
        h0 += base;
        h1 += m_f * base;
        let tilted = base * (m_f * delta).exp();
        hd0 += tilted;
        hd1 += m_f * tilted;
    }
    let g0 = (n_g - h0).max(0.0);
    let gd = (n_gd - hd0).max(0.0);
    let hat_t = tilted_hat(law_hat, params.beta_hat)?;
    let bar_t = tilted_bar(law_bar, params.beta_bar)?;
    let tr_f = tr as f64;
    // Mixture coefficients over (hat law) x (bar law):
    //   reference x tilted, reference x reference,
    //   tilted x tilted, tilted x reference.
    let c_rt = h0 + g0;
    let c_rr = h1 - h0 + (tr_f - 1.0) * g0;
    let c_tt = hd0 + gd;
    let c_tr = hd1 - hd0 + (tr_f - 1.0) * gd;
    let norm = h1 + hd1 + tr_f * (g0 + gd);
    let nb = bar_atoms.len();
    let mut weights = vec![0.0; hat_atoms.len() * nb];
    for i in 0..hat_atoms.len() {
        for j in 0..nb {
            weights[i * nb + j] = (c_rt * hat_w[i] * bar_t[j]
                + c_rr * hat_w[i] * bar_w[j]
                + c_tt * hat_t[i] * bar_t[j]
                + c_tr * hat_t[i] * bar_w[j])
                / norm;
        }
    }
    let mean_len = norm / (n_g + n_gd);
    Ok((
        JointLetterLaw {
            hat_atoms: hat_atoms.to_vec(),
            bar_atoms: bar_atoms.to_vec(),
            weights,
        },
        mean_len,
    ))
}

/// Lower bound on the quenched rate function of the product word measure
/// built from `q`: its annealed entropy plus the truncated-letter entropy
/// term weighted by the tail exponent.
pub fn quenched_rate_lower(
    q: &WordMeasure,
    tr: usize,
    alpha: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
) -> ExtReal {
    assert!(alpha >= 1.0);
    let ExtReal::Finite(base) = relative_entropy_word(q, rho, law_hat, law_bar) else {
        return ExtReal::PosInf;
    };
    let q_tr = truncate(q, tr);
    let psi = psi_first_letter_marginal(&q_tr);
    psi.relative_entropy(law_hat, law_bar)
        .map(|h| base + (alpha - 1.0) * q_tr.mean_len() * h)
}

/// A strict-inequality certificate between the annealed and quenched
/// critical curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapCertificate {
    /// Certified margin by which the quenched value undershoots the
    /// annealed one.
    pub delta: f64,
    /// Annealed critical solvent bias the certificate was evaluated at.
    pub h_hat_critical: f64,
    /// Truncated mean word length of the maximizer.
    pub mean_len_truncated: f64,
    /// Letter entropy of the origin-randomized marginal.
    pub marginal_entropy: f64,
    /// Truncation level used.
    pub tr: usize,
}

/// Certify a gap between the annealed and quenched critical curves at a
/// pinning reward inside the strip above the wetting threshold: evaluates
/// `delta = (alpha - 1) * mean_len * entropy` for the maximizer at the
/// annealed critical bias and zero gap. A strictly positive `delta`
/// pushes the quenched critical bias strictly below the annealed one.
pub fn gap_certificate(
    beta_hat: f64,
    beta_bar: f64,
    h_bar: f64,
    alpha: f64,
    rho: &ExcursionLaw,
    law_hat: &DisorderLaw,
    law_bar: &DisorderLaw,
    tr: usize,
    tol: f64,
) -> Result<GapCertificate, VariationalError> {
    assert!(alpha > 1.0, "tail exponent must exceed 1");
    assert!(beta_hat > 0.0, "solvent coupling must be positive");
    let hc_pin = annealed::hc_ann_pinning(beta_bar, law_bar);
    let lo = hc_pin - std::f64::consts::LN_2;
    if !(h_bar > lo && h_bar <= hc_pin) {
        return Err(VariationalError::OutsideStrip { h_bar, lo, hi: hc_pin });
    }
    let h_hat_critical =
        annealed::hc_ann_combined(beta_hat, beta_bar, h_bar, rho, law_hat, law_bar, tol)
            .expect("coupling positive")
            .expect_finite("finite inside the strip");
    let params =
        ModelParams { beta_hat, h_hat: h_hat_critical, beta_bar, h_bar };
    let (psi, mean_len) =
        maximizer_psi_closed_form(&params, 0.0, rho, law_hat, law_bar, tr, tol)?;
    let marginal_entropy = psi
        .relative_entropy(law_hat, law_bar)
        .expect_finite("tilted laws share the reference support");
    let delta = (alpha - 1.0) * mean_len * marginal_entropy;
    if delta <= 1e-12 {
        return Err(VariationalError::DegenerateCertificate { delta });
    }
    Ok(GapCertificate {
        delta,
        h_hat_critical,
        mean_len_truncated: mean_len,
        marginal_entropy,
        tr,
    })
}
