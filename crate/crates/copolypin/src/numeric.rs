//! Shared numerical kernels: stable log-domain primitives, compensated
//! summation, extended reals, and certified evaluation of the tail series
//! `sum_{n>=a} n^{-s} e^{-g n}` that backs every grand-sum computation.

use std::fmt;

/// A real number extended with `+inf`, used where divergent series are a
/// legitimate answer rather than an error.
///
/// `Finite` sorts below `PosInf`, so the derived ordering is the
/// mathematical one as long as payloads are not NaN.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtReal {
    /// An ordinary finite value.
    Finite(f64),
    /// Positive infinity.
    PosInf,
}

impl ExtReal {
    /// True for the `Finite` variant.
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    /// The finite payload; panics on `PosInf`.
    pub fn expect_finite(self, msg: &str) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => panic!("{msg}: value is +inf"),
        }
    }

    /// Collapse to `f64`, mapping `PosInf` to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Apply `f` to the finite payload, keeping `PosInf` fixed.
    pub fn map<F: FnOnce(f64) -> f64>(self, f: F) -> ExtReal {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(f(v)),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

/// `log(e^a + e^b)` without overflow; handles `-inf` inputs exactly.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log sum_i e^{x_i}` with a single max pass; `-inf` entries are neutral.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = CompensatedSum::default();
    for &x in xs {
        acc.add((x - m).exp());
    }
    m + acc.value().ln()
}

/// `log(1 + e^x)` evaluated stably on both tails.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `log((1 + e^x) / 2)`, the log of an even mixture of 1 and `e^x`.
pub fn ln_half_one_plus_exp(x: f64) -> f64 {
    softplus(x) - std::f64::consts::LN_2
}

/// Neumaier-compensated accumulator: exact to one rounding of the final sum
/// for the magnitude ranges used here.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    /// Add one term.
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current compensated value.
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A truncated-series value together with a rigorous absolute error bound.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TailSum {
    pub value: f64,
    pub err: f64,
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// zeta(2)..zeta(17), used by the small-argument expansion of log Gamma(1+s).
const ZETAS: [f64; 16] = [
    1.6449340668482264,
    1.2020569031595943,
    1.0823232337111382,
    1.0369277551433699,
    1.0173430619844491,
    1.0083492773819228,
    1.0040773561979443,
    1.0020083928260822,
    1.0009945751278181,
    1.0004941886041195,
    1.0002460865533080,
    1.0001227133475785,
    1.0000612481350587,
    1.0000305882363070,
    1.0000152822594087,
    1.0000076371976379,
];

/// `log Gamma(1 + s)` for `|s| <= 0.5` via the Taylor series at 0:
/// `-gamma*s + sum_{k>=2} zeta(k) (-s)^k / k`.
fn ln_gamma_1p_small(s: f64) -> f64 {
    debug_assert!(s.abs() <= 0.5);
    let mut acc = 0.0;
    let mut pow = s * s; // (-s)^k, starting at k = 2
    for (k, z) in ZETAS.iter().enumerate() {
        let term = z * pow / (k + 2) as f64;
        acc += term;
        pow *= -s;
        if term.abs() < 1e-18 {
            break;
        }
    }
    -EULER_GAMMA * s + acc
}

/// `Gamma(s)` for `s` in `(0, 1)`: shift to `y = s + 21` and use the
/// Stirling series, which is accurate to ~1e-17 there.
fn gamma_pos_unit(s: f64) -> f64 {
    debug_assert!(s > 0.0 && s < 1.0);
    const SHIFT: usize = 21;
    let y = s + SHIFT as f64;
    let ln_gamma_y = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + 1.0 / (12.0 * y)
        - 1.0 / (360.0 * y.powi(3))
        + 1.0 / (1260.0 * y.powi(5))
        - 1.0 / (1680.0 * y.powi(7))
        + 1.0 / (1188.0 * y.powi(9));
    let mut ln_prod = 0.0;
    for j in 0..SHIFT {
        ln_prod += (s + j as f64).ln();
    }
    (ln_gamma_y - ln_prod).exp()
}

/// Upper incomplete gamma `Gamma(s, x)` for `s <= 1`, `x > 0`.
///
/// Arguments within `1e-8` of an integer are evaluated at that integer
/// (the recurrence through a zero divisor is unstable otherwise); integer
/// bases use `Gamma(0, x) = E_1(x)`.
pub(crate) fn upper_gamma(s: f64, x: f64) -> f64 {
    assert!(s <= 1.0 + 1e-12, "upper_gamma: s = {s} out of range");
    assert!(x > 0.0, "upper_gamma: x = {x} must be positive");
    let rounded = s.round();
    if (s - rounded).abs() < 1e-8 {
        let n = rounded as i64;
        if n == 1 {
            return (-x).exp();
        }
        // Descend from Gamma(0, x) = E1(x) through the negative integers.
        let mut val = upper_gamma_base(0.0, x);
        let mut cur = 0.0_f64;
        while cur > n as f64 {
            let next = cur - 1.0;
            val = (val - (next * x.ln() - x).exp()) / next;
            cur = next;
        }
        return val;
    }
    // Bring s into (0, 1) by k upward unit shifts, then descend.
    let k = (1.0 - s).floor() as u32;
    let sigma = s + k as f64;
    let mut val = upper_gamma_base(sigma, x);
    let mut cur = sigma;
    for _ in 0..k {
        let next = cur - 1.0;
        val = (val - (next * x.ln() - x).exp()) / next;
        cur = next;
    }
    val
}

/// `Gamma(sigma, x)` for `sigma` in `[0, 1)`.
fn upper_gamma_base(sigma: f64, x: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&sigma));
    if x < 1.5 {
        upper_gamma_series(sigma, x)
    } else {
        upper_gamma_cf(sigma, x)
    }
}

/// Small-`x` branch: `Gamma(sigma, x) = [Gamma(sigma+1) - x^sigma]/sigma
/// - x^sigma * sum_{m>=1} (-x)^m / (m! (sigma+m))`, with the leading
/// bracket evaluated through `expm1` so the `sigma -> 0` pole cancels
/// exactly (it degenerates to the classical E1 series at `sigma = 0`).
fn upper_gamma_series(sigma: f64, x: f64) -> f64 {
    let lx = x.ln();
    let lead = if sigma.abs() < 0.1 {
        let expo = ln_gamma_1p_small(sigma) - sigma * lx;
        if sigma == 0.0 {
            -EULER_GAMMA - lx
        } else {
            (sigma * lx).exp() * expo.exp_m1() / sigma
        }
    } else {
        (sigma * gamma_pos_unit(sigma) - (sigma * lx).exp()) / sigma
    };
    let xs = (sigma * lx).exp();
    let mut series = CompensatedSum::default();
    let mut pow = 1.0; // (-x)^m / m!
    for m in 1..400 {
        pow *= -x / m as f64;
        let term = pow / (sigma + m as f64);
        series.add(term);
        if term.abs() < 1e-18 * (1.0 + series.value().abs()) {
            break;
        }
    }
    lead - xs * series.value()
}

/// Large-`x` branch: modified Lentz continued fraction.
fn upper_gamma_cf(sigma: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - sigma;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..400 {
        let an = -(i as f64) * (i as f64 - sigma);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (sigma * x.ln() - x).exp() * h
}

// Euler-Maclaurin remainder prefactor after the f'''(a)/720 term:
// 2*zeta(6)/(2*pi)^6, applied to a bound on |f^(5)(a)|.
const EM_REMAINDER_COEFF: f64 = 3.31e-5;

/// `f^(5)` magnitude bound for `f(x) = x^{-s} e^{-gx}`:
/// `|f^(5)(x)| <= f(x) (g + (s+5)/x)^5`.
fn em_deriv5_bound(fa: f64, s: f64, g: f64, a: f64) -> f64 {
    fa * (g + (s + 5.0) / a).powi(5)
}

/// Euler-Maclaurin evaluation of `sum_{n=a}^inf n^{-s} e^{-gn}` assuming the
/// direct phase already advanced `a` far enough that the remainder bound is
/// acceptable to the caller.
fn em_tail(s: f64, g: f64, a: u64) -> TailSum {
    let af = a as f64;
    let fa = (-s * af.ln() - g * af).exp();
    let integral = if g == 0.0 {
        af.powf(1.0 - s) / (s - 1.0)
    } else {
        ((s - 1.0) * g.ln()).exp() * upper_gamma(1.0 - s, g * af)
    };
    let l1 = g + s / af;
    let f3 = -fa
        * (g.powi(3)
            + 3.0 * g * g * s / af
            + 3.0 * g * s * (s + 1.0) / (af * af)
            + s * (s + 1.0) * (s + 2.0) / (af * af * af));
    let value = integral + 0.5 * fa + fa * l1 / 12.0 + f3 / 720.0;
    let err = EM_REMAINDER_COEFF * em_deriv5_bound(fa, s, g, af)
        + 2e-13 * integral.abs()
        + 1e-15 * value.abs();
    TailSum { value, err }
}

/// Certified evaluation of `sum_{n=a}^inf n^{-s} e^{-g n}`.
///
/// Requires `g >= 0`, and `s > 1` when `g = 0` (divergent otherwise).
/// Strategy: sum terms directly, exiting early once either the geometric
/// remainder bound or the Euler-Maclaurin remainder bound drops below
/// `tol/2`; the Euler-Maclaurin finish handles arbitrarily small `g`.
pub(crate) fn sum_pow_exp(s: f64, g: f64, start: u64, tol: f64) -> TailSum {
    assert!(start >= 1, "series starts at n >= 1");
    assert!(g >= 0.0, "exponential rate must be nonnegative");
    assert!(g > 0.0 || s > 1.0, "divergent series: g = 0 and s <= 1");
    let q = (-g).exp();
    let geom_factor = if g > 0.0 { q / (1.0 - q) } else { f64::INFINITY };
    let mut acc = CompensatedSum::default();
    let mut n = start;
    let mut eg = (-g * start as f64).exp();
    let mut steps: u64 = 0;
    loop {
        let fx = (n as f64).powf(-s) * eg;
        // The EM finish includes f(n), so probe before accumulating.
        if steps >= 256 && steps % 64 == 0 {
            let bound = EM_REMAINDER_COEFF * em_deriv5_bound(fx, s, g, n as f64);
            if bound <= 0.5 * tol {
                let t = em_tail(s, g, n);
                acc.add(t.value);
                return TailSum { value: acc.value(), err: t.err };
            }
        }
        acc.add(fx);
        if g > 0.0 {
            let rem = fx * geom_factor;
            if rem <= 0.5 * tol {
                return TailSum { value: acc.value(), err: rem };
            }
        }
        n += 1;
        eg *= q;
        steps += 1;
        if steps > 4_000_000 {
            // Safety valve: finish analytically whatever the bound says.
            let t = em_tail(s, g, n);
            acc.add(t.value);
            return TailSum { value: acc.value(), err: t.err };
        }
    }
}

/// `sum_{n=start, start+stride, ...} coeff * n^{-s} e^{-g n}` for stride 1
/// or 2 (`start` must be divisible by the stride when it is 2).
pub(crate) fn sum_pow_exp_strided(
    coeff: f64,
    s: f64,
    g: f64,
    start: u64,
    stride: u64,
    tol: f64,
) -> TailSum {
    let inner_tol = tol / coeff.max(1e-300);
    let t = match stride {
        1 => sum_pow_exp(s, g, start, inner_tol),
        2 => {
            assert!(start % 2 == 0, "stride-2 tail must start on its parity class");
            // n = 2m: sum 2^{-s} m^{-s} e^{-2g m}.
            let half = sum_pow_exp(s, 2.0 * g, start / 2, inner_tol * (2.0f64).powf(s));
            TailSum { value: half.value * (2.0f64).powf(-s), err: half.err * (2.0f64).powf(-s) }
        }
        _ => unreachable!("only strides 1 and 2 occur"),
    };
    TailSum { value: coeff * t.value, err: coeff * t.err }
}
