//! Paired Student t-test on per-image scores.

use crate::error::{Error, Result};

const BETA_CF_EPS: f64 = 1e-15;
const BETA_CF_MAX_ITER: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub t_statistic: f64,
    /// Two-tailed.
    pub p_value: f64,
    pub n: usize,
    pub mean_diff: f64,
    /// Standard error of the mean difference.
    pub sem: f64,
}

/// Two-tailed paired t-test of `a - b` with `n - 1` degrees of freedom.
///
/// All differences zero gives `t = 0, p = 1`. Identical non-zero
/// differences (spread within a few ulps of the mean) give `t = ±inf, p = 0`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let nf = n as f64;
    let diffs = || a.iter().zip(b).map(|(x, y)| x - y);
    let mean = diffs().sum::<f64>() / nf;
    let var = diffs().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (nf - 1.0);
    let sd = libm::sqrt(var);
    let sem = sd / libm::sqrt(nf);

    let (lo, hi) = diffs().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), d| (l.min(d), h.max(d)));
    let scale = libm::fabs(lo).max(libm::fabs(hi));
    if scale == 0.0 {
        return Ok(TestResult { t_statistic: 0.0, p_value: 1.0, n, mean_diff: 0.0, sem: 0.0 });
    }
    if hi - lo <= 8.0 * f64::EPSILON * scale {
        let t = if mean > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        return Ok(TestResult { t_statistic: t, p_value: 0.0, n, mean_diff: mean, sem });
    }
    let t = mean / sem;
    Ok(TestResult { t_statistic: t, p_value: student_t_two_tailed(t, nf - 1.0), n, mean_diff: mean, sem })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_tailed(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// Cumulative distribution of Student's t.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * student_t_two_tailed(t, df);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// `I_x(a, b)`, via the continued fraction evaluated with the modified
/// Lentz method on whichever side of the mean converges fastest.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b) + a * libm::log(x) + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if libm::fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < BETA_CF_EPS {
            break;
        }
    }
    h
}
