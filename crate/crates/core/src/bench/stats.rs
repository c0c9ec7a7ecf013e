//! Descriptive statistics, one-way ANOVA and two-sample t-tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub min: f64,
    pub max: f64,
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance (n - 1 denominator); 0 when n < 2.
pub fn variance(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

/// Quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(x: &[f64]) -> Option<Summary> {
    if x.is_empty() {
        return None;
    }
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&s, 0.25), quantile(&s, 0.75));
    Some(Summary {
        n: x.len(),
        mean: mean(x),
        std: variance(x).sqrt(),
        median: quantile(&s, 0.5),
        q1,
        q3,
        iqr: q3 - q1,
        min: s[0],
        max: s[s.len() - 1],
    })
}

const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + 7.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let mut c = 1.0;
    let mut d = 1.0 - (a + b) * x / (a + 1.0);
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        for num in [
            m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m)),
            -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0)),
        ] {
            d = 1.0 + num * d;
            if d.abs() < TINY {
                d = TINY;
            }
            c = 1.0 + num / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            h *= d * c;
        }
        if (d * c - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a, b).
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Upper tail P(F > f) of the F distribution.
pub fn f_sf(f: f64, d1: f64, d2: f64) -> f64 {
    if f.is_nan() {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}

/// Two-tailed P(|T| > |t|) of Student's t distribution.
pub fn t_two_tailed(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    if t == 0.0 {
        return 1.0;
    }
    reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anova {
    pub f: f64,
    pub p: f64,
    pub eta_squared: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub ss_between: f64,
    pub ss_within: f64,
    pub ss_total: f64,
}

/// One-way ANOVA. Zero within-group variance with differing means gives
/// `F = +inf`; with equal means, `F = 0`.
pub fn one_way_anova(groups: &[&[f64]]) -> Result<Anova> {
    if groups.len() < 2 || groups.iter().any(|g| g.len() < 2) {
        return Err(Error::InvalidParameter(
            "anova needs at least two groups of at least two samples".into(),
        ));
    }
    let n: usize = groups.iter().map(|g| g.len()).sum();
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = mean(g);
        ssb += g.len() as f64 * (m - grand) * (m - grand);
        ssw += g.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    }
    let sst = groups.iter().flat_map(|g| g.iter()).map(|v| (v - grand) * (v - grand)).sum::<f64>();
    let dfb = groups.len() - 1;
    let dfw = n - groups.len();
    let f = if ssb == 0.0 {
        0.0
    } else if ssw == 0.0 {
        f64::INFINITY
    } else {
        (ssb / dfb as f64) / (ssw / dfw as f64)
    };
    Ok(Anova {
        f,
        p: f_sf(f, dfb as f64, dfw as f64),
        eta_squared: if sst == 0.0 { 0.0 } else { ssb / sst },
        df_between: dfb,
        df_within: dfw,
        ss_between: ssb,
        ss_within: ssw,
        ss_total: sst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub welch: bool,
}

/// Two-sample t-test of `mean(a) - mean(b)`, pooled or Welch, two-tailed.
pub fn two_sample_t(a: &[f64], b: &[f64], welch: bool) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidParameter("t-test needs at least two samples per group".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (variance(a), variance(b));
    let diff = mean(a) - mean(b);
    let (se2, df) = if welch {
        let (ea, eb) = (va / na, vb / nb);
        let se2 = ea + eb;
        let df = if se2 == 0.0 {
            na + nb - 2.0
        } else {
            se2 * se2 / (ea * ea / (na - 1.0) + eb * eb / (nb - 1.0))
        };
        (se2, df)
    } else {
        let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
        (sp2 * (1.0 / na + 1.0 / nb), na + nb - 2.0)
    };
    let t = if diff == 0.0 {
        0.0
    } else if se2 == 0.0 {
        diff.signum() * f64::INFINITY
    } else {
        diff / se2.sqrt()
    };
    Ok(TTest {
        t,
        df,
        p: t_two_tailed(t, df),
        welch,
    })
}
