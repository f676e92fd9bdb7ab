//! Statistical machinery for the Monte Carlo experiments: chi-square tests
//! and the two-sample Bernoulli confidence interval used in advantage
//! reports.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Chi-square goodness-of-fit of observed counts against expected
/// probabilities. Returns `(statistic, p_value)`.
///
/// Cells with expected probability 0 must have observed count 0 (otherwise
/// the fit is rejected outright with p = 0); such cells are excluded from
/// the statistic and the degrees of freedom.
pub fn chi_square_gof(observed: &[u64], expected_probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), expected_probs.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;

    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&obs, &p) in observed.iter().zip(expected_probs) {
        if p <= 0.0 {
            if obs > 0 {
                return (f64::INFINITY, 0.0);
            }
            continue;
        }
        let exp = n * p;
        let d = obs as f64 - exp;
        stat += d * d / exp;
        cells += 1;
    }
    (stat, p_value(stat, cells.saturating_sub(1)))
}

/// Two-sample chi-square homogeneity test: do two sets of counts over the
/// same categories come from the same distribution? Returns
/// `(statistic, p_value)`.
///
/// Categories empty in both samples are dropped.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let total_a: u64 = a.iter().sum();
    let total_b: u64 = b.iter().sum();
    let grand = (total_a + total_b) as f64;
    if grand == 0.0 {
        return (0.0, 1.0);
    }

    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&oa, &ob) in a.iter().zip(b) {
        let col = (oa + ob) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (obs, row_total) in [(oa as f64, total_a as f64), (ob as f64, total_b as f64)] {
            let exp = row_total * col / grand;
            if exp > 0.0 {
                let d = obs - exp;
                stat += d * d / exp;
            }
        }
    }
    (stat, p_value(stat, cells.saturating_sub(1)))
}

fn p_value(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

/// 95% halfwidth for the difference of two Bernoulli rates estimated from
/// `trials` runs each: `1.96 * sqrt(p̂ (1 − p̂) · 2 / N)` with `p̂` the pooled
/// mean of the two rates.
pub fn two_sample_halfwidth(p_a: f64, p_b: f64, trials: usize) -> f64 {
    let pooled = 0.5 * (p_a + p_b);
    1.96 * (pooled * (1.0 - pooled) * 2.0 / trials as f64).sqrt()
}

/// Standard deviation of a Bernoulli(p) sample mean over `n` trials.
pub fn bernoulli_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
