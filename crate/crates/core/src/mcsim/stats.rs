/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    compensated_sum(values.iter().copied()) / values.len() as f64
}

/// Sample statistics with the standard errors of the mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub mean_std_error: f64,
    /// Standard error of `variance`, from the fourth central moment.
    pub variance_std_error: f64,
}

/// Two-pass moments with compensated sums.
pub fn sample_moments(values: &[f64]) -> Moments {
    let n = values.len();
    let m = mean(values);
    if n < 2 {
        return Moments {
            n,
            mean: m,
            variance: f64::NAN,
            mean_std_error: f64::NAN,
            variance_std_error: f64::NAN,
        };
    }
    let nf = n as f64;
    let m2 = compensated_sum(values.iter().map(|v| (v - m) * (v - m))) / nf;
    let m4 = compensated_sum(values.iter().map(|v| (v - m).powi(4))) / nf;
    let variance = m2 * nf / (nf - 1.0);
    Moments {
        n,
        mean: m,
        variance,
        mean_std_error: (variance / nf).sqrt(),
        variance_std_error: ((m4 - m2 * m2).max(0.0) / nf).sqrt(),
    }
}
