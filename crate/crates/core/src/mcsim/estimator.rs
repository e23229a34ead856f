use std::ops::Range;

use num_complex::Complex64;

use super::waveform::Fourier;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    /// Estimated lag in (fractional) samples.
    pub lag_samples: f64,
    pub delay_s: f64,
    /// Correlation magnitude at the integer peak.
    pub peak_magnitude: f64,
    /// No usable peak (zero or non-finite correlation); the lag is then the
    /// window start and carries no information.
    pub degenerate: bool,
}

/// Circular matched filter for sequences of a fixed length.
#[derive(Clone)]
pub struct MatchedFilter {
    fourier: Fourier,
}

impl MatchedFilter {
    pub fn new(n: usize) -> Self {
        MatchedFilter {
            fourier: Fourier::new(n),
        }
    }

    /// `|Σ_n z[n] s*[n − k]|` for every lag `k`.
    pub fn correlation_magnitude(&self, observed: &[Complex64], reference: &[Complex64]) -> Vec<f64> {
        let z = self.fourier.forward(observed);
        let s = self.fourier.forward(reference);
        let prod: Vec<Complex64> = z.iter().zip(&s).map(|(a, b)| a * b.conj()).collect();
        self.fourier.inverse(&prod).iter().map(|v| v.norm()).collect()
    }

    /// Lag in `window` maximising the correlation magnitude, refined by a
    /// three-point parabola through the peak and its neighbours.
    pub fn estimate(
        &self,
        observed: &[Complex64],
        reference: &[Complex64],
        window: Range<usize>,
        sample_period_s: f64,
    ) -> Result<DelayEstimate> {
        let n = self.fourier.len();
        if observed.len() != n || reference.len() != n {
            return Err(Error::invalid(format!(
                "matched filter built for {n} samples, got {} and {}",
                observed.len(),
                reference.len()
            )));
        }
        if window.is_empty() {
            return Err(Error::invalid("search window is empty"));
        }
        if window.end > n {
            return Err(Error::invalid(format!(
                "search window {window:?} exceeds {n} samples"
            )));
        }
        let mag = self.correlation_magnitude(observed, reference);

        let mut peak = window.start;
        for k in window.clone() {
            if mag[k] > mag[peak] {
                peak = k;
            }
        }
        let y1 = mag[peak];
        if !(y1.is_finite() && y1 > 0.0) {
            return Ok(DelayEstimate {
                lag_samples: window.start as f64,
                delay_s: window.start as f64 * sample_period_s,
                peak_magnitude: y1,
                degenerate: true,
            });
        }
        let y0 = mag[(peak + n - 1) % n];
        let y2 = mag[(peak + 1) % n];
        let curvature = y0 - 2.0 * y1 + y2;
        let offset = if curvature < 0.0 {
            (0.5 * (y0 - y2) / curvature).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        let lag = peak as f64 + offset;
        Ok(DelayEstimate {
            lag_samples: lag,
            delay_s: lag * sample_period_s,
            peak_magnitude: y1,
            degenerate: false,
        })
    }
}

/// One-shot matched-filter delay estimate; see [`MatchedFilter::estimate`].
pub fn matched_filter_delay(
    observed: &[Complex64],
    reference: &[Complex64],
    window: Range<usize>,
    sample_period_s: f64,
) -> Result<DelayEstimate> {
    MatchedFilter::new(reference.len()).estimate(observed, reference, window, sample_period_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcsim::{fractional_delay, generate_waveform, WaveformSpec};

    fn spec() -> WaveformSpec {
        WaveformSpec {
            n_samples: 1024,
            oversample: 8,
            ..WaveformSpec::default()
        }
    }

    /// Dense brute-force search: correlate against the reference shifted by
    /// every candidate lag on a fine grid, summing directly in time.
    fn dense_argmax(observed: &[Complex64], reference: &[Complex64], lo: f64, hi: f64, step: f64) -> f64 {
        let mut best = (lo, f64::NEG_INFINITY);
        let mut lag = lo;
        while lag <= hi {
            let shifted = fractional_delay(reference, lag);
            let c: Complex64 = observed.iter().zip(&shifted).map(|(z, s)| z * s.conj()).sum();
            if c.norm() > best.1 {
                best = (lag, c.norm());
            }
            lag += step;
        }
        best.0
    }

    #[test]
    fn integer_delay_recovered_exactly() {
        let s = generate_waveform(&spec(), 5).unwrap();
        let z = fractional_delay(&s, 37.0);
        let est = matched_filter_delay(&z, &s, 20..60, 1e-7).unwrap();
        assert!((est.lag_samples - 37.0).abs() < 1e-9);
        assert!((est.delay_s - 37.0e-7).abs() < 1e-15);
        assert!(!est.degenerate);
    }

    #[test]
    fn half_sample_delay_matches_dense_search() {
        let s = generate_waveform(&spec(), 9).unwrap();
        let z = fractional_delay(&s, 100.5);
        let est = matched_filter_delay(&z, &s, 80..120, 1.0).unwrap();
        let oracle = dense_argmax(&z, &s, 99.0, 102.0, 0.01);
        assert!((oracle - 100.5).abs() < 0.011);
        assert!((est.lag_samples - oracle).abs() < 0.05, "{} vs {}", est.lag_samples, oracle);
    }

    #[test]
    fn zero_signal_is_flagged() {
        let s = generate_waveform(&spec(), 1).unwrap();
        let z = vec![Complex64::new(0.0, 0.0); s.len()];
        let est = matched_filter_delay(&z, &s, 10..20, 1.0).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.lag_samples, 10.0);
    }

    #[test]
    fn bad_windows_rejected() {
        let s = generate_waveform(&spec(), 1).unwrap();
        assert!(matched_filter_delay(&s, &s, 5..5, 1.0).is_err());
        assert!(matched_filter_delay(&s, &s, 0..2000, 1.0).is_err());
        assert!(matched_filter_delay(&s[..10], &s, 0..5, 1.0).is_err());
    }
}
