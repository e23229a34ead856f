use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::SpectralShape;

/// Sample-level description of the simulated radar waveform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveformSpec {
    pub n_samples: usize,
    /// Samples per `1/B`.
    pub oversample: usize,
    pub spectral_shape: SpectralShape,
    /// Rescale each realisation to exactly unit mean power; otherwise only
    /// the expected power is one.
    pub unit_variance: bool,
}

impl Default for WaveformSpec {
    fn default() -> Self {
        WaveformSpec {
            n_samples: 4096,
            oversample: 8,
            spectral_shape: SpectralShape::Flat,
            unit_variance: true,
        }
    }
}

impl WaveformSpec {
    pub fn validate(&self) -> Result<()> {
        if self.oversample == 0 {
            return Err(Error::invalid("oversample must be >= 1"));
        }
        if self.n_samples / self.oversample < 2 {
            return Err(Error::invalid(format!(
                "n_samples = {} leaves fewer than 2 bins in band at oversample {}",
                self.n_samples, self.oversample
            )));
        }
        Ok(())
    }

    /// Signed DFT bin index in `[-n/2, n/2)`.
    pub(crate) fn signed_bin(&self, k: usize) -> i64 {
        signed_bin(k, self.n_samples)
    }

    /// Frequency of bin `k` in units of the signal bandwidth `B`.
    pub fn bin_frequency(&self, k: usize) -> f64 {
        self.signed_bin(k) as f64 * self.oversample as f64 / self.n_samples as f64
    }

    /// Bins strictly inside `|f| < B/2`.
    pub fn in_band(&self, k: usize) -> bool {
        match self.spectral_shape {
            SpectralShape::Flat => 2.0 * self.bin_frequency(k).abs() < 1.0,
        }
    }

    pub fn occupied_bins(&self) -> usize {
        (0..self.n_samples).filter(|&k| self.in_band(k)).count()
    }
}

fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Cached forward/inverse transforms for one length.
#[derive(Clone)]
pub(crate) struct Fourier {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fourier {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fourier {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    pub(crate) fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = x.to_vec();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse DFT including the `1/n` factor.
    pub(crate) fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inv.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }

    /// Time-domain signal with spectrum `spectrum`, delayed by
    /// `delay_samples` (circularly).
    pub(crate) fn delayed(&self, spectrum: &[Complex64], delay_samples: f64) -> Vec<Complex64> {
        let n = self.n as f64;
        let shifted: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let phase = -2.0 * std::f64::consts::PI * signed_bin(k, self.n) as f64 * delay_samples / n;
                x * Complex64::from_polar(1.0, phase)
            })
            .collect();
        self.inverse(&shifted)
    }
}

/// Draws the DFT of one waveform realisation: circular complex Gaussian
/// bins inside the band, zero outside, scaled so the time-domain mean power
/// is one.
pub(crate) fn draw_spectrum(spec: &WaveformSpec, rng: &mut ChaCha20Rng) -> Vec<Complex64> {
    let n = spec.n_samples;
    let mut spectrum: Vec<Complex64> = (0..n)
        .map(|k| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if spec.in_band(k) {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    // Parseval: mean |s|² = Σ|S|² / n².
    let energy = if spec.unit_variance {
        spectrum.iter().map(|v| v.norm_sqr()).sum::<f64>()
    } else {
        2.0 * spec.occupied_bins() as f64
    };
    let scale = n as f64 / energy.sqrt();
    spectrum.iter_mut().for_each(|v| *v *= scale);
    spectrum
}

/// Unit-variance, band-limited complex Gaussian waveform; deterministic in
/// `seed`.
pub fn generate_waveform(spec: &WaveformSpec, seed: u64) -> Result<Vec<Complex64>> {
    use rand::SeedableRng;
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let spectrum = draw_spectrum(spec, &mut rng);
    Ok(Fourier::new(spec.n_samples).inverse(&spectrum))
}

/// `x(t − delay)` for a periodic band-limited sequence, by a linear phase
/// ramp across the DFT bins.
pub fn fractional_delay(signal: &[Complex64], delay_samples: f64) -> Vec<Complex64> {
    let fourier = Fourier::new(signal.len());
    let spectrum = fourier.forward(signal);
    fourier.delayed(&spectrum, delay_samples)
}

/// `(2π B_rms)² / B²` of a sampled signal, from its periodogram.
/// `oversample` is the number of samples per `1/B`.
pub fn measured_gamma_sq(signal: &[Complex64], oversample: usize) -> f64 {
    let n = signal.len();
    let spectrum = Fourier::new(n).forward(signal);
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, x) in spectrum.iter().enumerate() {
        let f = signed_bin(k, n) as f64 * oversample as f64 / n as f64;
        let p = x.norm_sqr();
        num += f * f * p;
        den += p;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    two_pi * two_pi * num / den
}
