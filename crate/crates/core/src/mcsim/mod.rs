//! Seeded Monte Carlo checks of the delay Cramér-Rao variance and of the
//! residual-interference approximation.
//!
//! Signals are periodic complex baseband sequences sampled at
//! `oversample · B`. Fractional delays are applied as a linear phase ramp in
//! the frequency domain, which is exact for band-limited periodic signals.
//!
//! Every trial draws from its own ChaCha20 stream, `(seed, trial index)`,
//! so results do not depend on how trials are scheduled across threads.
//! Per-trial results are collected in trial order and reduced with
//! compensated summation.

mod estimator;
mod experiments;
mod stats;
mod waveform;

pub use estimator::{matched_filter_delay, DelayEstimate, MatchedFilter};
pub use experiments::{
    crb_experiment, crb_trials, gamma_experiment, gamma_trials, residual_experiment,
    residual_trials, CrbStats, GammaStats, McReport, ResidualStats, CRB_MIN_ISNR,
    RESIDUAL_MAX_SPREAD,
};
pub use stats::{mean, sample_moments, Moments};
pub use waveform::{fractional_delay, generate_waveform, measured_gamma_sq, WaveformSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// RNG for one trial: stream `trial` of the generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
