//! Two-subband water-filling inner bound.
//!
//! The band is split into a communications-only subband of width `αB` and a
//! mixed radar+communications subband of width `(1−α)B`. Communications
//! power is water-filled across the two; the radar keeps the mixed subband
//! and its waveform integration `κ = (1−α)TB` is held constant over the α
//! sweep, so the pulse stretches to `T_mix = κ / ((1−α)B)`.
//!
//! Both channels get power when
//! `P_com ≥ α/((1−α) μ_mix) − 1/μ_com`; below that threshold everything
//! goes to the communications-only subband. The threshold is also where the
//! closed-form power fraction reaches `β = 1`, so the split is continuous.
//! (A shorter statement of the condition, `P_com < 1/μ_com − 1/μ_mix`,
//! circulates alongside it; it does not agree with the water-filling
//! solution and is not used.)

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, RateCurve, RatePoint, CURVE_HULL, CURVE_WATERFILL};
use crate::error::{Error, Result};
use crate::num::{log2_1p, Real};
use crate::scenario::LinkBudget;

/// Default number of α grid points.
pub const DEFAULT_ALPHA_POINTS: usize = 400;

/// Lower end of the default α grid; the upper end is `1 − ALPHA_EDGE`.
pub const ALPHA_EDGE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubbandSplit<T> {
    pub alpha: T,
    pub b_com_hz: T,
    pub b_mix_hz: T,
    /// Channel gain of the communications-only subband (1/W). Infinite at α = 0.
    pub mu_com: T,
    pub mu_mix: T,
    /// Water level ν (W).
    pub nu: T,
    pub beta: T,
    pub p_com_com_w: T,
    pub p_com_mix_w: T,
    /// The dual-use condition held. At the threshold itself β = 1 and the
    /// mixed subband still gets no power.
    pub dual_use: bool,
    /// The closed-form β left `[0, 1]` by rounding and was clamped.
    pub beta_clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaterfillPoint<T> {
    pub split: SubbandSplit<T>,
    pub r_com_com: T,
    pub r_com_mix: T,
    pub r_est: T,
    pub kappa: T,
    /// `T_mix ≤ T_pri`. Points that fail are kept for diagnostics but left
    /// out of the published curve.
    pub self_consistent: bool,
}

impl<T: Real> WaterfillPoint<T> {
    pub fn r_com(&self) -> T {
        self.r_com_com + self.r_com_mix
    }

    pub fn rate_point(&self) -> RatePoint<T> {
        RatePoint::new(self.r_est, self.r_com())
    }
}

/// A water-filling sweep: the published curve plus every evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillCurve<T> {
    pub curve: RateCurve<T>,
    pub points: Vec<WaterfillPoint<T>>,
}

/// `n` uniform points on `[ALPHA_EDGE, 1 − ALPHA_EDGE]`; a single point is
/// placed at α = 0.5.
pub fn default_alpha_grid<T: Real>(n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![T::lit(0.5)],
        _ => {
            let lo = ALPHA_EDGE;
            let hi = 1.0 - ALPHA_EDGE;
            (0..n)
                .map(|i| T::lit(lo + (hi - lo) * i as f64 / (n - 1) as f64))
                .collect()
        }
    }
}

fn check_open_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn mixed_int_plus_noise<T: Real>(lb: &LinkBudget<T>, alpha: T) -> Result<T> {
    let (a_sq, proc) = lb.single_target()?;
    let mix = T::one() - alpha;
    let b = lb.bandwidth_hz;
    Ok(a_sq * lb.radar_power_w * mix * mix * lb.gamma_sq * b * b * proc
        + lb.thermal_density() * mix * b)
}

/// Effective channel gains `(μ_com, μ_mix)` of the two subbands.
pub fn subband_channels<T: Real>(lb: &LinkBudget<T>, alpha: T) -> Result<(T, T)> {
    lb.single_target()?;
    check_open_alpha(alpha)?;
    let mu_com = lb.b_sq / (lb.thermal_density() * alpha * lb.bandwidth_hz);
    let mu_mix = lb.b_sq / mixed_int_plus_noise(lb, alpha)?;
    Ok((mu_com, mu_mix))
}

/// Water-filled split of `P_com` between the two subbands.
pub fn power_split<T: Real>(lb: &LinkBudget<T>, alpha: T) -> Result<SubbandSplit<T>> {
    let (mu_com, mu_mix) = subband_channels(lb, alpha)?;
    let p = lb.comms_power_w;
    let one = T::one();
    let mix = one - alpha;
    let threshold = alpha / (mix * mu_mix) - one / mu_com;
    let dual_use = p >= threshold;

    let (nu, raw_beta) = if dual_use {
        let nu = p + one / mu_com + one / mu_mix;
        (nu, alpha + ((alpha - one) / mu_com + alpha / mu_mix) / p)
    } else {
        ((p + one / mu_com) / alpha, one)
    };
    let beta = raw_beta.max(T::zero()).min(one);
    let beta_clamped = beta != raw_beta;

    let p_com_com_w = beta * p;
    Ok(SubbandSplit {
        alpha,
        b_com_hz: alpha * lb.bandwidth_hz,
        b_mix_hz: lb.bandwidth_hz - alpha * lb.bandwidth_hz,
        mu_com,
        mu_mix,
        nu,
        beta,
        p_com_com_w,
        p_com_mix_w: p - p_com_com_w,
        dual_use,
        beta_clamped,
    })
}

/// Total communications rate (bits/s) for an arbitrary power fraction β.
/// Used to check the closed-form split against a search over β.
pub fn total_comms_rate<T: Real>(lb: &LinkBudget<T>, alpha: T, beta: T) -> Result<T> {
    let (mu_com, mu_mix) = subband_channels(lb, alpha)?;
    let b = lb.bandwidth_hz;
    let p = lb.comms_power_w;
    Ok(alpha * b * log2_1p(beta * p * mu_com)
        + (T::one() - alpha) * b * log2_1p((T::one() - beta) * p * mu_mix))
}

fn mixed_est_rate<T: Real>(lb: &LinkBudget<T>, alpha: T, kappa: T) -> Result<T> {
    let (a_sq, proc) = lb.single_target()?;
    let b_mix = (T::one() - alpha) * lb.bandwidth_hz;
    let snr = proc * lb.gamma_sq * b_mix * kappa * a_sq * lb.radar_power_w / lb.thermal_density();
    Ok(b_mix * (lb.duty_factor / kappa) * log2_1p(snr))
}

fn is_self_consistent<T: Real>(lb: &LinkBudget<T>, alpha: T, kappa: T) -> bool {
    let t_mix = kappa / ((T::one() - alpha) * lb.bandwidth_hz);
    t_mix <= lb.pri_s()
}

/// Rates at one bandwidth split, with waveform integration `kappa` held
/// fixed.
pub fn waterfill_point<T: Real>(lb: &LinkBudget<T>, alpha: T, kappa: T) -> Result<WaterfillPoint<T>> {
    if !(kappa > T::zero()) {
        return Err(Error::invalid(format!("kappa must be > 0, got {kappa}")));
    }
    let split = power_split(lb, alpha)?;
    let b = lb.bandwidth_hz;
    let p = lb.comms_power_w;
    let r_com_com = alpha * b * log2_1p(split.beta * p * lb.b_sq / (lb.thermal_density() * alpha * b));
    let r_com_mix = if split.p_com_mix_w > T::zero() {
        let int_n = mixed_int_plus_noise(lb, alpha)?;
        split.b_mix_hz * log2_1p(lb.b_sq * split.p_com_mix_w / int_n)
    } else {
        T::zero()
    };
    Ok(WaterfillPoint {
        split,
        r_com_com,
        r_com_mix,
        r_est: mixed_est_rate(lb, alpha, kappa)?,
        kappa,
        self_consistent: is_self_consistent(lb, alpha, kappa),
    })
}

/// The α → 0⁺ limit: the whole band is mixed-use and all power goes there.
fn sic_limit_point<T: Real>(lb: &LinkBudget<T>, kappa: T) -> Result<WaterfillPoint<T>> {
    lb.single_target()?;
    let z = T::zero();
    let int_n = mixed_int_plus_noise(lb, z)?;
    let mu_mix = lb.b_sq / int_n;
    let p = lb.comms_power_w;
    let split = SubbandSplit {
        alpha: z,
        b_com_hz: z,
        b_mix_hz: lb.bandwidth_hz,
        mu_com: T::infinity(),
        mu_mix,
        nu: p + T::one() / mu_mix,
        beta: z,
        p_com_com_w: z,
        p_com_mix_w: p,
        dual_use: true,
        beta_clamped: false,
    };
    Ok(WaterfillPoint {
        split,
        r_com_com: z,
        r_com_mix: lb.bandwidth_hz * log2_1p(lb.b_sq * p / int_n),
        r_est: mixed_est_rate(lb, z, kappa)?,
        kappa,
        self_consistent: is_self_consistent(lb, z, kappa),
    })
}

/// Evaluates the water-filling bound over `alpha_grid` (values in `[0, 1)`,
/// sorted). α = 0 is taken as the SIC-vertex limit. Grid points are
/// evaluated in parallel; output order follows the grid.
pub fn waterfill_curve<T: Real>(
    lb: &LinkBudget<T>,
    alpha_grid: &[T],
    kappa: T,
) -> Result<WaterfillCurve<T>> {
    lb.single_target()?;
    if alpha_grid.is_empty() {
        return Err(Error::invalid("alpha grid is empty"));
    }
    if alpha_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("alpha grid must be sorted ascending"));
    }
    let points = alpha_grid
        .par_iter()
        .map(|&alpha| {
            if alpha == T::zero() {
                sic_limit_point(lb, kappa)
            } else {
                waterfill_point(lb, alpha, kappa)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let published: Vec<_> = points
        .iter()
        .filter(|p| p.self_consistent)
        .map(WaterfillPoint::rate_point)
        .collect();
    if published.is_empty() {
        return Err(Error::invalid(
            "no self-consistent alpha in the grid (pulse longer than the PRI everywhere)",
        ));
    }
    Ok(WaterfillCurve {
        curve: RateCurve::new(CURVE_WATERFILL, published)?,
        points,
    })
}

fn cross<T: Real>(o: RatePoint<T>, a: RatePoint<T>, b: RatePoint<T>) -> T {
    (a.r_est - o.r_est) * (b.r_com - o.r_com) - (a.r_com - o.r_com) * (b.r_est - o.r_est)
}

/// Upper-left (Pareto) convex hull of achievable rate points.
///
/// Achievable regions are closed downward, so the hull is anchored at
/// `(0, max r_com)` and runs to the point of largest `r_est`. The result is
/// concave with nonincreasing `r_com`; collinear interior points are
/// dropped.
pub fn upper_convex_hull<T: Real>(points: &[RatePoint<T>]) -> Result<RateCurve<T>> {
    if points.len() < 2 {
        return Err(Error::invalid(format!(
            "hull needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !p.r_est.is_finite() || !p.r_com.is_finite()) {
        return Err(Error::invalid("hull points must be finite"));
    }
    let max_com = points
        .iter()
        .map(|p| p.r_com)
        .fold(T::neg_infinity(), T::max);

    let mut pts: Vec<RatePoint<T>> = points.to_vec();
    pts.push(RatePoint::new(T::zero(), max_com));
    pts.sort_by(|a, b| {
        a.r_est
            .partial_cmp(&b.r_est)
            .unwrap()
            .then(b.r_com.partial_cmp(&a.r_com).unwrap())
    });
    // Keep the highest r_com for each r_est.
    pts.dedup_by(|later, earlier| later.r_est == earlier.r_est);

    let mut hull: Vec<RatePoint<T>> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= T::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    RateCurve::new(CURVE_HULL, hull)
}

/// Convenience: hull of the interpolated segment and a water-filling curve.
pub fn inner_hull<T: Real>(lb: &LinkBudget<T>, wf: &RateCurve<T>) -> Result<RateCurve<T>> {
    let mut pool = bounds::interpolated_inner(lb)?.points;
    pool.extend_from_slice(&wf.points);
    upper_convex_hull(&pool)
}
