//! Closed-form rate bounds.
//!
//! Rates are in bits/s except for the multiple-access pentagon, which is in
//! bits per channel use with unit noise power. All logarithms are base 2 and
//! signals are complex baseband, so no factor 1/2 appears in front of them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{log2_1p, Real};
use crate::scenario::LinkBudget;
use crate::waterfill::{self, WaterfillPoint};

pub const CURVE_OUTER: &str = "outer";
pub const CURVE_SIC: &str = "sic";
pub const CURVE_INTERPOLATED: &str = "interpolated";
pub const CURVE_WATERFILL: &str = "waterfill";
pub const CURVE_HULL: &str = "hull";

/// A point in the (estimation rate, communications rate) plane, bits/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint<T> {
    pub r_est: T,
    pub r_com: T,
}

impl<T: Real> RatePoint<T> {
    pub fn new(r_est: T, r_com: T) -> Self {
        RatePoint { r_est, r_com }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve<T> {
    pub label: String,
    pub points: Vec<RatePoint<T>>,
}

impl<T: Real> RateCurve<T> {
    /// Rejects empty curves and NaN coordinates.
    pub fn new(label: impl Into<String>, points: Vec<RatePoint<T>>) -> Result<Self> {
        let label = label.into();
        if points.is_empty() {
            return Err(Error::invalid(format!("curve `{label}` has no points")));
        }
        if points.iter().any(|p| p.r_est.is_nan() || p.r_com.is_nan()) {
            return Err(Error::invalid(format!("curve `{label}` has a NaN coordinate")));
        }
        Ok(RateCurve { label, points })
    }

    /// Linear interpolation of `r_com` at `r_est` along a polyline whose
    /// points are ordered by nondecreasing `r_est`. `None` outside the span.
    pub fn r_com_at(&self, r_est: T) -> Option<T> {
        let pts = &self.points;
        let first = pts.first()?;
        let last = pts.last()?;
        if r_est < first.r_est || r_est > last.r_est {
            return None;
        }
        if pts.len() == 1 {
            return Some(first.r_com);
        }
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            if r_est >= p.r_est && r_est <= q.r_est {
                let span = q.r_est - p.r_est;
                if span <= T::zero() {
                    return Some(p.r_com.max(q.r_com));
                }
                let t = (r_est - p.r_est) / span;
                return Some(p.r_com + (q.r_com - p.r_com) * t);
            }
        }
        None
    }
}

/// Two-user multiple-access pentagon, bits per channel use at unit noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PentagonRegion<T> {
    pub r1_max: T,
    pub r2_max: T,
    pub sum_max: T,
    /// User 2 at full rate, user 1 decoded after it: `(log2(1 + s1/(1+s2)), log2(1+s2))`.
    pub vertex_a: [T; 2],
    /// User 1 at full rate: `(log2(1+s1), log2(1 + s2/(1+s1)))`.
    pub vertex_b: [T; 2],
}

impl<T: Real> PentagonRegion<T> {
    /// Largest constraint violation of `(r1, r2)` relative to each
    /// constraint's bound; `<= 0` means inside.
    pub fn max_violation(&self, r1: T, r2: T) -> T {
        let rel = |v: T, bound: T| {
            if bound > T::zero() {
                (v - bound) / bound
            } else {
                v - bound
            }
        };
        rel(r1, self.r1_max)
            .max(rel(r2, self.r2_max))
            .max(rel(r1 + r2, self.sum_max))
    }

    /// Corner points of the pentagon, counter-clockwise from the origin.
    pub fn polygon(&self) -> [[T; 2]; 5] {
        let z = T::zero();
        [
            [z, z],
            [self.r1_max, z],
            self.vertex_b,
            self.vertex_a,
            [z, self.r2_max],
        ]
    }
}

pub fn ma_pentagon<T: Real>(snr1: T, snr2: T) -> Result<PentagonRegion<T>> {
    if !(snr1 >= T::zero() && snr2 >= T::zero()) || snr1.is_infinite() || snr2.is_infinite() {
        return Err(Error::invalid(format!(
            "SNRs must be finite and nonnegative, got ({snr1}, {snr2})"
        )));
    }
    let one = T::one();
    let r1_max = log2_1p(snr1);
    let r2_max = log2_1p(snr2);
    Ok(PentagonRegion {
        r1_max,
        r2_max,
        sum_max: log2_1p(snr1 + snr2),
        vertex_a: [log2_1p(snr1 / (one + snr2)), r2_max],
        vertex_b: [r1_max, log2_1p(snr2 / (one + snr1))],
    })
}

/// Delay estimation variance (s²) at the Cramér-Rao bound for one target,
/// `k_B T_temp / (γ² B (TB) a²_m P_radar)`.
///
/// This equals `1 / ((2π B_rms)² ISNR)`, which assumes `σ²_noise` is the
/// noise variance per quadrature component; see `mcsim` for how the
/// simulation realises that convention.
pub fn crb_delay_variance<T: Real>(lb: &LinkBudget<T>, target: usize) -> Result<T> {
    let (a_sq, _) = lb.target(target)?;
    let signal = a_sq * lb.radar_power_w;
    if !(signal > T::zero()) {
        return Err(Error::DegenerateLink { target });
    }
    Ok(lb.thermal_density() / (lb.gamma_sq * lb.bandwidth_hz * lb.time_bandwidth * signal))
}

/// Same quantity via `σ²_noise / (γ² B² TB a² P_radar)`.
pub fn crb_delay_variance_noise_form<T: Real>(lb: &LinkBudget<T>, target: usize) -> Result<T> {
    let (a_sq, _) = lb.target(target)?;
    let signal = a_sq * lb.radar_power_w;
    if !(signal > T::zero()) {
        return Err(Error::DegenerateLink { target });
    }
    let b = lb.bandwidth_hz;
    Ok(lb.noise_power_w / (lb.gamma_sq * b * b * lb.time_bandwidth * signal))
}

/// Differential entropy in bits of a circular complex Gaussian with the
/// given variance, `log2(π e σ²)`.
pub fn estimation_entropy<T: Real>(variance: T) -> Result<T> {
    if !(variance > T::zero()) || variance.is_infinite() {
        return Err(Error::invalid(format!(
            "entropy needs a finite positive variance, got {variance}"
        )));
    }
    Ok((T::PI() * T::E() * variance).log2())
}

/// Estimation-rate outer bound (bits/s) summed over targets:
/// `Σ_m (δ/T) log2(1 + σ²_τ,proc / σ²_τ,est)`.
pub fn est_outer_rate<T: Real>(lb: &LinkBudget<T>) -> Result<T> {
    let per_pri = lb.duty_factor / lb.pulse_duration_s();
    let mut total = T::zero();
    for m in 0..lb.target_count() {
        let est = crb_delay_variance(lb, m)?;
        total = total + per_pri * log2_1p(lb.sigma_tau_proc_sq[m] / est);
    }
    Ok(total)
}

/// Entropy-difference form: `Σ_m (h_rr − h_est) / T_pri`.
pub fn est_outer_rate_entropy_form<T: Real>(lb: &LinkBudget<T>) -> Result<T> {
    let pri = lb.pri_s();
    let mut total = T::zero();
    for m in 0..lb.target_count() {
        let est = crb_delay_variance(lb, m)?;
        let h_est = estimation_entropy(est)?;
        let h_rr = estimation_entropy(lb.sigma_tau_proc_sq[m] + est)?;
        total = total + (h_rr - h_est) / pri;
    }
    Ok(total)
}

/// Expanded form:
/// `Σ_m B log2[(1 + σ²_proc γ² B (TB) a²_m P_radar / (k_B T_temp))^(δ/TB)]`.
pub fn est_outer_rate_snr_form<T: Real>(lb: &LinkBudget<T>) -> Result<T> {
    let mut total = T::zero();
    for m in 0..lb.target_count() {
        let (a_sq, proc) = lb.target(m)?;
        if !(a_sq * lb.radar_power_w > T::zero()) {
            return Err(Error::DegenerateLink { target: m });
        }
        let snr = proc * lb.gamma_sq * lb.bandwidth_hz * lb.time_bandwidth * a_sq * lb.radar_power_w
            / lb.thermal_density();
        let exponent = lb.duty_factor / lb.time_bandwidth;
        total = total + lb.bandwidth_hz * (exponent * log2_1p(snr));
    }
    Ok(total)
}

/// Interference-plus-noise power (W) after the predicted radar return is
/// subtracted, over a band of width `bandwidth_hz`:
/// `P_radar Σ_m a²_m γ² B_band² σ²_τ,proc,m + k_B T_temp B_band`.
pub fn int_plus_noise_variance<T: Real>(lb: &LinkBudget<T>, bandwidth_hz: T) -> Result<T> {
    if !(bandwidth_hz > T::zero() && bandwidth_hz <= lb.bandwidth_hz) {
        return Err(Error::invalid(format!(
            "band width {bandwidth_hz} Hz must lie in (0, {}]",
            lb.bandwidth_hz
        )));
    }
    let bw_sq = bandwidth_hz * bandwidth_hz;
    let residual = lb
        .a_sq
        .iter()
        .zip(&lb.sigma_tau_proc_sq)
        .fold(T::zero(), |acc, (&a, &s)| acc + a * lb.gamma_sq * bw_sq * s);
    Ok(lb.radar_power_w * residual + lb.thermal_density() * bandwidth_hz)
}

/// Communications rate with no radar in the band, `B log2(1 + b² P_com / σ²_noise)`.
pub fn comms_outer_rate<T: Real>(lb: &LinkBudget<T>) -> T {
    lb.bandwidth_hz * log2_1p(lb.b_sq * lb.comms_power_w / lb.noise_power_w)
}

/// Communications rate decoded against the residual radar interference,
/// `B log2(1 + b² P_com / σ²_int+n)`.
pub fn sic_comms_rate<T: Real>(lb: &LinkBudget<T>) -> T {
    let int_n = int_plus_noise_variance(lb, lb.bandwidth_hz)
        .expect("full band is always a valid sub-band");
    lb.bandwidth_hz * log2_1p(lb.b_sq * lb.comms_power_w / int_n)
}

/// The SIC vertex `(est_outer_rate, sic_comms_rate)`.
pub fn sic_vertex<T: Real>(lb: &LinkBudget<T>) -> Result<RatePoint<T>> {
    Ok(RatePoint::new(est_outer_rate(lb)?, sic_comms_rate(lb)))
}

/// Segment from the radar-free communications point to the SIC vertex.
pub fn interpolated_inner<T: Real>(lb: &LinkBudget<T>) -> Result<RateCurve<T>> {
    lb.single_target()?;
    let start = RatePoint::new(T::zero(), comms_outer_rate(lb));
    RateCurve::new(CURVE_INTERPOLATED, vec![start, sic_vertex(lb)?])
}

/// The curves of the rate-region figure plus the per-α water-filling
/// diagnostics (including points excluded from the published curve).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRegion<T> {
    pub curves: Vec<RateCurve<T>>,
    pub waterfill_points: Vec<WaterfillPoint<T>>,
}

impl<T: Real> RateRegion<T> {
    pub fn curve(&self, label: &str) -> Option<&RateCurve<T>> {
        self.curves.iter().find(|c| c.label == label)
    }
}

/// Outer rectangle, SIC line, interpolated segment, water-filling curve and
/// the upper convex hull of the two inner bounds.
///
/// The outer region is drawn as a rectangle; no joint
/// estimation/communications sum constraint is assumed.
pub fn rate_region<T: Real>(lb: &LinkBudget<T>, alpha_grid: &[T]) -> Result<RateRegion<T>> {
    if alpha_grid.is_empty() {
        return Err(Error::invalid("alpha grid is empty"));
    }
    if alpha_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("alpha grid must be sorted ascending"));
    }
    let r_est = est_outer_rate(lb)?;
    let r_com = comms_outer_rate(lb);
    let r_sic = sic_comms_rate(lb);
    let z = T::zero();

    let outer = RateCurve::new(
        CURVE_OUTER,
        vec![
            RatePoint::new(z, r_com),
            RatePoint::new(r_est, r_com),
            RatePoint::new(r_est, z),
        ],
    )?;
    let sic = RateCurve::new(
        CURVE_SIC,
        vec![RatePoint::new(z, r_sic), RatePoint::new(r_est, r_sic)],
    )?;
    let interpolated = interpolated_inner(lb)?;
    let wf = waterfill::waterfill_curve(lb, alpha_grid, lb.time_bandwidth)?;

    let hull = waterfill::inner_hull(lb, &wf.curve)?;

    Ok(RateRegion {
        curves: vec![outer, sic, interpolated, wf.curve, hull],
        waterfill_points: wf.points,
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::scenario::Scenario;

    fn table2() -> LinkBudget<f64> {
        Scenario::table2().link_budget().unwrap()
    }

    fn no_process() -> LinkBudget<f64> {
        let mut s = Scenario::<f64>::table2();
        s.set_field("process_range_std_m", 0.0).unwrap();
        s.link_budget().unwrap()
    }

    #[test]
    fn pentagon_examples() {
        let p = ma_pentagon(1.0_f64, 1.0).unwrap();
        assert_eq!(p.r1_max, 1.0);
        assert_eq!(p.r2_max, 1.0);
        assert_relative_eq!(p.sum_max, 3f64.log2(), max_relative = 1e-15);
        assert_relative_eq!(p.vertex_a[0], 1.5f64.log2(), max_relative = 1e-15);
        assert_eq!(p.vertex_a[1], 1.0);
        assert_relative_eq!(p.vertex_b[1], 1.5f64.log2(), max_relative = 1e-15);

        let d = ma_pentagon(0.0_f64, 3.0).unwrap();
        assert_eq!(d.r1_max, 0.0);
        assert_eq!(d.vertex_a, [0.0, 2.0]);
        assert_eq!(d.vertex_b, [0.0, 2.0]);

        assert!(ma_pentagon(-1.0_f64, 1.0).is_err());
        assert!(ma_pentagon(f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn pentagon_vertices_on_sum_constraint(s1 in 0.0f64..1e6, s2 in 0.0f64..1e6) {
            let p = ma_pentagon(s1, s2).unwrap();
            for v in [p.vertex_a, p.vertex_b] {
                prop_assert!(p.max_violation(v[0], v[1]) <= 1e-12);
                let sum = v[0] + v[1];
                prop_assert!((sum - p.sum_max).abs() <= 1e-12 * p.sum_max.max(f64::MIN_POSITIVE));
            }
        }
    }

    #[test]
    fn crb_table2() {
        let lb = table2();
        let v = crb_delay_variance(&lb, 0).unwrap();
        assert_relative_eq!(v, 1.6678826205345422e-14, max_relative = 1e-12);
        let sigma_m = crate::scenario::range_from_delay(v.sqrt());
        assert_relative_eq!(sigma_m, 19.358577832130091, max_relative = 1e-12);
    }

    #[test]
    fn crb_scales_inverse_with_radar_power() {
        let mut lb = table2();
        let v1 = crb_delay_variance(&lb, 0).unwrap();
        lb.radar_power_w *= 2.0;
        let v2 = crb_delay_variance(&lb, 0).unwrap();
        assert_relative_eq!(v2, v1 / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn crb_degenerate_link() {
        let mut lb = table2();
        lb.a_sq[0] = 0.0;
        assert!(matches!(crb_delay_variance(&lb, 0), Err(Error::DegenerateLink { target: 0 })));
        assert!(est_outer_rate(&lb).is_err());
    }

    #[test]
    fn entropy_values() {
        let pe = std::f64::consts::PI * std::f64::consts::E;
        assert_relative_eq!(estimation_entropy(1.0 / pe).unwrap(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(estimation_entropy(4.0 / pe).unwrap(), 2.0, max_relative = 1e-15);
        assert!(estimation_entropy(0.0_f64).is_err());
        assert!(estimation_entropy(-1.0_f64).is_err());
    }

    proptest! {
        #[test]
        fn entropy_difference_identity(p in 1e-20f64..1e-6, e in 1e-20f64..1e-6) {
            let diff = estimation_entropy(p + e).unwrap() - estimation_entropy(e).unwrap();
            let expected = (p / e).ln_1p() / std::f64::consts::LN_2;
            prop_assert!((diff - expected).abs() <= 1e-9 * expected.max(1e-3));
        }
    }

    #[test]
    fn est_rate_table2() {
        let r = est_outer_rate(&table2()).unwrap();
        assert_relative_eq!(r, 2395.4937267385486, max_relative = 1e-12);
    }

    #[test]
    fn est_rate_zero_process() {
        assert_eq!(est_outer_rate(&no_process()).unwrap(), 0.0);
        assert_eq!(est_outer_rate_entropy_form(&no_process()).unwrap(), 0.0);
    }

    #[test]
    fn est_rate_two_identical_targets_doubles() {
        let mut s = Scenario::<f64>::table2();
        let r1 = est_outer_rate(&s.link_budget().unwrap()).unwrap();
        s.targets.push(s.targets[0]);
        let r2 = est_outer_rate(&s.link_budget().unwrap()).unwrap();
        assert_eq!(r2, 2.0 * r1);
    }

    #[test]
    fn est_rate_forms_agree_table2() {
        let lb = table2();
        let a = est_outer_rate(&lb).unwrap();
        assert_relative_eq!(est_outer_rate_snr_form(&lb).unwrap(), a, max_relative = 1e-12);
        assert_relative_eq!(est_outer_rate_entropy_form(&lb).unwrap(), a, max_relative = 1e-12);
    }

    #[test]
    fn int_plus_noise_table2() {
        let lb = table2();
        let v = int_plus_noise_variance(&lb, lb.bandwidth_hz).unwrap();
        assert_relative_eq!(v, 8.7453161006006405e-14, max_relative = 1e-12);
        assert!(int_plus_noise_variance(&lb, 2.0 * lb.bandwidth_hz).is_err());
        assert!(int_plus_noise_variance(&lb, 0.0).is_err());
    }

    #[test]
    fn int_plus_noise_thermal_only() {
        let lb = no_process();
        let full = int_plus_noise_variance(&lb, lb.bandwidth_hz).unwrap();
        assert_eq!(full, crate::scenario::noise_power(lb.temperature_k, lb.bandwidth_hz));
        let half = int_plus_noise_variance(&lb, lb.bandwidth_hz / 2.0).unwrap();
        assert_relative_eq!(half, full / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn comms_rates_table2() {
        let lb = table2();
        assert_relative_eq!(comms_outer_rate(&lb), 4690729.2689133164, max_relative = 1e-12);
        assert_relative_eq!(sic_comms_rate(&lb), 3925069.061884352, max_relative = 1e-12);
    }

    #[test]
    fn comms_outer_unit_snr_and_zero_power() {
        let mut lb = table2();
        lb.comms_power_w = lb.noise_power_w / lb.b_sq;
        assert_relative_eq!(comms_outer_rate(&lb), lb.bandwidth_hz, max_relative = 1e-14);
        lb.comms_power_w = 0.0;
        assert_eq!(comms_outer_rate(&lb), 0.0);
    }

    #[test]
    fn sic_equals_outer_without_process() {
        let lb = no_process();
        assert_eq!(sic_comms_rate(&lb), comms_outer_rate(&lb));
    }

    #[test]
    fn interpolated_segment() {
        let lb = table2();
        let c = interpolated_inner(&lb).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.points[0], RatePoint::new(0.0, comms_outer_rate(&lb)));
        assert_eq!(c.points[1], sic_vertex(&lb).unwrap());
        assert!(c.points[1].r_com <= c.points[0].r_com);

        let d = interpolated_inner(&no_process()).unwrap();
        assert_eq!(d.points[0], d.points[1]);

        let mut s = Scenario::<f64>::table2();
        s.targets.push(s.targets[0]);
        let multi = s.link_budget().unwrap();
        assert!(matches!(interpolated_inner(&multi), Err(Error::MultiTarget { count: 2 })));
    }

    #[test]
    fn region_curve_inventory() {
        let lb = table2();
        let grid = waterfill::default_alpha_grid::<f64>(200);
        let region = rate_region(&lb, &grid).unwrap();
        let labels: Vec<_> = region.curves.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, [CURVE_OUTER, CURVE_SIC, CURVE_INTERPOLATED, CURVE_WATERFILL, CURVE_HULL]);

        let interp = region.curve(CURVE_INTERPOLATED).unwrap();
        let wf = region.curve(CURVE_WATERFILL).unwrap();
        let above = wf
            .points
            .iter()
            .filter(|p| p.r_com > interp.r_com_at(p.r_est).unwrap())
            .count();
        assert!(above >= 1);

        let hull = region.curve(CURVE_HULL).unwrap();
        let slopes: Vec<f64> = hull
            .points
            .windows(2)
            .map(|w| (w[1].r_com - w[0].r_com) / (w[1].r_est - w[0].r_est))
            .collect();
        assert!(slopes.windows(2).all(|s| s[1] <= s[0]));
    }

    #[test]
    fn region_alpha_zero_is_sic_vertex() {
        let lb = table2();
        let region = rate_region(&lb, &[0.0]).unwrap();
        let wf = region.curve(CURVE_WATERFILL).unwrap();
        assert_eq!(wf.points.len(), 1);
        let v = sic_vertex(&lb).unwrap();
        assert_relative_eq!(wf.points[0].r_est, v.r_est, max_relative = 1e-12);
        assert_relative_eq!(wf.points[0].r_com, v.r_com, max_relative = 1e-12);
    }

    #[test]
    fn region_rejects_unsorted_grid() {
        assert!(rate_region(&table2(), &[0.5, 0.2]).is_err());
        assert!(rate_region(&table2(), &[]).is_err());
    }

    #[test]
    fn f32_rates_track_f64() {
        let lb32 = Scenario::<f32>::table2().link_budget().unwrap();
        let lb64 = table2();
        assert_relative_eq!(
            est_outer_rate(&lb32).unwrap() as f64,
            est_outer_rate(&lb64).unwrap(),
            max_relative = 1e-4
        );
        assert_relative_eq!(sic_comms_rate(&lb32) as f64, sic_comms_rate(&lb64), max_relative = 1e-4);
    }
}
