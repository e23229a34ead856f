//! Scenario parameters and the derived link budget.
//!
//! Scenario files use the units of a typical parameter table (dBm, dBi,
//! m, m², Hz); everything is converted to SI linear quantities on load.
//!
//! The propagation model is fixed here and nowhere else:
//!
//! - radar: monostatic radar range equation,
//!   `a² = G_r² λ² σ / ((4π)³ r⁴)`;
//! - communications: free-space (Friis) loss with the communications
//!   antenna gain applied at both ends of the link,
//!   `b² = G_c² λ² / (4π r_c)²`. The communications signal arrives
//!   through a sidelobe of the radar, so the radar main-beam gain does not
//!   enter `b²`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, exact SI value (J/K).
pub const BOLTZMANN: f64 = 1.380649e-23;

const TABLE2_JSON: &str = include_str!("../data/table2.json");

/// Shape of the radar waveform's power spectral density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralShape {
    /// Flat over the occupied band.
    #[default]
    Flat,
}

impl SpectralShape {
    /// `γ²`, where `γ B = 2π B_rms`.
    pub fn gamma_sq<T: Real>(self) -> T {
        match self {
            SpectralShape::Flat => {
                let two_pi = T::PI() + T::PI();
                two_pi * two_pi / T::lit(12.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target<T> {
    pub range_m: T,
    pub cross_section_m2: T,
    /// One-sigma range fluctuation of the target about its tracked
    /// prediction. Not an estimation error.
    pub process_range_std_m: T,
}

/// Physical scenario in SI linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub bandwidth_hz: T,
    pub center_freq_hz: T,
    pub temperature_k: T,
    pub comms_range_m: T,
    pub comms_power_w: T,
    pub comms_antenna_gain_lin: T,
    pub radar_power_w: T,
    pub radar_antenna_gain_lin: T,
    pub targets: Vec<Target<T>>,
    pub time_bandwidth: T,
    pub duty_factor: T,
    pub spectral_shape: SpectralShape,
}

/// Quantities derived from a [`Scenario`] that the rate bounds consume.
///
/// Fields are public so callers can build synthetic budgets; keep
/// `noise_power_w == k_B · temperature_k · bandwidth_hz` when doing so.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget<T> {
    /// `a²_m` per target: antenna gain, cross-section and two-way propagation.
    pub a_sq: Vec<T>,
    /// `b²`: communications propagation and antenna gains.
    pub b_sq: T,
    /// `σ²_noise = k_B T B` (W).
    pub noise_power_w: T,
    /// `σ²_τ,proc` per target (s²).
    pub sigma_tau_proc_sq: Vec<T>,
    pub gamma_sq: T,
    pub temperature_k: T,
    pub bandwidth_hz: T,
    pub time_bandwidth: T,
    pub duty_factor: T,
    pub comms_power_w: T,
    pub radar_power_w: T,
}

/// Round-trip time for a target at `range_m`: `τ = 2r/c`.
pub fn delay_from_range<T: Real>(range_m: T) -> T {
    (range_m + range_m) / T::lit(SPEED_OF_LIGHT)
}

/// Inverse of [`delay_from_range`].
pub fn range_from_delay<T: Real>(delay_s: T) -> T {
    delay_s * T::lit(SPEED_OF_LIGHT) / T::lit(2.0)
}

/// Thermal noise power `k_B T B` in watts.
pub fn noise_power<T: Real>(temperature_k: T, bandwidth_hz: T) -> T {
    T::lit(BOLTZMANN) * temperature_k * bandwidth_hz
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn check_positive<T: Real>(field: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and > 0, got {v}")))
    }
}

fn check_nonnegative<T: Real>(field: &str, v: T) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and >= 0, got {v}")))
    }
}

impl<T: Real> Scenario<T> {
    /// Names accepted by [`Scenario::set_field`]. Target fields apply to
    /// every target.
    pub const FIELDS: &'static [&'static str] = &[
        "bandwidth_hz",
        "center_freq_hz",
        "temperature_k",
        "comms_range_m",
        "comms_power_w",
        "comms_antenna_gain_lin",
        "radar_power_w",
        "radar_antenna_gain_lin",
        "time_bandwidth",
        "duty_factor",
        "target_range_m",
        "cross_section_m2",
        "process_range_std_m",
    ];

    /// The bundled example scenario (`data/table2.json`).
    pub fn table2() -> Self {
        parse_scenario(TABLE2_JSON).expect("bundled scenario is valid")
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("bandwidth_hz", self.bandwidth_hz)?;
        check_positive("center_freq_hz", self.center_freq_hz)?;
        check_positive("temperature_k", self.temperature_k)?;
        check_positive("comms.range_m", self.comms_range_m)?;
        check_positive("comms.power", self.comms_power_w)?;
        check_positive("comms.antenna_gain", self.comms_antenna_gain_lin)?;
        check_positive("radar.power_w", self.radar_power_w)?;
        check_positive("radar.antenna_gain", self.radar_antenna_gain_lin)?;
        if !(self.duty_factor.is_finite()
            && self.duty_factor > T::zero()
            && self.duty_factor <= T::one())
        {
            return Err(Error::validation(
                "radar.duty_factor",
                format!("must lie in (0, 1], got {}", self.duty_factor),
            ));
        }
        if !(self.time_bandwidth.is_finite() && self.time_bandwidth >= T::one()) {
            return Err(Error::validation(
                "radar.time_bandwidth",
                format!("must be >= 1, got {}", self.time_bandwidth),
            ));
        }
        if self.targets.is_empty() {
            return Err(Error::validation("targets", "at least one target is required"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            check_positive(&format!("targets[{i}].range_m"), t.range_m)?;
            // Zero cross-section is allowed: it yields a² = 0 and the
            // estimation bounds report a degenerate link.
            check_nonnegative(&format!("targets[{i}].cross_section_m2"), t.cross_section_m2)?;
            check_nonnegative(
                &format!("targets[{i}].process_range_std_m"),
                t.process_range_std_m,
            )?;
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> T {
        T::lit(SPEED_OF_LIGHT) / self.center_freq_hz
    }

    pub fn link_budget(&self) -> Result<LinkBudget<T>> {
        derive_link_budget(self)
    }

    /// Overwrites one numeric field, then revalidates.
    pub fn set_field(&mut self, name: &str, value: T) -> Result<()> {
        match name {
            "bandwidth_hz" => self.bandwidth_hz = value,
            "center_freq_hz" => self.center_freq_hz = value,
            "temperature_k" => self.temperature_k = value,
            "comms_range_m" => self.comms_range_m = value,
            "comms_power_w" => self.comms_power_w = value,
            "comms_antenna_gain_lin" => self.comms_antenna_gain_lin = value,
            "radar_power_w" => self.radar_power_w = value,
            "radar_antenna_gain_lin" => self.radar_antenna_gain_lin = value,
            "time_bandwidth" => self.time_bandwidth = value,
            "duty_factor" => self.duty_factor = value,
            "target_range_m" => self.targets.iter_mut().for_each(|t| t.range_m = value),
            "cross_section_m2" => self
                .targets
                .iter_mut()
                .for_each(|t| t.cross_section_m2 = value),
            "process_range_std_m" => self
                .targets
                .iter_mut()
                .for_each(|t| t.process_range_std_m = value),
            _ => {
                return Err(Error::validation(
                    name,
                    format!("unknown field; valid fields: {}", Self::FIELDS.join(", ")),
                ))
            }
        }
        self.validate()
    }

    /// Casts to another scalar type.
    pub fn cast<U: Real>(&self) -> Scenario<U> {
        let c = |v: T| U::lit(v.as_f64());
        Scenario {
            bandwidth_hz: c(self.bandwidth_hz),
            center_freq_hz: c(self.center_freq_hz),
            temperature_k: c(self.temperature_k),
            comms_range_m: c(self.comms_range_m),
            comms_power_w: c(self.comms_power_w),
            comms_antenna_gain_lin: c(self.comms_antenna_gain_lin),
            radar_power_w: c(self.radar_power_w),
            radar_antenna_gain_lin: c(self.radar_antenna_gain_lin),
            targets: self
                .targets
                .iter()
                .map(|t| Target {
                    range_m: c(t.range_m),
                    cross_section_m2: c(t.cross_section_m2),
                    process_range_std_m: c(t.process_range_std_m),
                })
                .collect(),
            time_bandwidth: c(self.time_bandwidth),
            duty_factor: c(self.duty_factor),
            spectral_shape: self.spectral_shape,
        }
    }
}

/// Radar range equation for `a²` and Friis for `b²`; see the module docs.
pub fn derive_link_budget<T: Real>(s: &Scenario<T>) -> Result<LinkBudget<T>> {
    s.validate()?;
    let lambda = s.wavelength_m();
    let four_pi = T::lit(4.0) * T::PI();

    let a_sq = s
        .targets
        .iter()
        .map(|t| {
            let g = s.radar_antenna_gain_lin;
            let r2 = t.range_m * t.range_m;
            g * g * lambda * lambda * t.cross_section_m2 / (four_pi.powi(3) * r2 * r2)
        })
        .collect();

    let gc = s.comms_antenna_gain_lin;
    let path = four_pi * s.comms_range_m;
    let b_sq = gc * gc * lambda * lambda / (path * path);

    let sigma_tau_proc_sq = s
        .targets
        .iter()
        .map(|t| {
            let d = delay_from_range(t.process_range_std_m);
            d * d
        })
        .collect();

    Ok(LinkBudget {
        a_sq,
        b_sq,
        noise_power_w: noise_power(s.temperature_k, s.bandwidth_hz),
        sigma_tau_proc_sq,
        gamma_sq: s.spectral_shape.gamma_sq(),
        temperature_k: s.temperature_k,
        bandwidth_hz: s.bandwidth_hz,
        time_bandwidth: s.time_bandwidth,
        duty_factor: s.duty_factor,
        comms_power_w: s.comms_power_w,
        radar_power_w: s.radar_power_w,
    })
}

impl<T: Real> LinkBudget<T> {
    pub fn target_count(&self) -> usize {
        self.a_sq.len()
    }

    /// `k_B T_temp` (W/Hz).
    pub fn thermal_density(&self) -> T {
        T::lit(BOLTZMANN) * self.temperature_k
    }

    /// Pulse duration `T = TB / B`.
    pub fn pulse_duration_s(&self) -> T {
        self.time_bandwidth / self.bandwidth_hz
    }

    /// Pulse repetition interval, from `T = δ T_pri`.
    pub fn pri_s(&self) -> T {
        self.pulse_duration_s() / self.duty_factor
    }

    /// `ISNR = TB a²_m P_radar / σ²_noise`.
    pub fn integrated_snr(&self, target: usize) -> Result<T> {
        let a_sq = self.target(target)?.0;
        Ok(self.time_bandwidth * a_sq * self.radar_power_w / self.noise_power_w)
    }

    /// `(a²_m, σ²_τ,proc,m)` for one target.
    pub fn target(&self, index: usize) -> Result<(T, T)> {
        match (self.a_sq.get(index), self.sigma_tau_proc_sq.get(index)) {
            (Some(&a), Some(&s)) => Ok((a, s)),
            _ => Err(Error::TargetIndex {
                index,
                count: self.target_count(),
            }),
        }
    }

    /// `(a², σ²_τ,proc)` of the only target; rejects multi-target budgets.
    pub fn single_target(&self) -> Result<(T, T)> {
        if self.target_count() != 1 {
            return Err(Error::MultiTarget {
                count: self.target_count(),
            });
        }
        self.target(0)
    }
}

/// On-disk scenario schema. Units follow the usual parameter-table
/// conventions and are converted by [`ScenarioFile::into_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub bandwidth_hz: f64,
    pub center_freq_hz: f64,
    pub temperature_k: f64,
    pub comms: CommsSection,
    pub radar: RadarSection,
    pub targets: Vec<TargetSection>,
    #[serde(default)]
    pub spectral_shape: SpectralShape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommsSection {
    pub range_m: f64,
    pub power_dbm: f64,
    pub antenna_gain_dbi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarSection {
    pub power_w: f64,
    pub antenna_gain_dbi: f64,
    pub duty_factor: f64,
    pub time_bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub range_m: f64,
    pub cross_section_m2: f64,
    pub process_range_std_m: f64,
}

impl ScenarioFile {
    pub fn into_scenario<T: Real>(&self) -> Result<Scenario<T>> {
        for (field, v) in [
            ("comms.power_dbm", self.comms.power_dbm),
            ("comms.antenna_gain_dbi", self.comms.antenna_gain_dbi),
            ("radar.antenna_gain_dbi", self.radar.antenna_gain_dbi),
        ] {
            if !v.is_finite() {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        let t = T::lit;
        let s = Scenario {
            bandwidth_hz: t(self.bandwidth_hz),
            center_freq_hz: t(self.center_freq_hz),
            temperature_k: t(self.temperature_k),
            comms_range_m: t(self.comms.range_m),
            comms_power_w: t(dbm_to_watts(self.comms.power_dbm)),
            comms_antenna_gain_lin: t(db_to_linear(self.comms.antenna_gain_dbi)),
            radar_power_w: t(self.radar.power_w),
            radar_antenna_gain_lin: t(db_to_linear(self.radar.antenna_gain_dbi)),
            targets: self
                .targets
                .iter()
                .map(|x| Target {
                    range_m: t(x.range_m),
                    cross_section_m2: t(x.cross_section_m2),
                    process_range_std_m: t(x.process_range_std_m),
                })
                .collect(),
            time_bandwidth: t(self.radar.time_bandwidth),
            duty_factor: t(self.radar.duty_factor),
            spectral_shape: self.spectral_shape,
        };
        s.validate()?;
        Ok(s)
    }
}

pub fn parse_scenario<T: Real>(json: &str) -> Result<Scenario<T>> {
    let file: ScenarioFile = serde_json::from_str(json)?;
    file.into_scenario()
}

pub fn load_scenario<T: Real>(path: impl AsRef<Path>) -> Result<Scenario<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn table2() -> Scenario<f64> {
        Scenario::table2()
    }

    #[test]
    fn table2_unit_conversion() {
        let s = table2();
        assert_relative_eq!(s.comms_power_w, 0.1, max_relative = 1e-15);
        assert_relative_eq!(s.radar_antenna_gain_lin, 1000.0, max_relative = 1e-15);
        assert_eq!(s.comms_antenna_gain_lin, 1.0);
        assert_eq!(s.targets.len(), 1);
    }

    #[test]
    fn duty_factor_zero_rejected() {
        let json = TABLE2_JSON.replace("\"duty_factor\": 0.01", "\"duty_factor\": 0.0");
        match parse_scenario::<f64>(&json) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "radar.duty_factor"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_targets_and_bad_power_rejected() {
        let mut s = table2();
        s.targets.clear();
        assert!(matches!(s.validate(), Err(Error::Validation { field, .. }) if field == "targets"));

        let json = TABLE2_JSON.replace("\"power_w\": 1000.0", "\"power_w\": -1.0");
        assert!(matches!(
            parse_scenario::<f64>(&json),
            Err(Error::Validation { field, .. }) if field == "radar.power_w"
        ));
    }

    #[test]
    fn malformed_file_is_parse_error() {
        assert!(matches!(parse_scenario::<f64>("{ not json"), Err(Error::Parse(_))));
        let extra = TABLE2_JSON.replacen('{', "{ \"bogus\": 1,", 1);
        assert!(matches!(parse_scenario::<f64>(&extra), Err(Error::Parse(_))));
    }

    #[test]
    fn delay_conversions() {
        assert_eq!(delay_from_range(SPEED_OF_LIGHT / 2.0), 1.0);
        assert_relative_eq!(delay_from_range(100e3), 6.671281903963041e-4, max_relative = 1e-12);
        assert_relative_eq!(delay_from_range(100.0), 6.671281903963041e-7, max_relative = 1e-12);
        for tau in [1e-9, 3.3e-6, 0.25] {
            assert_relative_eq!(delay_from_range(range_from_delay(tau)), tau, max_relative = 4e-16);
        }
    }

    #[test]
    fn noise_power_values() {
        assert_relative_eq!(noise_power(1000.0, 5e6), 6.903245e-14, max_relative = 1e-15);
        assert_eq!(noise_power(2.0 * 290.0, 1e6) / noise_power(290.0, 1e6), 2.0);
        assert_relative_eq!(noise_power(1.0 / BOLTZMANN, 1.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn table2_link_budget_matches_oracle() {
        // scripts/oracle.py
        let lb = table2().link_budget().unwrap();
        assert_relative_eq!(lb.noise_power_w, 6.903245e-14, max_relative = 1e-14);
        assert_relative_eq!(lb.a_sq[0], 5.0323322211886867e-19, max_relative = 1e-12);
        assert_relative_eq!(lb.b_sq, 6.3238151746038339e-13, max_relative = 1e-12);
        assert_relative_eq!(lb.sigma_tau_proc_sq[0], 4.4506002242144737e-13, max_relative = 1e-12);
        assert_relative_eq!(
            lb.gamma_sq,
            (2.0 * std::f64::consts::PI).powi(2) / 12.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(lb.integrated_snr(0).unwrap(), 0.72898067809974682, max_relative = 1e-12);
    }

    #[test]
    fn zero_cross_section_gives_zero_a_sq() {
        let mut s = table2();
        s.set_field("cross_section_m2", 0.0).unwrap();
        assert_eq!(s.link_budget().unwrap().a_sq[0], 0.0);
    }

    #[test]
    fn range_scaling_laws() {
        let base = table2();
        let lb = base.link_budget().unwrap();
        let mut scaled = base.clone();
        let k = 3.0;
        scaled.comms_range_m = base.comms_range_m * k;
        scaled.targets[0].range_m = base.targets[0].range_m * k;
        let lbs = scaled.link_budget().unwrap();
        assert_relative_eq!(lbs.b_sq, lb.b_sq / (k * k), max_relative = 1e-14);
        assert_relative_eq!(lbs.a_sq[0], lb.a_sq[0] / k.powi(4), max_relative = 1e-14);
    }

    #[test]
    fn unknown_field_lists_valid_names() {
        let mut s = table2();
        let err = s.set_field("warp_factor", 9.0).unwrap_err().to_string();
        assert!(err.contains("radar_power_w"));
    }

    #[test]
    fn f32_budget_tracks_f64() {
        let lb64 = table2().link_budget().unwrap();
        let lb32 = table2().cast::<f32>().link_budget().unwrap();
        assert_relative_eq!(lb32.a_sq[0] as f64, lb64.a_sq[0], max_relative = 1e-5);
        assert_relative_eq!(lb32.b_sq as f64, lb64.b_sq, max_relative = 1e-5);
        assert_relative_eq!(lb32.noise_power_w as f64, lb64.noise_power_w, max_relative = 1e-5);
    }

    #[test]
    fn multi_target_single_accessor_rejects() {
        let mut s = table2();
        s.targets.push(s.targets[0]);
        let lb = s.link_budget().unwrap();
        assert!(matches!(lb.single_target(), Err(Error::MultiTarget { count: 2 })));
        assert!(matches!(lb.target(5), Err(Error::TargetIndex { .. })));
    }
}
