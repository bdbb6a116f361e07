//! Analog optical link impairments: attenuation, chromatic-dispersion RF
//! power fading, null/recovery planning, DCF sizing and the lumped
//! fronthaul SNR.
//!
//! A double-sideband intensity-modulated carrier at RF frequency `f` picks
//! up a differential phase between its two sidebands after dispersion. The
//! detected RF power then follows
//!
//! ```text
//! P(L) / P(0) = cos^2(pi * D * L * lambda^2 * f^2 / c)
//! ```
//!
//! which gives periodic nulls at `L = (2k - 1) c / (2 D lambda^2 f^2)` and
//! full recovery at `L = k c / (D lambda^2 f^2)`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{dispersion_to_si, km_to_m, m_to_km, nm_to_m, SPEED_OF_LIGHT};

/// cos^2 at or below this floor is reported as an exact null (>= 120 dB).
pub const NULL_POWER_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Bbof,
    Ifof,
    Rfof,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Bbof, Scheme::Ifof, Scheme::Rfof];

    /// True when the fiber carries an analog waveform.
    pub fn is_analog(self) -> bool {
        !matches!(self, Scheme::Bbof)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Bbof => "BBoF",
            Scheme::Ifof => "IFoF",
            Scheme::Rfof => "RFoF",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bbof" => Ok(Scheme::Bbof),
            "ifof" => Ok(Scheme::Ifof),
            "rfof" => Ok(Scheme::Rfof),
            _ => Err(Error::validation(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Single-mode fiber span. Stored in the customary units; converted to SI
/// at the point of use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberParams {
    /// ps/(nm km). Negative for dispersion-compensating fiber.
    pub dispersion_ps_nm_km: f64,
    pub wavelength_nm: f64,
    pub attenuation_db_per_km: f64,
    pub length_km: f64,
}

impl Default for FiberParams {
    fn default() -> Self {
        Self {
            dispersion_ps_nm_km: 17.0,
            wavelength_nm: 1553.6,
            attenuation_db_per_km: 0.3,
            length_km: 19.0,
        }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.dispersion_ps_nm_km.is_finite()
            && self.wavelength_nm.is_finite()
            && self.wavelength_nm > 0.0
            && self.attenuation_db_per_km.is_finite()
            && self.attenuation_db_per_km >= 0.0
            && self.length_km.is_finite()
            && self.length_km >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!("invalid fiber parameters {self:?}")))
        }
    }

    pub fn with_length(mut self, length_km: f64) -> Self {
        self.length_km = length_km;
        self
    }

    /// `D * lambda^2 / c` in s^2/m, the length-and-frequency-independent part
    /// of the fading phase.
    fn dispersion_factor(&self) -> f64 {
        let lambda = nm_to_m(self.wavelength_nm);
        dispersion_to_si(self.dispersion_ps_nm_km) * lambda * lambda / SPEED_OF_LIGHT
    }

    /// Fiber length (km) over which the fading phase advances by a full pi.
    fn recovery_period_km(&self, f_hz: f64) -> Result<f64> {
        check_freq(f_hz)?;
        if self.dispersion_ps_nm_km == 0.0 {
            return Err(Error::UndefinedModel(
                "no nulls or recoveries without dispersion (D = 0)".into(),
            ));
        }
        Ok(m_to_km(1.0 / (self.dispersion_factor().abs() * f_hz * f_hz)))
    }
}

fn check_freq(f_hz: f64) -> Result<()> {
    if f_hz.is_finite() && f_hz > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("frequency must be positive, got {f_hz} Hz")))
    }
}

pub fn attenuation_db(fiber: &FiberParams) -> f64 {
    fiber.attenuation_db_per_km * fiber.length_km
}

/// Dispersion-induced RF power loss in dB (>= 0) at RF frequency `f_hz`.
/// Returns `f64::INFINITY` at a null.
pub fn dispersion_fading_db(fiber: &FiberParams, f_hz: f64) -> Result<f64> {
    check_freq(f_hz)?;
    let phase = PI * fiber.dispersion_factor() * km_to_m(fiber.length_km) * f_hz * f_hz;
    let c = phase.cos();
    let ratio = c * c;
    if ratio <= NULL_POWER_FLOOR {
        return Ok(f64::INFINITY);
    }
    // cos^2 <= 1, clamp away the -0.0 that rounding can produce at recovery
    Ok((-10.0 * ratio.log10()).max(0.0))
}

/// Fiber lengths with zero fading, `k * c / (D lambda^2 f^2)`, k = 1..=k_max.
pub fn recovery_lengths(fiber: &FiberParams, f_hz: f64, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::validation("k_max must be at least 1"));
    }
    let period = fiber.recovery_period_km(f_hz)?;
    Ok((1..=k_max).map(|k| k as f64 * period).collect())
}

/// Fiber lengths of total fading, `(2k - 1) c / (2 D lambda^2 f^2)`.
pub fn null_lengths(fiber: &FiberParams, f_hz: f64, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::validation("k_max must be at least 1"));
    }
    let period = fiber.recovery_period_km(f_hz)?;
    Ok((1..=k_max).map(|k| (2 * k - 1) as f64 * period / 2.0).collect())
}

/// Length of DCF (km) that cancels the dispersion accumulated over `l_std_km`
/// of standard fiber.
pub fn dcf_compensation_length(d_std: f64, l_std_km: f64, d_dcf: f64) -> Result<f64> {
    if !(d_dcf < 0.0) {
        return Err(Error::validation(format!(
            "DCF dispersion must be negative, got {d_dcf}"
        )));
    }
    if !(d_std > 0.0) {
        return Err(Error::validation(format!(
            "standard fiber dispersion must be positive, got {d_std}"
        )));
    }
    if !(l_std_km >= 0.0 && l_std_km.is_finite()) {
        return Err(Error::validation(format!("fiber length must be >= 0, got {l_std_km}")));
    }
    Ok(-d_std * l_std_km / d_dcf)
}

/// Radio constants shared by all schemes in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioParams {
    pub rf_carrier_hz: f64,
    pub if_carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub fiber_bit_rate_bps: f64,
    /// Back-to-back SNR of an analog optical link before fiber losses, dB.
    pub snr0_db: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            rf_carrier_hz: 20e9,
            if_carrier_hz: 125e6,
            bandwidth_hz: 10e6,
            fiber_bit_rate_bps: 2.5e9,
            snr0_db: 40.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if pos(self.rf_carrier_hz)
            && pos(self.if_carrier_hz)
            && pos(self.bandwidth_hz)
            && pos(self.fiber_bit_rate_bps)
            && self.snr0_db.is_finite()
        {
            Ok(())
        } else {
            Err(Error::validation(format!("invalid radio parameters {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub radio: RadioParams,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, radio: RadioParams) -> Self {
        Self { scheme, radio }
    }

    /// Frequency of the analog waveform on the fiber; `None` for digital transport.
    pub fn fiber_carrier_hz(&self) -> Option<f64> {
        match self.scheme {
            Scheme::Bbof => None,
            Scheme::Ifof => Some(self.radio.if_carrier_hz),
            Scheme::Rfof => Some(self.radio.rf_carrier_hz),
        }
    }

    /// Dispersion fading seen by this scheme; zero for BBoF.
    pub fn fading_db(&self, fiber: &FiberParams) -> Result<f64> {
        match self.fiber_carrier_hz() {
            None => Ok(0.0),
            Some(f) => dispersion_fading_db(fiber, f),
        }
    }

    /// Attenuation plus dispersion fading of the analog link; zero for BBoF.
    pub fn analog_loss_db(&self, fiber: &FiberParams) -> Result<f64> {
        if !self.scheme.is_analog() {
            return Ok(0.0);
        }
        Ok(attenuation_db(fiber) + self.fading_db(fiber)?)
    }
}

/// Lumped SNR of the optical segment, dB. `+inf` for BBoF, `-inf` at a null.
pub fn fronthaul_snr_db(cfg: &SchemeConfig, fiber: &FiberParams) -> Result<f64> {
    if !cfg.scheme.is_analog() {
        return Ok(f64::INFINITY);
    }
    Ok(cfg.radio.snr0_db - cfg.analog_loss_db(fiber)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fiber(l: f64) -> FiberParams {
        FiberParams::default().with_length(l)
    }

    // Closed-form recovery length recomputed independently from the SI constants.
    fn l1_km(f: f64) -> f64 {
        let d = 17e-12 / (1e-9 * 1e3);
        let lam = 1553.6e-9;
        299_792_458.0 / (d * lam * lam * f * f) / 1e3
    }

    #[test]
    fn attenuation_examples() {
        assert_eq!(attenuation_db(&fiber(0.0)), 0.0);
        assert!((attenuation_db(&fiber(10.0)) - 3.0).abs() < 1e-12);
        assert!((attenuation_db(&fiber(19.0)) - 5.7).abs() < 1e-12);
    }

    #[test]
    fn zero_length_has_no_fading() {
        for f in [125e6, 10e9, 30e9] {
            assert_eq!(dispersion_fading_db(&fiber(0.0), f).unwrap(), 0.0);
        }
    }

    #[test]
    fn recovery_and_null_at_30ghz() {
        let l1 = l1_km(30e9);
        assert!((l1 - 8.118).abs() < 1e-3, "{l1}");
        assert!(dispersion_fading_db(&fiber(l1), 30e9).unwrap() < 1e-9);
        let null = null_lengths(&fiber(0.0), 30e9, 1).unwrap()[0];
        assert!((null - 4.059).abs() < 1e-3);
        assert_eq!(dispersion_fading_db(&fiber(null), 30e9).unwrap(), f64::INFINITY);
        // The three-decimal rounding of the null still sits deep in the notch.
        assert!(dispersion_fading_db(&fiber(4.059), 30e9).unwrap() > 90.0);
    }

    #[test]
    fn twenty_ghz_delta_1_to_4_km() {
        let d = dispersion_fading_db(&fiber(4.0), 20e9).unwrap() - dispersion_fading_db(&fiber(1.0), 20e9).unwrap();
        // cos^2 evaluated by hand: phase(L) = pi L / 18.27 km
        let by_hand = |l: f64| -10.0 * (PI * l / l1_km(20e9)).cos().powi(2).log10();
        assert!((d - (by_hand(4.0) - by_hand(1.0))).abs() < 1e-9);
        assert!((d - 2.1).abs() < 0.15, "{d}");
    }

    #[test]
    fn recovery_length_lists() {
        let r = recovery_lengths(&fiber(0.0), 30e9, 3).unwrap();
        let want = [8.118, 16.236, 24.354];
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 5e-3, "{a} vs {b}");
        }
        let r20 = recovery_lengths(&fiber(0.0), 20e9, 1).unwrap()[0];
        assert!((r20 - 18.27).abs() < 0.01);
        assert!(recovery_lengths(&fiber(0.0), 30e9, 0).is_err());
        let n10 = null_lengths(&fiber(0.0), 10e9, 1).unwrap()[0];
        assert!((n10 - 36.5).abs() < 0.05, "{n10}");
    }

    #[test]
    fn zero_dispersion_is_undefined() {
        let mut f = fiber(1.0);
        f.dispersion_ps_nm_km = 0.0;
        assert!(matches!(recovery_lengths(&f, 20e9, 1), Err(Error::UndefinedModel(_))));
        assert!(matches!(null_lengths(&f, 20e9, 1), Err(Error::UndefinedModel(_))));
        assert_eq!(dispersion_fading_db(&f, 20e9).unwrap(), 0.0);
    }

    #[test]
    fn nulls_interleave_recoveries() {
        let r = recovery_lengths(&fiber(0.0), 20e9, 5).unwrap();
        let n = null_lengths(&fiber(0.0), 20e9, 6).unwrap();
        for k in 0..5 {
            assert!(n[k] < r[k] && r[k] < n[k + 1]);
        }
    }

    #[test]
    fn dcf_examples() {
        let l = dcf_compensation_length(17.0, 19.0, -85.0).unwrap();
        assert!((l - 3.8).abs() < 1e-12);
        assert_eq!(dcf_compensation_length(17.0, 0.0, -85.0).unwrap(), 0.0);
        assert!(dcf_compensation_length(17.0, 19.0, 0.0).is_err());
        assert!(dcf_compensation_length(17.0, 19.0, 5.0).is_err());
    }

    #[test]
    fn fronthaul_snr_examples() {
        let radio = RadioParams::default();
        let bbof = SchemeConfig::new(Scheme::Bbof, radio);
        assert_eq!(fronthaul_snr_db(&bbof, &fiber(50.0)).unwrap(), f64::INFINITY);
        assert_eq!(bbof.fading_db(&fiber(4.0)).unwrap(), 0.0);

        // RF carrier chosen so that 7 dB of analog loss is pure attenuation:
        // 23.333 km of fiber at exactly one recovery period.
        let rfof = SchemeConfig::new(
            Scheme::Rfof,
            RadioParams {
                rf_carrier_hz: 1e9,
                ..radio
            },
        );
        let mut f = fiber(7.0 / 0.3);
        f.dispersion_ps_nm_km = 0.0;
        assert!((fronthaul_snr_db(&rfof, &f).unwrap() - 33.0).abs() < 1e-9);

        let rfof = SchemeConfig::new(
            Scheme::Rfof,
            RadioParams {
                rf_carrier_hz: 30e9,
                ..radio
            },
        );
        let null = null_lengths(&fiber(0.0), 30e9, 1).unwrap()[0];
        assert_eq!(fronthaul_snr_db(&rfof, &fiber(null)).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("RFoF".parse::<Scheme>().unwrap(), Scheme::Rfof);
        assert_eq!(Scheme::Ifof.to_string(), "IFoF");
        assert!("xfof".parse::<Scheme>().is_err());
    }

    proptest! {
        #[test]
        fn fading_is_periodic(l in 0.0f64..30.0, k in 1usize..4, f in 5e9f64..35e9) {
            let period = recovery_lengths(&fiber(0.0), f, 1).unwrap()[0];
            let a = dispersion_fading_db(&fiber(l), f).unwrap();
            let b = dispersion_fading_db(&fiber(l + k as f64 * period), f).unwrap();
            if a.is_finite() && a < 60.0 {
                prop_assert!((a - b).abs() < 1e-6 * (1.0 + a), "{} vs {}", a, b);
            }
        }

        #[test]
        fn recovery_lengths_have_no_loss(k in 1usize..10, f in 1e9f64..40e9) {
            let r = recovery_lengths(&fiber(0.0), f, k).unwrap();
            for l in r {
                prop_assert!(dispersion_fading_db(&fiber(l), f).unwrap() < 1e-9);
            }
        }

        #[test]
        fn higher_frequency_fades_more(frac in 0.001f64..0.999) {
            let l = frac * null_lengths(&fiber(0.0), 30e9, 1).unwrap()[0];
            let at = |f| dispersion_fading_db(&fiber(l), f).unwrap();
            prop_assert!(at(30e9) > at(20e9));
            prop_assert!(at(20e9) > at(10e9));
        }

        #[test]
        fn dcf_zeroes_net_dispersion(d in 1.0f64..25.0, l in 0.0f64..100.0, dd in -300.0f64..-20.0) {
            let ldcf = dcf_compensation_length(d, l, dd).unwrap();
            prop_assert!((d * l + dd * ldcf).abs() <= 1e-12 * (d * l).max(1.0));
        }
    }
}
