//! Mixed digital/optical beamforming.
//!
//! Directions are angles from broadside: element position `p` projects onto
//! the unit vector `u(theta) = (sin theta, cos theta)`, so a ULA laid out on
//! the x axis steers with `x sin(theta)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{NetworkLayout, Point2D};
use crate::optics::{FiberParams, SchemeConfig};
use crate::units::{db_to_linear, km_to_m, SPEED_OF_LIGHT};
use crate::wireless::ChannelRealization;

/// Group index of standard single-mode fiber.
pub const DEFAULT_GROUP_INDEX: f64 = 1.468;

/// Arrival-time spread that still counts as the same symbol interval, s.
pub const DEFAULT_SYMBOL_ALIGNMENT_S: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    pub elements: Vec<Point2D>,
    pub center_freq_hz: f64,
    pub band_hz: (f64, f64),
}

impl ArrayGeometry {
    pub fn new(elements: Vec<Point2D>, center_freq_hz: f64, band_hz: (f64, f64)) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::validation("array needs at least one element"));
        }
        let (lo, hi) = band_hz;
        if !(lo > 0.0 && lo <= center_freq_hz && center_freq_hz <= hi && hi.is_finite()) {
            return Err(Error::validation(format!(
                "band {band_hz:?} must contain f0 = {center_freq_hz}"
            )));
        }
        Ok(Self {
            elements,
            center_freq_hz,
            band_hz,
        })
    }

    /// Uniform linear array of `n` elements on the x axis with `spacing_m`.
    pub fn ula(n: usize, spacing_m: f64, center_freq_hz: f64, band_hz: (f64, f64)) -> Result<Self> {
        let elements = (0..n).map(|i| Point2D::new(i as f64 * spacing_m, 0.0)).collect();
        Self::new(elements, center_freq_hz, band_hz)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_freq(&self, f: f64) -> Result<()> {
        let (lo, hi) = self.band_hz;
        if (lo..=hi).contains(&f) {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "{f} Hz is outside the array band {lo}..{hi} Hz"
            )))
        }
    }

    fn projections(&self, theta: f64) -> impl Iterator<Item = f64> + '_ {
        let u = direction(theta);
        self.elements.iter().map(move |p| p.dot(&u))
    }
}

pub fn direction(theta: f64) -> Point2D {
    Point2D::new(theta.sin(), theta.cos())
}

/// Per-element digital weight and true time delay.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSpec {
    pub weights: Vec<Complex64>,
    /// Seconds, non-negative.
    pub delays: Vec<f64>,
}

impl BeamformerSpec {
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.weights.len() != n || self.delays.len() != n {
            return Err(Error::validation(format!(
                "beamformer has {} weights and {} delays for {n} elements",
                self.weights.len(),
                self.delays.len()
            )));
        }
        if self.delays.iter().any(|d| !d.is_finite()) {
            return Err(Error::validation("delays must be finite"));
        }
        Ok(())
    }
}

fn cis(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// `sum_m w_m exp(-j 2 pi f tau_m) exp(j 2 pi f p_m . u(theta) / c)`.
pub fn array_factor(geom: &ArrayGeometry, spec: &BeamformerSpec, f_hz: f64, theta: f64) -> Result<Complex64> {
    geom.check_freq(f_hz)?;
    spec.validate_for(geom.len())?;
    let k = 2.0 * PI * f_hz;
    Ok(geom
        .projections(theta)
        .zip(spec.weights.iter().zip(&spec.delays))
        .map(|(proj, (w, tau))| w * cis(k * (proj / SPEED_OF_LIGHT - tau)))
        .sum())
}

/// Narrowband steering: phases matched at `f0` only.
pub fn phase_only_weights(geom: &ArrayGeometry, theta0: f64, f0: f64) -> BeamformerSpec {
    let k = 2.0 * PI * f0 / SPEED_OF_LIGHT;
    BeamformerSpec {
        weights: geom.projections(theta0).map(|proj| cis(-k * proj)).collect(),
        delays: vec![0.0; geom.len()],
    }
}

/// True-time-delay steering toward `theta0`. Elements nearer the target
/// wait longer; the element with the smallest projection gets zero delay.
pub fn ttd_weights(geom: &ArrayGeometry, theta0: f64) -> BeamformerSpec {
    let proj: Vec<f64> = geom.projections(theta0).collect();
    let min = proj.iter().copied().fold(f64::INFINITY, f64::min);
    BeamformerSpec {
        weights: vec![Complex64::new(1.0, 0.0); proj.len()],
        delays: proj.iter().map(|p| (p - min) / SPEED_OF_LIGHT).collect(),
    }
}

/// Steering angle of a phase-only ULA beam at frequency `f`.
pub fn beam_squint_direction(f_hz: f64, f0_hz: f64, theta0: f64) -> Result<f64> {
    let s = f0_hz / f_hz * theta0.sin();
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::NoRealBeam(s));
    }
    Ok(s.asin())
}

/// Uniform grid of angles in degrees, inclusive of both ends.
pub fn angle_grid_deg(from_deg: f64, to_deg: f64, step_deg: f64) -> Vec<f64> {
    let n = ((to_deg - from_deg) / step_deg).round() as usize;
    (0..=n).map(|i| from_deg + i as f64 * step_deg).collect()
}

/// Grid angle (degrees) maximizing `|AF|`. The first maximum wins ties.
pub fn peak_direction_deg(geom: &ArrayGeometry, spec: &BeamformerSpec, f_hz: f64, grid_deg: &[f64]) -> Result<f64> {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &deg in grid_deg {
        let mag = array_factor(geom, spec, f_hz, deg.to_radians())?.norm();
        if mag > best.0 {
            best = (mag, deg);
        }
    }
    Ok(best.1)
}

/// `integral_{-1}^{1} |AF(u)|^2 du` over the direction sine `u`, by the
/// midpoint rule. The integrand is a trigonometric polynomial in `u`, so
/// the rule is exact once `samples` exceeds the aperture in half wavelengths.
pub fn pattern_energy(geom: &ArrayGeometry, spec: &BeamformerSpec, f_hz: f64, samples: usize) -> Result<f64> {
    let h = 2.0 / samples as f64;
    let mut acc = 0.0;
    for i in 0..samples {
        let u = -1.0 + (i as f64 + 0.5) * h;
        acc += array_factor(geom, spec, f_hz, u.asin())?.norm_sqr();
    }
    Ok(acc * h)
}

/// Fiber plus air propagation time from the CU to `target_ue` via each RAP, s.
pub fn path_delays(
    layout: &NetworkLayout,
    fiber_length_km: &[f64],
    target_ue: usize,
    group_index: f64,
) -> Result<Vec<f64>> {
    if fiber_length_km.len() != layout.num_raps() {
        return Err(Error::validation("one fiber length per RAP required"));
    }
    let ue = layout
        .ue_positions
        .get(target_ue)
        .ok_or_else(|| Error::validation(format!("no UE with index {target_ue}")))?;
    Ok(layout
        .rap_positions
        .iter()
        .zip(fiber_length_km)
        .map(|(rap, l)| (group_index * km_to_m(*l) + rap.distance(ue)) / SPEED_OF_LIGHT)
        .collect())
}

/// Optical delay each RAP's signal needs at the CU so that all copies reach
/// `target_ue` together. The latest path gets zero.
pub fn sync_delays(
    layout: &NetworkLayout,
    fiber_length_km: &[f64],
    target_ue: usize,
    group_index: f64,
) -> Result<Vec<f64>> {
    let t = path_delays(layout, fiber_length_km, target_ue, group_index)?;
    let latest = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(t.iter().map(|ti| latest - ti).collect())
}

/// Max minus min of the compensated arrival times.
pub fn arrival_spread(path_delays: &[f64], compensation: &[f64]) -> f64 {
    let arrivals = path_delays.iter().zip(compensation).map(|(t, d)| t + d);
    let (lo, hi) = arrivals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| (lo.min(a), hi.max(a)));
    hi - lo
}

pub fn is_symbol_aligned(path_delays: &[f64], compensation: &[f64], threshold_s: f64) -> bool {
    arrival_spread(path_delays, compensation) <= threshold_s
}

/// Complex optical link gain of one RAP at the fiber carrier: amplitude from
/// the analog loss, phase from the fiber group delay.
pub fn fronthaul_gain(cfg: &SchemeConfig, fiber: &FiberParams, f0_hz: f64, group_index: f64) -> Result<Complex64> {
    let loss = cfg.analog_loss_db(fiber)?;
    let amp = if loss.is_infinite() {
        0.0
    } else {
        db_to_linear(-loss).sqrt()
    };
    let delay = group_index * km_to_m(fiber.length_km) / SPEED_OF_LIGHT;
    Ok(Complex64::from_polar(amp, -2.0 * PI * f0_hz * delay))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixedOptions {
    pub center_freq_hz: f64,
    pub group_index: f64,
    /// Total transmit power across all RAPs, W.
    pub total_power_w: f64,
}

impl Default for MixedOptions {
    fn default() -> Self {
        Self {
            center_freq_hz: 20e9,
            group_index: DEFAULT_GROUP_INDEX,
            total_power_w: 1.0,
        }
    }
}

/// Composite optical x wireless narrowband gain per RAP toward `target_ue`.
pub fn composite_gains(ch: &ChannelRealization, target_ue: usize, fronthaul: &[Complex64]) -> Result<Vec<Complex64>> {
    if target_ue >= ch.num_ues || fronthaul.len() != ch.num_raps {
        return Err(Error::validation(
            "target UE or fronthaul gain count does not match the channel",
        ));
    }
    Ok((0..ch.num_raps).map(|m| fronthaul[m] * ch.gain(m, target_ue)).collect())
}

/// Conjugate (matched) digital weights on the composite channel, scaled to
/// `total_power_w`, with no optical delays.
pub fn conjugate_weights(composite: &[Complex64], total_power_w: f64) -> Result<BeamformerSpec> {
    let norm = composite.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::DegenerateChannel("composite gain is zero on every RAP".into()));
    }
    let scale = total_power_w.sqrt() / norm;
    Ok(BeamformerSpec {
        weights: composite.iter().map(|c| c.conj() * scale).collect(),
        delays: vec![0.0; composite.len()],
    })
}

/// Digital conjugate beamforming over the composite channel combined with
/// TTD synchronization delays at the CU. The digital weights pre-rotate the
/// carrier phase the delay lines add at `f0`, so the narrowband gain equals
/// plain conjugate beamforming while the delays keep it across the band.
pub fn mixed_beamformer(
    ch: &ChannelRealization,
    layout: &NetworkLayout,
    target_ue: usize,
    fronthaul: &[Complex64],
    opts: &MixedOptions,
) -> Result<BeamformerSpec> {
    let composite = composite_gains(ch, target_ue, fronthaul)?;
    let mut spec = conjugate_weights(&composite, opts.total_power_w)?;
    spec.delays = sync_delays(layout, &layout.fiber_length_km, target_ue, opts.group_index)?;
    let k = 2.0 * PI * opts.center_freq_hz;
    for (w, d) in spec.weights.iter_mut().zip(&spec.delays) {
        *w *= cis(k * d);
    }
    Ok(spec)
}

/// Received amplitude at frequency `f` for a distributed transmission whose
/// composite gains were measured at `f0` and whose end-to-end path delays are
/// `path_delays`.
pub fn distributed_response(
    spec: &BeamformerSpec,
    composite_f0: &[Complex64],
    path_delays: &[f64],
    f0_hz: f64,
    f_hz: f64,
) -> Complex64 {
    spec.weights
        .iter()
        .zip(&spec.delays)
        .zip(composite_f0.iter().zip(path_delays))
        .map(|((w, tau), (c, t))| w * cis(-2.0 * PI * f_hz * tau) * c * cis(-2.0 * PI * (f_hz - f0_hz) * t))
        .sum()
}
