//! Downlink channel generation and rate computation for ultra-dense (nearest
//! RAP) and cell-free (conjugate beamforming) deployments.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Association, NetworkLayout};
use crate::units::{db_to_linear, dbm_to_watts, linear_to_db, THERMAL_NOISE_DBM_PER_HZ};

/// Log-distance path loss with Rayleigh small-scale fading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelModel {
    pub pathloss_exponent: f64,
    /// Loss at the 1 m reference distance, dB.
    pub ref_loss_db: f64,
    pub ue_noise_figure_db: f64,
    /// Distances are clamped to at least this, meters.
    pub min_distance_m: f64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            pathloss_exponent: 3.5,
            ref_loss_db: 40.0,
            ue_noise_figure_db: 9.0,
            min_distance_m: 1.0,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.pathloss_exponent > 2.0) || !self.pathloss_exponent.is_finite() {
            return Err(Error::validation(format!(
                "path-loss exponent must exceed 2, got {}",
                self.pathloss_exponent
            )));
        }
        if !(self.min_distance_m > 0.0) || !self.ref_loss_db.is_finite() || !self.ue_noise_figure_db.is_finite() {
            return Err(Error::validation(format!("invalid channel model {self:?}")));
        }
        Ok(())
    }

    /// Large-scale power gain at distance `d_m`.
    pub fn pathloss_gain(&self, d_m: f64) -> f64 {
        let d = d_m.max(self.min_distance_m);
        db_to_linear(-(self.ref_loss_db + 10.0 * self.pathloss_exponent * d.log10()))
    }

    /// Receiver noise power over `bandwidth_hz`, W.
    pub fn noise_power_w(&self, bandwidth_hz: f64) -> f64 {
        dbm_to_watts(THERMAL_NOISE_DBM_PER_HZ + linear_to_db(bandwidth_hz) + self.ue_noise_figure_db)
    }
}

/// Complex gains between every RAP and UE for one Monte Carlo drop.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub num_raps: usize,
    pub num_ues: usize,
    /// Row-major, `gains[m * num_ues + j]`.
    pub gains: Vec<Complex64>,
    /// Large-scale gains in the same layout.
    pub pathloss: Vec<f64>,
    pub drop_seed: u64,
}

impl ChannelRealization {
    /// Builds a realization from explicit gains (mostly for tests and
    /// externally supplied channel data).
    pub fn from_gains(num_raps: usize, num_ues: usize, gains: Vec<Complex64>) -> Result<Self> {
        if gains.len() != num_raps * num_ues || num_raps == 0 || num_ues == 0 {
            return Err(Error::validation(format!(
                "expected {num_raps} x {num_ues} gains, got {}",
                gains.len()
            )));
        }
        let pathloss = gains.iter().map(|g| g.norm_sqr()).collect();
        Ok(Self {
            num_raps,
            num_ues,
            gains,
            pathloss,
            drop_seed: 0,
        })
    }

    pub fn gain(&self, m: usize, j: usize) -> Complex64 {
        self.gains[m * self.num_ues + j]
    }
}

/// `g = sqrt(beta) h` with `h ~ CN(0, 1)`. Uses ChaCha stream 1 of the drop
/// seed so that it never overlaps the layout draw (stream 0).
pub fn draw_channels(layout: &NetworkLayout, model: &ChannelModel, drop_seed: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(drop_seed);
    rng.set_stream(1);
    let (m, j) = (layout.num_raps(), layout.num_ues());
    let mut gains = Vec::with_capacity(m * j);
    let mut pathloss = Vec::with_capacity(m * j);
    for rap in &layout.rap_positions {
        for ue in &layout.ue_positions {
            let beta = model.pathloss_gain(rap.distance(ue));
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            gains.push(Complex64::new(re, im) * (0.5 * beta).sqrt());
            pathloss.push(beta);
        }
    }
    ChannelRealization {
        num_raps: m,
        num_ues: j,
        gains,
        pathloss,
        drop_seed,
    }
}

/// Per-UE received signal and interference at unit per-RAP transmit power.
/// Both scale linearly with the transmit power, so one evaluation serves
/// every power level.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPowers {
    pub signal: Vec<f64>,
    pub interference: Vec<f64>,
}

impl LinkPowers {
    pub fn sinr(&self, p_tx: f64, noise_w: f64) -> Vec<f64> {
        self.signal
            .iter()
            .zip(&self.interference)
            .map(|(s, i)| {
                let num = p_tx * s;
                if num == 0.0 {
                    0.0
                } else {
                    num / (p_tx * i + noise_w)
                }
            })
            .collect()
    }
}

pub fn udn_link_powers(ch: &ChannelRealization, assoc: &Association) -> LinkPowers {
    let active = assoc.active_raps();
    let mut signal = vec![0.0; ch.num_ues];
    let mut interference = vec![0.0; ch.num_ues];
    for j in 0..ch.num_ues {
        let serving = &assoc.serving[j];
        for (m, _) in active.iter().enumerate().filter(|(_, on)| **on) {
            let p = ch.gain(m, j).norm_sqr();
            if serving.contains(&m) {
                signal[j] += p;
            } else {
                interference[j] += p;
            }
        }
    }
    LinkPowers { signal, interference }
}

/// UDN SINR: serving RAPs are signal, every other transmitting RAP is
/// interference, idle RAPs are silent.
pub fn udn_sinr(
    ch: &ChannelRealization,
    assoc: &Association,
    p_tx: f64,
    model: &ChannelModel,
    bandwidth_hz: f64,
) -> Vec<f64> {
    udn_link_powers(ch, assoc).sinr(p_tx, model.noise_power_w(bandwidth_hz))
}

pub fn cellfree_link_powers(ch: &ChannelRealization) -> LinkPowers {
    let (nm, nj) = (ch.num_raps, ch.num_ues);
    // sqrt(eta_m) at unit power: each RAP splits its power over all UEs
    // in proportion to the channel gains.
    let amp: Vec<f64> = (0..nm)
        .map(|m| {
            let total: f64 = (0..nj).map(|j| ch.gain(m, j).norm_sqr()).sum();
            if total > 0.0 {
                total.recip().sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut signal = vec![0.0; nj];
    let mut interference = vec![0.0; nj];
    // cross[k] = sum_m amp_m conj(g_mk) g_mj, the leakage of UE k's beam onto UE j
    let mut cross = vec![Complex64::new(0.0, 0.0); nj];
    for j in 0..nj {
        cross.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (m, a) in amp.iter().enumerate() {
            let row = &ch.gains[m * nj..(m + 1) * nj];
            let g = row[j] * a;
            for (c, gk) in cross.iter_mut().zip(row) {
                *c += gk.conj() * g;
            }
        }
        for (k, c) in cross.iter().enumerate() {
            if k == j {
                signal[j] = c.re * c.re;
            } else {
                interference[j] += c.norm_sqr();
            }
        }
    }
    LinkPowers { signal, interference }
}

/// Cell-free downlink SINR with conjugate beamforming from every RAP to
/// every UE and per-RAP power normalization.
pub fn cellfree_sinr(ch: &ChannelRealization, p_tx_per_rap: f64, model: &ChannelModel, bandwidth_hz: f64) -> Vec<f64> {
    cellfree_link_powers(ch).sinr(p_tx_per_rap, model.noise_power_w(bandwidth_hz))
}

/// Harmonic combination of wireless SINR and fronthaul SNR (both linear).
pub fn combine_fronthaul_noise(sinr_wireless: f64, fronthaul_snr: f64) -> f64 {
    if sinr_wireless <= 0.0 || fronthaul_snr <= 0.0 {
        return 0.0;
    }
    1.0 / (sinr_wireless.recip() + fronthaul_snr.recip())
}

/// Pilot overhead: J orthogonal pilots per coherence block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OverheadModel {
    pub coherence_symbols: f64,
    pub max_fraction: f64,
}

impl Default for OverheadModel {
    fn default() -> Self {
        Self {
            coherence_symbols: 200.0,
            max_fraction: 0.95,
        }
    }
}

impl OverheadModel {
    pub fn fraction(&self, _num_raps: usize, num_ues: usize) -> f64 {
        (num_ues as f64 / self.coherence_symbols).min(self.max_fraction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThroughputModel {
    pub overhead: OverheadModel,
    /// Bits per complex sample on a digitized fronthaul.
    pub digitization_bits: f64,
    pub samples_per_hz: f64,
}

impl Default for ThroughputModel {
    fn default() -> Self {
        Self {
            overhead: OverheadModel::default(),
            digitization_bits: 30.0,
            samples_per_hz: 2.0,
        }
    }
}

impl ThroughputModel {
    /// Widest wireless band a digital fronthaul of `fiber_bit_rate` can carry.
    pub fn digital_bandwidth_cap(&self, fiber_bit_rate: f64) -> f64 {
        fiber_bit_rate / (self.digitization_bits * self.samples_per_hz)
    }
}

/// `sum_j B (1 - ov) share_j log2(1 + SINR_j)`.
///
/// `shares` are per-UE time fractions (all 1 when `None`). When
/// `digital_fiber_rate` is set, the usable band of every RAP is limited to
/// what the digitized fronthaul can transport.
pub fn sum_throughput(
    sinrs: &[f64],
    shares: Option<&[f64]>,
    bandwidth_hz: f64,
    overhead_fraction: f64,
    digital_fiber_rate: Option<f64>,
    model: &ThroughputModel,
) -> Result<f64> {
    if !(0.0..1.0).contains(&overhead_fraction) {
        return Err(Error::validation(format!(
            "overhead fraction must lie in [0, 1), got {overhead_fraction}"
        )));
    }
    if let Some(s) = shares {
        if s.len() != sinrs.len() {
            return Err(Error::validation("one time share per UE required"));
        }
    }
    let band = match digital_fiber_rate {
        Some(rate) => bandwidth_hz.min(model.digital_bandwidth_cap(rate)),
        None => bandwidth_hz,
    };
    let spectral: f64 = sinrs
        .iter()
        .enumerate()
        .map(|(j, s)| shares.map_or(1.0, |sh| sh[j]) * (1.0 + s).log2())
        .sum();
    Ok(band * (1.0 - overhead_fraction) * spectral)
}
