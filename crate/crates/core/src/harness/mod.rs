//! Experiment orchestration: the four sweeps behind the CLI, their CSV
//! tables and the JSON metadata sidecar.

mod config;
mod table;

pub use config::{BeamConfig, ExperimentConfig, InfeasiblePolicy, PowerSweepConfig, ScenarioConfig, SweepAxes};
pub use table::{Cell, ResultTable, SweepKind};

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use crate::beamform::{self, ArrayGeometry};
use crate::error::{Error, Result};
use crate::geometry::{generate_layout, udn_association, FiberLengthPolicy, Scenario};
use crate::optics::{RadioParams, Scheme, SchemeConfig};
use crate::power::crossover_length;
use crate::units::db_to_linear;
use crate::wireless::{cellfree_link_powers, combine_fronthaul_noise, draw_channels, sum_throughput, udn_link_powers};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NULL: i32 = 4;

/// Process exit code for an error surfaced by a sweep.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Validation(_) | Error::Json(_) | Error::UndefinedModel(_) | Error::NoRealBeam(_) => {
            EXIT_CONFIG
        }
        Error::InfeasibleBudget { .. } => EXIT_INFEASIBLE,
        Error::DispersionNull(_) => EXIT_NULL,
        _ => 1,
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Validation(m) => Error::Config(m),
        other => other,
    }
}

fn radio_at(radio: &RadioParams, f_rf: f64) -> RadioParams {
    RadioParams {
        rf_carrier_hz: f_rf,
        ..*radio
    }
}

fn require_axis<T>(axis: &[T], name: &str) -> Result<()> {
    if axis.is_empty() {
        Err(Error::Config(format!("sweep axis {name} is empty")))
    } else {
        Ok(())
    }
}

fn start(kind: SweepKind, cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    Ok(ResultTable::new(kind, cfg.hash(), cfg.to_json()))
}

/// Dispersion fading for every scheme over the RF-frequency and fiber-length
/// grid. IFoF is evaluated at the IF carrier, BBoF rows are zero.
pub fn run_dispersion_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = start(SweepKind::DispersionSweep, cfg)?;
    require_axis(&cfg.sweep.frequencies_hz, "frequencies_hz")?;
    require_axis(&cfg.sweep.fiber_km, "fiber_km")?;
    let mut nulls = Vec::new();
    for &f in &cfg.sweep.frequencies_hz {
        for &scheme in &cfg.schemes {
            let sc = SchemeConfig::new(scheme, radio_at(&cfg.radio, f));
            for &l in &cfg.sweep.fiber_km {
                let fading = sc.fading_db(&cfg.fiber.with_length(l)).map_err(config_err)?;
                if fading.is_infinite() {
                    nulls.push(json!({"scheme": scheme, "f_rf_hz": f, "fiber_km": l}));
                }
                table.push(vec![scheme.to_string().into(), f.into(), l.into(), fading.into()]);
            }
        }
    }
    if !nulls.is_empty() && !cfg.allow_null {
        return Err(Error::DispersionNull(format!(
            "{} grid points sit on a dispersion null",
            nulls.len()
        )));
    }
    table.summary = json!({ "nulls": nulls });
    Ok(table)
}

/// System power per (scheme, RF carrier, fiber length), with RFoF/IFoF vs
/// BBoF crossover lengths per carrier in the summary.
pub fn run_power_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = start(SweepKind::PowerSweep, cfg)?;
    require_axis(&cfg.sweep.frequencies_hz, "frequencies_hz")?;
    require_axis(&cfg.sweep.fiber_km, "fiber_km")?;
    let ps = &cfg.power_sweep;
    let mut crossovers = Vec::new();
    let mut saw_null = false;
    for &f in &cfg.sweep.frequencies_hz {
        let radio = radio_at(&cfg.radio, f);
        for &scheme in &cfg.schemes {
            let sc = SchemeConfig::new(scheme, radio);
            for &l in &cfg.sweep.fiber_km {
                let b = cfg
                    .power
                    .system_power(&sc, ps.num_raps, ps.p_tx_w, &cfg.fiber.with_length(l))
                    .map_err(config_err)?;
                saw_null |= b.total_watts.is_infinite();
                table.push(vec![
                    scheme.to_string().into(),
                    f.into(),
                    l.into(),
                    ps.p_tx_w.into(),
                    b.cu_watts.into(),
                    b.per_rap_watts.into(),
                    b.fiber_comp_watts.into(),
                    b.total_watts.into(),
                ]);
            }
        }
        let bbof = SchemeConfig::new(Scheme::Bbof, radio);
        for analog in [Scheme::Rfof, Scheme::Ifof] {
            let x = crossover_length(
                &cfg.power,
                &SchemeConfig::new(analog, radio),
                &bbof,
                ps.num_raps,
                ps.p_tx_w,
                &cfg.fiber,
                ps.crossover,
            )
            .map_err(config_err)?;
            crossovers.push(json!({"scheme": analog, "versus": Scheme::Bbof, "f_rf_hz": f, "crossover_km": x}));
        }
    }
    if saw_null && !cfg.allow_null {
        return Err(Error::DispersionNull("power sweep hit a dispersion null".into()));
    }
    table.summary = json!({ "crossovers": crossovers });
    Ok(table)
}

#[derive(Debug, Clone, Copy)]
struct SchemePoint {
    scheme: Scheme,
    /// `None` when the budget cannot power M RAPs.
    p_tx: Option<f64>,
    fronthaul_snr: f64,
    digital_rate: Option<f64>,
}

const ARCHS: [&str; 2] = ["udn", "cellfree"];

/// Sum-rate vs number of RAPs for UDN and cell-free deployments of every
/// scheme, with per-RAP transmit power set by the total budget.
pub fn run_throughput_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = start(SweepKind::ThroughputSweep, cfg)?;
    require_axis(&cfg.sweep.num_raps, "num_raps")?;
    if cfg.sweep.num_raps.contains(&0) {
        return Err(Error::Config("num_raps entries must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let noise = cfg.channel.noise_power_w(cfg.radio.bandwidth_hz);
    let mut infeasible = Vec::new();
    let mut tx_powers = Vec::new();

    for &m in &cfg.sweep.num_raps {
        let j = cfg.scenario.num_ues(m);
        let mut points = Vec::with_capacity(cfg.schemes.len());
        for &scheme in &cfg.schemes {
            let sc = SchemeConfig::new(scheme, cfg.radio);
            let p_tx = match cfg.power.solve_tx_power(&sc, m, &cfg.fiber, cfg.budget_w) {
                Ok(p) => Some(p),
                Err(e @ Error::InfeasibleBudget { .. }) if cfg.on_infeasible == InfeasiblePolicy::Error => {
                    return Err(e)
                }
                Err(Error::DispersionNull(msg)) if !cfg.allow_null => return Err(Error::DispersionNull(msg)),
                Err(Error::InfeasibleBudget { .. }) | Err(Error::DispersionNull(_)) => None,
                Err(e) => return Err(config_err(e)),
            };
            if p_tx.is_none() {
                infeasible.push(json!({"scheme": scheme, "M": m}));
            }
            tx_powers.push(json!({"scheme": scheme, "M": m, "p_tx_w": p_tx}));
            let snr_db = crate::optics::fronthaul_snr_db(&sc, &cfg.fiber).map_err(config_err)?;
            points.push(SchemePoint {
                scheme,
                p_tx,
                fronthaul_snr: db_to_linear(snr_db),
                digital_rate: (!scheme.is_analog()).then_some(cfg.radio.fiber_bit_rate_bps),
            });
        }

        // Index drops explicitly so the reduction order never depends on scheduling.
        let per_drop: Vec<Vec<[f64; 2]>> = pool.install(|| {
            (0..cfg.monte_carlo_drops)
                .into_par_iter()
                .map(|d| evaluate_drop(cfg, m, j, cfg.base_seed.wrapping_add(d as u64), &points, noise))
                .collect::<Result<Vec<_>>>()
        })?;

        for (a, arch) in ARCHS.iter().enumerate() {
            for (s, pt) in points.iter().enumerate() {
                let samples: Vec<f64> = per_drop.iter().map(|d| d[s][a]).collect();
                let (mean, ci) = mean_ci95(&samples);
                table.push(vec![
                    (*arch).into(),
                    pt.scheme.to_string().into(),
                    m.into(),
                    j.into(),
                    cfg.monte_carlo_drops.into(),
                    pt.p_tx.unwrap_or(f64::NAN).into(),
                    mean.into(),
                    ci.into(),
                ]);
            }
        }
    }
    table.summary = json!({ "infeasible": infeasible, "tx_power": tx_powers, "noise_w": noise });
    Ok(table)
}

/// Sum rates `[udn, cellfree]` per scheme for one drop.
fn evaluate_drop(
    cfg: &ExperimentConfig,
    m: usize,
    j: usize,
    seed: u64,
    points: &[SchemePoint],
    noise: f64,
) -> Result<Vec<[f64; 2]>> {
    let scenario = Scenario {
        area: cfg.scenario.area,
        num_raps: m,
        num_ues: j,
        fiber_length: FiberLengthPolicy::Uniform(cfg.fiber.length_km),
        rng_seed: seed,
    };
    let layout = generate_layout(&scenario).map_err(config_err)?;
    let channels = draw_channels(&layout, &cfg.channel, seed);
    let assoc = udn_association(&layout, cfg.scenario.association)?;
    let shares: Vec<f64> = (0..j).map(|u| assoc.time_share(u)).collect();
    let links = [udn_link_powers(&channels, &assoc), cellfree_link_powers(&channels)];
    let overhead = cfg.throughput.overhead.fraction(m, j);

    points
        .iter()
        .map(|pt| {
            let Some(p_tx) = pt.p_tx else { return Ok([0.0, 0.0]) };
            let mut out = [0.0; 2];
            for (a, lp) in links.iter().enumerate() {
                let sinr: Vec<f64> = lp
                    .sinr(p_tx, noise)
                    .into_iter()
                    .map(|s| combine_fronthaul_noise(s, pt.fronthaul_snr))
                    .collect();
                let share = (a == 0).then_some(shares.as_slice());
                out[a] = sum_throughput(
                    &sinr,
                    share,
                    cfg.radio.bandwidth_hz,
                    overhead,
                    pt.digital_rate,
                    &cfg.throughput,
                )?;
            }
            Ok(out)
        })
        .collect()
}

/// Sample mean and 95% normal-approximation half-width.
pub fn mean_ci95(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, 1.96 * (var / n as f64).sqrt())
}

/// |AF| over a (frequency, angle) grid for phase-only and TTD steering of a
/// uniform linear array.
pub fn run_beam_pattern(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = start(SweepKind::BeamPattern, cfg)?;
    let b = &cfg.beam;
    require_axis(&b.frequencies_hz, "beam.frequencies_hz")?;
    if !(b.theta_step_deg > 0.0 && b.theta_to_deg >= b.theta_from_deg) {
        return Err(Error::Config("beam angle grid is empty".into()));
    }
    let geom = ArrayGeometry::ula(b.elements, b.spacing(), b.center_freq_hz, b.band_hz).map_err(config_err)?;
    let steer = b.steer_deg.to_radians();
    let modes = [
        (
            "phase_only",
            beamform::phase_only_weights(&geom, steer, b.center_freq_hz),
        ),
        ("ttd", beamform::ttd_weights(&geom, steer)),
    ];
    let grid = beamform::angle_grid_deg(b.theta_from_deg, b.theta_to_deg, b.theta_step_deg);
    let mut peaks = Vec::new();
    for (mode, spec) in &modes {
        for &f in &b.frequencies_hz {
            let mut best = (f64::NEG_INFINITY, f64::NAN);
            for &deg in &grid {
                let af = beamform::array_factor(&geom, spec, f, deg.to_radians()).map_err(config_err)?;
                let mag = af.norm();
                if mag > best.0 {
                    best = (mag, deg);
                }
                table.push(vec![(*mode).into(), f.into(), deg.into(), mag.into(), af.arg().into()]);
            }
            let predicted = match *mode {
                "ttd" => Some(b.steer_deg),
                _ => beamform::beam_squint_direction(f, b.center_freq_hz, steer)
                    .ok()
                    .map(f64::to_degrees),
            };
            peaks.push(json!({"mode": mode, "f_hz": f, "peak_deg": best.1, "predicted_deg": predicted}));
        }
    }
    table.summary = json!({ "peaks": peaks, "spacing_m": b.spacing() });
    Ok(table)
}

/// Sidecar path next to a CSV output: `out.csv` becomes `out.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

/// Writes the table as CSV to `out` and its metadata to the sidecar.
pub fn write_outputs(table: &ResultTable, out: &Path) -> Result<()> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    table.write_csv(std::io::BufWriter::new(std::fs::File::create(out)?))?;
    let meta = serde_json::to_string_pretty(&table.meta_json())?;
    std::fs::write(meta_path(out), meta + "\n")?;
    Ok(())
}
