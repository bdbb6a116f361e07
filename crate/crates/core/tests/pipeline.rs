// Index loops below mirror the summation formulas they check.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use fwc_core::beamform::{self, BeamformerSpec, MixedOptions, DEFAULT_GROUP_INDEX};
use fwc_core::geometry::{generate_layout, FiberLengthPolicy, Scenario};
use fwc_core::harness::{run_throughput_sweep, ExperimentConfig, SweepAxes};
use fwc_core::optics::{FiberParams, Scheme, SchemeConfig};
use fwc_core::units::SPEED_OF_LIGHT;
use fwc_core::wireless::{draw_channels, ChannelModel};

/// Fading recomputed straight from the cos^2 law with SI constants.
fn fading_db(f_hz: f64, length_km: f64) -> f64 {
    let d = 17e-12 / 1e-9 / 1e3;
    let lambda = 1553.6e-9;
    let c = (std::f64::consts::PI * d * length_km * 1e3 * lambda * lambda * f_hz * f_hz / SPEED_OF_LIGHT).cos();
    -10.0 * (c * c).log10()
}

/// Rebuilds one single-drop throughput point by hand and compares it with the
/// harness output row by row.
#[test]
fn throughput_sweep_matches_hand_computation() {
    let seed = 7;
    let m = 16;
    let cfg = ExperimentConfig {
        sweep: SweepAxes {
            num_raps: vec![m],
            ..SweepAxes::default()
        },
        monte_carlo_drops: 1,
        base_seed: seed,
        ..ExperimentConfig::default()
    };
    let table = run_throughput_sweep(&cfg).unwrap();
    let j = m / 2;

    let layout = generate_layout(&Scenario {
        area: cfg.scenario.area,
        num_raps: m,
        num_ues: j,
        fiber_length: FiberLengthPolicy::Uniform(cfg.fiber.length_km),
        rng_seed: seed,
    })
    .unwrap();
    let model = ChannelModel::default();
    let ch = draw_channels(&layout, &model, seed);
    let g = |a: usize, u: usize| ch.gain(a, u);
    let noise = 10f64.powf((-174.0 + 10.0 * 10e6f64.log10() + 9.0) / 10.0) * 1e-3;
    let overhead = 1.0 - j as f64 / 200.0;

    // Nearest RAP per UE by exhaustive distance comparison.
    let serving: Vec<usize> = layout
        .ue_positions
        .iter()
        .map(|ue| {
            let d: Vec<f64> = layout.rap_positions.iter().map(|r| r.distance(ue)).collect();
            (0..m).fold(0, |b, a| if d[a] < d[b] { a } else { b })
        })
        .collect();
    let load = |a: usize| serving.iter().filter(|s| **s == a).count();

    for scheme in Scheme::ALL {
        let p = cfg
            .power
            .solve_tx_power(&SchemeConfig::new(scheme, cfg.radio), m, &cfg.fiber, cfg.budget_w)
            .unwrap();
        let fronthaul_snr = match scheme {
            Scheme::Bbof => f64::INFINITY,
            Scheme::Ifof => 10f64.powf((40.0 - 0.3 * 19.0 - fading_db(125e6, 19.0)) / 10.0),
            Scheme::Rfof => 10f64.powf((40.0 - 0.3 * 19.0 - fading_db(20e9, 19.0)) / 10.0),
        };
        let through = |s: f64| 1.0 / (1.0 / s + 1.0 / fronthaul_snr);

        let mut udn = 0.0;
        for u in 0..j {
            let sig = p * g(serving[u], u).norm_sqr();
            let intf: f64 = (0..m)
                .filter(|a| *a != serving[u] && load(*a) > 0)
                .map(|a| p * g(a, u).norm_sqr())
                .sum();
            udn += (1.0 / load(serving[u]) as f64) * (1.0 + through(sig / (intf + noise))).log2();
        }
        udn *= 10e6 * overhead;

        let mut w = vec![vec![Complex64::new(0.0, 0.0); j]; m];
        for a in 0..m {
            let eta = p / (0..j).map(|u| g(a, u).norm_sqr()).sum::<f64>();
            for k in 0..j {
                w[a][k] = eta.sqrt() * g(a, k).conj();
            }
        }
        let mut cf = 0.0;
        for u in 0..j {
            let rx: Vec<Complex64> = (0..j).map(|k| (0..m).map(|a| g(a, u) * w[a][k]).sum()).collect();
            let intf: f64 = (0..j).filter(|k| *k != u).map(|k| rx[k].norm_sqr()).sum();
            cf += (1.0 + through(rx[u].norm_sqr() / (intf + noise))).log2();
        }
        cf *= 10e6 * overhead;

        for (arch, want) in [("udn", udn), ("cellfree", cf)] {
            let row = table
                .filter("arch", arch)
                .unwrap()
                .find(|r| r[1].as_str() == Some(&scheme.to_string()))
                .unwrap();
            let got = table.get(row, "mean_sumrate_bps").unwrap();
            assert!((got - want).abs() <= 1e-9 * want, "{arch} {scheme}: {got} vs {want}");
            assert_eq!(table.get(row, "ci95_bps").unwrap(), 0.0);
        }
    }
}

#[test]
fn mixed_beamformer_beats_single_rap_and_phase_only() {
    let f0 = 10e9;
    let f_hi = 20e9;
    let model = ChannelModel::default();
    let sc = SchemeConfig::new(
        Scheme::Rfof,
        fwc_core::optics::RadioParams {
            rf_carrier_hz: f0,
            ..Default::default()
        },
    );
    for seed in 0..50u64 {
        let lengths: Vec<f64> = (0..6).map(|i| 2.0 + 3.0 * i as f64 + seed as f64 * 0.01).collect();
        let layout = generate_layout(&Scenario {
            num_raps: 6,
            num_ues: 3,
            fiber_length: FiberLengthPolicy::PerRap(lengths.clone()),
            rng_seed: seed,
            ..Scenario::default()
        })
        .unwrap();
        let ch = draw_channels(&layout, &model, seed);
        let fronthaul: Vec<Complex64> = lengths
            .iter()
            .map(|l| {
                let fiber = FiberParams::default().with_length(*l);
                beamform::fronthaul_gain(&sc, &fiber, f0, DEFAULT_GROUP_INDEX).unwrap()
            })
            .collect();
        let opts = MixedOptions {
            center_freq_hz: f0,
            group_index: DEFAULT_GROUP_INDEX,
            total_power_w: 1.0,
        };
        let mixed = beamform::mixed_beamformer(&ch, &layout, 0, &fronthaul, &opts).unwrap();
        let composite = beamform::composite_gains(&ch, 0, &fronthaul).unwrap();
        let paths = beamform::path_delays(&layout, &layout.fiber_length_km, 0, DEFAULT_GROUP_INDEX).unwrap();

        let gain_at =
            |spec: &BeamformerSpec, f: f64| beamform::distributed_response(spec, &composite, &paths, f0, f).norm_sqr();
        let best_single = composite.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max);
        let mixed_f0 = gain_at(&mixed, f0);
        let coherent: f64 = composite.iter().map(|c| c.norm_sqr()).sum();
        assert!((mixed_f0 - coherent).abs() <= 1e-9 * coherent, "seed {seed}");
        assert!(mixed_f0 >= best_single * (1.0 - 1e-12));

        let phase_only = BeamformerSpec {
            delays: vec![0.0; 6],
            ..beamform::conjugate_weights(&composite, 1.0).unwrap()
        };
        assert!(
            gain_at(&mixed, f_hi) >= gain_at(&phase_only, f_hi) * (1.0 - 1e-9),
            "seed {seed}"
        );
    }
}
