//! Power consumption of BBoF, IFoF and RFoF deployments.
//!
//! Module placement per scheme:
//!
//! | scheme | CU                       | RAP                          |
//! |--------|--------------------------|------------------------------|
//! | BBoF   | BBU, E-O                 | O-E, DUC, DPD, DAC, RFU, CM, PA |
//! | IFoF   | BBU, DUC, DAC, IFM, E-O  | O-E, RFU, CM, PA             |
//! | RFoF   | BBU, DUC, DAC, RFU, E-O  | O-E, PA                      |
//!
//! Analog links additionally pay a drive power that grows with the optical
//! loss they must overcome. Power-supply and cooling losses are fractions of
//! the functional consumption.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{FiberParams, Scheme, SchemeConfig};
use crate::units::db_to_linear;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaEfficiency {
    pub bbof: f64,
    pub ifof: f64,
    pub rfof: f64,
}

impl Default for PaEfficiency {
    fn default() -> Self {
        // DPD lifts the BBoF amplifier from 15% to 25%.
        Self {
            bbof: 0.25,
            ifof: 0.15,
            rfof: 0.15,
        }
    }
}

impl PaEfficiency {
    pub fn get(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Bbof => self.bbof,
            Scheme::Ifof => self.ifof,
            Scheme::Rfof => self.rfof,
        }
    }
}

/// Component wattages (W) and loss fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerParams {
    pub p_bbu: f64,
    pub p_ifm: f64,
    pub p_duc: f64,
    pub p_dpd: f64,
    pub p_dac: f64,
    pub p_rfu: f64,
    pub p_cm: f64,
    pub p_eo: f64,
    pub p_oe: f64,
    pub pa_efficiency: PaEfficiency,
    pub pa_gain_db: f64,
    /// Fraction of PA output lost in the coaxial feeder (3 dB).
    pub feeder_loss: f64,
    pub supply_loss: f64,
    pub cooling_frac: f64,
    /// Analog link drive power at zero optical loss, W.
    pub p_link0: f64,
}

impl Default for PowerParams {
    fn default() -> Self {
        Self {
            p_bbu: 58.0,
            p_ifm: 2.0,
            p_duc: 3.0,
            p_dpd: 5.0,
            p_dac: 2.0,
            p_rfu: 2.0,
            p_cm: 1.0,
            p_eo: 1.0,
            p_oe: 1.0,
            pa_efficiency: PaEfficiency::default(),
            pa_gain_db: 10.0,
            feeder_loss: 0.5,
            supply_loss: 0.15,
            cooling_frac: 0.2,
            p_link0: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRole {
    CuShare,
    Rap,
}

/// Itemized consumption. `per_rap_watts` and `fiber_comp_watts` are per RAP;
/// `overhead_watts` is the supply and cooling share of the whole system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBreakdown {
    pub cu_watts: f64,
    pub per_rap_watts: f64,
    pub fiber_comp_watts: f64,
    pub overhead_watts: f64,
    pub total_watts: f64,
}

impl PowerParams {
    pub fn validate(&self) -> Result<()> {
        let watts = [
            self.p_bbu,
            self.p_ifm,
            self.p_duc,
            self.p_dpd,
            self.p_dac,
            self.p_rfu,
            self.p_cm,
            self.p_eo,
            self.p_oe,
            self.p_link0,
            self.pa_gain_db,
            self.supply_loss,
            self.cooling_frac,
        ];
        if watts.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::validation("power parameters must be finite and non-negative"));
        }
        if Scheme::ALL.iter().any(|&s| {
            let mu = self.pa_efficiency.get(s);
            !(mu > 0.0 && mu <= 1.0)
        }) {
            return Err(Error::validation("PA efficiencies must lie in (0, 1]"));
        }
        if !(0.0..1.0).contains(&self.feeder_loss) {
            return Err(Error::validation("feeder loss must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Supply and cooling multiplier applied to functional power.
    pub fn overhead_multiplier(&self) -> f64 {
        1.0 + self.supply_loss + self.cooling_frac
    }

    /// DC power the PA draws to radiate `p_tx` watts at the antenna.
    pub fn pa_input_power(&self, p_tx: f64, scheme: Scheme) -> f64 {
        p_tx / (self.pa_efficiency.get(scheme) * (1.0 - self.feeder_loss))
    }

    /// RF drive the PA needs at its input, given its gain.
    pub fn pa_drive_power(&self, p_tx: f64) -> f64 {
        p_tx / ((1.0 - self.feeder_loss) * db_to_linear(self.pa_gain_db))
    }

    /// Sum of the modules hosted at `role` for `scheme`. The RAP includes its PA.
    pub fn node_functional_power(&self, scheme: Scheme, role: NodeRole, p_tx: f64) -> f64 {
        match (scheme, role) {
            (Scheme::Bbof, NodeRole::CuShare) => self.p_bbu + self.p_eo,
            (Scheme::Ifof, NodeRole::CuShare) => self.p_bbu + self.p_duc + self.p_dac + self.p_ifm + self.p_eo,
            (Scheme::Rfof, NodeRole::CuShare) => self.p_bbu + self.p_duc + self.p_dac + self.p_rfu + self.p_eo,
            (Scheme::Bbof, NodeRole::Rap) => {
                self.p_oe
                    + self.p_duc
                    + self.p_dpd
                    + self.p_dac
                    + self.p_rfu
                    + self.p_cm
                    + self.pa_input_power(p_tx, scheme)
            }
            (Scheme::Ifof, NodeRole::Rap) => self.p_oe + self.p_rfu + self.p_cm + self.pa_input_power(p_tx, scheme),
            (Scheme::Rfof, NodeRole::Rap) => self.p_oe + self.pa_input_power(p_tx, scheme),
        }
    }

    /// Drive power one analog link spends overcoming attenuation and fading.
    /// Zero for BBoF; `+inf` at a dispersion null.
    pub fn fiber_compensation_power(&self, cfg: &SchemeConfig, fiber: &FiberParams) -> Result<f64> {
        if !cfg.scheme.is_analog() {
            return Ok(0.0);
        }
        let loss = cfg.analog_loss_db(fiber)?;
        if loss.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok(self.p_link0 * db_to_linear(loss))
    }

    /// Whole-system consumption for M RAPs each radiating `p_tx`. A dispersion
    /// null shows up as infinite fiber and total wattage.
    pub fn system_power(
        &self,
        cfg: &SchemeConfig,
        num_raps: usize,
        p_tx: f64,
        fiber: &FiberParams,
    ) -> Result<PowerBreakdown> {
        if num_raps == 0 {
            return Err(Error::validation("system needs at least one RAP"));
        }
        if !(p_tx >= 0.0) {
            return Err(Error::validation(format!("transmit power must be >= 0, got {p_tx}")));
        }
        let m = num_raps as f64;
        let cu = self.node_functional_power(cfg.scheme, NodeRole::CuShare, p_tx);
        let rap = self.node_functional_power(cfg.scheme, NodeRole::Rap, p_tx);
        let comp = self.fiber_compensation_power(cfg, fiber)?;
        let functional = cu + m * (rap + comp);
        let total = self.overhead_multiplier() * functional;
        Ok(PowerBreakdown {
            cu_watts: cu,
            per_rap_watts: rap,
            fiber_comp_watts: comp,
            overhead_watts: total - functional,
            total_watts: total,
        })
    }

    /// Per-RAP transmit power that spends exactly `budget_w`.
    ///
    /// Total consumption is affine in `p_tx`, so the inverse is closed form.
    pub fn solve_tx_power(
        &self,
        cfg: &SchemeConfig,
        num_raps: usize,
        fiber: &FiberParams,
        budget_w: f64,
    ) -> Result<f64> {
        let fixed = self.system_power(cfg, num_raps, 0.0, fiber)?.total_watts;
        if fixed.is_infinite() {
            return Err(Error::DispersionNull(format!(
                "{} link of {} km has infinite loss",
                cfg.scheme, fiber.length_km
            )));
        }
        if !(budget_w >= fixed) {
            return Err(Error::InfeasibleBudget {
                budget_w,
                fixed_w: fixed,
            });
        }
        let slope = self.overhead_multiplier() * num_raps as f64
            / (self.pa_efficiency.get(cfg.scheme) * (1.0 - self.feeder_loss));
        Ok(((budget_w - fixed) / slope).max(0.0))
    }

    /// `p_link0` value that makes RFoF and BBoF consume the same at
    /// `target_km`. The RFoF total is affine in `p_link0`.
    pub fn calibrate_link_drive(
        &self,
        radio: crate::optics::RadioParams,
        num_raps: usize,
        p_tx: f64,
        fiber: &FiberParams,
        target_km: f64,
    ) -> Result<f64> {
        let at = fiber.with_length(target_km);
        let bbof = SchemeConfig::new(Scheme::Bbof, radio);
        let rfof = SchemeConfig::new(Scheme::Rfof, radio);
        let target = self.system_power(&bbof, num_raps, p_tx, &at)?.total_watts / self.overhead_multiplier();
        let m = num_raps as f64;
        let cu = self.node_functional_power(Scheme::Rfof, NodeRole::CuShare, p_tx);
        let rap = self.node_functional_power(Scheme::Rfof, NodeRole::Rap, p_tx);
        let gain = db_to_linear(rfof.analog_loss_db(&at)?);
        let p = ((target - cu) / m - rap) / gain;
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::validation(format!(
                "no non-negative link drive reaches a crossover at {target_km} km"
            )));
        }
        Ok(p)
    }
}

/// Scan resolution and range for [`crossover_length`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CrossoverSearch {
    pub from_km: f64,
    pub to_km: f64,
    pub step_km: f64,
}

impl Default for CrossoverSearch {
    fn default() -> Self {
        Self {
            from_km: 0.0,
            to_km: 25.0,
            step_km: 0.05,
        }
    }
}

/// Smallest fiber length in the search range at which scheme `a` consumes
/// more than scheme `b`. `None` when that never happens or the two totals
/// coincide at the start of the range.
pub fn crossover_length(
    params: &PowerParams,
    a: &SchemeConfig,
    b: &SchemeConfig,
    num_raps: usize,
    p_tx: f64,
    fiber: &FiberParams,
    search: CrossoverSearch,
) -> Result<Option<f64>> {
    if !(search.step_km > 0.0 && search.to_km >= search.from_km && search.from_km >= 0.0) {
        return Err(Error::validation(format!("invalid crossover search {search:?}")));
    }
    let diff = |l: f64| -> Result<f64> {
        let f = fiber.with_length(l);
        let ta = params.system_power(a, num_raps, p_tx, &f)?.total_watts;
        let tb = params.system_power(b, num_raps, p_tx, &f)?.total_watts;
        Ok(match (ta.is_infinite(), tb.is_infinite()) {
            (true, true) => 0.0,
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => ta - tb,
        })
    };
    let d0 = diff(search.from_km)?;
    if d0 == 0.0 {
        return Ok(None);
    }
    if d0 > 0.0 {
        return Ok(Some(search.from_km));
    }
    let steps = ((search.to_km - search.from_km) / search.step_km).ceil() as usize;
    let mut lo = search.from_km;
    for i in 1..=steps {
        let hi = (search.from_km + i as f64 * search.step_km).min(search.to_km);
        if diff(hi)? > 0.0 {
            let mut hi = hi;
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if diff(mid)? > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        lo = hi;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::RadioParams;
    use proptest::prelude::*;

    fn cfg(s: Scheme) -> SchemeConfig {
        SchemeConfig::new(s, RadioParams::default())
    }

    fn cfg_at(s: Scheme, f: f64) -> SchemeConfig {
        SchemeConfig::new(
            s,
            RadioParams {
                rf_carrier_hz: f,
                ..RadioParams::default()
            },
        )
    }

    fn fiber(l: f64) -> FiberParams {
        FiberParams::default().with_length(l)
    }

    #[test]
    fn pa_input_examples() {
        let p = PowerParams::default();
        assert_eq!(p.pa_input_power(0.0, Scheme::Bbof), 0.0);
        assert!((p.pa_input_power(1.0, Scheme::Bbof) - 8.0).abs() < 1e-12);
        assert!((p.pa_input_power(1.0, Scheme::Rfof) - 1.0 / 0.075).abs() < 1e-12);
        // PA drive is a small fraction of what it draws from the supply
        assert!(p.pa_drive_power(1.0) < p.pa_input_power(1.0, Scheme::Bbof));
        assert!((p.pa_drive_power(1.0) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn node_power_examples() {
        let p = PowerParams::default();
        assert!((p.node_functional_power(Scheme::Bbof, NodeRole::Rap, 1.0) - 22.0).abs() < 1e-12);
        assert!((p.node_functional_power(Scheme::Rfof, NodeRole::Rap, 1.0) - (1.0 + 1.0 / 0.075)).abs() < 1e-12);
        assert_eq!(p.node_functional_power(Scheme::Ifof, NodeRole::CuShare, 1.0), 66.0);
        assert_eq!(p.node_functional_power(Scheme::Bbof, NodeRole::CuShare, 1.0), 59.0);
    }

    #[test]
    fn fiber_compensation_examples() {
        let p = PowerParams::default();
        assert_eq!(
            p.fiber_compensation_power(&cfg(Scheme::Bbof), &fiber(100.0)).unwrap(),
            0.0
        );
        // 7.1 dB of loss as pure attenuation: zero dispersion fiber
        let mut f = fiber(7.1 / 0.3);
        f.dispersion_ps_nm_km = 0.0;
        let w = p.fiber_compensation_power(&cfg(Scheme::Rfof), &f).unwrap();
        assert!((w - 1.5 * 10f64.powf(0.71)).abs() < 1e-9);
        assert!((w - 7.7).abs() < 0.05);
        let null = crate::optics::null_lengths(&fiber(0.0), 20e9, 1).unwrap()[0];
        assert_eq!(
            p.fiber_compensation_power(&cfg(Scheme::Rfof), &fiber(null)).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn single_rap_bbof_total() {
        let p = PowerParams::default();
        let b = p.system_power(&cfg(Scheme::Bbof), 1, 1.0, &fiber(19.0)).unwrap();
        assert!((b.total_watts - 1.35 * 81.0).abs() < 1e-9);
        assert!((b.overhead_watts - 0.35 * 81.0).abs() < 1e-9);
        assert_eq!(b.fiber_comp_watts, 0.0);
    }

    #[test]
    fn bbof_ignores_fiber_length() {
        let p = PowerParams::default();
        let a = p.system_power(&cfg(Scheme::Bbof), 64, 1.0, &fiber(1.0)).unwrap();
        let b = p.system_power(&cfg(Scheme::Bbof), 64, 1.0, &fiber(25.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rap_complexity_ordering() {
        let p = PowerParams::default();
        let rap = |s| p.node_functional_power(s, NodeRole::Rap, 0.1);
        assert!(rap(Scheme::Bbof) > rap(Scheme::Ifof));
        assert!(rap(Scheme::Ifof) > rap(Scheme::Rfof));
    }

    #[test]
    fn solver_at_fixed_power_and_infeasible() {
        let p = PowerParams::default();
        let c = cfg(Scheme::Bbof);
        let fixed = p.system_power(&c, 10, 0.0, &fiber(19.0)).unwrap().total_watts;
        assert_eq!(p.solve_tx_power(&c, 10, &fiber(19.0), fixed).unwrap(), 0.0);
        assert!(matches!(
            p.solve_tx_power(&c, 10, &fiber(19.0), fixed - 1.0),
            Err(Error::InfeasibleBudget { .. })
        ));
        let null = crate::optics::null_lengths(&fiber(0.0), 20e9, 1).unwrap()[0];
        assert!(matches!(
            p.solve_tx_power(&cfg(Scheme::Rfof), 10, &fiber(null), 2100.0),
            Err(Error::DispersionNull(_))
        ));
    }

    #[test]
    fn solver_matches_secant_rearrangement() {
        // Independent route: the total is affine, so two evaluations fix it.
        let p = PowerParams::default();
        let c = cfg(Scheme::Bbof);
        let t0 = p.system_power(&c, 100, 0.0, &fiber(19.0)).unwrap().total_watts;
        let t1 = p.system_power(&c, 100, 1.0, &fiber(19.0)).unwrap().total_watts;
        let want = (2100.0 - t0) / (t1 - t0);
        let got = p.solve_tx_power(&c, 100, &fiber(19.0), 2100.0).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        // 1.35 (59 + 100 (14 + 8 p)) = 2100
        assert!((got - (2100.0 / 1.35 - 59.0 - 1400.0) / 800.0).abs() < 1e-12);
    }

    #[test]
    fn crossover_ordering_and_identity() {
        let p = PowerParams::default();
        let s = CrossoverSearch::default();
        let c10 = crossover_length(
            &p,
            &cfg_at(Scheme::Rfof, 10e9),
            &cfg_at(Scheme::Bbof, 10e9),
            100,
            1.0,
            &fiber(0.0),
            s,
        )
        .unwrap()
        .unwrap();
        let c20 = crossover_length(
            &p,
            &cfg_at(Scheme::Rfof, 20e9),
            &cfg_at(Scheme::Bbof, 20e9),
            100,
            1.0,
            &fiber(0.0),
            s,
        )
        .unwrap()
        .unwrap();
        assert!((10.0..=17.0).contains(&c10), "{c10}");
        assert!(c20 < c10);
        let same = crossover_length(&p, &cfg(Scheme::Bbof), &cfg(Scheme::Bbof), 100, 1.0, &fiber(0.0), s).unwrap();
        assert_eq!(same, None);
    }

    #[test]
    fn crossover_is_a_sign_change() {
        let p = PowerParams::default();
        let (a, b) = (cfg_at(Scheme::Rfof, 20e9), cfg_at(Scheme::Bbof, 20e9));
        let l = crossover_length(&p, &a, &b, 100, 1.0, &fiber(0.0), CrossoverSearch::default())
            .unwrap()
            .unwrap();
        let total = |c: &SchemeConfig, l: f64| p.system_power(c, 100, 1.0, &fiber(l)).unwrap().total_watts;
        assert!(total(&a, l) > total(&b, l));
        assert!(total(&a, l - 1e-6) <= total(&b, l - 1e-6));
    }

    #[test]
    fn calibration_hits_target() {
        let p = PowerParams::default();
        let radio = RadioParams {
            rf_carrier_hz: 10e9,
            ..RadioParams::default()
        };
        let p_link0 = p.calibrate_link_drive(radio, 100, 1.0, &fiber(0.0), 13.5).unwrap();
        let tuned = PowerParams { p_link0, ..p };
        let c = crossover_length(
            &tuned,
            &SchemeConfig::new(Scheme::Rfof, radio),
            &SchemeConfig::new(Scheme::Bbof, radio),
            100,
            1.0,
            &fiber(0.0),
            CrossoverSearch::default(),
        )
        .unwrap()
        .unwrap();
        assert!((c - 13.5).abs() < 1e-6, "{c}");
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = PowerParams::default();
        assert!(p.validate().is_ok());
        p.feeder_loss = 1.0;
        assert!(p.validate().is_err());
        let mut p = PowerParams::default();
        p.pa_efficiency.rfof = 0.0;
        assert!(p.validate().is_err());
        assert!(PowerParams::default()
            .system_power(&cfg(Scheme::Bbof), 0, 1.0, &fiber(1.0))
            .is_err());
    }

    proptest! {
        #[test]
        fn solver_round_trip(scheme in 0usize..3, m in 1usize..200, extra in 0.0f64..5000.0, l in 0.0f64..25.0) {
            let p = PowerParams::default();
            let c = cfg(Scheme::ALL[scheme]);
            let fixed = p.system_power(&c, m, 0.0, &fiber(l)).unwrap().total_watts;
            prop_assume!(fixed.is_finite());
            let budget = fixed + extra;
            let tx = p.solve_tx_power(&c, m, &fiber(l), budget).unwrap();
            let back = p.system_power(&c, m, tx, &fiber(l)).unwrap().total_watts;
            prop_assert!((back - budget).abs() < 1e-6);
        }

        #[test]
        fn total_increases_with_tx_and_raps(scheme in 0usize..3, m in 1usize..200, tx in 0.0f64..10.0) {
            let p = PowerParams::default();
            let c = cfg(Scheme::ALL[scheme]);
            let t = |m, tx| p.system_power(&c, m, tx, &fiber(5.0)).unwrap().total_watts;
            prop_assert!(t(m, tx + 0.01) > t(m, tx));
            prop_assert!(t(m + 1, tx) > t(m, tx));
        }

        #[test]
        fn ifof_increases_with_length(l in 0.0f64..24.9) {
            let p = PowerParams::default();
            let c = cfg(Scheme::Ifof);
            let t = |l| p.system_power(&c, 50, 1.0, &fiber(l)).unwrap().total_watts;
            prop_assert!(t(l + 0.1) > t(l));
        }
    }
}
