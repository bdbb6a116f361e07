//! Network topologies: RAP and UE placement, fiber lengths back to the CU and
//! nearest-node association for ultra-dense deployments.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(&self, other: &Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Rectangular deployment area `[0, width] x [0, height]`, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width_m: f64,
    pub height_m: f64,
}

impl Area {
    pub fn contains(&self, p: &Point2D) -> bool {
        p.is_finite() && (0.0..=self.width_m).contains(&p.x) && (0.0..=self.height_m).contains(&p.y)
    }

    fn validate(&self) -> Result<()> {
        if !(self.width_m > 0.0 && self.height_m > 0.0) || !self.width_m.is_finite() || !self.height_m.is_finite() {
            return Err(Error::validation(format!(
                "area dimensions must be positive and finite, got {} x {} m",
                self.width_m, self.height_m
            )));
        }
        Ok(())
    }
}

impl Default for Area {
    fn default() -> Self {
        Self {
            width_m: 1000.0,
            height_m: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLengthPolicy {
    /// Every RAP sits at the same fiber distance from the CU.
    Uniform(f64),
    /// Explicit per-RAP lengths, km. Must have one entry per RAP.
    PerRap(Vec<f64>),
}

impl Default for FiberLengthPolicy {
    fn default() -> Self {
        FiberLengthPolicy::Uniform(19.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub area: Area,
    pub num_raps: usize,
    pub num_ues: usize,
    pub fiber_length: FiberLengthPolicy,
    pub rng_seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            area: Area::default(),
            num_raps: 100,
            num_ues: 50,
            fiber_length: FiberLengthPolicy::default(),
            rng_seed: 1,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.area.validate()?;
        if self.num_raps == 0 || self.num_ues == 0 {
            return Err(Error::validation(format!(
                "scenario needs at least one RAP and one UE, got M={} J={}",
                self.num_raps, self.num_ues
            )));
        }
        match &self.fiber_length {
            FiberLengthPolicy::Uniform(l) => check_fiber_len(*l)?,
            FiberLengthPolicy::PerRap(ls) => {
                if ls.len() != self.num_raps {
                    return Err(Error::validation(format!(
                        "per-RAP fiber list has {} entries for {} RAPs",
                        ls.len(),
                        self.num_raps
                    )));
                }
                ls.iter().try_for_each(|l| check_fiber_len(*l))?;
            }
        }
        Ok(())
    }

    fn fiber_lengths(&self) -> Vec<f64> {
        match &self.fiber_length {
            FiberLengthPolicy::Uniform(l) => vec![*l; self.num_raps],
            FiberLengthPolicy::PerRap(ls) => ls.clone(),
        }
    }
}

fn check_fiber_len(l: f64) -> Result<()> {
    if l.is_finite() && l >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "fiber length must be finite and >= 0 km, got {l}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkLayout {
    pub area: Area,
    pub rap_positions: Vec<Point2D>,
    pub ue_positions: Vec<Point2D>,
    pub fiber_length_km: Vec<f64>,
}

impl NetworkLayout {
    pub fn new(
        area: Area,
        rap_positions: Vec<Point2D>,
        ue_positions: Vec<Point2D>,
        fiber_length_km: Vec<f64>,
    ) -> Result<Self> {
        let layout = Self {
            area,
            rap_positions,
            ue_positions,
            fiber_length_km,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn num_raps(&self) -> usize {
        self.rap_positions.len()
    }

    pub fn num_ues(&self) -> usize {
        self.ue_positions.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.area.validate()?;
        if self.rap_positions.is_empty() || self.ue_positions.is_empty() {
            return Err(Error::validation("layout needs at least one RAP and one UE"));
        }
        if self.fiber_length_km.len() != self.rap_positions.len() {
            return Err(Error::validation(format!(
                "{} fiber lengths for {} RAPs",
                self.fiber_length_km.len(),
                self.rap_positions.len()
            )));
        }
        if let Some(p) = self
            .rap_positions
            .iter()
            .chain(&self.ue_positions)
            .find(|p| !self.area.contains(p))
        {
            return Err(Error::validation(format!(
                "point ({}, {}) lies outside the area",
                p.x, p.y
            )));
        }
        self.fiber_length_km.iter().try_for_each(|l| check_fiber_len(*l))
    }

    /// Writes the layout as `kind,id,x_m,y_m,fiber_km` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["kind", "id", "x_m", "y_m", "fiber_km"])?;
        for (i, (p, l)) in self.rap_positions.iter().zip(&self.fiber_length_km).enumerate() {
            w.write_record([
                "rap".to_string(),
                i.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                l.to_string(),
            ])?;
        }
        for (i, p) in self.ue_positions.iter().enumerate() {
            w.write_record([
                "ue".to_string(),
                i.to_string(),
                p.x.to_string(),
                p.y.to_string(),
                String::new(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a layout written by [`NetworkLayout::write_csv`]. Rows may come in
    /// any order; ids must be dense per kind.
    pub fn read_csv<R: Read>(input: R, area: Area) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["kind", "id", "x_m", "y_m", "fiber_km"] {
            return Err(Error::validation(format!("unexpected layout header: {headers:?}")));
        }
        let mut raps: Vec<(usize, Point2D, f64)> = Vec::new();
        let mut ues: Vec<(usize, Point2D)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::validation(format!("bad number {:?}: {e}", &rec[i])))
            };
            let id: usize = rec[1]
                .trim()
                .parse()
                .map_err(|e| Error::validation(format!("bad id {:?}: {e}", &rec[1])))?;
            let p = Point2D::new(num(2)?, num(3)?);
            match &rec[0] {
                "rap" => raps.push((id, p, num(4)?)),
                "ue" => {
                    if !rec[4].trim().is_empty() {
                        return Err(Error::validation("UE rows must leave fiber_km empty"));
                    }
                    ues.push((id, p))
                }
                other => return Err(Error::validation(format!("unknown row kind {other:?}"))),
            }
        }
        raps.sort_by_key(|r| r.0);
        ues.sort_by_key(|u| u.0);
        if raps.iter().enumerate().any(|(i, r)| r.0 != i) || ues.iter().enumerate().any(|(i, u)| u.0 != i) {
            return Err(Error::validation("layout ids must be 0..n without gaps or duplicates"));
        }
        NetworkLayout::new(
            area,
            raps.iter().map(|r| r.1).collect(),
            ues.into_iter().map(|u| u.1).collect(),
            raps.iter().map(|r| r.2).collect(),
        )
    }
}

/// Draws M RAPs then J UEs uniformly over the area. Pure in the scenario.
pub fn generate_layout(scenario: &Scenario) -> Result<NetworkLayout> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.rng_seed);
    let area = scenario.area;
    let mut draw = |n: usize| -> Vec<Point2D> {
        (0..n)
            .map(|_| {
                Point2D::new(
                    rng.random_range(0.0..=area.width_m),
                    rng.random_range(0.0..=area.height_m),
                )
            })
            .collect()
    };
    let raps = draw(scenario.num_raps);
    let ues = draw(scenario.num_ues);
    NetworkLayout::new(area, raps, ues, scenario.fiber_lengths())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociationMode {
    /// Each UE attaches to its nearest RAP.
    #[default]
    UeNearest,
    /// Each RAP serves its nearest UE; a UE may end up with several RAPs or none.
    RapNearest,
}

/// UDN association. `serving[j]` lists the RAPs transmitting to UE j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    pub mode: AssociationMode,
    pub serving: Vec<Vec<usize>>,
    num_raps: usize,
}

impl Association {
    pub fn num_raps(&self) -> usize {
        self.num_raps
    }

    /// First serving RAP of UE `j`, if any.
    pub fn primary(&self, j: usize) -> Option<usize> {
        self.serving[j].first().copied()
    }

    /// RAPs that transmit to at least one UE.
    pub fn active_raps(&self) -> Vec<bool> {
        let mut active = vec![false; self.num_raps];
        for &m in self.serving.iter().flatten() {
            active[m] = true;
        }
        active
    }

    /// Time fraction UE `j` receives. A RAP serving k UEs round-robins them.
    pub fn time_share(&self, j: usize) -> f64 {
        match self.mode {
            AssociationMode::RapNearest => 1.0,
            AssociationMode::UeNearest => {
                let Some(m) = self.primary(j) else { return 0.0 };
                let load = self.serving.iter().filter(|s| s.first() == Some(&m)).count();
                1.0 / load as f64
            }
        }
    }
}

fn nearest(from: &Point2D, candidates: &[Point2D]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in candidates.iter().enumerate() {
        let d = from.distance(c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn udn_association(layout: &NetworkLayout, mode: AssociationMode) -> Result<Association> {
    if layout.rap_positions.is_empty() || layout.ue_positions.is_empty() {
        return Err(Error::validation("association needs at least one RAP and one UE"));
    }
    let mut serving = vec![Vec::new(); layout.num_ues()];
    match mode {
        AssociationMode::UeNearest => {
            for (j, ue) in layout.ue_positions.iter().enumerate() {
                serving[j].push(nearest(ue, &layout.rap_positions));
            }
        }
        AssociationMode::RapNearest => {
            for (m, rap) in layout.rap_positions.iter().enumerate() {
                serving[nearest(rap, &layout.ue_positions)].push(m);
            }
        }
    }
    Ok(Association {
        mode,
        serving,
        num_raps: layout.num_raps(),
    })
}
