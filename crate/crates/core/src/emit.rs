//! Lowering a decomposition plan to instructions for a bulk-optics photonic
//! processor: sources, wave-plate settings, beam-splitter links, fusions and
//! measurements, plus a simple optical component tally.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::{DecompositionPlan, Occurrence, SubgraphKind};
use crate::mgraph::{angle_radians, MGraph, VertexId};
use crate::phase::Phase;

/// Wave-plate angle of an active (entangling) HWP.
pub const ACTIVE_HWP_DEG: f64 = 22.5;

pub type PhotonId = usize;

/// Maps an equatorial measurement angle to wave-plate angles in degrees.
pub trait PlateConvention {
    fn name(&self) -> &'static str;

    fn hwp_deg(&self, _alpha: f64) -> f64 {
        ACTIVE_HWP_DEG
    }

    /// Quarter-wave plate at α/2 from the fast-axis zero, α taken in [0, 2π).
    fn qwp_deg(&self, alpha: f64) -> f64 {
        alpha.rem_euclid(2.0 * PI).to_degrees() / 2.0
    }
}

/// HWP fixed at 22.5°, QWP at α/2.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardPlates;

impl PlateConvention for StandardPlates {
    fn name(&self) -> &'static str {
        "standard"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceMode {
    #[serde(rename = "GHZ")]
    Ghz,
    #[serde(rename = "PSI")]
    Psi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub photon: PhotonId,
    pub node: VertexId,
    pub subgraph: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prep {
    pub photon: PhotonId,
    pub hwp_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntangleBlock {
    pub subgraph: usize,
    pub mode: SourceMode,
    pub mode_hwp_deg: f64,
    pub photons: Vec<PhotonId>,
    /// Photon pairs meeting at a polarizing beam splitter.
    pub pbs_links: Vec<[PhotonId; 2]>,
    /// Photons receiving a Hadamard to turn the emitted state into the graph state.
    pub hadamards: Vec<PhotonId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionOp {
    pub node: VertexId,
    pub keep: PhotonId,
    pub consume: PhotonId,
    pub detector: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOp {
    pub photon: PhotonId,
    pub node: VertexId,
    /// Exact angle as a multiple of π when rational.
    pub alpha_num: Option<i64>,
    pub alpha_den: Option<i64>,
    pub alpha_rad: f64,
    pub qwp_deg: f64,
    pub hwp_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputPhoton {
    pub photon: PhotonId,
    pub node: VertexId,
    pub qubit: usize,
    /// Pauli Z to apply, or to fold into the readout basis.
    pub z_correction: bool,
}

/// A run is kept only when every listed detector registers exactly `clicks` photons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorCondition {
    pub detector: usize,
    pub clicks: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InstructionProgram {
    pub plate_convention: String,
    pub sources: Vec<Source>,
    pub prep: Vec<Prep>,
    pub entangle: Vec<EntangleBlock>,
    pub fusions: Vec<FusionOp>,
    pub measurements: Vec<MeasurementOp>,
    pub outputs: Vec<OutputPhoton>,
    pub postselect: Vec<DetectorCondition>,
}

impl InstructionProgram {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmitError {
    #[error("plan refers to node {0}, which the measurement graph does not have")]
    UnknownNode(VertexId),
    #[error("measurement graph node {0} is not covered by the plan")]
    Uncovered(VertexId),
    #[error("node {0} is consumed by a fusion but must be measured or output")]
    ConsumedSurvivor(VertexId),
}

pub fn emit(plan: &DecompositionPlan, m: &MGraph) -> Result<InstructionProgram, EmitError> {
    emit_with(plan, m, &StandardPlates)
}

/// Photons are numbered by plan position. The first occurrence of each node
/// is the photon that survives its fusions; it is measured in graph order or
/// left as an output. Every fusion precedes every measurement.
pub fn emit_with(
    plan: &DecompositionPlan,
    m: &MGraph,
    plates: &dyn PlateConvention,
) -> Result<InstructionProgram, EmitError> {
    let mut prog = InstructionProgram { plate_convention: plates.name().to_string(), ..Default::default() };
    let mut photon_of: BTreeMap<Occurrence, PhotonId> = BTreeMap::new();
    let mut survivor: BTreeMap<VertexId, PhotonId> = BTreeMap::new();

    for (si, s) in plan.subgraphs.iter().enumerate() {
        let mut photons = Vec::with_capacity(s.nodes.len());
        for (pi, &node) in s.nodes.iter().enumerate() {
            if m.vertex(node).is_none() {
                return Err(EmitError::UnknownNode(node));
            }
            let p = prog.sources.len();
            prog.sources.push(Source { photon: p, node, subgraph: si });
            prog.prep.push(Prep { photon: p, hwp_deg: ACTIVE_HWP_DEG });
            photon_of.insert((si, pi), p);
            survivor.entry(node).or_insert(p);
            photons.push(p);
        }
        let k = photons.len();
        let (mode, mode_hwp_deg, hadamards) = match s.kind {
            SubgraphKind::Ghz => (SourceMode::Ghz, ACTIVE_HWP_DEG, photons[1..].to_vec()),
            SubgraphKind::Linear => {
                let h = match k {
                    0 | 1 => vec![],
                    2 => vec![photons[1]],
                    _ => vec![photons[0], photons[k - 1]],
                };
                (SourceMode::Psi, 0.0, h)
            }
        };
        let pbs_links = photons.windows(2).map(|w| [w[0], w[1]]).collect();
        prog.entangle.push(EntangleBlock { subgraph: si, mode, mode_hwp_deg, photons, pbs_links, hadamards });
    }
    if let Some(v) = m.vertex_ids().find(|v| !survivor.contains_key(v)) {
        return Err(EmitError::Uncovered(v));
    }

    for (detector, f) in plan.fusions.iter().enumerate() {
        let keep = photon_of[&f.keep];
        let consume = photon_of[&f.consume];
        if consume == survivor[&f.node] {
            return Err(EmitError::ConsumedSurvivor(f.node));
        }
        prog.fusions.push(FusionOp { node: f.node, keep, consume, detector });
        prog.postselect.push(DetectorCondition { detector, clicks: 1 });
    }

    for &v in &m.order {
        let angle = m.vertex(v).and_then(|x| x.angle).unwrap_or_default();
        let alpha = angle_radians(m.vertex(v).unwrap()).unwrap_or(0.0);
        let (alpha_num, alpha_den) = match angle {
            Phase::Exact(r) => (Some(*r.numer()), Some(*r.denom())),
            Phase::Float(_) => (None, None),
        };
        prog.measurements.push(MeasurementOp {
            photon: survivor[&v],
            node: v,
            alpha_num,
            alpha_den,
            alpha_rad: alpha,
            qwp_deg: plates.qwp_deg(alpha),
            hwp_deg: plates.hwp_deg(alpha),
        });
    }
    for (qubit, &v) in m.outputs.iter().enumerate() {
        prog.outputs.push(OutputPhoton { photon: survivor[&v], node: v, qubit, z_correction: m.output_z.contains(&qubit) });
    }
    Ok(prog)
}

/// Optical component tally of a program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTally {
    pub sources: usize,
    pub hwp: usize,
    pub qwp: usize,
    pub pbs: usize,
    pub detectors: usize,
}

impl ComponentTally {
    pub fn total(&self) -> usize {
        self.sources + self.hwp + self.qwp + self.pbs + self.detectors
    }
}

/// Per photon a source and a preparation HWP; per block of k photons k − 1
/// PBS and, for GHZ blocks, the mode HWP; per fusion a PBS, an HWP and a
/// detector; per measurement a QWP, an HWP, a PBS and two detectors; per
/// output a detector pair.
pub fn count_components(prog: &InstructionProgram) -> ComponentTally {
    let mut t = ComponentTally { sources: prog.sources.len(), hwp: prog.prep.len(), ..Default::default() };
    for b in &prog.entangle {
        t.pbs += b.photons.len().saturating_sub(1);
        if b.mode == SourceMode::Ghz {
            t.hwp += 1;
        }
    }
    t.pbs += prog.fusions.len();
    t.hwp += prog.fusions.len();
    t.detectors += prog.fusions.len();
    t.qwp += prog.measurements.len();
    t.hwp += prog.measurements.len();
    t.pbs += prog.measurements.len();
    t.detectors += 2 * prog.measurements.len() + 2 * prog.outputs.len();
    t
}

/// One benchmark report line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub circuit: String,
    pub ghz: usize,
    pub linear: usize,
    pub photons: usize,
    pub components: usize,
    pub spiders: usize,
    pub fusions: usize,
}

pub fn stats(name: &str, prog: &InstructionProgram, plan: &DecompositionPlan, m: &MGraph) -> StatsRow {
    StatsRow {
        circuit: name.to_string(),
        ghz: plan.ghz_count(),
        linear: plan.linear_count(),
        photons: prog.sources.len(),
        components: count_components(prog).total(),
        spiders: m.num_vertices(),
        fusions: plan.fusion_count,
    }
}

pub const STATS_HEADER: [&str; 7] = ["circuit", "GHZ", "Linear", "Photons", "Comp.", "Spiders", "Fusions"];

fn cells(r: &StatsRow) -> [String; 7] {
    [
        r.circuit.clone(),
        r.ghz.to_string(),
        r.linear.to_string(),
        r.photons.to_string(),
        r.components.to_string(),
        r.spiders.to_string(),
        r.fusions.to_string(),
    ]
}

pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(STATS_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(cells(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Left-aligned circuit names, right-aligned numbers.
pub fn stats_table(rows: &[StatsRow]) -> String {
    let all: Vec<[String; 7]> =
        std::iter::once(STATS_HEADER.map(String::from)).chain(rows.iter().map(cells)).collect();
    let widths: Vec<usize> = (0..7).map(|c| all.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &all {
        let mut line = format!("{:<w$}", r[0], w = widths[0]);
        for c in 1..7 {
            let _ = write!(line, "  {:>w$}", r[c], w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Fusions run as one phase before all measurements, so the ordering only
/// breaks if a photon a fusion consumes is also scheduled for measurement.
pub fn fusions_precede_measurements(prog: &InstructionProgram) -> bool {
    let measured: BTreeSet<PhotonId> = prog.measurements.iter().map(|m| m.photon).collect();
    prog.fusions.iter().all(|f| !measured.contains(&f.consume))
}
