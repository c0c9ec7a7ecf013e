//! Model files and the compiled linkage topology.
//!
//! A model file declares the named points of the mechanism, its rigid links,
//! joints, right-angle marks, ground anchors and phalanx geometry, plus the
//! independent vector loops whose closure defines the kinematics. Each loop
//! is a walk through named points; every step is either a constant anchor
//! vector or `sign * length * (cos θ, sin θ)` with θ an affine combination of
//! state angles and finger angles.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::state::{StateVector, STATE_DIM, STATE_NAMES};
use crate::problem::design::{DesignVector, ALL_VARIABLES};

pub const FORMAT_VERSION: u32 = 1;

/// The bundled hand-exoskeleton model.
pub const BUNDLED_MODEL: &str = include_str!("../../models/uhex.toml");

// ---------------------------------------------------------------------------
// Serialized form
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub points: Vec<String>,
    /// Ground anchor placements relative to the MCP joint (mm).
    pub anchors: BTreeMap<String, [f64; 2]>,
    pub phalanges: PhalanxSpec,
    /// Fixed link lengths and offsets (mm).
    #[serde(default)]
    pub lengths: BTreeMap<String, f64>,
    /// Fixed angles (deg).
    #[serde(default)]
    pub angles: BTreeMap<String, f64>,
    /// Decision-variable defaults (mm). Variables that are not optimized keep
    /// these values.
    pub variables: BTreeMap<String, f64>,
    pub sliders: BTreeMap<String, SliderSpec>,
    pub links: Vec<LinkSpec>,
    pub joints: Vec<JointSpec>,
    #[serde(default)]
    pub right_angles: Vec<[String; 3]>,
    pub loops: Vec<LoopSpec>,
    /// Neutral initial guess at the open pose for the default variables.
    /// Angles in degrees.
    pub neutral_guess: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhalanxSpec {
    pub proximal: f64,
    pub middle: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliderSpec {
    pub point: String,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub from: String,
    pub to: String,
    /// Name of a fixed length or decision variable.
    pub length: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    Revolute,
    PrismaticPassive,
    PrismaticActuated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointSpec {
    pub kind: JointKind,
    /// Points joined. A revolute joint lists one point; a prismatic joint
    /// lists its two ends.
    pub points: Vec<String>,
    /// State entry driven by a prismatic joint.
    #[serde(default)]
    pub variable: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub name: String,
    pub start: String,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub to: String,
    #[serde(default)]
    pub length: Option<String>,
    /// Step between two ground anchors; the displacement comes from the
    /// anchor table.
    #[serde(default)]
    pub ground: bool,
    /// Coefficients on state angles (`q_O` … `q_D`) and finger angles
    /// (`q_MCP`, `q_PIP`).
    #[serde(default)]
    pub angle: BTreeMap<String, f64>,
    #[serde(default)]
    pub offset_deg: f64,
    /// Named fixed angle added to `offset_deg`.
    #[serde(default)]
    pub offset: Option<String>,
    #[serde(default = "one")]
    pub sign: f64,
}

fn one() -> f64 {
    1.0
}

// ---------------------------------------------------------------------------
// Compiled form
// ---------------------------------------------------------------------------

/// Source of a term's scalar length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LengthSource {
    Fixed(f64),
    /// Index into [`ALL_VARIABLES`].
    Variable(usize),
    /// Index into the state vector.
    State(usize),
}

/// θ = Σ state_coef[k]·state[1 + k] + Σ pose_coef[j]·pose_rad[j] + offset
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AngleExpr {
    pub state_coef: [f64; 5],
    pub pose_coef: [f64; 2],
    pub offset: f64,
}

impl AngleExpr {
    pub fn eval(&self, state: &[f64; STATE_DIM], pose_rad: [f64; 2]) -> f64 {
        let mut theta = self.offset;
        for k in 0..5 {
            theta += self.state_coef[k] * state[1 + k];
        }
        theta + self.pose_coef[0] * pose_rad[0] + self.pose_coef[1] * pose_rad[1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum TermKind {
    Anchor([f64; 2]),
    Polar {
        length: LengthSource,
        angle: AngleExpr,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Term {
    pub to: usize,
    pub sign: f64,
    pub kind: TermKind,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Loop {
    pub name: String,
    pub start: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidLink {
    pub from: String,
    pub to: String,
    pub length: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub kind: JointKind,
    pub points: Vec<String>,
    pub variable: Option<String>,
}

/// Slider travel limits (mm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliderLimits {
    pub min: f64,
    pub max: f64,
}

impl SliderLimits {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }

    /// Distance outside `[min, max]`, zero inside.
    pub fn excess(&self, value: f64) -> f64 {
        if value < self.min {
            self.min - value
        } else if value > self.max {
            value - self.max
        } else {
            0.0
        }
    }
}

/// A validated planar closed-chain linkage.
#[derive(Debug, Clone)]
pub struct LinkageTopology {
    pub name: String,
    pub points: Vec<String>,
    pub links: Vec<RigidLink>,
    pub joints: Vec<Joint>,
    pub ground_anchors: BTreeMap<String, [f64; 2]>,
    pub proximal_length: f64,
    pub middle_length: f64,
    pub right_angle_marks: Vec<[String; 3]>,
    pub slider_c1: SliderLimits,
    pub slider_c2: SliderLimits,
    pub(crate) loops: Vec<Loop>,
    /// Default values for all nine variables, in [`ALL_VARIABLES`] order.
    pub(crate) defaults: [f64; 9],
    /// Which of [`ALL_VARIABLES`] this model declares.
    pub(crate) declared: [bool; 9],
    pub(crate) fixed_lengths: BTreeMap<String, f64>,
    neutral_guess: StateVector,
    source_hash: String,
    file: ModelFile,
}

impl LinkageTopology {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED_MODEL).expect("bundled model is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ModelFile =
            toml::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        let mut topo = Self::compile(&file)?;
        topo.source_hash = crate::hash_hex(text.as_bytes());
        Ok(topo)
    }

    /// Hash of the model file text; recorded in provenance blocks.
    pub fn source_hash(&self) -> &str {
        &self.source_hash
    }

    /// Neutral initial guess: the open-pose solution for the model defaults.
    pub fn neutral_guess(&self) -> StateVector {
        self.neutral_guess
    }

    pub fn defaults(&self) -> [f64; 9] {
        self.defaults
    }

    pub fn default_of(&self, name: &str) -> Option<f64> {
        ALL_VARIABLES
            .iter()
            .position(|n| *n == name)
            .filter(|&i| self.declared[i])
            .map(|i| self.defaults[i])
    }

    pub fn loop_names(&self) -> impl Iterator<Item = &str> {
        self.loops.iter().map(|l| l.name.as_str())
    }

    /// Number of scalar residual equations.
    pub fn residual_count(&self) -> usize {
        2 * self.loops.len()
    }

    /// Full nine-variable length set for a design: design values where given,
    /// model defaults elsewhere.
    pub fn resolve_design(&self, design: &DesignVector) -> Result<[f64; 9]> {
        let mut vars = self.defaults;
        for (name, value) in design.iter() {
            let idx = ALL_VARIABLES
                .iter()
                .position(|n| *n == name)
                .filter(|&i| self.declared[i])
                .ok_or_else(|| {
                    Error::ModelMismatch(format!(
                        "design variable {name} is not a link of model {}",
                        self.name
                    ))
                })?;
            vars[idx] = value;
        }
        Ok(vars)
    }

    /// Translates every ground anchor, including the finger base, by `offset`.
    /// The result is the same mechanism expressed in a shifted frame.
    pub fn translated(&self, offset: [f64; 2]) -> Result<Self> {
        let mut file = self.file.clone();
        for v in file.anchors.values_mut() {
            v[0] += offset[0];
            v[1] += offset[1];
        }
        let mut topo = Self::compile(&file)?;
        topo.source_hash = self.source_hash.clone();
        Ok(topo)
    }

    /// The model file this topology was compiled from.
    pub fn model_file(&self) -> &ModelFile {
        &self.file
    }

    /// A fixed (non-variable) length of the model, including `Lp` and `Lm`.
    pub fn fixed_length(&self, name: &str) -> Option<f64> {
        self.fixed_lengths.get(name).copied()
    }

    pub(crate) fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    fn compile(file: &ModelFile) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if file.format_version != FORMAT_VERSION {
            return bad(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            ));
        }
        let mut seen = BTreeSet::new();
        for p in &file.points {
            if !seen.insert(p.as_str()) {
                return bad(format!("duplicate point {p}"));
            }
        }
        let point_idx: HashMap<&str, usize> = file
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let require_point = |name: &str, ctx: &str| -> Result<usize> {
            point_idx
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidModel(format!("{ctx} references undeclared point {name}")))
        };

        for name in file.anchors.keys() {
            require_point(name, "anchor")?;
        }
        if file.phalanges.proximal <= 0.0 || file.phalanges.middle <= 0.0 {
            return bad("phalanx lengths must be positive".into());
        }

        // decision variables
        let mut defaults = [0.0; 9];
        let mut declared = [false; 9];
        for (name, &value) in &file.variables {
            let i = ALL_VARIABLES.iter().position(|n| n == name).ok_or_else(|| {
                Error::InvalidModel(format!("unknown decision variable {name}"))
            })?;
            if !(value > 0.0 && value.is_finite()) {
                return bad(format!("variable {name} default must be positive"));
            }
            defaults[i] = value;
            declared[i] = true;
        }

        // fixed lengths may not shadow variables or state entries
        let mut fixed = file.lengths.clone();
        fixed.insert("Lp".into(), file.phalanges.proximal);
        fixed.insert("Lm".into(), file.phalanges.middle);
        for name in fixed.keys() {
            if ALL_VARIABLES.contains(&name.as_str()) || STATE_NAMES.contains(&name.as_str()) {
                return bad(format!("fixed length {name} shadows a variable"));
            }
        }
        let resolve_length = |name: &str| -> Result<LengthSource> {
            if let Some(i) = STATE_NAMES.iter().position(|n| *n == name) {
                if matches!(name, "l_OA" | "c1" | "c2") {
                    return Ok(LengthSource::State(i));
                }
                return Err(Error::InvalidModel(format!("state angle {name} used as a length")));
            }
            if let Some(i) = ALL_VARIABLES.iter().position(|n| *n == name) {
                if declared[i] {
                    return Ok(LengthSource::Variable(i));
                }
            }
            fixed
                .get(name)
                .map(|&v| LengthSource::Fixed(v))
                .ok_or_else(|| Error::InvalidModel(format!("unknown length {name}")))
        };

        // links
        let mut links = Vec::new();
        for l in &file.links {
            require_point(&l.from, "link")?;
            require_point(&l.to, "link")?;
            resolve_length(&l.length)?;
            links.push(RigidLink {
                from: l.from.clone(),
                to: l.to.clone(),
                length: l.length.clone(),
            });
        }

        // joints
        let mut joints = Vec::new();
        let mut actuated = 0;
        let mut passive = Vec::new();
        for j in &file.joints {
            for p in &j.points {
                require_point(p, "joint")?;
            }
            match j.kind {
                JointKind::Revolute => {
                    if j.points.len() != 1 {
                        return bad("revolute joint must list exactly one point".into());
                    }
                }
                JointKind::PrismaticActuated => {
                    actuated += 1;
                    if j.variable.as_deref() != Some("l_OA") || j.points.len() != 2 {
                        return bad("actuated prismatic joint must drive l_OA between two points".into());
                    }
                }
                JointKind::PrismaticPassive => {
                    match j.variable.as_deref() {
                        Some(v @ ("c1" | "c2")) => passive.push(v.to_string()),
                        _ => return bad("passive slider must drive c1 or c2".into()),
                    }
                    if j.points.len() != 2 {
                        return bad("passive slider must list its two ends".into());
                    }
                }
            }
            joints.push(Joint {
                kind: j.kind,
                points: j.points.clone(),
                variable: j.variable.clone(),
            });
        }
        if actuated != 1 {
            return bad(format!("expected exactly one actuated joint, found {actuated}"));
        }
        passive.sort();
        if passive != ["c1", "c2"] {
            return bad(format!("expected passive sliders c1 and c2, found {passive:?}"));
        }

        // sliders
        let slider = |name: &str, point: &str| -> Result<SliderLimits> {
            let s = file
                .sliders
                .get(name)
                .ok_or_else(|| Error::InvalidModel(format!("missing slider {name}")))?;
            if s.point != point {
                return Err(Error::InvalidModel(format!("slider {name} must sit at {point}")));
            }
            require_point(&s.point, "slider")?;
            if s.min.partial_cmp(&s.max) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidModel(format!("slider {name} has min >= max")));
            }
            Ok(SliderLimits { min: s.min, max: s.max })
        };
        let slider_c1 = slider("c1", "I")?;
        let slider_c2 = slider("c2", "J")?;

        for tri in &file.right_angles {
            for p in tri {
                require_point(p, "right-angle mark")?;
            }
        }

        // loops
        let mut loops = Vec::new();
        for lp in &file.loops {
            let start = require_point(&lp.start, "loop")?;
            let mut prev = start;
            let mut terms = Vec::new();
            for t in &lp.terms {
                let to = require_point(&t.to, "loop term")?;
                let kind = match (&t.length, t.ground) {
                    (Some(len), false) => {
                        let length = resolve_length(len)?;
                        let mut angle = AngleExpr {
                            state_coef: [0.0; 5],
                            pose_coef: [0.0; 2],
                            offset: t.offset_deg.to_radians(),
                        };
                        if let Some(name) = &t.offset {
                            let a = file.angles.get(name).ok_or_else(|| {
                                Error::InvalidModel(format!("unknown angle {name}"))
                            })?;
                            angle.offset += a.to_radians();
                        }
                        for (var, &coef) in &t.angle {
                            match var.as_str() {
                                "q_MCP" => angle.pose_coef[0] = coef,
                                "q_PIP" => angle.pose_coef[1] = coef,
                                v => match STATE_NAMES[1..6].iter().position(|n| *n == v) {
                                    Some(k) => angle.state_coef[k] = coef,
                                    None => return bad(format!("unknown angle variable {v}")),
                                },
                            }
                        }
                        TermKind::Polar { length, angle }
                    }
                    (None, true) => {
                        let from = &file.points[prev];
                        let (Some(a), Some(b)) = (file.anchors.get(from), file.anchors.get(&t.to))
                        else {
                            return bad(format!("ground step {from} -> {} needs two anchors", t.to));
                        };
                        if !t.angle.is_empty() || t.offset_deg != 0.0 || t.offset.is_some() {
                            return bad("ground steps take no angle".into());
                        }
                        TermKind::Anchor([t.sign * (b[0] - a[0]), t.sign * (b[1] - a[1])])
                    }
                    _ => return bad(format!("term to {} needs exactly one of length/ground", t.to)),
                };
                terms.push(Term { to, sign: t.sign, kind });
                prev = to;
            }
            if terms.last().map(|t| t.to) != Some(start) {
                return bad(format!("loop {} does not return to its start point", lp.name));
            }
            loops.push(Loop {
                name: lp.name.clone(),
                start,
                terms,
            });
        }
        if 2 * loops.len() != STATE_DIM {
            return bad(format!(
                "{} loops give {} residuals; the state has {STATE_DIM} unknowns",
                loops.len(),
                2 * loops.len()
            ));
        }

        // every state entry must appear somewhere
        let mut used = [false; STATE_DIM];
        for lp in &loops {
            for t in &lp.terms {
                if let TermKind::Polar { length, angle } = &t.kind {
                    if let LengthSource::State(i) = length {
                        used[*i] = true;
                    }
                    for k in 0..5 {
                        if angle.state_coef[k] != 0.0 {
                            used[1 + k] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return bad(format!("state entry {} appears in no loop", STATE_NAMES[i]));
        }

        // connectivity over links, joints and loop steps, seeded at the anchors
        let n = file.points.len();
        let mut adj = vec![Vec::new(); n];
        let mut edge = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for l in &file.links {
            edge(point_idx[l.from.as_str()], point_idx[l.to.as_str()]);
        }
        for j in &file.joints {
            if let [a, b] = j.points.as_slice() {
                edge(point_idx[a.as_str()], point_idx[b.as_str()]);
            }
        }
        for lp in &loops {
            let mut prev = lp.start;
            for t in &lp.terms {
                edge(prev, t.to);
                prev = t.to;
            }
        }
        let mut reached = vec![false; n];
        let mut stack: Vec<usize> = file.anchors.keys().map(|a| point_idx[a.as_str()]).collect();
        if stack.is_empty() {
            return bad("model has no ground anchors".into());
        }
        while let Some(p) = stack.pop() {
            if !std::mem::replace(&mut reached[p], true) {
                stack.extend(adj[p].iter().copied());
            }
        }
        if let Some(p) = reached.iter().position(|r| !r) {
            return bad(format!("point {} is not connected to ground", file.points[p]));
        }

        // neutral guess
        let mut guess = [0.0; STATE_DIM];
        for (i, name) in STATE_NAMES.iter().enumerate() {
            let v = *file.neutral_guess.get(*name).ok_or_else(|| {
                Error::InvalidModel(format!("neutral_guess lacks {name}"))
            })?;
            guess[i] = if (1..6).contains(&i) { v.to_radians() } else { v };
        }
        if file.neutral_guess.len() != STATE_DIM {
            return bad("neutral_guess has unknown entries".into());
        }

        Ok(LinkageTopology {
            name: file.name.clone(),
            points: file.points.clone(),
            links,
            joints,
            ground_anchors: file.anchors.clone(),
            proximal_length: file.phalanges.proximal,
            middle_length: file.phalanges.middle,
            right_angle_marks: file.right_angles.clone(),
            slider_c1,
            slider_c2,
            loops,
            defaults,
            declared,
            fixed_lengths: fixed,
            neutral_guess: StateVector::from_array(guess),
            source_hash: String::new(),
            file: file.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_compiles() {
        let t = LinkageTopology::bundled();
        assert_eq!(t.residual_count(), STATE_DIM);
        assert!(t.fixed_length("Lp").is_some());
        assert!(!t.source_hash().is_empty());
    }

    #[test]
    fn rejects_wrong_version() {
        let text = BUNDLED_MODEL.replacen("format_version = 1", "format_version = 7", 1);
        assert!(matches!(
            LinkageTopology::from_toml_str(&text),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            LinkageTopology::from_toml_str("not = [toml"),
            Err(Error::InvalidModel(_))
        ));
    }
}
