//! Running plays of the fixed-point game and recording them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::agents::{MuDuplicator, MuSpoiler};
use super::position::{aging_holds, apply_initial, apply_mu, check_response, expect, progress_decreases, ClockedSet, MuMove, MuPosition, MuResponse, MuStep, VertexId};
use super::GameError;
use crate::formulas::Fixpoint;
use crate::game::{Branch, Outcome};
use crate::kripke::{Age, ClockedModel};
use crate::ml_game::Labeller;

/// Moves after which a play is declared runaway.
pub const MAX_PLAY_MOVES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockedLabel {
    pub model: String,
    pub clocks: BTreeMap<String, u32>,
    pub age: Age,
}

fn label(l: &mut Labeller, m: &ClockedModel) -> ClockedLabel {
    ClockedLabel { model: l.label(&m.pointed), clocks: m.clocks.clone(), age: m.age }
}

fn labels(l: &mut Labeller, set: &ClockedSet) -> Vec<ClockedLabel> {
    set.iter().map(|m| label(l, m)).collect()
}

fn pairs(l: &mut Labeller, f: &BTreeMap<ClockedModel, ClockedModel>) -> Vec<(ClockedLabel, ClockedLabel)> {
    f.iter().map(|(x, y)| (label(l, x), label(l, y))).collect()
}

fn clock_list(l: &mut Labeller, c: &BTreeMap<ClockedModel, u32>) -> Vec<(ClockedLabel, u32)> {
    c.iter().map(|(x, &v)| (label(l, x), v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MuMoveRecord {
    Or { split: Option<(usize, usize)>, left1: Vec<ClockedLabel>, left2: Vec<ClockedLabel> },
    And { split: Option<(usize, usize)>, right1: Vec<ClockedLabel>, right2: Vec<ClockedLabel> },
    Dia { choice: Vec<(ClockedLabel, ClockedLabel)> },
    Box { choice: Vec<(ClockedLabel, ClockedLabel)> },
    Bind { fixpoint: Fixpoint, var: String, clocks: Vec<(ClockedLabel, u32)> },
    Jump { var: String, clocks: Vec<(ClockedLabel, u32)> },
    Lit { literal: String },
}

impl MuMoveRecord {
    pub fn new(m: &MuMove, l: &mut Labeller) -> Self {
        match m {
            MuMove::Or { left1, left2, split } => MuMoveRecord::Or { split: *split, left1: labels(l, left1), left2: labels(l, left2) },
            MuMove::And { right1, right2, split } => MuMoveRecord::And { split: *split, right1: labels(l, right1), right2: labels(l, right2) },
            MuMove::Dia(f) => MuMoveRecord::Dia { choice: pairs(l, f) },
            MuMove::Box(g) => MuMoveRecord::Box { choice: pairs(l, g) },
            MuMove::Bind { kind, var, clocks } => MuMoveRecord::Bind { fixpoint: *kind, var: var.clone(), clocks: clock_list(l, clocks) },
            MuMove::Jump { var, clocks } => MuMoveRecord::Jump { var: var.clone(), clocks: clock_list(l, clocks) },
            MuMove::Lit(x) => MuMoveRecord::Lit { literal: x.to_string() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MuResponseRecord {
    Initial { left: Vec<ClockedLabel>, right: Vec<ClockedLabel> },
    Branch { branch: Branch },
    Subsets { left: Vec<ClockedLabel>, right: Vec<ClockedLabel> },
    Clocks { clocks: Vec<(ClockedLabel, u32)> },
    Nothing,
}

impl MuResponseRecord {
    pub fn new(r: &MuResponse, l: &mut Labeller) -> Self {
        match r {
            MuResponse::Initial { left, right } => MuResponseRecord::Initial { left: labels(l, left), right: labels(l, right) },
            MuResponse::Branch(b) => MuResponseRecord::Branch { branch: *b },
            MuResponse::Subsets { left, right } => MuResponseRecord::Subsets { left: labels(l, left), right: labels(l, right) },
            MuResponse::Clocks(c) => MuResponseRecord::Clocks { clocks: clock_list(l, c) },
            MuResponse::Nothing => MuResponseRecord::Nothing,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDump {
    pub id: VertexId,
    pub parent: Option<VertexId>,
    pub label: Option<String>,
    pub back: Option<VertexId>,
    pub res: usize,
    pub left: Vec<ClockedLabel>,
    pub right: Vec<ClockedLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionDump {
    pub current: VertexId,
    pub vertices: Vec<VertexDump>,
}

impl PositionDump {
    pub fn new(p: &MuPosition, l: &mut Labeller) -> Self {
        let vertices = p
            .vertices
            .iter()
            .enumerate()
            .map(|(id, x)| VertexDump {
                id,
                parent: x.parent,
                label: x.label.as_ref().map(ToString::to_string),
                back: x.back,
                res: x.res,
                left: labels(l, &x.left),
                right: labels(l, &x.right),
            })
            .collect();
        PositionDump { current: p.current, vertices }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTranscriptStep {
    pub vertex: VertexId,
    pub res: usize,
    pub labelled: bool,
    #[serde(rename = "move")]
    pub mv: MuMoveRecord,
    pub response: MuResponseRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<PositionDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTranscript {
    pub initial: MuResponseRecord,
    pub steps: Vec<MuTranscriptStep>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_position: Option<PositionDump>,
}

#[derive(Clone, Copy, Debug)]
pub struct PlayOptions {
    /// Attach a dump of the position before every move.
    pub dump_positions: bool,
    pub max_moves: usize,
}

impl Default for PlayOptions {
    fn default() -> Self {
        PlayOptions { dump_positions: false, max_moves: MAX_PLAY_MOVES }
    }
}

/// Plays from `p0` (which must still await the starting sets) to the end.
/// The engine checks after every move that the progress measure went down
/// and that vertices above the current one hold only old models; a failure
/// there is an invariant error, not a win.
pub fn play_mu(p0: &MuPosition, s: &mut dyn MuSpoiler, d: &mut dyn MuDuplicator) -> Result<MuTranscript, GameError> {
    play_mu_with(p0, s, d, PlayOptions::default(), &mut |_| {})
}

pub fn play_mu_with(
    p0: &MuPosition,
    s: &mut dyn MuSpoiler,
    d: &mut dyn MuDuplicator,
    opts: PlayOptions,
    observe: &mut dyn FnMut(&MuPosition),
) -> Result<MuTranscript, GameError> {
    let mut l = Labeller::for_position(p0.vertices[0].left.iter().chain(&p0.vertices[0].right).map(|m| &m.pointed));
    let r0 = d.initial(p0)?;
    let mut pos = apply_initial(p0, &r0)?;
    let initial = MuResponseRecord::new(&r0, &mut l);
    let mut steps = Vec::new();
    let finish = |pos: &MuPosition, l: &mut Labeller| opts.dump_positions.then(|| PositionDump::new(pos, l));
    loop {
        observe(&pos);
        if let Some(outcome) = pos.opening_outcome() {
            return Ok(MuTranscript { initial, steps, outcome, final_position: finish(&pos, &mut l) });
        }
        if steps.len() >= opts.max_moves {
            return Err(GameError::TooManyMoves(opts.max_moves));
        }
        let m = s.choose(&pos)?;
        let e = expect(&pos, &m)?;
        let r = d.respond(&pos, &m, &e)?;
        check_response(&e, &r)?;
        let step = MuTranscriptStep {
            vertex: pos.current,
            res: pos.cur().res,
            labelled: pos.cur().label.is_some(),
            mv: MuMoveRecord::new(&m, &mut l),
            response: MuResponseRecord::new(&r, &mut l),
            position: finish(&pos, &mut l),
        };
        steps.push(step);
        match apply_mu(&pos, &m, &r)? {
            MuStep::End(outcome) => {
                return Ok(MuTranscript { initial, steps, outcome, final_position: finish(&pos, &mut l) });
            }
            MuStep::Continue(next) => {
                if !progress_decreases(&pos, &next) {
                    return Err(GameError::Invariant(format!("progress measure did not decrease at move {}", steps.len())));
                }
                if !aging_holds(&next) {
                    return Err(GameError::Invariant(format!("new models above the current vertex after move {}", steps.len())));
                }
                pos = next;
            }
        }
    }
}
