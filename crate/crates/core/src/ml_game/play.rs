//! Running plays and recording them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::agents::{MlDuplicator, MlSpoiler};
use super::position::{apply, validate_move, MLMove, MLPosition, MLStep};
use super::GameError;
use crate::game::{Branch, Outcome, Player};
use crate::kripke::{KripkeModel, PointedModel};

/// Names pointed models as `m<i>:<world>`, numbering models by first sight.
#[derive(Default, Clone)]
pub struct Labeller {
    models: Vec<Arc<KripkeModel>>,
}

impl Labeller {
    pub fn new() -> Self {
        Self::default()
    }

    /// A labeller that has seen the models of `p` in order.
    pub fn for_position<'a>(models: impl IntoIterator<Item = &'a PointedModel>) -> Self {
        let mut l = Labeller::new();
        for pm in models {
            l.label(pm);
        }
        l
    }

    pub fn label(&mut self, pm: &PointedModel) -> String {
        let i = match self.models.iter().position(|m| **m == *pm.model) {
            Some(i) => i,
            None => {
                self.models.push(pm.model.clone());
                self.models.len() - 1
            }
        };
        format!("m{i}:{}", pm.point_name())
    }

    pub fn labels<'a>(&mut self, pms: impl IntoIterator<Item = &'a PointedModel>) -> Vec<String> {
        pms.into_iter().map(|pm| self.label(pm)).collect()
    }

    pub fn models(&self) -> &[Arc<KripkeModel>] {
        &self.models
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MoveRecord {
    Or { k1: usize, k2: usize, a1: Vec<String>, a2: Vec<String> },
    And { k1: usize, k2: usize, b1: Vec<String>, b2: Vec<String> },
    Dia { choice: Vec<(String, String)> },
    Box { choice: Vec<(String, String)> },
    Lit { literal: String },
}

impl MoveRecord {
    pub fn new(m: &MLMove, labels: &mut Labeller) -> Self {
        match m {
            MLMove::Or { k1, k2, a1, a2 } => MoveRecord::Or { k1: *k1, k2: *k2, a1: labels.labels(a1), a2: labels.labels(a2) },
            MLMove::And { k1, k2, b1, b2 } => MoveRecord::And { k1: *k1, k2: *k2, b1: labels.labels(b1), b2: labels.labels(b2) },
            MLMove::Dia(f) => MoveRecord::Dia { choice: f.iter().map(|(x, y)| (labels.label(x), labels.label(y))).collect() },
            MLMove::Box(g) => MoveRecord::Box { choice: g.iter().map(|(x, y)| (labels.label(x), labels.label(y))).collect() },
            MLMove::Lit(l) => MoveRecord::Lit { literal: l.to_string() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub k: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    #[serde(rename = "move")]
    pub mv: MoveRecord,
    pub response: Option<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub steps: Vec<TranscriptStep>,
    /// Resource at the position where the play stopped.
    pub final_k: usize,
    pub outcome: Outcome,
}

/// Plays to the end; an illegal move or response is an error naming the side
/// at fault.
pub fn play(p: &MLPosition, s: &mut dyn MlSpoiler, d: &mut dyn MlDuplicator) -> Result<Transcript, GameError> {
    play_observed(p, s, d, &mut |_, _| {})
}

/// Like [`play`], calling `observe` with each position and the step taken there.
pub fn play_observed(
    p: &MLPosition,
    s: &mut dyn MlSpoiler,
    d: &mut dyn MlDuplicator,
    observe: &mut dyn FnMut(&MLPosition, &TranscriptStep),
) -> Result<Transcript, GameError> {
    let mut labels = Labeller::for_position(p.models());
    let mut pos = p.clone();
    let mut steps = Vec::new();
    loop {
        if let Some(outcome) = pos.terminal() {
            return Ok(Transcript { steps, final_k: pos.k, outcome });
        }
        let m = s.choose(&pos)?;
        validate_move(&pos, &m)?;
        let branch = d.respond(&pos, &m)?;
        if branch.is_some() != m.needs_branch() {
            return Err(GameError::duplicator("response does not fit the move"));
        }
        s.observe(branch);
        let step = TranscriptStep {
            k: pos.k,
            a: labels.labels(&pos.a),
            b: labels.labels(&pos.b),
            mv: MoveRecord::new(&m, &mut labels),
            response: branch,
        };
        observe(&pos, &step);
        steps.push(step);
        match apply(&pos, &m, branch)? {
            MLStep::Continue(next) => {
                if next.k >= pos.k {
                    return Err(GameError::Invariant("resource did not decrease".into()));
                }
                pos = next;
            }
            MLStep::End(outcome) => return Ok(Transcript { steps, final_k: pos.k, outcome }),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub plays: u64,
    pub spoiler_wins: u64,
    pub duplicator_wins: u64,
}

/// Plays `s` against every possible sequence of duplicator answers.
pub fn exhaustive_duplicator<S: MlSpoiler + Clone>(p: &MLPosition, s: &S) -> Result<ExhaustiveReport, GameError> {
    let mut report = ExhaustiveReport::default();
    explore(p, s.clone(), &mut report)?;
    Ok(report)
}

fn explore<S: MlSpoiler + Clone>(p: &MLPosition, mut s: S, report: &mut ExhaustiveReport) -> Result<(), GameError> {
    let record = |o: &Outcome, report: &mut ExhaustiveReport| {
        report.plays += 1;
        match o.winner {
            Player::Spoiler => report.spoiler_wins += 1,
            Player::Duplicator => report.duplicator_wins += 1,
        }
    };
    if let Some(o) = p.terminal() {
        record(&o, report);
        return Ok(());
    }
    let m = s.choose(p)?;
    let answers: &[Option<Branch>] =
        if m.needs_branch() { &[Some(Branch::First), Some(Branch::Second)] } else { &[None] };
    for &b in answers {
        let mut s2 = s.clone();
        s2.observe(b);
        match apply(p, &m, b)? {
            MLStep::Continue(next) => explore(&next, s2, report)?,
            MLStep::End(o) => record(&o, report),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml_game::{solve, FormulaSpoiler, RandomDuplicator};
    use crate::kripke::pointed_from_json;

    #[test]
    fn formula_spoiler_wins_every_branch() {
        let a1 = pointed_from_json(r#"{"worlds":["w"],"valuation":{"p":["w"]},"point":"w"}"#).unwrap();
        let a2 = pointed_from_json(r#"{"worlds":["w","v"],"edges":[["w","v"]],"point":"w"}"#).unwrap();
        let b = pointed_from_json(r#"{"worlds":["w"],"valuation":{"p":[]},"point":"w"}"#).unwrap();
        let p = MLPosition::new(4, [a1, a2], [b]);
        let v = solve(&p).unwrap();
        let f = v.witness.unwrap();
        let report = exhaustive_duplicator(&p, &FormulaSpoiler::new(f.clone())).unwrap();
        assert_eq!(report.duplicator_wins, 0);
        assert!(report.plays >= 2);
        let t = play(&p, &mut FormulaSpoiler::new(f), &mut RandomDuplicator::new(3)).unwrap();
        assert_eq!(t.outcome.winner, Player::Spoiler);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"kind\":\"or\""));
        let back: Transcript = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
