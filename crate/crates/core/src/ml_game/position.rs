use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::GameError;
use crate::formulas::Literal;
use crate::game::{Branch, Outcome};
use crate::kripke::PointedModel;

pub type ModelSet = BTreeSet<PointedModel>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MLPosition {
    pub k: usize,
    pub a: ModelSet,
    pub b: ModelSet,
}

impl MLPosition {
    pub fn new(k: usize, a: impl IntoIterator<Item = PointedModel>, b: impl IntoIterator<Item = PointedModel>) -> Self {
        MLPosition { k, a: a.into_iter().collect(), b: b.into_iter().collect() }
    }

    /// The outcome if no move is possible.
    pub fn terminal(&self) -> Option<Outcome> {
        (self.k == 0).then(|| Outcome::duplicator("resources exhausted"))
    }

    pub fn models(&self) -> impl Iterator<Item = &PointedModel> {
        self.a.iter().chain(&self.b)
    }

    /// Propositions occurring in any model of the position.
    pub fn propositions(&self) -> Vec<String> {
        let mut ps: BTreeSet<String> = BTreeSet::new();
        for pm in self.models() {
            ps.extend(pm.model.propositions().map(str::to_string));
        }
        ps.into_iter().collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MLMove {
    Or { k1: usize, k2: usize, a1: ModelSet, a2: ModelSet },
    And { k1: usize, k2: usize, b1: ModelSet, b2: ModelSet },
    /// A successor for every model on the left.
    Dia(BTreeMap<PointedModel, PointedModel>),
    /// A successor for every model on the right.
    Box(BTreeMap<PointedModel, PointedModel>),
    Lit(Literal),
}

impl MLMove {
    pub fn needs_branch(&self) -> bool {
        matches!(self, MLMove::Or { .. } | MLMove::And { .. })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MLStep {
    Continue(MLPosition),
    End(Outcome),
}

/// How [`legal_moves`] enumerates splits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MoveMode {
    /// Partitions only, both resource parts at least 1, no modal move at k = 1.
    #[default]
    Pruned,
    /// Every cover of the split side and every resource split, including 0.
    Raw,
}

/// Upper bound on the size of an enumerated move menu.
pub const MAX_MENU: usize = 200_000;

fn literal_separates(l: &Literal, p: &MLPosition) -> bool {
    p.a.iter().all(|pm| l.eval(|q| pm.holds(q))) && p.b.iter().all(|pm| !l.eval(|q| pm.holds(q)))
}

/// All spoiler moves at `p`. Errors if the menu would exceed [`MAX_MENU`].
pub fn legal_moves(p: &MLPosition, mode: MoveMode) -> Result<Vec<MLMove>, GameError> {
    let mut out = Vec::new();
    if p.k == 0 {
        return Ok(out);
    }
    let props = p.propositions();
    out.extend(Literal::all_over(props.iter().map(String::as_str)).into_iter().map(MLMove::Lit));
    let pruned = mode == MoveMode::Pruned;
    let min_part = if pruned { 1 } else { 0 };
    let splits: Vec<(usize, usize)> =
        (min_part..p.k).filter(|&k1| p.k - 1 - k1 >= min_part).map(|k1| (k1, p.k - 1 - k1)).collect();
    if !splits.is_empty() {
        let a_parts = covers(&p.a, pruned)?;
        let b_parts = covers(&p.b, pruned)?;
        if splits.len() * (a_parts.len() + b_parts.len()) + out.len() > MAX_MENU {
            return Err(GameError::TooManyMoves(MAX_MENU));
        }
        for &(k1, k2) in &splits {
            for (a1, a2) in &a_parts {
                out.push(MLMove::Or { k1, k2, a1: a1.clone(), a2: a2.clone() });
            }
        }
        for &(k1, k2) in &splits {
            for (b1, b2) in &b_parts {
                out.push(MLMove::And { k1, k2, b1: b1.clone(), b2: b2.clone() });
            }
        }
    }
    if p.k >= 2 || !pruned {
        for (side, wrap) in [(&p.a, MLMove::Dia as fn(_) -> _), (&p.b, MLMove::Box as fn(_) -> _)] {
            for choice in choice_maps(side)? {
                out.push(wrap(choice));
                if out.len() > MAX_MENU {
                    return Err(GameError::TooManyMoves(MAX_MENU));
                }
            }
        }
    }
    Ok(out)
}

/// Pairs `(X1, X2)` with `X1 ∪ X2 = X`; only partitions when `partitions_only`.
fn covers(x: &ModelSet, partitions_only: bool) -> Result<Vec<(ModelSet, ModelSet)>, GameError> {
    let items: Vec<&PointedModel> = x.iter().collect();
    let base: usize = if partitions_only { 2 } else { 3 };
    let count = base.checked_pow(items.len() as u32).filter(|&c| c <= MAX_MENU).ok_or(GameError::TooManyMoves(MAX_MENU))?;
    let mut out = Vec::with_capacity(count);
    for code in 0..count {
        let (mut x1, mut x2) = (ModelSet::new(), ModelSet::new());
        let mut c = code;
        for pm in &items {
            match c % base {
                0 => x1.insert((*pm).clone()),
                1 => x2.insert((*pm).clone()),
                _ => x1.insert((*pm).clone()) && x2.insert((*pm).clone()),
            };
            c /= base;
        }
        out.push((x1, x2));
    }
    Ok(out)
}

fn choice_maps(side: &ModelSet) -> Result<Vec<BTreeMap<PointedModel, PointedModel>>, GameError> {
    let succ: Vec<(PointedModel, Vec<PointedModel>)> = side.iter().map(|pm| (pm.clone(), pm.successors())).collect();
    if succ.iter().any(|(_, s)| s.is_empty()) {
        return Ok(Vec::new());
    }
    let total = succ.iter().try_fold(1usize, |acc, (_, s)| acc.checked_mul(s.len()).filter(|&t| t <= MAX_MENU));
    let total = total.ok_or(GameError::TooManyMoves(MAX_MENU))?;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut f = BTreeMap::new();
        for (pm, s) in &succ {
            f.insert(pm.clone(), s[c % s.len()].clone());
            c /= s.len();
        }
        out.push(f);
    }
    Ok(out)
}

/// Checks the arithmetic and set constraints of a spoiler move.
pub fn validate_move(p: &MLPosition, m: &MLMove) -> Result<(), GameError> {
    if p.k == 0 {
        return Err(GameError::spoiler("no moves at resource 0"));
    }
    let check_split = |k1: usize, k2: usize, x1: &ModelSet, x2: &ModelSet, whole: &ModelSet, side: &str| {
        if k1 + k2 + 1 != p.k {
            return Err(GameError::spoiler(format!("resources {k1} + {k2} + 1 != {}", p.k)));
        }
        let union: ModelSet = x1.union(x2).cloned().collect();
        if &union != whole {
            return Err(GameError::spoiler(format!("parts do not cover {side}")));
        }
        Ok(())
    };
    let check_map = |f: &BTreeMap<PointedModel, PointedModel>, whole: &ModelSet, side: &str| {
        if f.keys().ne(whole.iter()) {
            return Err(GameError::spoiler(format!("choice map domain is not {side}")));
        }
        for (pm, s) in f {
            if !pm.successors().contains(s) {
                return Err(GameError::spoiler(format!("{s:?} is not a successor of {pm:?}")));
            }
        }
        Ok(())
    };
    match m {
        MLMove::Or { k1, k2, a1, a2 } => check_split(*k1, *k2, a1, a2, &p.a, "A"),
        MLMove::And { k1, k2, b1, b2 } => check_split(*k1, *k2, b1, b2, &p.b, "B"),
        MLMove::Dia(f) => check_map(f, &p.a, "A"),
        MLMove::Box(g) => check_map(g, &p.b, "B"),
        MLMove::Lit(_) => Ok(()),
    }
}

fn all_successors(side: &ModelSet) -> ModelSet {
    side.iter().flat_map(PointedModel::successors).collect()
}

/// Plays `m` at `p` with duplicator response `branch`.
pub fn apply(p: &MLPosition, m: &MLMove, branch: Option<Branch>) -> Result<MLStep, GameError> {
    validate_move(p, m)?;
    if m.needs_branch() != branch.is_some() {
        return Err(GameError::duplicator(if branch.is_some() {
            "branch given where none is asked for"
        } else {
            "branch missing"
        }));
    }
    let next = match (m, branch) {
        (MLMove::Or { k1, a1, .. }, Some(Branch::First)) => MLPosition { k: *k1, a: a1.clone(), b: p.b.clone() },
        (MLMove::Or { k2, a2, .. }, Some(Branch::Second)) => MLPosition { k: *k2, a: a2.clone(), b: p.b.clone() },
        (MLMove::And { k1, b1, .. }, Some(Branch::First)) => MLPosition { k: *k1, a: p.a.clone(), b: b1.clone() },
        (MLMove::And { k2, b2, .. }, Some(Branch::Second)) => MLPosition { k: *k2, a: p.a.clone(), b: b2.clone() },
        (MLMove::Dia(f), None) => MLPosition { k: p.k - 1, a: f.values().cloned().collect(), b: all_successors(&p.b) },
        (MLMove::Box(g), None) => MLPosition { k: p.k - 1, a: all_successors(&p.a), b: g.values().cloned().collect() },
        (MLMove::Lit(l), None) => {
            return Ok(MLStep::End(if literal_separates(l, p) {
                crate::game::Outcome::spoiler(format!("literal {l} separates"))
            } else {
                crate::game::Outcome::duplicator(format!("literal {l} does not separate"))
            }))
        }
        _ => unreachable!("branch presence checked above"),
    };
    Ok(MLStep::Continue(next))
}

/// A uniformly chosen move kind, then uniform parameters. `None` only at k = 0.
pub fn random_move<R: Rng + ?Sized>(p: &MLPosition, rng: &mut R) -> Option<MLMove> {
    if p.k == 0 {
        return None;
    }
    let mut kinds = vec![0u8];
    if p.k >= 3 {
        kinds.extend([1, 2]);
    }
    if p.k >= 2 && p.a.iter().all(PointedModel::has_successor) {
        kinds.push(3);
    }
    if p.k >= 2 && p.b.iter().all(PointedModel::has_successor) {
        kinds.push(4);
    }
    let random_partition = |side: &ModelSet, rng: &mut R| {
        let (mut x1, mut x2) = (ModelSet::new(), ModelSet::new());
        for pm in side {
            if rng.gen_bool(0.5) {
                x1.insert(pm.clone());
            } else {
                x2.insert(pm.clone());
            }
        }
        (x1, x2)
    };
    let random_map = |side: &ModelSet, rng: &mut R| {
        side.iter().map(|pm| (pm.clone(), pm.successors().choose(rng).unwrap().clone())).collect()
    };
    Some(match *kinds.choose(rng).unwrap() {
        0 => {
            let props = p.propositions();
            let lits = Literal::all_over(props.iter().map(String::as_str));
            MLMove::Lit(lits.choose(rng).unwrap().clone())
        }
        1 => {
            let k1 = rng.gen_range(1..=p.k - 2);
            let (a1, a2) = random_partition(&p.a, rng);
            MLMove::Or { k1, k2: p.k - 1 - k1, a1, a2 }
        }
        2 => {
            let k1 = rng.gen_range(1..=p.k - 2);
            let (b1, b2) = random_partition(&p.b, rng);
            MLMove::And { k1, k2: p.k - 1 - k1, b1, b2 }
        }
        3 => MLMove::Dia(random_map(&p.a, rng)),
        _ => MLMove::Box(random_map(&p.b, rng)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::pointed_from_json;

    fn leaf() -> PointedModel {
        pointed_from_json(r#"{"worlds":["w"],"point":"w"}"#).unwrap()
    }

    fn step() -> PointedModel {
        pointed_from_json(r#"{"worlds":["w","v"],"edges":[["w","v"]],"valuation":{"p":["v"]},"point":"w"}"#).unwrap()
    }

    #[test]
    fn only_literals_at_resource_one() {
        let p = MLPosition::new(1, [step()], [leaf()]);
        let ms = legal_moves(&p, MoveMode::Pruned).unwrap();
        assert!(ms.iter().all(|m| matches!(m, MLMove::Lit(_))));
        assert_eq!(ms.len(), 4);
        let raw = legal_moves(&p, MoveMode::Raw).unwrap();
        assert!(raw.iter().any(|m| matches!(m, MLMove::Or { k1: 0, k2: 0, .. })));
    }

    #[test]
    fn dead_end_blocks_diamond() {
        let p = MLPosition::new(3, [leaf()], [step()]);
        let ms = legal_moves(&p, MoveMode::Pruned).unwrap();
        assert!(!ms.iter().any(|m| matches!(m, MLMove::Dia(_))));
        assert!(ms.iter().any(|m| matches!(m, MLMove::Box(_))));
        let ors: Vec<_> = ms.iter().filter(|m| matches!(m, MLMove::Or { .. })).collect();
        assert_eq!(ors.len(), 2);
        assert!(ors.iter().all(|m| matches!(m, MLMove::Or { k1: 1, k2: 1, .. })));
    }

    #[test]
    fn apply_follows_the_move() {
        let p = MLPosition::new(2, [step()], [leaf()]);
        let f: BTreeMap<_, _> = [(step(), step().successors()[0].clone())].into_iter().collect();
        match apply(&p, &MLMove::Dia(f), None).unwrap() {
            MLStep::Continue(q) => {
                assert_eq!(q.k, 1);
                assert_eq!(q.a.len(), 1);
                assert!(q.b.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let bot = MLPosition::new(1, [], [leaf()]);
        assert_eq!(apply(&bot, &MLMove::Lit(Literal::Bot), None).unwrap(), MLStep::End(Outcome::spoiler("literal F separates")));
        let p_lit = MLPosition::new(1, [leaf()], [step().successors()[0].clone()]);
        match apply(&p_lit, &MLMove::Lit(Literal::Prop("p".into())), None).unwrap() {
            MLStep::End(o) => assert_eq!(o.winner, crate::game::Player::Duplicator),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_moves_are_rejected() {
        let p = MLPosition::new(3, [step()], [leaf()]);
        let bad = MLMove::Or { k1: 2, k2: 1, a1: ModelSet::new(), a2: ModelSet::new() };
        assert!(validate_move(&p, &bad).is_err());
        let ok = MLMove::Or { k1: 1, k2: 1, a1: p.a.clone(), a2: ModelSet::new() };
        assert!(apply(&p, &ok, None).is_err());
        assert!(apply(&p, &ok, Some(Branch::Second)).is_ok());
    }
}
