//! Spoiler and duplicator agents for the modal game.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::position::{apply, random_move, MLMove, MLPosition, MLStep, ModelSet};
use super::solver::MLSolver;
use super::GameError;
use crate::formulas::MLFormula;
use crate::game::{Branch, Player};
use crate::kripke::PointedModel;
use crate::semantics::{eval_ml, Universe};
use crate::succinctness::{build_graph, chromatic_number};

pub trait MlSpoiler {
    fn choose(&mut self, p: &MLPosition) -> Result<MLMove, GameError>;

    /// Called with the duplicator's answer to the move just chosen.
    fn observe(&mut self, _branch: Option<Branch>) {}
}

pub trait MlDuplicator {
    fn respond(&mut self, p: &MLPosition, m: &MLMove) -> Result<Option<Branch>, GameError>;
}

/// Plays along a fixed separating formula.
#[derive(Clone, Debug)]
pub struct FormulaSpoiler {
    current: MLFormula,
    pending: Option<(MLFormula, MLFormula)>,
}

impl FormulaSpoiler {
    pub fn new(formula: MLFormula) -> Self {
        FormulaSpoiler { current: formula, pending: None }
    }

    /// The move the formula dictates at `p`.
    pub fn move_for(f: &MLFormula, p: &MLPosition) -> Result<MLMove, GameError> {
        let sat = |g: &MLFormula, side: &ModelSet| -> ModelSet { side.iter().filter(|pm| eval_ml(g, pm)).cloned().collect() };
        if f.size() > p.k || p.a.iter().any(|pm| !eval_ml(f, pm)) || p.b.iter().any(|pm| eval_ml(f, pm)) {
            return Err(GameError::Invariant(format!("{f} does not separate the position within {}", p.k)));
        }
        Ok(match f {
            MLFormula::Lit(l) => MLMove::Lit(l.clone()),
            MLFormula::Or(g, _) => {
                let a1 = sat(g, &p.a);
                let a2 = p.a.difference(&a1).cloned().collect();
                MLMove::Or { k1: g.size(), k2: p.k - 1 - g.size(), a1, a2 }
            }
            MLFormula::And(g, _) => {
                let b1: ModelSet = p.b.difference(&sat(g, &p.b)).cloned().collect();
                let b2 = p.b.difference(&b1).cloned().collect();
                MLMove::And { k1: g.size(), k2: p.k - 1 - g.size(), b1, b2 }
            }
            MLFormula::Dia(g) => MLMove::Dia(
                p.a.iter()
                    .map(|pm| (pm.clone(), pm.successors().into_iter().find(|s| eval_ml(g, s)).expect("diamond holds")))
                    .collect(),
            ),
            MLFormula::Box(g) => MLMove::Box(
                p.b.iter()
                    .map(|pm| (pm.clone(), pm.successors().into_iter().find(|s| !eval_ml(g, s)).expect("box fails")))
                    .collect(),
            ),
        })
    }
}

impl MlSpoiler for FormulaSpoiler {
    fn choose(&mut self, p: &MLPosition) -> Result<MLMove, GameError> {
        let m = Self::move_for(&self.current, p)?;
        match &self.current {
            MLFormula::Or(g, h) | MLFormula::And(g, h) => self.pending = Some(((**g).clone(), (**h).clone())),
            MLFormula::Dia(g) | MLFormula::Box(g) => self.current = (**g).clone(),
            MLFormula::Lit(_) => {}
        }
        Ok(m)
    }

    fn observe(&mut self, branch: Option<Branch>) {
        if let (Some((g, h)), Some(b)) = (self.pending.take(), branch) {
            self.current = if b == Branch::First { g } else { h };
        }
    }
}

/// Re-solves every position and follows the witness; falls back to a random
/// move where the duplicator wins.
#[derive(Clone)]
pub struct SolverSpoiler {
    solver: Arc<MLSolver>,
    rng: StdRng,
}

impl SolverSpoiler {
    pub fn new(solver: Arc<MLSolver>, seed: u64) -> Self {
        SolverSpoiler { solver, rng: StdRng::seed_from_u64(seed) }
    }
}

impl MlSpoiler for SolverSpoiler {
    fn choose(&mut self, p: &MLPosition) -> Result<MLMove, GameError> {
        let v = self.solver.solve(p)?;
        match v.witness {
            Some(f) if v.winner == Player::Spoiler => FormulaSpoiler::move_for(&f, p),
            _ => random_move(p, &mut self.rng).ok_or_else(|| GameError::spoiler("no move at resource 0")),
        }
    }
}

#[derive(Clone)]
pub struct RandomSpoiler {
    rng: StdRng,
}

impl RandomSpoiler {
    pub fn new(seed: u64) -> Self {
        RandomSpoiler { rng: StdRng::seed_from_u64(seed) }
    }
}

impl MlSpoiler for RandomSpoiler {
    fn choose(&mut self, p: &MLPosition) -> Result<MLMove, GameError> {
        random_move(p, &mut self.rng).ok_or_else(|| GameError::spoiler("no move at resource 0"))
    }
}

#[derive(Clone)]
pub struct RandomDuplicator {
    rng: StdRng,
}

impl RandomDuplicator {
    pub fn new(seed: u64) -> Self {
        RandomDuplicator { rng: StdRng::seed_from_u64(seed) }
    }
}

impl MlDuplicator for RandomDuplicator {
    fn respond(&mut self, _p: &MLPosition, m: &MLMove) -> Result<Option<Branch>, GameError> {
        Ok(m.needs_branch().then(|| *[Branch::First, Branch::Second].choose(&mut self.rng).unwrap()))
    }
}

/// Keeps a cross pair that is `(m-1)`-bisimilar at every position with
/// resource `m`.
pub struct BisimDuplicator {
    universe: Universe,
    pair: (PointedModel, PointedModel),
}

impl BisimDuplicator {
    pub fn new(p: &MLPosition, left: PointedModel, right: PointedModel) -> Result<Self, GameError> {
        let models: Vec<PointedModel> = p.models().cloned().collect();
        let universe = Universe::new(&models);
        if !p.a.contains(&left) || !p.b.contains(&right) {
            return Err(GameError::Precondition("pair is not drawn from A x B".into()));
        }
        if p.k > 0 && !universe.n_bisimilar(&left, &right, p.k - 1) {
            return Err(GameError::Precondition(format!("pair is not {}-bisimilar", p.k - 1)));
        }
        Ok(BisimDuplicator { universe, pair: (left, right) })
    }

    /// Picks the first suitable pair, if any.
    pub fn find(p: &MLPosition) -> Result<Self, GameError> {
        let models: Vec<PointedModel> = p.models().cloned().collect();
        let universe = Universe::new(&models);
        let n = p.k.saturating_sub(1);
        for a in &p.a {
            if let Some(b) = p.b.iter().find(|b| universe.n_bisimilar(a, b, n)) {
                return Ok(BisimDuplicator { universe, pair: (a.clone(), b.clone()) });
            }
        }
        Err(GameError::Precondition(format!("no {n}-bisimilar cross pair")))
    }

    pub fn pair(&self) -> &(PointedModel, PointedModel) {
        &self.pair
    }

    fn matching(&self, target: &PointedModel, among: &[PointedModel], n: Option<usize>) -> Option<PointedModel> {
        match n {
            Some(n) => among.iter().find(|x| self.universe.n_bisimilar(target, x, n)).cloned(),
            None => among.first().cloned(),
        }
    }
}

impl MlDuplicator for BisimDuplicator {
    fn respond(&mut self, p: &MLPosition, m: &MLMove) -> Result<Option<Branch>, GameError> {
        let (a, b) = self.pair.clone();
        if !p.a.contains(&a) || !p.b.contains(&b) {
            return Err(GameError::Invariant("tracked pair left the position".into()));
        }
        // requirement on the pair after a modal move
        let need = p.k.checked_sub(2);
        let lost = || GameError::Invariant("no bisimilar successor to answer with".into());
        Ok(match m {
            MLMove::Or { a1, .. } => Some(if a1.contains(&a) { Branch::First } else { Branch::Second }),
            MLMove::And { b1, .. } => Some(if b1.contains(&b) { Branch::First } else { Branch::Second }),
            MLMove::Dia(f) => {
                let a2 = f.get(&a).cloned().ok_or_else(|| GameError::spoiler("choice map misses a model"))?;
                match self.matching(&a2, &b.successors(), need) {
                    Some(b2) => self.pair = (a2, b2),
                    None if need.is_none() => {}
                    None => return Err(lost()),
                }
                None
            }
            MLMove::Box(g) => {
                let b2 = g.get(&b).cloned().ok_or_else(|| GameError::spoiler("choice map misses a model"))?;
                match self.matching(&b2, &a.successors(), need) {
                    Some(a2) => self.pair = (a2, b2),
                    None if need.is_none() => {}
                    None => return Err(lost()),
                }
                None
            }
            MLMove::Lit(_) => None,
        })
    }
}

/// Keeps the resource at most the base-2 logarithm of the chromatic number of
/// the separation graph; after the first modal move a model common to both
/// sides exists and the bisimulation strategy takes over.
pub struct ColoringDuplicator {
    delegate: Option<BisimDuplicator>,
    checks: usize,
}

fn colorful_enough(p_a: &ModelSet, p_b: &ModelSet, k: usize) -> Result<bool, GameError> {
    let a: Vec<PointedModel> = p_a.iter().cloned().collect();
    let b: Vec<PointedModel> = p_b.iter().cloned().collect();
    let g = build_graph(&a, &b)?;
    let chi = chromatic_number(&g.graph)?.0;
    Ok(k < usize::BITS as usize && chi >= 1usize << k)
}

impl ColoringDuplicator {
    pub fn new(p: &MLPosition) -> Result<Self, GameError> {
        if !colorful_enough(&p.a, &p.b, p.k)? {
            return Err(GameError::Precondition(format!("resource {} exceeds log2 of the chromatic number", p.k)));
        }
        Ok(ColoringDuplicator { delegate: None, checks: 0 })
    }

    /// Positions at which the coloring condition was verified.
    pub fn checks(&self) -> usize {
        self.checks
    }

    pub fn delegated(&self) -> bool {
        self.delegate.is_some()
    }
}

impl MlDuplicator for ColoringDuplicator {
    fn respond(&mut self, p: &MLPosition, m: &MLMove) -> Result<Option<Branch>, GameError> {
        if let Some(d) = &mut self.delegate {
            return d.respond(p, m);
        }
        if !colorful_enough(&p.a, &p.b, p.k)? {
            return Err(GameError::Invariant(format!("coloring condition fails at resource {}", p.k)));
        }
        self.checks += 1;
        let pick = |ok1: bool, ok2: bool| -> Result<Option<Branch>, GameError> {
            match (ok1, ok2) {
                (true, _) => Ok(Some(Branch::First)),
                (false, true) => Ok(Some(Branch::Second)),
                _ => Err(GameError::Invariant("neither part keeps enough colors".into())),
            }
        };
        match m {
            MLMove::Or { k1, k2, a1, a2 } => {
                let ok1 = colorful_enough(a1, &p.b, *k1)?;
                pick(ok1, !ok1 && colorful_enough(a2, &p.b, *k2)?)
            }
            MLMove::And { k1, k2, b1, b2 } => {
                let ok1 = colorful_enough(&p.a, b1, *k1)?;
                pick(ok1, !ok1 && colorful_enough(&p.a, b2, *k2)?)
            }
            MLMove::Dia(_) | MLMove::Box(_) => {
                let MLStep::Continue(next) = apply(p, m, None)? else {
                    unreachable!("modal moves continue")
                };
                let common = next.a.iter().find_map(|x| {
                    let gx = x.generated();
                    next.b.iter().find(|y| y.generated() == gx).map(|y| (x.clone(), y.clone()))
                });
                match common {
                    Some((x, y)) => self.delegate = Some(BisimDuplicator::new(&next, x, y)?),
                    None if next.k == 0 => {}
                    None => return Err(GameError::Invariant("no common model after a modal move".into())),
                }
                Ok(None)
            }
            MLMove::Lit(_) => Ok(None),
        }
    }
}
