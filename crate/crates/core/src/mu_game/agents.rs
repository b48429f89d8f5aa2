//! Spoiler and duplicator agents for the fixed-point game.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};

use super::collections::{collections_defined, left_collection, right_collection, suitable, Side, Suitability};
use super::position::{apply_initial, apply_mu, jump_target, ClockedSet, Expect, MuMove, MuPosition, MuResponse, MuStep, VertexId};
use super::GameError;
use crate::formulas::{Fixpoint, Literal, NodeLabel};
use crate::game::Branch;
use crate::kripke::{ClockedModel, PointedModel};
use crate::semantics::Universe;
use crate::succinctness::{build_graph, chromatic_number};

pub trait MuSpoiler {
    fn choose(&mut self, p: &MuPosition) -> Result<MuMove, GameError>;

    /// Whether the choice depends on the position alone, so searches may
    /// share results between equal positions.
    fn positional(&self) -> bool {
        false
    }
}

pub trait MuDuplicator {
    /// The starting subsets. Keeps everything unless overridden.
    fn initial(&mut self, p: &MuPosition) -> Result<MuResponse, GameError> {
        let root = &p.vertices[0];
        Ok(MuResponse::Initial { left: root.left.clone(), right: root.right.clone() })
    }

    fn respond(&mut self, p: &MuPosition, m: &MuMove, e: &Expect) -> Result<MuResponse, GameError>;
}

/// Full subsets, the largest clocks and the first branch.
pub fn greedy_response(e: &Expect) -> MuResponse {
    match e {
        Expect::Terminal(_) => MuResponse::Nothing,
        Expect::Branch => MuResponse::Branch(Branch::First),
        Expect::Subsets { left, right } => MuResponse::Subsets { left: left.clone(), right: right.clone() },
        Expect::Clocks(bounds) => MuResponse::Clocks(bounds.iter().map(|(m, &b)| (m.clone(), b - 1)).collect()),
    }
}

/// Keeps every model and always gives the largest clocks.
#[derive(Clone, Debug, Default)]
pub struct GreedyMuDuplicator;

impl MuDuplicator for GreedyMuDuplicator {
    fn respond(&mut self, _: &MuPosition, _: &MuMove, e: &Expect) -> Result<MuResponse, GameError> {
        Ok(greedy_response(e))
    }
}

#[derive(Clone, Debug)]
pub struct RandomMuDuplicator {
    rng: StdRng,
}

impl RandomMuDuplicator {
    pub fn new(seed: u64) -> Self {
        RandomMuDuplicator { rng: StdRng::seed_from_u64(seed) }
    }

    fn thin(&mut self, set: &ClockedSet) -> ClockedSet {
        set.iter().filter(|_| self.rng.gen_bool(0.75)).cloned().collect()
    }
}

impl MuDuplicator for RandomMuDuplicator {
    fn initial(&mut self, p: &MuPosition) -> Result<MuResponse, GameError> {
        let root = &p.vertices[0];
        Ok(MuResponse::Initial { left: self.thin(&root.left), right: self.thin(&root.right) })
    }

    fn respond(&mut self, _: &MuPosition, _: &MuMove, e: &Expect) -> Result<MuResponse, GameError> {
        Ok(match e {
            Expect::Terminal(_) => MuResponse::Nothing,
            Expect::Branch => MuResponse::Branch(if self.rng.gen_bool(0.5) { Branch::First } else { Branch::Second }),
            Expect::Subsets { left, right } => MuResponse::Subsets { left: self.thin(left), right: self.thin(right) },
            Expect::Clocks(bounds) => MuResponse::Clocks(bounds.iter().map(|(m, &b)| (m.clone(), self.rng.gen_range(0..b))).collect()),
        })
    }
}

/// Plays uniformly random legal moves, including ones that lose at once.
#[derive(Clone, Debug)]
pub struct RandomMuSpoiler {
    rng: StdRng,
}

impl RandomMuSpoiler {
    pub fn new(seed: u64) -> Self {
        RandomMuSpoiler { rng: StdRng::seed_from_u64(seed) }
    }

    fn parts(&mut self, set: &ClockedSet) -> (ClockedSet, ClockedSet) {
        let (mut x, mut y) = (ClockedSet::new(), ClockedSet::new());
        for m in set {
            match self.rng.gen_range(0..5) {
                0 | 1 => x.insert(m.clone()),
                2 | 3 => y.insert(m.clone()),
                _ => x.insert(m.clone()) | y.insert(m.clone()),
            };
        }
        (x, y)
    }

    fn successor_map(&mut self, set: &ClockedSet) -> Option<BTreeMap<ClockedModel, ClockedModel>> {
        set.iter().map(|m| m.successors().choose(&mut self.rng).map(|s| (m.clone(), s.clone()))).collect()
    }

    fn clocks(&mut self, set: &ClockedSet, bound: impl Fn(&ClockedModel) -> u32) -> BTreeMap<ClockedModel, u32> {
        set.iter().map(|m| (m.clone(), self.rng.gen_range(0..bound(m).max(1)))).collect()
    }

    fn split(&mut self, p: &MuPosition) -> Option<(usize, usize)> {
        let k = p.cur().res;
        let k1 = self.rng.gen_range(1..=k - 2);
        p.cur().label.is_none().then_some((k1, k - 1 - k1))
    }
}

impl MuSpoiler for RandomMuSpoiler {
    fn choose(&mut self, p: &MuPosition) -> Result<MuMove, GameError> {
        let v = p.cur();
        let a = p.left_new(p.current);
        let b = p.right_new(p.current);
        let kinds: Vec<&str> = match &v.label {
            None => {
                let mut ks = vec!["lit", "dia", "box", "bind", "jump"];
                if v.res >= 3 {
                    ks.extend(["or", "and"]);
                }
                ks
            }
            Some(NodeLabel::Or) => vec!["or"],
            Some(NodeLabel::And) => vec!["and"],
            Some(NodeLabel::Dia) => vec!["dia"],
            Some(NodeLabel::Box) => vec!["box"],
            Some(NodeLabel::Fix(..)) => vec!["bind"],
            Some(NodeLabel::Var(_)) => vec!["jump"],
            Some(NodeLabel::Lit(_)) => return Err(GameError::Invariant("current vertex is a literal".into())),
        };
        loop {
            let kind = *kinds.choose(&mut self.rng).expect("nonempty");
            match kind {
                "lit" => {
                    let props = p.propositions();
                    let lits = Literal::all_over(props.iter().map(String::as_str));
                    return Ok(MuMove::Lit(lits.choose(&mut self.rng).expect("T and F exist").clone()));
                }
                "or" => {
                    let (left1, left2) = self.parts(&a);
                    return Ok(MuMove::Or { left1, left2, split: if v.label.is_none() { self.split(p) } else { None } });
                }
                "and" => {
                    let (right1, right2) = self.parts(&b);
                    return Ok(MuMove::And { right1, right2, split: if v.label.is_none() { self.split(p) } else { None } });
                }
                "dia" => {
                    if let Some(f) = self.successor_map(&a) {
                        return Ok(MuMove::Dia(f));
                    }
                }
                "box" => {
                    if let Some(g) = self.successor_map(&b) {
                        return Ok(MuMove::Box(g));
                    }
                }
                "bind" => {
                    let (kind, var) = match &v.label {
                        Some(NodeLabel::Fix(k, x)) => (*k, x.clone()),
                        _ => (if self.rng.gen_bool(0.5) { Fixpoint::Least } else { Fixpoint::Greatest }, p.fresh_variable()),
                    };
                    let mine = if kind == Fixpoint::Least { &a } else { &b };
                    let clocks = self.clocks(mine, |_| p.clock_bound);
                    return Ok(MuMove::Bind { kind, var, clocks });
                }
                _ => {
                    let var = match &v.label {
                        Some(NodeLabel::Var(x)) => x.clone(),
                        _ => {
                            let bound: BTreeSet<String> = p
                                .path_to(p.current)
                                .iter()
                                .filter_map(|&x| match &p.vertices[x].label {
                                    Some(NodeLabel::Fix(_, y)) => Some(y.clone()),
                                    _ => None,
                                })
                                .collect();
                            match bound.into_iter().choose(&mut self.rng) {
                                Some(x) if self.rng.gen_ratio(9, 10) => x,
                                _ => p.fresh_variable(),
                            }
                        }
                    };
                    let Some((u, _)) = jump_target(p, &var) else {
                        return Ok(MuMove::Jump { var, clocks: BTreeMap::new() });
                    };
                    let Some(NodeLabel::Fix(kind, _)) = &p.vertices[u].label else { unreachable!("binder") };
                    let mine = if *kind == Fixpoint::Least { &a } else { &b };
                    if mine.iter().any(|m| m.clock(&var) == Some(0)) {
                        return Ok(MuMove::Jump { var, clocks: BTreeMap::new() });
                    }
                    let clocks = self.clocks(mine, |m| m.clock(&var).unwrap_or(0));
                    return Ok(MuMove::Jump { var, clocks });
                }
            }
        }
    }
}

fn depth_clock(m: &ClockedModel, bound: u32) -> u32 {
    m.pointed.depth().map_or(bound - 1, |d| (d as u32).min(bound - 1))
}

/// Duplicator answer to a clock request: the model depth at binds (capped
/// by the bound), the largest clock at jumps.
fn clock_response(p: &MuPosition, m: &MuMove, bounds: &BTreeMap<ClockedModel, u32>) -> MuResponse {
    MuResponse::Clocks(
        bounds
            .iter()
            .map(|(x, &b)| {
                let c = match m {
                    MuMove::Bind { .. } => depth_clock(x, p.clock_bound),
                    _ => b - 1,
                };
                (x.clone(), c)
            })
            .collect(),
    )
}

fn tentative(p: &MuPosition, m: &MuMove, r: &MuResponse) -> Result<Option<MuPosition>, GameError> {
    Ok(match apply_mu(p, m, r)? {
        MuStep::Continue(next) => Some(next),
        MuStep::End(_) => None,
    })
}

/// Keeps a pair of bisimilar models, one on each side, alive at the current
/// vertex. At a branch it follows the new left (or right) partner; when a
/// loop without modal moves drops the duplicator's copy, the old copy left
/// at the revisited vertex takes over.
#[derive(Clone, Debug)]
pub struct BisimilarMuDuplicator {
    universe: Arc<Universe>,
}

impl BisimilarMuDuplicator {
    /// Needs a strictly suitable bisimilar pair of new models at the current
    /// vertex.
    pub fn new(p: &MuPosition) -> Result<Self, GameError> {
        let d = Self::unchecked(p);
        if d.score(p, Suitability::AboveDepth)? < 3 {
            return Err(GameError::Precondition("no strictly suitable bisimilar pair of new models".into()));
        }
        Ok(d)
    }

    /// Skips the pair check; useful from starting positions where the pair
    /// only appears later.
    pub fn unchecked(p: &MuPosition) -> Self {
        let all: Vec<PointedModel> = p.vertices.iter().flat_map(|x| x.left.iter().chain(&x.right)).map(|m| m.pointed.clone()).collect();
        BisimilarMuDuplicator { universe: Arc::new(Universe::new(&all)) }
    }

    fn bisimilar(&self, a: &ClockedModel, b: &ClockedModel) -> bool {
        self.universe.contains(&a.pointed) && self.universe.contains(&b.pointed) && self.universe.bisimilar(&a.pointed, &b.pointed)
    }

    /// 3: a suitable pair of new models; 2: a pair of new models; 1: a new
    /// model with an old partner; 0: none.
    fn score(&self, p: &MuPosition, filter: Suitability) -> Result<u8, GameError> {
        let v = p.current;
        let x = p.cur();
        let mut best = 0;
        for a in &x.left {
            for b in &x.right {
                if !(a.is_new() || b.is_new()) || !self.bisimilar(a, b) {
                    continue;
                }
                let s = if a.is_new() && b.is_new() {
                    if suitable(p, v, Side::Left, a, filter)? && suitable(p, v, Side::Right, b, filter)? {
                        3
                    } else {
                        2
                    }
                } else {
                    1
                };
                best = best.max(s);
            }
        }
        Ok(best)
    }
}

impl MuDuplicator for BisimilarMuDuplicator {
    fn respond(&mut self, p: &MuPosition, m: &MuMove, e: &Expect) -> Result<MuResponse, GameError> {
        match e {
            Expect::Branch => {
                let mut best = (0, Branch::First);
                for b in [Branch::First, Branch::Second] {
                    if let Some(next) = tentative(p, m, &MuResponse::Branch(b))? {
                        let s = self.score(&next, Suitability::AtLeastDepth)?;
                        if s > best.0 {
                            best = (s, b);
                        }
                    }
                }
                Ok(MuResponse::Branch(best.1))
            }
            Expect::Clocks(bounds) => Ok(clock_response(p, m, bounds)),
            _ => Ok(greedy_response(e)),
        }
    }
}

/// Counters kept by [`SuccinctnessMuDuplicator`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuccinctnessStats {
    /// Positions at which the coloring condition was evaluated.
    pub checks: usize,
    /// Positions at which it failed.
    pub violations: usize,
    /// Positions skipped because the current vertex carries a variable
    /// label; the spoiler's only move there is the dictated jump.
    pub variable_positions: usize,
    /// Collection inclusions checked at revisited fixed-point bodies.
    pub inclusion_checks: usize,
    pub inclusion_violations: usize,
    /// Whether play passed to the bisimilar-pair strategy.
    pub delegated: bool,
    /// Whether that hand-over found no suitable pair.
    pub delegation_failed: bool,
}

/// Keeps `2^res(v) < chi(G(L(v), R(v)))` at the current vertex `v`, where
/// `L` and `R` are the left and right collections of `v` and `G` the
/// separation graph of vertex models against edge models. Hands over to
/// [`BisimilarMuDuplicator`] at the first modal move.
#[derive(Clone, Debug)]
pub struct SuccinctnessMuDuplicator {
    strict: bool,
    filter: Suitability,
    delegate: Option<BisimilarMuDuplicator>,
    stats: SuccinctnessStats,
    /// Collections of fixed-point bodies at their first visit.
    snapshots: BTreeMap<VertexId, (BTreeSet<PointedModel>, BTreeSet<PointedModel>)>,
}

impl SuccinctnessMuDuplicator {
    /// `strict` selects `<` in the condition; otherwise `<=` is kept.
    pub fn new(p: &MuPosition, strict: bool) -> Result<Self, GameError> {
        let d = SuccinctnessMuDuplicator { strict, filter: Suitability::AtLeastDepth, delegate: None, stats: SuccinctnessStats::default(), snapshots: BTreeMap::new() };
        if !collections_defined(p) || !d.condition(p, p.current)? {
            return Err(GameError::Precondition(format!("resource {} is too large for the coloring condition", p.cur().res)));
        }
        Ok(d)
    }

    pub fn with_filter(mut self, filter: Suitability) -> Self {
        self.filter = filter;
        self
    }

    pub fn stats(&self) -> SuccinctnessStats {
        self.stats
    }

    /// Chromatic number of the separation graph of the collections at `v`.
    pub fn chromatic(p: &MuPosition, v: VertexId, filter: Suitability) -> Result<usize, GameError> {
        let l: Vec<PointedModel> = left_collection(p, v, filter)?.into_iter().collect();
        let r: Vec<PointedModel> = right_collection(p, v, filter)?.into_iter().collect();
        let g = build_graph(&l, &r)?;
        Ok(chromatic_number(&g.graph)?.0)
    }

    fn condition(&self, p: &MuPosition, v: VertexId) -> Result<bool, GameError> {
        let chi = Self::chromatic(p, v, self.filter)? as u128;
        let need = 1u128.checked_shl(p.vertex(v).res as u32).unwrap_or(u128::MAX);
        Ok(if self.strict { need < chi } else { need <= chi })
    }

    fn observe(&mut self, p: &MuPosition) -> Result<(), GameError> {
        if !collections_defined(p) {
            return Ok(());
        }
        if matches!(p.cur().label, Some(NodeLabel::Var(_))) {
            self.stats.variable_positions += 1;
            return Ok(());
        }
        self.stats.checks += 1;
        if !self.condition(p, p.current)? {
            self.stats.violations += 1;
        }
        let v = p.current;
        let at_body = p.cur().parent.is_some_and(|u| matches!(p.vertex(u).label, Some(NodeLabel::Fix(..))));
        if at_body && !self.snapshots.contains_key(&v) {
            let snap = (left_collection(p, v, Suitability::Any)?, right_collection(p, v, Suitability::Any)?);
            self.snapshots.insert(v, snap);
        }
        for (&u, (l0, r0)) in &self.snapshots {
            self.stats.inclusion_checks += 1;
            let l = left_collection(p, u, Suitability::Any)?;
            let r = right_collection(p, u, Suitability::Any)?;
            if !l0.is_subset(&l) || !r0.is_subset(&r) {
                self.stats.inclusion_violations += 1;
            }
        }
        Ok(())
    }
}

impl MuDuplicator for SuccinctnessMuDuplicator {
    fn initial(&mut self, p: &MuPosition) -> Result<MuResponse, GameError> {
        let root = &p.vertices[0];
        let r = MuResponse::Initial { left: root.left.clone(), right: root.right.clone() };
        self.observe(&apply_initial(p, &r)?)?;
        Ok(r)
    }

    fn respond(&mut self, p: &MuPosition, m: &MuMove, e: &Expect) -> Result<MuResponse, GameError> {
        if let Some(d) = &mut self.delegate {
            return d.respond(p, m, e);
        }
        let r = match e {
            Expect::Terminal(_) => return Ok(MuResponse::Nothing),
            Expect::Branch => {
                let mut pick = None;
                for b in [Branch::First, Branch::Second] {
                    let r = MuResponse::Branch(b);
                    if let Some(next) = tentative(p, m, &r)? {
                        if self.condition(&next, next.current)? {
                            pick = Some(r);
                            break;
                        }
                    }
                }
                pick.unwrap_or(MuResponse::Branch(Branch::First))
            }
            Expect::Subsets { .. } => {
                let r = greedy_response(e);
                self.stats.delegated = true;
                let next = tentative(p, m, &r)?.expect("modal moves continue");
                match BisimilarMuDuplicator::new(&next) {
                    Ok(d) => self.delegate = Some(d),
                    Err(_) => {
                        self.stats.delegation_failed = true;
                        self.delegate = Some(BisimilarMuDuplicator::unchecked(&next));
                    }
                }
                return Ok(r);
            }
            Expect::Clocks(bounds) => clock_response(p, m, bounds),
        };
        if let MuMove::Jump { var, .. } = m {
            if let Some((_, target)) = jump_target(p, var) {
                self.snapshots.retain(|&u, _| !p.is_strict_ancestor(target, u));
            }
        }
        if let Some(next) = tentative(p, m, &r)? {
            self.observe(&next)?;
        }
        Ok(r)
    }
}
