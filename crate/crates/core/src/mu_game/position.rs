//! Positions of the fixed-point game and the effect of moves on them.
//!
//! A position is a partially labelled tree with back edges. Every vertex has
//! a remaining resource and a left and right set of clocked models; one
//! vertex is current. Vertices are numbered in creation order and never
//! removed, so a vertex id is stable for the rest of the play.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::GameError;
use crate::formulas::{Fixpoint, Literal, NodeLabel};
use crate::game::{Branch, Outcome};
use crate::kripke::{ClockedModel, PointedModel};

pub type VertexId = usize;
pub type ClockedSet = BTreeSet<ClockedModel>;

/// Which models a literal move has to separate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LitRule {
    /// Every model at the current vertex, old ones included.
    #[default]
    AllModels,
    /// Only the new models at the current vertex.
    NewOnly,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GameVertex {
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
    /// For vertices labelled with a variable: the body of its binder.
    pub back: Option<VertexId>,
    pub label: Option<NodeLabel>,
    pub res: usize,
    pub left: ClockedSet,
    pub right: ClockedSet,
}

impl GameVertex {
    fn fresh(parent: Option<VertexId>, res: usize) -> Self {
        GameVertex { parent, children: Vec::new(), back: None, label: None, res, left: ClockedSet::new(), right: ClockedSet::new() }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MuPosition {
    pub vertices: Vec<GameVertex>,
    pub current: VertexId,
    /// The duplicator still has to pick the initial finite subsets.
    pub awaiting_initial: bool,
    /// Clocks range over `0..clock_bound`.
    pub clock_bound: u32,
    pub lit_rule: LitRule,
}

fn new_only(set: &ClockedSet) -> ClockedSet {
    set.iter().filter(|m| m.is_new()).cloned().collect()
}

fn aged(set: &ClockedSet) -> ClockedSet {
    set.iter().map(ClockedModel::aged).collect()
}

/// The starting position: a single unlabelled root with resource `k0` and
/// clockless new copies of the given models. Clocks are bounded by one more
/// than the largest model.
pub fn initial_position(a0: &[PointedModel], b0: &[PointedModel], k0: usize) -> MuPosition {
    let clock_bound = a0.iter().chain(b0).map(|pm| pm.model.num_worlds() as u32).max().unwrap_or(0) + 1;
    let mut root = GameVertex::fresh(None, k0);
    root.left = a0.iter().cloned().map(ClockedModel::fresh).collect();
    root.right = b0.iter().cloned().map(ClockedModel::fresh).collect();
    MuPosition { vertices: vec![root], current: 0, awaiting_initial: true, clock_bound, lit_rule: LitRule::default() }
}

impl MuPosition {
    pub fn with_lit_rule(mut self, rule: LitRule) -> Self {
        self.lit_rule = rule;
        self
    }

    pub fn vertex(&self, v: VertexId) -> &GameVertex {
        &self.vertices[v]
    }

    pub fn cur(&self) -> &GameVertex {
        &self.vertices[self.current]
    }

    pub fn left_new(&self, v: VertexId) -> ClockedSet {
        new_only(&self.vertices[v].left)
    }

    pub fn right_new(&self, v: VertexId) -> ClockedSet {
        new_only(&self.vertices[v].right)
    }

    /// Vertices from the root down to `v`.
    pub fn path_to(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.vertices[x].parent {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    pub fn is_strict_ancestor(&self, a: VertexId, b: VertexId) -> bool {
        let mut x = self.vertices[b].parent;
        while let Some(p) = x {
            if p == a {
                return true;
            }
            x = self.vertices[p].parent;
        }
        false
    }

    /// Closest vertex strictly above `v` binding `var`.
    pub fn binder_above(&self, v: VertexId, var: &str) -> Option<VertexId> {
        let mut x = self.vertices[v].parent;
        while let Some(p) = x {
            if matches!(&self.vertices[p].label, Some(NodeLabel::Fix(_, y)) if y == var) {
                return Some(p);
            }
            x = self.vertices[p].parent;
        }
        None
    }

    /// Kind of the fixed point binding `var` as seen from `v`.
    pub fn var_kind(&self, v: VertexId, var: &str) -> Option<Fixpoint> {
        let mut x = Some(v);
        while let Some(p) = x {
            if let Some(NodeLabel::Fix(kind, y)) = &self.vertices[p].label {
                if y == var {
                    return Some(*kind);
                }
            }
            x = self.vertices[p].parent;
        }
        None
    }

    /// Variables bound at some vertex of the tree.
    pub fn bound_variables(&self) -> BTreeSet<String> {
        self.vertices
            .iter()
            .filter_map(|x| match &x.label {
                Some(NodeLabel::Fix(_, y)) => Some(y.clone()),
                _ => None,
            })
            .collect()
    }

    /// A variable name not bound anywhere in the tree.
    pub fn fresh_variable(&self) -> String {
        let used = self.bound_variables();
        (0..).map(|i| format!("X{i}")).find(|x| !used.contains(x)).expect("infinitely many names")
    }

    /// Propositions of every model in the position.
    pub fn propositions(&self) -> Vec<String> {
        let mut ps = BTreeSet::new();
        for x in &self.vertices {
            for m in x.left.iter().chain(&x.right) {
                ps.extend(m.pointed.model.propositions().map(str::to_string));
            }
        }
        ps.into_iter().collect()
    }

    /// Outcome decided before the spoiler moves, if any: an exhausted
    /// resource, or a dictated modal move the spoiler cannot carry out.
    pub fn opening_outcome(&self) -> Option<Outcome> {
        if self.awaiting_initial {
            return None;
        }
        let v = self.cur();
        if v.res == 0 {
            return Some(Outcome::duplicator("resource exhausted"));
        }
        match &v.label {
            Some(NodeLabel::Dia) if self.left_new(self.current).iter().any(|m| !m.pointed.has_successor()) => {
                Some(Outcome::duplicator("dictated diamond move meets a dead end"))
            }
            Some(NodeLabel::Box) if self.right_new(self.current).iter().any(|m| !m.pointed.has_successor()) => {
                Some(Outcome::duplicator("dictated box move meets a dead end"))
            }
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum MuMove {
    /// `split` is the resource split, present exactly at unlabelled vertices.
    Or { left1: ClockedSet, left2: ClockedSet, split: Option<(usize, usize)> },
    And { right1: ClockedSet, right2: ClockedSet, split: Option<(usize, usize)> },
    /// A successor for every new left model.
    Dia(BTreeMap<ClockedModel, ClockedModel>),
    /// A successor for every new right model.
    Box(BTreeMap<ClockedModel, ClockedModel>),
    /// The spoiler's clocks cover the new left models for a least fixed
    /// point and the new right models for a greatest one.
    Bind { kind: Fixpoint, var: String, clocks: BTreeMap<ClockedModel, u32> },
    /// The spoiler's lowered clocks for the models on his side.
    Jump { var: String, clocks: BTreeMap<ClockedModel, u32> },
    Lit(Literal),
}

impl MuMove {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MuMove::Or { .. } => "or",
            MuMove::And { .. } => "and",
            MuMove::Dia(_) => "dia",
            MuMove::Box(_) => "box",
            MuMove::Bind { .. } => "bind",
            MuMove::Jump { .. } => "jump",
            MuMove::Lit(_) => "lit",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum MuResponse {
    /// Finite subsets of the starting sets.
    Initial { left: ClockedSet, right: ClockedSet },
    Branch(Branch),
    /// Finite subsets of the successor sets after a modal move.
    Subsets { left: ClockedSet, right: ClockedSet },
    /// The duplicator's clocks for the models on her side.
    Clocks(BTreeMap<ClockedModel, u32>),
    Nothing,
}

/// What the duplicator has to answer to a spoiler move.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expect {
    /// The move ends the play; no answer.
    Terminal(Outcome),
    Branch,
    /// Subsets of these pools.
    Subsets { left: ClockedSet, right: ClockedSet },
    /// A clock strictly below the given bound for every listed model.
    Clocks(BTreeMap<ClockedModel, u32>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MuStep {
    Continue(MuPosition),
    End(Outcome),
}

fn check_label(v: &GameVertex, wanted: &NodeLabel, unlabelled_ok: bool) -> Result<(), GameError> {
    match &v.label {
        None if unlabelled_ok => Ok(()),
        Some(l) if l == wanted => Ok(()),
        None => Err(GameError::spoiler(format!("move {wanted} needs a labelled vertex"))),
        Some(l) => Err(GameError::spoiler(format!("vertex is labelled {l}, not {wanted}"))),
    }
}

fn check_cover(p1: &ClockedSet, p2: &ClockedSet, whole: &ClockedSet) -> Result<(), GameError> {
    let union: ClockedSet = p1.union(p2).cloned().collect();
    if &union != whole {
        return Err(GameError::spoiler("parts do not cover the new models"));
    }
    Ok(())
}

fn check_split(v: &GameVertex, split: Option<(usize, usize)>) -> Result<(), GameError> {
    match (v.label.is_some(), split) {
        (true, None) => Ok(()),
        (true, Some(_)) => Err(GameError::spoiler("no resource split at a labelled vertex")),
        (false, None) => Err(GameError::spoiler("resource split missing")),
        (false, Some((k1, k2))) if k1 >= 1 && k2 >= 1 && k1 + k2 + 1 == v.res => Ok(()),
        (false, Some((k1, k2))) => Err(GameError::spoiler(format!("bad split {k1} + {k2} + 1 != {}", v.res))),
    }
}

fn check_successor_map(f: &BTreeMap<ClockedModel, ClockedModel>, domain: &ClockedSet) -> Result<(), GameError> {
    if f.keys().ne(domain.iter()) {
        return Err(GameError::spoiler("choice map must cover exactly the new models"));
    }
    for (m, s) in f {
        if !m.successors().contains(s) {
            return Err(GameError::spoiler(format!("{s:?} is not a successor of {m:?}")));
        }
    }
    Ok(())
}

fn check_clock_map(
    clocks: &BTreeMap<ClockedModel, u32>,
    bounds: &BTreeMap<ClockedModel, u32>,
    who: fn(String) -> GameError,
) -> Result<(), GameError> {
    if clocks.keys().ne(bounds.keys()) {
        return Err(who("clock choices must cover exactly the required models".into()));
    }
    for (m, c) in clocks {
        if *c >= bounds[m] {
            return Err(who(format!("clock {c} not below {} for {m:?}", bounds[m])));
        }
    }
    Ok(())
}

fn spoiler_err(s: String) -> GameError {
    GameError::spoiler(s)
}

fn duplicator_err(s: String) -> GameError {
    GameError::duplicator(s)
}

fn is_variable_name(x: &str) -> bool {
    let mut cs = x.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && x != "T"
        && x != "F"
}

/// Where a jump from the current vertex lands, or `None` if `var` is not
/// bound above it.
pub fn jump_target(p: &MuPosition, var: &str) -> Option<(VertexId, VertexId)> {
    let v = p.cur();
    match (&v.label, v.back) {
        (Some(NodeLabel::Var(_)), Some(target)) => Some((p.vertices[target].parent.expect("a binder body has a parent"), target)),
        _ => p.binder_above(p.current, var).map(|u| (u, p.vertices[u].children[0])),
    }
}

fn clock_of(m: &ClockedModel, var: &str) -> Result<u32, GameError> {
    m.clock(var).ok_or_else(|| GameError::Invariant(format!("{m:?} has no clock for {var}")))
}

/// Validates `m` at `p` and says what the duplicator must answer.
pub fn expect(p: &MuPosition, m: &MuMove) -> Result<Expect, GameError> {
    if p.awaiting_initial {
        return Err(GameError::spoiler("the duplicator picks the initial sets first"));
    }
    if let Some(o) = p.opening_outcome() {
        return Err(GameError::spoiler(format!("the play is already over: {}", o.reason)));
    }
    let v = p.cur();
    let a_new = p.left_new(p.current);
    let b_new = p.right_new(p.current);
    match m {
        MuMove::Or { left1, left2, split } => {
            check_label(v, &NodeLabel::Or, true)?;
            check_split(v, *split)?;
            check_cover(left1, left2, &a_new)?;
            Ok(Expect::Branch)
        }
        MuMove::And { right1, right2, split } => {
            check_label(v, &NodeLabel::And, true)?;
            check_split(v, *split)?;
            check_cover(right1, right2, &b_new)?;
            Ok(Expect::Branch)
        }
        MuMove::Dia(f) => {
            check_label(v, &NodeLabel::Dia, true)?;
            check_successor_map(f, &a_new)?;
            Ok(Expect::Subsets {
                left: f.values().cloned().collect(),
                right: b_new.iter().flat_map(ClockedModel::successors).collect(),
            })
        }
        MuMove::Box(g) => {
            check_label(v, &NodeLabel::Box, true)?;
            check_successor_map(g, &b_new)?;
            Ok(Expect::Subsets {
                left: a_new.iter().flat_map(ClockedModel::successors).collect(),
                right: g.values().cloned().collect(),
            })
        }
        MuMove::Bind { kind, var, clocks } => {
            if !is_variable_name(var) {
                return Err(GameError::spoiler(format!("`{var}` is not a variable name")));
            }
            check_label(v, &NodeLabel::Fix(*kind, var.clone()), true)?;
            if v.label.is_none() && p.binder_above(p.current, var).is_some() {
                return Err(GameError::spoiler(format!("{var} is already bound above; pick another name")));
            }
            let (mine, theirs) = if *kind == Fixpoint::Least { (&a_new, &b_new) } else { (&b_new, &a_new) };
            let bound = |set: &ClockedSet| set.iter().map(|m| (m.clone(), p.clock_bound)).collect::<BTreeMap<_, _>>();
            check_clock_map(clocks, &bound(mine), spoiler_err)?;
            Ok(Expect::Clocks(bound(theirs)))
        }
        MuMove::Jump { var, clocks } => {
            check_label(v, &NodeLabel::Var(var.clone()), true)?;
            let Some((u, _)) = jump_target(p, var) else {
                return Ok(Expect::Terminal(Outcome::duplicator(format!("no fixed point binds {var} above"))));
            };
            if a_new.is_empty() && b_new.is_empty() {
                return Ok(Expect::Terminal(Outcome::spoiler("jump with no new models")));
            }
            let Some(NodeLabel::Fix(kind, _)) = &p.vertices[u].label else { unreachable!("binder") };
            let (mine, theirs) = if *kind == Fixpoint::Least { (&a_new, &b_new) } else { (&b_new, &a_new) };
            for m in mine {
                if clock_of(m, var)? == 0 {
                    return Ok(Expect::Terminal(Outcome::duplicator(format!("a spoiler clock for {var} ran out"))));
                }
            }
            let mut my_bounds = BTreeMap::new();
            for m in mine {
                my_bounds.insert(m.clone(), clock_of(m, var)?);
            }
            check_clock_map(clocks, &my_bounds, spoiler_err)?;
            let mut their_bounds = BTreeMap::new();
            for m in theirs {
                let c = clock_of(m, var)?;
                if c != 0 {
                    their_bounds.insert(m.clone(), c);
                }
            }
            Ok(Expect::Clocks(their_bounds))
        }
        MuMove::Lit(l) => {
            if v.label.is_some() {
                return Err(GameError::spoiler("literal move at a labelled vertex"));
            }
            let (a, b) = match p.lit_rule {
                LitRule::AllModels => (v.left.clone(), v.right.clone()),
                LitRule::NewOnly => (a_new, b_new),
            };
            let sep = a.iter().all(|m| l.eval(|q| m.pointed.holds(q))) && b.iter().all(|m| !l.eval(|q| m.pointed.holds(q)));
            Ok(Expect::Terminal(if sep {
                Outcome::spoiler(format!("literal {l} separates"))
            } else {
                Outcome::duplicator(format!("literal {l} does not separate"))
            }))
        }
    }
}

/// Checks that `r` answers a move with expectation `e`.
pub fn check_response(e: &Expect, r: &MuResponse) -> Result<(), GameError> {
    match (e, r) {
        (Expect::Terminal(_), MuResponse::Nothing) | (Expect::Branch, MuResponse::Branch(_)) => Ok(()),
        (Expect::Subsets { left, right }, MuResponse::Subsets { left: l, right: r }) => {
            if l.is_subset(left) && r.is_subset(right) {
                Ok(())
            } else {
                Err(GameError::duplicator("chosen sets are not subsets of the successors"))
            }
        }
        (Expect::Clocks(bounds), MuResponse::Clocks(c)) => check_clock_map(c, bounds, duplicator_err),
        _ => Err(GameError::duplicator(format!("response {r:?} does not fit {e:?}"))),
    }
}

fn child(next: &mut MuPosition, v: VertexId, index: usize, res: usize) -> VertexId {
    if let Some(&c) = next.vertices[v].children.get(index) {
        return c;
    }
    let id = next.vertices.len();
    next.vertices.push(GameVertex::fresh(Some(v), res));
    next.vertices[v].children.push(id);
    debug_assert_eq!(next.vertices[v].children.len(), index + 1);
    id
}

/// Applies the duplicator's choice of starting sets.
pub fn apply_initial(p: &MuPosition, r: &MuResponse) -> Result<MuPosition, GameError> {
    let MuResponse::Initial { left, right } = r else {
        return Err(GameError::duplicator("the first answer must choose the starting sets"));
    };
    if !p.awaiting_initial {
        return Err(GameError::duplicator("starting sets already chosen"));
    }
    let root = &p.vertices[0];
    if !left.is_subset(&root.left) || !right.is_subset(&root.right) {
        return Err(GameError::duplicator("starting sets must be subsets of the given models"));
    }
    let mut next = p.clone();
    next.vertices[0].left = left.clone();
    next.vertices[0].right = right.clone();
    next.awaiting_initial = false;
    Ok(next)
}

/// Plays spoiler move `m` answered by `r`.
pub fn apply_mu(p: &MuPosition, m: &MuMove, r: &MuResponse) -> Result<MuStep, GameError> {
    let e = expect(p, m)?;
    check_response(&e, r)?;
    if let Expect::Terminal(o) = e {
        return Ok(MuStep::End(o));
    }
    let v = p.current;
    let res = p.vertices[v].res;
    let a_all = p.vertices[v].left.clone();
    let b_all = p.vertices[v].right.clone();
    let a_new = p.left_new(v);
    let b_new = p.right_new(v);
    let mut next = p.clone();
    let age_here = |next: &mut MuPosition| {
        next.vertices[v].left = aged(&a_all);
        next.vertices[v].right = aged(&b_all);
    };
    let put = |next: &mut MuPosition, w: VertexId, left: &ClockedSet, right: &ClockedSet| {
        next.vertices[w].left.extend(left.iter().cloned());
        next.vertices[w].right.extend(right.iter().cloned());
    };
    match (m, r) {
        (MuMove::Or { left1, left2, split }, MuResponse::Branch(b)) => {
            let (k1, k2) = split.unwrap_or((0, 0));
            next.vertices[v].label = Some(NodeLabel::Or);
            let v1 = child(&mut next, v, 0, k1);
            let v2 = child(&mut next, v, 1, k2);
            age_here(&mut next);
            put(&mut next, v1, left1, &b_all);
            put(&mut next, v2, left2, &b_all);
            next.current = if *b == Branch::First { v1 } else { v2 };
        }
        (MuMove::And { right1, right2, split }, MuResponse::Branch(b)) => {
            let (k1, k2) = split.unwrap_or((0, 0));
            next.vertices[v].label = Some(NodeLabel::And);
            let v1 = child(&mut next, v, 0, k1);
            let v2 = child(&mut next, v, 1, k2);
            age_here(&mut next);
            put(&mut next, v1, &a_all, right1);
            put(&mut next, v2, &a_all, right2);
            next.current = if *b == Branch::First { v1 } else { v2 };
        }
        (MuMove::Dia(_) | MuMove::Box(_), MuResponse::Subsets { left, right }) => {
            next.vertices[v].label = Some(if matches!(m, MuMove::Dia(_)) { NodeLabel::Dia } else { NodeLabel::Box });
            let w = child(&mut next, v, 0, res.saturating_sub(1));
            age_here(&mut next);
            put(&mut next, w, left, right);
            next.current = w;
        }
        (MuMove::Bind { kind, var, clocks }, MuResponse::Clocks(theirs)) => {
            next.vertices[v].label = Some(NodeLabel::Fix(*kind, var.clone()));
            let w = child(&mut next, v, 0, res.saturating_sub(1));
            age_here(&mut next);
            let (lc, rc) = if *kind == Fixpoint::Least { (clocks, theirs) } else { (theirs, clocks) };
            let left: ClockedSet = a_new.iter().map(|x| x.with_clock(var, lc[x])).collect();
            let right: ClockedSet = b_new.iter().map(|x| x.with_clock(var, rc[x])).collect();
            put(&mut next, w, &left, &right);
            next.current = w;
        }
        (MuMove::Jump { var, clocks }, MuResponse::Clocks(theirs)) => {
            let (u, target) = jump_target(p, var).expect("checked by expect");
            let Some(NodeLabel::Fix(kind, _)) = &p.vertices[u].label else { unreachable!("binder") };
            // variables bound between the binder and the jump lose their clocks
            let path = p.path_to(v);
            let pos_u = path.iter().position(|&x| x == u).expect("binder is an ancestor");
            let inner: Vec<String> = path[pos_u + 1..]
                .iter()
                .filter_map(|&x| match &p.vertices[x].label {
                    Some(NodeLabel::Fix(_, y)) => Some(y.clone()),
                    _ => None,
                })
                .collect();
            let (lc, rc) = if *kind == Fixpoint::Least { (clocks, theirs) } else { (theirs, clocks) };
            let reset = |x: &ClockedModel, c: u32| {
                let mut y = x.with_clock(var, c);
                for z in &inner {
                    if z != var {
                        y.clocks.remove(z);
                    }
                }
                y.renewed()
            };
            let left: ClockedSet = a_new.iter().filter_map(|x| lc.get(x).map(|&c| reset(x, c))).collect();
            let right: ClockedSet = b_new.iter().filter_map(|x| rc.get(x).map(|&c| reset(x, c))).collect();
            next.vertices[v].label = Some(NodeLabel::Var(var.clone()));
            next.vertices[v].back = Some(target);
            age_here(&mut next);
            put(&mut next, target, &left, &right);
            next.current = target;
        }
        _ => unreachable!("response checked against the move"),
    }
    Ok(MuStep::Continue(next))
}

/// Sizes the move menus may reach before enumeration gives up.
pub const MAX_MU_MENU: usize = 100_000;

/// How spoiler moves are enumerated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpoilerAlphabet {
    /// Only partitions in connective moves, rather than all covers.
    pub partitions_only: bool,
    /// Only the largest clock value, rather than every value, for spoiler
    /// clocks at binds and jumps. Larger clocks give the spoiler more room,
    /// so the restriction loses nothing for him.
    pub max_clocks_only: bool,
    /// Skip moves that lose on the spot (modal or bind moves at resource 1,
    /// jumps to unbound variables).
    pub skip_hopeless: bool,
    /// Beyond this many ways to split a set (or to pick successors), use a
    /// fixed pseudo-random sample of that size instead.
    pub max_parts: usize,
}

impl Default for SpoilerAlphabet {
    fn default() -> Self {
        SpoilerAlphabet { partitions_only: true, max_clocks_only: true, skip_hopeless: true, max_parts: MAX_MU_MENU }
    }
}

/// Codes of mixed-radix choices, one digit per item, all of them or a fixed
/// pseudo-random sample of `cap` distinct ones.
fn choice_codes(radices: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let count = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
    match count {
        Some(c) if c <= cap => (0..c)
            .map(|mut code| {
                radices
                    .iter()
                    .map(|&r| {
                        let d = code % r;
                        code /= r;
                        d
                    })
                    .collect()
            })
            .collect(),
        _ => {
            let mut rng = StdRng::seed_from_u64(radices.len() as u64);
            let mut seen = BTreeSet::new();
            let mut tries = 0;
            while seen.len() < cap && tries < cap * 4 {
                tries += 1;
                seen.insert(radices.iter().map(|&r| rng.gen_range(0..r)).collect::<Vec<_>>());
            }
            seen.into_iter().collect()
        }
    }
}

fn parts(set: &ClockedSet, partitions_only: bool, max_parts: usize) -> Result<Vec<(ClockedSet, ClockedSet)>, GameError> {
    let items: Vec<&ClockedModel> = set.iter().collect();
    let radices = vec![if partitions_only { 2 } else { 3 }; items.len()];
    Ok(choice_codes(&radices, max_parts)
        .into_iter()
        .map(|digits| {
            let (mut x1, mut x2) = (ClockedSet::new(), ClockedSet::new());
            for (m, d) in items.iter().zip(digits) {
                if d != 1 {
                    x1.insert((*m).clone());
                }
                if d != 0 {
                    x2.insert((*m).clone());
                }
            }
            (x1, x2)
        })
        .collect())
}

fn successor_maps(set: &ClockedSet, max_maps: usize) -> Vec<BTreeMap<ClockedModel, ClockedModel>> {
    let succ: Vec<(ClockedModel, Vec<ClockedModel>)> = set.iter().map(|m| (m.clone(), m.successors())).collect();
    if succ.iter().any(|(_, s)| s.is_empty()) {
        return Vec::new();
    }
    let radices: Vec<usize> = succ.iter().map(|(_, s)| s.len()).collect();
    choice_codes(&radices, max_maps)
        .into_iter()
        .map(|digits| succ.iter().zip(digits).map(|((m, s), d)| (m.clone(), s[d].clone())).collect())
        .collect()
}

/// Every assignment of a value below the bound to each listed model.
pub fn clock_assignments(bounds: &BTreeMap<ClockedModel, u32>, max_only: bool) -> Result<Vec<BTreeMap<ClockedModel, u32>>, GameError> {
    if max_only {
        return Ok(vec![bounds.iter().map(|(m, &b)| (m.clone(), b.saturating_sub(1))).collect()]);
    }
    let entries: Vec<(&ClockedModel, u32)> = bounds.iter().map(|(m, &b)| (m, b)).collect();
    let total = entries
        .iter()
        .try_fold(1usize, |acc, &(_, b)| acc.checked_mul(b as usize).filter(|&t| t <= MAX_MU_MENU))
        .ok_or(GameError::TooManyMoves(MAX_MU_MENU))?;
    Ok((0..total)
        .map(|code| {
            let mut c = code;
            entries
                .iter()
                .map(|&(m, b)| {
                    let v = (c % b as usize) as u32;
                    c /= b as usize;
                    (m.clone(), v)
                })
                .collect()
        })
        .collect())
}

/// Spoiler moves at `p` from the given alphabet.
pub fn legal_s_moves(p: &MuPosition, alphabet: SpoilerAlphabet) -> Result<Vec<MuMove>, GameError> {
    if p.awaiting_initial || p.opening_outcome().is_some() {
        return Ok(Vec::new());
    }
    let v = p.cur();
    let k = v.res;
    let a_new = p.left_new(p.current);
    let b_new = p.right_new(p.current);
    let mut out = Vec::new();
    let labelled = v.label.clone();
    let splits: Vec<Option<(usize, usize)>> = if labelled.is_some() {
        vec![None]
    } else if k >= 3 {
        (1..=k - 2).map(|k1| Some((k1, k - 1 - k1))).collect()
    } else {
        Vec::new()
    };
    let allow = |l: &NodeLabel| labelled.is_none() || labelled.as_ref() == Some(l);
    let hopeless_child = labelled.is_none() && k == 1 && alphabet.skip_hopeless;
    if labelled.is_none() {
        let props = p.propositions();
        out.extend(Literal::all_over(props.iter().map(String::as_str)).into_iter().map(MuMove::Lit));
    }
    if allow(&NodeLabel::Or) && !splits.is_empty() {
        let ps = parts(&a_new, alphabet.partitions_only, alphabet.max_parts)?;
        for split in &splits {
            out.extend(ps.iter().map(|(x, y)| MuMove::Or { left1: x.clone(), left2: y.clone(), split: *split }));
        }
    }
    if allow(&NodeLabel::And) && !splits.is_empty() {
        let ps = parts(&b_new, alphabet.partitions_only, alphabet.max_parts)?;
        for split in &splits {
            out.extend(ps.iter().map(|(x, y)| MuMove::And { right1: x.clone(), right2: y.clone(), split: *split }));
        }
    }
    if !hopeless_child {
        if allow(&NodeLabel::Dia) {
            out.extend(successor_maps(&a_new, alphabet.max_parts).into_iter().map(MuMove::Dia));
        }
        if allow(&NodeLabel::Box) {
            out.extend(successor_maps(&b_new, alphabet.max_parts).into_iter().map(MuMove::Box));
        }
        let binds: Vec<(Fixpoint, String)> = match &labelled {
            Some(NodeLabel::Fix(kind, x)) => vec![(*kind, x.clone())],
            None => {
                let x = p.fresh_variable();
                vec![(Fixpoint::Least, x.clone()), (Fixpoint::Greatest, x)]
            }
            _ => Vec::new(),
        };
        for (kind, var) in binds {
            let mine = if kind == Fixpoint::Least { &a_new } else { &b_new };
            let bounds: BTreeMap<ClockedModel, u32> = mine.iter().map(|m| (m.clone(), p.clock_bound)).collect();
            for clocks in clock_assignments(&bounds, alphabet.max_clocks_only)? {
                out.push(MuMove::Bind { kind, var: var.clone(), clocks });
            }
        }
    }
    let jump_vars: Vec<String> = match &labelled {
        Some(NodeLabel::Var(x)) => vec![x.clone()],
        None => {
            let mut vars: Vec<String> = p
                .path_to(p.current)
                .iter()
                .filter_map(|&x| match &p.vertices[x].label {
                    Some(NodeLabel::Fix(_, y)) => Some(y.clone()),
                    _ => None,
                })
                .collect();
            vars.sort();
            vars.dedup();
            if !alphabet.skip_hopeless {
                vars.push(p.fresh_variable());
            }
            vars
        }
        _ => Vec::new(),
    };
    for var in jump_vars {
        let probe = MuMove::Jump { var: var.clone(), clocks: BTreeMap::new() };
        match expect(p, &probe) {
            Ok(Expect::Terminal(_)) => out.push(probe),
            _ => {
                let (u, _) = jump_target(p, &var).expect("bound variable");
                let Some(NodeLabel::Fix(kind, _)) = &p.vertices[u].label else { unreachable!("binder") };
                let mine = if *kind == Fixpoint::Least { &a_new } else { &b_new };
                let mut bounds = BTreeMap::new();
                for m in mine {
                    bounds.insert(m.clone(), clock_of(m, &var)?);
                }
                for clocks in clock_assignments(&bounds, alphabet.max_clocks_only)? {
                    out.push(MuMove::Jump { var: var.clone(), clocks });
                }
            }
        }
    }
    if out.len() > MAX_MU_MENU {
        return Err(GameError::TooManyMoves(MAX_MU_MENU));
    }
    Ok(out)
}

/// How duplicator answers are enumerated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResponseMode {
    /// Answers that are never worse for the duplicator than the alternatives:
    /// full subsets and the largest clocks, plus both branches.
    Dominant,
    /// Every answer.
    All,
}

fn subset_pairs(left: &ClockedSet, right: &ClockedSet) -> Result<Vec<(ClockedSet, ClockedSet)>, GameError> {
    let items: Vec<(bool, &ClockedModel)> = left.iter().map(|m| (true, m)).chain(right.iter().map(|m| (false, m))).collect();
    if items.len() > 16 {
        return Err(GameError::TooManyMoves(1 << 16));
    }
    Ok((0..1usize << items.len())
        .rev()
        .map(|mask| {
            let (mut l, mut r) = (ClockedSet::new(), ClockedSet::new());
            for (i, (is_left, m)) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if *is_left {
                        l.insert((*m).clone());
                    } else {
                        r.insert((*m).clone());
                    }
                }
            }
            (l, r)
        })
        .collect())
}

/// The duplicator's possible answers to `m` at `p` (or to the opening if the
/// starting sets are still to be chosen; pass `None` then).
pub fn d_responses(p: &MuPosition, m: Option<&MuMove>, mode: ResponseMode) -> Result<Vec<MuResponse>, GameError> {
    let Some(m) = m else {
        let root = &p.vertices[0];
        return Ok(match mode {
            ResponseMode::Dominant => vec![MuResponse::Initial { left: root.left.clone(), right: root.right.clone() }],
            ResponseMode::All => subset_pairs(&root.left, &root.right)?
                .into_iter()
                .map(|(left, right)| MuResponse::Initial { left, right })
                .collect(),
        });
    };
    Ok(match expect(p, m)? {
        Expect::Terminal(_) => vec![MuResponse::Nothing],
        Expect::Branch => vec![MuResponse::Branch(Branch::First), MuResponse::Branch(Branch::Second)],
        Expect::Subsets { left, right } => match mode {
            ResponseMode::Dominant => vec![MuResponse::Subsets { left, right }],
            ResponseMode::All => subset_pairs(&left, &right)?
                .into_iter()
                .map(|(left, right)| MuResponse::Subsets { left, right })
                .collect(),
        },
        Expect::Clocks(bounds) => clock_assignments(&bounds, mode == ResponseMode::Dominant)?
            .into_iter()
            .map(MuResponse::Clocks)
            .collect(),
    })
}

const OMEGA: u64 = u64::MAX - 1;
const INFINITY: u64 = u64::MAX;

/// Progress measure of a new model sitting at `s`: along the path from the
/// root, a fixed-point vertex above `s` contributes the model's clock for
/// its variable and every other vertex contributes omega.
fn model_measure(p: &MuPosition, s: VertexId, m: &ClockedModel) -> Vec<u64> {
    p.path_to(s)
        .iter()
        .map(|&t| match &p.vertices[t].label {
            Some(NodeLabel::Fix(_, y)) if t != s => m.clock(y).map_or(OMEGA, u64::from),
            _ => OMEGA,
        })
        .collect()
}

/// Lexicographic order with missing entries read as infinity.
fn cmp_measure(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(INFINITY), b.get(i).copied().unwrap_or(INFINITY)))
        .find_map(|(x, y)| (x != y).then(|| x.cmp(&y)))
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// The multiset of measures of every new model in the position, sorted.
pub fn progress_multiset(p: &MuPosition) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (s, x) in p.vertices.iter().enumerate() {
        for m in x.left.iter().chain(&x.right).filter(|m| m.is_new()) {
            out.push(model_measure(p, s, m));
        }
    }
    out.sort_by(|a, b| cmp_measure(a, b));
    out
}

/// Whether going from `before` to `after` strictly decreases the pair of the
/// multiset of model measures (multiset order) and the current resource.
pub fn progress_decreases(before: &MuPosition, after: &MuPosition) -> bool {
    let m = progress_multiset(before);
    let n = progress_multiset(after);
    let (only_m, only_n) = multiset_difference(&m, &n);
    if only_m.is_empty() && only_n.is_empty() {
        return after.cur().res < before.cur().res;
    }
    !only_m.is_empty()
        && only_n.iter().all(|y| only_m.iter().any(|x| cmp_measure(x, y) == std::cmp::Ordering::Greater))
}

fn multiset_difference(m: &[Vec<u64>], n: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let (mut i, mut j) = (0, 0);
    let (mut only_m, mut only_n) = (Vec::new(), Vec::new());
    while i < m.len() || j < n.len() {
        let ord = match (m.get(i), n.get(j)) {
            (Some(x), Some(y)) => cmp_measure(x, y),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                only_m.push(m[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                only_n.push(n[j].clone());
                j += 1;
            }
        }
    }
    (only_m, only_n)
}

/// Every vertex strictly above the current one holds only old models.
pub fn aging_holds(p: &MuPosition) -> bool {
    let path = p.path_to(p.current);
    path[..path.len() - 1].iter().all(|&s| {
        let x = &p.vertices[s];
        x.left.iter().chain(&x.right).all(|m| !m.is_new())
    })
}
