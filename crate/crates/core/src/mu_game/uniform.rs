//! The spoiler strategy that follows a separating formula.
//!
//! Game vertices are mapped onto the formula's syntax tree by the path of
//! child indices from the root. At every new left model the approximant of
//! the subformula under that map holds, and at every new right model it
//! fails; each move is chosen to keep it that way.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::agents::MuSpoiler;
use super::position::{ClockedSet, MuMove, MuPosition, VertexId};
use super::GameError;
use crate::formulas::{Fixpoint, MuFormula, NodeId, NodeLabel, SyntaxTree};
use crate::kripke::{ClockedModel, PointedModel};
use crate::semantics::{approximant_holds, eval_mu, least_stage, ApproximantContext, EvalError};

#[derive(Clone, Debug)]
pub struct UniformStrategy {
    formula: MuFormula,
    tree: Arc<SyntaxTree>,
}

impl UniformStrategy {
    /// Needs a sentence with distinct bound variables that is true on every
    /// model of `a0`, false on every model of `b0`, and no larger than `k0`.
    pub fn new(phi: &MuFormula, a0: &[PointedModel], b0: &[PointedModel], k0: usize) -> Result<Self, GameError> {
        let tree = SyntaxTree::new(phi).map_err(|e| GameError::Precondition(e.to_string()))?;
        if tree.len() > k0 {
            return Err(GameError::Precondition(format!("formula size {} exceeds the resource {k0}", tree.len())));
        }
        for a in a0 {
            if !eval_mu(phi, a)? {
                return Err(GameError::Precondition(format!("formula fails on left model {a:?}")));
            }
        }
        for b in b0 {
            if eval_mu(phi, b)? {
                return Err(GameError::Precondition(format!("formula holds on right model {b:?}")));
            }
        }
        Ok(UniformStrategy { formula: phi.clone(), tree: Arc::new(tree) })
    }

    pub fn formula(&self) -> &MuFormula {
        &self.formula
    }

    pub fn tree(&self) -> &SyntaxTree {
        &self.tree
    }

    /// Image of game vertex `v` in the syntax tree.
    pub fn embed(&self, p: &MuPosition, v: VertexId) -> Result<NodeId, GameError> {
        let path = p.path_to(v);
        let mut t = self.tree.root();
        for w in path.windows(2) {
            let idx = p.vertex(w[0]).children.iter().position(|&c| c == w[1]).expect("tree edge");
            t = *self
                .tree
                .children(t)
                .get(idx)
                .ok_or_else(|| GameError::Invariant(format!("vertex {} has no image below {t}", w[1])))?;
        }
        Ok(t)
    }

    /// Checks the embedding conditions at every vertex: labels agree,
    /// subformulas fit into the resource, back edges map to back edges.
    pub fn check_embedding(&self, p: &MuPosition) -> Result<(), GameError> {
        for v in 0..p.vertices.len() {
            let t = self.embed(p, v)?;
            let x = p.vertex(v);
            if let Some(l) = &x.label {
                if l != self.tree.label(t) {
                    return Err(GameError::Invariant(format!("vertex {v} is labelled {l}, its image {}", self.tree.label(t))));
                }
            }
            if self.tree.subtree_size(t) > x.res {
                return Err(GameError::Invariant(format!("subformula at vertex {v} is larger than its resource")));
            }
            if let Some(target) = x.back {
                if Some(self.embed(p, target)?) != self.tree.back(t) {
                    return Err(GameError::Invariant(format!("back edge of vertex {v} leaves the formula")));
                }
            }
        }
        Ok(())
    }

    fn holds(&self, t: NodeId, m: &ClockedModel) -> Result<bool, GameError> {
        let ctx = ApproximantContext::new(&self.tree, t, m.clocks.clone())?;
        Ok(approximant_holds(&ctx, &m.pointed)?)
    }

    fn first_successor(&self, t: NodeId, m: &ClockedModel, want: bool) -> Result<ClockedModel, GameError> {
        for s in m.successors() {
            if self.holds(t, &s)? == want {
                return Ok(s);
            }
        }
        Err(GameError::Invariant(format!("no successor of {m:?} keeps the formula invariant")))
    }

    fn stages(&self, var: &str, set: &ClockedSet, want: bool, bound: u32) -> Result<BTreeMap<ClockedModel, u32>, GameError> {
        set.iter()
            .map(|m| {
                let stage = least_stage(&self.tree, var, &m.clocks, &m.pointed, want, bound)?
                    .ok_or_else(|| GameError::Invariant(format!("no stage below {bound} for {m:?}")))?;
                Ok((m.clone(), stage))
            })
            .collect()
    }
}

impl MuSpoiler for UniformStrategy {
    fn choose(&mut self, p: &MuPosition) -> Result<MuMove, GameError> {
        let v = p.current;
        let t = self.embed(p, v)?;
        let a = p.left_new(v);
        let b = p.right_new(v);
        let split = |t1: NodeId| {
            p.cur().label.is_none().then(|| {
                let k1 = self.tree.subtree_size(t1);
                (k1, p.cur().res - 1 - k1)
            })
        };
        Ok(match self.tree.label(t) {
            NodeLabel::Lit(l) => MuMove::Lit(l.clone()),
            NodeLabel::Or => {
                let t1 = self.tree.children(t)[0];
                let (mut left1, mut left2) = (ClockedSet::new(), ClockedSet::new());
                for m in a {
                    if self.holds(t1, &m)? {
                        left1.insert(m);
                    } else {
                        left2.insert(m);
                    }
                }
                MuMove::Or { left1, left2, split: split(t1) }
            }
            NodeLabel::And => {
                let t1 = self.tree.children(t)[0];
                let (mut right1, mut right2) = (ClockedSet::new(), ClockedSet::new());
                for m in b {
                    if !self.holds(t1, &m)? {
                        right1.insert(m);
                    } else {
                        right2.insert(m);
                    }
                }
                MuMove::And { right1, right2, split: split(t1) }
            }
            NodeLabel::Dia => {
                let t1 = self.tree.children(t)[0];
                MuMove::Dia(a.iter().map(|m| Ok((m.clone(), self.first_successor(t1, m, true)?))).collect::<Result<_, GameError>>()?)
            }
            NodeLabel::Box => {
                let t1 = self.tree.children(t)[0];
                MuMove::Box(b.iter().map(|m| Ok((m.clone(), self.first_successor(t1, m, false)?))).collect::<Result<_, GameError>>()?)
            }
            NodeLabel::Fix(kind, var) => {
                let clocks = match kind {
                    Fixpoint::Least => self.stages(var, &a, true, p.clock_bound)?,
                    Fixpoint::Greatest => self.stages(var, &b, false, p.clock_bound)?,
                };
                MuMove::Bind { kind: *kind, var: var.clone(), clocks }
            }
            NodeLabel::Var(var) => {
                let kind = self.tree.fixpoint_kind(var).ok_or_else(|| EvalError::FreeVariable(var.clone()))?;
                let mine = if kind == Fixpoint::Least { &a } else { &b };
                if mine.iter().any(|m| m.clock(var) == Some(0)) {
                    MuMove::Jump { var: var.clone(), clocks: BTreeMap::new() }
                } else {
                    let clocks = mine.iter().map(|m| (m.clone(), m.clock(var).unwrap_or(1) - 1)).collect();
                    MuMove::Jump { var: var.clone(), clocks }
                }
            }
        })
    }

    fn positional(&self) -> bool {
        true
    }
}
