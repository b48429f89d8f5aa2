//! Exact solver for the modal game on bisimulation-quotient positions.
//!
//! Models are replaced by their bisimulation classes, so a position is a
//! resource and two sorted class lists. Splits only range over partitions of
//! the split side (covers are never better for the spoiler), modal moves only
//! over minimal sets of successor classes hitting every model's successors.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use super::{GameError, MLPosition};
use crate::exec::Exec;
use crate::formulas::{Literal, MLFormula};
use crate::game::Player;
use crate::kripke::PointedModel;
use crate::semantics::Universe;

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Maximum number of distinct positions expanded.
    pub node_budget: u64,
    pub exec: Exec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: 2_000_000, exec: Exec::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessReason {
    BisimilarPair,
    ResourceExhaustion,
    Literal,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MLVerdict {
    pub winner: Player,
    /// A separating formula of size at most `k` when the spoiler wins.
    pub witness: Option<MLFormula>,
    pub reason: Option<WitnessReason>,
    /// Positions expanded so far by the solver that produced this verdict.
    pub nodes: u64,
}

type Classes = Vec<u32>;
type Key = (usize, Classes, Classes);

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

pub struct MLSolver {
    universe: Universe,
    literals: Vec<Literal>,
    memo: DashMap<Key, Option<MLFormula>>,
    nodes: AtomicU64,
    config: SolverConfig,
}

/// Solves `p` with a fresh solver and the default configuration.
pub fn solve(p: &MLPosition) -> Result<MLVerdict, GameError> {
    MLSolver::for_position(p, SolverConfig::default()).solve(p)
}

impl MLSolver {
    /// A solver able to handle every position reachable from one built from
    /// `models`.
    pub fn new(models: &[PointedModel], config: SolverConfig) -> Self {
        let universe = Universe::with_exec(models, config.exec);
        let props = universe.propositions();
        let literals = Literal::all_over(props.iter().map(String::as_str));
        MLSolver { universe, literals, memo: DashMap::new(), nodes: AtomicU64::new(0), config }
    }

    pub fn for_position(p: &MLPosition, config: SolverConfig) -> Self {
        let models: Vec<PointedModel> = p.models().cloned().collect();
        MLSolver::new(&models, config)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    fn classes<'a>(&self, side: impl IntoIterator<Item = &'a PointedModel>) -> Classes {
        let mut out: Classes = side.into_iter().map(|pm| self.universe.class_of(pm)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn solve(&self, p: &MLPosition) -> Result<MLVerdict, GameError> {
        if let Some(pm) = p.models().find(|pm| !self.universe.contains(pm)) {
            return Err(GameError::Precondition(format!("{pm:?} is not in the solver's universe")));
        }
        let a = self.classes(&p.a);
        let b = self.classes(&p.b);
        let w = self.win(p.k, &a, &b)?;
        let nodes = self.nodes();
        Ok(match w {
            Some(f) => {
                let reason = matches!(f, MLFormula::Lit(_)).then_some(WitnessReason::Literal);
                MLVerdict { winner: Player::Spoiler, witness: Some(f), reason, nodes }
            }
            None => {
                let reason = if p.k > 0 && self.bisimilar_pair(&a, &b, p.k - 1) {
                    WitnessReason::BisimilarPair
                } else {
                    WitnessReason::ResourceExhaustion
                };
                MLVerdict { winner: Player::Duplicator, witness: None, reason: Some(reason), nodes }
            }
        })
    }

    /// Whether the spoiler wins `(k, a, b)`; the formula is a separator of
    /// size at most `k`.
    fn win(&self, k: usize, a: &[u32], b: &[u32]) -> Result<Option<MLFormula>, GameError> {
        if k == 0 {
            return Ok(None);
        }
        if let Some(l) = self.separating_literal(a, b) {
            return Ok(Some(MLFormula::Lit(l)));
        }
        if k == 1 || intersects(a, b) || self.bisimilar_pair(a, b, k - 1) {
            return Ok(None);
        }
        let key = (k, a.to_vec(), b.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.config.node_budget {
            return Err(GameError::BudgetExceeded(self.config.node_budget));
        }
        let result = match self.win(k - 1, a, b)? {
            Some(f) => Some(f),
            None => self.expand(k, a, b)?,
        };
        Ok(self.memo.entry(key).or_insert(result).clone())
    }

    fn separating_literal(&self, a: &[u32], b: &[u32]) -> Option<Literal> {
        let holds = |l: &Literal, c: u32| l.eval(|p| self.universe.class_holds(c, p));
        self.literals
            .iter()
            .find(|l| a.iter().all(|&c| holds(l, c)) && b.iter().all(|&c| !holds(l, c)))
            .cloned()
    }

    fn bisimilar_pair(&self, a: &[u32], b: &[u32], n: usize) -> bool {
        let mut blocks: Vec<u32> = a.iter().map(|&c| self.universe.class_block(c, n)).collect();
        blocks.sort_unstable();
        b.iter().any(|&c| blocks.binary_search(&self.universe.class_block(c, n)).is_ok())
    }

    fn successor_union(&self, side: &[u32]) -> Classes {
        let mut out: Classes = side.iter().flat_map(|&c| self.universe.class_successors(c).iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn expand(&self, k: usize, a: &[u32], b: &[u32]) -> Result<Option<MLFormula>, GameError> {
        enum Candidate {
            Dia(Classes),
            Box(Classes),
            Or(usize),
            And(usize),
        }
        let mut cands = Vec::new();
        let succ_a: Vec<&[u32]> = a.iter().map(|&c| self.universe.class_successors(c)).collect();
        let succ_b: Vec<&[u32]> = b.iter().map(|&c| self.universe.class_successors(c)).collect();
        if succ_a.iter().all(|s| !s.is_empty()) {
            cands.extend(minimal_hitting_sets(&succ_a).into_iter().map(Candidate::Dia));
        }
        if succ_b.iter().all(|s| !s.is_empty()) {
            cands.extend(minimal_hitting_sets(&succ_b).into_iter().map(Candidate::Box));
        }
        if k >= 3 {
            cands.extend((1..=k - 2).map(Candidate::Or));
            cands.extend((1..=k - 2).map(Candidate::And));
        }
        let found = self.config.exec.find_map_first(&cands, |c| {
            let r = match c {
                Candidate::Dia(h) => self.win(k - 1, h, &self.successor_union(b)).map(|w| w.map(MLFormula::dia)),
                Candidate::Box(h) => self.win(k - 1, &self.successor_union(a), h).map(|w| w.map(MLFormula::boxed)),
                Candidate::Or(k1) => self
                    .split(*k1, k - 1 - k1, a, b, Side::Left)
                    .map(|w| w.map(|(f, g)| MLFormula::or(f, g))),
                Candidate::And(k1) => self
                    .split(*k1, k - 1 - k1, b, a, Side::Right)
                    .map(|w| w.map(|(f, g)| MLFormula::and(f, g))),
            };
            r.transpose()
        });
        found.transpose()
    }

    fn win_side(&self, k: usize, part: &[u32], other: &[u32], side: Side) -> Result<Option<MLFormula>, GameError> {
        match side {
            Side::Left => self.win(k, part, other),
            Side::Right => self.win(k, other, part),
        }
    }

    /// Searches partitions `(P1, P2)` of `items` with both parts winnable
    /// against `other`, pruning on the antimonotonicity of winning.
    fn split(
        &self,
        k1: usize,
        k2: usize,
        items: &[u32],
        other: &[u32],
        side: Side,
    ) -> Result<Option<(MLFormula, MLFormula)>, GameError> {
        let mut p1 = Vec::new();
        let mut p2 = Vec::new();
        self.split_dfs(k1, k2, items, other, side, &mut p1, &mut p2)
    }

    #[allow(clippy::too_many_arguments)]
    fn split_dfs(
        &self,
        k1: usize,
        k2: usize,
        items: &[u32],
        other: &[u32],
        side: Side,
        p1: &mut Vec<u32>,
        p2: &mut Vec<u32>,
    ) -> Result<Option<(MLFormula, MLFormula)>, GameError> {
        let Some((&x, rest)) = items.split_first() else {
            let f = self.win_side(k1, p1, other, side)?;
            let g = self.win_side(k2, p2, other, side)?;
            return Ok(f.zip(g));
        };
        p1.push(x);
        if self.win_side(k1, p1, other, side)?.is_some() {
            if let Some(w) = self.split_dfs(k1, k2, rest, other, side, p1, p2)? {
                p1.pop();
                return Ok(Some(w));
            }
        }
        p1.pop();
        // with equal budgets the parts are interchangeable
        if k1 == k2 && p1.is_empty() {
            return Ok(None);
        }
        p2.push(x);
        let res = if self.win_side(k2, p2, other, side)?.is_some() {
            self.split_dfs(k1, k2, rest, other, side, p1, p2)?
        } else {
            None
        };
        p2.pop();
        Ok(res)
    }
}

fn intersects(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

/// Inclusion-minimal sets meeting every member of `family`, sorted.
fn minimal_hitting_sets(family: &[&[u32]]) -> Vec<Classes> {
    fn go(family: &[&[u32]], current: &mut Vec<u32>, out: &mut Vec<Classes>) {
        let Some(unhit) = family.iter().find(|s| !s.iter().any(|x| current.contains(x))) else {
            out.push(current.clone());
            return;
        };
        for &x in unhit.iter() {
            current.push(x);
            go(family, current, out);
            current.pop();
        }
    }
    let mut all = Vec::new();
    go(family, &mut Vec::new(), &mut all);
    for h in &mut all {
        h.sort_unstable();
    }
    all.sort();
    all.dedup();
    let hits = |h: &[u32]| family.iter().all(|s| s.iter().any(|x| h.contains(x)));
    all.retain(|h| (0..h.len()).all(|i| !hits(&[&h[..i], &h[i + 1..]].concat())));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::pointed_from_json;
    use crate::semantics::eval_ml;

    fn pm(s: &str) -> PointedModel {
        pointed_from_json(s).unwrap()
    }

    fn chain(len: usize) -> PointedModel {
        let ws: Vec<String> = (0..=len).map(|i| format!("\"w{i}\"")).collect();
        let es: Vec<String> = (0..len).map(|i| format!("[\"w{i}\",\"w{}\"]", i + 1)).collect();
        pm(&format!(r#"{{"worlds":[{}],"edges":[{}],"point":"w0"}}"#, ws.join(","), es.join(",")))
    }

    fn check(p: &MLPosition, v: &MLVerdict) {
        if let Some(f) = &v.witness {
            assert!(f.size() <= p.k, "{f} too large for {}", p.k);
            assert!(p.a.iter().all(|m| eval_ml(f, m)), "{f} fails on A");
            assert!(p.b.iter().all(|m| !eval_ml(f, m)), "{f} holds on B");
        }
    }

    #[test]
    fn chains_need_depth() {
        // chain of length 1 vs length 2: <>[]F has size 3
        let p = MLPosition::new(3, [chain(1)], [chain(2)]);
        let v = solve(&p).unwrap();
        assert_eq!(v.winner, Player::Spoiler);
        check(&p, &v);
        let p2 = MLPosition::new(2, [chain(1)], [chain(2)]);
        let v2 = solve(&p2).unwrap();
        assert_eq!(v2.winner, Player::Duplicator);
        assert_eq!(v2.reason, Some(WitnessReason::BisimilarPair));
    }

    #[test]
    fn shared_model_is_never_separable() {
        for k in 0..6 {
            let p = MLPosition::new(k, [chain(1), chain(3)], [chain(3)]);
            assert_eq!(solve(&p).unwrap().winner, Player::Duplicator);
        }
    }

    #[test]
    fn disjunction_needed() {
        let p_only = pm(r#"{"worlds":["w"],"valuation":{"p":["w"]},"point":"w"}"#);
        let q_only = pm(r#"{"worlds":["w"],"valuation":{"q":["w"]},"point":"w"}"#);
        let none = pm(r#"{"worlds":["w"],"valuation":{"p":[],"q":[]},"point":"w"}"#);
        let p = MLPosition::new(3, [p_only.clone(), q_only.clone()], [none.clone()]);
        let v = solve(&p).unwrap();
        assert_eq!(v.winner, Player::Spoiler);
        assert_eq!(v.witness.as_ref().unwrap().size(), 3);
        check(&p, &v);
        assert_eq!(solve(&MLPosition::new(2, [p_only, q_only], [none])).unwrap().winner, Player::Duplicator);
    }

    #[test]
    fn budget_is_reported() {
        let p = MLPosition::new(6, [chain(4), chain(2)], [chain(3), chain(5)]);
        let s = MLSolver::for_position(&p, SolverConfig { node_budget: 1, exec: Exec::Sequential });
        assert_eq!(s.solve(&p), Err(GameError::BudgetExceeded(1)));
    }

    #[test]
    fn hitting_sets_are_minimal() {
        let fam: Vec<&[u32]> = vec![&[1, 2], &[2, 3], &[1, 3]];
        assert_eq!(minimal_hitting_sets(&fam), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let fam: Vec<&[u32]> = vec![&[1], &[1, 2]];
        assert_eq!(minimal_hitting_sets(&fam), vec![vec![1]]);
    }
}
