//! Left and right collections of a position: the pointed models a formula
//! built along the current tree would have to accept or reject.
//!
//! Only defined while no modal label has been placed, since before that
//! every model in the tree is still a copy of a starting model.

use std::collections::BTreeSet;

use super::position::{ClockedSet, MuPosition, VertexId};
use super::GameError;
use crate::formulas::{Fixpoint, NodeLabel};
use crate::kripke::{ClockedModel, PointedModel};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Suitability {
    /// Keep every model.
    #[default]
    Any,
    /// Keep models whose opposing clocks are at least the model depth.
    AtLeastDepth,
    /// Keep models whose opposing clocks exceed the model depth.
    AboveDepth,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Pointed models in the left collection of vertex `s`.
pub fn left_collection(p: &MuPosition, s: VertexId, filter: Suitability) -> Result<BTreeSet<PointedModel>, GameError> {
    collection(p, s, Side::Left, filter)
}

/// Pointed models in the right collection of vertex `s`.
pub fn right_collection(p: &MuPosition, s: VertexId, filter: Suitability) -> Result<BTreeSet<PointedModel>, GameError> {
    collection(p, s, Side::Right, filter)
}

/// Whether collections are defined at `p`: no modal label anywhere and no
/// literal at the current vertex.
pub fn collections_defined(p: &MuPosition) -> bool {
    !p.vertices.iter().any(|x| matches!(x.label, Some(NodeLabel::Dia | NodeLabel::Box)))
        && !matches!(p.cur().label, Some(NodeLabel::Lit(_)))
}

fn collection(p: &MuPosition, s: VertexId, side: Side, filter: Suitability) -> Result<BTreeSet<PointedModel>, GameError> {
    if !collections_defined(p) {
        return Err(GameError::Precondition("collections need a position without modal labels, not at a literal".into()));
    }
    if s >= p.vertices.len() {
        return Err(GameError::Precondition(format!("no vertex {s}")));
    }
    collect_at(p, s, side, filter)
}

/// Whether `m`, sitting at `s` on the given side, keeps its opposing clocks
/// high enough: greatest-fixed-point clocks for left models, least ones for
/// right models.
pub fn suitable(p: &MuPosition, s: VertexId, side: Side, m: &ClockedModel, filter: Suitability) -> Result<bool, GameError> {
    if filter == Suitability::Any {
        return Ok(true);
    }
    let depth = m.pointed.depth().map_err(|e| GameError::Precondition(format!("suitability needs finite trees: {e}")))? as u32;
    let opposing = if side == Side::Left { Fixpoint::Greatest } else { Fixpoint::Least };
    for (x, &c) in &m.clocks {
        if p.var_kind(s, x) == Some(opposing) {
            let ok = if filter == Suitability::AboveDepth { c > depth } else { c >= depth };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn points(p: &MuPosition, s: VertexId, side: Side, set: &ClockedSet, new_only: bool, filter: Suitability) -> Result<BTreeSet<PointedModel>, GameError> {
    let mut out = BTreeSet::new();
    for m in set.iter().filter(|m| !new_only || m.is_new()) {
        if suitable(p, s, side, m, filter)? {
            out.insert(m.pointed.clone());
        }
    }
    Ok(out)
}

fn collect_at(p: &MuPosition, s: VertexId, side: Side, filter: Suitability) -> Result<BTreeSet<PointedModel>, GameError> {
    let x = p.vertex(s);
    let here = if side == Side::Left { &x.left } else { &x.right };
    let (join, meet) = if side == Side::Left { (NodeLabel::Or, NodeLabel::And) } else { (NodeLabel::And, NodeLabel::Or) };
    // variables of the kind that lets the side loop forever keep their models
    let looping = if side == Side::Left { Fixpoint::Greatest } else { Fixpoint::Least };
    match &x.label {
        None => points(p, s, side, here, false, filter),
        Some(NodeLabel::Var(v)) => {
            let kind = p.var_kind(s, v).ok_or_else(|| GameError::Invariant(format!("{v} unbound at vertex {s}")))?;
            if kind == looping {
                points(p, s, side, here, false, filter)
            } else {
                Ok(BTreeSet::new())
            }
        }
        Some(NodeLabel::Fix(..)) => {
            let mut out = points(p, s, side, here, true, filter)?;
            out.extend(collect_at(p, x.children[0], side, filter)?);
            Ok(out)
        }
        Some(l) if *l == join => {
            let mut out = points(p, s, side, here, true, filter)?;
            for &c in &x.children {
                out.extend(collect_at(p, c, side, filter)?);
            }
            Ok(out)
        }
        Some(l) if *l == meet => {
            let mut out = points(p, s, side, here, true, filter)?;
            let first = collect_at(p, x.children[0], side, filter)?;
            let second = collect_at(p, x.children[1], side, filter)?;
            out.extend(first.intersection(&second).cloned());
            Ok(out)
        }
        Some(l) => Err(GameError::Invariant(format!("unexpected label {l} at vertex {s}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Branch;
    use crate::kripke::pointed_from_json;
    use crate::mu_game::{apply_initial, apply_mu, d_responses, initial_position, MuMove, MuResponse, MuStep, ResponseMode};

    fn leaf(p: &str) -> PointedModel {
        pointed_from_json(&format!(r#"{{"worlds":["a"],"valuation":{{"{p}":["a"]}},"point":"a"}}"#)).unwrap()
    }

    fn cont(s: MuStep) -> MuPosition {
        match s {
            MuStep::Continue(p) => p,
            MuStep::End(o) => panic!("{o:?}"),
        }
    }

    #[test]
    fn split_by_disjunction() {
        let (p, q, r) = (leaf("p"), leaf("q"), leaf("r"));
        let pos = initial_position(&[p.clone(), q.clone()], &[r.clone()], 5);
        let pos = apply_initial(&pos, &d_responses(&pos, None, ResponseMode::Dominant).unwrap()[0]).unwrap();
        assert_eq!(left_collection(&pos, 0, Suitability::Any).unwrap(), [p.clone(), q.clone()].into_iter().collect());
        let mut a = pos.left_new(0).into_iter();
        let (ma, mb) = (a.next().unwrap(), a.next().unwrap());
        let or = MuMove::Or { left1: [ma].into_iter().collect(), left2: [mb].into_iter().collect(), split: Some((1, 3)) };
        let next = cont(apply_mu(&pos, &or, &MuResponse::Branch(Branch::First)).unwrap());
        // the root is old now; the two leaves hold one left model each
        assert_eq!(left_collection(&next, 0, Suitability::Any).unwrap(), [p, q].into_iter().collect());
        // r sits at both leaves, so it survives the meet-free join
        assert_eq!(right_collection(&next, 0, Suitability::Any).unwrap(), [r].into_iter().collect());
    }

    #[test]
    fn least_variables_drop_left_models() {
        let p = leaf("p");
        let pos = initial_position(&[p.clone()], &[], 4);
        let pos = apply_initial(&pos, &d_responses(&pos, None, ResponseMode::Dominant).unwrap()[0]).unwrap();
        let a = pos.left_new(0).into_iter().next().unwrap();
        let bind = MuMove::Bind { kind: Fixpoint::Least, var: "X".into(), clocks: [(a, 0)].into_iter().collect() };
        let next = cont(apply_mu(&pos, &bind, &MuResponse::Clocks(Default::default())).unwrap());
        let stay = left_collection(&next, 0, Suitability::Any).unwrap();
        assert_eq!(stay, [p.clone()].into_iter().collect());
        // a jump with the clock at 0 ends the play, so plant the variable label by hand
        let mut looped = next.clone();
        looped.vertices[next.current].label = Some(NodeLabel::Var("X".into()));
        looped.vertices[next.current].back = Some(next.current);
        assert!(left_collection(&looped, 0, Suitability::Any).unwrap().is_empty());
        assert_eq!(right_collection(&looped, 0, Suitability::Any).unwrap(), BTreeSet::new());
    }

    #[test]
    fn depth_filter_uses_opposing_clocks() {
        let chain = pointed_from_json(r#"{"worlds":["a","b","c"],"edges":[["a","b"],["b","c"]],"point":"a"}"#).unwrap();
        let pos = initial_position(&[chain.clone()], &[], 4);
        let pos = apply_initial(&pos, &d_responses(&pos, None, ResponseMode::Dominant).unwrap()[0]).unwrap();
        let a = pos.left_new(0).into_iter().next().unwrap();
        let bind = |c| {
            let m = MuMove::Bind { kind: Fixpoint::Greatest, var: "Y".into(), clocks: Default::default() };
            cont(apply_mu(&pos, &m, &MuResponse::Clocks([(a.clone(), c)].into_iter().collect())).unwrap())
        };
        let low = bind(1);
        let exact = bind(2);
        let high = bind(3);
        assert!(left_collection(&low, 0, Suitability::AtLeastDepth).unwrap().is_empty());
        assert_eq!(left_collection(&exact, 0, Suitability::AtLeastDepth).unwrap().len(), 1);
        assert!(left_collection(&exact, 0, Suitability::AboveDepth).unwrap().is_empty());
        assert_eq!(left_collection(&high, 0, Suitability::AboveDepth).unwrap().len(), 1);
        assert_eq!(left_collection(&low, 0, Suitability::Any).unwrap().len(), 1);
    }

    #[test]
    fn refused_after_modal_moves() {
        let chain = pointed_from_json(r#"{"worlds":["a","b"],"edges":[["a","b"]],"point":"a"}"#).unwrap();
        let pos = initial_position(&[chain], &[], 3);
        let pos = apply_initial(&pos, &d_responses(&pos, None, ResponseMode::Dominant).unwrap()[0]).unwrap();
        let a = pos.left_new(0).into_iter().next().unwrap();
        let s = a.successors().remove(0);
        let dia = MuMove::Dia([(a, s.clone())].into_iter().collect());
        let next = cont(apply_mu(&pos, &dia, &MuResponse::Subsets { left: [s].into_iter().collect(), right: Default::default() }).unwrap());
        assert!(matches!(left_collection(&next, 0, Suitability::Any), Err(GameError::Precondition(_))));
    }
}
