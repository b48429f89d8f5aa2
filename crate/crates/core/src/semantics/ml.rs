use fixedbitset::FixedBitSet;

use crate::formulas::{Dim, Literal, ML2Formula, MLFormula};
use crate::kripke::{KripkeModel, PointedModel, WorldId};

pub type WorldSet = FixedBitSet;

pub(crate) fn literal_set(m: &KripkeModel, l: &Literal) -> WorldSet {
    let n = m.num_worlds();
    let mut s = FixedBitSet::with_capacity(n);
    match l {
        Literal::Top => s.insert_range(..),
        Literal::Bot => {}
        Literal::Prop(p) | Literal::NegProp(p) => {
            if let Some(ws) = m.valuation().get(p) {
                for &w in ws {
                    s.insert(w as usize);
                }
            }
            if matches!(l, Literal::NegProp(_)) {
                s.toggle_range(..);
            }
        }
    }
    s
}

/// Worlds with some successor in `s`.
pub fn dia_pre(m: &KripkeModel, s: &WorldSet) -> WorldSet {
    let mut out = FixedBitSet::with_capacity(m.num_worlds());
    for w in m.worlds() {
        if m.successors(w).iter().any(|&b| s.contains(b as usize)) {
            out.insert(w as usize);
        }
    }
    out
}

/// Worlds all of whose successors are in `s`.
pub fn box_pre(m: &KripkeModel, s: &WorldSet) -> WorldSet {
    let mut out = FixedBitSet::with_capacity(m.num_worlds());
    for w in m.worlds() {
        if m.successors(w).iter().all(|&b| s.contains(b as usize)) {
            out.insert(w as usize);
        }
    }
    out
}

/// The set of worlds of `m` satisfying `f`.
pub fn denote_ml(f: &MLFormula, m: &KripkeModel) -> WorldSet {
    match f {
        MLFormula::Lit(l) => literal_set(m, l),
        MLFormula::Or(a, b) => {
            let mut s = denote_ml(a, m);
            s.union_with(&denote_ml(b, m));
            s
        }
        MLFormula::And(a, b) => {
            let mut s = denote_ml(a, m);
            s.intersect_with(&denote_ml(b, m));
            s
        }
        MLFormula::Dia(a) => dia_pre(m, &denote_ml(a, m)),
        MLFormula::Box(a) => box_pre(m, &denote_ml(a, m)),
    }
}

pub fn eval_ml(f: &MLFormula, pm: &PointedModel) -> bool {
    denote_ml(f, &pm.model).contains(pm.point as usize)
}

/// Pairs `(u, v)` encoded as `u * n + v`.
fn denote_ml2(f: &ML2Formula, m: &KripkeModel) -> FixedBitSet {
    let n = m.num_worlds();
    let idx = |u: WorldId, v: WorldId| u as usize * n + v as usize;
    match f {
        ML2Formula::Lit(l) => {
            // literals are read at the first coordinate
            let base = literal_set(m, l);
            let mut s = FixedBitSet::with_capacity(n * n);
            for u in m.worlds() {
                if base.contains(u as usize) {
                    for v in m.worlds() {
                        s.insert(idx(u, v));
                    }
                }
            }
            s
        }
        ML2Formula::Or(a, b) => {
            let mut s = denote_ml2(a, m);
            s.union_with(&denote_ml2(b, m));
            s
        }
        ML2Formula::And(a, b) => {
            let mut s = denote_ml2(a, m);
            s.intersect_with(&denote_ml2(b, m));
            s
        }
        ML2Formula::Dia(d, a) | ML2Formula::Box(d, a) => {
            let inner = denote_ml2(a, m);
            let existential = matches!(f, ML2Formula::Dia(..));
            let mut s = FixedBitSet::with_capacity(n * n);
            for u in m.worlds() {
                for v in m.worlds() {
                    let moves = match d {
                        Dim::One => m.successors(u),
                        Dim::Two => m.successors(v),
                    };
                    let hit = |w: &WorldId| match d {
                        Dim::One => inner.contains(idx(*w, v)),
                        Dim::Two => inner.contains(idx(u, *w)),
                    };
                    let ok = if existential { moves.iter().any(hit) } else { moves.iter().all(hit) };
                    if ok {
                        s.insert(idx(u, v));
                    }
                }
            }
            s
        }
    }
}

/// Truth at `(u, v)` in the two-dimensional model using the accessibility
/// relation of `m` in both coordinates.
pub fn eval_ml2(f: &ML2Formula, m: &KripkeModel, u: WorldId, v: WorldId) -> bool {
    denote_ml2(f, m).contains(u as usize * m.num_worlds() + v as usize)
}

/// Truth on the diagonal `(w, w)`.
pub fn eval_ml2_diagonal(f: &ML2Formula, pm: &PointedModel) -> bool {
    eval_ml2(f, &pm.model, pm.point, pm.point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{build_zeta, parse_ml, parse_ml2};
    use crate::kripke::pointed_from_json;

    #[test]
    fn box_is_vacuous_at_dead_ends() {
        let pm = pointed_from_json(r#"{"worlds":["a","b"],"edges":[["a","b"]],"point":"b"}"#).unwrap();
        assert!(eval_ml(&parse_ml("[]F").unwrap(), &pm));
        assert!(!eval_ml(&parse_ml("<>T").unwrap(), &pm));
    }

    #[test]
    fn ml2_coordinates_move_independently() {
        let m = pointed_from_json(r#"{"worlds":["a","b","c"],"edges":[["a","b"]],"point":"a"}"#).unwrap();
        let (a, c) = (m.model.world("a").unwrap(), m.model.world("c").unwrap());
        assert!(eval_ml2(&parse_ml2("<1>T").unwrap(), &m.model, a, c));
        assert!(!eval_ml2(&parse_ml2("<2>T").unwrap(), &m.model, a, c));
    }

    #[test]
    fn zeta_one_on_two_branches() {
        // two successors of different depth are not 1-bisimilar
        let uneven = pointed_from_json(r#"{"worlds":["r","a","b","c"],"edges":[["r","a"],["r","b"],["b","c"]],"point":"r"}"#).unwrap();
        let even = pointed_from_json(r#"{"worlds":["r","a","b"],"edges":[["r","a"],["r","b"]],"point":"r"}"#).unwrap();
        let z = build_zeta(1).unwrap();
        assert!(!eval_ml2_diagonal(&z, &uneven));
        assert!(eval_ml2_diagonal(&z, &even));
    }
}
