use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::ml::{box_pre, dia_pre, literal_set, WorldSet};
use super::EvalError;
use crate::formulas::{Fixpoint, MuFormula, NodeId, NodeLabel, SyntaxTree};
use crate::kripke::{KripkeModel, PointedModel};

/// Values of free variables.
pub type Valuation = HashMap<String, WorldSet>;

fn kleene<F>(m: &KripkeModel, kind: Fixpoint, mut step: F) -> Result<WorldSet, EvalError>
where
    F: FnMut(&WorldSet) -> Result<WorldSet, EvalError>,
{
    let mut z = FixedBitSet::with_capacity(m.num_worlds());
    if kind == Fixpoint::Greatest {
        z.insert_range(..);
    }
    loop {
        let next = step(&z)?;
        if next == z {
            return Ok(z);
        }
        z = next;
    }
}

/// Denotation of `f` in `m`, with free variables read from `rho`.
pub fn denote_mu(f: &MuFormula, m: &KripkeModel, rho: &mut Valuation) -> Result<WorldSet, EvalError> {
    Ok(match f {
        MuFormula::Lit(l) => literal_set(m, l),
        MuFormula::Var(x) => rho.get(x).cloned().ok_or_else(|| EvalError::FreeVariable(x.clone()))?,
        MuFormula::Or(a, b) => {
            let mut s = denote_mu(a, m, rho)?;
            s.union_with(&denote_mu(b, m, rho)?);
            s
        }
        MuFormula::And(a, b) => {
            let mut s = denote_mu(a, m, rho)?;
            s.intersect_with(&denote_mu(b, m, rho)?);
            s
        }
        MuFormula::Dia(a) => dia_pre(m, &denote_mu(a, m, rho)?),
        MuFormula::Box(a) => box_pre(m, &denote_mu(a, m, rho)?),
        MuFormula::Mu(x, a) | MuFormula::Nu(x, a) => {
            let kind = if matches!(f, MuFormula::Mu(..)) { Fixpoint::Least } else { Fixpoint::Greatest };
            let saved = rho.remove(x);
            let result = kleene(m, kind, |z| {
                rho.insert(x.clone(), z.clone());
                denote_mu(a, m, rho)
            });
            rho.remove(x);
            if let Some(s) = saved {
                rho.insert(x.clone(), s);
            }
            result?
        }
    })
}

/// Truth of a sentence at a pointed model.
pub fn eval_mu(f: &MuFormula, pm: &PointedModel) -> Result<bool, EvalError> {
    eval_mu_with(f, pm, &Valuation::new())
}

pub fn eval_mu_with(f: &MuFormula, pm: &PointedModel, rho: &Valuation) -> Result<bool, EvalError> {
    let mut rho = rho.clone();
    Ok(denote_mu(f, &pm.model, &mut rho)?.contains(pm.point as usize))
}

/// Successive Kleene iterates `Z_0, Z_1, ...` of a fixed point at the top of
/// `f`, up to and including the fixed point itself.
pub fn fixpoint_iterates(f: &MuFormula, m: &KripkeModel) -> Result<Vec<WorldSet>, EvalError> {
    let (kind, x, body) = match f {
        MuFormula::Mu(x, a) => (Fixpoint::Least, x, a),
        MuFormula::Nu(x, a) => (Fixpoint::Greatest, x, a),
        _ => return Err(EvalError::NotAFixpoint),
    };
    let mut z = FixedBitSet::with_capacity(m.num_worlds());
    if kind == Fixpoint::Greatest {
        z.insert_range(..);
    }
    let mut out = vec![z.clone()];
    let mut rho = Valuation::new();
    loop {
        rho.insert(x.clone(), z.clone());
        let next = denote_mu(body, m, &mut rho)?;
        if next == z {
            return Ok(out);
        }
        out.push(next.clone());
        z = next;
    }
}

/// A vertex of a syntax tree together with a clock for every fixed point
/// strictly above it. Clocks count the remaining unfoldings of a variable.
#[derive(Clone, Debug)]
pub struct ApproximantContext<'t> {
    pub tree: &'t SyntaxTree,
    pub vertex: NodeId,
    pub clocks: BTreeMap<String, u32>,
}

impl<'t> ApproximantContext<'t> {
    pub fn new(tree: &'t SyntaxTree, vertex: NodeId, clocks: BTreeMap<String, u32>) -> Result<Self, EvalError> {
        let above: BTreeSet<String> = tree.fixpoints_above(vertex).into_iter().collect();
        let dom: BTreeSet<String> = clocks.keys().cloned().collect();
        if above != dom {
            return Err(EvalError::ClockDomain { expected: above.into_iter().collect(), got: dom.into_iter().collect() });
        }
        Ok(ApproximantContext { tree, vertex, clocks })
    }
}

/// Truth of the approximant at `ctx` in `pm`.
///
/// Works directly on the tree: a clocked variable with clock 0 is false
/// (least) or true (greatest); with clock `a + 1` evaluation continues at
/// the binder's body with that variable's clock set to `a` and the clocks of
/// the variables bound in between dropped. Fixed points met below the
/// context vertex are evaluated as genuine fixed points.
pub fn approximant_holds(ctx: &ApproximantContext<'_>, pm: &PointedModel) -> Result<bool, EvalError> {
    let mut rho = Valuation::new();
    Ok(approximant_set(ctx.tree, ctx.vertex, &ctx.clocks, &pm.model, &mut rho)?.contains(pm.point as usize))
}

/// Denotation version of [`approximant_holds`].
pub fn approximant_set(
    tree: &SyntaxTree,
    v: NodeId,
    clocks: &BTreeMap<String, u32>,
    m: &KripkeModel,
    rho: &mut Valuation,
) -> Result<WorldSet, EvalError> {
    let ch = |i: usize| tree.children(v)[i];
    Ok(match tree.label(v) {
        NodeLabel::Lit(l) => literal_set(m, l),
        NodeLabel::Or => {
            let mut s = approximant_set(tree, ch(0), clocks, m, rho)?;
            s.union_with(&approximant_set(tree, ch(1), clocks, m, rho)?);
            s
        }
        NodeLabel::And => {
            let mut s = approximant_set(tree, ch(0), clocks, m, rho)?;
            s.intersect_with(&approximant_set(tree, ch(1), clocks, m, rho)?);
            s
        }
        NodeLabel::Dia => dia_pre(m, &approximant_set(tree, ch(0), clocks, m, rho)?),
        NodeLabel::Box => box_pre(m, &approximant_set(tree, ch(0), clocks, m, rho)?),
        NodeLabel::Fix(kind, x) => {
            let body = ch(0);
            // a jump can re-enter this binder while an outer copy is live
            let saved = rho.remove(x);
            let r = kleene(m, *kind, |z| {
                rho.insert(x.clone(), z.clone());
                approximant_set(tree, body, clocks, m, rho)
            });
            rho.remove(x);
            if let Some(s) = saved {
                rho.insert(x.clone(), s);
            }
            r?
        }
        NodeLabel::Var(x) => match clocks.get(x) {
            None => rho.get(x).cloned().ok_or_else(|| EvalError::FreeVariable(x.clone()))?,
            Some(0) => {
                let mut s = FixedBitSet::with_capacity(m.num_worlds());
                if tree.fixpoint_kind(x) == Some(Fixpoint::Greatest) {
                    s.insert_range(..);
                }
                s
            }
            Some(&c) => {
                let target = tree.back(v).expect("bound variable has a back edge");
                let keep = tree.fixpoints_above(target);
                let mut next: BTreeMap<String, u32> =
                    keep.into_iter().filter_map(|y| clocks.get(&y).map(|&cy| (y, cy))).collect();
                next.insert(x.clone(), c - 1);
                approximant_set(tree, target, &next, m, rho)?
            }
        },
    })
}

/// Least `a < bound` such that the approximant at the body of `var`'s binder,
/// with `var`'s clock set to `a`, is true (`want = true`) or false
/// (`want = false`) at `pm`.
pub fn least_stage(
    tree: &SyntaxTree,
    var: &str,
    outer: &BTreeMap<String, u32>,
    pm: &PointedModel,
    want: bool,
    bound: u32,
) -> Result<Option<u32>, EvalError> {
    let binder = tree.binder(var).ok_or_else(|| EvalError::FreeVariable(var.to_string()))?;
    let body = tree.children(binder)[0];
    for a in 0..bound {
        let mut clocks = outer.clone();
        clocks.insert(var.to_string(), a);
        let ctx = ApproximantContext::new(tree, body, clocks)?;
        if approximant_holds(&ctx, pm)? == want {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_mu;
    use crate::kripke::pointed_from_json;

    fn chain2() -> PointedModel {
        pointed_from_json(r#"{"worlds":["w0","w1","w2"],"edges":[["w0","w1"],["w1","w2"]],"valuation":{"p":["w2"]},"point":"w0"}"#).unwrap()
    }

    #[test]
    fn reachability_and_safety() {
        let pm = chain2();
        assert!(eval_mu(&parse_mu("mu X. (p | <>X)").unwrap(), &pm).unwrap());
        assert!(!eval_mu(&parse_mu("nu X. (p & []X)").unwrap(), &pm).unwrap());
        assert!(!eval_mu(&parse_mu("mu X. X").unwrap(), &pm).unwrap());
        assert!(eval_mu(&parse_mu("nu X. X").unwrap(), &pm).unwrap());
        assert!(matches!(eval_mu(&parse_mu("<>Y").unwrap(), &pm), Err(EvalError::FreeVariable(_))));
    }

    #[test]
    fn iterates_grow_one_step_per_round() {
        let pm = chain2();
        let its = fixpoint_iterates(&parse_mu("mu X. (p | <>X)").unwrap(), &pm.model).unwrap();
        let counts: Vec<usize> = its.iter().map(|s| s.count_ones(..)).collect();
        assert_eq!(counts, vec![0, 1, 2, 3]);
    }

    #[test]
    fn stage_of_the_chain_root_is_two() {
        let f = parse_mu("mu X. (p | <>X)").unwrap();
        let t = SyntaxTree::new(&f).unwrap();
        let s = least_stage(&t, "X", &BTreeMap::new(), &chain2(), true, 4).unwrap();
        assert_eq!(s, Some(2));
    }

    #[test]
    fn clock_domain_is_checked() {
        let f = parse_mu("mu X. (p | <>X)").unwrap();
        let t = SyntaxTree::new(&f).unwrap();
        assert!(ApproximantContext::new(&t, 1, BTreeMap::new()).is_err());
        assert!(ApproximantContext::new(&t, 0, BTreeMap::from([("X".to_string(), 1)])).is_err());
        assert!(ApproximantContext::new(&t, 1, BTreeMap::from([("X".to_string(), 1)])).is_ok());
    }
}
