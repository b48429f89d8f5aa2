//! Generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

use fsg::formulas::{Fixpoint, Literal, MLFormula, MuFormula};
use fsg::kripke::{KripkeModel, PointedModel};

pub const PROPS: [&str; 2] = ["p", "q"];

fn name(i: usize) -> String {
    format!("w{i}")
}

/// A model from an adjacency matrix and per-world proposition bits.
pub fn model_from(n: usize, edges: &[(usize, usize)], val: &[Vec<bool>], props: &[&str]) -> KripkeModel {
    let worlds: Vec<String> = (0..n).map(name).collect();
    let edges = edges.iter().map(|&(a, b)| (name(a), name(b)));
    let valuation = props
        .iter()
        .enumerate()
        .map(|(j, p)| (p.to_string(), (0..n).filter(|&w| val[w][j]).map(name).collect::<Vec<_>>()));
    KripkeModel::new(worlds, edges, valuation).expect("generated model is well formed")
}

/// Random model with up to `max_worlds` worlds; with `acyclic` every edge
/// goes from a lower to a higher world.
pub fn random_model(rng: &mut StdRng, max_worlds: usize, props: &[&str], edge_prob: f64, acyclic: bool) -> KripkeModel {
    let n = rng.gen_range(1..=max_worlds);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if (!acyclic || a < b) && rng.gen_bool(edge_prob) {
                edges.push((a, b));
            }
        }
    }
    let val: Vec<Vec<bool>> = (0..n).map(|_| props.iter().map(|_| rng.gen_bool(0.5)).collect()).collect();
    model_from(n, &edges, &val, props)
}

pub fn random_pointed(rng: &mut StdRng, max_worlds: usize, props: &[&str], acyclic: bool) -> PointedModel {
    let m = Arc::new(random_model(rng, max_worlds, props, 0.4, acyclic));
    let w = rng.gen_range(0..m.num_worlds()) as u32;
    PointedModel::at(m, w)
}

/// Every pointed model with at most `max_worlds` worlds over `props`, one
/// per labelled graph and point.
pub fn all_pointed(max_worlds: usize, props: &[&str]) -> Vec<PointedModel> {
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let bits = n * props.len();
        for emask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| emask >> i & 1 == 1).map(|(_, &e)| e).collect();
            for vmask in 0u64..(1 << bits) {
                let val: Vec<Vec<bool>> =
                    (0..n).map(|w| (0..props.len()).map(|j| vmask >> (w * props.len() + j) & 1 == 1).collect()).collect();
                let m = Arc::new(model_from(n, &edges, &val, props));
                for w in 0..n {
                    out.push(PointedModel::at(Arc::clone(&m), w as u32));
                }
            }
        }
    }
    out
}

pub fn random_literal(rng: &mut StdRng, props: &[&str]) -> Literal {
    match rng.gen_range(0..4) {
        0 => Literal::Top,
        1 => Literal::Bot,
        2 => Literal::Prop(props[rng.gen_range(0..props.len())].to_string()),
        _ => Literal::NegProp(props[rng.gen_range(0..props.len())].to_string()),
    }
}

pub fn random_ml(rng: &mut StdRng, depth: usize, props: &[&str]) -> MLFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        return MLFormula::Lit(random_literal(rng, props));
    }
    match rng.gen_range(0..4) {
        0 => MLFormula::or(random_ml(rng, depth - 1, props), random_ml(rng, depth - 1, props)),
        1 => MLFormula::and(random_ml(rng, depth - 1, props), random_ml(rng, depth - 1, props)),
        2 => MLFormula::dia(random_ml(rng, depth - 1, props)),
        _ => MLFormula::boxed(random_ml(rng, depth - 1, props)),
    }
}

/// Random sentence with pairwise distinct binders `X0, X1, ...`.
pub fn random_sentence(rng: &mut StdRng, depth: usize, props: &[&str]) -> MuFormula {
    fn go(rng: &mut StdRng, depth: usize, props: &[&str], scope: &mut Vec<String>, next: &mut usize) -> MuFormula {
        if depth == 0 || rng.gen_bool(0.2) {
            if !scope.is_empty() && rng.gen_bool(0.5) {
                return MuFormula::var(&scope[rng.gen_range(0..scope.len())]);
            }
            return MuFormula::Lit(random_literal(rng, props));
        }
        match rng.gen_range(0..6) {
            0 => MuFormula::or(go(rng, depth - 1, props, scope, next), go(rng, depth - 1, props, scope, next)),
            1 => MuFormula::and(go(rng, depth - 1, props, scope, next), go(rng, depth - 1, props, scope, next)),
            2 => MuFormula::dia(go(rng, depth - 1, props, scope, next)),
            3 => MuFormula::boxed(go(rng, depth - 1, props, scope, next)),
            k => {
                let x = format!("X{next}");
                *next += 1;
                scope.push(x.clone());
                let body = go(rng, depth - 1, props, scope, next);
                scope.pop();
                let kind = if k == 4 { Fixpoint::Least } else { Fixpoint::Greatest };
                MuFormula::fixpoint(kind, &x, body)
            }
        }
    }
    go(rng, depth, props, &mut Vec::new(), &mut 0)
}

/// Random sentence whose top constructor is a fixed point.
pub fn random_fixpoint_sentence(rng: &mut StdRng, depth: usize, props: &[&str]) -> MuFormula {
    loop {
        let f = random_sentence(rng, depth, props);
        if matches!(f, MuFormula::Mu(..) | MuFormula::Nu(..)) && f.free_vars().is_empty() {
            return f;
        }
        let kind = if rng.gen_bool(0.5) { Fixpoint::Least } else { Fixpoint::Greatest };
        // wrap: the new binder may be referenced nowhere, which is fine
        let wrapped = MuFormula::fixpoint(kind, "Z", f);
        if wrapped.has_distinct_binders() {
            return wrapped;
        }
    }
}

pub fn arb_model(max_worlds: usize) -> impl Strategy<Value = PointedModel> {
    (1..=max_worlds)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * n),
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), PROPS.len()), n),
                0..n,
            )
        })
        .prop_map(|(n, adj, val, point)| {
            let edges: Vec<(usize, usize)> = (0..n * n).filter(|&i| adj[i]).map(|i| (i / n, i % n)).collect();
            PointedModel::at(Arc::new(model_from(n, &edges, &val, &PROPS)), point as u32)
        })
}

pub fn arb_literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        Just(Literal::Top),
        Just(Literal::Bot),
        proptest::sample::select(PROPS.to_vec()).prop_map(|p| Literal::Prop(p.to_string())),
        proptest::sample::select(PROPS.to_vec()).prop_map(|p| Literal::NegProp(p.to_string())),
    ]
}

pub fn arb_ml() -> impl Strategy<Value = MLFormula> {
    arb_literal().prop_map(MLFormula::Lit).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MLFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MLFormula::and(a, b)),
            inner.clone().prop_map(MLFormula::dia),
            inner.prop_map(MLFormula::boxed),
        ]
    })
}
