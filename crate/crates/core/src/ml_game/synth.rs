//! Minimal separating formulas by enumerating definable world sets.
//!
//! Works on the raw disjoint union of the models involved, with no
//! bisimulation quotient, so it can serve as a cross-check for the solver.
//! Level `s` holds the world sets first definable by a formula of size `s`;
//! among the formulas producing a set at its first level the one with the
//! lexicographically smallest printed form is kept.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::exec::Exec;
use crate::formulas::{Literal, MLFormula};
use crate::kripke::{KripkeModel, PointedModel};

#[derive(Clone)]
struct Entry {
    set: FixedBitSet,
    formula: MLFormula,
    text: String,
}

pub struct Synthesizer {
    succ: Vec<Vec<usize>>,
    n: usize,
    a_points: Vec<usize>,
    b_points: Vec<usize>,
    levels: Vec<Vec<Entry>>,
    seen: HashMap<FixedBitSet, usize>,
    exec: Exec,
}

impl Synthesizer {
    pub fn new(a: &[PointedModel], b: &[PointedModel], exec: Exec) -> Self {
        let mut models: Vec<Arc<KripkeModel>> = Vec::new();
        let mut offsets = Vec::new();
        let mut n = 0;
        let mut locate = |pm: &PointedModel, models: &mut Vec<Arc<KripkeModel>>, offsets: &mut Vec<usize>| {
            let i = match models.iter().position(|m| **m == *pm.model) {
                Some(i) => i,
                None => {
                    models.push(pm.model.clone());
                    offsets.push(n);
                    n += pm.model.num_worlds();
                    models.len() - 1
                }
            };
            offsets[i] + pm.point as usize
        };
        let a_points: Vec<usize> = a.iter().map(|pm| locate(pm, &mut models, &mut offsets)).collect();
        let b_points: Vec<usize> = b.iter().map(|pm| locate(pm, &mut models, &mut offsets)).collect();
        let mut succ = vec![Vec::new(); n];
        let mut props: std::collections::BTreeMap<String, FixedBitSet> = Default::default();
        for (m, &off) in models.iter().zip(&offsets) {
            for w in m.worlds() {
                succ[off + w as usize] = m.successors(w).iter().map(|&v| off + v as usize).collect();
                for p in m.props_at(w) {
                    props.entry(p.to_string()).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(off + w as usize);
                }
            }
            for p in m.propositions() {
                props.entry(p.to_string()).or_insert_with(|| FixedBitSet::with_capacity(n));
            }
        }
        let mut s = Synthesizer { succ, n, a_points, b_points, levels: vec![Vec::new(), Vec::new()], seen: HashMap::new(), exec };
        let mut full = FixedBitSet::with_capacity(n);
        full.insert_range(..);
        let mut lits = vec![(Literal::Top, full), (Literal::Bot, FixedBitSet::with_capacity(n))];
        for (p, set) in props {
            let mut neg = set.clone();
            neg.toggle_range(..);
            lits.push((Literal::Prop(p.clone()), set));
            lits.push((Literal::NegProp(p), neg));
        }
        let mut level1: Vec<Entry> = Vec::new();
        for (l, set) in lits {
            let text = l.to_string();
            match level1.iter_mut().find(|e| e.set == set) {
                Some(e) if text < e.text => {
                    e.text = text;
                    e.formula = MLFormula::Lit(l);
                }
                Some(_) => {}
                None => level1.push(Entry { set, formula: MLFormula::Lit(l), text }),
            }
        }
        level1.sort_by(|x, y| x.text.cmp(&y.text));
        for e in &level1 {
            s.seen.insert(e.set.clone(), 1);
        }
        s.levels[1] = level1;
        s
    }

    fn separates(&self, set: &FixedBitSet) -> bool {
        self.a_points.iter().all(|&w| set.contains(w)) && self.b_points.iter().all(|&w| !set.contains(w))
    }

    fn dia(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for w in 0..self.n {
            if self.succ[w].iter().any(|&v| s.contains(v)) {
                out.insert(w);
            }
        }
        out
    }

    fn boxed(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for w in 0..self.n {
            if self.succ[w].iter().all(|&v| s.contains(v)) {
                out.insert(w);
            }
        }
        out
    }

    /// Number of world sets definable within the sizes computed so far.
    pub fn definable_sets(&self) -> usize {
        self.seen.len()
    }

    fn build_level(&mut self, s: usize) {
        type Local = HashMap<FixedBitSet, (String, MLFormula)>;
        let offer = |local: &mut Local, seen: &HashMap<FixedBitSet, usize>, set: FixedBitSet, text: String, f: &dyn Fn() -> MLFormula| {
            if seen.contains_key(&set) {
                return;
            }
            match local.get_mut(&set) {
                Some(cur) if text < cur.0 => *cur = (text, f()),
                Some(_) => {}
                None => {
                    local.insert(set, (text, f()));
                }
            }
        };
        let this = &*self;
        // modal extensions of the previous level
        let prev = &this.levels[s - 1];
        let modal: Vec<Local> = this.exec.map(prev, |e| {
            let mut local = Local::new();
            offer(&mut local, &this.seen, this.dia(&e.set), format!("<>{}", e.text), &|| MLFormula::dia(e.formula.clone()));
            offer(&mut local, &this.seen, this.boxed(&e.set), format!("[]{}", e.text), &|| MLFormula::boxed(e.formula.clone()));
            local
        });
        // binary combinations: (s1, i) with s1 <= s2
        let mut outer: Vec<(usize, usize)> = Vec::new();
        for s1 in 1..s.saturating_sub(1) {
            let s2 = s - 1 - s1;
            if s1 > s2 {
                break;
            }
            outer.extend((0..this.levels[s1].len()).map(|i| (s1, i)));
        }
        let binary: Vec<Local> = this.exec.map(&outer, |&(s1, i)| {
            let s2 = s - 1 - s1;
            let x = &this.levels[s1][i];
            let start = if s1 == s2 { i + 1 } else { 0 };
            let mut local = Local::new();
            for y in &this.levels[s2][start..] {
                for conj in [false, true] {
                    let mut set = x.set.clone();
                    if conj {
                        set.intersect_with(&y.set);
                    } else {
                        set.union_with(&y.set);
                    }
                    if this.seen.contains_key(&set) {
                        continue;
                    }
                    let op = if conj { "&" } else { "|" };
                    let t1 = format!("({} {op} {})", x.text, y.text);
                    let t2 = format!("({} {op} {})", y.text, x.text);
                    let (text, first, second) = if t1 <= t2 { (t1, x, y) } else { (t2, y, x) };
                    let make = || {
                        let (f, g) = (first.formula.clone(), second.formula.clone());
                        if conj { MLFormula::and(f, g) } else { MLFormula::or(f, g) }
                    };
                    offer(&mut local, &this.seen, set, text, &make);
                }
            }
            local
        });
        let mut merged = Local::new();
        for local in modal.into_iter().chain(binary) {
            for (set, (text, f)) in local {
                match merged.get_mut(&set) {
                    Some(cur) if text < cur.0 => *cur = (text, f),
                    Some(_) => {}
                    None => {
                        merged.insert(set, (text, f));
                    }
                }
            }
        }
        let mut level: Vec<Entry> = merged.into_iter().map(|(set, (text, formula))| Entry { set, formula, text }).collect();
        level.sort_by(|x, y| x.text.cmp(&y.text));
        for e in &level {
            self.seen.insert(e.set.clone(), s);
        }
        self.levels.push(level);
    }

    /// Smallest separating formula of size at most `k_max` and its size.
    pub fn min_separator(&mut self, k_max: usize) -> Option<(MLFormula, usize)> {
        for s in 1..=k_max {
            while self.levels.len() <= s {
                let next = self.levels.len();
                self.build_level(next);
            }
            if let Some(e) = self.levels[s].iter().find(|e| self.separates(&e.set)) {
                return Some((e.formula.clone(), s));
            }
        }
        None
    }
}

/// Smallest separating formula of size at most `k_max` together with its size.
pub fn synthesize_min(a: &[PointedModel], b: &[PointedModel], k_max: usize) -> Option<(MLFormula, usize)> {
    Synthesizer::new(a, b, Exec::default()).min_separator(k_max)
}
