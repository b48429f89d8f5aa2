//! Bisimulation by signature refinement over a disjoint union of models.

use std::collections::HashMap;
use std::sync::Arc;

use crate::exec::Exec;
use crate::kripke::{KripkeModel, PointedModel};

/// Disjoint union of the models behind a collection of pointed models,
/// refined into `n`-bisimulation blocks for every `n` until the partition
/// stabilizes at full bisimilarity.
///
/// Level 0 groups worlds by their true propositions; level `n + 1` splits a
/// level-`n` block by the set of level-`n` blocks reachable in one step.
#[derive(Debug)]
pub struct Universe {
    models: Vec<Arc<KripkeModel>>,
    model_index: HashMap<Arc<KripkeModel>, usize>,
    offsets: Vec<usize>,
    /// `levels[n][world]` is the `n`-bisimulation block of a global world.
    levels: Vec<Vec<u32>>,
    class_succ: Vec<Vec<u32>>,
    class_props: Vec<Vec<String>>,
    class_rep: Vec<usize>,
}

impl Universe {
    pub fn new(pointed: &[PointedModel]) -> Self {
        Self::with_exec(pointed, Exec::default())
    }

    pub fn with_exec(pointed: &[PointedModel], exec: Exec) -> Self {
        let mut models: Vec<Arc<KripkeModel>> = Vec::new();
        let mut model_index = HashMap::new();
        for pm in pointed {
            if !model_index.contains_key(&pm.model) {
                model_index.insert(Arc::clone(&pm.model), models.len());
                models.push(Arc::clone(&pm.model));
            }
        }
        let mut offsets = Vec::with_capacity(models.len());
        let mut total = 0;
        for m in &models {
            offsets.push(total);
            total += m.num_worlds();
        }
        let mut succ: Vec<Vec<usize>> = Vec::with_capacity(total);
        let mut props: Vec<Vec<String>> = Vec::with_capacity(total);
        for (m, &off) in models.iter().zip(&offsets) {
            for w in m.worlds() {
                succ.push(m.successors(w).iter().map(|&b| off + b as usize).collect());
                props.push(m.props_at(w).into_iter().map(str::to_string).collect());
            }
        }
        let level0 = renumber(props.clone());
        let mut levels = vec![level0];
        loop {
            let prev = levels.last().unwrap();
            let sigs: Vec<(u32, Vec<u32>)> = exec.map_range(total, |w| {
                let mut s: Vec<u32> = succ[w].iter().map(|&b| prev[b]).collect();
                s.sort_unstable();
                s.dedup();
                (prev[w], s)
            });
            let next = renumber(sigs);
            let stable = block_count(&next) == block_count(prev);
            levels.push(next);
            if stable {
                break;
            }
        }
        let classes = levels.last().unwrap();
        let n_classes = block_count(classes);
        let mut class_rep = vec![usize::MAX; n_classes];
        for w in 0..total {
            let c = classes[w] as usize;
            if class_rep[c] == usize::MAX {
                class_rep[c] = w;
            }
        }
        let class_succ = class_rep
            .iter()
            .map(|&w| {
                let mut s: Vec<u32> = succ[w].iter().map(|&b| classes[b]).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let class_props = class_rep.iter().map(|&w| props[w].clone()).collect();
        Universe { models, model_index, offsets, levels, class_succ, class_props, class_rep }
    }

    pub fn num_worlds(&self) -> usize {
        self.levels[0].len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_succ.len()
    }

    /// Global index of a pointed model's point. Panics if its model was not
    /// part of the universe.
    pub fn world_of(&self, pm: &PointedModel) -> usize {
        self.offsets[self.model_index[&pm.model]] + pm.point as usize
    }

    pub fn contains(&self, pm: &PointedModel) -> bool {
        self.model_index.contains_key(&pm.model)
    }

    pub fn class_of(&self, pm: &PointedModel) -> u32 {
        self.levels.last().unwrap()[self.world_of(pm)]
    }

    pub fn class_successors(&self, c: u32) -> &[u32] {
        &self.class_succ[c as usize]
    }

    pub fn class_props(&self, c: u32) -> &[String] {
        &self.class_props[c as usize]
    }

    pub fn class_holds(&self, c: u32, p: &str) -> bool {
        self.class_props[c as usize].iter().any(|q| q == p)
    }

    /// A pointed model of the given class.
    pub fn representative(&self, c: u32) -> PointedModel {
        let w = self.class_rep[c as usize];
        let mi = self.offsets.partition_point(|&o| o <= w) - 1;
        PointedModel::at(Arc::clone(&self.models[mi]), (w - self.offsets[mi]) as u32)
    }

    /// All propositions occurring in any model, sorted.
    pub fn propositions(&self) -> Vec<String> {
        let mut ps: Vec<String> = self.models.iter().flat_map(|m| m.propositions().map(str::to_string)).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Number of refinement rounds after which the partition is stable.
    pub fn stable_rank(&self) -> usize {
        self.levels.len() - 1
    }

    fn level(&self, n: usize) -> &[u32] {
        &self.levels[n.min(self.levels.len() - 1)]
    }

    pub fn n_bisimilar(&self, a: &PointedModel, b: &PointedModel, n: usize) -> bool {
        let lv = self.level(n);
        lv[self.world_of(a)] == lv[self.world_of(b)]
    }

    pub fn bisimilar(&self, a: &PointedModel, b: &PointedModel) -> bool {
        self.class_of(a) == self.class_of(b)
    }

    /// `n`-bisimulation block of a class.
    pub fn class_block(&self, c: u32, n: usize) -> u32 {
        self.level(n)[self.class_rep[c as usize]]
    }

    pub fn classes_n_bisimilar(&self, c: u32, d: u32, n: usize) -> bool {
        self.class_block(c, n) == self.class_block(d, n)
    }
}

fn renumber<K: Ord + Clone>(keys: Vec<K>) -> Vec<u32> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).unwrap() as u32).collect()
}

fn block_count(level: &[u32]) -> usize {
    level.iter().max().map_or(0, |&m| m as usize + 1)
}

pub fn n_bisimilar(a: &PointedModel, b: &PointedModel, n: usize) -> bool {
    Universe::new(&[a.clone(), b.clone()]).n_bisimilar(a, b, n)
}

pub fn bisimilar(a: &PointedModel, b: &PointedModel) -> bool {
    Universe::new(&[a.clone(), b.clone()]).bisimilar(a, b)
}

/// Partition of the indices of `pointed` into bisimulation classes, in order
/// of first appearance.
pub fn bisim_quotient(pointed: &[PointedModel]) -> Vec<Vec<usize>> {
    let u = Universe::new(pointed);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<u32, usize> = HashMap::new();
    for (i, pm) in pointed.iter().enumerate() {
        let c = u.class_of(pm);
        let j = *slot.entry(c).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[j].push(i);
    }
    out
}

/// Whether all successors of `pm` are pairwise `n`-bisimilar.
pub fn in_class_an(pm: &PointedModel, n: usize) -> bool {
    let succ = pm.successors();
    let u = Universe::new(std::slice::from_ref(pm));
    succ.iter().all(|a| succ.iter().all(|b| u.n_bisimilar(a, b, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::pointed_from_json;

    fn pm(s: &str) -> PointedModel {
        pointed_from_json(s).unwrap()
    }

    #[test]
    fn chains_of_different_length() {
        let c1 = pm(r#"{"worlds":["a","b"],"edges":[["a","b"]],"point":"a"}"#);
        let c2 = pm(r#"{"worlds":["a","b","c"],"edges":[["a","b"],["b","c"]],"point":"a"}"#);
        assert!(n_bisimilar(&c1, &c2, 1));
        assert!(!n_bisimilar(&c1, &c2, 2));
        assert!(!bisimilar(&c1, &c2));
    }

    #[test]
    fn loop_and_unravelling_agree() {
        let l = pm(r#"{"worlds":["a"],"edges":[["a","a"]],"point":"a"}"#);
        let l2 = pm(r#"{"worlds":["a","b"],"edges":[["a","b"],["b","a"]],"point":"a"}"#);
        assert!(bisimilar(&l, &l2));
        assert_eq!(bisim_quotient(&[l.clone(), l2.clone(), l]), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn propositions_split_level_zero() {
        let p = pm(r#"{"worlds":["a"],"valuation":{"p":["a"]},"point":"a"}"#);
        let q = pm(r#"{"worlds":["a"],"point":"a"}"#);
        assert!(!n_bisimilar(&p, &q, 0));
    }

    #[test]
    fn class_an_membership() {
        let even = pm(r#"{"worlds":["r","a","b"],"edges":[["r","a"],["r","b"]],"point":"r"}"#);
        let uneven = pm(r#"{"worlds":["r","a","b","c"],"edges":[["r","a"],["r","b"],["b","c"]],"point":"r"}"#);
        assert!(in_class_an(&even, 5));
        assert!(in_class_an(&uneven, 0));
        assert!(!in_class_an(&uneven, 1));
    }
}
