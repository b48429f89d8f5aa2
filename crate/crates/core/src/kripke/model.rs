use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::hfset::{self, HFSet};
use super::ModelError;

pub type WorldId = u32;

/// Prefix reserved for roots introduced by [`join`]. Set encodings never
/// start with it.
pub const ROOT_PREFIX: char = '^';

/// A finite Kripke model with named worlds.
///
/// Worlds are kept sorted by name, so two models built from the same data in
/// any order are equal, hash equally and order the same way.
#[derive(Clone)]
pub struct KripkeModel {
    names: Vec<String>,
    index: HashMap<String, WorldId>,
    succ: Vec<Vec<WorldId>>,
    valuation: BTreeMap<String, Vec<WorldId>>,
    fingerprint: u64,
}

impl KripkeModel {
    pub fn new<W, E, V, S>(worlds: W, edges: E, valuation: V) -> Result<Self, ModelError>
    where
        W: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        V: IntoIterator<Item = (S, Vec<S>)>,
        S: AsRef<str>,
    {
        let mut names: Vec<String> = worlds.into_iter().map(|w| w.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|p| p[0] == p[1]) {
            return Err(ModelError::DuplicateWorld(w[0].clone()));
        }
        let index: HashMap<String, WorldId> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i as WorldId)).collect();
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| ModelError::UnknownWorld(n.to_string()));
        let mut succ = vec![Vec::new(); names.len()];
        for (a, b) in edges {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            succ[a as usize].push(b);
        }
        let mut val: BTreeMap<String, Vec<WorldId>> = BTreeMap::new();
        for (p, ws) in valuation {
            let p = p.as_ref();
            if p.is_empty() || !p.chars().next().unwrap().is_ascii_lowercase() {
                return Err(ModelError::BadProposition(p.to_string()));
            }
            let entry = val.entry(p.to_string()).or_default();
            for w in ws {
                entry.push(lookup(w.as_ref())?);
            }
        }
        Ok(Self::assemble(names, index, succ, val))
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, WorldId>,
        mut succ: Vec<Vec<WorldId>>,
        mut valuation: BTreeMap<String, Vec<WorldId>>,
    ) -> Self {
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        for ws in valuation.values_mut() {
            ws.sort_unstable();
            ws.dedup();
        }
        valuation.retain(|_, ws| !ws.is_empty());
        let mut h = DefaultHasher::new();
        names.hash(&mut h);
        succ.hash(&mut h);
        valuation.hash(&mut h);
        let fingerprint = h.finish();
        KripkeModel { names, index, succ, valuation, fingerprint }
    }

    pub fn num_worlds(&self) -> usize {
        self.names.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = WorldId> {
        0..self.names.len() as WorldId
    }

    pub fn name(&self, w: WorldId) -> &str {
        &self.names[w as usize]
    }

    pub fn world(&self, name: &str) -> Option<WorldId> {
        self.index.get(name).copied()
    }

    pub fn successors(&self, w: WorldId) -> &[WorldId] {
        &self.succ[w as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.succ.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a as WorldId, b)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Propositions true somewhere in the model.
    pub fn propositions(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    pub fn valuation(&self) -> &BTreeMap<String, Vec<WorldId>> {
        &self.valuation
    }

    pub fn holds(&self, p: &str, w: WorldId) -> bool {
        self.valuation.get(p).is_some_and(|ws| ws.binary_search(&w).is_ok())
    }

    pub fn props_at(&self, w: WorldId) -> Vec<&str> {
        self.valuation
            .iter()
            .filter(|(_, ws)| ws.binary_search(&w).is_ok())
            .map(|(p, _)| p.as_str())
            .collect()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Worlds reachable from `root` (including it), in breadth-first order.
    pub fn reachable(&self, root: WorldId) -> Vec<WorldId> {
        let mut seen = vec![false; self.names.len()];
        let mut order = vec![root];
        seen[root as usize] = true;
        let mut i = 0;
        while i < order.len() {
            for &b in self.successors(order[i]) {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    order.push(b);
                }
            }
            i += 1;
        }
        order
    }

    /// Restriction to the worlds reachable from `root`.
    pub fn generated_submodel(&self, root: WorldId) -> KripkeModel {
        let mut keep = self.reachable(root);
        keep.sort_unstable();
        let remap: HashMap<WorldId, WorldId> =
            keep.iter().enumerate().map(|(i, &w)| (w, i as WorldId)).collect();
        let names: Vec<String> = keep.iter().map(|&w| self.names[w as usize].clone()).collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i as WorldId)).collect();
        let succ = keep
            .iter()
            .map(|&w| self.successors(w).iter().map(|b| remap[b]).collect())
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(p, ws)| (p.clone(), ws.iter().filter_map(|w| remap.get(w).copied()).collect()))
            .collect();
        Self::assemble(names, index, succ, valuation)
    }
}

impl PartialEq for KripkeModel {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && self.names == other.names
            && self.succ == other.succ
            && self.valuation == other.valuation
    }
}

impl Eq for KripkeModel {}

impl Hash for KripkeModel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

impl PartialOrd for KripkeModel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KripkeModel {
    fn cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        (&self.names, &self.succ, &self.valuation).cmp(&(&other.names, &other.succ, &other.valuation))
    }
}

impl fmt::Debug for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(&str, &str)> = self.edges().map(|(a, b)| (self.name(a), self.name(b))).collect();
        f.debug_struct("KripkeModel")
            .field("worlds", &self.names)
            .field("edges", &edges)
            .field("valuation", &self.valuation)
            .finish()
    }
}

/// A model together with a distinguished world.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedModel {
    pub model: Arc<KripkeModel>,
    pub point: WorldId,
}

impl PointedModel {
    pub fn new(model: Arc<KripkeModel>, point: &str) -> Result<Self, ModelError> {
        let point = model.world(point).ok_or_else(|| ModelError::UnknownWorld(point.to_string()))?;
        Ok(PointedModel { model, point })
    }

    pub fn at(model: Arc<KripkeModel>, point: WorldId) -> Self {
        assert!((point as usize) < model.num_worlds(), "world index out of range");
        PointedModel { model, point }
    }

    pub fn point_name(&self) -> &str {
        self.model.name(self.point)
    }

    /// Successor pointed models, sharing the underlying model.
    pub fn successors(&self) -> Vec<PointedModel> {
        self.model
            .successors(self.point)
            .iter()
            .map(|&w| PointedModel { model: Arc::clone(&self.model), point: w })
            .collect()
    }

    pub fn has_successor(&self) -> bool {
        !self.model.successors(self.point).is_empty()
    }

    pub fn holds(&self, p: &str) -> bool {
        self.model.holds(p, self.point)
    }

    /// Same point, restricted to its generated submodel.
    pub fn generated(&self) -> PointedModel {
        let sub = self.model.generated_submodel(self.point);
        let point = sub.world(self.point_name()).expect("point survives restriction");
        PointedModel { model: Arc::new(sub), point }
    }

    /// Length of the longest path from the point; fails on a reachable cycle.
    pub fn depth(&self) -> Result<usize, ModelError> {
        depth_from(&self.model, self.point)
    }
}

impl fmt::Debug for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:08x}", self.point_name(), self.model.fingerprint() as u32)
    }
}

impl fmt::Display for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn depth_from(m: &KripkeModel, root: WorldId) -> Result<usize, ModelError> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; m.num_worlds()];
    let mut depth = vec![0usize; m.num_worlds()];
    let mut stack: Vec<(WorldId, usize)> = vec![(root, 0)];
    state[root as usize] = 1;
    while let Some(&mut (w, ref mut next)) = stack.last_mut() {
        let succ = m.successors(w);
        if *next < succ.len() {
            let b = succ[*next];
            *next += 1;
            match state[b as usize] {
                0 => {
                    state[b as usize] = 1;
                    stack.push((b, 0));
                }
                1 => return Err(ModelError::Cyclic(m.name(b).to_string())),
                _ => {}
            }
        } else {
            depth[w as usize] = succ.iter().map(|&b| depth[b as usize] + 1).max().unwrap_or(0);
            state[w as usize] = 2;
            stack.pop();
        }
    }
    Ok(depth[root as usize])
}

/// Joins pointed models under a fresh root whose successors are exactly the
/// given points. Models sharing a world name must agree on it.
pub fn join(parts: &[PointedModel]) -> Result<PointedModel, ModelError> {
    let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut props: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut seen_models: Vec<&KripkeModel> = Vec::new();
    for pm in parts {
        let m = pm.model.as_ref();
        if seen_models.iter().any(|x| x == &m) {
            continue;
        }
        seen_models.push(m);
        for w in m.worlds() {
            let name = m.name(w);
            let s: BTreeSet<&str> = m.successors(w).iter().map(|&b| m.name(b)).collect();
            let p: BTreeSet<&str> = m.props_at(w).into_iter().collect();
            match succ.get(name) {
                Some(prev) if prev != &s || props[name] != p => {
                    return Err(ModelError::IncompatibleJoin(name.to_string()))
                }
                Some(_) => {}
                None => {
                    succ.insert(name, s);
                    props.insert(name, p);
                }
            }
        }
    }
    let root = (0..)
        .map(|i| format!("{ROOT_PREFIX}{i}"))
        .find(|r| !succ.contains_key(r.as_str()))
        .expect("fresh name");
    let mut worlds: Vec<&str> = succ.keys().copied().collect();
    worlds.push(&root);
    let mut edges: Vec<(&str, &str)> =
        succ.iter().flat_map(|(a, bs)| bs.iter().map(move |b| (*a, *b))).collect();
    edges.extend(parts.iter().map(|pm| (root.as_str(), pm.point_name())));
    let mut val: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (w, ps) in &props {
        for p in ps {
            val.entry(p).or_default().push(w);
        }
    }
    let model = KripkeModel::new(worlds, edges, val)?;
    PointedModel::new(Arc::new(model), &root)
}

/// The frame of the `n`-th level of the cumulative hierarchy: worlds are its
/// members (named by their encodings) and `a -> b` iff `b` is an element of `a`.
pub fn cumulative_level(n: usize) -> Result<KripkeModel, ModelError> {
    if n == 0 {
        return Err(ModelError::EmptyDomain);
    }
    let members = hfset::level(n)?;
    let names: Vec<String> = members.iter().map(HFSet::encode).collect();
    let mut edges = Vec::new();
    for (a, name) in members.iter().zip(&names) {
        for b in a.elements() {
            edges.push((name.clone(), b.encode()));
        }
    }
    KripkeModel::new(names, edges, Vec::<(String, Vec<String>)>::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> KripkeModel {
        let ws: Vec<String> = (0..=n).map(|i| format!("w{i}")).collect();
        let es: Vec<(String, String)> = (0..n).map(|i| (ws[i].clone(), ws[i + 1].clone())).collect();
        KripkeModel::new(ws.clone(), es, vec![(String::from("p"), vec![ws[n].clone()])]).unwrap()
    }

    #[test]
    fn construction_is_order_independent() {
        let a = KripkeModel::new(["x", "y"], [("x", "y")], [("p", vec!["y"])]).unwrap();
        let b = KripkeModel::new(["y", "x"], [("x", "y"), ("x", "y")], [("p", vec!["y", "y"])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert!(KripkeModel::new(["x", "x"], [], Vec::<(&str, Vec<&str>)>::new()).is_err());
        assert!(KripkeModel::new(["x"], [("x", "z")], Vec::<(&str, Vec<&str>)>::new()).is_err());
        assert!(KripkeModel::new(Vec::<&str>::new(), [], Vec::<(&str, Vec<&str>)>::new()).is_err());
    }

    #[test]
    fn depth_of_chain_and_cycle() {
        let m = Arc::new(chain(3));
        assert_eq!(PointedModel::new(m.clone(), "w0").unwrap().depth().unwrap(), 3);
        assert_eq!(PointedModel::new(m, "w3").unwrap().depth().unwrap(), 0);
        let c = Arc::new(KripkeModel::new(["a", "b"], [("a", "b"), ("b", "a")], Vec::<(&str, Vec<&str>)>::new()).unwrap());
        assert!(matches!(PointedModel::new(c, "a").unwrap().depth(), Err(ModelError::Cyclic(_))));
    }

    #[test]
    fn generated_submodel_drops_unreachable() {
        let m = chain(3);
        let sub = m.generated_submodel(m.world("w2").unwrap());
        assert_eq!(sub.num_worlds(), 2);
        assert!(sub.holds("p", sub.world("w3").unwrap()));
    }

    #[test]
    fn cumulative_levels() {
        assert!(cumulative_level(0).is_err());
        let f1 = cumulative_level(1).unwrap();
        assert_eq!(f1.num_worlds(), 1);
        assert_eq!(f1.num_edges(), 0);
        let f3 = cumulative_level(3).unwrap();
        assert_eq!(f3.num_worlds(), 4);
        let top = f3.world("{{},{{}}}").unwrap();
        assert_eq!(f3.successors(top).len(), 2);
        assert_eq!(PointedModel::at(Arc::new(f3.clone()), top).depth().unwrap(), 2);
    }

    #[test]
    fn join_adds_fresh_root() {
        let f2 = Arc::new(cumulative_level(2).unwrap());
        let parts: Vec<PointedModel> = f2.worlds().map(|w| PointedModel::at(f2.clone(), w)).collect();
        let j = join(&parts).unwrap();
        assert!(j.point_name().starts_with(ROOT_PREFIX));
        assert_eq!(j.successors().len(), 2);
        // joining a join picks a different fresh name
        let jj = join(&[j.clone()]).unwrap();
        assert_ne!(jj.point_name(), j.point_name());
    }

    #[test]
    fn join_rejects_conflicts() {
        let a = Arc::new(KripkeModel::new(["x", "y"], [("x", "y")], Vec::<(&str, Vec<&str>)>::new()).unwrap());
        let b = Arc::new(KripkeModel::new(["x", "y"], [("y", "x")], Vec::<(&str, Vec<&str>)>::new()).unwrap());
        let r = join(&[PointedModel::new(a, "x").unwrap(), PointedModel::new(b, "y").unwrap()]);
        assert!(matches!(r, Err(ModelError::IncompatibleJoin(_))));
    }
}
