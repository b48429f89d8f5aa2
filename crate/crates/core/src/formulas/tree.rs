use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{Fixpoint, Literal, MuFormula};
use super::FormulaError;

pub type NodeId = usize;

/// Vertex label shared by formula syntax trees and game positions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum NodeLabel {
    Lit(Literal),
    Or,
    And,
    Dia,
    Box,
    Fix(Fixpoint, String),
    Var(String),
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Lit(l) => write!(f, "{l}"),
            NodeLabel::Or => f.write_str("|"),
            NodeLabel::And => f.write_str("&"),
            NodeLabel::Dia => f.write_str("<>"),
            NodeLabel::Box => f.write_str("[]"),
            NodeLabel::Fix(Fixpoint::Least, x) => write!(f, "mu {x}"),
            NodeLabel::Fix(Fixpoint::Greatest, x) => write!(f, "nu {x}"),
            NodeLabel::Var(x) => f.write_str(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub label: NodeLabel,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// For variable leaves: the child of the binding fixed point.
    pub back: Option<NodeId>,
}

/// Syntax tree of a sentence with a back edge from every variable occurrence
/// to the body of its binder. Vertices are numbered in preorder from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxTree {
    nodes: Vec<TreeNode>,
    binders: BTreeMap<String, NodeId>,
}

impl SyntaxTree {
    /// Requires a sentence with pairwise distinct bound variables.
    pub fn new(formula: &MuFormula) -> Result<Self, FormulaError> {
        let mut t = SyntaxTree { nodes: Vec::new(), binders: BTreeMap::new() };
        t.build(formula, None, &mut Vec::new())?;
        Ok(t)
    }

    fn build(&mut self, f: &MuFormula, parent: Option<NodeId>, scope: &mut Vec<String>) -> Result<NodeId, FormulaError> {
        let id = self.nodes.len();
        let label = match f {
            MuFormula::Lit(l) => NodeLabel::Lit(l.clone()),
            MuFormula::Var(x) => NodeLabel::Var(x.clone()),
            MuFormula::Or(..) => NodeLabel::Or,
            MuFormula::And(..) => NodeLabel::And,
            MuFormula::Dia(_) => NodeLabel::Dia,
            MuFormula::Box(_) => NodeLabel::Box,
            MuFormula::Mu(x, _) => NodeLabel::Fix(Fixpoint::Least, x.clone()),
            MuFormula::Nu(x, _) => NodeLabel::Fix(Fixpoint::Greatest, x.clone()),
        };
        self.nodes.push(TreeNode { label, children: Vec::new(), parent, back: None });
        match f {
            MuFormula::Lit(_) => {}
            MuFormula::Var(x) => {
                if !scope.contains(x) {
                    return Err(FormulaError::FreeVariable(x.clone()));
                }
                // body of the binder is the vertex right after it in preorder
                self.nodes[id].back = Some(self.binders[x] + 1);
            }
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                let l = self.build(a, Some(id), scope)?;
                let r = self.build(b, Some(id), scope)?;
                self.nodes[id].children = vec![l, r];
            }
            MuFormula::Dia(a) | MuFormula::Box(a) => {
                let c = self.build(a, Some(id), scope)?;
                self.nodes[id].children = vec![c];
            }
            MuFormula::Mu(x, a) | MuFormula::Nu(x, a) => {
                if self.binders.insert(x.clone(), id).is_some() {
                    return Err(FormulaError::DuplicateBinder(x.clone()));
                }
                scope.push(x.clone());
                let c = self.build(a, Some(id), scope)?;
                scope.pop();
                self.nodes[id].children = vec![c];
            }
        }
        Ok(id)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Number of vertices, which equals the formula size.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: NodeId) -> &TreeNode {
        &self.nodes[v]
    }

    pub fn label(&self, v: NodeId) -> &NodeLabel {
        &self.nodes[v].label
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    pub fn back(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].back
    }

    pub fn back_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.back.map(|b| (i, b))).collect()
    }

    /// Binder vertex of a variable.
    pub fn binder(&self, var: &str) -> Option<NodeId> {
        self.binders.get(var).copied()
    }

    pub fn fixpoint_kind(&self, var: &str) -> Option<Fixpoint> {
        match self.binder(var).map(|b| &self.nodes[b].label) {
            Some(NodeLabel::Fix(k, _)) => Some(*k),
            _ => None,
        }
    }

    /// Variables bound strictly above `v`, outermost first.
    pub fn fixpoints_above(&self, v: NodeId) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self.nodes[v].parent;
        while let Some(u) = cur {
            if let NodeLabel::Fix(_, x) = &self.nodes[u].label {
                out.push(x.clone());
            }
            cur = self.nodes[u].parent;
        }
        out.reverse();
        out
    }

    /// Number of vertices in the subtree rooted at `v`.
    pub fn subtree_size(&self, v: NodeId) -> usize {
        1 + self.nodes[v].children.iter().map(|&c| self.subtree_size(c)).sum::<usize>()
    }

    /// The subformula occurrence at `v`; variables bound above `v` are free.
    pub fn subformula(&self, v: NodeId) -> MuFormula {
        let n = &self.nodes[v];
        let child = |i: usize| self.subformula(n.children[i]);
        match &n.label {
            NodeLabel::Lit(l) => MuFormula::Lit(l.clone()),
            NodeLabel::Var(x) => MuFormula::Var(x.clone()),
            NodeLabel::Or => MuFormula::or(child(0), child(1)),
            NodeLabel::And => MuFormula::and(child(0), child(1)),
            NodeLabel::Dia => MuFormula::dia(child(0)),
            NodeLabel::Box => MuFormula::boxed(child(0)),
            NodeLabel::Fix(k, x) => MuFormula::fixpoint(*k, x, child(0)),
        }
    }

    /// Whether `a` lies on the path from the root to `b` (inclusive).
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(u) = cur {
            if u == a {
                return true;
            }
            cur = self.nodes[u].parent;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_mu;

    #[test]
    fn back_edges_point_at_binder_bodies() {
        let f = parse_mu("mu X. (<>X | nu Y. []Y)").unwrap();
        let t = SyntaxTree::new(&f).unwrap();
        assert_eq!(t.len(), f.size());
        let edges = t.back_edges();
        assert_eq!(edges.len(), 2);
        let or_vertex = t.children(t.root())[0];
        assert_eq!(t.label(or_vertex), &NodeLabel::Or);
        let x_leaf = t.children(t.children(or_vertex)[0])[0];
        assert_eq!(t.back(x_leaf), Some(or_vertex));
        let nu = t.children(or_vertex)[1];
        let boxv = t.children(nu)[0];
        let y_leaf = t.children(boxv)[0];
        assert_eq!(t.back(y_leaf), Some(boxv));
        assert_eq!(t.fixpoints_above(y_leaf), vec!["X".to_string(), "Y".to_string()]);
        assert_eq!(t.fixpoints_above(t.root()), Vec::<String>::new());
        assert_eq!(t.subformula(nu).to_string(), "nu Y. []Y");
        assert_eq!(t.subtree_size(or_vertex), 6);
    }

    #[test]
    fn rejects_free_and_repeated_variables() {
        assert!(matches!(SyntaxTree::new(&parse_mu("<>X").unwrap()), Err(FormulaError::FreeVariable(_))));
        let twice = MuFormula::and(
            MuFormula::mu("X", MuFormula::var("X")),
            MuFormula::mu("X", MuFormula::var("X")),
        );
        assert!(matches!(SyntaxTree::new(&twice), Err(FormulaError::DuplicateBinder(_))));
    }
}
