use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Literal {
    Top,
    Bot,
    Prop(String),
    NegProp(String),
}

impl Literal {
    pub fn negated(&self) -> Literal {
        match self {
            Literal::Top => Literal::Bot,
            Literal::Bot => Literal::Top,
            Literal::Prop(p) => Literal::NegProp(p.clone()),
            Literal::NegProp(p) => Literal::Prop(p.clone()),
        }
    }

    /// Truth at a world whose true propositions are decided by `holds`.
    pub fn eval(&self, holds: impl Fn(&str) -> bool) -> bool {
        match self {
            Literal::Top => true,
            Literal::Bot => false,
            Literal::Prop(p) => holds(p),
            Literal::NegProp(p) => !holds(p),
        }
    }

    /// `T`, `F`, then `p`, `~p` for each proposition in order.
    pub fn all_over<'a>(props: impl IntoIterator<Item = &'a str>) -> Vec<Literal> {
        let mut out = vec![Literal::Top, Literal::Bot];
        for p in props {
            out.push(Literal::Prop(p.to_string()));
            out.push(Literal::NegProp(p.to_string()));
        }
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Top => f.write_str("T"),
            Literal::Bot => f.write_str("F"),
            Literal::Prop(p) => f.write_str(p),
            Literal::NegProp(p) => write!(f, "~{p}"),
        }
    }
}

/// Basic modal logic in negation normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MLFormula {
    Lit(Literal),
    Or(Box<MLFormula>, Box<MLFormula>),
    And(Box<MLFormula>, Box<MLFormula>),
    Dia(Box<MLFormula>),
    Box(Box<MLFormula>),
}

impl MLFormula {
    pub fn top() -> Self {
        MLFormula::Lit(Literal::Top)
    }
    pub fn bot() -> Self {
        MLFormula::Lit(Literal::Bot)
    }
    pub fn prop(p: &str) -> Self {
        MLFormula::Lit(Literal::Prop(p.to_string()))
    }
    pub fn or(a: MLFormula, b: MLFormula) -> Self {
        MLFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: MLFormula, b: MLFormula) -> Self {
        MLFormula::And(Box::new(a), Box::new(b))
    }
    pub fn dia(a: MLFormula) -> Self {
        MLFormula::Dia(Box::new(a))
    }
    pub fn boxed(a: MLFormula) -> Self {
        MLFormula::Box(Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            MLFormula::Lit(_) => 1,
            MLFormula::Or(a, b) | MLFormula::And(a, b) => a.size() + b.size() + 1,
            MLFormula::Dia(a) | MLFormula::Box(a) => a.size() + 1,
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            MLFormula::Lit(_) => 0,
            MLFormula::Or(a, b) | MLFormula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            MLFormula::Dia(a) | MLFormula::Box(a) => a.modal_depth() + 1,
        }
    }

    /// The dual formula, equivalent to the negation.
    pub fn negation(&self) -> MLFormula {
        match self {
            MLFormula::Lit(l) => MLFormula::Lit(l.negated()),
            MLFormula::Or(a, b) => MLFormula::and(a.negation(), b.negation()),
            MLFormula::And(a, b) => MLFormula::or(a.negation(), b.negation()),
            MLFormula::Dia(a) => MLFormula::boxed(a.negation()),
            MLFormula::Box(a) => MLFormula::dia(a.negation()),
        }
    }

    pub fn propositions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            MLFormula::Lit(Literal::Prop(p) | Literal::NegProp(p)) => {
                out.insert(p.clone());
            }
            MLFormula::Lit(_) => {}
            MLFormula::Or(a, b) | MLFormula::And(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            MLFormula::Dia(a) | MLFormula::Box(a) => a.collect_props(out),
        }
    }

    pub fn to_mu(&self) -> MuFormula {
        match self {
            MLFormula::Lit(l) => MuFormula::Lit(l.clone()),
            MLFormula::Or(a, b) => MuFormula::or(a.to_mu(), b.to_mu()),
            MLFormula::And(a, b) => MuFormula::and(a.to_mu(), b.to_mu()),
            MLFormula::Dia(a) => MuFormula::dia(a.to_mu()),
            MLFormula::Box(a) => MuFormula::boxed(a.to_mu()),
        }
    }
}

/// The modal mu-calculus in negation normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MuFormula {
    Lit(Literal),
    Var(String),
    Or(Box<MuFormula>, Box<MuFormula>),
    And(Box<MuFormula>, Box<MuFormula>),
    Dia(Box<MuFormula>),
    Box(Box<MuFormula>),
    Mu(String, Box<MuFormula>),
    Nu(String, Box<MuFormula>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Fixpoint {
    Least,
    Greatest,
}

impl MuFormula {
    pub fn var(x: &str) -> Self {
        MuFormula::Var(x.to_string())
    }
    pub fn prop(p: &str) -> Self {
        MuFormula::Lit(Literal::Prop(p.to_string()))
    }
    pub fn or(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::And(Box::new(a), Box::new(b))
    }
    pub fn dia(a: MuFormula) -> Self {
        MuFormula::Dia(Box::new(a))
    }
    pub fn boxed(a: MuFormula) -> Self {
        MuFormula::Box(Box::new(a))
    }
    pub fn mu(x: &str, a: MuFormula) -> Self {
        MuFormula::Mu(x.to_string(), Box::new(a))
    }
    pub fn nu(x: &str, a: MuFormula) -> Self {
        MuFormula::Nu(x.to_string(), Box::new(a))
    }
    pub fn fixpoint(kind: Fixpoint, x: &str, a: MuFormula) -> Self {
        match kind {
            Fixpoint::Least => MuFormula::mu(x, a),
            Fixpoint::Greatest => MuFormula::nu(x, a),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            MuFormula::Lit(_) | MuFormula::Var(_) => 1,
            MuFormula::Or(a, b) | MuFormula::And(a, b) => a.size() + b.size() + 1,
            MuFormula::Dia(a) | MuFormula::Box(a) | MuFormula::Mu(_, a) | MuFormula::Nu(_, a) => a.size() + 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            MuFormula::Lit(_) => {}
            MuFormula::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            MuFormula::Dia(a) | MuFormula::Box(a) => a.collect_free(bound, out),
            MuFormula::Mu(x, a) | MuFormula::Nu(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Bound variables in binding order; a repeat means the formula breaks
    /// the distinct-binder convention.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<String>) {
        match self {
            MuFormula::Lit(_) | MuFormula::Var(_) => {}
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            MuFormula::Dia(a) | MuFormula::Box(a) => a.collect_bound(out),
            MuFormula::Mu(x, a) | MuFormula::Nu(x, a) => {
                out.push(x.clone());
                a.collect_bound(out);
            }
        }
    }

    pub fn has_distinct_binders(&self) -> bool {
        let v = self.bound_vars();
        let s: BTreeSet<&String> = v.iter().collect();
        s.len() == v.len()
    }

    pub fn propositions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let MuFormula::Lit(Literal::Prop(p) | Literal::NegProp(p)) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&MuFormula)) {
        visit(self);
        match self {
            MuFormula::Lit(_) | MuFormula::Var(_) => {}
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            MuFormula::Dia(a) | MuFormula::Box(a) | MuFormula::Mu(_, a) | MuFormula::Nu(_, a) => a.walk(visit),
        }
    }

    /// Replaces free occurrences of `x` by `by`. Bound variables of `by` are
    /// not renamed, so the result may repeat binder names.
    pub fn substitute(&self, x: &str, by: &MuFormula) -> MuFormula {
        match self {
            MuFormula::Var(y) if y == x => by.clone(),
            MuFormula::Lit(_) | MuFormula::Var(_) => self.clone(),
            MuFormula::Or(a, b) => MuFormula::or(a.substitute(x, by), b.substitute(x, by)),
            MuFormula::And(a, b) => MuFormula::and(a.substitute(x, by), b.substitute(x, by)),
            MuFormula::Dia(a) => MuFormula::dia(a.substitute(x, by)),
            MuFormula::Box(a) => MuFormula::boxed(a.substitute(x, by)),
            MuFormula::Mu(y, _) | MuFormula::Nu(y, _) if y == x => self.clone(),
            MuFormula::Mu(y, a) => MuFormula::mu(y, a.substitute(x, by)),
            MuFormula::Nu(y, a) => MuFormula::nu(y, a.substitute(x, by)),
        }
    }

    /// The fixed-point-free fragment, if `self` lies in it.
    pub fn to_ml(&self) -> Option<MLFormula> {
        Some(match self {
            MuFormula::Lit(l) => MLFormula::Lit(l.clone()),
            MuFormula::Var(_) | MuFormula::Mu(..) | MuFormula::Nu(..) => return None,
            MuFormula::Or(a, b) => MLFormula::or(a.to_ml()?, b.to_ml()?),
            MuFormula::And(a, b) => MLFormula::and(a.to_ml()?, b.to_ml()?),
            MuFormula::Dia(a) => MLFormula::dia(a.to_ml()?),
            MuFormula::Box(a) => MLFormula::boxed(a.to_ml()?),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    fn digit(self) -> char {
        match self {
            Dim::One => '1',
            Dim::Two => '2',
        }
    }
}

/// Two-dimensional modal logic with one operator pair per coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ML2Formula {
    Lit(Literal),
    Or(Box<ML2Formula>, Box<ML2Formula>),
    And(Box<ML2Formula>, Box<ML2Formula>),
    Dia(Dim, Box<ML2Formula>),
    Box(Dim, Box<ML2Formula>),
}

impl ML2Formula {
    pub fn or(a: ML2Formula, b: ML2Formula) -> Self {
        ML2Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: ML2Formula, b: ML2Formula) -> Self {
        ML2Formula::And(Box::new(a), Box::new(b))
    }
    pub fn dia(d: Dim, a: ML2Formula) -> Self {
        ML2Formula::Dia(d, Box::new(a))
    }
    pub fn boxed(d: Dim, a: ML2Formula) -> Self {
        ML2Formula::Box(d, Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            ML2Formula::Lit(_) => 1,
            ML2Formula::Or(a, b) | ML2Formula::And(a, b) => a.size() + b.size() + 1,
            ML2Formula::Dia(_, a) | ML2Formula::Box(_, a) => a.size() + 1,
        }
    }
}

/// First-order formulas over binary relations. Negation is free in the size
/// measure; implication and equivalence are expanded by the builders.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FOFormula {
    Atom(String, Vec<String>),
    Not(Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
}

impl FOFormula {
    pub fn atom(rel: &str, args: &[&str]) -> Self {
        FOFormula::Atom(rel.to_string(), args.iter().map(|s| s.to_string()).collect())
    }
    pub fn not(a: FOFormula) -> Self {
        FOFormula::Not(Box::new(a))
    }
    pub fn or(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::And(Box::new(a), Box::new(b))
    }
    pub fn exists(x: &str, a: FOFormula) -> Self {
        FOFormula::Exists(x.to_string(), Box::new(a))
    }
    pub fn forall(x: &str, a: FOFormula) -> Self {
        FOFormula::Forall(x.to_string(), Box::new(a))
    }
    /// `a -> b` as `~a | b`.
    pub fn implies(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::or(FOFormula::not(a), b)
    }
    /// `a <-> b` as `(a & b) | (~a & ~b)`.
    pub fn iff(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::or(
            FOFormula::and(a.clone(), b.clone()),
            FOFormula::and(FOFormula::not(a), FOFormula::not(b)),
        )
    }

    pub fn size(&self) -> usize {
        match self {
            FOFormula::Atom(..) => 1,
            FOFormula::Not(a) => a.size(),
            FOFormula::Or(a, b) | FOFormula::And(a, b) => a.size() + b.size() + 1,
            FOFormula::Exists(_, a) | FOFormula::Forall(_, a) => a.size() + 1,
        }
    }
}

// Printing. Binary connectives are always parenthesized; a fixed point is
// parenthesized unless it is the whole formula or a fixed-point body, since
// its body otherwise extends as far to the right as possible.

impl fmt::Display for MLFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MLFormula::Lit(l) => write!(f, "{l}"),
            MLFormula::Or(a, b) => write!(f, "({a} | {b})"),
            MLFormula::And(a, b) => write!(f, "({a} & {b})"),
            MLFormula::Dia(a) => write!(f, "<>{a}"),
            MLFormula::Box(a) => write!(f, "[]{a}"),
        }
    }
}

impl MuFormula {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuFormula::Mu(..) | MuFormula::Nu(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuFormula::Lit(l) => write!(f, "{l}"),
            MuFormula::Var(x) => f.write_str(x),
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                f.write_str("(")?;
                a.fmt_operand(f)?;
                f.write_str(if matches!(self, MuFormula::Or(..)) { " | " } else { " & " })?;
                b.fmt_operand(f)?;
                f.write_str(")")
            }
            MuFormula::Dia(a) => {
                f.write_str("<>")?;
                a.fmt_operand(f)
            }
            MuFormula::Box(a) => {
                f.write_str("[]")?;
                a.fmt_operand(f)
            }
            MuFormula::Mu(x, a) => write!(f, "mu {x}. {a}"),
            MuFormula::Nu(x, a) => write!(f, "nu {x}. {a}"),
        }
    }
}

impl fmt::Display for ML2Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ML2Formula::Lit(l) => write!(f, "{l}"),
            ML2Formula::Or(a, b) => write!(f, "({a} | {b})"),
            ML2Formula::And(a, b) => write!(f, "({a} & {b})"),
            ML2Formula::Dia(d, a) => write!(f, "<{}>{a}", d.digit()),
            ML2Formula::Box(d, a) => write!(f, "[{}]{a}", d.digit()),
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::Atom(r, args) => write!(f, "{r}({})", args.join(",")),
            FOFormula::Not(a) => write!(f, "~{a}"),
            FOFormula::Or(a, b) => write!(f, "({a} | {b})"),
            FOFormula::And(a, b) => write!(f, "({a} & {b})"),
            FOFormula::Exists(x, a) => write!(f, "E{x}.{a}"),
            FOFormula::Forall(x, a) => write!(f, "A{x}.{a}"),
        }
    }
}
