//! One-line text views of game positions.

use fsg::kripke::ClockedModel;
use fsg::ml_game::{Labeller, MLPosition};
use fsg::mu_game::{ClockedSet, MuPosition};

pub fn ml_position(p: &MLPosition, l: &mut Labeller) -> String {
    format!("k={} A=[{}] B=[{}]", p.k, l.labels(&p.a).join(", "), l.labels(&p.b).join(", "))
}

fn clocked(m: &ClockedModel, l: &mut Labeller) -> String {
    let mut s = l.label(&m.pointed);
    if !m.clocks.is_empty() {
        let cs: Vec<String> = m.clocks.iter().map(|(x, c)| format!("{x}={c}")).collect();
        s.push_str(&format!("{{{}}}", cs.join(",")));
    }
    if !m.is_new() {
        s.push('\'');
    }
    s
}

fn clocked_set(set: &ClockedSet, l: &mut Labeller) -> String {
    set.iter().map(|m| clocked(m, l)).collect::<Vec<_>>().join(", ")
}

/// The current vertex: its id, resource, label and model sets. Old models
/// are primed.
pub fn mu_position(p: &MuPosition, l: &mut Labeller) -> String {
    let v = p.cur();
    let label = v.label.as_ref().map_or("-".to_string(), |x| x.to_string());
    format!("v{} res={} label={} L=[{}] R=[{}]", p.current, v.res, label, clocked_set(&v.left, l), clocked_set(&v.right, l))
}

/// Labels models the way a fixed-point play names them.
pub fn mu_labeller(p0: &MuPosition) -> Labeller {
    let root = &p0.vertices[0];
    Labeller::for_position(root.left.iter().chain(&root.right).map(|m| &m.pointed))
}
