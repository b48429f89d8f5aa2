//! The families `C_n` (one hierarchy member below a fresh root) and `D_n`
//! (two distinct members below a fresh root).

use std::sync::Arc;

use super::GraphError;
use crate::formulas::tower;
use crate::kripke::{cumulative_level, hf_level, join, PointedModel};
use crate::semantics::Universe;

/// Largest `n` for which the families are built.
pub const MAX_FAMILY_LEVEL: usize = 3;

fn check_level(n: usize) -> Result<(), GraphError> {
    if n == 0 || n > MAX_FAMILY_LEVEL {
        return Err(GraphError::LevelOutOfRange(n));
    }
    Ok(())
}

/// Every member of the level-`n` hierarchy as a generated pointed model, in
/// canonical set order.
pub fn hierarchy_point(n: usize) -> Result<Vec<PointedModel>, GraphError> {
    let frame = Arc::new(cumulative_level(n)?);
    let members = hf_level(n)?;
    Ok(members
        .iter()
        .map(|a| PointedModel::new(frame.clone(), &a.encode()).map(|pm| pm.generated()))
        .collect::<Result<_, _>>()?)
}

pub fn build_c(n: usize) -> Result<Vec<PointedModel>, GraphError> {
    check_level(n)?;
    let points = hierarchy_point(n + 1)?;
    debug_assert_eq!(points.len() as u64, tower(n).unwrap());
    Ok(points.iter().map(|a| join(std::slice::from_ref(a))).collect::<Result<_, _>>()?)
}

pub fn build_d(n: usize) -> Result<Vec<PointedModel>, GraphError> {
    check_level(n)?;
    let points = hierarchy_point(n + 1)?;
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out.push(join(&[points[i].clone(), points[j].clone()])?);
        }
    }
    Ok(out)
}

/// Whether all distinct members of the level-`(n+1)` hierarchy are pairwise
/// not `n`-bisimilar.
pub fn verify_notbisim(n: usize) -> Result<bool, GraphError> {
    if n > MAX_FAMILY_LEVEL {
        return Err(GraphError::LevelOutOfRange(n));
    }
    let points = hierarchy_point(n + 1)?;
    let u = Universe::new(&points);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if u.n_bisimilar(&points[i], &points[j], n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::in_class_an;

    #[test]
    fn family_sizes() {
        for (n, c, d) in [(1, 2, 1), (2, 4, 6), (3, 16, 120)] {
            assert_eq!(build_c(n).unwrap().len(), c);
            assert_eq!(build_d(n).unwrap().len(), d);
        }
        assert!(build_c(0).is_err());
        assert!(build_c(4).is_err());
    }

    #[test]
    fn families_sit_in_the_right_classes() {
        for n in 1..=2 {
            assert!(build_c(n).unwrap().iter().all(|pm| in_class_an(pm, n)));
            assert!(build_d(n).unwrap().iter().all(|pm| !in_class_an(pm, n)));
        }
    }

    #[test]
    fn hierarchy_members_are_pairwise_distinguishable() {
        for n in 0..=3 {
            assert!(verify_notbisim(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn level_two_members_are_one_bisimilar_somewhere() {
        // {{}} and {{},{{}}} both have a successor and no propositions
        let pts = hierarchy_point(3).unwrap();
        let u = Universe::new(&pts);
        let one_bisim = (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| u.n_bisimilar(&pts[i], &pts[j], 1))
            .count();
        assert!(one_bisim > 0);
    }
}
