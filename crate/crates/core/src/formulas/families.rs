//! Formula families separating "all successors are n-bisimilar" from its
//! complement, plus the tower function that bounds the modal cost.

use super::ast::{Dim, FOFormula, Literal, ML2Formula};
use super::FormulaError;

fn check_index(n: usize) -> Result<(), FormulaError> {
    if n == 0 {
        Err(FormulaError::IndexOutOfRange(n))
    } else {
        Ok(())
    }
}

fn edge(a: &str, b: &str) -> FOFormula {
    FOFormula::atom("R", &[a, b])
}

fn bisim_fo(n: usize, x: &str, y: &str) -> FOFormula {
    if n == 1 {
        return FOFormula::iff(
            FOFormula::exists("s0", edge(x, "s0")),
            FOFormula::exists("t0", edge(y, "t0")),
        );
    }
    let s = format!("s{}", n - 1);
    let t = format!("t{}", n - 1);
    let forth = FOFormula::implies(edge(x, &s), edge(y, &t));
    let back = FOFormula::implies(edge(y, &s), edge(x, &t));
    let step = FOFormula::implies(FOFormula::or(edge(x, &s), edge(y, &s)), bisim_fo(n - 1, &s, &t));
    FOFormula::forall(&s, FOFormula::exists(&t, FOFormula::and(FOFormula::and(forth, back), step)))
}

/// First-order formula in free variables `x`, `y` expressing that the two
/// points are `n`-bisimilar (for the empty vocabulary). Size `14n - 3`.
pub fn build_psi(n: usize) -> Result<FOFormula, FormulaError> {
    check_index(n)?;
    Ok(bisim_fo(n, "x", "y"))
}

/// First-order formula in free variable `x`: all successors of `x` are
/// pairwise `n`-bisimilar. Size `14n + 3`.
pub fn build_phi(n: usize) -> Result<FOFormula, FormulaError> {
    check_index(n)?;
    let body = FOFormula::implies(FOFormula::and(edge("x", "y"), edge("x", "z")), bisim_fo(n, "y", "z"));
    Ok(FOFormula::forall("y", FOFormula::forall("z", body)))
}

fn top() -> ML2Formula {
    ML2Formula::Lit(Literal::Top)
}

fn bot() -> ML2Formula {
    ML2Formula::Lit(Literal::Bot)
}

/// Two-dimensional formula true at `(u, v)` iff `u` and `v` are
/// `n`-bisimilar (empty vocabulary).
///
/// The base case `<1>T <-> <2>T` is written `(<1>T & <2>T) | ([1]F & [2]F)`,
/// so the sizes are `11, 27, 59, ...`, i.e. `2^(n+3) - 5`.
pub fn build_rho(n: usize) -> Result<ML2Formula, FormulaError> {
    check_index(n)?;
    let mut rho = ML2Formula::or(
        ML2Formula::and(ML2Formula::dia(Dim::One, top()), ML2Formula::dia(Dim::Two, top())),
        ML2Formula::and(ML2Formula::boxed(Dim::One, bot()), ML2Formula::boxed(Dim::Two, bot())),
    );
    for _ in 1..n {
        rho = ML2Formula::and(
            ML2Formula::boxed(Dim::One, ML2Formula::dia(Dim::Two, rho.clone())),
            ML2Formula::boxed(Dim::Two, ML2Formula::dia(Dim::One, rho)),
        );
    }
    Ok(rho)
}

/// `[1][2]rho_n`, evaluated on the diagonal: all successors are pairwise
/// `n`-bisimilar. Size `2^(n+3) - 3`.
pub fn build_zeta(n: usize) -> Result<ML2Formula, FormulaError> {
    Ok(ML2Formula::boxed(Dim::One, ML2Formula::boxed(Dim::Two, build_rho(n)?)))
}

/// `tower(0) = 1`, `tower(n+1) = 2^tower(n)`.
pub fn tower(n: usize) -> Result<u64, FormulaError> {
    let mut t: u64 = 1;
    for _ in 0..n {
        if t >= 64 {
            return Err(FormulaError::Overflow(n));
        }
        t = 1u64 << t;
    }
    Ok(t)
}
