//! Acceptance run: one PASS/FAIL line per criterion, then a summary.
//!
//! Every criterion runs even when an earlier one fails. The process exits
//! with status 0 so the rest of the workspace suite still runs after it;
//! set `FSG_ACCEPTANCE_STRICT=1` to exit with status 1 on any FAIL.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::{all_pointed, random_fixpoint_sentence, random_model, random_pointed, random_sentence, PROPS};
use fsg::exec::Exec;
use fsg::formulas::{build_phi, build_psi, build_rho, build_zeta, tower, Fixpoint, Literal, MuFormula, NodeLabel, SyntaxTree};
use fsg::game::{GameError, Player};
use fsg::kripke::{KripkeModel, PointedModel};
use fsg::ml_game::{MLPosition, MLSolver, SolverConfig, Synthesizer};
use fsg::mu_game::{
    exhaustive_duplicator, initial_position, play_mu, LitRule, RandomMuDuplicator, RandomMuSpoiler, ResponseMode, UniformStrategy,
};
use fsg::semantics::{approximant_set, denote_mu, eval_ml2, eval_mu, n_bisimilar, Valuation};
use fsg::succinctness::{
    build_c, experiment_ml_lower_bound, experiment_mu_lower_bound, verify_notbisim, ExperimentConfig, ReportRow, Status,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rows_ok(rows: &[ReportRow]) -> bool {
    rows.iter().all(|r| matches!(r.status, Status::Pass | Status::Info))
}

fn failed_rows(rows: &[ReportRow]) -> String {
    rows.iter()
        .filter(|r| !matches!(r.status, Status::Pass | Status::Info))
        .map(|r| format!("[{} n={}: {} expected {} got {}]", r.experiment, r.n, r.claim, r.expected, r.computed))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Solver and synthesizer agree on who wins, and every witness separates.
fn agree(a: &[PointedModel], b: &[PointedModel], k: usize) -> Result<bool, GameError> {
    let p = MLPosition::new(k, a.iter().cloned(), b.iter().cloned());
    let v = MLSolver::for_position(&p, SolverConfig { node_budget: 5_000_000, exec: Exec::Sequential }).solve(&p)?;
    let found = Synthesizer::new(a, b, Exec::Sequential).min_separator(k);
    let witness_ok = v.witness.as_ref().is_none_or(|f| {
        f.size() <= k && a.iter().all(|m| fsg::semantics::eval_ml(f, m)) && b.iter().all(|m| !fsg::semantics::eval_ml(f, m))
    });
    Ok((v.winner == Player::Spoiler) == found.is_some() && witness_ok)
}

fn subsets_up_to(pool: &[PointedModel], max: usize) -> Vec<Vec<PointedModel>> {
    let mut out: Vec<Vec<PointedModel>> = vec![vec![]];
    for pm in pool {
        let grown: Vec<Vec<PointedModel>> =
            out.iter().filter(|s| s.len() < max).map(|s| s.iter().cloned().chain([pm.clone()]).collect()).collect();
        out.extend(grown);
    }
    out.retain(|s| !s.is_empty());
    out
}

fn criterion_1() -> Verdict {
    let exec = Exec::default();
    let mut instances: Vec<(Vec<PointedModel>, Vec<PointedModel>, usize)> = Vec::new();
    // every single model per side with up to 2 worlds over one proposition
    let pool2 = all_pointed(2, &PROPS[..1]);
    for a in &pool2 {
        for b in &pool2 {
            for k in 1..=5 {
                instances.push((vec![a.clone()], vec![b.clone()], k));
            }
        }
    }
    // every side of up to 3 one-world models over two propositions
    let sides = subsets_up_to(&all_pointed(1, &PROPS), 3);
    for a in &sides {
        for b in &sides {
            for k in 1..=7 {
                instances.push((a.clone(), b.clone(), k));
            }
        }
    }
    let exhaustive = instances.len();
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..1000 {
        let na = rng.gen_range(1..=3);
        let nb = rng.gen_range(1..=3);
        let a = (0..na).map(|_| random_pointed(&mut rng, 5, &PROPS, false)).collect();
        let b = (0..nb).map(|_| random_pointed(&mut rng, 5, &PROPS, false)).collect();
        instances.push((a, b, rng.gen_range(1..=7)));
    }
    let results = exec.map(&instances, |(a, b, k)| agree(a, b, *k));
    let disagreements = results.iter().filter(|r| matches!(r, Ok(false))).count();
    let errors = results.iter().filter(|r| r.is_err()).count();
    verdict(
        disagreements == 0 && errors == 0,
        format!(
            "solver vs synthesizer on {exhaustive} exhaustive + 1000 random instances: {disagreements} disagreements, {errors} errors"
        ),
    )
}

fn criterion_2() -> Verdict {
    let cfg = ExperimentConfig { plays: 50, min_budget: [None, None, None], ..ExperimentConfig::default() };
    let mut rows = Vec::new();
    for n in [2, 3] {
        match experiment_ml_lower_bound(n, &cfg) {
            Ok(r) => rows.extend(r),
            Err(e) => return verdict(false, format!("n={n}: {e}")),
        }
    }
    let ok = rows_ok(&rows);
    let detail = if ok {
        "no separator of size <= 2 for C_2/D_2 or <= 4 for C_3/D_3; coloring duplicator won 50/50 plays at both levels".to_string()
    } else {
        failed_rows(&rows)
    };
    verdict(ok, detail)
}

fn criterion_3() -> Verdict {
    let cfg = ExperimentConfig { plays: 5, ..ExperimentConfig::default() };
    let rows = match experiment_ml_lower_bound(1, &cfg) {
        Ok(r) => r,
        Err(e) => return verdict(false, e.to_string()),
    };
    let witness = rows.iter().find(|r| r.claim.contains("separates") && r.claim.starts_with('('));
    let minimal = rows.iter().find(|r| r.claim == "exact minimal separator size");
    let min_size: Option<usize> = minimal.and_then(|r| r.computed.split(':').next()?.parse().ok());
    let ok = witness.is_some_and(|r| r.status == Status::Pass) && min_size.is_some_and(|s| s <= 7) && rows_ok(&rows);
    verdict(
        ok,
        format!(
            "{}; exact minimum {}",
            witness.map_or("no witness row".to_string(), |r| format!("{} = {}", r.claim, r.computed)),
            minimal.map_or("missing".to_string(), |r| r.computed.clone())
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let len = build_c(n).map(|c| c.len()).unwrap_or(0);
        let want = tower(n).unwrap() as usize;
        ok &= len == want;
        notes.push(format!("|C_{n}|={len}"));
    }
    for n in 0..=3 {
        let nb = verify_notbisim(n).unwrap_or(false);
        ok &= nb;
        notes.push(format!("notbisim({n})={nb}"));
    }
    verdict(ok, notes.join(" "))
}

fn criterion_5a() -> Verdict {
    let bad: Vec<usize> = (1..=10)
        .filter(|&n| build_psi(n).unwrap().size() != 14 * n - 3 || build_phi(n).unwrap().size() != 14 * n + 3)
        .collect();
    verdict(bad.is_empty(), format!("s(psi_n) = 14n-3 and s(phi_n) = 14n+3 for n <= 10; mismatching n: {bad:?}"))
}

fn criterion_5b() -> Verdict {
    let sizes: Vec<usize> = (1..=6).map(|n| build_zeta(n).unwrap().size()).collect();
    let published: Vec<usize> = (1..=6).map(|n| (1usize << (n + 4)) - 3).collect();
    let ours: Vec<usize> = (1..=6).map(|n| (1usize << (n + 3)) - 3).collect();
    let shifted = (1..=6).all(|n| build_zeta(n + 1).unwrap().size() == published[n - 1]);
    let ok = sizes == published;
    let detail = if ok {
        format!("s(zeta_n) = 2^(n+4)-3 for n <= 6: {sizes:?}")
    } else {
        format!(
            "s(zeta_n) for n <= 6 is {sizes:?}, the closed form 2^(n+4)-3 gives {published:?}. \
             The built formula follows rho_(n+1) = [1]<2>rho_n & [2]<1>rho_n from an 11-symbol rho_1, so \
             s(zeta_n) = 2^(n+3)-3 (matches: {}); 2^(n+4)-3 is s(zeta_(n+1)) (matches: {shifted}), an index shift in the closed form",
            sizes == ours
        )
    };
    verdict(ok, detail)
}

fn criterion_6() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let rhos: Vec<_> = (1..=3).map(|n| build_rho(n).unwrap()).collect();
    let mut mismatches = 0;
    let mut checks = 0;
    for _ in 0..200 {
        let m = Arc::new(random_model(&mut rng, 5, &[], 0.35, false));
        for u in m.worlds() {
            for v in m.worlds() {
                let (pu, pv) = (PointedModel::at(m.clone(), u), PointedModel::at(m.clone(), v));
                for (i, rho) in rhos.iter().enumerate() {
                    checks += 1;
                    if eval_ml2(rho, &m, u, v) != n_bisimilar(&pu, &pv, i + 1) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    verdict(mismatches == 0, format!("rho_n vs n-bisimilarity, n <= 3, 200 models: {mismatches} mismatches in {checks} checks"))
}

fn unfold(kind: Fixpoint, x: &str, body: &MuFormula, times: u32) -> MuFormula {
    let mut f = MuFormula::Lit(if kind == Fixpoint::Least { Literal::Bot } else { Literal::Top });
    for _ in 0..times {
        f = body.substitute(x, &f);
    }
    f
}

fn criterion_7() -> Verdict {
    let mut rng = StdRng::seed_from_u64(7);
    let mut mismatches = 0;
    let mut errors = 0;
    for _ in 0..100 {
        let f = random_fixpoint_sentence(&mut rng, 4, &PROPS);
        let m = random_model(&mut rng, 4, &PROPS, 0.4, false);
        let alpha = rng.gen_range(0..=3u32);
        let tree = SyntaxTree::new(&f).expect("sentence with distinct binders");
        let NodeLabel::Fix(kind, x) = tree.label(tree.root()).clone() else { unreachable!("fixed point at the top") };
        let body = tree.children(tree.root())[0];
        let clocks = BTreeMap::from([(x.clone(), alpha)]);
        let approx = approximant_set(&tree, body, &clocks, &m, &mut Valuation::new());
        let (MuFormula::Mu(_, inner) | MuFormula::Nu(_, inner)) = &f else { unreachable!() };
        let direct = denote_mu(&unfold(kind, &x, inner, alpha + 1), &m, &mut Valuation::new());
        match (approx, direct) {
            (Ok(a), Ok(d)) => mismatches += usize::from(a != d),
            _ => errors += 1,
        }
    }
    verdict(
        mismatches == 0 && errors == 0,
        format!("approximant at the body vs (alpha+1)-fold unfolding, 100 triples: {mismatches} mismatches, {errors} errors"),
    )
}

fn reach_oracle(m: &KripkeModel, p: &str) -> Vec<bool> {
    m.worlds().map(|w| m.reachable(w).iter().any(|&v| m.holds(p, v))).collect()
}

fn safety_oracle(m: &KripkeModel, q: &str) -> Vec<bool> {
    m.worlds().map(|w| m.reachable(w).iter().all(|&v| m.holds(q, v))).collect()
}

fn criterion_8() -> Verdict {
    let reach = fsg::formulas::parse_mu("mu X.(p | <>X)").unwrap();
    let safe = fsg::formulas::parse_mu("nu X.(q & []X)").unwrap();
    let mut rng = StdRng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..500 {
        let m = random_model(&mut rng, 7, &PROPS, 0.3, false);
        let r = denote_mu(&reach, &m, &mut Valuation::new()).unwrap();
        let s = denote_mu(&safe, &m, &mut Valuation::new()).unwrap();
        let (ro, so) = (reach_oracle(&m, "p"), safety_oracle(&m, "q"));
        mismatches += m.worlds().filter(|&w| r.contains(w as usize) != ro[w as usize] || s.contains(w as usize) != so[w as usize]).count();
    }
    verdict(mismatches == 0, format!("reachability and safety vs graph search on 500 models: {mismatches} mismatching worlds"))
}

/// Instances whose full game tree is larger than this are counted as
/// undecided rather than searched to the end.
const NODE_BUDGET_9: u64 = 50_000;

fn criterion_9() -> Verdict {
    let mut rng = StdRng::seed_from_u64(9);
    let pool: Vec<PointedModel> = (0..40).map(|_| random_pointed(&mut rng, 3, &PROPS[..1], false)).collect();
    let mut decided = 0;
    let mut undecided = 0;
    let mut losses = 0;
    let mut plays = 0;
    let mut errors = Vec::new();
    let mut attempts = 0;
    while decided < 150 && attempts < 20_000 {
        attempts += 1;
        let f = random_sentence(&mut rng, 4, &PROPS[..1]);
        if f.size() > 6 || !f.free_vars().is_empty() {
            continue;
        }
        let (yes, no): (Vec<&PointedModel>, Vec<&PointedModel>) = pool.iter().partition(|m| eval_mu(&f, m).unwrap());
        if yes.is_empty() || no.is_empty() {
            continue;
        }
        let (ka, kb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a: Vec<PointedModel> = yes.choose_multiple(&mut rng, ka).map(|m| (*m).clone()).collect();
        let b: Vec<PointedModel> = no.choose_multiple(&mut rng, kb).map(|m| (*m).clone()).collect();
        let k = f.size();
        let result = UniformStrategy::new(&f, &a, &b, k).and_then(|s| {
            let mut total = exhaustive_duplicator(&initial_position(&a, &b, k), &s, ResponseMode::All, NODE_BUDGET_9, Exec::Sequential)?;
            let p_new = initial_position(&a, &b, k).with_lit_rule(LitRule::NewOnly);
            let r = exhaustive_duplicator(&p_new, &s, ResponseMode::All, NODE_BUDGET_9, Exec::Sequential)?;
            total.plays += r.plays;
            total.duplicator_wins += r.duplicator_wins;
            Ok(total)
        });
        match result {
            Ok(r) => {
                decided += 1;
                plays += r.plays;
                losses += r.duplicator_wins;
            }
            Err(GameError::BudgetExceeded(_)) => undecided += 1,
            Err(e) => errors.push(format!("{f}: {e}")),
        }
    }
    verdict(
        losses == 0 && errors.is_empty() && decided == 150,
        format!(
            "uniform spoiler on {decided} decided instances under both literal rules, {plays} plays against every duplicator answer: {losses} losses, \
             {} errors{}; {undecided} instances over {NODE_BUDGET_9} nodes left undecided",
            errors.len(),
            errors.first().map(|e| format!(" ({e})")).unwrap_or_default()
        ),
    )
}

fn criterion_10() -> Verdict {
    let seeds: Vec<u64> = (0..10_000).collect();
    let results = Exec::default().map(&seeds, |&seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let na = rng.gen_range(1..=2);
        let nb = rng.gen_range(1..=2);
        let a: Vec<_> = (0..na).map(|_| random_pointed(&mut rng, 3, &PROPS[..1], false)).collect();
        let b: Vec<_> = (0..nb).map(|_| random_pointed(&mut rng, 3, &PROPS[..1], false)).collect();
        let k = rng.gen_range(0..=6);
        play_mu(&initial_position(&a, &b, k), &mut RandomMuSpoiler::new(seed), &mut RandomMuDuplicator::new(seed + 1)).map(|t| t.steps.len())
    });
    let measure = results.iter().filter(|r| matches!(r, Err(GameError::Invariant(_)))).count();
    let other: Vec<_> = results.iter().filter_map(|r| r.as_ref().err()).filter(|e| !matches!(e, GameError::Invariant(_))).collect();
    let longest = results.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
    verdict(
        measure == 0 && other.is_empty(),
        format!(
            "10000 random fixed-point plays: {} ended, {measure} measure failures, {} other errors, longest {longest} moves",
            results.iter().filter(|r| r.is_ok()).count(),
            other.len()
        ),
    )
}

fn criterion_11() -> Verdict {
    match experiment_mu_lower_bound(2, &ExperimentConfig::default()) {
        Ok(rows) => {
            let all_pass = rows.iter().all(|r| r.status == Status::Pass);
            let search = rows.iter().find(|r| r.claim.starts_with("duplicator wins")).map_or(String::new(), |r| r.computed.clone());
            let cond = rows.iter().find(|r| r.claim.starts_with("2^res")).map_or(String::new(), |r| r.computed.clone());
            verdict(all_pass, if all_pass { format!("C_2/D_2 at resource 1: {search}; condition: {cond}") } else { failed_rows(&rows) })
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5 (psi, phi)", criterion_5a),
        ("5 (zeta)", criterion_5b),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
        ("10", criterion_10),
        ("11", criterion_11),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let v = check();
        failed += usize::from(!v.pass);
        println!("{} criterion {name}: {} ({:.1?})", if v.pass { "PASS" } else { "FAIL" }, v.detail, t.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var("FSG_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
