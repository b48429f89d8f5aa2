//! Exhaustive searches over one side's choices against a fixed agent on the
//! other side.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::Serialize;

use super::agents::{MuDuplicator, MuSpoiler};
use super::position::{aging_holds, apply_initial, apply_mu, check_response, d_responses, expect, legal_s_moves, progress_decreases, MuPosition, MuStep, ResponseMode, SpoilerAlphabet};
use super::GameError;
use crate::exec::Exec;
use crate::game::{Outcome, Player};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    /// Complete plays explored, counted as paths.
    pub plays: u64,
    pub spoiler_wins: u64,
    pub duplicator_wins: u64,
    /// Positions expanded.
    pub nodes: u64,
    /// The node budget ran out before the search finished.
    pub truncated: bool,
    /// Plays at whose end the agent under test reported a problem.
    pub flagged: u64,
}

impl SearchReport {
    fn leaf(o: &Outcome, flagged: bool) -> Self {
        let s = u64::from(o.winner == Player::Spoiler);
        SearchReport { plays: 1, spoiler_wins: s, duplicator_wins: 1 - s, flagged: u64::from(flagged), ..Default::default() }
    }

    fn add(&mut self, o: &SearchReport) {
        self.plays = self.plays.saturating_add(o.plays);
        self.spoiler_wins = self.spoiler_wins.saturating_add(o.spoiler_wins);
        self.duplicator_wins = self.duplicator_wins.saturating_add(o.duplicator_wins);
        self.flagged = self.flagged.saturating_add(o.flagged);
        self.truncated |= o.truncated;
    }
}

fn checked_step(pos: &MuPosition, next: &MuPosition) -> Result<(), GameError> {
    if !progress_decreases(pos, next) {
        return Err(GameError::Invariant("progress measure did not decrease".into()));
    }
    if !aging_holds(next) {
        return Err(GameError::Invariant("new models above the current vertex".into()));
    }
    Ok(())
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    hit: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { used: AtomicU64::new(0), limit, hit: AtomicBool::new(false) }
    }

    /// Whether another node may be expanded.
    fn take(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.hit.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Plays the spoiler agent `s` against every duplicator answer (all answers,
/// or only the dominant ones). Running out of `node_budget` is an error here,
/// since a partial search proves nothing about the spoiler.
pub fn exhaustive_duplicator<S>(p0: &MuPosition, s: &S, mode: ResponseMode, node_budget: u64, exec: Exec) -> Result<SearchReport, GameError>
where
    S: MuSpoiler + Clone + Send + Sync,
{
    let budget = Budget::new(node_budget);
    let starts = d_responses(p0, None, mode)?;
    let parts = exec.map(&starts, |r| -> Result<SearchReport, GameError> {
        let pos = apply_initial(p0, r)?;
        let mut memo = HashMap::new();
        d_search(&pos, &mut s.clone(), mode, &budget, &mut memo)
    });
    let mut total = SearchReport::default();
    for p in parts {
        total.add(&p?);
    }
    total.nodes = budget.used.load(Ordering::Relaxed).min(node_budget);
    Ok(total)
}

fn d_search<S: MuSpoiler + Clone>(
    pos: &MuPosition,
    s: &mut S,
    mode: ResponseMode,
    budget: &Budget,
    memo: &mut HashMap<MuPosition, SearchReport>,
) -> Result<SearchReport, GameError> {
    if !budget.take() {
        return Err(GameError::BudgetExceeded(budget.limit));
    }
    if let Some(o) = pos.opening_outcome() {
        return Ok(SearchReport::leaf(&o, false));
    }
    if s.positional() {
        if let Some(r) = memo.get(pos) {
            return Ok(*r);
        }
    }
    let m = s.choose(pos)?;
    expect(pos, &m)?;
    let mut out = SearchReport::default();
    for r in d_responses(pos, Some(&m), mode)? {
        match apply_mu(pos, &m, &r)? {
            MuStep::End(o) => out.add(&SearchReport::leaf(&o, false)),
            MuStep::Continue(next) => {
                checked_step(pos, &next)?;
                out.add(&d_search(&next, &mut s.clone(), mode, budget, memo)?);
            }
        }
    }
    if s.positional() {
        memo.insert(pos.clone(), out);
    }
    Ok(out)
}

/// Plays every spoiler move from `alphabet` against the duplicator agent
/// `d`, cloned at each branch. `flag` inspects the agent at the end of each
/// play. When `node_budget` runs out the report is marked truncated.
pub fn bounded_exhaustive_spoiler<D, F>(
    p0: &MuPosition,
    d: &D,
    alphabet: SpoilerAlphabet,
    node_budget: u64,
    exec: Exec,
    flag: F,
) -> Result<SearchReport, GameError>
where
    D: MuDuplicator + Clone + Send + Sync,
    F: Fn(&D) -> bool + Sync,
{
    let budget = Budget::new(node_budget);
    let mut d0 = d.clone();
    let r0 = d0.initial(p0)?;
    let pos = apply_initial(p0, &r0)?;
    let mut total = SearchReport::default();
    if let Some(o) = pos.opening_outcome() {
        return Ok(SearchReport { nodes: 1, ..SearchReport::leaf(&o, flag(&d0)) });
    }
    let moves = legal_s_moves(&pos, alphabet)?;
    let parts = exec.map(&moves, |m| s_branch(&pos, &d0, m, alphabet, &budget, &flag));
    for p in parts {
        total.add(&p?);
    }
    total.nodes = budget.used.load(Ordering::Relaxed).min(node_budget);
    total.truncated |= budget.hit.load(Ordering::Relaxed);
    Ok(total)
}

fn s_branch<D, F>(pos: &MuPosition, d: &D, m: &super::MuMove, alphabet: SpoilerAlphabet, budget: &Budget, flag: &F) -> Result<SearchReport, GameError>
where
    D: MuDuplicator + Clone,
    F: Fn(&D) -> bool,
{
    let mut d2 = d.clone();
    let e = expect(pos, m)?;
    let r = d2.respond(pos, m, &e)?;
    check_response(&e, &r)?;
    match apply_mu(pos, m, &r)? {
        MuStep::End(o) => Ok(SearchReport::leaf(&o, flag(&d2))),
        MuStep::Continue(next) => {
            checked_step(pos, &next)?;
            s_search(&next, &d2, alphabet, budget, flag)
        }
    }
}

fn s_search<D, F>(pos: &MuPosition, d: &D, alphabet: SpoilerAlphabet, budget: &Budget, flag: &F) -> Result<SearchReport, GameError>
where
    D: MuDuplicator + Clone,
    F: Fn(&D) -> bool,
{
    if !budget.take() {
        return Ok(SearchReport { truncated: true, ..Default::default() });
    }
    if let Some(o) = pos.opening_outcome() {
        return Ok(SearchReport::leaf(&o, flag(d)));
    }
    let mut out = SearchReport::default();
    for m in legal_s_moves(pos, alphabet)? {
        out.add(&s_branch(pos, d, &m, alphabet, budget, flag)?);
        if out.truncated {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_mu;
    use crate::kripke::pointed_from_json;
    use crate::mu_game::{initial_position, play_mu, BisimilarMuDuplicator, GreedyMuDuplicator, UniformStrategy};

    fn chain(p_at_end: bool) -> crate::kripke::PointedModel {
        let val = if p_at_end { r#"{"p":["w2"]}"# } else { "{}" };
        pointed_from_json(&format!(r#"{{"worlds":["w0","w1","w2"],"edges":[["w0","w1"],["w1","w2"]],"valuation":{val},"point":"w0"}}"#)).unwrap()
    }

    #[test]
    fn uniform_strategy_beats_every_answer() {
        let f = parse_mu("mu X. (p | <>X)").unwrap();
        let (a, b) = ([chain(true)], [chain(false)]);
        let s = UniformStrategy::new(&f, &a, &b, f.size()).unwrap();
        let p0 = initial_position(&a, &b, f.size());
        let all = exhaustive_duplicator(&p0, &s, ResponseMode::All, 1_000_000, Exec::Sequential).unwrap();
        let dominant = exhaustive_duplicator(&p0, &s, ResponseMode::Dominant, 1_000_000, Exec::Sequential).unwrap();
        assert_eq!((all.duplicator_wins, dominant.duplicator_wins), (0, 0));
        assert!(dominant.plays >= 1 && dominant.plays <= all.plays);
        let t = play_mu(&p0, &mut s.clone(), &mut GreedyMuDuplicator).unwrap();
        assert_eq!(t.outcome.winner, Player::Spoiler);
    }

    #[test]
    fn uniform_strategy_needs_enough_resource() {
        let f = parse_mu("mu X. (p | <>X)").unwrap();
        assert!(matches!(UniformStrategy::new(&f, &[chain(true)], &[chain(false)], 3), Err(GameError::Precondition(_))));
        assert!(matches!(UniformStrategy::new(&f, &[chain(false)], &[chain(true)], 9), Err(GameError::Precondition(_))));
    }

    #[test]
    fn bisimilar_sides_defeat_every_spoiler_move() {
        let one = pointed_from_json(r#"{"worlds":["r","a"],"edges":[["r","a"]],"valuation":{"p":["a"]},"point":"r"}"#).unwrap();
        let two =
            pointed_from_json(r#"{"worlds":["r","a","b"],"edges":[["r","a"],["r","b"]],"valuation":{"p":["a","b"]},"point":"r"}"#).unwrap();
        let p0 = initial_position(&[one], &[two], 4);
        let d = BisimilarMuDuplicator::unchecked(&p0);
        let r = bounded_exhaustive_spoiler(&p0, &d, SpoilerAlphabet::default(), 500_000, Exec::Sequential, |_| false).unwrap();
        assert!(!r.truncated);
        assert!(r.plays > 0);
        assert_eq!(r.spoiler_wins, 0);
    }

    #[test]
    fn identical_sides_cannot_be_separated() {
        let p0 = initial_position(&[chain(true)], &[chain(true)], 2);
        let f = parse_mu("p").unwrap();
        assert!(UniformStrategy::new(&f, &[chain(true)], &[chain(true)], 2).is_err());
        let r = bounded_exhaustive_spoiler(&p0, &GreedyMuDuplicator, SpoilerAlphabet::default(), 100_000, Exec::Sequential, |_| false)
            .unwrap();
        assert_eq!(r.spoiler_wins, 0);
    }
}
