//! Induction driver: iterative deepening over the clause-store bound.
//!
//! Positives are proven in sequence with clause invention enabled; each
//! complete store is then screened against the negatives with invention
//! frozen. The first store proving every positive and no negative wins, so
//! results are minimal in clause count and deterministic in search order.

use crate::domain::BackgroundDomain;
use crate::metarule::MetaRuleId;
use crate::prove::{solve, Engine, GoalEntry, Program, SResult, Stop};
use crate::term::{Atom, Clause};
use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct MilLimits {
    pub max_clauses: usize,
    pub max_invented: usize,
    pub max_steps: u64,
    pub timeout: Option<Duration>,
    /// Per-proof depth bound; `None` derives one from the longest list in
    /// the examples.
    pub max_depth: Option<u32>,
}

impl Default for MilLimits {
    fn default() -> Self {
        MilLimits {
            max_clauses: 4,
            max_invented: 2,
            max_steps: 2_000_000,
            timeout: None,
            max_depth: None,
        }
    }
}

/// An induced clause set for one target predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub clauses: Vec<Clause>,
}

impl Hypothesis {
    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Distinct template ids used across the clauses, pool order.
    pub fn metarules_used(&self) -> Vec<MetaRuleId> {
        MetaRuleId::ALL
            .into_iter()
            .filter(|m| {
                self.clauses
                    .iter()
                    .any(|c| c.origin.as_ref().map(|o| o.metarule) == Some(*m))
            })
            .collect()
    }

    /// Invented predicate names (`f_1`, `f_2`, …) with their arities, sorted.
    pub fn invented_arity(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        let mut note = |name: &str, arity: usize| {
            if name.starts_with("f_") && !out.iter().any(|(n, _)| n == name) {
                out.push((name.to_string(), arity));
            }
        };
        for c in &self.clauses {
            note(c.head.pred.as_str(), c.head.args.len());
            for b in &c.body {
                note(b.pred.as_str(), b.args.len());
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(&c.display_string())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MilOutcome {
    Success(Hypothesis),
    Timeout,
    NoRule,
}

impl MilOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            MilOutcome::Success(_) => "success",
            MilOutcome::Timeout => "timeout",
            MilOutcome::NoRule => "norule",
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, MilOutcome::Success(_))
    }
}

#[derive(Clone, Debug)]
pub struct MilResult {
    pub outcome: MilOutcome,
    pub steps: u64,
    pub elapsed: Duration,
}

fn auto_depth(pos: &[Atom], neg: &[Atom]) -> u32 {
    let longest = pos
        .iter()
        .chain(neg)
        .flat_map(|a| a.args.iter())
        .map(|t| t.max_list_len())
        .max()
        .unwrap_or(0);
    (2 * longest + 4) as u32
}

/// Prove `pos` in order, growing the store, and call `accept` whenever all
/// hold. Positives are ground and share no variables, so once one has been
/// proven under a given store multiset, re-proving it by another derivation
/// that lands on the same multiset cannot change anything downstream — each
/// positive keeps a seen-set of store keys and such re-entries are cut.
fn prove_positives(
    eng: &mut Engine,
    prog: &mut Program,
    pos: &[Atom],
    seen: &mut [HashSet<String>],
    accept: &mut dyn FnMut(&mut Engine, &mut Program) -> SResult,
) -> SResult {
    let Some((first, rest)) = pos.split_first() else {
        return accept(eng, prog);
    };
    let (seen_here, seen_rest) = seen.split_first_mut().expect("one seen-set per positive");
    let mut goals = vec![GoalEntry::root(first.clone())];
    solve(eng, &mut goals, prog, &mut |eng, prog| {
        if !seen_here.insert(prog.store_key()) {
            return Ok(false);
        }
        prove_positives(eng, prog, rest, &mut *seen_rest, &mut *accept)
    })
}

/// Search for a clause set proving all of `pos` and none of `neg`, using
/// only templates in `subset`.
pub fn mil_induce(
    pos: &[Atom],
    neg: &[Atom],
    subset: &[MetaRuleId],
    domain: &BackgroundDomain,
    limits: &MilLimits,
) -> MilResult {
    assert!(!pos.is_empty(), "induction needs at least one positive example");
    let start = Instant::now();
    let deadline = limits.timeout.map(|t| start + t);
    let depth = limits.max_depth.unwrap_or_else(|| auto_depth(pos, neg));
    let target = pos[0].pred.clone();
    let mut total_steps = 0u64;
    for bound in 1..=limits.max_clauses {
        let remaining = limits.max_steps.saturating_sub(total_steps);
        if remaining == 0 {
            return MilResult {
                outcome: MilOutcome::Timeout,
                steps: total_steps,
                elapsed: start.elapsed(),
            };
        }
        let mut eng = Engine::new(domain, remaining, deadline, depth);
        let mut prog = Program::new(target.clone(), subset.to_vec(), bound, limits.max_invented);
        let mut seen: Vec<HashSet<String>> = vec![HashSet::new(); pos.len()];
        let mut found: Option<Vec<Clause>> = None;
        let result = {
            let found_ref = &mut found;
            prove_positives(&mut eng, &mut prog, pos, &mut seen, &mut |eng, prog| {
                prog.induce = false;
                eng.clear_ground_memo();
                let mut consistent = true;
                for n in neg {
                    let mut ngoals = vec![GoalEntry::root(n.clone())];
                    match solve(eng, &mut ngoals, prog, &mut |_, _| Ok(true)) {
                        Ok(true) => {
                            consistent = false;
                            break;
                        }
                        Ok(false) => {}
                        Err(e) => {
                            prog.induce = true;
                            return Err(e);
                        }
                    }
                }
                prog.induce = true;
                if consistent {
                    *found_ref = Some(prog.clauses.clone());
                    Ok(true)
                } else {
                    Ok(false)
                }
            })
        };
        total_steps += eng.steps;
        match result {
            Ok(true) => {
                return MilResult {
                    outcome: MilOutcome::Success(Hypothesis {
                        clauses: found.expect("acceptance closure stored the clause set"),
                    }),
                    steps: total_steps,
                    elapsed: start.elapsed(),
                }
            }
            Ok(false) => {}
            Err(_) => {
                return MilResult {
                    outcome: MilOutcome::Timeout,
                    steps: total_steps,
                    elapsed: start.elapsed(),
                }
            }
        }
    }
    MilResult {
        outcome: MilOutcome::NoRule,
        steps: total_steps,
        elapsed: start.elapsed(),
    }
}

#[derive(Clone, Debug)]
pub struct ProveLimits {
    pub max_steps: u64,
    pub max_depth: Option<u32>,
}

impl Default for ProveLimits {
    fn default() -> Self {
        ProveLimits {
            max_steps: 500_000,
            max_depth: None,
        }
    }
}

/// Does the frozen clause set prove the goal? `Err` when the budget ran out
/// before either answer.
pub fn prove_goal(
    clauses: &[Clause],
    goal: &Atom,
    domain: &BackgroundDomain,
    limits: &ProveLimits,
) -> Result<bool, Stop> {
    let depth = limits
        .max_depth
        .unwrap_or_else(|| auto_depth(std::slice::from_ref(goal), &[]));
    let mut eng = Engine::new(domain, limits.max_steps, None, depth);
    let mut prog = Program::frozen(clauses.to_vec(), goal.pred.clone());
    let mut goals = vec![GoalEntry::root(goal.clone())];
    solve(&mut eng, &mut goals, &mut prog, &mut |_, _| Ok(true))
}

/// Budget-hit checks count as non-entailment (logged at debug level).
pub fn entails(
    clauses: &[Clause],
    goal: &Atom,
    domain: &BackgroundDomain,
    limits: &ProveLimits,
) -> bool {
    match prove_goal(clauses, goal, domain, limits) {
        Ok(b) => b,
        Err(stop) => {
            log::debug!("entailment check hit budget ({stop:?}) for goal {goal}");
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Background, BackgroundDomain, GridState, TargetType};
    use crate::term::{Symbol, Term};

    fn st(m_row: i64, m_col: i64, t_row: i64, t_col: i64) -> GridState {
        GridState {
            m_row,
            m_col,
            t_row,
            t_col,
            target: TargetType::Bomb,
            bg: Background::Flower,
        }
    }

    fn case(states: &[GridState]) -> Term {
        Term::List(states.iter().map(|s| s.to_term()).collect())
    }

    #[test]
    fn one_step_task_induces_single_chain_clause() {
        let d = BackgroundDomain::mario();
        let mk = |c0: i64| {
            let s1 = st(2, c0, 2, c0 + 1);
            let s2 = s1.step(crate::domain::Direction::Right).unwrap();
            Atom::new("f", vec![case(&[s1, s2]), s2.to_term()])
        };
        let bad = {
            let s1 = st(1, 1, 1, 2);
            let s2 = s1.step(crate::domain::Direction::Down).unwrap();
            Atom::new("f", vec![case(&[s1, s2]), s2.to_term()])
        };
        let r = mil_induce(
            &[mk(0), mk(1)],
            &[bad],
            &[MetaRuleId::Chain],
            &d,
            &MilLimits::default(),
        );
        let MilOutcome::Success(h) = &r.outcome else {
            panic!("expected success, got {:?}", r.outcome)
        };
        assert_eq!(h.to_string(), "f(A,B):-right(A,C),terminate(C,B).");
        assert_eq!(h.metarules_used(), vec![MetaRuleId::Chain]);
    }

    #[test]
    fn impossible_subset_returns_norule() {
        let d = BackgroundDomain::mario();
        let s1 = st(2, 1, 2, 2);
        let s2 = s1.step(crate::domain::Direction::Right).unwrap();
        let pos = Atom::new("f", vec![case(&[s1, s2]), s2.to_term()]);
        let r = mil_induce(
            &[pos],
            &[],
            &[MetaRuleId::Precon],
            &d,
            &MilLimits::default(),
        );
        assert_eq!(r.outcome, MilOutcome::NoRule);
        assert!(r.steps > 0);
    }

    #[test]
    fn empty_subset_returns_norule() {
        let d = BackgroundDomain::mario();
        let s1 = st(2, 1, 2, 2);
        let s2 = s1.step(crate::domain::Direction::Right).unwrap();
        let pos = Atom::new("f", vec![case(&[s1, s2]), s2.to_term()]);
        let r = mil_induce(&[pos], &[], &[], &d, &MilLimits::default());
        assert_eq!(r.outcome, MilOutcome::NoRule);
    }

    #[test]
    fn tiny_step_budget_times_out() {
        let d = BackgroundDomain::mario();
        let s1 = st(2, 1, 2, 2);
        let s2 = s1.step(crate::domain::Direction::Right).unwrap();
        let pos = Atom::new("f", vec![case(&[s1, s2]), s2.to_term()]);
        let limits = MilLimits {
            max_steps: 2,
            ..Default::default()
        };
        let r = mil_induce(&[pos], &[], &[MetaRuleId::Chain], &d, &limits);
        assert_eq!(r.outcome, MilOutcome::Timeout);
        assert!(r.steps <= 3);
    }

    #[test]
    fn entailment_checks_agree_with_program_semantics() {
        let d = BackgroundDomain::mario();
        let prog = vec![crate::metarule::instantiate_metarule(
            MetaRuleId::Postcon,
            &Symbol::new("f"),
            &[Symbol::new("far"), Symbol::new("bomb")],
        )
        .unwrap()];
        let s1 = st(1, 1, 0, 0);
        let away = s1.step(crate::domain::Direction::Down).unwrap();
        let pos = Atom::new("f", vec![case(&[s1, away]), away.to_term()]);
        assert!(entails(&prog, &pos, &d, &ProveLimits::default()));
        let toward = s1.step(crate::domain::Direction::Up).unwrap();
        let neg = Atom::new("f", vec![case(&[s1, toward]), toward.to_term()]);
        assert!(!entails(&prog, &neg, &d, &ProveLimits::default()));
    }
}
