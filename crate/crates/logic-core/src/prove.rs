//! Depth-first SLD resolution with on-the-fly clause invention.
//!
//! The solver proves a stack of goals against built-in background predicates
//! and a growing clause store. When a goal has no matching clause and the
//! store is below its size bound, new clauses are conjectured by filling
//! template slots with predicate symbols ([`crate::metarule`]), then retracted
//! on backtracking. Guards keep the search finite:
//!
//! * recursive-template literals must shrink their first argument (structural
//!   node count) on every re-entry;
//! * a ground goal equal to a ground ancestor on the current path fails;
//! * per-goal depth and global step/wall budgets cut everything else.

use crate::domain::BackgroundDomain;
use crate::metarule::{instantiate_metarule, MetaRuleId, SlotKind};
use crate::term::{Atom, Bindings, Clause, Symbol};
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

/// Why a search was aborted (as opposed to finishing exhausted).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    Steps,
    Wall,
}

/// `Ok(true)`: proof found and accepted, unwind. `Ok(false)`: branch
/// exhausted, state restored. `Err`: budget hit, state abandoned.
pub type SResult = Result<bool, Stop>;

/// Memoized outcome of an isolated ground-goal proof under a frozen store.
enum GroundFact {
    Proved,
    /// Failed with this much depth headroom; a retry with no more headroom
    /// must fail too, a retry with more may yet succeed.
    FailedWithin(u32),
}

pub struct Engine<'a> {
    pub domain: &'a BackgroundDomain,
    pub bindings: Bindings,
    pub steps: u64,
    max_steps: u64,
    deadline: Option<Instant>,
    max_depth: u32,
    /// Ground-goal memo, consulted only while the store is frozen. Entries
    /// are relative to one clause store; owners must clear between stores.
    ground_memo: HashMap<String, GroundFact>,
}

impl<'a> Engine<'a> {
    pub fn new(
        domain: &'a BackgroundDomain,
        max_steps: u64,
        deadline: Option<Instant>,
        max_depth: u32,
    ) -> Self {
        Engine {
            domain,
            bindings: Bindings::new(),
            steps: 0,
            max_steps,
            deadline,
            max_depth,
            ground_memo: HashMap::new(),
        }
    }

    /// Drop all memoized ground-goal outcomes; required whenever the frozen
    /// clause store they were computed against changes.
    pub fn clear_ground_memo(&mut self) {
        self.ground_memo.clear();
    }
}

/// The clause store plus the invention configuration driving it.
pub struct Program {
    pub clauses: Vec<Clause>,
    pub target: Symbol,
    pub subset: Vec<MetaRuleId>,
    pub max_clauses: usize,
    pub max_invented: usize,
    /// When false the store is frozen: resolution only, no new clauses.
    pub induce: bool,
}

impl Program {
    pub fn new(target: Symbol, subset: Vec<MetaRuleId>, max_clauses: usize, max_invented: usize) -> Self {
        Program {
            clauses: Vec::new(),
            target,
            subset,
            max_clauses,
            max_invented,
            induce: true,
        }
    }

    pub fn frozen(clauses: Vec<Clause>, target: Symbol) -> Self {
        Program {
            clauses,
            target,
            subset: Vec::new(),
            max_clauses: 0,
            max_invented: 0,
            induce: false,
        }
    }

    /// Order-independent key for the current clause multiset.
    pub fn store_key(&self) -> String {
        let mut parts: Vec<String> = self.clauses.iter().map(|c| c.display_string()).collect();
        parts.sort();
        parts.join("\n")
    }

    fn contains_clause(&self, c: &Clause) -> bool {
        self.clauses
            .iter()
            .any(|d| d.head == c.head && d.body == c.body)
    }

    fn invented_name(i: usize) -> Symbol {
        Symbol::new(&format!("f_{i}"))
    }

    fn invented_index(pred: &Symbol) -> Option<usize> {
        pred.as_str().strip_prefix("f_")?.parse().ok()
    }

    /// Highest invented-predicate index occurring anywhere in the store.
    fn invented_in_use(&self) -> usize {
        let mut k = 0;
        for c in &self.clauses {
            for pred in std::iter::once(&c.head.pred).chain(c.body.iter().map(|a| &a.pred)) {
                if let Some(i) = Self::invented_index(pred) {
                    k = k.max(i);
                }
            }
        }
        k
    }

    /// Symbols eligible for a binary template slot of a clause headed by
    /// `head`: background predicates (sorted by name), then invented
    /// predicates strictly below the head in the call order target > f_1 >
    /// f_2 > background, then exactly one fresh invented while capacity
    /// remains. The ordering bans upward calls (an auxiliary predicate never
    /// calls the target), so the only recursion expressible is a template's
    /// own designated literal and learned programs terminate by
    /// construction; it also keeps the search from drowning in mutually
    /// recursive stores. Trying invention last keeps the search from
    /// tunneling through auxiliary predicates when a direct clause exists.
    fn binary_candidates(&self, domain: &BackgroundDomain, head: &Symbol) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = domain.binary_preds().to_vec();
        v.sort();
        let head_level = Self::invented_index(head).unwrap_or(0);
        let used = self.invented_in_use().min(self.max_invented);
        for i in head_level + 1..=used {
            v.push(Self::invented_name(i));
        }
        if used < self.max_invented {
            v.push(Self::invented_name(used + 1));
        }
        v
    }

    fn slot_candidates(&self, domain: &BackgroundDomain, kind: SlotKind, head: &Symbol) -> Vec<Symbol> {
        match kind {
            SlotKind::Binary => self.binary_candidates(domain, head),
            SlotKind::Monadic => domain.monadic_preds().to_vec(),
        }
    }
}

struct AncNode {
    atom: Atom,
    next: Option<Rc<AncNode>>,
}

pub struct GoalEntry {
    pub atom: Atom,
    depth: u32,
    /// Upper bound (exclusive) on the structural size of the first argument,
    /// set on the re-entrant literal of recursive-template clauses.
    size_guard: Option<usize>,
    anc: Option<Rc<AncNode>>,
    /// Marks the root of an isolated ground-goal proof so it is not
    /// re-isolated on pop.
    isolated: bool,
}

impl GoalEntry {
    pub fn root(atom: Atom) -> Self {
        GoalEntry {
            atom,
            depth: 0,
            size_guard: None,
            anc: None,
            isolated: false,
        }
    }
}

/// Prove every goal on the stack (last entry first), calling `k` each time
/// all goals hold. `k` returning `Ok(false)` resumes the search as if this
/// proof had failed; `Ok(true)` accepts and unwinds.
///
/// On `Ok(false)` the goal stack, bindings, and store are restored exactly.
pub fn solve(
    eng: &mut Engine,
    goals: &mut Vec<GoalEntry>,
    prog: &mut Program,
    k: &mut dyn FnMut(&mut Engine, &mut Program) -> SResult,
) -> SResult {
    let Some(g) = goals.pop() else {
        return k(eng, prog);
    };
    eng.steps += 1;
    if eng.steps > eng.max_steps {
        return Err(Stop::Steps);
    }
    if let Some(dl) = eng.deadline {
        if eng.steps & 511 == 0 && Instant::now() >= dl {
            return Err(Stop::Wall);
        }
    }
    if g.depth > eng.max_depth {
        goals.push(g);
        return Ok(false);
    }
    let resolved = eng.bindings.resolve_atom(&g.atom);
    if let Some(limit) = g.size_guard {
        let shrinking = resolved
            .args
            .first()
            .map(|a| a.is_ground() && a.size() < limit)
            .unwrap_or(false);
        if !shrinking {
            goals.push(g);
            return Ok(false);
        }
    }
    let res_ground = resolved.is_ground();
    if res_ground {
        let mut node = g.anc.clone();
        while let Some(n) = node {
            if n.atom == resolved {
                goals.push(g);
                return Ok(false);
            }
            node = n.next.clone();
        }
    }
    let child_anc = if res_ground {
        Some(Rc::new(AncNode {
            atom: resolved.clone(),
            next: g.anc.clone(),
        }))
    } else {
        g.anc.clone()
    };

    // A ground goal against a frozen store binds nothing its siblings can
    // see, so it can be proved once in isolation and the verdict memoized.
    // Failures are only trusted at equal-or-less depth headroom; the memo is
    // per-store and cleared by owners when the store changes.
    if !prog.induce && res_ground && !g.isolated {
        let remaining = eng.max_depth - g.depth;
        let key = resolved.to_string();
        match eng.ground_memo.get(&key) {
            Some(GroundFact::Proved) => {
                if solve(eng, goals, prog, k)? {
                    return Ok(true);
                }
                goals.push(g);
                return Ok(false);
            }
            Some(GroundFact::FailedWithin(r)) if *r >= remaining => {
                goals.push(g);
                return Ok(false);
            }
            _ => {}
        }
        let m = eng.bindings.mark();
        let mut sub = vec![GoalEntry {
            atom: resolved.clone(),
            depth: g.depth,
            size_guard: None,
            anc: None,
            isolated: true,
        }];
        let proved = solve(eng, &mut sub, prog, &mut |_, _| Ok(true))?;
        eng.bindings.undo(m);
        if proved {
            eng.ground_memo.insert(key, GroundFact::Proved);
            if solve(eng, goals, prog, k)? {
                return Ok(true);
            }
        } else {
            let cap = match eng.ground_memo.get(&key) {
                Some(GroundFact::FailedWithin(r)) => remaining.max(*r),
                _ => remaining,
            };
            eng.ground_memo.insert(key, GroundFact::FailedWithin(cap));
        }
        goals.push(g);
        return Ok(false);
    }

    if eng.domain.is_background(&g.atom.pred) {
        let cands = eng
            .domain
            .eval(&g.atom.pred, &resolved.args)
            .expect("background literal arity is fixed at clause construction");
        for cand in cands {
            let m = eng.bindings.mark();
            let matched = cand.len() == g.atom.args.len()
                && g.atom
                    .args
                    .iter()
                    .zip(&cand)
                    .all(|(a, c)| eng.bindings.unify(a, c));
            if matched && solve(eng, goals, prog, k)? {
                return Ok(true);
            }
            eng.bindings.undo(m);
        }
        goals.push(g);
        return Ok(false);
    }

    for idx in 0..prog.clauses.len() {
        if prog.clauses[idx].head.pred != g.atom.pred {
            continue;
        }
        if try_clause(eng, goals, prog, k, &g, idx, &child_anc)? {
            return Ok(true);
        }
    }

    if prog.induce && prog.clauses.len() < prog.max_clauses {
        for rule in MetaRuleId::ALL {
            if !prog.subset.contains(&rule) {
                continue;
            }
            for binding in enumerate_bindings(rule, prog, eng.domain, &g.atom.pred) {
                let Some(clause) = instantiate_metarule(rule, &g.atom.pred, &binding) else {
                    continue;
                };
                if prog.contains_clause(&clause) {
                    continue;
                }
                prog.clauses.push(clause);
                let idx = prog.clauses.len() - 1;
                match try_clause(eng, goals, prog, k, &g, idx, &child_anc) {
                    Ok(true) => return Ok(true),
                    Ok(false) => {
                        prog.clauses.pop();
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }

    goals.push(g);
    Ok(false)
}

/// All slot-binding tuples for `rule` with head predicate `head`, slot 0
/// outermost, each slot's candidates in name order.
fn enumerate_bindings(
    rule: MetaRuleId,
    prog: &Program,
    domain: &BackgroundDomain,
    head: &Symbol,
) -> Vec<Vec<Symbol>> {
    let per_slot: Vec<Vec<Symbol>> = rule
        .slots()
        .iter()
        .map(|kind| prog.slot_candidates(domain, *kind, head))
        .collect();
    let mut out = vec![Vec::new()];
    for slot in &per_slot {
        let mut next = Vec::with_capacity(out.len() * slot.len());
        for prefix in &out {
            for sym in slot {
                let mut b = prefix.clone();
                b.push(sym.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

fn try_clause(
    eng: &mut Engine,
    goals: &mut Vec<GoalEntry>,
    prog: &mut Program,
    k: &mut dyn FnMut(&mut Engine, &mut Program) -> SResult,
    g: &GoalEntry,
    idx: usize,
    child_anc: &Option<Rc<AncNode>>,
) -> SResult {
    let clause = prog.clauses[idx].clone();
    let m = eng.bindings.mark();
    let offset = eng.bindings.alloc(clause.n_vars());
    let head = clause.head.shift_vars(offset);
    let matched = head.args.len() == g.atom.args.len()
        && g.atom
            .args
            .iter()
            .zip(&head.args)
            .all(|(a, h)| eng.bindings.unify(a, h));
    if !matched {
        eng.bindings.undo(m);
        return Ok(false);
    }
    let recursive = clause
        .origin
        .as_ref()
        .map(|o| o.metarule == MetaRuleId::Recursion)
        .unwrap_or(false);
    // Guard value: structural size of the goal's first argument right now.
    // A non-ground first argument gets guard 0, which no child can beat —
    // the branch is cut rather than risking unbounded re-entry.
    let guard = if recursive {
        let first = eng.bindings.resolve(&g.atom.args[0]);
        if first.is_ground() {
            Some(first.size())
        } else {
            Some(0)
        }
    } else {
        None
    };
    let base = goals.len();
    for (i, lit) in clause.body.iter().enumerate().rev() {
        goals.push(GoalEntry {
            atom: lit.shift_vars(offset),
            depth: g.depth + 1,
            size_guard: if recursive && i == 1 { guard } else { None },
            anc: child_anc.clone(),
            isolated: false,
        });
    }
    match solve(eng, goals, prog, k) {
        Ok(true) => Ok(true),
        Ok(false) => {
            goals.truncate(base);
            eng.bindings.undo(m);
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BackgroundDomain, Background, GridState, TargetType};
    use crate::term::Term;

    fn walk_state(m_row: i64, m_col: i64) -> GridState {
        GridState {
            m_row,
            m_col,
            t_row: 0,
            t_col: 2,
            target: TargetType::Coin,
            bg: Background::Sea,
        }
    }

    fn case_term(states: &[GridState]) -> Term {
        Term::List(states.iter().map(|s| s.to_term()).collect())
    }

    fn prove_frozen(
        domain: &BackgroundDomain,
        clauses: Vec<Clause>,
        goal: Atom,
    ) -> SResult {
        let mut eng = Engine::new(domain, 1_000_000, None, 30);
        let mut prog = Program::frozen(clauses, Symbol::new("f"));
        let mut goals = vec![GoalEntry::root(goal)];
        solve(&mut eng, &mut goals, &mut prog, &mut |_, _| Ok(true))
    }

    fn chain_clause(head: &str, q: &str, r: &str) -> Clause {
        instantiate_metarule(
            MetaRuleId::Chain,
            &Symbol::new(head),
            &[Symbol::new(q), Symbol::new(r)],
        )
        .unwrap()
    }

    #[test]
    fn frozen_program_proves_one_step_case() {
        let d = BackgroundDomain::mario();
        let s1 = walk_state(0, 1);
        let s2 = walk_state(0, 2);
        let goal = Atom::new("f", vec![case_term(&[s1, s2]), s2.to_term()]);
        let prog = vec![chain_clause("f", "right", "terminate")];
        assert_eq!(prove_frozen(&d, prog.clone(), goal), Ok(true));
        let s_down = walk_state(1, 1);
        let bad = Atom::new("f", vec![case_term(&[s1, s_down]), s_down.to_term()]);
        assert_eq!(prove_frozen(&d, prog, bad), Ok(false));
    }

    #[test]
    fn recursive_program_walks_whole_case() {
        let d = BackgroundDomain::mario();
        let states = [walk_state(2, 2), walk_state(1, 2), walk_state(0, 2)];
        let goal = Atom::new(
            "f",
            vec![case_term(&states), states[2].to_term()],
        );
        let rec = instantiate_metarule(
            MetaRuleId::Recursion,
            &Symbol::new("f"),
            &[Symbol::new("up")],
        )
        .unwrap();
        let base = instantiate_metarule(
            MetaRuleId::Identity,
            &Symbol::new("f"),
            &[Symbol::new("terminate")],
        )
        .unwrap();
        assert_eq!(prove_frozen(&d, vec![rec, base], goal), Ok(true));
    }

    #[test]
    fn step_budget_aborts_search() {
        let d = BackgroundDomain::mario();
        let s1 = walk_state(0, 1);
        let s2 = walk_state(0, 2);
        let goal = Atom::new("f", vec![case_term(&[s1, s2]), s2.to_term()]);
        let mut eng = Engine::new(&d, 3, None, 30);
        let mut prog = Program::new(Symbol::new("f"), MetaRuleId::ALL.to_vec(), 4, 2);
        let mut goals = vec![GoalEntry::root(goal)];
        assert_eq!(
            solve(&mut eng, &mut goals, &mut prog, &mut |_, _| Ok(true)),
            Err(Stop::Steps)
        );
    }

    #[test]
    fn ground_ancestor_repeat_fails_not_loops() {
        // f(A,B):-g(A,B). g(A,B):-f(A,B). Ground goal cycles and must fail.
        let d = BackgroundDomain::mnist();
        let c1 = instantiate_metarule(
            MetaRuleId::Identity,
            &Symbol::new("f"),
            &[Symbol::new("g")],
        )
        .unwrap();
        let c2 = instantiate_metarule(
            MetaRuleId::Identity,
            &Symbol::new("g"),
            &[Symbol::new("f")],
        )
        .unwrap();
        let goal = Atom::new(
            "f",
            vec![crate::domain::int_list(&[1]), crate::domain::int_list(&[2])],
        );
        assert_eq!(prove_frozen(&d, vec![c1, c2], goal), Ok(false));
    }

    #[test]
    fn size_guard_blocks_non_shrinking_recursion() {
        // f(A,B):-less(A,C),f(C,B): on a singleton list, `less` rewrites
        // [x] to [z] without shrinking, so the recursive branch must be cut.
        let d = BackgroundDomain::mnist();
        let rec = instantiate_metarule(
            MetaRuleId::Recursion,
            &Symbol::new("f"),
            &[Symbol::new("less")],
        )
        .unwrap();
        let goal = Atom::new(
            "f",
            vec![crate::domain::int_list(&[7]), crate::domain::int_list(&[3])],
        );
        let r = prove_frozen(&d, vec![rec], goal);
        assert_eq!(r, Ok(false));
    }

    #[test]
    fn abduction_finds_single_chain_clause() {
        let d = BackgroundDomain::mario();
        let s1 = walk_state(0, 1);
        let s2 = walk_state(0, 2);
        let goal = Atom::new("f", vec![case_term(&[s1, s2]), s2.to_term()]);
        let mut eng = Engine::new(&d, 1_000_000, None, 30);
        let mut prog = Program::new(Symbol::new("f"), vec![MetaRuleId::Chain], 1, 2);
        let mut goals = vec![GoalEntry::root(goal)];
        let mut store = None;
        let r = solve(&mut eng, &mut goals, &mut prog, &mut |_, p| {
            store = Some(p.clauses.clone());
            Ok(true)
        });
        assert_eq!(r, Ok(true));
        let store = store.unwrap();
        assert_eq!(store.len(), 1);
        assert_eq!(
            store[0].display_string(),
            "f(A,B):-right(A,C),terminate(C,B)."
        );
    }

    #[test]
    fn rejected_proof_backtracks_to_next_store() {
        // Force k to reject the first store; the search must surface a
        // different clause rather than repeating or giving up. On [7] ~> 7
        // both eq and head apply, in that enumeration order.
        let d = BackgroundDomain::mnist();
        let goal = Atom::new(
            "f",
            vec![crate::domain::int_list(&[7]), Term::Int(7)],
        );
        let mut eng = Engine::new(&d, 10_000_000, None, 30);
        let mut prog = Program::new(Symbol::new("f"), vec![MetaRuleId::Identity], 1, 2);
        let mut goals = vec![GoalEntry::root(goal)];
        let mut stores = Vec::new();
        let r = solve(&mut eng, &mut goals, &mut prog, &mut |_, p| {
            stores.push(p.clauses[0].display_string());
            Ok(stores.len() >= 2)
        });
        assert_eq!(r, Ok(true));
        assert_eq!(stores, ["f(A,B):-eq(A,B).", "f(A,B):-head(A,B)."]);
    }

    #[test]
    fn binary_candidates_offer_one_fresh_invented() {
        let d = BackgroundDomain::mario();
        let prog = Program::new(Symbol::new("f"), vec![], 4, 2);
        let names: Vec<String> = prog
            .binary_candidates(&d, &Symbol::new("f"))
            .iter()
            .map(|s| s.as_str().to_string())
            .collect();
        assert_eq!(
            names,
            ["down", "far", "jump", "left", "right", "terminate", "up", "f_1"]
        );
    }

    #[test]
    fn binary_candidates_extend_after_invention() {
        let d = BackgroundDomain::mario();
        let mut prog = Program::new(Symbol::new("f"), vec![], 4, 2);
        prog.clauses.push(
            instantiate_metarule(
                MetaRuleId::Identity,
                &Symbol::new("f"),
                &[Symbol::new("f_1")],
            )
            .unwrap(),
        );
        let names: Vec<String> = prog
            .binary_candidates(&d, &Symbol::new("f"))
            .iter()
            .map(|s| s.as_str().to_string())
            .collect();
        assert!(names.contains(&"f_1".to_string()));
        assert!(names.contains(&"f_2".to_string()));
    }

    #[test]
    fn binary_candidates_never_call_upward() {
        // A clause headed by an auxiliary predicate may not mention the
        // target or the auxiliary itself; deeper auxiliaries stay available.
        let d = BackgroundDomain::mario();
        let mut prog = Program::new(Symbol::new("f"), vec![], 4, 2);
        prog.clauses.push(
            instantiate_metarule(
                MetaRuleId::Identity,
                &Symbol::new("f"),
                &[Symbol::new("f_1")],
            )
            .unwrap(),
        );
        let names: Vec<String> = prog
            .binary_candidates(&d, &Symbol::new("f_1"))
            .iter()
            .map(|s| s.as_str().to_string())
            .collect();
        assert!(!names.contains(&"f".to_string()));
        assert!(!names.contains(&"f_1".to_string()));
        assert!(names.contains(&"f_2".to_string()));
    }
}
