//! Background knowledge: built-in predicates for the grid-walk and digit-list
//! task families, plus the typed state helpers the corpus generator shares.

use crate::term::{Symbol, Term};
use std::collections::BTreeMap;

pub const GRID_ROWS: i64 = 3;
pub const GRID_COLS: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetType {
    Coin,
    Bomb,
}

impl TargetType {
    pub const ALL: [TargetType; 2] = [TargetType::Coin, TargetType::Bomb];

    pub fn name(self) -> &'static str {
        match self {
            TargetType::Coin => "coin",
            TargetType::Bomb => "bomb",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|t| *t == self).unwrap()
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Background {
    Sea,
    Flower,
    Chess,
}

impl Background {
    pub const ALL: [Background; 3] = [Background::Sea, Background::Flower, Background::Chess];

    pub fn name(self) -> &'static str {
        match self {
            Background::Sea => "sea",
            Background::Flower => "flower",
            Background::Chess => "chess",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|t| *t == self).unwrap()
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    Left,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Left,
        Direction::Up,
        Direction::Down,
    ];

    /// (row delta, col delta); up decreases the row index.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::Right => (0, 1),
            Direction::Left => (0, -1),
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
        }
    }

    pub fn pred_name(self) -> &'static str {
        match self {
            Direction::Right => "right",
            Direction::Left => "left",
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

/// Diagonal single-step displacements, in row-major order.
pub const JUMP_DELTAS: [(i64, i64); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

pub fn in_grid(row: i64, col: i64) -> bool {
    (0..GRID_ROWS).contains(&row) && (0..GRID_COLS).contains(&col)
}

/// One frame of the grid walk: agent cell, target cell (both zero-indexed),
/// and the two static scene attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridState {
    pub m_row: i64,
    pub m_col: i64,
    pub t_row: i64,
    pub t_col: i64,
    pub target: TargetType,
    pub bg: Background,
}

impl GridState {
    pub fn to_term(&self) -> Term {
        Term::Struct(
            Symbol::new("state"),
            vec![
                Term::Int(self.m_row),
                Term::Int(self.m_col),
                Term::Int(self.t_row),
                Term::Int(self.t_col),
                Term::atom(self.target.name()),
                Term::atom(self.bg.name()),
            ],
        )
    }

    pub fn from_term(t: &Term) -> Option<GridState> {
        let Term::Struct(f, args) = t else { return None };
        if f.as_str() != "state" || args.len() != 6 {
            return None;
        }
        let int = |t: &Term| match t {
            Term::Int(i) => Some(*i),
            _ => None,
        };
        let name = |t: &Term| match t {
            Term::Atom(s) => Some(s.as_str().to_string()),
            _ => None,
        };
        let s = GridState {
            m_row: int(&args[0])?,
            m_col: int(&args[1])?,
            t_row: int(&args[2])?,
            t_col: int(&args[3])?,
            target: TargetType::from_name(&name(&args[4])?)?,
            bg: Background::from_name(&name(&args[5])?)?,
        };
        if in_grid(s.m_row, s.m_col) && in_grid(s.t_row, s.t_col) {
            Some(s)
        } else {
            None
        }
    }

    /// Agent moved one cell; `None` if that leaves the grid.
    pub fn step(&self, d: Direction) -> Option<GridState> {
        let (dr, dc) = d.delta();
        self.displaced(dr, dc)
    }

    pub fn displaced(&self, dr: i64, dc: i64) -> Option<GridState> {
        let r = self.m_row + dr;
        let c = self.m_col + dc;
        if in_grid(r, c) {
            Some(GridState {
                m_row: r,
                m_col: c,
                ..*self
            })
        } else {
            None
        }
    }

    pub fn manhattan(&self) -> i64 {
        (self.m_row - self.t_row).abs() + (self.m_col - self.t_col).abs()
    }

    pub fn at_target(&self) -> bool {
        self.m_row == self.t_row && self.m_col == self.t_col
    }
}

pub fn int_list(xs: &[i64]) -> Term {
    Term::List(xs.iter().map(|x| Term::Int(*x)).collect())
}

pub fn as_int_list(t: &Term) -> Option<Vec<i64>> {
    let Term::List(items) = t else { return None };
    items
        .iter()
        .map(|i| match i {
            Term::Int(x) => Some(*x),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    Move(Direction),
    Jump,
    Terminate,
    Far,
    AttrTarget(TargetType),
    AttrBg(Background),
    SumStep,
    ProductStep,
    EqSingle,
    LessStep,
    MoreStep,
    IsZero,
    IsEmpty,
    HeadOf,
}

impl BuiltinKind {
    pub fn arity(self) -> usize {
        match self {
            BuiltinKind::AttrTarget(_)
            | BuiltinKind::AttrBg(_)
            | BuiltinKind::IsZero
            | BuiltinKind::IsEmpty => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BgError {
    #[error("unknown background predicate: {0}")]
    UnknownPredicate(String),
    #[error("background predicate {pred} expects {expected} args, got {got}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
}

/// A named set of built-in predicates. Binary predicates fill two-argument
/// template slots; monadic predicates fill the one-argument test slots.
pub struct BackgroundDomain {
    name: &'static str,
    builtins: BTreeMap<Symbol, BuiltinKind>,
    binary: Vec<Symbol>,
    monadic: Vec<Symbol>,
}

impl BackgroundDomain {
    fn build(name: &'static str, entries: &[(&str, BuiltinKind)]) -> Self {
        let builtins: BTreeMap<Symbol, BuiltinKind> = entries
            .iter()
            .map(|(n, k)| (Symbol::new(n), *k))
            .collect();
        let mut binary = Vec::new();
        let mut monadic = Vec::new();
        for (sym, kind) in &builtins {
            match kind.arity() {
                1 => monadic.push(sym.clone()),
                _ => binary.push(sym.clone()),
            }
        }
        BackgroundDomain {
            name,
            builtins,
            binary,
            monadic,
        }
    }

    /// Grid-walk domain: moves over state lists plus scene attribute tests.
    pub fn mario() -> Self {
        use BuiltinKind::*;
        Self::build(
            "mario",
            &[
                ("right", Move(Direction::Right)),
                ("left", Move(Direction::Left)),
                ("up", Move(Direction::Up)),
                ("down", Move(Direction::Down)),
                ("jump", Jump),
                ("terminate", Terminate),
                ("far", Far),
                ("coin", AttrTarget(TargetType::Coin)),
                ("bomb", AttrTarget(TargetType::Bomb)),
                ("sea", AttrBg(Background::Sea)),
                ("flower", AttrBg(Background::Flower)),
                ("chess", AttrBg(Background::Chess)),
            ],
        )
    }

    /// Digit-list domain: arithmetic folds and order tests over int lists.
    pub fn mnist() -> Self {
        use BuiltinKind::*;
        Self::build(
            "mnist",
            &[
                ("add", SumStep),
                ("multi", ProductStep),
                ("eq", EqSingle),
                ("less", LessStep),
                ("more", MoreStep),
                ("zero", IsZero),
                ("empty", IsEmpty),
                ("head", HeadOf),
            ],
        )
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "mario" => Some(Self::mario()),
            "mnist" => Some(Self::mnist()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn is_background(&self, pred: &Symbol) -> bool {
        self.builtins.contains_key(pred)
    }

    pub fn lookup(&self, pred: &Symbol) -> Option<BuiltinKind> {
        self.builtins.get(pred).copied()
    }

    /// Binary built-ins, sorted by name (the slot enumeration order).
    pub fn binary_preds(&self) -> &[Symbol] {
        &self.binary
    }

    /// Monadic built-ins, sorted by name.
    pub fn monadic_preds(&self) -> &[Symbol] {
        &self.monadic
    }

    /// Evaluate a built-in over deeply-resolved arguments.
    ///
    /// Returns candidate full argument tuples for the caller to unify against
    /// the actual arguments; inputs of the wrong shape or with unbound input
    /// positions yield no candidates. Errors are reserved for calls that could
    /// never be right (unknown predicate, wrong arg count).
    pub fn eval(&self, pred: &Symbol, args: &[Term]) -> Result<Vec<Vec<Term>>, BgError> {
        let kind = self
            .builtins
            .get(pred)
            .copied()
            .ok_or_else(|| BgError::UnknownPredicate(pred.as_str().to_string()))?;
        if args.len() != kind.arity() {
            return Err(BgError::ArityMismatch {
                pred: pred.as_str().to_string(),
                expected: kind.arity(),
                got: args.len(),
            });
        }
        Ok(eval_kind(kind, args))
    }
}

fn state_list(t: &Term) -> Option<Vec<GridState>> {
    let Term::List(items) = t else { return None };
    items.iter().map(GridState::from_term).collect()
}

fn states_to_term(states: &[GridState]) -> Term {
    Term::List(states.iter().map(GridState::to_term).collect())
}

fn eval_kind(kind: BuiltinKind, args: &[Term]) -> Vec<Vec<Term>> {
    match kind {
        BuiltinKind::Move(dir) => {
            let Some(states) = state_list(&args[0]) else {
                return vec![];
            };
            if states.len() < 2 {
                return vec![];
            }
            if states[0].step(dir) == Some(states[1]) {
                vec![vec![args[0].clone(), states_to_term(&states[1..])]]
            } else {
                vec![]
            }
        }
        BuiltinKind::Jump => {
            let Some(states) = state_list(&args[0]) else {
                return vec![];
            };
            if states.len() < 2 {
                return vec![];
            }
            let ok = JUMP_DELTAS
                .iter()
                .any(|(dr, dc)| states[0].displaced(*dr, *dc) == Some(states[1]));
            if ok {
                vec![vec![args[0].clone(), states_to_term(&states[1..])]]
            } else {
                vec![]
            }
        }
        BuiltinKind::Terminate => {
            let Some(states) = state_list(&args[0]) else {
                return vec![];
            };
            if states.len() == 1 && states[0].at_target() {
                vec![vec![args[0].clone(), states[0].to_term()]]
            } else {
                vec![]
            }
        }
        BuiltinKind::Far => {
            let Some(states) = state_list(&args[0]) else {
                return vec![];
            };
            let is_step = || {
                Direction::ALL
                    .iter()
                    .any(|d| states[0].step(*d) == Some(states[1]))
            };
            if states.len() == 2 && states[1].manhattan() > states[0].manhattan() && is_step() {
                vec![vec![args[0].clone(), states[1].to_term()]]
            } else {
                vec![]
            }
        }
        BuiltinKind::AttrTarget(t) => match GridState::from_term(&args[0]) {
            Some(s) if s.target == t => vec![vec![args[0].clone()]],
            _ => vec![],
        },
        BuiltinKind::AttrBg(b) => match GridState::from_term(&args[0]) {
            Some(s) if s.bg == b => vec![vec![args[0].clone()]],
            _ => vec![],
        },
        BuiltinKind::SumStep | BuiltinKind::ProductStep => {
            let Some(xs) = as_int_list(&args[0]) else {
                return vec![];
            };
            if xs.len() < 2 {
                return vec![];
            }
            let folded = match kind {
                BuiltinKind::SumStep => xs[0] + xs[1],
                _ => xs[0] * xs[1],
            };
            let mut rest = vec![folded];
            rest.extend_from_slice(&xs[2..]);
            vec![vec![args[0].clone(), int_list(&rest)]]
        }
        BuiltinKind::EqSingle => {
            let Some(xs) = as_int_list(&args[0]) else {
                return vec![];
            };
            if xs.len() == 1 {
                vec![vec![args[0].clone(), Term::Int(xs[0])]]
            } else {
                vec![]
            }
        }
        BuiltinKind::LessStep | BuiltinKind::MoreStep => {
            let Some(xs) = as_int_list(&args[0]) else {
                return vec![];
            };
            match xs.len() {
                // A single remaining digit pairs with any tag digit; emit all
                // ten so generation and checking go through the same path.
                1 => (0..10)
                    .map(|z| vec![args[0].clone(), int_list(&[z])])
                    .collect(),
                n if n >= 2 => {
                    let ok = match kind {
                        BuiltinKind::LessStep => xs[0] < xs[1],
                        _ => xs[0] > xs[1],
                    };
                    if ok {
                        vec![vec![args[0].clone(), int_list(&xs[1..])]]
                    } else {
                        vec![]
                    }
                }
                _ => vec![],
            }
        }
        BuiltinKind::IsZero => match as_int_list(&args[0]) {
            Some(xs) if xs == [0] => vec![vec![args[0].clone()]],
            _ => vec![],
        },
        BuiltinKind::IsEmpty => match as_int_list(&args[0]) {
            Some(xs) if xs.is_empty() => vec![vec![args[0].clone()]],
            _ => vec![],
        },
        BuiltinKind::HeadOf => {
            let Term::List(items) = &args[0] else {
                return vec![];
            };
            match items.first() {
                Some(h) if h.is_ground() => vec![vec![args[0].clone(), h.clone()]],
                _ => vec![],
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(m_row: i64, m_col: i64, t_row: i64, t_col: i64) -> GridState {
        GridState {
            m_row,
            m_col,
            t_row,
            t_col,
            target: TargetType::Coin,
            bg: Background::Sea,
        }
    }

    fn eval1(d: &BackgroundDomain, pred: &str, args: &[Term]) -> Vec<Vec<Term>> {
        d.eval(&Symbol::new(pred), args).unwrap()
    }

    #[test]
    fn state_term_round_trip() {
        let s = st(2, 1, 0, 2);
        assert_eq!(GridState::from_term(&s.to_term()), Some(s));
    }

    #[test]
    fn from_term_rejects_off_grid() {
        let mut s = st(1, 1, 1, 1);
        s.m_col = 3;
        assert_eq!(GridState::from_term(&s.to_term()), None);
        s.m_col = -1;
        assert_eq!(GridState::from_term(&s.to_term()), None);
    }

    #[test]
    fn move_right_consumes_first_state() {
        let d = BackgroundDomain::mario();
        let s1 = st(1, 0, 1, 2);
        let s2 = s1.step(Direction::Right).unwrap();
        let s3 = s2.step(Direction::Right).unwrap();
        let input = states_to_term(&[s1, s2, s3]);
        let out = eval1(&d, "right", &[input.clone(), Term::Var(0)]);
        assert_eq!(out, vec![vec![input, states_to_term(&[s2, s3])]]);
    }

    #[test]
    fn move_fails_on_wrong_direction() {
        let d = BackgroundDomain::mario();
        let s1 = st(1, 0, 1, 2);
        let s2 = s1.step(Direction::Right).unwrap();
        let input = states_to_term(&[s1, s2]);
        assert!(eval1(&d, "left", &[input.clone(), Term::Var(0)]).is_empty());
        assert!(eval1(&d, "up", &[input, Term::Var(0)]).is_empty());
    }

    #[test]
    fn jump_accepts_any_diagonal() {
        let d = BackgroundDomain::mario();
        let s1 = st(1, 1, 0, 0);
        for (dr, dc) in JUMP_DELTAS {
            let s2 = s1.displaced(dr, dc).unwrap();
            let input = states_to_term(&[s1, s2]);
            assert_eq!(eval1(&d, "jump", &[input, Term::Var(0)]).len(), 1);
        }
        let s_right = s1.step(Direction::Right).unwrap();
        let input = states_to_term(&[s1, s_right]);
        assert!(eval1(&d, "jump", &[input, Term::Var(0)]).is_empty());
    }

    #[test]
    fn terminate_requires_singleton_at_target() {
        let d = BackgroundDomain::mario();
        let hit = st(1, 2, 1, 2);
        let miss = st(1, 1, 1, 2);
        let out = eval1(&d, "terminate", &[states_to_term(&[hit]), Term::Var(0)]);
        assert_eq!(out, vec![vec![states_to_term(&[hit]), hit.to_term()]]);
        assert!(eval1(&d, "terminate", &[states_to_term(&[miss]), Term::Var(0)]).is_empty());
        assert!(eval1(&d, "terminate", &[states_to_term(&[hit, hit]), Term::Var(0)]).is_empty());
    }

    #[test]
    fn far_requires_one_step_distance_increase() {
        let d = BackgroundDomain::mario();
        let s1 = st(1, 1, 0, 0);
        let away = s1.step(Direction::Down).unwrap();
        let toward = s1.step(Direction::Up).unwrap();
        let out = eval1(&d, "far", &[states_to_term(&[s1, away]), Term::Var(0)]);
        assert_eq!(out, vec![vec![states_to_term(&[s1, away]), away.to_term()]]);
        assert!(eval1(&d, "far", &[states_to_term(&[s1, toward]), Term::Var(0)]).is_empty());
        // A two-cell teleport is not a move even if the distance grows.
        let teleport = st(2, 2, 0, 0);
        assert!(eval1(&d, "far", &[states_to_term(&[s1, teleport]), Term::Var(0)]).is_empty());
    }

    #[test]
    fn attribute_tests_check_struct_fields() {
        let d = BackgroundDomain::mario();
        let s = st(1, 1, 2, 2);
        assert_eq!(eval1(&d, "coin", &[s.to_term()]).len(), 1);
        assert!(eval1(&d, "bomb", &[s.to_term()]).is_empty());
        assert_eq!(eval1(&d, "sea", &[s.to_term()]).len(), 1);
        assert!(eval1(&d, "flower", &[s.to_term()]).is_empty());
        // A state list is not a state.
        assert!(eval1(&d, "coin", &[states_to_term(&[s])]).is_empty());
    }

    #[test]
    fn add_and_multi_fold_two_heads() {
        let d = BackgroundDomain::mnist();
        let out = eval1(&d, "add", &[int_list(&[2, 3, 4]), Term::Var(0)]);
        assert_eq!(out, vec![vec![int_list(&[2, 3, 4]), int_list(&[5, 4])]]);
        let out = eval1(&d, "multi", &[int_list(&[2, 3, 4]), Term::Var(0)]);
        assert_eq!(out, vec![vec![int_list(&[2, 3, 4]), int_list(&[6, 4])]]);
        assert!(eval1(&d, "add", &[int_list(&[7]), Term::Var(0)]).is_empty());
    }

    #[test]
    fn eq_unwraps_singleton() {
        let d = BackgroundDomain::mnist();
        let out = eval1(&d, "eq", &[int_list(&[9]), Term::Var(0)]);
        assert_eq!(out, vec![vec![int_list(&[9]), Term::Int(9)]]);
        assert!(eval1(&d, "eq", &[int_list(&[9, 1]), Term::Var(0)]).is_empty());
    }

    #[test]
    fn less_steps_when_ordered() {
        let d = BackgroundDomain::mnist();
        let out = eval1(&d, "less", &[int_list(&[1, 3, 7]), Term::Var(0)]);
        assert_eq!(out, vec![vec![int_list(&[1, 3, 7]), int_list(&[3, 7])]]);
        assert!(eval1(&d, "less", &[int_list(&[3, 1]), Term::Var(0)]).is_empty());
        assert!(eval1(&d, "more", &[int_list(&[3, 1]), Term::Var(0)]).len() == 1);
    }

    #[test]
    fn less_singleton_emits_all_tags() {
        let d = BackgroundDomain::mnist();
        let out = eval1(&d, "less", &[int_list(&[7]), Term::Var(0)]);
        assert_eq!(out.len(), 10);
        assert_eq!(out[0][1], int_list(&[0]));
        assert_eq!(out[9][1], int_list(&[9]));
    }

    #[test]
    fn zero_empty_head() {
        let d = BackgroundDomain::mnist();
        assert_eq!(eval1(&d, "zero", &[int_list(&[0])]).len(), 1);
        assert!(eval1(&d, "zero", &[int_list(&[0, 0])]).is_empty());
        assert_eq!(eval1(&d, "empty", &[int_list(&[])]).len(), 1);
        let out = eval1(&d, "head", &[int_list(&[4, 2]), Term::Var(0)]);
        assert_eq!(out[0][1], Term::Int(4));
    }

    #[test]
    fn eval_errors() {
        let d = BackgroundDomain::mario();
        assert!(matches!(
            d.eval(&Symbol::new("warp"), &[Term::Int(0)]),
            Err(BgError::UnknownPredicate(_))
        ));
        assert!(matches!(
            d.eval(&Symbol::new("right"), &[Term::Int(0)]),
            Err(BgError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn slot_candidate_lists_are_sorted() {
        let m = BackgroundDomain::mario();
        let names: Vec<&str> = m.binary_preds().iter().map(|s| s.as_str()).collect();
        assert_eq!(
            names,
            ["down", "far", "jump", "left", "right", "terminate", "up"]
        );
        let names: Vec<&str> = m.monadic_preds().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["bomb", "chess", "coin", "flower", "sea"]);
        let n = BackgroundDomain::mnist();
        let names: Vec<&str> = n.binary_preds().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["add", "eq", "head", "less", "more", "multi"]);
        let names: Vec<&str> = n.monadic_preds().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["empty", "zero"]);
    }

    #[test]
    fn non_ground_input_yields_no_candidates() {
        let d = BackgroundDomain::mnist();
        let partial = Term::List(vec![Term::Int(1), Term::Var(0)]);
        assert!(eval1(&d, "add", &[partial, Term::Var(1)]).is_empty());
    }
}
