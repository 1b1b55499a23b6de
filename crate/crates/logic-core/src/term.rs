//! First-order terms, atoms, clauses and a backtracking binding store.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Interned-ish predicate/constant name. Cloning is a refcount bump.
#[derive(Clone, Debug, Eq)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Int(i64),
    Atom(Symbol),
    List(Vec<Term>),
    Struct(Symbol, Vec<Term>),
}

impl Term {
    pub fn atom(s: &str) -> Term {
        Term::Atom(Symbol::new(s))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Atom(_) => true,
            Term::List(items) => items.iter().all(Term::is_ground),
            Term::Struct(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Total node count; the well-founded measure behind the recursion guard.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) | Term::Atom(_) => 1,
            Term::List(items) => 1 + items.iter().map(Term::size).sum::<usize>(),
            Term::Struct(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(*v),
            Term::Int(_) | Term::Atom(_) => None,
            Term::List(items) | Term::Struct(_, items) => {
                items.iter().filter_map(Term::max_var).max()
            }
        }
    }

    /// Rebase every variable id by `offset` (standardizing a clause apart).
    pub fn shift_vars(&self, offset: u32) -> Term {
        match self {
            Term::Var(v) => Term::Var(v + offset),
            Term::Int(_) | Term::Atom(_) => self.clone(),
            Term::List(items) => Term::List(items.iter().map(|t| t.shift_vars(offset)).collect()),
            Term::Struct(f, args) => Term::Struct(
                f.clone(),
                args.iter().map(|t| t.shift_vars(offset)).collect(),
            ),
        }
    }

    /// Longest top-level list length occurring in this term.
    pub fn max_list_len(&self) -> usize {
        match self {
            Term::List(items) => items
                .len()
                .max(items.iter().map(Term::max_list_len).max().unwrap_or(0)),
            Term::Struct(_, args) => args.iter().map(Term::max_list_len).max().unwrap_or(0),
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom {
            pred: Symbol::new(pred),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn shift_vars(&self, offset: u32) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.shift_vars(offset)).collect(),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        self.args.iter().filter_map(Term::max_var).max()
    }
}

/// Where an induced clause came from: which rule template and which
/// second-order binding produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseOrigin {
    pub metarule: crate::metarule::MetaRuleId,
    pub binding: Vec<(String, Symbol)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
    pub origin: Option<ClauseOrigin>,
}

impl Clause {
    /// Number of distinct variables (ids are dense 0..n by construction).
    pub fn n_vars(&self) -> u32 {
        let m = self
            .head
            .max_var()
            .into_iter()
            .chain(self.body.iter().filter_map(Atom::max_var))
            .max();
        m.map(|v| v + 1).unwrap_or(0)
    }
}

fn var_name(idx: usize) -> String {
    if idx < 26 {
        ((b'A' + idx as u8) as char).to_string()
    } else {
        format!("V{idx}")
    }
}

fn fmt_term(t: &Term, names: &HashMap<u32, String>, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(names.get(v).map(String::as_str).unwrap_or("_")),
        Term::Int(i) => out.push_str(&i.to_string()),
        Term::Atom(s) => out.push_str(s.as_str()),
        Term::List(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                fmt_term(item, names, out);
            }
            out.push(']');
        }
        Term::Struct(f, args) => {
            out.push_str(f.as_str());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                fmt_term(a, names, out);
            }
            out.push(')');
        }
    }
}

fn collect_vars(t: &Term, order: &mut Vec<u32>) {
    match t {
        Term::Var(v) => {
            if !order.contains(v) {
                order.push(*v);
            }
        }
        Term::List(items) | Term::Struct(_, items) => {
            for i in items {
                collect_vars(i, order);
            }
        }
        _ => {}
    }
}

fn fmt_atom(a: &Atom, names: &HashMap<u32, String>, out: &mut String) {
    out.push_str(a.pred.as_str());
    if !a.args.is_empty() {
        out.push('(');
        for (i, t) in a.args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            fmt_term(t, names, out);
        }
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order = Vec::new();
        collect_vars(self, &mut order);
        let names: HashMap<u32, String> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, var_name(i)))
            .collect();
        let mut s = String::new();
        fmt_term(self, &names, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order = Vec::new();
        for t in &self.args {
            collect_vars(t, &mut order);
        }
        let names: HashMap<u32, String> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, var_name(i)))
            .collect();
        let mut s = String::new();
        fmt_atom(self, &names, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_string())
    }
}

impl Clause {
    /// Canonical notation: variables renamed A,B,C,.. by first occurrence,
    /// e.g. `f(A,B):-right(A,C),f(C,B).`
    pub fn display_string(&self) -> String {
        let mut order = Vec::new();
        for t in &self.head.args {
            collect_vars(t, &mut order);
        }
        for a in &self.body {
            for t in &a.args {
                collect_vars(t, &mut order);
            }
        }
        let names: HashMap<u32, String> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, var_name(i)))
            .collect();
        let mut s = String::new();
        fmt_atom(&self.head, &names, &mut s);
        if !self.body.is_empty() {
            s.push_str(":-");
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                fmt_atom(a, &names, &mut s);
            }
        }
        s.push('.');
        s
    }
}

/// Backtrackable variable bindings with an undo trail.
pub struct Bindings {
    slots: Vec<Option<Term>>,
    trail: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
pub struct Mark {
    trail: usize,
    slots: usize,
}

impl Default for Bindings {
    fn default() -> Self {
        Self::new()
    }
}

impl Bindings {
    pub fn new() -> Self {
        Bindings {
            slots: Vec::new(),
            trail: Vec::new(),
        }
    }

    /// Allocate `n` fresh unbound variables, returning the first id.
    pub fn alloc(&mut self, n: u32) -> u32 {
        let base = self.slots.len() as u32;
        self.slots.resize(self.slots.len() + n as usize, None);
        base
    }

    pub fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            slots: self.slots.len(),
        }
    }

    pub fn undo(&mut self, m: Mark) {
        while self.trail.len() > m.trail {
            let v = self.trail.pop().unwrap();
            self.slots[v as usize] = None;
        }
        self.slots.truncate(m.slots);
    }

    fn bind(&mut self, v: u32, t: Term) {
        self.slots[v as usize] = Some(t);
        self.trail.push(v);
    }

    /// Follow a variable chain until an unbound var or a non-var term.
    pub fn walk(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = cur {
            match self.slots.get(v as usize).and_then(|s| s.as_ref()) {
                Some(next) => cur = next.clone(),
                None => return Term::Var(v),
            }
        }
        cur
    }

    /// Fully substitute bound variables throughout the term.
    pub fn resolve(&self, t: &Term) -> Term {
        let w = self.walk(t);
        match w {
            Term::List(items) => Term::List(items.iter().map(|i| self.resolve(i)).collect()),
            Term::Struct(f, args) => {
                Term::Struct(f.clone(), args.iter().map(|a| self.resolve(a)).collect())
            }
            other => other,
        }
    }

    pub fn resolve_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.resolve(t)).collect(),
        }
    }

    fn occurs(&self, v: u32, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => v == w,
            Term::List(items) | Term::Struct(_, items) => {
                items.iter().any(|i| self.occurs(v, i))
            }
            _ => false,
        }
    }

    /// Unification with occurs-check. On failure bindings made so far by this
    /// call remain on the trail; callers undo to a mark.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let wa = self.walk(a);
        let wb = self.walk(b);
        match (wa, wb) {
            (Term::Var(x), Term::Var(y)) => {
                if x != y {
                    self.bind(x, Term::Var(y));
                }
                true
            }
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(x, &t) {
                    false
                } else {
                    self.bind(x, t);
                    true
                }
            }
            (Term::Int(x), Term::Int(y)) => x == y,
            (Term::Atom(x), Term::Atom(y)) => x == y,
            (Term::List(xs), Term::List(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| self.unify(x, y))
            }
            (Term::Struct(f, xs), Term::Struct(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }
}
