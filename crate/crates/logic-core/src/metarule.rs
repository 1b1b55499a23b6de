//! The fixed pool of second-order clause templates used during induction.
//!
//! Each template fixes a clause shape; induction fills the body predicate
//! slots with background, program, or invented predicate symbols.

use crate::term::{Atom, Clause, ClauseOrigin, Symbol, Term};
use std::fmt;
use std::str::FromStr;

/// Slot typing: binary slots take two-argument predicates, monadic slots take
/// one-argument test predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Binary,
    Monadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaRuleId {
    /// `P(A,B) :- Q(A,B)`
    Identity,
    /// `P(A,B) :- Q(B,A)`
    Inverse,
    /// `P(A,B) :- Q(A), R(A,B)`
    Precon,
    /// `P(A,B) :- Q(A,B), R(B)`
    Postcon,
    /// `P(A,B) :- Q(A,C), R(C,B)`
    Chain,
    /// `P(A,B) :- Q(A,C), P(C,B)` — the trailing literal re-enters the head
    /// predicate and is the only place self-reference is allowed.
    Recursion,
}

impl MetaRuleId {
    pub const ALL: [MetaRuleId; 6] = [
        MetaRuleId::Identity,
        MetaRuleId::Inverse,
        MetaRuleId::Precon,
        MetaRuleId::Postcon,
        MetaRuleId::Chain,
        MetaRuleId::Recursion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetaRuleId::Identity => "identity",
            MetaRuleId::Inverse => "inverse",
            MetaRuleId::Precon => "precon",
            MetaRuleId::Postcon => "postcon",
            MetaRuleId::Chain => "chain",
            MetaRuleId::Recursion => "recursion",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|m| *m == self).unwrap()
    }

    pub fn from_index(i: usize) -> Option<MetaRuleId> {
        Self::ALL.get(i).copied()
    }

    /// Body predicate slots to fill, in template order.
    pub fn slots(self) -> &'static [SlotKind] {
        match self {
            MetaRuleId::Identity | MetaRuleId::Inverse | MetaRuleId::Recursion => {
                &[SlotKind::Binary]
            }
            MetaRuleId::Precon => &[SlotKind::Monadic, SlotKind::Binary],
            MetaRuleId::Postcon => &[SlotKind::Binary, SlotKind::Monadic],
            MetaRuleId::Chain => &[SlotKind::Binary, SlotKind::Binary],
        }
    }

    pub fn slot_names(self) -> &'static [&'static str] {
        match self.slots().len() {
            1 => &["Q"],
            _ => &["Q", "R"],
        }
    }

    /// Template in clause notation, for documentation and reports.
    pub fn template(self) -> &'static str {
        match self {
            MetaRuleId::Identity => "P(A,B):-Q(A,B)",
            MetaRuleId::Inverse => "P(A,B):-Q(B,A)",
            MetaRuleId::Precon => "P(A,B):-Q(A),R(A,B)",
            MetaRuleId::Postcon => "P(A,B):-Q(A,B),R(B)",
            MetaRuleId::Chain => "P(A,B):-Q(A,C),R(C,B)",
            MetaRuleId::Recursion => "P(A,B):-Q(A,C),P(C,B)",
        }
    }
}

impl fmt::Display for MetaRuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown metarule name: {0}")]
pub struct ParseMetaRuleError(pub String);

impl FromStr for MetaRuleId {
    type Err = ParseMetaRuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetaRuleId::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| ParseMetaRuleError(s.to_string()))
    }
}

/// Fill a template's slots with concrete predicate symbols for head predicate
/// `head_pred`.
///
/// Returns `None` for degenerate instantiations: any body literal whose
/// predicate equals the head predicate is rejected, except the designated
/// recursive literal of [`MetaRuleId::Recursion`]. This bars unguarded
/// self-reference (e.g. `f(A,B):-f(A,B)` or left recursion through a
/// chain slot) while keeping the guarded recursive form.
pub fn instantiate_metarule(
    rule: MetaRuleId,
    head_pred: &Symbol,
    binding: &[Symbol],
) -> Option<Clause> {
    assert_eq!(
        binding.len(),
        rule.slots().len(),
        "binding arity must match template slots"
    );
    let a = Term::Var(0);
    let b = Term::Var(1);
    let c = Term::Var(2);
    let atom2 = |p: &Symbol, x: &Term, y: &Term| Atom {
        pred: p.clone(),
        args: vec![x.clone(), y.clone()],
    };
    let atom1 = |p: &Symbol, x: &Term| Atom {
        pred: p.clone(),
        args: vec![x.clone()],
    };
    let head = atom2(head_pred, &a, &b);
    let body = match rule {
        MetaRuleId::Identity => vec![atom2(&binding[0], &a, &b)],
        MetaRuleId::Inverse => vec![atom2(&binding[0], &b, &a)],
        MetaRuleId::Precon => vec![atom1(&binding[0], &a), atom2(&binding[1], &a, &b)],
        MetaRuleId::Postcon => vec![atom2(&binding[0], &a, &b), atom1(&binding[1], &b)],
        MetaRuleId::Chain => vec![atom2(&binding[0], &a, &c), atom2(&binding[1], &c, &b)],
        MetaRuleId::Recursion => vec![atom2(&binding[0], &a, &c), atom2(head_pred, &c, &b)],
    };
    let designated = match rule {
        MetaRuleId::Recursion => Some(1usize),
        _ => None,
    };
    for (i, lit) in body.iter().enumerate() {
        if Some(i) != designated && lit.pred == *head_pred {
            return None;
        }
    }
    let origin = ClauseOrigin {
        metarule: rule,
        binding: rule
            .slot_names()
            .iter()
            .zip(binding)
            .map(|(n, s)| (n.to_string(), s.clone()))
            .collect(),
    };
    Some(Clause {
        head,
        body,
        origin: Some(origin),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FillError {
    #[error("slot {slot} of {rule} needs a {expected:?} predicate, got {pred}")]
    ArityMismatch {
        rule: MetaRuleId,
        slot: &'static str,
        pred: String,
        expected: SlotKind,
    },
    #[error("slot {slot} of {rule} accepts only background test predicates, got {pred}")]
    IllegalMonadicFill {
        rule: MetaRuleId,
        slot: &'static str,
        pred: String,
    },
    #[error("filling {rule} with {pred} re-enters the head outside the recursive literal")]
    DegenerateSelfReference { rule: MetaRuleId, pred: String },
}

/// [`instantiate_metarule`] with slot typing validated against a domain.
///
/// Monadic slots accept only the domain's test predicates; binary slots
/// accept everything else (background binary predicates, the target, and
/// invented predicates, which are binary by convention).
pub fn instantiate_checked(
    rule: MetaRuleId,
    head_pred: &Symbol,
    binding: &[Symbol],
    domain: &crate::domain::BackgroundDomain,
) -> Result<Clause, FillError> {
    assert_eq!(
        binding.len(),
        rule.slots().len(),
        "binding arity must match template slots"
    );
    for ((kind, name), pred) in rule.slots().iter().zip(rule.slot_names()).zip(binding) {
        let is_test = domain.monadic_preds().contains(pred);
        let is_known_binary = domain.binary_preds().contains(pred)
            || pred == head_pred
            || pred.as_str() == "f"
            || pred.as_str().starts_with("f_");
        match kind {
            SlotKind::Monadic if is_known_binary => {
                return Err(FillError::ArityMismatch {
                    rule,
                    slot: name,
                    pred: pred.as_str().to_string(),
                    expected: SlotKind::Monadic,
                })
            }
            SlotKind::Monadic if !is_test => {
                return Err(FillError::IllegalMonadicFill {
                    rule,
                    slot: name,
                    pred: pred.as_str().to_string(),
                })
            }
            SlotKind::Binary if is_test => {
                return Err(FillError::ArityMismatch {
                    rule,
                    slot: name,
                    pred: pred.as_str().to_string(),
                    expected: SlotKind::Binary,
                })
            }
            _ => {}
        }
    }
    instantiate_metarule(rule, head_pred, binding).ok_or_else(|| {
        FillError::DegenerateSelfReference {
            rule,
            pred: head_pred.as_str().to_string(),
        }
    })
}

/// Recover which template (and slot binding) a clause instantiates, if any.
///
/// Mirrors [`instantiate_metarule`] exactly, so classification round-trips:
/// parsed clause text regains the origin — and with it the recursion guard —
/// that a search-produced clause would carry.
pub fn classify_clause(head: &Atom, body: &[Atom]) -> Option<ClauseOrigin> {
    if head.args != [Term::Var(0), Term::Var(1)] {
        return None;
    }
    let p = &head.pred;
    let is = |a: &Atom, vars: &[u32]| {
        a.args.len() == vars.len()
            && a.args
                .iter()
                .zip(vars)
                .all(|(t, v)| *t == Term::Var(*v))
    };
    let found = |rule: MetaRuleId, binding: Vec<Symbol>| {
        Some(ClauseOrigin {
            metarule: rule,
            binding: rule
                .slot_names()
                .iter()
                .zip(binding)
                .map(|(n, s)| (n.to_string(), s))
                .collect(),
        })
    };
    match body {
        [q] if is(q, &[0, 1]) && q.pred != *p => found(MetaRuleId::Identity, vec![q.pred.clone()]),
        [q] if is(q, &[1, 0]) && q.pred != *p => found(MetaRuleId::Inverse, vec![q.pred.clone()]),
        [q, r] if is(q, &[0]) && is(r, &[0, 1]) && q.pred != *p && r.pred != *p => {
            found(MetaRuleId::Precon, vec![q.pred.clone(), r.pred.clone()])
        }
        [q, r] if is(q, &[0, 1]) && is(r, &[1]) && q.pred != *p && r.pred != *p => {
            found(MetaRuleId::Postcon, vec![q.pred.clone(), r.pred.clone()])
        }
        [q, r] if is(q, &[0, 2]) && is(r, &[2, 1]) && q.pred != *p && r.pred == *p => {
            found(MetaRuleId::Recursion, vec![q.pred.clone()])
        }
        [q, r] if is(q, &[0, 2]) && is(r, &[2, 1]) && q.pred != *p && r.pred != *p => {
            found(MetaRuleId::Chain, vec![q.pred.clone(), r.pred.clone()])
        }
        _ => None,
    }
}
