//! Inductive logic programming core: first-order terms, clause templates,
//! SLD resolution with clause invention, and background knowledge for the
//! grid-walk and digit-list task families.
//!
//! The central entry point is [`mil::mil_induce`]: given positive and
//! negative example atoms, a subset of the six clause templates, and a
//! background domain, it searches for the smallest consistent clause set.

pub mod domain;
pub mod metarule;
pub mod mil;
pub mod parse;
pub mod prove;
pub mod term;

pub use domain::{BackgroundDomain, BgError, BuiltinKind};
pub use domain::{
    as_int_list, in_grid, int_list, Background, Direction, GridState, TargetType, GRID_COLS,
    GRID_ROWS, JUMP_DELTAS,
};
pub use metarule::{
    classify_clause, instantiate_checked, instantiate_metarule, FillError, MetaRuleId,
    ParseMetaRuleError, SlotKind,
};
pub use mil::{
    entails, mil_induce, prove_goal, Hypothesis, MilLimits, MilOutcome, MilResult, ProveLimits,
};
pub use parse::{parse_atom, parse_clause, parse_program, parse_term, ParseError};
pub use prove::{solve, Engine, GoalEntry, Program, SResult, Stop};
pub use term::{Atom, Bindings, Clause, ClauseOrigin, Symbol, Term};
