//! Randomized invariants for unification and the clause text round-trip.

use logic_core::{
    instantiate_metarule, parse_program, Bindings, MetaRuleId, Symbol, Term,
};
use proptest::prelude::*;

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0u32..4).prop_map(Term::Var),
        (-9i64..10).prop_map(Term::Int),
        prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::atom),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Term::List),
            prop::collection::vec(inner, 1..3).prop_map(|args| Term::Struct(Symbol::new("st"), args)),
        ]
    })
}

fn n_vars(terms: &[&Term]) -> u32 {
    terms.iter().filter_map(|t| t.max_var()).max().map_or(0, |v| v + 1)
}

proptest! {
    /// A successful unification is a real unifier: both sides resolve to the
    /// same term, and resolution reaches a fixed point (no cyclic
    /// substitution can do that — it would keep a Var alive forever).
    #[test]
    fn unify_success_is_acyclic_unifier(a in term_strategy(), b in term_strategy()) {
        let mut bindings = Bindings::new();
        bindings.alloc(n_vars(&[&a, &b]));
        if bindings.unify(&a, &b) {
            let ra = bindings.resolve(&a);
            let rb = bindings.resolve(&b);
            prop_assert_eq!(&ra, &rb);
            prop_assert_eq!(bindings.resolve(&ra), ra.clone());
        }
    }

    /// Unifiability does not depend on argument order.
    #[test]
    fn unify_is_symmetric(a in term_strategy(), b in term_strategy()) {
        let vars = n_vars(&[&a, &b]);
        let mut left = Bindings::new();
        left.alloc(vars);
        let mut right = Bindings::new();
        right.alloc(vars);
        prop_assert_eq!(left.unify(&a, &b), right.unify(&b, &a));
    }

    /// A variable never unifies with a structure that contains it.
    #[test]
    fn unify_rejects_occurs(wrap_list in any::<bool>(), depth in 1usize..4) {
        let mut t = Term::Var(0);
        for _ in 0..depth {
            t = if wrap_list {
                Term::List(vec![Term::Int(1), t])
            } else {
                Term::Struct(Symbol::new("st"), vec![t])
            };
        }
        let mut bindings = Bindings::new();
        bindings.alloc(1);
        prop_assert!(!bindings.unify(&Term::Var(0), &t));
    }

    /// Any instantiable template clause survives a print/parse round trip
    /// with head, body, and template origin intact.
    #[test]
    fn clause_text_round_trips(
        rule_idx in 0usize..6,
        head in prop_oneof![Just("f"), Just("f_1")],
        q in prop_oneof![Just("up"), Just("add"), Just("f_1"), Just("f_2"), Just("q0")],
        r in prop_oneof![Just("terminate"), Just("eq"), Just("bomb"), Just("r0")],
    ) {
        let rule = MetaRuleId::from_index(rule_idx).unwrap();
        let binding: Vec<Symbol> = match rule.slots().len() {
            1 => vec![Symbol::new(q)],
            _ => vec![Symbol::new(q), Symbol::new(r)],
        };
        if let Some(clause) = instantiate_metarule(rule, &Symbol::new(head), &binding) {
            let parsed = parse_program(&clause.display_string()).unwrap();
            prop_assert_eq!(parsed.len(), 1);
            prop_assert_eq!(&parsed[0].head, &clause.head);
            prop_assert_eq!(&parsed[0].body, &clause.body);
            prop_assert_eq!(
                parsed[0].origin.as_ref().map(|o| o.metarule),
                Some(rule)
            );
        }
    }
}
