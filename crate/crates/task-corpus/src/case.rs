//! Structural case views: generators and mutators work on typed grid walks
//! and digit lists, converting to ground example atoms only at the edges.

use crate::error::CorpusError;
use logic_core::{Atom, GridState, Term};

/// Where the folded result (or the `[0]` tag) sits in a digit-task atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitLayout {
    /// `f(Digits, Result)` with an integer result.
    ResultLast,
    /// `f(Result, Digits)` with an integer result.
    ResultFirst,
    /// `f(Digits, [Tag])` with a singleton tag list.
    TagLast,
    /// `f([Tag], Digits)` with a singleton tag list.
    TagFirst,
}

impl DigitLayout {
    pub fn tail_is_first(self) -> bool {
        matches!(self, DigitLayout::ResultFirst | DigitLayout::TagFirst)
    }

    pub fn tail_is_tag(self) -> bool {
        matches!(self, DigitLayout::TagLast | DigitLayout::TagFirst)
    }
}

/// A digit-task case: the primary digit list plus the result/tag digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitCase {
    pub digits: Vec<i64>,
    pub tail: i64,
    pub layout: DigitLayout,
}

/// One generated case in structural form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CaseData {
    /// Grid-walk case: the visited states in order.
    Walk(Vec<GridState>),
    Digits(DigitCase),
}

impl CaseData {
    /// States in a walk, digits in the primary list otherwise.
    pub fn length(&self) -> usize {
        match self {
            CaseData::Walk(states) => states.len(),
            CaseData::Digits(d) => d.digits.len(),
        }
    }

    /// The ground example atom `f(...)` for this case.
    pub fn atom(&self) -> Atom {
        match self {
            CaseData::Walk(states) => {
                let list = Term::List(states.iter().map(|s| s.to_term()).collect());
                let last = states.last().expect("walk cases are non-empty").to_term();
                Atom::new("f", vec![list, last])
            }
            CaseData::Digits(d) => {
                let list = Term::List(d.digits.iter().map(|x| Term::Int(*x)).collect());
                let tail = if d.layout.tail_is_tag() {
                    Term::List(vec![Term::Int(d.tail)])
                } else {
                    Term::Int(d.tail)
                };
                let args = if d.layout.tail_is_first() {
                    vec![tail, list]
                } else {
                    vec![list, tail]
                };
                Atom::new("f", args)
            }
        }
    }

    /// Parse a grid-walk atom back into its state sequence.
    pub fn walk_from_atom(atom: &Atom) -> Result<Vec<GridState>, CorpusError> {
        let malformed = || CorpusError::MalformedCase(atom.to_string());
        let [Term::List(items), _] = atom.args.as_slice() else {
            return Err(malformed());
        };
        let states: Option<Vec<GridState>> = items.iter().map(GridState::from_term).collect();
        match states {
            Some(s) if !s.is_empty() => Ok(s),
            _ => Err(malformed()),
        }
    }

    /// Parse a digit-task atom under a known layout.
    pub fn digits_from_atom(atom: &Atom, layout: DigitLayout) -> Result<DigitCase, CorpusError> {
        let malformed = || CorpusError::MalformedCase(atom.to_string());
        let [a, b] = atom.args.as_slice() else {
            return Err(malformed());
        };
        let (tail_term, list_term) = if layout.tail_is_first() { (a, b) } else { (b, a) };
        let digits = logic_core::as_int_list(list_term).ok_or_else(malformed)?;
        let tail = match (layout.tail_is_tag(), tail_term) {
            (false, Term::Int(x)) => *x,
            (true, t) => match logic_core::as_int_list(t).as_deref() {
                Some([x]) => *x,
                _ => return Err(malformed()),
            },
            _ => return Err(malformed()),
        };
        Ok(DigitCase {
            digits,
            tail,
            layout,
        })
    }
}

/// Structural distance between two cases, counting differing symbol slots:
/// per state, the mario cell / target cell / target type / background each
/// count once; per digit case, each differing digit and the tail. `None`
/// when shapes are incomparable.
pub fn edit_distance(a: &CaseData, b: &CaseData) -> Option<usize> {
    match (a, b) {
        (CaseData::Walk(xs), CaseData::Walk(ys)) if xs.len() == ys.len() => {
            let mut d = 0;
            for (x, y) in xs.iter().zip(ys) {
                d += usize::from((x.m_row, x.m_col) != (y.m_row, y.m_col));
                d += usize::from((x.t_row, x.t_col) != (y.t_row, y.t_col));
                d += usize::from(x.target != y.target);
                d += usize::from(x.bg != y.bg);
            }
            Some(d)
        }
        (CaseData::Digits(x), CaseData::Digits(y))
            if x.layout == y.layout && x.digits.len() == y.digits.len() =>
        {
            let digit_diffs = x
                .digits
                .iter()
                .zip(&y.digits)
                .filter(|(p, q)| p != q)
                .count();
            Some(digit_diffs + usize::from(x.tail != y.tail))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use logic_core::{parse_atom, Background, TargetType};

    fn st(m: (i64, i64), t: (i64, i64)) -> GridState {
        GridState {
            m_row: m.0,
            m_col: m.1,
            t_row: t.0,
            t_col: t.1,
            target: TargetType::Coin,
            bg: Background::Sea,
        }
    }

    #[test]
    fn walk_atom_round_trips() {
        let walk = vec![st((0, 0), (0, 1)), st((0, 1), (0, 1))];
        let case = CaseData::Walk(walk.clone());
        let atom = case.atom();
        assert_eq!(CaseData::walk_from_atom(&atom).unwrap(), walk);
        let text = atom.to_string();
        let reparsed = parse_atom(&text).unwrap();
        assert_eq!(CaseData::walk_from_atom(&reparsed).unwrap(), walk);
    }

    #[test]
    fn digit_atoms_round_trip_in_all_layouts() {
        for layout in [
            DigitLayout::ResultLast,
            DigitLayout::ResultFirst,
            DigitLayout::TagLast,
            DigitLayout::TagFirst,
        ] {
            let case = DigitCase {
                digits: vec![2, 3, 4],
                tail: 9,
                layout,
            };
            let atom = CaseData::Digits(case.clone()).atom();
            assert_eq!(CaseData::digits_from_atom(&atom, layout).unwrap(), case);
        }
    }

    #[test]
    fn result_layouts_place_the_integer() {
        let last = CaseData::Digits(DigitCase {
            digits: vec![1, 2, 3],
            tail: 6,
            layout: DigitLayout::ResultLast,
        });
        assert_eq!(last.atom().to_string(), "f([1,2,3],6)");
        let first = CaseData::Digits(DigitCase {
            digits: vec![1, 2, 3],
            tail: 6,
            layout: DigitLayout::ResultFirst,
        });
        assert_eq!(first.atom().to_string(), "f(6,[1,2,3])");
        let tag = CaseData::Digits(DigitCase {
            digits: vec![1, 2, 3],
            tail: 0,
            layout: DigitLayout::TagLast,
        });
        assert_eq!(tag.atom().to_string(), "f([1,2,3],[0])");
    }

    #[test]
    fn edit_distance_counts_cells_not_coordinates() {
        let a = CaseData::Walk(vec![st((0, 0), (2, 2))]);
        let b = CaseData::Walk(vec![st((1, 1), (2, 2))]);
        assert_eq!(edit_distance(&a, &b), Some(1));
        let c = CaseData::Walk(vec![st((0, 0), (2, 2)), st((0, 1), (2, 2))]);
        assert_eq!(edit_distance(&a, &c), None);
    }

    #[test]
    fn edit_distance_on_digit_cases() {
        let mk = |digits: &[i64], tail| {
            CaseData::Digits(DigitCase {
                digits: digits.to_vec(),
                tail,
                layout: DigitLayout::ResultLast,
            })
        };
        assert_eq!(edit_distance(&mk(&[1, 2, 3], 6), &mk(&[1, 2, 3], 6)), Some(0));
        assert_eq!(edit_distance(&mk(&[1, 2, 3], 6), &mk(&[1, 5, 3], 7)), Some(2));
        assert_eq!(edit_distance(&mk(&[1, 2, 3], 6), &mk(&[1, 2], 6)), None);
    }

    #[test]
    fn malformed_atoms_are_rejected() {
        let bad = parse_atom("f(7,8)").unwrap();
        assert!(CaseData::walk_from_atom(&bad).is_err());
        assert!(CaseData::digits_from_atom(&bad, DigitLayout::ResultLast).is_err());
    }
}
