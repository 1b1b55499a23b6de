//! Digit-list case enumeration and near-miss mutation: left-associative
//! add/multi folds whose intermediates all stay single digits, strictly
//! monotone sequences, and the four result/tag layouts.

use crate::case::{DigitCase, DigitLayout};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldOp {
    Add,
    Multi,
}

impl FoldOp {
    pub fn apply(self, a: i64, b: i64) -> i64 {
        match self {
            FoldOp::Add => a + b,
            FoldOp::Multi => a * b,
        }
    }
}

/// Left fold over the list with a per-step op choice; `None` as soon as an
/// intermediate leaves the digit range.
fn closed_fold(digits: &[i64], op_at: impl Fn(usize) -> FoldOp) -> Option<i64> {
    let mut v = digits[0];
    for (i, d) in digits[1..].iter().enumerate() {
        v = op_at(i).apply(v, *d);
        if !(0..=9).contains(&v) {
            return None;
        }
    }
    Some(v)
}

/// All digit lists of `len` in lexicographic order.
fn all_lists(len: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..10usize.pow(len as u32)).map(move |mut n| {
        let mut v = vec![0i64; len];
        for slot in v.iter_mut().rev() {
            *slot = (n % 10) as i64;
            n /= 10;
        }
        v
    })
}

/// Every (digits, result) case of a single-op cumulative fold.
pub fn cumulative_space(op: FoldOp, lengths: &[usize], layout: DigitLayout) -> Vec<DigitCase> {
    let mut out = Vec::new();
    for &len in lengths {
        for digits in all_lists(len) {
            if let Some(tail) = closed_fold(&digits, |_| op) {
                out.push(DigitCase {
                    digits,
                    tail,
                    layout,
                });
            }
        }
    }
    out
}

/// Every distinct (digits, result) pair reachable by some split point:
/// `first` for the leading folds, `second` for the rest.
pub fn fold_priority_space(first: FoldOp, second: FoldOp, lengths: &[usize]) -> Vec<DigitCase> {
    let mut out = Vec::new();
    for &len in lengths {
        for digits in all_lists(len) {
            let mut results: Vec<i64> = Vec::new();
            for split in 0..len {
                let folded =
                    closed_fold(&digits, |i| if i < split { first } else { second });
                if let Some(r) = folded {
                    if !results.contains(&r) {
                        results.push(r);
                    }
                }
            }
            for tail in results {
                out.push(DigitCase {
                    digits: digits.clone(),
                    tail,
                    layout: DigitLayout::ResultLast,
                });
            }
        }
    }
    out
}

/// Strictly monotone digit lists with the fixed `[0]` tag.
pub fn monotone_space(increasing: bool, lengths: &[usize], layout: DigitLayout) -> Vec<DigitCase> {
    fn ascending(len: usize, from: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for d in from..=9 {
            prefix.push(d);
            ascending(len, d + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for &len in lengths {
        let mut lists = Vec::new();
        ascending(len, 0, &mut Vec::new(), &mut lists);
        for mut digits in lists {
            if !increasing {
                digits.reverse();
            }
            out.push(DigitCase {
                digits,
                tail: 0,
                layout,
            });
        }
    }
    out
}

pub const NEAR_MISS_KINDS: usize = 2;

/// One-slot mutation of a positive digit case. Kinds: 0 shift the result/tag
/// by ±1..3 (kept inside the digit range), 1 replace one list digit.
pub fn near_miss(case: &DigitCase, kind: usize, rng: &mut ChaCha8Rng) -> Option<DigitCase> {
    let mut out = case.clone();
    match kind {
        0 => {
            let delta = 1 + rng.gen_range(0..3i64);
            let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let shifted = [case.tail + sign * delta, case.tail - sign * delta]
                .into_iter()
                .map(|t| t.clamp(0, 9))
                .find(|t| *t != case.tail)?;
            out.tail = shifted;
        }
        1 => {
            let i = rng.gen_range(0..case.digits.len());
            out.digits[i] = (case.digits[i] + 1 + rng.gen_range(0..9)) % 10;
        }
        _ => unreachable!("digit near-miss kind out of range"),
    }
    Some(out)
}

/// Uniform random case shape: independent digits and a random tail digit.
pub fn random_case(len: usize, layout: DigitLayout, rng: &mut ChaCha8Rng) -> DigitCase {
    DigitCase {
        digits: (0..len).map(|_| rng.gen_range(0..10)).collect(),
        tail: rng.gen_range(0..10),
        layout,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stream_rng;

    #[test]
    fn fold_keeps_intermediates_single_digit() {
        assert_eq!(closed_fold(&[2, 3, 4], |_| FoldOp::Add), Some(9));
        assert_eq!(closed_fold(&[5, 7, 0], |_| FoldOp::Add), None);
        assert_eq!(closed_fold(&[3, 3, 0], |_| FoldOp::Multi), Some(0));
        assert_eq!(closed_fold(&[4, 3, 0], |_| FoldOp::Multi), None);
    }

    #[test]
    fn cumulative_sum_length3_count() {
        let space = cumulative_space(FoldOp::Add, &[3], DigitLayout::ResultLast);
        assert_eq!(space.len(), 220);
        for c in &space {
            assert_eq!(c.digits.iter().sum::<i64>(), c.tail);
        }
    }

    #[test]
    fn fold_priority_deduplicates_split_results() {
        // [0,0,0]: every split folds to 0 → one case, not three.
        let space = fold_priority_space(FoldOp::Add, FoldOp::Multi, &[3]);
        let zeros: Vec<_> = space.iter().filter(|c| c.digits == [0, 0, 0]).collect();
        assert_eq!(zeros.len(), 1);
        assert_eq!(zeros[0].tail, 0);
        // [1,2,3]: multi-first gives 1*2=2, 2*3=6... splits differ.
        let mixed: Vec<i64> = space
            .iter()
            .filter(|c| c.digits == [1, 2, 3])
            .map(|c| c.tail)
            .collect();
        assert!(mixed.contains(&6), "{mixed:?}"); // add,add and multi,multi both reach 6
        assert!(mixed.contains(&9), "{mixed:?}"); // add then multi: 3*3
    }

    #[test]
    fn monotone_lists_are_strict() {
        let inc = monotone_space(true, &[3], DigitLayout::TagLast);
        assert_eq!(inc.len(), 120);
        for c in &inc {
            assert!(c.digits.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(c.tail, 0);
        }
        let dec = monotone_space(false, &[3, 4, 5], DigitLayout::TagFirst);
        assert_eq!(dec.len(), 582);
        for c in &dec {
            assert!(c.digits.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn near_miss_moves_one_slot() {
        let case = DigitCase {
            digits: vec![2, 3, 4],
            tail: 9,
            layout: DigitLayout::ResultLast,
        };
        let mut rng = stream_rng(1, 0);
        for round in 0..100 {
            let kind = round % NEAR_MISS_KINDS;
            let m = near_miss(&case, kind, &mut rng).unwrap();
            let d = crate::case::edit_distance(
                &crate::case::CaseData::Digits(case.clone()),
                &crate::case::CaseData::Digits(m.clone()),
            );
            assert_eq!(d, Some(1));
            if kind == 0 {
                assert!((m.tail - case.tail).abs() <= 3 && (0..=9).contains(&m.tail));
            }
        }
    }

    #[test]
    fn tag_shift_stays_in_digit_range() {
        let case = DigitCase {
            digits: vec![0, 1, 2],
            tail: 0,
            layout: DigitLayout::TagLast,
        };
        let mut rng = stream_rng(2, 0);
        for _ in 0..50 {
            let m = near_miss(&case, 0, &mut rng).unwrap();
            assert!((1..=3).contains(&m.tail));
        }
    }
}
